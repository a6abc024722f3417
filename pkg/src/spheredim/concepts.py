"""Finite concept classes and shattering-based dimension computations.

A concept class is a duplicate-free list of hypotheses, each a vector over
{-, +} (total) or {-, +, *} (partial, with * read as "undefined") on a finite
domain of n points.  Hypotheses are stored as fixed-width bit pairs: a mask of
'+' positions and a mask of defined positions, so that pattern checks over a
point subset S reduce to word operations on masked integers.

Four dimensions are computed here.  A set S is shattered when every sign
pattern on S is realized by some hypothesis, and antipodally shattered when
every pattern is realized up to a global sign flip.  The primal dimensions are
the largest sizes of such sets; the dual dimensions are the primal ones of the
dual class (domain and hypotheses swapped).  All searches enumerate subsets in
increasing size and exit early, which is sound because both shattering notions
are downward closed.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

ALPHABET = {"-", "+", "*"}

DEFAULT_SEARCH_BUDGET = 10**8
DEFAULT_PRODUCT_CAP = 1 << 20
FAMILY_CUBE_MAX = 20
FAMILY_UNIVERSAL_MAX = 20
CANONICAL_FORM_MAX_DOMAIN = 8


class ClassFormatError(ValueError):
    """A class file or hypothesis literal violates the format invariants."""


class CapExceededError(RuntimeError):
    """A configured size cap or search budget was exceeded."""


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def mask_of(indices: Iterable[int]) -> int:
    out = 0
    for i in indices:
        out |= 1 << i
    return out


@dataclass(frozen=True, order=True)
class PartialHypothesis:
    """A vector over {-, +, *} of length ``n``.

    ``plus`` holds the '+' positions and ``defined`` the non-'*' positions;
    entries outside ``defined`` are undefined.  The extension order h1 <= h2
    holds when h2 agrees with h1 on all of h1's support.
    """

    n: int
    plus: int
    defined: int

    def __post_init__(self) -> None:
        full = (1 << self.n) - 1
        if self.defined & ~full or self.plus & ~self.defined:
            raise ClassFormatError("hypothesis masks out of range")

    @classmethod
    def from_string(cls, text: str) -> "PartialHypothesis":
        plus = 0
        defined = 0
        for i, ch in enumerate(text):
            if ch not in ALPHABET:
                raise ClassFormatError(f"illegal character {ch!r} in hypothesis")
            if ch != "*":
                defined |= 1 << i
                if ch == "+":
                    plus |= 1 << i
        return cls(len(text), plus, defined)

    @classmethod
    def total(cls, n: int, plus: int) -> "PartialHypothesis":
        return cls(n, plus, (1 << n) - 1)

    def __str__(self) -> str:
        out = []
        for i in range(self.n):
            bit = 1 << i
            if not self.defined & bit:
                out.append("*")
            else:
                out.append("+" if self.plus & bit else "-")
        return "".join(out)

    @property
    def is_total(self) -> bool:
        return self.defined == (1 << self.n) - 1

    @property
    def support_mask(self) -> int:
        return self.defined

    def support(self) -> tuple[int, ...]:
        return tuple(bits(self.defined))

    @property
    def dimension(self) -> int:
        """Number of undefined coordinates, d(h) = n - |supp(h)|."""
        return self.n - popcount(self.defined)

    def value(self, x: int) -> str:
        bit = 1 << x
        if not self.defined & bit:
            return "*"
        return "+" if self.plus & bit else "-"

    def extends(self, other: "PartialHypothesis") -> bool:
        """True when self >= other, i.e. self agrees with other on supp(other)."""
        if self.n != other.n:
            raise ValueError("length mismatch")
        return (other.defined & ~self.defined) == 0 and (
            (self.plus ^ other.plus) & other.defined
        ) == 0

    def negate(self) -> "PartialHypothesis":
        return PartialHypothesis(self.n, self.defined & ~self.plus, self.defined)

    def restrict(self, points: Sequence[int]) -> "PartialHypothesis":
        """Project onto the given points, reindexed in the given order."""
        plus = 0
        defined = 0
        for j, x in enumerate(points):
            bit = 1 << x
            if self.defined & bit:
                defined |= 1 << j
                if self.plus & bit:
                    plus |= 1 << j
        return PartialHypothesis(len(points), plus, defined)


@dataclass(frozen=True)
class ConceptClass:
    """A nonempty, duplicate-free, equal-length list of hypotheses."""

    domain_size: int
    hypotheses: tuple[PartialHypothesis, ...]

    def __post_init__(self) -> None:
        if not self.hypotheses:
            raise ClassFormatError("a concept class must be nonempty")
        seen = set()
        for h in self.hypotheses:
            if h.n != self.domain_size:
                raise ClassFormatError("ragged rows: hypothesis lengths differ")
            key = (h.plus, h.defined)
            if key in seen:
                raise ClassFormatError(f"duplicate hypothesis {h}")
            seen.add(key)

    @classmethod
    def from_strings(cls, rows: Iterable[str]) -> "ConceptClass":
        hyps = tuple(PartialHypothesis.from_string(r) for r in rows)
        if not hyps:
            raise ClassFormatError("a concept class must be nonempty")
        return cls(hyps[0].n, hyps)

    @property
    def is_partial(self) -> bool:
        return any(not h.is_total for h in self.hypotheses)

    @property
    def size(self) -> int:
        return len(self.hypotheses)

    def __len__(self) -> int:
        return len(self.hypotheses)

    def rows(self) -> tuple[str, ...]:
        return tuple(str(h) for h in self.hypotheses)

    def require_total(self, op: str) -> None:
        if self.is_partial:
            raise ClassFormatError(f"{op} requires a total class")

    def restrict(self, points: Sequence[int], dedupe: bool = False) -> "ConceptClass":
        """Restriction to a point sequence; duplicates dropped when asked."""
        out: list[PartialHypothesis] = []
        seen: set[tuple[int, int]] = set()
        for h in self.hypotheses:
            r = h.restrict(points)
            key = (r.plus, r.defined)
            if key in seen:
                if dedupe:
                    continue
                raise ClassFormatError("restriction produced duplicate hypotheses")
            seen.add(key)
            out.append(r)
        return ConceptClass(len(points), tuple(out))


def parse_class(text: str) -> ConceptClass:
    """Parse the class file format: one row per line, '#' lines ignored."""
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rows.append(line)
    if not rows:
        raise ClassFormatError("empty class file")
    width = len(rows[0])
    for r in rows:
        if len(r) != width:
            raise ClassFormatError("ragged rows: line lengths differ")
    return ConceptClass.from_strings(rows)


def format_class(cls: ConceptClass) -> str:
    return "\n".join(cls.rows()) + "\n"


def _subset_mask(cls: ConceptClass, S: Iterable[int]) -> int:
    mask = 0
    for x in S:
        if not 0 <= x < cls.domain_size:
            raise IndexError(f"domain index {x} out of range")
        mask |= 1 << x
    return mask


def _patterns_on(cls: ConceptClass, mask: int) -> set[int]:
    """Masked '+' patterns realized on the points of ``mask``.

    Only hypotheses defined on all of ``mask`` contribute a pattern.
    """
    out = set()
    for h in cls.hypotheses:
        if (mask & ~h.defined) == 0:
            out.add(h.plus & mask)
    return out


def shatters(cls: ConceptClass, S: Iterable[int]) -> bool:
    """True iff every sign pattern on S is realized; the empty set qualifies."""
    mask = _subset_mask(cls, S)
    return _shatters_mask(cls, mask)


def _shatters_mask(cls: ConceptClass, mask: int) -> bool:
    k = popcount(mask)
    pats = _patterns_on(cls, mask)
    return len(pats) == 1 << k


def antipodally_shatters(cls: ConceptClass, S: Iterable[int]) -> bool:
    """True iff every pattern on S is realized up to a global sign flip."""
    mask = _subset_mask(cls, S)
    return _antipodally_shatters_mask(cls, mask)


def _antipodally_shatters_mask(cls: ConceptClass, mask: int) -> bool:
    k = popcount(mask)
    pats = _patterns_on(cls, mask)
    covered = set(pats)
    covered.update(mask & ~p for p in pats)
    return len(covered) == 1 << k


def strongly_shatters(cls: ConceptClass, S: Iterable[int]) -> bool:
    """True iff a full discrete cube with free coordinates exactly S lies in the class."""
    cls.require_total("strongly_shatters")
    mask = _subset_mask(cls, S)
    return _strongly_shatters_mask(cls, mask)


def _strongly_shatters_mask(cls: ConceptClass, mask: int) -> bool:
    k = popcount(mask)
    groups: dict[int, int] = {}
    target = 1 << k
    for h in cls.hypotheses:
        key = h.plus & ~mask
        c = groups.get(key, 0) + 1
        if c == target:
            return True
        groups[key] = c
    return False


def _monotone_family(
    cls: ConceptClass, predicate, max_size: Optional[int] = None
) -> list[list[int]]:
    """Levels of a downward-closed family of point subsets, found by BFS.

    ``predicate(mask)`` must be monotone (true on subsets of true sets).
    Level k lists the masks of the qualifying k-subsets in lexicographic
    order; the search stops at the first empty level.
    """
    n = cls.domain_size
    limit = n if max_size is None else min(n, max_size)
    levels: list[list[int]] = [[0]]
    current = [0]
    size = 0
    while size < limit and current:
        nxt = []
        prev = set(current)
        for smask in current:
            top = smask.bit_length()
            for x in range(top, n):
                cand = smask | (1 << x)
                if any((cand & ~(1 << y)) not in prev for y in bits(cand)):
                    continue
                if predicate(cand):
                    nxt.append(cand)
        nxt.sort()
        if not nxt:
            break
        levels.append(nxt)
        current = nxt
        size += 1
    return levels


def shattered_family(cls: ConceptClass) -> list[list[int]]:
    """All shattered subsets, grouped by size (the family shatter(H))."""
    return _monotone_family(cls, lambda m: _shatters_mask(cls, m))


def strongly_shattered_family(cls: ConceptClass) -> list[list[int]]:
    cls.require_total("strongly_shattered_family")
    return _monotone_family(cls, lambda m: _strongly_shatters_mask(cls, m))


def dual_class(cls: ConceptClass) -> tuple[ConceptClass, tuple[int, ...]]:
    """The dual class, with duplicate columns collapsed.

    Returns the dual together with the collapse map sending each original
    domain point to the index of its dual hypothesis.
    """
    cls.require_total("dual_class")
    m = len(cls.hypotheses)
    columns: list[PartialHypothesis] = []
    index_of: dict[int, int] = {}
    collapse = []
    for x in range(cls.domain_size):
        col = 0
        for j, h in enumerate(cls.hypotheses):
            if h.plus & (1 << x):
                col |= 1 << j
        if col not in index_of:
            index_of[col] = len(columns)
            columns.append(PartialHypothesis.total(m, col))
        collapse.append(index_of[col])
    return ConceptClass(m, tuple(columns)), tuple(collapse)


class DimensionVariant(enum.Enum):
    PRIMAL = "primal"
    DUAL = "dual"
    PRIMAL_ANTIPODAL = "primal_antipodal"
    DUAL_ANTIPODAL = "dual_antipodal"


def max_shattered_set(cls: ConceptClass, antipodal: bool = False) -> int:
    """Lexicographically least maximum-size (antipodally) shattered set, as a mask."""
    pred = _antipodally_shatters_mask if antipodal else _shatters_mask
    levels = _monotone_family(cls, lambda m: pred(cls, m))
    return min(levels[-1], key=lambda m: tuple(bits(m)))


def dimension(cls: ConceptClass, variant: DimensionVariant) -> int:
    """The requested VC-type dimension of a total, nonempty class."""
    cls.require_total("dimension")
    if variant is DimensionVariant.PRIMAL:
        return popcount(max_shattered_set(cls))
    if variant is DimensionVariant.PRIMAL_ANTIPODAL:
        return popcount(max_shattered_set(cls, antipodal=True))
    dual, _ = dual_class(cls)
    if variant is DimensionVariant.DUAL:
        return popcount(max_shattered_set(dual))
    return popcount(max_shattered_set(dual, antipodal=True))


def vc_dimension(cls: ConceptClass) -> int:
    return dimension(cls, DimensionVariant.PRIMAL)


def dual_antipodal_witnesses(
    cls: ConceptClass, hyp_indices: Sequence[int]
) -> Optional[dict[int, tuple[int, bool]]]:
    """Witness points for the dual antipodal shattering of a hypothesis set.

    For every dual pattern on the chosen hypotheses (a mask over positions of
    ``hyp_indices``) the returned dict gives a pair (point, positively) where
    the column at the point equals the pattern (positively=True) or its
    negation.  Returns None when some pattern has no witness, i.e. the set is
    not dually antipodally shattered.  Witness points are the least possible,
    scanning the domain in index order.
    """
    k = len(hyp_indices)
    hyps = [cls.hypotheses[i] for i in hyp_indices]
    found: dict[int, tuple[int, bool]] = {}
    full = (1 << k) - 1
    for x in range(cls.domain_size):
        bit = 1 << x
        col = 0
        for j, h in enumerate(hyps):
            if h.plus & bit:
                col |= 1 << j
        if col not in found:
            found[col] = (x, True)
        neg = full & ~col
        if neg not in found:
            found[neg] = (x, False)
        if len(found) == 1 << k:
            break
    if len(found) != 1 << k:
        return None
    return found


def product_class(
    a: ConceptClass, b: ConceptClass, cap: int = DEFAULT_PRODUCT_CAP
) -> ConceptClass:
    """The product class on the disjoint concatenation of the two domains."""
    a.require_total("product_class")
    b.require_total("product_class")
    if len(a) * len(b) > cap:
        raise CapExceededError(
            f"product size {len(a) * len(b)} exceeds cap {cap}"
        )
    n = a.domain_size + b.domain_size
    shift = a.domain_size
    full = (1 << n) - 1
    hyps = []
    for ha in a.hypotheses:
        for hb in b.hypotheses:
            hyps.append(PartialHypothesis(n, ha.plus | (hb.plus << shift), full))
    return ConceptClass(n, tuple(hyps))


def power_class(cls: ConceptClass, m: int, cap: int = DEFAULT_PRODUCT_CAP) -> ConceptClass:
    """m-fold product power of a class."""
    if m < 1:
        raise ValueError("power must be >= 1")
    out = cls
    for _ in range(m - 1):
        out = product_class(out, cls, cap=cap)
    return out


def family_class(name: str, n: int, extra: Optional[int] = None) -> ConceptClass:
    """Canonical generators for the named class families.

    cube(n): all 2^n hypotheses on n points.
    universal(n): n indicator hypotheses on the 2^n subsets of [n].
    universal_plus(n): universal(n) plus the all-minus and all-plus hypotheses.
    threshold(d): d+1 hypotheses on d points, h_i positive on the first i points.
    subsets_leq(d): indicators of all subsets of size <= d of a (d+1)-point set.
    """
    if n < 1:
        raise ValueError("family parameter must be >= 1")
    if name == "cube":
        if n > FAMILY_CUBE_MAX:
            raise CapExceededError(f"cube cap is n <= {FAMILY_CUBE_MAX}")
        hyps = tuple(
            PartialHypothesis.total(n, _reversed_bits(i, n)) for i in range(1 << n)
        )
        return ConceptClass(n, hyps)
    if name in ("universal", "universal_plus"):
        if n > FAMILY_UNIVERSAL_MAX:
            raise CapExceededError(f"universal cap is n <= {FAMILY_UNIVERSAL_MAX}")
        size = 1 << n
        hyps = []
        for i in range(n):
            plus = 0
            for s in range(size):
                if s & (1 << i):
                    plus |= 1 << s
            hyps.append(PartialHypothesis.total(size, plus))
        if name == "universal_plus":
            hyps.append(PartialHypothesis.total(size, 0))
            hyps.append(PartialHypothesis.total(size, (1 << size) - 1))
        return ConceptClass(size, tuple(hyps))
    if name == "threshold":
        hyps = tuple(
            PartialHypothesis.total(n, (1 << i) - 1) for i in range(n + 1)
        )
        return ConceptClass(n, hyps)
    if name == "subsets_leq":
        d = n
        width = d + 1
        full = (1 << width) - 1
        hyps = tuple(
            PartialHypothesis.total(width, _reversed_bits(i, width))
            for i in range(1 << width)
            if _reversed_bits(i, width) != full
        )
        return ConceptClass(width, hyps)
    raise ValueError(f"unknown family {name!r}")


def _reversed_bits(i: int, n: int) -> int:
    """Reindex so that the leftmost string position is the most significant bit."""
    out = 0
    for j in range(n):
        if i & (1 << (n - 1 - j)):
            out |= 1 << j
    return out


def verify_class_leq(
    a: ConceptClass,
    b: ConceptClass,
    phi: Sequence[int],
    sigma: Sequence[int],
) -> bool:
    """Check sigma(h)(phi(x)) = h(x) for all h in a and x in its domain."""
    a.require_total("verify_class_leq")
    b.require_total("verify_class_leq")
    if len(phi) != a.domain_size or len(sigma) != len(a):
        raise ValueError("map sizes do not match the class")
    for x in phi:
        if not 0 <= x < b.domain_size:
            raise IndexError("phi maps outside the target domain")
    for j in sigma:
        if not 0 <= j < len(b):
            raise IndexError("sigma maps outside the target class")
    for i, h in enumerate(a.hypotheses):
        img = b.hypotheses[sigma[i]]
        for x in range(a.domain_size):
            if bool(h.plus & (1 << x)) != bool(img.plus & (1 << phi[x])):
                return False
    return True


def search_class_leq(
    a: ConceptClass, b: ConceptClass, budget: int = DEFAULT_SEARCH_BUDGET
) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Brute-force search for maps witnessing a <= b, lexicographically first.

    The a-priori search space size |X_b|^|X_a| * |H_b|^|H_a| must stay within
    ``budget``; larger instances raise CapExceededError, which is distinct
    from a completed search finding nothing.
    """
    a.require_total("search_class_leq")
    b.require_total("search_class_leq")
    space = (b.domain_size ** a.domain_size) * (len(b) ** len(a))
    if space > budget:
        raise CapExceededError(f"search space {space} exceeds budget {budget}")

    na, nb = a.domain_size, b.domain_size

    def column(cls: ConceptClass, x: int, hyp_indices: Sequence[int]) -> int:
        col = 0
        for j, i in enumerate(hyp_indices):
            if cls.hypotheses[i].plus & (1 << x):
                col |= 1 << j
        return col

    def candidates_exist(sigma_prefix: list[int]) -> bool:
        # every a-point must still have a compatible image point
        idx = list(range(len(sigma_prefix)))
        for x in range(na):
            want = column(a, x, idx) & ((1 << len(sigma_prefix)) - 1)
            ok = False
            for z in range(nb):
                if column(b, z, sigma_prefix) == want:
                    ok = True
                    break
            if not ok:
                return False
        return True

    def extend(sigma_prefix: list[int]) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
        if len(sigma_prefix) == len(a):
            phi = []
            for x in range(na):
                want = column(a, x, range(len(a)))
                z_found = None
                for z in range(nb):
                    if column(b, z, sigma_prefix) == want:
                        z_found = z
                        break
                if z_found is None:
                    return None
                phi.append(z_found)
            return tuple(phi), tuple(sigma_prefix)
        for j in range(len(b)):
            sigma_prefix.append(j)
            if candidates_exist(sigma_prefix):
                got = extend(sigma_prefix)
                if got is not None:
                    return got
            sigma_prefix.pop()
        return None

    return extend([])


def class_canonical_form(cls: ConceptClass) -> tuple[tuple[int, ...], int]:
    """Canonical form under domain permutation and hypothesis reordering.

    Minimizes the sorted tuple of '+' masks over all domain permutations;
    capped at small domains since the search is factorial.
    """
    cls.require_total("class_canonical_form")
    n = cls.domain_size
    if n > CANONICAL_FORM_MAX_DOMAIN:
        raise CapExceededError(
            f"canonical form cap is n <= {CANONICAL_FORM_MAX_DOMAIN}"
        )
    best: Optional[tuple[int, ...]] = None
    for perm in itertools.permutations(range(n)):
        rows = []
        for h in cls.hypotheses:
            m = 0
            for j, x in enumerate(perm):
                if h.plus & (1 << x):
                    m |= 1 << j
            rows.append(m)
        cand = tuple(sorted(rows))
        if best is None or cand < best:
            best = cand
    assert best is not None
    return best, n


def classes_equivalent(a: ConceptClass, b: ConceptClass) -> bool:
    """Equality up to domain relabeling and hypothesis reordering."""
    if a.domain_size != b.domain_size or len(a) != len(b):
        return False
    return class_canonical_form(a) == class_canonical_form(b)
