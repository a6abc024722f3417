"""Extremal classes, cubical complexes, collapsibility, low-VC classification.

A finite total class is extremal when it meets Pajor's inequality |H| <=
|shatter(H)| with equality; equivalently, every shattered set is strongly
shattered.  The discrete cubes of a class (partial hypotheses whose full
completion cube lies inside the class) form a cubical complex whose dimension
equals VC for extremal classes; its barycentric subdivision is the order
complex of the cube poset and, away from the full binary cube, embeds as a
full subcomplex of the subdivided realizable complex.

Collapsibility is certified constructively: a free face is a cube with exactly
one proper coface in the current complex, and an elementary collapse removes
the pair.  A certificate is a collapse sequence ending at a single vertex,
found by greedy ordering with backtracking under a node budget.

Classes of VC at most 1 are classified into four mutually exclusive buckets:
a singleton; threshold-like (a subclass of thresholds after a per-point sign
flip, with the flip and order returned as a verified certificate); VC=1 but
not threshold-like, witnessed by a verified hexagon (a 1-sphere) in the
antipodal subcomplex; or VC >= 2 with a shattered pair.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from typing import Optional, Union

from spheredim.concepts import (
    CapExceededError,
    ConceptClass,
    DimensionVariant,
    PartialHypothesis,
    bits,
    dimension,
    mask_of,
    popcount,
    shattered_family,
    strongly_shattered_family,
    _shatters_mask,
)
from spheredim.complexes import SimplicialComplex
from spheredim.spheres import (
    SphereWitness,
    WitnessError,
    delta_ant,
    make_barycentric_boundary,
    verify_witness,
)

DEFAULT_EXTREMAL_CAP = 16
DEFAULT_CUBE_CAP = 4096
DEFAULT_COLLAPSE_BUDGET = 200_000


@dataclass(frozen=True)
class ExtremalityReport:
    size: int
    shattered_count: int
    extremal: bool


def is_extremal(cls: ConceptClass, cap: int = DEFAULT_EXTREMAL_CAP) -> ExtremalityReport:
    """Pajor counts and the equality flag."""
    cls.require_total("is_extremal")
    if cls.domain_size > cap:
        raise CapExceededError(f"extremality cap is {cap} domain points")
    count = sum(len(level) for level in shattered_family(cls))
    return ExtremalityReport(len(cls), count, len(cls) == count)


@dataclass(frozen=True)
class CubicalComplex:
    """All discrete cubes of a class, closed under subcubes.

    ``cubes`` holds every cube as a partial hypothesis, including the
    0-cubes, which are exactly the concepts when built from a class.
    """

    cubes: tuple[PartialHypothesis, ...]
    cls: Optional[ConceptClass] = None

    def __post_init__(self) -> None:
        have = {(c.plus, c.defined) for c in self.cubes}
        if len(have) != len(self.cubes):
            raise ValueError("duplicate cubes")
        for c in self.cubes:
            for facet in _facets(c):
                if (facet.plus, facet.defined) not in have:
                    raise ValueError(f"cube {c} is missing its facet {facet}")

    def dim(self) -> int:
        return max(c.dimension for c in self.cubes)

    def counts(self) -> tuple[int, ...]:
        out: dict[int, int] = {}
        for c in self.cubes:
            out[c.dimension] = out.get(c.dimension, 0) + 1
        return tuple(out.get(d, 0) for d in range(max(out) + 1))

    def rows(self) -> tuple[str, ...]:
        return tuple(str(c) for c in self.cubes)

    @classmethod
    def from_strings(cls_, rows, source: Optional[ConceptClass] = None) -> "CubicalComplex":
        cubes = tuple(
            sorted(
                (PartialHypothesis.from_string(r) for r in rows),
                key=lambda c: (c.dimension, str(c)),
            )
        )
        return cls_(cubes, source)


def _facets(c: PartialHypothesis) -> list[PartialHypothesis]:
    """Subcubes of codimension one: fix one free coordinate each way."""
    out = []
    free = ((1 << c.n) - 1) & ~c.defined
    for x in bits(free):
        bit = 1 << x
        out.append(PartialHypothesis(c.n, c.plus, c.defined | bit))
        out.append(PartialHypothesis(c.n, c.plus | bit, c.defined | bit))
    return out


def cubical_complex(cls: ConceptClass, cap: int = DEFAULT_CUBE_CAP) -> CubicalComplex:
    """All partial hypotheses whose completion cube lies inside the class."""
    cls.require_total("cubical_complex")
    n = cls.domain_size
    full = (1 << n) - 1
    cubes: list[PartialHypothesis] = []
    for level in strongly_shattered_family(cls):
        for smask in level:
            target = 1 << popcount(smask)
            groups: dict[int, int] = defaultdict(int)
            for h in cls.hypotheses:
                groups[h.plus & ~smask] += 1
            for key, count in sorted(groups.items()):
                if count == target:
                    cubes.append(PartialHypothesis(n, key, full & ~smask))
                    if len(cubes) > cap:
                        raise CapExceededError(f"cube cap {cap} exceeded")
    cubes.sort(key=lambda c: (c.dimension, str(c)))
    return CubicalComplex(tuple(cubes), cls)


def cubical_barycentric(cc: CubicalComplex) -> SimplicialComplex:
    """Order complex of the cube poset: vertices are cubes, simplices chains.

    Maximal simplices are the facet-descending paths from the inclusion-
    maximal cubes down to vertices.
    """
    order = sorted(cc.cubes, key=lambda c: (c.dimension, str(c)))
    index = {(c.plus, c.defined): i for i, c in enumerate(order)}
    labels = tuple(str(c) for c in order)
    have = set(index)

    top = [
        c
        for c in order
        if not any(
            d != c and c.extends(d) for d in cc.cubes
        )
    ]
    maximal: set[int] = set()

    def descend(c: PartialHypothesis, chain_mask: int) -> None:
        if c.dimension == 0:
            maximal.add(chain_mask)
            return
        for facet in _facets(c):
            descend(facet, chain_mask | (1 << index[(facet.plus, facet.defined)]))

    for c in top:
        descend(c, 1 << index[(c.plus, c.defined)])
    return SimplicialComplex(labels, tuple(sorted(maximal)))


def realizable_partial(cls: ConceptClass, h: PartialHypothesis) -> bool:
    """True when some concept of the class extends h."""
    return any(g.extends(h) for g in cls.hypotheses)


def restriction(cls: ConceptClass, h: PartialHypothesis) -> ConceptClass:
    """The subclass of concepts extending h, on the same domain.

    Restricting an extremal class at a realizable partial hypothesis yields
    an extremal class again; this is verified when the input is small enough
    to test for extremality.
    """
    cls.require_total("restriction")
    if h.n != cls.domain_size:
        raise ValueError("length mismatch")
    kept = tuple(g for g in cls.hypotheses if g.extends(h))
    if not kept:
        raise WitnessError(f"partial hypothesis {h} is not realizable")
    out = ConceptClass(cls.domain_size, kept)
    try:
        if is_extremal(cls).extremal and not is_extremal(out).extremal:
            raise AssertionError(
                f"restriction of an extremal class at {h} is not extremal"
            )
    except CapExceededError:
        pass
    return out


@dataclass(frozen=True)
class EmbeddingReport:
    reversed_case: bool
    ok: bool
    cube_vertices: int
    chains_checked: int
    detail: str


def subdivided_realizable_complex(cls: ConceptClass, cap: int = 10**6) -> SimplicialComplex:
    """Order complex of the realizable partial hypotheses with nonempty
    support: one vertex per such hypothesis, simplices are extension chains.

    Maximal simplices are the support-dropping paths from a concept down to a
    single defined point.
    """
    cls.require_total("subdivided_realizable_complex")
    n = cls.domain_size
    verts: set[tuple[int, int]] = set()
    for h in cls.hypotheses:
        for defined in _submasks(h.defined):
            if defined:
                verts.add((h.plus & defined, defined))
                if len(verts) > cap:
                    raise CapExceededError("partial hypothesis cap exceeded")
    order = sorted(verts, key=lambda v: (popcount(v[1]), str(PartialHypothesis(n, *v))))
    index = {v: i for i, v in enumerate(order)}
    labels = tuple(str(PartialHypothesis(n, *v)) for v in order)

    maximal: set[int] = set()

    def descend(plus: int, defined: int, chain_mask: int) -> None:
        if popcount(defined) == 1:
            maximal.add(chain_mask)
            return
        for x in bits(defined):
            d2 = defined & ~(1 << x)
            descend(plus & d2, d2, chain_mask | (1 << index[(plus & d2, d2)]))

    total = len(cls) * _perm_count(n)
    if total > cap:
        raise CapExceededError("chain enumeration cap exceeded")
    for h in cls.hypotheses:
        descend(h.plus, h.defined, 1 << index[(h.plus, h.defined)])
    return SimplicialComplex(labels, tuple(sorted(maximal)))


def _perm_count(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def full_subcomplex_embedding_check(cls: ConceptClass) -> EmbeddingReport:
    """Check the embedding between the subdivided cubical complex and the
    subdivided realizable complex of an extremal class.

    Away from the full binary cube, every cube is a realizable partial
    hypothesis with nonempty support, every chain of cubes is a simplex of
    the subdivided realizable complex, and fullness holds: any simplex of the
    latter whose vertices are all cube labels is a chain of cubes.  For the
    full cube the containment reverses: every realizable partial hypothesis
    with nonempty support is a cube.
    """
    if not is_extremal(cls).extremal:
        raise WitnessError("embedding check requires an extremal class")
    n = cls.domain_size
    cc = cubical_complex(cls)
    if len(cls) == 1 << n:
        # full binary cube: check every realizable nonempty-support partial
        # hypothesis is a cube
        count = 0
        have = {(c.plus, c.defined) for c in cc.cubes}
        for defined_mask in range(1, 1 << n):
            for plus in _submasks(defined_mask):
                h = PartialHypothesis(n, plus, defined_mask)
                if realizable_partial(cls, h):
                    count += 1
                    if (h.plus, h.defined) not in have:
                        return EmbeddingReport(True, False, count, 0, f"{h} not a cube")
        return EmbeddingReport(
            True, True, count, 0,
            "reversed case: the subdivided realizable complex sits inside the cube poset",
        )

    sub = cubical_barycentric(cc)
    delta1 = subdivided_realizable_complex(cls)
    delta_index = delta1.vertex_index()
    sub_index = sub.vertex_index()

    # every cube label is a vertex of the subdivided realizable complex
    for c in cc.cubes:
        if c.defined == 0 or str(c) not in delta_index:
            return EmbeddingReport(
                False, False, len(cc.cubes), 0, f"cube {c} is not a realizable vertex"
            )

    # every chain of cubes is a simplex there
    chains = 0
    for s in sub.maximal:
        image = mask_of(delta_index[sub.vertices[i]] for i in bits(s))
        if not delta1.has_simplex(image):
            return EmbeddingReport(
                False, False, len(cc.cubes), chains,
                "a chain of cubes is not realizable as a simplex",
            )
        chains += 1

    # fullness: simplices of the realizable order complex spanned by cube
    # labels must be chains of cubes
    cube_labels = set(sub.vertices)
    for s in delta1.all_simplices():
        members = [delta1.vertices[i] for i in bits(s)]
        if all(v in cube_labels for v in members):
            image = mask_of(sub_index[v] for v in members)
            if not sub.has_simplex(image):
                return EmbeddingReport(
                    False, False, len(cc.cubes), chains,
                    f"fullness violated on {members}",
                )
    return EmbeddingReport(
        False, True, len(cc.cubes), chains, "full subcomplex embedding verified"
    )


def _submasks(mask: int):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def collapse_certificate(
    cc: CubicalComplex,
    cube_cap: int = DEFAULT_CUBE_CAP,
    node_budget: int = DEFAULT_COLLAPSE_BUDGET,
) -> Optional[list[tuple[str, str]]]:
    """A sequence of elementary collapses down to a single vertex, or None.

    A free face has exactly one proper coface; greedy order (free face
    dimension, then label) with backtracking.  Exhausting the node budget
    raises, which is distinct from a completed search finding no sequence.
    """
    if len(cc.cubes) > cube_cap:
        raise CapExceededError(f"collapse cube cap is {cube_cap}")
    state = frozenset(cc.cubes)
    dead: set[frozenset] = set()
    moves: list[tuple[str, str]] = []
    nodes = 0

    def free_pairs(st: frozenset) -> list[tuple[PartialHypothesis, PartialHypothesis]]:
        out = []
        for c in st:
            cofaces = [d for d in st if d is not c and c != d and c.extends(d)]
            if len(cofaces) == 1:
                out.append((c, cofaces[0]))
        out.sort(key=lambda p: (p[0].dimension, str(p[0])))
        return out

    def dfs(st: frozenset) -> bool:
        nonlocal nodes
        if len(st) == 1:
            return next(iter(st)).dimension == 0
        if st in dead:
            return False
        nodes += 1
        if nodes > node_budget:
            raise CapExceededError(f"collapse node budget {node_budget} exceeded")
        for c, d in free_pairs(st):
            moves.append((str(c), str(d)))
            if dfs(st - {c, d}):
                return True
            moves.pop()
        dead.add(st)
        return False

    if dfs(state):
        return moves
    return None


# --- low-VC classification ----------------------------------------------


@dataclass(frozen=True)
class Singleton:
    pass


@dataclass(frozen=True)
class ThresholdLike:
    """Certificate: flipping the signs at ``flip_mask`` makes every concept a
    plus-prefix of ``order``."""

    flip_mask: int
    order: tuple[int, ...]


@dataclass(frozen=True)
class Vc1NonThreshold:
    witness: SphereWitness


@dataclass(frozen=True)
class Vc2Plus:
    shattered_pair: tuple[int, int]


LowVcClassification = Union[Singleton, ThresholdLike, Vc1NonThreshold, Vc2Plus]


def verify_threshold_certificate(
    cls: ConceptClass, flip_mask: int, order: tuple[int, ...]
) -> bool:
    """Check that every flipped concept is positive exactly on a prefix."""
    if sorted(order) != list(range(cls.domain_size)):
        return False
    for h in cls.hypotheses:
        flipped = h.plus ^ flip_mask
        seen_minus = False
        for x in order:
            if flipped & (1 << x):
                if seen_minus:
                    return False
            else:
                seen_minus = True
    return True


def _hexagon_witness(
    cls: ConceptClass, flip_mask: int, cycle: list[tuple[int, int]]
) -> SphereWitness:
    """Build the 1-sphere witness from six (point, sign) pairs in flipped
    coordinates, listed cyclically with opposite vertices antipodal."""
    target = delta_ant(cls)
    if target.points is None:
        raise WitnessError("target carries no point labels")
    index = {p: i for i, p in enumerate(target.points)}
    unflipped = [
        (x, -s if flip_mask & (1 << x) else s) for x, s in cycle
    ]
    template = make_barycentric_boundary(1)
    # template vertex order is {0},{1},{2},{01},{02},{12}; the hexagon cycle
    # visits them as {0},{01},{1},{12},{2},{02}
    cycle_position = (0, 2, 4, 1, 5, 3)
    vmap = tuple(index[unflipped[pos]] for pos in cycle_position)
    witness = SphereWitness(template, vmap, target, cls, embedded=True)
    report = verify_witness(witness)
    if not report:
        raise WitnessError(f"hexagon failed verification: {report.detail}")
    return witness


def classify_low_vc(cls: ConceptClass) -> LowVcClassification:
    """Classify a total class per its spherical dimension regime.

    Mutually exclusive outcomes: Singleton; ThresholdLike with a verified
    (flip, order) certificate; Vc1NonThreshold with a verified hexagon
    witness; Vc2Plus with a shattered pair.
    """
    cls.require_total("classify_low_vc")
    n = cls.domain_size
    m = len(cls)
    if m == 1:
        return Singleton()
    for pair in itertools.combinations(range(n), 2):
        if _shatters_mask(cls, mask_of(pair)):
            return Vc2Plus(pair)

    # VC = 1 from here on.  Flip by the first concept so the all-plus
    # concept is present (no flip when it already is), then quotient
    # equivalent points.
    full_h = (1 << m) - 1
    full_x = (1 << n) - 1
    if any(h.plus == full_x for h in cls.hypotheses):
        flip0 = 0
    else:
        flip0 = full_x & ~cls.hypotheses[0].plus
    columns = []
    for x in range(n):
        col = 0
        for j, h in enumerate(cls.hypotheses):
            if (h.plus ^ flip0) & (1 << x):
                col |= 1 << j
        columns.append(col)
    groups: dict[int, list[int]] = defaultdict(list)
    for x in range(n):
        groups[columns[x]].append(x)
    bottom = groups.pop(full_h, [])  # all-plus columns sit below everything
    reps = sorted(groups, key=lambda c: groups[c][0])

    def leq(cx: int, cz: int) -> bool:
        # x <= z iff (x,-),(z,+) is unrealizable iff P_z is contained in P_x
        return (cz & ~cx) == 0

    incomparable = [
        (a, b)
        for a, b in itertools.combinations(reps, 2)
        if not leq(a, b) and not leq(b, a)
    ]
    if not incomparable:
        chain = sorted(reps, key=lambda c: -popcount(c))
        order = tuple(sorted(bottom)) + tuple(
            x for c in chain for x in sorted(groups[c])
        )
        if not verify_threshold_certificate(cls, flip0, order):
            raise AssertionError("linear order failed threshold verification")
        return ThresholdLike(flip0, order)

    minimal = [c for c in reps if not any(d != c and leq(d, c) for d in reps)]

    def rep_point(c: int) -> int:
        return groups[c][0]

    if len(minimal) >= 3:
        x, z, w = (rep_point(c) for c in minimal[:3])
        cycle = [(x, +1), (z, -1), (w, +1), (x, -1), (z, +1), (w, -1)]
        return Vc1NonThreshold(_hexagon_witness(cls, flip0, cycle))

    if len(minimal) != 2:
        raise AssertionError("incomparable pair with a single minimal element")
    c1, c2 = minimal
    chain1, chain2 = [], []
    for c in reps:
        with1 = leq(c1, c) or leq(c, c1)
        with2 = leq(c2, c) or leq(c, c2)
        if with1 and with2 and c not in (c1, c2):
            # two incomparable minimals with a common upper bound
            z1, z2, x = rep_point(c1), rep_point(c2), rep_point(c)
            cycle = [(x, +1), (z2, +1), (z1, -1), (x, -1), (z2, -1), (z1, +1)]
            return Vc1NonThreshold(_hexagon_witness(cls, flip0, cycle))
        if not with1 and not with2:
            u, z1, z2 = rep_point(c), rep_point(c1), rep_point(c2)
            cycle = [(u, +1), (z1, -1), (z2, +1), (u, -1), (z1, +1), (z2, -1)]
            return Vc1NonThreshold(_hexagon_witness(cls, flip0, cycle))
        (chain1 if with1 else chain2).append(c)

    for part in (chain1, chain2):
        for a, b in itertools.combinations(part, 2):
            if not leq(a, b) and not leq(b, a):
                raise AssertionError("two-chain structure violated under VC=1")

    # flip the second chain and order: first chain ascending, then the
    # second chain from its top element downwards
    chain2_mask = mask_of(x for c in chain2 for x in groups[c])
    flip = flip0 ^ chain2_mask
    ordered1 = sorted(chain1, key=lambda c: -popcount(c))
    ordered2 = sorted(chain2, key=lambda c: popcount(c))
    order = (
        tuple(sorted(bottom))
        + tuple(x for c in ordered1 for x in sorted(groups[c]))
        + tuple(x for c in ordered2 for x in sorted(groups[c]))
    )
    if not verify_threshold_certificate(cls, flip, order):
        raise AssertionError("two-chain order failed threshold verification")
    return ThresholdLike(flip, order)


def vc_extremal_upper(cls: ConceptClass, candidate: ConceptClass) -> Optional[int]:
    """VC of a verified extremal superclass, as an upper bound certificate.

    No search is performed: the candidate must live on the same domain,
    contain every hypothesis of the class, and be extremal.
    """
    cls.require_total("vc_extremal_upper")
    candidate.require_total("vc_extremal_upper")
    if candidate.domain_size != cls.domain_size:
        raise ValueError("domain size mismatch")
    have = {h.plus for h in candidate.hypotheses}
    if any(h.plus not in have for h in cls.hypotheses):
        return None
    if not is_extremal(candidate).extremal:
        return None
    return dimension(candidate, DimensionVariant.PRIMAL)
