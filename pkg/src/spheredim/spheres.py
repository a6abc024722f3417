"""Certified simplicial-sphere templates and equivariant witness maps.

A witness is a pair: a sphere template from a closed family (crosspolytope
boundaries, barycentric boundaries of simplex boundaries, joins, and
barycentric subdivisions of these, each certified by construction) and a
vertex map into the antipodal subcomplex of a class's realizable complex.
Verification checks, in order: the template invariants, simpliciality of the
map on maximal simplices, equivariance on every vertex, and agreement of the
embedded flag with injectivity.  General sphere recognition is deliberately
not attempted.

Lower bounds on the spherical dimension come from three constructions: a
shattered m-set yields a crosspolytope witness of dimension m-1; a dually
antipodally shattered k-set of hypotheses yields a barycentric witness of
dimension k-2; and witnesses for two factors join to a witness for their
product of dimension d1+d2+1.  Sound upper bounds come from the dimension of
the antipodal subcomplex, extremality, the VC<=1 theorem, and the threshold
classification.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from spheredim.concepts import (
    CapExceededError,
    ConceptClass,
    bits,
    dual_antipodal_witnesses,
    dual_class,
    mask_of,
    max_shattered_set,
    popcount,
    product_class,
    shatters,
)
from spheredim.complexes import (
    AntipodalComplex,
    SimplicialComplex,
    antipodal_subcomplex,
    barycentric_subdivision,
    cross_label,
    join_complex,
    realizable_complex,
    subset_label,
)


class WitnessError(ValueError):
    """A witness constructor's precondition failed."""


# --- templates ----------------------------------------------------------


@dataclass(frozen=True)
class CrosspolytopeKind:
    n: int


@dataclass(frozen=True)
class BarycentricBoundaryKind:
    n: int


@dataclass(frozen=True)
class JoinKind:
    parts: tuple["SphereTemplate", ...]


@dataclass(frozen=True)
class SubdividedKind:
    base: "SphereTemplate"
    depth: int


TemplateKind = Union[CrosspolytopeKind, BarycentricBoundaryKind, JoinKind, SubdividedKind]


@dataclass(frozen=True)
class SphereTemplate:
    """A simplicial n-sphere from the certified closed family."""

    kind: TemplateKind
    complex: AntipodalComplex

    @property
    def dimension(self) -> int:
        return _kind_dimension(self.kind)

    def kind_payload(self) -> dict:
        return _kind_payload(self.kind)


def _kind_dimension(kind: TemplateKind) -> int:
    if isinstance(kind, CrosspolytopeKind):
        return kind.n
    if isinstance(kind, BarycentricBoundaryKind):
        return kind.n
    if isinstance(kind, JoinKind):
        return sum(p.dimension for p in kind.parts) + len(kind.parts) - 1
    return kind.base.dimension


def _kind_payload(kind: TemplateKind) -> dict:
    if isinstance(kind, CrosspolytopeKind):
        return {"kind": "crosspolytope", "n": kind.n}
    if isinstance(kind, BarycentricBoundaryKind):
        return {"kind": "barycentric_boundary", "n": kind.n}
    if isinstance(kind, JoinKind):
        return {"kind": "join", "parts": [p.kind_payload() for p in kind.parts]}
    return {"kind": "subdivided", "base": kind.base.kind_payload(), "depth": kind.depth}


def template_from_payload(payload: dict) -> SphereTemplate:
    kind = payload["kind"]
    if kind == "crosspolytope":
        return make_crosspolytope(payload["n"])
    if kind == "barycentric_boundary":
        return make_barycentric_boundary(payload["n"])
    if kind == "join":
        parts = [template_from_payload(p) for p in payload["parts"]]
        out = parts[0]
        for p in parts[1:]:
            out = join_templates(out, p)
        return out
    if kind == "subdivided":
        return subdivide_template(template_from_payload(payload["base"]), payload["depth"])
    raise ValueError(f"unknown template kind {kind!r}")


def make_crosspolytope(n: int) -> SphereTemplate:
    """Boundary of the (n+1)-dimensional crosspolytope: vertices (i, +-),
    simplices the sign-consistent subsets, antipodality the sign swap."""
    if n < 0:
        raise ValueError("dimension must be >= 0")
    labels = []
    for i in range(n + 1):
        labels.append(cross_label(i, -1))
        labels.append(cross_label(i, +1))
    maximal = []
    for signs in itertools.product((0, 1), repeat=n + 1):
        maximal.append(mask_of(2 * i + s for i, s in enumerate(signs)))
    inv = tuple(i ^ 1 for i in range(2 * (n + 1)))
    complex_ = AntipodalComplex(SimplicialComplex(tuple(labels), tuple(sorted(maximal))), inv)
    return SphereTemplate(CrosspolytopeKind(n), complex_)


def make_barycentric_boundary(n: int) -> SphereTemplate:
    """Barycentric subdivision of the boundary of an (n+1)-simplex: vertices
    are the nontrivial subsets of an (n+2)-set, simplices the chains,
    antipodality the complementation."""
    if n < 0:
        raise ValueError("dimension must be >= 0")
    u = n + 2
    full = (1 << u) - 1
    subsets = sorted(
        (m for m in range(1, full + 1) if m != full),
        key=lambda m: (popcount(m), m),
    )
    index = {m: i for i, m in enumerate(subsets)}
    labels = tuple(subset_label(m) for m in subsets)
    maximal = set()
    for perm in itertools.permutations(range(u)):
        chain = 0
        acc = 0
        for x in perm[:-1]:
            acc |= 1 << x
            chain |= 1 << index[acc]
        maximal.add(chain)
    inv = tuple(index[full & ~m] for m in subsets)
    complex_ = AntipodalComplex(SimplicialComplex(labels, tuple(sorted(maximal))), inv)
    return SphereTemplate(BarycentricBoundaryKind(n), complex_)


def join_templates(a: SphereTemplate, b: SphereTemplate) -> SphereTemplate:
    joined = join_complex(a.complex, b.complex)
    return SphereTemplate(JoinKind((a, b)), joined)


def subdivide_template(t: SphereTemplate, depth: int = 1) -> SphereTemplate:
    if depth < 1:
        raise ValueError("depth must be >= 1")
    c = t.complex
    for _ in range(depth):
        c = barycentric_subdivision(c)
    return SphereTemplate(SubdividedKind(t, depth), c)


def rebuild_template(t: SphereTemplate) -> SphereTemplate:
    """Reconstruct the template from its kind tree alone."""
    return template_from_payload(t.kind_payload())


# --- witnesses ----------------------------------------------------------


@dataclass(frozen=True)
class SphereWitness:
    """A template plus a vertex map into the antipodal subcomplex of ``cls``."""

    template: SphereTemplate
    vertex_map: tuple[int, ...]
    target: AntipodalComplex
    cls: ConceptClass
    embedded: bool

    @property
    def dimension(self) -> int:
        return self.template.dimension


@dataclass(frozen=True)
class WitnessReport:
    ok: bool
    check: Optional[str]
    detail: str
    transcript: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.ok


def _simplex_labels(c: SimplicialComplex, mask: int) -> tuple[str, ...]:
    return tuple(c.vertices[i] for i in bits(mask))


def verify_witness(w: SphereWitness) -> WitnessReport:
    """Run the four witness checks in order, reporting the first violation."""
    lines: list[str] = []

    # (a) template invariants
    try:
        reference = rebuild_template(w.template)
    except Exception as exc:  # malformed kind tree
        return WitnessReport(False, "template", f"kind tree invalid: {exc}", tuple(lines))
    got, want = w.template.complex, reference.complex
    if got != want:
        missing = set(want.complex.maximal) - set(got.complex.maximal)
        extra = set(got.complex.maximal) - set(want.complex.maximal)
        if missing:
            detail = f"missing maximal simplex {_simplex_labels(want.complex, min(missing))}"
        elif extra:
            detail = f"unexpected maximal simplex {_simplex_labels(got.complex, min(extra))}"
        else:
            detail = "vertex set or involution differs from the certified construction"
        return WitnessReport(False, "template", detail, tuple(lines))
    lines.append("template: ok")

    tc = w.template.complex
    n = len(tc.complex.vertices)
    if len(w.vertex_map) != n or any(
        not 0 <= v < len(w.target.complex.vertices) for v in w.vertex_map
    ):
        return WitnessReport(False, "simplicial", "vertex map is not total into the target", tuple(lines))

    # (b) simpliciality on maximal simplices (faces follow by downward closure)
    for s in tc.complex.maximal:
        image = mask_of(w.vertex_map[i] for i in bits(s))
        if not w.target.complex.has_simplex(image):
            detail = f"simplex {_simplex_labels(tc.complex, s)} maps outside the target"
            return WitnessReport(False, "simplicial", detail, tuple(lines))
    lines.append("simplicial: ok")

    # (c) equivariance on every vertex
    for i in range(n):
        if w.vertex_map[tc.involution[i]] != w.target.involution[w.vertex_map[i]]:
            detail = f"vertex {tc.complex.vertices[i]} breaks equivariance"
            return WitnessReport(False, "equivariance", detail, tuple(lines))
    lines.append("equivariance: ok")

    # (d) embedded flag must match injectivity
    injective = len(set(w.vertex_map)) == n
    if injective != w.embedded:
        detail = (
            "map is injective but not flagged embedded"
            if injective
            else "embedded flag set but the map identifies vertices"
        )
        return WitnessReport(False, "embedding", detail, tuple(lines))
    lines.append("embedding: ok")

    return WitnessReport(True, None, "", tuple(lines))


def delta_ant(cls: ConceptClass) -> AntipodalComplex:
    """The antipodal subcomplex of the class's realizable complex."""
    return antipodal_subcomplex(realizable_complex(cls))


def _target_index(target: AntipodalComplex) -> dict[tuple[int, int], int]:
    if target.points is None:
        raise ValueError("target carries no point labels")
    return {p: i for i, p in enumerate(target.points)}


def crosspolytope_witness(
    cls: ConceptClass,
    S: Sequence[int],
    target: Optional[AntipodalComplex] = None,
) -> SphereWitness:
    """Witness of dimension |S|-1 from a shattered set S.

    The restriction of the class to S realizes every pattern, so the vertex
    pairs (x, +-) for x in S span a crosspolytope boundary inside the
    antipodal subcomplex of the full class.
    """
    points = tuple(sorted(S))
    if not points:
        raise WitnessError("the shattered set must be nonempty")
    if not shatters(cls, points):
        raise WitnessError(f"set {points} is not shattered")
    if target is None:
        target = delta_ant(cls)
    template = make_crosspolytope(len(points) - 1)
    index = _target_index(target)
    vmap = []
    for i, x in enumerate(points):
        vmap.append(index[(x, -1)])
        vmap.append(index[(x, +1)])
    witness = SphereWitness(template, tuple(vmap), target, cls, embedded=True)
    report = verify_witness(witness)
    if not report:
        raise WitnessError(f"construction failed verification: {report.detail}")
    return witness


def barycentric_witness(
    cls: ConceptClass,
    hyp_indices: Sequence[int],
    target: Optional[AntipodalComplex] = None,
) -> SphereWitness:
    """Witness of dimension k-2 from a dually antipodally shattered k-set.

    Each nontrivial dual pattern on the chosen hypotheses is realized at a
    witness point, positively or negatively; the subset vertex for a pattern
    maps to that point with the corresponding label.  Chains map to simplices
    because any hypothesis indexed in the smallest subset of the chain
    realizes the whole image.
    """
    hyp_indices = tuple(hyp_indices)
    k = len(hyp_indices)
    if k < 2:
        raise WitnessError("need at least two hypotheses")
    found = dual_antipodal_witnesses(cls, hyp_indices)
    if found is None:
        raise WitnessError(
            f"hypotheses {hyp_indices} are not dually antipodally shattered"
        )
    if target is None:
        target = delta_ant(cls)
    template = make_barycentric_boundary(k - 2)
    index = _target_index(target)
    full = (1 << k) - 1
    subsets = sorted(
        (m for m in range(1, full + 1) if m != full),
        key=lambda m: (popcount(m), m),
    )
    vmap = []
    for pattern in subsets:
        x, positively = found[pattern]
        vmap.append(index[(x, +1 if positively else -1)])
    witness = SphereWitness(template, tuple(vmap), target, cls, embedded=True)
    report = verify_witness(witness)
    if not report:
        raise WitnessError(f"construction failed verification: {report.detail}")
    return witness


def join_witness(a: SphereWitness, b: SphereWitness) -> tuple[SphereWitness, ConceptClass]:
    """Join two witnesses into one for the product class, of dimension
    dim(a) + dim(b) + 1.  Returns the witness together with the product."""
    for w in (a, b):
        if not verify_witness(w):
            raise WitnessError("join requires verified witnesses")
        if w.target.points is None:
            raise WitnessError("join requires class-backed witness targets")
    product = product_class(a.cls, b.cls)
    target = delta_ant(product)
    index = _target_index(target)
    template = join_templates(a.template, b.template)
    shift = a.cls.domain_size
    vmap = []
    for v in a.vertex_map:
        x, s = a.target.points[v]
        vmap.append(index[(x, s)])
    for v in b.vertex_map:
        x, s = b.target.points[v]
        vmap.append(index[(x + shift, s)])
    embedded = a.embedded and b.embedded
    witness = SphereWitness(template, tuple(vmap), target, product, embedded=embedded)
    report = verify_witness(witness)
    if not report:
        raise WitnessError(f"construction failed verification: {report.detail}")
    return witness, product


def transport_witness(
    w: SphereWitness, target_cls: ConceptClass, phi: Sequence[int]
) -> SphereWitness:
    """Carry a witness along a class-order map via (x, y) -> (phi(x), y)."""
    if w.target.points is None:
        raise WitnessError("transport requires a class-backed witness target")
    target = delta_ant(target_cls)
    index = _target_index(target)
    vmap = []
    for v in w.vertex_map:
        x, s = w.target.points[v]
        vmap.append(index[(phi[x], s)])
    embedded = len(set(vmap)) == len(vmap)
    out = SphereWitness(w.template, tuple(vmap), target, target_cls, embedded=embedded)
    report = verify_witness(out)
    if not report:
        raise WitnessError(f"transported witness failed verification: {report.detail}")
    return out


# --- bounds -------------------------------------------------------------


@dataclass(frozen=True)
class BoundCertificate:
    name: str
    value: int
    witness: Optional[SphereWitness] = None


@dataclass(frozen=True)
class SdBounds:
    lower: int
    upper: int
    lower_certificates: tuple[BoundCertificate, ...]
    upper_certificates: tuple[BoundCertificate, ...]

    def certificate_names(self) -> tuple[tuple[str, ...], tuple[str, ...]]:
        return (
            tuple(c.name for c in self.lower_certificates),
            tuple(c.name for c in self.upper_certificates),
        )


def sd_bounds(
    cls: ConceptClass,
    sign_rank_upper: Optional[int] = None,
    extremal_cap: int = 16,
) -> SdBounds:
    """Certified lower and sound upper bounds on the spherical dimension.

    Lower bounds are witnessed: a crosspolytope witness on a maximum
    shattered set, a barycentric witness on a maximum dually antipodally
    shattered hypothesis set, and, for VC=1 classes that do not embed into
    thresholds, the verified hexagon from the classification.  Upper bounds:
    the dimension of the antipodal subcomplex (the coindex of a free complex
    never exceeds its dimension), 2*VC-1 for extremal classes, 1 when VC<=1,
    0 for threshold-like classes, and optionally d-1 from a verified
    d-dimensional sign representation.
    """
    from spheredim import extremal as _extremal

    cls.require_total("sd_bounds")
    ant = delta_ant(cls)
    if ant.is_empty:
        cert = (BoundCertificate("empty antipodal subcomplex", -1),)
        return SdBounds(-1, -1, cert, cert)

    lower_certs: list[BoundCertificate] = []
    smask = max_shattered_set(cls)
    points = tuple(bits(smask))
    w = crosspolytope_witness(cls, points, target=ant)
    lower_certs.append(BoundCertificate("crosspolytope", w.dimension, w))

    vc = len(points)
    dual, _ = dual_class(cls)
    hmask = max_shattered_set(dual, antipodal=True)
    hyps = tuple(bits(hmask))
    if len(hyps) >= 2:
        bw = barycentric_witness(cls, hyps, target=ant)
        lower_certs.append(BoundCertificate("barycentric", bw.dimension, bw))

    upper_certs: list[BoundCertificate] = [
        BoundCertificate("dimension bound", ant.dim())
    ]
    classification = None
    if vc <= 1:
        upper_certs.append(BoundCertificate("low VC bound", 1))
        classification = _extremal.classify_low_vc(cls)
        if isinstance(classification, _extremal.ThresholdLike):
            upper_certs.append(BoundCertificate("threshold classification", 0))
        elif isinstance(classification, _extremal.Vc1NonThreshold):
            lower_certs.append(
                BoundCertificate("hexagon", 1, classification.witness)
            )
    try:
        ext = _extremal.is_extremal(cls, cap=extremal_cap)
        if ext.extremal:
            upper_certs.append(BoundCertificate("extremal bound", 2 * vc - 1))
    except CapExceededError:
        pass
    if sign_rank_upper is not None:
        upper_certs.append(BoundCertificate("sign-rank bound", sign_rank_upper - 1))

    lower = max(c.value for c in lower_certs)
    upper = min(c.value for c in upper_certs)
    if lower > upper:
        raise AssertionError(
            f"bound inversion: lower {lower} exceeds upper {upper}"
        )
    return SdBounds(lower, upper, tuple(lower_certs), tuple(upper_certs))
