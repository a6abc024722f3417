"""Tests for extremality, cubical complexes, collapsing, and classification."""

import itertools
import random

import pytest

from spheredim.concepts import (
    CapExceededError,
    ConceptClass,
    DimensionVariant,
    PartialHypothesis,
    dimension,
    family_class,
)
from spheredim.complexes import euler_characteristic, face_counts
from spheredim.extremal import (
    CubicalComplex,
    EmbeddingReport,
    Singleton,
    ThresholdLike,
    Vc1NonThreshold,
    Vc2Plus,
    WitnessError,
    classify_low_vc,
    collapse_certificate,
    cubical_barycentric,
    cubical_complex,
    full_subcomplex_embedding_check,
    is_extremal,
    realizable_partial,
    restriction,
    subdivided_realizable_complex,
    verify_threshold_certificate,
    vc_extremal_upper,
)
from spheredim.spheres import verify_witness

V = DimensionVariant

FIG_SQUARE_WHISKER = ["---", "-+-", "++-", "+--", "--+"]
FIG_THRESHOLDISH = ["---", "--+", "-++", "+++"]


def cls_of(rows):
    return ConceptClass.from_strings(rows)


def random_class(rng, max_n=4, max_size=12):
    n = rng.randint(1, max_n)
    size = rng.randint(1, min(max_size, 2**n))
    masks = rng.sample(range(2**n), size)
    return ConceptClass(n, tuple(PartialHypothesis.total(n, m) for m in masks))


def random_extremal_classes(seed, count, tries=2000, max_n=4):
    rng = random.Random(seed)
    found = []
    for _ in range(tries):
        cls = random_class(rng, max_n=max_n)
        if is_extremal(cls).extremal:
            found.append(cls)
            if len(found) == count:
                break
    return found


# --- oracles ------------------------------------------------------------


def oracle_threshold_embeddable(cls):
    """Exhaustive search over sign flips; for each flip the positive sets
    must form a nested family, which is equivalent to some point order
    turning every concept into a plus-prefix."""
    n = cls.domain_size
    for flip in range(1 << n):
        plus_sets = [h.plus ^ flip for h in cls.hypotheses]
        if all(
            (a & ~b) == 0 or (b & ~a) == 0
            for a, b in itertools.combinations(plus_sets, 2)
        ):
            return True
    return False


def oracle_threshold_embeddable_literal(cls):
    """Literal flip x order enumeration; usable for small domains only."""
    n = cls.domain_size
    for flip in range(1 << n):
        for perm in itertools.permutations(range(n)):
            ok = True
            for h in cls.hypotheses:
                flipped = h.plus ^ flip
                seen_minus = False
                for x in perm:
                    if flipped & (1 << x):
                        if seen_minus:
                            ok = False
                            break
                    else:
                        seen_minus = True
                if not ok:
                    break
            if ok:
                return True
    return False


def oracle_cubes(cls):
    """All cubes by direct enumeration over partial hypotheses."""
    n = cls.domain_size
    have = {h.plus for h in cls.hypotheses}
    cubes = []
    for defined in range(1 << n):
        free = ((1 << n) - 1) & ~defined
        for plus_bits in range(1 << n):
            plus = plus_bits & defined
            if plus != plus_bits:
                continue
            completions = [plus]
            for x in range(n):
                if free & (1 << x):
                    completions = [c | b for c in completions for b in (0, 1 << x)]
            if all(c in have for c in completions):
                cubes.append((plus, defined))
    return set(cubes)


def validate_collapse(cc, moves):
    """Replay a collapse sequence, checking each move removes a genuinely
    free face together with its unique coface, ending at one vertex."""
    state = set(cc.cubes)
    for free_s, cof_s in moves:
        free = PartialHypothesis.from_string(free_s)
        cof = PartialHypothesis.from_string(cof_s)
        assert free in state and cof in state
        cofaces = [d for d in state if d != free and free.extends(d)]
        assert cofaces == [cof]
        state -= {free, cof}
    assert len(state) == 1
    assert next(iter(state)).dimension == 0


# --- extremality --------------------------------------------------------


class TestIsExtremal:
    def test_figure_class(self):
        report = is_extremal(cls_of(FIG_THRESHOLDISH))
        assert report.extremal
        assert report.size == report.shattered_count == 4

    def test_cubes_are_extremal(self):
        for n in (1, 2, 3):
            assert is_extremal(family_class("cube", n)).extremal

    def test_two_singletons_not_extremal(self):
        report = is_extremal(cls_of(["+-", "-+"]))
        assert not report.extremal
        assert (report.size, report.shattered_count) == (2, 3)

    def test_thresholds_extremal(self):
        for d in (1, 2, 3, 4):
            assert is_extremal(family_class("threshold", d)).extremal

    def test_cap(self):
        with pytest.raises(CapExceededError):
            is_extremal(family_class("cube", 3), cap=2)

    def test_strong_equals_plain_iff_extremal(self):
        from spheredim.concepts import shattered_family, strongly_shattered_family

        def agree(cls):
            shat = {m for lv in shattered_family(cls) for m in lv}
            strong = {m for lv in strongly_shattered_family(cls) for m in lv}
            assert is_extremal(cls).extremal == (shat == strong)

        # exhaustive over every nonempty class on up to 3 points
        for n in (1, 2, 3):
            universe = list(range(2**n))
            for picks in range(1, 2 ** len(universe)):
                masks = [m for m in universe if picks & (1 << m)]
                agree(ConceptClass(n, tuple(PartialHypothesis.total(n, m) for m in masks)))
        # sampled for larger domains
        rng = random.Random(41)
        for _ in range(150):
            agree(random_class(rng, max_n=6, max_size=16))


class TestCubicalComplex:
    def test_figure_counts(self):
        cc = cubical_complex(cls_of(FIG_SQUARE_WHISKER))
        assert cc.counts() == (5, 5, 1)

    def test_square(self):
        cc = cubical_complex(family_class("cube", 2))
        assert cc.counts() == (4, 4, 1)
        assert "**" in cc.rows()

    def test_singleton(self):
        cc = cubical_complex(cls_of(["-+"]))
        assert cc.counts() == (1,)

    def test_against_oracle(self):
        rng = random.Random(43)
        for _ in range(60):
            cls = random_class(rng)
            cc = cubical_complex(cls)
            assert {(c.plus, c.defined) for c in cc.cubes} == oracle_cubes(cls)

    def test_dim_equals_vc_for_extremal(self):
        for cls in random_extremal_classes(47, 25):
            assert cubical_complex(cls).dim() == dimension(cls, V.PRIMAL)

    def test_closure_validated(self):
        with pytest.raises(ValueError):
            CubicalComplex.from_strings(["**"])


class TestCubicalBarycentric:
    def test_figure_face_counts(self):
        cc = cubical_complex(cls_of(FIG_SQUARE_WHISKER))
        sub = cubical_barycentric(cc)
        # oracle: count chains of the cube poset directly
        cubes = list(cc.cubes)
        by_len = {}
        for r in range(1, len(cubes) + 1):
            total = 0
            for combo in itertools.combinations(cubes, r):
                ordered = sorted(combo, key=lambda c: c.dimension)
                if all(
                    b.extends(a) or a.extends(b)
                    for a, b in itertools.combinations(ordered, 2)
                ):
                    total += 1
            if total == 0:
                break
            by_len[r - 1] = total
        expected = tuple(by_len[d] for d in range(max(by_len) + 1))
        assert face_counts(sub) == expected
        assert face_counts(sub) == (11, 18, 8)

    def test_single_vertex(self):
        cc = cubical_complex(cls_of(["-+"]))
        assert face_counts(cubical_barycentric(cc)) == (1,)

    def test_single_edge_gives_three_vertex_path(self):
        cc = cubical_complex(cls_of(["-", "+"]))
        assert face_counts(cubical_barycentric(cc)) == (3, 2)

    def test_euler_characteristic_matches_cube_counts(self):
        for cls in random_extremal_classes(53, 15):
            cc = cubical_complex(cls)
            chi_cubes = sum((-1) ** d * c for d, c in enumerate(cc.counts()))
            assert euler_characteristic(cubical_barycentric(cc)) == chi_cubes


class TestEmbedding:
    def test_figure_class_embeds_fully(self):
        report = full_subcomplex_embedding_check(cls_of(FIG_THRESHOLDISH))
        assert report.ok and not report.reversed_case

    def test_cube_reports_reversed_case(self):
        report = full_subcomplex_embedding_check(family_class("cube", 2))
        assert report.ok and report.reversed_case

    def test_non_extremal_rejected(self):
        with pytest.raises(WitnessError):
            full_subcomplex_embedding_check(cls_of(["+-", "-+"]))

    def test_random_extremal_classes(self):
        for cls in random_extremal_classes(59, 20):
            assert full_subcomplex_embedding_check(cls).ok

    def test_subdivided_realizable_complex_counts(self):
        # square class: vertices are the 8 nonempty-support realizable
        # partial hypotheses of C_2 minus nothing: 4 total + 4 one-point
        delta1 = subdivided_realizable_complex(family_class("cube", 2))
        assert face_counts(delta1) == (8, 8)


class TestRestriction:
    def test_square_restriction(self):
        out = restriction(family_class("cube", 2), PartialHypothesis.from_string("*-"))
        assert out.rows() == ("--", "+-")

    def test_undefined_restriction_is_identity(self):
        e = cls_of(FIG_THRESHOLDISH)
        assert restriction(e, PartialHypothesis.from_string("***")) == e

    def test_disjointness_at_antipodal_pairs(self):
        e = cls_of(FIG_THRESHOLDISH)
        for defined in range(1, 8):
            for plus_bits in range(8):
                plus = plus_bits & defined
                if plus != plus_bits:
                    continue
                h = PartialHypothesis(3, plus, defined)
                if realizable_partial(e, h) and realizable_partial(e, h.negate()):
                    a = set(restriction(e, h).rows())
                    b = set(restriction(e, h.negate()).rows())
                    assert not (a & b)

    def test_unrealizable_rejected(self):
        with pytest.raises(WitnessError):
            restriction(cls_of(["--", "++"]), PartialHypothesis.from_string("+-"))

    def test_restrictions_of_extremal_are_extremal(self):
        for cls in random_extremal_classes(61, 15):
            n = cls.domain_size
            for defined in range(1 << n):
                for plus in range(1 << n):
                    if plus & ~defined:
                        continue
                    h = PartialHypothesis(n, plus, defined)
                    if realizable_partial(cls, h):
                        assert is_extremal(restriction(cls, h)).extremal


class TestCollapse:
    def test_square_collapses(self):
        cc = cubical_complex(family_class("cube", 2))
        moves = collapse_certificate(cc)
        assert moves is not None
        validate_collapse(cc, moves)

    def test_figure_class_collapses(self):
        cc = cubical_complex(cls_of(FIG_SQUARE_WHISKER))
        moves = collapse_certificate(cc)
        assert moves is not None
        validate_collapse(cc, moves)

    def test_hollow_cycle_has_no_certificate(self):
        cc = CubicalComplex.from_strings(["--", "-+", "+-", "++", "*-", "*+", "-*", "+*"])
        assert collapse_certificate(cc) is None

    def test_extremal_classes_collapse(self):
        for cls in random_extremal_classes(67, 20):
            cc = cubical_complex(cls)
            moves = collapse_certificate(cc)
            assert moves is not None
            validate_collapse(cc, moves)

    def test_budget_exceeded_distinct(self):
        cc = cubical_complex(family_class("cube", 2))
        with pytest.raises(CapExceededError):
            collapse_certificate(cc, node_budget=0)


class TestClassify:
    def test_singleton(self):
        assert isinstance(classify_low_vc(cls_of(["-+-"])), Singleton)

    def test_thresholds_with_natural_certificate(self):
        got = classify_low_vc(family_class("threshold", 3))
        assert isinstance(got, ThresholdLike)
        assert got.flip_mask == 0
        assert got.order == (0, 1, 2)

    def test_pair_of_opposites(self):
        got = classify_low_vc(cls_of(["--", "++"]))
        assert isinstance(got, ThresholdLike)

    def test_three_singletons_need_hexagon(self):
        got = classify_low_vc(cls_of(["+--", "-+-", "--+"]))
        assert isinstance(got, Vc1NonThreshold)
        assert verify_witness(got.witness)
        assert got.witness.dimension == 1

    def test_shattered_pair(self):
        got = classify_low_vc(family_class("cube", 2))
        assert isinstance(got, Vc2Plus)
        assert got.shattered_pair == (0, 1)

    def test_certificates_verify(self):
        rng = random.Random(71)
        for _ in range(250):
            cls = random_class(rng, max_n=5, max_size=6)
            got = classify_low_vc(cls)
            if isinstance(got, ThresholdLike):
                assert verify_threshold_certificate(cls, got.flip_mask, got.order)
            elif isinstance(got, Vc1NonThreshold):
                assert verify_witness(got.witness)

    def test_matches_oracle(self):
        rng = random.Random(73)
        checked = 0
        while checked < 200:
            cls = random_class(rng, max_n=5, max_size=5)
            got = classify_low_vc(cls)
            if isinstance(got, (Singleton, Vc2Plus)):
                continue
            checked += 1
            embeddable = oracle_threshold_embeddable(cls)
            assert isinstance(got, ThresholdLike) == embeddable

    def test_oracle_variants_agree(self):
        rng = random.Random(79)
        for _ in range(80):
            cls = random_class(rng, max_n=4, max_size=5)
            assert oracle_threshold_embeddable(cls) == oracle_threshold_embeddable_literal(cls)


class TestVcExtremalUpper:
    def test_threshold_subclass(self):
        sub = cls_of(["--", "++"])
        assert vc_extremal_upper(sub, family_class("threshold", 2)) == 1

    def test_cube_always_works(self):
        sub = cls_of(["-+-", "+--"])
        assert vc_extremal_upper(sub, family_class("cube", 3)) == 3

    def test_non_extremal_candidate_rejected(self):
        sub = cls_of(["+-"])
        assert vc_extremal_upper(sub, cls_of(["+-", "-+"])) is None

    def test_non_superset_rejected(self):
        sub = cls_of(["++"])
        assert vc_extremal_upper(sub, cls_of(["--", "-+"])) is None

    def test_domain_mismatch(self):
        with pytest.raises(ValueError):
            vc_extremal_upper(cls_of(["+-"]), family_class("cube", 3))


class TestExtremalBounds:
    def test_dual_vc_bound_for_extremal(self):
        for cls in random_extremal_classes(83, 25, max_n=4):
            vc = dimension(cls, V.PRIMAL)
            vcd = dimension(cls, V.DUAL)
            assert vcd <= 2 * vc + 1

    def test_sd_upper_bound_for_extremal(self):
        from spheredim.spheres import sd_bounds

        for cls in random_extremal_classes(97, 20, max_n=4):
            if len(cls) == 1:
                continue
            vc = dimension(cls, V.PRIMAL)
            assert sd_bounds(cls).upper <= 2 * vc - 1

    def test_low_vc_classes_have_sd_upper_at_most_one(self):
        from spheredim.spheres import sd_bounds

        rng = random.Random(89)
        for _ in range(60):
            cls = random_class(rng, max_n=5, max_size=3)
            if dimension(cls, V.PRIMAL) <= 1:
                assert sd_bounds(cls).upper <= 1
