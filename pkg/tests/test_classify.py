"""Singularity types, one-sided limits, and arc classification."""

import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from innerinv import (
    Atom,
    DomainError,
    InnerFunctionSpec,
    NoLimitError,
    NotSingularError,
    StolzTail,
    TangentialTail,
    TruncationPolicy,
    UnitPoint,
    angular_derivative_series,
    classify_intervals,
    classify_singularity,
    one_sided_limit,
    spectrum,
    stolz_contains,
    truncated_solution_count,
)
from innerinv.classify import TYPE_0, TYPE_1A, TYPE_1B, TYPE_2

TWO_PI = 2.0 * math.pi


class TestSpectrum:
    def test_finite_product_has_empty_spectrum(self):
        from innerinv import DiskZero

        spec = InnerFunctionSpec(zero_order=2, zeros=(DiskZero(0.5, 1.0),))
        assert spectrum(spec) == ()

    def test_spectrum_sorted(self):
        spec = InnerFunctionSpec(
            atoms=(Atom(4.0, 1.0),),
            tails=(TangentialTail(1.0, "upper", 4.0),),
        )
        assert tuple(p.theta for p in spectrum(spec)) == (1.0, 4.0)


class TestStolzCone:
    def test_membership(self):
        anchor = UnitPoint(0.0)
        assert stolz_contains(anchor, 2.0, 0.9 + 0.0j)
        assert not stolz_contains(anchor, 2.0, 0.9 * cmath.exp(1j * 1.0))

    def test_aperture_must_open(self):
        with pytest.raises(DomainError):
            stolz_contains(UnitPoint(0.0), 1.0, 0.5 + 0j)

    def test_boundary_points_rejected(self):
        with pytest.raises(DomainError):
            stolz_contains(UnitPoint(0.0), 2.0, cmath.exp(1j * 0.1))

    def test_stolz_tail_eventually_inside_cone(self):
        tail = StolzTail(0.0, c=0.5, q=0.5, t=1.0)
        anchor = UnitPoint(0.0)
        alpha = tail.cone_aperture
        for n in range(3, 20):
            delta, phi = tail.term(n)
            z = (1.0 - delta) * cmath.exp(1j * phi)
            assert stolz_contains(anchor, alpha, z)

    def test_tangential_tail_escapes_every_cone(self):
        tail = TangentialTail(0.0, "upper", 4.0)
        anchor = UnitPoint(0.0)
        for alpha in (2.0, 10.0, 100.0):
            delta, phi = tail.term(500)
            z = (1.0 - delta) * cmath.exp(1j * phi)
            assert not stolz_contains(anchor, alpha, z)


class TestAngularDerivativeSeries:
    def test_single_zero_exact(self):
        from innerinv import DiskZero

        zero = DiskZero(0.5, math.pi)
        spec = InnerFunctionSpec(zeros=(zero,))
        res = angular_derivative_series(spec, UnitPoint(0.0))
        assert res.finite
        # (1 - r^2) / |1 - r e^{i pi}|^2 = (1 - 0.25) / 2.25
        assert res.value == pytest.approx(0.75 / 2.25)
        assert res.tail_bound == 0.0

    def test_stolz_tail_diverges_at_anchor(self):
        spec = InnerFunctionSpec(tails=(StolzTail(0.0, c=0.5, q=0.5),))
        res = angular_derivative_series(spec, UnitPoint(0.0))
        assert not res.finite

    def test_tangential_tail_sums_at_anchor(self):
        spec = InnerFunctionSpec(tails=(TangentialTail(0.0, "upper", 4.0),))
        res = angular_derivative_series(spec, UnitPoint(0.0))
        assert res.finite
        assert res.value > 0.0
        assert res.tail_bound < res.value

    def test_away_from_spectrum_always_finite(self):
        spec = InnerFunctionSpec(tails=(StolzTail(0.0, c=0.5, q=0.5),))
        res = angular_derivative_series(spec, UnitPoint(3.0))
        assert res.finite


class TestOneSidedLimit:
    def test_atom_has_no_limit(self):
        spec = InnerFunctionSpec(atoms=(Atom(1.0, 1.0),))
        for side in ("below", "above"):
            with pytest.raises(NoLimitError):
                one_sided_limit(spec, UnitPoint(1.0), side, TruncationPolicy())

    def test_tangential_upper_limit_from_below(self):
        spec = InnerFunctionSpec(tails=(TangentialTail(0.0, "upper", 4.0),))
        lim = one_sided_limit(spec, UnitPoint(0.0), "below", TruncationPolicy())
        assert abs(abs(lim.value) - 1.0) < 1e-12
        assert lim.phase_err <= 1e-9
        with pytest.raises(NoLimitError):
            one_sided_limit(spec, UnitPoint(0.0), "above", TruncationPolicy())

    def test_limit_agrees_with_nearby_values(self):
        from innerinv import eval_inner, phase_lift

        spec = InnerFunctionSpec(tails=(TangentialTail(0.0, "upper", 6.0),))
        pol = TruncationPolicy()
        lim = one_sided_limit(spec, UnitPoint(0.0), "below", pol)
        big = TruncationPolicy(tail_terms=1 << 14)
        seq = [eval_inner(spec, UnitPoint(TWO_PI - 10.0 ** -k), big) for k in (3, 5)]
        d1 = abs(seq[0] - lim.value)
        d2 = abs(seq[1] - lim.value)
        assert d2 < d1
        assert d2 < 1e-3

    def test_side_argument_validated(self):
        spec = InnerFunctionSpec(tails=(TangentialTail(0.0, "upper", 4.0),))
        with pytest.raises(DomainError):
            one_sided_limit(spec, UnitPoint(0.0), "left", TruncationPolicy())


class TestClassifySingularity:
    def test_atom_type2(self):
        spec = InnerFunctionSpec(atoms=(Atom(1.0, 1.0),))
        rec = classify_singularity(spec, UnitPoint(1.0))
        assert rec.sing_type == TYPE_2
        assert rec.limit is None

    def test_stolz_type2(self):
        spec = InnerFunctionSpec(tails=(StolzTail(2.0, c=0.5, q=0.5),))
        rec = classify_singularity(spec, UnitPoint(2.0))
        assert rec.sing_type == TYPE_2

    def test_tangential_upper_type1a_with_certificate(self):
        spec = InnerFunctionSpec(tails=(TangentialTail(0.0, "upper", 4.0),))
        rec = classify_singularity(spec, UnitPoint(0.0))
        assert rec.sing_type == TYPE_1A
        assert rec.limit is not None
        assert rec.limit.phase_err <= 1e-9

    def test_tangential_lower_type1b(self):
        spec = InnerFunctionSpec(tails=(TangentialTail(0.0, "lower", 4.0),))
        rec = classify_singularity(spec, UnitPoint(0.0))
        assert rec.sing_type == TYPE_1B

    def test_both_sides_type2(self):
        spec = InnerFunctionSpec(
            tails=(
                TangentialTail(0.0, "upper", 4.0),
                TangentialTail(0.0, "lower", 4.0),
            )
        )
        rec = classify_singularity(spec, UnitPoint(0.0))
        assert rec.sing_type == TYPE_2

    def test_atom_on_top_of_tail_type2(self):
        spec = InnerFunctionSpec(
            atoms=(Atom(0.0, 1.0),),
            tails=(TangentialTail(0.0, "upper", 4.0),),
        )
        rec = classify_singularity(spec, UnitPoint(0.0))
        assert rec.sing_type == TYPE_2
        assert len(rec.causes) == 2

    def test_regular_point_rejected(self):
        spec = InnerFunctionSpec(atoms=(Atom(1.0, 1.0),))
        with pytest.raises(NotSingularError):
            classify_singularity(spec, UnitPoint(2.0))


class TestClassifyIntervals:
    def test_two_atoms_all_type2(self, two_atom_report):
        assert tuple(iv.itype for iv in two_atom_report.intervals) == (TYPE_2, TYPE_2)
        assert two_atom_report.n == 2
        for iv in two_atom_report.intervals:
            assert iv.limit_lo is None and iv.limit_hi is None
            assert iv.type0_image is None

    def test_tangential_pair_two_type1a(self, tangential_pair_report):
        ivs = tangential_pair_report.intervals
        assert tuple(iv.itype for iv in ivs) == (TYPE_1A, TYPE_1A)
        for iv in ivs:
            assert iv.limit_lo is None
            assert iv.limit_hi is not None
            assert iv.limit_hi.phase_err <= 1e-9

    def test_mixed_sides_one_type2_one_type0(self):
        spec = InnerFunctionSpec(
            tails=(
                TangentialTail(0.0, "upper", 6.0),
                TangentialTail(math.pi, "lower", 6.0),
            )
        )
        rep = classify_intervals(spec)
        assert tuple(iv.itype for iv in rep.intervals) == (TYPE_2, TYPE_0)
        assert tuple(s.sing_type for s in rep.singularities) == (TYPE_1A, TYPE_1B)
        quiet = rep.intervals[1]
        assert quiet.phase_span is not None and quiet.phase_span > 0.0
        assert quiet.type0_image is not None

    def test_single_tangential_full_circle_arc(self):
        spec = InnerFunctionSpec(tails=(TangentialTail(0.0, "upper", 4.0),))
        rep = classify_intervals(spec)
        assert rep.n == 1
        (iv,) = rep.intervals
        assert iv.itype == TYPE_1A
        assert iv.hi == pytest.approx(iv.lo + TWO_PI)

    def test_no_spectrum_single_periodic_record(self):
        spec = InnerFunctionSpec(zero_order=5)
        rep = classify_intervals(spec)
        assert rep.n == 0
        (iv,) = rep.intervals
        assert iv.itype == TYPE_0
        assert iv.phase_span == pytest.approx(5.0 * TWO_PI)
        assert len(iv.type0_image) == 5

    def test_type0_image_solution_angles(self):
        from innerinv import eval_inner

        spec = InnerFunctionSpec(zero_order=5)
        rep = classify_intervals(spec)
        pol = rep.policy
        for theta, m in rep.intervals[0].type0_image:
            val = eval_inner(spec, UnitPoint(theta), pol)
            assert val.real == pytest.approx(1.0, abs=1e-9)


class TestSolutionCounting:
    def test_count_grows_near_stolz_anchor(self):
        spec = InnerFunctionSpec(tails=(StolzTail(0.0, c=0.5, q=0.5),))
        counts = [truncated_solution_count(spec, 0.0, 0.5, n) for n in (8, 16, 32, 64)]
        assert counts == sorted(counts)
        assert counts[-1] > 2 * counts[0]

    def test_count_stable_on_quiet_arc(self):
        spec = InnerFunctionSpec(tails=(StolzTail(0.0, c=0.5, q=0.5),))
        counts = [
            truncated_solution_count(spec, 2.0, 0.5, n) for n in (8, 64, 512)
        ]
        assert counts[0] == counts[1] == counts[2]

    @given(st.integers(min_value=1, max_value=6))
    @settings(max_examples=6, deadline=None)
    def test_finite_product_counts_match_degree(self, deg):
        spec = InnerFunctionSpec(zero_order=deg)
        # z^deg hits 1 exactly deg times per revolution
        assert truncated_solution_count(spec, 0.05, TWO_PI - 0.1, 1) in (deg - 1, deg)
