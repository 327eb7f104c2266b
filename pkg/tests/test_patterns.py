import numpy as np
import pytest

from qeraser import (
    GridMismatch,
    Kind,
    ParameterOutOfRegime,
    Pattern,
    Scenario,
    ScreenGrid,
    SlitArray,
    WindowOutOfGrid,
    basis_eraser,
    basis_sx3,
    closed_form,
    compare,
    joint_patterns,
    make_slit_state,
    make_tagged_state,
    marginal_intensity,
    propagate_state,
    sorkin,
    visibility,
)
from qeraser.patterns import OUTCOMES, sorkin_reference

from conftest import A, D, EPS, OMEGA

CT_SQ = np.sqrt(2 / (np.pi * OMEGA))
ORIGIN = ScreenGrid(-1.0, 1.0, 3)
pytestmark = pytest.mark.filterwarnings("ignore::qeraser.errors.ParameterOutOfRegime")


def at_origin(kind, outcome=None, d=D, eps=EPS, a=A):
    return closed_form(Scenario(kind, outcome), d, eps, a, ORIGIN).values[1]


def far_regime():
    return 1.0, 1.0, 1.0e4, ScreenGrid(-4.0e4, 4.0e4, 8001)


class TestPointValues:
    def test_pure_farfield_origin(self):
        assert at_origin(Kind.PURE_FARFIELD) == pytest.approx(3 * CT_SQ, rel=1e-15)

    def test_tagged_origin(self):
        assert at_origin(Kind.TAGGED) == pytest.approx(0.015743970488169248, rel=1e-14)

    def test_sx_right_vanishes(self):
        assert at_origin(Kind.SX, "right") == 0.0

    def test_sx_up_and_sum(self):
        up = at_origin(Kind.SX, "up")
        assert up / CT_SQ == pytest.approx((1.5 + np.sqrt(2)) / 3, rel=1e-14)
        assert up / CT_SQ == pytest.approx(0.97140, abs=1e-5)
        total = sum(at_origin(Kind.SX, o) for o in OUTCOMES[Kind.SX])
        assert total == pytest.approx(at_origin(Kind.TAGGED_FARFIELD), rel=1e-12)
        assert total == pytest.approx(CT_SQ, rel=1e-12)


class TestSumRules:
    @pytest.mark.parametrize("kind", [Kind.SX, Kind.ERASER])
    @pytest.mark.parametrize("d,eps,a", [(D, EPS, A), (2.0, 0.5, 10.0), (10.0, 1.0, 200.0)])
    def test_outcomes_sum_to_tagged_far_field(self, grid, kind, d, eps, a):
        far = closed_form(Scenario(Kind.TAGGED_FARFIELD), d, eps, a, grid).values
        total = sum(closed_form(Scenario(kind, o), d, eps, a, grid).values for o in OUTCOMES[kind])
        np.testing.assert_allclose(total, far, rtol=0, atol=1e-12 * far.max())

    def test_alpha_is_third_of_pure_farfield(self, grid):
        alpha = closed_form(Scenario(Kind.ERASER, "alpha"), D, EPS, A, grid)
        pure = closed_form(Scenario(Kind.PURE_FARFIELD), D, EPS, A, grid)
        np.testing.assert_allclose(alpha.values, pure.values / 3, rtol=1e-14)
        assert compare(alpha, pure)["linf_rel"] == pytest.approx(2 / 3, rel=1e-12)
        assert compare(alpha, pure.scaled(1 / 3))["linf_rel"] < 1e-15


class TestErrata:
    def test_printed_eraser_phases_break_sum_rule(self, grid):
        far = closed_form(Scenario(Kind.TAGGED_FARFIELD), D, EPS, A, grid).values
        total = sum(closed_form(Scenario(Kind.ERASER, o), D, EPS, A, grid, errata=False).values
                    for o in OUTCOMES[Kind.ERASER])
        assert np.max(np.abs(total - far)) / far.max() >= 0.1

    def test_printed_sx_right_breaks_sum_rule(self, grid):
        far = closed_form(Scenario(Kind.TAGGED_FARFIELD), D, EPS, A, grid).values
        parts = [closed_form(Scenario(Kind.SX, o), D, EPS, A, grid) for o in ("up", "down")]
        printed = closed_form(Scenario(Kind.SX, "right"), D, EPS, A, grid, errata=False)
        total = sum(p.values for p in parts) + printed.values
        assert np.max(np.abs(total - far)) / far.max() > 1e-3
        # still exactly zero at the origin
        assert closed_form(Scenario(Kind.SX, "right"), D, EPS, A, ORIGIN, errata=False).values[1] == 0

    def test_printed_exact_phase_rate_is_approximate(self, pure, grid):
        direct = marginal_intensity(pure, grid)
        printed = closed_form(Scenario(Kind.PURE_EXACT), D, EPS, A, grid, errata=False)
        err = compare(printed, direct)["linf_rel"]
        assert 1e-5 < err < 1e-2


class TestAgreementWithDirect:
    @pytest.mark.parametrize("d,eps,a", [(D, EPS, A), (2.0, 0.5, 10.0), (10.0, 1.0, 200.0), (3.0, 2.0, 0.0)])
    def test_pure_exact(self, grid, d, eps, a):
        state = propagate_state(make_slit_state(SlitArray(3, d, eps)), a)
        err = compare(closed_form(Scenario(Kind.PURE_EXACT), d, eps, a, grid), marginal_intensity(state, grid))
        assert err["linf_rel"] <= 1e-12

    def test_tagged_exact(self, tagged, grid):
        err = compare(closed_form(Scenario(Kind.TAGGED), D, EPS, A, grid), marginal_intensity(tagged, grid))
        assert err["linf_rel"] <= 1e-12

    def test_far_field_in_regime(self):
        d, eps, a, g = far_regime()
        slits = SlitArray(3, d, eps)
        pure = propagate_state(make_slit_state(slits), a)
        tagged = propagate_state(make_tagged_state(slits), a)
        assert compare(closed_form(Scenario(Kind.PURE_FARFIELD), d, eps, a, g),
                       marginal_intensity(pure, g))["linf_rel"] <= 1e-3
        assert compare(closed_form(Scenario(Kind.TAGGED_FARFIELD), d, eps, a, g),
                       marginal_intensity(tagged, g))["linf_rel"] <= 1e-3
        for kind, basis in ((Kind.SX, basis_sx3()), (Kind.ERASER, basis_eraser(3))):
            for o, pat in zip(OUTCOMES[kind], joint_patterns(tagged, basis, g)):
                assert compare(closed_form(Scenario(kind, o), d, eps, a, g), pat)["linf_rel"] <= 1e-3


class TestShiftStructure:
    @pytest.mark.parametrize("outcome,sign", [("beta", -1), ("gamma", +1)])
    def test_fringe_shift(self, grid, outcome, sign):
        x = grid.x
        s = sign * (2 * np.pi / 3) * A / (2 * D)  # 2 s d / a = +-2 pi/3
        assert 2 * s * D / A == pytest.approx(sign * 2 * np.pi / 3)
        pref = CT_SQ / 9 * np.exp(-2 * x ** 2 / OMEGA)
        static = pref * (1 + 2 * np.cosh(4 * x * D / OMEGA))
        expected = static + pref * (4 * np.cosh(2 * x * D / OMEGA) * np.cos(2 * (x + s) * D / A)
                                    + 2 * np.cos(4 * (x + s) * D / A))
        got = closed_form(Scenario(Kind.ERASER, outcome), D, EPS, A, grid).values
        np.testing.assert_allclose(got, expected, rtol=0, atol=1e-15)


class TestRegimeWarning:
    def test_warns_outside(self):
        with pytest.warns(ParameterOutOfRegime):
            pat = closed_form(Scenario(Kind.ERASER, "alpha"), D, EPS, A, ORIGIN)
        assert pat.notes

    def test_silent_inside(self):
        import warnings

        d, eps, a, g = far_regime()
        with warnings.catch_warnings():
            warnings.simplefilter("error", ParameterOutOfRegime)
            assert closed_form(Scenario(Kind.PURE_FARFIELD), d, eps, a, g).notes == ()

    def test_exact_kinds_never_warn(self):
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("error", ParameterOutOfRegime)
            closed_form(Scenario(Kind.PURE_EXACT), D, EPS, A, ORIGIN)
            closed_form(Scenario(Kind.TAGGED), D, EPS, A, ORIGIN)


class TestScenario:
    def test_outcome_required(self):
        with pytest.raises(ValueError):
            Scenario(Kind.ERASER)
        with pytest.raises(ValueError):
            Scenario(Kind.SX, "alpha")
        with pytest.raises(ValueError):
            Scenario(Kind.TAGGED, "up")

    def test_far_field_needs_time(self):
        with pytest.raises(ValueError):
            closed_form(Scenario(Kind.PURE_FARFIELD), D, EPS, 0.0, ORIGIN)


class TestVisibility:
    def period(self, a=A, d=D):
        return np.pi * a / d

    def test_tagged_self_is_zero(self, grid):
        t = closed_form(Scenario(Kind.TAGGED), D, EPS, A, grid)
        assert visibility(t, t, self.period()) == 0.0

    def test_eraser_alpha_near_one(self, grid):
        t = closed_form(Scenario(Kind.TAGGED), D, EPS, A, grid)
        v = visibility(closed_form(Scenario(Kind.ERASER, "alpha"), D, EPS, A, grid), t, self.period())
        # dense independent evaluation of the closed-form ratio gives 0.99883381
        assert v == pytest.approx(0.9988338, abs=2e-6)

    def test_sx_right_is_one(self, grid):
        t = closed_form(Scenario(Kind.TAGGED), D, EPS, A, grid)
        v = visibility(closed_form(Scenario(Kind.SX, "right"), D, EPS, A, grid), t, self.period() / 2)
        assert v == pytest.approx(1.0, abs=1e-7)
        assert v <= 1 + 1e-9

    def test_coarse_grid_resampled(self):
        fine = ScreenGrid(-120, 120, 4096)
        coarse = ScreenGrid(-120, 120, 801)
        vs = []
        for g in (fine, coarse):
            t = closed_form(Scenario(Kind.TAGGED), D, EPS, A, g)
            vs.append(visibility(closed_form(Scenario(Kind.ERASER, "beta"), D, EPS, A, g), t, self.period()))
        assert vs[0] == pytest.approx(vs[1], abs=1e-4)

    def test_window_out_of_grid(self):
        g = ScreenGrid(-10, 10, 501)
        t = closed_form(Scenario(Kind.TAGGED), D, EPS, A, g)
        with pytest.raises(WindowOutOfGrid):
            visibility(t, t, self.period())

    def test_grid_mismatch(self, grid):
        t = closed_form(Scenario(Kind.TAGGED), D, EPS, A, grid)
        with pytest.raises(GridMismatch):
            visibility(t, closed_form(Scenario(Kind.TAGGED), D, EPS, A, ScreenGrid(-120, 120, 101)), 10)


class TestSorkin:
    @pytest.mark.parametrize("d,eps,a", [(5, 1, 50), (2, 0.5, 10), (10, 1, 200)])
    def test_vanishes(self, grid, d, eps, a):
        slits = SlitArray(3, d, eps)
        pat = sorkin(slits, a, grid)
        assert pat.signed and pat.label == "sorkin"
        assert np.max(np.abs(pat.values)) <= 1e-12 * sorkin_reference(slits, a)

    def test_singles_are_gaussians(self, grid):
        from qeraser.patterns import subset_intensities

        slits = SlitArray(3, D, EPS)
        ints = subset_intensities(slits, A, grid)
        x = grid.x
        for k, c in enumerate(slits.centers):
            expected = CT_SQ / 3 * np.exp(-2 * (x - c) ** 2 / OMEGA)
            np.testing.assert_allclose(ints[(k,)], expected, rtol=1e-13)

    def test_oracle_route_matches(self):
        g = ScreenGrid(-120, 120, 2 ** 14)
        slits = SlitArray(3, D, EPS)
        analytic = sorkin(slits, A, g)
        oracle = sorkin(slits, A, g, route="oracle")
        assert np.max(np.abs(analytic.values - oracle.values)) <= 1e-9 * sorkin_reference(slits, A)

    def test_needs_three(self, grid):
        with pytest.raises(ValueError):
            sorkin(SlitArray(2, 1, 1), A, grid)


class TestCompare:
    def test_identical(self, grid):
        p = closed_form(Scenario(Kind.TAGGED), D, EPS, A, grid)
        m = compare(p, p)
        assert m["linf"] == m["linf_rel"] == m["l2"] == 0.0

    def test_grid_mismatch(self, grid):
        p = closed_form(Scenario(Kind.TAGGED), D, EPS, A, grid)
        with pytest.raises(GridMismatch):
            compare(p, Pattern(ScreenGrid(0, 1, 2), [0, 0]))

    def test_oracle_marginal(self, pure):
        from qeraser import sample_state, spectral_propagate

        g = ScreenGrid(-120, 120, 2 ** 14)
        wave = spectral_propagate(sample_state(make_slit_state(SlitArray(3, D, EPS)), g)[0], A)
        m = wave.mask
        q = marginal_intensity(pure, g).values
        rel = np.max(np.abs(np.abs(wave.samples[m]) ** 2 - q[m])) / q.max()
        assert rel <= 1e-6
