import json
import math

import numpy as np
import pytest
from scipy import integrate as sciint

from gldisk.fields import (FieldRangeError, FieldSpec, UnsupportedFieldError,
                           annulus_integral, classify_L2_plane, constant_field,
                           eval_H, l1_mass_on_disk, l2_mass_on_disk,
                           power_law_field, reverse_holder_check,
                           tabulated_field, zero_field)


class TestEvalH:
    def test_constant_anywhere(self):
        assert eval_H(constant_field(0.5), (7.0, -3.0)) == 0.5

    def test_power_law_at_radius_5(self):
        assert eval_H(power_law_field(2.0, 1.0, 0.1), (3.0, 4.0)) == pytest.approx(0.4, rel=1e-12)

    def test_power_law_core_clamp(self):
        v = eval_H(power_law_field(1.0, 0.5, 0.1), (0.0, 0.0))
        assert v == pytest.approx(1.0 / 0.1**0.5, rel=1e-12)

    def test_vectorized_matches_scalar(self):
        spec = power_law_field(1.3, 0.7, 0.2)
        pts = np.array([[0.0, 0.1], [1.0, 2.0], [-3.0, 0.5]])
        vec = eval_H(spec, pts)
        for p, v in zip(pts, vec):
            assert eval_H(spec, p) == pytest.approx(v, rel=1e-14)

    def test_tabulated_interpolation_and_range(self):
        spec = tabulated_field([[0.0, 1.0], [2.0, 3.0], [4.0, 3.0]])
        assert eval_H(spec, (1.0, 0.0)) == pytest.approx(2.0)
        with pytest.raises(FieldRangeError):
            eval_H(spec, (5.0, 0.0))

    def test_nonnegative_for_constant_and_power_law(self):
        rng = np.random.default_rng(7)
        pts = rng.uniform(-20, 20, size=(200, 2))
        for spec in (constant_field(0.3), power_law_field(2.0, 0.8, 0.05),
                     power_law_field(1.0, -0.5, 0.1)):
            assert np.all(eval_H(spec, pts) >= 0)


class TestFieldSpecValidation:
    def test_rejects_nonpositive_h(self):
        with pytest.raises(ValueError):
            constant_field(0.0)
        with pytest.raises(ValueError):
            power_law_field(-1.0, 0.5, 0.1)

    def test_rejects_nonpositive_r_cut(self):
        with pytest.raises(ValueError):
            power_law_field(1.0, 0.5, 0.0)

    def test_rejects_bad_table(self):
        with pytest.raises(ValueError):
            tabulated_field([[0.0, 1.0], [0.0, 2.0]])
        with pytest.raises(ValueError):
            tabulated_field([[0.0, np.inf], [1.0, 0.0]])

    def test_json_round_trip(self):
        specs = [constant_field(0.5), power_law_field(2.0, 1.5, 0.125),
                 tabulated_field([[0.0, 1.0], [1.0, 0.5], [2.0, 0.0]])]
        for spec in specs:
            back = FieldSpec.from_json(spec.to_json())
            assert back.kind == spec.kind
            pts = np.array([[0.0, 0.5], [1.5, 0.2]])
            assert np.allclose(eval_H(back, pts), eval_H(spec, pts))

    def test_json_wire_format_keys(self):
        d = json.loads(power_law_field(2.0, 1.5, 0.125).to_json())
        assert d == {"kind": "power_law", "h": 2.0, "alpha": 1.5, "r_cut": 0.125}


class TestAnnulusIntegral:
    def test_area_formula_alpha_zero(self):
        assert annulus_integral(1.0, 0.0, 1.0, 2.0) == pytest.approx(3 * math.pi, rel=1e-12)

    def test_alpha_one(self):
        assert annulus_integral(1.0, 1.0, 1.0, 2.0) == pytest.approx(2 * math.pi, rel=1e-12)

    def test_against_quadrature_oracle(self):
        # polar quadrature of 2 pi r * h r^-alpha over (1, 4)
        h, alpha = 2.0, 0.5
        val, err = sciint.quad(lambda r: 2 * math.pi * r * h * r**-alpha, 1.0, 4.0)
        assert err < 1e-9
        assert val == pytest.approx(56 * math.pi / 3, rel=1e-10)
        assert annulus_integral(h, alpha, 1.0, 4.0) == pytest.approx(val, rel=1e-10)

    def test_additivity(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            h = rng.uniform(0.1, 5.0)
            alpha = rng.uniform(-1.0, 1.9)
            r0, r1, r2 = np.sort(rng.uniform(0.05, 10.0, size=3))
            if r0 == r1 or r1 == r2:
                continue
            whole = annulus_integral(h, alpha, r0, r2)
            split = annulus_integral(h, alpha, r0, r1) + annulus_integral(h, alpha, r1, r2)
            assert split == pytest.approx(whole, rel=1e-12)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            annulus_integral(1.0, 0.5, 2.0, 1.0)
        with pytest.raises(UnsupportedFieldError):
            annulus_integral(1.0, 2.0, 1.0, 2.0)


class TestL2Mass:
    def test_constant_unit_disk(self):
        assert l2_mass_on_disk(constant_field(1.0), 1.0) == pytest.approx(math.pi, rel=1e-12)

    def test_power_law_tiny_core(self):
        # quadrature oracle of (r^-0.5)^2 * 2 pi r over (0, 1) gives 2 pi
        val, _ = sciint.quad(lambda r: 2 * math.pi * r * r**-1.0, 1e-12, 1.0)
        assert val == pytest.approx(2 * math.pi, rel=1e-6)
        got = l2_mass_on_disk(power_law_field(1.0, 0.5, 1e-9), 1.0)
        assert got == pytest.approx(2 * math.pi, rel=1e-6)

    def test_power_law_alpha_zero_with_core(self):
        got = l2_mass_on_disk(power_law_field(1.0, 0.0, 0.1), 2.0)
        assert got == pytest.approx(4 * math.pi, rel=1e-12)

    def test_alpha_one_log_case(self):
        spec = power_law_field(1.0, 1.0, 0.5)
        val, _ = sciint.quad(lambda r: 2 * math.pi * r * eval_H(spec, (r, 0.0))**2,
                             0.0, 3.0, points=[0.5])
        assert l2_mass_on_disk(spec, 3.0) == pytest.approx(val, rel=1e-9)

    def test_tabulated_matches_quadrature(self):
        spec = tabulated_field([[0.0, 2.0], [1.0, 1.0], [3.0, 0.5]])
        val, _ = sciint.quad(lambda r: 2 * math.pi * r * eval_H(spec, (r, 0.0))**2,
                             0.0, 2.5, points=[1.0])
        assert l2_mass_on_disk(spec, 2.5) == pytest.approx(val, rel=1e-9)
        with pytest.raises(FieldRangeError):
            l2_mass_on_disk(spec, 4.0)


class TestClassifyL2:
    def test_above_threshold(self):
        assert classify_L2_plane(power_law_field(1.0, 1.5, 0.1)) == "in_L2"

    def test_boundary_excluded(self):
        assert classify_L2_plane(power_law_field(1.0, 1.0, 0.1)) == "not_in_L2"

    def test_constant(self):
        assert classify_L2_plane(constant_field(1.0)) == "not_in_L2"

    def test_monotone_in_alpha(self):
        alphas = np.linspace(-1.0, 3.0, 41)
        flags = [classify_L2_plane(power_law_field(1.0, a, 0.1)) == "in_L2"
                 for a in alphas]
        # once in L2, stays in L2 for larger alpha
        assert flags == sorted(flags)

    def test_tabulated_unsupported(self):
        with pytest.raises(UnsupportedFieldError):
            classify_L2_plane(zero_field())


class TestReverseHolder:
    def test_constant_equality(self):
        rep = reverse_holder_check(constant_field(2.0), 3.0)
        assert rep.lhs == pytest.approx(18 * math.pi, rel=1e-12)
        assert abs(rep.lhs - rep.rhs) <= 1e-9 * rep.lhs
        assert rep.holds

    def test_power_law_closed_form_ratio(self):
        # lhs/rhs for h/|x|^alpha with a vanishing core is
        # (2/(2-alpha)) * sqrt(1-alpha); fails for decaying profiles
        alpha = 0.5
        rep = reverse_holder_check(power_law_field(1.0, alpha, 1e-8), 1.0)
        expect = 2.0 / (2.0 - alpha) * math.sqrt(1.0 - alpha)
        assert rep.lhs / rep.rhs == pytest.approx(expect, abs=1e-3)
        assert not rep.holds

    def test_near_constant_power_law(self):
        rep = reverse_holder_check(power_law_field(1.0, 0.0, 0.01), 10.0)
        assert rep.holds
        assert abs(rep.lhs - rep.rhs) <= 1e-3 * rep.lhs

    def test_quadrature_oracle_power_law(self):
        spec = power_law_field(1.5, 0.7, 0.05)
        R = 2.0
        l1, _ = sciint.quad(lambda r: 2 * math.pi * r * eval_H(spec, (r, 0.0)),
                            0.0, R, points=[0.05])
        assert l1_mass_on_disk(spec, R) == pytest.approx(l1, rel=1e-9)
