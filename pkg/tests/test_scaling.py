import math

import numpy as np
import pytest

from gldisk.energy import EnergyBreakdown, State
from gldisk.fields import constant_field, power_law_field, zero_field
from gldisk.minimize import MinimizeOptions
from gldisk.scaling import (CSV_HEADER, SweepEntry, SweepResult,
                            divergence_verdict, fit_power_law, resolve_delta,
                            sweep, write_sweep_csv)


def fake_result(spec, pairs, converged=True):
    entries = []
    for R, E in pairs:
        entries.append(SweepEntry(
            R_dom=R, delta=0.25,
            best_energy=EnergyBreakdown(kinetic=E, well=0.0, field=0.0),
            best_init="uniform", converged=converged, iterations=1,
            state=State(psi=np.ones(1, dtype=complex), a=np.zeros(1)),
            certificate=None))
    return SweepResult(spec=spec, entries=entries)


class TestFitPowerLaw:
    def test_exact_quadratic(self):
        fit = fit_power_law([(2, 4), (4, 16), (8, 64)])
        assert fit.beta == pytest.approx(2.0, abs=1e-10)
        assert fit.c == pytest.approx(1.0, abs=1e-10)
        assert fit.r_squared == pytest.approx(1.0, abs=1e-12)

    def test_quarter_pi_prefactor(self):
        fit = fit_power_law([(1, math.pi / 4), (2, math.pi), (4, 4 * math.pi)])
        assert fit.beta == pytest.approx(2.0, abs=1e-10)
        assert fit.c == pytest.approx(math.pi / 4, rel=1e-10)

    def test_noise_monte_carlo(self):
        rng = np.random.default_rng(123)
        rs = np.array([2.0, 4.0, 8.0])
        for _ in range(100):
            es = rs**2 * (1.0 + 0.01 * rng.standard_normal(3))
            fit = fit_power_law(list(zip(rs, es)))
            assert 1.9 <= fit.beta <= 2.1

    def test_scale_equivariance(self):
        pairs = [(2, 3.7), (4, 11.0), (8, 47.0), (16, 160.0)]
        base = fit_power_law(pairs)
        for s in (0.01, 3.0, 1e4):
            scaled = fit_power_law([(r, s * e) for r, e in pairs])
            assert scaled.beta == pytest.approx(base.beta, abs=1e-10)
            assert scaled.c == pytest.approx(s * base.c, rel=1e-10)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            fit_power_law([(2, 4), (4, 16)])
        with pytest.raises(ValueError):
            fit_power_law([(2, 4), (4, -16), (8, 64)])
        with pytest.raises(ValueError):
            fit_power_law([(2, 4), (2, 5), (8, 64)])


class TestVerdict:
    def test_exact_quadratic_diverges(self):
        res = fake_result(constant_field(0.5), [(R, R**2) for R in (8, 12, 16, 24)])
        v = divergence_verdict(res)
        assert v.verdict == "diverging"
        assert v.beta == pytest.approx(2.0, abs=1e-10)

    def test_saturating_sequence(self):
        res = fake_result(power_law_field(0.5, 1.5, 0.1),
                          [(R, 10.0 - 1.0 / R) for R in (8, 12, 16, 24)])
        v = divergence_verdict(res)
        assert v.verdict == "saturating"

    def test_two_entries_inconclusive(self):
        res = fake_result(constant_field(0.5), [(8, 64), (12, 144)])
        v = divergence_verdict(res)
        assert v.verdict == "inconclusive"
        assert "reason" in v.details

    def test_constant_sequence_saturates(self):
        for spec in (constant_field(0.5), power_law_field(1.0, 1.5, 0.1)):
            res = fake_result(spec, [(R, 5.0) for R in (8, 12, 16, 24)])
            assert divergence_verdict(res).verdict == "saturating"

    def test_zero_floor_saturates(self):
        res = fake_result(constant_field(0.5), [(R, 1e-12) for R in (8, 12, 16)])
        v = divergence_verdict(res)
        assert v.verdict == "saturating"

    def test_nonconverged_entries_ignored(self):
        res = fake_result(constant_field(0.5),
                          [(R, R**2) for R in (8, 12, 16, 24)], converged=False)
        assert divergence_verdict(res).verdict == "inconclusive"

    def test_mixed_signals_inconclusive(self):
        # growing beta but a small last increment
        res = fake_result(constant_field(0.5),
                          [(8, 1.0), (12, 100.0), (16, 200.0), (24, 201.0)])
        v = divergence_verdict(res)
        assert v.verdict == "inconclusive"


class TestSweep:
    def test_zero_field_flat_energies(self):
        res = sweep(zero_field(), [4.0, 8.0], {"delta": 0.5},
                    MinimizeOptions(max_iters=6000))
        assert [e.R_dom for e in res.entries] == [4.0, 8.0]
        for e in res.entries:
            assert e.converged
            assert e.best_energy.total <= 1e-8
            assert e.certificate is None  # tabulated zero field: no chain

    def test_radii_validation(self):
        with pytest.raises(ValueError):
            sweep(zero_field(), [], {"delta": 0.5})
        with pytest.raises(ValueError):
            sweep(zero_field(), [8.0, 4.0], {"delta": 0.5})

    def test_parallel_jobs_match_serial(self):
        serial = sweep(zero_field(), [4.0, 6.0], {"delta": 0.5},
                       MinimizeOptions(max_iters=4000))
        parallel = sweep(zero_field(), [4.0, 6.0], {"delta": 0.5},
                         MinimizeOptions(max_iters=4000), jobs=2)
        assert [e.R_dom for e in parallel.entries] == [4.0, 6.0]
        for a, b in zip(serial.entries, parallel.entries):
            assert a.best_energy.total == pytest.approx(b.best_energy.total,
                                                        abs=1e-12)
            assert a.best_init == b.best_init

    def test_resolve_delta(self):
        assert resolve_delta({"delta": 0.25}) == 0.25
        assert resolve_delta({"sites_per_unit_length": 4}) == 0.25
        with pytest.raises(ValueError):
            resolve_delta({})


class TestCsv:
    def test_header_and_rows(self, tmp_path):
        res = fake_result(constant_field(0.5), [(8, 64.0), (12, 144.0)])
        path = tmp_path / "sweep.csv"
        write_sweep_csv(res, path, provenance={"config_sha256": "abc", "seed": 1})
        lines = path.read_text().splitlines()
        assert lines[0] == CSV_HEADER
        assert lines[0] == ("R,delta,energy_total,energy_kinetic,energy_well,"
                            "energy_field,converged,eq7_rhs")
        data = [ln for ln in lines[1:] if not ln.startswith("#")]
        assert len(data) == 2
        first = data[0].split(",")
        assert float(first[0]) == 8.0
        assert float(first[2]) == 64.0
        assert first[6] == "true"
        assert math.isnan(float(first[7]))
        comments = [ln for ln in lines if ln.startswith("#")]
        assert any("config_sha256=abc" in c for c in comments)
