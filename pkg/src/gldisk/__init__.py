"""2D Ginzburg-Landau energy minimization on finite disks with a numeric
lower-bound certificate harness and radius-scaling experiments."""

__version__ = "0.1.0"

from ._backend import backend
from .certificate import (CertificateReport, Cutoff, certificate_chain, chi_R,
                          cosine_cutoff, eq7_lower_bound, max_modulus_check,
                          shop_inequality)
from .energy import (EnergyBreakdown, State, curl_plaquette, el_residual,
                     energy, gauge_transform, gradient, initial_state)
from .fields import (FieldSpec, annulus_integral, classify_L2_plane,
                     constant_field, eval_H, l2_mass_on_disk, power_law_field,
                     reverse_holder_check, tabulated_field, zero_field)
from .lattice import Lattice, build_lattice, integrate
from .minimize import MinimizeOptions, MinimizeResult, minimize
from .scaling import (SweepResult, divergence_verdict, fit_power_law, sweep,
                      write_sweep_csv)
from .snapshot import load_state, save_state

__all__ = [
    "CertificateReport", "Cutoff", "EnergyBreakdown", "FieldSpec", "Lattice",
    "MinimizeOptions", "MinimizeResult", "State", "SweepResult",
    "annulus_integral", "backend", "build_lattice", "certificate_chain",
    "chi_R", "classify_L2_plane", "constant_field", "cosine_cutoff",
    "curl_plaquette", "divergence_verdict", "el_residual", "energy",
    "eq7_lower_bound", "eval_H", "fit_power_law", "gauge_transform",
    "gradient", "initial_state", "integrate", "l2_mass_on_disk",
    "load_state", "max_modulus_check", "minimize", "power_law_field",
    "reverse_holder_check", "save_state", "shop_inequality", "sweep",
    "tabulated_field", "write_sweep_csv", "zero_field",
]
