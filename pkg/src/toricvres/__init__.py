"""Short virtual resolutions of monomial ideals on smooth projective toric varieties."""

from .bracket import BracketRun, bracket_labels, choose_k, run_bracket, stabilization_sweep
from .cells import LabeledComplex, build_dual_complex, build_tilde_complex, homology_dims
from .double import DoubleComplex, double_complex, lift_comparison, taylor_comparison_map, total_complex
from .fan import Fan, builtin_fan, load_fan, parse_fan, validate_fan
from .monomials import Monomial, MonomialIdeal, parse_ideal, parse_monomial, polarize
from .resolution import (BettiTable, FreeComplex, betti, betti_via_koszul_strands, minimal_resolution,
                         minimize, pdim, taylor_complex, verify_resolution)
from .shorten import ShortRun, j_label, j_tilde, report_vpdim_bound, run_short, s_of_sigma

__version__ = "0.1.0"
