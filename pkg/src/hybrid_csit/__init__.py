"""Linear schemes for the 3-receiver MISO broadcast channel with hybrid CSIT.

Build a scheme, run it over a channel draw, and check it two ways: exact
rank arithmetic for decodability, float zero-forcing rates for the DoF slope.

>>> from hybrid_csit import draw_channel, get_scheme, run_scheme, oracle_decodable
>>> sc = get_scheme("pd22")
>>> tr = run_scheme(sc, draw_channel(0, 2, 2, 2, "exact"))
>>> sorted(oracle_decodable(tr, 1))
['a1', 'a2']
"""

from .channel import ChannelRealization, CsitConfig, CsitView, draw_channel, view
from .core import DofTuple, Scheme, SlotPlan, Symbol, Transcript, counting_dof, run_scheme
from .decoding import DecodeReport, decode_report, oracle_decodable, targets_decodable, zf_rate
from .errors import (ConfigMismatch, CsitViolation, DegenerateProjector, DimensionMismatch,
                     InfeasibleZeroForcer, InvalidInput, Unsupported)
from .lab import SweepResult, bound_check, fit_dof, region_check, verify_decodability
from .numerics import CRational, Mode, exact_matrix, orth_projector, rank, solve_zero_forcer
from .schemes import (get_scheme, list_schemes, order2_delivery, order3_broadcast, pd22, pdd23, pdd33,
                      ppd33, ppp_zf)

__version__ = "0.1.0"

__all__ = [
    "ChannelRealization", "CsitConfig", "CsitView", "draw_channel", "view",
    "DofTuple", "Scheme", "SlotPlan", "Symbol", "Transcript", "counting_dof", "run_scheme",
    "DecodeReport", "decode_report", "oracle_decodable", "targets_decodable", "zf_rate",
    "ConfigMismatch", "CsitViolation", "DegenerateProjector", "DimensionMismatch",
    "InfeasibleZeroForcer", "InvalidInput", "Unsupported",
    "SweepResult", "bound_check", "fit_dof", "region_check", "verify_decodability",
    "CRational", "Mode", "exact_matrix", "orth_projector", "rank", "solve_zero_forcer",
    "get_scheme", "list_schemes", "order2_delivery", "order3_broadcast", "pd22", "pdd23", "pdd33",
    "ppd33", "ppp_zf",
]
