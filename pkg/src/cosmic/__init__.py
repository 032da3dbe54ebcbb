"""cosmic - knot invariants and chirally cosmetic surgery criteria.

Computes exact polynomial, finite type, Heegaard Floer rank and quantum SO(3)
data of knots given by PD codes, and evaluates the criteria that rule out
chirally cosmetic surgeries over whole knot tables.
"""

from .algebra import CyclotomicElement, LaurentPoly, LaurentPoly2, TruncatedSeries
from .classifier import Status, Verdict, classify, zero_type_only
from .config import Config, load_config
from .errors import CosmicError
from .finite_type import InvariantRecord, KnotPolynomials, build_record, v3_from_jones, v5
from .floer import RankProfile, ck_thin, hf_rank, slope_pair_constraints, solve_delta_system
from .knot_model import KnotDiagram, Slope, mirror, parse_dt, parse_pd, writhe
from .pipeline import KnotTableRow, Report, emit, ingest, run_pipeline
from .quantum import coefficient_vector, tau_so3_surgery, zero_type_obstruction
from .seifert import alexander_conway, seifert_matrix
from .skein import jones, kauffman_polynomial
from .utils import ProgressBar

__all__ = [
    "Config",
    "CosmicError",
    "CyclotomicElement",
    "InvariantRecord",
    "KnotDiagram",
    "KnotPolynomials",
    "KnotTableRow",
    "LaurentPoly",
    "LaurentPoly2",
    "ProgressBar",
    "RankProfile",
    "Report",
    "Slope",
    "Status",
    "TruncatedSeries",
    "Verdict",
    "alexander_conway",
    "build_record",
    "ck_thin",
    "classify",
    "coefficient_vector",
    "emit",
    "hf_rank",
    "ingest",
    "jones",
    "kauffman_polynomial",
    "load_config",
    "mirror",
    "parse_dt",
    "parse_pd",
    "run_pipeline",
    "seifert_matrix",
    "slope_pair_constraints",
    "solve_delta_system",
    "tau_so3_surgery",
    "v3_from_jones",
    "v5",
    "writhe",
    "zero_type_obstruction",
    "zero_type_only",
]

__version__ = "0.1.0"
