"""Models Package - SMO 쌍대 솔버, SVDD, OCSVM, SSVDD"""

from .smo import DualSolution, solve_box_simplex_qp
from .svdd import SvddModel, solve_svdd
from .ocsvm import OcsvmModel, solve_ocsvm
from .ssvdd import RegularizerSpec, SsvddModel, fit_ssvdd

__all__ = [
    "DualSolution",
    "solve_box_simplex_qp",
    "SvddModel",
    "solve_svdd",
    "OcsvmModel",
    "solve_ocsvm",
    "RegularizerSpec",
    "SsvddModel",
    "fit_ssvdd",
]
