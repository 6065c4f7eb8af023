from .method import Method, MethodKind, BaselineFit
from .pmoe import PmoeMethod
from .yfit import YFitMethod, outcome_problem, y_fit, y_fit_path
from .oracle import OracleMethod, oracle
