from .linear import least_squares, least_squares_residuals, with_intercept
from .logistic import LogisticFit, fit_logistic, negative_log_likelihood, gradient
