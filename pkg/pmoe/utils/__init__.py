from .misc import printProgressBar, log, warn, rng_for, parse_float_list
