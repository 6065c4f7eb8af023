import json

# import cProfile

import pmoe
from pmoe.utils import misc

RANDOM_SEED = 42
N = 500
REPS = 20
SCENARIO = "s2"
TAUS = [0.5, 20]

# Setup and run one draw, then a short Monte Carlo comparison
print("PMOE confounder selection")
misc.verbose = True

scenario = pmoe.get_scenario(SCENARIO)
ds = pmoe.generate(scenario, N, RANDOM_SEED)

selection = pmoe.select_covariates(ds, pmoe.PmoeConfig(tau=0.5))
estimate = pmoe.estimate_effect(ds, selection.selected)
print("selected: %s" % ", ".join(selection.selected_names))
print("lambda_hat = %.4g, theta_hat = %.4f" % (selection.path.lambda_hat, estimate.theta_hat))

methods = [pmoe.PmoeMethod(pmoe.PmoeConfig(tau=tau)) for tau in TAUS]
methods += [pmoe.YFitMethod(), pmoe.OracleMethod()]

# cProfile.run("pmoe.run(scenario, N, REPS, methods, RANDOM_SEED)")
report = pmoe.run(scenario, N, REPS, methods, RANDOM_SEED)

print(report.table().to_string(index=False))
print(json.dumps(report.to_dict()["rows"], indent=4))
