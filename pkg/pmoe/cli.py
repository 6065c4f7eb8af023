"""pmoe command line: select, estimate, gcv-path, simulate, generate."""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict, dataclass
from typing import List, Optional

import pandas as pd

from pmoe.config import PmoeConfig, activate_log_from_env
from pmoe.data import Dataset, read_csv, write_csv
from pmoe.errors import InvalidConfig, PmoeError
from pmoe.estimation import bootstrap_se, estimate_effect
from pmoe.event_log import close_log, log_event
from pmoe.methods import OracleMethod, PmoeMethod, YFitMethod
from pmoe.scenarios import Scenario, generate, get_scenario
from pmoe.selection import PmoeProblem, Selection, select_covariates, solve
from pmoe.simulation import SCHEMA_VERSION, SimulationReport, run
from pmoe.utils import misc, parse_float_list, warn

ORTHOGONALIZE_CORRELATION = 0.05
ORTHOGONALIZE_MODES = ("auto", "on", "off")


@dataclass
class RunConfig(object):
    """Resolved options of a select / estimate / gcv-path run.

    covariate_columns None means every column except outcome and treatment.
    """

    input_path: str
    outcome_column: str
    treatment_column: str
    covariate_columns: Optional[List[str]] = None
    tau: float = 0.5
    lambda_grid: Optional[List[float]] = None
    orthogonalize: str = "auto"
    bootstrap_b: int = 500
    seed: int = 0
    output_path: Optional[str] = None
    dichotomize: Optional[str] = None
    pilot_ridge: Optional[float] = None
    ps_terms: bool = False
    sweep_taus: Optional[List[float]] = None
    sweep_lambda: float = 0.01

    def __post_init__(self):
        if self.outcome_column == self.treatment_column:
            raise InvalidConfig("outcome and treatment must be different columns")
        if not (self.tau > 0 and math.isfinite(self.tau)):
            raise InvalidConfig("tau must be positive, got %r" % self.tau)
        if self.orthogonalize not in ORTHOGONALIZE_MODES:
            raise InvalidConfig(
                "orthogonalize must be one of %s" % ", ".join(ORTHOGONALIZE_MODES)
            )
        if self.bootstrap_b < 0:
            raise InvalidConfig("bootstrap count must be >= 0")
        if self.sweep_taus is not None and min(self.sweep_taus, default=1.0) <= 0:
            raise InvalidConfig("sweep taus must be positive")
        if self.sweep_lambda < 0:
            raise InvalidConfig("sweep lambda must be nonnegative")


def _finite(v) -> Optional[float]:
    if v is None or not math.isfinite(v):
        return None
    return float(v)


def load_dataset(config: RunConfig) -> Dataset:
    return read_csv(
        config.input_path,
        config.outcome_column,
        config.treatment_column,
        config.covariate_columns,
        config.dichotomize,
    )


def resolve_orthogonalize(config: RunConfig, ds: Dataset) -> bool:
    """auto: orthogonalize when some |corr| > 0.05 and r < n."""
    if config.orthogonalize == "on":
        return True
    if config.orthogonalize == "off":
        return False
    if ds.max_abs_correlation() <= ORTHOGONALIZE_CORRELATION:
        return False
    if ds.r >= ds.n:
        warn("covariates are correlated but r >= n, skipping orthogonalization")
        return False
    return True


def pmoe_config(config: RunConfig, ds: Dataset) -> PmoeConfig:
    return PmoeConfig(
        tau=config.tau,
        pilot_ridge=config.pilot_ridge,
        orthogonalize=resolve_orthogonalize(config, ds),
        lambda_grid=config.lambda_grid,
    )


def _provenance(config: RunConfig, pconfig: PmoeConfig, command: str) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": asdict(config),
        "resolved": asdict(pconfig),
    }


def selection_report(selection: Selection) -> dict:
    names = selection.dataset.column_names
    fit = selection.fit
    return {
        "selected": list(selection.selected_names),
        "selected_indices": list(selection.selected),
        "alpha_hat": {names[j]: float(a) for j, a in enumerate(fit.alpha_hat)},
        "lambda_hat": selection.path.lambda_hat,
        "tau": selection.problem.tau,
        "orthogonalized": selection.orthogonalized,
        "gcv_path": [
            {"lambda": lam, "gcv": _finite(value), "n_selected": k, "df": _finite(df)}
            for (lam, value, k, _), df in zip(selection.path.rows(), selection.path.df)
        ],
        "diagnostics": {
            "kkt_violation": fit.kkt_violation,
            "iterations": fit.iterations,
            "objective_value": fit.objective_value,
            "theta_tilde": selection.pilots.theta_tilde,
            "pilot_ridge": selection.pilots.ridge_used,
            "pilot_ridge_treatment": selection.pilots.ridge_treatment,
            "capped_weights": int(selection.weights.capped.sum()),
            "degenerate_gcv": int(selection.path.degenerate.sum()),
        },
    }


def write_json(report: dict, path: Optional[str]):
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as f:
            f.write(text)


def cmd_select(config: RunConfig) -> dict:
    ds = load_dataset(config)
    pconfig = pmoe_config(config, ds)
    selection = select_covariates(ds, pconfig)
    report = _provenance(config, pconfig, "select")
    report.update(selection_report(selection))
    return report


def cmd_estimate(config: RunConfig) -> dict:
    ds = load_dataset(config)
    pconfig = pmoe_config(config, ds)
    selection = select_covariates(ds, pconfig)
    estimate = estimate_effect(ds, selection.selected, config.ps_terms)
    dropped = None
    if config.bootstrap_b > 0:
        se, thetas = bootstrap_se(
            ds,
            config.tau,
            config.bootstrap_b,
            config.seed,
            pconfig,
            config.ps_terms,
        )
        estimate = estimate.with_se(se, thetas)
        dropped = config.bootstrap_b - len(thetas)
    report = _provenance(config, pconfig, "estimate")
    report.update(estimate.to_dict(ds.column_names))
    report.update(
        {
            "B": config.bootstrap_b,
            "bootstrap_dropped": dropped,
            "n": ds.n,
            "r": ds.r,
            "lambda_hat": selection.path.lambda_hat,
        }
    )
    return report


def cmd_gcv_path(config: RunConfig):
    """(path frame, tau sweep frame or None)"""
    ds = load_dataset(config)
    pconfig = pmoe_config(config, ds)
    selection = select_covariates(ds, pconfig)
    names = list(ds.column_names)

    records = []
    for (lam, value, k, alpha), df in zip(selection.path.rows(), selection.path.df):
        records.append([lam, value, k, df] + list(alpha))
    path = pd.DataFrame(records, columns=["lambda", "gcv", "n_selected", "df"] + names)

    sweep = None
    if config.sweep_taus:
        records = []
        for tau in config.sweep_taus:
            problem = PmoeProblem.build(selection.working, selection.pilots, tau)
            fit = solve(problem, selection.weights, config.sweep_lambda)
            records.append([tau, config.sweep_lambda] + list(fit.alpha_hat))
        sweep = pd.DataFrame(records, columns=["tau", "lambda"] + names)
    return path, sweep


def build_methods(
    names: List[str], taus: List[float], orthogonalize: Optional[bool] = None
) -> list:
    methods = []
    for name in names:
        if name == "pmoe":
            for tau in taus:
                methods.append(PmoeMethod(PmoeConfig(tau=tau), orthogonalize))
        elif name == "yfit":
            methods.append(YFitMethod(orthogonalize=orthogonalize))
        elif name == "oracle":
            methods.append(OracleMethod())
        else:
            raise InvalidConfig(
                "unknown method %r, expected pmoe, yfit or oracle" % name
            )
    return methods


def cmd_simulate(
    scenario_name: Optional[str],
    n: int,
    reps: int,
    methods: List[str],
    tau_list: List[float],
    seed: int = 0,
    out: Optional[str] = None,
    scenario_file: Optional[str] = None,
) -> SimulationReport:
    if scenario_file is not None:
        scenario = Scenario.from_file(scenario_file)
    elif scenario_name is not None:
        scenario = get_scenario(scenario_name)
    else:
        raise InvalidConfig("simulate needs a scenario name or --scenario-file")
    report = run(scenario, n, reps, build_methods(methods, tau_list), seed)
    if out is not None:
        prefix = out[:-5] if out.endswith(".json") else out
        report.write(prefix)
    return report


def cmd_generate(scenario_name: str, n: int, seed: int, out: str, scenario_file=None):
    if scenario_file is not None:
        scenario = Scenario.from_file(scenario_file)
    else:
        scenario = get_scenario(scenario_name)
    ds = generate(scenario, n, seed)
    return write_csv(ds, sys.stdout if out is None else out)


def _float_list(text: str) -> List[float]:
    try:
        values = parse_float_list(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma separated numbers: %r" % text)
    if len(values) == 0:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _name_list(text: str) -> List[str]:
    return [v.strip() for v in text.split(",") if v.strip() != ""]


def _add_data_args(p: argparse.ArgumentParser):
    p.add_argument("-i", "--input", type=str, required=True, help="CSV file with header")
    p.add_argument("--outcome", type=str, required=True, help="outcome column")
    p.add_argument("--treatment", type=str, required=True, help="treatment column")
    p.add_argument(
        "--covariates",
        type=_name_list,
        default=None,
        help="comma separated covariate columns (default: all remaining)",
    )
    p.add_argument("--tau", type=float, default=0.5, help="treatment model weight")
    p.add_argument(
        "--lambda-grid", type=_float_list, default=None, help="explicit lambda grid"
    )
    p.add_argument(
        "--orthogonalize", choices=ORTHOGONALIZE_MODES, default="auto"
    )
    p.add_argument("--ridge", type=float, default=None, help="pilot ridge")
    p.add_argument(
        "--dichotomize",
        choices=("below-median", "above-median"),
        default=None,
        help="binarize a continuous treatment at its median",
    )
    p.add_argument("-o", "--out", type=str, default=None, help="output file")


def _run_config(args) -> RunConfig:
    return RunConfig(
        input_path=args.input,
        outcome_column=args.outcome,
        treatment_column=args.treatment,
        covariate_columns=args.covariates,
        tau=args.tau,
        lambda_grid=args.lambda_grid,
        orthogonalize=args.orthogonalize,
        bootstrap_b=getattr(args, "bootstrap", 0),
        seed=getattr(args, "seed", 0),
        output_path=args.out,
        dichotomize=args.dichotomize,
        pilot_ridge=args.ridge,
        ps_terms=getattr(args, "ps_terms", False),
        sweep_taus=getattr(args, "sweep_taus", None),
        sweep_lambda=getattr(args, "sweep_lambda", 0.01),
    )


def _select(args) -> int:
    config = _run_config(args)
    write_json(cmd_select(config), config.output_path)
    return 0


def _estimate(args) -> int:
    config = _run_config(args)
    write_json(cmd_estimate(config), config.output_path)
    return 0


def _gcv_path(args) -> int:
    config = _run_config(args)
    path, sweep = cmd_gcv_path(config)
    if config.output_path is None:
        path.to_csv(sys.stdout, index=False, float_format="%.17g")
        if sweep is not None:
            sys.stdout.write("\n")
            sweep.to_csv(sys.stdout, index=False, float_format="%.17g")
        return 0
    path.to_csv(config.output_path, index=False, float_format="%.17g")
    if sweep is not None:
        stem, ext = os.path.splitext(config.output_path)
        sweep.to_csv(stem + "_tau" + (ext or ".csv"), index=False, float_format="%.17g")
    return 0


def _simulate(args) -> int:
    name = args.scenario_name if args.scenario_name is not None else args.scenario
    report = cmd_simulate(
        name,
        args.n,
        args.reps,
        args.methods,
        args.tau,
        args.seed,
        args.out,
        args.scenario_file,
    )
    if args.out is None:
        sys.stdout.write(report.to_json())
    return 0


def _generate(args) -> int:
    name = args.scenario_name if args.scenario_name is not None else args.scenario
    if name is None and args.scenario_file is None:
        raise InvalidConfig("generate needs a scenario name or --scenario-file")
    cmd_generate(name, args.n, args.seed, args.out, args.scenario_file)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pmoe",
        description="Confounder selection and treatment effect estimation",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="show progress")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("select", help="select covariates")
    _add_data_args(p)
    p.set_defaults(func=_select)

    p = sub.add_parser("estimate", help="select, then estimate the treatment effect")
    _add_data_args(p)
    p.add_argument(
        "-b", "--bootstrap", type=int, default=500, help="replicates, 0 disables"
    )
    p.add_argument("-s", "--seed", type=int, default=0)
    p.add_argument(
        "--ps-terms", action="store_true", help="add pi and pi^2 to the outcome model"
    )
    p.set_defaults(func=_estimate)

    p = sub.add_parser("gcv-path", help="lambda path and tau sweep as CSV")
    _add_data_args(p)
    p.add_argument("--sweep-taus", type=_float_list, default=None)
    p.add_argument("--sweep-lambda", type=float, default=0.01)
    p.set_defaults(func=_gcv_path)

    for command, func, helptext in (
        ("simulate", _simulate, "Monte Carlo comparison of methods"),
        ("generate", _generate, "write one scenario draw as CSV"),
    ):
        p = sub.add_parser(command, help=helptext)
        p.add_argument("scenario_name", nargs="?", default=None)
        p.add_argument("--scenario", type=str, default=None)
        p.add_argument("--scenario-file", type=str, default=None, help="JSON scenario")
        p.add_argument("-n", "--n", type=int, default=500, help="sample size")
        p.add_argument("-s", "--seed", type=int, default=0)
        p.add_argument("-o", "--out", type=str, default=None)
        if command == "simulate":
            p.add_argument("--reps", type=int, default=500)
            p.add_argument(
                "--methods", type=_name_list, default=["pmoe", "yfit", "oracle"]
            )
            p.add_argument("--tau", type=_float_list, default=[0.5])
        p.set_defaults(func=func)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    misc.verbose = args.verbose
    activate_log_from_env()
    log_event("CONFIG", {"argv": sys.argv[1:] if argv is None else list(argv)})
    try:
        return args.func(args)
    except PmoeError as e:
        print("error: %s" % e, file=sys.stderr)
        return e.exit_code
    finally:
        close_log()


if __name__ == "__main__":
    sys.exit(main())
