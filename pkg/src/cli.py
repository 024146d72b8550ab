"""
Command-line front end of the GWE toolkit.

Commands: table, verify, simulate, order, bound, characterize.
Exit codes: 0 success, 1 check failure, 2 configuration or parameter error.
Machine-readable output goes to stdout (or the result store with --out);
logs go to stderr.
"""
import argparse
import logging
import sys
from typing import Any, Dict, List, Optional, Sequence, Tuple

from src.config import Config, RunConfig
from src.distributions import (
    DistributionSpec,
    LambdaProfile,
    distribution_from_dict,
    parse_distribution,
)
from src.errors import ConfigError, GweError, ParameterDomainError
from src.extropy_engine import (
    beta_expectation,
    closed_form_for,
    erss_ranks,
    gwe_erss,
    gwe_erss_quantile,
    gwe_srs,
)
from src.file_utils import load_json_file, sha256_hex, to_csv_text, to_json_text
from src.mc_sim import PLAN_SCHEMES, SamplingPlan, draw, ks_marginal_check, mc_beta_expectation, mc_gwe_erss
from src.order_checks import (
    ORDERS,
    check_exponential_characterization,
    check_order,
    check_symmetry_characterization,
    verify_bound_theorem_3_2,
)
from src.report_schema import build_report
from src.result_store import ResultStore
from src.result_store_factory import create_result_store
from src.verification import FAULTS, SUITES, VerificationRunner
from src.weights import identity_weight, power_weight

logger = logging.getLogger(__name__)

COMMANDS = ("table", "verify", "simulate", "order", "bound", "characterize")
TABLE_COLUMNS = ("family", "params", "m", "n", "j_srs", "j_erss", "method", "error_estimate", "converged", "error")
SAMPLE_COLUMNS = ("cycle", "position", "role", "value")
TABLE_METHODS = ("auto", "closed_form", "quantile", "density")
DEFAULT_TABLE_DISTS = ("power:1", "power:2", "exponential:1", "pareto:2")

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG_ERROR = 2


def setup_logging(level: str = "INFO") -> logging.Logger:
    """
    Configure the package logger with one console handler on stderr.

    Args:
        level: Logging level name

    Returns:
        The package logger
    """
    package_logger = logging.getLogger("src")
    numeric = getattr(logging, level.upper(), None)
    if not isinstance(numeric, int):
        raise ConfigError(f"Unknown log level: {level}")
    package_logger.setLevel(numeric)

    # Add console handler if not already present
    if not package_logger.handlers:
        console_handler = logging.StreamHandler(sys.stderr)
        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )
        console_handler.setFormatter(formatter)
        package_logger.addHandler(console_handler)
    for handler in package_logger.handlers:
        handler.setLevel(numeric)
    return package_logger


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file (flags win over it)")
    common.add_argument("--seed", type=int)
    common.add_argument("--abs-tol", type=float, dest="abs_tol")
    common.add_argument("--rel-tol", type=float, dest="rel_tol")
    common.add_argument("--max-evaluations", type=int, dest="max_evaluations",
                        help="Integrand evaluation budget per integral")
    common.add_argument("--format", choices=("json", "csv"), dest="output_format")
    common.add_argument("--out", help="Result store key; stdout when omitted")
    common.add_argument("--verbose", action="store_true", help="Debug logging")
    common.add_argument("--grid", type=int, dest="grid_size")
    common.add_argument("--alpha", type=float, dest="ks_alpha", help="KS significance level")
    common.add_argument("--dist", action="append", dest="dists",
                        help="family:p1,p2 or @file.json; repeatable")
    common.add_argument("--weight-m", action="append", type=float, dest="weight_m",
                        help="weight exponent m of w(x) = x^m; repeatable")
    common.add_argument("--n", type=int, help="Single set size")
    common.add_argument("--n-max", type=int, dest="n_max", help="Set sizes 1..n-max")
    return common


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per CLI command."""
    parser = argparse.ArgumentParser(prog="gwe", description="General weighted extropy of ERSS designs")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common_parser()

    table = sub.add_parser("table", parents=[common], help="GWE table over families, m and n")
    table.add_argument("--method", choices=TABLE_METHODS, default="auto")

    verify = sub.add_parser("verify", parents=[common], help="Run the verification suites")
    verify.add_argument("--only", action="append", choices=SUITES, help="Run only these suites")
    verify.add_argument("--inject-fault", choices=FAULTS, dest="inject_fault",
                        help="Test hook; needs GWE_ENABLE_FAULT_INJECTION=true")
    verify.add_argument("--cycles", type=int)
    verify.add_argument("--draws", type=int, dest="mc_draws")

    simulate = sub.add_parser("simulate", parents=[common], help="Simulate a sampling design")
    simulate.add_argument("--scheme", choices=PLAN_SCHEMES, default="erss")
    simulate.add_argument("--cycles", type=int)
    simulate.add_argument("--draws", type=int, dest="mc_draws")

    order = sub.add_parser("order", parents=[common], help="Check a stochastic order between two laws")
    order.add_argument("--order", choices=ORDERS, required=True)

    sub.add_parser("bound", parents=[common], help="ERSS/SRS ratio bound")
    sub.add_parser("characterize", parents=[common], help="Exponential and symmetry characterizations")
    return parser


def load_distribution(text: str) -> DistributionSpec:
    """
    Parse a --dist value: 'family:p1,p2' or '@path.json'.

    Raises:
        ConfigError: On unreadable files or malformed specs
    """
    if text.startswith("@"):
        path = text[1:]
        try:
            data = load_json_file(path, None)
        except ValueError as exc:
            raise ConfigError(f"Malformed distribution file {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"Distribution file not found or not an object: {path}")
        return distribution_from_dict(data)
    return parse_distribution(text)


def _n_values(config: RunConfig, default_max: int) -> List[int]:
    if config.n is not None:
        values = [config.n]
    else:
        values = list(range(1, (config.n_max or default_max) + 1))
    if any(n < 1 for n in values):
        raise ConfigError(f"set sizes must be >= 1, got {values}")
    return values


def _weights(config: RunConfig) -> Tuple[float, ...]:
    return config.weight_m or (1.0,)


def _emit(config: RunConfig, store: Optional[ResultStore], text: str) -> None:
    if config.output_path:
        store = store or create_result_store(config.results_dir, config.result_storage_type)
        store.save_text(config.output_path, text)
        logger.info("wrote %s", store.describe(config.output_path))
    else:
        sys.stdout.write(text)


def _report_text(config: RunConfig, command: str, results: List[Dict[str, Any]], passed: bool,
                 **extra: Any) -> str:
    return to_json_text(build_report(command, config.to_dict(), results, passed, **extra))


def _quadrature(config: RunConfig) -> Dict[str, Any]:
    return {"abs_tol": config.abs_tol, "rel_tol": config.rel_tol, "max_evaluations": config.max_evaluations}


def _table_row(dist: DistributionSpec, m: float, n: int, method: str, config: RunConfig) -> Dict[str, Any]:
    row: Dict[str, Any] = {
        "family": dist.family,
        "params": ";".join(f"{p:g}" for p in dist.params),
        "m": m,
        "n": n,
        "j_srs": None,
        "j_erss": None,
        "method": method,
        "error_estimate": None,
        "converged": None,
        "error": "",
    }
    w = power_weight(m)
    tolerances = _quadrature(config)
    try:
        srs = gwe_srs(dist, w, n, **tolerances)
        if method == "auto":
            erss = closed_form_for(dist, w, n, **tolerances) or gwe_erss_quantile(dist, w, n, **tolerances)
        else:
            erss = gwe_erss(dist, w, n, method, **tolerances)
    except GweError as exc:
        logger.warning("row %s m=%s n=%s: %s", dist.label, m, n, exc)
        row["error"] = str(exc)
        return row
    row.update({"j_srs": srs.value, "j_erss": erss.value, "method": erss.method,
                "error_estimate": erss.error_estimate, "converged": erss.converged})
    return row


def cmd_table(config: RunConfig, method: str = "auto", store: Optional[ResultStore] = None) -> int:
    """GWE values of SRS and ERSS for every (dist, m, n); infeasible rows carry an error."""
    dists = [load_distribution(text) for text in (config.dists or DEFAULT_TABLE_DISTS)]
    rows = [_table_row(dist, m, n, method, config)
            for dist in dists for m in _weights(config) for n in _n_values(config, 3)]
    if config.output_format == "csv":
        text = to_csv_text(TABLE_COLUMNS, [[row[c] for c in TABLE_COLUMNS] for row in rows])
    else:
        text = _report_text(config, "table", rows, True)
    _emit(config, store, text)
    return EXIT_OK


def cmd_verify(config: RunConfig, fault: Optional[str] = None, store: Optional[ResultStore] = None) -> int:
    """Run the verification suites; exit 1 naming the failing checks when any fails."""
    report = VerificationRunner(config, fault).run(config.only)
    for name in report.failing():
        logger.error("check failed: %s", name)
    if config.output_format == "csv":
        text = to_csv_text(("suite", "name", "status"), [(r.suite, r.name, r.status) for r in report.results])
    else:
        text = _report_text(config, "verify", [r.to_dict() for r in report.results], report.passed,
                            failing=report.failing(), counts=report.counts())
    _emit(config, store, text)
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def _z(estimate: float, standard_error: float, target: float) -> float:
    return (estimate - target) / standard_error if standard_error > 0 else 0.0


def _mc_summary(dist: DistributionSpec, m: float, n: int, config: RunConfig) -> List[Dict[str, Any]]:
    """Monte Carlo beta expectations and ERSS GWE against quadrature, with z-scores."""
    w = power_weight(m)
    profile = LambdaProfile(dist, w)
    tolerances = _quadrature(config)
    rows = []
    for k, _ in erss_ranks(n):
        estimate = mc_beta_expectation(dist, w, k, n, config.mc_draws, config.seed)
        exact = beta_expectation(profile, k, n, **tolerances).value
        rows.append({"quantity": f"E_lambda_beta_{k}_of_{2 * n - 1}", "estimate": estimate.mean,
                     "standard_error": estimate.standard_error, "engine": exact,
                     "z": _z(estimate.mean, estimate.standard_error, exact)})
    mc = mc_gwe_erss(dist, w, n, config.mc_draws, config.seed)
    exact = gwe_erss_quantile(dist, w, n, **tolerances).value
    rows.append({"quantity": "gwe_erss", "estimate": mc.value, "standard_error": mc.error_estimate,
                 "engine": exact, "z": _z(mc.value, mc.error_estimate, exact)})
    return rows


def cmd_simulate(config: RunConfig, scheme: str = "erss", store: Optional[ResultStore] = None) -> int:
    """
    Simulate a design, store the sample CSV with its SHA-256 and a summary JSON.

    The CSV bytes depend only on the plan, so reruns with the same seed are identical.
    """
    if not config.dists or len(config.dists) != 1:
        raise ConfigError("simulate needs exactly one --dist")
    dist = load_distribution(config.dists[0])
    n = config.n if config.n is not None else 2
    m = _weights(config)[0]
    plan = SamplingPlan(scheme, n, config.cycles, config.seed)
    logger.info("seed %s", plan.seed)
    sample = draw(dist, plan)
    csv_text = to_csv_text(SAMPLE_COLUMNS, sample.to_csv_rows())
    digest = sha256_hex(csv_text)

    store = store or create_result_store(config.results_dir, config.result_storage_type)
    key = config.output_path or f"samples/{scheme}_{dist.family}_n{n}_seed{plan.seed}.csv"
    stem = key[:-4] if key.endswith(".csv") else key
    store.save_text(key, csv_text)
    store.save_text(f"{key}.sha256", f"{digest}  {key.rsplit('/', 1)[-1]}\n")
    logger.info("wrote %s (sha256 %s)", store.describe(key), digest)

    results: List[Dict[str, Any]] = []
    passed = True
    if plan.cycles >= 1000:
        alpha = config.ks_alpha / n
        for position in range(1, n + 1):
            verdict = ks_marginal_check(sample, position, dist, alpha)
            passed = passed and verdict.passed
            results.append({"quantity": "ks", **verdict.to_dict()})
    else:
        logger.warning("skipping KS checks: %s cycles is below 1000", plan.cycles)
    if scheme == "erss" and config.mc_draws > 0:
        results.extend(_mc_summary(dist, m, n, config))
    summary = build_report("simulate", config.to_dict(), results, passed)
    summary["config"]["sample_sha256"] = digest
    summary_key = f"{stem}_summary.json"
    store.save_text(summary_key, to_json_text(summary))
    logger.info("wrote %s", store.describe(summary_key))
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def cmd_order(config: RunConfig, order: str, store: Optional[ResultStore] = None) -> int:
    """Check X <=_order Y; exit 1 only when the verdict is no."""
    if not config.dists or len(config.dists) != 2:
        raise ConfigError("order needs exactly two --dist values (X then Y)")
    x_dist, y_dist = (load_distribution(text) for text in config.dists)
    report = check_order(order, x_dist, y_dist, config.grid_size)
    row = {"x": x_dist.to_dict(), "y": y_dist.to_dict(), **report.to_dict()}
    passed = report.holds != "no"
    if config.output_format == "csv":
        text = to_csv_text(("order", "x", "y", "holds", "max_violation", "grid_size"),
                           [(order, x_dist.label, y_dist.label, report.holds, report.max_violation,
                             report.grid_size)])
    else:
        text = _report_text(config, "order", [row], passed)
    _emit(config, store, text)
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def cmd_bound(config: RunConfig, store: Optional[ResultStore] = None) -> int:
    """ERSS/SRS ratio bound for every (dist, m, n)."""
    if not config.dists:
        raise ConfigError("bound needs at least one --dist")
    rows = []
    passed = True
    for text in config.dists:
        dist = load_distribution(text)
        for m in _weights(config):
            for n in _n_values(config, 6):
                record = verify_bound_theorem_3_2(dist, power_weight(m), n, config.grid_size,
                                                  **_quadrature(config))
                passed = passed and record.verdict != "violated"
                rows.append({"dist": dist.label, "m": m, **record.to_dict()})
    if config.output_format == "csv":
        text_out = to_csv_text(("dist", "m", "n", "ratio", "bound", "verdict"),
                               [(r["dist"], r["m"], r["values"]["n"], r["values"].get("ratio"),
                                 r["values"].get("bound"), r["verdict"]) for r in rows])
    else:
        text_out = _report_text(config, "bound", rows, passed)
    _emit(config, store, text_out)
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def cmd_characterize(config: RunConfig, store: Optional[ResultStore] = None) -> int:
    """Exponential fingerprint and odd-weight symmetry characterization of each --dist."""
    if not config.dists:
        raise ConfigError("characterize needs at least one --dist")
    rows = []
    passed = True
    for text in config.dists:
        dist = load_distribution(text)
        records = [check_symmetry_characterization(dist, identity_weight(), grid=config.grid_size,
                                                   **_quadrature(config))]
        if dist.support[0] >= 0:
            records.append(check_exponential_characterization(dist, **_quadrature(config)))
        for record in records:
            passed = passed and record.verdict != "violated"
            rows.append({"dist": dist.label, **record.to_dict()})
    if config.output_format == "csv":
        text_out = to_csv_text(("dist", "name", "verdict"), [(r["dist"], r["name"], r["verdict"]) for r in rows])
    else:
        text_out = _report_text(config, "characterize", rows, passed)
    _emit(config, store, text_out)
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Layer flags over the config file, the environment and the defaults."""
    overrides = {key: getattr(args, key, None)
                 for key in ("abs_tol", "rel_tol", "max_evaluations", "seed", "grid_size", "ks_alpha",
                             "output_format", "mc_draws", "cycles")}
    if args.verbose:
        overrides["log_level"] = "DEBUG"
    config = Config(config_file=args.config, overrides=overrides)
    return config.to_run_config(command=args.command, dists=args.dists, weight_m=args.weight_m, n=args.n,
                                n_max=args.n_max, output_path=args.out, only=getattr(args, "only", None))


def run(args: argparse.Namespace, store: Optional[ResultStore] = None) -> int:
    """Dispatch a parsed command."""
    config = resolve_config(args)
    setup_logging(config.log_level)
    logger.info("command %s started", config.command)
    if config.command == "table":
        code = cmd_table(config, args.method, store)
    elif config.command == "verify":
        code = cmd_verify(config, args.inject_fault, store)
    elif config.command == "simulate":
        code = cmd_simulate(config, args.scheme, store)
    elif config.command == "order":
        code = cmd_order(config, args.order, store)
    elif config.command == "bound":
        code = cmd_bound(config, store)
    else:
        code = cmd_characterize(config, store)
    logger.info("command %s finished with exit code %s", config.command, code)
    return code


def main(argv: Optional[Sequence[str]] = None, store: Optional[ResultStore] = None) -> int:
    """
    CLI entry point.

    Returns:
        Process exit code
    """
    args = build_parser().parse_args(argv)
    try:
        return run(args, store)
    except (ConfigError, ParameterDomainError) as exc:
        logger.error("%s", exc)
        return EXIT_CONFIG_ERROR
    except GweError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return EXIT_CONFIG_ERROR
    except OSError as exc:
        logger.error("I/O failure at %s: %s", getattr(exc, "filename", None) or "output", exc)
        return EXIT_CONFIG_ERROR
