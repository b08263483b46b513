"""
Command-line entry point.

    python main.py simulate --iterations 100 --seed 7 --method topsis --weighting ahp,bwm-gwo
    python main.py weights --class streaming --weighting bwm-gwo
    python main.py rank --matrix networks.csv --method saw
    python main.py weight-study --class streaming --scenarios 50
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, Optional, Sequence, Tuple, Type, TypeVar

from pydantic import ValidationError

from config import PROFILE_KEY_PREFIX, load_config_file, settings
from harness import run_experiment, weight_study
from madm import normalize_saw, normalize_topsis, saw_rank, topsis_rank
from models import (
    RAT_ALIASES,
    AttributeId,
    BadParamsError,
    ConfigError,
    DecisionMatrix,
    ExperimentConfig,
    GwoConfig,
    HybridParams,
    MatrixError,
    Method,
    RatProfile,
    Removal,
    ScenarioConfig,
    TrafficClass,
    Weighting,
)
from scenario import builtin_profiles, derive_stream, generate_networks
from storage import (
    dumps,
    read_matrix_csv,
    stats_frame,
    weight_study_frame,
    weights_frame,
    weights_payload,
    write_matrix_csv,
    write_stats,
)
from weighting import weights_for

logger = logging.getLogger(__name__)

E = TypeVar("E")

USAGE_ERRORS = (ConfigError, BadParamsError, MatrixError, ValidationError)


# MARK: - Value parsing

def parse_choices(text: str, enum: Type[E], name: str) -> Tuple[E, ...]:
    """Comma-separated enum values; "all" selects every member"""
    if text.strip().lower() == "all":
        return tuple(enum)
    chosen = []
    for part in text.split(","):
        part = part.strip().lower()
        try:
            chosen.append(enum(part))
        except ValueError:
            allowed = ", ".join(m.value for m in enum)
            raise BadParamsError(f"Unknown {name} '{part}' (choose from {allowed})")
    return tuple(chosen)


def choices_type(enum: Type[E], name: str) -> Callable[[str], Tuple[E, ...]]:
    """argparse type for a comma-separated enum list"""
    def parse(text: str) -> Tuple[E, ...]:
        return parse_choices(text, enum, name)
    parse.__name__ = name
    return parse


def parse_bool(text: str) -> bool:
    value = text.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"'{text}' is not a boolean")


def _convert(raw: str, convert: Callable, key: str):
    try:
        return convert(raw)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Config key '{key}': {e}")


def _pick(flag_value, file_values: Dict[str, str], key: str, convert: Callable, default):
    """Flag value, then config file value, then default"""
    if flag_value is not None:
        return flag_value
    if key in file_values:
        return _convert(file_values[key], convert, key)
    return default


def profile_overrides(file_values: Dict[str, str]) -> Optional[Tuple[RatProfile, ...]]:
    """
    Apply `profile_<RAT>_<ATTR>=lo,hi` entries to the built-in RAT profiles.

    Returns:
        The adjusted profiles, or None if the config file has no profile entries
    """
    entries = {k: v for k, v in file_values.items() if k.startswith(PROFILE_KEY_PREFIX)}
    if not entries:
        return None

    ranges = {p.rat: dict(p.ranges) for p in builtin_profiles()}
    for key, value in entries.items():
        rat_name, _, attr_name = key[len(PROFILE_KEY_PREFIX):].rpartition("_")
        rat = RAT_ALIASES.get(rat_name.upper())
        if rat is None:
            raise ConfigError(f"Config key '{key}': unknown RAT '{rat_name}'")
        try:
            attr = AttributeId(attr_name.upper())
        except ValueError:
            raise ConfigError(f"Config key '{key}': unknown attribute '{attr_name}'")

        bounds = _convert(value, lambda v: tuple(float(x) for x in v.split(",")), key)
        if len(bounds) != 2:
            raise ConfigError(f"Config key '{key}' needs 'lo,hi'")
        ranges[rat][attr] = bounds

    return tuple(RatProfile(rat=rat, ranges=r) for rat, r in ranges.items())


# MARK: - Commands

def build_experiment_config(args: argparse.Namespace) -> Tuple[ExperimentConfig, Path, str]:
    file_values = load_config_file(args.config) if args.config else {}

    fmt = _pick(args.format, file_values, "format", str, settings.OUTPUT_FORMAT)
    if fmt not in ("csv", "json"):
        raise ConfigError(f"Output format must be csv or json, got '{fmt}'")
    out = Path(_pick(args.out, file_values, "out", str, f"rrp_stats.{fmt}"))

    cfg = ExperimentConfig(
        iterations=_pick(args.iterations, file_values, "iterations", int, settings.ITERATIONS),
        seed=_pick(args.seed, file_values, "seed", int, settings.SEED),
        methods=_pick(args.method, file_values, "method", choices_type(Method, "method"), tuple(Method)),
        weightings=_pick(args.weighting, file_values, "weighting", choices_type(Weighting, "weighting"),
                         tuple(Weighting)),
        classes=_pick(args.traffic_class, file_values, "class", choices_type(TrafficClass, "class"),
                      tuple(TrafficClass)),
        removals=_pick(args.removal, file_values, "removal", choices_type(Removal, "removal"), (Removal.WORST,)),
        chain=_pick(args.chain, file_values, "chain", parse_bool, True),
        reweight_per_step=_pick(args.reweight_per_step, file_values, "reweight_per_step", parse_bool, False),
        workers=_pick(args.workers, file_values, "workers", int, settings.WORKERS),
        scenario=ScenarioConfig(
            networks_per_iteration=_pick(args.networks, file_values, "networks", int,
                                         settings.NETWORKS_PER_ITERATION),
            profiles=profile_overrides(file_values),
        ),
        gwo=GwoConfig(
            pack_size=_pick(args.pack_size, file_values, "pack_size", int, settings.GWO_PACK_SIZE),
            iterations=_pick(args.gwo_iters, file_values, "gwo_iters", int, settings.GWO_ITERATIONS),
            penalty_coeff=_pick(args.penalty, file_values, "penalty", float, settings.GWO_PENALTY),
        ),
        hybrid=HybridParams(
            alpha=_pick(args.alpha, file_values, "alpha", float, settings.HYBRID_ALPHA),
            beta=_pick(args.beta, file_values, "beta", float, settings.HYBRID_BETA),
        ),
    )
    return cfg, out, fmt


def cmd_simulate(args: argparse.Namespace) -> int:
    cfg, out, fmt = build_experiment_config(args)
    stats = run_experiment(cfg)
    write_stats(stats, out, fmt, metadata={"config": cfg.model_dump(mode="json")})
    print(stats_frame(stats).to_string(index=False))
    return 0


def _hybrid(args: argparse.Namespace) -> HybridParams:
    return HybridParams(
        alpha=settings.HYBRID_ALPHA if args.alpha is None else args.alpha,
        beta=settings.HYBRID_BETA if args.beta is None else args.beta,
    )


def _gwo(args: argparse.Namespace) -> GwoConfig:
    return GwoConfig(
        pack_size=settings.GWO_PACK_SIZE if args.pack_size is None else args.pack_size,
        iterations=settings.GWO_ITERATIONS if args.gwo_iters is None else args.gwo_iters,
        penalty_coeff=settings.GWO_PENALTY if args.penalty is None else args.penalty,
        seed=settings.SEED if args.seed is None else args.seed,
    )


def _networks(args: argparse.Namespace) -> int:
    return settings.NETWORKS_PER_ITERATION if args.networks is None else args.networks


def cmd_weights(args: argparse.Namespace) -> int:
    tc = TrafficClass(args.traffic_class)
    weighting = Weighting(args.weighting)
    method = Method(args.method)
    hybrid = _hybrid(args)
    gwo = _gwo(args)

    dm: Optional[DecisionMatrix] = None
    if args.matrix:
        dm = read_matrix_csv(args.matrix)
    elif weighting in (Weighting.GWO, Weighting.BWM_GWO) or args.save_matrix:
        scenario = ScenarioConfig(networks_per_iteration=_networks(args))
        dm = generate_networks(scenario, derive_stream(gwo.seed))
    if args.save_matrix:
        write_matrix_csv(dm, args.save_matrix)

    bundle = weights_for(weighting, tc, method, dm, gwo, hybrid)
    vectors = {"subjective": bundle.subjective, "objective": bundle.objective, "combined": bundle.combined}

    extra = {"class": tc.value, "weighting": weighting.value, "method": method.value}
    if bundle.bwm is not None:
        extra.update(xi_star=bundle.bwm.xi_star, consistency_ratio=bundle.bwm.consistency_ratio)

    if args.format == "json":
        sys.stdout.write(dumps(weights_payload(vectors, extra)))
    else:
        print(weights_frame(vectors).to_string(float_format=lambda v: f"{v:.6f}"))
        if bundle.bwm is not None:
            print(f"xi* = {bundle.bwm.xi_star:.6g}, consistency ratio = {bundle.bwm.consistency_ratio:.4f}")
    return 0


def cmd_rank(args: argparse.Namespace) -> int:
    dm = read_matrix_csv(args.matrix)
    tc = TrafficClass(args.traffic_class)
    method = Method(args.method)
    bundle = weights_for(Weighting(args.weighting), tc, method, dm, _gwo(args), _hybrid(args))

    if method is Method.TOPSIS:
        ranking, _ = topsis_rank(normalize_topsis(dm), bundle.combined)
    else:
        ranking = saw_rank(normalize_saw(dm), bundle.combined)

    rows = [
        {"rank": position + 1, "candidate": dm.label(i), "score": ranking.scores[i]}
        for position, i in enumerate(ranking.order)
    ]
    if args.format == "json":
        sys.stdout.write(dumps({"method": method.value, "weights": bundle.combined.as_dict(), "ranking": rows}))
    else:
        for row in rows:
            print(f"{row['rank']:>3}  {row['candidate']:<10} {row['score']:.6f}")
    return 0


def cmd_weight_study(args: argparse.Namespace) -> int:
    tc = TrafficClass(args.traffic_class)
    methods = parse_choices(args.method, Method, "method")
    scenario = ScenarioConfig(networks_per_iteration=_networks(args))
    seed = settings.SEED if args.seed is None else args.seed

    results = weight_study(tc, methods, args.scenarios, seed, scenario, _gwo(args), _hybrid(args))
    if args.format == "json":
        sys.stdout.write(dumps({"results": [r.model_dump(mode="json") for r in results]}))
    else:
        print(weight_study_frame(results).to_string(index=False, float_format=lambda v: f"{v:.4f}"))
    return 0


# MARK: - Parser

def _add_weight_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--alpha", type=float, help="Subjective share of the comprehensive weight")
    parser.add_argument("--beta", type=float, help="Objective share of the comprehensive weight")
    parser.add_argument("--pack-size", type=int, help="GWO pack size")
    parser.add_argument("--gwo-iters", type=int, help="GWO iterations")
    parser.add_argument("--penalty", type=float, help="GWO ordering penalty coefficient")
    parser.add_argument("--seed", type=int, help="Master seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rrp", description="Rank reversal experiments for network selection")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="More log output")
    parser.add_argument("-q", "--quiet", action="count", default=0, help="Less log output")
    commands = parser.add_subparsers(dest="command", required=True)

    simulate = commands.add_parser("simulate", help="Run the Monte-Carlo rank reversal experiment")
    simulate.add_argument("--config", help="Flat key=value file with defaults for these flags")
    simulate.add_argument("--iterations", type=int)
    simulate.add_argument("--method", type=choices_type(Method, "method"),
                          help="Comma-separated: topsis,saw or all")
    simulate.add_argument("--weighting", type=choices_type(Weighting, "weighting"),
                          help="Comma-separated: ahp,bwm,gwo,bwm-gwo or all")
    simulate.add_argument("--class", dest="traffic_class",
                          type=choices_type(TrafficClass, "class"),
                          help="Comma-separated traffic classes or all")
    simulate.add_argument("--removal", type=choices_type(Removal, "removal"),
                          help="Comma-separated: best,worst")
    simulate.add_argument("--chain", action=argparse.BooleanOptionalAction, default=None,
                          help="Remove down to two candidates (default) or once")
    simulate.add_argument("--reweight-per-step", action=argparse.BooleanOptionalAction, default=None,
                          help="Recompute GWO weights after every removal")
    simulate.add_argument("--networks", type=int, help="Candidates per iteration (multiple of 4)")
    simulate.add_argument("--workers", type=int, help="Worker processes")
    simulate.add_argument("--out", help="Stats output path")
    simulate.add_argument("--format", choices=["csv", "json"])
    _add_weight_flags(simulate)
    simulate.set_defaults(handler=cmd_simulate)

    weights = commands.add_parser("weights", help="Print the weight vectors of one weighting scheme")
    weights.add_argument("--class", dest="traffic_class", required=True, choices=[c.value for c in TrafficClass])
    weights.add_argument("--weighting", default=Weighting.BWM_GWO.value, choices=[w.value for w in Weighting])
    weights.add_argument("--method", default=Method.TOPSIS.value, choices=[m.value for m in Method],
                         help="Method whose score spread GWO maximizes")
    weights.add_argument("--matrix", help="Decision matrix CSV for GWO (generated when omitted)")
    weights.add_argument("--save-matrix", help="Write the decision matrix used to this CSV path")
    weights.add_argument("--networks", type=int, help="Candidates in a generated matrix")
    weights.add_argument("--format", default="table", choices=["table", "json"])
    _add_weight_flags(weights)
    weights.set_defaults(handler=cmd_weights)

    rank = commands.add_parser("rank", help="Rank the candidates of a decision matrix CSV")
    rank.add_argument("--matrix", required=True)
    rank.add_argument("--method", default=Method.TOPSIS.value, choices=[m.value for m in Method])
    rank.add_argument("--weighting", default=Weighting.AHP.value, choices=[w.value for w in Weighting])
    rank.add_argument("--class", dest="traffic_class", default=TrafficClass.CONVERSATIONAL.value,
                      choices=[c.value for c in TrafficClass])
    rank.add_argument("--format", default="table", choices=["table", "json"])
    _add_weight_flags(rank)
    rank.set_defaults(handler=cmd_rank)

    study = commands.add_parser("weight-study", help="Compare comprehensive and AHP weights over seeded scenarios")
    study.add_argument("--class", dest="traffic_class", default=TrafficClass.STREAMING.value,
                       choices=[c.value for c in TrafficClass])
    study.add_argument("--method", default="all", help="Comma-separated: topsis,saw or all")
    study.add_argument("--scenarios", type=int, default=50)
    study.add_argument("--networks", type=int)
    study.add_argument("--format", default="table", choices=["table", "json"])
    _add_weight_flags(study)
    study.set_defaults(handler=cmd_weight_study)

    return parser


def configure_logging(verbosity: int) -> None:
    level = logging.getLevelName(settings.LOG_LEVEL.upper())
    if not isinstance(level, int):
        level = logging.INFO
    level = min(max(level - 10 * verbosity, logging.DEBUG), logging.CRITICAL)
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def _one_line(error: Exception) -> str:
    return "; ".join(line.strip() for line in str(error).splitlines() if line.strip())


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on bad flags and 0 after --help
        return e.code if isinstance(e.code, int) else 2
    configure_logging(args.verbose - args.quiet)

    try:
        return args.handler(args)
    except USAGE_ERRORS as e:
        print(f"error: {_one_line(e)}", file=sys.stderr)
        return 2
    except Exception as e:
        logger.debug("Command failed", exc_info=True)
        print(f"error: {_one_line(e)}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
