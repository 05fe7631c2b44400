"""Command-line entry point: Markov model, simulation campaigns, theta fitting and comparisons.

Every command writes its artifacts plus a manifest.json into --out-dir;
``replay <manifest>`` re-runs the recorded command line.
"""
import argparse
import logging
import os
import sys
import time
from collections import defaultdict
from dataclasses import asdict, dataclass, field
from logging.handlers import RotatingFileHandler
from typing import List, Optional

from config import Config
from models import CampaignConfig, RunManifest
from src import __version__
from src.exceptions import (
    FitError, ParameterError, SNCError,
)
from src.model import MarkovChain, decoding_curve, mean_of_curve, summarize_chain
from src.reports import (
    GAMMA_HEADER, TABLE2_HEADER, read_manifest, read_model_outputs, read_sim_stats,
    write_csv, write_json, write_manifest, write_model_outputs, write_report, write_sim_stats,
)
from src.simulation import CampaignManager, DensityAdvisor, compare_model_sim, default_ladder
from src.theta import ThetaSource
from src.theta.factory import ThetaSourceFactory
from src.theta.gamma import W3_TAIL_SLOPE, gamma_of, params_for
from src.theta.oracle import estimate_theta_grid
from src.theta.regression import compare_w3_variants, fit_gamma, fit_params_from, fit_slopes
from src.theta.table_source import THETA_TABLE_HEADER

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

EXIT_OK = 0
EXIT_PARAMETER = 2
EXIT_TOLERANCE = 3
EXIT_INTERNAL = 4

# Published mean transmissions for q = 1: {(k, w): (model, simulation)}
TABLE2_PUBLISHED = {
    (32, 3): (43.83, 44.17), (32, 7): (33.62, 33.64), (32, 15): (33.58, 33.60),
    (64, 3): (100.34, 101.49), (64, 7): (65.92, 65.91), (64, 15): (65.62, 65.61), (64, 31): (65.62, 65.60),
    (128, 3): (230.36, 231.89), (128, 7): (131.22, 131.19), (128, 15): (129.85, 129.60),
    (128, 31): (129.85, 129.60),
}


@dataclass
class CommandResult:
    outputs: List[str] = field(default_factory=list)
    exit_code: int = EXIT_OK


def configure_logging(level: Optional[str] = None, log_file: Optional[str] = None):
    """Root logger: rotating file under logs/ plus an optional console stream"""
    log_file = log_file or Config.LOG_FILE
    directory = os.path.dirname(log_file)
    if directory and not os.path.exists(directory):
        os.makedirs(directory)

    handlers = [RotatingFileHandler(
        log_file,
        maxBytes=Config.LOG_MAX_FILE_SIZE_MB * 1024 * 1024,
        backupCount=Config.LOG_BACKUP_COUNT,
    )]
    if Config.LOG_CONSOLE_OUTPUT:
        handlers.append(logging.StreamHandler(sys.stderr))

    logging.basicConfig(
        level=getattr(logging, (level or Config.LOG_LEVEL).upper(), logging.INFO),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}")


def _theta_source(args, w: int) -> ThetaSource:
    if args.theta_table:
        return ThetaSourceFactory.create_source('table', w, args.q, path=args.theta_table)
    return ThetaSourceFactory.create_source('fitted', w, args.q, params=Config.get_fit_params(),
                                            continuous_w3=args.continuous_w3)


def _out(args, name: str) -> str:
    return os.path.join(args.out_dir, name)


def _model_outputs(args):
    if args.k is None or args.w is None:
        raise ParameterError("the model needs --k and --w")
    if args.q == 1 and args.w % 2 == 0:
        logger.warning("Over GF(2) every w=%d vector has even weight and spans at most rank %d; "
                       "a fixed-density campaign with these parameters never decodes", args.w, args.k - 1)
    chain = MarkovChain.build(args.k, args.w, args.q, _theta_source(args, args.w), alpha=args.alpha)
    logger.info("Chain k=%d w=%d q=%d alpha=%.3f has %d transient states",
                args.k, args.w, args.q, args.alpha, chain.n_transient)
    outputs = summarize_chain(chain, args.epsilon_max)
    if logger.isEnabledFor(logging.DEBUG):
        xi = decoding_curve(chain, tolerance=Config.XI_TOLERANCE, horizon_factor=Config.HORIZON_FACTOR)
        logger.debug("Mean from the xi curve %.9f vs solve %.9f (horizon N=%d)",
                     mean_of_curve(xi), outputs.expected_transmissions, len(xi) - 1)
    return outputs


def _campaign_stats(args):
    cfg = CampaignConfig(
        k=args.k, w=args.w, q=args.q, loss_rate=args.alpha, runs=args.runs, seed=args.seed,
        epsilon_max=args.epsilon_max, policy=args.policy,
        ladder=tuple(args.ladder) if args.ladder else None,
        tsnc_threshold=args.threshold, payload_length=args.payload_length, threads=args.threads,
        max_transmissions_factor=Config.MAX_TRANSMISSIONS_FACTOR,
    ).validate()
    advisor = None
    if cfg.policy == 'tsnc':
        ladder = cfg.ladder or default_ladder(cfg.k)
        advisor = DensityAdvisor(cfg.k, cfg.q, {w: _theta_source(args, w) for w in ladder})
    stats = CampaignManager(cfg, advisor).run_campaign()
    logger.info("Campaign mean %.4f (stderr %.4f) over %d runs", stats.mean, stats.stderr, stats.runs)
    if cfg.policy == 'tsnc':
        logger.info("Mean TSNC density per rank: %s",
                    ', '.join(f"{r}:{w:.2f}" for r, w in stats.density_curve))
    return stats


def cmd_model(args) -> CommandResult:
    outputs = _model_outputs(args)
    print(f"expected transmissions: {outputs.expected_transmissions:.4f}")
    return CommandResult(write_model_outputs(args.out_dir, outputs))


def cmd_simulate(args) -> CommandResult:
    stats = _campaign_stats(args)
    print(f"mean transmissions: {stats.mean:.4f} +/- {stats.stderr:.4f}")
    return CommandResult(write_sim_stats(args.out_dir, stats))


def cmd_fit_theta(args) -> CommandResult:
    w, q = args.w, args.q
    if w is None:
        raise ParameterError("fit-theta needs --w")
    c_values = args.c_values or list(range(args.c_min or w, args.c_max + 1, args.c_step))
    grid = estimate_theta_grid(q, w, c_values, args.r_points, args.trials, args.seed,
                               threads=args.threads, max_attempts=Config.ORACLE_MAX_ATTEMPTS)
    samples = grid.samples
    outputs = [write_csv(_out(args, 'theta_table.csv'), THETA_TABLE_HEADER, [s.to_row() for s in samples])]

    by_c = defaultdict(list)
    for s in samples:
        by_c[s.c].append(s)
    fit_params = Config.get_fit_params()
    gamma_points, rows = [], []
    for c in sorted(by_c):
        try:
            gamma_hat = fit_gamma(by_c[c], min_points=1)
        except FitError:
            logger.warning("No informative theta samples at c=%d; skipping", c)
            continue
        gamma_points.append((c, gamma_hat))
        published = continuous = None
        if w >= 3:
            published = gamma_of(c, w, q, fit_params)
            continuous = gamma_of(c, w, q, fit_params, continuous_w3=True)
        rows.append((c, gamma_hat, published, continuous))
    outputs.append(write_csv(_out(args, 'gamma_fit.csv'), GAMMA_HEADER, rows))

    fit = fit_slopes(gamma_points, w, q)
    defaults = params_for(q, fit_params)
    try:
        fitted = asdict(fit_params_from([fit], defaults))
    except ParameterError as e:
        logger.warning("Regressed slopes do not form a valid parameter set: %s", e)
        fitted = None
    summary = {
        'q': q,
        'w': w,
        'trials': args.trials,
        'fit': fit.to_dict(),
        'defaults': asdict(defaults),
        'fitted_params': fitted,
        'w3_variants': compare_w3_variants(gamma_points, defaults) if w == 3 else None,
        'w3_tail_slope': W3_TAIL_SLOPE,
        'skipped': [{'c': c, 'r': r} for c, r in grid.skipped],
    }
    outputs.append(write_json(_out(args, 'slopes.json'), summary))
    print(f"{fit.regime} slope for q={q}, w={w}: {fit.slope:.4f} (rms {fit.residual_rms:.4f})")
    return CommandResult(outputs)


def cmd_compare(args) -> CommandResult:
    outputs = []
    if args.model_dir or args.sim_dir:
        if not (args.model_dir and args.sim_dir):
            raise ParameterError("--model-dir and --sim-dir must be given together")
        model = read_model_outputs(args.model_dir)
        stats = read_sim_stats(args.sim_dir)
    else:
        model = _model_outputs(args)
        stats = _campaign_stats(args)
        outputs += write_model_outputs(args.out_dir, model)
        outputs += write_sim_stats(args.out_dir, stats)

    report = compare_model_sim(model, stats, Config.COMPARE_TOLERANCES)
    outputs += write_report(args.out_dir, report)
    for row in report.rows:
        print(f"{row['metric']}: {row['value']:.3e} (tolerance {row['tolerance']:.1e}) "
              f"{'ok' if row['passed'] else 'FAILED'}")
    if not report.passed:
        logger.error("Model and simulation disagree beyond tolerance")
        return CommandResult(outputs, EXIT_TOLERANCE)
    return CommandResult(outputs)


def _relative_error(value: float, reference: float) -> float:
    return abs(value - reference) / reference


def cmd_table2(args) -> CommandResult:
    keys = [key for key in TABLE2_PUBLISHED if not args.k_values or key[0] in args.k_values]
    if not keys:
        raise ParameterError(f"no published entries for k in {args.k_values}")
    rows = []
    worst, worst_key = 0.0, None
    for k, w in keys:
        published_model, published_sim = TABLE2_PUBLISHED[(k, w)]
        chain = MarkovChain.build(k, w, args.q, _theta_source(args, w))
        model = summarize_chain(chain, 0).expected_transmissions
        model_error = _relative_error(model, published_model)
        continuous = continuous_error = None
        if w == 3 and not args.theta_table:
            if args.continuous_w3:
                continuous = model
            else:
                source = ThetaSourceFactory.create_source('fitted', w, args.q, params=Config.get_fit_params(),
                                                          continuous_w3=True)
                continuous = summarize_chain(MarkovChain.build(k, w, args.q, source), 0).expected_transmissions
            continuous_error = _relative_error(continuous, published_model)
            logger.info("k=%d w=3: continuous exponent gives %.4f (%.2f%% off the published value)",
                        k, continuous, 100 * continuous_error)
        simulated = sim_error = None
        if args.simulate:
            sim_args = argparse.Namespace(**{**vars(args), 'k': k, 'w': w, 'alpha': 0.0, 'policy': 'fixed'})
            simulated = _campaign_stats(sim_args).mean
            sim_error = _relative_error(simulated, published_sim)
        for error in (model_error, sim_error):
            if error is not None and error > worst:
                worst, worst_key = error, (k, w)
        logger.info("k=%d w=%d: model %.4f (published %.2f)", k, w, model, published_model)
        rows.append((k, w, args.q, model, published_model, model_error, continuous, continuous_error,
                     simulated, published_sim, sim_error))
    outputs = [write_csv(_out(args, 'table2.csv'), TABLE2_HEADER, rows)]
    print(f"worst relative error: {worst:.4%}" + (f" at k={worst_key[0]}, w={worst_key[1]}" if worst_key else ''))
    if worst > Config.COMPARE_TOLERANCES['mean_relative_error']:
        if worst_key[1] == 3 and not args.continuous_w3:
            print("the printed w=3 exponent misses the published value; see model_continuous_w3 "
                  "or pass --continuous-w3")
        return CommandResult(outputs, EXIT_TOLERANCE)
    return CommandResult(outputs)


def cmd_replay(args) -> CommandResult:
    manifest = read_manifest(args.manifest)
    argv = list(manifest.config.get('argv') or [])
    if not argv:
        raise ParameterError(f"manifest {args.manifest} records no command line")
    if argv[0] == 'replay':
        raise ParameterError("a replay manifest cannot be replayed")
    if args.out_dir:
        argv += ['--out-dir', args.out_dir]
    logger.info("Replaying %s", ' '.join(argv))
    return CommandResult([], main(argv, configure=False))


def _add_model_flags(parser, w_required: bool = False, k_required: bool = True):
    parser.add_argument('--k', type=int, required=k_required, help='generation size')
    parser.add_argument('--w', type=int, required=w_required, help='non-zero coefficients per coding vector')
    parser.add_argument('--q', type=int, default=1, help='field GF(2^q)')
    parser.add_argument('--alpha', type=float, default=Config.LOSS_RATE, help='packet erasure probability')
    parser.add_argument('--epsilon-max', type=int, default=Config.EPSILON_MAX)
    parser.add_argument('--theta-table', help='theta_table.csv from fit-theta, instead of the fitted model')
    parser.add_argument('--continuous-w3', action='store_true', default=Config.CONTINUOUS_W3,
                        help='continuous variant of the w=3 exponent')


def _add_campaign_flags(parser):
    parser.add_argument('--runs', type=int, default=Config.RUNS)
    parser.add_argument('--seed', type=int, default=Config.SEED)
    parser.add_argument('--policy', choices=['fixed', 'tsnc'], default='fixed')
    parser.add_argument('--ladder', type=_int_list, help='TSNC densities, e.g. 3,7,15')
    parser.add_argument('--threshold', type=float, default=Config.TSNC_THRESHOLD,
                        help='TSNC cost threshold 1/(1 - p00)')
    parser.add_argument('--payload-length', type=int, default=Config.PAYLOAD_LENGTH,
                        help='bytes per packet; 0 tracks coefficients only')
    parser.add_argument('--threads', type=int, default=Config.THREADS)


def _add_out_dir(parser):
    parser.add_argument('--out-dir', default=Config.OUTPUT_DIR)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='snc', description='Sparse network coding decoding model')
    parser.add_argument('--log-level', default=None, help='DEBUG, INFO, WARNING, ERROR')
    parser.add_argument('--log-file', default=None)
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('model', help='Markov-chain metrics')
    _add_model_flags(p, w_required=True)
    _add_out_dir(p)
    p.set_defaults(func=cmd_model)

    p = sub.add_parser('simulate', help='Monte Carlo decoding campaign')
    _add_model_flags(p)
    _add_campaign_flags(p)
    _add_out_dir(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser('fit-theta', help='estimate theta and regress gamma(c)')
    p.add_argument('--q', type=int, default=1)
    p.add_argument('--w', type=int, required=True)
    p.add_argument('--trials', type=int, default=Config.ORACLE_TRIALS)
    p.add_argument('--c-values', type=_int_list, help='explicit covered-column grid')
    p.add_argument('--c-min', type=int, default=None, help='defaults to w')
    p.add_argument('--c-max', type=int, default=64)
    p.add_argument('--c-step', type=int, default=4)
    p.add_argument('--r-points', type=int, default=Config.ORACLE_R_POINTS)
    p.add_argument('--seed', type=int, default=Config.SEED)
    p.add_argument('--threads', type=int, default=Config.THREADS)
    _add_out_dir(p)
    p.set_defaults(func=cmd_fit_theta)

    p = sub.add_parser('compare', help='model against simulation')
    _add_model_flags(p, k_required=False)
    _add_campaign_flags(p)
    p.add_argument('--model-dir', help='directory written by the model command')
    p.add_argument('--sim-dir', help='directory written by the simulate command')
    _add_out_dir(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser('table2', help='published mean-transmission grid for q=1')
    p.add_argument('--k-values', type=_int_list, help='restrict to these generation sizes')
    p.add_argument('--simulate', action='store_true', help='also run a campaign per entry')
    p.add_argument('--theta-table', help=argparse.SUPPRESS)
    p.add_argument('--continuous-w3', action='store_true', default=Config.CONTINUOUS_W3)
    _add_campaign_flags(p)
    p.set_defaults(q=1, epsilon_max=Config.EPSILON_MAX)
    _add_out_dir(p)
    p.set_defaults(func=cmd_table2)

    p = sub.add_parser('replay', help='re-run a command from its manifest.json')
    p.add_argument('manifest')
    p.add_argument('--out-dir', default=None, help='write to another directory')
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv: Optional[List[str]] = None, configure: bool = True) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    if configure:
        configure_logging(args.log_level, args.log_file)

    if args.command != 'replay':
        os.makedirs(args.out_dir, exist_ok=True)
    started = time.monotonic()
    try:
        result = args.func(args)
    except ParameterError as e:
        logger.error("%s: %s", args.command, e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARAMETER
    except SNCError as e:
        logger.exception("%s failed", args.command)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INTERNAL

    if args.command != 'replay':
        config = {key: value for key, value in vars(args).items() if key != 'func'}
        # Global logging flags precede the subcommand and are not part of the run.
        config['argv'] = argv[argv.index(args.command):]
        manifest = RunManifest(
            command=args.command,
            config=config,
            seed=getattr(args, 'seed', None),
            version=__version__,
            outputs=[os.path.basename(p) for p in result.outputs],
            duration_seconds=round(time.monotonic() - started, 3),
        )
        write_manifest(args.out_dir, manifest)
    return result.exit_code


if __name__ == '__main__':
    sys.exit(main())
