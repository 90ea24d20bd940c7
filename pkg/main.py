#!/usr/bin/env python3
"""
Beltrami Verification Toolkit

Command line front end: exact classification of exponent hypotheses for the
Euler and Navier-Stokes energy equality and regularity criteria, the L_n/R_n
table, and the numerical experiments (boundary mollifier, Trkal runs, field
identity residuals). Results are written as CSV to stdout or --out; logs go
to stderr.
"""

import argparse
import os
import sys

import numpy as np

from bootstrap import (
    elementary_lambda_time_only,
    elementary_lambda_trace,
    euler_beltrami_trace,
    nse_beltrami_trace,
    trace_rows,
)
from config import (
    BETA0_COLUMNS,
    COMMUTATION_COLUMNS,
    CONVERGENCE_COLUMNS,
    DEFAULT_BALL_GRID,
    DEFAULT_DELTAS,
    DEFAULT_DT,
    DEFAULT_EPSILON,
    DEFAULT_MAX_ITER,
    DEFAULT_OUTPUT_DIR,
    DEFAULT_QUAD_ORDER,
    DEFAULT_SEED,
    DEFAULT_T_END,
    DEFAULT_TORUS_GRID,
    DEFAULT_VISCOSITY,
    DEFAULT_XI,
    DIVERGENCE_COLUMNS,
    ELEMENTARY_COLUMNS,
    GRADIENT_BOUND_COLUMNS,
    JACOBIAN_COLUMNS,
    LEDGER_COLUMNS,
    LOG_LEVEL,
    LN_RN_COLUMNS,
    REFINEMENT_DELTA,
    REFINEMENT_XI,
    REGULARITY_COLUMNS,
    RESIDUAL_COLUMNS,
    SUPPORT_COLUMNS,
    TIME_GRADIENT_COLUMNS,
    TRACE_COLUMNS,
    UNIFORM_TIME_COLUMNS,
    VERSION,
)
from criteria import (
    BoundaryCondition,
    DomainMeta,
    System,
    curl_criterion_verdict,
    euler_gradient_verdict,
    nse_gradient_verdict,
)
from csv_output import emit_csv, emit_verdict, join_tables
from exceptions import VerificationError
from exponents import BochnerSpec, parse_rational
from field_io import write_snapshot
from fields import (
    BALL_TEST_FIELDS,
    abc_flow,
    beltrami_field,
    beltrami_residual,
    curl_eigenfield,
    divergence,
    lamb_residual,
    random_beltrami_spec,
    random_solenoidal_field,
)
from logger import log_system_info, setup_logger
from mollify import (
    commutation_residual,
    convergence_experiment,
    divergence_refinement_experiment,
    gradient_bound_experiment,
    gradient_growth_note,
    jacobian_smallness_experiment,
    modulated_series,
    space_time_convergence_experiment,
    support_experiment,
    time_mollified_gradient_bound,
    uniform_time_check,
)
from regularity import beta0_verdict, interval_rows, nse_regularity_verdict
from trkal import energy_equality_residual, ledger_rows, run_trkal
from utility_functions import sanitize_filename, write_text_output

MOLLIFY_EXPERIMENTS = (
    "convergence", "gradient", "support", "commutation", "uniform-time",
    "divergence", "jacobian", "time-gradient", "space-time",
)
TORUS_FIELDS = ("abc", "eigenfield", "random-beltrami", "random-solenoidal")


def rational(text):
    """argparse type for exact exponents ("a/b", "a" or "inf")."""
    return parse_rational(text)


def wavevector(text):
    """argparse type for an integer wavevector "kx,ky,kz"."""
    parts = [int(part) for part in text.split(",")]
    if len(parts) != 3:
        raise ValueError(f"expected three comma-separated integers, got {text!r}")
    return tuple(parts)


def _add_pq(parser):
    parser.add_argument('--p', type=rational, required=True, help='Time exponent, e.g. "3" or "inf".')
    parser.add_argument('--q', type=rational, required=True, help='Space exponent, e.g. "9/5".')


def _add_alpha_beta(parser):
    parser.add_argument('--alpha', type=rational, required=True, help='Time exponent of lambda.')
    parser.add_argument('--beta', type=rational, required=True, help='Space exponent of lambda.')


def parse_arguments(argv=None):
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(
        prog='beltrami',
        description='Verify energy-equality and regularity criteria for Beltrami, Euler and NSE flows.'
    )

    parser.add_argument(
        '--log-level',
        type=str,
        default=LOG_LEVEL,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help='Logging level. Default is INFO.'
    )
    parser.add_argument('--log-dir', type=str, help='Directory for a timestamped log file.')
    parser.add_argument('--verbose', action='store_true', help='Enable debug output.')
    parser.add_argument('--quiet', action='store_true', help='Suppress the banner and informational logs.')
    parser.add_argument('--system-info', action='store_true', help='Log platform and library versions.')
    parser.add_argument(
        '--out',
        type=str,
        help=f'Write the CSV to this file instead of stdout. Relative paths resolve against {DEFAULT_OUTPUT_DIR}.'
    )

    commands = parser.add_subparsers(dest='command', required=True)

    classify = commands.add_parser('classify', help='Classify an exponent hypothesis.')
    criteria = classify.add_subparsers(dest='criterion', required=True)
    _add_pq(criteria.add_parser('euler-grad', help='Euler: grad u in L^p(L^q).'))
    _add_pq(criteria.add_parser('nse-grad', help='NSE: grad u in L^p(L^q).'))
    for name in ('euler-beltrami', 'nse-beltrami'):
        sub = criteria.add_parser(name, help='Beltrami bootstrap for lambda in L^alpha(L^beta).')
        _add_alpha_beta(sub)
        sub.add_argument('--max-iter', type=int, default=DEFAULT_MAX_ITER, help='Bootstrap step limit.')
    _add_alpha_beta(criteria.add_parser('nse-regularity', help='NSE strong-solution exponent for lambda.'))
    curl = criteria.add_parser('curl', help='Criterion stated on the vorticity.')
    _add_pq(curl)
    curl.add_argument('--system', choices=[s.value for s in System], default=System.EULER.value)
    curl.add_argument('--boundary', choices=[b.value for b in BoundaryCondition],
                      default=BoundaryCondition.SLIP.value)
    curl.add_argument('--betti-zero', action=argparse.BooleanOptionalAction, default=True,
                      help='Whether the first Betti number of the domain vanishes.')
    elementary = criteria.add_parser('elementary', help='lambda depending on time only, lambda in L^p(0,T).')
    elementary.add_argument('--p', type=rational, required=True)
    elementary.add_argument('--system', choices=[s.value for s in System], default=System.EULER.value)

    beta0 = commands.add_parser('beta0', help='Threshold beta0 for a hypothesis 2/alpha + 3/beta < 1.')
    _add_alpha_beta(beta0)

    table = commands.add_parser('table', help='Exact tables.')
    tables = table.add_subparsers(dest='table', required=True)
    ln_rn = tables.add_parser('ln-rn', help='The L_n/R_n decomposition of (3, inf).')
    ln_rn.add_argument('--n-max', type=int, default=5)

    mollify = commands.add_parser('mollify-experiment', help='Boundary mollifier experiments on the unit ball.')
    mollify.add_argument('experiment', choices=MOLLIFY_EXPERIMENTS)
    mollify.add_argument('--delta', type=float, action='append',
                         help=f'Mollification parameter, repeatable. Default {list(DEFAULT_DELTAS)}.')
    mollify.add_argument('--xi', type=float,
                         help=f'Kernel radius factor. Default {DEFAULT_XI}, {REFINEMENT_XI} for divergence.')
    mollify.add_argument('--quad-order', type=int, default=DEFAULT_QUAD_ORDER)
    mollify.add_argument('--grid', type=int, default=DEFAULT_BALL_GRID)
    mollify.add_argument('--grids', type=int, nargs='+', default=[32, 64, 128],
                         help='Grid sizes for the divergence refinement.')
    mollify.add_argument('--q', type=rational, default=parse_rational("2"))
    mollify.add_argument('--p', type=rational, default=parse_rational("inf"),
                         help='Time exponent for time-gradient.')
    mollify.add_argument('--field', choices=sorted(BALL_TEST_FIELDS), default='rigid-rotation')
    mollify.add_argument('--epsilon', type=float, default=DEFAULT_EPSILON)
    mollify.add_argument('--time-samples', type=int, default=17)
    mollify.add_argument('--seed', type=int, default=DEFAULT_SEED, help='Seed for the rotation axis.')

    trkal = commands.add_parser('simulate-trkal', help='Spectral NSE run from Beltrami data.')
    trkal.add_argument('--lambda', dest='lambda_', type=float, default=1.0)
    trkal.add_argument('--grid', type=int, default=DEFAULT_TORUS_GRID)
    trkal.add_argument('--dt', type=float, default=DEFAULT_DT)
    trkal.add_argument('--t-end', type=float, default=DEFAULT_T_END)
    trkal.add_argument('--viscosity', type=float, default=DEFAULT_VISCOSITY)
    trkal.add_argument('--seed', type=int, default=DEFAULT_SEED)

    residuals = commands.add_parser('field-residuals', help='Identity residuals of a torus field.')
    residuals.add_argument('--field', choices=TORUS_FIELDS, default='abc')
    residuals.add_argument('--grid', type=int, default=DEFAULT_TORUS_GRID)
    residuals.add_argument('--lambda', dest='lambda_', type=float, default=1.0)
    residuals.add_argument('--k', type=wavevector, default=(0, 0, 1), help='Wavevector of the eigenfield.')
    residuals.add_argument('--seed', type=int, default=DEFAULT_SEED)
    residuals.add_argument('--snapshot', type=str, help='Also write the field as a binary snapshot.')

    return parser.parse_args(argv)


# Command handlers; each returns CSV text

def run_classify(args, logger):
    label = f"classify {args.criterion}"
    if args.criterion in ('euler-grad', 'nse-grad'):
        spec = BochnerSpec(args.p, args.q)
        verdict = euler_gradient_verdict(spec) if args.criterion == 'euler-grad' else nse_gradient_verdict(spec)
        return emit_verdict(label, verdict)

    if args.criterion in ('euler-beltrami', 'nse-beltrami'):
        engine = euler_beltrami_trace if args.criterion == 'euler-beltrami' else nse_beltrami_trace
        trace = engine(args.alpha, args.beta, args.max_iter)
        logger.info(f"{label}: stopped at step {trace.n_stop} ({trace.stop_reason.value})")
        return join_tables(emit_verdict(label, trace.final), emit_csv(TRACE_COLUMNS, trace_rows(trace)))

    if args.criterion == 'nse-regularity':
        verdict = nse_regularity_verdict(args.alpha, args.beta)
        row = (args.alpha, args.beta, verdict.label, verdict.citation) + tuple(
            verdict.detail(key) for key in REGULARITY_COLUMNS[4:]
        )
        return emit_csv(REGULARITY_COLUMNS, [row])

    if args.criterion == 'curl':
        meta = DomainMeta(args.betti_zero, BoundaryCondition(args.boundary))
        verdict = curl_criterion_verdict(BochnerSpec(args.p, args.q), meta, System(args.system))
        return emit_verdict(label, verdict)

    system = System(args.system)
    verdict = elementary_lambda_time_only(args.p, system)
    chain = [(s.quantity, s.time_exp, s.sobolev_order, s.space_exp) for s in elementary_lambda_trace(args.p, system)]
    return join_tables(emit_verdict(f"{label} {system.value}", verdict), emit_csv(ELEMENTARY_COLUMNS, chain))


def run_beta0(args, logger):
    verdict = beta0_verdict(args.alpha, args.beta)
    row = (
        args.alpha, args.beta, verdict.detail("level"), verdict.detail("n_bar"),
        verdict.detail("beta0"), verdict.label, verdict.citation,
    )
    return emit_csv(BETA0_COLUMNS, [row])


def run_table(args, logger):
    rows = [
        (r.n, r.L_lo, r.L_hi, r.R_lo, r.R_hi, r.crossover, r.alpha_at_L_left, r.level_L, r.level_R)
        for r in interval_rows(args.n_max)
    ]
    return emit_csv(LN_RN_COLUMNS, rows)


def _axis(args):
    axis = np.random.default_rng(args.seed).standard_normal(3)
    return axis / np.linalg.norm(axis)


def _ball_field(args, N=None):
    return BALL_TEST_FIELDS[args.field](_axis(args), N or args.grid)


def _series(args, field):
    dt = args.epsilon / 8
    times = dt * np.arange(args.time_samples)
    return modulated_series(field, times, np.cos)


def run_mollify(args, logger):
    kind = args.experiment
    refining = kind == 'divergence'
    deltas = sorted(args.delta or ((REFINEMENT_DELTA,) if refining else DEFAULT_DELTAS), reverse=True)
    xi = args.xi if args.xi is not None else float(REFINEMENT_XI if refining else DEFAULT_XI)
    opts = dict(xi=xi, quad_order=args.quad_order)
    logger.info(f"mollify-experiment {kind}: deltas={deltas}, xi={xi}, quad_order={args.quad_order}")

    if kind == 'jacobian':
        return emit_csv(JACOBIAN_COLUMNS, jacobian_smallness_experiment(deltas, args.grid))
    if kind == 'divergence':
        rows = []
        for delta in deltas:
            table = divergence_refinement_experiment(lambda N: _ball_field(args, N), delta, args.grids, **opts)
            rows.extend((delta,) + row for row in table)
        return emit_csv(("delta",) + DIVERGENCE_COLUMNS, rows)

    field = _ball_field(args)
    if kind == 'convergence':
        return emit_csv(CONVERGENCE_COLUMNS, convergence_experiment(field, deltas, args.q, **opts))
    if kind == 'gradient':
        note = gradient_growth_note(field, args.q)
        rows = [(delta, norm, note) for delta, norm in gradient_bound_experiment(field, deltas, args.q, **opts)]
        return emit_csv(GRADIENT_BOUND_COLUMNS, rows)
    if kind == 'support':
        return emit_csv(SUPPORT_COLUMNS, support_experiment(field, deltas, **opts))

    series = _series(args, field)
    if kind == 'commutation':
        rows = [(d, args.epsilon, commutation_residual(series, d, args.epsilon, **opts)) for d in deltas]
        return emit_csv(COMMUTATION_COLUMNS, rows)
    if kind == 'uniform-time':
        return emit_csv(UNIFORM_TIME_COLUMNS, uniform_time_check(series, deltas, args.q, **opts))
    if kind == 'time-gradient':
        rows = time_mollified_gradient_bound(series, deltas, args.epsilon, args.q, args.p, **opts)
        return emit_csv(TIME_GRADIENT_COLUMNS, rows)
    rows = space_time_convergence_experiment(series, deltas, args.epsilon, args.q, **opts)
    return emit_csv(UNIFORM_TIME_COLUMNS, rows)


def run_trkal_command(args, logger):
    spec = random_beltrami_spec(args.lambda_, args.seed)
    logger.info(f"Trkal run: lambda={args.lambda_}, {len(spec.modes)} modes, N={args.grid}, dt={args.dt}")
    ledger = run_trkal(spec, args.t_end, args.dt, args.grid, args.viscosity, logger)
    if len(ledger) > 1 and ledger.energy[0] > 0:
        logger.info(f"Energy equality residual: {energy_equality_residual(ledger):.3e}")
    return emit_csv(LEDGER_COLUMNS, ledger_rows(ledger))


def _torus_field(args):
    N = args.grid
    if args.field == 'abc':
        return abc_flow(1.0, 1.0, 1.0, N)
    if args.field == 'eigenfield':
        return curl_eigenfield(args.k, 0.0, N)
    if args.field == 'random-beltrami':
        return beltrami_field(random_beltrami_spec(args.lambda_, args.seed), N)
    return random_solenoidal_field(N, 2, args.seed)


def run_field_residuals(args, logger):
    field = _torus_field(args)
    lambda_ = float(np.linalg.norm(args.k)) if args.field == 'eigenfield' else args.lambda_
    if args.snapshot:
        write_snapshot(field, args.snapshot, logger)
    row = (
        args.field,
        lambda_,
        beltrami_residual(field, lambda_),
        lamb_residual(field),
        float(np.max(np.abs(divergence(field)))),
    )
    return emit_csv(RESIDUAL_COLUMNS, [row])


HANDLERS = {
    'classify': run_classify,
    'beta0': run_beta0,
    'table': run_table,
    'mollify-experiment': run_mollify,
    'simulate-trkal': run_trkal_command,
    'field-residuals': run_field_residuals,
}


def main(argv=None):
    """Main function to run the application."""
    try:
        args = parse_arguments(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    log_level = "DEBUG" if args.verbose else args.log_level
    console_level = "WARNING" if args.quiet and not args.verbose else None
    command = " ".join(filter(None, [args.command, getattr(args, 'criterion', None), getattr(args, 'table', None)]))
    logger = setup_logger(log_level, log_dir=args.log_dir, log_prefix=sanitize_filename(command),
                          console_level=console_level)

    if not args.quiet:
        logger.info(f"Beltrami verification toolkit {VERSION}: {command}")
    if args.system_info:
        log_system_info(logger)

    try:
        text = HANDLERS[args.command](args, logger)
        if args.out:
            write_text_output(os.path.join(DEFAULT_OUTPUT_DIR, args.out), text, logger)
        else:
            sys.stdout.write(text)
            sys.stdout.flush()
    except VerificationError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return 2
    except Exception as e:
        logger.critical(f"Unexpected error: {e}", exc_info=True)
        return 1

    return 0


if __name__ == "__main__":
    sys.exit(main())
