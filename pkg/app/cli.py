"""
Command-line interface for the Signed Qubit Entropy toolkit

Every command writes one JSON document (or CSV table) to standard output;
logs and error messages go to standard error.

Exit codes: 0 success, 2 usage/parse/config, 3 solver non-convergence, 4 I/O.
"""

import functools
import json
import math
import os
import tempfile
from dataclasses import dataclass
from datetime import datetime, timezone

import click
import structlog

from app import init_sentry, setup_logging
from app.config import Config, RunConfig, load_run_config, select_config
from app.exceptions import ConfigError, ConvergenceError, SignedQubitError
from app.schemas import (
    ClassicalDocumentSchema,
    FmaxDocumentSchema,
    MaxEntDocumentSchema,
    MembershipDocumentSchema,
    ProbeDocumentSchema,
    SweepDocumentSchema,
)
from app.services.dual_geometry_service import DualGeometryService, ratio_bound
from app.services.entropy_service import DEFAULT_STEPS, EntropyService
from app.services.maxent_service import MaxEntSolver
from app.services.oracle_service import OracleService
from app.utils.validators import DataValidator

logger = structlog.get_logger(__name__)

EXIT_USAGE = 2
EXIT_CONVERGENCE = 3
EXIT_IO = 4


class BlochVectorParam(click.ParamType):
    """Three comma-separated decimals; the tokens 1/sqrt3 and -1/sqrt3 are accepted."""
    name = 'x,y,z'

    def convert(self, value, param, ctx):
        if isinstance(value, (list, tuple)):
            return list(value)
        try:
            return DataValidator.parse_vector(value, length=3)
        except ValueError as e:
            self.fail(str(e), param, ctx)


class StepScheduleParam(click.ParamType):
    """Comma-separated, strictly decreasing positive step sizes."""
    name = 'h1,h2,...'

    def convert(self, value, param, ctx):
        if isinstance(value, (list, tuple)):
            return tuple(value)
        try:
            steps = tuple(DataValidator.parse_number(token) for token in str(value).split(','))
        except ValueError as e:
            self.fail(str(e), param, ctx)
        if not DataValidator.validate_step_schedule(steps):
            self.fail('steps must be positive and strictly decreasing', param, ctx)
        return steps


BLOCH_VECTOR = BlochVectorParam()
STEP_SCHEDULE = StepScheduleParam()


@dataclass
class CliContext:
    """Per-invocation settings and services."""
    run_config: RunConfig
    solver: MaxEntSolver
    oracle: OracleService
    geometry: DualGeometryService
    entropy: EntropyService


def fail(message: str, code: int):
    """Write a one-line message to stderr and exit with the given code."""
    click.echo(f"Error: {message}", err=True)
    click.get_current_context().exit(code)


def handle_errors(func):
    """Map toolkit exceptions to exit codes."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except ConvergenceError as e:
            logger.warning("command_not_converged", k=e.k, error=str(e))
            fail(str(e), EXIT_CONVERGENCE)
        except (ConfigError, SignedQubitError, ValueError) as e:
            fail(str(e), EXIT_USAGE)
        except OSError as e:
            fail(str(e), EXIT_IO)
        except (click.exceptions.Exit, click.ClickException):
            raise
        except Exception:
            logger.exception("command_failed", command=func.__name__)
            raise

    return wrapper


def float_text(value: float) -> str:
    """17 significant digits, always in float syntax."""
    if math.isnan(value):
        return 'NaN'
    if math.isinf(value):
        return 'Infinity' if value > 0 else '-Infinity'
    text = f'{value:.17g}'
    return text if any(c in text for c in '.en') else text + '.0'


class FloatEncoder(json.JSONEncoder):
    """JSON encoder writing every float with float_text."""

    def iterencode(self, o, _one_shot=False):
        encoder = json.encoder.encode_basestring_ascii if self.ensure_ascii else json.encoder.encode_basestring
        _iterencode = json.encoder._make_iterencode(
            {} if self.check_circular else None, self.default, encoder, self.indent, float_text,
            self.key_separator, self.item_separator, self.sort_keys, self.skipkeys, _one_shot,
        )
        return _iterencode(o, 0)


def emit(schema_class, payload: dict, command: str):
    """Dump a document through its schema and print it as JSON."""
    settings: RunConfig = click.get_current_context().find_object(CliContext).run_config
    document = dict(payload, schema_version=Config.SCHEMA_VERSION, command=command)
    if settings.timestamp:
        document['generated_at'] = datetime.now(timezone.utc).isoformat()
    click.echo(json.dumps(schema_class().dump(document), indent=2, cls=FloatEncoder))


@click.group()
@click.option('--config', 'config_file', type=click.Path(exists=True, dir_okay=False), default=None,
              help='File of key=value lines (tol_entropy, tol_gap, tol_feas, k_max, seed, ...).')
@click.option('--no-timestamp', is_flag=True, default=False, help='Omit generated_at from JSON output.')
@click.option('--tol-entropy', type=float, default=None, help='Entropy tolerance for H >= 2.')
@click.option('--tol-gap', type=float, default=None, help='Duality-gap tolerance.')
@click.option('--tol-feas', type=float, default=None, help='Dual feasibility tolerance.')
@click.option('--seed', type=int, default=None, help='Seed for randomized commands.')
@click.option('--format', 'output_format', type=click.Choice(['json', 'csv']), default=None,
              help='Output format of table-valued commands.')
@click.pass_context
def cli(ctx, config_file, no_timestamp, tol_entropy, tol_gap, tol_feas, seed, output_format):
    """Signed Qubit Entropy toolkit."""
    config_class = select_config()
    setup_logging(config_class.LOG_LEVEL, config_class.LOG_FORMAT)
    init_sentry(config_class)

    overrides = {
        'tol_entropy': tol_entropy,
        'tol_gap': tol_gap,
        'tol_feas': tol_feas,
        'seed': seed,
        'output_format': output_format,
        'timestamp': False if no_timestamp else None,
    }
    try:
        settings = load_run_config(config_file, overrides, base=config_class)
    except ConfigError as e:
        fail(str(e), EXIT_USAGE)

    solver = MaxEntSolver(tol_gap=settings.tol_gap, tol_feas=settings.tol_feas)
    entropy = EntropyService()
    ctx.obj = CliContext(
        run_config=settings,
        solver=solver,
        oracle=OracleService(solver=solver, entropy=entropy, tol_entropy=settings.tol_entropy,
                             k_max=settings.k_max),
        geometry=DualGeometryService(seed=settings.seed),
        entropy=entropy,
    )
    logger.debug("cli_started", command=ctx.invoked_subcommand, settings=settings.__dict__)


@cli.command()
@click.option('--r', 'r', type=BLOCH_VECTOR, required=True, help='Bloch vector x,y,z.')
@click.option('--k', 'k', type=click.IntRange(min=1), default=1, show_default=True, help='Order index.')
@click.pass_obj
@handle_errors
def maxent(obj: CliContext, r, k):
    """Maximum-H_2k representation of r with its dual certificate."""
    report = obj.solver.minnorm(r, k)
    emit(MaxEntDocumentSchema, report.to_dict(), 'maxent')
    if not report.converged:
        fail(f"Solver did not converge at k={k} (gap {report.gap:.3g})", EXIT_CONVERGENCE)


@cli.command()
@click.option('--r', 'r', type=BLOCH_VECTOR, required=True, help='Bloch vector x,y,z.')
@click.option('--kmax', 'k_max', type=click.IntRange(min=1), default=None,
              help='Largest order checked (defaults to k_max of the run configuration).')
@click.pass_obj
@handle_errors
def check(obj: CliContext, r, k_max):
    """Uncertainty-principle verdict at orders 1..kmax (exit 0 whatever the verdict)."""
    verdict = obj.oracle.membership(r, k_max or obj.run_config.k_max)
    emit(MembershipDocumentSchema, verdict.to_dict(), 'check')


@cli.command()
@click.option('--r', 'r', type=BLOCH_VECTOR, required=True, help='Bloch vector x,y,z.')
@click.pass_obj
@handle_errors
def classical(obj: CliContext, r):
    """Whether r has a nonnegative representation with H_2 >= 2."""
    report = obj.solver.minnorm_nonneg2(r)
    payload = report.to_dict()
    payload.update(
        classical=obj.oracle.classical_representable(r),
        l1_norm=report.r.l1_norm,
    )
    emit(ClassicalDocumentSchema, payload, 'classical')


@cli.command()
@click.option('--k', 'k', type=click.IntRange(min=1), required=True, help='Order index.')
@click.option('--enumerate', 'use_enumeration', is_flag=True, default=False,
              help='Evaluate all nonzero sign vectors (default).')
@click.option('--multistart', 'n_starts', type=click.IntRange(min=1), default=None,
              help='Number of seeded ascent starts.')
@click.option('--seed', type=int, default=None, help='Multistart seed (overrides the run seed).')
@click.pass_obj
@handle_errors
def fmax(obj: CliContext, k, use_enumeration, n_starts, seed):
    """Maximum of the ratio functional at order k."""
    if use_enumeration and n_starts is not None:
        fail("--enumerate and --multistart are mutually exclusive", EXIT_USAGE)

    geometry = obj.geometry
    if n_starts is None:
        candidates = geometry.enumerate_candidates(k)
        best = candidates[0]
        payload = {
            'method': 'enumerate',
            'argmax_class': best.nonzero_count,
            'groups': [g.to_dict() for g in geometry.candidate_groups(k)],
        }
    else:
        seed = obj.run_config.seed if seed is None else seed
        best = geometry.multistart_maximize(k, n_starts=n_starts, seed=seed)
        pattern_class, distance = geometry.nearest_pattern(best.w)
        payload = {
            'method': 'multistart',
            'argmax_class': pattern_class,
            'pattern_distance': distance,
            'n_starts': n_starts,
            'seed': seed,
        }

    payload.update(
        k=k,
        max_f=best.f_value,
        bound=ratio_bound(k),
        argmax=[float(x) for x in geometry.canonicalize(best.w)],
        foc_residual=best.foc_residual,
    )
    emit(FmaxDocumentSchema, payload, 'fmax')


def write_atomic(frame, path: str):
    """Write a DataFrame as CSV through a temp file in the target directory."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix='.sweep-', suffix='.csv.tmp')
    try:
        with os.fdopen(fd, 'w', newline='') as handle:
            frame.to_csv(handle, index=False)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


@cli.command()
@click.option('--k', 'k', type=click.IntRange(min=1), default=1, show_default=True,
              help='Membership is checked at orders 1..k.')
@click.option('--grid', 'step', type=float, required=True, help='Lattice step in (0, 1].')
@click.option('--out', 'out', type=click.Path(dir_okay=False), default=None,
              help='CSV destination; without it the table goes to standard output.')
@click.pass_obj
@handle_errors
def sweep(obj: CliContext, k, step, out):
    """Membership, classicality and H_2 over a lattice of the cube [-1, 1]^3."""
    if not DataValidator.validate_step(step):
        fail(f"--grid must lie in (0, 1], got {step!r}", EXIT_USAGE)

    frame = obj.oracle.evaluate_grid(step, k)

    if out is None and obj.run_config.output_format == 'csv':
        click.echo(frame.to_csv(index=False), nl=False)
        return

    if out is not None:
        write_atomic(frame, out)

    payload = {
        'k': k,
        'grid': step,
        'out': out,
        'rows': len(frame),
        'members': int(frame['member'].sum()),
        'classical': int(frame['classical'].sum()),
    }
    if out is None:
        payload['records'] = frame.to_dict(orient='records')
    emit(SweepDocumentSchema, payload, 'sweep')


@cli.command()
@click.option('--alpha', type=float, required=True, help='Entropy order alpha > 0.')
@click.option('--order', type=click.IntRange(min=1), required=True, help='Derivative order m.')
@click.option('--steps', type=STEP_SCHEDULE, default=','.join(repr(h) for h in DEFAULT_STEPS),
              show_default=True, help='Finite-difference step schedule.')
@click.pass_obj
@handle_errors
def probe(obj: CliContext, alpha, order, steps):
    """Finite-difference smoothness of q -> H_alpha((q, 1 - q)) at q = 0."""
    report = obj.entropy.smoothness_probe(alpha, order, steps)
    emit(ProbeDocumentSchema, report.to_dict(), 'probe')


def main():
    cli(prog_name='signed-qubit')


if __name__ == '__main__':
    main()
