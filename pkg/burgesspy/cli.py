# pylint: disable=redefined-builtin

import contextlib
from typing import Callable, Iterator, List, NamedTuple, Optional

import click
import numpy as np
from typing_extensions import Protocol

from ._version import __version__
from .characters import DirichletCharacter
from .context import budget
from .errors import BurgessError, HardCheckFailed
from .experiments import (
    ExperimentConfig,
    ReportRow,
    burgess_exponent,
    emit_report,
    fit_exponent,
    load_report,
    raise_for_hard_failures,
    render_report,
    run_chain_check,
    run_lemma_check,
    run_theorem_check,
    theorem_exponent,
)
from .lattice import build_lattice, classify_case, count_points_in_box
from .logger import BurgessLogger
from .meanvalue import moment_reports
from .sums import build_prefix, interval_sum, max_partial

EXIT_HARD_FAILURE = 1
EXIT_CONFIG_ERROR = 2


class SweepRunner(Protocol):
    def __call__(
        self,
        config: ExperimentConfig,
        logger: Optional[BurgessLogger] = None,
        show_progress: bool = False,
    ) -> List[ReportRow]:
        ...


class GlobalOptions(NamedTuple):
    config_path: Optional[str]
    out: Optional[str]
    format: str
    seed: Optional[int]
    budget: Optional[int]


def print_stats(path: str) -> None:
    data = np.loadtxt(path, delimiter=",", ndmin=2)
    print("FILE NAME  : ", path)
    print("ROWS       : ", data.shape[0])
    print("LAST STEP  : ", data[-1, 0])
    print("MAX VALUE  : ", np.nanmax(data[:, 1]))
    print("MIN VALUE  : ", np.nanmin(data[:, 1]))
    print("STD VALUE  : ", np.nanstd(data[:, 1]))


def _fail(ctx: click.Context, message: str, code: int) -> None:
    click.echo("error: %s" % message, err=True)
    ctx.exit(code)


@contextlib.contextmanager
def _guarded(ctx: click.Context) -> Iterator[None]:
    options: GlobalOptions = ctx.obj
    try:
        if options.budget is None:
            yield
        else:
            with budget(options.budget):
                yield
    except HardCheckFailed as e:
        _fail(ctx, str(e), EXIT_HARD_FAILURE)
    except BurgessError as e:
        _fail(ctx, "%s: %s" % (type(e).__name__, e), EXIT_CONFIG_ERROR)


def _load_config(ctx: click.Context) -> ExperimentConfig:
    options: GlobalOptions = ctx.obj
    if options.config_path is None:
        config = ExperimentConfig()
    else:
        config = ExperimentConfig.from_json(options.config_path)
    overrides = {}
    if options.seed is not None:
        overrides["seed"] = options.seed
    if options.budget is not None:
        overrides["budget"] = options.budget
    return config.set_params(**overrides) if overrides else config


def _output(ctx: click.Context, rows: List[ReportRow]) -> None:
    options: GlobalOptions = ctx.obj
    if options.out is None:
        click.echo(render_report(rows, options.format), nl=False)
    else:
        emit_report(rows, options.format, options.out)
        click.echo("wrote %d rows to %s" % (len(rows), options.out), err=True)


def _sweep(
    ctx: click.Context,
    name: str,
    runner: SweepRunner,
    logdir: Optional[str],
    tensorboard: bool,
    progress: bool,
) -> List[ReportRow]:
    with _guarded(ctx):
        config = _load_config(ctx)
        logger = None
        if logdir is not None:
            logger = BurgessLogger(
                name, root_dir=logdir, tensorboard=tensorboard
            )
            logger.add_params(config.get_params())
        try:
            rows = runner(config, logger=logger, show_progress=progress)
        finally:
            if logger is not None:
                logger.close()
        _output(ctx, rows)
        return rows
    return []


def _sweep_options(func: Callable[..., None]) -> Callable[..., None]:
    func = click.option(
        "--progress", is_flag=True, help="show a progress bar on stderr."
    )(func)
    func = click.option(
        "--tensorboard", is_flag=True, help="mirror metrics to tensorboardX."
    )(func)
    func = click.option(
        "--logdir", default=None, help="directory of per-row metric logs."
    )(func)
    return func


@click.group()
@click.option("--config", "config_path", default=None, help="experiment JSON.")
@click.option("--out", default=None, help="report path, stdout when omitted.")
@click.option(
    "--format",
    type=click.Choice(["csv", "json"]),
    default="csv",
    show_default=True,
    help="report format.",
)
@click.option("--seed", type=int, default=None, help="override the seed.")
@click.option("--budget", type=int, default=None, help="operation budget.")
@click.pass_context
def cli(
    ctx: click.Context,
    config_path: Optional[str],
    out: Optional[str],
    format: str,
    seed: Optional[int],
    budget: Optional[int],
) -> None:
    click.echo(
        "burgesspy command line interface (Version %s)" % __version__, err=True
    )
    ctx.obj = GlobalOptions(config_path, out, format, seed, budget)


@cli.command(name="eval", short_help="Evaluate a character exactly.")
@click.argument("q", type=int)
@click.argument("index", type=int)
@click.argument("n", type=int)
@click.pass_context
def eval_command(ctx: click.Context, q: int, index: int, n: int) -> None:
    with _guarded(ctx):
        chi = DirichletCharacter.from_index(q, index)
        value = chi(n)
        print("chi    : ", chi)
        print("value  : ", value)
        print("complex: ", complex(value))
        print("order  : ", chi.order())
        print("primitive:", chi.is_primitive())


@cli.command(name="sum", short_help="Interval and maximal character sums.")
@click.argument("q", type=int)
@click.argument("index", type=int)
@click.argument("n", type=int)
@click.argument("h", type=int)
@click.pass_context
def sum_command(
    ctx: click.Context, q: int, index: int, n: int, h: int
) -> None:
    with _guarded(ctx):
        table = build_prefix(DirichletCharacter.from_index(q, index))
        print("S(N;h)       : ", interval_sum(table, n, h))
        if h >= 1:
            h_star, m = max_partial(table, n, h)
            print("max |S(N;k)| : ", m)
            print("argmax k     : ", h_star)


@cli.command(short_help="Moment statistics of one character.")
@click.argument("q", type=int)
@click.argument("index", type=int)
@click.option("--h", "h", type=int, required=True, help="length.")
@click.option("--r", "r", type=int, default=1, show_default=True)
@click.option("--eps", type=float, default=0.0, show_default=True)
@click.pass_context
def moments(
    ctx: click.Context, q: int, index: int, h: int, r: int, eps: float
) -> None:
    with _guarded(ctx):
        table = build_prefix(DirichletCharacter.from_index(q, index))
        for report in moment_reports(table, h, r, eps):
            print(
                "%-18s lhs=%r rhs=%r ratio=%r hypothesis=%s"
                % (
                    report.name,
                    report.lhs,
                    report.rhs_shape,
                    report.ratio,
                    report.hypothesis,
                )
            )


@cli.command(short_help="Reduced basis and case of a congruence lattice.")
@click.argument("ell", type=int)
@click.argument("mj", type=int)
@click.argument("mk", type=int)
@click.option("--P", "P", type=int, default=1, show_default=True)
@click.option("--box", type=int, default=None, help="box half-width B.")
@click.pass_context
def lattice(
    ctx: click.Context, ell: int, mj: int, mk: int, P: int, box: Optional[int]
) -> None:
    with _guarded(ctx):
        lat = build_lattice(ell, mj, mk)
        for i, b in enumerate(lat.basis, 1):
            print("b%d       : " % i, b, "|b|=%d" % b.sup_norm)
        print("det      : ", lat.det())
        print("product  : ", lat.basis.norm_product())
        print("case     : ", classify_case(lat, P))
        if box is not None:
            print("points   : ", count_points_in_box(lat, box))


@cli.command(short_help="Theorem-shape sweep.")
@_sweep_options
@click.pass_context
def theorem(
    ctx: click.Context,
    logdir: Optional[str],
    tensorboard: bool,
    progress: bool,
) -> None:
    _sweep(ctx, "theorem", run_theorem_check, logdir, tensorboard, progress)


@cli.command(short_help="Counting chain sweep with exact checks.")
@_sweep_options
@click.pass_context
def chain(
    ctx: click.Context,
    logdir: Optional[str],
    tensorboard: bool,
    progress: bool,
) -> None:
    rows = _sweep(ctx, "chain", run_chain_check, logdir, tensorboard, progress)
    with _guarded(ctx):
        raise_for_hard_failures(rows)


@cli.command(short_help="Main lemma sweep.")
@_sweep_options
@click.pass_context
def lemma(
    ctx: click.Context,
    logdir: Optional[str],
    tensorboard: bool,
    progress: bool,
) -> None:
    _sweep(ctx, "lemma", run_lemma_check, logdir, tensorboard, progress)


@cli.command(short_help="Fit the q-exponent of a saved report.")
@click.argument("path")
@click.option(
    "--statistic",
    type=click.Choice(["lhs", "max", "normalized_max"]),
    default="lhs",
    show_default=True,
)
@click.option("--alpha", type=float, default=None, help="H = q^alpha.")
@click.pass_context
def fit(
    ctx: click.Context, path: str, statistic: str, alpha: Optional[float]
) -> None:
    with _guarded(ctx):
        rows = load_report(path)
        slope, intercept = fit_exponent(rows, statistic)
        print("SLOPE      : ", slope)
        print("INTERCEPT  : ", intercept)
        if alpha is not None and rows:
            r = rows[0].r
            print("THEOREM    : ", theorem_exponent(r, alpha))
            print("BURGESS    : ", burgess_exponent(r, alpha))


@cli.command(short_help="Show statistics of saved metrics.")
@click.argument("path")
def stats(path: str) -> None:
    print_stats(path)
