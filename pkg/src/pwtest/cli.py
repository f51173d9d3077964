"""
pwtest command line
Click command group over the CLI orchestrator; exit codes encode test decisions and error classes
"""

import logging
import sys
from functools import wraps

import click

from . import __version__
from .core.errors import ConfigError, DimensionError, DivergenceError, PwTestError
from .core.tester import Decision
from .orchestrators.cli_orchestrator import CLIOrchestrator
from .utils import load_config, print_banner, print_error, print_warning, resolve_level

logger = logging.getLogger("pwtest")

EXIT_ACCEPT = 0
EXIT_REJECT = 1
EXIT_USAGE = 2
EXIT_DIMENSION = 3
EXIT_DIVERGENCE = 4
EXIT_OTHER = 5

FAMILIES = ["blob", "hdgm", "laplace-shift", "gauss-var"]


def _exit_code(error: Exception) -> int:
    if isinstance(error, (ConfigError, FileNotFoundError)):
        return EXIT_USAGE
    if isinstance(error, DimensionError):
        return EXIT_DIMENSION
    if isinstance(error, DivergenceError):
        return EXIT_DIVERGENCE
    return EXIT_OTHER


def handle_errors(command):
    """Map library errors to exit codes after reporting them"""

    @wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except KeyboardInterrupt:
            print_warning("Cancelled by user")
            sys.exit(EXIT_OTHER)
        except (PwTestError, FileNotFoundError) as e:
            if isinstance(e, DivergenceError):
                print_error(f"Diverged at iteration {e.iteration}: {e}")
            else:
                print_error(str(e))
            logger.debug("Command failed", exc_info=True)
            sys.exit(_exit_code(e))
        except click.ClickException:
            raise
        except Exception as e:
            print_error(f"Unexpected error: {e}")
            logger.debug("Command failed", exc_info=True)
            sys.exit(EXIT_OTHER)

    return wrapper


def _parse_hidden(ctx, param, value):
    if value is None:
        return None
    try:
        sizes = tuple(int(h) for h in value.split(",") if h.strip())
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got '{value}'")
    if not sizes or any(h < 1 for h in sizes):
        raise click.BadParameter(f"layer sizes must be positive integers, got '{value}'")
    return sizes


def pw_options(include_penalty: bool = True):
    """Optimizer flags shared by the commands that run the PW estimator"""

    def decorator(f):
        options = [
            click.option("--k", type=click.IntRange(min=1), default=None, help="Projection dimension"),
            click.option("--batch", "batch_size", type=click.IntRange(min=1), default=None, help="SGD batch size"),
            click.option("--iters", "iterations", type=click.IntRange(min=1), default=None, help="SGD iterations"),
            click.option("--lr", "learning_rate", type=click.FloatRange(min=0), default=None, help="Learning rate"),
            click.option("--lr-schedule", type=click.Choice(["constant", "inverse-sqrt"]), default=None,
                         help="Learning-rate schedule"),
            click.option("--hidden", callback=_parse_hidden, default=None,
                         help="Hidden layer sizes, comma separated (e.g. 32,32)"),
            click.option("--activation", type=click.Choice(["relu", "tanh"]), default=None,
                         help="Hidden-layer activation"),
            click.option("--reorth-every", "reorthonormalize_every", type=click.IntRange(min=0), default=None,
                         help="Re-orthonormalize the projector every N iterations (0 = never)"),
            click.option("--init", type=click.Choice(["coordinate", "random"]), default=None,
                         help="Starting projector: best coordinate axes or a random orthonormal frame"),
        ]
        if include_penalty:
            options.append(click.option("--lambda", "penalty", type=float, default=None,
                                        help="Orthogonality penalty (> 0)"))
        for option in reversed(options):
            f = option(f)
        return f

    return decorator


def pair_options(f):
    """Two sample files, or a benchmark family to draw the (mu, nu) pair from"""
    options = [
        click.option("--x", "x_path", type=click.Path(dir_okay=False), default=None, help="First sample CSV"),
        click.option("--y", "y_path", type=click.Path(dir_okay=False), default=None, help="Second sample CSV"),
        click.option("--family", type=click.Choice(FAMILIES), default=None,
                     help="Generate the (mu, nu) pair of this family instead of reading files"),
        click.option("--n", type=click.IntRange(min=1), default=None, help="Points per generated sample"),
        click.option("--d", type=click.IntRange(min=1), default=None, help="Dimension of generated samples"),
        click.option("--delta", type=float, default=None, help="Correlation of the blob / HDGM alternative"),
    ]
    for option in reversed(options):
        f = option(f)
    return f


seed_option = click.option("--seed", type=click.IntRange(min=0, max=2 ** 64 - 1), default=None,
                           help="Root random seed (default: config seed, then 0)")
jobs_option = click.option("--jobs", type=click.IntRange(min=1), default=None,
                           help="Worker processes (default: config tester.jobs, then PWTEST_JOBS, then 1)")
method_option = click.option("--method", type=click.Choice(["pw", "mmd"]), default=None,
                             help="Test statistic")
alpha_option = click.option("--alpha", type=click.FloatRange(0, 1, min_open=True, max_open=True), default=None,
                            help="Significance level")


def _orchestrator(ctx, jobs=None) -> CLIOrchestrator:
    config_loader = load_config(ctx.obj.get("config"))
    logging_section = config_loader.config.setdefault("logging", {})
    logging_section["level"] = resolve_level(ctx.obj.get("log_level"), logging_section.get("level"))
    if ctx.obj.get("log_file"):
        logging_section["file"] = ctx.obj["log_file"]
    return CLIOrchestrator(config_loader, jobs=jobs)


@click.group()
@click.option("--config", "-c", type=click.Path(exists=True, dir_okay=False), default=None,
              help="YAML experiment configuration")
@click.option("--log-level", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
              default=None, help="Console log level")
@click.option("--log-file", type=click.Path(dir_okay=False), default=None, help="Also log (at DEBUG) to this file")
@click.pass_context
def cli(ctx, config, log_level, log_file):
    """pwtest: two-sample testing with projected Wasserstein distance"""
    ctx.ensure_object(dict)
    ctx.obj.update({"config": config, "log_level": log_level, "log_file": log_file})


@cli.command()
@click.option("--family", type=click.Choice(FAMILIES), required=True, help="Benchmark family")
@click.option("--role", type=click.Choice(["mu", "nu"]), default="mu", help="Side of the pair")
@click.option("--n", type=click.IntRange(min=1), required=True, help="Number of points")
@click.option("--d", type=click.IntRange(min=1), default=2, help="Dimension")
@click.option("--delta", type=float, default=None, help="Correlation of the blob / HDGM alternative")
@seed_option
@click.option("--out", type=click.Path(dir_okay=False), required=True, help="Output CSV")
@click.pass_context
@handle_errors
def generate(ctx, family, role, n, d, delta, seed, out):
    """Draw a synthetic sample and write it as CSV"""
    _orchestrator(ctx).generate(family, role, n, d, seed, out, delta=delta)


@cli.command()
@pair_options
@pw_options()
@seed_option
@click.option("--kde/--no-kde", default=False, help="Also export KDE curves of the projected samples (k = 1)")
@click.option("--grid-points", type=click.IntRange(min=2), default=512, help="KDE grid size")
@click.option("--out-dir", type=click.Path(file_okay=False), required=True, help="Output directory")
@click.pass_context
@handle_errors
def pw(ctx, x_path, y_path, family, n, d, delta, seed, kde, grid_points, out_dir, **overrides):
    """Estimate the projected Wasserstein distance between two samples"""
    _orchestrator(ctx).pw(x_path, y_path, out_dir, seed=seed, family=family, n=n, d=d, delta=delta,
                          kde=kde, grid_points=grid_points, **overrides)


@cli.command()
@pair_options
@method_option
@click.option("--mode", type=click.Choice(["threshold", "permutation"]), default=None,
              help="Analytic threshold or permutation p-value")
@alpha_option
@click.option("--permutations", type=click.IntRange(min=19), default=None, help="Permutation count P")
@click.option("--sigmoid/--no-sigmoid", default=None,
              help="Sigmoid preprocessing (default: on in threshold mode for sample files, laplace-shift and gauss-var)")
@pw_options()
@seed_option
@jobs_option
@click.option("--out", type=click.Path(dir_okay=False), required=True, help="Verdict JSON")
@click.pass_context
@handle_errors
def test(ctx, x_path, y_path, family, n, d, delta, method, mode, alpha, permutations, sigmoid, seed, jobs,
         out, **overrides):
    """Two-sample test; exit code 0 accepts H0, 1 rejects it"""
    verdict = _orchestrator(ctx, jobs).test(
        x_path, y_path, out, method=method, mode=mode, alpha=alpha, permutations=permutations,
        sigmoid=sigmoid, seed=seed, family=family, n=n, d=d, delta=delta, **overrides,
    )
    sys.exit(EXIT_REJECT if verdict.decision is Decision.REJECT_H0 else EXIT_ACCEPT)


@cli.command()
@click.option("--family", type=click.Choice(FAMILIES), required=True, help="Benchmark family")
@click.option("--d", type=click.IntRange(min=1), required=True, help="Dimension")
@click.option("--n", type=click.IntRange(min=1), required=True, help="Points per sample")
@click.option("--trials", type=click.IntRange(min=20), default=None, help="Trials per hypothesis")
@click.option("--delta", type=float, default=None, help="Correlation of the blob / HDGM alternative")
@method_option
@pw_options()
@seed_option
@jobs_option
@click.option("--out", type=click.Path(dir_okay=False), required=True, help="ROC CSV (AUC JSON alongside)")
@click.pass_context
@handle_errors
def roc(ctx, family, d, n, trials, delta, method, seed, jobs, out, **overrides):
    """ROC curve and AUC of a statistic on a benchmark family"""
    _orchestrator(ctx, jobs).roc(family, d, n, out, method=method, trials=trials, seed=seed, delta=delta,
                                 **overrides)


@cli.command("sweep-lambda")
@pair_options
@click.option("--lambda", "lambdas", type=float, multiple=True, required=True,
              help="Penalty value; repeat for several (strictly increasing)")
@pw_options(include_penalty=False)
@seed_option
@click.option("--out", type=click.Path(dir_okay=False), required=True, help="Sweep CSV")
@click.pass_context
@handle_errors
def sweep_lambda(ctx, x_path, y_path, family, n, d, delta, lambdas, seed, out, **overrides):
    """Final PW value and orthogonality defect for each penalty value"""
    _orchestrator(ctx).sweep_lambda(lambdas, out, x_path=x_path, y_path=y_path, seed=seed, family=family,
                                    n=n, d=d, delta=delta, **overrides)


@cli.command()
@click.option("--x", "x_path", type=click.Path(dir_okay=False), required=True, help="First sample CSV")
@click.option("--y", "y_path", type=click.Path(dir_okay=False), required=True, help="Second sample CSV")
@alpha_option
@method_option
@click.option("--k", type=click.IntRange(min=1), default=1, help="Projection dimension")
@click.option("--sigmoid/--no-sigmoid", default=False, help="Sigmoid-preprocess both samples first")
@click.option("--out", type=click.Path(dir_okay=False), required=True, help="Threshold report JSON")
@click.pass_context
@handle_errors
def thresholds(ctx, x_path, y_path, alpha, method, k, sigmoid, out):
    """Acceptance threshold with its per-term breakdown"""
    _orchestrator(ctx).thresholds(x_path, y_path, out, alpha=alpha, method=method, k=k, sigmoid=sigmoid)


@cli.command()
@click.option("--family", type=click.Choice(FAMILIES), required=True, help="Benchmark family")
@click.option("--d", type=click.IntRange(min=1), required=True, help="Dimension")
@click.option("--n", type=click.IntRange(min=1), required=True, help="Points per sample")
@click.option("--trials", type=click.IntRange(min=1), default=None, help="Monte-Carlo trials")
@click.option("--delta", type=float, default=None, help="Correlation of the blob / HDGM alternative")
@alpha_option
@method_option
@click.option("--sigmoid/--no-sigmoid", default=None, help="Sigmoid preprocessing (default: on for laplace-shift and gauss-var)")
@pw_options()
@seed_option
@jobs_option
@click.option("--out", type=click.Path(dir_okay=False), required=True, help="Per-trial CSV (summary JSON alongside)")
@click.pass_context
@handle_errors
def calibrate(ctx, family, d, n, trials, delta, alpha, method, sigmoid, seed, jobs, out, **overrides):
    """Empirical type-I error of the threshold test under H0"""
    _orchestrator(ctx, jobs).calibrate(family, d, n, out, method=method, trials=trials, alpha=alpha,
                                       sigmoid=sigmoid, seed=seed, delta=delta, **overrides)


@cli.command()
@click.option("--family", type=click.Choice(FAMILIES), default="blob", help="Benchmark family (MU side)")
@click.option("--d", type=click.IntRange(min=1), default=2, help="Dimension")
@click.option("--sizes", default="400,1600", help="Sample sizes, comma separated")
@click.option("--seeds", type=click.IntRange(min=1), default=20, help="Seeds per size")
@click.option("--delta", type=float, default=None, help="Correlation of the blob / HDGM alternative")
@pw_options()
@jobs_option
@click.option("--out", type=click.Path(dir_okay=False), required=True, help="Rows CSV (medians CSV alongside)")
@click.pass_context
@handle_errors
def convergence(ctx, family, d, sizes, seeds, delta, jobs, out, **overrides):
    """Decay of the PW statistic with n for two samples of one distribution"""
    try:
        size_list = [int(s) for s in sizes.split(",") if s.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got '{sizes}'", param_hint="--sizes")
    _orchestrator(ctx, jobs).convergence(family, d, size_list, seeds, out, delta=delta, **overrides)


@cli.command()
@click.option("--input", "input_path", type=click.Path(dir_okay=False), required=True, help="One-column sample CSV")
@click.option("--grid-points", type=click.IntRange(min=2), default=512, help="Grid size")
@click.option("--bandwidth", default="silverman", help="Positive number or 'silverman'")
@click.option("--out", type=click.Path(dir_okay=False), required=True, help="KDE CSV")
@click.pass_context
@handle_errors
def kde(ctx, input_path, grid_points, bandwidth, out):
    """Gaussian KDE of a one-dimensional sample"""
    _orchestrator(ctx).kde(input_path, out, grid_points=grid_points, bandwidth=bandwidth)


@cli.command()
def version():
    """Show version information"""
    print_banner(__version__)
    click.echo(__version__)


def main():
    cli(obj={})


if __name__ == "__main__":
    main()
