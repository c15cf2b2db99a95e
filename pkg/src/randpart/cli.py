"""``randpart`` command line.

Exit codes: 0 success, 1 invalid arguments or I/O failure, 2 a verification
or ``--check`` assertion failed.
"""

from __future__ import annotations

import math
import sys
from pathlib import Path

import click
import numpy as np

from . import asymptotics as asy
from . import experiments as ex
from . import stirling as st
from . import verify as vf
from ._kernels import BACKEND
from .output import emit, fmt
from .rng import parse_seed

EXIT_CHECK = 2


class CheckFailed(click.ClickException):
    exit_code = EXIT_CHECK


def _apply_check(value: float, check: float | None, tol: float) -> None:
    if check is None:
        return
    if not abs(value - check) <= tol:
        raise CheckFailed(f"check failed: {fmt(value)} not within {tol:g} of {fmt(check)}")
    click.echo(f"check passed: |{fmt(value)} - {fmt(check)}| <= {tol:g}", err=True)


def _write(text: str, out: str | None) -> None:
    if out is None:
        click.echo(text, nl=False)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise click.ClickException(f"cannot write {out}: {exc}") from None


class SeedType(click.ParamType):
    name = "seed"

    def convert(self, value, param, ctx):
        try:
            return parse_seed(value)
        except ValueError as exc:
            self.fail(str(exc), param, ctx)


check_options = [
    click.option("--check", type=float, default=None, help="Expected value; exit 2 if missed."),
    click.option("--tol", type=float, default=1e-9, show_default=True, help="Tolerance for --check."),
]


def with_check(fn):
    for opt in reversed(check_options):
        fn = opt(fn)
    return fn


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(package_name="artifact")
def cli():
    """Partitions induced by random maps [n] -> [n].

    \b
    exact     exact Stirling numbers, inf-min probability, moments of M
    numeric   gamma|g|entropy|x|mu4|lambda4|mu3|lambda4-interval|fkl|stk
    simulate  inf-min|sup-max|singletons|two-blocks|largest-block|threshold-scan
    verify    all|stirling|lattice|kfree|oracle|roots

    Elements are 0-indexed in every input and output: element i stands for
    i + 1 of [n] = {1..n}.
    """


# exact -----------------------------------------------------------------------


@cli.group()
def exact():
    """Exact values."""


@exact.command("stirling")
@click.option("--n", "n", type=int, required=True)
@click.option("--k", "k", type=int, required=True)
@click.option("--log", "as_log", is_flag=True, help="Print log S(n, k) instead.")
@with_check
def exact_stirling(n, k, as_log, check, tol):
    """Stirling number of the second kind S(n, k)."""
    try:
        if as_log:
            value = st.stirling_log(n, k)
            click.echo(fmt(value))
            _apply_check(value, check, tol)
        else:
            value = st.stirling_exact(n, k)
            click.echo(str(value))
            _apply_check(float(value), check, tol)
    except st.StirlingDomainError as exc:
        raise click.BadParameter(str(exc)) from None


@exact.command("inf-min")
@click.option("--n", "n", type=click.IntRange(min=1), required=True)
@click.option("--t", "t", type=click.IntRange(min=1), required=True)
@with_check
def exact_inf_min(n, t, check, tol):
    """Probability that the infimum of t map partitions is p_min."""
    value = asy.exact_inf_min_prob(n, t)
    click.echo(fmt(value))
    _apply_check(value, check, tol)


@exact.command("moments")
@click.option("--n", "n", type=click.IntRange(min=1), required=True)
@click.option("--t", "t", type=click.IntRange(min=1), required=True)
def exact_moments(n, t):
    """E[M], E[C(M,2)] and Var(M) for the singleton count of the supremum."""
    click.echo("n,t,E_M,E_M_pairs,Var_M")
    click.echo(",".join([str(n), str(t), fmt(asy.exact_E_M(n, t)),
                         fmt(asy.exact_E_M_pairs(n, t)), fmt(asy.exact_var_M(n, t))]))


# numeric ---------------------------------------------------------------------


@cli.group()
def numeric():
    """Root-finders and exponent curves."""


CURVES = {
    "gamma": lambda c: asy.solve_gamma(c).gamma,
    "g": asy.g_of_c,
    "entropy": asy.entropy_H,
    "x": asy.x_of_c,
    "mu4": asy.mu4,
    "lambda4": asy.lambda4,
    "mu3": asy.mu3,
}


def _curve_command(name, fn):
    @click.option("--c", "c", type=float, default=None, help="Evaluate at one point.")
    @click.option("--scan", nargs=3, type=(float, float, int), default=None,
                  metavar="A B STEPS", help="CSV rows (c, value) on STEPS points of [A, B].")
    @with_check
    def command(c, scan, check, tol):
        if (c is None) == (scan is None):
            raise click.UsageError("give exactly one of --c or --scan")
        try:
            if c is not None:
                value = fn(c)
                click.echo(fmt(value))
                _apply_check(value, check, tol)
                return
            a, b, steps = scan
            if steps < 1:
                raise click.BadParameter("STEPS must be >= 1")
            if check is not None:
                raise click.UsageError("--check applies to --c only")
            click.echo(f"c,{name}")
            for x in np.linspace(a, b, steps):
                click.echo(f"{fmt(float(x))},{fmt(fn(float(x)))}")
        except asy.DomainError as exc:
            raise click.BadParameter(str(exc)) from None

    command.__doc__ = f"Evaluate {name}(c)."
    return numeric.command(name)(command)


for _name, _fn in CURVES.items():
    _curve_command(_name, _fn)


@numeric.command("lambda4-interval")
@click.option("--step", type=float, default=1e-4, show_default=True)
def numeric_lambda4_interval(step):
    """The two sign changes of lambda4 on (0, 1/2]."""
    lo, hi = asy.lambda4_interval(step)
    click.echo("lo,hi")
    click.echo(f"{fmt(lo)},{fmt(hi)}")


@numeric.command("fkl")
@click.option("--n", "n", type=int, required=True)
@click.option("--k", "k", type=int, required=True)
@click.option("--l", "l", type=int, required=True)
@with_check
def numeric_fkl(n, k, l, check, tol):
    """log f_k(l) = log(n^(l-n) S(k,l) (n-l)^(n-k))."""
    try:
        value = asy.f_k_l_log(n, k, l)
    except asy.DomainError as exc:
        raise click.BadParameter(str(exc)) from None
    click.echo(fmt(value))
    _apply_check(value, check, tol)


@numeric.command("stk")
@click.option("--n", "n", type=int, required=True)
@click.option("--t", "t", type=int, required=True)
@click.option("--k", "k", type=int, required=True)
@with_check
def numeric_stk(n, t, k, check, tol):
    """log s_t(k) = log(n^(k-t) S(t,k) (1-k/n)^t)."""
    try:
        value = asy.s_t_k_log(n, t, k)
    except asy.DomainError as exc:
        raise click.BadParameter(str(exc)) from None
    click.echo(fmt(value))
    _apply_check(value, check, tol)


# simulate --------------------------------------------------------------------


@cli.command()
@click.argument("kind", type=click.Choice(ex.KINDS))
@click.option("--n", "n", type=click.IntRange(min=1), required=True)
@click.option("--t", "t", type=click.IntRange(min=1), required=True,
              help="Number of maps (first t of the range for threshold-scan).")
@click.option("--t-max", "t_max", type=click.IntRange(min=1), default=None,
              help="Last t of a threshold-scan.")
@click.option("--trials", type=click.IntRange(min=1), default=1000, show_default=True)
@click.option("--seed", type=SeedType(), default="0", show_default=True,
              help="64-bit master seed, decimal or 0x-hex.")
@click.option("--threads", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--format", "fmt_name", type=click.Choice(["csv", "json"]), default="csv",
              show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--threshold", "thresholds", type=float, multiple=True,
              help="largest-block cut-off; <1 means a fraction of n. Repeatable.")
@click.option("--exhaustive", is_flag=True, help="Enumerate every t-tuple of maps instead.")
@click.option("--timing", is_flag=True, help="Record elapsed_ms (output no longer reproducible).")
@with_check
def simulate(kind, n, t, t_max, trials, seed, threads, fmt_name, out, thresholds,
             exhaustive, timing, check, tol):
    """Monte Carlo estimate for KIND."""
    try:
        config = ex.ExperimentConfig(kind=kind, n=n, t=t, trials=trials, master_seed=seed,
                                     workers=threads, t_max=t_max,
                                     thresholds=tuple(thresholds), output_format=fmt_name)
        if exhaustive:
            if kind == "threshold-scan":
                raise click.UsageError("--exhaustive does not apply to threshold-scan")
            result = ex.exhaustive_result(config)
        else:
            result = ex.run(config)
    except (ex.ConfigError, ex.CapacityError) as exc:
        raise click.UsageError(str(exc)) from None
    _write(emit(result, fmt_name, timing), out)
    if isinstance(result, ex.ScanResult):
        if check is not None:
            raise click.UsageError("--check does not apply to threshold-scan")
        return
    _apply_check(result.estimate, check, tol)


# verify ----------------------------------------------------------------------


@cli.command("verify")
@click.argument("suite", type=click.Choice(["all", *vf.SUITES]), default="all")
def verify_cmd(suite):
    """Exact and exhaustive self-checks; exit 2 on any failure."""
    checks = vf.run_suite(suite)
    for c in checks:
        status = "PASS" if c.ok else "FAIL"
        detail = f"  ({c.detail})" if c.detail and not c.ok else ""
        click.echo(f"{status}  {c.name}{detail}")
    failed = sum(not c.ok for c in checks)
    click.echo(f"{len(checks) - failed}/{len(checks)} checks passed [{BACKEND} kernels]")
    if failed:
        raise CheckFailed(f"{failed} verification check(s) failed")


def main(argv=None) -> int:
    try:
        cli.main(args=argv, prog_name="randpart", standalone_mode=False)
    except CheckFailed as exc:
        exc.show()
        return EXIT_CHECK
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
