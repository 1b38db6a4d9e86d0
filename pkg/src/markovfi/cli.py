"""Command-line front end ``markov-fi``.

Exit codes: 0 success, 2 invalid input or domain error, 3 unreadable or
missing file, 4 optimizer non-convergence.
"""

from __future__ import annotations

import io
import json
import sys
from pathlib import Path

import click
import numpy as np

from . import chain as chain_mod
from .chain import load_chain, measure_from_data, steady_state
from .coarse import (
    averaged_generator,
    clustering_search,
    coarse_grained_generator,
    effective_generator,
    error_monitor,
    load_map,
    load_multiscale,
    multiscale_error_sweep,
    quality_score,
)
from .constants import WHICH, alpha_gpi, constant_report, tensor_product
from .dynamics import decay_envelope, dissipation_audit, evolve
from .errors import MarkovFIError, OptimizerDidNotConverge
from .instances import export_all
from .serialize import dumps_json

EXIT_DOMAIN = 2
EXIT_IO = 3
EXIT_OPTIMIZER = 4

TOLERANCES = {
    "row_sum": "ROW_SUM_RTOL",
    "mass": "MASS_TOL",
    "steady_residual": "STEADY_STATE_RESIDUAL",
}

TOL_HELP = ("Override a validation tolerance as NAME=VALUE; repeatable. "
            "Names: row_sum (relative row-sum tolerance, default 1e-12), "
            "mass (probability mass tolerance, default 1e-12), "
            "steady_residual (steady-state residual, default 1e-10).")


class IOFailure(Exception):
    """Missing or unparseable input file."""


_DEFAULT_TOLERANCES = {k: getattr(chain_mod, v) for k, v in TOLERANCES.items()}


def _apply_tolerances(items):
    for name, value in _DEFAULT_TOLERANCES.items():
        setattr(chain_mod, TOLERANCES[name], value)
    for item in items:
        name, sep, value = item.partition("=")
        if not sep or name not in TOLERANCES:
            raise click.BadParameter(f"unknown tolerance {item!r}", param_hint="--tol")
        try:
            setattr(chain_mod, TOLERANCES[name], float(value))
        except ValueError:
            raise click.BadParameter(f"bad value in {item!r}", param_hint="--tol") from None


def _read_json(path):
    try:
        with open(Path(path), encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise IOFailure(f"cannot read {path}: {exc}") from None


def _chain(path):
    try:
        return load_chain(path)
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise IOFailure(f"cannot read {path}: {exc}") from None


def _vector(text, what):
    """Comma-separated numbers, or the path of a JSON list/measure file."""
    if Path(text).is_file():
        data = _read_json(text)
        if isinstance(data, dict):
            data = data.get("measure")
        return np.asarray(data, dtype=float)
    try:
        return np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise click.BadParameter(f"cannot parse {what} {text!r}") from None


def _times(text):
    """``start:stop:count`` (inclusive linspace) or comma-separated values."""
    parts = text.split(":")
    try:
        if len(parts) == 3:
            return np.linspace(float(parts[0]), float(parts[1]), int(parts[2]))
        return np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise click.BadParameter(f"cannot parse times {text!r}") from None


def _emit(text, out):
    if out is None:
        click.echo(text, nl=False)
    else:
        try:
            Path(out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise IOFailure(f"cannot write {out}: {exc}") from None


def _csv(writer):
    buf = io.StringIO()
    writer(buf)
    return buf.getvalue()


def _generator_dict(G):
    return {"states": list(G.space.labels), "rates": G.rates.tolist()}


class _Group(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except IOFailure as exc:
            click.echo(f"I/O error: {exc}", err=True)
            ctx.exit(EXIT_IO)
        except OptimizerDidNotConverge as exc:
            click.echo(f"OptimizerDidNotConverge: {exc}", err=True)
            ctx.exit(EXIT_OPTIMIZER)
        except MarkovFIError as exc:
            click.echo(f"{type(exc).__name__}: {exc}", err=True)
            ctx.exit(EXIT_DOMAIN)


@click.group(cls=_Group)
@click.option("--tol", multiple=True, metavar="NAME=VALUE", help=TOL_HELP)
def main(tol):
    """Generalised Poincare and log-Sobolev constants of finite Markov chains."""
    _apply_tolerances(tol)


@main.command()
@click.argument("chain_file")
def validate(chain_file):
    """Check that CHAIN_FILE holds an irreducible generator."""
    cf = _chain(chain_file)
    pi = steady_state(cf.generator)
    click.echo(f"valid generator on {cf.generator.size} states")
    click.echo("steady state: " + dumps_json(pi.weights.tolist()).strip())


def _reference(cf, measure):
    if measure is not None:
        return measure_from_data(_read_json(measure), cf.space)
    if cf.measure is not None:
        return cf.measure
    return steady_state(cf.generator)


@main.command()
@click.argument("chain_file")
@click.option("--measure", help="Reference measure JSON; default: the chain "
              "file's measure, else the steady state.")
@click.option("--which", type=click.Choice(WHICH), default="all", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--restarts", type=int, default=16, show_default=True)
@click.option("--out", help="Write JSON here instead of stdout.")
def constants(chain_file, measure, which, seed, restarts, out):
    """Constants report for a chain and reference measure."""
    cf = _chain(chain_file)
    zeta = _reference(cf, measure)
    report = constant_report(zeta, cf.generator, which=which, seed=seed,
                             restarts=restarts)
    _emit(dumps_json(report.to_dict()), out)


@main.command("evolve")
@click.argument("chain_file")
@click.option("--mu0", required=True, help="Initial law: comma list or JSON file.")
@click.option("--zeta0", help="Second initial law for --audit; default: the "
              "chain file's measure, else the steady state.")
@click.option("--times", "times_text", default="0:1:11", show_default=True,
              help="start:stop:count or comma list.")
@click.option("--method", type=click.Choice(["expm", "rk4"]), default="expm",
              show_default=True)
@click.option("--audit", is_flag=True, help="Emit the dissipation audit instead.")
@click.option("--delta", type=float, help="With --audit, add decay envelopes from this time.")
@click.option("--out")
def evolve_cmd(chain_file, mu0, zeta0, times_text, method, audit, delta, out):
    """Trajectory CSV (or dissipation audit CSV) of the forward equation."""
    cf = _chain(chain_file)
    M = cf.generator
    mu = _vector(mu0, "mu0")
    times = _times(times_text)
    if not audit:
        _emit(_csv(evolve(M, mu, times, method=method).to_csv), out)
        return
    z0 = _vector(zeta0, "zeta0") if zeta0 else _reference(cf, None).weights
    if delta is None:
        result = dissipation_audit(M, mu, z0, times)
    else:
        result = decay_envelope(M, mu, z0, times, delta)
    _emit(_csv(result.to_csv), out)


@main.command("coarse-grain")
@click.argument("chain_file")
@click.argument("map_file")
@click.option("--kind", type=click.Choice(["effective", "averaged", "exact"]),
              default="effective", show_default=True)
@click.option("--mu", "mu_text", help="Fine law for --kind exact.")
@click.option("--monitor", "monitor_mu0", help="Fine initial law: emit the "
              "error-estimate monitor CSV along its trajectory instead.")
@click.option("--times", "times_text", default="0:5:51", show_default=True)
@click.option("--out")
def coarse_grain(chain_file, map_file, kind, mu_text, monitor_mu0, times_text, out):
    """Reduced generator of CHAIN_FILE under the map in MAP_FILE."""
    cf = _chain(chain_file)
    M = cf.generator
    xi = _map(map_file, cf)
    if monitor_mu0:
        mon = error_monitor(M, xi, _vector(monitor_mu0, "mu0"), _times(times_text))
        _emit(_csv(mon.to_csv), out)
        return
    if kind == "effective":
        G = effective_generator(M, xi)
    elif kind == "averaged":
        G = averaged_generator(M, xi)
    else:
        if not mu_text:
            raise click.UsageError("--kind exact needs --mu")
        G = coarse_grained_generator(M, xi, _vector(mu_text, "mu"))
    body = {"kind": kind, **_generator_dict(G),
            "steady_state": steady_state(G).weights.tolist()}
    _emit(dumps_json(body), out)


def _map(path, cf):
    try:
        return load_map(path, cf.space)
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise IOFailure(f"cannot read {path}: {exc}") from None


@main.command()
@click.argument("chain_file")
@click.argument("map_file")
@click.option("--glsi", is_flag=True, help="Add per-cluster gLSI estimates.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out")
def quality(chain_file, map_file, glsi, seed, out):
    """Quality score of a coarse-graining map."""
    cf = _chain(chain_file)
    report = quality_score(cf.generator, _map(map_file, cf), with_glsi=glsi, seed=seed)
    _emit(dumps_json(report.to_dict()), out)


@main.command()
@click.argument("chain_file")
@click.option("-k", "clusters", type=int, required=True, help="Number of clusters.")
@click.option("--max-states", type=int, default=12, show_default=True)
@click.option("--budget", type=int, help="Maximum number of partitions.")
@click.option("--top", type=int, help="Only report the best TOP partitions.")
@click.option("--out")
def search(chain_file, clusters, max_states, budget, top, out):
    """Exhaustive ranking of partitions into K clusters by quality score."""
    cf = _chain(chain_file)
    result = clustering_search(cf.generator, clusters, max_states=max_states,
                               budget=budget)
    body = result.to_dict()
    if top is not None:
        body["ranking"] = body["ranking"][:top]
    _emit(dumps_json(body), out)


@main.command()
@click.argument("ms_file")
@click.option("--eps", "eps_list", type=float, multiple=True, required=True,
              help="Scale parameter; repeat in decreasing order.")
@click.option("--mu0", required=True, help="Fine initial law.")
@click.option("--eta0", help="Coarse initial law; default: pushforward of mu0.")
@click.option("--eta-shift", help="Zero-sum coarse shift scaled by sqrt(eps).")
@click.option("--times", "times_text", default="0:10:2001", show_default=True)
@click.option("--out")
def multiscale(ms_file, eps_list, mu0, eta0, eta_shift, times_text, out):
    """Error table (eps, sup_H, tv_error, gen_dist) of a multiscale chain."""
    try:
        ms = load_multiscale(ms_file)
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise IOFailure(f"cannot read {ms_file}: {exc}") from None
    sweep = multiscale_error_sweep(
        ms, eps_list, _vector(mu0, "mu0"), _times(times_text),
        eta0=_vector(eta0, "eta0") if eta0 else None,
        eta_shift=_vector(eta_shift, "eta-shift") if eta_shift else None)
    _emit(_csv(sweep.to_csv), out)


@main.command()
@click.argument("chain_files", nargs=-1, required=True)
@click.option("--max-states", type=int, default=4096, show_default=True)
@click.option("--out")
def tensor(chain_files, max_states, out):
    """Product chain of several chain files with its Poincare constants.

    Each factor uses its file's measure, else its steady state.
    """
    factors = []
    for path in chain_files:
        cf = _chain(path)
        factors.append((_reference(cf, None), cf.generator))
    zeta, M = tensor_product(factors, max_states=max_states)
    parts = [alpha_gpi(z, g) for z, g in factors]
    body = {**_generator_dict(M), "measure": zeta.weights.tolist(),
            "factor_gpi": parts, "gpi": alpha_gpi(zeta, M),
            "predicted_gpi": min(parts) / len(parts)}
    _emit(dumps_json(body), out)


@main.command()
@click.argument("directory")
def instances(directory):
    """Write the bundled reference instances as JSON files into DIRECTORY."""
    try:
        paths = export_all(directory)
    except OSError as exc:
        raise IOFailure(str(exc)) from None
    for p in paths:
        click.echo(str(p))


if __name__ == "__main__":
    sys.exit(main())
