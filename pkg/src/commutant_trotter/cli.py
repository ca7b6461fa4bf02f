"""Command-line front end.

Every subcommand reads a JSON model config and writes CSV (or JSON for
``decompose``). CSV output starts with ``#``-prefixed lines holding the run
manifest, so a file alone is enough to reproduce it.

Examples::

    commutant-trotter steps --config mfi400.json --t 400 --eps 0.01 --bound prev
    commutant-trotter bounds --config mfi10.json --tau 0.05 --tmax 50 --dt 2.5 --empirical
    commutant-trotter observable --config mfi10.json --observable H --tau 0.1 --tmax 40 --dt 0.1
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import __version__
from .bounds import bound_new_pf2, bound_prev_pf2, crossover_time, steps_required
from .commutant import ad_apply, decompose
from .formulas import (
    NORM_KINDS,
    TimeGridError,
    empirical_error_series,
    leading_error_pf2,
    operator_norm,
)
from .linalg import frobenius_norm
from .models import ModelError, TwoTermModel, model_from_dict
from .observables import (
    ObservableSpec,
    StateSpec,
    expectation_series,
    predicted_series,
    split_leading_error,
    variance_predicted_series,
)
from .pauli import DenseCapError, PauliSum, commutator, to_dense


class CliError(Exception):
    pass


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def _write_atomic(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def render_csv(manifest: dict, columns: dict[str, np.ndarray]) -> str:
    lines = ["# " + json.dumps(manifest, sort_keys=True)]
    names = list(columns)
    lines.append(",".join(names))
    n_rows = len(next(iter(columns.values()))) if columns else 0
    for i in range(n_rows):
        lines.append(",".join(_fmt(columns[c][i]) for c in names))
    return "\n".join(lines) + "\n"


def read_csv(text: str) -> tuple[dict, dict[str, np.ndarray]]:
    """Inverse of :func:`render_csv` (manifest, float columns)."""
    lines = text.splitlines()
    manifest = json.loads(lines[0][2:])
    names = lines[1].split(",")
    rows = [list(map(float, ln.split(","))) for ln in lines[2:] if ln]
    data = np.array(rows).reshape(len(rows), len(names))
    return manifest, {n: data[:, j] for j, n in enumerate(names)}


def _load(args) -> tuple[dict, TwoTermModel]:
    try:
        with open(args.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"config is not valid JSON: {exc}") from exc
    return cfg, model_from_dict(cfg)


def _manifest(args, cfg: dict, m: TwoTermModel, **extra) -> dict:
    out = {
        "subcommand": args.command,
        "config": cfg,
        "model": m.label,
        "notes": list(m.notes) + ([cfg["note"]] if "note" in cfg else []),
        "seed": getattr(args, "seed", 0),
        "out": getattr(args, "out", None),
        "version": __version__,
    }
    out.update(extra)
    return out


def time_grid(tau: float, tmax: float, dt: float) -> np.ndarray:
    """``dt, 2 dt, ..., <= tmax``; ``dt`` must be a multiple of ``tau``."""
    if tau <= 0 or dt <= 0:
        raise CliError("--tau and --dt must be positive")
    if tmax < 0:
        raise CliError("--tmax must be nonnegative")
    ratio = dt / tau
    if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio) or round(ratio) < 1:
        raise CliError(f"--dt {dt} is not a positive multiple of --tau {tau}")
    k = int(math.floor(tmax / dt + 1e-9))
    # build from integer step counts so every t is r * tau to the last bit
    return np.arange(1, k + 1) * round(ratio) * tau


def _operator(spec: str, m: TwoTermModel) -> np.ndarray:
    h = m.hamiltonian
    named = {
        "H": lambda: h,
        "H1": lambda: m.h1,
        "H2": lambda: m.h2,
        "[H,H1]": lambda: commutator(h, m.h1),
        "[H,H2]": lambda: commutator(h, m.h2),
        "[H1,H2]": lambda: commutator(m.h1, m.h2),
        "leading_pf2": lambda: leading_error_pf2(m) * -1j,
    }
    key = spec.replace(" ", "")
    if key in named:
        return to_dense(named[key]())
    return to_dense(_pauli_terms(spec, m.n_sites))


def _pauli_terms(spec: str, n: int) -> PauliSum:
    out = PauliSum.zero(n)
    for part in spec.split(";"):
        if part.strip():
            out = out + PauliSum.parse(n, part)
    return out


def _observable(spec: str, m: TwoTermModel) -> ObservableSpec:
    key = spec.replace(" ", "")
    if key in ("H", "energy"):
        return ObservableSpec("hamiltonian")
    if key in ("H^2", "Hsq"):
        return ObservableSpec("hamiltonian_squared")
    if key in ("var", "Var(H)", "variance"):
        return ObservableSpec("variance")
    if key == "H1":
        return ObservableSpec("pauli_sum", m.h1)
    if key == "H2":
        return ObservableSpec("pauli_sum", m.h2)
    return ObservableSpec("pauli_sum", _pauli_terms(spec, m.n_sites))


def _state(spec: str, seed: int, n: int) -> np.ndarray:
    if spec == "zeros":
        return StateSpec("basis_string", "0" * n).build(n)
    if spec.startswith("basis:"):
        return StateSpec("basis_string", spec[len("basis:"):]).build(n)
    if spec == "random":
        return StateSpec("random_pure", seed).build(n)
    raise CliError(f"unknown state {spec!r}; use zeros, basis:<bits> or random")


# subcommands ------------------------------------------------------------------


def cmd_bounds(args) -> int:
    cfg, m = _load(args)
    times = time_grid(args.tau, args.tmax, args.dt)
    prev = np.array([bound_prev_pf2(m, args.tau, t, args.norm).total for t in times])
    new = np.array([bound_new_pf2(m, args.tau, t, args.norm).total for t in times])
    cols = {"t": times, "bound_prev": prev, "bound_new": new}
    if args.empirical:
        cols["empirical"] = empirical_error_series(m, args.tau, 2, times, args.norm).errors
    man = _manifest(
        args, cfg, m, tau=args.tau, tmax=args.tmax, dt=args.dt, norm=args.norm, order=2,
        crossover=crossover_time(m, args.tau, args.norm),
    )
    _write_atomic(args.out, render_csv(man, cols))
    return 0


def cmd_empirical(args) -> int:
    cfg, m = _load(args)
    times = time_grid(args.tau, args.tmax, args.dt)
    series = empirical_error_series(m, args.tau, args.order, times, args.norm)
    man = _manifest(
        args, cfg, m, tau=args.tau, tmax=args.tmax, dt=args.dt, norm=args.norm, order=args.order
    )
    _write_atomic(args.out, render_csv(man, {"t": times, "r": series.steps, "empirical": series.errors}))
    return 0


def cmd_steps(args) -> int:
    _, m = _load(args)
    r = steps_required(m, args.t, args.eps, args.bound, args.norm)
    _write_atomic(args.out, f"{r}\n")
    return 0


def cmd_decompose(args) -> int:
    cfg, m = _load(args)
    m.check_dense()
    es = m.eig_h
    o = _operator(args.operator, m)
    split = decompose(es, o)
    h = m.dense_h
    sizes = np.bincount(es.labels)
    report = {
        "manifest": _manifest(args, cfg, m, operator=args.operator),
        "dim": es.dim,
        "norm_par_spectral": operator_norm(split.o_par, "spectral"),
        "norm_perp_spectral": operator_norm(split.o_perp, "spectral"),
        "norm_par_frobenius": operator_norm(split.o_par, "frobenius"),
        "norm_perp_frobenius": operator_norm(split.o_perp, "frobenius"),
        "commutation_residual": frobenius_norm(ad_apply(h, split.o_par)),
        "orthogonality_residual": abs(complex(np.vdot(split.o_par, split.o_perp))),
        "completeness_residual": frobenius_norm(split.o_par + split.o_perp - o),
        "n_blocks": int(len(sizes)),
        "max_block_size": int(sizes.max()),
        "block_size_counts": {str(k): int(v) for k, v in zip(*np.unique(sizes, return_counts=True))},
    }
    _write_atomic(args.out, json.dumps(report, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_observable(args) -> int:
    cfg, m = _load(args)
    m.check_dense()
    times = time_grid(args.tau, args.tmax, args.dt)
    state = _state(args.state, args.seed, m.n_sites)
    obs = _observable(args.observable, m)
    es = m.eig_h
    if obs.kind == "variance":
        specs = [ObservableSpec("hamiltonian"), ObservableSpec("hamiltonian_squared")]
        pf, ex = expectation_series(m, specs, state, args.tau, args.order, times)
        pf_val = pf[:, 1] - pf[:, 0] ** 2
        ex_val = ex[:, 1] - ex[:, 0] ** 2
    else:
        pf, ex = expectation_series(m, [obs], state, args.tau, args.order, times)
        pf_val, ex_val = pf[:, 0], ex[:, 0]
    cols = {"t": times, "pf_value": pf_val, "exact_value": ex_val, "deviation": pf_val - ex_val}
    if args.order == 2:
        split = split_leading_error(m, es)
        if obs.kind == "variance":
            lin, const = variance_predicted_series(m, state, args.tau, times, es, split=split)
        else:
            lin, const = predicted_series(m, obs, state, args.tau, times, es, split=split)
            lin, const = lin.real, const.real
        cols["predicted_linear"] = lin
        cols["predicted_constant"] = const
    man = _manifest(
        args, cfg, m, tau=args.tau, tmax=args.tmax, dt=args.dt, order=args.order,
        observable=args.observable, state=args.state,
    )
    _write_atomic(args.out, render_csv(man, cols))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="commutant-trotter",
        description="Trotter error bounds and diagnostics via commutant decomposition.",
    )
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, grid=True, norm=True, order=False):
        sp.add_argument("--config", required=True, help="model config (JSON)")
        sp.add_argument("--out", default=None, help="output path (default: stdout)")
        sp.add_argument("--seed", type=int, default=0)
        if grid:
            sp.add_argument("--tau", type=float, required=True, help="Trotter step size")
            sp.add_argument("--tmax", type=float, required=True)
            sp.add_argument("--dt", type=float, required=True, help="output time spacing")
        if norm:
            sp.add_argument("--norm", choices=NORM_KINDS, default="spectral")
        if order:
            sp.add_argument("--order", type=int, default=2)

    sp = sub.add_parser("bounds", help="previous and commutant-separated PF2 bounds vs t")
    common(sp)
    sp.add_argument("--empirical", action="store_true", help="add the empirical PF2 error column")
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("empirical", help="empirical ||U_pf^r - U^r|| vs t")
    common(sp, order=True)
    sp.set_defaults(func=cmd_empirical)

    sp = sub.add_parser("steps", help="PF2 step count needed for accuracy eps at time t")
    common(sp, grid=False)
    sp.set_defaults(norm="frobenius")
    sp.add_argument("--t", type=float, required=True)
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--bound", choices=("prev", "new"), default="new")
    sp.set_defaults(func=cmd_steps)

    sp = sub.add_parser("decompose", help="commutant split of an operator (JSON report)")
    common(sp, grid=False, norm=False)
    sp.add_argument("--operator", default="H2", help="H, H1, H2, [H,H2], [H1,H2], leading_pf2 or Pauli terms")
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("observable", help="observable Trotter error vs t")
    common(sp, norm=False, order=True)
    sp.add_argument("--observable", default="H", help="H, H^2, var, H1, H2 or Pauli terms 'c * Z0; ...'")
    sp.add_argument("--state", default="zeros", help="zeros, basis:<bits> or random (uses --seed)")
    sp.set_defaults(func=cmd_observable)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ModelError, TimeGridError, DenseCapError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
