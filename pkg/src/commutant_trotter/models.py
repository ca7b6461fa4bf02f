"""Benchmark two-block Hamiltonians ``H = H1 + H2``.

Each block is a sum of mutually commuting Pauli strings, so its exponential
is exact on hardware and the only Trotter error comes from ``[H1, H2]``.
Sites are 0-based; lattices are numbered row-major.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .linalg import Eigensystem, hermitian_eig
from .pauli import DENSE_SITE_CAP, PauliSum, PauliTerm, mutually_commuting, to_dense


class ModelError(ValueError):
    """Invalid model parameters or configuration."""


@dataclass(frozen=True, eq=False)
class TwoTermModel:
    n_sites: int
    h1: PauliSum
    h2: PauliSum
    label: str = "custom"
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self):
        for name, block in (("h1", self.h1), ("h2", self.h2)):
            if block.n_sites != self.n_sites:
                raise ModelError(f"{name} lives on {block.n_sites} sites, model has {self.n_sites}")
            if not block.is_hermitian():
                raise ModelError(f"{name} has complex Pauli coefficients")
            if not mutually_commuting(block):
                raise ModelError(f"terms inside {name} do not mutually commute")

    @property
    def hamiltonian(self) -> PauliSum:
        return self.h1 + self.h2

    def check_dense(self, site_cap: int = DENSE_SITE_CAP):
        if self.n_sites > site_cap:
            raise ModelError(f"{self.n_sites} sites exceeds dense cap of {site_cap}")

    @cached_property
    def dense_h1(self) -> np.ndarray:
        return to_dense(self.h1)

    @cached_property
    def dense_h2(self) -> np.ndarray:
        return to_dense(self.h2)

    @cached_property
    def dense_h(self) -> np.ndarray:
        return self.dense_h1 + self.dense_h2

    @cached_property
    def eig_h(self) -> Eigensystem:
        return hermitian_eig(self.dense_h)

    @cached_property
    def eig_h1(self) -> Eigensystem:
        return hermitian_eig(self.dense_h1)

    @cached_property
    def eig_h2(self) -> Eigensystem:
        return hermitian_eig(self.dense_h2)


def _single(n: int, ops: dict[int, str], coeff: float) -> tuple[PauliTerm, float]:
    return PauliTerm.from_sites(n, ops), coeff


def build_mfi_1d(
    n: int, J: float = 1.0, h_z: float = 1.1, h_x: float = 1.07, boundary: str = "open"
) -> TwoTermModel:
    """Mixed-field Ising chain: ``H1 = J sum Z_i Z_{i+1} + h_z sum Z_i``, ``H2 = h_x sum X_i``."""
    if n < 2:
        raise ModelError("MFI chain needs n >= 2")
    if boundary not in ("open", "periodic"):
        raise ModelError(f"unknown boundary {boundary!r}")
    if boundary == "periodic" and n < 3:
        raise ModelError("periodic chain needs n >= 3 (n = 2 duplicates the bond)")
    bonds = [(i, i + 1) for i in range(n - 1)]
    if boundary == "periodic":
        bonds.append((n - 1, 0))
    h1 = PauliSum(
        n,
        [_single(n, {i: "Z", j: "Z"}, J) for i, j in bonds]
        + [_single(n, {i: "Z"}, h_z) for i in range(n)],
    )
    h2 = PauliSum(n, [_single(n, {i: "X"}, h_x) for i in range(n)])
    return TwoTermModel(n, h1, h2, label=f"mfi1d n={n} {boundary} J={J} hz={h_z} hx={h_x}")


def lattice_edges(rows: int, cols: int, boundary: str = "periodic") -> list[tuple[int, int]]:
    if rows < 2 or cols < 2:
        raise ModelError("lattice needs rows, cols >= 2")
    if boundary not in ("open", "periodic"):
        raise ModelError(f"unknown boundary {boundary!r}")
    periodic = boundary == "periodic"
    if periodic and (rows < 3 or cols < 3):
        raise ModelError(
            f"{rows}x{cols} periodic lattice wraps a dimension of size 2 onto itself"
        )
    edges = []
    for r in range(rows):
        for c in range(cols):
            site = r * cols + c
            if c + 1 < cols:
                edges.append((site, site + 1))
            elif periodic:
                edges.append((site, r * cols))
            if r + 1 < rows:
                edges.append((site, site + cols))
            elif periodic:
                edges.append((site, c))
    return edges


def build_tfi_2d(
    rows: int, cols: int, J: float = 1.0, h: float = 1.13, boundary: str = "periodic"
) -> TwoTermModel:
    """Transverse-field Ising lattice: ``H1 = J sum_<ij> Z_i Z_j``, ``H2 = h sum X_i``."""
    edges = lattice_edges(rows, cols, boundary)
    n = rows * cols
    h1 = PauliSum(n, [_single(n, {i: "Z", j: "Z"}, J) for i, j in edges])
    h2 = PauliSum(n, [_single(n, {i: "X"}, h) for i in range(n)])
    return TwoTermModel(n, h1, h2, label=f"tfi2d {rows}x{cols} {boundary} J={J} h={h}")


def _terms_from_strings(n: int, specs, block: str) -> PauliSum:
    if not isinstance(specs, list):
        raise ModelError(f"{block} must be a list of term strings")
    out = PauliSum.zero(n)
    for spec in specs:
        try:
            out = out + PauliSum.parse(n, spec)
        except (ValueError, TypeError) as exc:
            raise ModelError(f"bad term in {block}: {exc}") from exc
    return out


def model_from_dict(cfg: dict) -> TwoTermModel:
    if not isinstance(cfg, dict):
        raise ModelError("config must be a JSON object")
    kind = cfg.get("kind")
    params = cfg.get("params", {})
    boundary = cfg.get("boundary")
    try:
        if kind == "mfi1d":
            n = int(cfg["n"])
            return build_mfi_1d(
                n,
                J=float(params.get("J", 1.0)),
                h_z=float(params.get("hz", 1.1)),
                h_x=float(params.get("hx", 1.07)),
                boundary=boundary or "open",
            )
        if kind == "tfi2d":
            return build_tfi_2d(
                int(cfg["rows"]),
                int(cfg["cols"]),
                J=float(params.get("J", 1.0)),
                h=float(params.get("h", 1.13)),
                boundary=boundary or "periodic",
            )
        if kind == "custom":
            n = int(cfg["n"])
            if n < 1:
                raise ModelError("n must be positive")
            h1 = _terms_from_strings(n, cfg.get("h1", []), "h1")
            h2 = _terms_from_strings(n, cfg.get("h2", []), "h2")
            return TwoTermModel(n, h1, h2, label=cfg.get("label", f"custom n={n}"))
    except KeyError as exc:
        raise ModelError(f"config for kind {kind!r} is missing field {exc}") from exc
    raise ModelError(f"unknown model kind {kind!r}")


def parse_config(text: str) -> TwoTermModel:
    """Build a model from JSON config text."""
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"config is not valid JSON: {exc}") from exc
    return model_from_dict(cfg)
