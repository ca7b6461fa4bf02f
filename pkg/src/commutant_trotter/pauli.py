"""Sparse algebra over n-site Pauli strings.

A Pauli string is stored as a pair of integer bitmasks ``(x, z)`` where bit
``k`` of ``x`` (``z``) is set when site ``k`` carries an X (Z) factor. A site
with both bits set is Y. The key ``(x, z)`` always denotes the Hermitian
string built from I, X, Y, Z, so every physical string has exactly one key:

    P(x, z) = i^{|x & z|} X^x Z^z

Integer masks keep everything exact for hundreds of sites, which is what the
analytic (normalized Frobenius) norms need.
"""
from __future__ import annotations

import math
import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from types import MappingProxyType

import numpy as np

PRUNE_TOL = 1e-14
DENSE_SITE_CAP = 12

_PHASES = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)
_LETTERS = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}


class SiteMismatchError(ValueError):
    """Operands live on different numbers of sites."""


class DenseCapError(ValueError):
    """Requested dense realization exceeds the configured site cap."""


def _popcount(v: int) -> int:
    return v.bit_count()


@dataclass(frozen=True, order=True)
class PauliTerm:
    """A single Hermitian Pauli string on ``n_sites`` sites."""

    n_sites: int
    x: int = 0
    z: int = 0

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError("n_sites must be positive")
        limit = 1 << self.n_sites
        if not (0 <= self.x < limit and 0 <= self.z < limit):
            raise ValueError("bit patterns exceed n_sites")

    @classmethod
    def identity(cls, n_sites: int) -> "PauliTerm":
        return cls(n_sites)

    @classmethod
    def from_label(cls, label: str) -> "PauliTerm":
        """Build from a dense label such as ``"XIZY"`` (site 0 first)."""
        x = z = 0
        for k, ch in enumerate(label.upper()):
            if ch not in _BITS:
                raise ValueError(f"invalid Pauli letter {ch!r}")
            bx, bz = _BITS[ch]
            x |= bx << k
            z |= bz << k
        return cls(len(label), x, z)

    @classmethod
    def from_sites(cls, n_sites: int, ops: Mapping[int, str]) -> "PauliTerm":
        """Build from a sparse ``{site: letter}`` mapping."""
        x = z = 0
        for site, ch in ops.items():
            if not 0 <= site < n_sites:
                raise ValueError(f"site {site} out of range for {n_sites} sites")
            bx, bz = _BITS[ch.upper()]
            x |= bx << site
            z |= bz << site
        return cls(n_sites, x, z)

    @property
    def support(self) -> int:
        return self.x | self.z

    @property
    def weight(self) -> int:
        return _popcount(self.support)

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def label(self) -> str:
        return "".join(
            _LETTERS[(self.x >> k) & 1, (self.z >> k) & 1] for k in range(self.n_sites)
        )

    def commutes_with(self, other: "PauliTerm") -> bool:
        return _popcount((self.x & other.z) ^ (self.z & other.x)) % 2 == 0

    def __repr__(self):
        return f"PauliTerm({self.label()!r})"


def multiply(a: PauliTerm, b: PauliTerm) -> tuple[PauliTerm, complex]:
    """Return ``(c, phase)`` with ``a @ b == phase * c`` and phase in {±1, ±i}."""
    if a.n_sites != b.n_sites:
        raise SiteMismatchError(f"{a.n_sites} vs {b.n_sites} sites")
    x = a.x ^ b.x
    z = a.z ^ b.z
    k = (
        _popcount(a.x & a.z)
        + _popcount(b.x & b.z)
        - _popcount(x & z)
        + 2 * _popcount(a.z & b.x)
    )
    return PauliTerm(a.n_sites, x, z), _PHASES[k % 4]


class PauliSum:
    """Immutable weighted sum of Pauli strings sharing ``n_sites``."""

    __slots__ = ("n_sites", "_terms")

    def __init__(self, n_sites: int, terms: Mapping[PauliTerm, complex] | Iterable = ()):
        if n_sites < 1:
            raise ValueError("n_sites must be positive")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[tuple[int, int], complex] = {}
        for term, coeff in items:
            if term.n_sites != n_sites:
                raise SiteMismatchError(f"term on {term.n_sites} sites in {n_sites}-site sum")
            key = (term.x, term.z)
            acc[key] = acc.get(key, 0.0) + complex(coeff)
        self.n_sites = n_sites
        self._terms = MappingProxyType(
            {
                PauliTerm(n_sites, x, z): c
                for (x, z), c in sorted(acc.items())
                if abs(c) >= PRUNE_TOL
            }
        )

    # construction helpers -------------------------------------------------

    @classmethod
    def zero(cls, n_sites: int) -> "PauliSum":
        return cls(n_sites)

    @classmethod
    def identity(cls, n_sites: int, coeff: complex = 1.0) -> "PauliSum":
        return cls(n_sites, {PauliTerm.identity(n_sites): coeff})

    @classmethod
    def from_term(cls, term: PauliTerm, coeff: complex = 1.0) -> "PauliSum":
        return cls(term.n_sites, {term: coeff})

    @classmethod
    def from_labels(cls, pairs: Iterable[tuple[complex, str]]) -> "PauliSum":
        pairs = list(pairs)
        if not pairs:
            raise ValueError("from_labels needs at least one term to fix n_sites")
        n = len(pairs[0][1])
        return cls(n, [(PauliTerm.from_label(lbl), c) for c, lbl in pairs])

    @classmethod
    def parse(cls, n_sites: int, text: str) -> "PauliSum":
        """Parse ``"<coeff> * <P><site> <P><site> ..."`` (one term).

        ``"1.0 * Z0 Z1"`` gives Z on sites 0 and 1; a bare operator list
        means coefficient 1.
        """
        text = text.strip()
        if "*" in text:
            coeff_txt, ops_txt = text.split("*", 1)
            coeff = complex(coeff_txt.strip().replace(" ", ""))
        else:
            coeff, ops_txt = 1.0, text
        ops: dict[int, str] = {}
        tokens = ops_txt.split()
        if not tokens:
            raise ValueError(f"no operators in term {text!r}")
        for tok in tokens:
            m = re.fullmatch(r"([XYZIxyzi])(\d+)", tok)
            if m is None:
                raise ValueError(f"bad operator token {tok!r}")
            letter, site = m.group(1).upper(), int(m.group(2))
            if site in ops:
                raise ValueError(f"site {site} repeated in term {text!r}")
            if letter != "I":
                ops[site] = letter
        return cls(n_sites, {PauliTerm.from_sites(n_sites, ops): coeff})

    # mapping-like access --------------------------------------------------

    @property
    def terms(self) -> Mapping[PauliTerm, complex]:
        return self._terms

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, term: PauliTerm) -> complex:
        return self._terms.get(term, 0.0j)

    def __eq__(self, other):
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self.n_sites == other.n_sites and (self - other).is_zero()

    def __hash__(self):
        return hash((self.n_sites, tuple(self._terms.items())))

    def __repr__(self):
        if not self._terms:
            return f"PauliSum({self.n_sites}, 0)"
        body = " + ".join(f"({c:.6g})*{t.label()}" for t, c in list(self._terms.items())[:8])
        more = "" if len(self._terms) <= 8 else f" + ... ({len(self._terms)} terms)"
        return f"PauliSum({body}{more})"

    # arithmetic -----------------------------------------------------------

    def _check(self, other: "PauliSum"):
        if self.n_sites != other.n_sites:
            raise SiteMismatchError(f"{self.n_sites} vs {other.n_sites} sites")

    def __add__(self, other):
        if not isinstance(other, PauliSum):
            return NotImplemented
        self._check(other)
        return PauliSum(self.n_sites, list(self) + list(other))

    def __sub__(self, other):
        if not isinstance(other, PauliSum):
            return NotImplemented
        self._check(other)
        return PauliSum(self.n_sites, list(self) + [(t, -c) for t, c in other])

    def __neg__(self):
        return PauliSum(self.n_sites, [(t, -c) for t, c in self])

    def __mul__(self, scalar):
        if isinstance(scalar, PauliSum):
            return NotImplemented
        return PauliSum(self.n_sites, [(t, c * scalar) for t, c in self])

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / scalar)

    def __matmul__(self, other):
        if not isinstance(other, PauliSum):
            return NotImplemented
        self._check(other)
        out = []
        for ta, ca in self:
            for tb, cb in other:
                tc, ph = multiply(ta, tb)
                out.append((tc, ph * ca * cb))
        return PauliSum(self.n_sites, out)

    def adjoint(self) -> "PauliSum":
        return PauliSum(self.n_sites, [(t, c.conjugate()) for t, c in self])

    def is_hermitian(self, tol: float = PRUNE_TOL) -> bool:
        return all(abs(c.imag) <= tol for _, c in self)

    def real_part_coefficients(self) -> "PauliSum":
        return PauliSum(self.n_sites, [(t, c.real) for t, c in self])


def commutator(a: PauliSum, b: PauliSum) -> PauliSum:
    """``[a, b] = ab - ba`` computed term by term.

    Only anticommuting pairs contribute, each as ``2 * a_i b_j``. Pairs with
    disjoint support always commute and are skipped via a per-site index.
    """
    if a.n_sites != b.n_sites:
        raise SiteMismatchError(f"{a.n_sites} vs {b.n_sites} sites")
    b_items = list(b)
    by_site: dict[int, list[int]] = {}
    for idx, (tb, _) in enumerate(b_items):
        s = tb.support
        while s:
            low = s & -s
            by_site.setdefault(low.bit_length() - 1, []).append(idx)
            s ^= low
    out = []
    for ta, ca in a:
        s = ta.support
        cand: set[int] = set()
        while s:
            low = s & -s
            cand.update(by_site.get(low.bit_length() - 1, ()))
            s ^= low
        for idx in cand:
            tb, cb = b_items[idx]
            if not ta.commutes_with(tb):
                tc, ph = multiply(ta, tb)
                out.append((tc, 2.0 * ph * ca * cb))
    return PauliSum(a.n_sites, out)


def frobenius_norm_normalized(s: PauliSum) -> float:
    """``||S||_F / sqrt(d)``, exact from Hilbert-Schmidt orthogonality."""
    return math.sqrt(sum(abs(c) ** 2 for _, c in s))


def coefficient_one_norm(s: PauliSum) -> float:
    """Sum of coefficient magnitudes; an upper bound on the spectral norm."""
    return float(sum(abs(c) for _, c in s))


def mutually_commuting(s: PauliSum) -> bool:
    terms = [t for t, _ in s]
    return all(
        terms[i].commutes_with(terms[j])
        for i in range(len(terms))
        for j in range(i + 1, len(terms))
    )


def _index_mask(n_sites: int, site_mask: int) -> int:
    # site 0 is the leftmost tensor factor, i.e. the most significant index bit
    out = 0
    while site_mask:
        low = site_mask & -site_mask
        out |= 1 << (n_sites - low.bit_length())
        site_mask ^= low
    return out


def _parity(v: np.ndarray) -> np.ndarray:
    v = v.copy()
    p = np.zeros_like(v)
    while np.any(v):
        p ^= v & 1
        v >>= 1
    return p


def to_dense(s: PauliSum, site_cap: int = DENSE_SITE_CAP) -> np.ndarray:
    """Dense ``2^n x 2^n`` complex matrix of ``s``."""
    n = s.n_sites
    if n > site_cap:
        raise DenseCapError(f"{n} sites exceeds dense cap of {site_cap}")
    d = 1 << n
    out = np.zeros((d, d), dtype=complex)
    cols = np.arange(d, dtype=np.int64)
    for term, coeff in s:
        xm = _index_mask(n, term.x)
        zm = _index_mask(n, term.z)
        signs = 1 - 2 * _parity(cols & zm)
        phase = _PHASES[_popcount(term.x & term.z) % 4]
        # (X^x Z^z)|b> = (-1)^{z.b} |b ^ x>
        out[cols ^ xm, cols] += coeff * phase * signs
    return out
