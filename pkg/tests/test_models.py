import json

import numpy as np
import pytest

from commutant_trotter.models import (
    ModelError,
    build_mfi_1d,
    build_tfi_2d,
    lattice_edges,
    parse_config,
)
from commutant_trotter.pauli import PauliSum, commutator, to_dense

from conftest import dense_mfi, kron_sites


def test_mfi_fig2_term_counts():
    m = build_mfi_1d(12)
    assert len(m.h1) == 23 and len(m.h2) == 12


def test_mfi_periodic_counts():
    m = build_mfi_1d(5, boundary="periodic")
    assert len(m.h1) == 10 and len(m.h2) == 5


def test_mfi_pure_bond():
    m = build_mfi_1d(2, J=1.0, h_z=0.0, h_x=0.0)
    assert m.h1 == PauliSum.parse(2, "1.0 * Z0 Z1")
    assert m.h2.is_zero()


def test_mfi_dense_matches_hand_assembly():
    m = build_mfi_1d(3)
    h1, h2 = dense_mfi(3)
    np.testing.assert_allclose(m.dense_h1, h1, atol=1e-14)
    np.testing.assert_allclose(m.dense_h2, h2, atol=1e-14)
    assert np.count_nonzero(m.dense_h1 - np.diag(np.diag(m.dense_h1))) == 0


@pytest.mark.parametrize("n", [1, 0])
def test_mfi_too_small(n):
    with pytest.raises(ModelError):
        build_mfi_1d(n)


def test_tfi_edges():
    assert len(lattice_edges(3, 4, "periodic")) == 24
    assert len(lattice_edges(2, 2, "open")) == 4
    assert len(lattice_edges(3, 4, "open")) == 3 * 3 + 4 * 2
    assert len(set(map(frozenset, lattice_edges(3, 4, "periodic")))) == 24


def test_tfi_fig2_model():
    m = build_tfi_2d(3, 4, J=1.0, h=1.13)
    assert len(m.h1) == 24 and len(m.h2) == 12
    assert set(m.h1.terms.values()) == {1.0}
    assert set(m.h2.terms.values()) == {1.13}


@pytest.mark.parametrize("rows,cols", [(2, 3), (3, 2), (1, 4)])
def test_tfi_degenerate_lattices(rows, cols):
    with pytest.raises(ModelError):
        build_tfi_2d(rows, cols, boundary="periodic")


def test_tfi_dense_against_kron():
    m = build_tfi_2d(2, 2, J=0.8, h=0.3, boundary="open")
    h1 = sum(0.8 * kron_sites(4, {i: "Z", j: "Z"}) for i, j in [(0, 1), (0, 2), (1, 3), (2, 3)])
    h2 = sum(0.3 * kron_sites(4, {i: "X"}) for i in range(4))
    np.testing.assert_allclose(m.dense_h, h1 + h2, atol=1e-14)


@pytest.mark.parametrize(
    "model",
    [build_mfi_1d(4), build_mfi_1d(5, boundary="periodic"), build_tfi_2d(2, 3, boundary="open")],
    ids=["mfi4", "mfi5p", "tfi2x3"],
)
def test_block_invariants(model):
    for block in (model.h1, model.h2):
        terms = [PauliSum.from_term(t, c) for t, c in block]
        assert all(commutator(a, b).is_zero() for a in terms for b in terms)
    h = to_dense(model.hamiltonian)
    np.testing.assert_allclose(h, h.conj().T, atol=1e-12)


def test_config_dispatch_mfi():
    cfg = {"kind": "mfi1d", "n": 6, "params": {"J": 1, "hz": 1.1, "hx": 1.07}, "boundary": "open"}
    m = parse_config(json.dumps(cfg))
    ref = build_mfi_1d(6, 1, 1.1, 1.07, "open")
    assert m.h1 == ref.h1 and m.h2 == ref.h2


def test_config_tfi():
    cfg = {"kind": "tfi2d", "rows": 3, "cols": 3, "params": {"J": 1, "h": 1.13}, "boundary": "open"}
    m = parse_config(json.dumps(cfg))
    assert m.n_sites == 9 and len(m.h1) == 12


def test_config_custom_single_qubit():
    m = parse_config(json.dumps({"kind": "custom", "n": 1, "h1": ["Z0"], "h2": ["X0"]}))
    assert m.h1 == PauliSum.parse(1, "Z0") and m.h2 == PauliSum.parse(1, "X0")


def test_config_custom_non_commuting_block():
    cfg = {"kind": "custom", "n": 1, "h1": ["1.0 * Z0", "1.0 * X0"], "h2": []}
    with pytest.raises(ModelError, match="commute"):
        parse_config(json.dumps(cfg))


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        json.dumps({"kind": "ladder", "n": 3}),
        json.dumps({"kind": "mfi1d"}),
        json.dumps({"kind": "custom", "n": 2, "h1": ["1.0 * Z7"]}),
        json.dumps({"kind": "custom", "n": 2, "h1": ["1j * Z0"]}),
    ],
)
def test_config_errors(text):
    with pytest.raises(ModelError):
        parse_config(text)
