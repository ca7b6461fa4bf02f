import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from commutant_trotter.pauli import (
    DenseCapError,
    PauliSum,
    PauliTerm,
    SiteMismatchError,
    coefficient_one_norm,
    commutator,
    frobenius_norm_normalized,
    multiply,
    to_dense,
)

from conftest import kron_label


def T(label):
    return PauliTerm.from_label(label)


def S(*pairs):
    return PauliSum.from_labels(pairs)


@st.composite
def pauli_sums(draw, n):
    k = draw(st.integers(0, 5))
    pairs = [
        (
            complex(draw(st.integers(-3, 3)), draw(st.integers(-2, 2))),
            draw(st.text("IXYZ", min_size=n, max_size=n)),
        )
        for _ in range(k)
    ]
    return PauliSum(n, [(T(lbl), c) for c, lbl in pairs])


class TestMultiply:
    def test_zx_is_i_y(self):
        assert multiply(T("Z"), T("X")) == (T("Y"), 1j)

    def test_involution(self):
        assert multiply(T("X"), T("X")) == (T("I"), 1)

    def test_two_site_against_dense(self):
        c, ph = multiply(T("ZX"), T("XZ"))
        np.testing.assert_allclose(ph * kron_label(c.label()), kron_label("ZX") @ kron_label("XZ"))

    @given(st.text("IXYZ", min_size=3, max_size=3), st.text("IXYZ", min_size=3, max_size=3))
    def test_all_products_match_dense(self, a, b):
        c, ph = multiply(T(a), T(b))
        assert ph in (1, -1, 1j, -1j)
        np.testing.assert_allclose(ph * kron_label(c.label()), kron_label(a) @ kron_label(b), atol=1e-15)

    @given(*[st.text("IXYZ", min_size=2, max_size=2)] * 3)
    def test_associative(self, a, b, c):
        ab, p1 = multiply(T(a), T(b))
        abc1, p2 = multiply(ab, T(c))
        bc, q1 = multiply(T(b), T(c))
        abc2, q2 = multiply(T(a), bc)
        assert abc1 == abc2 and p1 * p2 == pytest.approx(q1 * q2)

    def test_identity_neutral(self):
        assert multiply(T("II"), T("YZ")) == (T("YZ"), 1)

    def test_site_mismatch(self):
        with pytest.raises(SiteMismatchError):
            multiply(T("X"), T("XX"))


class TestCommutator:
    def test_zx(self):
        assert commutator(S((1, "Z")), S((1, "X"))) == S((2j, "Y"))

    def test_self_commutator_empty(self):
        a = S((1.3, "XY"), (0.2, "ZZ"), (1, "IX"))
        assert commutator(a, a).is_zero()

    def test_ising_bond_with_field(self):
        J, h = 0.7, 1.3
        c = commutator(S((J, "ZZ")), S((h, "XI")))
        assert c == S((2j * J * h, "YZ"))
        dense = kron_label("ZZ") * J @ (h * kron_label("XI"))
        dense = dense - h * kron_label("XI") @ (J * kron_label("ZZ"))
        np.testing.assert_allclose(to_dense(c), dense, atol=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(st.data())
    def test_dense_homomorphism(self, data):
        n = data.draw(st.integers(1, 4))
        a, b = data.draw(pauli_sums(n)), data.draw(pauli_sums(n))
        da, db = to_dense(a), to_dense(b)
        np.testing.assert_allclose(to_dense(commutator(a, b)), da @ db - db @ da, atol=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(st.data())
    def test_jacobi(self, data):
        n = data.draw(st.integers(1, 3))
        a, b, c = (data.draw(pauli_sums(n)) for _ in range(3))
        total = (
            commutator(a, commutator(b, c))
            + commutator(b, commutator(c, a))
            + commutator(c, commutator(a, b))
        )
        assert total.is_zero()

    @settings(max_examples=30, deadline=None)
    @given(st.data())
    def test_antisymmetric_and_bilinear(self, data):
        n = data.draw(st.integers(1, 3))
        a, b, c = (data.draw(pauli_sums(n)) for _ in range(3))
        assert commutator(a, b) == -commutator(b, a)
        assert commutator(a * 2.5 + c, b) == commutator(a, b) * 2.5 + commutator(c, b)

    def test_larger_random_sums_against_dense(self, rng):
        n = 6
        for _ in range(3):
            a = PauliSum(n, [(PauliTerm(n, int(rng.integers(64)), int(rng.integers(64))), rng.normal()) for _ in range(12)])
            b = PauliSum(n, [(PauliTerm(n, int(rng.integers(64)), int(rng.integers(64))), rng.normal()) for _ in range(12)])
            da, db = to_dense(a), to_dense(b)
            np.testing.assert_allclose(to_dense(commutator(a, b)), da @ db - db @ da, atol=1e-12)

    def test_site_mismatch(self):
        with pytest.raises(SiteMismatchError):
            commutator(S((1, "X")), S((1, "XX")))


class TestNorms:
    def test_single_term(self):
        assert frobenius_norm_normalized(S((-3j, "XZY"))) == pytest.approx(3)

    def test_orthogonal_345(self):
        assert frobenius_norm_normalized(S((1.5, "X"), (2.0, "Z"))) == pytest.approx(2.5)

    def test_random_five_site_against_dense(self, rng):
        n = 5
        s = PauliSum(n, [(PauliTerm(n, int(rng.integers(32)), int(rng.integers(32))), rng.normal() + 1j * rng.normal()) for _ in range(20)])
        dense = np.linalg.norm(to_dense(s)) / np.sqrt(2**n)
        assert frobenius_norm_normalized(s) == pytest.approx(dense, abs=1e-12)

    def test_one_norm(self):
        assert coefficient_one_norm(S((1.5, "X"), (2.0, "Z"))) == pytest.approx(3.5)
        assert coefficient_one_norm(S((-2j, "Y"))) == pytest.approx(2)

    def test_one_norm_dominates_spectral(self, rng):
        n = 4
        for _ in range(5):
            s = PauliSum(n, [(PauliTerm(n, int(rng.integers(16)), int(rng.integers(16))), rng.normal()) for _ in range(10)])
            assert coefficient_one_norm(s) >= np.linalg.norm(to_dense(s), 2) - 1e-12


class TestDense:
    def test_identity(self):
        np.testing.assert_array_equal(to_dense(PauliSum.identity(3)), np.eye(8))

    def test_x_on_site0_is_block_swap(self):
        out = to_dense(S((1, "XI")))
        expected = np.block([[np.zeros((2, 2)), np.eye(2)], [np.eye(2), np.zeros((2, 2))]])
        np.testing.assert_array_equal(out, expected)

    @given(st.text("IXYZ", min_size=1, max_size=5))
    def test_every_string_matches_kron(self, label):
        np.testing.assert_allclose(to_dense(S((1, label))), kron_label(label), atol=0)

    def test_linear(self):
        a, b = S((1, "XY"), (2, "ZI")), S((0.5j, "YY"))
        np.testing.assert_allclose(to_dense(a + b * 3), to_dense(a) + 3 * to_dense(b))

    def test_cap(self):
        with pytest.raises(DenseCapError):
            to_dense(PauliSum.identity(5), site_cap=4)


class TestSums:
    def test_pruning(self):
        s = S((1.0, "X"), (-1.0, "X"), (1e-16, "Z"))
        assert s.is_zero() and len(s) == 0

    def test_parse(self):
        s = PauliSum.parse(3, "1.5 * Z0 X2")
        assert s == PauliSum(3, {PauliTerm.from_sites(3, {0: "Z", 2: "X"}): 1.5})

    @pytest.mark.parametrize("bad", ["1.0 * Q0", "2 * Z5", "1.0 * Z0 Z0", "1.0 *"])
    def test_parse_errors(self, bad):
        with pytest.raises(ValueError):
            PauliSum.parse(3, bad)

    def test_product_matches_dense(self):
        a, b = S((1, "XY"), (2, "ZI")), S((0.5j, "YY"), (1, "IX"))
        np.testing.assert_allclose(to_dense(a @ b), to_dense(a) @ to_dense(b), atol=1e-14)

    def test_label_roundtrip(self):
        assert T("XIYZ").label() == "XIYZ"
        assert T("XIYZ").weight == 3
