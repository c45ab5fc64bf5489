"""Idempotent, ideal basis, scalar product, the 4x4 representation, and the
even-subalgebra bijection; everything on the exact backend."""

import random

import pytest

from stada import generators, ideal, linalg, spin
from stada.errors import DomainError, InvalidGeneratorError
from stada.multivector import (
    EVEN_MASKS,
    Multivector,
    basis_vector,
    hermitian_conjugate,
)
from stada.scalars import EXACT, QQi


def random_generator_set(rng):
    s = spin.random_rational_spin(rng, factors=2)
    return generators.transported_generators(s, generators.canonical_generators())


def random_exact_mv(rng, masks=range(16), span=2):
    return Multivector.from_terms(
        [(m, QQi(rng.randint(-span, span), rng.randint(-span, span))) for m in masks],
        EXACT)


def test_canonical_generators_valid():
    g = generators.canonical_generators()
    assert g.h == basis_vector(0)
    assert g.i2 == -Multivector.basis(0b0110)
    assert g.k2 == -Multivector.basis(0b1010)


def test_invalid_generators_named():
    with pytest.raises(InvalidGeneratorError) as err:
        generators.make_secondary(basis_vector(1),
                                  -Multivector.basis(0b0110),
                                  -Multivector.basis(0b1010))
    assert "H*H != unit" in str(err.value)
    with pytest.raises(InvalidGeneratorError) as err:
        generators.make_secondary(basis_vector(0),
                                  -Multivector.basis(0b0110),
                                  -Multivector.basis(0b0110))
    assert "{I, K} != 0" in str(err.value)


def test_transported_generators_stay_valid():
    rng = random.Random(0)
    for _ in range(20):
        g = random_generator_set(rng)  # construction validates
        assert g.backend == EXACT


def test_basis16_rank_and_traces():
    rng = random.Random(1)
    for g in [generators.canonical_generators()] + [random_generator_set(rng)
                                                    for _ in range(5)]:
        elements = generators.basis16_of(g)
        assert len(elements) == 16
        assert elements[1] == g.h
        assert elements[1].trace() == QQi(0)
        matrix = [[c for c in u.coeffs] for u in elements]
        assert linalg.rank(matrix) == 16


def test_idempotent_canonical_expansion():
    basis = ideal.canonical_basis()
    # direct expansion: (unit + l0)(unit + i l12)/4
    unit = Multivector.unit()
    expect = (unit + basis_vector(0)) * (unit + Multivector.basis(0b0110).scale(QQi(0, 1)))
    expect = expect.scale(QQi(1, 0, 4))
    assert basis.t == expect
    assert basis.t * basis.t == basis.t


def test_ideal_basis_multiplication_law():
    rng = random.Random(2)
    for _ in range(10):
        basis = ideal.idempotent_of(random_generator_set(rng))
        for k, tk in enumerate(basis.ts):
            for n, tn in enumerate(basis.ts):
                want = tk if n == 0 else Multivector.zero()
                assert tk * tn == want


def test_orthonormality():
    rng = random.Random(3)
    for _ in range(10):
        basis = ideal.idempotent_of(random_generator_set(rng))
        for k in range(4):
            for n in range(4):
                val = basis.pairing(basis.ts[k], basis.ts[n])
                assert val == (QQi(1) if k == n else QQi(0))


def test_absorption_identities():
    rng = random.Random(4)
    for _ in range(10):
        g = random_generator_set(rng)
        basis = ideal.idempotent_of(g)
        i_unit = QQi(0, 1)
        assert g.h * basis.t == basis.t
        assert g.i2 * basis.t == basis.t.scale(i_unit)
        assert basis.t * g.h == basis.t
        assert basis.t * g.i2 == basis.t.scale(i_unit)


GAMMA_EXPECTED = (
    ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, -1, 0), (0, 0, 0, -1)),
    ((0, 0, 0, -1), (0, 0, -1, 0), (0, 1, 0, 0), (1, 0, 0, 0)),
    ((0, 0, 0, 1j), (0, 0, -1j, 0), (0, -1j, 0, 0), (1j, 0, 0, 0)),
    ((0, 0, -1, 0), (0, 0, 0, 1), (1, 0, 0, 0), (0, -1, 0, 0)),
)


def test_gamma_matrices_exact():
    basis = ideal.canonical_basis()
    for mu in range(4):
        got = ideal.gamma_of(basis_vector(mu), basis)
        for r in range(4):
            for c in range(4):
                assert complex(got[r][c]) == complex(GAMMA_EXPECTED[mu][r][c]), (mu, r, c)


def test_gamma_unit_is_identity():
    basis = ideal.canonical_basis()
    got = ideal.gamma_of(Multivector.unit(), basis)
    assert linalg.mat_eq(got, linalg.mat_identity(4, QQi(1)))


def test_gamma_homomorphism():
    rng = random.Random(5)
    basis = ideal.canonical_basis()
    for _ in range(200):
        u = random_exact_mv(rng, span=1)
        v = random_exact_mv(rng, span=1)
        gu = ideal.gamma_of(u, basis)
        gv = ideal.gamma_of(v, basis)
        assert linalg.mat_eq(ideal.gamma_of(u * v, basis), linalg.mat_mul(gu, gv))
        alpha = QQi(rng.randint(-3, 3), rng.randint(-3, 3))
        assert linalg.mat_eq(ideal.gamma_of(u.scale(alpha), basis),
                             tuple(tuple(alpha * x for x in row) for row in gu))


def test_gamma_product_example():
    basis = ideal.canonical_basis()
    got = ideal.gamma_of(basis_vector(0) * basis_vector(1), basis)
    want = linalg.mat_mul(ideal.gamma_of(basis_vector(0), basis),
                          ideal.gamma_of(basis_vector(1), basis))
    assert linalg.mat_eq(got, want)


def test_representation_change_theorem():
    rng = random.Random(6)
    basis = ideal.canonical_basis()
    for _ in range(5):
        s = spin.random_rational_spin(rng, factors=2)
        new_basis = ideal.representation_change(s, basis)
        gs = ideal.gamma_of(s.element, basis)
        gs_rev = ideal.gamma_of(s.reverse, basis)
        for _ in range(5):
            u = random_exact_mv(rng, span=1)
            lhs = ideal.gamma_of(u, new_basis)
            rhs = linalg.mat_mul(linalg.mat_mul(gs, ideal.gamma_of(u, basis)), gs_rev)
            assert linalg.mat_eq(lhs, rhs)
        # the transporting element keeps its own matrix
        assert linalg.mat_eq(ideal.gamma_of(s.element, new_basis), gs)


def test_representation_change_identity():
    basis = ideal.canonical_basis()
    same = ideal.representation_change(spin.SpinElement.identity(), basis)
    assert same.t == basis.t
    assert all(a == b for a, b in zip(same.ts, basis.ts))


def test_scalar_product_properties():
    rng = random.Random(7)
    basis = ideal.canonical_basis()
    h = basis.gens.h
    assert ideal.scalar_product(basis.ts[0], basis.ts[0], h) == QQi(1)
    assert ideal.scalar_product(basis.ts[1], basis.ts[2], h) == QQi(0)
    for _ in range(50):
        u = random_exact_mv(rng) * basis.t
        v = random_exact_mv(rng) * basis.t
        k = random_exact_mv(rng)
        # positivity on the ideal
        norm = ideal.scalar_product(u, u, h)
        assert norm.imag == 0 and norm.real >= 0
        # adjoint relation
        assert ideal.scalar_product(k * u, v, h) == ideal.scalar_product(
            u, hermitian_conjugate(k, h) * v, h)


def test_theorem3_rank_eight():
    rng = random.Random(8)
    sets = [generators.canonical_generators()] + [random_generator_set(rng)
                                                  for _ in range(20)]
    for g in sets:
        basis = ideal.idempotent_of(g)
        assert ideal.even_ideal_map_rank(basis) == 8


def test_even_ideal_roundtrip():
    rng = random.Random(9)
    for _ in range(25):
        basis = ideal.idempotent_of(random_generator_set(rng))
        psi = Multivector.from_terms(
            [(m, QQi(rng.randint(-3, 3))) for m in EVEN_MASKS], EXACT)
        theta = ideal.ideal_from_even(psi, basis)
        assert ideal.even_from_ideal(theta, basis) == psi


def test_even_from_ideal_examples():
    basis = ideal.canonical_basis()
    assert ideal.even_from_ideal(basis.t, basis) == Multivector.unit()
    # i t corresponds to the generator I
    assert ideal.even_from_ideal(basis.t.scale(QQi(0, 1)), basis) == basis.gens.i2


def test_even_from_ideal_rejects_outsiders():
    basis = ideal.canonical_basis()
    with pytest.raises(DomainError):
        ideal.even_from_ideal(Multivector.unit(), basis)


def test_bispinor_roundtrip():
    rng = random.Random(10)
    basis = ideal.canonical_basis()
    for _ in range(25):
        psi = ideal.Bispinor.from_values(
            [QQi(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(4)], EXACT)
        theta = ideal.ideal_from_bispinor(psi, basis)
        back = ideal.bispinor_from_ideal(theta, basis)
        assert back.components == psi.components


def test_bispinor_unit_component():
    basis = ideal.canonical_basis()
    psi = ideal.Bispinor.from_values([1, 0, 0, 0], EXACT)
    assert ideal.ideal_from_bispinor(psi, basis) == basis.ts[0]


def test_spin_transformation_invariance():
    rng = random.Random(11)
    basis = ideal.canonical_basis()
    for _ in range(20):
        s = spin.random_rational_spin(rng, factors=2)
        psi = Multivector.from_terms(
            [(m, QQi(rng.randint(-2, 2))) for m in EVEN_MASKS], EXACT)
        comps = basis.project_components(psi * basis.t)
        new_basis = ideal.representation_change(s, basis)
        gs = ideal.gamma_of(s.element, basis)
        new_comps = [sum((gs[k][l] * comps[l] for l in range(4)), QQi(0))
                     for k in range(4)]
        lhs = (psi * s.element) * new_basis.t
        rhs = Multivector.zero()
        for c, tk in zip(new_comps, new_basis.ts):
            rhs = rhs + tk.scale(c)
        assert lhs == rhs


def test_matrix_and_bispinor_json_layouts():
    basis = ideal.canonical_basis()
    mat = ideal.gamma_of(basis_vector(0), basis)
    data = ideal.matrix_to_json(mat)
    assert data[0][0] == [1.0, 0.0]
    assert data[2][2] == [-1.0, 0.0]
    assert len(data) == 4 and all(len(row) == 4 for row in data)
    psi = ideal.Bispinor.from_values([QQi(1), QQi(0, 2), QQi(0), QQi(-1)], EXACT)
    assert ideal.bispinor_to_json(psi) == [[1.0, 0.0], [0.0, 2.0], [0.0, 0.0],
                                           [-1.0, 0.0]]


def test_st_expansion_matches_gamma():
    # S t_l expands through the matrix of S: (S t_l, t^k) = gamma(S)[k][l]
    rng = random.Random(12)
    basis = ideal.canonical_basis()
    for _ in range(10):
        s = spin.random_rational_spin(rng, factors=2)
        gs = ideal.gamma_of(s.element, basis)
        for l in range(4):
            for k in range(4):
                val = basis.pairing(s.element * basis.ts[l], basis.ts[k])
                assert val == gs[k][l]
