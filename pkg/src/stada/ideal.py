"""Idempotent, left ideal, scalar product, and the induced 4x4 matrix
representation of the algebra, together with the bijections between the
ideal, bispinor columns, and the real even subalgebra.

Everything here runs on either backend, but theorem-grade checks use the
exact backend: the idempotent construction is rational in the generators,
so idempotency, orthonormality, and homomorphism properties are asserted
as equalities, not tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import scalars
from .errors import ConsistencyError, DomainError
from .generators import SecondaryGenerators, canonical_generators
from .multivector import (
    Multivector,
    hermitian_conjugate,
    scalar_part_of_product,
)
from .scalars import EXACT, QQi, Scalar


def scalar_product(u: Multivector, v: Multivector, h: Multivector) -> Scalar:
    """Sesquilinear pairing 4 Tr(U V^dagger) with V^dagger = H V^star H."""
    vd = hermitian_conjugate(v, h)
    return scalar_part_of_product(u, vd) * 4


@dataclass(frozen=True)
class IdealBasis:
    """The idempotent t, the ideal basis t_1..t_4, and the factors F_1..F_4.

    The dual basis elements t^k coincide with t_k; both index positions
    appear in the formulas, one storage backs them.
    """

    gens: SecondaryGenerators
    t: Multivector
    ts: tuple[Multivector, Multivector, Multivector, Multivector]
    fs: tuple[Multivector, Multivector, Multivector, Multivector]
    ts_dagger: tuple[Multivector, Multivector, Multivector, Multivector]

    @property
    def backend(self) -> str:
        return self.gens.backend

    def pairing(self, u: Multivector, v: Multivector) -> Scalar:
        return scalar_product(u, v, self.gens.h)

    def project_components(self, u: Multivector) -> tuple[Scalar, ...]:
        """Components (u, t^k) against the dual basis, k = 1..4."""
        return tuple(scalar_part_of_product(u, td) * 4 for td in self.ts_dagger)

    def contains(self, u: Multivector, tol: float | None = None) -> bool:
        """Membership test for the left ideal: u t == u."""
        diff = u * self.t - u
        if self.backend == EXACT:
            return diff.is_zero(0.0)
        return diff.max_abs() <= (tol if tol is not None else scalars.default_tolerance())


def idempotent_of(g: SecondaryGenerators, tol: float | None = None) -> IdealBasis:
    """Build t = (unit+H)(unit-iI)/4 and its ideal basis, verifying every
    construction invariant (idempotency, the multiplication law among the
    t_k, and orthonormality under the scalar product)."""
    backend = g.backend
    unit = Multivector.unit(backend)
    i_unit = scalars.imaginary_unit(backend)
    quarter = scalars.coerce(Fraction(1, 4), backend) if backend == EXACT else 0.25
    t = ((unit + g.h) * (unit - g.i2.scale(i_unit))).scale(quarter)
    ps = g.pseudoscalar()
    fs = (
        unit,
        g.k2,
        -(g.i2 * ps),
        -(g.k2 * g.i2 * ps),
    )
    ts = tuple(f * t for f in fs)
    ts_dagger = tuple(hermitian_conjugate(tk, g.h) for tk in ts)
    basis = IdealBasis(gens=g, t=t, ts=ts, fs=fs, ts_dagger=ts_dagger)

    def _iszero(mv: Multivector) -> bool:
        if backend == EXACT:
            return mv.is_zero(0.0)
        return mv.max_abs() <= (tol if tol is not None else scalars.default_tolerance())

    if not _iszero(t * t - t):
        raise ConsistencyError("idempotency t*t = t failed")
    for k, tk in enumerate(ts):
        for n, tn in enumerate(ts):
            target = tk if n == 0 else Multivector.zero(backend)
            if not _iszero(tk * tn - target):
                raise ConsistencyError(f"t_{k + 1} t_{n + 1} violates the ideal multiplication law")
    one = scalars.one(backend)
    zero = scalars.zero(backend)
    for k, tk in enumerate(ts):
        for n in range(4):
            val = basis.pairing(tk, ts[n])
            want = one if k == n else zero
            if backend == EXACT:
                ok = val == want
            else:
                ok = abs(complex(val) - complex(want)) <= (tol or scalars.default_tolerance())
            if not ok:
                raise ConsistencyError(f"orthonormality (t_{k + 1}, t^{n + 1}) failed: {val}")
    return basis


def canonical_basis(backend: str = EXACT) -> IdealBasis:
    return idempotent_of(canonical_generators(backend))


# ---- the matrix representation -------------------------------------------


def gamma_of(u: Multivector, basis: IdealBasis, verify: bool = True,
             tol: float | None = None) -> tuple:
    """The 4x4 matrix of left multiplication on the ideal basis: entry
    [n][k] is (U t_k, t^n); the upper index enumerates rows.

    With `verify` the reconstruction U t_k = sum_n gamma[n][k] t_n is
    checked before returning."""
    products = [u * tk for tk in basis.ts]
    mat = tuple(
        tuple(scalar_part_of_product(products[k], basis.ts_dagger[n]) * 4
              for k in range(4))
        for n in range(4)
    )
    if verify:
        backend = basis.backend
        for k in range(4):
            recon = Multivector.zero(backend)
            for n in range(4):
                recon = recon + basis.ts[n].scale(mat[n][k])
            diff = recon - products[k]
            ok = diff.is_zero(0.0) if backend == EXACT else (
                diff.max_abs() <= (tol if tol is not None else scalars.default_tolerance()))
            if not ok:
                raise ConsistencyError("representation reconstruction failed")
    return mat


def dirac_gamma_matrices(backend: str = EXACT) -> tuple:
    """The four generator images under the canonical representation."""
    from .multivector import basis_vector

    basis = canonical_basis(backend)
    return tuple(gamma_of(basis_vector(mu, backend), basis) for mu in range(4))


def representation_change(s, basis: IdealBasis, tol: float | None = None) -> IdealBasis:
    """Transport the ideal basis along a spin element: each t_k moves by the
    sandwich action, which is realized by rebuilding the construction from
    the transported generators and checking the two routes agree."""
    from .generators import transported_generators
    from .spin import sandwich

    new_gens = transported_generators(s, basis.gens)
    new_basis = idempotent_of(new_gens, tol)
    backend = basis.backend
    for tk, new_tk in zip(basis.ts, new_basis.ts):
        moved = sandwich(s, tk)
        diff = moved - new_tk
        ok = diff.is_zero(0.0) if backend == EXACT else (
            diff.max_abs() <= (tol if tol is not None else scalars.default_tolerance()))
        if not ok:
            raise ConsistencyError("transported basis disagrees with rebuilt basis")
    return new_basis


# ---- bispinors and the even-subalgebra bijection --------------------------


@dataclass(frozen=True)
class Bispinor:
    """Column of four complex components."""

    components: tuple[Scalar, Scalar, Scalar, Scalar]
    backend: str

    @classmethod
    def from_values(cls, values, backend: str = EXACT) -> "Bispinor":
        comps = tuple(scalars.coerce(v, backend) for v in values)
        if len(comps) != 4:
            raise ValueError("a bispinor needs exactly 4 components")
        return cls(comps, backend)

    def isclose(self, other: "Bispinor", tol: float | None = None) -> bool:
        return all(scalars.close(a, b, tol)
                   for a, b in zip(self.components, other.components))


def ideal_from_bispinor(psi: Bispinor, basis: IdealBasis) -> Multivector:
    """theta = psi_k t^k."""
    out = Multivector.zero(basis.backend)
    for c, tk in zip(psi.components, basis.ts):
        out = out + tk.scale(c)
    return out


def bispinor_from_ideal(theta: Multivector, basis: IdealBasis,
                        tol: float | None = None) -> Bispinor:
    """Components (theta, t^k) of an ideal element."""
    if not basis.contains(theta, tol):
        raise DomainError("element does not lie in the left ideal")
    return Bispinor(basis.project_components(theta), basis.backend)


def even_from_ideal(phi: Multivector, basis: IdealBasis,
                    tol: float | None = None) -> Multivector:
    """The unique real even solution of Omega t = phi: with phi components
    alpha^k + i beta^k, Omega = F_k (alpha^k unit + beta^k I)."""
    if not basis.contains(phi, tol):
        raise DomainError("element does not lie in the left ideal")
    backend = basis.backend
    comps = basis.project_components(phi)
    unit = Multivector.unit(backend)
    out = Multivector.zero(backend)
    for c, f in zip(comps, basis.fs):
        if backend == EXACT:
            alpha = scalars.QQi.from_rational(c.real)
            beta = scalars.QQi.from_rational(c.imag)
        else:
            alpha = complex(c.real, 0.0)
            beta = complex(c.imag, 0.0)
        out = out + f * (unit.scale(alpha) + basis.gens.i2.scale(beta))
    return out


def ideal_from_even(omega: Multivector, basis: IdealBasis) -> Multivector:
    """The forward map of the bijection: Omega -> Omega t."""
    return omega * basis.t


def matrix_to_json(mat) -> list:
    """Row-major 4x4 matrix as nested [re, im] pairs."""
    return [[[complex(v).real, complex(v).imag] for v in row] for row in mat]


def bispinor_to_json(psi: Bispinor) -> list:
    return [[complex(v).real, complex(v).imag] for v in psi.components]


def even_ideal_map_rank(basis: IdealBasis) -> int:
    """Rank of Omega -> Omega t restricted to the 8-dimensional real even
    subspace; 8 means the map is injective and the bijection holds."""
    from . import linalg
    from .multivector import EVEN_MASKS

    backend = basis.backend
    cols = []
    for mask in EVEN_MASKS:
        image = Multivector.basis(mask, backend) * basis.t
        col = []
        for c in image.coeffs:
            if backend == EXACT:
                col.extend((c.real, c.imag))
            else:
                col.extend((c.real, c.imag))
        cols.append(col)
    rows = [[cols[j][i] for j in range(8)] for i in range(32)]
    if backend == EXACT:
        return linalg.rank(rows)
    import numpy as np

    return int(np.linalg.matrix_rank(np.array(rows), tol=1e-9))
