"""Spin(1,3) elements, their sandwich action, induced Lorentz matrices,
and recovery of a spin element from transformed generators.

Spin elements are even real multivectors S with S^star S = unit.  Test
elements come from two factories: bivector exponentials (float backend,
the identity component) and products of rational rotations and boosts
built from Pythagorean triples (exact backend, so that group identities
can be asserted as equalities).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg, scalars
from .errors import ConvergenceError, DomainError, InvalidSpinError
from .multivector import (
    EVEN_MASKS,
    GRADE,
    MASKS_OF_GRADE,
    Multivector,
    basis_vector,
    clifford_product,
)
from .scalars import EXACT, FLOAT, QQi

_BIVECTOR_MASKS = MASKS_OF_GRADE[2]
# Bivector planes that square to +unit (boosts) contain the time axis.
_BOOST_MASKS = tuple(m for m in _BIVECTOR_MASKS if m & 1)
_ROTATION_MASKS = tuple(m for m in _BIVECTOR_MASKS if not m & 1)

METRIC = (1, -1, -1, -1)


@dataclass(frozen=True)
class SpinElement:
    """Even real multivector S with S^star S = unit; reverse is its inverse."""

    element: Multivector
    reverse: Multivector

    @classmethod
    def of(cls, mv: Multivector, tol: float | None = None) -> "SpinElement":
        if not all(not c for m, c in enumerate(mv.coeffs) if GRADE[m] % 2):
            raise InvalidSpinError("spin element must be even")
        if not mv.is_real(tol):
            raise InvalidSpinError("spin element must have real coefficients")
        rev = mv.star()
        prod = clifford_product(rev, mv)
        unit = Multivector.unit(mv.backend)
        ok = prod == unit if mv.backend == EXACT else prod.isclose(unit, tol)
        if not ok:
            raise InvalidSpinError("S^star S differs from the unit")
        return cls(mv, rev)

    @classmethod
    def identity(cls, backend: str = EXACT) -> "SpinElement":
        u = Multivector.unit(backend)
        return cls(u, u)

    @property
    def backend(self) -> str:
        return self.element.backend

    def __mul__(self, other: "SpinElement") -> "SpinElement":
        return SpinElement(self.element * other.element,
                           other.reverse * self.reverse)

    def __neg__(self) -> "SpinElement":
        return SpinElement(-self.element, -self.reverse)

    def to_float(self) -> "SpinElement":
        return SpinElement(self.element.to_float(), self.reverse.to_float())


def sandwich(s: SpinElement, u: Multivector) -> Multivector:
    """The action S^star U S."""
    return s.reverse * u * s.element


def sandwich_inverse(s: SpinElement, u: Multivector) -> Multivector:
    """The inverse action S U S^star."""
    return s.element * u * s.reverse


def spin_from_bivector(b: Multivector, series_cutoff: float = 1e-18,
                       max_terms: int = 256) -> SpinElement:
    """exp(b) for a real grade-2 element, by the power series on the algebra."""
    if not b.is_homogeneous(2, 0.0 if b.backend == EXACT else None):
        raise DomainError("exponential generator must be homogeneous grade 2")
    if not b.is_real():
        raise DomainError("exponential generator must be real")
    b = b.to_float()
    total = Multivector.unit(FLOAT)
    term = Multivector.unit(FLOAT)
    for n in range(1, max_terms + 1):
        term = (term * b).scale(1.0 / n)
        total = total + term
        size = term.max_abs()
        if size < series_cutoff:
            return SpinElement.of(total)
        if size > 1e150:
            raise ConvergenceError("exponential series grew without bound")
    raise ConvergenceError(f"exponential series did not settle in {max_terms} terms")


def random_spin(rng: random.Random, scale: float = 1.0) -> SpinElement:
    """Seeded spin element: exponential of a random bivector."""
    b = Multivector.from_terms(
        [(m, complex(rng.uniform(-scale, scale))) for m in _BIVECTOR_MASKS], FLOAT)
    return spin_from_bivector(b)


def _pythagorean(rng: random.Random) -> tuple[Fraction, Fraction]:
    """A rational (cos, sin) pair on the unit circle."""
    m = rng.randint(2, 5)
    n = rng.randint(1, m - 1)
    hyp = m * m + n * n
    return Fraction(m * m - n * n, hyp), Fraction(2 * m * n, hyp)


def random_rational_spin(rng: random.Random, factors: int = 3) -> SpinElement:
    """Seeded exact spin element: a product of rational-angle rotations and boosts.

    Rotations use rational points on the circle, boosts rational points on
    the hyperbola, so S^star S = unit holds exactly.
    """
    out = SpinElement.identity(EXACT)
    for _ in range(factors):
        mask = rng.choice(_BIVECTOR_MASKS)
        c, s = _pythagorean(rng)
        if mask in _BOOST_MASKS:
            # cosh = (m^2+n^2)/(m^2-n^2), sinh = 2mn/(m^2-n^2) squares to +1.
            c, s = 1 / c, s / c
        if rng.random() < 0.5:
            s = -s
        factor = Multivector.from_terms(
            [(0, QQi.from_rational(c)), (mask, QQi.from_rational(s))], EXACT)
        out = out * SpinElement.of(factor)
    return out


@dataclass(frozen=True)
class LorentzMatrix:
    """Rows indexed by the transformed axis: entry [nu][mu] multiplies x^mu."""

    rows: tuple

    def __getitem__(self, nu: int):
        return self.rows[nu]

    def matmul(self, other: "LorentzMatrix") -> "LorentzMatrix":
        return LorentzMatrix(linalg.mat_mul(self.rows, other.rows))

    def transpose(self) -> "LorentzMatrix":
        return LorentzMatrix(linalg.mat_transpose(self.rows))

    def det(self):
        return linalg.det(self.rows)

    def as_floats(self) -> tuple:
        return tuple(tuple(float(v) for v in row) for row in self.rows)

    def to_json(self) -> list:
        return [float(v) for row in self.rows for v in row]

    def isclose(self, other: "LorentzMatrix", tol: float | None = None) -> bool:
        if tol is None:
            tol = scalars.default_tolerance()
        a, b = self.as_floats(), other.as_floats()
        return all(abs(x - y) <= tol for ra, rb in zip(a, b) for x, y in zip(ra, rb))

    def metric_residual(self) -> float:
        """max |P^T g P - g| over entries."""
        p = self.as_floats()
        worst = 0.0
        for mu in range(4):
            for nu in range(4):
                acc = sum(p[k][mu] * METRIC[k] * p[k][nu] for k in range(4))
                target = METRIC[mu] if mu == nu else 0.0
                worst = max(worst, abs(acc - target))
        return worst

    def validate(self, tol: float | None = None) -> None:
        if tol is None:
            tol = scalars.default_tolerance()
        if self.metric_residual() > tol:
            raise InvalidSpinError("matrix does not preserve the metric")
        if abs(float(self.det()) - 1.0) > tol:
            raise InvalidSpinError("matrix determinant differs from 1")
        if float(self.rows[0][0]) <= 0:
            raise InvalidSpinError("matrix reverses time orientation")


def lorentz_of(s: SpinElement, inverse: bool = False,
               tol: float | None = None) -> LorentzMatrix:
    """Extract the 4x4 matrix acting on coordinates from the sandwich action.

    Row nu holds the grade-1 coefficients of S^star l^nu S (or of the
    inverse action S l^nu S^star when `inverse` is set).
    """
    if tol is None:
        tol = scalars.default_tolerance()
    act = sandwich_inverse if inverse else sandwich
    rows = []
    for nu in range(4):
        w = act(s, basis_vector(nu, s.backend))
        residue = w - w.grade_part(1)
        if s.backend == EXACT:
            if not residue.is_zero(0.0):
                raise InvalidSpinError("sandwich of a vector left the grade-1 space")
            row = tuple(w.coeffs[1 << mu].real for mu in range(4))
        else:
            if residue.max_abs() > tol:
                raise InvalidSpinError("sandwich of a vector left the grade-1 space")
            if any(abs(w.coeffs[1 << mu].imag) > tol for mu in range(4)):
                raise InvalidSpinError("sandwich produced non-real vector components")
            row = tuple(w.coeffs[1 << mu].real for mu in range(4))
        rows.append(row)
    return LorentzMatrix(tuple(rows))


# ---- recovery of spin elements from transformed generators ---------------


def _intertwine_rows(a: Multivector, b: Multivector) -> list[list]:
    """Real matrix of X -> a X - X b restricted to the even subspace."""
    backend = a.backend
    cols = []
    for mask in EVEN_MASKS:
        e = Multivector.basis(mask, backend)
        image = a * e - e * b
        if backend == EXACT:
            col = [image.coeffs[m].real for m in range(16)]
        else:
            col = [image.coeffs[m].real for m in range(16)]
        cols.append(col)
    return [[cols[j][i] for j in range(len(EVEN_MASKS))] for i in range(16)]


def intertwiner_basis(pairs: list[tuple[Multivector, Multivector]],
                      rank_tol: float = 1e-9) -> list[Multivector]:
    """Basis of even solutions X of the system a_i X = X b_i.

    Exact inputs give an exact kernel; float inputs use an SVD with the
    relative singular-value cutoff `rank_tol`.
    """
    backend = pairs[0][0].backend
    stacked = []
    for a, b in pairs:
        stacked.extend(_intertwine_rows(a, b))
    if backend == EXACT:
        kernel = linalg.null_space(stacked)
        out = []
        for vec in kernel:
            out.append(Multivector.from_terms(
                [(mask, QQi.from_rational(v)) for mask, v in zip(EVEN_MASKS, vec)], EXACT))
        return out
    mat = np.array([[float(v) for v in row] for row in stacked])
    _, sing, vh = np.linalg.svd(mat)
    cutoff = rank_tol * (sing[0] if len(sing) else 1.0)
    kernel_rows = [vh[i] for i in range(len(vh)) if i >= len(sing) or sing[i] <= cutoff]
    out = []
    for vec in kernel_rows:
        out.append(Multivector.from_terms(
            [(mask, complex(v)) for mask, v in zip(EVEN_MASKS, vec)], FLOAT))
    return out


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    num = math.isqrt(q.numerator)
    den = math.isqrt(q.denominator)
    if num * num == q.numerator and den * den == q.denominator:
        return Fraction(num, den)
    return None


def _normalize_to_spin(x: Multivector, tol: float | None = None) -> SpinElement:
    """Scale an even real X with X^star X in the positive scalar ray to Spin."""
    prod = x.star() * x
    if x.backend == EXACT:
        rest = prod - prod.grade_part(0)
        if not rest.is_zero(0.0):
            raise InvalidSpinError("X^star X is not a scalar")
        c = prod.coeffs[0].real
        if c <= 0:
            raise InvalidSpinError("X^star X is not positive")
        root = _rational_sqrt(c)
        if root is not None:
            return SpinElement.of(x.scale(QQi.from_rational(1 / root)))
        xf = x.to_float()
        return SpinElement.of(xf.scale(1.0 / math.sqrt(float(c))), )
    if tol is None:
        tol = scalars.default_tolerance()
    rest = prod - prod.grade_part(0)
    scalefree = max(prod.max_abs(), 1e-300)
    if rest.max_abs() > 1e-9 * scalefree:
        raise InvalidSpinError("X^star X is not a scalar")
    c = prod.coeffs[0].real
    if c <= 0:
        raise InvalidSpinError("X^star X is not positive")
    return SpinElement.of(x.scale(1.0 / math.sqrt(c)), tol=max(tol, 1e-9))


def _canonical_sign(s: SpinElement) -> SpinElement:
    coeffs = [scalars.to_complex(c).real for c in s.element.coeffs]
    lead = max(range(16), key=lambda m: abs(coeffs[m]))
    return -s if coeffs[lead] < 0 else s


def _check_secondary(h: Multivector, i2: Multivector, k2: Multivector) -> None:
    from .generators import make_secondary

    make_secondary(h, i2, k2)


def recover_spin_candidates(h: Multivector, i2: Multivector, k2: Multivector,
                            rank_tol: float = 1e-9) -> tuple[SpinElement, SpinElement]:
    """Both spin elements (differing by global sign) that carry the generators
    (h, i2, k2) onto the canonical ones.

    The defining sandwich equations are linear in S once rewritten as
    h S = S l0, i2 S = -S l12, k2 S = -S l13; the even solution space is
    one-dimensional, and both signs of the normalized solution satisfy all
    three equations.
    """
    _check_secondary(h, i2, k2)
    backend = h.backend
    targets = [
        (h, basis_vector(0, backend)),
        (i2, -Multivector.basis(0b0110, backend)),
        (k2, -Multivector.basis(0b1010, backend)),
    ]
    kernel = intertwiner_basis(targets, rank_tol)
    if len(kernel) != 1:
        raise InvalidSpinError(
            f"expected a one-dimensional solution space, found {len(kernel)}")
    s = _canonical_sign(_normalize_to_spin(kernel[0]))
    return s, -s


def recover_spin(h: Multivector, i2: Multivector, k2: Multivector,
                 rank_tol: float = 1e-9) -> SpinElement:
    """The canonical-sign spin element mapping (h, i2, k2) to the standard
    generator triple; its negative satisfies the same equations."""
    return recover_spin_candidates(h, i2, k2, rank_tol)[0]


def recover_spin_pair(h: Multivector, i2: Multivector,
                      rank_tol: float = 1e-9) -> SpinElement:
    """Some spin element mapping a grade-1/grade-2 pair (h, i2) onto the
    canonical pair; with only two conditions the solution is not unique."""
    backend = h.backend
    targets = [
        (h, basis_vector(0, backend)),
        (i2, -Multivector.basis(0b0110, backend)),
    ]
    kernel = intertwiner_basis(targets, rank_tol)
    if not kernel:
        raise InvalidSpinError("the intertwining system has no even solutions")
    for x in kernel:
        try:
            return _canonical_sign(_normalize_to_spin(x))
        except InvalidSpinError:
            continue
    raise InvalidSpinError("no kernel element normalizes to a spin element")


def recover_even_intertwiner(pairs: list[tuple[Multivector, Multivector]],
                             rank_tol: float = 1e-9) -> Multivector:
    """Some invertible even X with a_i X = X b_i for every pair; used for
    instance checks of conjugation statements that do not need Spin
    normalization."""
    from .multivector import inverse

    kernel = intertwiner_basis(pairs, rank_tol)
    rng = random.Random(7)
    candidates = list(kernel)
    for _ in range(8):
        if len(kernel) > 1:
            mix = Multivector.zero(kernel[0].backend)
            for x in kernel:
                w = rng.randint(-3, 3)
                mix = mix + x.scale(w if kernel[0].backend == EXACT else complex(w))
            candidates.append(mix)
    for x in candidates:
        try:
            inverse(x)
            return x
        except ZeroDivisionError:
            continue
    raise InvalidSpinError("no invertible even intertwiner found")
