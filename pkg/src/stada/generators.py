"""Secondary generator quadruples (H, pseudoscalar, I, K) and their checks.

A valid triple (H, I, K) together with the fixed pseudoscalar generates
the whole algebra: H squares to the unit, I and K square to its negative,
H commutes with both, and I anticommutes with K.  Validation names every
violated relation instead of failing on the first, because generator sets
usually come from sandwich transport and a single bad input tends to
break several relations at once.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import scalars
from .errors import InvalidGeneratorError
from .multivector import (
    Multivector,
    anticommutator,
    basis_vector,
    clifford_product,
    commutator,
    l5,
)
from .scalars import EXACT


@dataclass(frozen=True)
class SecondaryGenerators:
    """Validated (H, I, K) triple; the pseudoscalar completes the quadruple."""

    h: Multivector
    i2: Multivector
    k2: Multivector

    @property
    def backend(self) -> str:
        return self.h.backend

    def pseudoscalar(self) -> Multivector:
        return l5(self.backend)


def _is_zero(mv: Multivector, tol: float | None) -> bool:
    if mv.backend == EXACT:
        return mv.is_zero(0.0)
    return mv.max_abs() <= (tol if tol is not None else scalars.default_tolerance())


def secondary_violations(h: Multivector, i2: Multivector, k2: Multivector,
                         tol: float | None = None) -> list[str]:
    """All violated relations of the defining set, by name; empty when valid."""
    problems = []
    if not (h.backend == i2.backend == k2.backend):
        return ["mixed scalar backends"]
    unit = Multivector.unit(h.backend)
    if not h.is_real(tol) or not i2.is_real(tol) or not k2.is_real(tol):
        problems.append("generators must be real")
    if not _is_zero(h - h.grade_part(1), tol):
        problems.append("H must be homogeneous grade 1")
    if not _is_zero(i2 - i2.grade_part(2), tol):
        problems.append("I must be homogeneous grade 2")
    if not _is_zero(k2 - k2.grade_part(2), tol):
        problems.append("K must be homogeneous grade 2")
    if not _is_zero(clifford_product(h, h) - unit, tol):
        problems.append("H*H != unit")
    if not _is_zero(clifford_product(i2, i2) + unit, tol):
        problems.append("I*I != -unit")
    if not _is_zero(clifford_product(k2, k2) + unit, tol):
        problems.append("K*K != -unit")
    if not _is_zero(commutator(h, i2), tol):
        problems.append("[H, I] != 0")
    if not _is_zero(commutator(h, k2), tol):
        problems.append("[H, K] != 0")
    if not _is_zero(anticommutator(i2, k2), tol):
        problems.append("{I, K} != 0")
    return problems


def make_secondary(h: Multivector, i2: Multivector, k2: Multivector,
                   tol: float | None = None) -> SecondaryGenerators:
    problems = secondary_violations(h, i2, k2, tol)
    if problems:
        raise InvalidGeneratorError("; ".join(problems))
    return SecondaryGenerators(h, i2, k2)


def canonical_generators(backend: str = EXACT) -> SecondaryGenerators:
    """The standard triple: time axis vector, minus the 1-2 plane, minus the 1-3 plane."""
    return make_secondary(
        basis_vector(0, backend),
        -Multivector.basis(0b0110, backend),
        -Multivector.basis(0b1010, backend),
    )


def basis16_of(g: SecondaryGenerators, tol: float | None = None) -> list[Multivector]:
    """The sixteen generator products that span the algebra, in the fixed order
    unit, H, I, K, HI, HK, IK, HIK, then the same eight multiplied by the
    pseudoscalar.  Verifies linear independence and the zero-trace property
    of every element except the unit."""
    from . import linalg

    h, i2, k2 = g.h, g.i2, g.k2
    ps = g.pseudoscalar()
    unit = Multivector.unit(g.backend)
    hi = h * i2
    hk = h * k2
    ik = i2 * k2
    hik = hi * k2
    first = [unit, h, i2, k2, hi, hk, ik, hik]
    elements = first + [ps * u for u in first]
    matrix = [[c for c in u.coeffs] for u in elements]
    if g.backend == EXACT:
        rank = linalg.rank(matrix)
    else:
        import numpy as np

        rank = int(np.linalg.matrix_rank(
            np.array([[complex(c) for c in row] for row in matrix]),
            tol=1e-9))
    if rank != 16:
        raise InvalidGeneratorError(f"generator products span rank {rank}, not 16")
    for idx, u in enumerate(elements):
        tr = u.trace()
        want_one = idx == 0
        if g.backend == EXACT:
            ok = (tr == scalars.one(EXACT)) if want_one else (not tr)
        else:
            target = 1.0 if want_one else 0.0
            ok = abs(complex(tr) - target) <= (tol or scalars.default_tolerance())
        if not ok:
            raise InvalidGeneratorError(
                f"trace of generator product #{idx} is {tr}, violating the trace law")
    return elements


def transported_generators(s, g: SecondaryGenerators) -> SecondaryGenerators:
    """Carry a generator triple along a spin element via the sandwich action."""
    from .spin import sandwich

    return make_secondary(sandwich(s, g.h), sandwich(s, g.i2), sandwich(s, g.k2))
