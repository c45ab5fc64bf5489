"""Exterior algebra of Minkowski space: Hodge star, the Com bracket, and
Clifford multiplication reconstructed from grade-pair formulas.

The star table is computed at import by the literal definition: a sum
over all 24 index permutations with the permutation sign, metric index
raising, and the factorial normalization.  No shortcut formula is used;
the table then memoizes the result per basis blade.

`clifford_product_via_table` must agree with the sign-rule product from
`multivector` on all 256 ordered blade pairs; the test suite and the
`hodge` verification suite check this exhaustively.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import scalars
from .errors import DomainError
from .multivector import (
    GRADE,
    MASKS_OF_GRADE,
    Multivector,
    blade_indices,
    mask_from_indices,
)

# The metric tensor of Minkowski space.  Numerically equal to the algebra
# signature constants but kept as its own named object: one is geometry,
# the other is structure constants.
METRIC_G = (1, -1, -1, -1)

# An exterior form is stored exactly like a multivector; only the basis
# symbols differ when rendering.
ExteriorForm = Multivector


def _perm_sign(seq) -> int:
    sign = 1
    items = list(seq)
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                sign = -sign
    return sign


def _wedge_sequence(indices) -> tuple[int, int]:
    """Sign and mask of e^{i1} ^ ... ^ e^{ik} for distinct indices."""
    mask = mask_from_indices(indices)
    return _perm_sign(indices), mask


def _star_of_blade(mask: int) -> tuple[int, int]:
    """Brute-force Hodge star of one basis blade: (sign, complementary mask)."""
    k = GRADE[mask]
    idx = set(blade_indices(mask))
    totals: dict[int, int] = {}
    for perm in itertools.permutations(range(4)):
        head, tail = perm[:k], perm[k:]
        if set(head) != idx:
            continue
        eps = _perm_sign(perm)
        component = _perm_sign(head)  # antisymmetric component of the blade
        raise_sign = 1
        for mu in head:
            raise_sign *= METRIC_G[mu]
        wsign, wmask = _wedge_sequence(tail)
        totals[wmask] = totals.get(wmask, 0) + eps * component * raise_sign * wsign
    norm = 1
    for f in (k, 4 - k):
        for v in range(2, f + 1):
            norm *= v
    nonzero = {m: c for m, c in totals.items() if c}
    if len(nonzero) != 1:
        raise AssertionError(f"star of blade {mask:04b} is not a single blade: {totals}")
    (target, coeff), = nonzero.items()
    if coeff % norm != 0 or abs(coeff) != norm:
        raise AssertionError(f"star normalization failed for blade {mask:04b}")
    return coeff // norm, target


STAR_TABLE = tuple(_star_of_blade(mask) for mask in range(16))


def hodge_star(u: ExteriorForm) -> ExteriorForm:
    """Gradewise Hodge star; grade k goes to grade 4-k."""
    out = [scalars.zero(u.backend)] * 16
    for mask, c in enumerate(u.coeffs):
        if not c:
            continue
        sign, target = STAR_TABLE[mask]
        out[target] = out[target] + c if sign > 0 else out[target] - c
    return Multivector(out, u.backend)


def com_bracket(u: ExteriorForm, v: ExteriorForm) -> ExteriorForm:
    """Antisymmetric bracket on 2-forms, extended bilinearly from the basis rule."""
    if not u.is_homogeneous(2) or not v.is_homogeneous(2):
        raise DomainError("com_bracket needs two homogeneous grade-2 forms")
    out = [scalars.zero(u.backend)] * 16
    for ma in MASKS_OF_GRADE[2]:
        cu = u.coeffs[ma]
        if not cu:
            continue
        m1, m2 = blade_indices(ma)
        for mb in MASKS_OF_GRADE[2]:
            cv = v.coeffs[mb]
            if not cv:
                continue
            n1, n2 = blade_indices(mb)
            c = cu * cv
            for g, ia, ib in (
                (-2 * METRIC_G[m1] if m1 == n1 else 0, m2, n2),
                (-2 * METRIC_G[m2] if m2 == n2 else 0, m1, n1),
                (2 * METRIC_G[m1] if m1 == n2 else 0, m2, n1),
                (2 * METRIC_G[m2] if m2 == n1 else 0, m1, n2),
            ):
                if g == 0 or ia == ib:
                    continue
                wsign, wmask = _wedge_sequence((ia, ib))
                term = c * (g * wsign)
                out[wmask] = out[wmask] + term
    return Multivector(out, u.backend)


def _wedge(a: Multivector, b: Multivector) -> Multivector:
    return a ^ b


def _half(backend: str):
    return scalars.coerce(Fraction(1, 2), backend) if backend == scalars.EXACT else 0.5


def _strictly_zero(u: Multivector) -> bool:
    return not any(u.coeffs)


def _pair_product(j: int, k: int, u: Multivector, v: Multivector) -> Multivector:
    s = hodge_star
    if j == 0 or k == 0:
        return _wedge(u, v)
    if j == 1:
        return _wedge(u, v) - s(_wedge(u, s(v)))
    if k == 1:
        return _wedge(u, v) + s(_wedge(s(u), v))
    if (j, k) == (2, 2):
        return _wedge(u, v) + s(_wedge(u, s(v))) + com_bracket(u, v).scale(_half(u.backend))
    if (j, k) == (2, 3):
        return _wedge(s(u), s(v)) - s(_wedge(u, s(v)))
    if (j, k) == (2, 4):
        return _wedge(s(u), s(v))
    if (j, k) == (3, 2):
        return -_wedge(s(u), s(v)) - s(_wedge(s(u), v))
    if (j, k) == (3, 3):
        return _wedge(s(u), s(v)) + s(_wedge(u, s(v)))
    if (j, k) == (3, 4):
        return _wedge(s(u), s(v))
    if (j, k) == (4, 2):
        return _wedge(s(u), s(v))
    if (j, k) == (4, 3):
        return -_wedge(s(u), s(v))
    if (j, k) == (4, 4):
        return -_wedge(s(u), s(v))
    raise AssertionError(f"unhandled grade pair {(j, k)}")


def _formula_label(j: int, k: int) -> str:
    if j == 0 or k == 0:
        return "scalar factor: U V = U ^ V"
    if j == 1:
        return "vector on the left: U V = U^V - *(U^*V)"
    if k == 1:
        return "vector on the right: U V = U^V + *(*U^V)"
    labels = {
        (2, 2): "bivector pair: U^V + *(U^*V) + Com(U,V)/2",
        (2, 3): "*U^*V - *(U^*V)",
        (2, 4): "*U^*V",
        (3, 2): "-*U^*V - *(*U^V)",
        (3, 3): "*U^*V + *(U^*V)",
        (3, 4): "*U^*V",
        (4, 2): "*U^*V",
        (4, 3): "-*U^*V",
        (4, 4): "-*U^*V",
    }
    return labels[(j, k)]


def clifford_product_via_table(u: ExteriorForm, v: ExteriorForm) -> ExteriorForm:
    """Clifford multiplication assembled from the grade-pair wedge/star formulas."""
    u._check(v)
    out = Multivector.zero(u.backend)
    for j in range(5):
        uj = u.grade_part(j)
        if _strictly_zero(uj):
            continue
        for k in range(5):
            vk = v.grade_part(k)
            if _strictly_zero(vk):
                continue
            out = out + _pair_product(j, k, uj, vk)
    return out


@dataclass(frozen=True)
class GradePairAudit:
    """Which grade-pair formula handles each of the 25 ordered pairs."""

    handlers: dict
    all_covered: bool


def missing_case_audit() -> GradePairAudit:
    handlers = {}
    for j in range(5):
        for k in range(5):
            handlers[(j, k)] = _formula_label(j, k)
    return GradePairAudit(handlers=handlers, all_covered=len(handlers) == 25)
