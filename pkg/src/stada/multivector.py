"""Dense arithmetic for the 16-dimensional spacetime Clifford algebra.

Basis blades are indexed by 4-bit masks: bit mu set means the grade-1
generator along axis mu is a factor, factors ordered by ascending index.
Generator squares follow the signature (+1, -1, -1, -1).  Products are
driven by a 16x16 sign table built once from a transposition-counting
rule; the table itself is cross-checked in the test suite against an
independent adjacent-transposition oracle.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence

from . import scalars
from .errors import BackendMismatchError, InvalidGeneratorError, ParseError
from .scalars import EXACT, FLOAT, QQi, Scalar

ETA = (1, -1, -1, -1)

GRADE = tuple(mask.bit_count() for mask in range(16))
MASKS_OF_GRADE = tuple(tuple(m for m in range(16) if GRADE[m] == k) for k in range(5))
EVEN_MASKS = tuple(m for m in range(16) if GRADE[m] % 2 == 0)
ODD_MASKS = tuple(m for m in range(16) if GRADE[m] % 2 == 1)

BLADE_KEYS = tuple("".join(str(mu) for mu in range(4) if mask >> mu & 1) for mask in range(16))

# Reversion sign (-1)^(k(k-1)/2) per grade.
REVERSION_SIGN = (1, 1, -1, -1, 1)

L5_MASK = 0b1111


def blade_indices(mask: int) -> tuple[int, ...]:
    return tuple(mu for mu in range(4) if mask >> mu & 1)


def mask_from_indices(indices: Iterable[int]) -> int:
    mask = 0
    for mu in indices:
        mask |= 1 << mu
    return mask


def _reorder_sign(a: int, b: int) -> int:
    # Parity of the transposition count needed to interleave the ascending
    # index list of b into that of a.
    a >>= 1
    swaps = 0
    while a:
        swaps += (a & b).bit_count()
        a >>= 1
    return -1 if swaps & 1 else 1


def blade_clifford(a: int, b: int) -> tuple[int, int]:
    """Clifford product of two basis blades: (sign, result mask)."""
    sign = _reorder_sign(a, b)
    if ((a & b) & 0b1110).bit_count() & 1:
        sign = -sign
    return sign, a ^ b


def blade_wedge(a: int, b: int) -> tuple[int, int]:
    """Exterior product of two basis blades: (sign, mask); sign 0 on overlap."""
    if a & b:
        return 0, 0
    return _reorder_sign(a, b), a | b


CLIFFORD_TABLE = tuple(tuple(blade_clifford(a, b) for b in range(16)) for a in range(16))
WEDGE_TABLE = tuple(tuple(blade_wedge(a, b) for b in range(16)) for a in range(16))


class Multivector:
    """Immutable element of the (complexified) spacetime algebra."""

    __slots__ = ("coeffs", "backend")

    def __init__(self, coeffs: Sequence[Scalar], backend: str):
        if len(coeffs) != 16:
            raise ValueError("a multivector needs exactly 16 coefficients")
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "backend", backend)

    def __setattr__(self, name, value):
        raise AttributeError("Multivector is immutable")

    # ---- constructors -------------------------------------------------

    @classmethod
    def zero(cls, backend: str = EXACT) -> "Multivector":
        return cls((scalars.zero(backend),) * 16, backend)

    @classmethod
    def unit(cls, backend: str = EXACT) -> "Multivector":
        return cls.scalar(1, backend)

    @classmethod
    def scalar(cls, value, backend: str = EXACT) -> "Multivector":
        coeffs = [scalars.zero(backend)] * 16
        coeffs[0] = scalars.coerce(value, backend)
        return cls(coeffs, backend)

    @classmethod
    def basis(cls, mask: int, backend: str = EXACT) -> "Multivector":
        if not 0 <= mask < 16:
            raise ValueError("blade mask out of range")
        coeffs = [scalars.zero(backend)] * 16
        coeffs[mask] = scalars.one(backend)
        return cls(coeffs, backend)

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[int, object]], backend: str = EXACT) -> "Multivector":
        coeffs = [scalars.zero(backend)] * 16
        for mask, value in terms:
            coeffs[mask] = coeffs[mask] + scalars.coerce(value, backend)
        return cls(coeffs, backend)

    # ---- structure ----------------------------------------------------

    def grades(self) -> set[int]:
        return {GRADE[m] for m, c in enumerate(self.coeffs) if c}

    def grade_part(self, k: int) -> "Multivector":
        if not 0 <= k <= 4:
            raise ValueError(f"grade {k} outside 0..4")
        coeffs = [c if GRADE[m] == k else scalars.zero(self.backend)
                  for m, c in enumerate(self.coeffs)]
        return Multivector(coeffs, self.backend)

    def even_part(self) -> "Multivector":
        coeffs = [c if GRADE[m] % 2 == 0 else scalars.zero(self.backend)
                  for m, c in enumerate(self.coeffs)]
        return Multivector(coeffs, self.backend)

    def odd_part(self) -> "Multivector":
        coeffs = [c if GRADE[m] % 2 == 1 else scalars.zero(self.backend)
                  for m, c in enumerate(self.coeffs)]
        return Multivector(coeffs, self.backend)

    def is_zero(self, tol: float | None = None) -> bool:
        return all(scalars.is_zero(c, tol) for c in self.coeffs)

    def is_real(self, tol: float | None = None) -> bool:
        if self.backend == EXACT:
            return all(c.is_real() for c in self.coeffs)
        if tol is None:
            tol = scalars.default_tolerance()
        return all(abs(c.imag) <= tol for c in self.coeffs)

    def is_homogeneous(self, k: int, tol: float | None = None) -> bool:
        return all(scalars.is_zero(c, tol) for m, c in enumerate(self.coeffs) if GRADE[m] != k)

    # ---- arithmetic ---------------------------------------------------

    def _check(self, other: "Multivector") -> None:
        if self.backend != other.backend:
            raise BackendMismatchError(
                f"mixed scalar backends: {self.backend} vs {other.backend}")

    def __add__(self, other: "Multivector") -> "Multivector":
        self._check(other)
        return Multivector([x + y for x, y in zip(self.coeffs, other.coeffs)], self.backend)

    def __sub__(self, other: "Multivector") -> "Multivector":
        self._check(other)
        return Multivector([x - y for x, y in zip(self.coeffs, other.coeffs)], self.backend)

    def __neg__(self) -> "Multivector":
        return Multivector([-c for c in self.coeffs], self.backend)

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return clifford_product(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        # Scalars commute with everything.
        return self.scale(other)

    def __xor__(self, other: "Multivector") -> "Multivector":
        return exterior_product(self, other)

    def scale(self, value) -> "Multivector":
        s = scalars.coerce(value, self.backend)
        return Multivector([c * s for c in self.coeffs], self.backend)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.backend == other.backend and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.backend, self.coeffs))

    def isclose(self, other: "Multivector", tol: float | None = None) -> bool:
        return all(scalars.close(x, y, tol) for x, y in zip(self.coeffs, other.coeffs))

    def max_abs(self) -> float:
        return max(abs(scalars.to_complex(c)) for c in self.coeffs)

    # ---- involutions and traces ----------------------------------------

    def star(self) -> "Multivector":
        """Reversion combined with complex conjugation of the coefficients."""
        coeffs = [c.conjugate() if REVERSION_SIGN[GRADE[m]] > 0 else -c.conjugate()
                  for m, c in enumerate(self.coeffs)]
        return Multivector(coeffs, self.backend)

    def conjugate(self) -> "Multivector":
        return Multivector([c.conjugate() for c in self.coeffs], self.backend)

    def trace(self) -> Scalar:
        """The unit-blade coefficient.

        This is the algebra trace normalized by Tr(unit) = 1; the 4x4 matrix
        image of an element carries four times this value as its matrix trace.
        """
        return self.coeffs[0]

    # ---- conversion and rendering ---------------------------------------

    def to_float(self) -> "Multivector":
        if self.backend == FLOAT:
            return self
        return Multivector([complex(c) for c in self.coeffs], FLOAT)

    def __repr__(self):
        return f"Multivector({format_multivector(self)!r}, backend={self.backend!r})"

    def __str__(self):
        return format_multivector(self)


def basis_vector(mu: int, backend: str = EXACT) -> Multivector:
    if not 0 <= mu <= 3:
        raise ValueError("axis index outside 0..3")
    return Multivector.basis(1 << mu, backend)


def l5(backend: str = EXACT) -> Multivector:
    """The grade-4 pseudoscalar, the product of all four generators."""
    return Multivector.basis(L5_MASK, backend)


def clifford_product(a: Multivector, b: Multivector) -> Multivector:
    a._check(b)
    out = [scalars.zero(a.backend)] * 16
    table = CLIFFORD_TABLE
    for i, ci in enumerate(a.coeffs):
        if not ci:
            continue
        row = table[i]
        for j, cj in enumerate(b.coeffs):
            if not cj:
                continue
            sign, mask = row[j]
            p = ci * cj
            out[mask] = out[mask] + p if sign > 0 else out[mask] - p
    return Multivector(out, a.backend)


def exterior_product(a: Multivector, b: Multivector) -> Multivector:
    a._check(b)
    out = [scalars.zero(a.backend)] * 16
    table = WEDGE_TABLE
    for i, ci in enumerate(a.coeffs):
        if not ci:
            continue
        row = table[i]
        for j, cj in enumerate(b.coeffs):
            if not cj:
                continue
            sign, mask = row[j]
            if sign == 0:
                continue
            p = ci * cj
            out[mask] = out[mask] + p if sign > 0 else out[mask] - p
    return Multivector(out, a.backend)


def scalar_part_of_product(a: Multivector, b: Multivector) -> Scalar:
    """Unit-blade coefficient of a*b without forming the full product."""
    a._check(b)
    acc = scalars.zero(a.backend)
    for m in range(16):
        ci = a.coeffs[m]
        cj = b.coeffs[m]
        if not ci or not cj:
            continue
        sign, _ = CLIFFORD_TABLE[m][m]
        p = ci * cj
        acc = acc + p if sign > 0 else acc - p
    return acc


def commutator(a: Multivector, b: Multivector) -> Multivector:
    return clifford_product(a, b) - clifford_product(b, a)


def anticommutator(a: Multivector, b: Multivector) -> Multivector:
    return clifford_product(a, b) + clifford_product(b, a)


def hermitian_conjugate(u: Multivector, h: Multivector, tol: float | None = None) -> Multivector:
    """H * U^star * H for an element H with H*H equal to the unit."""
    hh = clifford_product(h, h)
    unit = Multivector.unit(h.backend)
    ok = hh == unit if h.backend == EXACT else hh.isclose(unit, tol)
    if not ok:
        raise InvalidGeneratorError("hermitian conjugation needs H with H*H = unit")
    return clifford_product(clifford_product(h, u.star()), h)


def left_matrix(u: Multivector) -> list[list[Scalar]]:
    """16x16 matrix of left multiplication by u acting on coefficient vectors."""
    cols = []
    for j in range(16):
        col = [scalars.zero(u.backend)] * 16
        for i, ci in enumerate(u.coeffs):
            if not ci:
                continue
            sign, mask = CLIFFORD_TABLE[i][j]
            col[mask] = col[mask] + ci if sign > 0 else col[mask] - ci
        cols.append(col)
    return [[cols[j][i] for j in range(16)] for i in range(16)]


def inverse(u: Multivector) -> Multivector:
    """Inverse through the left-regular 16x16 linear system."""
    from . import linalg

    rhs = [scalars.zero(u.backend)] * 16
    rhs[0] = scalars.one(u.backend)
    sol = linalg.solve(left_matrix(u), rhs)
    if sol is None:
        raise ZeroDivisionError("multivector is not invertible")
    return Multivector(sol, u.backend)


# ---- text and JSON representations --------------------------------------

_NUM = r"[0-9]+(?:\.[0-9]+)?(?:[eE][+-]?[0-9]+)?(?:/[0-9]+)?"
_TOKEN_RE = re.compile(
    r"(?:"
    rf"(?P<complex>\((?P<cre>[+-]?{_NUM})?(?P<cim>[+-](?:{_NUM})?)i\))"
    rf"|(?P<number>{_NUM})"
    r"|(?P<blade>[el][0-9]*)"
    r"|(?P<sign>[+-])"
    r")")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unrecognized input {text[pos:pos + 8]!r}", pos)
        kind = next(name for name in ("complex", "number", "blade", "sign") if m.group(name))
        tokens.append((kind, m.group(0), pos))
        pos = m.end()
    return tokens


def _parse_real(text: str, position: int) -> Fraction:
    try:
        if "/" in text:
            num, den = text.split("/")
            return Fraction(num) / Fraction(den)
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad number {text!r}: {exc}", position) from None


def _parse_coeff(kind: str, value: str, position: int, backend: str) -> Scalar:
    if kind == "number":
        r = _parse_real(value, position)
        return QQi.from_rational(r) if backend == EXACT else complex(float(r), 0.0)
    m = _TOKEN_RE.match(value)
    cre = m.group("cre") or "0"
    cim = m.group("cim")
    if cim in ("+", "-"):
        cim += "1"
    re_val = _parse_real(cre, position)
    im_val = _parse_real(cim, position)
    if backend == EXACT:
        return QQi.from_rational(re_val, im_val)
    return complex(float(re_val), float(im_val))


def _blade_mask(token: str, position: int) -> int:
    mask = 0
    last = -1
    for ch in token[1:]:
        mu = ord(ch) - ord("0")
        if mu > 3 or mu <= last:
            raise ParseError(f"blade {token!r} must use strictly ascending digits 0-3", position)
        mask |= 1 << mu
        last = mu
    return mask


def parse_multivector(text: str, backend: str = EXACT) -> Multivector:
    """Parse the additive literal grammar: sign-separated `coeff? blade?` terms.

    Products are not literals: two blades in one term are rejected.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty multivector literal", 0)
    coeffs = [scalars.zero(backend)] * 16
    i = 0
    first = True
    while i < len(tokens):
        sign = 1
        kind, value, pos = tokens[i]
        if kind == "sign":
            sign = -1 if value == "-" else 1
            i += 1
            if i >= len(tokens):
                raise ParseError("dangling sign", pos)
            kind, value, pos = tokens[i]
        elif not first:
            raise ParseError("missing '+' or '-' between terms", pos)
        coeff = None
        mask = None
        if kind in ("number", "complex"):
            coeff = _parse_coeff(kind, value, pos, backend)
            i += 1
            if i < len(tokens) and tokens[i][0] == "blade":
                mask = _blade_mask(tokens[i][1], tokens[i][2])
                i += 1
        elif kind == "blade":
            coeff = scalars.one(backend)
            mask = _blade_mask(value, pos)
            i += 1
        else:
            raise ParseError("expected a coefficient or blade", pos)
        if i < len(tokens) and tokens[i][0] == "blade":
            raise ParseError("blade after blade: products are not literals", tokens[i][2])
        if mask is None:
            mask = 0
        term = -coeff if sign < 0 else coeff
        coeffs[mask] = coeffs[mask] + term
        first = False
    return Multivector(coeffs, backend)


def _format_real(value) -> str:
    if isinstance(value, Fraction):
        return str(value)
    return repr(value)


def _format_scalar(c: Scalar) -> tuple[str, bool]:
    """Render one coefficient; the flag says whether it is negative-real-like."""
    if isinstance(c, QQi):
        if c.is_real():
            r = c.real
            return _format_real(abs(r)), r < 0
        re_s = _format_real(c.real)
        im = c.imag
        im_s = _format_real(abs(im))
        op = "+" if im >= 0 else "-"
        return f"({re_s}{op}{im_s}i)", False
    if abs(c.imag) == 0.0:
        return _format_real(abs(c.real)), c.real < 0
    op = "+" if c.imag >= 0 else "-"
    return f"({_format_real(c.real)}{op}{_format_real(abs(c.imag))}i)", False


def format_multivector(u: Multivector, basis: str = "e") -> str:
    if basis not in ("e", "l"):
        raise ValueError("basis symbol must be 'e' or 'l'")
    parts: list[str] = []
    for mask in range(16):
        c = u.coeffs[mask]
        if not c:
            continue
        body, negative = _format_scalar(c)
        blade = "" if mask == 0 else basis + BLADE_KEYS[mask]
        if mask != 0 and body == "1":
            body = ""
        text = f"{body} {blade}".strip()
        if not parts:
            parts.append(f"-{text}" if negative else text)
        else:
            parts.append(f"- {text}" if negative else f"+ {text}")
    if not parts:
        return "0"
    return " ".join(parts)


def multivector_to_json(u: Multivector) -> dict:
    out = {}
    for mask in range(16):
        c = u.coeffs[mask]
        if isinstance(c, QQi):
            out[BLADE_KEYS[mask]] = [str(c.real), str(c.imag)]
        else:
            out[BLADE_KEYS[mask]] = [c.real, c.imag]
    return out


def multivector_from_json(data: dict) -> Multivector:
    backend = EXACT if any(isinstance(v[0], str) for v in data.values()) else FLOAT
    coeffs = [scalars.zero(backend)] * 16
    for key, (re_v, im_v) in data.items():
        mask = mask_from_indices(int(ch) for ch in key)
        if backend == EXACT:
            coeffs[mask] = QQi.from_rational(Fraction(re_v), Fraction(im_v))
        else:
            coeffs[mask] = complex(float(re_v), float(im_v))
    return Multivector(coeffs, backend)
