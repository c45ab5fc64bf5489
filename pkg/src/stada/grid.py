"""Periodic lattice backend for form fields and central-difference operators.

Grid operators are stencils: maps from lattice offsets to 16x16 blade
matrices.  Composing stencils multiplies matrices and adds offsets, so
algebraic cancellations (for instance the antisymmetry that kills the
composed exterior derivative) happen symbolically, before any data is
touched: the composed operator is the empty stencil and applying it
returns exact zeros, not rounding dust.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .exterior import STAR_TABLE
from .fields import AnalyticField
from .multivector import CLIFFORD_TABLE, WEDGE_TABLE, Multivector
from .scalars import FLOAT

Offset = tuple[int, int, int, int]

_ZERO_OFFSET: Offset = (0, 0, 0, 0)

_METRIC = (1.0, -1.0, -1.0, -1.0)


class AliasingWarning(UserWarning):
    """Sampling a field whose frequencies do not fit the periodic box."""


def _blade_matrix(table, mv: Multivector) -> np.ndarray:
    """16x16 matrix of left multiplication by mv under the given sign table."""
    out = np.zeros((16, 16), dtype=complex)
    for i, c in enumerate(mv.coeffs):
        if not c:
            continue
        v = complex(c)
        for j in range(16):
            sign, mask = table[i][j]
            if sign:
                out[mask, j] += sign * v
    return out


def _blade_matrix_right(table, mv: Multivector) -> np.ndarray:
    """Matrix of RIGHT multiplication by mv: input blade index j, factor on the right."""
    out = np.zeros((16, 16), dtype=complex)
    for j2, c in enumerate(mv.coeffs):
        if not c:
            continue
        v = complex(c)
        for j in range(16):
            sign, mask = table[j][j2]
            if sign:
                out[mask, j] += sign * v
    return out


def clifford_left_matrix(mv: Multivector) -> np.ndarray:
    return _blade_matrix(CLIFFORD_TABLE, mv)


def clifford_right_matrix(mv: Multivector) -> np.ndarray:
    return _blade_matrix_right(CLIFFORD_TABLE, mv)


def wedge_left_matrix(mv: Multivector) -> np.ndarray:
    return _blade_matrix(WEDGE_TABLE, mv)


def star_matrix() -> np.ndarray:
    out = np.zeros((16, 16))
    for m in range(16):
        sign, target = STAR_TABLE[m]
        out[target, m] = sign
    return out


_STAR_M = star_matrix()


@dataclass
class GridField:
    """Form field sampled on a periodic n^4 lattice with spacing h.

    values has shape (16, n, n, n, n): blade axis first, then the four
    coordinate axes in order.
    """

    n: int
    h: float
    values: np.ndarray

    @classmethod
    def zeros(cls, n: int, h: float) -> "GridField":
        return cls(n, h, np.zeros((16, n, n, n, n), dtype=complex))

    def copy(self) -> "GridField":
        return GridField(self.n, self.h, self.values.copy())

    def _check(self, other: "GridField") -> None:
        if self.n != other.n or self.h != other.h:
            raise DomainError("grid shapes or spacings differ")

    def __add__(self, other: "GridField") -> "GridField":
        self._check(other)
        return GridField(self.n, self.h, self.values + other.values)

    def __sub__(self, other: "GridField") -> "GridField":
        self._check(other)
        return GridField(self.n, self.h, self.values - other.values)

    def __neg__(self) -> "GridField":
        return GridField(self.n, self.h, -self.values)

    def scale(self, value) -> "GridField":
        return GridField(self.n, self.h, self.values * complex(value))

    def mul_const(self, mv: Multivector, side: str = "right",
                  product: str = "clifford") -> "GridField":
        table = CLIFFORD_TABLE if product == "clifford" else WEDGE_TABLE
        mat = (_blade_matrix_right(table, mv.to_float()) if side == "right"
               else _blade_matrix(table, mv.to_float()))
        return GridField(self.n, self.h, np.einsum("ij,j...->i...", mat, self.values))

    def pointwise_product(self, other: "GridField",
                          product: str = "clifford") -> "GridField":
        self._check(other)
        table = CLIFFORD_TABLE if product == "clifford" else WEDGE_TABLE
        out = np.zeros_like(self.values)
        for i in range(16):
            vi = self.values[i]
            if not vi.any():
                continue
            for j in range(16):
                vj = other.values[j]
                if not vj.any():
                    continue
                sign, mask = table[i][j]
                if sign == 0:
                    continue
                out[mask] += sign * (vi * vj)
        return GridField(self.n, self.h, out)

    def hodge_star(self) -> "GridField":
        return GridField(self.n, self.h,
                         np.einsum("ij,j...->i...", _STAR_M, self.values))

    def star_involution(self) -> "GridField":
        from .multivector import GRADE, REVERSION_SIGN

        out = self.values.conj().copy()
        for m in range(16):
            if REVERSION_SIGN[GRADE[m]] < 0:
                out[m] = -out[m]
        return GridField(self.n, self.h, out)

    def conjugate(self) -> "GridField":
        return GridField(self.n, self.h, self.values.conj())

    def component(self, mask: int) -> np.ndarray:
        return self.values[mask]

    def grade_part(self, k: int) -> "GridField":
        from .multivector import GRADE

        out = np.zeros_like(self.values)
        for m in range(16):
            if GRADE[m] == k:
                out[m] = self.values[m]
        return GridField(self.n, self.h, out)

    def odd_part(self) -> "GridField":
        from .multivector import GRADE

        out = np.zeros_like(self.values)
        for m in range(16):
            if GRADE[m] % 2 == 1:
                out[m] = self.values[m]
        return GridField(self.n, self.h, out)

    def max_abs(self) -> float:
        return float(np.abs(self.values).max()) if self.values.size else 0.0

    def eval(self, site: Offset) -> Multivector:
        i0, i1, i2, i3 = site
        return Multivector([complex(self.values[m, i0, i1, i2, i3]) for m in range(16)],
                           FLOAT)

    # ---- serialization ----------------------------------------------------

    def to_json_dict(self) -> dict:
        flat = self.values.transpose(1, 2, 3, 4, 0).reshape(-1, 16)
        sites = [[[v.real, v.imag] for v in row] for row in flat]
        return {"kind": "grid_field", "n": self.n, "h": self.h, "basis": "e",
                "values": sites}

    def save(self, path: str) -> None:
        if path.endswith(".npz"):
            np.savez_compressed(path, n=self.n, h=self.h, values=self.values)
        else:
            with open(path, "w", encoding="utf-8") as fh:
                json.dump(self.to_json_dict(), fh)

    @classmethod
    def from_json_dict(cls, data: dict) -> "GridField":
        n = int(data["n"])
        h = float(data["h"])
        flat = np.array([[complex(re, im) for re, im in row] for row in data["values"]])
        if flat.shape != (n ** 4, 16):
            raise DomainError("grid dump has the wrong number of sites")
        values = flat.reshape(n, n, n, n, 16).transpose(4, 0, 1, 2, 3)
        return cls(n, h, values.astype(complex))

    @classmethod
    def load(cls, path: str) -> "GridField":
        if path.endswith(".npz"):
            data = np.load(path)
            return cls(int(data["n"]), float(data["h"]), data["values"].astype(complex))
        with open(path, encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))


class Stencil:
    """Linear lattice operator: finite map offset -> 16x16 matrix."""

    __slots__ = ("entries",)

    def __init__(self, entries: dict[Offset, np.ndarray] | None = None):
        clean = {}
        if entries:
            for off, mat in entries.items():
                if mat.any():
                    clean[off] = mat
        self.entries = clean

    @classmethod
    def identity(cls) -> "Stencil":
        return cls({_ZERO_OFFSET: np.eye(16, dtype=complex)})

    @classmethod
    def constant(cls, mat: np.ndarray) -> "Stencil":
        return cls({_ZERO_OFFSET: mat.astype(complex)})

    def __add__(self, other: "Stencil") -> "Stencil":
        out = {off: mat.copy() for off, mat in self.entries.items()}
        for off, mat in other.entries.items():
            if off in out:
                out[off] = out[off] + mat
            else:
                out[off] = mat.copy()
        return Stencil(out)

    def __sub__(self, other: "Stencil") -> "Stencil":
        return self + other.scale(-1.0)

    def __neg__(self) -> "Stencil":
        return self.scale(-1.0)

    def scale(self, value) -> "Stencil":
        return Stencil({off: mat * value for off, mat in self.entries.items()})

    def compose(self, other: "Stencil") -> "Stencil":
        """self after other."""
        out: dict[Offset, np.ndarray] = {}
        for o1, m1 in self.entries.items():
            for o2, m2 in other.entries.items():
                off = (o1[0] + o2[0], o1[1] + o2[1], o1[2] + o2[2], o1[3] + o2[3])
                prod = m1 @ m2
                if off in out:
                    out[off] = out[off] + prod
                else:
                    out[off] = prod
        return Stencil(out)

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other) -> bool:
        if not isinstance(other, Stencil):
            return NotImplemented
        if set(self.entries) != set(other.entries):
            return False
        return all(np.array_equal(self.entries[o], other.entries[o])
                   for o in self.entries)

    def isclose(self, other: "Stencil", tol: float = 1e-10) -> bool:
        scale = max([np.abs(m).max() for m in self.entries.values()], default=1.0)
        for off in set(self.entries) | set(other.entries):
            a = self.entries.get(off)
            b = other.entries.get(off)
            if a is None:
                a = np.zeros_like(b)
            if b is None:
                b = np.zeros_like(a)
            if np.abs(a - b).max() > tol * scale:
                return False
        return True

    def apply(self, field: GridField) -> GridField:
        out = np.zeros_like(field.values)
        for off, mat in self.entries.items():
            shifted = field.values
            for axis, k in enumerate(off):
                if k:
                    # reading f(site + k e_axis) means rolling data backwards
                    shifted = np.roll(shifted, -k, axis=1 + axis)
            out += np.einsum("ij,j...->i...", mat, shifted)
        return GridField(field.n, field.h, out)


def derivative_stencil(mu: int, h: float) -> Stencil:
    """Second-order central difference along one axis."""
    c = 1.0 / (2.0 * h)
    plus = tuple(1 if i == mu else 0 for i in range(4))
    minus = tuple(-1 if i == mu else 0 for i in range(4))
    eye = np.eye(16, dtype=complex)
    return Stencil({plus: eye * c, minus: eye * (-c)})


def d_stencil(h: float) -> Stencil:
    out = Stencil()
    for mu in range(4):
        wedge = wedge_left_matrix(Multivector.basis(1 << mu, FLOAT))
        out = out + Stencil.constant(wedge).compose(derivative_stencil(mu, h))
    return out


def delta_stencil(h: float) -> Stencil:
    star = Stencil.constant(_STAR_M.astype(complex))
    return star.compose(d_stencil(h)).compose(star)


def upsilon_stencil(h: float) -> Stencil:
    return d_stencil(h) - delta_stencil(h)


def upsilon_gradient_stencil(h: float) -> Stencil:
    out = Stencil()
    for mu in range(4):
        cl = clifford_left_matrix(Multivector.basis(1 << mu, FLOAT))
        out = out + Stencil.constant(cl).compose(derivative_stencil(mu, h))
    return out


def laplace_stencil(h: float, route: str = "direct") -> Stencil:
    if route == "direct":
        out = Stencil()
        for mu in range(4):
            dmu = derivative_stencil(mu, h)
            out = out + dmu.compose(dmu).scale(_METRIC[mu])
        return out
    if route == "upsilon":
        u = upsilon_gradient_stencil(h)
        return u.compose(u)
    if route == "d_minus_delta":
        u = upsilon_stencil(h)
        return u.compose(u)
    if route == "de_rham":
        ds = d_stencil(h)
        dl = delta_stencil(h)
        return -(ds.compose(dl) + dl.compose(ds))
    raise DomainError(f"unknown laplace route {route!r}")


def grid_derivative(field: GridField, mu: int) -> GridField:
    return derivative_stencil(mu, field.h).apply(field)


def grid_d(field: GridField) -> GridField:
    return d_stencil(field.h).apply(field)


def grid_delta(field: GridField) -> GridField:
    return delta_stencil(field.h).apply(field)


def grid_upsilon(field: GridField) -> GridField:
    return upsilon_gradient_stencil(field.h).apply(field)


def grid_laplace(field: GridField, route: str = "direct") -> GridField:
    return laplace_stencil(field.h, route).apply(field)


def central_difference(arr: np.ndarray, mu: int, h: float) -> np.ndarray:
    """Periodic central difference of a plain site array along one axis."""
    return (np.roll(arr, -1, axis=mu) - np.roll(arr, 1, axis=mu)) / (2.0 * h)


def _warn_aliasing(field: AnalyticField, n: int, h: float) -> None:
    box = n * h
    tau = 2.0 * np.pi
    for phase, coeffs in field.terms.values():
        if phase.nonlinear_part():
            warnings.warn("nonlinear phase cannot be periodic on the box",
                          AliasingWarning, stacklevel=3)
            continue
        for k in phase.linear_coefficients():
            kv = float(k)
            if kv and abs((kv * box / tau) - round(kv * box / tau)) > 1e-9:
                warnings.warn(
                    f"frequency {kv} times box {box} is not a multiple of 2*pi",
                    AliasingWarning, stacklevel=3)
                break
        if any(q.degree() > 0 for q in coeffs):
            warnings.warn("polynomial factors are not periodic on the box",
                          AliasingWarning, stacklevel=3)


def sample(field: AnalyticField, n: int, h: float) -> GridField:
    """Evaluate an analytic field on the periodic box [0, n*h)^4."""
    if n < 4:
        raise DomainError("grids need at least 4 points per axis")
    field = field.to_float()
    _warn_aliasing(field, n, h)
    axis = np.arange(n) * h
    coords = np.meshgrid(axis, axis, axis, axis, indexing="ij", sparse=True)
    out = np.zeros((16, n, n, n, n), dtype=complex)
    for phase, coeffs in field.terms.values():
        phase_arr = np.zeros((n, n, n, n))
        for exps, c in phase.terms.items():
            mono = float(c) * np.ones((1, 1, 1, 1))
            for mu in range(4):
                if exps[mu]:
                    mono = mono * coords[mu] ** exps[mu]
            phase_arr = phase_arr + mono
        factor = np.exp(1j * phase_arr)
        for m, q in enumerate(coeffs):
            if not q:
                continue
            acc = np.zeros((n, n, n, n), dtype=complex)
            for exps, c in q.terms.items():
                mono = complex(c) * np.ones((1, 1, 1, 1))
                for mu in range(4):
                    if exps[mu]:
                        mono = mono * coords[mu] ** exps[mu]
                acc = acc + mono
            out[m] += factor * acc
    return GridField(n, h, out)
