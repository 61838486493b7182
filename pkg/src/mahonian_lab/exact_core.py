"""Dense bivariate integer polynomials and truncated power series in p, q.

Coefficients live in numpy object arrays so every entry is a Python int;
entry (i, j) is the coefficient of p^i q^j.
"""

from __future__ import annotations

import csv
import io
from typing import Iterable, Mapping

import numpy as np


class UsageError(ValueError):
    """Operands that cannot be combined (e.g. mismatched truncation orders)."""


def _as_grid(coeffs) -> np.ndarray:
    arr = np.empty(np.shape(coeffs), dtype=object)
    arr[...] = coeffs
    if arr.ndim != 2:
        raise ValueError(f"coefficient grid must be 2-D, got shape {arr.shape}")
    for idx, c in np.ndenumerate(arr):
        arr[idx] = int(c)
    return arr


def _zeros(rows: int, cols: int) -> np.ndarray:
    out = np.empty((rows, cols), dtype=object)
    out.fill(0)
    return out


class BivarPoly:
    """Polynomial in p, q with integer coefficients on a dense grid."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        grid = _as_grid(coeffs)
        if grid.size == 0:
            grid = _zeros(1, 1)
        self.coeffs = grid
        self.coeffs.flags.writeable = False

    @classmethod
    def _wrap(cls, grid: np.ndarray) -> "BivarPoly":
        obj = cls.__new__(cls)
        grid.flags.writeable = False
        obj.coeffs = grid
        return obj

    @classmethod
    def from_terms(cls, terms: Mapping[tuple[int, int], int]) -> "BivarPoly":
        if not terms:
            return cls.zero()
        dp = max(i for i, _ in terms)
        dq = max(j for _, j in terms)
        grid = _zeros(dp + 1, dq + 1)
        for (i, j), c in terms.items():
            grid[i, j] += int(c)
        return cls._wrap(grid)

    @classmethod
    def zero(cls) -> "BivarPoly":
        return cls._wrap(_zeros(1, 1))

    @classmethod
    def one(cls) -> "BivarPoly":
        g = _zeros(1, 1)
        g[0, 0] = 1
        return cls._wrap(g)

    @property
    def deg_p(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def deg_q(self) -> int:
        return self.coeffs.shape[1] - 1

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if 0 <= i <= self.deg_p and 0 <= j <= self.deg_q:
            return self.coeffs[i, j]
        return 0

    def terms(self) -> dict[tuple[int, int], int]:
        return {(int(i), int(j)): self.coeffs[i, j] for i, j in zip(*np.nonzero(self.coeffs != 0))}

    def is_zero(self) -> bool:
        return not np.any(self.coeffs != 0)

    def canonical(self) -> "BivarPoly":
        """Drop all-zero trailing rows and columns."""
        nz = self.coeffs != 0
        if not nz.any():
            return BivarPoly.zero()
        rows = np.nonzero(nz.any(axis=1))[0][-1]
        cols = np.nonzero(nz.any(axis=0))[0][-1]
        return BivarPoly._wrap(self.coeffs[: rows + 1, : cols + 1].copy())

    def _padded(self, rows: int, cols: int) -> np.ndarray:
        out = _zeros(rows, cols)
        out[: self.deg_p + 1, : self.deg_q + 1] = self.coeffs
        return out

    def __add__(self, other: "BivarPoly") -> "BivarPoly":
        if isinstance(other, int):
            other = BivarPoly.one() * other
        if not isinstance(other, BivarPoly):
            return NotImplemented
        rows = max(self.deg_p, other.deg_p) + 1
        cols = max(self.deg_q, other.deg_q) + 1
        out = self._padded(rows, cols)
        out[: other.deg_p + 1, : other.deg_q + 1] += other.coeffs
        return BivarPoly._wrap(out)

    __radd__ = __add__

    def __neg__(self) -> "BivarPoly":
        return BivarPoly._wrap(-self.coeffs)

    def __sub__(self, other: "BivarPoly") -> "BivarPoly":
        return self + (-other)

    def __rsub__(self, other) -> "BivarPoly":
        return (-self) + other

    def __mul__(self, other) -> "BivarPoly":
        if isinstance(other, int):
            return BivarPoly._wrap(self.coeffs * other)
        if not isinstance(other, BivarPoly):
            return NotImplemented
        a, b = self, other
        if np.count_nonzero(a.coeffs != 0) > np.count_nonzero(b.coeffs != 0):
            a, b = b, a
        out = _zeros(a.deg_p + b.deg_p + 1, a.deg_q + b.deg_q + 1)
        bp, bq = b.coeffs.shape
        for i, j in zip(*np.nonzero(a.coeffs != 0)):
            out[i : i + bp, j : j + bq] += a.coeffs[i, j] * b.coeffs
        return BivarPoly._wrap(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = BivarPoly.one() * other
        if not isinstance(other, BivarPoly):
            return NotImplemented
        a, b = self.canonical(), other.canonical()
        return a.coeffs.shape == b.coeffs.shape and bool(np.all(a.coeffs == b.coeffs))

    def __hash__(self):
        c = self.canonical()
        return hash((c.coeffs.shape, tuple(c.coeffs.ravel())))

    def __repr__(self) -> str:
        parts = []
        for (i, j), c in sorted(self.terms().items()):
            mono = "".join(
                s for s in (
                    "" if i == 0 else ("p" if i == 1 else f"p^{i}"),
                    "" if j == 0 else ("q" if j == 1 else f"q^{j}"),
                )
            )
            parts.append(f"{c}*{mono}" if mono else str(c))
        return "BivarPoly(" + (" + ".join(parts) or "0") + ")"

    def swap(self) -> "BivarPoly":
        """Exchange the roles of p and q."""
        return BivarPoly._wrap(self.coeffs.T.copy())

    def at_p1(self) -> list[int]:
        """Coefficients of the univariate polynomial in q obtained by setting p = 1."""
        return [int(c) for c in self.coeffs.sum(axis=0)]

    def at_q1(self) -> list[int]:
        return [int(c) for c in self.coeffs.sum(axis=1)]

    def coeff_sum(self) -> int:
        return int(self.coeffs.sum())

    def truncate(self, trunc_p: int, trunc_q: int) -> "TruncatedSeries":
        return TruncatedSeries.from_poly(self, trunc_p, trunc_q)

    def scaled(self, divisor: int) -> np.ndarray:
        """Float grid of c_ij / divisor, each ratio correctly rounded on its own."""
        if divisor < 1:
            raise ValueError("divisor must be a positive integer")
        out = np.empty(self.coeffs.shape, dtype=float)
        flat = self.coeffs.ravel()
        out.ravel()[:] = [c / divisor for c in flat]
        return out

    def to_csv(self, header: str | None = None) -> str:
        return _grid_to_csv(self.coeffs, ("i", "j", "coeff"), header)

    @classmethod
    def from_csv(cls, text: str) -> "BivarPoly":
        return cls.from_terms(_csv_to_terms(text, ("i", "j", "coeff")))


class TruncatedSeries:
    """Power series in p, q modulo p^(trunc_p+1) and q^(trunc_q+1)."""

    __slots__ = ("coeffs", "trunc_p", "trunc_q")

    def __init__(self, coeffs, trunc_p: int, trunc_q: int):
        if trunc_p < 0 or trunc_q < 0:
            raise ValueError("truncation orders must be nonnegative")
        grid = _zeros(trunc_p + 1, trunc_q + 1)
        src = _as_grid(coeffs) if not isinstance(coeffs, np.ndarray) or coeffs.dtype != object else coeffs
        r = min(src.shape[0], trunc_p + 1)
        c = min(src.shape[1], trunc_q + 1)
        grid[:r, :c] = src[:r, :c]
        grid.flags.writeable = False
        self.coeffs = grid
        self.trunc_p = trunc_p
        self.trunc_q = trunc_q

    @classmethod
    def _wrap(cls, grid: np.ndarray, trunc_p: int, trunc_q: int) -> "TruncatedSeries":
        obj = cls.__new__(cls)
        grid.flags.writeable = False
        obj.coeffs = grid
        obj.trunc_p = trunc_p
        obj.trunc_q = trunc_q
        return obj

    @classmethod
    def from_poly(cls, poly: BivarPoly, trunc_p: int, trunc_q: int) -> "TruncatedSeries":
        return cls(poly.coeffs, trunc_p, trunc_q)

    @classmethod
    def one(cls, trunc_p: int, trunc_q: int) -> "TruncatedSeries":
        g = _zeros(trunc_p + 1, trunc_q + 1)
        g[0, 0] = 1
        return cls._wrap(g, trunc_p, trunc_q)

    @classmethod
    def zero(cls, trunc_p: int, trunc_q: int) -> "TruncatedSeries":
        return cls._wrap(_zeros(trunc_p + 1, trunc_q + 1), trunc_p, trunc_q)

    @property
    def trunc(self) -> tuple[int, int]:
        return (self.trunc_p, self.trunc_q)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.coeffs[ij]

    def _check(self, other: "TruncatedSeries") -> None:
        if not isinstance(other, TruncatedSeries):
            raise UsageError(f"cannot combine TruncatedSeries with {type(other).__name__}")
        if self.trunc != other.trunc:
            raise UsageError(f"truncation orders differ: {self.trunc} vs {other.trunc}")

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        return TruncatedSeries._wrap(self.coeffs + other.coeffs, *self.trunc)

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries._wrap(-self.coeffs, *self.trunc)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        return TruncatedSeries._wrap(self.coeffs - other.coeffs, *self.trunc)

    def __mul__(self, other) -> "TruncatedSeries":
        if isinstance(other, int):
            return TruncatedSeries._wrap(self.coeffs * other, *self.trunc)
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if np.count_nonzero(a != 0) > np.count_nonzero(b != 0):
            a, b = b, a
        tp, tq = self.trunc
        out = _zeros(tp + 1, tq + 1)
        for i, j in zip(*np.nonzero(a != 0)):
            out[i:, j:] += a[i, j] * b[: tp + 1 - i, : tq + 1 - j]
        return TruncatedSeries._wrap(out, tp, tq)

    __rmul__ = __mul__

    def exact_div(self, m: int) -> "TruncatedSeries":
        """Divide every coefficient by m, asserting the division is exact."""
        q = self.coeffs // m
        if np.any(q * m != self.coeffs):
            raise ArithmeticError(f"coefficients not divisible by {m}")
        return TruncatedSeries._wrap(q, *self.trunc)

    def mul_geometric(self, step: int, var: str) -> "TruncatedSeries":
        """Multiply by 1/(1 - x^step) for x = p or q (strided running sum)."""
        if step < 1:
            raise ValueError("step must be >= 1")
        axis = _axis(var)
        out = np.array(self.coeffs, dtype=object, copy=True)
        size = out.shape[axis]
        for start in range(step, size):
            if axis == 0:
                out[start, :] += out[start - step, :]
            else:
                out[:, start] += out[:, start - step]
        return TruncatedSeries._wrap(out, *self.trunc)

    def mul_one_minus(self, step: int, var: str) -> "TruncatedSeries":
        """Multiply by (1 - x^step) for x = p or q."""
        axis = _axis(var)
        out = np.array(self.coeffs, dtype=object, copy=True)
        if step == 0:
            return TruncatedSeries.zero(*self.trunc)
        if axis == 0:
            out[step:, :] -= self.coeffs[:-step, :] if step <= self.trunc_p else 0
        else:
            out[:, step:] -= self.coeffs[:, :-step] if step <= self.trunc_q else 0
        return TruncatedSeries._wrap(out, *self.trunc)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.trunc == other.trunc and bool(np.all(self.coeffs == other.coeffs))

    def __hash__(self):
        return hash((self.trunc, tuple(self.coeffs.ravel())))

    def __repr__(self) -> str:
        nz = int(np.count_nonzero(self.coeffs != 0))
        return f"TruncatedSeries(trunc={self.trunc}, nonzero={nz})"

    def to_poly(self) -> BivarPoly:
        return BivarPoly._wrap(self.coeffs.copy()).canonical()

    def to_csv(self, header: str | None = None) -> str:
        return _grid_to_csv(self.coeffs, ("i", "j", "coeff"), header)


def _axis(var: str) -> int:
    if var == "p":
        return 0
    if var == "q":
        return 1
    raise ValueError(f"variable must be 'p' or 'q', got {var!r}")


def poly_add(a, b):
    return a + b


def poly_mul(a, b):
    return a * b


def poly_eval_scaled(a: BivarPoly, p: complex, q: complex, divisor: int = 1) -> complex:
    """Evaluate sum (c_ij/divisor) p^i q^j in double precision.

    Each c_ij/divisor is rounded individually, so the big-integer sum is never
    formed in floating point.
    """
    return complex(eval_scaled_grid(a.scaled(divisor), np.asarray([p]), np.asarray([q]))[0])


def powers(x: np.ndarray, deg: int) -> np.ndarray:
    """Rows of x^0..x^deg for each point in x; unit-modulus points use exp(i k theta)."""
    x = np.asarray(x, dtype=complex)
    k = np.arange(deg + 1)
    unit = np.isclose(np.abs(x), 1.0, rtol=0, atol=1e-15)
    out = np.power.outer(x, k)
    if unit.any():
        theta = np.angle(x[unit])
        out[unit] = np.exp(1j * np.multiply.outer(theta, k))
    return out


def eval_scaled_grid(scaled: np.ndarray, ps: np.ndarray, qs: np.ndarray) -> np.ndarray:
    """Evaluate a float coefficient grid at the paired points (ps[k], qs[k])."""
    dp, dq = scaled.shape[0] - 1, scaled.shape[1] - 1
    pp = powers(ps, dp)
    qq = powers(qs, dq)
    return np.einsum("ki,ij,kj->k", pp, scaled, qq)


def _grid_to_csv(grid: np.ndarray, names: tuple[str, str, str], header: str | None) -> str:
    buf = io.StringIO()
    if header is not None:
        buf.write(header.rstrip("\n") + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(names)
    for i, j in zip(*np.nonzero(grid != 0)):
        w.writerow((int(i), int(j), str(grid[i, j])))
    return buf.getvalue()


def _csv_to_terms(text: str, names: tuple[str, str, str]) -> dict[tuple[int, int], int]:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    reader = csv.reader(lines)
    head = next(reader, None)
    if head is None or tuple(h.strip() for h in head) != names:
        raise ValueError(f"expected CSV header {','.join(names)}, got {head}")
    terms: dict[tuple[int, int], int] = {}
    for row in reader:
        if len(row) != 3:
            raise ValueError(f"malformed CSV row: {row}")
        i, j, c = int(row[0]), int(row[1]), int(row[2])
        if i < 0 or j < 0:
            raise ValueError(f"negative exponent in row {row}")
        if (i, j) in terms:
            raise ValueError(f"duplicate entry for ({i},{j})")
        terms[(i, j)] = c
    return terms


def terms_from_csv(text: str, names: Iterable[str]) -> dict[tuple[int, int], int]:
    return _csv_to_terms(text, tuple(names))


def terms_to_csv(grid: np.ndarray, names: Iterable[str], header: str | None = None) -> str:
    return _grid_to_csv(grid, tuple(names), header)
