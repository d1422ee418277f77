"""Dense matrices, Kronecker and Hadamard products, and a Jacobi eigensolver.

The eigensolver is the universal numeric oracle for every spectral claim in
the package: it is a self-contained cyclic Jacobi iteration on dense
symmetric matrices, adequate up to a few hundred rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import NotSymmetric, ParseError, ShapeMismatch
from .graphs import Graph
from .perms import Perm

#: Off-diagonal Frobenius norm threshold for Jacobi convergence.
JACOBI_THRESHOLD = 1e-12

#: Maximum number of cyclic Jacobi sweeps.
JACOBI_MAX_SWEEPS = 100

#: Tolerance for eigenvalue multiset comparisons.
SPECTRUM_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class Matrix:
    """Immutable dense real matrix in row-major order."""

    data: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.data, dtype=float)
        if arr.ndim != 2:
            raise ShapeMismatch(f"matrix must be 2-dimensional, got shape {arr.shape}")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "data", arr)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def __getitem__(self, key) -> float:
        return self.data[key]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.data, other.data))

    def __hash__(self) -> int:
        return hash((self.shape, self.data.tobytes()))

    def allclose(self, other: Matrix, tol: float = 1e-9) -> bool:
        return self.shape == other.shape and bool(np.allclose(self.data, other.data, atol=tol))

    def transpose(self) -> Matrix:
        return Matrix(self.data.T)

    def __add__(self, other: Matrix) -> Matrix:
        if self.shape != other.shape:
            raise ShapeMismatch(f"cannot add {self.shape} and {other.shape}")
        return Matrix(self.data + other.data)

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        return Matrix(self.data @ other.data)

    def is_symmetric(self, tol: float = 1e-12) -> bool:
        return self.rows == self.cols and bool(np.allclose(self.data, self.data.T, atol=tol))

    def is_adjacency(self) -> bool:
        """Square, symmetric, zero diagonal, all entries 0 or 1."""
        a = self.data
        if self.rows != self.cols:
            return False
        if not np.array_equal(a, a.T):
            return False
        if np.any(np.diag(a) != 0.0):
            return False
        return bool(np.all((a == 0.0) | (a == 1.0)))

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "entries": self.data.tolist()}

    @staticmethod
    def from_json(data: dict) -> Matrix:
        try:
            entries = data["entries"]
            m = Matrix(np.asarray(entries, dtype=float))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad matrix JSON: {exc}") from exc
        if m.rows != data.get("rows", m.rows) or m.cols != data.get("cols", m.cols):
            raise ParseError("matrix JSON shape fields disagree with entries")
        return m

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols})"


def from_rows(rows: Sequence[Sequence[float]]) -> Matrix:
    return Matrix(np.asarray(rows, dtype=float))


def identity(n: int) -> Matrix:
    return Matrix(np.eye(n))


def zeros(rows: int, cols: int) -> Matrix:
    return Matrix(np.zeros((rows, cols)))


def adjacency_matrix(g: Graph) -> Matrix:
    """0/1 adjacency matrix indexed by the graph's stored vertex order."""
    a = np.zeros((g.n, g.n))
    idx = g.index
    for e in g.edges:
        u, v = tuple(e)
        a[idx[u], idx[v]] = 1.0
        a[idx[v], idx[u]] = 1.0
    m = Matrix(a)
    assert m.is_adjacency()
    return m


def kronecker(a: Matrix, b: Matrix) -> Matrix:
    """Block matrix whose (i, j) block is a[i, j] * b."""
    return Matrix(np.kron(a.data, b.data))


def hadamard(a: Matrix, b: Matrix) -> Matrix:
    """Entrywise product of two same-shaped matrices."""
    if a.shape != b.shape:
        raise ShapeMismatch(f"hadamard needs equal shapes, got {a.shape} and {b.shape}")
    return Matrix(a.data * b.data)


def perm_matrix(sigma: Perm | Sequence[int]) -> Matrix:
    """Permutation matrix P with P[sigma(i)][i] = 1, so P e_i = e_sigma(i)."""
    if not isinstance(sigma, Perm):
        sigma = Perm(tuple(sigma))
    n = sigma.n
    p = np.zeros((n, n))
    for i in range(n):
        p[sigma(i), i] = 1.0
    return Matrix(p)


def perm_block(sigma: Perm) -> Matrix:
    """Row-action permutation block: entry (i, j) = 1 iff j = sigma(i).

    Adjacency formulas for voltage constructions need blocks acting on the
    second index (fiber index flows forward along the oriented edge), which
    is the transpose of :func:`perm_matrix`.
    """
    return perm_matrix(sigma.inverse())


@dataclass(frozen=True)
class Spectrum:
    """Real eigenvalue multiset, sorted descending with multiplicity."""

    eigenvalues: tuple[float, ...]

    def __post_init__(self) -> None:
        vals = tuple(sorted((float(x) for x in self.eigenvalues), reverse=True))
        object.__setattr__(self, "eigenvalues", vals)

    @property
    def size(self) -> int:
        return len(self.eigenvalues)

    def isclose(self, other: Spectrum, tol: float = SPECTRUM_TOLERANCE) -> bool:
        if self.size != other.size:
            return False
        return all(abs(a - b) <= tol for a, b in zip(self.eigenvalues, other.eigenvalues))

    def close_to_values(self, values: Iterable[float], tol: float = SPECTRUM_TOLERANCE) -> bool:
        return self.isclose(Spectrum(tuple(values)), tol)

    def __str__(self) -> str:
        return ", ".join(f"{x if abs(x) >= 5e-7 else 0.0:.6f}" for x in self.eigenvalues)


def _jacobi_eigenvalues(a: np.ndarray) -> np.ndarray:
    """Cyclic Jacobi iteration; returns unsorted eigenvalues."""
    a = a.copy()
    n = a.shape[0]
    for _ in range(JACOBI_MAX_SWEEPS):
        off = np.sqrt(np.sum((a - np.diag(np.diag(a))) ** 2))
        if off < JACOBI_THRESHOLD:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < JACOBI_THRESHOLD / max(n, 1):
                    continue
                app, aqq = a[p, p], a[q, q]
                tau = (aqq - app) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rot_p = c * a[p, :] - s * a[q, :]
                rot_q = s * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = rot_p, rot_q
                col_p = c * a[:, p] - s * a[:, q]
                col_q = s * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = col_p, col_q
    return np.diag(a)


def spectrum(a: Matrix) -> Spectrum:
    """All real eigenvalues of a symmetric matrix, with multiplicity."""
    if not a.is_symmetric():
        raise NotSymmetric("spectrum requires a square symmetric matrix")
    return Spectrum(tuple(_jacobi_eigenvalues(a.data)))


def graph_spectrum(g: Graph) -> Spectrum:
    return spectrum(adjacency_matrix(g))
