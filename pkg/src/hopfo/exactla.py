"""Exact dense linear algebra over prime fields GF(p) and the rationals.

Matrices are plain numpy arrays.  Over GF(p) they hold canonical
representatives ``0 <= e < p`` (int64, or Python ints for very large p);
over Q they are object arrays of :class:`fractions.Fraction`.  A
:class:`Field` instance owns all arithmetic, and every routine here takes
the field explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Optional, Sequence

import numpy as np

__all__ = [
    "Field",
    "GF",
    "QQ",
    "Subspace",
    "rref",
    "rank",
    "kernel",
    "kernel_of_blocks",
    "image",
    "solve",
    "inverse",
    "kronecker",
    "quotient_map",
    "is_prime",
]

_FLOAT_EXACT = 2**53
_INT64_SAFE = 2**62


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _parse_rational(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, (np.integer,)):
        return Fraction(int(x))
    return Fraction(x)


class Field:
    """A prime field GF(p) (``p`` given) or the rationals (``p is None``)."""

    def __init__(self, p: Optional[int] = None):
        if p is not None:
            p = int(p)
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
        self.p = p
        if p is None:
            self.dtype = object
        elif (p - 1) ** 2 < _INT64_SAFE:
            self.dtype = np.int64
        else:
            self.dtype = object

    @property
    def kind(self) -> str:
        return "rational" if self.p is None else "prime"

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "QQ" if self.p is None else f"GF({self.p})"

    def to_json(self) -> dict:
        return {"kind": "rational"} if self.p is None else {"kind": "prime", "p": self.p}

    @classmethod
    def from_json(cls, d: dict) -> "Field":
        if d.get("kind") == "rational":
            return cls(None)
        if d.get("kind") == "prime":
            return cls(int(d["p"]))
        raise ValueError(f"unknown field kind {d.get('kind')!r}")

    # scalars -------------------------------------------------------------

    def __call__(self, x):
        if isinstance(x, np.generic):
            x = x.item()
        if self.p is None:
            return _parse_rational(x)
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, Fraction):
            return (int(x.numerator) * pow(int(x.denominator), -1, self.p)) % self.p
        return int(x) % self.p

    def inv(self, x):
        if self.p is None:
            if x == 0:
                raise ZeroDivisionError("inverse of zero")
            return 1 / Fraction(x)
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def neg(self, x):
        return self(-x)

    def format(self, x) -> object:
        """JSON-friendly scalar: int for GF(p), int or 'a/b' string for Q."""
        if self.p is None:
            x = Fraction(x)
            return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        return int(x)

    # arrays --------------------------------------------------------------

    def reduce(self, a):
        """Canonical representatives; scalars in, scalars out."""
        if np.ndim(a) == 0:
            return self(a[()] if isinstance(a, np.ndarray) else a)
        a = np.asarray(a)
        if self.p is None:
            if a.dtype != object:
                a = a.astype(object)
            return a
        if a.dtype == object and self.dtype != object:
            a = np.vectorize(lambda v: int(v) % self.p, otypes=[np.int64])(a) if a.size else a.astype(np.int64)
            return a
        return a % self.p

    def array(self, data) -> np.ndarray:
        if self.p is None:
            a = np.array(data, dtype=object)
            flat = [_parse_rational(x) for x in a.ravel()]
            out = np.empty(a.shape, dtype=object)
            if a.size:
                out.ravel()[:] = flat
            return out
        a = np.array(data, dtype=object)
        if a.size == 0:
            return np.zeros(a.shape, dtype=self.dtype)
        flat = [self(x) for x in a.ravel()]
        return np.array(flat, dtype=self.dtype).reshape(a.shape)

    def zeros(self, shape) -> np.ndarray:
        if self.dtype == object:
            out = np.empty(shape, dtype=object)
            out.fill(Fraction(0) if self.p is None else 0)
            return out
        return np.zeros(shape, dtype=self.dtype)

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = Fraction(1) if self.p is None else 1
        return out

    def scal(self, c, a):
        return self.reduce(self(c) * np.asarray(a))

    def add(self, a, b):
        return self.reduce(np.asarray(a) + np.asarray(b))

    def sub(self, a, b):
        return self.reduce(np.asarray(a) - np.asarray(b))

    def matmul(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        if self.p is None:
            return self.reduce(np.matmul(a.astype(object), b.astype(object)))
        k = a.shape[-1] if a.ndim else 1
        bound = (self.p - 1) ** 2 * max(k, 1)
        if self.dtype != object and bound < _FLOAT_EXACT:
            prod = np.matmul(a.astype(np.float64), b.astype(np.float64))
            return np.rint(prod).astype(np.int64) % self.p
        if self.dtype != object and bound < _INT64_SAFE:
            return np.matmul(a, b) % self.p
        return self.reduce(np.matmul(a.astype(object), b.astype(object)))

    def mchain(self, *mats):
        return reduce(self.matmul, mats)

    def einsum(self, subscripts: str, a, b):
        """Two-operand einsum followed by reduction.

        Intermediate sums are bounded by ``p^2 * (contracted size)``, so
        callers chain pairwise contractions rather than passing many
        operands at once.
        """
        a = np.asarray(a)
        b = np.asarray(b)
        if self.p is not None and self.dtype != object and (self.p - 1) ** 2 * 4096 < _INT64_SAFE:
            out = np.einsum(subscripts, a, b, optimize=False)
            return out % self.p
        return self.reduce(np.einsum(subscripts, a.astype(object), b.astype(object)))

    def is_zero(self, a) -> bool:
        a = np.asarray(a)
        return not np.any(a != 0)

    def equal(self, a, b) -> bool:
        a = np.asarray(a)
        b = np.asarray(b)
        return a.shape == b.shape and not np.any(a != b)

    def random_matrix(self, rng: np.random.Generator, shape, low: int = -3, high: int = 4):
        if self.p is None:
            return self.array(rng.integers(low, high, size=shape))
        return self.array(rng.integers(0, self.p, size=shape))

    def random_invertible(self, rng: np.random.Generator, n: int) -> np.ndarray:
        while True:
            m = self.random_matrix(rng, (n, n))
            if rank(self, m) == n:
                return m


def GF(p: int) -> Field:
    return Field(p)


QQ = Field(None)


# ---------------------------------------------------------------------------
# elimination


def rref(F: Field, m) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form and pivot columns.

    Pivots are chosen as the leftmost nonzero column, with the topmost
    available row.
    """
    a = F.array(m) if not isinstance(m, np.ndarray) else F.reduce(m).copy()
    if a.ndim != 2:
        raise ValueError("rref expects a 2-d matrix")
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        piv = a[r, c]
        if piv != 1:
            a[r, c:] = F.reduce(a[r, c:] * F.inv(piv))
        col = a[:, c].copy()
        col[r] = 0
        others = np.nonzero(col)[0]
        if others.size:
            a[others, c:] = F.reduce(a[others, c:] - np.outer(col[others], a[r, c:]))
        pivots.append(c)
        r += 1
    return a, pivots


def rank(F: Field, m) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    # eliminate along the shorter side
    if m.shape[0] > m.shape[1]:
        m = m.T
    return len(rref(F, m)[1])


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of ``F^ambient_dim`` held by its canonical rref basis (rows)."""

    field: Field
    ambient_dim: int
    basis: np.ndarray
    pivots: tuple[int, ...]

    @classmethod
    def span(cls, F: Field, ambient_dim: int, vectors) -> "Subspace":
        vecs = np.asarray(vectors)
        if vecs.size == 0:
            return cls.zero(F, ambient_dim)
        vecs = vecs.reshape(-1, ambient_dim)
        r, piv = rref(F, vecs)
        return cls(F, ambient_dim, r[: len(piv)], tuple(piv))

    @classmethod
    def zero(cls, F: Field, ambient_dim: int) -> "Subspace":
        return cls(F, ambient_dim, F.zeros((0, ambient_dim)), ())

    @classmethod
    def full(cls, F: Field, ambient_dim: int) -> "Subspace":
        return cls(F, ambient_dim, F.eye(ambient_dim), tuple(range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def __len__(self):
        return self.dim

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.field == other.field
            and self.ambient_dim == other.ambient_dim
            and self.pivots == other.pivots
            and self.field.equal(self.basis, other.basis)
        )

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, field={self.field!r})"

    def columns(self) -> np.ndarray:
        """Basis vectors as columns (ambient_dim x dim)."""
        return self.basis.T

    def coordinates(self, vectors) -> np.ndarray:
        """Coordinates of vectors (columns) known to lie in the subspace."""
        v = np.asarray(vectors)
        return v[list(self.pivots), ...]

    def contains(self, vectors) -> bool:
        v = np.asarray(vectors)
        if v.ndim == 1:
            v = v[:, None]
        if v.shape[1] == 0:
            return True
        recon = self.field.matmul(self.basis.T, self.coordinates(v))
        return self.field.equal(recon, self.field.reduce(v))

    def __le__(self, other: "Subspace") -> bool:
        return other.contains(self.basis.T)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.field, self.ambient_dim, np.vstack([self.basis, other.basis]))

    def intersect(self, other: "Subspace") -> "Subspace":
        F = self.field
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(F, self.ambient_dim)
        # x = B1^T a = B2^T b
        stacked = np.hstack([self.basis.T, F.reduce(-other.basis.T)])
        ker = kernel(F, stacked)
        if ker.dim == 0:
            return Subspace.zero(F, self.ambient_dim)
        coeffs = ker.basis[:, : self.dim]
        return Subspace.span(F, self.ambient_dim, F.matmul(coeffs, self.basis))


def kernel(F: Field, m) -> Subspace:
    """Null space ``{v : m v = 0}``."""
    m = np.asarray(m)
    cols = m.shape[1]
    if m.shape[0] == 0 or F.is_zero(m):
        return Subspace.full(F, cols)
    r, piv = rref(F, m)
    free = [c for c in range(cols) if c not in set(piv)]
    if not free:
        return Subspace.zero(F, cols)
    basis = F.zeros((len(free), cols))
    basis[np.arange(len(free)), free] = 1
    if piv:
        basis[:, list(piv)] = F.reduce(-r[: len(piv)][:, free]).T
    return Subspace.span(F, cols, basis)


def kernel_of_blocks(F: Field, blocks: Iterable[np.ndarray], cols: int) -> Subspace:
    """Common null space of several constraint blocks, shrinking the kernel block by block."""
    cur = Subspace.full(F, cols)
    for b in blocks:
        if cur.dim == 0:
            break
        if b.shape[0] == 0:
            continue
        restricted = F.matmul(b, cur.basis.T)
        if F.is_zero(restricted):
            continue
        sub = kernel(F, restricted)
        if sub.dim == 0:
            return Subspace.zero(F, cols)
        cur = Subspace.span(F, cols, F.matmul(sub.basis, cur.basis))
    return cur


def image(F: Field, m) -> Subspace:
    """Column span of ``m``."""
    m = np.asarray(m)
    return Subspace.span(F, m.shape[0], m.T)


def solve(F: Field, m, b) -> Optional[np.ndarray]:
    """One solution of ``m x = b`` (free variables zero), or ``None``."""
    m = np.asarray(m)
    b = np.asarray(b)
    vec = b.ndim == 1
    if vec:
        b = b[:, None]
    if m.shape[0] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {m.shape} vs {b.shape}")
    n = m.shape[1]
    if m.shape[0] == 0:
        x = F.zeros((n, b.shape[1]))
        return x[:, 0] if vec else x
    aug = np.hstack([F.reduce(m), F.reduce(b)])
    r, piv = rref(F, aug)
    if any(pc >= n for pc in piv):
        return None
    x = F.zeros((n, b.shape[1]))
    for i, pc in enumerate(piv):
        x[pc] = r[i, n:]
    return x[:, 0] if vec else x


def inverse(F: Field, m) -> np.ndarray:
    m = np.asarray(m)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    x = solve(F, m, F.eye(n))
    if x is None or rank(F, m) != n:
        raise np.linalg.LinAlgError("singular matrix")
    return x


def kronecker(F: Field, a, b) -> np.ndarray:
    """``a (x) b`` with composite index ``i * b.rows + i'`` (left factor major)."""
    a = np.asarray(a)
    b = np.asarray(b)
    if F.dtype == object:
        return F.reduce(np.kron(a.astype(object), b.astype(object)))
    return np.kron(a, b) % F.p


def quotient_map(F: Field, ambient_dim: int, sub: Subspace) -> tuple[np.ndarray, np.ndarray]:
    """Projection onto ``F^n / sub`` and a section of it.

    Quotient coordinates are the non-pivot coordinates of ``sub``'s rref
    basis, so the section is a coordinate inclusion.
    """
    if sub.ambient_dim != ambient_dim:
        raise ValueError("subspace lives in a different ambient space")
    piv = list(sub.pivots)
    comp = [c for c in range(ambient_dim) if c not in set(piv)]
    q = len(comp)
    section = F.zeros((ambient_dim, q))
    proj = F.zeros((q, ambient_dim))
    for t, c in enumerate(comp):
        section[c, t] = 1
        proj[t, c] = 1
    for i, pc in enumerate(piv):
        proj[:, pc] = F.reduce(-sub.basis[i, comp])
    return proj, section


def block_diag(F: Field, blocks: Sequence[np.ndarray]) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = F.zeros((rows, cols))
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def stack_constraints(F: Field, blocks: Iterable[np.ndarray], cols: int) -> np.ndarray:
    blocks = [b for b in blocks if b.shape[0]]
    if not blocks:
        return F.zeros((0, cols))
    return np.vstack(blocks)
