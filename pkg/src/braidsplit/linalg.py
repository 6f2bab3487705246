"""Exact linear algebra over Z and Z/(q).

Everything here works on plain Python integers, so intermediate values never
overflow.  The central routine is :func:`smith_normal_form`; :func:`solve_mod`
uses it on the augmented matrix ``[M | q*I]`` to decide solvability of
``M x = b (mod q)`` for any modulus, squarefree or not.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union


class DimensionMismatch(ValueError):
    pass


class ModulusMismatch(ValueError):
    pass


def _check_modulus(q: int) -> int:
    if not isinstance(q, int) or q < 1:
        raise ValueError(f"modulus must be a positive integer, got {q!r}")
    return q


@dataclass(frozen=True)
class Residue:
    """An element of Z/(q), stored by its canonical representative."""

    value: int
    modulus: int

    def __post_init__(self):
        _check_modulus(self.modulus)
        object.__setattr__(self, "value", self.value % self.modulus)

    def _other(self, other) -> int:
        if isinstance(other, Residue):
            if other.modulus != self.modulus:
                raise ModulusMismatch(f"{self.modulus} != {other.modulus}")
            return other.value
        return int(other)

    def __add__(self, other):
        return Residue(self.value + self._other(other), self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        return Residue(self.value - self._other(other), self.modulus)

    def __rsub__(self, other):
        return Residue(self._other(other) - self.value, self.modulus)

    def __mul__(self, other):
        return Residue(self.value * self._other(other), self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.modulus)

    def __int__(self):
        return self.value


@dataclass(frozen=True)
class ResidueVector:
    """A vector in (Z/(q))^length with canonical coordinates."""

    coords: tuple[int, ...]
    modulus: int

    def __post_init__(self):
        q = _check_modulus(self.modulus)
        object.__setattr__(self, "coords", tuple(int(c) % q for c in self.coords))

    @classmethod
    def zeros(cls, length: int, q: int) -> "ResidueVector":
        return cls((0,) * length, q)

    @classmethod
    def unit(cls, length: int, index: int, q: int) -> "ResidueVector":
        return cls(tuple(int(i == index) for i in range(length)), q)

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    @property
    def length(self) -> int:
        return len(self.coords)

    def residues(self) -> list[Residue]:
        return [Residue(c, self.modulus) for c in self.coords]

    def _check(self, other: "ResidueVector"):
        if other.modulus != self.modulus:
            raise ModulusMismatch(f"{self.modulus} != {other.modulus}")
        if len(other) != len(self):
            raise DimensionMismatch(f"length {len(self)} != {len(other)}")

    def __add__(self, other: "ResidueVector") -> "ResidueVector":
        self._check(other)
        return ResidueVector(tuple(a + b for a, b in zip(self, other)), self.modulus)

    def __sub__(self, other: "ResidueVector") -> "ResidueVector":
        self._check(other)
        return ResidueVector(tuple(a - b for a, b in zip(self, other)), self.modulus)

    def __neg__(self) -> "ResidueVector":
        return ResidueVector(tuple(-a for a in self), self.modulus)

    def __mul__(self, scalar: int) -> "ResidueVector":
        return ResidueVector(tuple(scalar * a for a in self), self.modulus)

    __rmul__ = __mul__

    def dot(self, other: "ResidueVector") -> int:
        self._check(other)
        return sum(a * b for a, b in zip(self, other)) % self.modulus

    def is_zero(self) -> bool:
        return not any(self.coords)

    def reduce(self, q: int) -> "ResidueVector":
        """Reduce to Z/(q); q must divide the current modulus."""
        if self.modulus % q:
            raise ModulusMismatch(f"{q} does not divide {self.modulus}")
        return ResidueVector(self.coords, q)


@dataclass(frozen=True)
class IntegerMatrix:
    entries: tuple[tuple[int, ...], ...]
    cols: int = field(default=-1)

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.entries)
        cols = len(rows[0]) if rows else max(self.cols, 0)
        if any(len(r) != cols for r in rows):
            raise DimensionMismatch("ragged matrix")
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "cols", cols)

    @classmethod
    def identity(cls, size: int) -> "IntegerMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(size)) for i in range(size)), size)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntegerMatrix":
        return cls(tuple((0,) * cols for _ in range(rows)), cols)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(tuple(zip(*self.entries)) if self.rows else (), self.rows)

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        ot = other.transpose().entries
        return IntegerMatrix(
            tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in ot) for row in self.entries),
            other.cols,
        )

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise DimensionMismatch("determinant of a non-square matrix")
        a = self.tolist()
        size = len(a)
        sign, prev = 1, 1
        for k in range(size - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, size) if a[i][k]), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, size):
                for j in range(k + 1, size):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[-1][-1] if size else 1


@dataclass(frozen=True)
class ResidueMatrix:
    """A rows x cols matrix over Z/(q)."""

    entries: tuple[tuple[int, ...], ...]
    modulus: int
    cols: int = field(default=-1)

    def __post_init__(self):
        q = _check_modulus(self.modulus)
        rows = tuple(tuple(int(x) % q for x in row) for row in self.entries)
        cols = len(rows[0]) if rows else max(self.cols, 0)
        if any(len(r) != cols for r in rows):
            raise DimensionMismatch("ragged matrix")
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "cols", cols)

    @classmethod
    def identity(cls, size: int, q: int) -> "ResidueMatrix":
        return cls(IntegerMatrix.identity(size).entries, q, size)

    @classmethod
    def zeros(cls, rows: int, cols: int, q: int) -> "ResidueMatrix":
        return cls(tuple((0,) * cols for _ in range(rows)), q, cols)

    @classmethod
    def from_rows(cls, rows: Iterable[ResidueVector], q: int, cols: int = -1) -> "ResidueMatrix":
        rows = list(rows)
        for r in rows:
            if r.modulus != q:
                raise ModulusMismatch(f"{r.modulus} != {q}")
        return cls(tuple(r.coords for r in rows), q, cols)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> ResidueVector:
        return ResidueVector(self.entries[i], self.modulus)

    def row_vectors(self) -> list[ResidueVector]:
        return [self.row(i) for i in range(self.rows)]

    def column(self, j: int) -> ResidueVector:
        return ResidueVector(tuple(r[j] for r in self.entries), self.modulus)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def lift(self) -> IntegerMatrix:
        return IntegerMatrix(self.entries, self.cols)

    def transpose(self) -> "ResidueMatrix":
        return ResidueMatrix(tuple(zip(*self.entries)) if self.rows else (), self.modulus, self.rows)

    def _same(self, other: "ResidueMatrix"):
        if other.modulus != self.modulus:
            raise ModulusMismatch(f"{self.modulus} != {other.modulus}")
        if other.shape != self.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")

    def __add__(self, other: "ResidueMatrix") -> "ResidueMatrix":
        self._same(other)
        return ResidueMatrix(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)),
            self.modulus,
            self.cols,
        )

    def __sub__(self, other: "ResidueMatrix") -> "ResidueMatrix":
        self._same(other)
        return ResidueMatrix(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)),
            self.modulus,
            self.cols,
        )

    def __neg__(self) -> "ResidueMatrix":
        return self.scale(-1)

    def scale(self, c: int) -> "ResidueMatrix":
        return ResidueMatrix(tuple(tuple(c * a for a in r) for r in self.entries), self.modulus, self.cols)

    def __matmul__(self, other: Union["ResidueMatrix", ResidueVector]):
        if other.modulus != self.modulus:
            raise ModulusMismatch(f"{self.modulus} != {other.modulus}")
        if isinstance(other, ResidueVector):
            if len(other) != self.cols:
                raise DimensionMismatch(f"{self.shape} @ vector of length {len(other)}")
            return ResidueVector(
                tuple(sum(a * x for a, x in zip(r, other.coords)) for r in self.entries),
                self.modulus,
            )
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        ot = other.transpose().entries
        return ResidueMatrix(
            tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in ot) for r in self.entries),
            self.modulus,
            other.cols,
        )

    def reduce(self, q: int) -> "ResidueMatrix":
        if self.modulus % q:
            raise ModulusMismatch(f"{q} does not divide {self.modulus}")
        return ResidueMatrix(self.entries, q, self.cols)

    @staticmethod
    def vstack(blocks: Sequence["ResidueMatrix"]) -> "ResidueMatrix":
        q = blocks[0].modulus
        cols = blocks[0].cols
        for b in blocks:
            if b.modulus != q:
                raise ModulusMismatch("vstack of mixed moduli")
            if b.cols != cols:
                raise DimensionMismatch("vstack of mixed widths")
        return ResidueMatrix(tuple(r for b in blocks for r in b.entries), q, cols)

    @staticmethod
    def hstack(blocks: Sequence["ResidueMatrix"]) -> "ResidueMatrix":
        q = blocks[0].modulus
        rows = blocks[0].rows
        for b in blocks:
            if b.modulus != q:
                raise ModulusMismatch("hstack of mixed moduli")
            if b.rows != rows:
                raise DimensionMismatch("hstack of mixed heights")
        return ResidueMatrix(
            tuple(tuple(x for b in blocks for x in b.entries[i]) for i in range(rows)),
            q,
            sum(b.cols for b in blocks),
        )


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ M @ V == D`` with U, V unimodular and D in Smith form."""

    U: IntegerMatrix
    D: IntegerMatrix
    V: IntegerMatrix
    shape: tuple[int, int]

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i, i] for i in range(min(self.shape))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)

    def check(self, M: IntegerMatrix) -> bool:
        if self.U @ M @ self.V != self.D:
            return False
        if abs(self.U.det()) != 1 or abs(self.V.det()) != 1:
            return False
        rows, cols = self.shape
        if any(self.D[i, j] for i in range(rows) for j in range(cols) if i != j):
            return False
        diag = self.diagonal
        if any(d < 0 for d in diag):
            return False
        for a, b in zip(diag, diag[1:]):
            if (a == 0 and b != 0) or (a != 0 and b % a):
                return False
        return True


def smith_normal_form(M: IntegerMatrix) -> SmithDecomposition:
    """Smith normal form with transforms, by deterministic pivoting.

    The pivot at each stage is the nonzero entry of least absolute value in
    the trailing submatrix, ties broken by lowest (row, col).
    """
    rows, cols = M.shape
    a = M.tolist()
    U = [[int(i == j) for j in range(rows)] for i in range(rows)]
    V = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for r in a:
            r[j], r[k] = r[k], r[j]
        for r in V:
            r[j], r[k] = r[k], r[j]

    def add_row(dst, src, c):
        # row[dst] += c * row[src]
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, c):
        for r in a:
            r[dst] += c * r[src]
        for r in V:
            r[dst] += c * r[src]

    for t in range(min(rows, cols)):
        while True:
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    x = a[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            _, pi, pj = best
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]

    return SmithDecomposition(
        U=IntegerMatrix(tuple(map(tuple, U)), rows),
        D=IntegerMatrix(tuple(map(tuple, a)), cols),
        V=IntegerMatrix(tuple(map(tuple, V)), cols),
        shape=(rows, cols),
    )


@dataclass(frozen=True)
class Solution:
    particular: ResidueVector
    kernel_basis: tuple[ResidueVector, ...]

    solvable = True


@dataclass(frozen=True)
class Insolvable:
    certificate: ResidueVector

    solvable = False


SolveOutcome = Union[Solution, Insolvable]


def _check_system(M: ResidueMatrix, b: ResidueVector):
    if M.modulus != b.modulus:
        raise ModulusMismatch(f"matrix modulus {M.modulus} != vector modulus {b.modulus}")
    if M.rows != len(b):
        raise DimensionMismatch(f"{M.rows} rows but right-hand side of length {len(b)}")


def solve_mod(M: ResidueMatrix, b: ResidueVector) -> SolveOutcome:
    """Solve ``M x = b`` over Z/(q).

    Returns a :class:`Solution` whose particular vector plus the integer span
    of ``kernel_basis`` is exactly the solution set, or an :class:`Insolvable`
    carrying ``u`` with ``u M = 0`` and ``u . b != 0`` (mod q).
    """
    _check_system(M, b)
    q = M.modulus
    rows, cols = M.shape
    aug = IntegerMatrix(
        tuple(tuple(M.entries[i]) + tuple(q * int(i == k) for k in range(rows)) for i in range(rows)),
        cols + rows,
    )
    snf = smith_normal_form(aug)
    rhs = [sum(u * x for u, x in zip(urow, b.coords)) for urow in snf.U.entries]
    diag = snf.diagonal
    # [M | qI] has full row rank, so every diagonal entry is nonzero and divides q.
    z = [0] * (cols + rows)
    for i in range(rows):
        d = diag[i]
        if rhs[i] % d:
            cert = [(q // d) * u for u in snf.U.entries[i]]
            return Insolvable(ResidueVector(tuple(cert), q))
        z[i] = rhs[i] // d
    y = [sum(v * zz for v, zz in zip(vrow, z)) for vrow in snf.V.entries]
    particular = ResidueVector(tuple(y[:cols]), q)
    kernel = []
    for j in range(rows, cols + rows):
        k = ResidueVector(tuple(snf.V.entries[i][j] for i in range(cols)), q)
        if not k.is_zero() and k not in kernel:
            kernel.append(k)
    return Solution(particular, tuple(kernel))


def verify_outcome(M: ResidueMatrix, b: ResidueVector, outcome: SolveOutcome) -> bool:
    """Recheck a solve outcome against ``M`` and ``b`` from scratch."""
    _check_system(M, b)
    q = M.modulus
    if isinstance(outcome, Solution):
        if outcome.particular.modulus != q or len(outcome.particular) != M.cols:
            return False
        if M @ outcome.particular != b:
            return False
        for k in outcome.kernel_basis:
            if k.modulus != q or len(k) != M.cols or not (M @ k).is_zero():
                return False
        return True
    if isinstance(outcome, Insolvable):
        u = outcome.certificate
        if u.modulus != q or len(u) != M.rows:
            return False
        return (M.transpose() @ u).is_zero() and u.dot(b) != 0
    return False


def in_row_space(gens: ResidueMatrix, v: ResidueVector) -> bool:
    """Whether ``v`` is a Z-combination of the rows of ``gens``."""
    return solve_mod(gens.transpose(), v).solvable


def row_space_coordinates(gens: ResidueMatrix, v: ResidueVector) -> ResidueVector | None:
    """Coefficients ``c`` with ``c @ gens == v``, or None when ``v`` is outside the span."""
    out = solve_mod(gens.transpose(), v)
    return out.particular if isinstance(out, Solution) else None
