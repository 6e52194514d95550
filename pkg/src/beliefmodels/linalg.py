"""Exact rational linear algebra over labeled coordinate spaces.

Every number is a :class:`fractions.Fraction`; floats are rejected at the
boundary. Subspaces are kept in a canonical form (the reduced row-echelon
form of a basis) so that equality of subspaces is equality of bases.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence

__all__ = [
    "LabelSet",
    "Mat",
    "Subspace",
    "AffineSet",
    "LinalgError",
    "q",
    "parse_rational",
    "format_rational",
    "vector",
    "rref",
    "kernel_basis",
    "image_basis",
    "intersect",
    "subspace_sum",
    "is_contained",
    "map_subspace",
    "solve_affine",
    "solve_affine_in",
    "factor_right",
    "lift",
    "from_row_map",
    "solve_columns",
]

Vector = tuple  # tuple[Fraction, ...]

_RATIONAL_RE = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")


class LinalgError(ValueError):
    """Shape or label mismatch between linear-algebra operands."""


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; anything else (decimals, exponents) is rejected."""
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ValueError(f"malformed rational: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(num, den)


def format_rational(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def q(x) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        return Fraction(int(x))
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


def vector(values: Iterable) -> Vector:
    return tuple(q(v) for v in values)


class LabelSet:
    """An ordered set of distinct string labels defining coordinate order."""

    __slots__ = ("_labels", "_index")

    def __init__(self, labels: Iterable[str]):
        labels = tuple(labels)
        index = {}
        for i, lab in enumerate(labels):
            if not isinstance(lab, str):
                raise TypeError(f"label must be a string, got {lab!r}")
            if lab in index:
                raise LinalgError(f"duplicate label {lab!r}")
            index[lab] = i
        self._labels = labels
        self._index = index

    @classmethod
    def numbered(cls, prefix: str, n: int) -> LabelSet:
        return cls(f"{prefix}{i + 1}" for i in range(n))

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise LinalgError(f"unknown label {label!r}") from None

    def __len__(self) -> int:
        return len(self._labels)

    def __iter__(self) -> Iterator[str]:
        return iter(self._labels)

    def __getitem__(self, i: int) -> str:
        return self._labels[i]

    def __contains__(self, label: object) -> bool:
        return label in self._index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LabelSet) and self._labels == other._labels

    def __hash__(self) -> int:
        return hash(self._labels)

    def __repr__(self) -> str:
        if len(self._labels) <= 6:
            return f"LabelSet({list(self._labels)!r})"
        return f"LabelSet([{self._labels[0]!r}, ... {len(self)} labels])"

    def concat(self, other: LabelSet) -> LabelSet:
        return LabelSet(self._labels + other._labels)


class Mat:
    """Dense exact matrix; maps R^cols to R^rows, entry (y, x) is [A e_x](y)."""

    __slots__ = ("rows", "cols", "_data", "_nz")

    def __init__(self, rows: LabelSet, cols: LabelSet, data: Sequence[Sequence]):
        if not isinstance(rows, LabelSet):
            rows = LabelSet(rows)
        if not isinstance(cols, LabelSet):
            cols = LabelSet(cols)
        if len(data) != len(rows):
            raise LinalgError(f"expected {len(rows)} rows, got {len(data)}")
        out = []
        for lab, row in zip(rows, data):
            if len(row) != len(cols):
                raise LinalgError(
                    f"row {lab!r} has length {len(row)}, expected {len(cols)}"
                )
            out.append(tuple(q(x) for x in row))
        self.rows = rows
        self.cols = cols
        self._data = tuple(out)
        self._nz = None

    # construction helpers
    @classmethod
    def _trusted(cls, rows: LabelSet, cols: LabelSet, data) -> Mat:
        obj = cls.__new__(cls)
        obj.rows = rows
        obj.cols = cols
        obj._data = tuple(tuple(r) for r in data)
        obj._nz = None
        return obj

    @classmethod
    def zeros(cls, rows: LabelSet, cols: LabelSet) -> Mat:
        z = Fraction(0)
        return cls._trusted(rows, cols, [[z] * len(cols) for _ in rows])

    @classmethod
    def identity(cls, labels: LabelSet) -> Mat:
        n = len(labels)
        one, zero = Fraction(1), Fraction(0)
        return cls._trusted(
            labels, labels, [[one if i == j else zero for j in range(n)] for i in range(n)]
        )

    @classmethod
    def column(cls, rows: LabelSet, values: Sequence, name: str = "x") -> Mat:
        return cls(rows, LabelSet([name]), [[v] for v in values])

    # access
    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    @property
    def data(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._data

    def __getitem__(self, key: tuple[str, str]) -> Fraction:
        r, c = key
        return self._data[self.rows.index(r)][self.cols.index(c)]

    def row(self, label: str) -> Vector:
        return self._data[self.rows.index(label)]

    def col(self, label: str) -> Vector:
        j = self.cols.index(label)
        return tuple(r[j] for r in self._data)

    def row_map(self) -> dict[str, Vector]:
        return dict(zip(self.rows, self._data))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Mat)
            and self.rows == other.rows
            and self.cols == other.cols
            and self._data == other._data
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def __repr__(self) -> str:
        return f"Mat({len(self.rows)}x{len(self.cols)})"

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._data for x in r)

    def _nonzeros(self):
        if self._nz is None:
            self._nz = tuple(
                tuple((j, x) for j, x in enumerate(r) if x) for r in self._data
            )
        return self._nz

    # algebra
    @property
    def T(self) -> Mat:
        return Mat._trusted(self.cols, self.rows, list(zip(*self._data)) if self._data else
                            [[] for _ in self.cols])

    def apply(self, v: Sequence) -> Vector:
        if len(v) != len(self.cols):
            raise LinalgError(f"vector of length {len(v)} for {len(self.cols)} columns")
        zero = Fraction(0)
        return tuple(sum((x * v[j] for j, x in r), zero) for r in self._nonzeros())

    def __matmul__(self, other):
        if isinstance(other, Mat):
            if self.cols != other.rows:
                raise LinalgError("inner label sets differ in matrix product")
            zero = Fraction(0)
            ncols = len(other.cols)
            other_nz = other._nonzeros()
            out = []
            for r in self._nonzeros():
                acc = [zero] * ncols
                for k, a in r:
                    for j, b in other_nz[k]:
                        acc[j] += a * b
                out.append(acc)
            return Mat._trusted(self.rows, other.cols, out)
        return self.apply(other)

    def __add__(self, other: Mat) -> Mat:
        self._check_same(other)
        return Mat._trusted(self.rows, self.cols,
                            [[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)])

    def __sub__(self, other: Mat) -> Mat:
        self._check_same(other)
        return Mat._trusted(self.rows, self.cols,
                            [[a - b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)])

    def __neg__(self) -> Mat:
        return self.scale(-1)

    def scale(self, c) -> Mat:
        c = q(c)
        return Mat._trusted(self.rows, self.cols, [[c * a for a in r] for r in self._data])

    def _check_same(self, other: Mat) -> None:
        if self.rows != other.rows or self.cols != other.cols:
            raise LinalgError("label sets differ")

    def vstack(self, other: Mat) -> Mat:
        if self.cols != other.cols:
            raise LinalgError("column labels differ in vstack")
        return Mat._trusted(self.rows.concat(other.rows), self.cols, self._data + other._data)

    def hstack(self, other: Mat) -> Mat:
        if self.rows != other.rows:
            raise LinalgError("row labels differ in hstack")
        return Mat._trusted(self.rows, self.cols.concat(other.cols),
                            [a + b for a, b in zip(self._data, other._data)])

    def select_rows(self, labels: Iterable[str]) -> Mat:
        labels = LabelSet(labels)
        return Mat._trusted(labels, self.cols, [self.row(l) for l in labels])

    def relabel(self, rows: LabelSet | None = None, cols: LabelSet | None = None) -> Mat:
        rows = self.rows if rows is None else rows
        cols = self.cols if cols is None else cols
        if len(rows) != len(self.rows) or len(cols) != len(self.cols):
            raise LinalgError("relabel must keep the shape")
        return Mat._trusted(rows, cols, self._data)

    def row_sums(self) -> Vector:
        zero = Fraction(0)
        return tuple(sum(r, zero) for r in self._data)


# --- elimination core -------------------------------------------------------

def _rref_rows(rows: list[list[Fraction]], ncols: int, limit: int | None = None) -> list[int]:
    """Row-reduce in place; returns pivot columns. Only the first ``limit``
    columns are eligible as pivots (used for augmented systems)."""
    limit = ncols if limit is None else limit
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(limit):
        if r == nrows:
            break
        p = r
        while p < nrows and not rows[p][c]:
            p += 1
        if p == nrows:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pr = rows[r]
        piv = pr[c]
        if piv != 1:
            inv = 1 / piv
            pr = [x * inv for x in pr]
            rows[r] = pr
        nz = [j for j in range(c, ncols) if pr[j]]
        for i in range(nrows):
            if i != r:
                row = rows[i]
                f = row[c]
                if f:
                    for j in nz:
                        row[j] -= f * pr[j]
        pivots.append(c)
        r += 1
    return pivots


def solve_columns(M: Sequence[Sequence[Fraction]], ncols: int,
                 rhs: Sequence[Sequence[Fraction]]) -> list[list[Fraction]] | None:
    """Solve M X = RHS column by column; free variables are set to zero.

    ``rhs`` is given as a list of right-hand-side columns. Returns the list of
    solution columns, or None when any column is inconsistent.
    """
    k = len(rhs)
    aug = [list(row) + [col[i] for col in rhs] for i, row in enumerate(M)]
    pivots = _rref_rows(aug, ncols + k, limit=ncols)
    rank = len(pivots)
    for row in aug[rank:]:
        if any(row[ncols:]):
            return None
    zero = Fraction(0)
    sols = []
    for t in range(k):
        x = [zero] * ncols
        for i, c in enumerate(pivots):
            x[c] = aug[i][ncols + t]
        sols.append(x)
    return sols


# --- subspaces --------------------------------------------------------------

class Subspace:
    """Linear subspace of R^ambient with an RREF basis (rows sorted by pivot)."""

    __slots__ = ("ambient", "basis", "pivots")

    def __init__(self, ambient: LabelSet, vectors: Iterable[Sequence] = ()):
        rows = [[q(x) for x in v] for v in vectors]
        for v in rows:
            if len(v) != len(ambient):
                raise LinalgError(
                    f"vector of length {len(v)} in ambient of dimension {len(ambient)}"
                )
        pivots = _rref_rows(rows, len(ambient))
        rows = rows[: len(pivots)]
        self.ambient = ambient
        self.pivots = tuple(pivots)
        self.basis = Mat._trusted(LabelSet.numbered("b", len(rows)), ambient, rows)

    @classmethod
    def zero(cls, ambient: LabelSet) -> Subspace:
        return cls(ambient)

    @classmethod
    def full(cls, ambient: LabelSet) -> Subspace:
        return cls(ambient, Mat.identity(ambient).data)

    @classmethod
    def span(cls, ambient: LabelSet, vectors: Iterable[Sequence]) -> Subspace:
        return cls(ambient, vectors)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    @property
    def vectors(self) -> tuple[Vector, ...]:
        return self.basis.data

    def is_zero(self) -> bool:
        return self.dim == 0

    def is_full(self) -> bool:
        return self.dim == len(self.ambient)

    def basis_columns(self) -> Mat:
        """The basis as a (ambient × dim) matrix: coordinates to vectors."""
        return self.basis.T

    def contains(self, v: Sequence) -> bool:
        if len(v) != len(self.ambient):
            raise LinalgError("vector length differs from ambient dimension")
        w = [q(x) for x in v]
        for row, p in zip(self.basis.data, self.pivots):
            f = w[p]
            if f:
                for j, x in enumerate(row):
                    if x:
                        w[j] -= f * x
        return not any(w)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Subspace)
            and self.ambient == other.ambient
            and self.basis.data == other.basis.data
        )

    def __hash__(self) -> int:
        return hash((self.ambient, self.basis.data))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={len(self.ambient)})"


class AffineSet:
    """The set {point + d : d in direction}."""

    __slots__ = ("ambient", "point", "direction")

    def __init__(self, point: Sequence, direction: Subspace):
        if len(point) != len(direction.ambient):
            raise LinalgError("point length differs from ambient dimension")
        self.ambient = direction.ambient
        self.point = vector(point)
        self.direction = direction

    def contains(self, x: Sequence) -> bool:
        if len(x) != len(self.ambient):
            raise LinalgError("vector length differs from ambient dimension")
        return self.direction.contains([q(a) - b for a, b in zip(x, self.point)])

    @property
    def dim(self) -> int:
        return self.direction.dim

    def same_set(self, other: AffineSet) -> bool:
        return self.direction == other.direction and self.contains(other.point)

    def __repr__(self) -> str:
        return f"AffineSet(dim={self.dim}, ambient={len(self.ambient)})"


def _check_ambient(U: Subspace, W: Subspace) -> None:
    if U.ambient != W.ambient:
        raise LinalgError("subspaces live in different ambient spaces")


# --- operations -------------------------------------------------------------

def rref(A: Mat) -> tuple[Mat, int]:
    rows = [list(r) for r in A.data]
    pivots = _rref_rows(rows, len(A.cols))
    return Mat._trusted(A.rows, A.cols, rows), len(pivots)


def kernel_basis(A: Mat) -> Subspace:
    rows = [list(r) for r in A.data]
    n = len(A.cols)
    pivots = _rref_rows(rows, n)
    pivot_set = set(pivots)
    zero, one = Fraction(0), Fraction(1)
    vecs = []
    for free in range(n):
        if free in pivot_set:
            continue
        v = [zero] * n
        v[free] = one
        for i, p in enumerate(pivots):
            v[p] = -rows[i][free]
        vecs.append(v)
    return Subspace(A.cols, vecs)


def image_basis(A: Mat) -> Subspace:
    return Subspace(A.rows, A.T.data)


def intersect(U: Subspace, W: Subspace) -> Subspace:
    """Zassenhaus: reduce [[U, U], [W, 0]]; rows with zero left half span U ∩ W."""
    _check_ambient(U, W)
    n = len(U.ambient)
    zero = Fraction(0)
    block = [list(u) + list(u) for u in U.vectors]
    block += [list(w) + [zero] * n for w in W.vectors]
    _rref_rows(block, 2 * n)
    vecs = [row[n:] for row in block if not any(row[:n]) and any(row[n:])]
    return Subspace(U.ambient, vecs)


def subspace_sum(U: Subspace, W: Subspace) -> Subspace:
    _check_ambient(U, W)
    return Subspace(U.ambient, U.vectors + W.vectors)


def is_contained(U: Subspace, W: Subspace) -> bool:
    _check_ambient(U, W)
    return all(W.contains(u) for u in U.vectors)


def map_subspace(A: Mat, U: Subspace) -> Subspace:
    if U.ambient != A.cols:
        raise LinalgError("subspace ambient differs from the map's domain")
    return Subspace(A.rows, [A.apply(u) for u in U.vectors])


def solve_affine(A: Mat, b: Sequence) -> AffineSet | None:
    if len(b) != len(A.rows):
        raise LinalgError(f"right-hand side of length {len(b)} for {len(A.rows)} rows")
    sols = solve_columns(A.data, len(A.cols), [vector(b)])
    if sols is None:
        return None
    return AffineSet(sols[0], kernel_basis(A))


def solve_affine_in(A: Mat, b: Sequence, V: Subspace) -> AffineSet | None:
    """Solutions of A x = b with x in V, via x = Basis_V c."""
    if V.ambient != A.cols:
        raise LinalgError("subspace ambient differs from the map's domain")
    if len(b) != len(A.rows):
        raise LinalgError(f"right-hand side of length {len(b)} for {len(A.rows)} rows")
    K = V.basis_columns()
    AK = A @ K
    sols = solve_columns(AK.data, len(AK.cols), [vector(b)])
    if sols is None:
        return None
    point = K.apply(sols[0])
    direction = map_subspace(K, kernel_basis(AK))
    return AffineSet(point, direction)


def factor_right(A: Mat, B: Mat) -> Mat | None:
    """Some Z with Z·B = A (exists iff ker B ⊆ ker A), else None."""
    if A.cols != B.cols:
        raise LinalgError("factor_right needs equal column labels")
    # B^T Z^T = A^T, one right-hand side per row of A
    sols = solve_columns(B.T.data, len(B.rows), A.data)
    if sols is None:
        return None
    return Mat._trusted(A.rows, B.rows, sols)


def lift(A: Mat, B: Mat) -> Mat | None:
    """Some C with B·C = A (exists iff im A ⊆ im B), else None."""
    if A.rows != B.rows:
        raise LinalgError("lift needs equal row labels")
    sols = solve_columns(B.data, len(B.cols), A.T.data)
    if sols is None:
        return None
    # sols[t] is column t of C
    return Mat._trusted(B.cols, A.cols, [list(r) for r in zip(*sols)] if sols
                        else [[] for _ in B.cols])


def from_row_map(rows: LabelSet, cols: LabelSet,
                 f: Mapping[str, Sequence] | Callable[[str], Sequence]) -> Mat:
    get = f.__getitem__ if isinstance(f, Mapping) else f
    data = []
    for lab in rows:
        v = get(lab)
        if len(v) != len(cols):
            raise LinalgError(f"row {lab!r} has length {len(v)}, expected {len(cols)}")
        data.append(v)
    return Mat(rows, cols, data)
