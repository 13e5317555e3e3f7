"""Exact linear algebra over Q or Q(zeta_M).

Two representations are used throughout the package:

* sparse vectors: dict {index: coefficient}, zero entries absent;
* dense matrices: list of row lists.

All routines are field-generic; they only use +, -, *, / and truth testing
of coefficients.
"""

from __future__ import annotations


def vec_add(u: dict, v: dict) -> dict:
    out = dict(u)
    for k, c in v.items():
        s = out.get(k)
        s = c if s is None else s + c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def vec_scale(u: dict, c) -> dict:
    if not c:
        return {}
    return {k: c * x for k, x in u.items()}


def vec_axpy(out: dict, c, v: dict) -> None:
    """In place: out += c * v."""
    if not c:
        return
    for k, x in v.items():
        s = out.get(k)
        s = c * x if s is None else s + c * x
        if s:
            out[k] = s
        else:
            out.pop(k, None)


def mat_apply(mat: dict, vec: dict) -> dict:
    """Apply a column-sparse matrix {col: {row: c}} to a sparse vector."""
    out: dict = {}
    for col, c in vec.items():
        column = mat.get(col)
        if column:
            vec_axpy(out, c, column)
    return out


def mat_compose(a: dict, b: dict) -> dict:
    """Column-sparse composition a o b (apply b first)."""
    out = {}
    for col, column in b.items():
        img = mat_apply(a, column)
        if img:
            out[col] = img
    return out


def mat_add(a: dict, b: dict) -> dict:
    out = {c: dict(col) for c, col in a.items()}
    for c, col in b.items():
        tgt = out.setdefault(c, {})
        for r, x in col.items():
            s = tgt.get(r)
            s = x if s is None else s + x
            if s:
                tgt[r] = s
            else:
                tgt.pop(r, None)
        if not tgt:
            out.pop(c)
    return out


def mat_scale(a: dict, c) -> dict:
    if not c:
        return {}
    return {col: {r: c * x for r, x in column.items()} for col, column in a.items()}


def mat_transpose(a: dict) -> dict:
    out: dict = {}
    for col, column in a.items():
        for row, x in column.items():
            out.setdefault(row, {})[col] = x
    return out


class Echelon:
    """Incremental sparse row echelon over a field.

    Rows are reduced against stored pivot rows; pivot choice is the smallest
    index in a row under the optional coordinate ordering `key`.
    """

    def __init__(self, key=None):
        self.pivots: dict = {}   # pivot index -> normalized row
        self.key = key or (lambda i: i)

    def _reduce(self, row: dict) -> dict:
        row = dict(row)
        while row:
            p = min(row, key=self.key)
            piv = self.pivots.get(p)
            if piv is None:
                return row
            vec_axpy(row, -row[p], piv)
        return row

    def add(self, row: dict) -> bool:
        """Insert a row; returns True if the rank increased."""
        row = self._reduce(row)
        if not row:
            return False
        p = min(row, key=self.key)
        inv = row[p]
        self.pivots[p] = {k: c / inv for k, c in row.items()}
        return True

    def reduce(self, row: dict) -> dict:
        """Remainder of a row after reduction (row mod the span)."""
        return self._reduce(row)

    def reduce_full(self, row: dict) -> dict:
        """Canonical representative modulo the span: eliminates every pivot
        coordinate.  Pivot rows have their minimum at the pivot, so each
        elimination step strictly raises the least unreduced pivot."""
        row = dict(row)
        while True:
            hit = None
            for k in row:
                if k in self.pivots and (hit is None or self.key(k) < self.key(hit)):
                    hit = k
            if hit is None:
                return row
            vec_axpy(row, -row[hit], self.pivots[hit])

    def contains(self, row: dict) -> bool:
        return not self._reduce(row)

    @property
    def rank(self) -> int:
        return len(self.pivots)


def sparse_rank(rows, key=None) -> int:
    ech = Echelon(key=key)
    for r in rows:
        ech.add(r)
    return ech.rank


def dense_to_rows(mat) -> list:
    return [{j: x for j, x in enumerate(row) if x} for row in mat]


def mat_inverse(mat, field):
    """Inverse of a dense square matrix by Gauss-Jordan; raises if singular."""
    n = len(mat)
    zero, one = field.zero, field.one
    a = [list(row) + [one if i == j else zero for j in range(n)]
         for i, row in enumerate(mat)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if a[r][col]:
                piv = r
                break
        if piv is None:
            raise ValueError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = one / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                c = a[r][col]
                a[r] = [x - c * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def solve_dense(mat, rhs, field):
    """Solve mat * x = rhs for dense square mat and a single rhs vector."""
    n = len(mat)
    zero = field.zero
    a = [list(row) + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if a[r][col]:
                piv = r
                break
        if piv is None:
            raise ValueError("singular system")
        a[col], a[piv] = a[piv], a[col]
        inv = field.one / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                c = a[r][col]
                a[r] = [x - c * y for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


def solve_rectangular(cols, rhs, field):
    """Express rhs as a combination of the given sparse columns.

    cols: list of sparse vectors; rhs: sparse vector.  Returns the list of
    coefficients, or raises ValueError if rhs is not in the span.
    """
    ech = Echelon()
    # augment each column with a tracking coordinate ("which combination")
    n = len(cols)
    tagged = []
    for i, c in enumerate(cols):
        row = {("c", k): v for k, v in c.items()}
        row[("t", i)] = field.one
        tagged.append(row)

    def key(ix):
        return (0, ix[1]) if ix[0] == "c" else (1, ix[1])

    ech2 = Echelon(key=key)
    for row in tagged:
        ech2.add(row)
    target = {("c", k): v for k, v in rhs.items()}
    rem = ech2.reduce(target)
    if any(k[0] == "c" for k in rem):
        raise ValueError("vector not in span")
    coeffs = [field.zero] * n
    for k, v in rem.items():
        coeffs[k[1]] = -v
    return coeffs


def nullspace_dense(mat, field):
    """Basis of the right nullspace of a dense matrix (list of rows)."""
    if not mat:
        return []
    ncols = len(mat[0])
    zero, one = field.zero, field.one
    a = [list(row) for row in mat]
    nrows = len(a)
    pivots = []
    r = 0
    for col in range(ncols):
        piv = None
        for rr in range(r, nrows):
            if a[rr][col]:
                piv = rr
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = one / a[r][col]
        a[r] = [x * inv for x in a[r]]
        for rr in range(nrows):
            if rr != r and a[rr][col]:
                c = a[rr][col]
                a[rr] = [x - c * y for x, y in zip(a[rr], a[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for i, col in enumerate(pivots):
            v[col] = -a[i][f]
        basis.append(v)
    return basis
