"""Dense exact linear algebra over the rings in heckesym.rings.

Everything is sequential and deterministic: fixed pivot rules, canonical
normal forms (leading-one echelon over fields, nonnegative divisibility
chain for Smith form). Over Q the eliminations run on denominator-cleared
integer rows with gcd normalization, which is ordinary exact elimination,
just faster than Fraction arithmetic.

Row-vector convention throughout: module elements are rows, maps act by
right multiplication, so the matrix of "f then g" is M_f * M_g.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .rings import (
    QQ,
    ZZ,
    ExactRing,
    IntegerRing,
    PrimeField,
    QuotientExtension,
    RationalField,
    ShapeError,
    UnsupportedRingError,
    xgcd,
)


class InternalInvariantError(RuntimeError):
    """A structural self-check failed; indicates a bug, not bad input."""


class NotInSpanError(ValueError):
    pass


class Matrix:
    __slots__ = ("ring", "nrows", "ncols", "rows")

    def __init__(self, ring, rows, ncols=None):
        rows = [list(r) for r in rows]
        if rows:
            ncols = len(rows[0]) if ncols is None else ncols
            for r in rows:
                if len(r) != ncols:
                    raise ShapeError("ragged rows")
        elif ncols is None:
            raise ShapeError("empty matrix needs an explicit column count")
        self.ring = ring
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    # -- constructors ----------------------------------------------------
    @classmethod
    def identity(cls, ring, n):
        one, zero = ring.one, ring.zero
        return cls(ring, [[one if i == j else zero for j in range(n)] for i in range(n)], n)

    @classmethod
    def zero(cls, ring, nrows, ncols):
        z = ring.zero
        return cls(ring, [[z] * ncols for _ in range(nrows)], ncols)

    # -- basics ----------------------------------------------------------
    def copy(self):
        return Matrix(self.ring, self.rows, self.ncols)

    def transpose(self):
        return Matrix(self.ring, [list(col) for col in zip(*self.rows)] if self.rows else [], self.nrows)

    def stack(self, other):
        if other.ncols != self.ncols:
            raise ShapeError("stack: column counts differ")
        return Matrix(self.ring, self.rows + other.rows, self.ncols)

    def hstack(self, other):
        if other.nrows != self.nrows:
            raise ShapeError("hstack: row counts differ")
        return Matrix(self.ring, [a + b for a, b in zip(self.rows, other.rows)], self.ncols + other.ncols)

    def map_ring(self, ring, convert):
        return Matrix(ring, [[convert(x) for x in row] for row in self.rows], self.ncols)

    def is_zero(self):
        rz = self.ring.is_zero
        return all(rz(x) for row in self.rows for x in row)

    def tuples(self):
        return tuple(tuple(r) for r in self.rows)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and other.ncols == self.ncols
            and other.rows == self.rows
        )

    def __repr__(self):
        return "Matrix(%s, %dx%d)" % (self.ring.kind, self.nrows, self.ncols)

    # -- arithmetic --------------------------------------------------------
    def add(self, other):
        self._same_shape(other)
        if isinstance(self.ring, QuotientExtension):
            f = self.ring.add
            return Matrix(self.ring, [[f(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)
        if isinstance(self.ring, PrimeField):
            p = self.ring.p
            return Matrix(self.ring, [[(a + b) % p for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)
        return Matrix(self.ring, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def sub(self, other):
        return self.add(other.neg())

    def neg(self):
        if isinstance(self.ring, QuotientExtension):
            f = self.ring.neg
            return Matrix(self.ring, [[f(a) for a in r] for r in self.rows], self.ncols)
        if isinstance(self.ring, PrimeField):
            p = self.ring.p
            return Matrix(self.ring, [[-a % p for a in r] for r in self.rows], self.ncols)
        return Matrix(self.ring, [[-a for a in r] for r in self.rows], self.ncols)

    def scale(self, c):
        ring = self.ring
        if isinstance(ring, QuotientExtension):
            return Matrix(ring, [[ring.mul(c, a) for a in r] for r in self.rows], self.ncols)
        if isinstance(ring, PrimeField):
            p = ring.p
            return Matrix(ring, [[c * a % p for a in r] for r in self.rows], self.ncols)
        return Matrix(ring, [[c * a for a in r] for r in self.rows], self.ncols)

    def mul(self, other):
        if self.ncols != other.nrows:
            raise ShapeError("mul: %dx%d by %dx%d" % (self.nrows, self.ncols, other.nrows, other.ncols))
        ring = self.ring
        bt = list(zip(*other.rows)) if other.rows else [()] * other.ncols
        if isinstance(ring, QuotientExtension):
            add, mul, zero = ring.add, ring.mul, ring.zero
            out = []
            for row in self.rows:
                orow = []
                for col in bt:
                    acc = zero
                    for a, b in zip(row, col):
                        acc = add(acc, mul(a, b))
                    orow.append(acc)
                out.append(orow)
            return Matrix(ring, out, other.ncols)
        if isinstance(ring, PrimeField):
            p = ring.p
            out = [[sum(a * b for a, b in zip(row, col)) % p for col in bt] for row in self.rows]
            return Matrix(ring, out, other.ncols)
        out = [[sum(a * b for a, b in zip(row, col)) for col in bt] for row in self.rows]
        return Matrix(ring, out, other.ncols)

    def __mul__(self, other):
        return self.mul(other)

    def act_on_row(self, vec):
        """vec * self for a plain list vec."""
        if len(vec) != self.nrows:
            raise ShapeError("act_on_row: length mismatch")
        ring = self.ring
        if isinstance(ring, QuotientExtension):
            add, mul = ring.add, ring.mul
            out = [ring.zero] * self.ncols
            for v, row in zip(vec, self.rows):
                if not ring.is_zero(v):
                    out = [add(o, mul(v, a)) for o, a in zip(out, row)]
            return out
        out = [0] * self.ncols
        for v, row in zip(vec, self.rows):
            if v:
                out = [o + v * a for o, a in zip(out, row)]
        if isinstance(ring, PrimeField):
            p = ring.p
            out = [o % p for o in out]
        elif isinstance(ring, RationalField):
            out = [Fraction(o) for o in out]
        return out

    def _same_shape(self, other):
        if other.nrows != self.nrows or other.ncols != self.ncols:
            raise ShapeError("shape mismatch")


# ---------------------------------------------------------------------------
# elimination cores
# ---------------------------------------------------------------------------


def _row_primitive(row):
    """Divide an integer row by the gcd of its entries (in place)."""
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return row
    if g > 1:
        for i, x in enumerate(row):
            row[i] = x // g
    return row


def _gauss_jordan_int(rows, ncols):
    """Full Gauss-Jordan on integer rows (columns beyond ncols ride along).

    Pivot rule: leftmost column, then smallest |entry|, then lowest row
    index. Rows stay integral and gcd-normalized; pivots end up positive.
    Returns the list of (row, col) pivot positions.
    """
    pivots = []
    rank = 0
    nrows = len(rows)
    for c in range(ncols):
        best = -1
        bestabs = 0
        for r in range(rank, nrows):
            v = rows[r][c]
            if v:
                a = -v if v < 0 else v
                if best < 0 or a < bestabs:
                    best, bestabs = r, a
                    if a == 1:
                        break
        if best < 0:
            continue
        rows[rank], rows[best] = rows[best], rows[rank]
        prow = rows[rank]
        if prow[c] < 0:
            rows[rank] = prow = [-x for x in prow]
        p = prow[c]
        for r in range(nrows):
            if r == rank:
                continue
            v = rows[r][c]
            if v:
                if p == 1:
                    rows[r] = [x - v * y for x, y in zip(rows[r], prow)]
                else:
                    g = gcd(p, v)
                    a, b = p // g, v // g
                    rows[r] = _row_primitive([a * x - b * y for x, y in zip(rows[r], prow)])
        pivots.append((rank, c))
        rank += 1
    return pivots


def _gauss_jordan_field(ring, rows, ncols):
    """Generic leading-one Gauss-Jordan using ring operations."""
    pivots = []
    rank = 0
    nrows = len(rows)
    is_zero, inv, mul, sub = ring.is_zero, ring.inv, ring.mul, ring.sub
    for c in range(ncols):
        best = -1
        for r in range(rank, nrows):
            if not is_zero(rows[r][c]):
                best = r
                break
        if best < 0:
            continue
        rows[rank], rows[best] = rows[best], rows[rank]
        piv = rows[rank][c]
        if piv != ring.one:
            pinv = inv(piv)
            rows[rank] = [mul(pinv, x) for x in rows[rank]]
        prow = rows[rank]
        for r in range(nrows):
            if r != rank:
                v = rows[r][c]
                if not is_zero(v):
                    rows[r] = [sub(x, mul(v, y)) for x, y in zip(rows[r], prow)]
        pivots.append((rank, c))
        rank += 1
    return pivots


def _clear_denominators(row):
    """Scale a row of Fractions/ints to a primitive integer row; returns row."""
    d = 1
    for x in row:
        if isinstance(x, Fraction):
            d = d * x.denominator // gcd(d, x.denominator)
    if d == 1:
        out = [x.numerator if isinstance(x, Fraction) else x for x in row]
    else:
        out = [
            (x.numerator * (d // x.denominator)) if isinstance(x, Fraction) else x * d
            for x in row
        ]
    return _row_primitive(out)


def _field_for(ring):
    if isinstance(ring, IntegerRing):
        return QQ
    if ring.is_field:
        return ring
    raise UnsupportedRingError("field elimination over %s" % ring.kind)


def rref(mat, with_transform=False):
    """Reduced row echelon form over the fraction field.

    Returns (R, pivots) or (R, pivots, T) with T * mat == R exactly.
    Pivot entries are 1; pivot columns are cleared elsewhere.
    """
    field = _field_for(mat.ring)
    n = mat.nrows
    if isinstance(field, RationalField):
        work = []
        scales = []
        for i, row in enumerate(mat.rows):
            cleaned = _clear_denominators(row)
            if with_transform:
                aug = [0] * n
                aug[i] = 1
                cleaned = cleaned + aug
                scales.append(_denominator_scale(row))
            work.append(cleaned)
        pivots = _gauss_jordan_int(work, mat.ncols)
        rank = len(pivots)
        rrows, trows = [], []
        for r, c in pivots:
            p = work[r][c]
            rrows.append([Fraction(x, p) for x in work[r][: mat.ncols]])
            if with_transform:
                trows.append([Fraction(x, p) * s for x, s in zip(work[r][mat.ncols :], scales)])
        for r in range(rank, len(work)):
            rrows.append([Fraction(0)] * mat.ncols)
            if with_transform:
                trows.append([Fraction(x) * s for x, s in zip(work[r][mat.ncols :], scales)])
        R = Matrix(QQ, rrows, mat.ncols)
        pivcols = tuple(c for _, c in pivots)
        if with_transform:
            return R, pivcols, Matrix(QQ, trows, n)
        return R, pivcols
    # generic field
    one, zero = field.one, field.zero
    if with_transform:
        work = [
            list(row) + [one if j == i else zero for j in range(n)]
            for i, row in enumerate(mat.rows)
        ]
    else:
        work = [list(row) for row in mat.rows]
    pivots = _gauss_jordan_field(field, work, mat.ncols)
    R = Matrix(field, [w[: mat.ncols] for w in work], mat.ncols)
    pivcols = tuple(c for _, c in pivots)
    if with_transform:
        return R, pivcols, Matrix(field, [w[mat.ncols :] for w in work], n)
    return R, pivcols


def _denominator_scale(row):
    d = 1
    for x in row:
        if isinstance(x, Fraction):
            d = d * x.denominator // gcd(d, x.denominator)
    g = 0
    for x in row:
        if x:
            num = x.numerator * (d // x.denominator) if isinstance(x, Fraction) else x * d
            g = gcd(g, num)
            if g == 1:
                break
    if g == 0:
        return 1
    return Fraction(d, g)


def matrix_rank(mat):
    if isinstance(mat.ring, IntegerRing) or mat.ring.is_field:
        return len(rref(mat)[1])
    raise UnsupportedRingError("rank over %s" % mat.ring.kind)


def right_kernel(mat):
    """Rows of the result form a basis of {v : mat * v^T = 0} over the field."""
    field = _field_for(mat.ring)
    R, pivots = rref(mat)
    pivset = set(pivots)
    free = [c for c in range(mat.ncols) if c not in pivset]
    rows = []
    for f in free:
        v = [field.zero] * mat.ncols
        v[f] = field.one
        for r, c in zip(range(len(pivots)), pivots):
            v[c] = field.neg(R.rows[r][f])
        rows.append(v)
    return Matrix(field, rows, mat.ncols)


def left_kernel(mat):
    """Basis of {x : x * mat = 0}.

    Over a field: canonical rows (integer-primitive over Q). Over Z: basis
    of the full (saturated) integer kernel lattice, Hermite-normalized.
    """
    if isinstance(mat.ring, IntegerRing):
        H, U = hermite_normal_form(mat, with_transform=True)
        ker = [U.rows[r] for r in range(mat.nrows) if all(x == 0 for x in H.rows[r])]
        if not ker:
            return Matrix(ZZ, [], mat.nrows)
        K = hermite_normal_form(Matrix(ZZ, ker, mat.nrows))
        rows = [r for r in K.rows if any(x != 0 for x in r)]
        return Matrix(ZZ, rows, mat.nrows)
    field = _field_for(mat.ring)
    R, pivots, T = rref(mat, with_transform=True)
    rows = []
    for r in range(mat.nrows):
        if r >= len(pivots):
            row = T.rows[r]
            if isinstance(field, RationalField):
                row = [Fraction(x) for x in _clear_denominators(row)]
            rows.append(row)
    out = Matrix(field, rows, mat.nrows)
    if out.nrows:
        out, _ = rref(out)
        out = Matrix(field, [r for r in out.rows if any(not field.is_zero(x) for x in r)], mat.nrows)
    return out


def echelon_and_kernel(mat):
    """Public pair: (reduced echelon form, basis of the right kernel)."""
    R, pivots = rref(mat)
    K = right_kernel(mat)
    if len(pivots) + K.nrows != mat.ncols:
        raise InternalInvariantError("rank-nullity violated")
    return R, K


# ---------------------------------------------------------------------------
# integer normal forms
# ---------------------------------------------------------------------------


def _require_zz(mat, what):
    if not isinstance(mat.ring, IntegerRing):
        raise UnsupportedRingError("%s requires the integers, got %s" % (what, mat.ring.kind))


def hermite_normal_form(mat, with_transform=False):
    """Row Hermite normal form H with positive pivots, entries above
    reduced into [0, pivot). Optionally also U (unimodular) with U*A = H."""
    _require_zz(mat, "hermite_normal_form")
    n, m = mat.nrows, mat.ncols
    rows = [list(r) for r in mat.rows]
    urows = [[1 if j == i else 0 for j in range(n)] for i in range(n)]
    rank = 0
    for c in range(m):
        # make all entries below `rank` in column c zero using xgcd combos
        nz = [r for r in range(rank, n) if rows[r][c]]
        if not nz:
            continue
        r0 = nz[0]
        for r in nz[1:]:
            a, b = rows[r0][c], rows[r][c]
            g, x, y = xgcd(a, b)
            aa, bb = a // g, b // g
            new0 = [x * u + y * v for u, v in zip(rows[r0], rows[r])]
            newr = [bb * u - aa * v for u, v in zip(rows[r0], rows[r])]
            rows[r0], rows[r] = new0, newr
            nu0 = [x * u + y * v for u, v in zip(urows[r0], urows[r])]
            nur = [bb * u - aa * v for u, v in zip(urows[r0], urows[r])]
            urows[r0], urows[r] = nu0, nur
        rows[rank], rows[r0] = rows[r0], rows[rank]
        urows[rank], urows[r0] = urows[r0], urows[rank]
        if rows[rank][c] < 0:
            rows[rank] = [-x for x in rows[rank]]
            urows[rank] = [-x for x in urows[rank]]
        p = rows[rank][c]
        for r in range(rank):
            q = rows[r][c] // p
            if q:
                rows[r] = [u - q * v for u, v in zip(rows[r], rows[rank])]
                urows[r] = [u - q * v for u, v in zip(urows[r], urows[rank])]
        rank += 1
    H = Matrix(ZZ, rows, m)
    if with_transform:
        return H, Matrix(ZZ, urows, n)
    return H


def _snf_core(mat, want_w_inv=False):
    """Smith form D = U*A*W with diag divisibility chain, d_i >= 0."""
    n, m = mat.nrows, mat.ncols
    a = [list(r) for r in mat.rows]
    U = [[1 if j == i else 0 for j in range(n)] for i in range(n)]
    W = [[1 if j == i else 0 for j in range(m)] for i in range(m)]
    Winv = [[1 if j == i else 0 for j in range(m)] for i in range(m)] if want_w_inv else None

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def addmul_row(i, j, q):  # row_i += q * row_j
        a[i] = [u + q * v for u, v in zip(a[i], a[j])]
        U[i] = [u + q * v for u, v in zip(U[i], U[j])]

    def neg_row(i):
        a[i] = [-u for u in a[i]]
        U[i] = [-u for u in U[i]]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in W:
            row[i], row[j] = row[j], row[i]
        if Winv is not None:
            Winv[i], Winv[j] = Winv[j], Winv[i]

    def addmul_col(i, j, q):  # col_i += q * col_j ; Winv row_j -= q * row_i
        for row in a:
            row[i] += q * row[j]
        for row in W:
            row[i] += q * row[j]
        if Winv is not None:
            Winv[j] = [u - q * v for u, v in zip(Winv[j], Winv[i])]

    t = 0
    bound = min(n, m)
    while t < bound:
        # locate the nonzero entry of least magnitude in the trailing block
        piv = None
        pivabs = 0
        for i in range(t, n):
            row = a[i]
            for j in range(t, m):
                v = row[j]
                if v:
                    av = -v if v < 0 else v
                    if piv is None or av < pivabs:
                        piv, pivabs = (i, j), av
                        if av == 1:
                            break
            if piv is not None and pivabs == 1:
                break
        if piv is None:
            break
        if piv[0] != t:
            swap_rows(t, piv[0])
        if piv[1] != t:
            swap_cols(t, piv[1])
        while True:
            # clear column t
            dirty = False
            for i in range(t + 1, n):
                v = a[i][t]
                if v:
                    q = v // a[t][t]
                    addmul_row(i, t, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        dirty = True
            if dirty:
                continue
            # clear row t
            for j in range(t + 1, m):
                v = a[t][j]
                if v:
                    q = v // a[t][t]
                    addmul_col(j, t, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        dirty = True
            if dirty:
                continue
            break
        if a[t][t] < 0:
            neg_row(t)
        # enforce the divisibility chain
        d = a[t][t]
        culprit = None
        for i in range(t + 1, n):
            for j in range(t + 1, m):
                if a[i][j] % d:
                    culprit = i
                    break
            if culprit is not None:
                break
        if culprit is not None:
            addmul_row(t, culprit, 1)
            continue
        t += 1
    D = Matrix(ZZ, a, m)
    if want_w_inv:
        return D, Matrix(ZZ, U, n), Matrix(ZZ, W, m), Matrix(ZZ, Winv, m)
    return D, Matrix(ZZ, U, n), Matrix(ZZ, W, m)


def smith_normal_form(mat):
    """Return (D, U, W) with U*A*W = D, verified by multiplication.

    Diagonal entries are nonnegative and form a divisibility chain. The
    input is Hermite-reduced first: the HNF's modular reduction keeps the
    entries small, where diagonalizing raw relation matrices directly can
    blow up the intermediate integers by many orders of magnitude.
    """
    _require_zz(mat, "smith_normal_form")
    H, U1 = hermite_normal_form(mat, with_transform=True)
    D, U2, W = _snf_core(H)
    U = U2.mul(U1)
    if U.mul(mat).mul(W) != D:
        raise InternalInvariantError("Smith form transform check failed")
    diag = [D.rows[i][i] for i in range(min(D.nrows, D.ncols))]
    for x, y in zip(diag, diag[1:]):
        if y and (x == 0 or y % x):
            raise InternalInvariantError("Smith diagonal not a divisibility chain")
    return D, U, W


# ---------------------------------------------------------------------------
# prepared row spaces
# ---------------------------------------------------------------------------


class RowBasis:
    """Row space of a matrix, prepared for membership and expression."""

    def __init__(self, mat):
        self.mat = mat
        self.ring = mat.ring
        if isinstance(mat.ring, IntegerRing):
            self._H, self._U = hermite_normal_form(mat, with_transform=True)
            self._pivots = _hnf_pivots(self._H)
        else:
            self._R, pivcols, self._T = rref(mat, with_transform=True)
            self._pivots = list(zip(range(len(pivcols)), pivcols))
        self.rank = len(self._pivots)

    def contains(self, vec):
        try:
            self.express(vec)
            return True
        except NotInSpanError:
            return False

    def express(self, vec):
        """Coefficients c with c * rows(mat) == vec, else NotInSpanError."""
        if len(vec) != self.mat.ncols:
            raise ShapeError("express: length mismatch")
        if isinstance(self.ring, IntegerRing):
            v = list(vec)
            coeffs = [0] * self.mat.nrows
            for r, c in self._pivots:
                p = self._H.rows[r][c]
                q, rem = divmod(v[c], p)
                if rem:
                    raise NotInSpanError("not in the lattice")
                if q:
                    v = [x - q * y for x, y in zip(v, self._H.rows[r])]
                    coeffs = [x + q * y for x, y in zip(coeffs, self._U.rows[r])]
            if any(v):
                raise NotInSpanError("not in the lattice")
            return coeffs
        field = self.ring if self.ring.is_field else QQ
        sub, mul, is_zero = field.sub, field.mul, field.is_zero
        v = [field.of_int(x) if isinstance(x, int) and not isinstance(field, RationalField) else x for x in vec]
        cs = []
        for r, c in self._pivots:
            coef = v[c]
            cs.append(coef)
            if not is_zero(coef):
                v = [sub(x, mul(coef, y)) for x, y in zip(v, self._R.rows[r])]
        if any(not is_zero(x) for x in v):
            raise NotInSpanError("not in the row space")
        coeffs = [field.zero] * self.mat.nrows
        for (r, _c), coef in zip(self._pivots, cs):
            if not is_zero(coef):
                coeffs = [field.add(x, mul(coef, y)) for x, y in zip(coeffs, self._T.rows[r])]
        return coeffs


def _hnf_pivots(H):
    pivots = []
    col = -1
    for r, row in enumerate(H.rows):
        for c in range(col + 1, len(row)):
            if row[c]:
                pivots.append((r, c))
                col = c
                break
        else:
            break
    return pivots


# ---------------------------------------------------------------------------
# finitely presented modules and maps
# ---------------------------------------------------------------------------


class FPModule:
    """Quotient of a free module R^ngens by the row span of `relations`.

    Over a field the normal form is the reduced echelon basis of the
    relations; over Z it is the Smith form (diagonal invariant factors).
    """

    def __init__(self, ring, ngens, relations=None):
        if ngens < 0:
            raise ShapeError("negative generator count")
        if relations is None:
            relations = Matrix(ring, [], ngens)
        if relations.ncols != ngens:
            raise ShapeError("relations have %d columns, expected %d" % (relations.ncols, ngens))
        if not (isinstance(ring, IntegerRing) or ring.is_field):
            raise UnsupportedRingError("presentations require a field or the integers")
        self.ring = ring
        self.ngens = ngens
        self.relations = relations
        self._normalized = False

    def _normalize(self):
        if self._normalized:
            return
        if isinstance(self.ring, IntegerRing):
            # Hermite-reduce first: same row lattice, so the same quotient,
            # but with entries the diagonalization can digest
            hnf = hermite_normal_form(self.relations)
            reduced = Matrix(ZZ, [list(r) for r in hnf.rows if any(r)], self.ngens)
            D, _U, W, Winv = _snf_core(reduced, want_w_inv=True)
            diag = [D.rows[i][i] for i in range(min(D.nrows, D.ncols))]
            diag += [0] * (self.ngens - len(diag))
            self._diag = diag
            self._W = W
            self._Winv = Winv
        else:
            field = self.ring
            R, pivcols = rref(self.relations)
            pivset = set(pivcols)
            self._free = [c for c in range(self.ngens) if c not in pivset]
            self._pivot_tails = []
            for r, c in enumerate(pivcols):
                tail = [R.rows[r][f] for f in self._free]
                self._pivot_tails.append((c, tail))
        self._normalized = True

    # -- structure -------------------------------------------------------
    def rank(self):
        self._normalize()
        if isinstance(self.ring, IntegerRing):
            return sum(1 for d in self._diag if d == 0)
        return len(self._free)

    def dim(self):
        if isinstance(self.ring, IntegerRing):
            raise UnsupportedRingError("dim is a field notion; use rank/invariants over Z")
        return self.rank()

    def invariants(self):
        """Diagonal of the Smith form of the relations (Z only)."""
        if not isinstance(self.ring, IntegerRing):
            return ()
        self._normalize()
        return tuple(self._diag)

    def torsion(self):
        return tuple(d for d in self.invariants() if d > 1)

    # -- elements ----------------------------------------------------------
    def reduce(self, vec):
        """Canonical coordinates of an ambient row vector in the quotient.

        Field: coordinates on the free (non-pivot) generator positions.
        Z: Smith coordinates, each reduced mod its invariant factor.
        """
        if len(vec) != self.ngens:
            raise ShapeError("reduce: length mismatch")
        self._normalize()
        if isinstance(self.ring, IntegerRing):
            y = self._W.act_on_row(list(vec))
            return tuple(v % d if d else v for v, d in zip(y, self._diag))
        field = self.ring
        coords = [vec[f] for f in self._free]
        if isinstance(field, RationalField):
            for c, tail in self._pivot_tails:
                v = vec[c]
                if v:
                    coords = [x - v * t for x, t in zip(coords, tail)]
            return tuple(Fraction(x) for x in coords)
        sub, mul, is_zero = field.sub, field.mul, field.is_zero
        for c, tail in self._pivot_tails:
            v = vec[c]
            if not is_zero(v):
                coords = [sub(x, mul(v, t)) for x, t in zip(coords, tail)]
        return tuple(coords)

    def is_zero_element(self, vec):
        if isinstance(self.ring, IntegerRing):
            return all(x == 0 for x in self.reduce(vec))
        rz = self.ring.is_zero
        return all(rz(x) for x in self.reduce(vec))

    def contains_in_relations(self, vec):
        """Membership of an ambient vector in the relation span."""
        return self.is_zero_element(vec)

    def coords_to_ambient(self, coords):
        """A representative ambient vector for canonical coordinates."""
        self._normalize()
        if isinstance(self.ring, IntegerRing):
            return self._Winv.act_on_row(list(coords))
        vec = [self.ring.zero] * self.ngens
        for f, x in zip(self._free, coords):
            vec[f] = x
        return vec

    def generator_ambient_rows(self):
        """Ambient representatives of the normalized generators."""
        self._normalize()
        if isinstance(self.ring, IntegerRing):
            return Matrix(ZZ, [list(r) for r in self._Winv.rows], self.ngens)
        rows = []
        for f in self._free:
            v = [self.ring.zero] * self.ngens
            v[f] = self.ring.one
            rows.append(v)
        return Matrix(self.ring, rows, self.ngens)

    def ncoords(self):
        self._normalize()
        if isinstance(self.ring, IntegerRing):
            return self.ngens
        return len(self._free)

    def __repr__(self):
        if isinstance(self.ring, IntegerRing):
            return "FPModule(Z, rank %d, torsion %s)" % (self.rank(), list(self.torsion()))
        return "FPModule(%s, dim %d)" % (self.ring.kind, self.rank())


def quotient_presentation(ring, ngens, relation_rows):
    """Public constructor: R^ngens modulo the span of the given rows."""
    rel = relation_rows if isinstance(relation_rows, Matrix) else Matrix(ring, relation_rows, ngens)
    return FPModule(ring, ngens, rel)


class IllDefinedMapError(ValueError):
    pass


class FPMap:
    """A map between presented modules, given on ambient generators."""

    def __init__(self, src, dst, ambient, check=True):
        if ambient.nrows != src.ngens or ambient.ncols != dst.ngens:
            raise ShapeError("ambient map shape mismatch")
        self.src = src
        self.dst = dst
        self.ambient = ambient
        if check:
            for row in src.relations.rows:
                if not dst.is_zero_element(ambient.act_on_row(row)):
                    raise IllDefinedMapError("source relation does not map into target relations")

    def matrix_on_generators(self):
        """Matrix in canonical coordinates (rows: src generators)."""
        gens = self.src.generator_ambient_rows()
        rows = [list(self.dst.reduce(self.ambient.act_on_row(g))) for g in gens.rows]
        return Matrix(self.dst.ring, rows, self.dst.ncoords())

    def kernel(self):
        """(FPModule K, ambient rows of its generators inside src)."""
        ring = self.src.ring
        if isinstance(ring, IntegerRing):
            stacked = self.ambient.stack(self.dst.relations)
            K = left_kernel(stacked)
            pre = [row[: self.src.ngens] for row in K.rows]
            pre = [r for r in pre if any(x != 0 for x in r)]
            if pre:
                Hpre = hermite_normal_form(Matrix(ZZ, pre, self.src.ngens))
                pre = [r for r in Hpre.rows if any(x != 0 for x in r)]
            gens = Matrix(ZZ, pre, self.src.ngens)
            if gens.nrows:
                stacked2 = gens.stack(self.src.relations)
                K2 = left_kernel(stacked2)
                relrows = [row[: gens.nrows] for row in K2.rows]
                rel = Matrix(ZZ, [r for r in relrows if any(x != 0 for x in r)], gens.nrows)
            else:
                rel = Matrix(ZZ, [], 0)
            return FPModule(ZZ, gens.nrows, rel), gens
        G = self.matrix_on_generators()
        K = left_kernel(G)
        src_gens = self.src.generator_ambient_rows()
        rows = [src_gens.act_on_row(k) for k in K.rows]
        gens = Matrix(ring, rows, self.src.ngens)
        return FPModule(ring, gens.nrows), gens

    def image(self):
        """(FPModule I, ambient rows spanning the image inside dst)."""
        _K, kgens = self.kernel()
        rel = self.src.relations.stack(kgens)
        mod = FPModule(self.src.ring, self.src.ngens, rel)
        return mod, self.ambient

    def cokernel(self):
        return FPModule(self.dst.ring, self.dst.ngens, self.dst.relations.stack(self.ambient))

    def rank(self):
        """Rank of the induced map (field: dimension of the image)."""
        if isinstance(self.src.ring, IntegerRing):
            mod, _ = self.image()
            return mod.rank()
        return matrix_rank(self.matrix_on_generators())


def induced_map(src, dst, ambient):
    """Public op: well-definedness check plus the induced-map bundle."""
    f = FPMap(src, dst, ambient, check=True)
    return f


# ---------------------------------------------------------------------------
# characteristic polynomial (Hessenberg recursion)
# ---------------------------------------------------------------------------


def charpoly(mat):
    """Monic characteristic polynomial, coefficients low -> high."""
    if mat.nrows != mat.ncols:
        raise ShapeError("charpoly needs a square matrix")
    field = _field_for(mat.ring)
    n = mat.nrows
    if n == 0:
        return [field.one]
    conv = (lambda x: Fraction(x)) if isinstance(field, RationalField) else (lambda x: x)
    a = [[conv(x) for x in row] for row in mat.rows]
    sub, mul, div, is_zero = field.sub, field.mul, field.div, field.is_zero
    add = field.add
    # reduce to upper Hessenberg by similarity
    for m in range(1, n - 1):
        piv = -1
        for i in range(m, n):
            if not is_zero(a[i][m - 1]):
                piv = i
                break
        if piv < 0:
            continue
        if piv != m:
            a[piv], a[m] = a[m], a[piv]
            for row in a:
                row[piv], row[m] = row[m], row[piv]
        t = a[m][m - 1]
        for i in range(m + 1, n):
            if not is_zero(a[i][m - 1]):
                u = div(a[i][m - 1], t)
                a[i] = [sub(x, mul(u, y)) for x, y in zip(a[i], a[m])]
                for row in a:
                    row[m] = add(row[m], mul(u, row[i]))
    # p_m(x) = (x - a[m][m]) p_{m-1}(x) - sum_i a[i][m] (prod subdiag) p_{i-1}(x)
    zero, one = field.zero, field.one
    polys = [[one]]
    for m in range(n):
        prev = polys[m]
        cur = [zero] + prev
        c = a[m][m]
        cur = [sub(x, mul(c, y)) for x, y in zip(cur, prev + [zero])]
        # correction terms use products of subdiagonal entries a[m][m-1]...a[i+1][i]
        t = one
        for i in range(m - 1, -1, -1):
            t = mul(t, a[i + 1][i])
            coef = mul(t, a[i][m])
            if not is_zero(coef):
                pi = polys[i]
                cur = [sub(x, mul(coef, y)) for x, y in zip(cur, pi + [zero] * (len(cur) - len(pi)))]
        polys.append(cur)
    return list(polys[n])
