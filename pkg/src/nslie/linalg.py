"""Exact linear algebra over the rationals.

All matrix computations in this package run through this module, exactly:
row reduction, nullspaces, solving, inverses and congruence diagonalization.
Matrices are numpy arrays with ``dtype=object`` holding ``fractions.Fraction``
or python ints; no floating point appears anywhere.  Definiteness and rank
are the load-bearing predicates downstream, so exactness is not optional.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import numpy as np

__all__ = [
    "frac_matrix",
    "zeros",
    "eye",
    "mat_rank",
    "rref",
    "nullspace",
    "solve",
    "solve_matrix",
    "inverse",
    "congruence_inertia",
    "is_zero_matrix",
    "primitive_int_vector",
    "SpanBasis",
    "IntSpan",
]


def frac_matrix(rows):
    """Build an object-dtype matrix of Fractions from nested sequences."""
    a = np.array([[Fraction(x) for x in row] for row in rows], dtype=object)
    if a.ndim == 1:
        a = a.reshape(0, 0)
    return a


def zeros(m, n):
    a = np.empty((m, n), dtype=object)
    a[:] = Fraction(0)
    return a


def eye(n):
    a = zeros(n, n)
    for i in range(n):
        a[i, i] = Fraction(1)
    return a


def is_zero_matrix(a) -> bool:
    return all(x == 0 for x in a.flat)


def rref(a):
    """Reduced row echelon form.

    Returns ``(R, pivots)`` where ``R`` is a new matrix and ``pivots`` the
    list of pivot column indices.
    """
    r = np.array(a, dtype=object, copy=True)
    m, n = r.shape
    pivots = []
    row = 0
    for col in range(n):
        if row >= m:
            break
        sel = None
        for i in range(row, m):
            if r[i, col] != 0:
                sel = i
                break
        if sel is None:
            continue
        if sel != row:
            r[[sel, row]] = r[[row, sel]]
        piv = r[row, col]
        if piv != 1:
            r[row] = r[row] / piv
        for i in range(m):
            if i != row and r[i, col] != 0:
                r[i] = r[i] - r[i, col] * r[row]
        pivots.append(col)
        row += 1
    return r, pivots


def mat_rank(a) -> int:
    if a.size == 0:
        return 0
    return len(rref(a)[1])


def nullspace(a):
    """Basis of the right kernel, as a list of length-n object vectors."""
    m, n = a.shape
    if n == 0:
        return []
    if m == 0:
        return [eye(n)[i] for i in range(n)]
    r, pivots = rref(a)
    piv_set = set(pivots)
    free = [j for j in range(n) if j not in piv_set]
    basis = []
    for j in free:
        v = np.empty(n, dtype=object)
        v[:] = Fraction(0)
        v[j] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -r[i, j]
        basis.append(v)
    return basis


def solve(a, b):
    """One exact solution of ``a x = b``, or None if inconsistent."""
    m, n = a.shape
    aug = np.empty((m, n + 1), dtype=object)
    aug[:, :n] = a
    aug[:, n] = b
    r, pivots = rref(aug)
    if n in pivots:
        return None
    x = np.empty(n, dtype=object)
    x[:] = Fraction(0)
    for i, pc in enumerate(pivots):
        x[pc] = r[i, n]
    return x


def solve_matrix(a, b):
    """Solve ``a X = b`` columnwise; None if any column is inconsistent."""
    m, n = a.shape
    k = b.shape[1]
    aug = np.empty((m, n + k), dtype=object)
    aug[:, :n] = a
    aug[:, n:] = b
    r, pivots = rref(aug)
    if any(p >= n for p in pivots):
        return None
    x = zeros(n, k)
    for i, pc in enumerate(pivots):
        x[pc, :] = r[i, n:]
    return x


def inverse(a):
    n = a.shape[0]
    assert a.shape == (n, n)
    x = solve_matrix(a, eye(n))
    if x is None or mat_rank(a) < n:
        raise ValueError("matrix is singular")
    return x


def congruence_inertia(s):
    """Inertia ``(pos, neg, zero)`` of a symmetric matrix by congruence.

    Symmetric row/column elimination with the usual fix when the diagonal
    vanishes (add a row/column to create a nonzero pivot).  Exact, so the
    signs are certificates, not estimates.
    """
    a = np.array(s, dtype=object, copy=True)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inertia needs a square matrix")
    for i in range(n):
        for j in range(n):
            if a[i, j] != a[j, i]:
                raise ValueError("inertia needs a symmetric matrix")
    pos = neg = zero = 0
    idx = list(range(n))
    while idx:
        i = idx[0]
        piv = a[i, i]
        if piv == 0:
            fix = None
            for j in idx[1:]:
                if a[i, j] != 0:
                    fix = j
                    break
            if fix is None:
                # row i is zero on the remaining block
                zero += 1
                idx.pop(0)
                continue
            # 2*a[i,fix] + a[fix,fix] and -2*a[i,fix] + a[fix,fix] cannot
            # both vanish when a[i,fix] != 0, so one sign always works
            sign = 1 if 2 * a[i, fix] + a[fix, fix] != 0 else -1
            for j in idx:
                a[i, j] = a[i, j] + sign * a[fix, j]
            for j in idx:
                a[j, i] = a[j, i] + sign * a[j, fix]
            piv = a[i, i]
            assert piv != 0
        if piv > 0:
            pos += 1
        else:
            neg += 1
        rest = idx[1:]
        for j in rest:
            if a[j, i] != 0:
                c = a[j, i] / piv
                for k in rest:
                    a[j, k] = a[j, k] - c * a[i, k]
        # mirror the column elimination implicitly; only the trailing block
        # matters, and symmetry is restored there
        for j in rest:
            a[i, j] = Fraction(0)
            a[j, i] = Fraction(0)
        for j in rest:
            for k in rest:
                if a[j, k] != a[k, j]:
                    raise AssertionError("congruence step broke symmetry")
        idx.pop(0)
    return pos, neg, zero


def _vec_gcd(v) -> int:
    g = 0
    for x in v.flat:
        g = gcd(g, abs(int(x)))
        if g == 1:
            return 1
    return g


def primitive_int_vector(v):
    """Scale a rational vector to a primitive integer vector (gcd 1)."""
    den = 1
    for x in v.flat:
        f = Fraction(x)
        den = den * f.denominator // gcd(den, f.denominator)
    w = np.array([int(Fraction(x) * den) for x in v.flat], dtype=object)
    g = _vec_gcd(w)
    if g > 1:
        w = np.array([x // g for x in w.flat], dtype=object)
    return w


class SpanBasis:
    """Incrementally built subspace with coordinate extraction.

    Vectors are reduced against a maintained echelon basis.  ``coords``
    expresses a vector in terms of the *inserted* generators, which is what
    structure-constant computations need.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self.rows = []          # echelon rows (Fraction vectors)
        self.pivots = []        # pivot column per row
        self.history = []       # row = combination of inserted generators
        self.ninserted = 0

    def __len__(self):
        return len(self.rows)

    def _reduce(self, v, track=False):
        v = np.array([Fraction(x) for x in v.flat], dtype=object)
        combo = None
        if track:
            combo = {}
        for row, piv, hist in zip(self.rows, self.pivots, self.history):
            c = v[piv]
            if c != 0:
                v = v - c * row
                if track:
                    for k, val in hist.items():
                        combo[k] = combo.get(k, Fraction(0)) - c * val
        return v, combo

    def add(self, v) -> bool:
        """Insert a vector; True if it enlarged the span."""
        idx = self.ninserted
        self.ninserted += 1
        red, combo = self._reduce(v, track=True)
        piv = None
        for j in range(self.dim):
            if red[j] != 0:
                piv = j
                break
        if piv is None:
            return False
        c = red[piv]
        red = red / c
        combo = {k: val / c for k, val in combo.items()}
        combo[idx] = combo.get(idx, Fraction(0)) + Fraction(1) / c
        self.rows.append(red)
        self.pivots.append(piv)
        self.history.append(combo)
        return True

    def contains(self, v) -> bool:
        red, _ = self._reduce(v)
        return all(x == 0 for x in red.flat)

    def coords_in_generators(self, v):
        """Coefficients over the inserted generators, or None if outside."""
        red, combo = self._reduce(v, track=True)
        if any(x != 0 for x in red.flat):
            return None
        out = np.empty(self.ninserted, dtype=object)
        out[:] = Fraction(0)
        for k, val in combo.items():
            out[k] = -val
        return out

    def matrix(self):
        m = zeros(len(self.rows), self.dim)
        for i, r in enumerate(self.rows):
            m[i] = r
        return m


class IntSpan:
    """Echelon span over the integers, tuned for the bracket closure.

    Rows are primitive integer vectors; reduction uses cross-multiplication
    followed by a gcd pass, which keeps entries small in practice.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self.rows = []
        self.pivots = []

    def __len__(self):
        return len(self.rows)

    def reduce(self, v):
        """Primitive residual of v against the span (zero vector if inside)."""
        v = primitive_int_vector(v)
        for row, piv in zip(self.rows, self.pivots):
            b = v[piv]
            if b != 0:
                a = row[piv]
                v = v * a - row * b
                g = _vec_gcd(v)
                if g > 1:
                    v = np.array([x // g for x in v.flat], dtype=object)
        return v

    def add(self, v) -> bool:
        red = self.reduce(v)
        piv = None
        for j in range(self.dim):
            if red[j] != 0:
                piv = j
                break
        if piv is None:
            return False
        if red[piv] < 0:
            red = -red
        self.rows.append(red)
        self.pivots.append(piv)
        return True

    def normal_form(self):
        """Fully reduced echelon matrix; canonical for span comparison."""
        order = np.argsort(np.array(self.pivots))
        rows = [np.array(self.rows[i], copy=True) for i in order]
        pivs = [self.pivots[i] for i in order]
        for i in range(len(rows) - 1, -1, -1):
            for j in range(i):
                b = rows[j][pivs[i]]
                if b != 0:
                    a = rows[i][pivs[i]]
                    rows[j] = rows[j] * a - rows[i] * b
                    g = _vec_gcd(rows[j])
                    if g > 1:
                        rows[j] = np.array(
                            [x // g for x in rows[j].flat], dtype=object
                        )
        return [tuple(int(x) for x in r.flat) for r in rows]
