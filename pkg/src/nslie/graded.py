"""Finite dimensional graded modules over exact rationals.

The carrier type shared by the Schubert cohomology modules and the
Bott-Samelson / Soergel constructions: a graded vector space with commuting
degree-2 operators (one per fundamental weight), an optional graded
commutative product and an optional intersection-type bilinear form pairing
opposite degrees.

Operators are stored blockwise by degree.  ``action[s][k]`` is the matrix of
the fundamental weight operator from degree k to degree k+2.  The form block
``form[k]`` pairs degree k against degree -k, with the sign convention read
off the first argument; blocks of opposite degree determine each other via
phi(g,f) = (-1)^k phi(f,g) for f of degree k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .laurent import LaurentPoly
from .linalg import zeros

__all__ = ["GradedModule"]


def _zero_block(m, n):
    b = np.empty((m, n), dtype=object)
    b[:] = Fraction(0)
    return b


@dataclass
class GradedModule:
    system: object
    dims: dict                    # degree -> dimension (>0 entries only)
    action: dict                  # s -> {k: block (dims[k+2] x dims[k])}
    labels: dict = None           # degree -> list of basis labels
    form: dict = None             # k -> block (dims[k] x dims[-k])
    product: object = None        # callable on (deg,i),(deg,j) basis refs
    bottom_degree: int = None

    def __post_init__(self):
        self.degrees = sorted(k for k, d in self.dims.items() if d > 0)
        if self.bottom_degree is None and self.degrees:
            self.bottom_degree = self.degrees[0]
        self._offsets = {}
        off = 0
        for k in self.degrees:
            self._offsets[k] = off
            off += self.dims[k]
        self.total_dim = off

    # -- structure ---------------------------------------------------------

    def dim(self, k) -> int:
        return self.dims.get(k, 0)

    def offset(self, k) -> int:
        return self._offsets[k]

    def graded_dimension(self) -> LaurentPoly:
        return LaurentPoly({k: d for k, d in self.dims.items()})

    def label(self, k, i):
        if self.labels and k in self.labels:
            return self.labels[k][i]
        return f"deg{k}[{i}]"

    # -- operators -----------------------------------------------------------

    def action_block(self, s, k):
        blk = self.action[s].get(k)
        if blk is None:
            blk = _zero_block(self.dim(k + 2), self.dim(k))
        return blk

    def weight_blocks(self, fund_coords):
        """Blocks of the operator for a weight given in fundamental coords."""
        out = {}
        for k in self.degrees:
            if self.dim(k + 2) == 0 or self.dim(k) == 0:
                continue
            blk = _zero_block(self.dim(k + 2), self.dim(k))
            for s, c in enumerate(fund_coords, start=1):
                if c != 0:
                    blk = blk + Fraction(c) * self.action_block(s, k)
            out[k] = blk
        return out

    def root_weight_coords(self, root_vec):
        """Fundamental-weight coordinates of a root-coordinate vector."""
        n = self.system.rank
        return tuple(
            sum(
                Fraction(root_vec[t]) * self.system.cartan_integer(u + 1, t + 1)
                for t in range(n)
            )
            for u in range(n)
        )

    def simple_root_blocks(self, s):
        return self.weight_blocks(self.root_weight_coords(
            tuple(1 if t == s - 1 else 0 for t in range(self.system.rank))
        ))

    def dense(self, blocks, degree=2):
        """Assemble degree-homogeneous blocks into a dense matrix."""
        m = zeros(self.total_dim, self.total_dim)
        for k, blk in blocks.items():
            if self.dim(k) == 0 or self.dim(k + degree) == 0:
                continue
            r0 = self.offset(k + degree)
            c0 = self.offset(k)
            m[r0:r0 + self.dim(k + degree), c0:c0 + self.dim(k)] = blk
        return m

    def dense_action(self, s):
        return self.dense(self.action[s])

    def h_dense(self):
        m = zeros(self.total_dim, self.total_dim)
        for k in self.degrees:
            o = self.offset(k)
            for i in range(self.dim(k)):
                m[o + i, o + i] = Fraction(k)
        return m

    def form_dense(self):
        """phi as a dense matrix; entry [i,j] = phi(e_i, e_j).

        The block phi[k] pairs (deg k, deg -k), so it sits at rows of
        degree k and columns of degree -k.
        """
        if self.form is None:
            raise ValueError("module carries no bilinear form")
        m = zeros(self.total_dim, self.total_dim)
        for k in self.degrees:
            if k not in self.form or self.dim(-k) == 0:
                continue
            r0, c0 = self.offset(k), self.offset(-k)
            m[r0:r0 + self.dim(k), c0:c0 + self.dim(-k)] = self.form[k]
        return m

    # -- invariant checks (used by tests) -------------------------------------

    def check_degree_structure(self):
        for s, blocks in self.action.items():
            for k, blk in blocks.items():
                assert blk.shape == (self.dim(k + 2), self.dim(k)), (
                    f"action {s} at degree {k} has shape {blk.shape}"
                )

    def check_commuting(self):
        n = self.system.rank
        for s in range(1, n + 1):
            for t in range(s, n + 1):
                for k in self.degrees:
                    if self.dim(k) == 0 or self.dim(k + 4) == 0:
                        continue
                    ab = self.action_block(s, k + 2) @ self.action_block(t, k)
                    ba = self.action_block(t, k + 2) @ self.action_block(s, k)
                    assert all(x == 0 for x in (ab - ba).flat), (
                        f"weight actions {s},{t} do not commute at degree {k}"
                    )

    def check_form_consistency(self):
        if self.form is None:
            return
        for k in list(self.form):
            if self.dim(k) == 0 or self.dim(-k) == 0:
                continue
            a = self.form[k]
            b = self.form.get(-k)
            assert b is not None
            sign = -1 if k % 2 else 1
            diff = b - sign * a.T
            assert all(x == 0 for x in diff.flat), f"form blocks at +-{k} disagree"


# -- graded Hom spaces ----------------------------------------------------
#
# Degree-0 maps intertwining two collections of degree-2 operators are
# computed by propagating up the degrees: the block at degree k is pinned on
# the image of the operators out of degree k-2, consistency conditions cut
# the parameter space, and a complement of that image contributes fresh
# parameters.  All solves happen blockwise, so nothing ever exceeds the
# largest graded piece.


def _right_mul(t, g):
    """Contract a (d2, d, m) parameter tensor with g (d, q) -> (d2, q, m)."""
    d2, d, m = t.shape
    q = g.shape[1]
    x = np.transpose(t, (0, 2, 1)).reshape(d2 * m, d)
    y = x @ g
    return np.transpose(y.reshape(d2, m, q), (0, 2, 1))


def _left_mul(g, t):
    """Contract g (d2, d) with a (d, k, m) tensor -> (d2, k, m)."""
    d, k, m = t.shape
    y = g @ t.reshape(d, k * m)
    return y.reshape(g.shape[0], k, m)


def _empty_tensor(a, b, m):
    t = np.empty((a, b, m), dtype=object)
    t[:] = Fraction(0)
    return t


def _rm_tensor(t, g):
    """(a, b, m) tensor times g (b, c) on the middle index -> (a, c, m)."""
    a, b, m = t.shape
    c = g.shape[1]
    if b == 0 or a == 0 or m == 0:
        return _empty_tensor(a, c, m)
    x = np.transpose(t, (0, 2, 1)).reshape(a * m, b) @ g
    return np.transpose(x.reshape(a, m, c), (0, 2, 1))


def graded_hom_basis(dims1, gens1, dims2, gens2):
    """Basis of degree-0 maps X with X g1 = g2 X for every generator pair.

    ``dims*`` map degree -> dimension; ``gens*`` are parallel lists of block
    dicts (degree k -> block mapping degree k to k+2).  Returns a list of
    block dicts X[k] of shape (dims2[k], dims1[k]).
    """
    from .linalg import nullspace, rref, solve_matrix, inverse, eye as _eye

    degrees = sorted(set(dims1) | set(dims2))
    if not degrees:
        return []
    assert len(gens1) == len(gens2)

    d1 = lambda k: dims1.get(k, 0)
    d2 = lambda k: dims2.get(k, 0)

    tensors = {}
    nparam = 0

    def grow(fresh):
        nonlocal nparam
        if fresh == 0:
            return
        for kk in list(tensors):
            old = tensors[kk]
            grown = _empty_tensor(old.shape[0], old.shape[1], nparam + fresh)
            if nparam:
                grown[:, :, :nparam] = old
            tensors[kk] = grown
        nparam += fresh

    def reparametrize(rows):
        nonlocal nparam
        new_m = len(rows)
        p = _empty_tensor(nparam, new_m, 1)[:, :, 0]
        for j, row in enumerate(rows):
            for i in range(nparam):
                p[i, j] = Fraction(row[i])
        for kk in list(tensors):
            t = tensors[kk]
            a, b, _ = t.shape
            if a * b == 0:
                tensors[kk] = _empty_tensor(a, b, new_m)
            else:
                tensors[kk] = (t.reshape(a * b, nparam) @ p).reshape(a, b, new_m)
        nparam = new_m

    for k in degrees:
        if d1(k) == 0:
            continue
        prev = k - 2
        if prev not in tensors:
            # nothing constrains this block; every entry is a fresh parameter
            base = nparam
            grow(d2(k) * d1(k))
            t = _empty_tensor(d2(k), d1(k), nparam)
            idx = base
            for i in range(d2(k)):
                for j in range(d1(k)):
                    t[i, j, idx] = Fraction(1)
                    idx += 1
            tensors[k] = t
            continue
        blocks1 = [
            g.get(prev) if g.get(prev) is not None else zeros(d1(k), d1(prev))
            for g in gens1
        ]
        blocks2 = [
            g.get(prev) if g.get(prev) is not None else zeros(d2(k), d2(prev))
            for g in gens2
        ]
        b = np.concatenate(blocks1, axis=1)
        q = b.shape[1]
        _, piv = rref(b)
        rho = len(piv)
        v = b[:, piv] if rho else zeros(d1(k), 0)
        c = solve_matrix(v, b) if rho else zeros(0, q)
        assert c is not None

        def stack_r():
            xprev = tensors[prev]
            parts = []
            for g2 in blocks2:
                if d2(prev) == 0 or d2(k) == 0:
                    parts.append(_empty_tensor(d2(k), d1(prev), nparam))
                else:
                    parts.append(_left_mul(g2, xprev))
            return np.concatenate(parts, axis=1)

        r = stack_r()
        y = r[:, piv, :] if rho else _empty_tensor(d2(k), 0, nparam)
        yc = _rm_tensor(y, c) if rho else _empty_tensor(d2(k), q, nparam)
        resid = yc - r
        if nparam and resid.size and any(x != 0 for x in resid.flat):
            conds = resid.reshape(d2(k) * q, nparam)
            ns = nullspace(conds)
            reparametrize(ns)
            r = stack_r()
            y = r[:, piv, :] if rho else _empty_tensor(d2(k), 0, nparam)
        # complete v to a basis of the degree-k source space
        if rho < d1(k):
            aug = np.concatenate([v, _eye(d1(k))], axis=1)
            _, apiv = rref(aug)
            extra = [j - rho for j in apiv if j >= rho]
            u = _eye(d1(k))[:, extra]
            m_full = np.concatenate([v, u], axis=1) if rho else u
        else:
            m_full = v
        minv = inverse(m_full)
        base = nparam
        grow(d2(k) * (d1(k) - rho))
        yf = _empty_tensor(d2(k), d1(k), nparam)
        if rho and base:
            yf[:, :rho, :base] = y
        idx = base
        for i in range(d2(k)):
            for j in range(d1(k) - rho):
                yf[i, rho + j, idx] = Fraction(1)
                idx += 1
        tensors[k] = _rm_tensor(yf, minv)
    out = []
    for p in range(nparam):
        blocks = {}
        for k, t in tensors.items():
            blocks[k] = np.array(t[:, :, p], dtype=object)
        out.append(blocks)
    return out


def graded_module_hom_basis(m1: "GradedModule", m2: "GradedModule"):
    """Degree-0 maps intertwining the full weight actions of two modules."""
    n = m1.system.rank
    gens1 = [m1.action[s] for s in range(1, n + 1)]
    gens2 = [m2.action[s] for s in range(1, n + 1)]
    dims1 = {k: d for k, d in m1.dims.items() if d > 0}
    dims2 = {k: d for k, d in m2.dims.items() if d > 0}
    return graded_hom_basis(dims1, gens1, dims2, gens2)
