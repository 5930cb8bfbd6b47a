"""Lefschetz operators, sl2 triples, polarizations, weight filtrations.

A degree-2 operator e on a graded module has the Lefschetz property when
e^k maps degree -k isomorphically onto degree k for every k.  The adjoint f
is constructed explicitly on the primitive decomposition: with
P_{-k} = Ker(e^{k+1}) in degree -k,

    f(e^i p) = i (k - i + 1) e^{i-1} p    for p in P_{-k},

and f = 0 on the primitives themselves.  The three bracket relations are
verified as exact matrix identities, never assumed.

Polarizations pair primitives through the intersection form; definiteness
is certified by exact congruence diagonalization.  The sign convention
pairs against the transformed second argument: <x, y> = phi(x, e^k y) on
degree -k.  (Pairing on the first argument instead flips the reported sign
by (-1)^k in odd top degree; this choice makes the definiteness sign come
out uniformly (-1)^{l(l+1)/2} across all degrees, as the hard Lefschetz
package asserts.)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graded import GradedModule, _zero_block
from .linalg import (
    SpanBasis,
    congruence_inertia,
    eye,
    inverse,
    mat_rank,
    nullspace,
    rref,
    zeros,
)

__all__ = [
    "Sl2Triple",
    "WeightFiltration",
    "has_lefschetz",
    "build_sl2",
    "is_polarization",
    "weight_filtration",
    "power_block",
    "primitive_subspaces",
]


def power_block(module: GradedModule, e_blocks, start, power):
    """Matrix of e^power restricted to the degree ``start`` piece."""
    d = module.dim(start)
    out = eye(d)
    deg = start
    for _ in range(power):
        blk = e_blocks.get(deg)
        if blk is None:
            blk = _zero_block(module.dim(deg + 2), module.dim(deg))
        out = blk @ out
        deg += 2
    return out


def has_lefschetz(module: GradedModule, e_blocks) -> bool:
    """True iff e^k : M_{-k} -> M_k has full rank for every k > 0."""
    for k in module.degrees:
        if k >= 0:
            continue
        r = -k
        if module.dim(k) != module.dim(r):
            return False
        blk = power_block(module, e_blocks, k, r)
        if mat_rank(blk) != module.dim(k):
            return False
    return True


def primitive_subspaces(module: GradedModule, e_blocks):
    """{k >= 0: basis matrix of Ker(e^{k+1}) in degree -k}."""
    prim = {}
    for k in module.degrees:
        if k > 0:
            continue
        r = -k
        blk = power_block(module, e_blocks, k, r + 1)
        kern = nullspace(blk)
        basis = zeros(module.dim(k), len(kern))
        for i, v in enumerate(kern):
            basis[:, i] = v
        prim[r] = basis
    return prim


@dataclass
class Sl2Triple:
    module: GradedModule
    e: dict                       # degree-2 blocks
    f: dict                       # degree-(-2) blocks

    def e_dense(self):
        return self.module.dense(self.e, degree=2)

    def f_dense(self):
        return self.module.dense(self.f, degree=-2)

    def h_dense(self):
        return self.module.h_dense()


def build_sl2(module: GradedModule, e_blocks) -> Sl2Triple:
    """The unique sl2 completion of a Lefschetz operator and the grading.

    Raises if e lacks the Lefschetz property or if the constructed triple
    fails the bracket identities (which would be an implementation bug, not
    a property of the input).
    """
    if not has_lefschetz(module, e_blocks):
        raise ValueError("operator lacks the Lefschetz property")
    if module.total_dim == 0:
        return Sl2Triple(module, {}, {})
    prim = primitive_subspaces(module, e_blocks)
    # per-degree decomposition basis and the f-image bookkeeping
    cols = {d: [] for d in module.degrees}
    fdata = {d: [] for d in module.degrees}     # (k, i, column of e^{i-1} p)
    for k, basis in prim.items():
        nprim = basis.shape[1]
        if nprim == 0:
            continue
        vecs = basis
        prev = None
        for i in range(k + 1):
            d = -k + 2 * i
            for j in range(nprim):
                cols[d].append(vecs[:, j])
                if i == 0:
                    fdata[d].append(None)
                else:
                    fdata[d].append((Fraction(i * (k - i + 1)), prev[:, j]))
            if i < k:
                blk = e_blocks.get(d)
                prev = vecs
                vecs = blk @ vecs
    f_blocks = {}
    for d in module.degrees:
        dim = module.dim(d)
        assert len(cols[d]) == dim, "primitive decomposition is incomplete"
        b = zeros(dim, dim)
        for j, v in enumerate(cols[d]):
            b[:, j] = v
        binv = inverse(b)
        if module.dim(d - 2) == 0:
            continue
        img = zeros(module.dim(d - 2), dim)
        for j, data in enumerate(fdata[d]):
            if data is not None:
                c, vec = data
                img[:, j] = c * vec
        f_blocks[d] = img @ binv
    triple = Sl2Triple(module, dict(e_blocks), f_blocks)
    _check_sl2(triple)
    return triple


def _check_sl2(t: Sl2Triple):
    m = t.module
    # [e,f] = h blockwise: e f - f e = k on degree k
    for k in m.degrees:
        d = m.dim(k)
        acc = zeros(d, d)
        if k - 2 in m.degrees and k in t.f:
            eb = t.e.get(k - 2)
            if eb is not None:
                acc = acc + eb @ t.f[k]
        if k + 2 in m.degrees and t.e.get(k) is not None:
            fb = t.f.get(k + 2)
            if fb is not None:
                acc = acc - fb @ t.e[k]
        for i in range(d):
            acc[i, i] = acc[i, i] - Fraction(k)
        assert all(x == 0 for x in acc.flat), f"[e,f] != h at degree {k}"
    # [h,e] = 2e and [h,f] = -2f hold by degree homogeneity; assert shapes
    for k, blk in t.e.items():
        assert blk.shape == (m.dim(k + 2), m.dim(k))
    for k, blk in t.f.items():
        assert blk.shape == (m.dim(k - 2), m.dim(k))


def is_polarization(module: GradedModule, e_blocks):
    """Definiteness of the e-twisted form on every primitive subspace.

    Returns a report {'invariant': bool, 'signs': {k: +1/-1/None},
    'is_polarization': bool}.  The sign at k is that of
    phi(x, e^k y) on P_{-k}; None records an indefinite or degenerate form.
    """
    if module.form is None:
        raise ValueError("module carries no bilinear form")
    # infinitesimal invariance phi(e x, y) + phi(x, e y) = 0
    invariant = operator_preserves_form(module, e_blocks, degree=2)
    if not invariant:
        return {"invariant": False, "signs": {}, "is_polarization": False}
    if not has_lefschetz(module, e_blocks):
        return {"invariant": True, "signs": {}, "is_polarization": False}
    prim = primitive_subspaces(module, e_blocks)
    signs = {}
    ok = True
    for k, basis in prim.items():
        if basis.shape[1] == 0:
            continue
        ek = power_block(module, e_blocks, -k, k)
        gram = basis.T @ module.form[-k] @ (ek @ basis)
        for i in range(gram.shape[0]):
            for j in range(gram.shape[1]):
                assert gram[i, j] == gram[j, i], "twisted form is not symmetric"
        pos, neg, null = congruence_inertia(gram)
        if null == 0 and neg == 0:
            signs[k] = 1
        elif null == 0 and pos == 0:
            signs[k] = -1
        else:
            signs[k] = None
            ok = False
    return {"invariant": True, "signs": signs, "is_polarization": ok}


def operator_preserves_form(module: GradedModule, blocks, degree) -> bool:
    """Exact check of phi(X x, y) + phi(x, X y) = 0 for homogeneous X."""
    for k in module.degrees:
        src2 = -k - degree
        if module.dim(src2) == 0:
            continue
        # phi(X x, y) with x in degree k, y in degree -k-degree
        a = blocks.get(k)
        term1 = None
        if a is not None and module.dim(k + degree) > 0:
            f1 = module.form.get(k + degree)
            if f1 is not None:
                term1 = a.T @ f1
        b = blocks.get(src2)
        term2 = None
        if b is not None and module.dim(-k) > 0:
            f2 = module.form.get(k)
            if f2 is not None:
                term2 = f2 @ b
        if term1 is None and term2 is None:
            continue
        if term1 is None:
            total = term2
        elif term2 is None:
            total = term1
        else:
            total = term1 + term2
        if any(x != 0 for x in total.flat):
            return False
    return True


@dataclass
class WeightFiltration:
    """The filtration of a nilpotent operator, W_l <= ... <= W_{-l} = M."""

    dim: int
    index: int                    # l with e^l != 0, e^{l+1} = 0
    spaces: dict                  # k -> basis matrix (columns span W_k)

    def space(self, k):
        if k > self.index:
            return zeros(self.dim, 0)
        if k < -self.index:
            k = -self.index
        return self.spaces[k]

    def rank(self, k) -> int:
        return self.space(k).shape[1]


def weight_filtration(e, dim=None) -> WeightFiltration:
    """Weight filtration of a nilpotent matrix, from its Jordan chains.

    A chain of length m contributes vectors of weights m-1, m-3, ...,
    1-m; W_k is spanned by all chain vectors of weight >= k.  Uniqueness
    of the filtration is a property test, not an assumption here.
    """
    e = np.asarray(e, dtype=object)
    n = e.shape[0] if dim is None else dim
    if n == 0:
        return WeightFiltration(0, 0, {0: zeros(0, 0)})
    powers = [eye(n)]
    while True:
        nxt = powers[-1] @ e
        powers.append(nxt)
        if all(x == 0 for x in nxt.flat):
            break
        if len(powers) > n + 1:
            raise ValueError("operator is not nilpotent")
    big = len(powers) - 1          # e^big = 0, e^{big-1} != 0
    index = big - 1
    kernels = {j: nullspace(powers[j]) for j in range(big + 1)}
    chains = []                    # (top vector, length)
    chosen = SpanBasis(n)
    for j in range(big, 0, -1):
        quotient = SpanBasis(n)
        for v in kernels[j - 1]:
            quotient.add(v)
        for top, length in chains:
            if length > j:
                quotient.add(powers[length - j] @ top)
        for v in kernels[j]:
            if not quotient.contains(v):
                quotient.add(v)
                chains.append((v, j))
    # weights of the chain vectors
    vectors = []                   # (weight, vector)
    total = 0
    for top, length in chains:
        for a in range(length):
            vectors.append((2 * a - (length - 1), powers[a] @ top))
            total += 1
    assert total == n, "Jordan chain extraction lost dimensions"
    spaces = {}
    for k in range(index, -index - 1, -1):
        cols = [v for wt, v in vectors if wt >= k]
        basis = zeros(n, len(cols))
        for i, v in enumerate(cols):
            basis[:, i] = v
        spaces[k] = basis
    if index == 0:
        spaces[0] = eye(n)
    return WeightFiltration(n, index, spaces)
