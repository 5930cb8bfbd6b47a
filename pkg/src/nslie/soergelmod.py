"""Bott-Samelson modules and their indecomposable summands.

The Bott-Samelson module of a word is built one letter at a time, from the
right.  Adjoining a letter s doubles the module: on the basis
{1 (x) n, (a_s/2) (x) n} the action of a weight l uses the exact splitting
l = (l + s l)/2 + <l, a_s^vee> a_s/2, whose invariant half acts inside and
whose multiple of a_s/2 shuttles between the two halves (with a_s^2/4
falling back inside).  Degrees are kept centered throughout, so a word of
length l spans degrees -l .. l with graded dimension (v + v^-1)^l.

The intersection pairing against the top class is diagonal in this basis:
two basis tensors pair to 1 exactly when their bit patterns are
complementary.  The signed form twists this pairing by (-1)^{k(k-1)/2} on
the first argument's degree and scales by the top-class normalization.

The indecomposable summand containing the lowest vector is extracted along
the same chain.  After each doubling, the Hecke algebra says exactly which
smaller summands split off (the mu-corrections of b_s b_v); when there are
none the module is kept whole, otherwise the degree-0 endomorphisms
commuting with the weight action are computed blockwise, the radical is
removed by the trace form of the regular representation, and the unique
idempotent acting as the identity on the bottom class is lifted exactly by
Newton iteration and applied.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .coxeter import GroupElement, canonical_word
from .graded import GradedModule, _zero_block, graded_hom_basis
from .klpoly import hecke_product_with_generator, ih_graded_dimension
from .laurent import LaurentPoly
from .linalg import (
    SpanBasis,
    eye,
    inverse,
    mat_rank,
    nullspace,
    rref,
    solve_matrix,
    zeros,
)

__all__ = [
    "SoergelSummand",
    "build_bott_samelson",
    "split_indecomposable",
    "indecomposable_module",
    "intersection_form_on_summand",
    "signature_middle",
]


def _form_sign(k) -> int:
    """(-1)^{k(k-1)/2} for the centered degree k of the first argument."""
    return -1 if (k * (k - 1) // 2) % 2 else 1


class _Chain:
    """Mutable carrier threaded through the letter-by-letter construction.

    Holds per-degree dimensions, the action blocks of every simple root,
    the unsigned top-class pairing T (degree k against -k), and optionally
    the inclusion/projection of the current carrier into the ambient
    Bott-Samelson module.
    """

    def __init__(self, system, track_embedding=False):
        self.system = system
        self.dims = {0: 1}
        n = system.rank
        self.root_act = {t: {} for t in range(1, n + 1)}
        self.T = {0: eye(1)}
        self.labels = {0: [()]}
        self.track = track_embedding
        if track_embedding:
            self.ambient_dims = {0: 1}
            self.incl = {0: eye(1)}
            self.proj = {0: eye(1)}
        self.letters_used = 0

    def dim(self, k):
        return self.dims.get(k, 0)

    def root_block(self, t, k):
        blk = self.root_act[t].get(k)
        if blk is None:
            blk = _zero_block(self.dim(k + 2), self.dim(k))
        return blk

    def weight_blocks(self, root_coords):
        out = {}
        for k in list(self.dims):
            if self.dim(k) == 0 or self.dim(k + 2) == 0:
                continue
            blk = _zero_block(self.dim(k + 2), self.dim(k))
            for t, c in enumerate(root_coords, start=1):
                if c != 0:
                    blk = blk + Fraction(c) * self.root_block(t, k)
            out[k] = blk
        return out

    def theta(self, s_idx):
        """Adjoin the letter s on the left, doubling every degree."""
        sys = self.system
        n = sys.rank
        old_dims = dict(self.dims)
        new_dims = {}
        for k in old_dims:
            for shift in (-1, 1):
                new_dims[k + shift] = new_dims.get(k + shift, 0) + old_dims[k]

        def parts(k):
            """Sizes of the (1 (x) -) and (delta (x) -) sub-blocks at degree k."""
            return old_dims.get(k + 1, 0), old_dims.get(k - 1, 0)

        a_s = {k: self.root_block(s_idx, k) for k in old_dims}
        ksq = {}
        for k in old_dims:
            if old_dims.get(k + 4, 0) and old_dims.get(k + 2, 0):
                ksq[k] = a_s[k + 2] @ a_s[k] / Fraction(4)
        new_act = {}
        for t in range(1, n + 1):
            c_t = sys.cartan_integer(s_idx, t)
            blocks = {}
            for k in new_dims:
                if new_dims.get(k + 2, 0) == 0 or new_dims[k] == 0:
                    continue
                s0, s1 = parts(k)
                t0, t1 = parts(k + 2)
                blk = _zero_block(t0 + t1, s0 + s1)
                # mu_t = a_t - (c_t/2) a_s acts within each half
                if s0 and t0:
                    mu = self.root_block(t, k + 1) - Fraction(c_t, 2) * a_s[k + 1]
                    blk[:t0, :s0] = mu
                if s1 and t1:
                    mu = self.root_block(t, k - 1) - Fraction(c_t, 2) * a_s[k - 1]
                    blk[t0:, s0:] = mu
                # c_t moves 1 (x) n to delta (x) n
                if s0 and t1 and c_t:
                    for i in range(s0):
                        blk[t0 + i, i] = blk[t0 + i, i] + c_t
                # c_t (a_s^2/4) moves delta (x) n back to 1 (x) n
                if s1 and t0 and c_t:
                    kk = ksq.get(k - 1)
                    if kk is not None:
                        blk[:t0, s0:] = blk[:t0, s0:] + c_t * kk
                blocks[k] = blk
            new_act[t] = blocks
        new_T = {}
        for k in new_dims:
            if new_dims.get(-k, 0) == 0:
                continue
            s0, s1 = parts(k)
            o0, o1 = parts(-k)
            blk = _zero_block(s0 + s1, o0 + o1)
            # only mixed halves pair: 1 (x) n against delta (x) m and back
            told = self.T.get(k + 1)
            if s0 and o1 and told is not None:
                blk[:s0, o0:] = told
            told = self.T.get(k - 1)
            if s1 and o0 and told is not None:
                blk[s0:, :o0] = told
            new_T[k] = blk
        if self.labels is not None:
            new_labels = {}
            for k in new_dims:
                lab = []
                for b in self.labels.get(k + 1, []):
                    lab.append((0,) + b)
                for b in self.labels.get(k - 1, []):
                    lab.append((1,) + b)
                new_labels[k] = lab
            self.labels = new_labels
        if self.track:
            amb = lambda k: self.ambient_dims.get(k, 0)
            new_ambient = {}
            for k in self.ambient_dims:
                for shift in (-1, 1):
                    new_ambient[k + shift] = new_ambient.get(k + shift, 0) + amb(k)
            new_incl = {}
            new_proj = {}
            for k in new_dims:
                s0, s1 = parts(k)
                a0, a1 = amb(k + 1), amb(k - 1)
                blk = _zero_block(a0 + a1, s0 + s1)
                pblk = _zero_block(s0 + s1, a0 + a1)
                if s0 and a0:
                    blk[:a0, :s0] = self.incl[k + 1]
                    pblk[:s0, :a0] = self.proj[k + 1]
                if s1 and a1:
                    blk[a0:, s0:] = self.incl[k - 1]
                    pblk[s0:, a0:] = self.proj[k - 1]
                new_incl[k] = blk
                new_proj[k] = pblk
            self.ambient_dims = new_ambient
            self.incl, self.proj = new_incl, new_proj
        self.dims = new_dims
        self.root_act = new_act
        self.T = new_T
        self.letters_used += 1

    def restrict(self, basis, idem=None):
        """Restrict the carrier to the image of an idempotent.

        ``basis`` gives per-degree column bases of the invariant subspace;
        ``idem`` is the idempotent's block dict, needed to carry the
        projection when the ambient embedding is tracked.
        """
        n = self.system.rank
        new_dims = {k: u.shape[1] for k, u in basis.items() if u.shape[1] > 0}
        new_act = {t: {} for t in range(1, n + 1)}
        for t in range(1, n + 1):
            for k, u in basis.items():
                if new_dims.get(k, 0) == 0 or new_dims.get(k + 2, 0) == 0:
                    continue
                img = self.root_block(t, k) @ u
                coords = solve_matrix(basis[k + 2], img)
                assert coords is not None, "subspace is not action-invariant"
                new_act[t][k] = coords
        new_T = {}
        for k, u in basis.items():
            if new_dims.get(k, 0) == 0 or new_dims.get(-k, 0) == 0:
                continue
            new_T[k] = u.T @ self.T[k] @ basis[-k]
        if self.track:
            assert idem is not None
            new_incl = {}
            new_proj = {}
            for k, u in basis.items():
                if new_dims.get(k, 0) == 0:
                    continue
                new_incl[k] = self.incl[k] @ u
                new_proj[k] = (_left_inverse(u) @ idem[k]) @ self.proj[k]
            self.incl, self.proj = new_incl, new_proj
        self.dims = new_dims
        self.root_act = new_act
        self.T = new_T
        self.labels = None

    def to_graded_module(self, form_scale=None, product=None):
        sys = self.system
        fw = sys.fundamental_weights()
        action = {}
        for s in range(1, sys.rank + 1):
            action[s] = self.weight_blocks(fw[s - 1])
        form = None
        if form_scale is not None:
            form = {}
            for k, blk in self.T.items():
                form[k] = _form_sign(k) * form_scale * blk
        labels = None
        if self.labels is not None:
            labels = {
                k: ["".join(map(str, b)) for b in labs]
                for k, labs in self.labels.items()
            }
        return GradedModule(
            system=sys,
            dims=dict(self.dims),
            action=action,
            labels=labels,
            form=form,
            product=product,
            bottom_degree=min(self.dims),
        )


def _left_inverse(u):
    """Exact left inverse of a full-column-rank matrix."""
    m, n = u.shape
    aug = np.concatenate([u, eye(m)], axis=1)
    r, piv = rref(aug)
    assert piv[:n] == list(range(n)), "matrix does not have full column rank"
    return r[:n, n:]


# -- the commutant and its distinguished idempotent -------------------------


def _degree_zero_commutant(chain: _Chain):
    """Basis of degree-0 endomorphisms commuting with the weight action."""
    n = chain.system.rank
    gens = [dict(chain.root_act[t]) for t in range(1, n + 1)]
    dims = {k: d for k, d in chain.dims.items() if d > 0}
    return graded_hom_basis(dims, gens, dims, gens)


def _blocks_mul(a, b, dims):
    out = {}
    for k in a:
        if dims.get(k, 0) == 0:
            continue
        ab, bb = a.get(k), b.get(k)
        if ab is None or bb is None:
            continue
        out[k] = ab @ bb
    return out


def _blocks_flat(blocks, degrees, dims):
    parts = []
    for k in degrees:
        blk = blocks.get(k)
        if blk is None:
            blk = _zero_block(dims[k], dims[k])
        parts.append(np.asarray(blk, dtype=object).reshape(-1))
    return np.concatenate(parts) if parts else np.array([], dtype=object)


def _bottom_idempotent(chain: _Chain):
    """The idempotent of the commutant fixing the bottom class, exactly.

    The bottom degree is one-dimensional, so evaluation there is an algebra
    character; its block in the semisimple quotient is a copy of the
    rationals, and the Newton iteration e -> 3e^2 - 2e^3 lifts the quotient
    idempotent through the nilpotent radical in finitely many steps.
    """
    basis = _degree_zero_commutant(chain)
    m = len(basis)
    assert m >= 1
    dims = {k: d for k, d in chain.dims.items() if d > 0}
    degrees = sorted(dims)
    bottom = degrees[0]
    assert dims[bottom] == 1, "bottom degree must be one-dimensional"
    flat = [_blocks_flat(b, degrees, dims) for b in basis]
    span = SpanBasis(len(flat[0]))
    for v in flat:
        added = span.add(v)
        assert added, "commutant basis is linearly dependent"

    def coords(blocks):
        c = span.coords_in_generators(_blocks_flat(blocks, degrees, dims))
        assert c is not None, "commutant is not closed under composition"
        return c

    # structure constants and the regular-representation trace form
    left_mult = []
    for i in range(m):
        li = zeros(m, m)
        for j in range(m):
            li[:, j] = coords(_blocks_mul(basis[i], basis[j], dims))
        left_mult.append(li)
    gram = zeros(m, m)
    for i in range(m):
        for j in range(m):
            gram[i, j] = sum(
                (left_mult[i] @ left_mult[j])[a, a] for a in range(m)
            )
    radical = nullspace(gram)
    rad_span = SpanBasis(m)
    for v in radical:
        rad_span.add(v)

    def chi(cvec):
        """Character: the scalar action on the bottom class."""
        val = Fraction(0)
        for i in range(m):
            if cvec[i] != 0:
                blk = basis[i].get(bottom)
                if blk is not None:
                    val += cvec[i] * blk[0, 0]
        return val

    # coordinates of a kernel basis of chi (radical directions included)
    chi_row = zeros(1, m)
    for i in range(m):
        blk = basis[i].get(bottom)
        chi_row[0, i] = blk[0, 0] if blk is not None else Fraction(0)
    ker_chi = nullspace(chi_row)
    # Solve for x with chi(x) = 1 and x.k, k.x in the radical for k in
    # ker(chi).  Modulo the radical this pins x to the one-dimensional
    # block where chi is nonzero, whose idempotent is the seed to lift.
    rows = []
    rhs = []
    for kvec in ker_chi:
        # coords(E_i . k) = L_i k  and  coords(k . E_i) = (sum_j k_j L_j) e_i
        nk = zeros(m, m)
        for j in range(m):
            if kvec[j] != 0:
                nk = nk + kvec[j] * left_mult[j]
        for side in ("right", "left"):
            cols = []
            for i in range(m):
                vec = left_mult[i] @ kvec if side == "right" else nk[:, i]
                red, _ = rad_span._reduce(vec)
                cols.append(red)
            for r_idx in range(m):
                row = [cols[i][r_idx] for i in range(m)]
                if any(v != 0 for v in row):
                    rows.append(row)
                    rhs.append(Fraction(0))
    rows.append([chi_row[0, i] for i in range(m)])
    rhs.append(Fraction(1))
    a = np.array(rows, dtype=object)
    bvec = np.array(rhs, dtype=object)
    from .linalg import solve

    x = solve(a, bvec)
    assert x is not None, "no idempotent fixes the bottom class"
    # Newton lifting e -> 3e^2 - 2e^3 through the radical
    e = {}
    for k in degrees:
        blk = _zero_block(dims[k], dims[k])
        for i in range(m):
            if x[i] != 0 and basis[i].get(k) is not None:
                blk = blk + x[i] * basis[i][k]
        e[k] = blk
    for _ in range(m + 60):
        e2 = _blocks_mul(e, e, dims)
        diff = _blocks_flat(e2, degrees, dims) - _blocks_flat(e, degrees, dims)
        if all(v == 0 for v in diff.flat):
            break
        e3 = _blocks_mul(e2, e, dims)
        e = {
            k: 3 * e2[k] - 2 * e3[k]
            for k in e
        }
    else:
        raise AssertionError("idempotent lifting did not converge")
    assert e[bottom][0, 0] == 1, "lifted idempotent does not fix the bottom class"
    return e


def _image_basis(e_blocks, dims):
    """Per-degree column bases of an idempotent's image."""
    out = {}
    for k, d in dims.items():
        if d == 0:
            continue
        blk = e_blocks.get(k)
        if blk is None:
            out[k] = zeros(d, 0)
            continue
        r, piv = rref(blk.T)
        cols = zeros(d, len(piv))
        for i in range(len(piv)):
            cols[:, i] = r[i]
        out[k] = cols
    return out


def _clone_chain(chain: _Chain) -> _Chain:
    new = _Chain.__new__(_Chain)
    new.system = chain.system
    new.dims = dict(chain.dims)
    new.root_act = {t: dict(b) for t, b in chain.root_act.items()}
    new.T = dict(chain.T)
    new.labels = None
    new.track = False
    new.letters_used = chain.letters_used
    return new


def _peel_to_expected(chain: _Chain, expected: LaurentPoly, corrections):
    """Cut the chain down to the summand through the bottom class."""
    current = LaurentPoly({k: d for k, d in chain.dims.items()})
    if current == expected:
        assert not corrections, "Hecke predicts corrections but dimensions match"
        return None
    e = _bottom_idempotent(chain)
    basis = _image_basis(e, chain.dims)
    chain.restrict(basis, e)
    got = LaurentPoly({k: d for k, d in chain.dims.items()})
    assert got == expected, (
        f"summand graded dimension {got.format()} != expected {expected.format()}"
    )
    return e


def _indecomposable_chain(w: GroupElement) -> _Chain:
    """The summand through the bottom class, built along the canonical word."""
    sys = w.system
    cached = sys.soergel_cache.get(w.key)
    if cached is not None:
        return cached
    if w.length() == 0:
        chain = _Chain(sys)
    else:
        s = min(w.left_descents())
        v = sys.simple_reflection(s) * w
        parent = _indecomposable_chain(v)
        chain = _clone_chain(parent)
        chain.theta(s)
        lead, corrections = hecke_product_with_generator(s, v)
        assert lead == w
        _peel_to_expected(chain, ih_graded_dimension(w), corrections)
    sys.soergel_cache[w.key] = chain
    return chain


def indecomposable_module(w: GroupElement) -> GradedModule:
    """The indecomposable Soergel module of w as a graded module with form."""
    chain = _indecomposable_chain(w)
    scale = Fraction(1, 2 ** w.length())
    return chain.to_graded_module(form_scale=scale)


# -- Bott-Samelson with its ring structure -----------------------------------


class _BSProduct:
    """Recursive componentwise product on the Bott-Samelson bit basis."""

    def __init__(self, steps, labels_by_degree):
        # steps in application order (last letter first):
        # (letter, inner dims, inner alpha^2/4 blocks)
        self.steps = steps
        self.index = {}
        for k, labs in labels_by_degree.items():
            for i, b in enumerate(labs):
                self.index[b] = (k, i)
        self.labels = labels_by_degree

    def _embed(self, level, prefix, vec):
        inner_dims = self.steps[level - 1][1]
        out = {}
        for (d, i), c in vec.items():
            if prefix == 0:
                out[(d - 1, i)] = c
            else:
                out[(d + 1, inner_dims.get(d + 2, 0) + i)] = c
        return out

    def _apply_blocks(self, blocks, vec):
        out = {}
        for (d, i), c in vec.items():
            blk = blocks.get(d)
            if blk is None:
                continue
            for r in range(blk.shape[0]):
                val = blk[r, i] * c
                if val != 0:
                    key = (d + 4, r)
                    out[key] = out.get(key, Fraction(0)) + val
        return {k: v for k, v in out.items() if v != 0}

    def _prod(self, level, b1, b2):
        if level == 0:
            return {(0, 0): Fraction(1)}
        x, y = b1[0], b2[0]
        inner = self._prod(level - 1, b1[1:], b2[1:])
        if x == 0 and y == 0:
            return self._embed(level, 0, inner)
        if x != y:
            return self._embed(level, 1, inner)
        moved = self._apply_blocks(self.steps[level - 1][2], inner)
        return self._embed(level, 0, moved)

    def basis_product(self, ref1, ref2):
        """Product of two basis elements, as {(degree, index): coeff}."""
        b1 = self.labels[ref1[0]][ref1[1]]
        b2 = self.labels[ref2[0]][ref2[1]]
        return self._prod(len(self.steps), b1, b2)

    def __call__(self, ref1, ref2):
        return self.basis_product(ref1, ref2)


def build_bott_samelson(system, word) -> GradedModule:
    """The Bott-Samelson module of a word (need not be reduced)."""
    word = tuple(word)
    for s in word:
        if not 1 <= s <= system.rank:
            raise ValueError(f"letter {s} out of range 1..{system.rank}")
    chain = _Chain(system)
    steps = []
    for s in reversed(word):
        kblocks = {}
        for k in list(chain.dims):
            if chain.dim(k + 4) and chain.dim(k + 2):
                kblocks[k] = (
                    chain.root_block(s, k + 2) @ chain.root_block(s, k)
                ) / Fraction(4)
        steps.append((s, dict(chain.dims), kblocks))
        chain.theta(s)
    bit_labels = {k: list(labs) for k, labs in chain.labels.items()}
    product = _BSProduct(steps, bit_labels)
    module = chain.to_graded_module(
        form_scale=Fraction(1, 2 ** len(word)), product=product
    )
    return module


# -- the public splitting -----------------------------------------------------


@dataclass
class SoergelSummand:
    """The summand of a Bott-Samelson module through the bottom class."""

    w: GroupElement
    provenance: tuple             # the reduced word used
    carrier: GradedModule         # the ambient Bott-Samelson module
    idempotent: dict              # degree -> block on the carrier
    module: GradedModule          # the summand with restricted action and form

    def idempotent_dense(self):
        return self.carrier.dense(self.idempotent, degree=0)

    def rank(self):
        return self.module.total_dim


def split_indecomposable(system, word) -> SoergelSummand:
    """Split the Bott-Samelson module of a reduced word at its bottom class.

    The extraction walks the word from the right; after each doubling the
    Hecke algebra decides whether smaller summands split off, and if so the
    distinguished idempotent is computed and applied.  The composite
    embedding is tracked, so the returned idempotent lives on the full
    Bott-Samelson carrier.
    """
    word = tuple(word)
    w = system.element_from_word(word)
    if w.length() != len(word):
        raise ValueError("split_indecomposable needs a reduced word")
    chain = _Chain(system, track_embedding=True)
    suffix = system.identity()
    for pos in range(len(word) - 1, -1, -1):
        s = word[pos]
        chain.theta(s)
        lead, corrections = hecke_product_with_generator(s, suffix)
        suffix = system.simple_reflection(s) * suffix
        assert lead == suffix
        _peel_to_expected(chain, ih_graded_dimension(suffix), corrections)
    assert suffix == w
    carrier = build_bott_samelson(system, word)
    idem = {}
    for k in carrier.degrees:
        if chain.dims.get(k, 0):
            idem[k] = chain.incl[k] @ chain.proj[k]
        else:
            idem[k] = _zero_block(carrier.dim(k), carrier.dim(k))
    summand = chain.to_graded_module(form_scale=Fraction(1, 2 ** len(word)))
    result = SoergelSummand(
        w=w, provenance=word, carrier=carrier, idempotent=idem, module=summand
    )
    _check_summand(result)
    return result


def _check_summand(s: SoergelSummand):
    carrier, idem = s.carrier, s.idempotent
    for k in carrier.degrees:
        e = idem[k]
        assert all(x == 0 for x in (e @ e - e).flat), "idempotent fails e^2 = e"
    for t in range(1, carrier.system.rank + 1):
        for k in carrier.degrees:
            if carrier.dim(k + 2) == 0:
                continue
            a = carrier.action_block(t, k)
            diff = idem[k + 2] @ a - a @ idem[k]
            assert all(x == 0 for x in diff.flat), (
                "idempotent does not commute with the weight action"
            )
    lw = s.w.length()
    assert mat_rank(idem[-lw]) == 1, "bottom class of the image is not a line"
    gdim = s.module.graded_dimension()
    assert gdim == ih_graded_dimension(s.w), "image has wrong graded dimension"


def intersection_form_on_summand(s: SoergelSummand):
    """The restricted form as a dense matrix; non-degenerate by construction."""
    mod = s.module if isinstance(s, SoergelSummand) else s
    phi = mod.form_dense()
    n = mod.total_dim
    assert mat_rank(phi) == n, "restricted intersection form is degenerate"
    lw = -mod.bottom_degree
    sign = -1 if lw % 2 else 1
    diff = phi.T - sign * phi
    assert all(x == 0 for x in diff.flat), (
        "form parity does not match the length of w"
    )
    return phi


def signature_middle(s, eta=None):
    """Signature of the form on the middle degree, computed two ways.

    Directly by congruence diagonalization of the exact symmetric middle
    block, and through the primitive-dimension count
    sum_i (dim M_{l-4i} - dim M_{l-4i+2}); the two must agree.
    """
    from .linalg import congruence_inertia

    mod = s.module if isinstance(s, SoergelSummand) else s
    lw = -mod.bottom_degree
    if lw % 2:
        raise ValueError("middle signature needs even length")
    middle = mod.form[0]
    pos, neg, null = congruence_inertia(middle)
    assert null == 0, "middle form is degenerate"
    expected_pos = 0
    for i in range(lw // 4 + 1):
        expected_pos += mod.dim(lw - 4 * i) - mod.dim(lw - 4 * i + 2)
    assert pos == expected_pos and neg == mod.dim(0) - expected_pos, (
        f"middle signature ({pos},{neg}) disagrees with the primitive count "
        f"({expected_pos},{mod.dim(0) - expected_pos})"
    )
    return pos, neg
