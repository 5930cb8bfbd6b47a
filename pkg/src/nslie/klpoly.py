"""Kazhdan-Lusztig polynomials and graded dimensions.

The primary computation runs in the Hecke algebra with the v-normalization:
the self-dual basis element b_w is expanded in the standard basis as
b_w = sum_x h_{x,w}(v) H_x, computed by the one-letter recursion

    b_u b_s = b_w + sum of mu(z,u) b_z   over z < w with zs < z,

peeling correction terms by their constant coefficients.  The classical
polynomials are recovered through h_{x,w}(v) = v^{l(w)-l(x)} p_{x,w}(v^-2).

An independent oracle (R-polynomials plus triangular inversion) validates
the recursion on small ranks; the two routes share no code beyond the
Laurent arithmetic.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .coxeter import GroupElement, bruhat_leq, canonical_word, lower_interval
from .laurent import LaurentPoly

__all__ = [
    "kl_basis",
    "kl_polynomial",
    "h_polynomial",
    "mu_coefficient",
    "ih_graded_dimension",
    "carrell_peterson",
    "kl_polynomial_via_r",
    "r_polynomial",
    "hecke_product_with_generator",
    "save_cache",
    "load_cache",
]

_ONE = LaurentPoly.one()


def _add(table, el, poly):
    cur = table.get(el)
    table[el] = poly if cur is None else cur + poly


def kl_basis(w: GroupElement):
    """{x: h_{x,w}} for the self-dual basis element of w.  Memoized."""
    sys = w.system
    cached = sys.kl_cache.get(w.key)
    if cached is not None:
        return cached
    if w.length() == 0:
        result = {w: _ONE}
    else:
        s_idx = min(w.right_descents())
        s = sys.simple_reflection(s_idx)
        u = w * s
        c = {}
        for x, p in kl_basis(u).items():
            xs = x * s
            if xs.length() > x.length():
                _add(c, xs, p)
                _add(c, x, p.shift(1))
            else:
                _add(c, xs, p)
                _add(c, x, p.shift(-1))
        for z in sorted(c, key=lambda el: -el.length()):
            if z == w:
                continue
            mu = c[z].coefficient(0)
            if mu != 0:
                for y, q in kl_basis(z).items():
                    _add(c, y, -mu * q)
        result = {x: p for x, p in c.items() if not p.is_zero()}
    sys.kl_cache[w.key] = result
    return result


def h_polynomial(x: GroupElement, w: GroupElement) -> LaurentPoly:
    """h_{x,w}(v); zero when x is not below w."""
    return kl_basis(w).get(x, LaurentPoly.zero())


def mu_coefficient(x: GroupElement, w: GroupElement) -> int:
    """Coefficient of v in h_{x,w}; the edge weight of the KL graph."""
    return h_polynomial(x, w).coefficient(1)


def kl_polynomial(x: GroupElement, w: GroupElement) -> LaurentPoly:
    """p_{x,w} as a polynomial in q (zero polynomial when x not<= w)."""
    h = h_polynomial(x, w)
    if h.is_zero():
        return LaurentPoly.zero()
    d = w.length() - x.length()
    coeffs = {}
    for k, c in h.items():
        num = d - k
        assert num >= 0 and num % 2 == 0, (
            f"h-polynomial exponent {k} incompatible with length gap {d}"
        )
        coeffs[num // 2] = c
    return LaurentPoly(coeffs)


def ih_graded_dimension(w: GroupElement) -> LaurentPoly:
    """Graded dimension sum_x h_{x,w}(v) v^{-l(x)}; palindromic."""
    total = LaurentPoly.zero()
    for x, h in kl_basis(w).items():
        total = total + h.shift(-x.length())
    return total


def carrell_peterson(w: GroupElement):
    """Rational smoothness report; asserts the two clauses agree.

    poincare_symmetric: the length histogram of {v <= w} is palindromic.
    kl_trivial: every p_{v,w} is the constant 1.
    """
    _, hist = lower_interval(w)
    poincare_symmetric = hist == hist[::-1]
    table = kl_basis(w)
    kl_trivial = len(table) == sum(hist) and all(
        h == LaurentPoly.monomial(w.length() - x.length())
        for x, h in table.items()
    )
    assert poincare_symmetric == kl_trivial, (
        "Poincare symmetry and KL triviality disagree; implementation bug"
    )
    return {
        "poincare_symmetric": poincare_symmetric,
        "kl_trivial": kl_trivial,
        "rationally_smooth": poincare_symmetric and kl_trivial,
    }


def hecke_product_with_generator(s_idx: int, w: GroupElement):
    """Expansion of b_s b_w as (leading element, {z: multiplicity}).

    Requires s w > w.  The multiplicity of b_z is mu(z,w), nonzero only for
    z with sz < z; the leading term is b_{sw}.
    """
    sys = w.system
    s = sys.simple_reflection(s_idx)
    sw = s * w
    assert sw.length() == w.length() + 1, "generator must increase length"
    corrections = {}
    for z, h in kl_basis(w).items():
        sz = s * z
        if sz.length() < z.length():
            mu = h.coefficient(1)
            if mu:
                corrections[z] = mu
    return sw, corrections


# -- independent oracle ------------------------------------------------------


def r_polynomial(x: GroupElement, w: GroupElement, _memo=None) -> LaurentPoly:
    """R_{x,w}(q) by the standard descent recursion."""
    if _memo is None:
        _memo = x.system.__dict__.setdefault("_r_memo", {})
    key = (x.key, w.key)
    if key in _memo:
        return _memo[key]
    if x == w:
        result = _ONE
    elif not bruhat_leq(x, w):
        result = LaurentPoly.zero()
    else:
        s_idx = min(w.right_descents())
        s = w.system.simple_reflection(s_idx)
        ws = w * s
        xs = x * s
        if xs.length() < x.length():
            result = r_polynomial(xs, ws, _memo)
        else:
            q = LaurentPoly.monomial(1)
            qm1 = q - _ONE
            result = qm1 * r_polynomial(x, ws, _memo) + q * r_polynomial(xs, ws, _memo)
    _memo[key] = result
    return result


def kl_polynomial_via_r(x: GroupElement, w: GroupElement) -> LaurentPoly:
    """p_{x,w} recovered from R-polynomials by triangular inversion.

    Uses q^{l(w)-l(x)} bar(P_{x,w}) = sum_{x<=y<=w} R_{x,y} P_{y,w} and the
    degree bound deg P <= (l(w)-l(x)-1)/2, which splits the identity into
    disjoint exponent ranges.
    """
    if not bruhat_leq(x, w):
        return LaurentPoly.zero()
    interval = [y for y in lower_interval(w)[0] if bruhat_leq(x, y)]
    interval.sort(key=lambda y: -y.length())
    p_table = {w.key: _ONE}
    for y in interval:
        if y.key in p_table:
            continue
        d = w.length() - y.length()
        f = LaurentPoly.zero()
        for z in interval:
            if z.length() <= y.length() or z.key not in p_table:
                continue
            if not bruhat_leq(y, z):
                continue
            f = f + r_polynomial(y, z) * p_table[z.key]
        low = {}
        for k, c in f.items():
            if 2 * k < d:
                low[k] = -c
            elif 2 * k == d:
                assert c == 0, "R-inversion parity failure"
        p = LaurentPoly(low)
        check = p.bar().shift(0)
        # verify the high part: q^d bar(P) must match the rest of F
        high = LaurentPoly({d - k: c for k, c in p.items()})
        rest = f + p
        assert rest == high, "R-inversion consistency failure"
        p_table[y.key] = p
    return p_table[x.key]


# -- optional on-disk cache ---------------------------------------------------


def save_cache(system, path):
    """Dump the h-polynomial tables as JSON keyed by reduced words."""
    data = {}
    for wkey, table in system.kl_cache.items():
        wword = None
        entries = []
        for x, h in table.items():
            if wword is None:
                pass
            entries.append([
                ",".join(map(str, canonical_word(x))),
                dict((str(k), c) for k, c in h.items()),
            ])
        # recover w's word from any stored element of its own table
        for x in table:
            if x.key == wkey:
                wword = ",".join(map(str, canonical_word(x)))
        if wword is None:
            continue
        data[wword] = entries
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, sort_keys=True)


def load_cache(system, path):
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    for wword, entries in data.items():
        w = system.element_from_word(_parse(wword))
        table = {}
        for xword, coeffs in entries:
            x = system.element_from_word(_parse(xword))
            table[x] = LaurentPoly({int(k): c for k, c in coeffs.items()})
        system.kl_cache[w.key] = table


def _parse(word):
    return tuple(int(t) for t in word.split(",") if t != "")
