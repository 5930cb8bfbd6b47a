"""Schubert calculus in the coinvariant ring.

The cohomology of the flag variety carries the Schubert basis {Q_v}; degree-2
elements act through the Chevalley formula

    lambda . Q_v  =  sum over positive roots g with l(s_g v) = l(v) + 1
                     of  2 (v lambda, g) / (g, g)  Q_{s_g v}.

Restricting to {Q_v : v <= w} (coefficients on Q_z with z not<= w dropped)
gives the cohomology module of the Schubert variety of w, graded so degrees
run from -l(w) to l(w) in steps of 2.

The degree-4 invariant of an irreducible system is carried by the
coefficient table c_st = (a_s, a_t) / ((a_s,a_s)(a_t,a_t)); the resulting
operator annihilates every cohomology module, which is one of the standing
sanity checks of the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .coxeter import CoxeterSystem, GroupElement, bruhat_leq, canonical_word, lower_interval
from .graded import GradedModule, _zero_block

__all__ = [
    "WeightVector",
    "SchubertVector",
    "CohomologyModule",
    "chevalley_multiply",
    "killing_element",
    "killing_coefficients",
    "build_cohomology_module",
    "ample_weight",
]


@dataclass(frozen=True)
class WeightVector:
    """A weight in the fundamental-weight basis {Q_s}."""

    system: CoxeterSystem
    coords: tuple

    def root_coords(self):
        """Coordinates in the simple-root basis."""
        fw = self.system.fundamental_weights()
        n = self.system.rank
        out = [Fraction(0)] * n
        for s, c in enumerate(self.coords):
            if c:
                for i in range(n):
                    out[i] += Fraction(c) * fw[s][i]
        return tuple(out)

    def is_ample(self) -> bool:
        """Strictly positive pairing with every simple root."""
        sys = self.system
        rc = self.root_coords()
        for t in range(sys.rank):
            alpha = tuple(1 if i == t else 0 for i in range(sys.rank))
            if sys.pairing(rc, alpha) <= 0:
                return False
        return True

    def __add__(self, other):
        return WeightVector(
            self.system,
            tuple(Fraction(a) + Fraction(b) for a, b in zip(self.coords, other.coords)),
        )


class SchubertVector:
    """A finite rational combination of Schubert classes."""

    def __init__(self, system, coeffs=None):
        self.system = system
        self.coeffs = {}
        if coeffs:
            for el, c in coeffs.items():
                c = Fraction(c)
                if c != 0:
                    self.coeffs[el] = c

    def coefficient(self, el) -> Fraction:
        return self.coeffs.get(el, Fraction(0))

    def is_homogeneous(self):
        lengths = {el.length() for el in self.coeffs}
        return len(lengths) <= 1

    def degree(self):
        """Cohomological degree 2*l(v) when homogeneous, else None."""
        lengths = {el.length() for el in self.coeffs}
        if len(lengths) == 1:
            return 2 * lengths.pop()
        return None

    def __add__(self, other):
        out = dict(self.coeffs)
        for el, c in other.coeffs.items():
            out[el] = out.get(el, Fraction(0)) + c
        return SchubertVector(self.system, out)

    def __eq__(self, other):
        return isinstance(other, SchubertVector) and self.coeffs == other.coeffs

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for el, c in sorted(self.coeffs.items(), key=lambda p: (p[0].length(), p[0].key)):
            word = ",".join(f"s{i}" for i in canonical_word(el)) or "e"
            terms.append(f"{c}*Q[{word}]")
        return " + ".join(terms)


def fundamental_weight(system, s) -> WeightVector:
    return WeightVector(
        system, tuple(Fraction(1 if t == s else 0) for t in range(1, system.rank + 1))
    )


def ample_weight(system) -> WeightVector:
    """rho = sum of the fundamental weights; lies in the ample cone."""
    return WeightVector(system, tuple(Fraction(1) for _ in range(system.rank)))


def chevalley_multiply(lam: WeightVector, v: GroupElement, system=None) -> SchubertVector:
    """Multiply Q_v by the degree-2 class of the weight lam."""
    sys = system or v.system
    rc = lam.root_coords()
    vlam = v.apply(rc)
    out = {}
    for gamma in sys.positive_roots():
        refl = sys.reflection(gamma)
        target = refl * v
        if target.length() != v.length() + 1:
            continue
        coeff = 2 * sys.pairing(vlam, gamma) / sys.pairing(gamma, gamma)
        if coeff != 0:
            out[target] = out.get(target, Fraction(0)) + coeff
    return SchubertVector(sys, out)


def killing_coefficients(system: CoxeterSystem):
    """The table c_st = (a_s,a_t)/((a_s,a_s)(a_t,a_t)) on an irreducible system."""
    comps = _dynkin_components(system)
    if len(comps) != 1:
        raise ValueError(
            "the degree-4 invariant is per irreducible component; "
            "use killing_element for products"
        )
    return _killing_table(system, comps[0])


def _dynkin_components(system):
    seen = set()
    comps = []
    for start in range(1, system.rank + 1):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(1, system.rank + 1):
                if j not in comp and system.coxeter_matrix[i - 1][j - 1] > 2:
                    comp.add(j)
                    stack.append(j)
        seen |= comp
        comps.append(sorted(comp))
    return comps


def _killing_table(system, nodes):
    table = {}
    for s in nodes:
        for t in nodes:
            bs = system.bilinear[s - 1, t - 1]
            table[(s, t)] = bs / (
                system.bilinear[s - 1, s - 1] * system.bilinear[t - 1, t - 1]
            )
    return table


def killing_element(system: CoxeterSystem):
    """One coefficient table per irreducible component."""
    return [_killing_table(system, nodes) for nodes in _dynkin_components(system)]


def killing_matrix(system: CoxeterSystem, nodes=None):
    nodes = nodes or list(range(1, system.rank + 1))
    m = np.empty((len(nodes), len(nodes)), dtype=object)
    for i, s in enumerate(nodes):
        for j, t in enumerate(nodes):
            m[i, j] = system.bilinear[s - 1, t - 1] / (
                system.bilinear[s - 1, s - 1] * system.bilinear[t - 1, t - 1]
            )
    return m


def killing_operator_blocks(module: GradedModule, table):
    """Blocks of sum c_st W_s W_t acting on a graded module (degree +4)."""
    out = {}
    for k in module.degrees:
        if module.dim(k + 4) == 0:
            continue
        blk = _zero_block(module.dim(k + 4), module.dim(k))
        for (s, t), c in table.items():
            blk = blk + c * (module.action_block(s, k + 2) @ module.action_block(t, k))
        out[k] = blk
    return out


def killing_annihilates(module: GradedModule) -> bool:
    """True iff every component's degree-4 invariant acts as zero."""
    for table in killing_element(module.system):
        for blk in killing_operator_blocks(module, table).values():
            if any(x != 0 for x in blk.flat):
                return False
    return True


@dataclass
class CohomologyModule:
    """Cohomology of a Schubert variety on the basis {Q_v : v <= w}."""

    w: GroupElement
    basis: list                   # elements v <= w, sorted by (length, key)
    module: GradedModule
    index: dict                   # element key -> position in basis

    def basis_vector_index(self, v):
        return self.index[v.key]


def build_cohomology_module(w: GroupElement) -> CohomologyModule:
    sys = w.system
    elements, hist = lower_interval(w)
    lw = w.length()
    index = {el.key: i for i, el in enumerate(elements)}
    # positions within each degree
    dims = {}
    pos_in_degree = {}
    for el in elements:
        k = 2 * el.length() - lw
        pos_in_degree[el.key] = dims.get(k, 0)
        dims[k] = dims.get(k, 0) + 1
    labels = {k: [None] * d for k, d in dims.items()}
    for el in elements:
        k = 2 * el.length() - lw
        labels[k][pos_in_degree[el.key]] = ",".join(f"s{i}" for i in canonical_word(el)) or "e"
    action = {}
    for s in range(1, sys.rank + 1):
        lam = fundamental_weight(sys, s)
        blocks = {}
        for el in elements:
            k = 2 * el.length() - lw
            if dims.get(k + 2, 0) == 0:
                continue
            if k not in blocks:
                blocks[k] = _zero_block(dims[k + 2], dims[k])
            prod = chevalley_multiply(lam, el, sys)
            for target, c in prod.coeffs.items():
                if target.key in index:  # truncation: drop Q_z with z not<= w
                    blocks[k][pos_in_degree[target.key], pos_in_degree[el.key]] = c
        action[s] = blocks
    module = GradedModule(system=sys, dims=dims, action=action, labels=labels,
                          bottom_degree=-lw)
    return CohomologyModule(w=w, basis=elements, module=module, index=index)
