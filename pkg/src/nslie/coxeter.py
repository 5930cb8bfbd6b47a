"""Finite crystallographic Coxeter systems and their Weyl groups.

A system is constructed from a type string ("A3", "B2xG2", ...) or an
explicit Coxeter matrix.  Elements act on the reflection representation in
the basis of simple roots, where all matrices are integral, so equality,
hashing and length counts are exact.  The invariant bilinear form is
normalized so that short roots have squared length 2 in each irreducible
component.

Bruhat order is decided by the right-to-left greedy subword walk on a fixed
reduced word (echoing the combinatorial definition of the order via
subexpressions); the classical descent recursion is kept alongside as an
independent oracle for tests.
"""

from __future__ import annotations

import re
from fractions import Fraction

import numpy as np

from .linalg import frac_matrix, inverse

__all__ = [
    "CoxeterSystem",
    "GroupElement",
    "build_system",
    "multiply",
    "word_to_element",
    "bruhat_leq",
    "lower_interval",
    "descent_sets",
]

# 4*cos^2(pi/m) for the crystallographic bond orders
_BOND_VALUE = {2: 0, 3: 1, 4: 2, 6: 3}

DEFAULT_GROUP_CAP = 10**6


def _chain(n):
    """Edges of a path 1-2-...-n."""
    return [(i, i + 1) for i in range(1, n)]


def _simple_type_data(letter, n):
    """(edges with bond orders, squared lengths) for an irreducible type."""
    if letter == "A":
        if n < 1:
            raise ValueError("A_n needs n >= 1")
        bonds = {e: 3 for e in _chain(n)}
        lengths = {i: 2 for i in range(1, n + 1)}
    elif letter == "B":
        if n < 2:
            raise ValueError("B_n needs n >= 2")
        bonds = {e: 3 for e in _chain(n)}
        bonds[(n - 1, n)] = 4
        lengths = {i: 4 for i in range(1, n)}
        lengths[n] = 2
    elif letter == "C":
        if n < 2:
            raise ValueError("C_n needs n >= 2")
        bonds = {e: 3 for e in _chain(n)}
        bonds[(n - 1, n)] = 4
        lengths = {i: 2 for i in range(1, n)}
        lengths[n] = 4
    elif letter == "D":
        if n < 3:
            raise ValueError("D_n needs n >= 3")
        bonds = {e: 3 for e in _chain(n - 1)}
        bonds[(n - 2, n)] = 3
        lengths = {i: 2 for i in range(1, n + 1)}
    elif letter == "G":
        if n != 2:
            raise ValueError("only G2 exists")
        bonds = {(1, 2): 6}
        lengths = {1: 2, 2: 6}
    elif letter == "F":
        if n != 4:
            raise ValueError("only F4 exists")
        bonds = {(1, 2): 3, (2, 3): 4, (3, 4): 3}
        lengths = {1: 4, 2: 4, 3: 2, 4: 2}
    else:
        raise ValueError(f"unknown type letter {letter!r}")
    return bonds, lengths


def _bilinear_from(bonds, lengths, rank):
    """Invariant form from bond orders and squared root lengths."""
    b = np.empty((rank, rank), dtype=object)
    b[:] = Fraction(0)
    for i in range(rank):
        b[i, i] = Fraction(lengths[i + 1])
    for (i, j), m in bonds.items():
        val = _BOND_VALUE[m] * lengths[i] * lengths[j]
        root = _exact_sqrt(val)
        if root is None:
            raise ValueError(
                f"bond m={m} between roots of squared lengths "
                f"{lengths[i]}, {lengths[j]} is not crystallographic"
            )
        b[i - 1, j - 1] = Fraction(-root, 2)
        b[j - 1, i - 1] = Fraction(-root, 2)
    return b


def _exact_sqrt(n):
    if n < 0:
        return None
    r = int(round(n**0.5))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c * c == n:
            return c
    return None


def _lengths_from_coxeter_matrix(m, rank):
    """Propagate squared root lengths over each component; None if inconsistent.

    An m=3 bond forces equal lengths, m=4 a ratio of 2, m=6 a ratio of 3.
    Finite multi-laced components carry a single heavy bond, so picking the
    longer assignment when free is harmless (it swaps dual conventions at
    worst); genuinely inconsistent inputs are rejected here or later by the
    positive-definiteness check.
    """
    ratio = {3: 1, 4: 2, 6: 3}
    lengths = {}
    for start in range(1, rank + 1):
        if start in lengths:
            continue
        lengths[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(1, rank + 1):
                if j == i:
                    continue
                r = ratio.get(m[i - 1][j - 1])
                if r is None:
                    continue
                cands = (
                    {lengths[i]}
                    if r == 1
                    else {lengths[i] * r, lengths[i] / r}
                )
                if j in lengths:
                    if lengths[j] not in cands:
                        return None
                else:
                    lengths[j] = max(cands)
                    stack.append(j)
    # normalize each component so the short root has squared length 2
    for nodes in _components_from_matrix(m, rank):
        mn = min(lengths[i] for i in nodes)
        for i in nodes:
            val = 2 * lengths[i] / mn
            if val.denominator != 1:
                return None
            lengths[i] = int(val)
    return lengths


def _components_from_matrix(m, rank):
    seen = set()
    comps = []
    for start in range(1, rank + 1):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(1, rank + 1):
                if j != i and m[i - 1][j - 1] > 2 and j not in comp:
                    comp.add(j)
                    stack.append(j)
        seen |= comp
        comps.append(sorted(comp))
    return comps


class CoxeterSystem:
    """A finite crystallographic Coxeter system with exact root data.

    Simple reflections are indexed 1..rank following Bourbaki labels.
    Instances are immutable after construction and cache root data, the
    Bruhat memo table and KL tables keyed by element.
    """

    def __init__(self, coxeter_matrix, bilinear, descriptor, group_cap=DEFAULT_GROUP_CAP):
        self.descriptor = descriptor
        self.rank = len(coxeter_matrix)
        self.coxeter_matrix = tuple(tuple(int(x) for x in row) for row in coxeter_matrix)
        self.bilinear = bilinear
        self.group_cap = group_cap
        self._validate()
        self._simple_reflections = [self._reflection_matrix_simple(i) for i in range(self.rank)]
        self._positive_roots = None
        self._reflections_by_root = None
        self._fundamental_weights = None
        self._identity = None
        self._elements = None
        self._cayley = None
        self._bruhat_memo = {}
        self._canonical_word_memo = {}
        self.kl_cache = {}
        self.soergel_cache = {}

    # -- validation -------------------------------------------------------

    def _validate(self):
        n = self.rank
        m = self.coxeter_matrix
        if n < 1:
            raise ValueError("rank must be positive")
        for i in range(n):
            if m[i][i] != 1:
                raise ValueError("Coxeter matrix needs 1 on the diagonal")
            for j in range(n):
                if m[i][j] != m[j][i]:
                    raise ValueError("Coxeter matrix must be symmetric")
                if i != j and m[i][j] not in (2, 3, 4, 6):
                    raise ValueError(
                        f"bond m={m[i][j]} is outside the crystallographic range"
                    )
        b = self.bilinear
        for i in range(n):
            for j in range(n):
                if b[i, j] != b[j, i]:
                    raise ValueError("bilinear form must be symmetric")
                if i != j:
                    lhs = 4 * b[i, j] ** 2
                    rhs = _BOND_VALUE[m[i][j]] * b[i, i] * b[j, j]
                    if lhs != rhs:
                        raise ValueError(
                            "bilinear form does not realize the bond angles"
                        )
                    if i < j and m[i][j] > 2 and b[i, j] >= 0:
                        raise ValueError("distinct simple roots must pair nonpositively")
        # positive definiteness via leading principal minors
        for k in range(1, n + 1):
            if _det(b[:k, :k]) <= 0:
                raise ValueError(
                    "bilinear form is not positive definite; "
                    "the Coxeter matrix does not define a finite group"
                )

    # -- root data ---------------------------------------------------------

    def pairing(self, x, y):
        """(x, y) under the invariant form; vectors in root coordinates."""
        return sum(
            Fraction(x[i]) * self.bilinear[i, j] * Fraction(y[j])
            for i in range(self.rank)
            for j in range(self.rank)
        )

    def cartan_integer(self, i, j):
        """<alpha_j, alpha_i^vee> = 2(a_j, a_i)/(a_i, a_i)."""
        return int(2 * self.bilinear[j - 1, i - 1] / self.bilinear[i - 1, i - 1])

    def _reflection_matrix_simple(self, i0):
        """Matrix of s_{i0+1} on the root basis; integral."""
        n = self.rank
        mat = np.zeros((n, n), dtype=object)
        for j in range(n):
            col = [0] * n
            col[j] = 1
            col[i0] = col[i0] - self.cartan_integer(i0 + 1, j + 1)
            for i in range(n):
                mat[i, j] = col[i]
        return mat

    @property
    def simple_roots(self):
        return [tuple(1 if j == i else 0 for j in range(self.rank)) for i in range(self.rank)]

    def positive_roots(self):
        """All positive roots in root coordinates, with coroot data cached."""
        if self._positive_roots is None:
            found = {tuple(r) for r in self.simple_roots}
            frontier = list(found)
            while frontier:
                new = []
                for r in frontier:
                    for s in self._simple_reflections:
                        img = tuple(
                            int(sum(s[i, j] * r[j] for j in range(self.rank)))
                            for i in range(self.rank)
                        )
                        pr = img if all(c >= 0 for c in img) else tuple(-c for c in img)
                        if pr not in found:
                            found.add(pr)
                            new.append(pr)
                frontier = new
            self._positive_roots = sorted(found, key=lambda r: (sum(r), r))
        return self._positive_roots

    def reflection(self, root):
        """The reflection s_gamma as a GroupElement."""
        if self._reflections_by_root is None:
            self._reflections_by_root = {}
        key = tuple(root)
        if key not in self._reflections_by_root:
            n = self.rank
            norm = self.pairing(root, root)
            mat = np.zeros((n, n), dtype=object)
            for j in range(n):
                basis = [0] * n
                basis[j] = 1
                c = 2 * self.pairing(basis, root) / norm
                for i in range(n):
                    val = Fraction(basis[i]) - c * root[i]
                    assert val.denominator == 1
                    mat[i, j] = int(val)
            self._reflections_by_root[key] = GroupElement(self, mat)
        return self._reflections_by_root[key]

    def fundamental_weights(self):
        """Vectors w_s in root coordinates with <w_s, a_t^vee> = delta_st."""
        if self._fundamental_weights is None:
            n = self.rank
            a = np.empty((n, n), dtype=object)
            for t in range(n):
                for j in range(n):
                    a[t, j] = 2 * self.bilinear[j, t] / self.bilinear[t, t]
            ainv = inverse(a)
            self._fundamental_weights = [tuple(ainv[:, s]) for s in range(n)]
        return self._fundamental_weights

    # -- elements ------------------------------------------------------------

    def identity(self):
        if self._identity is None:
            n = self.rank
            mat = np.zeros((n, n), dtype=object)
            for i in range(n):
                mat[i, i] = 1
            self._identity = GroupElement(self, mat)
        return self._identity

    def simple_reflection(self, i):
        if not 1 <= i <= self.rank:
            raise ValueError(f"generator index {i} out of range 1..{self.rank}")
        return GroupElement(self, np.array(self._simple_reflections[i - 1], copy=True))

    def element_from_word(self, word):
        el = self.identity()
        for i in word:
            el = el * self.simple_reflection(i)
        return el

    def parse_word(self, text):
        """Parse "s2,s1" / "2,1" / "t,s" / "e" into a generator tuple."""
        text = text.strip()
        if text in ("", "e", "id", "identity"):
            return ()
        letters = {"s": 1, "t": 2, "u": 3, "v": 4, "w": 5}
        out = []
        for tok in text.split(","):
            tok = tok.strip().lower()
            if re.fullmatch(r"s\d+", tok):
                out.append(int(tok[1:]))
            elif tok.isdigit():
                out.append(int(tok))
            elif tok in letters:
                out.append(letters[tok])
            else:
                raise ValueError(f"cannot parse generator {tok!r}")
        for i in out:
            if not 1 <= i <= self.rank:
                raise ValueError(f"generator index {i} out of range 1..{self.rank}")
        return tuple(out)

    def elements(self, cap=None):
        """The whole group, enumerated breadth-first.  Cached."""
        if self._elements is None:
            cap = cap or self.group_cap
            seen = {self.identity().key: self.identity()}
            frontier = [self.identity()]
            while frontier:
                new = []
                for el in frontier:
                    for i in range(1, self.rank + 1):
                        nxt = el * self.simple_reflection(i)
                        if nxt.key not in seen:
                            seen[nxt.key] = nxt
                            new.append(nxt)
                if len(seen) > cap:
                    raise ValueError(
                        f"group enumeration exceeded the cap {cap}; "
                        "refusing to continue"
                    )
                frontier = new
            self._elements = sorted(
                seen.values(), key=lambda e: (e.length(), e.key)
            )
        return self._elements

    def cayley_table(self):
        """(index map, right multiplication table, lengths) over elements()."""
        if self._cayley is None:
            els = self.elements()
            index = {e.key: i for i, e in enumerate(els)}
            table = [
                [index[(e * self.simple_reflection(s)).key] for s in range(1, self.rank + 1)]
                for e in els
            ]
            lengths = [e.length() for e in els]
            self._cayley = (index, table, lengths)
        return self._cayley

    def longest_element(self):
        els = self.elements()
        return els[-1]

    def __repr__(self):
        return f"CoxeterSystem({self.descriptor!r})"


def _det(a):
    n = a.shape[0]
    m = np.array(a, dtype=object, copy=True)
    det = Fraction(1)
    for col in range(n):
        piv = None
        for r in range(col, n):
            if m[r, col] != 0:
                piv = r
                break
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[[piv, col]] = m[[col, piv]]
            det = -det
        det *= m[col, col]
        for r in range(col + 1, n):
            if m[r, col] != 0:
                m[r] = m[r] - (m[r, col] / m[col, col]) * m[col]
    return det


class GroupElement:
    """A Weyl group element as its exact matrix on the root basis."""

    __slots__ = ("system", "matrix", "_key", "_length", "_inv")

    def __init__(self, system, matrix):
        self.system = system
        self.matrix = matrix
        self._key = None
        self._length = None
        self._inv = None

    @property
    def key(self):
        if self._key is None:
            self._key = tuple(int(x) for x in self.matrix.flat)
        return self._key

    def __eq__(self, other):
        return isinstance(other, GroupElement) and self.key == other.key \
            and self.system is other.system

    def __hash__(self):
        return hash(self.key)

    def __mul__(self, other):
        if self.system is not other.system:
            raise ValueError("elements live in different Coxeter systems")
        return GroupElement(self.system, self.matrix @ other.matrix)

    def inverse(self):
        if self._inv is None:
            n = self.system.rank
            inv = inverse(frac_matrix(self.matrix))
            mat = np.empty((n, n), dtype=object)
            for i in range(n):
                for j in range(n):
                    v = Fraction(inv[i, j])
                    assert v.denominator == 1
                    mat[i, j] = int(v)
            self._inv = GroupElement(self.system, mat)
        return self._inv

    def __pow__(self, n):
        if n == -1:
            return self.inverse()
        raise ValueError("only inverse supported")

    def apply(self, vec):
        """Image of a root-coordinate vector."""
        n = self.system.rank
        return tuple(
            sum(self.matrix[i, j] * vec[j] for j in range(n)) for i in range(n)
        )

    def is_identity(self):
        return self.length() == 0

    def length(self) -> int:
        """Number of positive roots sent to negative roots."""
        if self._length is None:
            count = 0
            for root in self.system.positive_roots():
                img = self.apply(root)
                if all(c <= 0 for c in img):
                    count += 1
            self._length = count
        return self._length

    def right_descent(self, i) -> bool:
        """True iff l(w s_i) < l(w), i.e. w(alpha_i) < 0."""
        col = self.matrix[:, i - 1]
        return all(c <= 0 for c in col)

    def left_descent(self, i) -> bool:
        row = self.inverse().matrix[:, i - 1]
        return all(c <= 0 for c in row)

    def right_descents(self):
        return frozenset(
            i for i in range(1, self.system.rank + 1) if self.right_descent(i)
        )

    def left_descents(self):
        inv = self.inverse()
        return frozenset(
            i for i in range(1, self.system.rank + 1) if inv.right_descent(i)
        )

    def support(self):
        """Simple reflections occurring in any reduced word for w."""
        return frozenset(canonical_word(self))

    def __repr__(self):
        word = canonical_word(self)
        if not word:
            return "e"
        return ",".join(f"s{i}" for i in word)


# -- public operations ----------------------------------------------------


def build_system(descriptor, group_cap=DEFAULT_GROUP_CAP) -> CoxeterSystem:
    """Build a system from a type string or an explicit Coxeter matrix.

    Type strings name finite crystallographic types and products, e.g.
    "A3", "B2", "G2", "A1xA2".  A nested list is read as a Coxeter matrix.
    """
    if isinstance(descriptor, str):
        parts = descriptor.replace(" ", "").split("x")
        bonds = {}
        lengths = {}
        offset = 0
        for part in parts:
            m = re.fullmatch(r"([A-G])(\d+)", part)
            if not m:
                raise ValueError(f"cannot parse type descriptor {part!r}")
            letter, n = m.group(1), int(m.group(2))
            pb, pl = _simple_type_data(letter, n)
            for (i, j), order in pb.items():
                bonds[(i + offset, j + offset)] = order
            for i, val in pl.items():
                lengths[i + offset] = val
            offset += n
        rank = offset
        cox = [[1 if i == j else 2 for j in range(rank)] for i in range(rank)]
        for (i, j), order in bonds.items():
            cox[i - 1][j - 1] = order
            cox[j - 1][i - 1] = order
        bil = _bilinear_from(bonds, lengths, rank)
        return CoxeterSystem(cox, bil, descriptor, group_cap)
    # explicit Coxeter matrix
    mat = [list(row) for row in descriptor]
    rank = len(mat)
    lengths = _lengths_from_coxeter_matrix(mat, rank)
    if lengths is None:
        raise ValueError("Coxeter matrix admits no consistent crystallographic root lengths")
    bonds = {}
    for i in range(1, rank + 1):
        for j in range(i + 1, rank + 1):
            if mat[i - 1][j - 1] > 2:
                bonds[(i, j)] = mat[i - 1][j - 1]
    bil = _bilinear_from(bonds, {k: v for k, v in lengths.items()}, rank)
    return CoxeterSystem(mat, bil, "custom", group_cap)


def multiply(a: GroupElement, b: GroupElement) -> GroupElement:
    return a * b


def word_to_element(system: CoxeterSystem, word):
    """(element, is_reduced) for a word over the simple reflections."""
    el = system.element_from_word(word)
    return el, el.length() == len(word)


def canonical_word(w: GroupElement):
    """A fixed reduced word, built by stripping smallest left descents."""
    memo = w.system._canonical_word_memo
    if w.key in memo:
        return memo[w.key]
    word = []
    cur = w
    while cur.length() > 0:
        s = min(cur.left_descents())
        word.append(s)
        cur = cur.system.simple_reflection(s) * cur
    result = tuple(word)
    memo[w.key] = result
    return result


def canonical_reduced_word(w: GroupElement):
    return canonical_word(w)


def bruhat_leq(x: GroupElement, w: GroupElement) -> bool:
    """Bruhat order via the greedy right-to-left subword walk.

    Walk the fixed reduced word of w from the right, multiplying s_k into
    the running element exactly when it is a right descent.  The walk ends
    at the identity iff x is a subword of the chosen reduced word, which by
    the subword property decides x <= w.
    """
    if x.system is not w.system:
        raise ValueError("elements live in different Coxeter systems")
    if x.length() > w.length():
        return False
    if x.length() == w.length():
        return x == w
    memo = x.system._bruhat_memo
    mk = (x.key, w.key)
    if mk in memo:
        return memo[mk]
    word = canonical_word(w)
    cur = x
    sys = x.system
    for k in range(len(word) - 1, -1, -1):
        if cur.is_identity():
            break
        s = word[k]
        if cur.right_descent(s):
            cur = cur * sys.simple_reflection(s)
    result = cur.is_identity()
    memo[mk] = result
    return result


def bruhat_leq_oracle(x: GroupElement, w: GroupElement) -> bool:
    """Independent Bruhat test by the classical descent recursion."""
    if x.length() > w.length():
        return False
    if w.length() == 0:
        return x.length() == 0
    s = min(w.left_descents())
    sw = w.system.simple_reflection(s) * w
    sx = x.system.simple_reflection(s) * x
    if sx.length() < x.length():
        return bruhat_leq_oracle(sx, sw)
    return bruhat_leq_oracle(x, sw)


def lower_interval(w: GroupElement):
    """({v : v <= w}, histogram of lengths 0..l(w)).

    Enumerated by the subword dynamic program on the fixed reduced word.
    """
    word = canonical_word(w)
    sys = w.system
    current = {sys.identity().key: sys.identity()}
    for s in word:
        gen = sys.simple_reflection(s)
        additions = {}
        for el in current.values():
            nxt = el * gen
            if nxt.key not in current:
                additions[nxt.key] = nxt
        current.update(additions)
    elements = sorted(current.values(), key=lambda e: (e.length(), e.key))
    hist = [0] * (w.length() + 1)
    for el in elements:
        hist[el.length()] += 1
    return elements, hist


def descent_sets(w: GroupElement):
    """(left descent set, right descent set)."""
    return w.left_descents(), w.right_descents()


def all_reduced_words(w: GroupElement):
    """Every reduced word of w (test-sized inputs only)."""
    if w.length() == 0:
        return [()]
    out = []
    for s in w.right_descents():
        shorter = w * w.system.simple_reflection(s)
        for word in all_reduced_words(shorter):
            out.append(word + (s,))
    return out


def interval_is_palindromic(w: GroupElement) -> bool:
    _, hist = lower_interval(w)
    return hist == hist[::-1]


def support_components(w: GroupElement):
    """Connected components of the support in the Dynkin diagram."""
    sys = w.system
    supp = sorted(w.support())
    comps = []
    remaining = set(supp)
    while remaining:
        start = min(remaining)
        comp = {start}
        stack = [start]
        while stack:
            i = stack.pop()
            for j in list(remaining):
                if j not in comp and sys.coxeter_matrix[i - 1][j - 1] > 2:
                    comp.add(j)
                    stack.append(j)
        remaining -= comp
        comps.append(sorted(comp))
    return comps
