"""Integer-coefficient Laurent polynomials in one variable.

Used for Kazhdan-Lusztig polynomials (variable read as q), their
v-normalizations, graded dimensions and defect generating functions.  The
representation is a map exponent -> coefficient with no zero entries, so
equality is structural and exact.
"""

from __future__ import annotations

__all__ = ["LaurentPoly"]


class LaurentPoly:
    """Immutable Laurent polynomial with int coefficients."""

    __slots__ = ("_c",)

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            for k, v in dict(coeffs).items():
                v = int(v)
                if v != 0:
                    c[int(k)] = v
        self._c = c

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({0: 1})

    @classmethod
    def monomial(cls, exp, coeff=1):
        return cls({exp: coeff})

    # -- inspection ------------------------------------------------------

    def items(self):
        return sorted(self._c.items())

    def coefficient(self, exp) -> int:
        return self._c.get(exp, 0)

    def is_zero(self) -> bool:
        return not self._c

    @property
    def min_exp(self):
        return min(self._c) if self._c else None

    @property
    def max_exp(self):
        return max(self._c) if self._c else None

    def support(self):
        return sorted(self._c)

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        c = dict(self._c)
        for k, v in other._c.items():
            c[k] = c.get(k, 0) + v
        return LaurentPoly(c)

    def __sub__(self, other):
        c = dict(self._c)
        for k, v in other._c.items():
            c[k] = c.get(k, 0) - v
        return LaurentPoly(c)

    def __neg__(self):
        return LaurentPoly({k: -v for k, v in self._c.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPoly({k: v * other for k, v in self._c.items()})
        c = {}
        for k1, v1 in self._c.items():
            for k2, v2 in other._c.items():
                k = k1 + k2
                c[k] = c.get(k, 0) + v1 * v2
        return LaurentPoly(c)

    __rmul__ = __mul__

    def shift(self, n):
        """Multiply by v^n."""
        return LaurentPoly({k + n: v for k, v in self._c.items()})

    def bar(self):
        """The involution v -> v^-1."""
        return LaurentPoly({-k: v for k, v in self._c.items()})

    def evaluate(self, x):
        """Exact evaluation; x may be int or Fraction (nonzero for negative exponents)."""
        total = 0
        for k, v in self._c.items():
            total += v * x**k
        return total

    def substitute_power(self, n):
        """v -> v^n."""
        return LaurentPoly({k * n: v for k, v in self._c.items()})

    # -- predicates -------------------------------------------------------

    def is_palindromic(self) -> bool:
        return self == self.bar()

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly({0: other})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    # -- presentation -----------------------------------------------------

    def coeff_list(self):
        """(min_exp, [coefficients]) covering the support contiguously."""
        if not self._c:
            return 0, []
        lo, hi = self.min_exp, self.max_exp
        return lo, [self._c.get(k, 0) for k in range(lo, hi + 1)]

    def __repr__(self):
        return f"LaurentPoly({self.format()})"

    def format(self, var="v"):
        if not self._c:
            return "0"
        parts = []
        for k, c in sorted(self._c.items()):
            if k == 0:
                term = str(c)
            else:
                p = var if k == 1 else f"{var}^{k}"
                if c == 1:
                    term = p
                elif c == -1:
                    term = f"-{p}"
                else:
                    term = f"{c}*{p}"
            parts.append(term)
        out = " + ".join(parts)
        return out.replace("+ -", "- ")
