"""Sparse multivariate Laurent polynomials with integer coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

Exponents = tuple[int, ...]


class LaurentPoly:
    """Immutable map from exponent vectors to nonzero integer coefficients.

    ``variables`` fixes the slot order of every exponent vector.  Arithmetic
    between polynomials over different variable lists works over the union
    (left operand's order first).
    """

    __slots__ = ("variables", "_terms")

    def __init__(self, variables: Sequence[str] = (), terms: Mapping[Exponents, int] | Iterable[tuple[Exponents, int]] = ()):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"repeated variable in {variables}")
        acc: dict[Exponents, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exps, c in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(variables):
                raise ValueError(f"exponent vector {exps} does not match variables {variables}")
            acc[exps] = acc.get(exps, 0) + int(c)
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "_terms", {k: v for k, v in acc.items() if v})

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    @classmethod
    def constant(cls, c: int, variables: Sequence[str] = ()) -> "LaurentPoly":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def monomial(cls, exps: Mapping[str, int], coeff: int = 1) -> "LaurentPoly":
        variables = tuple(exps)
        return cls(variables, {tuple(exps[v] for v in variables): coeff})

    @classmethod
    def from_pairs(cls, variables: Sequence[str], pairs: Iterable) -> "LaurentPoly":
        return cls(variables, [(tuple(e), c) for e, c in pairs])

    # -- views -----------------------------------------------------------
    @property
    def terms(self) -> dict[Exponents, int]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Exponents, int]]:
        return iter(sorted(self._terms.items()))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __iter__(self):
        return self.items()

    def support_variables(self) -> tuple[str, ...]:
        used = {i for exps in self._terms for i, e in enumerate(exps) if e}
        return tuple(v for i, v in enumerate(self.variables) if i in used)

    def coefficient(self, exps: Mapping[str, int] | Exponents) -> int:
        if isinstance(exps, Mapping):
            unknown = [v for v, e in exps.items() if e and v not in self.variables]
            if unknown:
                return 0
            exps = tuple(exps.get(v, 0) for v in self.variables)
        return self._terms.get(tuple(exps), 0)

    def to_pairs(self) -> list[tuple[list[int], int]]:
        """Canonical serialization: (exponent vector, coefficient), lexicographic."""
        return [(list(e), c) for e, c in self.items()]

    # -- variable handling ----------------------------------------------
    def with_variables(self, variables: Sequence[str]) -> "LaurentPoly":
        variables = tuple(variables)
        missing = [v for v in self.support_variables() if v not in variables]
        if missing:
            raise ValueError(f"cannot drop variables {missing} that occur in the polynomial")
        pos = [self.variables.index(v) if v in self.variables else None for v in variables]
        return LaurentPoly(
            variables,
            {tuple(exps[p] if p is not None else 0 for p in pos): c for exps, c in self._terms.items()},
        )

    def _aligned(self, other: "LaurentPoly") -> tuple["LaurentPoly", "LaurentPoly"]:
        if self.variables == other.variables:
            return self, other
        union = self.variables + tuple(v for v in other.variables if v not in self.variables)
        return self.with_variables(union), other.with_variables(union)

    def substitute_power(self, var: str, new_var: str, scale: int) -> "LaurentPoly":
        """Replace ``var`` by ``new_var ** scale``."""
        i = self.variables.index(var)
        others = tuple(v for v in self.variables if v != var)
        target = others if new_var in others else others + (new_var,)
        j = target.index(new_var)
        terms: dict[Exponents, int] = {}
        for exps, c in self._terms.items():
            rest = [e for k, e in enumerate(exps) if k != i] + [0] * (len(target) - len(others))
            rest[j] += scale * exps[i]
            key = tuple(rest)
            terms[key] = terms.get(key, 0) + c
        return LaurentPoly(target, terms)

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(other, self.variables)
        a, b = self._aligned(other)
        terms = dict(a._terms)
        for e, c in b._terms.items():
            terms[e] = terms.get(e, 0) + c
        return LaurentPoly(a.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.variables, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPoly(self.variables, {e: c * other for e, c in self._terms.items()})
        a, b = self._aligned(other)
        terms: dict[Exponents, int] = {}
        for e1, c1 in a._terms.items():
            for e2, c2 in b._terms.items():
                key = tuple(x + y for x, y in zip(e1, e2))
                terms[key] = terms.get(key, 0) + c1 * c2
        return LaurentPoly(a.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers of polynomials are not Laurent polynomials in general")
        out = LaurentPoly.constant(1, self.variables)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(other, self.variables)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        a, b = self._aligned(other)
        return a._terms == b._terms

    def __hash__(self):
        used = self.support_variables()
        return hash(frozenset(self.with_variables(used)._terms.items()) | {used})

    def evaluate(self, values: Mapping[str, int | Fraction]) -> Fraction:
        total = Fraction(0)
        for exps, c in self._terms.items():
            term = Fraction(c)
            for v, e in zip(self.variables, exps):
                if e:
                    term *= Fraction(values[v]) ** e
            total += term
        return total

    def negate_exponents(self) -> "LaurentPoly":
        return LaurentPoly(self.variables, {tuple(-x for x in e): c for e, c in self._terms.items()})

    def symmetry_sign(self) -> int | None:
        """s with p(x^-1) = s p(x), or None; the zero polynomial counts as +1."""
        flipped = self.negate_exponents()
        if flipped == self:
            return 1
        if flipped == -self:
            return -1
        return None

    def __repr__(self) -> str:
        return f"LaurentPoly({self.variables!r}, {dict(self.items())!r})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for exps, c in sorted(self._terms.items(), reverse=True):
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, exps) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")
