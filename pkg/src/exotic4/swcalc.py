"""Formal Seiberg-Witten functions and the transforms that act on them.

An SW function is written  sum_K SW(K) exp(K)  as a Laurent polynomial in
one variable per basis class (fiber class ``T``, exceptional classes
``E1, E2, ...``).  Blow-up factors (e + e^-1) are kept symbolic in
``SWFunction.exceptional`` until something needs them: 22 blow-ups would
otherwise mean tens of millions of explicit terms.

The knot surgery, blow-up and rational blow-down rules are used as given
formulas; nothing here solves an equation.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

import numpy as np

from .lattice import HomClass, pairing
from .laurent import LaurentPoly
from .rbd import PlumbingChain, chain_adjugate, descends


class SWError(ValueError):
    pass


@dataclass(frozen=True)
class SWFunction:
    poly: LaurentPoly
    exceptional: tuple[str, ...] = ()
    fiber: str | None = "T"
    conjugation_sign: int = field(default=0)

    def __post_init__(self):
        object.__setattr__(self, "exceptional", tuple(self.exceptional))
        clash = set(self.exceptional) & set(self.poly.variables)
        if clash:
            raise SWError(f"variables {sorted(clash)} appear both explicitly and as blow-up factors")
        sign = self.poly.symmetry_sign()
        if sign is None:
            raise SWError("SW function is not conjugation symmetric")
        if self.conjugation_sign == 0:
            object.__setattr__(self, "conjugation_sign", sign)
        elif self.poly and self.conjugation_sign != sign:
            raise SWError(f"stored conjugation sign {self.conjugation_sign} but polynomial has {sign}")

    @property
    def variables(self) -> tuple[str, ...]:
        return self.poly.variables + self.exceptional

    @property
    def basic_class_count(self) -> int:
        return len(self.poly) * 2 ** len(self.exceptional)

    def terms(self) -> Iterator[tuple[tuple[int, ...], int]]:
        """All (exponent vector over ``variables``, value) pairs, lazily."""
        signs = list(itertools.product((1, -1), repeat=len(self.exceptional)))
        for exps, c in self.poly.items():
            for s in signs:
                yield exps + s, c

    def value(self, cls: Mapping[str, int]) -> int:
        unknown = [v for v, e in cls.items() if e and v not in self.variables]
        if unknown:
            return 0
        if any(abs(cls.get(e, 0)) != 1 for e in self.exceptional):
            return 0
        return self.poly.coefficient({v: cls.get(v, 0) for v in self.poly.variables})

    def expand(self) -> LaurentPoly:
        p = self.poly
        for e in self.exceptional:
            p = p * LaurentPoly((e,), {(1,): 1, (-1,): 1})
        return p

    def classes(self) -> list[dict[str, int]]:
        return [dict((v, e) for v, e in zip(self.variables, exps) if e) for exps, _ in self.terms()]

    def to_dict(self) -> dict:
        return {
            "variables": list(self.poly.variables),
            "terms": self.poly.to_pairs(),
            "blow_up_factors": list(self.exceptional),
            "basic_classes": self.basic_class_count,
            "conjugation_sign": self.conjugation_sign,
        }

    def __eq__(self, other):
        if not isinstance(other, SWFunction):
            return NotImplemented
        if set(self.exceptional) == set(other.exceptional):
            return self.poly == other.poly and self.fiber == other.fiber
        return self.expand() == other.expand() and self.fiber == other.fiber

    def __hash__(self):
        return hash((self.poly, frozenset(self.exceptional), self.fiber))


def elliptic_surface_sw(n: int, fiber: str = "T") -> SWFunction:
    """SW of E(n), n >= 2: (x - x^-1)^(n-2) with x = exp(fiber class)."""
    if n < 2:
        raise SWError("E(1) has b2+ = 1; its SW function depends on a chamber")
    return SWFunction(LaurentPoly((fiber,), {(1,): 1, (-1,): -1}) ** (n - 2), fiber=fiber)


def alexander_twist(n: int, var: str = "t") -> LaurentPoly:
    """Alexander polynomial of the n-twist knot: n t - (2n - 1) + n t^-1."""
    if n < 1:
        raise SWError(f"twist count must be positive, got {n}")
    return LaurentPoly((var,), {(1,): n, (0,): -(2 * n - 1), (-1,): n})


def knot_surgery(sw: SWFunction, delta: LaurentPoly) -> SWFunction:
    """Multiply by delta(t) evaluated at t = exp(2 * fiber class)."""
    if sw.fiber is None:
        raise SWError("SW function has no designated fiber variable")
    used = delta.support_variables()
    if len(used) > 1:
        raise SWError(f"Alexander polynomial must be univariate, got variables {used}")
    if used:
        var = used[0]
        if delta.evaluate({var: 1}) != 1:
            raise SWError("Alexander polynomial must satisfy delta(1) = 1")
        if delta.symmetry_sign() != 1:
            raise SWError("Alexander polynomial must be symmetric")
        factor = delta.with_variables((var,)).substitute_power(var, sw.fiber, 2)
    else:
        factor = delta.with_variables(())
    return SWFunction(sw.poly * factor, sw.exceptional, sw.fiber, sw.conjugation_sign)


def next_exceptional_labels(taken: Sequence[str], count: int, prefix: str = "E") -> list[str]:
    pat = re.compile(re.escape(prefix) + r"(\d+)$")
    top = max((int(m.group(1)) for m in map(pat.match, taken) if m), default=0)
    return [f"{prefix}{top + i}" for i in range(1, count + 1)]


def blow_up_sw(sw: SWFunction, count: int = 1, labels: Sequence[str] | None = None) -> SWFunction:
    """Blow-up formula: one factor (e + e^-1) per new exceptional class."""
    if count < 1:
        raise SWError(f"blow-up count must be positive, got {count}")
    labels = list(labels) if labels is not None else next_exceptional_labels(sw.variables, count)
    if len(labels) != count:
        raise SWError(f"{count} blow-ups but {len(labels)} labels")
    clash = set(labels) & set(sw.variables)
    if clash:
        raise SWError(f"labels {sorted(clash)} already in use")
    return SWFunction(sw.poly, sw.exceptional + tuple(labels), sw.fiber, sw.conjugation_sign)


# Number of sign combinations evaluated per vectorized batch.
_INNER_BUDGET = 1 << 16


def rational_blowdown_sw(
    sw: SWFunction,
    chain: PlumbingChain,
    sphere_classes: Sequence[HomClass],
    basis: Mapping[str, HomClass],
) -> SWFunction:
    """Keep the basic classes that descend through the blow-down of ``chain``.

    ``basis`` maps each SW variable to its homology class, so a basic class
    K = sum k_v v pairs with sphere S as sum k_v <basis[v], S>.  Exceptional
    variables that pair trivially with the whole chain stay symbolic; the
    others are expanded only for the surviving classes.
    """
    r = len(chain)
    if len(sphere_classes) != r:
        raise SWError(f"{len(sphere_classes)} sphere classes for a chain of length {r}")
    missing = [v for v in sw.variables if v not in basis]
    if missing:
        raise SWError(f"no homology class given for SW variables {missing}")

    col = {v: tuple(pairing(basis[v], s) for s in sphere_classes) for v in sw.variables}
    free = [e for e in sw.exceptional if not any(col[e])]
    groups: dict[tuple[int, ...], list[str]] = {}
    for e in sw.exceptional:
        if any(col[e]):
            groups.setdefault(col[e], []).append(e)
    group_list = list(groups.items())
    active = [e for _, labels in group_list for e in labels]

    # Options per group: sign sum s in {-g, -g+2, ..., g}.
    options = [list(range(-len(labels), len(labels) + 1, 2)) for _, labels in group_list]
    inner_n = 0
    size = 1
    for opts in reversed(options):
        if size * len(opts) > _INNER_BUDGET:
            break
        size *= len(opts)
        inner_n += 1
    outer_groups = group_list[: len(group_list) - inner_n]
    inner_groups = group_list[len(group_list) - inner_n :]
    outer_opts = options[: len(group_list) - inner_n]
    inner_opts = options[len(group_list) - inner_n :]

    det, adj = chain_adjugate(chain)
    target = -r * det
    # parity vectors packed into one integer per row (r <= 62 fits int64)
    bit = [1 << i for i in range(r)] if r <= 62 else None

    inner_combos = list(itertools.product(*inner_opts)) if inner_opts else [()]
    inner_cols = np.array([c for c, _ in inner_groups], dtype=np.int64).reshape(len(inner_groups), r)
    w = np.array(inner_combos, dtype=np.int64).reshape(len(inner_combos), len(inner_groups)) @ inner_cols

    base_vecs = [
        (exps, c, tuple(sum(k * col[v][i] for v, k in zip(sw.poly.variables, exps)) for i in range(r)))
        for exps, c in sw.poly.items()
    ]
    outer_combos = list(itertools.product(*outer_opts)) if outer_opts else [()]

    vmax = max((abs(x) for _, _, b in base_vecs for x in b), default=0) + sum(
        len(g) * max(map(abs, c)) for c, g in group_list
    )
    amax = max(abs(x) for row in adj for x in row)
    exact_int64 = r * r * vmax * vmax * amax < 2**62
    adj_arr = np.array(adj, dtype=np.int64 if exact_int64 else object)
    w_arr = w if exact_int64 else w.astype(object)
    w_adj = w_arr @ adj_arr
    w_quad = np.einsum("ij,ij->i", w_adj, w_arr) if exact_int64 else (w_adj * w_arr).sum(axis=1)
    if bit is not None:
        w_bits = (w % 2) @ np.array(bit, dtype=np.int64)

    survivors: dict[tuple[int, ...], int] = {}
    out_vars = sw.poly.variables + tuple(active)
    for exps, coeff, bvec in base_vecs:
        for outer in outer_combos:
            b = list(bvec)
            for s, (c, _) in zip(outer, outer_groups):
                for i in range(r):
                    b[i] += s * c[i]
            b_arr = np.array(b, dtype=np.int64 if exact_int64 else object)
            adj_b = adj_arr @ b_arr
            quad = int(b_arr @ adj_b) + 2 * (w_arr @ adj_b) + w_quad
            need = [(m - x) % 2 for m, x in zip(chain.coefficients, b)]
            if bit is not None:
                char_ok = w_bits == sum(bi for bi, n in zip(bit, need) if n)
            else:
                char_ok = np.all(w % 2 == np.array(need, dtype=np.int64), axis=1)
            hits = np.nonzero((quad == target) & char_ok)[0]
            for h in hits:
                sums = dict(zip((tuple(g) for _, g in outer_groups), outer))
                sums.update(zip((tuple(g) for _, g in inner_groups), inner_combos[h]))
                for signs in _sign_patterns(sums):
                    key = exps + tuple(signs[e] for e in active)
                    survivors[key] = coeff
    return SWFunction(LaurentPoly(out_vars, survivors), tuple(free), sw.fiber, sw.conjugation_sign)


def _sign_patterns(sums: Mapping[tuple[str, ...], int]) -> Iterator[dict[str, int]]:
    """Every assignment of +-1 to each group's labels with the given sign sum."""
    per_group = []
    for labels, s in sums.items():
        plus = (len(labels) + s) // 2
        per_group.append(
            [{l: (1 if k in pos else -1) for k, l in enumerate(labels)} for pos in map(set, itertools.combinations(range(len(labels)), plus))]
        )
    for combo in itertools.product(*per_group):
        out: dict[str, int] = {}
        for part in combo:
            out.update(part)
        yield out


def rational_blowdown_sw_bruteforce(
    sw: SWFunction,
    chain: PlumbingChain,
    sphere_classes: Sequence[HomClass],
    basis: Mapping[str, HomClass],
) -> dict[tuple[tuple[str, int], ...], int]:
    """Reference filter: test every expanded class with the exact rational criterion."""
    lat_classes = {v: basis[v] for v in sw.variables}
    out = {}
    for exps, c in sw.terms():
        evals = [
            sum(k * pairing(lat_classes[v], s) for v, k in zip(sw.variables, exps) if k)
            for s in sphere_classes
        ]
        if descends(chain, evals):
            out[tuple((v, k) for v, k in zip(sw.variables, exps) if k)] = c
    return out


def fingerprint(sw: SWFunction) -> tuple[int, ...]:
    """Sorted multiset of nonzero SW values."""
    mult = 2 ** len(sw.exceptional)
    counts = Counter(c for _, c in sw.poly.items())
    return tuple(sorted(v for v, n in counts.items() for _ in range(n * mult)))


def triple_surgery_sw(n: int, surgeries: int = 3, fiber: str = "T") -> SWFunction:
    """SW of K3 after ``surgeries`` knot surgeries with the n-twist knot."""
    sw = elliptic_surface_sw(2, fiber)
    for _ in range(surgeries):
        sw = knot_surgery(sw, alexander_twist(n))
    return sw
