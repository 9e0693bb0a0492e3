"""Linear plumbings C_{p,q} and the arithmetic of rationally blowing them down."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Sequence

from . import linalg
from .topo import CharNumbersDelta


class ChainError(ValueError):
    pass


@dataclass(frozen=True)
class PlumbingChain:
    coefficients: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coefficients)
        object.__setattr__(self, "coefficients", coeffs)
        if not coeffs:
            raise ChainError("a plumbing chain needs at least one sphere")
        if any(c > -2 for c in coeffs):
            raise ChainError(f"chain entries must be <= -2: {coeffs}")

    def __len__(self) -> int:
        return len(self.coefficients)

    def __iter__(self):
        return iter(self.coefficients)

    def __str__(self) -> str:
        return format_chain(self.coefficients)


def format_chain(coeffs: Sequence[int]) -> str:
    """Run-length display: (-18, -2, ..., -2) -> '-18 -2 ×14'."""
    out = []
    i = 0
    while i < len(coeffs):
        j = i
        while j < len(coeffs) and coeffs[j] == coeffs[i]:
            j += 1
        out.append(f"{coeffs[i]} ×{j - i}" if j - i > 1 else str(coeffs[i]))
        i = j
    return " ".join(out)


@dataclass(frozen=True)
class CpqLabel:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 2 or not 1 <= self.q < self.p or gcd(self.p, self.q) != 1:
            raise ChainError(f"invalid C_(p,q) label ({self.p}, {self.q})")


def hj_expansion(numerator: int, denominator: int) -> list[int]:
    """Hirzebruch-Jung continued fraction n/d = c1 - 1/(c2 - 1/(...)), all c >= 2."""
    if not numerator > denominator >= 1 or gcd(numerator, denominator) != 1:
        raise ChainError(f"need coprime numerator > denominator >= 1, got {numerator}/{denominator}")
    out = []
    n, d = numerator, denominator
    while d:
        c = -(-n // d)
        out.append(c)
        n, d = d, c * d - n
    return out


def hj_value(coeffs: Sequence[int]) -> Fraction:
    """Evaluate c1 - 1/(c2 - ... - 1/ck) from the inside out."""
    n, d = coeffs[-1], 1
    for c in reversed(coeffs[:-1]):
        n, d = c * n - d, n
    return Fraction(n, d)


def cpq_chain(label: CpqLabel) -> PlumbingChain:
    p, q = label.p, label.q
    return PlumbingChain(tuple(-c for c in hj_expansion(p * p, p * q - 1)))


def identify_cpq(chain: PlumbingChain | Sequence[int]) -> CpqLabel | None:
    coeffs = chain.coefficients if isinstance(chain, PlumbingChain) else tuple(chain)
    frac = hj_value([-c for c in coeffs])
    n, d = frac.numerator, frac.denominator
    p = isqrt(n)
    if p * p != n or (d + 1) % p:
        return None
    try:
        return CpqLabel(p, (d + 1) // p)
    except ChainError:
        return None


def chain_matrix(chain: PlumbingChain) -> list[list[int]]:
    c = chain.coefficients
    k = len(c)
    return [[c[i] if i == j else 1 if abs(i - j) == 1 else 0 for j in range(k)] for i in range(k)]


def chain_determinant(chain: PlumbingChain) -> int:
    return linalg.tridiagonal_minors(chain.coefficients)[-1]


def chain_adjugate(chain: PlumbingChain) -> tuple[int, list[list[int]]]:
    """(det M, det M * M^-1) for the tridiagonal chain matrix, in integers.

    With unit off-diagonals, adj[i][j] = (-1)^(i+j) * lead[i] * trail[j+1]
    for i <= j, where lead[i] is the minor on rows < i and trail[m] the
    minor on rows >= m (both 1 when empty).
    """
    c = chain.coefficients
    k = len(c)
    lead = [1] + linalg.tridiagonal_minors(c)
    trail = (linalg.tridiagonal_minors(c[::-1])[::-1]) + [1]
    adj = [[0] * k for _ in range(k)]
    for i in range(k):
        for j in range(i, k):
            adj[i][j] = adj[j][i] = (-1) ** (i + j) * lead[i] * trail[j + 1]
    return lead[k], adj


def is_negative_definite(chain: PlumbingChain) -> bool:
    """Leading principal minors alternate in sign, starting negative."""
    return all((m < 0) if i % 2 == 0 else (m > 0) for i, m in enumerate(linalg.tridiagonal_minors(chain.coefficients)))


def restriction_square(chain: PlumbingChain, evaluations: Sequence[int]) -> Fraction:
    """v^T M^-1 v for the chain's intersection matrix M, exactly."""
    m = chain_matrix(chain)
    x = linalg.solve(m, evaluations)
    return sum(Fraction(v) * xi for v, xi in zip(evaluations, x))


def is_characteristic(chain: PlumbingChain, evaluations: Sequence[int]) -> bool:
    return all((v - c) % 2 == 0 for v, c in zip(evaluations, chain.coefficients))


def descends(chain: PlumbingChain, evaluations: Sequence[int]) -> bool:
    """Whether a class with these evaluations on the chain spheres survives the blow-down.

    Criterion: characteristic on the chain, and restriction square equal
    to minus the number of spheres.
    """
    if len(evaluations) != len(chain):
        raise ChainError(f"{len(evaluations)} evaluations for a chain of length {len(chain)}")
    if not is_characteristic(chain, evaluations):
        return False
    return restriction_square(chain, evaluations) == -len(chain)


def blow_down_char_effect(chain: PlumbingChain) -> CharNumbersDelta:
    """C has b2 = len(chain), negative definite; the rational ball has e = 1, sigma = 0."""
    if identify_cpq(chain) is None:
        raise ChainError(f"chain {chain} is not a C_(p,q) configuration")
    k = len(chain)
    return CharNumbersDelta(de=-k, dsigma=k, db2_plus=0, db2_minus=-k)
