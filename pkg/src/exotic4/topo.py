"""Characteristic numbers of closed oriented 4-manifolds and Freedman naming."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

# "asserted": established by an argument outside computation (see the axiom
# ledger of the pipeline); "unknown": nobody claims it either way.
PI1_STATES = ("yes", "no", "asserted", "unknown")
PARITIES = ("even", "odd")


class InconsistentState(ValueError):
    pass


@dataclass(frozen=True)
class CharNumbers:
    e: int
    sigma: int
    b1: int
    b2_plus: int
    b2_minus: int
    parity: str
    simply_connected: str

    def __post_init__(self):
        if min(self.b1, self.b2_plus, self.b2_minus) < 0:
            raise InconsistentState(f"negative Betti number in {self}")
        if self.e != 2 - 2 * self.b1 + self.b2_plus + self.b2_minus:
            raise InconsistentState(f"e != 2 - 2 b1 + b2+ + b2- in {self}")
        if self.sigma != self.b2_plus - self.b2_minus:
            raise InconsistentState(f"sigma != b2+ - b2- in {self}")
        if self.parity not in PARITIES:
            raise InconsistentState(f"parity must be one of {PARITIES}")
        if self.simply_connected not in PI1_STATES:
            raise InconsistentState(f"simply_connected must be one of {PI1_STATES}")
        if self.simply_connected in ("yes", "asserted") and self.b1:
            raise InconsistentState("simply connected manifold with b1 > 0")

    @classmethod
    def from_e_sigma(cls, e: int, sigma: int, b1: int = 0, parity: str = "odd", simply_connected: str = "yes"):
        b2 = e - 2 + 2 * b1
        if (b2 + sigma) % 2:
            raise InconsistentState(f"e={e}, sigma={sigma} have different parity of b2 and sigma")
        return cls(e, sigma, b1, (b2 + sigma) // 2, (b2 - sigma) // 2, parity, simply_connected)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "CharNumbers":
        return cls(**{f.name: d[f.name] for f in dataclasses.fields(cls)})

    def replace(self, **kw) -> "CharNumbers":
        return dataclasses.replace(self, **kw)


@dataclass(frozen=True)
class CharNumbersDelta:
    de: int
    dsigma: int
    db2_plus: int
    db2_minus: int


def elliptic_surface_numbers(n: int) -> CharNumbers:
    """E(n): e = 12n, sigma = -8n, even iff n even."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return CharNumbers.from_e_sigma(12 * n, -8 * n, parity="even" if n % 2 == 0 else "odd")


def apply_knot_surgery(c: CharNumbers) -> CharNumbers:
    """Fiber-sum with S^1 x (S^3 - K): numbers unchanged, pi_1 now an argued fact."""
    flag = "asserted" if c.simply_connected == "yes" else c.simply_connected
    return c.replace(simply_connected=flag)


def apply_blow_up(c: CharNumbers, k: int = 1) -> CharNumbers:
    if k < 1:
        raise ValueError(f"blow-up count must be positive, got {k}")
    return c.replace(e=c.e + k, sigma=c.sigma - k, b2_minus=c.b2_minus + k, parity="odd")


def apply_rational_blowdown(c: CharNumbers, delta: CharNumbersDelta, simply_connected: str = "unknown") -> CharNumbers:
    """Apply a blow-down delta.

    pi_1 of the result is not computed here; it stays ``unknown`` unless the
    caller passes a flag backed by an axiom.
    """
    try:
        return c.replace(
            e=c.e + delta.de,
            sigma=c.sigma + delta.dsigma,
            b2_plus=c.b2_plus + delta.db2_plus,
            b2_minus=c.b2_minus + delta.db2_minus,
            simply_connected=simply_connected,
        )
    except InconsistentState as exc:
        raise InconsistentState(f"rational blow-down leaves an inconsistent state: {exc}") from None


NOT_APPLICABLE = "not-applicable"


def freedman_classify(c: CharNumbers) -> str:
    """Name the homeomorphism type of a simply connected closed 4-manifold.

    Only odd forms get a standard name (m CP^2 # n CP^2bar); even forms are
    named by their intersection form.
    """
    if c.simply_connected not in ("yes", "asserted") or c.b1 > 0:
        return NOT_APPLICABLE
    if c.parity == "odd":
        return f"{c.b2_plus}CP² # {c.b2_minus}CP²bar"
    if c.b2_plus == 0 and c.b2_minus == 0:
        return "S⁴"
    e8 = abs(c.sigma) // 8
    sign = "-" if c.sigma < 0 else ""
    return f"{e8}({sign}E8) ⊕ {min(c.b2_plus, c.b2_minus)}H"
