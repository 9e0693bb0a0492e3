"""Words in the torus mapping class group and their monodromy factorizations.

Elements are written over the alphabet ``a, A, b, B`` (uppercase is the
inverse).  Group equality is decided in SL(2, Z) via

    a -> [[1, 1], [0, 1]],   b -> [[1, 0], [-1, 1]].
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence


class WordError(ValueError):
    pass


class GenLetter(str, enum.Enum):
    A_POS = "a"
    A_NEG = "A"
    B_POS = "b"
    B_NEG = "B"

    @property
    def inverse(self) -> "GenLetter":
        return GenLetter(self.value.swapcase())


_ALPHABET = frozenset("aAbB")


def _free_reduce(letters: Iterable[str]) -> str:
    stack: list[str] = []
    for ch in letters:
        if ch not in _ALPHABET:
            raise WordError(f"invalid letter {ch!r}")
        if stack and stack[-1] == ch.swapcase():
            stack.pop()
        else:
            stack.append(ch)
    return "".join(stack)


@dataclass(frozen=True)
class Word:
    """A freely reduced word; the empty word is the identity."""

    text: str = ""

    def __post_init__(self):
        object.__setattr__(self, "text", _free_reduce(self.text))

    @classmethod
    def parse(cls, s: str) -> "Word":
        return parse_word(s)

    @classmethod
    def power(cls, letter: str, k: int) -> "Word":
        if k < 0:
            letter, k = letter.swapcase(), -k
        return cls(letter * k)

    @property
    def letters(self) -> tuple[GenLetter, ...]:
        return tuple(GenLetter(ch) for ch in self.text)

    def __len__(self) -> int:
        return len(self.text)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.text + other.text)

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        return Word(base.text * abs(k))

    def inverse(self) -> "Word":
        return Word(self.text[::-1].swapcase())

    def is_positive(self) -> bool:
        return all(ch in "ab" for ch in self.text)

    def __str__(self) -> str:
        return compress(self.text) if self.text else "1"


def compress(text: str) -> str:
    """Run-length form used on output: ``aaaab`` -> ``a4b``."""
    return "".join(
        m.group(1) + (str(len(m.group(0))) if len(m.group(0)) > 1 else "")
        for m in re.finditer(r"([aAbB])\1*", text)
    )


_TOKEN = re.compile(r"\s*(?:(?P<letter>[aAbB])|(?P<open>\()|(?P<close>\))|(?P<pow>\^?-?\d+))")


def parse_word(s: str) -> Word:
    """Parse ``a4ba2b2``, ``(ab)^12``, ``a^-1``; uppercase letters are inverses."""
    tokens = []
    pos = 0
    s = s.strip()
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if m is None or m.end() == pos:
            raise WordError(f"cannot parse word {s!r} at offset {pos}")
        tokens.append((m.lastgroup, m.group(m.lastgroup)))
        pos = m.end()

    def parse_seq(i: int) -> tuple[Word, int]:
        acc = Word()
        while i < len(tokens) and tokens[i][0] != "close":
            kind, val = tokens[i]
            if kind == "letter":
                item, i = Word(val), i + 1
            elif kind == "open":
                item, i = parse_seq(i + 1)
                if i >= len(tokens) or tokens[i][0] != "close":
                    raise WordError(f"unbalanced parentheses in {s!r}")
                i += 1
            else:
                raise WordError(f"exponent without base in {s!r}")
            if i < len(tokens) and tokens[i][0] == "pow":
                item = item ** int(tokens[i][1].lstrip("^"))
                i += 1
            acc = acc * item
        return acc, i

    word, i = parse_seq(0)
    if i != len(tokens):
        raise WordError(f"unbalanced parentheses in {s!r}")
    return word


def as_word(w: Word | str) -> Word:
    return w if isinstance(w, Word) else parse_word(w)


@dataclass(frozen=True)
class SL2Matrix:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant of {self.rows()} is not 1")

    @classmethod
    def identity(cls) -> "SL2Matrix":
        return cls(1, 0, 0, 1)

    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def __matmul__(self, o: "SL2Matrix") -> "SL2Matrix":
        return SL2Matrix(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def apply(self, v: tuple[int, int]) -> tuple[int, int]:
        return (self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1])

    def inverse(self) -> "SL2Matrix":
        return SL2Matrix(self.d, -self.b, -self.c, self.a)

    def is_identity(self) -> bool:
        return self == SL2Matrix.identity()


GENERATORS = {
    "a": SL2Matrix(1, 1, 0, 1),
    "A": SL2Matrix(1, -1, 0, 1),
    "b": SL2Matrix(1, 0, -1, 1),
    "B": SL2Matrix(1, 0, 1, 1),
}


def eval_word(w: Word | str) -> SL2Matrix:
    m = SL2Matrix.identity()
    for ch in as_word(w).text:
        m = m @ GENERATORS[ch]
    return m


def words_equivalent(u: Word | str, v: Word | str) -> bool:
    return eval_word(u) == eval_word(v)


def standard_fibration_word(n: int) -> Word:
    """(ab)^(6n), the monodromy of the elliptic surface E(n)."""
    if n < 1:
        raise WordError(f"n must be positive, got {n}")
    return Word("ab") ** (6 * n)


@dataclass(frozen=True, order=True)
class VanishingCycle:
    """Primitive vector in H_1(T^2), first nonzero coordinate positive."""

    p: int
    q: int

    def __post_init__(self):
        if (self.p, self.q) == (0, 0) or gcd(self.p, self.q) != 1:
            raise ValueError(f"({self.p}, {self.q}) is not primitive")
        if self.p < 0 or (self.p == 0 and self.q < 0):
            raise ValueError(f"({self.p}, {self.q}) is not canonically signed")

    @classmethod
    def canonical(cls, p: int, q: int) -> "VanishingCycle":
        if p < 0 or (p == 0 and q < 0):
            p, q = -p, -q
        return cls(p, q)


def vanishing_cycle_of_conjugate(conjugator: Word | str) -> VanishingCycle:
    return VanishingCycle.canonical(*eval_word(conjugator).apply((0, 1)))


@dataclass(frozen=True)
class FiberType:
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"I_k needs k >= 1, got {self.k}")

    @property
    def is_fishtail(self) -> bool:
        return self.k == 1

    def __str__(self) -> str:
        return f"I{self.k}"


@dataclass(frozen=True)
class FiberBlock:
    """conjugator . b^multiplicity . conjugator^-1"""

    conjugator: Word
    multiplicity: int
    cycle: VanishingCycle = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be positive")
        derived = vanishing_cycle_of_conjugate(self.conjugator)
        if self.cycle is None:
            object.__setattr__(self, "cycle", derived)
        elif self.cycle != derived:
            raise ValueError(f"stored cycle {self.cycle} != derived {derived}")

    def word(self) -> Word:
        return self.conjugator * Word("b" * self.multiplicity) * self.conjugator.inverse()


@dataclass(frozen=True)
class Factorization:
    """a^a_power followed by the blocks, in order."""

    a_power: int
    blocks: tuple[FiberBlock, ...] = ()

    def __post_init__(self):
        if self.a_power < 0:
            raise ValueError("a_power must be nonnegative")
        object.__setattr__(self, "blocks", tuple(self.blocks))

    def word(self) -> Word:
        w = Word("a" * self.a_power)
        for blk in self.blocks:
            w = w * blk.word()
        return w

    def matrix(self) -> SL2Matrix:
        return eval_word(self.word())

    @property
    def multiplicities(self) -> list[int]:
        return [blk.multiplicity for blk in self.blocks]


def collect_a_powers(w: Word | str) -> Factorization:
    """Move every power of ``a`` to the front by conjugating the b-runs.

    A b-run of length m with total a-exponent t to its right becomes the
    block a^-t b^m a^t.  The reassembled word freely reduces back to ``w``.
    """
    w = as_word(w)
    if not w.is_positive():
        raise WordError(f"collect_a_powers needs a positive word, got {w}")
    runs = [m for m in re.finditer(r"a+|b+", w.text)]
    total_a = w.text.count("a")
    blocks = []
    seen_a = 0
    for m in runs:
        if m.group(0)[0] == "a":
            seen_a += len(m.group(0))
        else:
            t = total_a - seen_a
            blocks.append(FiberBlock(Word.power("a", -t), len(m.group(0))))
    return Factorization(total_a, tuple(blocks))


def fiber_decomposition(f: Factorization) -> list[FiberType]:
    fibers = [FiberType(f.a_power)] if f.a_power >= 1 else []
    return fibers + [FiberType(blk.multiplicity) for blk in f.blocks]


# (ab)^-1 . b . (ab) = a, so a^k = BA . b^k . ab
_A_CONJUGATOR = Word("BA")


def a_power_as_block(f: Factorization) -> Factorization:
    """Rewrite the leading a^k as an ordinary conjugated block."""
    if f.a_power == 0:
        return f
    return Factorization(0, (FiberBlock(_A_CONJUGATOR, f.a_power),) + f.blocks)


def perturb_Ik(f: Factorization, block_index: int, k1: int) -> Factorization:
    """Split the I_k block at ``block_index`` into adjacent I_k1 and I_(k-k1)."""
    if not 0 <= block_index < len(f.blocks):
        raise IndexError(f"block index {block_index} out of range (have {len(f.blocks)})")
    blk = f.blocks[block_index]
    if not 1 <= k1 < blk.multiplicity:
        raise WordError(f"invalid split k1={k1} of an I{blk.multiplicity} block")
    parts = (
        FiberBlock(blk.conjugator, k1, blk.cycle),
        FiberBlock(blk.conjugator, blk.multiplicity - k1, blk.cycle),
    )
    blocks = f.blocks[:block_index] + parts + f.blocks[block_index + 1 :]
    return Factorization(f.a_power, blocks)


def euler_from_twists(f: Factorization) -> int:
    return f.a_power + sum(f.multiplicities)


def factorization_summary(f: Factorization) -> dict:
    """Plain-data view used by reports and the CLI."""
    return {
        "a_power": f.a_power,
        "blocks": [
            {
                "conjugator": str(blk.conjugator),
                "multiplicity": blk.multiplicity,
                "cycle": [blk.cycle.p, blk.cycle.q],
            }
            for blk in f.blocks
        ],
        "fibers": [str(t) for t in fiber_decomposition(f)],
        "twists": euler_from_twists(f),
    }


def distinct_cycles(blocks: Sequence[FiberBlock]) -> list[VanishingCycle]:
    return sorted({blk.cycle for blk in blocks})
