"""Integer lattices with a symmetric pairing, and sphere configurations in them.

Blow-ups only ever *extend* a lattice (new label, square -1, orthogonal to
everything before), so a class from an earlier lattice is comparable with
classes of any extension by zero padding.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .rbd import PlumbingChain


class LatticeError(ValueError):
    pass


class NotAChain(LatticeError):
    pass


@dataclass(frozen=True)
class Lattice:
    labels: tuple[str, ...]
    gram: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        labels = tuple(self.labels)
        gram = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "gram", gram)
        n = len(labels)
        if len(set(labels)) != n:
            raise LatticeError("duplicate basis labels")
        if len(gram) != n or any(len(row) != n for row in gram):
            raise LatticeError("gram matrix does not match the number of labels")
        if any(gram[i][j] != gram[j][i] for i in range(n) for j in range(i)):
            raise LatticeError("gram matrix is not symmetric")

    @classmethod
    def from_pairings(cls, labels: Sequence[str], squares: dict, pairs: dict | None = None) -> "Lattice":
        """Build from label squares and off-diagonal pairings ``{(l1, l2): value}``."""
        idx = {l: i for i, l in enumerate(labels)}
        gram = [[0] * len(labels) for _ in labels]
        for l, s in squares.items():
            gram[idx[l]][idx[l]] = s
        for (l1, l2), v in (pairs or {}).items():
            gram[idx[l1]][idx[l2]] = gram[idx[l2]][idx[l1]] = v
        return cls(tuple(labels), tuple(map(tuple, gram)))

    @property
    def rank(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise LatticeError(f"unknown basis label {label!r}") from None

    def basis(self, label: str) -> "HomClass":
        coords = [0] * self.rank
        coords[self.index(label)] = 1
        return HomClass(self, tuple(coords))

    def zero(self) -> "HomClass":
        return HomClass(self, (0,) * self.rank)

    def element(self, coeffs: dict[str, int]) -> "HomClass":
        coords = [0] * self.rank
        for label, c in coeffs.items():
            coords[self.index(label)] += c
        return HomClass(self, tuple(coords))

    def extend(self, label: str, square: int = -1) -> "Lattice":
        if label in self.labels:
            raise LatticeError(f"label {label!r} already present")
        gram = [list(row) + [0] for row in self.gram]
        gram.append([0] * self.rank + [square])
        return Lattice(self.labels + (label,), tuple(map(tuple, gram)))

    def extends(self, other: "Lattice") -> bool:
        """True if ``self`` is ``other`` with extra labels appended."""
        n = other.rank
        if self.rank < n or self.labels[:n] != other.labels:
            return False
        return all(self.gram[i][:n] == other.gram[i] for i in range(n))

    def next_label(self, prefix: str = "E") -> str:
        pat = re.compile(re.escape(prefix) + r"(\d+)$")
        used = [int(m.group(1)) for m in map(pat.match, self.labels) if m]
        return f"{prefix}{max(used, default=0) + 1}"

    def determinant(self) -> int:
        from .linalg import bareiss_det

        return bareiss_det(self.gram)

    def to_dict(self) -> dict:
        return {"labels": list(self.labels), "gram": [list(r) for r in self.gram]}


def common_lattice(x: Lattice, y: Lattice) -> Lattice:
    if x == y or x.extends(y):
        return x
    if y.extends(x):
        return y
    raise LatticeError("classes live in unrelated lattices")


@dataclass(frozen=True)
class HomClass:
    lattice: Lattice = field(repr=False)
    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))
        if len(self.coords) != self.lattice.rank:
            raise LatticeError("coordinate vector does not match lattice rank")

    def lift(self, lattice: Lattice) -> "HomClass":
        if lattice == self.lattice:
            return self
        if not lattice.extends(self.lattice):
            raise LatticeError("target lattice does not extend the class's lattice")
        return HomClass(lattice, self.coords + (0,) * (lattice.rank - self.lattice.rank))

    def _align(self, other: "HomClass") -> tuple["HomClass", "HomClass"]:
        lat = common_lattice(self.lattice, other.lattice)
        return self.lift(lat), other.lift(lat)

    def __add__(self, other: "HomClass") -> "HomClass":
        x, y = self._align(other)
        return HomClass(x.lattice, tuple(a + b for a, b in zip(x.coords, y.coords)))

    def __sub__(self, other: "HomClass") -> "HomClass":
        return self + (-1) * other

    def __neg__(self) -> "HomClass":
        return (-1) * self

    def __rmul__(self, k: int) -> "HomClass":
        return HomClass(self.lattice, tuple(k * c for c in self.coords))

    @property
    def square(self) -> int:
        return pairing(self, self)

    def as_dict(self) -> dict[str, int]:
        return {l: c for l, c in zip(self.lattice.labels, self.coords) if c}

    def __str__(self) -> str:
        parts = []
        for label, c in self.as_dict().items():
            coef = "" if c == 1 else "-" if c == -1 else str(c)
            parts.append(f"{coef}{label}")
        return " + ".join(parts).replace("+ -", "- ") or "0"


def pairing(x: HomClass, y: HomClass) -> int:
    x, y = x._align(y)
    g = x.lattice.gram
    total = 0
    for i, xi in enumerate(x.coords):
        if xi:
            row = g[i]
            total += xi * sum(row[j] * yj for j, yj in enumerate(y.coords) if yj)
    return total


@dataclass(frozen=True)
class ImmersedSphere:
    """A sphere representing ``cls`` with ``double_points`` positive double points.

    The geometric data is declared, not proved; only its arithmetic is checked.
    """

    cls: HomClass
    double_points: int = 0
    name: str = ""
    positive_points: bool = True

    def __post_init__(self):
        if self.double_points < 0:
            raise LatticeError("double point count must be nonnegative")

    @property
    def square(self) -> int:
        return self.cls.square

    @property
    def embedded(self) -> bool:
        return self.double_points == 0

    def lift(self, lattice: Lattice) -> "ImmersedSphere":
        return ImmersedSphere(self.cls.lift(lattice), self.double_points, self.name, self.positive_points)

    def renamed(self, name: str) -> "ImmersedSphere":
        return ImmersedSphere(self.cls, self.double_points, name, self.positive_points)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "class": list(self.cls.coords),
            "square": self.square,
            "double_points": self.double_points,
        }


Configuration = tuple[ImmersedSphere, ...]


def resolve_spheres(s1: ImmersedSphere, s2: ImmersedSphere, intersections: int, name: str | None = None) -> ImmersedSphere:
    """Smooth the ``intersections`` transverse points of s1 and s2.

    One intersection is absorbed by the connected sum; every other one
    survives as a double point of the result.
    """
    if intersections < 1:
        raise LatticeError("need at least one intersection point to resolve")
    algebraic = pairing(s1.cls, s2.cls)
    if algebraic != intersections:
        raise LatticeError(
            f"declared {intersections} transverse intersections but classes pair to {algebraic}"
        )
    return ImmersedSphere(
        s1.cls + s2.cls,
        s1.double_points + s2.double_points + intersections - 1,
        s1.name if name is None else name,
        s1.positive_points and s2.positive_points,
    )


def blow_up_double_point(s: ImmersedSphere, label: str | None = None) -> ImmersedSphere:
    """Blow up one double point: proper transform is cls - 2E, square drops by 4."""
    if s.double_points < 1:
        raise LatticeError(f"sphere {s.name or s.cls} has no double point to blow up")
    lat = s.cls.lattice
    lat = lat.extend(label or lat.next_label())
    e = lat.basis(lat.labels[-1])
    return ImmersedSphere(s.cls.lift(lat) - 2 * e, s.double_points - 1, s.name, s.positive_points)


def lift_config(config: Sequence[ImmersedSphere], lattice: Lattice) -> Configuration:
    return tuple(s.lift(lattice) for s in config)


def config_lattice(config: Sequence[ImmersedSphere]) -> Lattice:
    lat = config[0].cls.lattice
    for s in config[1:]:
        lat = common_lattice(lat, s.cls.lattice)
    return lat


def blow_up_at_intersection(
    config: Sequence[ImmersedSphere], i: int, j: int, label: str | None = None, name: str | None = None
) -> tuple[Configuration, ImmersedSphere]:
    """Blow up one intersection point of spheres i and j.

    Returns the updated configuration (new exceptional sphere appended) and
    that sphere.
    """
    n = len(config)
    if not (0 <= i < n and 0 <= j < n) or i == j:
        raise IndexError(f"invalid sphere indices {i}, {j}")
    if not (config[i].embedded and config[j].embedded):
        raise LatticeError("blow_up_at_intersection needs embedded spheres")
    if pairing(config[i].cls, config[j].cls) < 1:
        raise LatticeError(f"spheres {i} and {j} do not meet: nothing to separate")
    lat = config_lattice(config)
    label = label or lat.next_label()
    lat = lat.extend(label)
    e = lat.basis(label)
    out = list(lift_config(config, lat))
    for k in (i, j):
        s = out[k]
        out[k] = ImmersedSphere(s.cls - e, 0, s.name, s.positive_points)
    exc = ImmersedSphere(e, 0, name or label)
    out.append(exc)
    return tuple(out), exc


def pairing_matrix(config: Sequence[ImmersedSphere]) -> list[list[int]]:
    lat = config_lattice(config)
    classes = [s.cls.lift(lat) for s in config]
    return [[pairing(x, y) for y in classes] for x in classes]


def extract_linear_chain(config: Sequence[ImmersedSphere], order: Sequence[int]) -> PlumbingChain:
    """Self-intersections along ``order`` after checking it is a linear plumbing."""
    if not order:
        raise NotAChain("empty selection")
    if len(set(order)) != len(order):
        raise NotAChain("selection repeats a sphere")
    sub = [config[k] for k in order]
    for s in sub:
        if not s.embedded:
            raise NotAChain(f"sphere {s.name or s.cls} is immersed")
    q = pairing_matrix(sub)
    for a in range(len(sub)):
        for b in range(a + 1, len(sub)):
            want = 1 if b == a + 1 else 0
            if q[a][b] != want:
                raise NotAChain(
                    f"spheres {order[a]} and {order[b]} pair to {q[a][b]}, expected {want}"
                )
    return PlumbingChain(tuple(q[a][a] for a in range(len(sub))))


def _chain_paths(squares, adj, embedded, start, target) -> Iterator[list[int]]:
    # adj[i][j] is the pairing of spheres i and j
    n = len(squares)
    if not embedded[start] or squares[start] != target[0]:
        return

    def grow(path):
        if len(path) == len(target):
            yield list(path)
            return
        want = target[len(path)]
        last = path[-1]
        for k in range(n):
            if k in path or not embedded[k] or squares[k] != want or adj[last][k] != 1:
                continue
            if any(adj[p][k] != 0 for p in path[:-1]):
                continue
            path.append(k)
            yield from grow(path)
            path.pop()

    yield from grow([start])


def find_linear_chain(config: Sequence[ImmersedSphere], start: int, target: Sequence[int]) -> list[int] | None:
    """First path (in index order) from ``start`` whose squares read ``target``."""
    q = pairing_matrix(config)
    squares = [q[i][i] for i in range(len(config))]
    embedded = [s.embedded for s in config]
    return next(_chain_paths(squares, q, embedded, start, list(target)), None)


def infinitely_close_blow_ups(
    config: Sequence[ImmersedSphere], i: int, j: int, follow: Sequence[int]
) -> tuple[Configuration, list[ImmersedSphere]]:
    """Blow up the point where i meets j, then len(follow) more times.

    Step k blows up the point where the newest exceptional sphere meets
    sphere ``follow[k]`` (which must be one of the two spheres it separated).
    """
    cfg, exc = blow_up_at_intersection(config, i, j)
    created = [exc]
    pair = (i, j)
    for partner in follow:
        newest = len(cfg) - 1
        if partner not in pair:
            raise LatticeError(
                f"sphere {partner} does not meet the newest exceptional curve at a blown-up point"
            )
        cfg, exc = blow_up_at_intersection(cfg, partner, newest)
        created.append(exc)
        pair = (partner, newest)
    return cfg, created


def search_infinitely_close(
    config: Sequence[ImmersedSphere],
    i: int,
    j: int,
    count: int,
    start: int,
    target: Sequence[int],
    limit: int | None = 1,
) -> list[tuple[list[int], list[int]]]:
    """Bounded search over ``count`` infinitely close blow-ups starting at i & j.

    Works on the intersection graph (squares and pairings of proper
    transforms), which a blow-up at a transverse point changes by:
    both squares -1, their pairing -1, a new (-1) vertex meeting both.
    Returns up to ``limit`` pairs (follow sequence, chain indices); every
    hit is replayed through the lattice before it is returned.
    """
    q = pairing_matrix(config)
    n0 = len(config)
    squares = [q[a][a] for a in range(n0)]
    adj = [list(row) for row in q]
    embedded = [s.embedded for s in config]
    target = list(target)
    floor = min(target)
    found: list[tuple[list[int], list[int]]] = []

    def blow(a, b):
        squares[a] -= 1
        squares[b] -= 1
        adj[a][b] -= 1
        adj[b][a] -= 1
        for row in adj:
            row.append(0)
        new = len(squares)
        adj.append([0] * (new + 1))
        adj[new][new] = -1
        adj[a][new] = adj[new][a] = 1
        adj[b][new] = adj[new][b] = 1
        squares.append(-1)
        embedded.append(True)
        return new

    def unblow(a, b):
        squares.pop()
        embedded.pop()
        adj.pop()
        for row in adj:
            row.pop()
        squares[a] += 1
        squares[b] += 1
        adj[a][b] += 1
        adj[b][a] += 1

    def dfs(pair, follow, remaining):
        if limit is not None and len(found) >= limit:
            return
        if min(squares) < floor:
            return
        if remaining == 0:
            for path in _chain_paths(squares, adj, embedded, start, target):
                found.append((list(follow), path))
                break
            return
        newest = len(squares) - 1
        for partner in pair:
            if adj[partner][newest] < 1:
                continue
            blow(partner, newest)
            follow.append(partner)
            dfs((partner, newest), follow, remaining - 1)
            follow.pop()
            unblow(partner, newest)

    if adj[i][j] >= 1 and count >= 1:
        blow(i, j)
        dfs((i, j), [], count - 1)
        unblow(i, j)

    for follow, path in found:
        cfg, _ = infinitely_close_blow_ups(config, i, j, follow)
        chain = extract_linear_chain(cfg, path)
        if list(chain.coefficients) != target:
            raise AssertionError("graph search and lattice replay disagree")
    return found


def config_to_json(config: Sequence[ImmersedSphere]) -> str:
    lat = config_lattice(config)
    doc = lat.to_dict()
    doc["spheres"] = [s.lift(lat).to_dict() for s in config]
    return json.dumps(doc, sort_keys=True)


def config_from_json(text: str) -> Configuration:
    doc = json.loads(text)
    lat = Lattice(tuple(doc["labels"]), tuple(map(tuple, doc["gram"])))
    out = []
    for rec in doc["spheres"]:
        s = ImmersedSphere(HomClass(lat, tuple(rec["class"])), rec["double_points"], rec.get("name", ""))
        if "square" in rec and rec["square"] != s.square:
            raise LatticeError(f"sphere {s.name}: recorded square {rec['square']} != {s.square}")
        out.append(s)
    return tuple(out)
