"""Instances, tours and the precomputed per-tour solve context.

Instance files follow the public TTP benchmark layout::

    PROBLEM NAME: eil51-TTP
    KNAPSACK DATA TYPE: uncorrelated
    DIMENSION: 51
    NUMBER OF ITEMS: 50
    CAPACITY OF KNAPSACK: 4029
    MIN SPEED: 0.1
    MAX SPEED: 1
    RENTING RATIO: 1.62
    EDGE_WEIGHT_TYPE: CEIL_2D
    NODE_COORD_SECTION (INDEX, X, Y):
    1 37.00 52.00
    ...
    ITEMS SECTION (INDEX, PROFIT, WEIGHT, ASSIGNED NODE NUMBER):
    1 101 1 2
    ...
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import ParseError, StructureError, ValidationError

EDGE_WEIGHT_KINDS = ("CEIL_2D", "EUC_2D")

_HEADER_KEYS = {
    "PROBLEM NAME": "name",
    "KNAPSACK DATA TYPE": "data_type",
    "DIMENSION": "dimension",
    "NUMBER OF ITEMS": "n_items",
    "CAPACITY OF KNAPSACK": "capacity",
    "MIN SPEED": "v_min",
    "MAX SPEED": "v_max",
    "RENTING RATIO": "renting_rate",
    "EDGE_WEIGHT_TYPE": "edge_weight_kind",
}


@dataclass(frozen=True)
class Item:
    id: int
    profit: float
    weight: float
    city: int


@dataclass(frozen=True, eq=False)
class Instance:
    """A TTP instance; only the packing part is optimised, the tour is given."""

    name: str
    coords: tuple[tuple[float, float], ...]
    items: tuple[Item, ...]
    capacity: float
    renting_rate: float
    v_max: float
    v_min: float
    edge_weight_kind: str = "CEIL_2D"
    data_type: str = ""

    def __post_init__(self):
        n = len(self.coords)
        if n < 2:
            raise ValidationError("an instance needs at least two cities")
        if self.edge_weight_kind not in EDGE_WEIGHT_KINDS:
            raise ValidationError(f"unsupported EDGE_WEIGHT_TYPE {self.edge_weight_kind!r}")
        if not self.v_max > self.v_min > 0:
            raise ValidationError("speeds must satisfy v_max > v_min > 0")
        # capacity 0 is allowed: nothing fits, the empty plan is the only solution
        if self.capacity < 0:
            raise ValidationError("capacity must be nonnegative")
        if self.renting_rate < 0:
            raise ValidationError("renting rate must be nonnegative")
        for k, item in enumerate(self.items, start=1):
            if item.id != k:
                raise ValidationError(f"item ids must be 1..m in order, got {item.id} at slot {k}")
            if not 2 <= item.city <= n:
                raise ValidationError(f"item {item.id} assigned to city {item.city}, expected 2..{n}")
            if item.profit <= 0 or item.weight <= 0:
                raise ValidationError(f"item {item.id} needs positive profit and weight")

    @property
    def n_cities(self) -> int:
        return len(self.coords)

    @property
    def n_items(self) -> int:
        return len(self.items)

    @property
    def nu(self) -> float:
        if self.capacity == 0:
            return math.inf
        return (self.v_max - self.v_min) / self.capacity

    @cached_property
    def profits(self) -> np.ndarray:
        return np.array([it.profit for it in self.items], dtype=np.float64)

    @cached_property
    def weights(self) -> np.ndarray:
        return np.array([it.weight for it in self.items], dtype=np.float64)

    @cached_property
    def item_city(self) -> np.ndarray:
        return np.array([it.city for it in self.items], dtype=np.int64)

    def with_capacity(self, capacity: float) -> Instance:
        return Instance(self.name, self.coords, self.items, capacity, self.renting_rate,
                        self.v_max, self.v_min, self.edge_weight_kind, self.data_type)

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (self.name, self.coords, self.items, self.capacity, self.renting_rate,
                self.v_max, self.v_min, self.edge_weight_kind, self.data_type) == (
            other.name, other.coords, other.items, other.capacity, other.renting_rate,
            other.v_max, other.v_min, other.edge_weight_kind, other.data_type)

    __hash__ = None


def _number(text: str, line_no: int, line: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"expected a number, got {text!r}", line_no, line) from None


def _integer(text: str, line_no: int, line: str) -> int:
    value = _number(text, line_no, line)
    if value != int(value):
        raise ParseError(f"expected an integer, got {text!r}", line_no, line)
    return int(value)


def parse_instance(text: str) -> Instance:
    """Parse the contents of a TTP benchmark file."""
    header: dict[str, str] = {}
    coords: list[tuple[float, float]] = []
    raw_items: list[tuple[int, float, float, int]] = []
    section = None
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        upper = stripped.upper()
        if upper.startswith("NODE_COORD_SECTION"):
            section = "nodes"
            continue
        if upper.startswith("ITEMS SECTION"):
            section = "items"
            continue
        if upper in ("EOF", "-1"):
            section = None
            continue
        if section is None:
            key, sep, value = stripped.partition(":")
            if not sep:
                raise ParseError("header line without ':'", line_no, line)
            key = " ".join(key.split()).upper()
            if key in _HEADER_KEYS:
                header[_HEADER_KEYS[key]] = (value.strip(), line_no, line)
            continue
        parts = stripped.split()
        if section == "nodes":
            if len(parts) < 3:
                raise ParseError("coordinate line needs INDEX X Y", line_no, line)
            idx = _integer(parts[0], line_no, line)
            if idx != len(coords) + 1:
                raise ParseError(f"city index {idx} out of sequence", line_no, line)
            coords.append((_number(parts[1], line_no, line), _number(parts[2], line_no, line)))
        else:
            if len(parts) < 4:
                raise ParseError("item line needs INDEX PROFIT WEIGHT NODE", line_no, line)
            raw_items.append((
                _integer(parts[0], line_no, line),
                _number(parts[1], line_no, line),
                _number(parts[2], line_no, line),
                _integer(parts[3], line_no, line),
            ))

    required = ("dimension", "n_items", "capacity", "v_min", "v_max", "renting_rate")
    missing = [k for k in required if k not in header]
    if missing:
        raise StructureError(f"missing header fields: {', '.join(missing)}")

    def num(key):
        value, line_no, line = header[key]
        return _number(value, line_no, line)

    def intval(key):
        value, line_no, line = header[key]
        return _integer(value, line_no, line)

    dimension = intval("dimension")
    n_items = intval("n_items")
    if len(coords) != dimension:
        raise StructureError(f"DIMENSION is {dimension} but {len(coords)} coordinate lines were found")
    if len(raw_items) != n_items:
        raise StructureError(f"NUMBER OF ITEMS is {n_items} but {len(raw_items)} item lines were found")
    raw_items.sort(key=lambda t: t[0])
    items = tuple(Item(i, p, w, c) for i, p, w, c in raw_items)
    kind = header.get("edge_weight_kind", ("CEIL_2D", 0, ""))[0].upper()
    return Instance(
        name=header.get("name", ("", 0, ""))[0],
        coords=tuple(coords),
        items=items,
        capacity=num("capacity"),
        renting_rate=num("renting_rate"),
        v_max=num("v_max"),
        v_min=num("v_min"),
        edge_weight_kind=kind,
        data_type=header.get("data_type", ("", 0, ""))[0],
    )


def load_instance(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def _fmt(x: float) -> str:
    if float(x).is_integer() and abs(x) < 2**53:
        return str(int(x))
    return repr(float(x))


def format_instance(instance: Instance) -> str:
    """Serialise an instance so that :func:`parse_instance` reproduces it exactly."""
    lines = [
        f"PROBLEM NAME:\t{instance.name}",
        f"KNAPSACK DATA TYPE:\t{instance.data_type}",
        f"DIMENSION:\t{instance.n_cities}",
        f"NUMBER OF ITEMS:\t{instance.n_items}",
        f"CAPACITY OF KNAPSACK:\t{_fmt(instance.capacity)}",
        f"MIN SPEED:\t{_fmt(instance.v_min)}",
        f"MAX SPEED:\t{_fmt(instance.v_max)}",
        f"RENTING RATIO:\t{_fmt(instance.renting_rate)}",
        f"EDGE_WEIGHT_TYPE:\t{instance.edge_weight_kind}",
        "NODE_COORD_SECTION\t(INDEX, X, Y):",
    ]
    lines += [f"{i}\t{_fmt(x)}\t{_fmt(y)}" for i, (x, y) in enumerate(instance.coords, start=1)]
    lines.append("ITEMS SECTION\t(INDEX, PROFIT, WEIGHT, ASSIGNED NODE NUMBER):")
    lines += [f"{it.id}\t{_fmt(it.profit)}\t{_fmt(it.weight)}\t{it.city}" for it in instance.items]
    return "\n".join(lines) + "\n"


def distance(instance: Instance, i: int, j: int) -> float:
    """Euclidean distance between 1-based cities, rounded up under CEIL_2D."""
    if i == j:
        return 0.0
    (xi, yi), (xj, yj) = instance.coords[i - 1], instance.coords[j - 1]
    d = math.sqrt((xi - xj) ** 2 + (yi - yj) ** 2)
    if instance.edge_weight_kind == "CEIL_2D":
        return float(math.ceil(d))
    return d


def _rotate_and_check(tour: Sequence[int], n: int) -> list[int]:
    tour = list(tour)
    for c in tour:
        if not 1 <= c <= n:
            raise ValidationError(f"city {c} outside 1..{n}")
    if len(set(tour)) != len(tour):
        dup = sorted({c for c in tour if tour.count(c) > 1})
        raise ValidationError(f"duplicate cities in tour: {dup}")
    if len(tour) != n:
        missing = sorted(set(range(1, n + 1)) - set(tour))
        raise ValidationError(f"tour misses cities {missing}")
    k = tour.index(1)
    return tour[k:] + tour[:k]


def parse_tour(text: str, n: int) -> list[int]:
    """Read a tour as a plain index list or a TSPLIB TOUR_SECTION; rotate it to start at city 1."""
    tokens: list[str] = []
    if "TOUR_SECTION" in text.upper():
        in_section = False
        for line in text.splitlines():
            s = line.strip()
            if s.upper().startswith("TOUR_SECTION"):
                in_section = True
                continue
            if not in_section:
                continue
            stop = False
            for tok in s.split():
                if tok == "-1" or tok.upper() == "EOF":
                    stop = True
                    break
                tokens.append(tok)
            if stop:
                break
    else:
        tokens = text.replace(",", " ").split()
    try:
        tour = [int(t) for t in tokens]
    except ValueError as exc:
        raise ParseError(f"non-integer city in tour: {exc}") from None
    return _rotate_and_check(tour, n)


def load_tour(path, n: int) -> list[int]:
    with open(path, encoding="utf-8") as fh:
        return parse_tour(fh.read(), n)


@dataclass(frozen=True, eq=False)
class TourContext:
    """A fixed tour with everything the packing algorithms precompute from it.

    ``seg_len[k]`` is the length of the leg leaving tour position ``k``
    (the last leg returns to city 1); ``item_pos`` and ``item_d`` give each
    item's 0-based tour position and the distance from its city to the end.
    """

    instance: Instance
    tour: tuple[int, ...]
    pos_of_city: dict[int, int]
    suffix_distance: dict[int, float]
    total_distance: float
    nu: float
    seg_len: np.ndarray = field(repr=False)
    item_pos: np.ndarray = field(repr=False)
    item_d: np.ndarray = field(repr=False)


def build_context(instance: Instance, tour: Sequence[int]) -> TourContext:
    n = instance.n_cities
    tour = tuple(_rotate_and_check(tour, n))
    seg_len = np.empty(n, dtype=np.float64)
    for k in range(n):
        seg_len[k] = distance(instance, tour[k], tour[(k + 1) % n])
    suffix: dict[int, float] = {}
    acc = 0.0
    for k in range(n - 1, -1, -1):
        acc = float(seg_len[k]) + acc
        suffix[tour[k]] = acc
    pos_of_city = {c: k for k, c in enumerate(tour)}
    item_pos = np.array([pos_of_city[c] for c in instance.item_city], dtype=np.int64)
    item_d = np.array([suffix[c] for c in instance.item_city], dtype=np.float64)
    for arr in (seg_len, item_pos, item_d):
        arr.setflags(write=False)
    return TourContext(
        instance=instance,
        tour=tour,
        pos_of_city=pos_of_city,
        suffix_distance=suffix,
        total_distance=suffix[tour[0]],
        nu=instance.nu,
        seg_len=seg_len,
        item_pos=item_pos,
        item_d=item_d,
    )


def tour_length(instance: Instance, tour: Sequence[int]) -> float:
    n = len(tour)
    return sum(distance(instance, tour[k], tour[(k + 1) % n]) for k in range(n))


def _distance_matrix(instance: Instance) -> np.ndarray:
    xy = np.asarray(instance.coords, dtype=np.float64)
    d = np.sqrt(((xy[:, None, :] - xy[None, :, :]) ** 2).sum(axis=2))
    if instance.edge_weight_kind == "CEIL_2D":
        d = np.ceil(d)
    np.fill_diagonal(d, 0.0)
    return d


def nn_tour(instance: Instance, seed: int = 0, *, improve: bool = True) -> list[int]:
    """Nearest-neighbour tour from city 1, then first-improvement 2-opt.

    Ties between equally near cities are broken at random; the 2-opt sweep
    visits start positions in a seeded random order, so different seeds can
    settle in different local optima.
    """
    rng = np.random.default_rng(seed)
    d = _distance_matrix(instance)
    n = instance.n_cities
    unvisited = np.ones(n, dtype=bool)
    unvisited[0] = False
    order = [0]
    while len(order) < n:
        row = np.where(unvisited, d[order[-1]], np.inf)
        best = np.flatnonzero(row == row.min())
        nxt = int(best[0] if len(best) == 1 else rng.choice(best))
        order.append(nxt)
        unvisited[nxt] = False
    if improve:
        order = _two_opt(d, order, rng)
    return [c + 1 for c in order]


def _two_opt(d: np.ndarray, order: list[int], rng) -> list[int]:
    # reverse order[i..j] for 1 <= i < j <= n-1 keeps city 1 in front
    t = np.array(order)
    n = len(t)
    if n < 4:
        return order
    improved = True
    while improved:
        improved = False
        for i in rng.permutation(np.arange(1, n - 1)):
            a, b = t[i - 1], t[i]
            js = np.arange(i + 1, n)
            c = t[js]
            e = t[(js + 1) % n]
            gain = d[a, b] + d[c, e] - d[a, c] - d[b, e]
            hits = np.flatnonzero(gain > 1e-9)
            if len(hits):
                j = int(js[hits[0]])
                t[i:j + 1] = t[i:j + 1][::-1].copy()
                improved = True
    return [int(c) for c in t]
