"""Examples, datasets, concept classes, hypotheses and the brute-force ERM oracle."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, ClassVar, Iterable, Iterator, NamedTuple, Sequence

from .bits import width
from .errors import ClassMismatchError, EnumerationCapError, UnrealizableError
from . import gf2


class Example(NamedTuple):
    x: Any
    y: int


# ---------------------------------------------------------------- hypotheses


@dataclass(frozen=True)
class Threshold:
    a: int

    def __call__(self, x) -> int:
        return int(x > self.a)

    def __str__(self):
        return f"h>{self.a}"


@dataclass(frozen=True)
class ProductThreshold:
    a: tuple

    def __call__(self, x) -> int:
        return int(all(xi > ai for xi, ai in zip(x, self.a)))

    def __str__(self):
        return "h>(" + ",".join(map(str, self.a)) + ")"


@dataclass(frozen=True)
class Parity:
    w: tuple

    def __call__(self, x) -> int:
        return sum(wi & xi for wi, xi in zip(self.w, x)) & 1

    def __str__(self):
        return "parity(" + ",".join(map(str, self.w)) + ")"


@dataclass(frozen=True)
class Point:
    a: int

    def __call__(self, x) -> int:
        return int(x == self.a)

    def __str__(self):
        return f"point({self.a})"


@dataclass(frozen=True)
class PointOrZero:
    """A point function, or the all-zero function when `a` is None."""

    a: int | None

    def __call__(self, x) -> int:
        return int(self.a is not None and x == self.a)

    def __str__(self):
        return "zero" if self.a is None else f"point({self.a})"


@dataclass(frozen=True)
class Explicit:
    index: int
    row: int  # bit x-1 holds h(x)

    def __call__(self, x) -> int:
        return (self.row >> (x - 1)) & 1

    def __str__(self):
        return f"row({self.index})"


# ------------------------------------------------------------ concept classes


class ConceptClass:
    kind: ClassVar[str]
    hypothesis_type: ClassVar[type]

    def points(self) -> Iterable:
        raise NotImplementedError

    def hypotheses(self) -> Iterable:
        raise NotImplementedError

    def contains(self, x) -> bool:
        raise NotImplementedError

    def normalize_point(self, x):
        return x

    # example codes give a dense numbering of Z = X x {0,1}
    @property
    def n_examples(self) -> int:
        return 2 * self.n_points

    @property
    def example_width(self) -> int:
        return width(self.n_examples)

    def example_code(self, z: Example) -> int:
        x, y = z
        return 2 * self.point_code(x) + y

    def example_from_code(self, code: int) -> Example:
        return Example(self.point_from_code(code >> 1), code & 1)

    def owns(self, h) -> bool:
        return isinstance(h, self.hypothesis_type)

    def descriptor(self) -> str:
        raise NotImplementedError

    @property
    def hypothesis_width(self) -> int:
        return width(self.n_hypotheses)

    def write_hypothesis(self, w, h):
        w.write(self.hypothesis_code(h), self.hypothesis_width)

    def read_hypothesis(self, r):
        c = r.read(self.hypothesis_width)
        if c >= self.n_hypotheses:
            raise ValueError("hypothesis code out of range")
        return self.hypothesis_from_code(c)


@dataclass(frozen=True)
class Thresholds(ConceptClass):
    size: int
    kind: ClassVar[str] = "thresholds"
    hypothesis_type: ClassVar[type] = Threshold

    def points(self):
        return range(1, self.size + 1)

    def hypotheses(self):
        return (Threshold(a) for a in range(self.size + 1))

    @property
    def n_hypotheses(self):
        return self.size + 1

    def contains(self, x):
        return isinstance(x, int) and 1 <= x <= self.size

    @property
    def n_points(self):
        return self.size

    def point_code(self, x):
        return x - 1

    def point_from_code(self, c):
        return c + 1

    def owns(self, h):
        return isinstance(h, Threshold) and 0 <= h.a <= self.size

    def descriptor(self):
        return f"class=thresholds domain={self.size}"

    def hypothesis_code(self, h):
        return h.a

    def hypothesis_from_code(self, c):
        return Threshold(c)


@dataclass(frozen=True)
class ProductThresholds(ConceptClass):
    """h_{>a}(x) = 1 iff x_j > a_j for every coordinate, over {1..m}^d."""

    d: int
    m: int
    kind: ClassVar[str] = "prodthresh"
    hypothesis_type: ClassVar[type] = ProductThreshold

    def points(self):
        return itertools.product(range(1, self.m + 1), repeat=self.d)

    def hypotheses(self):
        return (ProductThreshold(a) for a in itertools.product(range(self.m + 1), repeat=self.d))

    @property
    def n_hypotheses(self):
        return (self.m + 1) ** self.d

    def normalize_point(self, x):
        return tuple(x)

    def contains(self, x):
        return (isinstance(x, tuple) and len(x) == self.d
                and all(isinstance(v, int) and 1 <= v <= self.m for v in x))

    @property
    def n_points(self):
        return self.m ** self.d

    def point_code(self, x):
        c = 0
        for v in reversed(x):
            c = c * self.m + (v - 1)
        return c

    def point_from_code(self, c):
        out = []
        for _ in range(self.d):
            c, r = divmod(c, self.m)
            out.append(r + 1)
        return tuple(out)

    def owns(self, h):
        return (isinstance(h, ProductThreshold) and len(h.a) == self.d
                and all(0 <= v <= self.m for v in h.a))

    def descriptor(self):
        return f"class=prodthresh d={self.d} m={self.m}"

    def hypothesis_code(self, h):
        c = 0
        for v in reversed(h.a):
            c = c * (self.m + 1) + v
        return c

    def hypothesis_from_code(self, c):
        a = []
        for _ in range(self.d):
            c, r = divmod(c, self.m + 1)
            a.append(r)
        return ProductThreshold(tuple(a))


@dataclass(frozen=True)
class Parities(ConceptClass):
    d: int
    kind: ClassVar[str] = "parities"
    hypothesis_type: ClassVar[type] = Parity

    def points(self):
        return itertools.product((0, 1), repeat=self.d)

    def hypotheses(self):
        return (Parity(w) for w in itertools.product((0, 1), repeat=self.d))

    @property
    def n_hypotheses(self):
        return 2 ** self.d

    def normalize_point(self, x):
        return tuple(x)

    def contains(self, x):
        return isinstance(x, tuple) and len(x) == self.d and all(v in (0, 1) for v in x)

    @property
    def n_points(self):
        return 2 ** self.d

    def point_code(self, x):
        return gf2.to_mask(x)

    def point_from_code(self, c):
        return gf2.from_mask(c, self.d)

    def owns(self, h):
        return isinstance(h, Parity) and len(h.w) == self.d

    def descriptor(self):
        return f"class=parities d={self.d}"

    def hypothesis_code(self, h):
        return gf2.to_mask(h.w)

    def hypothesis_from_code(self, c):
        return Parity(gf2.from_mask(c, self.d))


@dataclass(frozen=True)
class PointFunctions(ConceptClass):
    size: int
    kind: ClassVar[str] = "points"
    hypothesis_type: ClassVar[type] = Point

    def points(self):
        return range(1, self.size + 1)

    def hypotheses(self):
        return (Point(a) for a in range(1, self.size + 1))

    @property
    def n_hypotheses(self):
        return self.size

    def contains(self, x):
        return isinstance(x, int) and 1 <= x <= self.size

    @property
    def n_points(self):
        return self.size

    def point_code(self, x):
        return x - 1

    def point_from_code(self, c):
        return c + 1

    def owns(self, h):
        return isinstance(h, Point) and 1 <= h.a <= self.size

    def descriptor(self):
        return f"class=points domain={self.size}"

    def hypothesis_code(self, h):
        return h.a - 1

    def hypothesis_from_code(self, c):
        return Point(c + 1)


@dataclass(frozen=True)
class AugmentedPointFunctions(PointFunctions):
    """Point functions plus the all-zero function."""

    kind: ClassVar[str] = "augpoints"
    hypothesis_type: ClassVar[type] = PointOrZero

    def hypotheses(self):
        yield PointOrZero(None)
        for a in range(1, self.size + 1):
            yield PointOrZero(a)

    @property
    def n_hypotheses(self):
        return self.size + 1

    def owns(self, h):
        return isinstance(h, PointOrZero) and (h.a is None or 1 <= h.a <= self.size)

    def descriptor(self):
        return f"class=augpoints domain={self.size}"

    def hypothesis_code(self, h):
        return 0 if h.a is None else h.a

    def hypothesis_from_code(self, c):
        return PointOrZero(c or None)


@dataclass(frozen=True)
class ExplicitClass(ConceptClass):
    """A finite class given by its truth table; rows are bitmasks over points 1..size."""

    size: int
    rows: tuple
    kind: ClassVar[str] = "explicit"
    hypothesis_type: ClassVar[type] = Explicit

    @classmethod
    def from_strings(cls, rows: Sequence[str]) -> "ExplicitClass":
        if not rows:
            raise ValueError("explicit class needs at least one row")
        size = len(rows[0])
        if any(len(r) != size or set(r) - {"0", "1"} for r in rows):
            raise ValueError("rows must be equal-length 0/1 strings")
        return cls(size, tuple(int(r[::-1], 2) for r in rows))

    def row_string(self, row: int) -> str:
        return "".join(str((row >> i) & 1) for i in range(self.size))

    def is_intersection_closed(self) -> bool:
        present = set(self.rows)
        return all(r & s in present for r in self.rows for s in self.rows)

    def vc_dimension(self) -> int:
        best = 0
        pts = list(range(self.size))
        for k in range(1, self.size + 1):
            found = False
            for subset in itertools.combinations(pts, k):
                mask = sum(1 << p for p in subset)
                if len({r & mask for r in self.rows}) == 2 ** k:
                    found = True
                    break
            if not found:
                break
            best = k
        return best

    def points(self):
        return range(1, self.size + 1)

    def hypotheses(self):
        return (Explicit(i, r) for i, r in enumerate(self.rows))

    @property
    def n_hypotheses(self):
        return len(self.rows)

    def hypothesis_for_row(self, row: int) -> Explicit:
        return Explicit(self.rows.index(row), row)

    def contains(self, x):
        return isinstance(x, int) and 1 <= x <= self.size

    @property
    def n_points(self):
        return self.size

    def point_code(self, x):
        return x - 1

    def point_from_code(self, c):
        return c + 1

    def owns(self, h):
        return isinstance(h, Explicit) and 0 <= h.index < len(self.rows) and self.rows[h.index] == h.row

    def descriptor(self):
        return "class=explicit rows=" + ",".join(self.row_string(r) for r in self.rows)

    def hypothesis_code(self, h):
        return h.index

    def hypothesis_from_code(self, c):
        return Explicit(c, self.rows[c])


# ------------------------------------------------------------------- dataset


@dataclass(frozen=True)
class Dataset:
    cls: ConceptClass
    items: tuple = ()

    def __post_init__(self):
        items = []
        for z in self.items:
            x, y = z
            x = self.cls.normalize_point(x)
            if not self.cls.contains(x):
                raise ValueError(f"point {x!r} outside the domain of {self.cls.descriptor()}")
            if y not in (0, 1):
                raise ValueError(f"label {y!r} is not binary")
            items.append(Example(x, int(y)))
        object.__setattr__(self, "items", tuple(items))

    def __len__(self):
        return len(self.items)

    def __iter__(self) -> Iterator[Example]:
        return iter(self.items)

    def __getitem__(self, i):
        return self.items[i]

    def without(self, indices: Iterable[int]) -> "Dataset":
        drop = set(indices)
        return Dataset(self.cls, tuple(z for i, z in enumerate(self.items) if i not in drop))

    def subset(self, indices: Iterable[int]) -> "Dataset":
        return Dataset(self.cls, tuple(self.items[i] for i in indices))

    def __add__(self, other: "Dataset") -> "Dataset":
        if other.cls != self.cls:
            raise ClassMismatchError("cannot concatenate datasets of different classes")
        return Dataset(self.cls, self.items + other.items)

    def canonical_order(self) -> list[int]:
        """Indices sorted by example code, ties kept in dataset order."""
        code = self.cls.example_code
        return sorted(range(len(self.items)), key=lambda i: code(self.items[i]))


# --------------------------------------------------------------- loss and ERM


def loss(h, S: Dataset) -> int:
    if not S.cls.owns(h):
        raise ClassMismatchError(f"{h} is not a member of {S.cls.descriptor()}")
    return sum(h(x) != y for x, y in S)


def erm_set(cls: ConceptClass, S: Dataset, cap: int = 10 ** 6) -> set:
    """Exact argmin of the loss by exhaustive enumeration."""
    if S.cls != cls:
        raise ClassMismatchError("dataset class differs from the requested class")
    if cls.n_hypotheses > cap:
        raise EnumerationCapError(f"{cls.n_hypotheses} hypotheses exceed cap {cap}")
    best, out = None, set()
    for h in cls.hypotheses():
        value = loss(h, S)
        if best is None or value < best:
            best, out = value, {h}
        elif value == best:
            out.add(h)
    return out


def is_realizable(cls: ConceptClass, S: Dataset, cap: int = 10 ** 6) -> bool:
    if S.cls != cls:
        raise ClassMismatchError("dataset class differs from the requested class")
    if cls.n_hypotheses > cap:
        raise EnumerationCapError(f"{cls.n_hypotheses} hypotheses exceed cap {cap}")
    return any(all(h(x) == y for x, y in S) for h in cls.hypotheses())


def threshold_losses(size: int, S: Iterable[Example]) -> list[int]:
    """L(h_{>a}; S) for every a in 0..size."""
    ones = [0] * (size + 2)
    zeros = [0] * (size + 2)
    for x, y in S:
        (ones if y else zeros)[x] += 1
    out = [sum(zeros)]
    for a in range(1, size + 1):
        out.append(out[-1] + ones[a] - zeros[a])
    return out


def minimal_erm_threshold(size: int, S: Iterable[Example]) -> Threshold:
    losses = threshold_losses(size, S)
    return Threshold(losses.index(min(losses)))


def closure_rows(cls: ExplicitClass, positives: int) -> int | None:
    """AND of all rows covering the positive set, or None when no row covers it."""
    out = None
    for r in cls.rows:
        if r & positives == positives:
            out = r if out is None else out & r
    return out


def _require(h, S: Dataset):
    if any(h(x) != y for x, y in S):
        raise UnrealizableError(f"dataset is not realizable by {S.cls.descriptor()}")
    return h


def canonical_erm(cls: ConceptClass, S: Dataset):
    if S.cls != cls:
        raise ClassMismatchError("dataset class differs from the requested class")
    if isinstance(cls, Thresholds):
        return minimal_erm_threshold(cls.size, S)
    if isinstance(cls, ProductThresholds):
        a = [cls.m] * cls.d
        for x, y in S:
            if y:
                a = [min(aj, xj - 1) for aj, xj in zip(a, x)]
        return _require(ProductThreshold(tuple(a)), S)
    if isinstance(cls, Parities):
        space = gf2.AffineSpace.solve(cls.d, ((gf2.to_mask(x), y) for x, y in S))
        if space is None:
            raise UnrealizableError("parity constraints are inconsistent")
        return Parity(space.lex_min())
    if isinstance(cls, AugmentedPointFunctions):
        ones = {x for x, y in S if y}
        return _require(PointOrZero(min(ones) if ones else None), S)
    if isinstance(cls, PointFunctions):
        ones = {x for x, y in S if y}
        if ones:
            return _require(Point(min(ones)), S)
        zeros = {x for x, _ in S}
        free = [b for b in cls.points() if b not in zeros]
        if not free:
            raise UnrealizableError("every point carries a 0-label")
        return Point(free[0])
    if isinstance(cls, ExplicitClass):
        pos = 0
        for x, y in S:
            if y:
                pos |= 1 << (x - 1)
        row = closure_rows(cls, pos)
        if row is None:
            raise UnrealizableError("no row covers the 1-labeled points")
        return _require(cls.hypothesis_for_row(row), S)
    raise ClassMismatchError(f"no canonical rule for {cls!r}")


# ------------------------------------------------------------- file format


def parse_class(header: str) -> ConceptClass:
    fields = dict(part.split("=", 1) for part in header.split())
    kind = fields.get("class")
    try:
        if kind == "thresholds":
            return Thresholds(int(fields["domain"]))
        if kind == "prodthresh":
            return ProductThresholds(int(fields["d"]), int(fields["m"]))
        if kind == "parities":
            return Parities(int(fields["d"]))
        if kind == "points":
            return PointFunctions(int(fields["domain"]))
        if kind == "augpoints":
            return AugmentedPointFunctions(int(fields["domain"]))
        if kind == "explicit":
            cls = ExplicitClass.from_strings(fields["rows"].split(","))
            if not cls.is_intersection_closed():
                raise ValueError("explicit class is not intersection-closed")
            return cls
    except KeyError as e:
        raise ValueError(f"class header is missing {e.args[0]}") from None
    raise ValueError(f"unknown class {kind!r}")


def parse_dataset(text: str) -> Dataset:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty dataset file")
    cls = parse_class(lines[0])
    items = []
    for ln in lines[1:]:
        if ";" not in ln:
            raise ValueError(f"bad item line {ln!r}")
        xs, ys = ln.split(";")
        coords = [int(v) for v in xs.split(",")]
        x = coords[0] if isinstance(cls, (Thresholds, PointFunctions, ExplicitClass)) else tuple(coords)
        if isinstance(x, int) and len(coords) != 1:
            raise ValueError(f"expected a single coordinate in {ln!r}")
        items.append((x, int(ys)))
    return Dataset(cls, tuple(items))


def format_point(x) -> str:
    return ",".join(map(str, x)) if isinstance(x, tuple) else str(x)


def format_dataset(S: Dataset) -> str:
    lines = [S.cls.descriptor()]
    lines += [f"{format_point(x)} ; {y}" for x, y in S]
    return "\n".join(lines) + "\n"
