"""Parallel plane classes in F_q^3, resolvable designs, block graphs.

Points of F_q^d are encoded coordinate-major in base q (first coordinate
most significant), using the canonical field order, so every derived
vertex labelling is stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .field import FieldSpec, field
from .graphs import Graph

PARALLEL_CLASS_MAX_Q = 16


class OddOrder(ValueError):
    pass


class NotALinearDesign(ValueError):
    """Some point pair is covered by a number of blocks different from 1."""


class DesignFormatError(ValueError):
    pass


def encode_point(coords, q: int) -> int:
    v = 0
    for c in coords:
        v = v * q + c
    return v


def decode_point(v: int, q: int, d: int) -> tuple[int, ...]:
    coords = [0] * d
    for i in range(d - 1, -1, -1):
        v, coords[i] = divmod(v, q)
    return tuple(coords)


class ParallelClassSystem:
    """q+1 parallel classes of planes in F_q^3 with pairwise intersection q
    and triple intersection 1.

    Class 0 is normal to (0, 0, 1); class 1 + x is normal to
    (1, x, x(x+1)) for x in field order.  Plane b of class a collects the
    points u with <u, normal_a> = b.
    """

    __slots__ = ("q", "spec", "normals", "classes", "_plane_of")

    def __init__(self, q: int, spec: FieldSpec, normals, classes):
        self.q = q
        self.spec = spec
        self.normals = tuple(tuple(v) for v in normals)
        self.classes = tuple(tuple(tuple(pl) for pl in cls) for cls in classes)
        # plane index of each point, per class, for O(1) lookups
        lookup = []
        for cls in self.classes:
            where = [0] * q**3
            for b, plane in enumerate(cls):
                for pt in plane:
                    where[pt] = b
            lookup.append(tuple(where))
        self._plane_of = tuple(lookup)

    def plane(self, a: int, b: int) -> tuple[int, ...]:
        return self.classes[a][b]

    def plane_index_of(self, a: int, point: int) -> int:
        """Which plane of class a contains the point."""
        return self._plane_of[a][point]

    def __repr__(self):
        return f"ParallelClassSystem(q={self.q})"


def parallel_classes(q: int) -> ParallelClassSystem:
    """The explicit system: normals (0,0,1) and (1,x,x(x+1)) for x in GF(q)."""
    if q > PARALLEL_CLASS_MAX_Q:
        raise ValueError(f"q={q} exceeds the ceiling {PARALLEL_CLASS_MAX_Q}")
    spec = field(q)
    normals = [(0, 0, 1)]
    for x in range(q):
        xx1 = spec.mul(x, spec.add(x, 1))
        normals.append((1, x, xx1))
    classes = []
    points = [decode_point(v, q, 3) for v in range(q**3)]
    for normal in normals:
        planes = [[] for _ in range(q)]
        for v, u in enumerate(points):
            planes[spec.dot(u, normal)].append(v)
        classes.append([tuple(pl) for pl in planes])
    return ParallelClassSystem(q, spec, normals, classes)


@dataclass(frozen=True)
class GeometryFailure:
    kind: str
    where: tuple
    detail: str


@dataclass(frozen=True)
class GeometryReport:
    ok: bool
    failures: tuple[GeometryFailure, ...]

    def __bool__(self):
        return self.ok


def verify_parallel_classes(s: ParallelClassSystem) -> GeometryReport:
    """Exhaustive check of the partition and both intersection conditions."""
    q = s.q
    space = q**3
    failures = []
    for a, cls in enumerate(s.classes):
        if len(cls) != q:
            failures.append(
                GeometryFailure("class-size", (a,), f"{len(cls)} planes, expected {q}")
            )
            continue
        covered = sorted(pt for plane in cls for pt in plane)
        if covered != list(range(space)) or any(len(pl) != q * q for pl in cls):
            failures.append(
                GeometryFailure("partition", (a,), "class does not partition F_q^3")
            )
    if failures:
        return GeometryReport(False, tuple(failures))
    sets = [[frozenset(pl) for pl in cls] for cls in s.classes]
    for a1, a2 in combinations(range(len(sets)), 2):
        for b1, p1 in enumerate(sets[a1]):
            for b2, p2 in enumerate(sets[a2]):
                got = len(p1 & p2)
                if got != q:
                    failures.append(
                        GeometryFailure(
                            "pair-intersection",
                            (a1, b1, a2, b2),
                            f"|P∩Q| = {got}, expected {q}",
                        )
                    )
                    return GeometryReport(False, tuple(failures))
    for a1, a2, a3 in combinations(range(len(sets)), 3):
        for b1, p1 in enumerate(sets[a1]):
            for b2, p2 in enumerate(sets[a2]):
                p12 = p1 & p2
                for b3, p3 in enumerate(sets[a3]):
                    got = len(p12 & p3)
                    if got != 1:
                        failures.append(
                            GeometryFailure(
                                "triple-intersection",
                                (a1, b1, a2, b2, a3, b3),
                                f"|P∩Q∩R| = {got}, expected 1",
                            )
                        )
                        return GeometryReport(False, tuple(failures))
    return GeometryReport(True, ())


class Design:
    """Point set [v] with t-element blocks and an optional resolution."""

    __slots__ = ("v", "t", "blocks", "resolution")

    def __init__(self, v: int, t: int, blocks, resolution=None):
        self.v = v
        self.t = t
        self.blocks = tuple(tuple(sorted(b)) for b in blocks)
        for b in self.blocks:
            if len(b) != t or len(set(b)) != t:
                raise ValueError(f"block {b} is not a {t}-subset")
            if b[0] < 0 or b[-1] >= v:
                raise ValueError(f"block {b} has points outside [0, {v})")
        self.resolution = (
            tuple(tuple(cls) for cls in resolution) if resolution is not None else None
        )
        if self.resolution is not None:
            seen = sorted(i for cls in self.resolution for i in cls)
            if seen != list(range(len(self.blocks))):
                raise ValueError("resolution does not partition the block set")
            for cls in self.resolution:
                pts = sorted(p for i in cls for p in self.blocks[i])
                if pts != list(range(v)):
                    raise ValueError("a resolution class does not partition the points")

    @property
    def b(self) -> int:
        return len(self.blocks)

    def pair_coverage_violation(self):
        """First point pair not covered exactly once, or None."""
        count = {}
        for blk in self.blocks:
            for x, y in combinations(blk, 2):
                count[(x, y)] = count.get((x, y), 0) + 1
        for x in range(self.v):
            for y in range(x + 1, self.v):
                c = count.get((x, y), 0)
                if c != 1:
                    return (x, y, c)
        return None

    def __repr__(self):
        res = len(self.resolution) if self.resolution else 0
        return f"Design(v={self.v}, t={self.t}, b={self.b}, classes={res})"


def design_affine_lines(q: int, d: int) -> Design:
    """Resolvable 2-(q^d, q, 1): blocks are the lines of AG(d, q), one
    resolution class per direction."""
    if d not in (2, 3):
        raise ValueError(f"d={d} must be 2 or 3")
    spec = field(q)
    space = q**d
    points = [decode_point(v, q, d) for v in range(space)]
    directions = []
    for v in range(1, space):
        vec = points[v]
        lead = next(c for c in vec if c != 0)
        if lead == 1:  # canonical representative of the 1-dim subspace
            directions.append(vec)
    blocks = []
    resolution = []
    for vec in directions:
        cls = []
        seen = [False] * space
        for start in range(space):
            if seen[start]:
                continue
            line = []
            pt = points[start]
            for tscale in range(q):
                coords = tuple(
                    spec.add(pt[i], spec.mul(tscale, vec[i])) for i in range(d)
                )
                enc = encode_point(coords, q)
                seen[enc] = True
                line.append(enc)
            cls.append(len(blocks))
            blocks.append(sorted(line))
        resolution.append(cls)
    return Design(space, q, blocks, resolution)


def design_one_factorization(m: int) -> Design:
    """Resolvable 2-(m, 2, 1): the edges of K_m resolved by the
    circle-method round robin (m-1 rounds of m/2 matches)."""
    if m < 4 or m % 2:
        raise OddOrder(f"m={m} must be even and at least 4")
    blocks = []
    resolution = []
    index = {}
    for r in range(m - 1):
        cls = []
        pairs = [(m - 1, r)]
        for i in range(1, m // 2):
            pairs.append(((r + i) % (m - 1), (r - i) % (m - 1)))
        for a, b in pairs:
            key = (min(a, b), max(a, b))
            if key not in index:
                index[key] = len(blocks)
                blocks.append(key)
            cls.append(index[key])
        resolution.append(cls)
    return Design(m, 2, blocks, resolution)


def block_graph(d: Design) -> Graph:
    """Blocks adjacent iff they share a point; requires a 2-(v,t,1) design."""
    violation = d.pair_coverage_violation()
    if violation is not None:
        x, y, c = violation
        raise NotALinearDesign(f"pair ({x}, {y}) covered {c} times, expected 1")
    rows = [0] * d.b
    by_point = [[] for _ in range(d.v)]
    for idx, blk in enumerate(d.blocks):
        for p in blk:
            by_point[p].append(idx)
    for group in by_point:
        mask = 0
        for idx in group:
            mask |= 1 << idx
        for idx in group:
            rows[idx] |= mask
    for idx in range(d.b):
        rows[idx] &= ~(1 << idx)
    return Graph(d.b, rows)


def write_design(d: Design, path) -> None:
    with open(path, "w") as fh:
        c = len(d.resolution) if d.resolution else 0
        fh.write(f"DESIGN {d.v} {d.t} {d.b} {c}\n")
        for blk in d.blocks:
            fh.write(" ".join(map(str, blk)) + "\n")
        for cls in d.resolution or ():
            fh.write(" ".join(map(str, cls)) + "\n")


def read_design(path) -> Design:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or not lines[0].startswith("DESIGN"):
        raise DesignFormatError("missing DESIGN header")
    parts = lines[0].split()
    if len(parts) != 5:
        raise DesignFormatError(f"bad header: {lines[0]!r}")
    try:
        v, t, b, c = map(int, parts[1:])
    except ValueError as exc:
        raise DesignFormatError(f"bad header: {lines[0]!r}") from exc
    if len(lines) - 1 != b + c:
        raise DesignFormatError(f"expected {b + c} data lines, got {len(lines) - 1}")
    try:
        blocks = [[int(x) for x in lines[1 + i].split()] for i in range(b)]
        classes = [[int(x) for x in lines[1 + b + i].split()] for i in range(c)]
    except ValueError as exc:
        raise DesignFormatError("non-integer entry") from exc
    return Design(v, t, blocks, classes if c else None)
