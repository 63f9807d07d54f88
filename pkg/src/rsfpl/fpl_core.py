"""Alternating sign matrices, fully packed loops and the maps between them.

Grid vertices are ``(r, c)`` with ``1 <= r, c <= n``; row 1 is the top row.
An interior edge joins two grid vertices at distance one and is written as
the sorted pair of its endpoints.  All ``2n(n-1)`` interior edges, sorted
lexicographically, form the edge universe S; an FPL stores its path edges as
a bitmask over that ordering.

Boundary stubs (external legs) are fixed: the vertical stub of a top or
bottom boundary vertex is occupied iff ``r + c`` is even, the horizontal stub
of a left or right boundary vertex iff ``r + c`` is odd.  Going around the
square the 4n stub positions then alternate occupied/empty.  Label 1 sits on
the top stub of ``(1, 1)``; labels increase counterclockwise (down the left
side, along the bottom, up the right side, back along the top).
"""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .patterns import LinkPattern, enumerate_link_patterns, rotate_pattern

Vertex = Tuple[int, int]
Edge = Tuple[Vertex, Vertex]
Stub = Tuple[int, int, str]  # (r, c, side) with side in "NSWE"

DEFAULT_MAX_N = 6


class ResourceLimitError(RuntimeError):
    """Raised when a request exceeds a configured size cap."""


class InvalidFplError(ValueError):
    pass


# ---------------------------------------------------------------- ASMs


@dataclass(frozen=True)
class Asm:
    n: int
    rows: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        problem = asm_violation(self.n, self.rows)
        if problem:
            raise ValueError(problem)

    @property
    def key(self) -> str:
        """Compact canonical string, used as a dictionary key in reports."""
        sym = {1: "+", 0: "0", -1: "-"}
        return "/".join("".join(sym[x] for x in row) for row in self.rows)

    def to_json(self) -> Dict:
        return {"n": self.n, "rows": [list(r) for r in self.rows]}

    @classmethod
    def from_json(cls, data) -> "Asm":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(int(data["n"]), tuple(tuple(int(x) for x in r) for r in data["rows"]))

    def count_minus_ones(self) -> int:
        return sum(row.count(-1) for row in self.rows)


def asm_violation(n: int, rows: Sequence[Sequence[int]]) -> Optional[str]:
    if len(rows) != n or any(len(r) != n for r in rows):
        return f"expected a {n}x{n} matrix"
    for line in list(rows) + [list(col) for col in zip(*rows)]:
        s = 0
        for x in line:
            if x not in (-1, 0, 1):
                return f"entry {x} not in {{-1, 0, 1}}"
            s += x
            if s not in (0, 1):
                return f"prefix sum {s} outside {{0, 1}} in {list(line)}"
        if s != 1:
            return f"line {list(line)} sums to {s}"
    return None


def asm_count_formula(n: int) -> int:
    """prod_{i<n} (3i+1)! / (n+i)!, in exact integer arithmetic."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    num = 1
    den = 1
    for i in range(n):
        num *= factorial(3 * i + 1)
        den *= factorial(n + i)
    assert num % den == 0
    return num // den


@lru_cache(maxsize=None)
def _rows_for_state(n: int, state: int) -> Tuple[Tuple[Tuple[int, ...], int], ...]:
    """Rows compatible with column partial sums ``state`` (bit c set = column c has sum 1).

    Returns (row, new_state) pairs in left-to-right backtracking order with
    entries tried as 0, 1, -1.
    """
    out = []
    row = [0] * n

    def fill(c: int, s: int, st: int):
        if c == n:
            if s == 1:
                out.append((tuple(row), st))
            return
        bit = 1 << c
        row[c] = 0
        fill(c + 1, s, st)
        if s == 0 and not st & bit:
            row[c] = 1
            fill(c + 1, 1, st | bit)
        elif s == 1 and st & bit:
            row[c] = -1
            fill(c + 1, 0, st & ~bit)
        row[c] = 0

    fill(0, 0, state)
    return tuple(out)


def enumerate_asms(n: int, max_n: int = DEFAULT_MAX_N) -> Iterator[Asm]:
    """Yield every ASM of order n once, in row-major backtracking order."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > max_n:
        raise ResourceLimitError(f"n={n} exceeds the enumeration cap max_n={max_n}")
    full = (1 << n) - 1
    rows: List[Tuple[int, ...]] = []

    def rec(r: int, state: int):
        if r == n:
            if state == full:
                yield _trusted_asm(n, tuple(rows))
            return
        # remaining rows can raise the number of columns with sum 1 by at most one each
        if n - r < n - bin(state).count("1"):
            return
        for row, st in _rows_for_state(n, state):
            rows.append(row)
            yield from rec(r + 1, st)
            rows.pop()

    yield from rec(0, 0)


def _trusted_asm(n: int, rows) -> Asm:
    # generated rows are valid by construction; skip re-validation
    a = object.__new__(Asm)
    object.__setattr__(a, "n", n)
    object.__setattr__(a, "rows", rows)
    return a


@lru_cache(maxsize=None)
def all_asms(n: int, max_n: int = DEFAULT_MAX_N) -> Tuple[Asm, ...]:
    return tuple(enumerate_asms(n, max_n=max_n))


# ---------------------------------------------------------------- lattice geometry


class Lattice:
    """Static geometry of the n x n grid: edge universe, incidences, stubs, labels."""

    def __init__(self, n: int):
        self.n = n
        edges: List[Edge] = []
        for r in range(1, n + 1):
            for c in range(1, n + 1):
                if c < n:
                    edges.append(((r, c), (r, c + 1)))
                if r < n:
                    edges.append(((r, c), (r + 1, c)))
        edges.sort()
        self.edges: Tuple[Edge, ...] = tuple(edges)
        self.index: Dict[Edge, int] = {e: k for k, e in enumerate(edges)}
        self.vertices: Tuple[Vertex, ...] = tuple(
            (r, c) for r in range(1, n + 1) for c in range(1, n + 1)
        )
        self.incident: Dict[Vertex, Tuple[int, ...]] = {v: () for v in self.vertices}
        for k, (u, w) in enumerate(edges):
            self.incident[u] += (k,)
            self.incident[w] += (k,)
        self.stub_positions: Tuple[Stub, ...] = self._boundary_cycle()
        self.labels: Tuple[Stub, ...] = tuple(s for s in self.stub_positions if self.stub_occupied(s))
        self.labels_at: Dict[Vertex, Tuple[int, ...]] = {}
        for l, (r, c, _) in enumerate(self.labels, 1):
            self.labels_at[(r, c)] = self.labels_at.get((r, c), ()) + (l,)
        assert len(self.labels) == 2 * n

    def _boundary_cycle(self) -> Tuple[Stub, ...]:
        n = self.n
        seq: List[Stub] = [(1, 1, "N")]
        seq += [(r, 1, "W") for r in range(1, n + 1)]
        seq += [(n, c, "S") for c in range(1, n + 1)]
        seq += [(r, n, "E") for r in range(n, 0, -1)]
        seq += [(1, c, "N") for c in range(n, 1, -1)]
        return tuple(seq)

    @staticmethod
    def stub_occupied(stub: Stub) -> bool:
        r, c, side = stub
        if side in "NS":
            return (r + c) % 2 == 0
        return (r + c) % 2 == 1

    def mask_of(self, edges) -> int:
        m = 0
        for e in edges:
            m |= 1 << self.index[normalize_edge(e)]
        return m

    def edges_of(self, mask: int) -> List[Edge]:
        return [e for k, e in enumerate(self.edges) if mask >> k & 1]

    @property
    def full_mask(self) -> int:
        return (1 << len(self.edges)) - 1


@lru_cache(maxsize=None)
def lattice(n: int) -> Lattice:
    return Lattice(n)


def normalize_edge(e) -> Edge:
    u, w = (tuple(e[0]), tuple(e[1]))
    return (u, w) if u <= w else (w, u)


# ---------------------------------------------------------------- FPLs


@dataclass(frozen=True)
class Fpl:
    """An FPL of size n given by its interior path edges (bitmask over S)."""

    n: int
    mask: int

    @property
    def lattice(self) -> Lattice:
        return lattice(self.n)

    def edges(self) -> List[Edge]:
        return self.lattice.edges_of(self.mask)

    def has_edge(self, e) -> bool:
        return bool(self.mask >> self.lattice.index[normalize_edge(e)] & 1)

    @classmethod
    def from_edges(cls, n: int, edges) -> "Fpl":
        return cls(n, lattice(n).mask_of(edges))

    def to_json(self, with_edges: bool = False) -> Dict:
        data = {"n": self.n, "asm": [list(r) for r in fpl_to_asm(self).rows]}
        if with_edges:
            data["edges"] = [[list(u), list(w)] for u, w in self.edges()]
        return data

    @classmethod
    def from_json(cls, data) -> "Fpl":
        if isinstance(data, str):
            data = json.loads(data)
        n = int(data["n"])
        if "asm" in data:
            f = asm_to_fpl(Asm(n, tuple(tuple(int(x) for x in r) for r in data["asm"])))
            if "edges" in data and f != cls.from_edges(n, data["edges"]):
                raise InvalidFplError("edge list disagrees with the ASM")
            return f
        f = cls.from_edges(n, data["edges"])
        problems = fpl_violations(f)
        if problems:
            raise InvalidFplError("; ".join(problems))
        return f

    @property
    def key(self) -> str:
        return fpl_to_asm(self).key


def degree(f: Fpl, v: Vertex) -> int:
    """Number of path edges at ``v``, counting an occupied stub."""
    lat = f.lattice
    d = sum(1 for k in lat.incident[v] if f.mask >> k & 1)
    return d + len(lat.labels_at.get(v, ()))


def fpl_violations(f: Fpl) -> List[str]:
    lat = f.lattice
    problems = []
    if f.mask & ~lat.full_mask:
        problems.append("mask has bits outside S")
    expected = f.n * (f.n - 1)
    if bin(f.mask).count("1") != expected:
        problems.append(f"|E| = {bin(f.mask).count('1')}, expected {expected}")
    for v in lat.vertices:
        d = degree(f, v)
        if d != 2:
            problems.append(f"vertex {v} has degree {d}")
    return problems


def is_valid_fpl(f: Fpl) -> bool:
    return not fpl_violations(f)


def asm_to_fpl(a: Asm) -> Fpl:
    """Six-vertex correspondence.

    The vertical edge below ``(r, c)`` carries the column partial sum
    ``v = a[1][c] + ... + a[r][c]`` and is a path edge iff ``r + c + 1 + v`` is
    even; the horizontal edge right of ``(r, c)`` carries the row partial
    sum ``h`` and is a path edge iff ``r + c + h`` is even.  The same rule
    applied to the stubs reproduces the fixed boundary.
    """
    n = a.n
    lat = lattice(n)
    mask = 0
    col = [0] * n
    for r in range(1, n + 1):
        h = 0
        for c in range(1, n + 1):
            x = a.rows[r - 1][c - 1]
            h += x
            col[c - 1] += x
            if c < n and (r + c + h) % 2 == 0:
                mask |= 1 << lat.index[((r, c), (r, c + 1))]
            if r < n and (r + c + 1 + col[c - 1]) % 2 == 0:
                mask |= 1 << lat.index[((r, c), (r + 1, c))]
    return Fpl(n, mask)


@lru_cache(maxsize=65536)
def fpl_to_asm(f: Fpl) -> Asm:
    n = f.n
    # column partial sums from vertical edges, with v = 0 above and 1 below
    v = [[0] * n for _ in range(n + 1)]
    for c in range(1, n + 1):
        v[n][c - 1] = 1
        for r in range(1, n):
            occ = f.has_edge(((r, c), (r + 1, c)))
            v[r][c - 1] = (r + c + 1) % 2 if occ else (r + c) % 2
    rows = tuple(tuple(v[r][c] - v[r - 1][c] for c in range(n)) for r in range(1, n + 1))
    problem = asm_violation(n, rows)
    if problem:
        raise InvalidFplError(f"vertical edges do not encode an ASM: {problem}")
    a = Asm(n, rows)
    if asm_to_fpl(a) != f:
        raise InvalidFplError("horizontal edges inconsistent with vertical edges")
    return a


@lru_cache(maxsize=None)
def all_fpls(n: int, max_n: int = DEFAULT_MAX_N) -> Tuple[Fpl, ...]:
    return tuple(asm_to_fpl(a) for a in all_asms(n, max_n=max_n))


# ---------------------------------------------------------------- path tracing


def _neighbours(f: Fpl, v: Vertex) -> List[Vertex]:
    lat = f.lattice
    out = []
    for k in lat.incident[v]:
        if f.mask >> k & 1:
            a, b = lat.edges[k]
            out.append(b if a == v else a)
    return out


def trace_path(f: Fpl, label: int) -> List[Vertex]:
    """Vertices visited by the open path leaving stub ``label``, in order."""
    lat = f.lattice
    r, c, _ = lat.labels[label - 1]
    prev = None
    cur = (r, c)
    walk = [cur]
    if len(lat.labels_at[cur]) == 2:  # n = 1: both stubs on one vertex
        return walk
    for _ in range(len(lat.vertices)):
        nxt = [w for w in _neighbours(f, cur) if w != prev]
        if len(nxt) != 1:
            raise InvalidFplError(f"path from label {label} branches or stops at {cur}")
        prev, cur = cur, nxt[0]
        walk.append(cur)
        if cur in lat.labels_at:
            return walk
    raise InvalidFplError(f"path from label {label} does not reach a stub")


def _other_end_label(f: Fpl, label: int) -> int:
    lat = f.lattice
    end = trace_path(f, label)[-1]
    others = [l for l in lat.labels_at[end] if l != label]
    if len(others) != 1:
        raise InvalidFplError(f"path from label {label} returns to its own stub")
    return others[0]


def link_pattern_of(f: Fpl) -> LinkPattern:
    match = [0] * (2 * f.n)
    for label in range(1, 2 * f.n + 1):
        if not match[label - 1]:
            other = _other_end_label(f, label)
            match[label - 1] = other
            match[other - 1] = label
    return LinkPattern(f.n, tuple(match))


def count_interior_loops(f: Fpl) -> int:
    """Closed path components that touch no stub."""
    lat = f.lattice
    seen = set()
    for label in range(1, 2 * f.n + 1):
        seen.update(trace_path(f, label))
    loops = 0
    for v in lat.vertices:
        if v in seen:
            continue
        loops += 1
        stack = [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            for w in _neighbours(f, x):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
    return loops


def count_by_pattern(n: int, max_n: int = DEFAULT_MAX_N) -> Dict[LinkPattern, int]:
    """A(pi) for every pattern of the canonical basis (zeros included)."""
    tally = Counter(link_pattern_of(f) for f in all_fpls(n, max_n=max_n))
    return {pi: tally.get(pi, 0) for pi in enumerate_link_patterns(n)}


# ---------------------------------------------------------------- gyration


@lru_cache(maxsize=None)
def _faces(n: int) -> Tuple[Tuple[Tuple[int, int, int, int], ...], Tuple[Tuple[int, int, int, int], ...]]:
    """Interior unit cells as (top, bottom, left, right) edge indices, split by colour.

    A cell is named by its top-left vertex (r, c); colour is (r + c) mod 2.
    Boundary cells never change under the move (exactly one of their two
    stubs is occupied and stubs are fixed), so only interior cells are listed.
    """
    lat = lattice(n)
    ix = lat.index
    even, odd = [], []
    for r in range(1, n):
        for c in range(1, n):
            cell = (
                ix[((r, c), (r, c + 1))],
                ix[((r + 1, c), (r + 1, c + 1))],
                ix[((r, c), (r + 1, c))],
                ix[((r, c + 1), (r + 1, c + 1))],
            )
            (even if (r + c) % 2 == 0 else odd).append(cell)
    return tuple(even), tuple(odd)


def _sweep(mask: int, cells) -> int:
    for top, bottom, left, right in cells:
        horiz = (1 << top) | (1 << bottom)
        vert = (1 << left) | (1 << right)
        occ = mask & (horiz | vert)
        if occ == horiz or occ == vert:
            mask ^= horiz | vert
    return mask


def gyrate(f: Fpl, rng: Optional[random.Random] = None) -> Fpl:
    """Gyration: flip parallel pairs in all even cells, then all odd cells.

    Cells of one colour share no edge, so the order inside a colour class is
    irrelevant; ``rng`` shuffles it, which tests use to check exactly that.
    """
    even, odd = _faces(f.n)
    if rng is not None:
        even, odd = list(even), list(odd)
        rng.shuffle(even)
        rng.shuffle(odd)
    return Fpl(f.n, _sweep(_sweep(f.mask, even), odd))


def gyrate_inverse(f: Fpl) -> Fpl:
    even, odd = _faces(f.n)
    return Fpl(f.n, _sweep(_sweep(f.mask, odd), even))


# link_pattern_of(gyrate(f)) == rotate_pattern(link_pattern_of(f), GYRATION_SHIFT),
# checked exhaustively in the tests
GYRATION_SHIFT = 1


def gyration_shift_report(n: int, max_n: int = DEFAULT_MAX_N) -> List[Dict]:
    """Per-FPL check of the rotation property of :func:`gyrate`."""
    rows = []
    for f in all_fpls(n, max_n=max_n):
        before = link_pattern_of(f)
        after = link_pattern_of(gyrate(f))
        rows.append({"f": f.key, "pattern": list(before.match), "gyrated": list(after.match),
                     "pass": after == rotate_pattern(before, GYRATION_SHIFT)})
    return rows


def mirror(f: Fpl) -> Fpl:
    """Left-right reflection ``(r, c) -> (r, n + 1 - c)``.

    Only defined for odd n: for even n the reflection moves the stubs onto
    the complementary boundary positions.
    """
    n = f.n
    if n % 2 == 0:
        raise ValueError("left-right reflection preserves the boundary only for odd n")
    flip = lambda v: (v[0], n + 1 - v[1])
    return Fpl.from_edges(n, [(flip(u), flip(w)) for u, w in f.edges()])


def mirror_label(n: int, label: int) -> int:
    """Label carried, after :func:`mirror`, by the stub that had ``label``."""
    lat = lattice(n)
    r, c, side = lat.labels[label - 1]
    image = (r, n + 1 - c, {"W": "E", "E": "W"}.get(side, side))
    return lat.labels.index(image) + 1
