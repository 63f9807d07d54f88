"""Link patterns on 2n cyclically arranged points and the Temperley-Lieb action.

Points are labelled 1..2n.  A pattern is stored as its match sequence:
``match[p - 1]`` is the point joined to ``p``.  The canonical basis of a
given size is the lexicographically sorted list of match sequences.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Dict, List, Sequence, Tuple


@dataclass(frozen=True, order=True)
class LinkPattern:
    n: int
    match: Tuple[int, ...]

    def __post_init__(self):
        if len(self.match) != 2 * self.n:
            raise ValueError(f"match has length {len(self.match)}, expected {2 * self.n}")

    def partner(self, p: int) -> int:
        return self.match[p - 1]

    def pairs(self) -> List[Tuple[int, int]]:
        return [(p, q) for p, q in enumerate(self.match, 1) if p < q]

    def is_valid(self) -> bool:
        size = 2 * self.n
        for p, q in enumerate(self.match, 1):
            if not 1 <= q <= size or q == p or self.match[q - 1] != p:
                return False
        # a < b < c < d with a-c and b-d is a crossing
        for a, c in self.pairs():
            for b in range(a + 1, c):
                d = self.match[b - 1]
                if d > c or d < a:
                    return False
        return True

    def to_json(self) -> Dict:
        return {"n": self.n, "match": list(self.match)}

    @classmethod
    def from_json(cls, data) -> "LinkPattern":
        if isinstance(data, str):
            data = json.loads(data)
        pi = cls(int(data["n"]), tuple(int(x) for x in data["match"]))
        if not pi.is_valid():
            raise ValueError(f"not a noncrossing perfect matching: {pi.match}")
        return pi

    @classmethod
    def from_pairs(cls, n: int, pairs: Sequence[Tuple[int, int]]) -> "LinkPattern":
        match = [0] * (2 * n)
        for p, q in pairs:
            match[p - 1] = q
            match[q - 1] = p
        pi = cls(n, tuple(match))
        if not pi.is_valid():
            raise ValueError(f"pairs {pairs} do not form a link pattern")
        return pi

    def __str__(self) -> str:
        return "".join(f"({p}{q})" if self.n < 5 else f"({p},{q})" for p, q in self.pairs())


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def _matchings(points: Tuple[int, ...]):
    # noncrossing matchings of an interval: the first point pairs with a point
    # leaving an even number of points on each side
    if not points:
        yield ()
        return
    first = points[0]
    for k in range(1, len(points), 2):
        for inner in _matchings(points[1:k]):
            for outer in _matchings(points[k + 1:]):
                yield ((first, points[k]),) + inner + outer


@lru_cache(maxsize=None)
def enumerate_link_patterns(n: int) -> Tuple[LinkPattern, ...]:
    """All link patterns on 2n points, sorted lexicographically by match.

    ``n = 0`` gives the single empty pattern, so the length is always C_n.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    patterns = []
    for pairs in _matchings(tuple(range(1, 2 * n + 1))):
        match = [0] * (2 * n)
        for p, q in pairs:
            match[p - 1] = q
            match[q - 1] = p
        patterns.append(LinkPattern(n, tuple(match)))
    patterns.sort()
    return tuple(patterns)


@lru_cache(maxsize=None)
def basis_index(n: int) -> Dict[LinkPattern, int]:
    return {pi: k for k, pi in enumerate(enumerate_link_patterns(n))}


def _check_index(i: int, n: int) -> None:
    if not 1 <= i <= 2 * n:
        raise IndexError(f"operator index {i} outside [1, {2 * n}]")


def succ(p: int, n: int) -> int:
    """Cyclic successor of point ``p`` among 1..2n."""
    return p % (2 * n) + 1


def apply_e(i: int, pi: LinkPattern) -> LinkPattern:
    """Join i to i+1 (cyclically) and their former partners to each other.

    If i and i+1 are already joined the pattern is returned unchanged: the
    closed loop that appears carries weight 1.
    """
    n = pi.n
    _check_index(i, n)
    i1 = succ(i, n)
    j = pi.partner(i)
    if j == i1:
        return pi
    k = pi.partner(i1)
    match = list(pi.match)
    match[i - 1], match[i1 - 1] = i1, i
    match[j - 1], match[k - 1] = k, j
    return LinkPattern(n, tuple(match))


def rotate_pattern(pi: LinkPattern, steps: int) -> LinkPattern:
    """Relabel point p as p + steps (mod 2n)."""
    size = 2 * pi.n
    if size == 0:
        return pi
    shift = lambda p: (p - 1 + steps) % size + 1
    match = [0] * size
    for p, q in enumerate(pi.match, 1):
        match[shift(p) - 1] = shift(q)
    return LinkPattern(pi.n, tuple(match))


@dataclass(frozen=True)
class TlOperatorMatrix:
    """0/1 matrix of e_i: ``entries[k][j] == 1`` iff e_i(basis[j]) == basis[k]."""

    n: int
    i: int
    entries: Tuple[Tuple[int, ...], ...]

    def column_images(self) -> List[int]:
        dim = len(self.entries)
        return [next(k for k in range(dim) if self.entries[k][j]) for j in range(dim)]


def _require_canonical(basis: Sequence[LinkPattern]) -> int:
    if not basis:
        raise ValueError("empty basis")
    n = basis[0].n
    if tuple(basis) != enumerate_link_patterns(n):
        raise ValueError(f"basis is not the canonical basis for n={n}")
    return n


def operator_matrix(i: int, basis: Sequence[LinkPattern]) -> TlOperatorMatrix:
    n = _require_canonical(basis)
    _check_index(i, n)
    index = basis_index(n)
    dim = len(basis)
    rows = [[0] * dim for _ in range(dim)]
    for j, pi in enumerate(basis):
        rows[index[apply_e(i, pi)]][j] = 1
    return TlOperatorMatrix(n, i, tuple(tuple(r) for r in rows))


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Tuple[Tuple[int, ...], ...]:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


@dataclass(frozen=True)
class RelationCheck:
    family: str  # "idempotent" | "commute" | "braid"
    indices: Tuple[int, ...]
    passed: bool

    def to_json(self) -> Dict:
        return {"family": self.family, "indices": list(self.indices), "pass": self.passed}


def cyclic_distance(i: int, j: int, n: int) -> int:
    d = abs(i - j) % (2 * n)
    return min(d, 2 * n - d)


def check_tl_relations(n: int) -> List[RelationCheck]:
    """Check e_i^2 = e_i, commutation at cyclic distance >= 2 and e_i e_{i+-1} e_i = e_i.

    Returns one record per relation instance; a failing record means a bug.
    """
    basis = enumerate_link_patterns(n)
    mats = {i: operator_matrix(i, basis).entries for i in range(1, 2 * n + 1)}
    report = []
    for i in range(1, 2 * n + 1):
        report.append(RelationCheck("idempotent", (i,), matmul(mats[i], mats[i]) == mats[i]))
    for i in range(1, 2 * n + 1):
        for j in range(i + 1, 2 * n + 1):
            if cyclic_distance(i, j, n) >= 2:
                ok = matmul(mats[i], mats[j]) == matmul(mats[j], mats[i])
                report.append(RelationCheck("commute", (i, j), ok))
    for i in range(1, 2 * n + 1):
        for j in sorted({succ(i, n), (i - 2) % (2 * n) + 1}):
            ok = matmul(matmul(mats[i], mats[j]), mats[i]) == mats[i]
            report.append(RelationCheck("braid", (i, j), ok))
    return report
