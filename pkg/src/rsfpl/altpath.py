"""Alternating cycles, the toggle move, and the bijection-strategy experiments.

An alternating cycle of an FPL is a closed trail in the interior edge set S
whose edges alternate between path edges E and complementary edges S \\ E.
Toggling one (symmetric difference with E) gives another FPL.

Cycles are identified by their edge set; the canonical order is by length,
then lexicographically by the sorted edge list.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .fpl_core import (
    DEFAULT_MAX_N,
    GYRATION_SHIFT,
    Edge,
    Fpl,
    all_fpls,
    asm_count_formula,
    gyrate,
    is_valid_fpl,
    lattice,
    link_pattern_of,
    mirror,
    mirror_label,
    normalize_edge,
    trace_path,
)
from .patterns import LinkPattern, apply_e, basis_index, succ

DEFAULT_CYCLE_LIMIT = 100_000

STRATEGIES = ("first-path", "shortest", "first-path+dihedral", "shortest+dihedral")


class CycleLimitExceeded(RuntimeError):
    def __init__(self, limit: int, partial: List["AlternatingCycle"]):
        super().__init__(f"more than {limit} alternating cycles")
        self.limit = limit
        self.partial = partial


class InvalidCycleError(ValueError):
    pass


def popcount(x: int) -> int:
    return bin(x).count("1")


def bits(x: int) -> List[int]:
    out = []
    k = 0
    while x:
        if x & 1:
            out.append(k)
        x >>= 1
        k += 1
    return out


# ---------------------------------------------------------------- edge sets


def interior_edge_sets(f: Fpl) -> Tuple[List[Edge], List[Edge]]:
    """(E, S \\ E) as sorted edge lists."""
    lat = f.lattice
    return lat.edges_of(f.mask), lat.edges_of(lat.full_mask & ~f.mask)


def converse_mask(f: Fpl) -> int:
    return f.lattice.full_mask & ~f.mask


# ---------------------------------------------------------------- cycles


@dataclass(frozen=True)
class AlternatingCycle:
    host: Fpl
    mask: int
    trail: Tuple[int, ...] = field(compare=False)  # edge indices in traversal order

    @property
    def length(self) -> int:
        return len(self.trail)

    @property
    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return (popcount(self.mask), tuple(bits(self.mask)))

    def edges(self) -> List[Edge]:
        """Edges in traversal order."""
        lat = self.host.lattice
        return [lat.edges[k] for k in self.trail]

    def to_json(self) -> List:
        return [[list(u), list(w)] for u, w in self.edges()]


def cycle_violations(f: Fpl, cycle: AlternatingCycle) -> List[str]:
    lat = f.lattice
    trail = cycle.trail
    problems = []
    if cycle.host != f:
        problems.append("cycle belongs to a different FPL")
    if not trail:
        return problems + ["empty trail"]
    if len(set(trail)) != len(trail):
        problems.append("edge repeated")
    if any(not 0 <= k < len(lat.edges) for k in trail):
        return problems + ["edge outside S"]
    mask = 0
    for k in trail:
        mask |= 1 << k
    if mask != cycle.mask:
        problems.append("mask disagrees with trail")
    m = len(trail)
    if m % 2:
        problems.append("odd length")
    for t in range(m):
        a, b = trail[t], trail[(t + 1) % m]
        if (f.mask >> a & 1) == (f.mask >> b & 1):
            problems.append(f"edges {lat.edges[a]} and {lat.edges[b]} do not alternate")
        if not set(lat.edges[a]) & set(lat.edges[b]):
            problems.append(f"edges {lat.edges[a]} and {lat.edges[b]} share no vertex")
    return problems


class _Graph:
    """Integer-indexed view of the lattice for the cycle search."""

    def __init__(self, n: int):
        lat = lattice(n)
        vid = {v: t for t, v in enumerate(lat.vertices)}
        self.ends = [(vid[u], vid[w]) for u, w in lat.edges]
        self.incident = [tuple(lat.incident[v]) for v in lat.vertices]
        self.vid = vid


@lru_cache(maxsize=None)
def _graph(n: int) -> _Graph:
    return _Graph(n)


def _search_from(f: Fpl, anchor: int, forbidden: int, found: Dict[int, Tuple[int, ...]], limit: int):
    """Depth-first search for closed alternating trails starting with ``anchor``.

    The anchor is traversed from its first endpoint; every closed trail through
    it can be rotated and reversed into that form.  States are (vertex, used
    edges); a repeated state has the same continuations, so it is skipped.
    """
    g = _graph(f.n)
    E = f.mask
    start, first = g.ends[anchor]
    anchor_colour = E >> anchor & 1
    seen = set()
    trail = [anchor]

    def step(x: int, used: int, need: int):
        if (x, used) in seen:
            return
        seen.add((x, used))
        for k in g.incident[x]:
            bit = 1 << k
            if used & bit or forbidden & bit or (E >> k & 1) != need:
                continue
            a, b = g.ends[k]
            y = b if a == x else a
            nu = used | bit
            trail.append(k)
            if y == start and need != anchor_colour and nu not in found:
                found[nu] = tuple(trail)
                if len(found) > limit:
                    raise _Overflow
            step(y, nu, 1 - need)
            trail.pop()

    step(first, 1 << anchor, 1 - anchor_colour)


class _Overflow(Exception):
    pass


def find_alternating_cycles(f: Fpl, anchor: Optional[Edge] = None, limit: int = DEFAULT_CYCLE_LIMIT
                            ) -> List[AlternatingCycle]:
    """All alternating cycles of ``f`` (through ``anchor`` if given), canonically ordered.

    Raises :class:`CycleLimitExceeded` when more than ``limit`` distinct
    cycles exist; the exception carries the ones found so far.
    """
    lat = f.lattice
    found: Dict[int, Tuple[int, ...]] = {}
    try:
        if anchor is not None:
            _search_from(f, lat.index[normalize_edge(anchor)], 0, found, limit)
        else:
            # each cycle is found from its lowest-indexed edge only
            for a in range(len(lat.edges)):
                _search_from(f, a, (1 << a) - 1, found, limit)
    except _Overflow:
        partial = sorted((AlternatingCycle(f, m, t) for m, t in found.items()), key=lambda c: c.sort_key)
        raise CycleLimitExceeded(limit, partial[:limit]) from None
    cycles = [AlternatingCycle(f, m, t) for m, t in found.items()]
    cycles.sort(key=lambda c: c.sort_key)
    return cycles


@lru_cache(maxsize=100_000)
def _all_cycles_cached(f: Fpl, limit: int) -> Tuple[AlternatingCycle, ...]:
    return tuple(find_alternating_cycles(f, None, limit))


def toggle(f: Fpl, cycle: AlternatingCycle) -> Fpl:
    """Swap path and complementary edges along the cycle."""
    problems = cycle_violations(f, cycle)
    if problems:
        raise InvalidCycleError("; ".join(problems))
    return Fpl(f.n, f.mask ^ cycle.mask)


# ---------------------------------------------------------------- strategies


@dataclass(frozen=True)
class StrategyOutcome:
    f: Fpl
    i: int
    kind: str  # "resolved" | "ambiguous" | "not_found"
    g: Optional[Fpl] = None
    j: Optional[int] = None
    cycle: Optional[AlternatingCycle] = None
    candidates: Tuple[AlternatingCycle, ...] = ()
    note: str = ""

    @property
    def resolved(self) -> bool:
        return self.kind == "resolved"


def joins_neighbours(pi: LinkPattern, i: int) -> bool:
    return pi.partner(i) == succ(i, pi.n)


def output_label(f: Fpl, g: Fpl, i: int) -> int:
    """The index j recorded with (g, j): the former partner of i, or i itself if g == f."""
    return i if g == f else link_pattern_of(f).partner(i)


def _trivial(f: Fpl, i: int, pi: LinkPattern) -> Optional[StrategyOutcome]:
    # i and i+1 already joined: the empty alternating path does the job
    if joins_neighbours(pi, i):
        return StrategyOutcome(f, i, "resolved", g=f, j=i, note="already joined")
    return None


def _choose(f: Fpl, i: int, pi: LinkPattern, cycles: Sequence[AlternatingCycle], note: str
            ) -> StrategyOutcome:
    qualifying = [c for c in cycles if joins_neighbours(link_pattern_of(Fpl(f.n, f.mask ^ c.mask)), i)]
    if not qualifying:
        return StrategyOutcome(f, i, "not_found", note=note)
    best = popcount(qualifying[0].mask)
    tied = [c for c in qualifying if popcount(c.mask) == best]
    if len(tied) > 1:
        return StrategyOutcome(f, i, "ambiguous", candidates=tuple(tied), note=note)
    c = tied[0]
    g = toggle(f, c)
    return StrategyOutcome(f, i, "resolved", g=g, j=output_label(f, g, i), cycle=c, note=note)


def first_path_anchor(f: Fpl, i: int) -> Optional[Edge]:
    """First interior edge of the open path leaving stub ``i``."""
    walk = trace_path(f, i)
    if len(walk) < 2:
        return None
    return normalize_edge((walk[0], walk[1]))


def strategy_first_path(f: Fpl, i: int, limit: int = DEFAULT_CYCLE_LIMIT) -> StrategyOutcome:
    """First cycle (canonical order) through the start of the path at ``i`` that joins i to i+1.

    Ambiguous when another qualifying cycle has the same length as the first.
    """
    pi = link_pattern_of(f)
    done = _trivial(f, i, pi)
    if done:
        return done
    anchor = first_path_anchor(f, i)
    if anchor is None:
        return StrategyOutcome(f, i, "not_found", note="no interior edge")
    try:
        cycles = find_alternating_cycles(f, anchor, limit)
    except CycleLimitExceeded as exc:
        return StrategyOutcome(f, i, "not_found", note=str(exc))
    return _choose(f, i, pi, cycles, "")


def strategy_shortest(f: Fpl, i: int, limit: int = DEFAULT_CYCLE_LIMIT) -> StrategyOutcome:
    """Shortest alternating cycle whose toggle joins i to i+1; ambiguous on ties."""
    pi = link_pattern_of(f)
    done = _trivial(f, i, pi)
    if done:
        return done
    try:
        cycles = _all_cycles_cached(f, limit)
    except CycleLimitExceeded as exc:
        return StrategyOutcome(f, i, "not_found", note=str(exc))
    # distinct cycles give distinct FPLs, so any tie is between different outputs
    return _choose(f, i, pi, cycles, "")


BASE_STRATEGIES: Dict[str, Callable[..., StrategyOutcome]] = {
    "first-path": strategy_first_path,
    "shortest": strategy_shortest,
}


# ---------------------------------------------------------------- dihedral transport


def _rotate_pair(f: Fpl, i: int) -> Tuple[Fpl, int]:
    n = f.n
    return gyrate(f), (i - 1 + GYRATION_SHIFT) % (2 * n) + 1


def _reflect_pair(f: Fpl, i: int) -> Tuple[Fpl, int]:
    # mirror reverses the cyclic order, so the stubs i, i+1 land on i'+1, i'
    n = f.n
    return mirror(f), mirror_label(n, succ(i, n))


def _generators(n: int):
    gens = [("rotate", _rotate_pair, gyrate)]
    if n % 2 == 1:
        gens.append(("reflect", _reflect_pair, mirror))
    return gens


@dataclass
class SymmetrizedStrategy:
    """A base strategy made equivariant under gyration (and reflection for odd n).

    The base is consulted only on one representative per orbit of (f, i)
    pairs; every other pair receives the transported answer
    (gyrate(g), j recomputed by :func:`output_label`), or the mirrored analogue.
    Orbit-graph edges whose transported answers disagree are recorded in
    ``inconsistencies``; pairs where the base would itself have answered
    differently are recorded in ``disagreements``.
    """

    base: str
    limit: int = DEFAULT_CYCLE_LIMIT
    _cache: Dict[Tuple[Fpl, int], StrategyOutcome] = field(default_factory=dict, repr=False)
    orbits: List[List[Tuple[Fpl, int]]] = field(default_factory=list, repr=False)
    inconsistencies: List[Dict] = field(default_factory=list)
    disagreements: List[Dict] = field(default_factory=list)

    @property
    def name(self) -> str:
        return f"{self.base}+dihedral"

    def __call__(self, f: Fpl, i: int, limit: Optional[int] = None) -> StrategyOutcome:
        if (f, i) not in self._cache:
            self._resolve_orbit(f, i)
        return self._cache[(f, i)]

    def _resolve_orbit(self, f: Fpl, i: int) -> None:
        gens = _generators(f.n)
        orbit = {(f, i)}
        queue = deque([(f, i)])
        while queue:
            x = queue.popleft()
            for _, act, _ in gens:
                y = act(*x)
                if y not in orbit:
                    orbit.add(y)
                    queue.append(y)
        rep = min(orbit, key=lambda p: (p[0].key, p[1]))
        base_fn = BASE_STRATEGIES[self.base]
        root = base_fn(rep[0], rep[1], self.limit)
        assigned = {rep: root}
        queue = deque([rep])
        while queue:
            x = queue.popleft()
            out = assigned[x]
            for name, act, geo in gens:
                y = act(*x)
                moved = self._transport(out, y, geo)
                if y not in assigned:
                    assigned[y] = moved
                    queue.append(y)
                elif not _same_answer(assigned[y], moved):
                    self.inconsistencies.append({"f": y[0].key, "i": y[1], "via": name})
        for (g, k), out in sorted(assigned.items(), key=lambda p: (p[0][0].key, p[0][1])):
            self._cache[(g, k)] = out
            if (g, k) != rep and out.resolved:
                own = base_fn(g, k, self.limit)
                if not _same_answer(own, out):
                    self.disagreements.append({"f": g.key, "i": k, "base": own.kind,
                                               "base_g": own.g.key if own.g else None,
                                               "transported_g": out.g.key})
        self.orbits.append(sorted(orbit, key=lambda p: (p[0].key, p[1])))

    @staticmethod
    def _transport(out: StrategyOutcome, target: Tuple[Fpl, int], geo) -> StrategyOutcome:
        f2, i2 = target
        if not out.resolved:
            return StrategyOutcome(f2, i2, out.kind, note="transported " + out.kind)
        g2 = geo(out.g)
        j2 = output_label(f2, g2, i2)
        return StrategyOutcome(f2, i2, "resolved", g=g2, j=j2, note="transported")


def _same_answer(a: StrategyOutcome, b: StrategyOutcome) -> bool:
    return a.kind == b.kind and a.g == b.g and a.j == b.j


def symmetrize_strategy(base: str, limit: int = DEFAULT_CYCLE_LIMIT) -> SymmetrizedStrategy:
    if base not in BASE_STRATEGIES:
        raise ValueError(f"unknown base strategy {base!r}")
    return SymmetrizedStrategy(base, limit)


def make_strategy(strategy: str, limit: int = DEFAULT_CYCLE_LIMIT) -> Callable[[Fpl, int], StrategyOutcome]:
    if strategy in BASE_STRATEGIES:
        fn = BASE_STRATEGIES[strategy]
        return lambda f, i: fn(f, i, limit)
    if strategy.endswith("+dihedral"):
        return symmetrize_strategy(strategy[: -len("+dihedral")], limit)
    raise ValueError(f"unknown strategy {strategy!r}; choose from {', '.join(STRATEGIES)}")


# ---------------------------------------------------------------- sweeps


@dataclass
class CountingHistogram:
    n: int
    strategy: str
    counts: Dict[str, int]
    outcomes: List[StrategyOutcome]
    ambiguous: List[StrategyOutcome]
    not_found: List[StrategyOutcome]
    extra: Dict = field(default_factory=dict)

    @property
    def resolved(self) -> List[StrategyOutcome]:
        return [o for o in self.outcomes if o.resolved]

    @property
    def pass_2n_test(self) -> bool:
        return (not self.ambiguous and not self.not_found
                and all(c == 2 * self.n for c in self.counts.values()))

    def to_json(self) -> Dict:
        return {
            "n": self.n,
            "strategy": self.strategy,
            "counts": dict(sorted(self.counts.items())),
            "ambiguous": [
                {"f": o.f.key, "i": o.i, "candidates": [c.to_json() for c in o.candidates]}
                for o in self.ambiguous
            ],
            "not_found": [{"f": o.f.key, "i": o.i} for o in self.not_found],
            "pass_2n_test": self.pass_2n_test,
            **self.extra,
        }


def run_counting_test(n: int, strategy: str, limit: int = DEFAULT_CYCLE_LIMIT,
                      max_n: int = DEFAULT_MAX_N) -> CountingHistogram:
    """Apply the strategy to every (f, i) and count how often each FPL is produced."""
    fpls = all_fpls(n, max_n=max_n)
    fn = make_strategy(strategy, limit)
    counts = {f.key: 0 for f in fpls}
    outcomes, ambiguous, not_found = [], [], []
    for f in fpls:
        for i in range(1, 2 * n + 1):
            out = fn(f, i)
            outcomes.append(out)
            if out.kind == "resolved":
                counts[out.g.key] += 1
            elif out.kind == "ambiguous":
                ambiguous.append(out)
            else:
                not_found.append(out)
    assert len(outcomes) == 2 * n * asm_count_formula(n)
    extra = {}
    if isinstance(fn, SymmetrizedStrategy):
        extra = {"orbits": len(fn.orbits), "inconsistencies": fn.inconsistencies,
                 "disagreements": len(fn.disagreements)}
    return CountingHistogram(n, strategy, counts, outcomes, ambiguous, not_found, extra)


@dataclass
class AuditReport:
    n: int
    strategy: str
    total: int
    resolved: int
    canonical: bool
    injective: bool
    collisions: List[Dict]
    e_i_reading_holds: int
    join_reading_holds: int
    per_k: List[Dict]
    violations: List[Dict]

    @property
    def passed(self) -> bool:
        return self.canonical and self.injective and not self.violations

    def to_json(self) -> Dict:
        return {
            "n": self.n, "strategy": self.strategy, "total": self.total, "resolved": self.resolved,
            "canonical": self.canonical, "injective": self.injective, "collisions": self.collisions,
            "e_i_reading_holds": self.e_i_reading_holds, "join_reading_holds": self.join_reading_holds,
            "per_k": self.per_k, "violations": self.violations, "pass": self.passed,
        }


def audit_bijection(n: int, strategy: str, limit: int = DEFAULT_CYCLE_LIMIT,
                    max_n: int = DEFAULT_MAX_N, histogram: Optional[CountingHistogram] = None
                    ) -> AuditReport:
    """Check the resolved part of a sweep for injectivity and both target readings.

    Reading 1: e_i(pi(g)) = pi(f).  Reading 2: i and i+1 joined in pi(g).
    Per basis index k the report compares, for inputs (i, f) with pi(f) = pi_k,
    how many outputs (j, g) land in B_k = {(j, g) : e_j(pi(g)) = pi_k}.
    """
    from .spectral import materialize_sets

    hist = histogram or run_counting_test(n, strategy, limit, max_n)
    index = basis_index(n)
    sets = materialize_sets(n, max_n=max_n)
    images: Dict[Tuple[str, int], List[Tuple[str, int]]] = {}
    e_i_ok = join_ok = 0
    per_k = {k: {"k": k, "inputs": 0, "resolved": 0, "outputs_in_B": 0,
                 "size_B": len(sets[k][1])} for k in sets}
    violations = []
    for out in hist.outcomes:
        pf = link_pattern_of(out.f)
        k = index[pf] + 1
        per_k[k]["inputs"] += 1
        if not out.resolved:
            continue
        per_k[k]["resolved"] += 1
        images.setdefault((out.g.key, out.j), []).append((out.f.key, out.i))
        pg = link_pattern_of(out.g)
        if apply_e(out.i, pg) == pf:
            e_i_ok += 1
        if joins_neighbours(pg, out.i):
            join_ok += 1
        if (out.j, out.g.key) in sets[k][1]:
            per_k[k]["outputs_in_B"] += 1
        if not is_valid_fpl(out.g):
            violations.append({"f": out.f.key, "i": out.i, "problem": "output is not a valid FPL"})
    collisions = [{"g": g, "j": j, "preimages": [list(p) for p in pre]}
                  for (g, j), pre in sorted(images.items()) if len(pre) > 1]
    resolved = sum(1 for o in hist.outcomes if o.resolved)
    rows = [per_k[k] for k in sorted(per_k)]
    for row in rows:
        row["pass"] = row["inputs"] == row["resolved"] == row["outputs_in_B"] == row["size_B"]
    return AuditReport(
        n=n, strategy=strategy, total=len(hist.outcomes), resolved=resolved,
        canonical=not hist.ambiguous, injective=not collisions, collisions=collisions,
        e_i_reading_holds=e_i_ok, join_reading_holds=join_ok, per_k=rows, violations=violations,
    )
