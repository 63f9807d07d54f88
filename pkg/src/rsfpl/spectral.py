"""Exact Hamiltonian, integer ground state and the RS identity checks.

Everything here is exact: integers and :class:`fractions.Fraction`, never floats.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .fpl_core import DEFAULT_MAX_N, ResourceLimitError, all_fpls, count_by_pattern, link_pattern_of
from .patterns import apply_e, basis_index, catalan, enumerate_link_patterns, operator_matrix

DEFAULT_MAX_DIM = 1430


class KernelDimensionError(ArithmeticError):
    """The eigenspace of H at eigenvalue 2n is not one-dimensional."""


@dataclass(frozen=True)
class Hamiltonian:
    n: int
    entries: Tuple[Tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.entries)

    def apply(self, vec: Sequence[int]) -> List[int]:
        return [sum(h * x for h, x in zip(row, vec)) for row in self.entries]

    def apply_left(self, vec: Sequence[int]) -> List[int]:
        return [sum(vec[k] * self.entries[k][j] for k in range(self.dim)) for j in range(self.dim)]


@lru_cache(maxsize=None)
def build_hamiltonian(n: int) -> Hamiltonian:
    """H = e_1 + ... + e_2n on the canonical basis."""
    basis = enumerate_link_patterns(n)
    dim = len(basis)
    acc = [[0] * dim for _ in range(dim)]
    for i in range(1, 2 * n + 1):
        for k, row in enumerate(operator_matrix(i, basis).entries):
            for j, x in enumerate(row):
                if x:
                    acc[k][j] += x
    return Hamiltonian(n, tuple(tuple(r) for r in acc))


def rational_kernel(rows: Sequence[Sequence[int]]) -> List[List[Fraction]]:
    """Basis of the right kernel of an integer matrix, over the rationals.

    Sparse forward elimination; the pivot in each column is the first
    remaining row (by index) with a nonzero entry there.  Kernel vectors are
    returned in order of their free column, each with a 1 in that column.
    """
    if not rows:
        return []
    ncols = len(rows[0])
    work: List[Dict[int, Fraction]] = [
        {c: Fraction(x) for c, x in enumerate(r) if x} for r in rows
    ]
    # column -> rows (not yet used as pivots) holding a nonzero there
    holders: Dict[int, Set[int]] = {c: set() for c in range(ncols)}
    for ri, r in enumerate(work):
        for c in r:
            holders[c].add(ri)
    pivots: List[Tuple[int, Dict[int, Fraction]]] = []
    free: List[int] = []
    for col in range(ncols):
        cands = holders[col]
        if not cands:
            free.append(col)
            continue
        p = min(cands)
        prow = work[p]
        for c in prow:
            holders[c].discard(p)
        inv = 1 / prow[col]
        prow = {c: x * inv for c, x in prow.items()}
        for ri in sorted(cands):
            r = work[ri]
            factor = r[col]
            for c, x in prow.items():
                y = r.get(c, 0) - factor * x
                if y:
                    if c not in r:
                        holders[c].add(ri)
                    r[c] = y
                elif c in r:
                    del r[c]
                    holders[c].discard(ri)
        pivots.append((col, prow))
    basis = []
    for fc in free:
        sol: Dict[int, Fraction] = {fc: Fraction(1)}
        for col, prow in reversed(pivots):
            s = sum((x * sol.get(c, 0) for c, x in prow.items() if c != col), Fraction(0))
            if s:
                sol[col] = -s
        basis.append([sol.get(c, Fraction(0)) for c in range(ncols)])
    return basis


def primitive_integer_vector(vec: Sequence[Fraction]) -> List[int]:
    """Scale a rational vector to coprime integers with a positive first nonzero entry."""
    den = 1
    for x in vec:
        den = lcm(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector")
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x)
    return [-x for x in ints] if lead < 0 else ints


@dataclass(frozen=True)
class GroundState:
    n: int
    values: Tuple[int, ...]

    def to_json(self) -> Dict:
        return {"n": self.n, "values": list(self.values)}


@lru_cache(maxsize=None)
def ground_state(n: int, max_dim: int = DEFAULT_MAX_DIM) -> GroundState:
    dim = catalan(n)
    if dim > max_dim:
        raise ResourceLimitError(f"C_{n} = {dim} exceeds the solver cap {max_dim}")
    H = build_hamiltonian(n)
    shifted = [
        [h - (2 * n if k == j else 0) for j, h in enumerate(row)] for k, row in enumerate(H.entries)
    ]
    kernel = rational_kernel(shifted)
    if len(kernel) != 1:
        raise KernelDimensionError(f"kernel of H - {2 * n}I has dimension {len(kernel)} at n={n}")
    values = primitive_integer_vector(kernel[0])
    if any(x <= 0 for x in values):
        raise KernelDimensionError(f"eigenvector at n={n} is not strictly positive: {values}")
    gs = GroundState(n, tuple(values))
    assert H.apply(gs.values) == [2 * n * x for x in gs.values]
    return gs


@dataclass
class Verification:
    """Outcome of one exact check; serialises to the report schema."""

    n: int
    kind: str
    passed: bool
    details: List[Dict] = field(default_factory=list)
    extra: Dict = field(default_factory=dict)

    def to_json(self) -> Dict:
        out = {"n": self.n, "kind": self.kind, "pass": self.passed, "details": self.details}
        out.update(self.extra)
        return out


def fpl_counts_vector(n: int, max_n: int = DEFAULT_MAX_N) -> List[int]:
    counts = count_by_pattern(n, max_n=max_n)
    return [counts[pi] for pi in enumerate_link_patterns(n)]


def verify_rs(n: int, max_n: int = DEFAULT_MAX_N, max_dim: int = DEFAULT_MAX_DIM) -> Verification:
    psi = list(ground_state(n, max_dim=max_dim).values)
    counts = fpl_counts_vector(n, max_n=max_n)
    details = [
        {"k": k + 1, "pattern": list(pi.match), "psi": psi[k], "fpl_count": counts[k],
         "pass": psi[k] == counts[k]}
        for k, pi in enumerate(enumerate_link_patterns(n))
    ]
    return Verification(n, "rs", psi == counts, details, {"psi": psi, "fpl_counts": counts})


def harmonic_lhs_direct(n: int, counts: Sequence[int]) -> List[int]:
    """sum of A(pi_j) over pairs (i, j) with e_i(pi_j) = pi_k, for each k."""
    basis = enumerate_link_patterns(n)
    index = basis_index(n)
    lhs = [0] * len(basis)
    for j, pi in enumerate(basis):
        for i in range(1, 2 * n + 1):
            lhs[index[apply_e(i, pi)]] += counts[j]
    return lhs


def harmonic_lhs_via_hamiltonian(n: int, counts: Sequence[int]) -> List[int]:
    """Same totals, regrouped as sum_j A(pi_j) * (column j of H)."""
    H = build_hamiltonian(n)
    lhs = [0] * H.dim
    for j, a in enumerate(counts):
        for k in range(H.dim):
            lhs[k] += a * H.entries[k][j]
    return lhs


def verify_harmonic(n: int, max_n: int = DEFAULT_MAX_N) -> Verification:
    counts = fpl_counts_vector(n, max_n=max_n)
    lhs = harmonic_lhs_direct(n, counts)
    regrouped = harmonic_lhs_via_hamiltonian(n, counts)
    details = []
    for k, pi in enumerate(enumerate_link_patterns(n)):
        rhs = 2 * n * counts[k]
        details.append({"k": k + 1, "pattern": list(pi.match), "lhs": lhs[k], "rhs": rhs,
                        "lhs_regrouped": regrouped[k], "pass": lhs[k] == rhs == regrouped[k]})
    return Verification(n, "harmonic", all(d["pass"] for d in details), details)


PairSet = Set[Tuple[int, str]]


def materialize_sets(n: int, max_n: int = DEFAULT_MAX_N) -> Dict[int, Tuple[PairSet, PairSet]]:
    """For each basis index k (1-based), the sets A_k and B_k of (label, FPL key) pairs.

    A_k = {(i, f) : pi(f) = pi_k},  B_k = {(j, g) : e_j(pi(g)) = pi_k}.
    """
    basis = enumerate_link_patterns(n)
    index = basis_index(n)
    sets = {k + 1: (set(), set()) for k in range(len(basis))}
    for f in all_fpls(n, max_n=max_n):
        pi = link_pattern_of(f)
        key = f.key
        a_set = sets[index[pi] + 1][0]
        for i in range(1, 2 * n + 1):
            a_set.add((i, key))
            sets[index[apply_e(i, pi)] + 1][1].add((i, key))
    return sets


def verify_set_equinumeracy(n: int, k: Optional[int] = None, max_n: int = DEFAULT_MAX_N) -> Verification:
    """Compare |A_k| and |B_k| (all k when ``k`` is None)."""
    sets = materialize_sets(n, max_n=max_n)
    counts = fpl_counts_vector(n, max_n=max_n)
    basis = enumerate_link_patterns(n)
    ks = sorted(sets) if k is None else [k]
    details = []
    for kk in ks:
        if kk not in sets:
            raise IndexError(f"basis index {kk} outside [1, {len(basis)}]")
        a_set, b_set = sets[kk]
        structural = 2 * n * counts[kk - 1]
        details.append({"k": kk, "pattern": list(basis[kk - 1].match), "size_A": len(a_set),
                        "size_B": len(b_set), "two_n_A": structural,
                        "pass": len(a_set) == len(b_set) == structural})
    return Verification(n, "sets", all(d["pass"] for d in details), details)
