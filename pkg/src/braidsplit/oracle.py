"""Brute-force splitting oracles that avoid the linear-algebra route entirely."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .extension import ExtensionData, decide_split, verify_section
from .instances import WreathInstanceSpec, build_wreath_group, wreath_extension
from .linalg import ResidueVector
from .permgroup import (
    BlockMap,
    GroupTooLarge,
    Permutation,
    PermutationGroup,
    block_projection,
    closure,
    generate,
)

DEFAULT_LIFT_BUDGET = 10**7
DEFAULT_COMPLEMENT_CAP = 10**4


class BudgetExceeded(RuntimeError):
    def __init__(self, what: str, cost: int, budget: int):
        super().__init__(f"{what} needs {cost} > budget {budget}")
        self.cost = cost
        self.budget = budget


@dataclass(frozen=True)
class LiftSearchResult:
    searched: int
    witnesses: int
    first_witness: Optional[tuple[ResidueVector, ...]] = None


def brute_force_lifts(
    ext: ExtensionData,
    budget: int = DEFAULT_LIFT_BUDGET,
    elements: Optional[Sequence[ResidueVector]] = None,
) -> LiftSearchResult:
    """Count tuples ``(a_1..a_{n-1})`` in ``A^(n-1)`` for which ``g_s a_s`` satisfy the Coxeter relations.

    The search is a depth-first walk over ``A^(n-1)`` in enumeration order;
    a branch is dropped as soon as one relation among the already chosen
    elements fails, which never loses a witness.  ``elements`` overrides the
    enumeration order of ``A``.
    """
    mod = ext.module
    n, q = mod.n, mod.q
    size = len(elements) if elements is not None else mod.order()
    searched = size ** (n - 1)
    if searched > budget:
        raise BudgetExceeded("lift search", searched, budget)
    elems = [tuple(v.coords) for v in (elements if elements is not None else mod.elements())]

    m = mod.rank
    mats = [iota.entries for iota in mod.action]

    def act(s, v):
        rows = mats[s]
        return tuple(sum(a * x for a, x in zip(r, v)) % q for r in rows)

    def add(*vs):
        return tuple(sum(c) % q for c in zip(*vs))

    # images[s][v] = iota_{s+1}(v)
    images = [{v: act(s, v) for v in elems} for s in range(n - 1)]
    zero = (0,) * m
    f = [tuple(x.coords) for x in ext.f]

    def ok_involution(s, v):
        return add(f[s], images[s][v], v) == zero

    def ok_braid(r, ar, ar1):
        # iota_r iota_{r+1} (a_r) + iota_r(a_{r+1}) + a_r
        lhs = add(act(r, images[r + 1][ar]), images[r][ar1], ar)
        rhs = add(act(r + 1, images[r][ar1]), images[r + 1][ar], ar1)
        return lhs == rhs

    def ok_far(s, t, a_s, a_t):
        return add(images[t][a_s], a_t) == add(images[s][a_t], a_s)

    candidates = [[v for v in elems if ok_involution(s, v)] for s in range(n - 1)]
    count = 0
    first = None
    chosen: list[tuple] = []

    def walk(s):
        nonlocal count, first
        if s == n - 1:
            count += 1
            if first is None:
                first = tuple(ResidueVector(v, q) for v in chosen)
            return
        for v in candidates[s]:
            if s >= 1 and not ok_braid(s - 1, chosen[s - 1], v):
                continue
            if any(not ok_far(t, s, chosen[t], v) for t in range(s - 1)):
                continue
            chosen.append(v)
            walk(s + 1)
            chosen.pop()

    walk(0)
    return LiftSearchResult(searched, count, first)


@dataclass(frozen=True)
class ComplementSearchResult:
    found: Optional[tuple[Permutation, ...]] = None
    examined: int = 0


def _coxeter_transpositions(n: int) -> list[Permutation]:
    return [Permutation.transposition(n, s, s + 1) for s in range(n - 1)]


def complement_search(
    G: PermutationGroup, blocks: BlockMap, cap: int = DEFAULT_COMPLEMENT_CAP
) -> ComplementSearchResult:
    """Look for a subgroup of ``G`` of order ``n!`` meeting the block kernel trivially.

    Such a subgroup maps isomorphically onto ``S_n``, so it contains exactly one
    involution above each adjacent transposition; all such choices are tried.
    No relations are assumed, only orders are counted.
    """
    if G.order > cap:
        raise BudgetExceeded("complement search", G.order, cap)
    n = blocks.n
    target = math.factorial(n)
    thetas = _coxeter_transpositions(n)
    lifts: list[list[Permutation]] = [[] for _ in thetas]
    for g in G:
        if not (g * g).is_identity():
            continue
        proj = block_projection(g, blocks)
        for s, th in enumerate(thetas):
            if proj == th:
                lifts[s].append(g)
    if n == 1 or not thetas:
        return ComplementSearchResult(found=(), examined=0)

    examined = 0
    chosen: list[Permutation] = []

    def walk(s):
        nonlocal examined
        if s == len(thetas):
            examined += 1
            try:
                H = closure(chosen, cap=target)
            except GroupTooLarge:
                return None
            if len(H) != target:
                return None
            trivial = [h for h in H if block_projection(Permutation(h), blocks).is_identity()]
            if len(trivial) != 1:
                return None
            return tuple(chosen)
        for g in lifts[s]:
            chosen.append(g)
            hit = walk(s + 1)
            chosen.pop()
            if hit is not None:
                return hit
        return None

    return ComplementSearchResult(walk(0), examined)


@dataclass
class CrossRecord:
    n: int
    q: int
    decide: bool
    lifts: Optional[bool] = None
    complement: Optional[bool] = None
    notes: list[str] = field(default_factory=list)

    @property
    def agree(self) -> bool:
        return all(v == self.decide for v in (self.lifts, self.complement) if v is not None)


def oracle_verdicts(
    n: int,
    q: int,
    lift_budget: int = DEFAULT_LIFT_BUDGET,
    group_cap: int = DEFAULT_COMPLEMENT_CAP,
) -> CrossRecord:
    ext = wreath_extension(n, q)
    rec = CrossRecord(n, q, decide_split(ext).splits)
    try:
        res = brute_force_lifts(ext, lift_budget)
        rec.lifts = res.witnesses > 0
        if res.first_witness is not None and not verify_section(ext, res.first_witness).ok:
            rec.notes.append("first lift witness fails verify_section")
            rec.lifts = None
    except BudgetExceeded as exc:
        rec.notes.append(f"lifts skipped: {exc}")
    spec = WreathInstanceSpec(n, q)
    expected = (q * math.factorial(n) * q ** (n - 1)) // (2 if q % 2 == 0 else 1)
    if n >= 3 and expected > group_cap:
        rec.notes.append(f"complement skipped: group order {expected} > cap {group_cap}")
        return rec
    try:
        G = generate(build_wreath_group(spec), cap=group_cap)
        res = complement_search(G, BlockMap.wreath(n, q), group_cap)
        rec.complement = res.found is not None
    except (BudgetExceeded, GroupTooLarge) as exc:
        rec.notes.append(f"complement skipped: {exc}")
    return rec


def cross_validate(
    ns: Sequence[int],
    qs: Sequence[int],
    lift_budget: int = DEFAULT_LIFT_BUDGET,
    group_cap: int = DEFAULT_COMPLEMENT_CAP,
) -> list[CrossRecord]:
    return [oracle_verdicts(n, q, lift_budget, group_cap) for n in ns for q in qs]
