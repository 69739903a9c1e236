"""Random walk on covers with one or two cycles, moving whole square rows.

A step picks a square uniformly. If the square is above (below) three or
four of its neighbours, the row starting there is lowered (raised) when
every square in it is still extremal at the moment it is flipped, and the
result still has at most two cycles. Otherwise the step is a self-loop.

The reverse of moving the row f0 .. f_{r-1} is the move that starts at
f_{r-1}, so proposals pair up one to one and the transition matrix is
symmetric; the uniform law on the reachable covers is stationary.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field

from .cover import CycleCover
from .grid import GridGraph
from .height import RowInvalidated, RowRef, apply_row, signature, trace_row

RNG_ID = "python-random-mt19937"


class EmptyTarget(Exception):
    pass


class NotHamiltonian(Exception):
    pass


class RestartsExhausted(Exception):
    pass


def cycle_count(g: GridGraph, in_h) -> int:
    n = len(g.points)
    seen = bytearray(n)
    count = 0
    nbrs, vedges = g.nbrs, g.vertex_edges
    for start in range(n):
        if seen[start]:
            continue
        count += 1
        prev, cur = -1, start
        while not seen[cur]:
            seen[cur] = 1
            for d in range(4):
                w = nbrs[cur][d]
                if w >= 0 and w != prev and in_h[vedges[cur][d]]:
                    prev, cur = cur, w
                    break
    return count


class MoveTable:
    """Memoized proposal outcomes: (cover mask, square) -> cover mask."""

    def __init__(self, g: GridGraph, max_p: int = 2, limit: int = 2_000_000):
        self.g = g
        self.tab = g.squares
        self.max_p = max_p
        self.limit = limit
        self.memo: dict[tuple[int, int], int] = {}
        self.kinds: dict[tuple[int, int], str] = {}

    def _in_h(self, mask: int) -> bytearray:
        m = len(self.g.edges)
        return bytearray((mask >> e) & 1 for e in range(m))

    def target(self, mask: int, s: int) -> int:
        key = (mask, s)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        out, kind = self._compute(mask, s)
        if len(self.memo) >= self.limit:
            self.memo.clear()
            self.kinds.clear()
        self.memo[key] = out
        self.kinds[key] = kind
        return out

    def kind(self, mask: int, s: int) -> str:
        self.target(mask, s)
        return self.kinds.get((mask, s), "self")

    def _compute(self, mask: int, s: int) -> tuple[int, str]:
        in_h = self._in_h(mask)
        row = trace_row(self.tab, in_h, s)
        if not isinstance(row, RowRef):
            return mask, "self"
        before = cycle_count(self.g, in_h)
        try:
            apply_row(self.tab, in_h, row.squares)
        except RowInvalidated:
            return mask, "self"
        after = cycle_count(self.g, in_h)
        if after > self.max_p:
            return mask, "self"
        new = 0
        for e, x in enumerate(in_h):
            if x:
                new |= 1 << e
        kind = "join" if after < before else "split" if after > before else "shift"
        return new, kind


@dataclass
class SamplerConfig:
    seed: int = 0
    steps: int = 10_000
    burnin: int | None = None  # default 10 * |F|^2
    max_restarts: int = 100

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("steps must be at least 1")

    def burnin_for(self, g: GridGraph) -> int:
        return self.burnin if self.burnin is not None else 10 * len(g.squares) ** 2


@dataclass
class ChainState:
    g: GridGraph
    mask: int
    p: int
    steps: int = 0

    @property
    def cover(self) -> CycleCover:
        return CycleCover.from_mask(self.g, self.mask)


class MarkovChain:
    """One chain with its own generator and statistics.

    ``broken=True`` is the negative control: self-loops are re-drawn, which
    weights states by their number of possible moves.
    """

    def __init__(self, start: CycleCover, seed: int, broken: bool = False, table: MoveTable | None = None):
        if start.p > 2:
            raise EmptyTarget("the start cover has more than two cycles")
        self.g = start.g
        self.table = table or MoveTable(start.g)
        self.rng = random.Random(seed)
        self.seed = seed
        self.broken = broken
        self.mask = start.mask
        self.p = start.p
        self.steps = 0
        self.visits: Counter = Counter()
        self.moves: Counter = Counter()
        self._nsq = len(self.g.squares)

    @property
    def state(self) -> ChainState:
        return ChainState(self.g, self.mask, self.p, self.steps)

    def step(self) -> int:
        if self._nsq == 0:
            self.steps += 1
            self.visits[self.p] += 1
            self.moves["self"] += 1
            return self.mask
        table = self.table
        rng = self.rng
        s = rng.randrange(self._nsq)
        new = table.target(self.mask, s)
        if self.broken and new == self.mask:
            options = [t for t in range(self._nsq) if table.target(self.mask, t) != self.mask]
            if options:
                s = options[rng.randrange(len(options))]
                new = table.target(self.mask, s)
        kind = table.kind(self.mask, s) if new != self.mask else "self"
        if kind == "join":
            self.p -= 1
        elif kind == "split":
            self.p += 1
        self.mask = new
        self.steps += 1
        self.visits[self.p] += 1
        self.moves[kind] += 1
        return new

    def run(self, n: int) -> None:
        for _ in range(n):
            self.step()

    def metadata(self) -> dict:
        return {
            "seed": self.seed,
            "generator": RNG_ID,
            "steps": self.steps,
            "visits": {str(k): v for k, v in sorted(self.visits.items())},
            "moves": dict(sorted(self.moves.items())),
        }


def step(state: ChainState, rng: random.Random, table: MoveTable | None = None) -> ChainState:
    """One transition from ``state`` using ``rng``; returns the new state."""
    table = table or MoveTable(state.g)
    nsq = len(state.g.squares)
    if nsq == 0:
        return ChainState(state.g, state.mask, state.p, state.steps + 1)
    s = rng.randrange(nsq)
    new = table.target(state.mask, s)
    p = state.p
    if new != state.mask:
        kind = table.kind(state.mask, s)
        p += -1 if kind == "join" else 1 if kind == "split" else 0
    return ChainState(state.g, new, p, state.steps + 1)


def start_cover(g: GridGraph, component: tuple[int, ...] | None = None, jobs: int = 1) -> CycleCover:
    """A cover with the fewest cycles in the requested component (best one if None)."""
    from .cover import NoCover
    from .hamilton import search_all_components

    try:
        res = search_all_components(g, jobs=jobs)
    except NoCover as exc:
        raise EmptyTarget(str(exc)) from exc
    if component is None:
        best = min(res.components, key=lambda c: (c.p, c.signature))
    else:
        matches = [c for c in res.components if c.signature == tuple(component)]
        if not matches:
            raise EmptyTarget(f"no component with signature {tuple(component)}")
        best = matches[0]
    if best.p > 2:
        raise EmptyTarget(f"component minimum is {best.p} cycles")
    return best.cover


def sample(g: GridGraph, component: tuple[int, ...] | None, cfg: SamplerConfig) -> tuple[CycleCover, MarkovChain]:
    chain = MarkovChain(start_cover(g, component), cfg.seed)
    chain.run(cfg.burnin_for(g) + cfg.steps)
    return CycleCover.from_mask(g, chain.mask), chain


def sample_hamiltonian(
    g: GridGraph, component: tuple[int, ...] | None, cfg: SamplerConfig
) -> tuple[CycleCover, MarkovChain]:
    """A Hamiltonian cycle by rejection: look at the chain once per burn-in period.

    The chain runs a burn-in period and its state is accepted if it has one
    cycle; otherwise it runs another period, up to ``cfg.max_restarts``
    more times. Taking the first one-cycle state seen instead would favour
    cycles that are easy to reach from two-cycle covers.
    """
    try:
        start = start_cover(g, component)
    except EmptyTarget as exc:
        raise NotHamiltonian(str(exc)) from exc
    if start.p != 1:
        raise NotHamiltonian("the component has no Hamiltonian cycle")
    period = max(1, cfg.burnin_for(g))
    chain = MarkovChain(start, cfg.seed)
    for _ in range(cfg.max_restarts + 1):
        chain.run(period)
        if chain.p == 1:
            return CycleCover.from_mask(g, chain.mask), chain
    raise RestartsExhausted(f"no Hamiltonian state in {cfg.max_restarts + 1} checks")


@dataclass
class RatioEstimate:
    ratio: float
    samples: int
    chain: MarkovChain = field(repr=False)


def estimate_ratio(g: GridGraph, component: tuple[int, ...] | None, cfg: SamplerConfig) -> RatioEstimate:
    """Fraction of post-burn-in steps spent on one-cycle covers."""
    chain = MarkovChain(start_cover(g, component), cfg.seed)
    chain.run(cfg.burnin_for(g))
    ones = 0
    for _ in range(cfg.steps):
        chain.step()
        ones += chain.p == 1
    return RatioEstimate(ones / cfg.steps, cfg.steps, chain)


def component_of(h: CycleCover) -> tuple[int, ...]:
    return signature(h)
