"""Differential Evolution over bounded real vectors.

Classic rand/1 mutation is available, but the default donor is a random
convex combination of the three sampled population members, which spreads
the mutant bases over the simplex they span instead of pinning them to
one member.  The binomial-crossover trial competes greedily with its
parent for the slot, so the population's best cost never rises while the
objective stays fixed.  (Scoring the raw mutant as a third candidate was
tried and rejected: with the convex-combination donor it floods the
population with near-centroid points and stalls convergence well short
of the optimum.)

All randomness flows through counter-based substreams keyed by
(seed, generation, member), making runs bit-reproducible regardless of
evaluation order or parallelism.

For time-varying objectives the caller marks the run ``dynamic``: the
engine then re-evaluates the carried-over population at the start of each
generation (epoch) so every comparison is made under the same
environment realization.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np

from .rng import DOMAIN_INIT, DOMAIN_MUTATION, substream

DonorMode = Literal["weighted", "rand1"]

Objective = Callable[[np.ndarray, int], float]
DescribeFn = Callable[[np.ndarray, int], dict[str, float]]


@dataclass(frozen=True)
class DEConfig:
    n_pop: int = 100
    iter_max: int = 200
    f_bounds: tuple[float, float] = (0.2, 0.8)
    cr: float = 0.2
    seed: int = 0
    donor_mode: DonorMode = "weighted"

    def __post_init__(self):
        if self.n_pop < 4:
            raise ValueError("population needs at least 4 members for mutation")
        if self.iter_max < 0:
            raise ValueError("iter_max must be >= 0")
        if not 0.0 <= self.cr <= 1.0:
            raise ValueError("crossover probability must be in [0, 1]")
        lo, hi = self.f_bounds
        if not 0.0 <= lo <= hi:
            raise ValueError("f_bounds must satisfy 0 <= low <= high")
        if self.donor_mode not in ("weighted", "rand1"):
            raise ValueError(f"unknown donor mode {self.donor_mode!r}")


@dataclass
class TraceRow:
    generation: int
    best_cost: float
    mean_cost: float
    detail: dict[str, float] = field(default_factory=dict)


@dataclass
class ConvergenceTrace:
    rows: list[TraceRow] = field(default_factory=list)

    def best_costs(self) -> np.ndarray:
        return np.array([r.best_cost for r in self.rows])

    def write_csv(self, path) -> None:
        detail_keys = list(self.rows[0].detail) if self.rows else []
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["generation", "best_cost", "mean_cost", *detail_keys])
            for row in self.rows:
                writer.writerow(
                    [
                        row.generation,
                        f"{row.best_cost:.12g}",
                        f"{row.mean_cost:.12g}",
                        *[f"{row.detail[k]:.12g}" for k in detail_keys],
                    ]
                )


@dataclass(frozen=True)
class DEResult:
    best_genes: np.ndarray
    best_cost: float
    trace: ConvergenceTrace
    population: np.ndarray
    costs: np.ndarray


def check_bounds(bounds: np.ndarray) -> np.ndarray:
    b = np.asarray(bounds, dtype=float)
    if b.ndim != 2 or b.shape[1] != 2 or b.shape[0] < 1:
        raise ValueError("bounds must have shape (n_genes, 2)")
    if np.any(b[:, 0] > b[:, 1]):
        raise ValueError("every gene bound must satisfy low <= high")
    return b


def reflect_into_bounds(genes: np.ndarray, bounds: np.ndarray) -> np.ndarray:
    """Fold out-of-bounds genes back into [low, high] by reflection."""
    lo, hi = bounds[:, 0], bounds[:, 1]
    span = hi - lo
    out = np.where(span > 0, genes, lo)
    degenerate = span <= 0
    period = np.where(degenerate, 1.0, 2.0 * span)
    phase = np.mod(out - lo, period)
    reflected = lo + np.minimum(phase, period - phase)
    return np.where(degenerate, lo, reflected)


def init_population(bounds: np.ndarray, n_pop: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform population of shape (n_pop, n_genes) within bounds."""
    bounds = check_bounds(bounds)
    return rng.uniform(bounds[:, 0], bounds[:, 1], size=(n_pop, bounds.shape[0]))


def donor_vector(
    triplet: np.ndarray, donor_mode: DonorMode, rng: np.random.Generator
) -> np.ndarray:
    """Mutation base from the sampled triplet (rows r1, r2, r3)."""
    if donor_mode == "rand1":
        return triplet[2]
    lam = rng.uniform(0.0, 1.0, size=3)
    total = lam.sum()
    if total == 0.0:
        lam = np.full(3, 1.0 / 3.0)
        total = 1.0
    return (lam / total) @ triplet


def mutate(
    population: np.ndarray,
    target: int,
    f_bounds: tuple[float, float],
    donor_mode: DonorMode,
    rng: np.random.Generator,
    bounds: np.ndarray,
) -> np.ndarray:
    """Differential mutant for ``target``: donor + F * (r1 - r2), reflected."""
    n_pop = population.shape[0]
    if n_pop < 4:
        raise ValueError("population needs at least 4 members for mutation")
    picks = rng.choice(n_pop - 1, size=3, replace=False)
    picks = picks + (picks >= target)  # skip the target index
    f = rng.uniform(*f_bounds)
    triplet = population[picks]
    base = donor_vector(triplet, donor_mode, rng)
    mutant = base + f * (triplet[0] - triplet[1])
    return reflect_into_bounds(mutant, bounds)


def crossover_genes(
    parent: np.ndarray, mutant: np.ndarray, cr: float, rands: np.ndarray, k: int
) -> np.ndarray:
    """Binomial crossover rule: mutant gene where rand_j <= cr or j == k."""
    take = (rands <= cr) | (np.arange(parent.size) == k)
    return np.where(take, mutant, parent)


def crossover(
    parent: np.ndarray, mutant: np.ndarray, cr: float, rng: np.random.Generator
) -> np.ndarray:
    """Binomial crossover with one gene forced from the mutant."""
    if parent.shape != mutant.shape:
        raise ValueError("parent and mutant must have equal gene counts")
    rands = rng.uniform(0.0, 1.0, size=parent.size)
    k = int(rng.integers(parent.size))
    return crossover_genes(parent, mutant, cr, rands, k)


def select(
    parent: np.ndarray,
    trial: np.ndarray,
    cost_fn: Callable[[np.ndarray], float],
    parent_cost: float | None = None,
) -> tuple[np.ndarray, float]:
    """Greedy one-to-one selection; ties prefer the trial (new material)."""

    def _cost(genes, cached=None):
        c = cost_fn(genes) if cached is None else cached
        return c if np.isfinite(c) else np.inf

    candidates = ((trial, _cost(trial)), (parent, _cost(parent, parent_cost)))
    return min(candidates, key=lambda pair: pair[1])


def run(
    cfg: DEConfig,
    objective: Objective,
    bounds: np.ndarray,
    *,
    dynamic: bool = False,
    describe: DescribeFn | None = None,
) -> DEResult:
    """Run the full optimization loop and log a per-generation trace.

    ``objective(genes, epoch)`` is evaluated under the epoch equal to the
    generation index (the initial population uses epoch 0).  When
    ``dynamic`` is set, carried-over members are re-scored at each new
    epoch so selection always compares same-epoch costs.
    """
    bounds = check_bounds(bounds)

    def score_all(epoch: int) -> np.ndarray:
        scored = np.array([objective(member, epoch) for member in population])
        return np.where(np.isfinite(scored), scored, np.inf)

    population = init_population(bounds, cfg.n_pop, substream(cfg.seed, DOMAIN_INIT))
    costs = score_all(0)

    trace = ConvergenceTrace()

    def log(generation: int) -> None:
        best = int(np.argmin(costs))
        detail = describe(population[best], generation) if describe else {}
        trace.rows.append(
            TraceRow(
                generation=generation,
                best_cost=float(costs[best]),
                mean_cost=float(costs.mean()),
                detail=detail,
            )
        )

    log(0)
    for generation in range(1, cfg.iter_max + 1):
        if dynamic:
            costs = score_all(generation)

        new_population = np.empty_like(population)
        new_costs = np.empty_like(costs)
        for i in range(cfg.n_pop):
            rng = substream(cfg.seed, DOMAIN_MUTATION, generation, i)
            mutant = mutate(population, i, cfg.f_bounds, cfg.donor_mode, rng, bounds)
            trial = crossover(population[i], mutant, cfg.cr, rng)
            survivor, cost = select(
                population[i],
                trial,
                lambda genes: objective(genes, generation),
                parent_cost=costs[i],
            )
            new_population[i] = survivor
            new_costs[i] = cost
        population, costs = new_population, new_costs
        log(generation)

    best = int(np.argmin(costs))
    return DEResult(
        best_genes=population[best].copy(),
        best_cost=float(costs[best]),
        trace=trace,
        population=population,
        costs=costs,
    )
