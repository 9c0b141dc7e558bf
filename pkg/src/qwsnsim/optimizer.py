"""Constrained power allocation: objective assembly, feasibility, a
simulated-annealing solver, an exhaustive grid oracle, and KKT diagnostics.

The decision vector holds one transmit power per node. Each link is evaluated
with its source node's power as the signal power; the objective is the
weighted sum of the TRS energy and latency totals

    alpha * sum_links P_src * L_src / (gamma * C(P_src))
  + beta  * sum_links L_src / (gamma * C(P_src))

subject to per-link TRS capacity >= r_min and total TRS latency <= latency_max,
plus the box bounds on every power. The problem is non-convex (log capacity in
the denominator), hence the metaheuristic plus a brute-force oracle to check it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Sequence

import numpy as np

from .channel import FadingKind, sample_h_squared
from .errors import InfeasibleLinkError, NoFeasiblePointError
from .network import Topology
from .numeric import stable_mean

_LN2 = math.log(2.0)

# Additive penalty per unit of normalized constraint violation. Large enough to
# dominate any sane objective, finite so the chain can cross infeasible valleys.
PENALTY_WEIGHT = 1e6


@dataclass(frozen=True)
class Deterministic:
    """Evaluate every link at |h|^2 = 1."""


@dataclass(frozen=True)
class ErgodicMean:
    """Evaluate links on the mean capacity over frozen seeded fading draws.

    The draw set is derived once from (seed, link index), so the objective is
    a fixed deterministic function of the allocation.
    """

    n_samples: int
    seed: int

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError(f"n_samples must be >= 1, got {self.n_samples}")


FadingTreatment = Deterministic | ErgodicMean


@dataclass(frozen=True)
class PowerProblem:
    topology: Topology
    p_min_w: float
    p_max_w: float
    r_min_bps: float = 0.0
    latency_max_s: float = math.inf
    alpha: float = 1.0
    beta: float = 0.0
    fading: FadingTreatment = field(default_factory=Deterministic)

    def __post_init__(self):
        if not 0 <= self.p_min_w < self.p_max_w:
            raise ValueError(
                f"power bounds must satisfy 0 <= p_min < p_max, got "
                f"[{self.p_min_w}, {self.p_max_w}]"
            )
        if self.r_min_bps < 0:
            raise ValueError(f"r_min_bps must be >= 0, got {self.r_min_bps}")
        if not self.latency_max_s > 0:
            raise ValueError(f"latency_max_s must be > 0, got {self.latency_max_s}")
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("weights must be >= 0")
        if self.alpha == 0 and self.beta == 0:
            raise ValueError("at least one of alpha, beta must be positive")

    @property
    def n_nodes(self) -> int:
        return len(self.topology.nodes)


@dataclass(frozen=True)
class Allocation:
    """Candidate solution: one transmit power per node, in node order."""

    powers_w: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "powers_w", tuple(float(p) for p in self.powers_w))


class Solver(Enum):
    SIMULATED_ANNEALING = "simulated_annealing"
    GRID_ORACLE = "grid_oracle"


@dataclass(frozen=True)
class OptResult:
    allocation: Allocation
    objective: float
    energy_total_j: float
    latency_total_s: float
    feasible: bool
    evaluations: int
    solver: Solver


@dataclass(frozen=True)
class KktDiagnostics:
    stationarity_residual: float
    primal_violation: float
    complementary_slackness: float
    multipliers: tuple[float, ...]


class Feasibility(NamedTuple):
    feasible: bool
    capacity_slack_bps: float
    latency_slack_s: float


@dataclass(frozen=True)
class SaSchedule:
    """Geometric cooling schedule. t_initial = None derives the starting
    temperature from the initial objective magnitude."""

    t_initial: float | None = None
    cooling: float = 0.95
    iterations: int = 10_000

    def __post_init__(self):
        if not 0.0 < self.cooling < 1.0:
            raise ValueError(f"cooling must be in (0, 1), got {self.cooling}")
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")
        if self.t_initial is not None and not self.t_initial > 0:
            raise ValueError(f"t_initial must be > 0, got {self.t_initial}")


class _Evaluator:
    """Per-problem cache of link constants and frozen fading draws."""

    def __init__(self, problem: PowerProblem):
        self.problem = problem
        node_index = {n.id: i for i, n in enumerate(problem.topology.nodes)}
        self.links = []
        for i, link in enumerate(problem.topology.links):
            h2 = None
            if isinstance(problem.fading, ErgodicMean) and link.fading.kind is not FadingKind.AWGN:
                rng = np.random.Generator(
                    np.random.PCG64(np.random.SeedSequence(problem.fading.seed, spawn_key=(i,)))
                )
                h2 = sample_h_squared(link.fading, rng, size=problem.fading.n_samples)
            src = node_index[link.src]
            self.links.append(
                (
                    src,
                    link.budget.bandwidth_hz,
                    link.budget.noise_power_w + link.budget.interference_power_w,
                    link.gain.gamma,
                    problem.topology.nodes[src].packet_length_bits,
                    h2,
                )
            )

    def capacities(self, powers: Sequence[float]) -> list[float]:
        """Per-link capacity (bit/s) at the allocation, without TRS."""
        out = []
        for src, bandwidth, denom, _gamma, _length, h2 in self.links:
            p = powers[src]
            if h2 is None:
                out.append(bandwidth * math.log1p(p / denom) / _LN2)
            else:
                out.append(stable_mean(bandwidth * np.log1p(p * h2 / denom) / _LN2))
        return out

    def totals(self, powers: Sequence[float]) -> tuple[float, float, float]:
        """(TRS energy total, TRS latency total, min TRS link capacity).

        Raises InfeasibleLinkError when a link has zero capacity.
        """
        energy = 0.0
        latency = 0.0
        min_cap_trs = math.inf
        caps = self.capacities(powers)
        for i, ((src, _b, _d, gamma, length, _h2), cap) in enumerate(zip(self.links, caps)):
            if cap <= 0.0:
                link = self.problem.topology.links[i]
                raise InfeasibleLinkError(
                    f"zero capacity on link {link.id} at power {powers[src]}"
                )
            denom = gamma * cap
            latency += length / denom
            energy += powers[src] * length / denom
            cap_trs = gamma * cap
            if cap_trs < min_cap_trs:
                min_cap_trs = cap_trs
        return energy, latency, min_cap_trs

    def assess(self, powers: Sequence[float]):
        """(objective, feasible, penalized objective) at the allocation.

        Zero-capacity allocations come back as +inf so stochastic search can
        reject them without special-casing.
        """
        try:
            energy, latency, min_cap_trs = self.totals(powers)
        except InfeasibleLinkError:
            return math.inf, False, math.inf
        problem = self.problem
        objective = problem.alpha * energy + problem.beta * latency
        viol_cap = max(0.0, problem.r_min_bps - min_cap_trs)
        if problem.r_min_bps > 0:
            viol_cap /= problem.r_min_bps
        viol_lat = max(0.0, latency - problem.latency_max_s)
        if math.isfinite(problem.latency_max_s):
            viol_lat /= problem.latency_max_s
        feasible = viol_cap == 0.0 and viol_lat == 0.0
        penalized = objective + PENALTY_WEIGHT * (viol_cap + viol_lat)
        return objective, feasible, penalized


def _check_bounds(alloc: Allocation, problem: PowerProblem) -> None:
    if len(alloc.powers_w) != problem.n_nodes:
        raise ValueError(
            f"allocation has {len(alloc.powers_w)} powers for {problem.n_nodes} nodes"
        )
    for i, p in enumerate(alloc.powers_w):
        if not problem.p_min_w <= p <= problem.p_max_w:
            raise ValueError(
                f"power {p} for node {i} outside bounds "
                f"[{problem.p_min_w}, {problem.p_max_w}]"
            )


def energy_objective(alloc: Allocation, problem: PowerProblem) -> float:
    """Total TRS energy sum P_src * L_src / (gamma * C(P_src)), in J."""
    _check_bounds(alloc, problem)
    energy, _latency, _min_cap = _Evaluator(problem).totals(alloc.powers_w)
    return energy


def weighted_objective(alloc: Allocation, problem: PowerProblem) -> float:
    """alpha * TRS energy total + beta * TRS latency total."""
    _check_bounds(alloc, problem)
    energy, latency, _min_cap = _Evaluator(problem).totals(alloc.powers_w)
    return problem.alpha * energy + problem.beta * latency


def check_feasibility(alloc: Allocation, problem: PowerProblem) -> Feasibility:
    """Signed slacks of the two rate/latency constraints (negative = violated)."""
    _check_bounds(alloc, problem)
    evaluator = _Evaluator(problem)
    try:
        _energy, latency, min_cap_trs = evaluator.totals(alloc.powers_w)
    except InfeasibleLinkError:
        return Feasibility(False, -problem.r_min_bps, -math.inf)
    capacity_slack = min_cap_trs - problem.r_min_bps
    latency_slack = problem.latency_max_s - latency
    return Feasibility(capacity_slack >= 0 and latency_slack >= 0, capacity_slack, latency_slack)


def _result(evaluator, powers, evaluations, solver) -> OptResult:
    energy, latency, min_cap_trs = evaluator.totals(powers)
    problem = evaluator.problem
    objective = problem.alpha * energy + problem.beta * latency
    feasible = min_cap_trs >= problem.r_min_bps and latency <= problem.latency_max_s
    return OptResult(
        allocation=Allocation(tuple(powers)),
        objective=objective,
        energy_total_j=energy,
        latency_total_s=latency,
        feasible=feasible,
        evaluations=evaluations,
        solver=solver,
    )


def grid_search_oracle(problem: PowerProblem, points_per_node: int) -> OptResult:
    """Exhaustively evaluate the uniform power grid and return the best
    feasible point.

    Ties on the objective break toward smaller total power, then toward the
    lexicographically first grid index in node order. Node counts above 4 are
    rejected (the grid is combinatorial).
    """
    if points_per_node < 2:
        raise ValueError(f"points_per_node must be >= 2, got {points_per_node}")
    if problem.n_nodes > 4:
        raise ValueError(f"grid oracle limited to 4 nodes, got {problem.n_nodes}")
    evaluator = _Evaluator(problem)
    axis = np.linspace(problem.p_min_w, problem.p_max_w, points_per_node)
    best = None  # (objective, total_power, powers)
    for idx in itertools.product(range(points_per_node), repeat=problem.n_nodes):
        powers = tuple(float(axis[k]) for k in idx)
        objective, feasible, _pen = evaluator.assess(powers)
        if not feasible:
            continue
        total_power = sum(powers)
        if (
            best is None
            or objective < best[0]
            or (objective == best[0] and total_power < best[1])
        ):
            best = (objective, total_power, powers)
    if best is None:
        raise NoFeasiblePointError("entire grid violates the constraints")
    return _result(evaluator, best[2], points_per_node**problem.n_nodes, Solver.GRID_ORACLE)


def _reflect(value: float, lo: float, hi: float) -> float:
    while value < lo or value > hi:
        value = 2.0 * lo - value if value < lo else 2.0 * hi - value
    return value


def optimize_sa(
    problem: PowerProblem,
    schedule: SaSchedule | None = None,
    rng: np.random.Generator | int = 0,
) -> OptResult:
    """Simulated annealing over the power box.

    Moves perturb one uniformly chosen node's power with a Gaussian step of
    sigma = 5% of the box width, reflected at the bounds. Infeasible
    candidates are penalized, not rejected, so the chain can cross infeasible
    valleys. Returns the best feasible allocation encountered; deterministic
    for a given seed.
    """
    if schedule is None:
        schedule = SaSchedule()
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    evaluator = _Evaluator(problem)
    lo, hi = problem.p_min_w, problem.p_max_w
    sigma = 0.05 * (hi - lo)
    n = problem.n_nodes

    powers = rng.uniform(lo, hi, size=n)
    objective, feasible, penalized = evaluator.assess(powers)
    best = (objective, tuple(powers)) if feasible else None
    if schedule.t_initial is not None:
        temperature = schedule.t_initial
    else:
        temperature = abs(penalized) if math.isfinite(penalized) and penalized != 0 else 1.0

    for _ in range(schedule.iterations):
        j = int(rng.integers(n))
        candidate = powers.copy()
        candidate[j] = _reflect(candidate[j] + rng.normal(0.0, sigma), lo, hi)
        cand_obj, cand_feasible, cand_pen = evaluator.assess(candidate)
        if cand_feasible and (best is None or cand_obj < best[0]):
            best = (cand_obj, tuple(candidate))
        delta = cand_pen - penalized
        u = rng.random()
        if delta <= 0 or (temperature > 0 and u < math.exp(-delta / temperature)):
            powers, penalized = candidate, cand_pen
        temperature *= schedule.cooling

    if best is None:
        raise NoFeasiblePointError("no feasible allocation encountered")
    return _result(evaluator, best[1], schedule.iterations + 1, Solver.SIMULATED_ANNEALING)


def kkt_residual(
    alloc: Allocation,
    problem: PowerProblem,
    multipliers: Sequence[float],
) -> KktDiagnostics:
    """First-order optimality diagnostics at an allocation.

    Multipliers are ordered [capacity, latency, lower bounds..., upper
    bounds...], one per constraint (2 + 2N in total), all written as g <= 0.
    The Lagrangian gradient is evaluated by central finite differences with a
    relative step of 1e-6.
    """
    n = problem.n_nodes
    expected = 2 + 2 * n
    if len(multipliers) != expected:
        raise ValueError(f"expected {expected} multipliers, got {len(multipliers)}")
    if any(m < 0 for m in multipliers):
        raise ValueError("multipliers must be >= 0")
    _check_bounds(alloc, problem)
    evaluator = _Evaluator(problem)
    lam = tuple(float(m) for m in multipliers)

    def constraint_values(powers):
        try:
            _energy, latency, min_cap_trs = evaluator.totals(powers)
        except InfeasibleLinkError:
            latency, min_cap_trs = math.inf, 0.0
        g = [problem.r_min_bps - min_cap_trs, latency - problem.latency_max_s]
        g += [problem.p_min_w - p for p in powers]
        g += [p - problem.p_max_w for p in powers]
        return g

    def lagrangian(powers):
        energy, latency, _min_cap = evaluator.totals(powers)
        value = problem.alpha * energy + problem.beta * latency
        for lam_k, g_k in zip(lam, constraint_values(powers)):
            if lam_k != 0.0:
                value += lam_k * g_k
        return value

    width = problem.p_max_w - problem.p_min_w
    grad = []
    base = list(alloc.powers_w)
    for i in range(n):
        step = 1e-6 * max(abs(base[i]), width)
        up, down = list(base), list(base)
        up[i] += step
        down[i] -= step
        grad.append((lagrangian(up) - lagrangian(down)) / (2.0 * step))
    stationarity = math.sqrt(sum(g * g for g in grad))

    g_at_point = constraint_values(base)
    primal_violation = max(0.0, max(g_at_point))
    complementary = max(
        (abs(lam_k * g_k) for lam_k, g_k in zip(lam, g_at_point) if lam_k != 0.0),
        default=0.0,
    )
    return KktDiagnostics(
        stationarity_residual=stationarity,
        primal_violation=primal_violation,
        complementary_slackness=complementary,
        multipliers=lam,
    )
