"""Simulation engine: daily loop, seeded replications, ensemble summaries.

One replication consumes a single numpy Generator in a fixed order, so a
(scenario, policy, seed) triple fully determines every byte of the
trajectory. Within a day the stream order is: per area in config order the
event draws (counts, AHLs, PHLs), then the policy decision (which may draw),
then per observation type the allocation and per-area selection draws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .events import AreaState, DayEvents, step_events
from .intervention import step_theta
from .metrics import DayMetrics, compute_day_metrics
from .observation import DayObservations, step_observations
from .policies import ObservableHistory, ObservedDay, Policy, PolicyDecision, RecordedIncident
from .scenario import N_HURT_LEVELS, Scenario


@dataclass(frozen=True)
class SimState:
    """Cross-day simulation state: per-area safety states plus the shared history."""

    theta: np.ndarray
    day: int
    history: ObservableHistory

    @classmethod
    def initial(cls, scenario: Scenario) -> "SimState":
        return cls(
            theta=np.array([a.theta0 for a in scenario.areas], dtype=float),
            day=0,
            history=ObservableHistory(scenario.n_areas, scenario.obs_type_ids),
        )


@dataclass(frozen=True)
class DayRecord:
    """Everything that happened on one simulated day."""

    day: int
    theta: np.ndarray  # start-of-day safety state per area (drives today's xi)
    xi: np.ndarray
    events: tuple[DayEvents, ...]
    observations: DayObservations
    metrics: DayMetrics
    decision: PolicyDecision


@dataclass(frozen=True)
class Trajectory:
    """One replication: an ordered run of DayRecords plus its provenance."""

    days: tuple[DayRecord, ...]
    scenario: Scenario
    policy_name: str
    seed: int

    def expected_loss_series(self) -> np.ndarray:
        return np.array([d.metrics.expected_loss for d in self.days])

    def tail_prob_series(self) -> np.ndarray:
        return np.array([d.metrics.tail_prob for d in self.days])

    def incident_totals(self) -> np.ndarray:
        """Total incident counts over the run, indexed [area, ahl]."""
        totals = np.zeros((self.scenario.n_areas, N_HURT_LEVELS), dtype=int)
        for record in self.days:
            for a_idx, events in enumerate(record.events):
                for ahl, _phl in events.incidents:
                    totals[a_idx, ahl] += 1
        return totals


def step_day(
    state: SimState, scenario: Scenario, policy: Policy, rng: np.random.Generator
) -> tuple[SimState, DayRecord]:
    """Advance the simulation one day.

    Order of operations: derive xi from the carried-over theta, generate
    events, ask the policy (which sees history through yesterday only), run
    the observation process, update theta, and evaluate metrics at the xi
    used for today's events. The day's record is appended to the history
    before returning.
    """
    day = state.day + 1
    theta = state.theta
    area_states = [
        AreaState.from_theta(float(theta[i]), area.xi_base)
        for i, area in enumerate(scenario.areas)
    ]
    xi = np.array([s.xi for s in area_states])

    events = tuple(
        step_events(rng, area, area_states[i]) for i, area in enumerate(scenario.areas)
    )

    decision = policy.decide(state.history, rng)
    if decision.proportions is None:
        observations = DayObservations.empty(len(scenario.obs_types), scenario.n_areas)
    else:
        observations = step_observations(rng, scenario, list(events), decision.proportions)

    new_theta = np.array(
        [
            step_theta(
                float(theta[i]),
                area,
                observations.neg_by_type(i),
                events[i].n_e,
                scenario,
            )
            for i, area in enumerate(scenario.areas)
        ]
    )

    metrics = compute_day_metrics(scenario, area_states)

    record = DayRecord(
        day=day,
        theta=theta.copy(),
        xi=xi,
        events=events,
        observations=observations,
        metrics=metrics,
        decision=decision,
    )
    state.history.append(
        ObservedDay(
            day=day,
            incidents=tuple(
                RecordedIncident(area_index=i, ahl=ahl, phl=phl)
                for i, ev in enumerate(events)
                for ahl, phl in ev.incidents
            ),
            observations=observations,
        )
    )
    return SimState(theta=new_theta, day=day, history=state.history), record


def run_simulation(
    scenario: Scenario, policy: Policy, seed: int, horizon: int | None = None
) -> Trajectory:
    """Run one seeded replication over the given horizon (days)."""
    horizon = scenario.horizon_days if horizon is None else horizon
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    rng = np.random.default_rng(seed)
    state = SimState.initial(scenario)
    records = []
    for _ in range(horizon):
        state, record = step_day(state, scenario, policy, rng)
        records.append(record)
    return Trajectory(days=tuple(records), scenario=scenario, policy_name=policy.name, seed=seed)


def nearest_rank(sorted_values: np.ndarray, percentile: float) -> float:
    """Nearest-rank percentile of an ascending-sorted sample."""
    n = len(sorted_values)
    rank = max(1, math.ceil(percentile / 100.0 * n))
    return float(sorted_values[rank - 1])


@dataclass(frozen=True)
class EnsembleSummary:
    """Cross-replication statistics of one (scenario, policy) ensemble."""

    policy_name: str
    n_reps: int
    base_seed: int
    horizon: int
    area_ids: tuple[str, ...]
    mean_expected_loss: np.ndarray  # per day
    std_expected_loss: np.ndarray
    mean_tail_prob: np.ndarray
    std_tail_prob: np.ndarray
    incident_totals: np.ndarray  # [rep, area, ahl] totals over the horizon
    incident_p05: np.ndarray  # [area, ahl]
    incident_p50: np.ndarray
    incident_p95: np.ndarray

    def incident_percentile(self, percentile: float) -> np.ndarray:
        """Nearest-rank percentile of per-(area, ahl) totals over replications."""
        sorted_totals = np.sort(self.incident_totals, axis=0)
        n = self.n_reps
        rank = max(1, math.ceil(percentile / 100.0 * n))
        return sorted_totals[rank - 1]


def summarize_trajectories(trajectories: list[Trajectory], base_seed: int) -> EnsembleSummary:
    """Aggregate replications (in seed order) into an EnsembleSummary."""
    if not trajectories:
        raise ValueError("at least one trajectory is required")
    trajectories = sorted(trajectories, key=lambda t: t.seed)
    scenario = trajectories[0].scenario
    loss = np.stack([t.expected_loss_series() for t in trajectories])
    tail = np.stack([t.tail_prob_series() for t in trajectories])
    totals = np.stack([t.incident_totals() for t in trajectories])
    sorted_totals = np.sort(totals, axis=0)
    n = len(trajectories)

    def rank_slice(p: float) -> np.ndarray:
        return sorted_totals[max(1, math.ceil(p / 100.0 * n)) - 1]

    return EnsembleSummary(
        policy_name=trajectories[0].policy_name,
        n_reps=n,
        base_seed=base_seed,
        horizon=loss.shape[1],
        area_ids=scenario.area_ids,
        mean_expected_loss=loss.mean(axis=0),
        std_expected_loss=loss.std(axis=0),
        mean_tail_prob=tail.mean(axis=0),
        std_tail_prob=tail.std(axis=0),
        incident_totals=totals,
        incident_p05=rank_slice(5.0),
        incident_p50=rank_slice(50.0),
        incident_p95=rank_slice(95.0),
    )


def run_ensemble(
    scenario: Scenario,
    policy: Policy,
    n_reps: int,
    base_seed: int,
    horizon: int | None = None,
) -> EnsembleSummary:
    """Run n_reps replications with seeds base_seed, base_seed+1, ... and summarize.

    Replications are independent; the summary depends only on the set of
    seeded runs, not on the order they execute in.
    """
    if n_reps < 1:
        raise ValueError(f"n_reps must be >= 1, got {n_reps}")
    trajectories = [
        run_simulation(scenario, policy, seed=base_seed + i, horizon=horizon) for i in range(n_reps)
    ]
    return summarize_trajectories(trajectories, base_seed)
