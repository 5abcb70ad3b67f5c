"""Allocation policies: map observed safety history to observer proportions.

A policy sees only recorded data (observations and incident reports), never
the latent safety state, and returns one proportion vector per observation
type each day. The built-ins cover the benchmark set: uniform random,
trailing incident counts, exponential incident-severity weights, fixed prior
weights, and a no-observation baseline. Custom policies subclass Policy and
register under a name for CLI use.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .observation import DayObservations, check_proportions
from .scenario import PROB_TOL

DEFAULT_WINDOW_DAYS = 30


class PolicyError(ValueError):
    """Unknown policy name or invalid policy parameters."""


@dataclass(frozen=True)
class RecordedIncident:
    """One incident report: which area, actual and potential Hurt level."""

    area_index: int
    ahl: int
    phl: int


@dataclass(frozen=True)
class ObservedDay:
    """Everything recorded on one day: incident reports and observation counts."""

    day: int
    incidents: tuple[RecordedIncident, ...]
    observations: DayObservations


class ObservableHistory:
    """Append-only record of everything a policy is allowed to see.

    Holds only recorded data; latent theta/xi never enter. The engine
    appends one ObservedDay per completed day, so while deciding day t a
    policy sees records for days 1..t-1.
    """

    def __init__(self, n_areas: int, obs_type_ids: tuple[str, ...]):
        self.n_areas = n_areas
        self.obs_type_ids = tuple(obs_type_ids)
        self._days: list[ObservedDay] = []

    def __len__(self) -> int:
        return len(self._days)

    @property
    def days(self) -> tuple[ObservedDay, ...]:
        return tuple(self._days)

    @property
    def current_day(self) -> int:
        """Index of the day currently being decided."""
        return len(self._days) + 1

    def append(self, record: ObservedDay) -> None:
        self._days.append(record)

    def window(self, window_days: int) -> tuple[ObservedDay, ...]:
        """Records from the trailing window: days current_day - window .. current_day - 1."""
        first = self.current_day - window_days
        return tuple(d for d in self._days if d.day >= first)

    def incident_counts(self, window_days: int) -> np.ndarray:
        """Recorded incidents per area over the trailing window (near-misses included)."""
        counts = np.zeros(self.n_areas, dtype=int)
        for day in self.window(window_days):
            for incident in day.incidents:
                counts[incident.area_index] += 1
        return counts

    def max_ahl(self, window_days: int) -> np.ndarray:
        """Highest recorded AHL per area over the trailing window; 0 where none."""
        worst = np.zeros(self.n_areas, dtype=int)
        for day in self.window(window_days):
            for incident in day.incidents:
                if incident.ahl > worst[incident.area_index]:
                    worst[incident.area_index] = incident.ahl
        return worst


@dataclass(frozen=True)
class PolicyDecision:
    """One proportion vector per observation type, or the no-observation marker.

    proportions is None only for the baseline policy; the engine then skips
    the observation process entirely.
    """

    proportions: dict[str, np.ndarray] | None

    @classmethod
    def none(cls) -> "PolicyDecision":
        return cls(proportions=None)

    @classmethod
    def same_for_all_types(cls, s: np.ndarray, obs_type_ids: tuple[str, ...]) -> "PolicyDecision":
        s = np.asarray(s, dtype=float)
        return cls(proportions={type_id: s for type_id in obs_type_ids})


class Policy:
    """Base class for allocation policies.

    decide() must be a pure function of the history: identical histories
    yield identical decisions. Policies needing randomness must draw from
    the engine-provided rng so replications stay reproducible.
    """

    name = "policy"

    def decide(self, history: ObservableHistory, rng: np.random.Generator) -> PolicyDecision:
        raise NotImplementedError


class UniformRandomPolicy(Policy):
    """Spread observers uniformly: every area gets proportion 1/n, every day."""

    name = "uniform"

    def decide(self, history: ObservableHistory, rng: np.random.Generator) -> PolicyDecision:
        s = np.full(history.n_areas, 1.0 / history.n_areas)
        return PolicyDecision.same_for_all_types(s, history.obs_type_ids)


class IncidentCountPolicy(Policy):
    """Proportions follow recorded incident counts over a trailing window.

    Falls back to uniform until any incident has been recorded in the window.
    """

    name = "counts"

    def __init__(self, window_days: int = DEFAULT_WINDOW_DAYS):
        self.window_days = window_days

    def decide(self, history: ObservableHistory, rng: np.random.Generator) -> PolicyDecision:
        counts = history.incident_counts(self.window_days)
        total = counts.sum()
        if total == 0:
            s = np.full(history.n_areas, 1.0 / history.n_areas)
        else:
            s = counts / total
        return PolicyDecision.same_for_all_types(s, history.obs_type_ids)


class IncidentSeverityPolicy(Policy):
    """Weight each area by 2**(worst recorded AHL in a trailing window).

    Areas with no recorded incidents keep weight 2**0 = 1, so none starves.
    """

    name = "severity"

    def __init__(self, window_days: int = DEFAULT_WINDOW_DAYS):
        self.window_days = window_days

    def decide(self, history: ObservableHistory, rng: np.random.Generator) -> PolicyDecision:
        weights = np.power(2.0, history.max_ahl(self.window_days))
        s = weights / weights.sum()
        return PolicyDecision.same_for_all_types(s, history.obs_type_ids)


class FixedWeightsPolicy(Policy):
    """Allocate by a fixed prior weight vector, ignoring history."""

    name = "weighted"

    def __init__(self, weights):
        weights = np.asarray(weights, dtype=float)
        if weights.ndim != 1 or len(weights) == 0:
            raise PolicyError("weights must be a nonempty vector")
        if np.any(weights < 0.0):
            raise PolicyError("weights must be nonnegative")
        if abs(float(weights.sum()) - 1.0) > PROB_TOL:
            raise PolicyError(f"weights must sum to 1, got {float(weights.sum())}")
        self.weights = weights

    def decide(self, history: ObservableHistory, rng: np.random.Generator) -> PolicyDecision:
        check_proportions(self.weights, history.n_areas)
        return PolicyDecision.same_for_all_types(self.weights, history.obs_type_ids)


class NoObservationPolicy(Policy):
    """Baseline: no observers in the field, so the environment gets no feedback."""

    name = "none"

    def decide(self, history: ObservableHistory, rng: np.random.Generator) -> PolicyDecision:
        return PolicyDecision.none()


_REGISTRY: dict[str, type[Policy]] = {}


def register_policy(name: str, cls: type[Policy]) -> None:
    """Make a policy class constructible by name (see make_policy)."""
    _REGISTRY[name] = cls


register_policy("uniform", UniformRandomPolicy)
register_policy("counts", IncidentCountPolicy)
register_policy("severity", IncidentSeverityPolicy)
register_policy("weighted", FixedWeightsPolicy)
register_policy("none", NoObservationPolicy)


def policy_names() -> list[str]:
    return sorted(_REGISTRY)


def make_policy(spec: str) -> Policy:
    """Build a policy from a CLI spec string.

    Plain names ('uniform', 'counts', 'severity', 'none') take no arguments;
    'weighted:w1,w2,...' supplies the fixed weight vector inline.
    """
    name, _, args = spec.partition(":")
    cls = _REGISTRY.get(name)
    if cls is None:
        raise PolicyError(f"unknown policy {name!r}; valid names: {', '.join(policy_names())}")
    if cls is FixedWeightsPolicy:
        if not args:
            raise PolicyError("the weighted policy needs weights, e.g. weighted:0.5,0.5")
        try:
            weights = [float(w) for w in args.split(",")]
        except ValueError as exc:
            raise PolicyError(f"could not parse weights {args!r}") from exc
        return cls(weights)
    if args:
        raise PolicyError(f"policy {name!r} takes no arguments")
    return cls()
