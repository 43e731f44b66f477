"""Monte Carlo oracle: sample mode evolutions and synthesize observations.

Trajectories are drawn per component from the one-step transition rows,
using numpy's PCG64 generator so a fixed seed replays exactly. Empirical
n-step transition frequencies estimated from many sampled trajectories act
as an independent check on the matrix-power arithmetic, and sampled
trajectories pushed through the behavioral rules produce observation
streams in the same shape the engine ingests.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .atemporal import ModeAssignment, predicted_manifestations
from .errors import InstantOutOfRangeError
from .markov import ModeDistribution
from .model import ComponentSpec, Observation, ObservationStream, SystemModel

#: Identifier of the random generator algorithm, recorded in run metadata.
RNG_ALGORITHM = "numpy-pcg64"


@dataclass(frozen=True)
class SampledTrajectory:
    """One realization of every component's mode process over 0..horizon."""

    seed: int
    horizon: int
    modes: Mapping[str, tuple[str, ...]]

    def assignment_at(self, t: int) -> ModeAssignment:
        if not 0 <= t <= self.horizon:
            raise InstantOutOfRangeError(
                f"t={t} outside the sampled horizon 0..{self.horizon}",
                element=t)
        return ModeAssignment.from_mapping(
            t, {comp: seq[t] for comp, seq in self.modes.items()})


def _draw(cumulative: list[float], u: float) -> int:
    idx = bisect_right(cumulative, u)
    return min(idx, len(cumulative) - 1)


def sample_trajectory(model: SystemModel,
                      initials: Mapping[str, ModeDistribution],
                      horizon: int, seed: int) -> SampledTrajectory:
    """Sample every component's mode sequence for t = 0..horizon.

    The initial mode comes from the component's initial distribution and
    each step from the current mode's matrix row; only the current mode
    matters. Components are drawn in sorted id order, so a fixed seed yields
    an identical trajectory on every run.
    """
    if horizon < 1:
        raise ValueError("horizon must be positive")
    rng = np.random.default_rng(seed)
    sequences = {}
    for c in sorted(model.components, key=lambda c: c.id):
        init_cum = list(np.cumsum(initials[c.id].probabilities))
        row_cum = [list(row) for row in np.cumsum(c.matrix.entries, axis=1)]
        us = rng.random(horizon + 1)
        state = _draw(init_cum, us[0])
        seq = [state]
        for t in range(1, horizon + 1):
            state = _draw(row_cum[state], us[t])
            seq.append(state)
        sequences[c.id] = tuple(c.modes[i] for i in seq)
    return SampledTrajectory(seed=seed, horizon=horizon, modes=sequences)


@dataclass(frozen=True, eq=False)
class EmpiricalMatrix:
    """Observed n-step transition frequencies for one component.

    Rows never visited keep NaN frequencies and a zero ``row_visits`` entry
    instead of a fabricated distribution.
    """

    modes: tuple[str, ...]
    counts: np.ndarray
    frequencies: np.ndarray
    row_visits: np.ndarray

    def frequency(self, from_mode: str, to_mode: str) -> float:
        i = self.modes.index(from_mode)
        j = self.modes.index(to_mode)
        return float(self.frequencies[i, j])


def empirical_transition_matrix(samples: Sequence[SampledTrajectory],
                                component: ComponentSpec,
                                n: int) -> EmpiricalMatrix:
    """Row-normalized frequencies of (mode at t -> mode at t+n) pairs
    pooled over all samples and all valid t."""
    if not samples:
        raise ValueError("need at least one sampled trajectory")
    modes = tuple(component.modes)
    index = {m: i for i, m in enumerate(modes)}
    counts = np.zeros((len(modes), len(modes)), dtype=np.int64)
    for traj in samples:
        seq = traj.modes[component.id]
        for t in range(len(seq) - n):
            counts[index[seq[t]], index[seq[t + n]]] += 1
    visits = counts.sum(axis=1)
    with np.errstate(invalid="ignore"):
        freq = counts / visits[:, None]
    return EmpiricalMatrix(modes, counts, freq, visits)


def generate_observation_stream(traj: SampledTrajectory, model: SystemModel,
                                instants: Iterable[int]) -> ObservationStream:
    """Noise-free observations of a sampled trajectory.

    At every requested instant the present atoms are exactly the
    manifestations the behavioral rules predict for the trajectory's
    assignment, and the absent atoms are their declared exclusive partners.
    """
    entries = []
    for t in sorted(set(instants)):
        assignment = traj.assignment_at(t)
        present = predicted_manifestations(assignment, model)
        absent = frozenset().union(
            *(model.exclusive_partners(a) for a in present)) if present \
            else frozenset()
        entries.append(Observation(t=t, present=present, absent=absent - present))
    return ObservationStream(tuple(entries))
