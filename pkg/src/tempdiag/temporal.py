"""Temporal diagnosis: rank mode evolutions across the observed instants.

The engine solves the atemporal problem at every instant carrying
observations, lays the candidate sets out as layers of a trellis, connects
consecutive layers with edges weighted by the n-step conditional probability
of the joint mode change, filters edges against the plausibility threshold,
and enumerates the surviving evolutions ranked by joint probability.

Because components evolve independently, an evolution's probability
factorizes: the joint probability of a trajectory is the prior of its first
assignment times the product of its consecutive step conditionals, each of
which is itself a product of per-component n-step matrix entries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

from .atemporal import (
    DEFAULT_CANDIDATE_CAP,
    ExplanationCriterion,
    ModeAssignment,
    solve_atemporal,
)
from .errors import (
    EmptyCandidateSetError,
    EmptyStreamError,
    MissingInitialDistributionError,
    NoAdmissibleEvolutionError,
    NoCandidatesError,
    NonIncreasingInstantsError,
    ValidationError,
    WeightSumError,
)
from .markov import (
    ModeDistribution,
    ROW_SUM_TOL,
    matrix_power,
    propagate_distribution,
)
from .model import ObservationStream, SystemModel


class ThresholdMode(Enum):
    """Where the plausibility threshold is applied.

    GLOBAL compares the full conditional probability of a step against the
    threshold; PER_COMPONENT compares every component's own n-step entry
    against it. A global pass implies every per-component factor passes,
    not vice versa.
    """

    GLOBAL = "global"
    PER_COMPONENT = "per_component"


@dataclass(frozen=True)
class DiagnosticProblem:
    """A system model, its observations, and the filtering configuration."""

    model: SystemModel
    observations: ObservationStream
    sigma: float = 0.0
    threshold_mode: ThresholdMode = ThresholdMode.GLOBAL
    criterion: ExplanationCriterion = ExplanationCriterion.ABDUCTIVE
    candidate_cap: int = DEFAULT_CANDIDATE_CAP


@dataclass(frozen=True)
class TemporalDiagnosis:
    """One admissible evolution: an assignment per relevant instant.

    ``joint_probability`` equals the prior of the first assignment times the
    product of ``step_conditionals``.
    """

    trajectory: tuple[ModeAssignment, ...]
    joint_probability: float
    step_conditionals: tuple[float, ...] = ()


@dataclass(frozen=True)
class TrellisEdge:
    """A candidate step between consecutive layers.

    ``factors`` holds the per-component n-step entries whose product is
    ``conditional``; ``admissible`` records the threshold check under the
    problem's threshold mode.
    """

    source: int
    target: int
    conditional: float
    factors: tuple[tuple[str, float], ...]
    admissible: bool


@dataclass(frozen=True)
class Trellis:
    """Layered candidate graph over the relevant instants."""

    instants: tuple[int, ...]
    layers: tuple[tuple[ModeAssignment, ...], ...]
    initials: Mapping[str, ModeDistribution]
    priors: tuple[float, ...]
    edges: tuple[tuple[TrellisEdge, ...], ...]


def relevant_instants(obs: ObservationStream) -> list[int]:
    """The time points carrying observations, in order."""
    if not obs.entries:
        raise EmptyStreamError("observation stream has no entries")
    return [entry.t for entry in obs.entries]


def induce_initial_distributions(
        candidates: Sequence[ModeAssignment],
        weights: Sequence[float] | None = None,
        model: SystemModel | None = None,
) -> dict[str, ModeDistribution]:
    """Turn the candidate set at the first instant into per-component
    initial distributions.

    Without explicit weights every candidate gets mass ``1/len(candidates)``;
    a component's probability of being in mode m is then the total weight of
    the candidates assigning m to it. When ``model`` is given, each result
    vector is laid out over the component's declared mode order (with zero
    mass for unassigned modes); otherwise only the assigned modes appear,
    alphabetically.
    """
    if not candidates:
        raise EmptyCandidateSetError("cannot induce distributions from an "
                                     "empty candidate set")
    if weights is None:
        weights = [1.0 / len(candidates)] * len(candidates)
    else:
        weights = [float(x) for x in weights]
        if len(weights) != len(candidates):
            raise WeightSumError(
                f"{len(weights)} weights for {len(candidates)} candidates")
        total = sum(weights)
        if abs(total - 1.0) > ROW_SUM_TOL:
            raise WeightSumError(f"weights sum to {total!r}, expected 1")

    mass: dict[str, dict[str, float]] = {}
    for w, weight in zip(candidates, weights):
        for comp, mode in w.modes:
            by_mode = mass.setdefault(comp, {})
            by_mode[mode] = by_mode.get(mode, 0.0) + weight

    out = {}
    for comp, by_mode in mass.items():
        if model is not None:
            modes = model.component(comp).modes
        else:
            modes = tuple(sorted(by_mode))
        out[comp] = ModeDistribution(modes,
                                     [by_mode.get(m, 0.0) for m in modes])
    return out


def resolve_initial_distributions(
        model: SystemModel,
        first_instant: int | None = None,
        first_candidates: Sequence[ModeAssignment] | None = None,
) -> dict[str, ModeDistribution]:
    """Initial distribution per component, resolved in priority order:
    the component's own declaration, then uniform induction from the
    candidate set when the first relevant instant is 0, then the uniform
    distribution over the component's modes.
    """
    induced = None
    if first_instant == 0 and first_candidates:
        induced = induce_initial_distributions(first_candidates, model=model)
    out = {}
    for c in model.components:
        if c.initial_distribution is not None:
            out[c.id] = c.initial_distribution
        elif induced is not None:
            out[c.id] = induced[c.id]
        else:
            n = len(c.modes)
            out[c.id] = ModeDistribution(c.modes, [1.0 / n] * n)
    return out


def prior_probability(w: ModeAssignment,
                      initials: Mapping[str, ModeDistribution],
                      model: SystemModel) -> float:
    """Probability of assignment ``w`` at its instant, from the initial
    distributions: the product over components of the assigned mode's mass
    after ``w.t`` propagation steps."""
    product = 1.0
    for c in model.components:
        pi0 = initials.get(c.id)
        if pi0 is None:
            raise MissingInitialDistributionError(
                f"no initial distribution for component {c.id!r}",
                element=c.id)
        pi_t = propagate_distribution(pi0, c.matrix, w.t)
        product *= pi_t.prob(w.mode_of(c.id))
    return product


def step_factors(w_prev: ModeAssignment, w_next: ModeAssignment,
                 model: SystemModel) -> dict[str, float]:
    """Per-component n-step transition entries for a candidate step."""
    n = w_next.t - w_prev.t
    if n <= 0:
        raise NonIncreasingInstantsError(
            f"step from t={w_prev.t} to t={w_next.t} does not advance time")
    return {
        c.id: matrix_power(c.matrix, n).prob(w_prev.mode_of(c.id),
                                             w_next.mode_of(c.id))
        for c in model.components
    }


def conditional_probability(w_prev: ModeAssignment, w_next: ModeAssignment,
                            model: SystemModel) -> float:
    """P[next assignment | previous assignment] across a time gap: the
    product of per-component n-step entries (components are independent)."""
    return math.prod(step_factors(w_prev, w_next, model).values())


def admissible_step(w_prev: ModeAssignment, w_next: ModeAssignment,
                    problem: DiagnosticProblem) -> bool:
    """Does the step meet the plausibility threshold?

    The comparison is ``>=``, so at sigma = 0 even probability-0 steps pass
    (they rank last with joint probability 0).
    """
    factors = step_factors(w_prev, w_next, problem.model)
    if problem.threshold_mode is ThresholdMode.PER_COMPONENT:
        return all(p >= problem.sigma for p in factors.values())
    return math.prod(factors.values()) >= problem.sigma


def joint_probability(trajectory: Sequence[ModeAssignment],
                      initials: Mapping[str, ModeDistribution],
                      model: SystemModel) -> float:
    """Joint probability of a whole evolution, computed by the recursion
    joint(k) = joint(k-1) * P[W(t_k) | W(t_{k-1})]."""
    if not trajectory:
        raise EmptyCandidateSetError("empty trajectory")
    joint = prior_probability(trajectory[0], initials, model)
    for prev, nxt in zip(trajectory, trajectory[1:]):
        joint *= conditional_probability(prev, nxt, model)
    return joint


def build_trellis(problem: DiagnosticProblem) -> Trellis:
    """Solve every atemporal problem and materialize the full trellis.

    Raises:
        NoCandidatesError: some instant has no atemporal solution.
    """
    if not 0.0 <= problem.sigma <= 1.0:
        raise ValidationError(
            f"sigma must lie in [0, 1], got {problem.sigma!r}")
    instants = relevant_instants(problem.observations)

    layers = []
    for entry in problem.observations.entries:
        candidates = solve_atemporal(problem.model, entry, problem.criterion,
                                     problem.candidate_cap)
        if not candidates:
            raise NoCandidatesError(entry.t)
        layers.append(tuple(candidates))

    initials = resolve_initial_distributions(problem.model, instants[0],
                                             layers[0])
    priors = tuple(prior_probability(w, initials, problem.model)
                   for w in layers[0])

    per_component = problem.threshold_mode is ThresholdMode.PER_COMPONENT
    all_edges = []
    for prev_layer, next_layer in zip(layers, layers[1:]):
        edges = []
        for i, w_prev in enumerate(prev_layer):
            for j, w_next in enumerate(next_layer):
                factors = step_factors(w_prev, w_next, problem.model)
                conditional = math.prod(factors.values())
                if per_component:
                    ok = all(p >= problem.sigma for p in factors.values())
                else:
                    ok = conditional >= problem.sigma
                edges.append(TrellisEdge(
                    source=i, target=j, conditional=conditional,
                    factors=tuple(sorted(factors.items())), admissible=ok))
        all_edges.append(tuple(edges))

    return Trellis(tuple(instants), tuple(layers), initials, priors,
                   tuple(all_edges))


def _admissible_paths(trellis: Trellis) -> list[tuple[tuple[int, ...],
                                                      tuple[float, ...]]]:
    """Root-to-leaf index paths along admissible edges, with the step
    conditionals collected along the way."""
    paths = [((i,), ()) for i in range(len(trellis.layers[0]))]
    for layer_edges in trellis.edges:
        adjacency: dict[int, list[TrellisEdge]] = {}
        for edge in layer_edges:
            if edge.admissible:
                adjacency.setdefault(edge.source, []).append(edge)
        paths = [
            (indices + (edge.target,), conditionals + (edge.conditional,))
            for indices, conditionals in paths
            for edge in adjacency.get(indices[-1], [])
        ]
        if not paths:
            break
    return paths


def enumerate_temporal_diagnoses(
        problem: DiagnosticProblem,
        trellis: Trellis | None = None) -> list[TemporalDiagnosis]:
    """Every evolution whose consecutive steps are admissible, ranked by
    joint probability (descending; ties broken lexicographically by the
    trajectory encoding).

    Raises:
        NoAdmissibleEvolutionError: candidates exist at every instant but no
            evolution survives the threshold.
    """
    if trellis is None:
        trellis = build_trellis(problem)

    results = []
    for indices, conditionals in _admissible_paths(trellis):
        trajectory = tuple(trellis.layers[k][i]
                           for k, i in enumerate(indices))
        joint = trellis.priors[indices[0]]
        for c in conditionals:
            joint *= c
        results.append(TemporalDiagnosis(trajectory, joint, conditionals))

    if not results:
        raise NoAdmissibleEvolutionError(
            "no evolution passes the plausibility filter at "
            f"sigma={problem.sigma}")
    results.sort(key=lambda d: (-d.joint_probability, d.trajectory))
    return results
