"""Revision of stochastic predictions against the logically admitted set.

When the reasoning over the behavioral model is assumed complete (no
possible diagnosis is lost), the joint probabilities of the evolutions
surviving at an instant can be renormalized to sum to 1. Globally this
multiplies every joint and every step conditional by the reciprocal of the
joint sum; per component, the chain's predicted distribution is renormalized
over the modes the logic still admits.

Revised conditionals and transition scores can exceed 1; they are plain
scores, not probabilities, and the plausibility threshold may be re-checked
against them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .atemporal import ModeAssignment
from .errors import AllZeroJointsError, ZeroAdmittedMassError
from .markov import ModeDistribution, propagate_distribution
from .model import SystemModel
from .temporal import Trellis

#: Revised probabilities are nonnegative scores and may exceed 1.
RevisedScore = float


def normalization_factor(joints: Sequence[float]) -> float:
    """Reciprocal of the summed joint probabilities at an instant.

    Raises:
        AllZeroJointsError: the sum is 0, i.e. every logically admitted
            evolution is stochastically impossible and revision is undefined.
    """
    total = float(sum(joints))
    if total <= 0.0:
        raise AllZeroJointsError(
            "all joint probabilities are zero; revision is undefined")
    return 1.0 / total


def revise_global(joints: Sequence[float], conditionals: Sequence[float],
                  ) -> tuple[tuple[RevisedScore, ...], tuple[RevisedScore, ...]]:
    """Scale joints and step conditionals by the normalization factor.

    The revised joints sum to 1; the revised conditionals are scores.
    """
    factor = normalization_factor(joints)
    return (tuple(j * factor for j in joints),
            tuple(c * factor for c in conditionals))


def component_mass_factor(pi_t: ModeDistribution,
                          admitted: Iterable[str]) -> float:
    """Per-component normalization: reciprocal of the chain mass the
    distribution puts on the logically admitted modes."""
    admitted = frozenset(admitted)
    if not admitted:
        raise ZeroAdmittedMassError("no admitted modes")
    mass = sum(pi_t.prob(m) for m in admitted)
    if mass <= 0.0:
        raise ZeroAdmittedMassError(
            f"admitted modes {sorted(admitted)} carry zero probability")
    return 1.0 / mass


def revise_transition(p_k: float, f: float) -> RevisedScore:
    """Revised n-step transition score ``p_k * f(c, t)``."""
    return p_k * f


def posterior_component_distribution(pi_t: ModeDistribution,
                                     admitted: Iterable[str],
                                     ) -> ModeDistribution:
    """Condition a component's distribution on the admitted mode set:
    zero out everything else and renormalize. The result is a proper
    distribution usable as the next propagation input."""
    admitted = frozenset(admitted)
    factor = component_mass_factor(pi_t, admitted)
    probs = np.array([
        pi_t.prob(m) * factor if m in admitted else 0.0
        for m in pi_t.modes
    ])
    return ModeDistribution(pi_t.modes, probs)


def admitted_modes(candidates: Iterable[ModeAssignment],
                   component_id: str) -> frozenset[str]:
    """Modes assigned to a component by at least one atemporal diagnosis."""
    return frozenset(w.mode_of(component_id) for w in candidates)


@dataclass(frozen=True)
class ComponentRevision:
    """Per-component revision data at one instant."""

    distribution: ModeDistribution
    admitted: tuple[str, ...]
    factor: float
    posterior: ModeDistribution
    #: (from_mode, to_mode, raw n-step entry, revised score) for each mode
    #: step used by an admissible trellis edge into this instant.
    revised_transitions: tuple[tuple[str, str, float, RevisedScore], ...]


@dataclass(frozen=True)
class InstantRevision:
    """Revision of everything the trellis knows at one instant."""

    t: int
    factor: float
    path_indices: tuple[tuple[int, ...], ...]
    joints: tuple[float, ...]
    revised_joints: tuple[RevisedScore, ...]
    #: (source index, target index, raw conditional, revised score) for each
    #: admissible edge into this instant; empty at the first instant.
    revised_conditionals: tuple[tuple[int, int, float, RevisedScore], ...]
    components: Mapping[str, ComponentRevision]


def revise_trellis(trellis: Trellis, model: SystemModel,
                   ) -> tuple[InstantRevision, ...]:
    """Apply revision at every instant of a built trellis.

    At each instant the joints of the admissible partial evolutions ending
    there are renormalized (global revision) and every component's
    propagated distribution is renormalized over its admitted modes
    (per-component revision).
    """
    revisions = []
    paths: list[tuple[tuple[int, ...], float]] = [
        ((i,), p) for i, p in enumerate(trellis.priors)]

    for k, t in enumerate(trellis.instants):
        if k > 0:
            incoming = [e for e in trellis.edges[k - 1] if e.admissible]
            by_source: dict[int, list] = {}
            for e in incoming:
                by_source.setdefault(e.source, []).append(e)
            paths = [
                (indices + (e.target,), joint * e.conditional)
                for indices, joint in paths
                for e in by_source.get(indices[-1], [])
            ]
        else:
            incoming = []

        joints = tuple(joint for _, joint in paths)
        factor = normalization_factor(joints)
        revised_joints = tuple(j * factor for j in joints)
        revised_conditionals = tuple(
            (e.source, e.target, e.conditional, e.conditional * factor)
            for e in incoming)

        layer = trellis.layers[k]
        components = {}
        for c in model.components:
            pi_t = propagate_distribution(trellis.initials[c.id], c.matrix, t)
            admitted = tuple(sorted(admitted_modes(layer, c.id)))
            f = component_mass_factor(pi_t, admitted)
            transitions = []
            seen = set()
            for e in incoming:
                prev = trellis.layers[k - 1][e.source].mode_of(c.id)
                nxt = layer[e.target].mode_of(c.id)
                if (prev, nxt) in seen:
                    continue
                seen.add((prev, nxt))
                raw = dict(e.factors)[c.id]
                transitions.append((prev, nxt, raw, revise_transition(raw, f)))
            components[c.id] = ComponentRevision(
                distribution=pi_t,
                admitted=admitted,
                factor=f,
                posterior=posterior_component_distribution(pi_t, admitted),
                revised_transitions=tuple(sorted(transitions)),
            )

        revisions.append(InstantRevision(
            t=t, factor=factor,
            path_indices=tuple(indices for indices, _ in paths),
            joints=joints, revised_joints=revised_joints,
            revised_conditionals=revised_conditionals,
            components=components))
    return tuple(revisions)
