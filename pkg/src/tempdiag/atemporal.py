"""Per-instant diagnosis: mode assignments explaining one observation entry.

The solver enumerates the full Cartesian product of component modes (desk
scale, guarded by a cap) and keeps every assignment that explains the
observation under the chosen criterion:

- consistency-based: the assignment predicts nothing observed absent and
  nothing declared mutually exclusive with a present atom;
- abductive: additionally, every present atom is predicted.

The abductive solution set is a subset of the consistency-based one by
construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

from .errors import SearchSpaceError, ValidationError
from .model import Observation, SystemModel

#: Default cap on the size of the enumerated assignment space.
DEFAULT_CANDIDATE_CAP = 10 ** 6


class ExplanationCriterion(Enum):
    ABDUCTIVE = "abductive"
    CONSISTENCY_BASED = "consistency"


@dataclass(frozen=True, order=True)
class ModeAssignment:
    """One mode per component at a time point.

    ``modes`` is a tuple of (component id, mode) pairs sorted by component
    id, which makes assignments hashable and totally ordered (the order is
    used for deterministic tie-breaking).
    """

    t: int
    modes: tuple[tuple[str, str], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "modes", tuple(sorted(tuple(pair) for pair in self.modes)))

    @classmethod
    def from_mapping(cls, t: int, assignment: Mapping[str, str]) -> "ModeAssignment":
        return cls(t, tuple(assignment.items()))

    def mode_of(self, component_id: str) -> str:
        for comp, mode in self.modes:
            if comp == component_id:
                return mode
        raise KeyError(f"no component {component_id!r} in assignment")

    def as_dict(self) -> dict[str, str]:
        return dict(self.modes)

    def at(self, t: int) -> "ModeAssignment":
        """The same assignment stamped with a different time point."""
        return ModeAssignment(t, self.modes)


def _check_total(w: ModeAssignment, model: SystemModel) -> None:
    assigned = w.as_dict()
    for c in model.components:
        mode = assigned.get(c.id)
        if mode is None:
            raise ValidationError(
                f"assignment at t={w.t} misses component {c.id!r}",
                element=c.id)
        if mode not in c.modes:
            raise ValidationError(
                f"assignment at t={w.t} gives component {c.id!r} "
                f"undeclared mode {mode!r}", element=(c.id, mode))


def predicted_manifestations(w: ModeAssignment,
                             model: SystemModel) -> frozenset[str]:
    """Heads of all rules whose body atoms are satisfied by ``w``."""
    assigned = w.as_dict()
    return frozenset(
        rule.head for rule in model.rules
        if all(assigned.get(comp) == mode for comp, mode in rule.body))


def is_explanation(w: ModeAssignment, obs_present: Iterable[str],
                   obs_absent: Iterable[str],
                   criterion: ExplanationCriterion,
                   model: SystemModel) -> bool:
    """Does ``w`` explain the observation under the given criterion?"""
    present = frozenset(obs_present)
    absent = frozenset(obs_absent)
    predicted = predicted_manifestations(w, model)

    if predicted & absent:
        return False
    for atom in present:
        if model.exclusive_partners(atom) & predicted:
            return False
    if criterion is ExplanationCriterion.ABDUCTIVE:
        return present <= predicted
    return True


def solve_atemporal(model: SystemModel, observation: Observation,
                    criterion: ExplanationCriterion,
                    candidate_cap: int = DEFAULT_CANDIDATE_CAP,
                    ) -> list[ModeAssignment]:
    """All mode assignments explaining one observation entry.

    Output order is deterministic: components sorted by id, each component's
    modes in declared order, enumerated lexicographically.

    Raises:
        SearchSpaceError: the assignment space exceeds ``candidate_cap``.
    """
    comps = sorted(model.components, key=lambda c: c.id)
    space = 1
    for c in comps:
        space *= len(c.modes)
    if space > candidate_cap:
        raise SearchSpaceError(
            f"{space} assignments exceed the cap of {candidate_cap}",
            element=space)

    solutions = []
    for combo in itertools.product(*(c.modes for c in comps)):
        w = ModeAssignment(observation.t,
                           tuple((c.id, mode) for c, mode in zip(comps, combo)))
        if is_explanation(w, observation.present, observation.absent,
                          criterion, model):
            solutions.append(w)
    return solutions
