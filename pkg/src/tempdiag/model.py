"""Declarative description of the system under diagnosis.

A system model bundles the components (each with its mode-transition chain),
the atemporal behavioral rules linking mode atoms to observable
manifestations, and optional pairs of mutually exclusive manifestations.
Observations are time-stamped sets of manifestations seen present or absent.

Rule bodies are conjunctions of mode atoms only and heads are single
manifestation atoms; chaining through intermediate atoms is out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    CorrectModeMissingError,
    DimensionMismatchError,
    DuplicateComponentError,
    UnknownManifestationError,
    UnknownModeAtomError,
    ValidationError,
)
from .markov import (
    ModeDistribution,
    TransitionMatrix,
    validate_distribution,
    validate_matrix,
)


@dataclass(frozen=True)
class ComponentSpec:
    """One component: its modes, designated correct mode and transition chain.

    ``initial_distribution`` is optional; when absent, the engine either
    induces a distribution from the diagnosis candidates at the first
    observed instant or falls back to a uniform one.
    """

    id: str
    modes: tuple[str, ...]
    correct_mode: str
    matrix: TransitionMatrix
    initial_distribution: ModeDistribution | None = None

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(self.modes))


@dataclass(frozen=True)
class HornRule:
    """``mode-atom AND ... AND mode-atom -> manifestation``.

    Body atoms are (component id, mode) pairs; a component appears at most
    once per body.
    """

    body: frozenset[tuple[str, str]]
    head: str

    def __post_init__(self):
        object.__setattr__(self, "body", frozenset(tuple(a) for a in self.body))


@dataclass(frozen=True)
class SystemModel:
    """Components plus behavioral rules plus mutual-exclusivity declarations.

    ``exclusive`` lists unordered pairs of manifestation atoms that cannot
    hold together; the solver uses them as its source of contradiction.
    """

    components: tuple[ComponentSpec, ...]
    rules: tuple[HornRule, ...]
    exclusive: tuple[frozenset[str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "exclusive",
                           tuple(frozenset(p) for p in self.exclusive))

    def component(self, component_id: str) -> ComponentSpec:
        for c in self.components:
            if c.id == component_id:
                return c
        raise KeyError(f"unknown component {component_id!r}")

    @property
    def manifestations(self) -> frozenset[str]:
        """All atoms that can appear in an observation (the rule heads)."""
        return frozenset(r.head for r in self.rules)

    def exclusive_partners(self, atom: str) -> frozenset[str]:
        """Atoms declared mutually exclusive with ``atom``."""
        partners = set()
        for pair in self.exclusive:
            if atom in pair:
                partners.update(pair - {atom})
        return frozenset(partners)


@dataclass(frozen=True)
class Observation:
    """Manifestations seen present/absent at one time point."""

    t: int
    present: frozenset[str]
    absent: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "present", frozenset(self.present))
        object.__setattr__(self, "absent", frozenset(self.absent))


@dataclass(frozen=True)
class ObservationStream:
    """Observations ordered by strictly increasing time point."""

    entries: tuple[Observation, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))


def validate_model(model: SystemModel) -> SystemModel:
    """Validate a system model, returning it unchanged or raising on the
    first violation found.

    Checks: unique component ids; per component a declared correct mode, a
    matrix over exactly the component's modes, and (when given) a proper
    initial distribution; rule bodies that reference declared components and
    modes with no component repeated; exclusivity pairs over known rule heads.
    """
    seen: set[str] = set()
    for c in model.components:
        if c.id in seen:
            raise DuplicateComponentError(
                f"component id {c.id!r} declared twice", element=c.id)
        seen.add(c.id)
        if c.correct_mode not in c.modes:
            raise CorrectModeMissingError(
                f"component {c.id!r}: correct mode {c.correct_mode!r} "
                "is not a declared mode", element=c.id)
        if c.matrix.modes != c.modes:
            raise DimensionMismatchError(
                f"component {c.id!r}: matrix modes {c.matrix.modes} differ "
                f"from declared modes {c.modes}", element=c.id)
        validate_matrix(c.matrix)
        if c.initial_distribution is not None:
            if c.initial_distribution.modes != c.modes:
                raise DimensionMismatchError(
                    f"component {c.id!r}: initial distribution modes differ "
                    "from declared modes", element=c.id)
            validate_distribution(c.initial_distribution)

    by_id = {c.id: c for c in model.components}
    heads = model.manifestations
    for rule in model.rules:
        if not rule.body:
            raise ValidationError(
                f"rule for {rule.head!r} has an empty body", element=rule.head)
        comps_in_body = [comp for comp, _ in rule.body]
        if len(comps_in_body) != len(set(comps_in_body)):
            raise ValidationError(
                f"rule for {rule.head!r} mentions a component twice",
                element=rule.head)
        for comp, mode in rule.body:
            spec = by_id.get(comp)
            if spec is None or mode not in spec.modes:
                raise UnknownModeAtomError(
                    f"rule for {rule.head!r} references unknown mode atom "
                    f"{mode}({comp})", element=(comp, mode))

    for pair in model.exclusive:
        if len(pair) != 2:
            raise ValidationError(
                f"exclusivity pair {sorted(pair)} must contain two distinct "
                "atoms", element=sorted(pair))
        for atom in pair:
            if atom not in heads:
                raise UnknownManifestationError(
                    f"exclusivity pair references {atom!r}, which is not the "
                    "head of any rule", element=atom)
    return model


def validate_stream(stream: ObservationStream,
                    model: SystemModel) -> ObservationStream:
    """Validate an observation stream against a model's manifestations."""
    heads = model.manifestations
    prev_t = None
    for entry in stream.entries:
        if entry.t < 0:
            raise ValidationError(
                f"time points must be nonnegative, got {entry.t}",
                element=entry.t)
        if prev_t is not None and entry.t <= prev_t:
            raise ValidationError(
                f"time points must strictly increase, got {entry.t} "
                f"after {prev_t}", element=entry.t)
        prev_t = entry.t
        overlap = entry.present & entry.absent
        if overlap:
            raise ValidationError(
                f"atoms {sorted(overlap)} listed both present and absent "
                f"at t={entry.t}", element=entry.t)
        for atom in entry.present | entry.absent:
            if atom not in heads:
                raise UnknownManifestationError(
                    f"observation at t={entry.t} references {atom!r}, which "
                    "is not the head of any rule", element=atom)
    return stream
