"""Command-line front end.

Subcommands: validate, classify, propagate, diagnose, simulate, rank.
Reports go to standard output as canonical JSON; a short human-readable
summary goes to standard error. Exit codes: 0 success, 1 invalid input,
2 no diagnosis (empty candidate set, no admissible evolution, or undefined
revision), 3 internal limits (candidate cap).
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import __version__
from .atemporal import ExplanationCriterion, ModeAssignment
from .errors import (
    AllZeroJointsError,
    DiagnosisError,
    NoAdmissibleEvolutionError,
    NoCandidatesError,
    SearchSpaceError,
    ValidationError,
    ZeroAdmittedMassError,
)
from .markov import classify_faults, classify_states, propagate_distribution
from .model import SystemModel, validate_model, validate_stream
from .modelio import (
    dumps_report,
    load_model,
    load_stream,
    load_trajectories,
    stream_to_list,
)
from .revision import revise_trellis
from .simulate import RNG_ALGORITHM, generate_observation_stream, sample_trajectory
from .temporal import (
    DiagnosticProblem,
    ThresholdMode,
    build_trellis,
    enumerate_temporal_diagnoses,
    joint_probability,
    prior_probability,
    conditional_probability,
    resolve_initial_distributions,
)

_CRITERIA = {
    "abductive": ExplanationCriterion.ABDUCTIVE,
    "consistency": ExplanationCriterion.CONSISTENCY_BASED,
}
_THRESHOLD_MODES = {
    "global": ThresholdMode.GLOBAL,
    "per-component": ThresholdMode.PER_COMPONENT,
}


def _parse_instants(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise ValidationError(f"cannot parse instants {text!r}; expected "
                              "comma-separated integers") from None


def _config_dict(args) -> dict:
    return {
        "sigma": getattr(args, "sigma", 0.0),
        "threshold_mode": getattr(args, "threshold_mode", "global"),
        "criterion": getattr(args, "criterion", "abductive"),
        "revise": getattr(args, "revise", False),
        "seed": getattr(args, "seed", None),
        "candidate_cap": getattr(args, "cap", 10 ** 6),
    }


def _attach_file(exc: DiagnosisError, path) -> None:
    if not getattr(exc, "file", None):
        exc.file = str(path)


def _load_validated_model(path) -> SystemModel:
    try:
        return validate_model(load_model(path))
    except DiagnosisError as exc:
        _attach_file(exc, path)
        raise


def _load_validated_stream(path, model):
    try:
        return validate_stream(load_stream(path), model)
    except DiagnosisError as exc:
        _attach_file(exc, path)
        raise


def _assignment_dicts(w: ModeAssignment) -> dict:
    return {"t": w.t, "assignment": w.as_dict()}


def _distribution_dict(dist) -> dict:
    return {"modes": list(dist.modes),
            "probabilities": [float(x) for x in dist.probabilities]}


def _cmd_validate(args) -> dict:
    model = _load_validated_model(args.model)
    report = {
        "command": "validate",
        "config": _config_dict(args),
        "files": {"model": args.model},
        "ok": True,
        "model": {
            "components": [c.id for c in model.components],
            "rules": len(model.rules),
            "exclusive_pairs": len(model.exclusive),
        },
    }
    if args.observations:
        stream = _load_validated_stream(args.observations, model)
        report["files"]["observations"] = args.observations
        report["observations"] = {
            "entries": len(stream.entries),
            "instants": [e.t for e in stream.entries],
        }
        print(f"model and observations OK "
              f"({len(model.components)} components, "
              f"{len(stream.entries)} observation entries)", file=sys.stderr)
    else:
        print(f"model OK ({len(model.components)} components, "
              f"{len(model.rules)} rules)", file=sys.stderr)
    return report


def _cmd_classify(args) -> dict:
    model = _load_validated_model(args.model)
    components = {}
    for c in model.components:
        states = classify_states(c.matrix)
        faults = classify_faults(c)
        components[c.id] = {
            "modes": list(c.modes),
            "correct_mode": c.correct_mode,
            "states": {m: states.labels[m].value for m in c.modes},
            "ergodic_sets": [list(s) for s in states.ergodic_sets],
            "transient_sets": [list(s) for s in states.transient_sets],
            "faults": {
                mode: {
                    "permanent": fc.permanent,
                    "transient": fc.transient,
                    "reversible": fc.reversible,
                    "irreversible": fc.irreversible,
                }
                for mode, fc in sorted(faults.faults.items())
            },
        }
        permanent = sorted(m for m, fc in faults.faults.items() if fc.permanent)
        print(f"{c.id}: permanent faults {permanent or 'none'}",
              file=sys.stderr)
    return {
        "command": "classify",
        "config": _config_dict(args),
        "files": {"model": args.model},
        "components": components,
    }


def _cmd_propagate(args) -> dict:
    model = _load_validated_model(args.model)
    instants = _parse_instants(args.instants)
    if any(t < 0 for t in instants):
        raise ValidationError("instants must be nonnegative")
    initials = resolve_initial_distributions(model)
    components = {}
    for c in model.components:
        components[c.id] = {
            "modes": list(c.modes),
            "distributions": [
                {"t": t, "probabilities": [
                    float(x) for x in
                    propagate_distribution(initials[c.id], c.matrix, t)
                    .probabilities]}
                for t in instants
            ],
        }
    print(f"propagated {len(model.components)} components over "
          f"{len(instants)} instants", file=sys.stderr)
    return {
        "command": "propagate",
        "config": _config_dict(args),
        "files": {"model": args.model},
        "instants": instants,
        "initial_distributions": {
            c.id: _distribution_dict(initials[c.id]) for c in model.components},
        "components": components,
    }


def _revision_report(trellis, model) -> list[dict]:
    out = []
    for rev in revise_trellis(trellis, model):
        out.append({
            "t": rev.t,
            "normalization_factor": rev.factor,
            "evolutions": [
                {"path": list(indices), "joint": joint, "revised_joint": rj}
                for indices, joint, rj in zip(rev.path_indices, rev.joints,
                                              rev.revised_joints)
            ],
            "revised_conditionals": [
                {"source": s, "target": t_, "conditional": c, "revised": r}
                for s, t_, c, r in rev.revised_conditionals
            ],
            "components": {
                comp: {
                    "distribution": _distribution_dict(cr.distribution),
                    "admitted": list(cr.admitted),
                    "mass_factor": cr.factor,
                    "posterior": _distribution_dict(cr.posterior),
                    "revised_transitions": [
                        {"from": a, "to": b, "probability": p, "revised": r}
                        for a, b, p, r in cr.revised_transitions
                    ],
                }
                for comp, cr in sorted(rev.components.items())
            },
        })
    return out


def _cmd_diagnose(args) -> dict:
    model = _load_validated_model(args.model)
    stream = _load_validated_stream(args.observations, model)
    problem = DiagnosticProblem(
        model=model, observations=stream, sigma=args.sigma,
        threshold_mode=_THRESHOLD_MODES[args.threshold_mode],
        criterion=_CRITERIA[args.criterion], candidate_cap=args.cap)
    trellis = build_trellis(problem)
    diagnoses = enumerate_temporal_diagnoses(problem, trellis)

    report = {
        "command": "diagnose",
        "config": _config_dict(args),
        "files": {"model": args.model, "observations": args.observations},
        "instants": list(trellis.instants),
        "candidates": [
            {"t": t, "assignments": [w.as_dict() for w in layer]}
            for t, layer in zip(trellis.instants, trellis.layers)
        ],
        "initial_distributions": {
            comp: _distribution_dict(dist)
            for comp, dist in sorted(trellis.initials.items())},
        "priors": list(trellis.priors),
        "trellis": [
            {
                "from_t": trellis.instants[k],
                "to_t": trellis.instants[k + 1],
                "edges": [
                    {"source": e.source, "target": e.target,
                     "conditional": e.conditional,
                     "factors": dict(e.factors),
                     "admissible": e.admissible}
                    for e in layer_edges
                ],
            }
            for k, layer_edges in enumerate(trellis.edges)
        ],
        "diagnoses": [
            {
                "rank": i + 1,
                "joint_probability": d.joint_probability,
                "step_conditionals": list(d.step_conditionals),
                "trajectory": [_assignment_dicts(w) for w in d.trajectory],
            }
            for i, d in enumerate(diagnoses)
        ],
    }
    if args.revise:
        report["revision"] = _revision_report(trellis, model)

    sizes = ", ".join(f"{len(layer)} at t={t}"
                      for t, layer in zip(trellis.instants, trellis.layers))
    best = diagnoses[0]
    print(f"candidates: {sizes}; {len(diagnoses)} admissible evolution(s); "
          f"best joint probability {best.joint_probability:.6g}",
          file=sys.stderr)
    return report


def _cmd_simulate(args) -> dict:
    model = _load_validated_model(args.model)
    initials = resolve_initial_distributions(model)
    traj = sample_trajectory(model, initials, args.horizon, args.seed)
    instants = (_parse_instants(args.instants) if args.instants
                else list(range(args.horizon + 1)))
    stream = generate_observation_stream(traj, model, instants)
    print(f"sampled horizon {args.horizon} with seed {args.seed} "
          f"({RNG_ALGORITHM})", file=sys.stderr)
    return {
        "command": "simulate",
        "config": _config_dict(args),
        "files": {"model": args.model},
        "rng": RNG_ALGORITHM,
        "trajectory": {
            "seed": traj.seed,
            "horizon": traj.horizon,
            "modes": {comp: list(seq)
                      for comp, seq in sorted(traj.modes.items())},
        },
        "observations": stream_to_list(stream),
    }


def _cmd_rank(args) -> dict:
    model = _load_validated_model(args.model)
    try:
        trajectories = load_trajectories(args.trajectories)
    except DiagnosisError as exc:
        _attach_file(exc, args.trajectories)
        raise
    initials = resolve_initial_distributions(model)

    rows = []
    for trajectory in trajectories:
        prior = prior_probability(trajectory[0], initials, model)
        conditionals = [conditional_probability(a, b, model)
                        for a, b in zip(trajectory, trajectory[1:])]
        rows.append({
            "joint_probability": joint_probability(trajectory, initials, model),
            "prior": prior,
            "step_conditionals": conditionals,
            "trajectory": [_assignment_dicts(w) for w in trajectory],
        })
    rows.sort(key=lambda r: (-r["joint_probability"],
                             [(s["t"], sorted(s["assignment"].items()))
                              for s in r["trajectory"]]))
    for i, row in enumerate(rows):
        row["rank"] = i + 1
    print(f"ranked {len(rows)} trajectories", file=sys.stderr)
    return {
        "command": "rank",
        "config": _config_dict(args),
        "files": {"model": args.model, "trajectories": args.trajectories},
        "trajectories": rows,
    }


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tempdiag",
        description="Temporal diagnosis of component-based systems with "
                    "Markov-chain mode dynamics.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model(p):
        p.add_argument("model", help="model file (JSON)")

    p = sub.add_parser("validate", help="check a model and optional "
                                        "observation stream")
    add_model(p)
    p.add_argument("observations", nargs="?", default=None,
                   help="observation stream file (JSON)")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("classify", help="state and fault classification "
                                        "per component")
    add_model(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("propagate", help="mode distributions at requested "
                                         "instants")
    add_model(p)
    p.add_argument("--instants", required=True,
                   help="comma-separated time points")
    p.set_defaults(func=_cmd_propagate)

    p = sub.add_parser("diagnose", help="ranked temporal diagnoses")
    add_model(p)
    p.add_argument("observations", help="observation stream file (JSON)")
    p.add_argument("--sigma", type=float, default=0.0,
                   help="plausibility threshold (default 0)")
    p.add_argument("--threshold-mode", choices=sorted(_THRESHOLD_MODES),
                   default="global", dest="threshold_mode")
    p.add_argument("--criterion", choices=sorted(_CRITERIA),
                   default="abductive")
    p.add_argument("--revise", action="store_true",
                   help="revise probabilities against the admitted "
                        "hypotheses")
    p.add_argument("--cap", type=int, default=10 ** 6,
                   help="candidate-space cap (default 1e6)")
    p.set_defaults(func=_cmd_diagnose)

    p = sub.add_parser("simulate", help="sample a trajectory and emit its "
                                        "observation stream")
    add_model(p)
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--instants", default=None,
                   help="observation instants (default: every step)")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("rank", help="joint probabilities of supplied "
                                    "trajectories")
    add_model(p)
    p.add_argument("trajectories", help="trajectory file (JSON)")
    p.set_defaults(func=_cmd_rank)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.func(args)
    except DiagnosisError as exc:
        error = {
            "error": {
                "code": exc.code,
                "message": str(exc),
                "element": getattr(exc, "element", None),
                "file": getattr(exc, "file", None),
            }
        }
        sys.stdout.write(dumps_report(error))
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        if isinstance(exc, SearchSpaceError):
            return 3
        if isinstance(exc, (NoCandidatesError, NoAdmissibleEvolutionError,
                            AllZeroJointsError, ZeroAdmittedMassError)):
            return 2
        return 1
    sys.stdout.write(dumps_report(report))
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
