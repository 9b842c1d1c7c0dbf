"""Kripke semantics: truth at a world, with announcements as model restriction."""
from __future__ import annotations

from typing import Iterable

from .formula import (CK, RCK, And, Announce, Atom, Everyone, Formula, Iff, Imp, Knows, Neg, Or,
                      Top, agents, atoms)
from .model import BitModel, EpistemicModel, Mask, ModelError, closure_rows, restrict


class EvaluationError(ValueError):
    pass


def check_symbols(f: Formula, agent_names: Iterable[str], atom_names: Iterable[str]) -> None:
    unknown_agents = agents(f) - set(agent_names)
    unknown_atoms = atoms(f) - set(atom_names)
    if unknown_agents:
        raise EvaluationError(f"unknown agent(s): {', '.join(sorted(unknown_agents))}")
    if unknown_atoms:
        raise EvaluationError(f"unknown atom(s): {', '.join(sorted(unknown_atoms))}")


def _box(rows, target: Mask, bm: BitModel) -> Mask:
    # worlds of bm all of whose successors lie in target
    out = 0
    for i, r in enumerate(rows):
        out = out | ((1 << i) * ((r & ~target) == 0))
    return out & bm.live


def truth_mask(bm: BitModel, f: Formula) -> Mask:
    """Worlds of ``bm`` (as a mask) at which ``f`` is true."""
    live = bm.live
    if isinstance(f, Atom):
        return bm.val[f.name] & live
    if isinstance(f, Top):
        return live
    if isinstance(f, Neg):
        return live & ~truth_mask(bm, f.sub)
    if isinstance(f, And):
        return truth_mask(bm, f.left) & truth_mask(bm, f.right)
    if isinstance(f, Or):
        return truth_mask(bm, f.left) | truth_mask(bm, f.right)
    if isinstance(f, Imp):
        return (live & ~truth_mask(bm, f.left)) | truth_mask(bm, f.right)
    if isinstance(f, Iff):
        return live & ~(truth_mask(bm, f.left) ^ truth_mask(bm, f.right))
    if isinstance(f, Knows):
        return _box(bm.rows[f.agent], truth_mask(bm, f.sub), bm)
    if isinstance(f, Everyone):
        return _box(bm.group_rows, truth_mask(bm, f.sub), bm)
    if isinstance(f, Announce):
        survivors = truth_mask(bm, f.announced)
        # the body is evaluated in the restricted model, then read back at the survivors
        return (live & ~survivors) | (truth_mask(bm.restricted(survivors), f.body) & survivors)
    if isinstance(f, (RCK, CK)):
        guard, body = (Top(), f.sub) if isinstance(f, CK) else (f.guard, f.body)
        guarded = truth_mask(bm, guard)
        reach = closure_rows([r & guarded for r in bm.group_rows])
        return _box(reach, truth_mask(bm, body), bm)
    raise TypeError(f"not a formula: {f!r}")


def extension(m: EpistemicModel, f: Formula) -> frozenset[str]:
    check_symbols(f, m.agents, m.valuation)
    return m.worlds_of(truth_mask(m.bitmodel, f))


def eval_direct(m: EpistemicModel, w: str, f: Formula) -> bool:
    if w not in m.index:
        raise EvaluationError(f"unknown world {w!r}")
    check_symbols(f, m.agents, m.valuation)
    return bool(truth_mask(m.bitmodel, f) >> m.index[w] & 1)


def announce(m: EpistemicModel, f: Formula) -> EpistemicModel:
    """The model after ``f`` is publicly announced: only the worlds where ``f`` held remain."""
    survivors = extension(m, f)
    if not survivors:
        raise EvaluationError("announced formula is false at every world")
    try:
        return restrict(m, survivors)
    except ModelError as e:  # pragma: no cover - survivors is nonempty
        raise EvaluationError(str(e)) from e
