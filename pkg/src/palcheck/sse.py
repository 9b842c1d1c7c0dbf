"""Embedding semantics: every formula is read at an (evaluation domain, world) pair.

The model itself never changes.  Atoms and the knowledge and common-knowledge
operators only look at worlds inside the current domain, and an announcement
narrows the domain it hands to its body.
"""
from __future__ import annotations

from typing import Iterable

from .direct import EvaluationError, check_symbols
from .formula import CK, RCK, And, Announce, Atom, Everyone, Formula, Iff, Imp, Knows, Neg, Or, Top
from .model import BitModel, EpistemicModel, Mask, closure_rows


def _all_successors_in(rows, domain: Mask, target: Mask, n: int) -> Mask:
    out = 0
    for i in range(n):
        out = out | ((1 << i) * ((rows[i] & domain & ~target) == 0))
    return out


def sse_mask(bm: BitModel, domain: Mask, f: Formula) -> Mask:
    """All worlds w (inside the domain or not) with ``f`` true at (domain, w)."""
    full = bm.full
    if isinstance(f, Atom):
        return domain & bm.val[f.name]
    if isinstance(f, Top):
        return full
    if isinstance(f, Neg):
        return full & ~sse_mask(bm, domain, f.sub)
    if isinstance(f, And):
        return sse_mask(bm, domain, f.left) & sse_mask(bm, domain, f.right)
    if isinstance(f, Or):
        return sse_mask(bm, domain, f.left) | sse_mask(bm, domain, f.right)
    if isinstance(f, Imp):
        return (full & ~sse_mask(bm, domain, f.left)) | sse_mask(bm, domain, f.right)
    if isinstance(f, Iff):
        return full & ~(sse_mask(bm, domain, f.left) ^ sse_mask(bm, domain, f.right))
    if isinstance(f, Knows):
        return _all_successors_in(bm.rows[f.agent], domain, sse_mask(bm, domain, f.sub), bm.n)
    if isinstance(f, Everyone):
        return _all_successors_in(bm.group_rows, domain, sse_mask(bm, domain, f.sub), bm.n)
    if isinstance(f, Announce):
        holds = sse_mask(bm, domain, f.announced)
        return (full & ~holds) | sse_mask(bm, domain & holds, f.body)
    if isinstance(f, (RCK, CK)):
        guard, body = (Top(), f.sub) if isinstance(f, CK) else (f.guard, f.body)
        # guard checked at the target world of each step: D v and guard at (D, v)
        targets = domain & sse_mask(bm, domain, guard)
        reach = closure_rows([r & targets for r in bm.group_rows])
        return _all_successors_in(reach, full, sse_mask(bm, domain, body), bm.n)
    raise TypeError(f"not a formula: {f!r}")


def eval_sse(m: EpistemicModel, domain: Iterable[str], w: str, f: Formula) -> bool:
    if w not in m.index:
        raise EvaluationError(f"unknown world {w!r}")
    check_symbols(f, m.agents, m.valuation)
    return bool(sse_mask(m.bitmodel, m.mask_of(domain), f) >> m.index[w] & 1)


def failing_domains(bm: BitModel, f: Formula) -> Iterable[tuple[int, Mask]]:
    """(domain, worlds in the domain where f fails) for every domain of bm."""
    for d in range(1 << bm.n):
        yield d, d & ~sse_mask(bm, d, f)


def vld_in_model(m: EpistemicModel, f: Formula) -> bool:
    """True iff f holds at (d, w) for every domain d and every world w in d."""
    check_symbols(f, m.agents, m.valuation)
    return all(bad == 0 for _, bad in failing_domains(m.bitmodel, f))


def tvalid_naive(m: EpistemicModel, f: Formula) -> bool:
    """Validity checked only from the full domain.  Too weak for announcement
    necessitation; kept to exhibit that failure."""
    check_symbols(f, m.agents, m.valuation)
    bm = m.bitmodel
    return sse_mask(bm, bm.full, f) == bm.full
