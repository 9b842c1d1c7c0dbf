"""Slow, literal reference implementations used only by the tests.

Everything here works on plain Python sets of world names and pairs, and
follows the truth clauses one at a time, with no bitmasks and no sharing with
the package's evaluators beyond the formula classes.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from palcheck.formula import CK, RCK, And, Announce, Atom, Everyone, Iff, Imp, Knows, Neg, Or, Top


@dataclass(frozen=True)
class SetModel:
    worlds: frozenset
    rel: dict   # agent -> frozenset of pairs
    val: dict   # atom -> frozenset of worlds

    @classmethod
    def of(cls, m):
        return cls(frozenset(m.worlds), {a: frozenset(r.pairs) for a, r in m.rel.items()},
                   {p: frozenset(ws) for p, ws in m.valuation.items()})

    def restrict(self, keep):
        keep = frozenset(keep)
        return SetModel(keep, {a: frozenset((x, y) for x, y in r if x in keep and y in keep)
                               for a, r in self.rel.items()},
                        {p: ws & keep for p, ws in self.val.items()})

    def group(self):
        return frozenset().union(*self.rel.values())


def naive_tc(pairs):
    closure = set(pairs)
    while True:
        extra = {(x, z) for x, y in closure for y2, z in closure if y == y2} - closure
        if not extra:
            return frozenset(closure)
        closure |= extra


def holds(m: SetModel, w, f) -> bool:
    if isinstance(f, Atom):
        return w in m.val[f.name]
    if isinstance(f, Top):
        return True
    if isinstance(f, Neg):
        return not holds(m, w, f.sub)
    if isinstance(f, And):
        return holds(m, w, f.left) and holds(m, w, f.right)
    if isinstance(f, Or):
        return holds(m, w, f.left) or holds(m, w, f.right)
    if isinstance(f, Imp):
        return (not holds(m, w, f.left)) or holds(m, w, f.right)
    if isinstance(f, Iff):
        return holds(m, w, f.left) == holds(m, w, f.right)
    if isinstance(f, Knows):
        return all(holds(m, v, f.sub) for x, v in m.rel[f.agent] if x == w)
    if isinstance(f, Everyone):
        return all(holds(m, v, f.sub) for x, v in m.group() if x == w)
    if isinstance(f, Announce):
        if not holds(m, w, f.announced):
            return True
        return holds(m.restrict(v for v in m.worlds if holds(m, v, f.announced)), w, f.body)
    if isinstance(f, (RCK, CK)):
        guard, body = (Top(), f.sub) if isinstance(f, CK) else (f.guard, f.body)
        ext = {v for v in m.worlds if holds(m, v, guard)}
        reach = naive_tc({(x, y) for x, y in m.group() if y in ext})
        return all(holds(m, v, body) for x, v in reach if x == w)
    raise TypeError(f)


def sse_holds(m: SetModel, d, w, f) -> bool:
    d = frozenset(d)
    if isinstance(f, Atom):
        return w in d and w in m.val[f.name]
    if isinstance(f, Top):
        return True
    if isinstance(f, Neg):
        return not sse_holds(m, d, w, f.sub)
    if isinstance(f, And):
        return sse_holds(m, d, w, f.left) and sse_holds(m, d, w, f.right)
    if isinstance(f, Or):
        return sse_holds(m, d, w, f.left) or sse_holds(m, d, w, f.right)
    if isinstance(f, Imp):
        return (not sse_holds(m, d, w, f.left)) or sse_holds(m, d, w, f.right)
    if isinstance(f, Iff):
        return sse_holds(m, d, w, f.left) == sse_holds(m, d, w, f.right)
    if isinstance(f, Knows):
        return all(sse_holds(m, d, v, f.sub) for x, v in m.rel[f.agent] if x == w and v in d)
    if isinstance(f, Everyone):
        return all(sse_holds(m, d, v, f.sub) for x, v in m.group() if x == w and v in d)
    if isinstance(f, Announce):
        if not sse_holds(m, d, w, f.announced):
            return True
        narrowed = {z for z in d if sse_holds(m, d, z, f.announced)}
        return sse_holds(m, narrowed, w, f.body)
    if isinstance(f, (RCK, CK)):
        guard, body = (Top(), f.sub) if isinstance(f, CK) else (f.guard, f.body)
        reach = naive_tc({(x, y) for x, y in m.group() if y in d and sse_holds(m, d, y, guard)})
        return all(sse_holds(m, d, v, body) for x, v in reach if x == w)
    raise TypeError(f)


def all_relations(worlds):
    pairs = [(x, y) for x in worlds for y in worlds]
    for bits in product((0, 1), repeat=len(pairs)):
        yield frozenset(p for p, b in zip(pairs, bits) if b)


def is_equivalence(worlds, r) -> bool:
    return (all((w, w) in r for w in worlds)
            and all((y, x) in r for x, y in r)
            and all((x, z) in r for x, y in r for y2, z in r if y == y2))
