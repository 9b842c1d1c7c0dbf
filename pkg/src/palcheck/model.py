"""Finite epistemic models, relation algebra, frame classes and model enumeration.

Worlds are addressed by position; a set of worlds is an int bitmask (bit i is
world i) and a relation is a tuple of successor masks, one per world.  The
same mask arithmetic runs unchanged on numpy int64 arrays, which is how
:class:`BitModel` evaluates a whole batch of same-sized models at once.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property, lru_cache
from typing import Any, Iterable, Iterator, Mapping, NamedTuple, Sequence, Union

import numpy as np

from .formula import is_identifier

Mask = Union[int, np.ndarray]


class ModelError(ValueError):
    pass


def full_mask(n: int) -> int:
    return (1 << n) - 1


def bits(mask: int) -> Iterator[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def closure_rows(rows: Sequence[Mask]) -> list[Mask]:
    """Transitive (not reflexive) closure of successor masks, Warshall style."""
    rows = list(rows)
    n = len(rows)
    for k in range(n):
        rk = rows[k]
        bk = 1 << k
        for i in range(n):
            rows[i] = rows[i] | (rk * ((rows[i] & bk) != 0))
    return rows


# ---------------------------------------------------------------------------
# relations

@dataclass(frozen=True)
class Relation:
    worlds: tuple[str, ...]
    rows: tuple[int, ...]

    @classmethod
    def from_pairs(cls, worlds: Sequence[str], pairs: Iterable[tuple[str, str]]) -> "Relation":
        worlds = tuple(worlds)
        index = {w: i for i, w in enumerate(worlds)}
        rows = [0] * len(worlds)
        for a, b in pairs:
            if a not in index or b not in index:
                raise ModelError(f"pair ({a}, {b}) uses a world outside {list(worlds)}")
            rows[index[a]] |= 1 << index[b]
        return cls(worlds, tuple(rows))

    @classmethod
    def empty(cls, worlds: Sequence[str]) -> "Relation":
        return cls(tuple(worlds), (0,) * len(worlds))

    @property
    def pairs(self) -> frozenset[tuple[str, str]]:
        return frozenset((self.worlds[i], self.worlds[j])
                         for i, row in enumerate(self.rows) for j in bits(row))

    def __contains__(self, pair: tuple[str, str]) -> bool:
        a, b = pair
        return (a, b) in self.pairs

    def successors(self, w: str) -> list[str]:
        return [self.worlds[j] for j in bits(self.rows[self.worlds.index(w)])]

    def is_reflexive(self) -> bool:
        return all(row >> i & 1 for i, row in enumerate(self.rows))

    def is_transitive(self) -> bool:
        return all(self.rows[j] & ~row == 0 for row in self.rows for j in bits(row))

    def is_euclidean(self) -> bool:
        # x R y and x R z imply y R z
        return all(row & ~self.rows[j] == 0 for row in self.rows for j in bits(row))

    def sorted_pairs(self) -> list[list[str]]:
        return [[self.worlds[i], self.worlds[j]] for i, row in enumerate(self.rows) for j in bits(row)]


def _same_universe(r: Relation, q: Relation) -> None:
    if r.worlds != q.worlds:
        raise ModelError("relations are over different world universes")


def union_rel(r: Relation, q: Relation) -> Relation:
    _same_universe(r, q)
    return Relation(r.worlds, tuple(a | b for a, b in zip(r.rows, q.rows)))


def intersection_rel(r: Relation, q: Relation) -> Relation:
    _same_universe(r, q)
    return Relation(r.worlds, tuple(a & b for a, b in zip(r.rows, q.rows)))


def sub_rel(r: Relation, q: Relation) -> bool:
    _same_universe(r, q)
    return all(a & ~b == 0 for a, b in zip(r.rows, q.rows))


def tc(r: Relation) -> Relation:
    return Relation(r.worlds, tuple(closure_rows(r.rows)))


TC_ORACLE_MAX_WORLDS = 4


@lru_cache(maxsize=None)
def _transitive_relations(n: int) -> tuple[tuple[int, ...], ...]:
    out = []
    full = full_mask(n)
    for code in range(1 << (n * n)):
        rows = tuple((code >> (i * n)) & full for i in range(n))
        if all(not (rows[x] >> y & 1) or not (rows[y] >> z & 1) or rows[x] >> z & 1
               for x in range(n) for y in range(n) for z in range(n)):
            out.append(rows)
    return tuple(out)


def tc_oracle(r: Relation) -> Relation:
    """Transitive closure read literally: (x, y) is in it iff every transitive
    Q containing r has (x, y).  Enumerates all relations, so only tiny universes."""
    n = len(r.worlds)
    if n > TC_ORACLE_MAX_WORLDS:
        raise ModelError(f"tc_oracle enumerates 2^(n^2) relations; n={n} exceeds {TC_ORACLE_MAX_WORLDS}")
    result = [full_mask(n)] * n
    for q in _transitive_relations(n):
        if all(a & ~b == 0 for a, b in zip(r.rows, q)):
            result = [a & b for a, b in zip(result, q)]
    return Relation(r.worlds, tuple(result))


# ---------------------------------------------------------------------------
# models

Domain = frozenset  # a set of world ids; the evaluation domain of the embedding semantics


@dataclass(frozen=True)
class EpistemicModel:
    worlds: tuple[str, ...]
    agents: tuple[str, ...]
    rel: Mapping[str, Relation] = field(hash=False)
    valuation: Mapping[str, frozenset[str]] = field(hash=False)

    def __post_init__(self):
        if not self.worlds:
            raise ModelError("a model needs at least one world")
        if len(set(self.worlds)) != len(self.worlds):
            raise ModelError("world ids must be unique")
        if len(set(self.agents)) != len(self.agents):
            raise ModelError("agent names must be unique")
        if set(self.rel) != set(self.agents):
            raise ModelError("every agent needs exactly one relation")
        for a in self.agents:
            if self.rel[a].worlds != self.worlds:
                raise ModelError(f"relation of agent {a} is over a different world set")
        known = set(self.worlds)
        for p, ws in self.valuation.items():
            if not set(ws) <= known:
                raise ModelError(f"valuation of {p} mentions unknown worlds {sorted(set(ws) - known)}")

    @classmethod
    def build(cls, worlds: Sequence[str], rel: Mapping[str, Iterable[tuple[str, str]]],
              valuation: Mapping[str, Iterable[str]]) -> "EpistemicModel":
        worlds = tuple(worlds)
        return cls(worlds, tuple(rel),
                   {a: Relation.from_pairs(worlds, ps) for a, ps in rel.items()},
                   {p: frozenset(ws) for p, ws in valuation.items()})

    @cached_property
    def index(self) -> dict[str, int]:
        return {w: i for i, w in enumerate(self.worlds)}

    def mask_of(self, ws: Iterable[str]) -> int:
        m = 0
        for w in ws:
            if w not in self.index:
                raise ModelError(f"unknown world {w!r}")
            m |= 1 << self.index[w]
        return m

    def worlds_of(self, mask: int) -> frozenset[str]:
        return frozenset(self.worlds[i] for i in bits(mask))

    @cached_property
    def bitmodel(self) -> "BitModel":
        n = len(self.worlds)
        return BitModel(n, full_mask(n),
                        {a: self.rel[a].rows for a in self.agents},
                        {p: self.mask_of(ws) for p, ws in self.valuation.items()})



def evr(m: EpistemicModel) -> Relation:
    """Union of all agents' relations, folded left in agent order."""
    out = Relation.empty(m.worlds)
    for a in m.agents:
        out = union_rel(out, m.rel[a])
    return out


class FrameFlags(NamedTuple):
    reflexive: bool
    transitive: bool
    euclidean: bool


def classify_frame(m: EpistemicModel) -> dict[str, FrameFlags]:
    return {a: FrameFlags(r.is_reflexive(), r.is_transitive(), r.is_euclidean())
            for a, r in m.rel.items()}


def is_s5(m: EpistemicModel) -> bool:
    return all(all(flags) for flags in classify_frame(m).values())


def restrict(m: EpistemicModel, domain: Iterable[str]) -> EpistemicModel:
    keep = m.mask_of(domain)
    if not keep:
        raise ModelError("cannot restrict a model to an empty set of worlds")
    worlds = tuple(w for i, w in enumerate(m.worlds) if keep >> i & 1)
    live = set(worlds)
    return EpistemicModel(
        worlds, m.agents,
        {a: Relation.from_pairs(worlds, [(x, y) for x, y in m.rel[a].pairs if x in live and y in live])
         for a in m.agents},
        {p: ws & live for p, ws in m.valuation.items()},
    )


# ---------------------------------------------------------------------------
# bit-level view used by both evaluators

@dataclass(frozen=True)
class BitModel:
    """Mask view of one model (int masks) or a batch of models (int64 arrays).

    ``live`` is the set of worlds the model currently has; worlds outside it
    keep their index but have no successors, no true atoms and no predecessors.
    """

    n: int
    live: Mask
    rows: Mapping[str, Sequence[Mask]]
    val: Mapping[str, Mask]

    @property
    def full(self) -> int:
        return full_mask(self.n)

    @cached_property
    def group_rows(self) -> tuple[Mask, ...]:
        out: list[Mask] = [0] * self.n
        for rs in self.rows.values():
            out = [a | b for a, b in zip(out, rs)]
        return tuple(out)

    def restricted(self, keep: Mask) -> "BitModel":
        """Drop every world outside ``keep``: W' = keep, R' = R ∩ (W'×W'), V' = V ∩ W'."""
        live = self.live & keep
        rows = {a: tuple((r & live) * ((live >> i) & 1) for i, r in enumerate(rs))
                for a, rs in self.rows.items()}
        return BitModel(self.n, live, rows, {p: v & live for p, v in self.val.items()})


# ---------------------------------------------------------------------------
# enumeration

class FrameClass(str, Enum):
    K = "k"
    S5 = "s5"


@lru_cache(maxsize=None)
def set_partitions(n: int) -> tuple[tuple[int, ...], ...]:
    """Restricted growth strings of length n in lexicographic order."""
    out = []

    def grow(prefix: list[int], top: int):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for b in range(top + 2):
            grow(prefix + [b], max(top, b))

    if n == 0:
        return ((),)
    grow([0], 0)
    return tuple(out)


@lru_cache(maxsize=None)
def relation_table(n: int, frame: FrameClass) -> np.ndarray:
    """Row masks of every relation choice, shape (choices, n), in enumeration order."""
    full = full_mask(n)
    if frame is FrameClass.K:
        codes = np.arange(1 << (n * n), dtype=np.int64)
        return np.stack([(codes >> (i * n)) & full for i in range(n)], axis=1) if n else codes[:, None]
    rows = []
    for rgs in set_partitions(n):
        rows.append([sum(1 << j for j in range(n) if rgs[j] == rgs[i]) for i in range(n)])
    return np.array(rows, dtype=np.int64).reshape(len(rows), n)


def radices(n: int, agents: Sequence[str], atoms: Sequence[str], frame: FrameClass) -> list[int]:
    """Mixed-radix digit sizes of a model index, most significant first."""
    rel_choices = len(relation_table(n, FrameClass(frame)))
    return [rel_choices] * len(agents) + [1 << n] * len(atoms)


def count_models(n: int, agents: Sequence[str], atoms: Sequence[str], frame: FrameClass) -> int:
    out = 1
    for r in radices(n, agents, atoms, frame):
        out *= r
    return out


def world_names(n: int) -> tuple[str, ...]:
    return tuple(f"w{i + 1}" for i in range(n))


def _digits(index, sizes: Sequence[int]) -> list:
    out = []
    for size in reversed(sizes):
        out.append(index % size)
        index = index // size
    return out[::-1]


def model_at(index: int, n: int, agents: Sequence[str], atoms: Sequence[str],
             frame: FrameClass) -> EpistemicModel:
    frame = FrameClass(frame)
    total = count_models(n, agents, atoms, frame)
    if not 0 <= index < total:
        raise IndexError(f"model index {index} outside [0, {total})")
    digits = _digits(index, radices(n, agents, atoms, frame))
    table = relation_table(n, frame)
    worlds = world_names(n)
    rel = {a: Relation(worlds, tuple(int(x) for x in table[d])) for a, d in zip(agents, digits)}
    vals = digits[len(agents):]
    valuation = {p: frozenset(worlds[i] for i in bits(v)) for p, v in zip(atoms, vals)}
    return EpistemicModel(worlds, tuple(agents), rel, valuation)


def enumerate_models(n: int, agents: Sequence[str], atoms: Sequence[str],
                     frame: FrameClass = FrameClass.K, start: int = 0,
                     stop: int | None = None) -> Iterator[EpistemicModel]:
    """All models with worlds w1..wn, in index order; ``start``/``stop`` slice the stream."""
    if n < 1:
        raise ModelError("models need at least one world")
    total = count_models(n, agents, atoms, frame)
    for i in range(start, total if stop is None else min(stop, total)):
        yield model_at(i, n, agents, atoms, frame)


def batch_at(indices: np.ndarray, n: int, agents: Sequence[str], atoms: Sequence[str],
             frame: FrameClass) -> BitModel:
    """BitModel holding the models with the given enumeration indices."""
    frame = FrameClass(frame)
    digits = _digits(np.asarray(indices, dtype=np.int64), radices(n, agents, atoms, frame))
    table = relation_table(n, frame)
    rows = {a: tuple(table[d, i] for i in range(n)) for a, d in zip(agents, digits)}
    val = {p: d for p, d in zip(atoms, digits[len(agents):])}
    return BitModel(n, full_mask(n), rows, val)


# ---------------------------------------------------------------------------
# model files

def model_to_dict(m: EpistemicModel) -> dict[str, Any]:
    return {
        "worlds": list(m.worlds),
        "agents": {a: m.rel[a].sorted_pairs() for a in m.agents},
        "valuation": {p: [w for w in m.worlds if w in ws] for p, ws in m.valuation.items()},
    }


def model_from_dict(doc: Any) -> EpistemicModel:
    if not isinstance(doc, dict):
        raise ModelError("model document must be a JSON object")
    unknown = set(doc) - {"worlds", "agents", "valuation"}
    if unknown:
        raise ModelError(f"unknown keys in model document: {sorted(unknown)}")
    missing = {"worlds", "agents", "valuation"} - set(doc)
    if missing:
        raise ModelError(f"missing keys in model document: {sorted(missing)}")
    worlds, agents, valuation = doc["worlds"], doc["agents"], doc["valuation"]
    if not isinstance(worlds, list) or not all(isinstance(w, str) and w for w in worlds):
        raise ModelError("'worlds' must be a list of non-empty strings")
    if not isinstance(agents, dict) or not isinstance(valuation, dict):
        raise ModelError("'agents' and 'valuation' must be objects")
    for name in itertools.chain(agents, valuation):
        if not is_identifier(name):
            raise ModelError(f"{name!r} is not a valid agent/atom identifier")
    pairs = {}
    for a, ps in agents.items():
        if not isinstance(ps, list) or not all(isinstance(p, list) and len(p) == 2 for p in ps):
            raise ModelError(f"relation of agent {a} must be a list of [from, to] pairs")
        pairs[a] = [tuple(p) for p in ps]
    for p, ws in valuation.items():
        if not isinstance(ws, list):
            raise ModelError(f"valuation of {p} must be a list of world ids")
    return EpistemicModel.build(worlds, pairs, valuation)


def load_model(text: str) -> EpistemicModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelError(f"model file is not valid JSON: {e}") from e
    return model_from_dict(doc)


def dump_model(m: EpistemicModel) -> str:
    return json.dumps(model_to_dict(m), indent=2)
