"""Three wise men, two public admissions of ignorance, one deduction.

Each man sees the other two spots but not his own.  After a and then b say
they do not know their colour, c knows his spot is white.
"""
from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from itertools import product
from typing import Any, Optional

from .checker import Scope, Semantics, check_rule
from .direct import announce, extension
from .formula import CK, Announce, Atom, Formula, Knows, Neg, Or, parse
from .model import EpistemicModel, FrameClass
from .sse import sse_mask

AGENTS = ("a", "b", "c")
SPOTS = ("wsa", "wsb", "wsc")
GOAL_TEXT = "[!~(K a wsa | K a ~wsa)] [!~(K b wsb | K b ~wsb)] K c wsc"


def _world_name(colours: tuple[str, ...]) -> str:
    return "".join(colours)


def canonical_model(include_all_black: bool = False) -> EpistemicModel:
    """One world per spot assignment ("W"/"B" for a, b, c), all-black excluded.

    Passing ``include_all_black`` builds the model without the at-least-one-white
    constraint, used as a negative control.
    """
    assignments = [c for c in product("WB", repeat=3) if include_all_black or "W" in c]
    worlds = [_world_name(c) for c in assignments]
    rel = {}
    for i, x in enumerate(AGENTS):
        others = [j for j in range(3) if j != i]
        rel[x] = [(_world_name(u), _world_name(v)) for u in assignments for v in assignments
                  if all(u[j] == v[j] for j in others)]
    valuation = {SPOTS[i]: [_world_name(c) for c in assignments if c[i] == "W"] for i in range(3)}
    return EpistemicModel.build(worlds, rel, valuation)


def premises(footnote: bool = False) -> list[Formula]:
    """WM1 and the six WM2xy.  ``footnote`` adds the positive versions C(ws x -> K y ws x)."""
    spot = dict(zip(AGENTS, SPOTS))
    out: list[Formula] = [CK(Or(Or(Atom("wsa"), Atom("wsb")), Atom("wsc")))]
    pairs = [(x, y) for x in AGENTS for y in AGENTS if x != y]
    out += [parse(f"C (~{spot[x]} -> K {y} ~{spot[x]})") for x, y in pairs]
    if footnote:
        out += [parse(f"C ({spot[x]} -> K {y} {spot[x]})") for x, y in pairs]
    return out


def ignorance(agent: str, atom: str) -> Formula:
    return Neg(Or(Knows(agent, Atom(atom)), Knows(agent, Neg(Atom(atom)))))


def goal() -> Formula:
    return Announce(ignorance("a", "wsa"), Announce(ignorance("b", "wsb"), Knows("c", Atom("wsc"))))


@dataclass
class WiseMenReport:
    premises_ok: bool
    goal_ok: bool
    goal_ok_sse: bool
    cascade: list[int]
    worlds_after: list[list[str]]
    negative_control_falsified: bool
    consequence: Optional[str] = None
    footnote: bool = False
    millis: float = 0.0
    goal: str = field(default=GOAL_TEXT)

    @property
    def ok(self) -> bool:
        return (self.premises_ok and self.goal_ok and self.goal_ok_sse
                and self.negative_control_falsified and self.consequence in (None, "valid"))

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _holds_everywhere(m: EpistemicModel, f: Formula) -> bool:
    return extension(m, f) == frozenset(m.worlds)


def cascade(m: EpistemicModel) -> list[EpistemicModel]:
    """The model before and after each of the two announcements."""
    first = announce(m, ignorance("a", "wsa"))
    second = announce(first, ignorance("b", "wsb"))
    return [m, first, second]


def solve(footnote: bool = False, consequence_worlds: int = 0) -> WiseMenReport:
    """Check the puzzle on the canonical model.

    ``consequence_worlds`` > 0 also checks premises => goal over every S5 model
    up to that many worlds (3 agents, the three spot atoms).
    """
    t0 = time.perf_counter()
    m = canonical_model()
    prem = premises(footnote)
    g = goal()
    stages = cascade(m)
    bm = m.bitmodel
    consequence = None
    if consequence_worlds:
        scope = Scope(max_worlds=consequence_worlds, agents=AGENTS, atoms=SPOTS, frame=FrameClass.S5)
        consequence = "valid" if check_rule(prem, g, scope, Semantics.DIRECT).valid else "countermodel"
    control = canonical_model(include_all_black=True)
    return WiseMenReport(
        premises_ok=all(_holds_everywhere(m, f) for f in prem),
        goal_ok=_holds_everywhere(m, g),
        goal_ok_sse=sse_mask(bm, bm.full, g) == bm.full,
        cascade=[len(s.worlds) for s in stages],
        worlds_after=[sorted(s.worlds) for s in stages[1:]],
        negative_control_falsified=not _holds_everywhere(control, g),
        consequence=consequence,
        footnote=footnote,
        millis=round((time.perf_counter() - t0) * 1000, 3),
    )
