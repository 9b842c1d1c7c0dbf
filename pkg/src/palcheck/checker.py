"""Bounded validity and rule checking over enumerated models, and the experiment suites."""
from __future__ import annotations

import dataclasses
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Iterable, Optional, Sequence, Union

import numpy as np

from . import direct, sse
from .formula import (And, Announce, Atom, Formula, Knows, Neg, Or, agents as formula_agents, atoms as formula_atoms,
                      generate_formulas, is_identifier, parse, render, substitute, uses_group)
from .model import (BitModel, EpistemicModel, FrameClass, batch_at, bits, count_models, model_at,
                    model_to_dict, radices)

CHUNK = 1 << 15


class ScopeError(ValueError):
    pass


class Semantics(str, Enum):
    DIRECT = "direct"
    SSE = "sse"
    # full-domain-only validity; only meaningful for the necessitation demonstration
    NAIVE = "sse-naive"


@dataclass(frozen=True)
class Scope:
    max_worlds: int = 2
    agents: tuple[str, ...] = ("a", "b")
    atoms: tuple[str, ...] = ("p", "q")
    frame: FrameClass = FrameClass.S5
    semantics: Semantics = Semantics.DIRECT
    model_budget: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "agents", tuple(self.agents))
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(self, "frame", FrameClass(self.frame))
        object.__setattr__(self, "semantics", Semantics(self.semantics))
        if self.max_worlds < 1:
            raise ScopeError("max_worlds must be at least 1")
        if not self.agents:
            raise ScopeError("a scope needs at least one agent")
        for name in self.agents + self.atoms:
            if not is_identifier(name):
                raise ScopeError(f"{name!r} is not a valid identifier")
        if len(set(self.agents)) != len(self.agents) or len(set(self.atoms)) != len(self.atoms):
            raise ScopeError("agent and atom names must be unique")
        if self.model_budget is not None and self.model_budget < 1:
            raise ScopeError("model_budget must be positive")

    def replace(self, **changes) -> "Scope":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class ValidUpToBound:
    models_checked: int
    budget_exhausted: bool = False

    @property
    def valid(self) -> bool:
        return True


@dataclass(frozen=True)
class Countermodel:
    model: EpistemicModel
    world: str
    domain: Optional[frozenset[str]] = None
    index: int = 0  # position in the enumeration of models with this many worlds

    @property
    def valid(self) -> bool:
        return False

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"model": model_to_dict(self.model), "world": self.world}
        if self.domain is not None:
            out["domain"] = [w for w in self.model.worlds if w in self.domain]
        return out


Verdict = Union[ValidUpToBound, Countermodel]


# ---------------------------------------------------------------------------
# per-model validity on batches

def _as_array(x, size: int) -> np.ndarray:
    return np.broadcast_to(np.asarray(x, dtype=np.int64), (size,))


def _invalid(bm: BitModel, f: Formula, semantics: Semantics, size: int) -> np.ndarray:
    """Boolean array: does f fail somewhere in each model of the batch?"""
    full = bm.full
    if semantics is Semantics.DIRECT:
        return _as_array(full & ~direct.truth_mask(bm, f), size) != 0
    if semantics is Semantics.NAIVE:
        return _as_array(full & ~sse.sse_mask(bm, full, f), size) != 0
    out = np.zeros(size, dtype=bool)
    for d in range(1, 1 << bm.n):
        out |= _as_array(d & ~sse.sse_mask(bm, d, f), size) != 0
    return out


def falsify(m: EpistemicModel, f: Formula, semantics: Semantics) -> Optional[tuple[str, Optional[frozenset]]]:
    """First (world, domain) of m where f fails, evaluated through the public API."""
    semantics = Semantics(semantics)
    if semantics is Semantics.DIRECT:
        for w in m.worlds:
            if not direct.eval_direct(m, w, f):
                return w, None
        return None
    domains = [m.bitmodel.full] if semantics is Semantics.NAIVE else range(1, 1 << len(m.worlds))
    for d in domains:
        dom = m.worlds_of(d)
        for w in m.worlds:
            if w in dom and not sse.eval_sse(m, dom, w, f):
                return w, dom
    return None


def valid_in_model(m: EpistemicModel, f: Formula, semantics: Semantics) -> bool:
    return falsify(m, f, semantics) is None


class _Projection:
    """Enumerate only over the agents/atoms a query can observe.

    Symbols outside the query take their first enumeration value, which keeps
    the first countermodel (by full-scope index) unchanged.
    """

    def __init__(self, scope: Scope, formulas: Sequence[Formula]):
        used_atoms = set().union(*(formula_atoms(f) for f in formulas))
        used_agents = set().union(*(formula_agents(f) for f in formulas))
        if not used_agents <= set(scope.agents):
            raise ScopeError(f"formula agents {sorted(used_agents - set(scope.agents))} not in scope")
        if not used_atoms <= set(scope.atoms):
            raise ScopeError(f"formula atoms {sorted(used_atoms - set(scope.atoms))} not in scope")
        group = any(uses_group(f) for f in formulas)
        self.scope = scope
        self.agents = [a for a in scope.agents if group or a in used_agents]
        self.atoms = [p for p in scope.atoms if p in used_atoms]

    def multiplicity(self, n: int) -> int:
        s = self.scope
        return count_models(n, s.agents, s.atoms, s.frame) // count_models(n, self.agents, self.atoms, s.frame)

    def full_index(self, n: int, index: int) -> int:
        s = self.scope
        sizes = radices(n, self.agents, self.atoms, s.frame)
        digits = []
        for size in reversed(sizes):
            digits.append(index % size)
            index //= size
        digits = dict(zip(self.agents + [("atom", p) for p in self.atoms], digits[::-1]))
        out = 0
        names = list(s.agents) + [("atom", p) for p in s.atoms]
        for name, size in zip(names, radices(n, s.agents, s.atoms, s.frame)):
            out = out * size + digits.get(name, 0)
        return out


def _scan(scope: Scope, formulas: Sequence[Formula],
          violates: Callable[[BitModel, int], np.ndarray]) -> tuple[Optional[EpistemicModel], int, int, bool]:
    """Walk the enumeration; return (first violating model, its index, models checked, budget hit)."""
    proj = _Projection(scope, formulas)
    checked = evaluated = 0
    budget = scope.model_budget
    for n in range(1, scope.max_worlds + 1):
        total = count_models(n, proj.agents, proj.atoms, scope.frame)
        mult = proj.multiplicity(n)
        for start in range(0, total, CHUNK):
            stop = end = min(total, start + CHUNK)
            if budget is not None:
                if evaluated >= budget:
                    return None, -1, checked, True
                stop = min(end, start + budget - evaluated)
            idx = np.arange(start, stop, dtype=np.int64)
            bm = batch_at(idx, n, proj.agents, proj.atoms, scope.frame)
            bad = violates(bm, len(idx))
            if bad.any():
                first = int(idx[np.argmax(bad)])
                m = model_at(proj.full_index(n, first), n, scope.agents, scope.atoms, scope.frame)
                checked += (first - start + 1) * mult
                return m, proj.full_index(n, first), checked, False
            evaluated += len(idx)
            checked += len(idx) * mult
            if stop < end:
                return None, -1, checked, True
    return None, -1, checked, False


def _witness(m: EpistemicModel, index: int, f: Formula, semantics: Semantics) -> Countermodel:
    found = falsify(m, f, semantics)
    if found is None:
        raise AssertionError(f"batch evaluation flagged model #{index} but {render(f)} holds there")
    w, dom = found
    return Countermodel(m, w, dom, index)


def _semantics_for(scope: Scope, semantics) -> Semantics:
    return scope.semantics if semantics is None else Semantics(semantics)


def check_valid(f: Formula, scope: Scope, semantics: Optional[Semantics] = None) -> Verdict:
    sem = _semantics_for(scope, semantics)
    m, index, checked, hit = _scan(scope, [f], lambda bm, size: _invalid(bm, f, sem, size))
    if m is None:
        return ValidUpToBound(checked, hit)
    return _witness(m, index, f, sem)


def check_rule(premises: Sequence[Formula], conclusion: Formula, scope: Scope,
               semantics: Optional[Semantics] = None) -> Verdict:
    """Per-model soundness: every model validating all premises must validate the conclusion."""
    sem = _semantics_for(scope, semantics)

    def violates(bm: BitModel, size: int) -> np.ndarray:
        ok = np.ones(size, dtype=bool)
        for p in premises:
            ok &= ~_invalid(bm, p, sem, size)
        return ok & _invalid(bm, conclusion, sem, size)

    m, index, checked, hit = _scan(scope, list(premises) + [conclusion], violates)
    if m is None:
        return ValidUpToBound(checked, hit)
    if not all(valid_in_model(m, p, sem) for p in premises):
        raise AssertionError(f"batch evaluation flagged model #{index} but a premise fails there")
    return _witness(m, index, conclusion, sem)


# ---------------------------------------------------------------------------
# suites

@dataclass
class SuiteEntry:
    name: str
    form: str
    semantics: str
    frame: str
    formula: str
    verdict: str  # "valid" or "countermodel"
    millis: float
    countermodel: Optional[dict[str, Any]] = None
    expected: Optional[str] = None
    note: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.expected is None or self.expected == self.verdict

    def to_dict(self) -> dict[str, Any]:
        out = dataclasses.asdict(self)
        if self.countermodel is None:
            del out["countermodel"]
        if self.note is None:
            del out["note"]
        return out


@dataclass
class SuiteReport:
    suite: str
    entries: list[SuiteEntry] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def find(self, name: str, form: Optional[str] = None, semantics: Optional[str] = None,
             frame: Optional[str] = None) -> list[SuiteEntry]:
        return [e for e in self.entries if e.name == name
                and (form is None or e.form == form)
                and (semantics is None or e.semantics == semantics)
                and (frame is None or e.frame == frame)]

    def to_json(self) -> list[dict[str, Any]]:
        return [e.to_dict() for e in self.entries]


def _verdict_name(v: Verdict) -> str:
    return "valid" if v.valid else "countermodel"


def _entry(name: str, form: str, scope: Scope, sem: Semantics, formula_text: str,
           run: Callable[[], Verdict], expected: Optional[str], note: Optional[str] = None) -> SuiteEntry:
    t0 = time.perf_counter()
    v = run()
    millis = round((time.perf_counter() - t0) * 1000, 3)
    return SuiteEntry(name, form, sem.value, scope.frame.value, formula_text, _verdict_name(v), millis,
                      v.to_dict() if isinstance(v, Countermodel) else None, expected, note)


@dataclass(frozen=True)
class AxiomItem:
    name: str
    form: str  # "schema", "rule", or which published variant ("table"/"listing")
    text: str  # formula, or "premise ; premise => conclusion" for rules; {a} is the agent
    s5_only: bool = False


AXIOMS: tuple[AxiomItem, ...] = (
    AxiomItem("tautology", "schema", "top"),
    AxiomItem("excluded middle", "schema", "p | ~p"),
    AxiomItem("contraposition", "schema", "(p -> q) -> ~q -> ~p"),
    AxiomItem("axiom K", "schema", "K {a} (p -> q) -> K {a} p -> K {a} q"),
    AxiomItem("modus ponens", "rule", "p -> q ; p => q"),
    AxiomItem("necessitation", "rule", "p => K {a} p"),
    AxiomItem("axiom T", "schema", "K {a} p -> p", s5_only=True),
    AxiomItem("axiom 4", "schema", "K {a} p -> K {a} K {a} p", s5_only=True),
    AxiomItem("axiom 5", "schema", "~K {a} p -> K {a} ~K {a} p", s5_only=True),
    AxiomItem("atomic permanence", "schema", "[!p] q <-> (p -> q)"),
    AxiomItem("conjunction", "schema", "[!p] (q & r) <-> [!p] q & [!p] r"),
    AxiomItem("partial functionality", "schema", "[!p] ~q <-> (p -> ~[!p] q)"),
    AxiomItem("action-knowledge", "table", "[!p] K {a} q <-> (p -> K {a} (p -> K {a} (p -> [!p] q)))"),
    AxiomItem("action-knowledge", "listing", "[!p] K {a} q <-> (p -> K {a} (p -> [!p] q))"),
    AxiomItem("rck reduction", "table", "[!p] C(r | q) <-> (p -> C(p & [!p] r | [!p] q))"),
    AxiomItem("rck reduction", "listing", "[!p] C(q | r) <-> (p -> C([!p] q | [!p] r))"),
    AxiomItem("C-normality", "schema", "C(r | p -> q) -> C(r | p) -> C(r | q)"),
    AxiomItem("mix (->)", "table", "C(q | p) -> E (q -> p & C(q | p))"),
    AxiomItem("mix (<-)", "table", "E (q -> p & C(q | p)) -> C(q | p)"),
    AxiomItem("mix (->)", "listing", "C(r | p) -> E (r -> p & C(r | q))"),
    AxiomItem("mix (<-)", "listing", "E (r -> p & C(r | q)) -> C(r | p)"),
    AxiomItem("induction (->)", "schema", "E (q -> p) & C(q | p -> E (q -> p)) -> C(q | p)"),
    AxiomItem("induction (<-)", "schema", "C(q | p) -> E (q -> p) & C(q | p -> E (q -> p))"),
    AxiomItem("announcement necessitation", "rule", "p => [!q] p"),
    AxiomItem("RKC necessitation", "rule", "p => C(q | p)"),
)

# Verdicts under frame K for items outside T/4/5 that need more than K frames.
K_FRAME_COUNTERMODELS = frozenset({("action-knowledge", "table")})


def _parse_item(item: AxiomItem, agent: str) -> tuple[list[Formula], Formula]:
    text = item.text.replace("{a}", agent)
    if "=>" in text:
        premises, conclusion = text.split("=>")
        return [parse(p) for p in premises.split(";")], parse(conclusion)
    return [], parse(text)


def _atoms_in_order(formulas: Iterable[Formula], order: Sequence[str] = ("p", "q", "r")) -> tuple[str, ...]:
    used = set().union(*(formula_atoms(f) for f in formulas))
    return tuple(p for p in order if p in used) + tuple(sorted(used - set(order)))


def run_axiom_suite(scope: Scope = Scope(), frames: Optional[Sequence[FrameClass]] = None,
                    semantics: Sequence[Semantics] = (Semantics.DIRECT, Semantics.SSE)) -> SuiteReport:
    """Instantiate each axiom/rule with p, q, r and the scope's first agent and check it.

    T/4/5 are expected valid under S5 and refuted under K; everything else is
    checked under every requested frame.
    """
    frames = [FrameClass(f) for f in (frames or (FrameClass.K, FrameClass.S5))]
    agent = scope.agents[0]
    report = SuiteReport("axioms")
    for item in AXIOMS:
        premises, conclusion = _parse_item(item, agent)
        item_atoms = _atoms_in_order(premises + [conclusion])
        shown = " ; ".join(map(render, premises)) + " => " + render(conclusion) if premises else render(conclusion)
        for frame in frames:
            s = scope.replace(frame=frame, atoms=item_atoms)
            expected = "valid"
            if frame is FrameClass.K and (item.s5_only or (item.name, item.form) in K_FRAME_COUNTERMODELS):
                expected = "countermodel"
            elif item.form == "listing":
                expected = None  # reported, not asserted: the listing variants differ from the table
            for sem in semantics:
                if premises:
                    run = lambda s=s, sem=sem: check_rule(premises, conclusion, s, sem)
                else:
                    run = lambda s=s, sem=sem: check_valid(conclusion, s, sem)
                entry = _entry(item.name, item.form, s, Semantics(sem), shown, run, expected)
                if item.form == "listing" and entry.verdict == "countermodel":
                    entry.note = "listing variant refuted; the table form is the one expected valid"
                report.entries.append(entry)
    return report


SUBSTITUTION_PRINCIPLES: tuple[tuple[str, str], ...] = (
    ("1", "p -> ~[!p] ~p"),
    ("2", "p -> ~[!p] ~K {a} p"),
    ("3", "p -> ~[!p] (p & ~K {a} p)"),
    ("4", "p & ~K {a} p -> ~[!p & ~K {a} p] (p & ~K {a} p)"),
    ("5", "K {a} p -> ~[!p] ~K {a} p"),
    ("6", "K {a} p -> ~[!p] (p & ~K {a} p)"),
)


def moore_sentence(atom: str, agent: str) -> Formula:
    return parse(f"{atom} & ~K {agent} {atom}")


def substitution_candidates(agents: Sequence[str], atoms: Sequence[str], max_size: int) -> list[Formula]:
    """Every formula over ~, K, &, | up to ``max_size`` nodes, smallest first."""
    by_size: dict[int, list[Formula]] = {1: [Atom(p) for p in atoms]}
    for s in range(2, max_size + 1):
        out: list[Formula] = []
        for f in by_size[s - 1]:
            out.append(Neg(f))
            out.extend(Knows(a, f) for a in agents)
        for left in range(1, s - 1):
            for f in by_size[left]:
                for g in by_size[s - 1 - left]:
                    out.append(And(f, g))
                    out.append(Or(f, g))
        by_size[s] = out
    return [f for s in range(1, max_size + 1) for f in by_size[s]]


def search_substitution(schema: Formula, target: str, scope: Scope,
                        candidates: Sequence[Formula]) -> Optional[tuple[Formula, Countermodel]]:
    """First candidate (in order) whose substitution instance has a countermodel in scope."""
    for c in candidates:
        v = check_valid(substitute(schema, target, c), scope)
        if isinstance(v, Countermodel):
            return c, v
    return None


def run_substitution_suite(scope: Scope = Scope(max_worlds=2, agents=("a",), atoms=("p", "q")),
                           semantics: Sequence[Semantics] = (Semantics.DIRECT, Semantics.SSE),
                           search: bool = True, search_worlds: int = 3,
                           search_size: int = 7) -> SuiteReport:
    """Atomic principles valid, schematic instances refuted.

    The Moore sentence q & ~K q is tried first.  When it does not refute an
    item and ``search`` is set, a bounded search over other substitutions
    (with a second agent added if the scope has only one) looks for a witness.
    """
    if scope.frame is not FrameClass.S5:
        raise ScopeError("the substitution suite runs over S5 models")
    agent = scope.agents[0]
    if len(scope.atoms) < 2:
        raise ScopeError("the substitution suite needs two atoms (one to substitute, one for the witness)")
    p, q = scope.atoms[0], scope.atoms[1]
    moore = moore_sentence(q, agent)
    report = SuiteReport("substitution")
    search_agents = scope.agents if len(scope.agents) > 1 else scope.agents + (_fresh_agent(scope.agents),)
    search_scope = scope.replace(max_worlds=search_worlds, agents=search_agents,
                                 atoms=(q, _fresh_atom(scope.atoms)), semantics=Semantics.DIRECT)
    candidates = None
    for num, text in SUBSTITUTION_PRINCIPLES:
        schema = parse(text.replace("{a}", agent))
        if p != "p":
            schema = substitute(schema, "p", Atom(p))
        name = f"principle {num}"
        inst = substitute(schema, p, moore)
        moore_refuted = True
        for sem in semantics:
            sem = Semantics(sem)
            report.entries.append(_entry(name, "atomic", scope.replace(atoms=(p,)), sem, render(schema),
                                         lambda sem=sem: check_valid(schema, scope.replace(atoms=(p,)), sem),
                                         "valid"))
            e = _entry(name, "schematic", scope.replace(atoms=(q,)), sem, render(inst),
                       lambda sem=sem: check_valid(inst, scope.replace(atoms=(q,)), sem),
                       "countermodel", note=f"{p} := {render(moore)}")
            moore_refuted &= e.verdict == "countermodel"
            report.entries.append(e)
        if search and not moore_refuted:
            if candidates is None:
                candidates = substitution_candidates(search_scope.agents, search_scope.atoms, search_size)
            t0 = time.perf_counter()
            found = search_substitution(schema, p, search_scope, candidates)
            millis = round((time.perf_counter() - t0) * 1000, 3)
            if found is None:
                report.entries.append(SuiteEntry(
                    name, "schematic-search", "direct", scope.frame.value, render(schema), "valid", millis,
                    note=f"no substitution up to size {search_size} refutes it within "
                         f"{search_worlds} worlds, agents {','.join(search_scope.agents)}"))
            else:
                c, v = found
                report.entries.append(SuiteEntry(
                    name, "schematic-search", "direct", scope.frame.value,
                    render(substitute(schema, p, c)), "countermodel", millis, v.to_dict(),
                    note=f"{p} := {render(c)}; agents {','.join(search_scope.agents)}"))
    report.entries.extend(necessitation_demo(scope).entries)
    return report


def _fresh_agent(taken: Sequence[str]) -> str:
    return next(x for x in ("b", "c", "d", "agent2") if x not in taken)


def _fresh_atom(taken: Sequence[str]) -> str:
    return next(x for x in ("r", "s", "t", "atom3") if x not in taken)


def necessitation_demo(scope: Scope = Scope(max_worlds=2, agents=("a",), atoms=("p", "q")),
                       max_size: int = 4) -> SuiteReport:
    """Announcement necessitation under full-domain-only validity versus vld.

    Searches small (announced, premise) pairs for a model where the premise is
    valid from the full domain but [!announced]premise is not.
    """
    agent = scope.agents[0]
    p = scope.atoms[0]
    s = scope.replace(atoms=(p,), frame=scope.frame)
    report = SuiteReport("necessitation")
    small = substitution_candidates([agent], [p], max_size)
    t0 = time.perf_counter()
    for psi in small:
        for phi in small[:3]:
            conclusion = Announce(phi, psi)
            v = check_rule([psi], conclusion, s, Semantics.NAIVE)
            if isinstance(v, Countermodel):
                millis = round((time.perf_counter() - t0) * 1000, 3)
                shown = f"{render(psi)} => {render(conclusion)}"
                report.entries.append(SuiteEntry(
                    "announcement necessitation", "tvalid", Semantics.NAIVE.value, s.frame.value, shown,
                    "countermodel", millis, v.to_dict(), "countermodel",
                    note=f"{len(v.model.worlds)}-world counterexample"))
                report.entries.append(_entry(
                    "announcement necessitation", "vld", s, Semantics.SSE, shown,
                    lambda: check_rule([psi], conclusion, s, Semantics.SSE), "valid"))
                return report
    report.entries.append(SuiteEntry("announcement necessitation", "tvalid", Semantics.NAIVE.value,
                                     s.frame.value, "", "valid",
                                     round((time.perf_counter() - t0) * 1000, 3), expected="countermodel"))
    return report


# ---------------------------------------------------------------------------
# faithfulness

@dataclass
class FaithfulnessReport:
    formulas: int
    exhaustive_cases: int
    random_cases: int
    discrepancies: list[dict[str, Any]]
    millis: float

    @property
    def ok(self) -> bool:
        return not self.discrepancies

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)


def _popcounts(d: np.ndarray) -> int:
    return int(sum(int(x).bit_count() for x in np.asarray(d).ravel()))


def _compare(bm: BitModel, domain, f: Formula) -> np.ndarray:
    """Per-model mask of worlds in the domain where the two semantics disagree."""
    lhs = sse.sse_mask(bm, domain, f) & domain
    rhs = direct.truth_mask(bm.restricted(domain), f) & domain
    return np.asarray(lhs ^ rhs)


def run_faithfulness(max_worlds: int = 2, agents: Sequence[str] = ("a", "b"),
                     atoms: Sequence[str] = ("p", "q"), n_formulas: int = 500, max_depth: int = 3,
                     samples: int = 10_000, sample_worlds: int = 3, seed: int = 0,
                     max_reported: int = 10) -> FaithfulnessReport:
    """Compare sse on (m, d, w) with direct truth in m restricted to d, for nonempty d and w in d.

    Exhaustive over every K model up to ``max_worlds``; then ``samples`` random
    (model, domain, formula) triples on ``sample_worlds``-world models.
    """
    t0 = time.perf_counter()
    formulas = generate_formulas(n_formulas, max_depth, agents, atoms, seed=seed)
    bad: list[dict[str, Any]] = []
    exhaustive = 0

    def record(f: Formula, n: int, index: int, d: int, diff: int):
        if len(bad) < max_reported:
            bad.append({"formula": render(f), "worlds": n, "model_index": index, "domain": d,
                        "at": [f"w{i + 1}" for i in bits(diff)]})

    for n in range(1, max_worlds + 1):
        total = count_models(n, agents, atoms, FrameClass.K)
        idx = np.arange(total, dtype=np.int64)
        bm = batch_at(idx, n, agents, atoms, FrameClass.K)
        for f in formulas:
            for d in range(1, 1 << n):
                diff = _as_array(_compare(bm, d, f), total)
                exhaustive += total * d.bit_count()
                for j in np.flatnonzero(diff):
                    record(f, n, int(idx[j]), d, int(diff[j]))

    rng = np.random.default_rng(seed)
    total = count_models(sample_worlds, agents, atoms, FrameClass.K)
    per_formula = -(-samples // len(formulas))
    random_cases = 0
    for f in formulas:
        idx = rng.integers(0, total, size=per_formula, dtype=np.int64)
        doms = rng.integers(1, 1 << sample_worlds, size=per_formula, dtype=np.int64)
        bm = batch_at(idx, sample_worlds, agents, atoms, FrameClass.K)
        diff = _as_array(_compare(bm, doms, f), per_formula)
        random_cases += _popcounts(doms)
        for j in np.flatnonzero(diff):
            record(f, sample_worlds, int(idx[j]), int(doms[j]), int(diff[j]))
    return FaithfulnessReport(len(formulas), exhaustive, random_cases, bad,
                              round((time.perf_counter() - t0) * 1000, 3))
