"""Exhaustive-or-sampled law checking with reproducible reports."""

from __future__ import annotations

import itertools
import math
import os
import random
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

from .algebra import FinAbGroup, enumerate_group

DEFAULT_BUDGET = 20000
DEFAULT_SEED = 0
NOT_REPLAYED = "not replayed"

_replay: dict | None = None


def default_budget() -> int:
    return int(os.environ.get("TRACKALG_BUDGET", DEFAULT_BUDGET))


def _jsonable(v):
    if isinstance(v, tuple) and hasattr(v, "_asdict"):
        return {k: _jsonable(x) for k, x in v._asdict().items()}
    if isinstance(v, (tuple, list)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if hasattr(v, "to_json"):
        return v.to_json()
    return v


@dataclass
class LawResult:
    name: str
    passed: bool
    cases: int
    exhaustive: bool
    witness: dict | None = None
    note: str = ""
    probe: bool = False  # probes are informative and never fail a report

    def to_dict(self) -> dict:
        d = {"name": self.name, "passed": self.passed, "cases": self.cases,
             "exhaustive": self.exhaustive}
        if self.witness is not None:
            d["witness"] = _jsonable(self.witness)
        if self.note:
            d["note"] = self.note
        if self.probe:
            d["probe"] = True
        return d


@dataclass
class Report:
    title: str
    seed: int
    budget: int
    results: list[LawResult] = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results if not r.probe)

    def __getitem__(self, name: str) -> LawResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def failures(self) -> list[LawResult]:
        return [r for r in self.results if not r.passed and not r.probe]

    def to_dict(self) -> dict:
        return {"title": self.title, "seed": self.seed, "budget": self.budget,
                "passed": self.passed, "results": [r.to_dict() for r in self.results if r.note != NOT_REPLAYED],
                "info": _jsonable(self.info)}

    def summary(self) -> str:
        lines = [f"{self.title} (seed={self.seed}, budget={self.budget})"]
        for r in self.results:
            if r.note == NOT_REPLAYED:
                continue
            tag = "PASS" if r.passed else ("INFO" if r.probe else "FAIL")
            mode = "exhaustive" if r.exhaustive else "sampled"
            line = f"  [{tag}] {r.name}: {r.cases} cases, {mode}"
            if r.note:
                line += f" ({r.note})"
            lines.append(line)
            if not r.passed and r.witness is not None:
                lines.append(f"         witness: {_jsonable(r.witness)}")
        n = sum(1 for r in self.results if not r.probe and r.note != NOT_REPLAYED)
        ok = sum(1 for r in self.results if r.passed and not r.probe and r.note != NOT_REPLAYED)
        lines.append(f"  {ok}/{n} laws passed")
        return "\n".join(lines)


Domain = FinAbGroup | Sequence[Any]


def _size(d: Domain) -> int:
    return d.order if isinstance(d, FinAbGroup) else len(d)


def _iterate(d: Domain) -> Iterable:
    return enumerate_group(d) if isinstance(d, FinAbGroup) else iter(d)


def _pick(d: Domain, rng: random.Random):
    return d.random_element(rng) if isinstance(d, FinAbGroup) else d[rng.randrange(len(d))]


@dataclass
class Quantifier:
    """One block of cases: fixed context (e.g. objects) and variable domains."""

    context: tuple
    names: tuple[str, ...]
    domains: tuple[Domain, ...]

    def size(self) -> int:
        return math.prod(_size(d) for d in self.domains)


def _from_json(v):
    if isinstance(v, list):
        return tuple(_from_json(x) for x in v)
    return v


@contextmanager
def replaying(witnesses: dict):
    """Within the block, each law named in ``witnesses`` is evaluated on its
    stored witness only and every other law is skipped."""
    global _replay
    old, _replay = _replay, dict(witnesses)
    try:
        yield
    finally:
        _replay = old


def _replay_law(name, blocks, predicate, context_names, probe) -> LawResult:
    w = _replay.get(name)
    if w is None:
        return LawResult(name, True, 0, False, note=NOT_REPLAYED, probe=probe)
    context = tuple(_from_json(w.get(c)) for c in context_names)
    for b in blocks:
        if tuple(b.context) == context:
            if any(isinstance(w.get(n), dict) or n not in w for n in b.names):
                return LawResult(name, True, 0, False, w, note="witness not replayable", probe=probe)
            args = tuple(_from_json(w[n]) for n in b.names)
            ok = bool(predicate(*b.context, *args))
            return LawResult(name, ok, 1, False, None if ok else w, note="replayed", probe=probe)
    return LawResult(name, True, 0, False, w, note="witness context not found", probe=probe)


def _shrink(b: Quantifier, args: tuple, predicate) -> tuple:
    """Greedy coordinate-wise shrink: replace each variable by the earliest
    domain element that keeps the case failing."""
    args = list(args)
    for i, d in enumerate(b.domains):
        for cand in _iterate(d):
            if cand == args[i]:
                break
            trial = args[:i] + [cand] + args[i + 1:]
            if not predicate(*b.context, *trial):
                args = trial
                break
    return tuple(args)


def check_law(name: str, blocks: Sequence[Quantifier], predicate: Callable[..., bool],
              budget: int, rng: random.Random, context_names: tuple[str, ...] = (),
              probe: bool = False) -> LawResult:
    """Run ``predicate(*context, *vars)`` over all cases or a seeded sample.

    The witness is the first failing case in enumeration order when
    exhaustive; a sampled failure is shrunk coordinate-wise toward earlier
    domain elements.
    """
    blocks = [b for b in blocks if b.size() > 0]
    if _replay is not None:
        return _replay_law(name, blocks, predicate, context_names, probe)
    total = sum(b.size() for b in blocks)

    def witness(b, args):
        w = dict(zip(context_names, b.context))
        w.update(zip(b.names, args))
        return w

    if total <= budget:
        for b in blocks:
            for args in itertools.product(*(_iterate(d) for d in b.domains)):
                if not predicate(*b.context, *args):
                    return LawResult(name, False, total, True, witness(b, args), probe=probe)
        return LawResult(name, True, total, True, probe=probe)
    weights = [b.size() for b in blocks]
    for _ in range(budget):
        b = rng.choices(blocks, weights=weights)[0]
        args = tuple(_pick(d, rng) for d in b.domains)
        if not predicate(*b.context, *args):
            return LawResult(name, False, budget, False, witness(b, _shrink(b, args, predicate)), probe=probe)
    return LawResult(name, True, budget, False, probe=probe)
