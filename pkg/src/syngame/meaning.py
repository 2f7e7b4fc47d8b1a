"""Predicate meanings exchanged between conceptualization and grammar.

A meaning is a bag of predicates over variables plus a set of
topic-marked variables.  Property predicates take one argument; the
relations ``distinct`` and ``left-of`` take two.  ``distinct`` states
that two variables may not denote the same object; it is how a speaker
intends, and a grammar conveys, that a complex topic involves several
referents.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

from .fs import Atom, Seq, Value, Var

DISTINCT = "distinct"
TOPIC = "topic"
LEFT_OF = "left-of"

RELATION_HEADS = (DISTINCT, LEFT_OF)


@dataclass(frozen=True)
class Meaning:
    predicates: tuple[tuple[str, tuple[str, ...]], ...]
    topic_marks: tuple[str, ...] = ()

    def variables(self) -> list[str]:
        out: list[str] = []
        for _, args in self.predicates:
            for a in args:
                if a not in out:
                    out.append(a)
        for m in self.topic_marks:
            if m not in out:
                out.append(m)
        return out

    def property_predicates(self) -> list[tuple[str, tuple[str, ...]]]:
        return [p for p in self.predicates if p[0] not in RELATION_HEADS]

    def relations(self) -> list[tuple[str, tuple[str, ...]]]:
        return [p for p in self.predicates if p[0] in RELATION_HEADS]

    def distinct_pairs(self) -> list[tuple[str, str]]:
        return [(args[0], args[1]) for head, args in self.predicates if head == DISTINCT]

    def render(self) -> str:
        parts = [f"{head}({', '.join('?' + a for a in args)})" for head, args in self.predicates]
        parts.extend(f"(topic ?{m})" for m in self.topic_marks)
        return ", ".join(parts)


def predicate_fact(head: str, args: tuple[str, ...]) -> Seq:
    return Seq((Atom(head),) + tuple(Var(a) for a in args))


def topic_fact(var: str) -> Seq:
    return Seq((Atom(TOPIC), Var(var)))


def meaning_facts(meaning: Meaning) -> list[Seq]:
    return [predicate_fact(h, a) for h, a in meaning.predicates]


def facts_to_meaning(facts: list[Value]) -> Meaning:
    """Read predicate and topic facts back into a Meaning.

    Unparseable members (non-sequences, empty sequences) are skipped so
    that robust comprehension output never fails here.
    """
    preds: list[tuple[str, tuple[str, ...]]] = []
    marks: list[str] = []

    def arg_name(v: Value) -> str:
        if isinstance(v, Var):
            return v.name
        if isinstance(v, Atom):
            return v.name
        return repr(v)

    for f in facts:
        if not isinstance(f, Seq) or not f.items or not isinstance(f.items[0], Atom):
            continue
        head = f.items[0].name
        args = tuple(arg_name(a) for a in f.items[1:])
        if head == TOPIC:
            if args and args[0] not in marks:
                marks.append(args[0])
        else:
            entry = (head, args)
            if entry not in preds:
                preds.append(entry)
    return Meaning(tuple(preds), tuple(marks))


def _canonical(preds: list[tuple[str, tuple[str, ...]]]) -> list[tuple[str, tuple[str, ...]]]:
    # distinct(x,y) asserts the same thing as distinct(y,x).
    out = []
    for h, args in preds:
        if h == DISTINCT:
            out.append((h, tuple(sorted(args))))
        else:
            out.append((h, args))
    return sorted(out)


def same_coreference_structure(a: Meaning, b: Meaning) -> bool:
    """True when some variable bijection maps a's predicate bag onto b's.

    Topic marks are ignored: comprehension output does not carry them in
    the emergent game, while intentions do.  Argument order of the
    symmetric distinct relation is ignored too.
    """
    pa, pb = list(a.predicates), list(b.predicates)
    if len(pa) != len(pb):
        return False
    va, vb = a.variables(), b.variables()
    if len(va) != len(vb):
        return False
    if len(va) > 6:
        # Bijection search explodes past this; fall back to greedy pairing.
        return sorted(h for h, _ in pa) == sorted(h for h, _ in pb)
    target = _canonical(pb)
    for perm in permutations(vb):
        mapping = dict(zip(va, perm))
        renamed = _canonical([(h, tuple(mapping.get(x, x) for x in args)) for h, args in pa])
        if renamed == target:
            return True
    return False
