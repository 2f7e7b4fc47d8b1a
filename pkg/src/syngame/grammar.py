"""Construction schemas and the bidirectional application engine.

A construction schema carries one lock per processing direction and a
single contribution.  Applying a schema matches the direction's lock
against the transient structure, merges the contribution under the
found bindings, and consumes the matched bookkeeping material so the
same schema cannot fire twice on the same tokens or predicates.

Comprehension and formulation are exhaustive best-first searches over
schema applications; among terminal states the engine prefers analyses
that group the most material and posit the fewest referents.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .fs import (
    Atom,
    Bindings,
    FeatureStructure,
    MergeConflict,
    Seq,
    Unit,
    ValueSet,
    Value,
    Var,
    match_structure,
    merge_structure,
    rename_variables,
    render_structure,
)
from .meaning import DISTINCT, Meaning, TOPIC, facts_to_meaning, meaning_facts, topic_fact

COMPREHENSION = "comprehension"
FORMULATION = "formulation"

ROOT = Atom("root")

FORM = "form"
MEANING = "meaning"
UNPROC_FORM = "unprocessed-form"
UNPROC_MEANING = "unprocessed-meaning"
UNPROC_ITEMS = "unprocessed-items"
LEX_CAT = "lex-cat"
REFERENT = "referent"
SUBUNITS = "subunits"
KIND = "kind"

TOKEN = "token"
PRECEDES = "precedes"

CONSUMABLE = (UNPROC_FORM, UNPROC_MEANING, UNPROC_ITEMS)

LEXICAL = "lexical"
GRAMMATICAL = "grammatical"

# Category ids derived from a word's own form, as opposed to invented
# supercategories; slots still keyed this way accept exactly one word.
WORD_CATEGORY_PREFIX = "cat-"


class AmbiguousOrder(Exception):
    """Strict rendering found no unique token linearization."""


class NameSource:
    """Deterministic fresh names for one engine invocation."""

    def __init__(self, prefix_offset: int = 0):
        self._n = prefix_offset

    def fresh(self, prefix: str) -> str:
        self._n += 1
        return f"{prefix}{self._n}"


@dataclass
class ConstructionSchema:
    """A sign: paired locks plus a contribution, with a usage score.

    ``kind`` is ``lexical`` or ``grammatical``.  The extra descriptive
    fields exist for learning and metrics; the engine itself only reads
    the locks, the contribution and the score.
    """

    name: str
    kind: str
    comp_lock: FeatureStructure
    form_lock: FeatureStructure
    contribution: FeatureStructure
    score: float = 0.5
    word: str | None = None
    predicate: str | None = None
    category: str | None = None
    phrase_kind: str | None = None  # "phrase" or "sentence" for grammatical schemas

    def slot_categories(self) -> tuple[str, ...]:
        """Category atoms constraining the lock's slots, in slot order."""
        out = []
        for u in self.comp_lock.units:
            v = u.get(LEX_CAT)
            if isinstance(v, Atom):
                out.append(v.name)
        return tuple(out)

    def lock(self, direction: str) -> FeatureStructure:
        return self.comp_lock if direction == COMPREHENSION else self.form_lock

    def concrete_slots(self) -> int:
        """How many slots are keyed to one word's own category."""
        return sum(
            1 for c in self.slot_categories() if c.startswith(WORD_CATEGORY_PREFIX)
        )

    def specificity(self) -> int:
        """Rough lock size: feature count plus set-member count, both locks."""
        total = 0
        for lock in (self.comp_lock, self.form_lock):
            for u in lock.units:
                total += len(u.features)
                for v in u.features.values():
                    if isinstance(v, ValueSet):
                        total += len(v)
        return total

    def render(self) -> str:
        head = f"schema {self.name} {self.kind} score={self.score:.4f}"
        parts = [head]
        for label, fsx in (
            ("comprehension-lock", self.comp_lock),
            ("formulation-lock", self.form_lock),
            ("contribution", self.contribution),
        ):
            parts.append(label + ":")
            parts.append(render_structure(fsx).rstrip("\n"))
        return "\n".join(parts) + "\n"


@dataclass
class TransientStructure:
    fs: FeatureStructure

    def root(self) -> Unit:
        u = self.fs.unit(ROOT)
        assert u is not None, "transient structure lost its root"
        return u

    def root_set(self, feature: str) -> ValueSet:
        v = self.root().get(feature)
        return v if isinstance(v, ValueSet) else ValueSet()

    def word_unit_names(self) -> list[Value]:
        return [u.name for u in self.fs.units if u.get(LEX_CAT) is not None]

    def leftover_word_items(self) -> int:
        count = 0
        for name in self.root_set(UNPROC_ITEMS):
            u = self.fs.unit(name)
            if u is not None and u.get(LEX_CAT) is not None:
                count += 1
        return count

    def leftover_property_facts(self) -> int:
        count = 0
        for f in self.root_set(UNPROC_MEANING):
            if isinstance(f, Seq) and f.items and isinstance(f.items[0], Atom) and f.items[0].name != DISTINCT:
                count += 1
        return count

    def leftover_distinct_facts(self) -> int:
        return len(self.root_set(UNPROC_MEANING)) - self.leftover_property_facts()

    def meaning(self) -> Meaning:
        facts: list[Value] = []
        for u in self.fs.units:
            mv = u.get(MEANING)
            if isinstance(mv, ValueSet):
                facts.extend(mv.items)
        return facts_to_meaning(facts)


def token_fact(unit_name: Value, word: str) -> Seq:
    return Seq((Atom(TOKEN), unit_name, Atom(word)))


def precedes_fact(a: Value, b: Value) -> Seq:
    return Seq((Atom(PRECEDES), a, b))


def de_render(tokens: Iterable[str]) -> TransientStructure:
    """Initial comprehension structure: token facts plus adjacent order facts."""
    tokens = list(tokens)
    names = [Atom(f"w{i + 1}") for i in range(len(tokens))]
    facts = [token_fact(n, t) for n, t in zip(names, tokens)]
    order = [precedes_fact(a, b) for a, b in zip(names, names[1:])]
    root = Unit(
        ROOT,
        {
            FORM: ValueSet(facts + order),
            UNPROC_FORM: ValueSet(facts),
            UNPROC_ITEMS: ValueSet(),
            MEANING: ValueSet(),
        },
    )
    return TransientStructure(FeatureStructure([root]))


def formulation_structure(meaning: Meaning) -> TransientStructure:
    """Initial formulation structure holding the intention's facts."""
    facts = meaning_facts(meaning)
    marks = [topic_fact(m) for m in meaning.topic_marks]
    root = Unit(
        ROOT,
        {
            MEANING: ValueSet(facts + marks),
            UNPROC_MEANING: ValueSet(facts),
            UNPROC_ITEMS: ValueSet(),
            FORM: ValueSet(),
        },
    )
    return TransientStructure(FeatureStructure([root]))


@dataclass
class Application:
    schema: ConstructionSchema
    bindings: Bindings
    result: TransientStructure
    consumed: tuple[tuple[str, Value], ...]
    link_paths: tuple


def _standardized(schema: ConstructionSchema, direction: str, names: NameSource) -> tuple[FeatureStructure, FeatureStructure]:
    lock = schema.lock(direction)
    contribution = schema.contribution
    mapping: dict[Var, Var] = {}

    def rn(v: Value) -> Value:
        if isinstance(v, Var):
            if v not in mapping:
                mapping[v] = Var(names.fresh("v"))
            return mapping[v]
        if isinstance(v, ValueSet):
            return ValueSet(rn(it) for it in v)
        if isinstance(v, Seq):
            return Seq(tuple(rn(it) for it in v.items))
        return v

    def rn_fs(s: FeatureStructure) -> FeatureStructure:
        return FeatureStructure(
            Unit(rn(u.name), {f: rn(val) for f, val in u.features.items()}) for u in s.units
        )

    return rn_fs(lock), rn_fs(contribution)


class _Prepared:
    """A schema standardized apart once for a whole engine invocation.

    Sharing the renamed lock across applications is safe because every
    free contribution variable is replaced per application and matching
    never leaks lock variables into the result.
    """

    __slots__ = ("schema", "lock", "contribution", "own_vars", "needs", "slot_need")

    def __init__(self, schema: ConstructionSchema, direction: str, names: NameSource):
        self.schema = schema
        self.lock, self.contribution = _standardized(schema, direction, names)
        self.own_vars = frozenset(self.lock.variables()) | frozenset(self.contribution.variables())
        self.needs = []
        lock_root = self.lock.unit(ROOT)
        if lock_root is not None:
            for feature in CONSUMABLE:
                lv = lock_root.get(feature)
                if isinstance(lv, ValueSet) and len(lv) > 0:
                    self.needs.append((feature, len(lv)))
        self.slot_need = sum(1 for u in self.lock.units if isinstance(u.get(LEX_CAT), Atom))


def _apply_prepared(
    prepared: _Prepared,
    ts: TransientStructure,
    direction: str,
    net,
    threshold: float,
    names: NameSource,
) -> list[Application]:
    rigid = direction == FORMULATION
    out: list[Application] = []
    for bnd in match_structure(prepared.lock, ts.fs, net, threshold, rigid_target=rigid):
        for cu in prepared.contribution.units:
            if isinstance(cu.name, Var):
                walked = bnd.walk(cu.name)
                if isinstance(walked, Var) and walked in prepared.own_vars:
                    bnd = bnd.bind(walked, Atom(names.fresh("u")))
        for v in prepared.contribution.variables():
            walked = bnd.walk(v)
            if isinstance(walked, Var) and walked in prepared.own_vars:
                bnd = bnd.bind(walked, Var(names.fresh("f")))
        try:
            merged = merge_structure(prepared.contribution, ts.fs, bnd)
        except MergeConflict:
            continue
        lock_root = prepared.lock.unit(ROOT)
        consumed: list[tuple[str, Value]] = []
        if lock_root is not None:
            root_unit = merged.unit(ROOT)
            feats = dict(root_unit.features)
            for feature in CONSUMABLE:
                lv = lock_root.get(feature)
                if not isinstance(lv, ValueSet):
                    continue
                resolved = [bnd.resolve(m) for m in lv]
                consumed.extend((feature, m) for m in resolved)
                cur = feats.get(feature)
                if isinstance(cur, ValueSet):
                    feats[feature] = cur.remove_all(resolved)
            merged = merged.with_unit(Unit(ROOT, feats))
        out.append(
            Application(prepared.schema, bnd, TransientStructure(merged), tuple(consumed), bnd.paths)
        )
    return out


def apply_schema(
    schema: ConstructionSchema,
    ts: TransientStructure,
    direction: str,
    net=None,
    threshold: float = 0.0,
    names: NameSource | None = None,
) -> list[Application]:
    """All ways the schema applies to the transient structure.

    Formulation matches rigidly (intention variables are constants);
    comprehension lets lock variables equate transient variables, which
    is how coreference gets asserted.  Matched members of the lock's
    unprocessed features are removed from the result.
    """
    if names is None:
        names = NameSource()
    return _apply_prepared(_Prepared(schema, direction, names), ts, direction, net, threshold, names)


# --- rendering ----------------------------------------------------------------


def _token_map(ts: TransientStructure) -> tuple[list[Value], dict[Value, str]]:
    units: list[Value] = []
    words: dict[Value, str] = {}
    for f in ts.root_set(FORM):
        if isinstance(f, Seq) and len(f.items) == 3 and f.items[0] == Atom(TOKEN):
            name, word = f.items[1], f.items[2]
            if name not in words and isinstance(word, Atom):
                units.append(name)
                words[name] = word.name
    return units, words


def _expand_tokens(ts: TransientStructure, name: Value, token_units: set, depth: int = 0) -> list[Value]:
    if name in token_units:
        return [name]
    if depth > 6:
        return []
    unit = ts.fs.unit(name)
    if unit is None:
        return []
    subs = unit.get(SUBUNITS)
    if not isinstance(subs, ValueSet):
        return []
    out: list[Value] = []
    for s in subs:
        out.extend(_expand_tokens(ts, s, token_units, depth + 1))
    return out


def linearize(ts: TransientStructure, mode: str = "robust", rng=None) -> list[Value]:
    """Order the structure's word units using its precedence facts.

    Order facts between composite units apply to all tokens beneath
    them.  Strict mode demands a unique linear order and raises
    AmbiguousOrder otherwise; robust mode resolves leftover freedom with
    the supplied rng and never fails.
    """
    units, words = _token_map(ts)
    token_set = set(units)
    after: dict[Value, set] = {u: set() for u in units}
    indegree: dict[Value, int] = {u: 0 for u in units}
    for f in ts.root_set(FORM):
        if not (isinstance(f, Seq) and len(f.items) == 3 and f.items[0] == Atom(PRECEDES)):
            continue
        left = _expand_tokens(ts, f.items[1], token_set)
        right = _expand_tokens(ts, f.items[2], token_set)
        for a in left:
            for b in right:
                if a != b and b not in after[a]:
                    after[a].add(b)
                    indegree[b] += 1
    order: list[Value] = []
    frontier = [u for u in units if indegree[u] == 0]
    remaining = set(units)
    while frontier:
        if len(frontier) > 1:
            if mode == "strict":
                raise AmbiguousOrder(f"{len(frontier)} tokens could come next")
            pick = rng.choice(frontier) if rng is not None else frontier[0]
        else:
            pick = frontier[0]
        frontier.remove(pick)
        remaining.discard(pick)
        order.append(pick)
        for b in after[pick]:
            indegree[b] -= 1
            if indegree[b] == 0 and b in remaining:
                frontier.append(b)
    if remaining:
        # Order facts formed a cycle; strict callers should hear about it.
        if mode == "strict":
            raise AmbiguousOrder("cyclic precedence facts")
        order.extend(u for u in units if u in remaining)
    return order


def render(ts: TransientStructure, mode: str = "robust", rng=None) -> list[str]:
    """Linearize and read off the words."""
    _, words = _token_map(ts)
    return [words[u] for u in linearize(ts, mode, rng)]


# --- search -------------------------------------------------------------------


@dataclass
class SearchNode:
    ts: TransientStructure
    application: Application | None
    parent: Optional["SearchNode"]
    seq: int
    product: float
    depth: int
    lex_product: float = 1.0
    gram_product: float = 1.0
    concrete: int = 0
    bneck: float = 1.0
    status: str = "open"
    children: list["SearchNode"] = field(default_factory=list)

    def path_applications(self) -> list[Application]:
        node, out = self, []
        while node.application is not None:
            out.append(node.application)
            node = node.parent
        out.reverse()
        return out


@dataclass
class EngineResult:
    direction: str
    solution: SearchNode | None
    tree: SearchNode
    utterance: list[str] | None = None
    word_order: list[Value] | None = None
    expansions: int = 0

    @property
    def ts(self) -> TransientStructure | None:
        return self.solution.ts if self.solution else None

    def meaning(self) -> Meaning:
        return self.solution.ts.meaning() if self.solution else Meaning(())

    def applications(self) -> list[Application]:
        return self.solution.path_applications() if self.solution else []

    def used_schemas(self) -> list[ConstructionSchema]:
        out = []
        for app in self.applications():
            if app.schema not in out:
                out.append(app.schema)
        return out

    def used_link_paths(self) -> list[tuple]:
        out = []
        for app in self.applications():
            out.extend(app.link_paths)
        return out

    def unknown_tokens(self) -> list[str]:
        if self.solution is None:
            return []
        out = []
        for f in self.solution.ts.root_set(UNPROC_FORM):
            if isinstance(f, Seq) and len(f.items) == 3 and isinstance(f.items[2], Atom):
                out.append(f.items[2].name)
        return out


def _effective(schema: ConstructionSchema, primed: frozenset, bonus: float) -> float:
    return schema.score + (bonus if schema.name in primed else 0.0)


def _lexical_key(fact: Value, direction: str) -> str | None:
    """What a lexical schema would be indexed under for this fact: the
    word of a token fact, or the head of a meaning fact."""
    if not (isinstance(fact, Seq) and fact.items and isinstance(fact.items[0], Atom)):
        return None
    if direction == COMPREHENSION:
        if fact.items[0].name == TOKEN and len(fact.items) == 3 and isinstance(fact.items[2], Atom):
            return fact.items[2].name
        return None
    return fact.items[0].name


def _expand(
    node: SearchNode,
    lex_index: dict[str, list[_Prepared]],
    grammatical: list[_Prepared],
    direction: str,
    net,
    threshold: float,
    names: NameSource,
    primed: frozenset,
    bonus: float,
    counter: list[int],
) -> list[SearchNode]:
    ts = node.ts
    feature = UNPROC_FORM if direction == COMPREHENSION else UNPROC_MEANING
    apps: list[Application] = []
    # Lexical applications commute, so only the earliest still-unprocessed
    # fact with a matching lexical schema is expanded at this node.
    for fact in ts.root_set(feature):
        key = _lexical_key(fact, direction)
        if key is None:
            continue
        candidates = lex_index.get(key)
        if not candidates:
            continue
        found = []
        for prepared in candidates:
            for app in _apply_prepared(prepared, ts, direction, net, threshold, names):
                if (feature, fact) in app.consumed:
                    found.append(app)
        if found:
            apps.extend(found)
            break
    sizes = {f: len(ts.root_set(f)) for f in CONSUMABLE}
    word_items = ts.leftover_word_items()
    for prepared in grammatical:
        if any(sizes[f] < n for f, n in prepared.needs):
            continue
        if prepared.slot_need > word_items:
            continue
        apps.extend(_apply_prepared(prepared, ts, direction, net, threshold, names))
    children: list[SearchNode] = []
    for app in apps:
        counter[0] += 1
        eff = _effective(app.schema, primed, bonus)
        lexical = app.schema.kind == LEXICAL
        app_bneck = 1.0
        for path in app.link_paths:
            for link in path:
                app_bneck = min(app_bneck, link.score)
        child = SearchNode(
            ts=app.result,
            application=app,
            parent=node,
            seq=counter[0],
            product=node.product * eff,
            depth=node.depth + 1,
            lex_product=node.lex_product * (eff if lexical else 1.0),
            gram_product=node.gram_product * (1.0 if lexical else eff),
            concrete=node.concrete + (0 if lexical else app.schema.concrete_slots()),
            bneck=min(node.bneck, app_bneck),
        )
        node.children.append(child)
        children.append(child)
    return children


def _solution_key(node: SearchNode, direction: str) -> tuple:
    """Ranking of finished analyses.

    Structure first (least material left unexplained, fewest referents),
    then word choice by lexical score, then grammar with word-specific
    schemas ranked below open-category ones regardless of score: an
    entrenched schema pinned to particular words must not shut out the
    young general convention that covers it.  Among the rest the
    stronger category-path bottleneck wins before schema score, so an
    analysis leaning on a link the score dynamics are pulling down
    yields to one whose memberships are in good standing.
    """
    ts = node.ts
    if direction == COMPREHENSION:
        m = ts.meaning()
        leftovers = len(ts.root_set(UNPROC_FORM)) + ts.leftover_word_items()
        return (
            leftovers,
            len(m.variables()),
            -node.lex_product,
            node.concrete,
            -node.bneck,
            -node.gram_product,
            node.seq,
        )
    return (
        ts.leftover_property_facts(),
        ts.leftover_distinct_facts(),
        ts.leftover_word_items(),
        -node.lex_product,
        node.concrete,
        -node.bneck,
        -node.gram_product,
        node.seq,
    )


def _search(
    start: TransientStructure,
    schemas: list[ConstructionSchema],
    direction: str,
    net,
    threshold: float,
    primed: frozenset,
    bonus: float,
    max_expansions: int,
) -> EngineResult:
    names = NameSource()
    counter = [0]
    # General schemas first: a schema whose slots are open categories is
    # tried before one pinned to particular words, even at a lower score,
    # so category-level conventions can displace word-specific ones they
    # overlap with.  Ties by recency: a newly adopted schema outranks an
    # equally scored older one, so agents drift toward the forms they
    # heard last.
    ordered = sorted(
        enumerate(schemas),
        key=lambda kv: (
            kv[1].concrete_slots(),
            -_effective(kv[1], primed, bonus),
            -kv[1].specificity(),
            -kv[0],
        ),
    )
    lex_index: dict[str, list[_Prepared]] = {}
    grammatical: list[_Prepared] = []
    for _, schema in ordered:
        prepared = _Prepared(schema, direction, names)
        key = schema.word if direction == COMPREHENSION else schema.predicate
        if schema.kind == LEXICAL and key is not None:
            lex_index.setdefault(key, []).append(prepared)
        else:
            grammatical.append(prepared)
    root = SearchNode(ts=start, application=None, parent=None, seq=0, product=1.0, depth=0)
    frontier: list[tuple[float, int, SearchNode]] = [(-1.0, 0, root)]
    terminals: list[SearchNode] = []
    expansions = 0
    while frontier and expansions < max_expansions:
        _, _, node = heapq.heappop(frontier)
        expansions += 1
        children = _expand(
            node, lex_index, grammatical, direction, net, threshold, names, primed, bonus, counter
        )
        if not children:
            node.status = "terminal"
            terminals.append(node)
            continue
        node.status = "expanded"
        for child in children:
            heapq.heappush(frontier, (-child.product, child.seq, child))
    if not terminals:
        # Cap hit before any leaf; fall back to the most processed node seen.
        leftovers = [n for _, _, n in frontier] or [root]
        terminals = [min(leftovers, key=lambda n: _solution_key(n, direction))]
    best = min(terminals, key=lambda n: _solution_key(n, direction))
    if direction == FORMULATION:
        complete = [n for n in terminals if n.ts.leftover_property_facts() == 0]
        if complete:
            best = min(complete, key=lambda n: _solution_key(n, direction))
        for n in terminals:
            if n.ts.leftover_property_facts() > 0:
                n.status = "dead-end"
    best.status = "solution"
    return EngineResult(direction=direction, solution=best, tree=root, expansions=expansions)


def ranked_solutions(result: EngineResult, limit: int = 8) -> list["EngineResult"]:
    """The finished analyses of a search, best first.

    Lets a caller fall back to the runner-up when the winning analysis
    turns out to denote nothing in the current scene.
    """
    nodes = []
    stack = [result.tree]
    while stack:
        node = stack.pop()
        if node.status in ("terminal", "solution"):
            nodes.append(node)
        stack.extend(node.children)
    nodes.sort(key=lambda n: _solution_key(n, result.direction))
    out = []
    seen = set()
    for node in nodes:
        m = node.ts.meaning()
        order = {v: i for i, v in enumerate(m.variables())}
        signature = (
            tuple((head, tuple(order.get(a, a) for a in args)) for head, args in m.predicates),
            tuple(sorted(order.get(v, v) for v in m.topic_marks)),
        )
        if signature in seen:
            continue
        seen.add(signature)
        out.append(
            EngineResult(
                direction=result.direction,
                solution=node,
                tree=result.tree,
                expansions=result.expansions,
            )
        )
        if len(out) >= limit:
            break
    return out


def comprehend(
    tokens: Iterable[str],
    schemas: list[ConstructionSchema],
    net=None,
    threshold: float = 0.0,
    primed: frozenset = frozenset(),
    priming_bonus: float = 0.0,
    max_expansions: int = 300,
) -> EngineResult:
    """Parse a token sequence.  Never fails: unknown words simply remain
    unprocessed and are listed on the result."""
    return _search(de_render(tokens), schemas, COMPREHENSION, net, threshold, primed, priming_bonus, max_expansions)


def formulate(
    meaning: Meaning,
    schemas: list[ConstructionSchema],
    net=None,
    threshold: float = 0.0,
    mode: str = "robust",
    rng=None,
    primed: frozenset = frozenset(),
    priming_bonus: float = 0.0,
    max_expansions: int = 300,
) -> EngineResult:
    """Produce an utterance for the meaning.

    The search prefers complete verbalizations that group every word;
    rendering is strict or robust per ``mode``.
    """
    result = _search(
        formulation_structure(meaning), schemas, FORMULATION, net, threshold, primed, priming_bonus, max_expansions
    )
    if result.solution is not None:
        _, words = _token_map(result.solution.ts)
        result.word_order = linearize(result.solution.ts, mode=mode, rng=rng)
        result.utterance = [words[u] for u in result.word_order]
    return result


def competitors_of(result: EngineResult, used: ConstructionSchema | None = None) -> list[ConstructionSchema]:
    """Schemas that matched the same material as a used application but
    lost: siblings of winning-path nodes whose consumption overlaps.

    With ``used`` given, only rivals of that schema's applications count.
    """
    if result.solution is None:
        return []
    rivals: list[ConstructionSchema] = []
    node = result.solution
    while node.application is not None:
        parent = node.parent
        if used is None or node.application.schema is used:
            mine = set(node.application.consumed)
            for sibling in parent.children:
                if sibling is node:
                    continue
                app = sibling.application
                if app.schema is node.application.schema:
                    continue
                if mine & set(app.consumed) and app.schema not in rivals:
                    if app.schema not in [a.schema for a in result.applications()]:
                        rivals.append(app.schema)
        node = parent
    return rivals


def dump_tree(root: SearchNode, indent: int = 0) -> str:
    """Indented text dump of a search tree, for debugging."""
    label = "start" if root.application is None else root.application.schema.name
    line = "  " * indent + f"{label} [{root.status}] p={root.product:.3f}"
    parts = [line]
    for child in root.children:
        parts.append(dump_tree(child, indent + 1))
    return "\n".join(parts)
