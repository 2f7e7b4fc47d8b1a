"""Inventory-changing operators.

Everything that can alter an agent's schemas or categorial network
lives here: re-entrance diagnosis, word invention and adoption, phrase
and sentence schema construction, anti-/pro-unification, supercategory
invention, and the lateral-inhibition score updates applied after each
game.  The game script itself never touches inventories directly.
"""

from __future__ import annotations

import dataclasses
import itertools
from dataclasses import dataclass

from .agent import Agent
from .catnet import BASE_VALUE, INVENTED, CategorialNetwork
from .fs import (
    Atom,
    Bindings,
    FeatureStructure,
    Seq,
    Unit,
    Value,
    ValueSet,
    Var,
    match_structure,
    substitute,
)
from .grammar import (
    FORM,
    KIND,
    LEX_CAT,
    LEXICAL,
    GRAMMATICAL,
    MEANING,
    REFERENT,
    ROOT,
    SUBUNITS,
    UNPROC_FORM,
    UNPROC_ITEMS,
    UNPROC_MEANING,
    WORD_CATEGORY_PREFIX,
    ConstructionSchema,
    EngineResult,
    comprehend,
    precedes_fact,
    token_fact,
)
from .meaning import DISTINCT, Meaning, same_coreference_structure

CONSONANTS = "bdfgklmnps"
VOWELS = "aeiou"

PHRASE = "phrase"
SENTENCE = "sentence"


def word_category(word: str) -> str:
    return WORD_CATEGORY_PREFIX + word


@dataclass
class Diagnostic:
    kind: str  # missing-coreference | unknown-word | no-discriminating-interpretation | lock-mismatch
    payload: dict


@dataclass(frozen=True)
class RepairRecord:
    kind: str
    agent: int
    items: tuple[str, ...]


class IncompatibleShape(Exception):
    """Anti-unification found no unit correspondence to generalize over."""


# --- schema builders -----------------------------------------------------------


def make_lexical(name: str, word: str, predicate: str, score: float = 0.5) -> ConstructionSchema:
    """One word, one predicate, and the word's own base category."""
    u, x = Var("u"), Var("x")
    tok = token_fact(u, word)
    fact = Seq((Atom(predicate), x))
    comp_lock = FeatureStructure([Unit(ROOT, {UNPROC_FORM: ValueSet([tok])})])
    form_lock = FeatureStructure([Unit(ROOT, {UNPROC_MEANING: ValueSet([fact])})])
    contribution = FeatureStructure(
        [
            Unit(ROOT, {FORM: ValueSet([tok]), UNPROC_ITEMS: ValueSet([u])}),
            Unit(u, {LEX_CAT: Atom(word_category(word)), REFERENT: x, MEANING: ValueSet([fact])}),
        ]
    )
    return ConstructionSchema(
        name,
        LEXICAL,
        comp_lock,
        form_lock,
        contribution,
        score,
        word=word,
        predicate=predicate,
        category=word_category(word),
    )


def make_phrase(name: str, slot_categories: tuple[str, ...], score: float = 0.5) -> ConstructionSchema:
    """N adjacent word slots sharing one referent, grouped into a phrase unit.

    Comprehension requires the slots to be pairwise adjacent in the
    utterance; formulation imposes exactly that order instead.
    """
    n = len(slot_categories)
    us = [Var(f"u{i + 1}") for i in range(n)]
    x, p = Var("x"), Var("p")
    order = ValueSet([precedes_fact(a, b) for a, b in zip(us, us[1:])])
    slot_units = [Unit(us[i], {LEX_CAT: Atom(slot_categories[i]), REFERENT: x}) for i in range(n)]
    # Slot units go first: they pin the variables down cheaply before the
    # root's set-subset matching runs.
    comp_lock = FeatureStructure(slot_units + [Unit(ROOT, {UNPROC_ITEMS: ValueSet(us), FORM: order})])
    form_lock = FeatureStructure(slot_units + [Unit(ROOT, {UNPROC_ITEMS: ValueSet(us)})])
    contribution = FeatureStructure(
        [
            Unit(ROOT, {UNPROC_ITEMS: ValueSet([p]), FORM: order}),
            Unit(p, {KIND: Atom(PHRASE), REFERENT: x, SUBUNITS: ValueSet(us)}),
        ]
    )
    return ConstructionSchema(
        name, GRAMMATICAL, comp_lock, form_lock, contribution, score, phrase_kind=PHRASE
    )


def make_sentence(name: str, score: float = 0.5) -> ConstructionSchema:
    """Two referring groups joined into one utterance about distinct objects."""
    a, b, x, y, s = Var("a"), Var("b"), Var("x"), Var("y"), Var("s")
    fact = Seq((Atom(DISTINCT), x, y))
    comp_lock = FeatureStructure(
        [
            Unit(a, {REFERENT: x}),
            Unit(b, {REFERENT: y}),
            Unit(ROOT, {UNPROC_ITEMS: ValueSet([a, b])}),
        ]
    )
    form_lock = FeatureStructure(
        [
            Unit(a, {REFERENT: x}),
            Unit(b, {REFERENT: y}),
            Unit(ROOT, {UNPROC_MEANING: ValueSet([fact]), UNPROC_ITEMS: ValueSet([a, b])}),
        ]
    )
    contribution = FeatureStructure(
        [
            Unit(ROOT, {UNPROC_ITEMS: ValueSet([s]), FORM: ValueSet([precedes_fact(a, b)])}),
            Unit(s, {KIND: Atom(SENTENCE), SUBUNITS: ValueSet([a, b]), MEANING: ValueSet([fact])}),
        ]
    )
    return ConstructionSchema(
        name, GRAMMATICAL, comp_lock, form_lock, contribution, score, phrase_kind=SENTENCE
    )


# --- invention and adoption -----------------------------------------------------


def invent_word(agent: Agent, predicate: str, rng, score: float = 0.5) -> ConstructionSchema:
    """Coin a fresh CV-syllable word for the predicate."""
    taken = {s.word for s in agent.lexical_schemas()}
    syllables = 3
    attempts = 0
    while True:
        word = "".join(rng.choice(CONSONANTS) + rng.choice(VOWELS) for _ in range(syllables))
        if word not in taken:
            break
        attempts += 1
        if attempts % 10 == 0:
            syllables += 1
    schema = make_lexical(agent.fresh_schema_name(f"lex-{word}"), word, predicate, score)
    agent.net.add_category(schema.category, BASE_VALUE)
    agent.add_schema(schema)
    return schema


def adopt_word(
    hearer: Agent,
    token: str,
    candidates: list[str],
    score: float = 0.5,
    ambiguous_score: float = 0.25,
) -> list[ConstructionSchema]:
    """Map an unknown token onto every plausible uncovered predicate.

    A single candidate is adopted at full initial score; several at the
    reduced one, leaving the competition to alignment.
    """
    pool = [
        p
        for p in candidates
        if not any(s.word == token and s.predicate == p for s in hearer.lexical_schemas())
    ]
    created = []
    initial = score if len(pool) == 1 else ambiguous_score
    for predicate in pool:
        schema = make_lexical(hearer.fresh_schema_name(f"lex-{token}"), token, predicate, initial)
        hearer.net.add_category(schema.category, BASE_VALUE)
        hearer.add_schema(schema)
        created.append(schema)
    return created


def invent_grammatical_schema(
    agent: Agent, slot_categories: tuple[str, ...], score: float = 0.5
) -> ConstructionSchema:
    """Word-specific phrase schema: one slot per word, in observed order."""
    for cat in slot_categories:
        agent.net.add_category(cat, BASE_VALUE)
    schema = make_phrase(agent.fresh_schema_name("phrase"), tuple(slot_categories), score)
    agent.add_schema(schema)
    return schema


def ensure_sentence_schema(agent: Agent, score: float = 0.5) -> tuple[ConstructionSchema, bool]:
    for s in agent.schemas:
        if s.phrase_kind == SENTENCE:
            return s, False
    schema = make_sentence(agent.fresh_schema_name("sent"), score)
    agent.add_schema(schema)
    return schema, True


# --- anti- and pro-unification ----------------------------------------------------


def anti_unify_structures(
    left: FeatureStructure, right: FeatureStructure
) -> tuple[FeatureStructure, list[tuple[str, Value, Value]]]:
    """Least general generalization of two structures.

    Units are put in bijection (same feature-name sets required;
    name-identical units preferred), then values are generalized
    pointwise: any mismatching pair is replaced by a variable, the same
    ordered pair always by the same variable.  The report lists each
    atom-against-atom mismatch with its feature, which is exactly the
    material supercategory invention feeds on.
    """
    if len(left) != len(right):
        raise IncompatibleShape(f"{len(left)} units vs {len(right)}")
    lus, rus = left.units, right.units

    order: list[int] | None = None

    def backtrack(i: int, used: frozenset, acc: tuple):
        nonlocal order
        if order is not None:
            return
        if i == len(lus):
            order = list(acc)
            return
        ranked = sorted(range(len(rus)), key=lambda j: (0 if rus[j].name == lus[i].name else 1, j))
        for j in ranked:
            if j in used or set(rus[j].features) != set(lus[i].features):
                continue
            backtrack(i + 1, used | {j}, acc + (j,))
            if order is not None:
                return

    backtrack(0, frozenset(), ())
    if order is None:
        raise IncompatibleShape("no unit correspondence with matching feature sets")

    taken = {v.name for v in left.variables()} | {v.name for v in right.variables()}
    table: dict[tuple[Value, Value], Var] = {}
    counter = [0]
    report: list[tuple[str, Value, Value]] = []

    def fresh_var() -> Var:
        while True:
            counter[0] += 1
            name = f"g{counter[0]}"
            if name not in taken:
                return Var(name)

    def lgg(x: Value, y: Value, feature: str) -> Value:
        if x == y:
            return x
        if isinstance(x, Seq) and isinstance(y, Seq) and len(x.items) == len(y.items):
            return Seq(tuple(lgg(a, b, feature) for a, b in zip(x.items, y.items)))
        if isinstance(x, ValueSet) and isinstance(y, ValueSet) and len(x) == len(y):
            return ValueSet(lgg(a, b, feature) for a, b in zip(x.items, y.items))
        key = (x, y)
        if key not in table:
            table[key] = fresh_var()
            if isinstance(x, Atom) and isinstance(y, Atom):
                report.append((feature, x, y))
        return table[key]

    units = []
    for i, j in enumerate(order):
        lu, ru = lus[i], rus[j]
        name = lgg(lu.name, ru.name, "unit-name")
        feats = {f: lgg(lu.features[f], ru.features[f], f) for f in lu.features}
        units.append(Unit(name, feats))
    return FeatureStructure(units), report


def anti_unify(
    schema: ConstructionSchema, ts_portion: FeatureStructure, direction: str
) -> tuple[ConstructionSchema, list[tuple[str, Value, Value]]]:
    """Generalize the direction's lock against the given structure portion."""
    from .grammar import COMPREHENSION

    lock = schema.lock(direction)
    generalized, report = anti_unify_structures(lock, ts_portion)
    if direction == COMPREHENSION:
        out = dataclasses.replace(schema, comp_lock=generalized)
    else:
        out = dataclasses.replace(schema, form_lock=generalized)
    return out, report


def pro_unify(
    generalized: FeatureStructure, ts: FeatureStructure, net=None, threshold: float = 0.0
) -> FeatureStructure:
    """Re-specialize an over-general structure against the current case.

    Variables that end up bound to the same atom are re-equated; if the
    structure no longer matches at all it is returned unchanged.
    """
    matches = match_structure(generalized, ts, net, threshold)
    if not matches:
        return generalized
    bnd = matches[0]
    by_value: dict[Value, list[Var]] = {}
    for var in generalized.variables():
        val = bnd.resolve(var)
        if isinstance(val, Atom):
            by_value.setdefault(val, []).append(var)
    mapping: dict[Var, Value] = {}
    for group in by_value.values():
        rep = group[0]
        for other in group[1:]:
            mapping[other] = rep
    if not mapping:
        return generalized
    return substitute(generalized, Bindings(mapping))


# --- supercategory invention --------------------------------------------------------


def invent_supercategory(
    net: CategorialNetwork, v: str, v_prime: str, fresh_category
) -> tuple[str, list[str], list]:
    """Make filler category v' acceptable where slot category v is required.

    Returns the category the slot should use afterwards, plus whatever
    categories and links were created.  Prefers reusing structure: an
    invented slot category absorbs the newcomer, an already-categorized
    value shares its parent, and only two complete strangers get a fresh
    common supercategory.
    """
    for cat in (v, v_prime):
        net.add_category(cat, BASE_VALUE)
    ok, _ = net.connected(v_prime, v)
    if ok:
        return v, [], []

    def link(child: str, parent: str):
        before = {(l.child, l.parent) for l in net.out_links(child)}
        lnk = net.ensure_link(child, parent)
        return lnk, (child, parent) not in before

    if net.categories[v].origin == INVENTED:
        lnk, fresh = link(v_prime, v)
        return v, [], [lnk] if fresh else []
    v_parent = net.preferred_parent(v)
    if v_parent is not None:
        lnk, fresh = link(v_prime, v_parent)
        return v_parent, [], [lnk] if fresh else []
    vp_parent = net.preferred_parent(v_prime)
    if vp_parent is not None:
        lnk, fresh = link(v, vp_parent)
        return vp_parent, [], [lnk] if fresh else []
    c = fresh_category()
    net.add_category(c, INVENTED)
    l1, _ = link(v, c)
    l2, _ = link(v_prime, c)
    return c, [c], [l1, l2]


def plan_slot_resolution(
    net: CategorialNetwork,
    v: str,
    v_prime: str,
    cohort: tuple[str, ...] = (),
    commit_threshold: float = 0.5,
):
    """Dry-run of slot generalization: how filler v' could reach slot v.

    An invented slot category absorbs the newcomer; a slot keyed by a
    word's own category pairs with the filler under a fresh
    supercategory, which is paradigm substitution in the strict sense.
    Deliberately no funneling of fillers toward a slot's existing
    parents: that channel lets whichever supercategory formed first
    swallow every word it is ever seen next to.

    Two situations block the slot instead.  A filler holding a solid
    membership elsewhere is already spoken for; piling up parallel
    memberships is the other road to the all-swallowing category, and
    a filler whose one membership has gone sour first has to lose it
    to the score dynamics.  And a paradigm that already holds a word
    uttered next to v' in this very group can never be the right home,
    because words describing one object along different dimensions are
    not substitutes for each other.
    """
    if net.has_category(v) and net.has_category(v_prime):
        ok, _ = net.connected(v_prime, v)
        if ok:
            return ("noop", v)
    committed = any(
        link.score >= commit_threshold for link in net.out_links(v_prime)
    )
    if committed:
        return ("blocked", None)
    if net.has_category(v) and net.categories[v].origin == INVENTED:
        for other in cohort:
            if other != v_prime and any(
                link.parent == v for link in net.out_links(other)
            ):
                return ("blocked", None)
        return ("absorb", v)
    return ("fresh", None)


def _apply_slot_plan(
    net: CategorialNetwork, plan, v: str, v_prime: str, fresh_category
) -> tuple[str, list[str], list]:
    """Execute exactly what plan_slot_resolution promised.

    Plans for all slots of a schema are validated together before any
    of them runs; re-deriving the action here could see a net already
    changed by an earlier slot and resolve differently, which is how
    two slots of one schema end up requiring the same category.
    """
    action, _ = plan
    for cat in (v, v_prime):
        net.add_category(cat, BASE_VALUE)
    created_links = []

    def link(child: str, parent: str) -> None:
        before = {(l.child, l.parent) for l in net.out_links(child)}
        lnk = net.ensure_link(child, parent)
        if (child, parent) not in before:
            created_links.append(lnk)

    if action == "noop":
        return v, [], []
    if action == "absorb":
        link(v_prime, v)
        return v, [], created_links
    c = fresh_category()
    net.add_category(c, INVENTED)
    link(v, c)
    link(v_prime, c)
    return c, [c], created_links


def generalize_or_invent_phrase(
    agent: Agent,
    word_categories: tuple[str, ...],
    score: float = 0.5,
) -> tuple[ConstructionSchema, RepairRecord | None]:
    """Cover a word group: substitute into one open slot of an almost
    matching schema, or build a schema over the words' own categories.

    Stretching a schema demands that every other slot already accept
    its word, so the matched frame pins down which paradigm the one odd
    word joins.  This is the only move that adds links to the network
    from here; with two or more open slots the frame no longer says
    which word belongs where, and binding categories together on such
    evidence is what smears the paradigms into one other.  Groups that
    no schema nearly covers get their own schema instead, each word
    represented by its preferred category when it has one.

    The cost model leans the same way: composing from already-settled
    categories is cheapest of all, so words with a category are reused
    rather than filed again, while an uncommitted word prefers joining
    a paradigm over getting its own schema slot.  Wrong guesses here
    are expected; they surface as competing subcategory links that the
    per-game score updates settle.

    The one hard constraint is that no two slots of one schema may end
    up requiring the same category: a group never describes the same
    object twice along one dimension, so collapsed slots would license
    word strings nobody produces.
    """
    net = agent.net
    candidates = [
        s
        for s in agent.grammatical_schemas()
        if s.phrase_kind == PHRASE and len(s.slot_categories()) == len(word_categories)
    ]
    candidates.sort(key=lambda s: -s.score)
    best: tuple | None = None
    for rank, schema in enumerate(candidates):
        slots = schema.slot_categories()
        plans = [
            plan_slot_resolution(net, v, v_prime, word_categories, score)
            for v, v_prime in zip(slots, word_categories)
        ]
        open_slots = [i for i, (action, _) in enumerate(plans) if action != "noop"]
        if not open_slots:
            return schema, None
        if len(open_slots) != 1:
            continue
        if plans[open_slots[0]][0] == "blocked":
            continue
        resulting = [
            ("fresh-slot", i) if action == "fresh" else target
            for i, (action, target) in enumerate(plans)
        ]
        if len(set(resulting)) != len(resulting):
            continue
        action, target = plans[open_slots[0]]
        cost = 0.5 if action == "absorb" else 1.5
        # Prefer the roomier paradigm on equal cost: categories that keep
        # their members grow, ones that keep losing them to conflation
        # evictions stay small, so size is a track record.
        size = 0
        if action == "absorb":
            size = sum(1 for l in net.links() if l.parent == target)
        key = (cost, -size, rank)
        if best is None or key < best[0]:
            best = (key, schema, plans)

    compose_slots: list[str] = []
    compose_cost = 1.0
    taken: set[str] = set()
    for cat in word_categories:
        parent = net.preferred_parent(cat) if net.has_category(cat) else None
        if parent is None or parent in taken:
            compose_slots.append(cat)
            taken.add(cat)
            compose_cost += 1.5
        else:
            compose_slots.append(parent)
            taken.add(parent)

    if best is not None and best[0][0] <= compose_cost:
        (cost, _), schema, plans = best
        created_cats: list[str] = []
        created_links = []
        final_slots = []
        for plan, (v, v_prime) in zip(plans, zip(schema.slot_categories(), word_categories)):
            cat, cats, links = _apply_slot_plan(net, plan, v, v_prime, agent.fresh_category)
            final_slots.append(cat)
            created_cats.extend(cats)
            created_links.extend(links)
        if tuple(final_slots) != schema.slot_categories():
            rewrite_slots(schema, tuple(final_slots))
        link_items = tuple(f"{l.child}->{l.parent}" for l in created_links)
        items = (schema.name, *created_cats, *link_items)
        return schema, RepairRecord("generalize-schema", agent.id, items)

    wanted = tuple(compose_slots)
    for s in candidates:
        if s.slot_categories() == wanted:
            return s, None
    schema = invent_grammatical_schema(agent, wanted, score)
    return schema, RepairRecord("invent-grammatical-schema", agent.id, (schema.name,))


def rewrite_slots(schema: ConstructionSchema, new_categories: tuple[str, ...]) -> None:
    """Point the schema's slot constraints at different categories."""

    def rebuild(structure: FeatureStructure) -> FeatureStructure:
        units = []
        i = 0
        for u in structure.units:
            if isinstance(u.get(LEX_CAT), Atom):
                units.append(u.with_feature(LEX_CAT, Atom(new_categories[i])))
                i += 1
            else:
                units.append(u)
        return FeatureStructure(units)

    schema.comp_lock = rebuild(schema.comp_lock)
    schema.form_lock = rebuild(schema.form_lock)


# --- re-entrance -------------------------------------------------------------------


def re_enter(
    agent: Agent,
    tokens: list[str],
    intended: Meaning,
    threshold: float = 0.0,
    max_expansions: int = 300,
) -> tuple[list[Diagnostic], EngineResult]:
    """Parse one's own utterance and compare against the intention.

    Returns the diagnostics a hearer-simulation turns up: unknown words,
    object groups whose words do not share a variable in the parse, and
    a lost distinct relation.
    """
    parse = comprehend(tokens, agent.schemas, agent.net, threshold, max_expansions=max_expansions)
    parsed = parse.meaning()
    diagnostics: list[Diagnostic] = []
    for tok in parse.unknown_tokens():
        diagnostics.append(Diagnostic("unknown-word", {"token": tok}))
    intent = Meaning(intended.predicates)
    if same_coreference_structure(intent, parsed):
        return diagnostics, parse

    occurrences = {(h, a) for h, args in parsed.property_predicates() for a in args}
    parsed_vars = parsed.variables()
    groups: dict[str, list[str]] = {}
    for head, args in intent.property_predicates():
        groups.setdefault(args[0], []).append(head)
    for var, heads in groups.items():
        if len(heads) < 2:
            continue
        if not any(all((h, pv) in occurrences for h in heads) for pv in parsed_vars):
            diagnostics.append(
                Diagnostic("missing-coreference", {"variable": var, "predicates": tuple(heads)})
            )
    for x, y in intent.distinct_pairs():
        if not parsed.distinct_pairs():
            diagnostics.append(
                Diagnostic("missing-coreference", {"variables": (x, y), "predicates": (DISTINCT,)})
            )
    if not diagnostics:
        diagnostics.append(
            Diagnostic("lock-mismatch", {"parsed": parsed.render(), "intended": intent.render()})
        )
    return diagnostics, parse


# --- alignment ---------------------------------------------------------------------


def lexical_rivals(agent: Agent, used: list[ConstructionSchema]) -> list[ConstructionSchema]:
    """Own lexical schemas naming the same predicate or the same word."""
    used_lex = [s for s in used if s.kind == LEXICAL]
    out = []
    for s in agent.lexical_schemas():
        if s in used:
            continue
        if any(s.predicate == u.predicate or s.word == u.word for u in used_lex):
            out.append(s)
    return out


def phrase_rivals(
    agent: Agent,
    used_schema: ConstructionSchema,
    filler_categories: tuple[str, ...],
    threshold: float = 0.0,
) -> list[ConstructionSchema]:
    """Own phrase schemas that could have grouped the same words.

    Word order is deliberately ignored: an order variant competes for
    the same communicative job even though only one of them can match a
    given utterance.
    """
    out = []
    for s in agent.grammatical_schemas():
        if s is used_schema or s.phrase_kind != PHRASE:
            continue
        slots = s.slot_categories()
        if len(slots) != len(filler_categories):
            continue
        for perm in itertools.permutations(filler_categories):
            if all(agent.net.connected(c, slot, threshold)[0] for c, slot in zip(perm, slots)):
                out.append(s)
                break
    return out


def align(
    agent: Agent,
    used: list[ConstructionSchema],
    competitors: list[ConstructionSchema],
    link_paths: list,
    success: bool,
    delta_plus: float = 0.1,
    delta_minus: float = 0.2,
    link_alignment: bool = True,
) -> None:
    """Selectionist score update for one game outcome.

    Success rewards what was used and punishes what competed; failure
    punishes what was used.  Schemas and links pruned at zero.
    """
    used_unique: list[ConstructionSchema] = []
    for s in used:
        if s not in used_unique:
            used_unique.append(s)
    links_unique = []
    seen = set()
    for path in link_paths:
        for link in path:
            if id(link) not in seen:
                seen.add(id(link))
                links_unique.append(link)
    if success:
        for s in used_unique:
            s.score = min(1.0, s.score + delta_plus)
        comp_unique: list[ConstructionSchema] = []
        for s in competitors:
            if s not in comp_unique and s not in used_unique:
                comp_unique.append(s)
        for s in comp_unique:
            s.score = max(0.0, s.score - delta_minus)
            if s.score <= 0.0:
                agent.remove_schema(s)
        if link_alignment:
            agent.net.reward_path(tuple(links_unique), delta_plus)
            agent.net.punish_competitors(tuple(links_unique), delta_minus)
    else:
        for s in used_unique:
            s.score = max(0.0, s.score - delta_minus)
            if s.score <= 0.0:
                agent.remove_schema(s)
        if link_alignment:
            agent.net.punish_path(tuple(links_unique), delta_minus)


def punish_conflations(agent: Agent, groups) -> None:
    """Words uttered together about one object can never be alternatives
    for one slot: an object has a single value along each attribute, so
    co-description is proof of belonging to different paradigms.  Where
    two co-described words nonetheless share a parent category, that
    category conflates paradigms, and the weaker of the two membership
    links is severed on the spot; the evicted word finds a new home
    through the ordinary repairs.  This is not a graded penalty like the
    game-outcome updates, because co-description is not noisy evidence.
    A membership that merely loses games can recover; one contradicted
    by an attested utterance cannot.  Links inside a clean category
    never meet this rule: its members never co-describe anything.
    """
    net = agent.net
    for group in groups:
        cats = [c for c in group if net.has_category(c)]
        for a, b in itertools.combinations(cats, 2):
            if a == b:
                continue
            parents_a = {link.parent: link for link in net.out_links(a)}
            for link_b in list(net.out_links(b)):
                link_a = parents_a.get(link_b.parent)
                if link_a is None or link_a.score <= 0.0:
                    continue
                weaker = min((link_a, link_b), key=lambda l: (l.score, -l.seq))
                net.punish_link(weaker, weaker.score)


def punish_counterevidenced(
    agent: Agent, schemas: list[ConstructionSchema], delta_minus: float = 0.2
) -> None:
    """Punish word hypotheses the revealed topic directly rules out.

    Hearing a word used for a topic its recorded meaning cannot describe
    is a lost competition for that meaning, same as losing in the search
    tree of a successful game.
    """
    unique: list[ConstructionSchema] = []
    for s in schemas:
        if s not in unique:
            unique.append(s)
    for s in unique:
        s.score = max(0.0, s.score - delta_minus)
        if s.score <= 0.0:
            agent.remove_schema(s)
