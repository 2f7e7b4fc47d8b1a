"""Scenes, conceptualization, interpretation, and the game script.

A game is one referential exchange: the speaker conceptualizes a
discriminating description of a topic, formulates and transmits it, the
hearer interprets and points, and both sides repair and align on the
revealed outcome.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

from .agent import Agent
from .grammar import (
    LEX_CAT,
    MEANING,
    REFERENT,
    EngineResult,
    comprehend,
    formulate,
    ranked_solutions,
)
from .learning import (
    PHRASE,
    Diagnostic,
    RepairRecord,
    adopt_word,
    ensure_sentence_schema,
    generalize_or_invent_phrase,
    invent_word,
    lexical_rivals,
    phrase_rivals,
    punish_conflations,
    punish_counterevidenced,
    re_enter,
    align,
)
from .fs import Atom, Seq, ValueSet, Var
from .meaning import DISTINCT, LEFT_OF, Meaning
from .grammar import competitors_of

COLORS = ("yellow", "blue", "green", "red")
SIZES = ("tiny", "small", "large", "huge")
SHAPES = ("square", "triangle", "circle")
DIMENSIONS = (("color", COLORS), ("size", SIZES), ("shape", SHAPES))
ALL_PREDICATES = COLORS + SIZES + SHAPES


@dataclass(frozen=True)
class ObjectSpec:
    color: str
    size: str
    shape: str
    position: tuple[int, int] | None = None

    def properties(self) -> tuple[str, str, str]:
        return (self.color, self.size, self.shape)

    def has(self, predicate: str) -> bool:
        return predicate in self.properties()


@dataclass(frozen=True)
class Scene:
    objects: tuple[ObjectSpec, ...]

    def left_of(self, i: int, j: int) -> bool:
        a, b = self.objects[i].position, self.objects[j].position
        return a is not None and b is not None and a[0] < b[0]


def generate_scene(rng, size: int = 4, relations: bool = False) -> Scene:
    """Objects with pairwise distinct property triples; grid positions
    only when relations are in play."""
    triples: list[tuple[str, str, str]] = []
    while len(triples) < size:
        t = (rng.choice(COLORS), rng.choice(SIZES), rng.choice(SHAPES))
        if t not in triples:
            triples.append(t)
    positions: list[tuple[int, int] | None]
    if relations:
        cells = [(x, y) for y in range(4) for x in range(4)]
        positions = rng.sample(cells, size)
    else:
        positions = [None] * size
    return Scene(tuple(ObjectSpec(*t, position=p) for t, p in zip(triples, positions)))


def choose_topic(rng, scene: Scene) -> tuple[int, ...]:
    k = rng.choice((1, 2))
    return tuple(sorted(rng.sample(range(len(scene.objects)), k)))


# --- conceptualization ---------------------------------------------------------


def _subset_order(obj: ObjectSpec) -> list[tuple[str, ...]]:
    """All property subsets of an object, smallest first, dimensions in
    color, size, shape order within each subset."""
    props = obj.properties()
    out: list[tuple[str, ...]] = []
    for n in (1, 2, 3):
        out.extend(itertools.combinations(props, n))
    return out


def discriminating_subsets(scene: Scene, topic: tuple[int, ...], index: int) -> list[tuple[str, ...]]:
    """Minimal property subsets of the object that no non-topic object has."""
    others = [o for i, o in enumerate(scene.objects) if i not in topic]
    found: list[tuple[str, ...]] = []
    size_found: int | None = None
    for subset in _subset_order(scene.objects[index]):
        if size_found is not None and len(subset) > size_found:
            break
        if any(all(o.has(p) for p in subset) for o in others):
            continue
        found.append(subset)
        size_found = len(subset)
    return found


def discriminating_predicates(scene: Scene, topic: tuple[int, ...]) -> list[str]:
    """Union of all minimal discriminating subsets across the topic."""
    out: list[str] = []
    for index in topic:
        for subset in discriminating_subsets(scene, topic, index):
            for p in subset:
                if p not in out:
                    out.append(p)
    return out


def _meaning_from_subsets(
    scene: Scene,
    topic: tuple[int, ...],
    chosen: dict[int, tuple[str, ...]],
    relations: bool,
) -> Meaning:
    preds: list[tuple[str, tuple[str, ...]]] = []
    marks: list[str] = []
    variables: dict[int, str] = {}
    for n, index in enumerate(topic):
        var = f"x{n + 1}"
        variables[index] = var
        marks.append(var)
        for p in chosen[index]:
            preds.append((p, (var,)))
    if len(topic) == 2:
        a, b = topic
        if relations and scene.left_of(a, b):
            preds.append((LEFT_OF, (variables[a], variables[b])))
        elif relations and scene.left_of(b, a):
            preds.append((LEFT_OF, (variables[b], variables[a])))
        preds.append((DISTINCT, (variables[a], variables[b])))
    return Meaning(tuple(preds), tuple(marks))


def conceptualize(scene: Scene, topic: tuple[int, ...], rng, relations: bool = False) -> Meaning:
    """Smallest description separating the topic from the rest of the scene.

    One variable per topic object; ties between equally small subsets are
    broken randomly.  Two-object topics assert the objects are distinct,
    plus their positional relation when the scene carries positions.
    """
    chosen: dict[int, tuple[str, ...]] = {}
    for index in topic:
        options = discriminating_subsets(scene, topic, index)
        chosen[index] = options[0] if len(options) == 1 else rng.choice(options)
    return _meaning_from_subsets(scene, topic, chosen, relations)


def conceptualize_safe(scene: Scene, topic: tuple[int, ...], rng, relations: bool = False) -> Meaning:
    """Conceptualize, dodging pair descriptions that also read as one object.

    Two per-object subsets can union into a property set that some single
    scene object satisfies, and a hearer preferring the smallest referent
    set will resolve the utterance to that object.  Prefer a choice of
    subsets without that overlap, growing a description by one extra true
    property when the minimal ones cannot avoid it.
    """
    if len(topic) != 2:
        return conceptualize(scene, topic, rng, relations)
    a, b = topic

    def tiers(index: int) -> tuple[list[tuple[str, ...]], list[tuple[str, ...]]]:
        minimal = discriminating_subsets(scene, topic, index)
        props = scene.objects[index].properties()
        seen = {frozenset(s) for s in minimal}
        extended: list[tuple[str, ...]] = []
        for base in minimal:
            for p in props:
                if p in base:
                    continue
                ext = tuple(q for q in props if q in base or q == p)
                if frozenset(ext) not in seen:
                    seen.add(frozenset(ext))
                    extended.append(ext)
        return minimal, extended

    min_a, ext_a = tiers(a)
    min_b, ext_b = tiers(b)

    def collides(sa: tuple[str, ...], sb: tuple[str, ...]) -> bool:
        union = set(sa) | set(sb)
        return any(all(o.has(p) for p in union) for o in scene.objects)

    for pool_a, pool_b in ((min_a, min_b), (min_a, ext_b), (ext_a, min_b), (ext_a, ext_b)):
        combos = [c for c in itertools.product(pool_a, pool_b) if not collides(*c)]
        if combos:
            sa, sb = combos[0] if len(combos) == 1 else rng.choice(combos)
            return _meaning_from_subsets(scene, topic, {a: sa, b: sb}, relations)
    return conceptualize(scene, topic, rng, relations)


# --- interpretation -------------------------------------------------------------


@dataclass(frozen=True)
class Candidate:
    objects: tuple[int, ...]
    marked: tuple[int, ...]


@dataclass
class Interpretation:
    candidates: list[Candidate]
    top: Candidate | None
    partitions_explored: int
    cap_hit: bool

    def pointed(self) -> tuple[int, ...]:
        if self.top is None:
            return ()
        return self.top.marked if self.top.marked else self.top.objects


def count_partitions(n: int) -> int:
    """Number of ways to partition an n-element set (Bell triangle)."""
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]


def _partitions(elements: list[str]):
    """Restricted-growth enumeration: every partition exactly once."""

    def rec(i: int, blocks: list[list[str]]):
        if i == len(elements):
            yield [list(b) for b in blocks]
            return
        e = elements[i]
        for b in blocks:
            b.append(e)
            yield from rec(i + 1, blocks)
            b.pop()
        blocks.append([e])
        yield from rec(i + 1, blocks)
        blocks.pop()

    if not elements:
        yield []
        return
    yield from rec(0, [])


def interpret(
    meaning: Meaning,
    scene: Scene,
    rng=None,
    partition_cap: int = 10_000,
) -> Interpretation:
    """All ways the meaning's variables can identify scene objects.

    Every identification partition of the variables is generated and
    counted; partitions merging arguments of a distinct or positional
    relation are discarded, the rest are checked against the scene by
    injective block-to-object assignment.  Candidates are ranked by
    fewest objects; a tie at the top is broken randomly.
    """
    variables = meaning.variables()
    if not variables or not meaning.predicates:
        return Interpretation([], None, 0, False)
    required: dict[str, list[str]] = {v: [] for v in variables}
    for head, args in meaning.property_predicates():
        for a in args:
            if head not in required[a]:
                required[a].append(head)
    forbidden: set[frozenset] = set()
    positional: list[tuple[str, str]] = []
    for head, args in meaning.relations():
        if len(args) == 2:
            forbidden.add(frozenset(args))
            if head == LEFT_OF:
                positional.append((args[0], args[1]))
    marked = set(meaning.topic_marks)

    explored = 0
    cap_hit = False
    seen: set[tuple[tuple[int, ...], tuple[int, ...]]] = set()
    candidates: list[Candidate] = []
    for blocks in _partitions(variables):
        if explored >= partition_cap:
            cap_hit = True
            break
        explored += 1
        if any(any(frozenset((x, y)) in forbidden for x, y in itertools.combinations(b, 2)) for b in blocks):
            continue
        needs = [sorted({p for v in b for p in required[v]}) for b in blocks]
        var_block = {v: bi for bi, b in enumerate(blocks) for v in b}

        def assignments(bi: int, used: set):
            if bi == len(blocks):
                yield {}
                return
            for oi, obj in enumerate(scene.objects):
                if oi in used or not all(obj.has(p) for p in needs[bi]):
                    continue
                for rest in assignments(bi + 1, used | {oi}):
                    rest[bi] = oi
                    yield rest

        for assign in assignments(0, set()):
            ok = True
            for x, y in positional:
                if not scene.left_of(assign[var_block[x]], assign[var_block[y]]):
                    ok = False
                    break
            if not ok:
                continue
            objects = tuple(sorted(set(assign.values())))
            marks = tuple(sorted({assign[var_block[v]] for v in marked if v in var_block}))
            if (objects, marks) in seen:
                continue
            seen.add((objects, marks))
            candidates.append(Candidate(objects, marks))
    top: Candidate | None = None
    if candidates and not cap_hit:
        best_size = min(len(c.objects) for c in candidates)
        leaders = [c for c in candidates if len(c.objects) == best_size]
        if len(leaders) == 1 or rng is None:
            top = leaders[0]
        else:
            top = leaders[rng.randrange(len(leaders))]
    return Interpretation(candidates, top, explored, cap_hit)


# --- the game script --------------------------------------------------------------


@dataclass
class GameParams:
    threshold: float = 0.0
    delta_plus: float = 0.1
    delta_minus: float = 0.2
    initial_score: float = 0.5
    ambiguous_score: float = 0.25
    priming_bonus: float = 0.05
    max_expansions: int = 300
    partition_cap: int = 10_000
    speaker_attempts: int = 3
    parse_alternates: int = 8
    link_alignment: bool = True
    relations: bool = False


@dataclass
class GameOutcome:
    success: bool
    tokens: list[str]
    intention: Meaning
    topic: tuple[int, ...]
    pointed: tuple[int, ...]
    speaker_result: EngineResult | None
    hearer_result: EngineResult | None
    partitions_explored: int
    cap_hit: bool
    coherent: bool
    repairs: list[RepairRecord] = field(default_factory=list)
    diagnostics: list[Diagnostic] = field(default_factory=list)


def _decisive(interp: Interpretation) -> bool:
    """Does the interpretation single out exactly one smallest referent set?"""
    if not interp.candidates or interp.cap_hit:
        return False
    sizes = [len(c.objects) for c in interp.candidates]
    return sizes.count(min(sizes)) == 1


def _ground(
    result: EngineResult, scene: Scene, rng, params: GameParams
) -> tuple[EngineResult, Interpretation]:
    """Resolve an analysis against the scene.

    The best analysis may hinge on a wrongly guessed word meaning and
    then denote nothing, or denote several things at once.  The speaker
    only ever utters discriminating descriptions, so fall through the
    runner-up analyses looking for one that singles out a unique
    referent; the situation itself disambiguates between competing
    hypotheses.
    """
    interp = interpret(result.meaning(), scene, rng, params.partition_cap)
    if _decisive(interp):
        return result, interp
    fallback: tuple[EngineResult, Interpretation] | None = None
    if interp.candidates:
        fallback = (result, interp)
    for alternate in ranked_solutions(result, params.parse_alternates)[1:]:
        candidate = interpret(alternate.meaning(), scene, rng, params.partition_cap)
        if _decisive(candidate):
            return alternate, candidate
        if fallback is None and candidate.candidates:
            fallback = (alternate, candidate)
    if fallback is not None:
        return fallback
    return result, interp


def _swap_distinct(meaning: Meaning) -> Meaning:
    preds = tuple(
        (h, (args[1], args[0])) if h == DISTINCT and len(args) == 2 else (h, args)
        for h, args in meaning.predicates
    )
    return Meaning(preds, meaning.topic_marks)


def _comparison_meaning(meaning: Meaning) -> Meaning:
    """What re-entrance can be held to: property facts plus distinct.

    Positional facts have no verbal counterpart here, so they are not
    demanded back from one's own parse.
    """
    return Meaning(tuple(p for p in meaning.predicates if p[0] != LEFT_OF))


def _group_categories(result: EngineResult, variable: str) -> tuple[str, ...]:
    """Categories of the formulated words referring to one variable, in
    utterance order."""
    if result.solution is None or result.word_order is None:
        return ()
    out: list[str] = []
    for name in result.word_order:
        unit = result.solution.ts.fs.unit(name)
        if unit is None:
            continue
        ref = unit.get(REFERENT)
        cat = unit.get(LEX_CAT)
        if isinstance(ref, Var) and ref.name == variable and isinstance(cat, Atom):
            out.append(cat.name)
    return tuple(out)


def _referent_groups(result: EngineResult) -> list[tuple[str, ...]]:
    """Word categories of each multi-word object description in the
    analysis, keyed by shared referent variable."""
    if result.solution is None:
        return []
    per_var: dict[str, list[str]] = {}
    for unit in result.solution.ts.fs.units:
        cat = unit.get(LEX_CAT)
        ref = unit.get(REFERENT)
        if isinstance(cat, Atom) and isinstance(ref, Var):
            per_var.setdefault(ref.name, []).append(cat.name)
    return [tuple(cats) for cats in per_var.values() if len(cats) >= 2]


def _speaker_turn(
    speaker: Agent,
    intention: Meaning,
    scene: Scene,
    topic: tuple[int, ...],
    rng,
    params: GameParams,
) -> tuple[list[str], Meaning, EngineResult, list[RepairRecord], list[Diagnostic]]:
    """Formulate, self-comprehend, repair or rephrase, until the utterance
    is faithful or the attempt budget runs out."""
    repairs: list[RepairRecord] = []
    diagnostics: list[Diagnostic] = []
    current = intention
    swapped = False
    result: EngineResult | None = None
    tokens: list[str] = []
    for attempt in range(params.speaker_attempts + 1):
        for head, _ in current.property_predicates():
            if not speaker.words_for(head):
                schema = invent_word(speaker, head, rng, params.initial_score)
                repairs.append(RepairRecord("invent-word", speaker.id, (schema.name, schema.word or "")))
        result = formulate(
            current,
            speaker.schemas,
            speaker.net,
            params.threshold,
            mode="robust",
            rng=rng,
            primed=speaker.primed,
            priming_bonus=params.priming_bonus,
            max_expansions=params.max_expansions,
        )
        tokens = list(result.utterance or [])
        diags, own_parse = re_enter(
            speaker, tokens, _comparison_meaning(current), params.threshold, params.max_expansions
        )
        structural = [d for d in diags if d.kind in ("missing-coreference", "lock-mismatch")]
        if attempt == params.speaker_attempts:
            diagnostics.extend(structural)
            break
        if not structural:
            # Faithful structure is not yet a safe utterance: hearing it
            # back must also resolve to the topic.  When it does not,
            # wording is the problem, so pick different subsets.
            _, own = _ground(own_parse, scene, rng, params)
            if own.pointed() == topic:
                break
            redraw = conceptualize_safe(scene, topic, rng, params.relations)
            if redraw == current:
                diagnostics.append(Diagnostic("self-misgrounding", {"pointed": own.pointed()}))
                break
            current = redraw
            continue
        progressed = False
        for diag in structural:
            if diag.kind == "missing-coreference" and "variable" in diag.payload:
                cats = _group_categories(result, diag.payload["variable"])
                if len(cats) >= 2 and len(set(cats)) == len(cats):
                    _, record = generalize_or_invent_phrase(speaker, cats, params.initial_score)
                    if record is not None:
                        repairs.append(record)
                        progressed = True
            elif diag.kind == "missing-coreference" and "variables" in diag.payload:
                schema, created = ensure_sentence_schema(speaker, params.initial_score)
                if created:
                    repairs.append(RepairRecord("invent-grammatical-schema", speaker.id, (schema.name,)))
                    progressed = True
        if not progressed and not swapped and current.distinct_pairs():
            # The utterance was structurally fine for the grammar but kept
            # misparsing; presenting the objects in the other order can
            # dodge an accidental regrouping.
            current = _swap_distinct(current)
            swapped = True
            progressed = True
        if not progressed:
            diagnostics.extend(structural)
            break
    assert result is not None
    return tokens, current, result, repairs, diagnostics


def _hearer_word_info(hearer: Agent, tokens: list[str], result: EngineResult):
    """Per position: (category, predicate, referent variable or None)."""
    info: list[tuple[str, str, str | None] | None] = []
    ts = result.solution.ts if result.solution else None
    for i in range(len(tokens)):
        unit = ts.fs.unit(Atom(f"w{i + 1}")) if ts else None
        if unit is None:
            info.append(None)
            continue
        cat = unit.get(LEX_CAT)
        mv = unit.get(MEANING)
        head = None
        if isinstance(mv, ValueSet) and len(mv) > 0:
            first = mv.items[0]
            if isinstance(first, Seq) and first.items and isinstance(first.items[0], Atom):
                head = first.items[0].name
        ref = unit.get(REFERENT)
        refname = ref.name if isinstance(ref, Var) else None
        if isinstance(cat, Atom) and head is not None:
            info.append((cat.name, head, refname))
        else:
            info.append(None)
    return info


def _usage_evidence(
    scene: Scene,
    topic: tuple[int, ...],
    plausible_heads: dict[int, list[str]],
    n_open: int,
) -> tuple[list[str], dict[int, set[str]]]:
    """What this usage says about each word of the utterance.

    The speaker verbalizes one minimal discriminating subset per topic
    object, so the open positions must complete some choice of subsets
    that also accounts, head by head, for every covered position.
    Returns the leftover predicates an uncovered word could express, and
    per covered position the heads that survive in some consistent
    reading: a lone survivor means the usage confirms that mapping.
    """
    per_object = [discriminating_subsets(scene, topic, i) for i in topic]
    covered = sorted(plausible_heads)
    total = len(covered) + n_open
    pool: list[str] = []
    support: dict[int, set[str]] = {i: set() for i in covered}
    head_lists = [plausible_heads[i] for i in covered]
    for combo in itertools.product(*per_object):
        union: Counter = Counter()
        for subset in combo:
            union.update(subset)
        if sum(union.values()) != total:
            continue
        for choice in itertools.product(*head_lists) if head_lists else ((),):
            leftover = union - Counter(choice)
            if sum(leftover.values()) != n_open:
                continue
            for i, head in zip(covered, choice):
                support[i].add(head)
            for p in leftover:
                if p not in pool:
                    pool.append(p)
    return pool, support


def _hearer_repairs(
    hearer: Agent,
    tokens: list[str],
    result: EngineResult,
    scene: Scene,
    topic: tuple[int, ...],
    rng,
    params: GameParams,
) -> tuple[list[RepairRecord], list[Diagnostic]]:
    """Adopt unknown words against the revealed topic, then adopt grouping
    conventions the utterance displayed."""
    repairs: list[RepairRecord] = []
    diagnostics: list[Diagnostic] = []
    info = _hearer_word_info(hearer, tokens, result)

    # Plausible heads per covered position: homonyms whose predicate could
    # actually appear in a discriminating description of the revealed
    # topic.  Positions where every known meaning looks wrong still count
    # as open slots in the accounting, but only truly unknown words adopt.
    topic_preds = set(discriminating_predicates(scene, topic))
    by_word: dict[str, list] = {}
    for schema in hearer.lexical_schemas():
        if schema.word is not None and schema.predicate is not None:
            by_word.setdefault(schema.word, []).append(schema)
    plausible_heads: dict[int, list[str]] = {}
    adopt_positions: list[int] = []
    ruled_out = []
    for i, token in enumerate(tokens):
        plausible: list[str] = []
        for schema in by_word.get(token, []):
            if schema.predicate in topic_preds:
                if schema.predicate not in plausible:
                    plausible.append(schema.predicate)
            else:
                ruled_out.append(schema)
        if plausible:
            plausible_heads[i] = plausible
        else:
            # Unknown outright, or known only with meanings that cannot
            # describe this topic; either way the word covers nothing
            # here and needs a fresh hypothesis.
            adopt_positions.append(i)
    # The speaker used these words for this topic, so recorded meanings
    # that cannot describe it just lost a usage competition.  One scene
    # can mislead (the true reading may merely not discriminate here),
    # so the drop is gentler than a lost game.
    punish_counterevidenced(hearer, ruled_out, params.delta_plus)

    pool, support = _usage_evidence(scene, topic, plausible_heads, len(adopt_positions))
    # A usage that pins a word to a single consistent reading confirms
    # the mapping: reward it like a win at the word level, flooring a
    # battered score back at the adoption level.  Mirror image of the
    # counter-evidence punishment above, and what lets the population's
    # frequent variant outgrow an agent's own coinage.
    for i, heads in support.items():
        if len(heads) == 1:
            head = next(iter(heads))
            for schema in by_word.get(tokens[i], []):
                if schema.predicate == head:
                    schema.score = min(
                        1.0, max(schema.score + params.delta_plus, params.initial_score)
                    )
        else:
            # Several readings survive; none is confirmed, but all of
            # them remain live hypotheses and are kept off the floor.
            for schema in by_word.get(tokens[i], []):
                if schema.predicate in heads:
                    schema.score = max(schema.score, params.ambiguous_score)
    for i in adopt_positions:
        token = tokens[i]
        if token not in by_word:
            diagnostics.append(Diagnostic("unknown-word", {"token": token}))
        if not pool:
            diagnostics.append(Diagnostic("no-discriminating-interpretation", {"token": token}))
            continue
        created = adopt_word(hearer, token, pool, params.initial_score, params.ambiguous_score)
        if created:
            repairs.append(
                RepairRecord("adopt-word", hearer.id, tuple(s.name for s in created))
            )
            if len(created) == 1:
                info[i] = (created[0].category or "", created[0].predicate or "", None)

    # True grouping: each described position is tied to the topic object
    # its predicate singles out; ambiguous ones stay out of it.
    descriptions = {
        i: {p for subset in discriminating_subsets(scene, topic, i) for p in subset}
        for i in topic
    }
    assignment: dict[int, int] = {}
    for pos, entry in enumerate(info):
        if entry is None:
            continue
        _, head, _ = entry
        satisfying = [oi for oi in topic if scene.objects[oi].has(head)]
        if len(satisfying) == 1:
            assignment[pos] = satisfying[0]
        elif len(satisfying) > 1:
            narrowed = [oi for oi in satisfying if head in descriptions.get(oi, ())]
            if len(narrowed) == 1:
                assignment[pos] = narrowed[0]
    groups: dict[int, list[int]] = {}
    for pos in sorted(assignment):
        groups.setdefault(assignment[pos], []).append(pos)
    if params.link_alignment:
        cooccurring = [
            tuple(info[p][0] for p in positions if info[p] is not None and info[p][0])
            for positions in groups.values()
        ]
        punish_conflations(hearer, [g for g in cooccurring if len(g) >= 2])
    for obj_index in sorted(groups):
        positions = groups[obj_index]
        if len(positions) < 2:
            continue
        contiguous = positions == list(range(positions[0], positions[-1] + 1))
        if not contiguous:
            # A schema built from a split group could never match this
            # utterance again, so there is nothing to learn from it yet.
            continue
        refs = {info[p][2] for p in positions if info[p] is not None}
        if len(refs) == 1 and None not in refs:
            continue  # parse already grouped them
        cats = tuple(info[p][0] for p in positions if info[p] is not None)
        if len(cats) < 2 or len(set(cats)) != len(cats):
            continue
        _, record = generalize_or_invent_phrase(hearer, cats, params.initial_score)
        if record is not None:
            repairs.append(record)
    if len(topic) == 2:
        schema, created = ensure_sentence_schema(hearer, params.initial_score)
        if created:
            repairs.append(RepairRecord("invent-grammatical-schema", hearer.id, (schema.name,)))
    return repairs, diagnostics


def _phrase_filler_categories(app) -> tuple[str, ...]:
    from .grammar import UNPROC_ITEMS

    cats = []
    for feature, member in app.consumed:
        if feature != UNPROC_ITEMS:
            continue
        unit = app.result.fs.unit(member)
        if unit is None:
            continue
        cat = unit.get(LEX_CAT)
        if isinstance(cat, Atom):
            cats.append(cat.name)
    return tuple(cats)


def _measure_coherence(hearer: Agent, intention: Meaning, tokens: list[str], params: GameParams) -> bool:
    """Would the hearer have said it the same way?  Strict formulation on
    the final intention, token-for-token."""
    from .grammar import AmbiguousOrder

    try:
        result = formulate(
            intention,
            hearer.schemas,
            hearer.net,
            params.threshold,
            mode="strict",
            max_expansions=params.max_expansions,
        )
    except AmbiguousOrder:
        return False
    return result.utterance == tokens


def play_game(
    speaker: Agent,
    hearer: Agent,
    scene: Scene,
    topic: tuple[int, ...],
    rng,
    params: GameParams | None = None,
) -> GameOutcome:
    if params is None:
        params = GameParams()
    intention = conceptualize_safe(scene, topic, rng, params.relations)
    tokens, final_intention, s_result, repairs, diagnostics = _speaker_turn(
        speaker, intention, scene, topic, rng, params
    )

    h_result = comprehend(
        tokens,
        hearer.schemas,
        hearer.net,
        params.threshold,
        primed=hearer.primed,
        priming_bonus=params.priming_bonus,
        max_expansions=params.max_expansions,
    )
    h_result, interp = _ground(h_result, scene, rng, params)
    pointed = interp.pointed()
    success = bool(pointed) and pointed == topic

    s_used = s_result.used_schemas()
    s_links = s_result.used_link_paths()
    align(
        speaker,
        s_used,
        competitors_of(s_result),
        s_links,
        success,
        params.delta_plus,
        params.delta_minus,
        params.link_alignment,
    )
    if params.link_alignment:
        # The speaker's own description is firsthand proof of which of
        # its words co-describe one object.
        punish_conflations(speaker, _referent_groups(s_result))

    h_used = h_result.used_schemas()
    h_rivals = competitors_of(h_result)
    if success:
        h_rivals = h_rivals + lexical_rivals(hearer, h_used)
        for app in h_result.applications():
            if app.schema.phrase_kind == PHRASE:
                fillers = _phrase_filler_categories(app)
                if fillers:
                    h_rivals = h_rivals + phrase_rivals(hearer, app.schema, fillers, params.threshold)
    align(
        hearer,
        h_used,
        h_rivals,
        h_result.used_link_paths(),
        success,
        params.delta_plus,
        params.delta_minus,
        params.link_alignment,
    )

    # Feedback reveals the topic; the hearer re-reads the utterance in
    # that light and repairs from the analysis consistent with the truth,
    # not from the one that led it astray.
    analysis = h_result
    if not success:
        for alternate in ranked_solutions(h_result, params.parse_alternates):
            cand = interpret(alternate.meaning(), scene, rng, params.partition_cap)
            if any(c.objects == topic for c in cand.candidates):
                analysis = alternate
                break
    hearer_repairs, hearer_diags = _hearer_repairs(hearer, tokens, analysis, scene, topic, rng, params)
    repairs.extend(hearer_repairs)
    diagnostics.extend(hearer_diags)

    speaker.primed = frozenset(s.name for s in s_used) if success else frozenset()
    hearer.primed = frozenset(s.name for s in h_used) if success else frozenset()

    coherent = _measure_coherence(hearer, final_intention, tokens, params)

    return GameOutcome(
        success=success,
        tokens=tokens,
        intention=final_intention,
        topic=topic,
        pointed=pointed,
        speaker_result=s_result,
        hearer_result=h_result,
        partitions_explored=interp.partitions_explored,
        cap_hit=interp.cap_hit,
        coherent=coherent,
        repairs=repairs,
        diagnostics=diagnostics,
    )
