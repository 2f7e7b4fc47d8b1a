"""An agent: its schema inventory and its categorial network."""

from __future__ import annotations

from dataclasses import dataclass, field

from .catnet import CategorialNetwork
from .grammar import ConstructionSchema, GRAMMATICAL, LEXICAL


@dataclass
class Agent:
    id: int
    schemas: list[ConstructionSchema] = field(default_factory=list)
    net: CategorialNetwork = None  # type: ignore[assignment]
    schema_counter: int = 0
    category_counter: int = 0
    primed: frozenset = frozenset()

    def __post_init__(self):
        if self.net is None:
            self.net = CategorialNetwork(owner=f"agent{self.id}")

    def fresh_schema_name(self, stem: str) -> str:
        self.schema_counter += 1
        return f"{stem}-{self.id}-{self.schema_counter}"

    def fresh_category(self) -> str:
        self.category_counter += 1
        return f"c-{self.id}-{self.category_counter}"

    def add_schema(self, schema: ConstructionSchema) -> None:
        self.schemas.append(schema)

    def remove_schema(self, schema: ConstructionSchema) -> None:
        if schema not in self.schemas:
            return
        self.schemas.remove(schema)
        cat = schema.category
        if cat is None or not self.net.has_category(cat):
            return
        # A word category dies with its last schema; links from it would
        # otherwise keep steering slot generalization toward stale parents.
        for s in self.schemas:
            if s.category == cat or cat in s.slot_categories():
                return
        self.net.remove_category(cat)

    def lexical_schemas(self) -> list[ConstructionSchema]:
        return [s for s in self.schemas if s.kind == LEXICAL]

    def grammatical_schemas(self) -> list[ConstructionSchema]:
        return [s for s in self.schemas if s.kind == GRAMMATICAL]

    def lexicon(self) -> dict[str, list[ConstructionSchema]]:
        """Words the agent can parse, best schema first."""
        by_word: dict[str, list[ConstructionSchema]] = {}
        for s in self.lexical_schemas():
            if s.word is not None:
                by_word.setdefault(s.word, []).append(s)
        for group in by_word.values():
            group.sort(key=lambda s: -s.score)
        return by_word

    def words_for(self, predicate: str) -> list[ConstructionSchema]:
        out = [s for s in self.lexical_schemas() if s.predicate == predicate]
        out.sort(key=lambda s: -s.score)
        return out

    def inventory_signature(self) -> tuple:
        """Cheap fingerprint used to assert an operation had no side effects."""
        return (
            tuple((s.name, round(s.score, 9)) for s in self.schemas),
            tuple(sorted((l.child, l.parent, round(l.score, 9)) for l in self.net.links())),
        )
