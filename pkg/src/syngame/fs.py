"""Feature structures and the unification operations built on them.

A feature structure is an ordered collection of named units, each unit
holding a flat mapping from feature names to values.  Values are atoms,
variables, sets (order-preserving, duplicate-free), or fixed-length
sequences.  Hierarchy is not expressed by nesting units inside values;
a unit that dominates others lists their names under a ``subunits``
feature instead.

Matching is one-way unification of a pattern against a target: every
pattern unit must map injectively onto a target unit so that all pattern
features unify with the target's. Merging adds information from a
contribution into a target and fails rather than overwrite.  Both are
pure: they return new structures and never mutate their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional


class MergeConflict(Exception):
    """Raised when merging would overwrite an existing feature value."""


class ParseError(Exception):
    """Raised on malformed feature-structure text."""


@dataclass(frozen=True)
class Atom:
    name: str

    def __repr__(self) -> str:
        return f"Atom({self.name})"


@dataclass(frozen=True)
class Var:
    name: str

    def __repr__(self) -> str:
        return f"Var(?{self.name})"


class ValueSet:
    """Duplicate-free value collection with set equality.

    Iteration follows insertion order so that everything downstream
    (matching, rendering, file output) stays deterministic; equality and
    hashing ignore order.
    """

    __slots__ = ("items", "_frozen")

    def __init__(self, items: Iterable["Value"] = ()):
        deduped = tuple(dict.fromkeys(items))
        object.__setattr__(self, "items", deduped)
        object.__setattr__(self, "_frozen", frozenset(deduped))

    def __setattr__(self, key, value):
        raise AttributeError("ValueSet is immutable")

    def __iter__(self) -> Iterator["Value"]:
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __contains__(self, item) -> bool:
        return item in self._frozen

    def __eq__(self, other) -> bool:
        return isinstance(other, ValueSet) and self._frozen == other._frozen

    def __hash__(self) -> int:
        return hash(self._frozen)

    def __repr__(self) -> str:
        return "ValueSet{" + ", ".join(map(repr, self.items)) + "}"

    def add_all(self, new_items: Iterable["Value"]) -> "ValueSet":
        return ValueSet(self.items + tuple(new_items))

    def remove_all(self, gone: Iterable["Value"]) -> "ValueSet":
        gone = list(gone)
        return ValueSet(it for it in self.items if it not in gone)


@dataclass(frozen=True)
class Seq:
    items: tuple["Value", ...]

    def __repr__(self) -> str:
        return "Seq(" + " ".join(map(repr, self.items)) + ")"


Value = Atom | Var | ValueSet | Seq


def seq(*parts: Value | str) -> Seq:
    """Build a Seq, promoting bare strings to atoms."""
    return Seq(tuple(Atom(p) if isinstance(p, str) else p for p in parts))


class Unit:
    """A named unit with an insertion-ordered feature map.

    Treated as immutable: operations that change a unit build a new one.
    """

    __slots__ = ("name", "features")

    def __init__(self, name: Value, features: Iterable[tuple[str, Value]] | dict | None = None):
        self.name = name
        if features is None:
            self.features = {}
        elif isinstance(features, dict):
            self.features = dict(features)
        else:
            self.features = dict(features)

    def get(self, feature: str) -> Optional[Value]:
        return self.features.get(feature)

    def with_feature(self, feature: str, value: Value) -> "Unit":
        feats = dict(self.features)
        feats[feature] = value
        return Unit(self.name, feats)

    def __eq__(self, other) -> bool:
        return isinstance(other, Unit) and self.name == other.name and self.features == other.features

    def __repr__(self) -> str:
        return f"Unit({self.name!r}, {self.features!r})"


class FeatureStructure:
    """Ordered unit collection; unit names must be pairwise distinct.

    Instances are treated as immutable once handed out, so the unit list
    and the variable inventory are computed lazily and cached.
    """

    __slots__ = ("_units", "_vars")

    def __init__(self, units: Iterable[Unit] = ()):
        self._units: dict[Value, Unit] = {}
        self._vars: Optional[list[Var]] = None
        for u in units:
            if u.name in self._units:
                raise ValueError(f"duplicate unit name {u.name!r}")
            self._units[u.name] = u

    @property
    def units(self) -> list[Unit]:
        return list(self._units.values())

    def unit(self, name: Value) -> Optional[Unit]:
        return self._units.get(name)

    def with_unit(self, unit: Unit) -> "FeatureStructure":
        """Return a copy where ``unit`` replaces or extends the unit list."""
        out = FeatureStructure()
        out._units = dict(self._units)
        out._units[unit.name] = unit
        return out

    def __len__(self) -> int:
        return len(self._units)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FeatureStructure)
            and list(self._units) == list(other._units)
            and self._units == other._units
        )

    def __repr__(self) -> str:
        return f"FeatureStructure({self.units!r})"

    def variables(self) -> list[Var]:
        """All variables in order of first occurrence."""
        if self._vars is not None:
            return self._vars
        found: list[Var] = []
        seen: set = set()

        def walk(v: Value):
            if isinstance(v, Var):
                if v not in seen:
                    seen.add(v)
                    found.append(v)
            elif isinstance(v, ValueSet):
                for it in v:
                    walk(it)
            elif isinstance(v, Seq):
                for it in v.items:
                    walk(it)

        for u in self._units.values():
            walk(u.name)
            for val in u.features.values():
                walk(val)
        self._vars = found
        return found


class Bindings:
    """Immutable variable bindings plus the category paths used to get them.

    ``paths`` records, for every categorial unification that succeeded
    through the network, the witness list of links; alignment later
    rewards exactly those.
    """

    __slots__ = ("_map", "paths")

    def __init__(self, mapping: dict | None = None, paths: tuple = ()):
        self._map: dict[Var, Value] = {} if mapping is None else mapping
        self.paths = paths

    def walk(self, value: Value) -> Value:
        while isinstance(value, Var):
            nxt = self._map.get(value)
            if nxt is None:
                return value
            value = nxt
        return value

    def bind(self, var: Var, value: Value) -> "Bindings":
        m = dict(self._map)
        m[var] = value
        return Bindings(m, self.paths)

    def with_path(self, path) -> "Bindings":
        if not path:
            return self
        return Bindings(self._map, self.paths + (tuple(path),))

    def resolve(self, value: Value) -> Value:
        """Deep substitution through the bindings."""
        value = self.walk(value)
        if isinstance(value, ValueSet):
            return ValueSet(self.resolve(it) for it in value)
        if isinstance(value, Seq):
            return Seq(tuple(self.resolve(it) for it in value.items))
        return value

    def items(self):
        return self._map.items()

    def __len__(self) -> int:
        return len(self._map)

    def __contains__(self, var: Var) -> bool:
        return var in self._map

    def __repr__(self) -> str:
        inner = ", ".join(f"?{v.name}->{self.walk(v)!r}" for v in self._map)
        return "Bindings{" + inner + "}"


def _unify_iter(a: Value, b: Value, bnd: Bindings, net, threshold: float, rigid: Optional[frozenset]) -> Iterator[Bindings]:
    """All unifiers of target-side value ``a`` with pattern-side value ``b``.

    Variable cases are symmetric unless ``rigid`` holds the target's
    variable names, in which case those variables act as constants: they
    can be bound TO, but never bound themselves (so two target variables
    cannot be equated through a shared pattern variable).  Two distinct
    category atoms unify when the filler (target) side reaches the slot
    (pattern) side in ``net``.
    """
    a = bnd.walk(a)
    b = bnd.walk(b)
    if isinstance(b, Var) and (rigid is None or b.name not in rigid):
        if isinstance(a, Var) and a == b:
            yield bnd
        else:
            yield bnd.bind(b, a)
        return
    if isinstance(b, Var):
        # Pattern side resolved to a frozen target variable.
        if isinstance(a, Var) and a == b:
            yield bnd
        return
    if isinstance(a, Var):
        if rigid is None or a.name not in rigid:
            yield bnd.bind(a, b)
        return
    if isinstance(a, Atom) and isinstance(b, Atom):
        if a == b:
            yield bnd
        elif net is not None and net.has_category(a.name) and net.has_category(b.name):
            ok, path = net.connected(a.name, b.name, threshold)
            if ok:
                yield bnd.with_path(path)
        return
    if isinstance(a, Seq) and isinstance(b, Seq):
        if len(a.items) != len(b.items):
            return
        yield from _unify_all(list(zip(a.items, b.items)), bnd, net, threshold, rigid)
        return
    if isinstance(a, ValueSet) and isinstance(b, ValueSet):
        # Subset semantics: each pattern member claims a distinct target member.
        if len(b) > len(a):
            return
        yield from _unify_set(list(b.items), list(a.items), [], bnd, net, threshold, rigid)
        return
    return


def _unify_all(pairs: list[tuple[Value, Value]], bnd: Bindings, net, threshold, rigid) -> Iterator[Bindings]:
    if not pairs:
        yield bnd
        return
    (a0, b0), rest = pairs[0], pairs[1:]
    for b1 in _unify_iter(a0, b0, bnd, net, threshold, rigid):
        yield from _unify_all(rest, b1, net, threshold, rigid)


def _unify_set(pattern_items, target_items, used, bnd, net, threshold, rigid) -> Iterator[Bindings]:
    if not pattern_items:
        yield bnd
        return
    p0, rest = pattern_items[0], pattern_items[1:]
    for i, t in enumerate(target_items):
        if i in used:
            continue
        for b1 in _unify_iter(t, p0, bnd, net, threshold, rigid):
            yield from _unify_set(rest, target_items, used + [i], b1, net, threshold, rigid)


def unify_values(a: Value, b: Value, bnd: Bindings | None = None, net=None, threshold: float = 0.0) -> Optional[Bindings]:
    """First unifier of ``a`` (filler side) with ``b`` (slot side), or None."""
    if bnd is None:
        bnd = Bindings()
    for out in _unify_iter(a, b, bnd, net, threshold, rigid=None):
        return out
    return None


def match_structure(
    pattern: FeatureStructure,
    target: FeatureStructure,
    net=None,
    threshold: float = 0.0,
    rigid_target: bool = False,
) -> list[Bindings]:
    """All ways the pattern maps injectively onto the target.

    Every pattern unit must find a distinct target unit whose name
    unifies with the pattern unit's name and which carries, for every
    pattern feature, a value that unifies with the pattern's.  Pattern
    and target are expected to be standardized apart.
    """
    results: list[Bindings] = []
    seen_keys: set = set()
    target_units = target.units
    rigid = frozenset(v.name for v in target.variables()) if rigid_target else None

    def per_unit(p_unit: Unit, t_unit: Unit, bnd: Bindings) -> Iterator[Bindings]:
        name_iter = _unify_iter(t_unit.name, p_unit.name, bnd, net, threshold, rigid)
        for b1 in name_iter:
            pairs = []
            ok = True
            for f, pv in p_unit.features.items():
                tv = t_unit.get(f)
                if tv is None:
                    ok = False
                    break
                pairs.append((tv, pv))
            if not ok:
                continue
            yield from _unify_all(pairs, b1, net, threshold, rigid)

    def assign(p_units: list[Unit], used: list[int], bnd: Bindings):
        if not p_units:
            key = (
                tuple(sorted(((v.name, repr(bnd.resolve(v))) for v, _ in bnd.items()))),
                repr(bnd.paths),
            )
            if key not in seen_keys:
                seen_keys.add(key)
                results.append(bnd)
            return
        p0, rest = p_units[0], p_units[1:]
        for i, t_unit in enumerate(target_units):
            if i in used:
                continue
            for b1 in per_unit(p0, t_unit, bnd):
                assign(rest, used + [i], b1)

    assign(pattern.units, [], Bindings())
    return results


def merge_structure(contribution: FeatureStructure, target: FeatureStructure, bnd: Bindings) -> FeatureStructure:
    """Merge the contribution into the target under the given bindings.

    The target is first resolved through the bindings (this is what makes
    variable equalities found during matching take effect), then each
    contribution unit either extends an existing unit or is appended.
    Sets merge by union; any other differing value is a conflict.
    """
    if any(k in bnd for k in target.variables()):
        resolved_target = substitute(target, bnd)
    else:
        resolved_target = target
    out_units: dict[Value, Unit] = {u.name: u for u in resolved_target.units}
    for cu in contribution.units:
        cu_res = Unit(bnd.resolve(cu.name), {f: bnd.resolve(v) for f, v in cu.features.items()})
        existing = out_units.get(cu_res.name)
        if existing is None:
            out_units[cu_res.name] = cu_res
            continue
        feats = dict(existing.features)
        for f, v in cu_res.features.items():
            if f not in feats:
                feats[f] = v
            elif feats[f] == v:
                continue
            elif isinstance(feats[f], ValueSet) and isinstance(v, ValueSet):
                feats[f] = feats[f].add_all(v.items)
            else:
                raise MergeConflict(f"feature {f!r} of unit {cu_res.name!r}: {feats[f]!r} vs {v!r}")
        out_units[cu_res.name] = Unit(existing.name, feats)
    out = FeatureStructure()
    out._units = out_units
    return out


def substitute(structure: FeatureStructure, bnd: Bindings) -> FeatureStructure:
    """Resolve every value in the structure through the bindings.

    If two unit names collapse to the same value their features are
    merged (union for sets, conflict otherwise).
    """
    out_units: dict[Value, Unit] = {}
    for u in structure.units:
        name = bnd.resolve(u.name)
        feats = {f: bnd.resolve(v) for f, v in u.features.items()}
        existing = out_units.get(name)
        if existing is None:
            out_units[name] = Unit(name, feats)
            continue
        merged = dict(existing.features)
        for f, v in feats.items():
            if f not in merged:
                merged[f] = v
            elif merged[f] == v:
                continue
            elif isinstance(merged[f], ValueSet) and isinstance(v, ValueSet):
                merged[f] = merged[f].add_all(v.items)
            else:
                raise MergeConflict(f"unit collapse on {name!r}: feature {f!r}")
        out_units[name] = Unit(name, merged)
    out = FeatureStructure()
    out._units = out_units
    return out


def rename_variables(structure: FeatureStructure, fresh: Callable[[], str]) -> FeatureStructure:
    """Consistently replace every variable with a fresh one."""
    mapping: dict[Var, Var] = {}

    def rn(v: Value) -> Value:
        if isinstance(v, Var):
            if v not in mapping:
                mapping[v] = Var(fresh())
            return mapping[v]
        if isinstance(v, ValueSet):
            return ValueSet(rn(it) for it in v)
        if isinstance(v, Seq):
            return Seq(tuple(rn(it) for it in v.items))
        return v

    return FeatureStructure(
        Unit(rn(u.name), {f: rn(val) for f, val in u.features.items()}) for u in structure.units
    )


def subsumes(general: FeatureStructure, specific: FeatureStructure, net=None, threshold: float = 0.0) -> bool:
    """True when the general structure matches the specific one.

    The general side is renamed apart first so shared variable names
    cannot produce accidental captures; specific-side variables stay
    rigid, so an atom never subsumes a variable.
    """
    taken = {v.name for v in specific.variables()}
    counter = [0]

    def fresh() -> str:
        while True:
            counter[0] += 1
            cand = f"g{counter[0]}"
            if cand not in taken:
                return cand

    renamed = rename_variables(general, fresh)
    return bool(match_structure(renamed, specific, net, threshold, rigid_target=True))


def equal_up_to_renaming(a: FeatureStructure, b: FeatureStructure) -> bool:
    """True when some variable bijection makes the structures equal."""
    if len(a) != len(b):
        return False
    a_units, b_units = a.units, b.units

    def align_value(x: Value, y: Value, fwd: dict, bwd: dict) -> Optional[tuple[dict, dict]]:
        if isinstance(x, Var) and isinstance(y, Var):
            if x in fwd:
                return (fwd, bwd) if fwd[x] == y else None
            if y in bwd:
                return None
            f2, b2 = dict(fwd), dict(bwd)
            f2[x] = y
            b2[y] = x
            return f2, b2
        if isinstance(x, Atom) and isinstance(y, Atom):
            return (fwd, bwd) if x == y else None
        if isinstance(x, Seq) and isinstance(y, Seq):
            if len(x.items) != len(y.items):
                return None
            cur = (fwd, bwd)
            for xi, yi in zip(x.items, y.items):
                cur = align_value(xi, yi, *cur)
                if cur is None:
                    return None
            return cur
        if isinstance(x, ValueSet) and isinstance(y, ValueSet):
            if len(x) != len(y):
                return None
            ys = list(y.items)

            def pick(xs: list[Value], used: list[int], fwd2, bwd2):
                if not xs:
                    return fwd2, bwd2
                for i, yv in enumerate(ys):
                    if i in used:
                        continue
                    nxt = align_value(xs[0], yv, fwd2, bwd2)
                    if nxt is None:
                        continue
                    deeper = pick(xs[1:], used + [i], *nxt)
                    if deeper is not None:
                        return deeper
                return None

            return pick(list(x.items), [], fwd, bwd)
        return None

    def align_units(x: Unit, y: Unit, fwd, bwd):
        if set(x.features) != set(y.features):
            return None
        cur = align_value(x.name, y.name, fwd, bwd)
        if cur is None:
            return None
        for f in x.features:
            cur = align_value(x.features[f], y.features[f], *cur)
            if cur is None:
                return None
        return cur

    def assign(i: int, used: list[int], fwd, bwd) -> bool:
        if i == len(a_units):
            return True
        for j, bu in enumerate(b_units):
            if j in used:
                continue
            nxt = align_units(a_units[i], bu, fwd, bwd)
            if nxt is None:
                continue
            if assign(i + 1, used + [j], *nxt):
                return True
        return False

    return assign(0, [], {}, {})


# --- text rendering and parsing ---------------------------------------------

def render_value(v: Value) -> str:
    if isinstance(v, Atom):
        return v.name
    if isinstance(v, Var):
        return "?" + v.name
    if isinstance(v, Seq):
        return "(" + " ".join(render_value(it) for it in v.items) + ")"
    if isinstance(v, ValueSet):
        return "{" + ", ".join(render_value(it) for it in v.items) + "}"
    raise TypeError(f"not a value: {v!r}")


def render_structure(structure: FeatureStructure) -> str:
    """One unit per line, indented ``feature: value`` lines below it."""
    lines: list[str] = []
    for u in structure.units:
        lines.append(f"unit {render_value(u.name)}")
        for f, v in u.features.items():
            lines.append(f"  {f}: {render_value(v)}")
    return "\n".join(lines) + ("\n" if lines else "")


def _tokenize_value(text: str) -> list[str]:
    out: list[str] = []
    cur = ""
    for ch in text:
        if ch in "(){},":
            if cur:
                out.append(cur)
                cur = ""
            out.append(ch)
        elif ch.isspace():
            if cur:
                out.append(cur)
                cur = ""
        else:
            cur += ch
    if cur:
        out.append(cur)
    return out


def parse_value(text: str) -> Value:
    tokens = _tokenize_value(text)
    pos = [0]

    def peek() -> Optional[str]:
        return tokens[pos[0]] if pos[0] < len(tokens) else None

    def take() -> str:
        tok = peek()
        if tok is None:
            raise ParseError(f"unexpected end of value in {text!r}")
        pos[0] += 1
        return tok

    def value() -> Value:
        tok = take()
        if tok == "(":
            items = []
            while peek() not in (")", None):
                items.append(value())
            if take() != ")":
                raise ParseError(f"unclosed sequence in {text!r}")
            return Seq(tuple(items))
        if tok == "{":
            items = []
            while peek() not in ("}", None):
                if peek() == ",":
                    take()
                    continue
                items.append(value())
            if take() != "}":
                raise ParseError(f"unclosed set in {text!r}")
            return ValueSet(items)
        if tok in (")", "}", ","):
            raise ParseError(f"unexpected {tok!r} in {text!r}")
        if tok.startswith("?"):
            if len(tok) == 1:
                raise ParseError(f"empty variable name in {text!r}")
            return Var(tok[1:])
        return Atom(tok)

    result = value()
    if pos[0] != len(tokens):
        raise ParseError(f"trailing tokens in {text!r}")
    return result


def parse_structure(text: str) -> FeatureStructure:
    """Inverse of render_structure."""
    units: list[Unit] = []
    current: Optional[tuple[Value, dict]] = None
    for raw in text.splitlines():
        if not raw.strip():
            continue
        if raw.startswith("unit "):
            if current is not None:
                units.append(Unit(current[0], current[1]))
            current = (parse_value(raw[len("unit "):].strip()), {})
        elif raw[0].isspace():
            if current is None:
                raise ParseError(f"feature line before any unit: {raw!r}")
            body = raw.strip()
            if ":" not in body:
                raise ParseError(f"missing ':' in feature line {raw!r}")
            fname, _, fval = body.partition(":")
            current[1][fname.strip()] = parse_value(fval.strip())
        else:
            raise ParseError(f"unparseable line {raw!r}")
    if current is not None:
        units.append(Unit(current[0], current[1]))
    return FeatureStructure(units)
