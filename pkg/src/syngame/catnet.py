"""Per-agent network of categories connected by scored subcategory links.

Links point from a subcategory up to its parent and carry a score in
[0, 1].  The network stays acyclic; a link whose score is driven to zero
is pruned outright and a later re-add starts from fresh counters.
"""

from __future__ import annotations

from dataclasses import dataclass, field

BASE_VALUE = "base-value"
INVENTED = "invented-supercategory"


class CycleError(Exception):
    """Raised when adding a link would close a directed cycle."""


class UnknownCategory(Exception):
    pass


@dataclass
class Category:
    id: str
    origin: str
    owner: int | None = None


@dataclass
class SubcategoryLink:
    child: str
    parent: str
    score: float
    seq: int
    used_count: int = 0
    success_count: int = 0


@dataclass
class ExplainedPath:
    """Witness for connectivity: the links walked from child to parent."""

    links: tuple = ()


class CategorialNetwork:
    def __init__(self, owner: int | None = None, initial_score: float = 0.5):
        self.owner = owner
        self.initial_score = initial_score
        self.categories: dict[str, Category] = {}
        self._out: dict[str, list[SubcategoryLink]] = {}
        self._seq = 0

    # -- construction ---------------------------------------------------

    def add_category(self, cat_id: str, origin: str = BASE_VALUE) -> Category:
        cat = self.categories.get(cat_id)
        if cat is None:
            cat = Category(cat_id, origin, self.owner)
            self.categories[cat_id] = cat
            self._out[cat_id] = []
        return cat

    def has_category(self, cat_id: str) -> bool:
        return cat_id in self.categories

    def ensure_link(self, child: str, parent: str, score: float | None = None) -> SubcategoryLink:
        """Add child->parent if absent.  An existing link keeps its score."""
        if child not in self.categories or parent not in self.categories:
            raise UnknownCategory(f"{child!r} or {parent!r} not in network")
        for link in self._out[child]:
            if link.parent == parent:
                return link
        if self._reaches(parent, child):
            raise CycleError(f"link {child}->{parent} would close a cycle")
        self._seq += 1
        link = SubcategoryLink(child, parent, self.initial_score if score is None else score, self._seq)
        self._out[child].append(link)
        return link

    def _reaches(self, start: str, goal: str) -> bool:
        if start == goal:
            return True
        stack, seen = [start], {start}
        while stack:
            cur = stack.pop()
            for link in self._out.get(cur, ()):
                if link.parent == goal:
                    return True
                if link.parent not in seen:
                    seen.add(link.parent)
                    stack.append(link.parent)
        return False

    def remove_category(self, cat_id: str) -> None:
        """Drop a category together with every link touching it."""
        if cat_id not in self.categories:
            return
        del self.categories[cat_id]
        del self._out[cat_id]
        for child in self._out:
            self._out[child] = [l for l in self._out[child] if l.parent != cat_id]

    # -- queries ---------------------------------------------------------

    def links(self) -> list[SubcategoryLink]:
        out = []
        for child in self._out:
            out.extend(self._out[child])
        return out

    def out_links(self, child: str) -> list[SubcategoryLink]:
        return list(self._out.get(child, ()))

    def connected(self, child: str, parent: str, threshold: float = 0.0) -> tuple[bool, tuple]:
        """Directed reachability child -> ... -> parent over links with
        score >= threshold.  Reflexively true with an empty path.

        Among witness paths the one whose minimum link score is highest
        is preferred; remaining ties fall to link insertion order.
        """
        if child not in self.categories or parent not in self.categories:
            raise UnknownCategory(f"{child!r} or {parent!r} not in network")
        if child == parent:
            return True, ()
        # Bottleneck-maximizing search; the frontier is tiny in practice.
        best: dict[str, float] = {child: float("inf")}
        entry = 0
        frontier: list[tuple[float, int, str, tuple]] = [(float("-inf"), entry, child, ())]
        import heapq

        while frontier:
            neg_min, _, node, path = heapq.heappop(frontier)
            cur_min = -neg_min
            if node == parent:
                return True, path
            if cur_min < best.get(node, float("-inf")):
                continue
            for link in self._out.get(node, ()):
                if link.score < threshold:
                    continue
                new_min = min(cur_min, link.score)
                if new_min > best.get(link.parent, float("-inf")):
                    best[link.parent] = new_min
                    entry += 1
                    heapq.heappush(frontier, (-new_min, entry, link.parent, path + (link,)))
        return False, ()

    def preferred_parent(self, child: str) -> str | None:
        """Parent over the highest-score outgoing link; earliest link wins ties."""
        best: SubcategoryLink | None = None
        for link in self._out.get(child, ()):
            if best is None or link.score > best.score or (link.score == best.score and link.seq < best.seq):
                best = link
        return best.parent if best else None

    def has_unique_preferred_parent(self, child: str) -> bool:
        """True when the top outgoing link is not tied with a second one."""
        links = self._out.get(child, ())
        if not links:
            return False
        if len(links) == 1:
            return True
        top = max(link.score for link in links)
        return sum(1 for link in links if link.score == top) == 1

    # -- score dynamics ---------------------------------------------------

    def reward_path(self, path, delta: float) -> None:
        for link in path:
            link.score = min(1.0, link.score + delta)
            link.used_count += 1
            link.success_count += 1

    def punish_path(self, path, delta: float) -> None:
        for link in list(path):
            link.used_count += 1
            self._decrement(link, delta)

    def punish_link(self, link: SubcategoryLink, delta: float) -> None:
        """Decrement one link outside any path bookkeeping."""
        self._decrement(link, delta)

    def punish_competitors(self, path, delta: float) -> None:
        """Inhibit the sibling alternatives of every link along a used path.

        Competitors of child->parent are the other outgoing links of the
        same child: during matching the reachability search examined all
        of them, so they were live candidate steps in this game.
        """
        on_path = {id(link) for link in path}
        for link in list(path):
            for rival in list(self._out.get(link.child, ())):
                if id(rival) not in on_path:
                    self._decrement(rival, delta)

    def _decrement(self, link: SubcategoryLink, delta: float) -> None:
        link.score -= delta
        if link.score <= 0.0:
            # The link may already be detached: score updates arrive in
            # batches and an earlier one can remove the whole category.
            bucket = self._out.get(link.child)
            if bucket is not None and link in bucket:
                bucket.remove(link)

    # -- export ------------------------------------------------------------

    def to_dot(self, name: str = "catnet") -> str:
        lines = [f"digraph {name} {{"]
        for cat in self.categories.values():
            shape = "box" if cat.origin == INVENTED else "ellipse"
            lines.append(f'  "{cat.id}" [shape={shape}];')
        for link in self.links():
            lines.append(f'  "{link.child}" -> "{link.parent}" [label="{link.score:.2f}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def links_table(self) -> str:
        """CSV link table: child,parent,score,used,success."""
        rows = ["child,parent,score,used,success"]
        for link in self.links():
            rows.append(f"{link.child},{link.parent},{link.score:.6f},{link.used_count},{link.success_count}")
        return "\n".join(rows) + "\n"
