"""Link diagrams with labeled negative twist regions.

A diagram is a list of PD-style crossings ``X[a, b, c, d]``: the four arc
labels around the crossing, counterclockwise, starting at the incoming
under-strand.  The positive (A-) smoothing joins the arc pairs (a, b) and
(c, d); the negative smoothing joins (a, d) and (b, c).  With this
convention the one-crossing unknot ``X[1,1,2,2]`` has A-state 2 circles and
negative state 1 circle.

A negative twist region is a maximal stack of bigon-adjacent crossings on
two strands whose negative smoothing passes both strands straight through.
Combinatorially: consecutive crossings of the stack share an arc pair that
is an A-pair (slots (0,1) or (2,3)) in both crossings.  Region sizes can be
edited; a region edited down to zero crossings is materialized as the
negative smoothing immediately and remembers its site so it can be grown
back.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Sequence

__all__ = [
    "DiagramError",
    "PDSyntaxError",
    "TwistRegion",
    "State",
    "LinkDiagram",
    "StateGraph",
    "pretzel",
    "parse_pd",
    "apply_state",
    "minus_graph",
    "plus_graph",
    "reduced_minus_graph",
    "is_minus_adequate",
    "is_adequate",
    "is_alternating",
    "set_twists",
    "smooth_region",
    "relabel_arcs",
]


class DiagramError(ValueError):
    """A malformed diagram, state, or region operation."""


class PDSyntaxError(DiagramError):
    """Unparseable PD notation.  Carries the offending text position."""

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} at position {position}")
        self.position = position


Crossing = tuple[int, int, int, int]
Endpoint = tuple[int, int]  # (crossing id, slot 0..3)
# Rails of a zero-crossing region: where its left and right strands attach,
# as (bottom-left, top-left, bottom-right, top-right) endpoints.
Rails = tuple[Endpoint, Endpoint, Endpoint, Endpoint]


class _UnionFind:
    def __init__(self) -> None:
        self._parent: dict[int, int] = {}

    def find(self, x: int) -> int:
        p = self._parent.setdefault(x, x)
        while p != x:
            self._parent[x] = p = self._parent.setdefault(p, p)
            x = p
        return x

    def union(self, x: int, y: int) -> bool:
        """Merge the classes of x and y.  False if already merged."""
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        self._parent[max(rx, ry)] = min(rx, ry)
        return True

    def classes(self, items: Iterable[int]) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for x in items:
            out.setdefault(self.find(x), []).append(x)
        return out


def _apairs(x: Crossing) -> tuple[tuple[int, int], tuple[int, int]]:
    """The two arc pairs joined by the A-smoothing, each sorted."""
    return (
        (min(x[0], x[1]), max(x[0], x[1])),
        (min(x[2], x[3]), max(x[2], x[3])),
    )


@dataclass(frozen=True)
class TwistRegion:
    """A labeled maximal negative twist region.

    ``crossings`` lists crossing ids along the stack; ``count`` is the
    number of crossings (0 means the region is currently the negative
    smoothing).  ``rails`` records, for a zero region only, the four
    endpoints its strands attach to, so the region can be re-grown.
    """

    rid: int
    crossings: tuple[int, ...]
    count: int
    rails: Rails | None = None


@dataclass(frozen=True)
class State:
    """A smoothing assignment, one value per crossing id.

    Classical states (``color`` is None) use values in {-1, +1}.  Colored
    states record the color n and use values in {0, ..., n}; they weight
    clasped smoothings and are evaluated by the invariants layer, not by
    circle counting.
    """

    assignment: Mapping[int, int]
    color: int | None = None

    @classmethod
    def all_minus(cls, diagram: "LinkDiagram") -> "State":
        return cls({i: -1 for i in range(len(diagram.crossings))})

    @classmethod
    def all_plus(cls, diagram: "LinkDiagram") -> "State":
        return cls({i: +1 for i in range(len(diagram.crossings))})


@dataclass(frozen=True)
class LinkDiagram:
    crossings: tuple[Crossing, ...]
    twist_regions: tuple[TwistRegion, ...] = ()
    free_loops: int = 0
    name: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "crossings", tuple(tuple(int(a) for a in x) for x in self.crossings)
        )
        object.__setattr__(
            self,
            "twist_regions",
            tuple(
                replace(reg, crossings=tuple(reg.crossings)) for reg in self.twist_regions
            ),
        )
        self._validate()

    def _validate(self) -> None:
        if self.free_loops < 0:
            raise DiagramError("free_loops must be nonnegative")
        seen: dict[int, int] = {}
        for x in self.crossings:
            if len(x) != 4:
                raise DiagramError(f"crossing {x} does not have 4 arc labels")
            for a in x:
                if a < 1:
                    raise DiagramError(f"arc label {a} is not a positive integer")
                seen[a] = seen.get(a, 0) + 1
        for a, m in seen.items():
            if m != 2:
                raise DiagramError(
                    f"arc {a} appears {m} times; every arc label must appear exactly twice"
                )
        used: set[int] = set()
        rids: set[int] = set()
        for reg in self.twist_regions:
            if reg.rid in rids:
                raise DiagramError(f"duplicate twist region id {reg.rid}")
            rids.add(reg.rid)
            if reg.count != len(reg.crossings):
                raise DiagramError(
                    f"region {reg.rid} declares {reg.count} crossings but lists "
                    f"{len(reg.crossings)}"
                )
            if reg.count == 0:
                self._validate_rails(reg)
                continue
            if reg.rails is not None:
                raise DiagramError(f"region {reg.rid} has rails but also crossings")
            for cid in reg.crossings:
                if not 0 <= cid < len(self.crossings):
                    raise DiagramError(f"region {reg.rid} references crossing {cid}")
                if cid in used:
                    raise DiagramError(f"crossing {cid} lies in two twist regions")
                used.add(cid)
            self._validate_chain(reg)

    def _validate_rails(self, reg: TwistRegion) -> None:
        if reg.rails is None:
            return
        labels = []
        for cid, slot in reg.rails:
            if not (0 <= cid < len(self.crossings) and 0 <= slot <= 3):
                raise DiagramError(f"region {reg.rid} rails reference ({cid}, {slot})")
            labels.append(self.crossings[cid][slot])
        bl, tl, br, tr = labels
        if bl != tl or br != tr or bl == br:
            raise DiagramError(
                f"region {reg.rid} rails must sit on two distinct through-arcs"
            )

    def _validate_chain(self, reg: TwistRegion) -> None:
        # Consecutive crossings of the stack must share an A-pair; a shared
        # B-pair would make the twist positive, which regions never are.
        prev_pair: tuple[int, int] | None = None
        for lo, hi in zip(reg.crossings, reg.crossings[1:]):
            shared = set(_apairs(self.crossings[lo])) & set(_apairs(self.crossings[hi]))
            shared.discard(prev_pair)  # type: ignore[arg-type]
            if not shared:
                raise DiagramError(
                    f"region {reg.rid}: crossings {lo} and {hi} are not joined by "
                    "a negative-twist bigon"
                )
            prev_pair = min(shared)

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)

    def arcs(self) -> frozenset[int]:
        return frozenset(a for x in self.crossings for a in x)

    def region(self, rid: int) -> TwistRegion:
        for reg in self.twist_regions:
            if reg.rid == rid:
                return reg
        raise DiagramError(f"no twist region {rid}")

    def to_json(self) -> str:
        return json.dumps(
            {
                "name": self.name,
                "crossings": [list(x) for x in self.crossings],
                "free_loops": self.free_loops,
                "regions": [
                    {
                        "id": reg.rid,
                        "crossings": list(reg.crossings),
                        "count": reg.count,
                        "rails": None
                        if reg.rails is None
                        else [list(ep) for ep in reg.rails],
                    }
                    for reg in self.twist_regions
                ],
            }
        )

    @classmethod
    def from_json(cls, data: str | dict) -> "LinkDiagram":
        obj = json.loads(data) if isinstance(data, str) else data
        regions = tuple(
            TwistRegion(
                rid=r["id"],
                crossings=tuple(r["crossings"]),
                count=r["count"],
                rails=None
                if r.get("rails") is None
                else tuple((c, s) for c, s in r["rails"]),  # type: ignore[misc]
            )
            for r in obj.get("regions", ())
        )
        return cls(
            crossings=tuple(tuple(x) for x in obj["crossings"]),
            twist_regions=regions,
            free_loops=obj.get("free_loops", 0),
            name=obj.get("name", ""),
        )


@dataclass(frozen=True)
class StateGraph:
    """The graph of an all-minus or all-plus state.

    Vertices are the circles of the state: ``circles`` holds the arc labels
    of each circle (sorted, ordered by smallest arc), and ``free_circles``
    counts crossing-free loop components, appended as isolated vertices.
    Each edge is (u, v, crossing id).
    """

    circles: tuple[tuple[int, ...], ...]
    free_circles: int
    edges: tuple[tuple[int, int, int], ...]
    sign: int
    reduced: bool = False

    @property
    def vertex_count(self) -> int:
        return len(self.circles) + self.free_circles

    @property
    def has_loop(self) -> bool:
        return any(u == v for u, v, _ in self.edges)

    def reduce(self) -> "StateGraph":
        """Merge parallel edges, keeping the smallest crossing id of each class."""
        kept: dict[tuple[int, int], int] = {}
        for u, v, cid in self.edges:
            if (u, v) not in kept or cid < kept[(u, v)]:
                kept[(u, v)] = cid
        edges = tuple(sorted((u, v, cid) for (u, v), cid in kept.items()))
        return replace(self, edges=edges, reduced=True)

    def to_dot(self, graph_name: str = "state_graph") -> str:
        lines = [f"graph {graph_name} {{"]
        for i, circle in enumerate(self.circles):
            label = ",".join(str(a) for a in circle)
            lines.append(f'  v{i} [label="({label})"];')
        for i in range(self.free_circles):
            lines.append(f'  v{len(self.circles) + i} [label="loop"];')
        for u, v, cid in self.edges:
            lines.append(f'  v{u} -- v{v} [label="c{cid}"];')
        lines.append("}")
        return "\n".join(lines)


# -- construction -------------------------------------------------------------


def pretzel(counts: Sequence[int], name: str | None = None) -> LinkDiagram:
    """The standard pretzel diagram with r vertical negative twist regions.

    Region i carries counts[i] crossings; a zero count means the region is
    the negative smoothing.  All regions are labeled 1..r.  The diagram is
    alternating whenever every count is at least 1.
    """
    if not counts:
        raise DiagramError("a pretzel needs at least one twist region")
    if any(k < 0 for k in counts):
        raise DiagramError("twist region sizes must be nonnegative")
    base = _pretzel_positive([max(k, 1) for k in counts])
    deltas = {i + 1: k - max(k, 1) for i, k in enumerate(counts) if k == 0}
    out = set_twists(base, deltas) if deltas else base
    label = name if name is not None else "P(" + ",".join(str(k) for k in counts) + ")"
    return replace(out, name=label)


def _pretzel_positive(counts: Sequence[int]) -> LinkDiagram:
    # Connector arcs: t[i] joins the tops of regions i and i+1 (cyclically),
    # b[i] the bottoms.  Region i's crossing j is [l(j-1), r(j-1), r(j), l(j)]
    # with the left column running from b[i-1] up to t[i-1] and the right
    # from b[i] to t[i]: the under-strand climbs the SW-NE diagonal, which
    # is what makes every region a negative twist.
    r = len(counts)
    t = [2 * i + 1 for i in range(r)]
    b = [2 * i + 2 for i in range(r)]
    nxt = 2 * r + 1
    crossings: list[Crossing] = []
    regions: list[TwistRegion] = []
    for i, k in enumerate(counts):
        left = [b[(i - 1) % r]]
        right = [b[i]]
        for _ in range(k - 1):
            left.append(nxt)
            right.append(nxt + 1)
            nxt += 2
        left.append(t[(i - 1) % r])
        right.append(t[i])
        first = len(crossings)
        for j in range(k):
            crossings.append((left[j], right[j], right[j + 1], left[j + 1]))
        regions.append(TwistRegion(i + 1, tuple(range(first, first + k)), k))
    return LinkDiagram(tuple(crossings), tuple(regions))


def parse_pd(
    text: str,
    regions: Sequence[Sequence[int]] | None = None,
    name: str = "",
) -> LinkDiagram:
    """Parse KnotTheory-style PD notation ``PD[X[a,b,c,d], ...]``.

    Twist regions are auto-detected as maximal chains of bigon-adjacent
    crossings unless explicit chains of crossing ids are supplied.
    """
    crossings = _parse_pd_text(text)
    if regions is None:
        regs = _detect_regions(crossings)
    else:
        regs = tuple(
            TwistRegion(i + 1, tuple(chain), len(chain)) for i, chain in enumerate(regions)
        )
    return LinkDiagram(crossings, regs, name=name)


def _parse_pd_text(text: str) -> tuple[Crossing, ...]:
    pos = 0

    def skip_ws() -> None:
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def expect(token: str) -> None:
        nonlocal pos
        skip_ws()
        if not text.startswith(token, pos):
            raise PDSyntaxError(f"expected '{token}'", pos)
        pos += len(token)

    def read_int() -> int:
        nonlocal pos
        skip_ws()
        start = pos
        while pos < len(text) and text[pos].isdigit():
            pos += 1
        if pos == start:
            raise PDSyntaxError("expected an arc label", start)
        return int(text[start:pos])

    expect("PD")
    expect("[")
    crossings: list[Crossing] = []
    skip_ws()
    if pos < len(text) and text[pos] == "]":
        pos += 1
    else:
        while True:
            x_at = pos
            expect("X")
            expect("[")
            labels = [read_int()]
            while True:
                skip_ws()
                if pos < len(text) and text[pos] == ",":
                    pos += 1
                    labels.append(read_int())
                elif pos < len(text) and text[pos] == "]":
                    pos += 1
                    break
                else:
                    raise PDSyntaxError("expected ',' or ']'", pos)
            if len(labels) != 4:
                raise PDSyntaxError(
                    f"X takes 4 arc labels, got {len(labels)}", x_at
                )
            crossings.append(tuple(labels))  # type: ignore[arg-type]
            skip_ws()
            if pos < len(text) and text[pos] == ",":
                pos += 1
                continue
            expect("]")
            break
    skip_ws()
    if pos != len(text):
        raise PDSyntaxError("trailing input", pos)
    return tuple(crossings)


def _detect_regions(crossings: Sequence[Crossing]) -> tuple[TwistRegion, ...]:
    # Two crossings are stacked in a negative twist exactly when they share
    # an arc pair that is an A-pair of both.  Each crossing has two A-pairs,
    # so the adjacency graph has maximum degree 2: its components are chains
    # (or closed-up cycles, broken at their smallest crossing id).
    partner: dict[tuple[int, int], list[int]] = {}
    for cid, x in enumerate(crossings):
        for pair in _apairs(x):
            partner.setdefault(pair, []).append(cid)
    adj: dict[int, set[int]] = {cid: set() for cid in range(len(crossings))}
    for cids in partner.values():
        if len(cids) == 2 and cids[0] != cids[1]:
            adj[cids[0]].add(cids[1])
            adj[cids[1]].add(cids[0])
    seen: set[int] = set()
    chains: list[list[int]] = []
    for start in range(len(crossings)):
        if start in seen:
            continue
        component = _component(start, adj)
        endpoints = sorted(c for c in component if len(adj[c] & component) < 2)
        head = endpoints[0] if endpoints else min(component)  # cycle: break here
        chain = [head]
        seen.add(head)
        while True:
            options = sorted(adj[chain[-1]] - seen)
            if not options:
                break
            chain.append(options[0])
            seen.add(options[0])
        chains.append(chain)
    return tuple(
        TwistRegion(i + 1, tuple(chain), len(chain)) for i, chain in enumerate(chains)
    )


def _component(start: int, adj: dict[int, set[int]]) -> set[int]:
    out = {start}
    todo = [start]
    while todo:
        for nb in adj[todo.pop()]:
            if nb not in out:
                out.add(nb)
                todo.append(nb)
    return out


# -- states and state graphs ---------------------------------------------------


def apply_state(diagram: LinkDiagram, state: State | Mapping[int, int]) -> int:
    """Circle count |s(D)| of the smoothed diagram.

    Positive values take the A-smoothing (joining slots (0,1) and (2,3)),
    negative the other pair.  Free loops count as circles.
    """
    if isinstance(state, State):
        if state.color is not None:
            raise DiagramError(
                "colored states weight clasped networks; apply_state counts "
                "circles of classical states only"
            )
        assignment = state.assignment
    else:
        assignment = state
    uf = _UnionFind()
    for cid, x in enumerate(diagram.crossings):
        try:
            value = assignment[cid]
        except KeyError:
            raise DiagramError(f"state does not assign crossing {cid}") from None
        if value == +1:
            uf.union(x[0], x[1])
            uf.union(x[2], x[3])
        elif value == -1:
            uf.union(x[0], x[3])
            uf.union(x[1], x[2])
        else:
            raise DiagramError(f"state value {value} at crossing {cid}; use -1 or +1")
    for cid in assignment:
        if not 0 <= cid < len(diagram.crossings):
            raise DiagramError(f"state assigns missing crossing {cid}")
    circles = len({uf.find(a) for a in diagram.arcs()})
    return circles + diagram.free_loops


def _state_graph(diagram: LinkDiagram, sign: int) -> StateGraph:
    uf = _UnionFind()
    for x in diagram.crossings:
        if sign == +1:
            uf.union(x[0], x[1])
            uf.union(x[2], x[3])
        else:
            uf.union(x[0], x[3])
            uf.union(x[1], x[2])
    classes = uf.classes(diagram.arcs())
    circles = tuple(sorted(tuple(sorted(arcs)) for arcs in classes.values()))
    index = {circle[0]: i for i, circle in enumerate(circles)}
    vertex_of = {a: index[min(classes[uf.find(a)])] for a in diagram.arcs()}
    edges = []
    for cid, x in enumerate(diagram.crossings):
        # One strand of the smoothed crossing passes through slot 0; the
        # other through slot 2 (A-smoothing) or slot 1 (negative).
        u = vertex_of[x[0]]
        v = vertex_of[x[2] if sign == +1 else x[1]]
        edges.append((min(u, v), max(u, v), cid))
    return StateGraph(
        circles=circles,
        free_circles=diagram.free_loops,
        edges=tuple(edges),
        sign=sign,
    )


def minus_graph(diagram: LinkDiagram) -> StateGraph:
    """Graph on the circles of the all-negative state, one edge per crossing."""
    return _state_graph(diagram, -1)


def plus_graph(diagram: LinkDiagram) -> StateGraph:
    return _state_graph(diagram, +1)


def reduced_minus_graph(diagram: LinkDiagram) -> StateGraph:
    return minus_graph(diagram).reduce()


def is_minus_adequate(diagram: LinkDiagram) -> bool:
    return not minus_graph(diagram).has_loop


def is_adequate(diagram: LinkDiagram) -> bool:
    return not (minus_graph(diagram).has_loop or plus_graph(diagram).has_loop)


def is_alternating(diagram: LinkDiagram) -> bool:
    """Whether every arc runs from an under-slot to an over-slot.

    Slots 0 and 2 of a crossing sit on the understrand, slots 1 and 3
    on the overstrand, so the diagram alternates exactly when each
    arc's two endpoints have opposite slot parity.  A diagram with no
    crossings alternates vacuously.
    """
    slots_of: dict[int, list[int]] = {}
    for x in diagram.crossings:
        for slot, a in enumerate(x):
            slots_of.setdefault(a, []).append(slot)
    return all(s0 % 2 != s1 % 2 for s0, s1 in slots_of.values())


# -- twist region editing ------------------------------------------------------


def set_twists(diagram: LinkDiagram, deltas: Mapping[int, int]) -> LinkDiagram:
    """Adjust labeled twist region sizes by the given per-region deltas.

    A region shrunk to zero crossings is replaced by the negative smoothing
    and remembers its site; growing it back requires that site to still be
    two distinct arcs (a region smoothed into an anonymous loop cannot be
    re-grown).  Regions are processed in increasing region id order.
    """
    out = diagram
    for rid in sorted(deltas):
        reg = out.region(rid)
        target = reg.count + deltas[rid]
        if target < 0:
            raise DiagramError(
                f"region {rid} has {reg.count} crossings; delta {deltas[rid]} "
                "gives a negative count"
            )
        if target == reg.count:
            continue
        if reg.count == 0:
            out = _grow_from_rails(out, reg, target)
        elif target == 0:
            out = _replace_region(out, reg, positive=False)
        else:
            out = _rebuild_region(out, reg, target)
    return out


def smooth_region(diagram: LinkDiagram, rid: int, sign: int) -> LinkDiagram:
    """Replace a whole twist region by one of its smoothings.

    sign -1 passes the strands straight through (the k=0 convention; the
    region stays labeled).  sign +1 is the turnback left by positively
    smoothing one crossing and untwisting the rest; that destroys the
    region, so its label is dropped.
    """
    reg = diagram.region(rid)
    if sign == -1:
        return set_twists(diagram, {rid: -reg.count})
    if sign != +1:
        raise DiagramError(f"smoothing sign must be -1 or +1, got {sign}")
    if reg.count == 0:
        raise DiagramError(f"region {rid} is already smoothed")
    return _replace_region(diagram, reg, positive=True)


def relabel_arcs(diagram: LinkDiagram, mapping: Mapping[int, int]) -> LinkDiagram:
    """Apply an injective arc relabeling; labels not mapped stay put."""
    arcs = diagram.arcs()
    image = {mapping.get(a, a) for a in arcs}
    if len(image) != len(arcs):
        raise DiagramError("arc relabeling is not injective")
    crossings = tuple(
        tuple(mapping.get(a, a) for a in x) for x in diagram.crossings
    )
    return replace(diagram, crossings=crossings)


def _chain_boundary(
    diagram: LinkDiagram, reg: TwistRegion
) -> tuple[list[int], list[int]]:
    """Boundary arcs of a nonempty region: [bl, br], [tl, tr], strand-matched.

    The bottom pair is the first crossing's free A-pair in slot order; the
    top pair is the last crossing's, ordered so that the negative smoothing
    of the whole region connects bl to tl and br to tr.
    """
    xs = [diagram.crossings[c] for c in reg.crossings]
    if len(xs) == 1:
        x = xs[0]
        return [x[0], x[1]], [x[3], x[2]]
    # Walk the chain with the same greedy bigon choice the validator makes,
    # so a closed-up region (both A-pairs shared between two crossings)
    # reads its free ends consistently.
    chosen: tuple[int, int] | None = None
    first_chosen: tuple[int, int] | None = None
    for lo_x, hi_x in zip(xs, xs[1:]):
        shared = set(_apairs(lo_x)) & set(_apairs(hi_x))
        shared.discard(chosen)  # type: ignore[arg-type]
        chosen = min(shared)
        if first_chosen is None:
            first_chosen = chosen
    lo = (2, 3) if _apairs(xs[0])[0] == first_chosen else (0, 1)
    hi = (2, 3) if _apairs(xs[-1])[0] == chosen else (0, 1)
    bottom = [xs[0][lo[0]], xs[0][lo[1]]]
    top_pair = [xs[-1][hi[0]], xs[-1][hi[1]]]
    uf = _UnionFind()
    for x in xs:
        uf.union(x[0], x[3])
        uf.union(x[1], x[2])
    if uf.find(top_pair[0]) == uf.find(bottom[0]):
        top = top_pair
    else:
        top = [top_pair[1], top_pair[0]]
    return bottom, top


def _rebuild_region(
    diagram: LinkDiagram, reg: TwistRegion, target: int
) -> LinkDiagram:
    (bl, br), (tl, tr) = _chain_boundary(diagram, reg)
    nxt = max(diagram.arcs()) + 1
    left = [bl] + list(range(nxt, nxt + target - 1)) + [tl]
    nxt += target - 1
    right = [br] + list(range(nxt, nxt + target - 1)) + [tr]
    chain = [
        (left[j], right[j], right[j + 1], left[j + 1]) for j in range(target)
    ]
    removed = set(reg.crossings)
    keep = [cid for cid in range(len(diagram.crossings)) if cid not in removed]
    remap = {old: new for new, old in enumerate(keep)}
    crossings = [diagram.crossings[cid] for cid in keep]
    first_new = len(crossings)
    crossings.extend(chain)

    def move_endpoint(ep: Endpoint) -> Endpoint | None:
        cid, slot = ep
        if cid not in removed:
            return (remap[cid], slot)
        label = diagram.crossings[cid][slot]
        for j, x in enumerate(chain):  # boundary labels survive the rebuild
            if label in x:
                return (first_new + j, x.index(label))
        return None

    regions = []
    for other in diagram.twist_regions:
        if other.rid == reg.rid:
            regions.append(
                TwistRegion(reg.rid, tuple(range(first_new, first_new + target)), target)
            )
        else:
            regions.append(_move_region(other, remap, move_endpoint))
    return replace(
        diagram, crossings=tuple(crossings), twist_regions=tuple(regions)
    )


def _move_region(
    reg: TwistRegion,
    remap: Mapping[int, int],
    move_endpoint,
) -> TwistRegion:
    crossings = tuple(remap[cid] for cid in reg.crossings)
    rails = reg.rails
    if rails is not None:
        moved = tuple(move_endpoint(ep) for ep in rails)
        rails = None if any(ep is None for ep in moved) else moved  # type: ignore[assignment]
    return TwistRegion(reg.rid, crossings, reg.count, rails)


def _replace_region(
    diagram: LinkDiagram, reg: TwistRegion, positive: bool
) -> LinkDiagram:
    """Replace a nonempty region by a smoothing of both its strands."""
    (bl, br), (tl, tr) = _chain_boundary(diagram, reg)
    removed = set(reg.crossings)
    uf = _UnionFind()
    incident: set[int] = set()
    if positive:
        uf.union(bl, br)
        uf.union(tl, tr)
        incident = {bl, br, tl, tr}
    else:
        for cid in reg.crossings:
            x = diagram.crossings[cid]
            uf.union(x[0], x[3])
            uf.union(x[1], x[2])
            incident |= set(x)

    outer: dict[int, list[Endpoint]] = {}
    for cid, x in enumerate(diagram.crossings):
        if cid in removed:
            continue
        for slot, label in enumerate(x):
            if label in incident:
                outer.setdefault(uf.find(label), []).append((cid, slot))

    loops = 0
    rewrite: dict[int, int] = {}
    for root, members in uf.classes(incident).items():
        ends = outer.get(root, [])
        if not ends:
            loops += 1
            continue
        kept = min(diagram.crossings[c][s] for c, s in ends)
        for label in members:
            if label != kept:
                rewrite[label] = kept

    keep = [cid for cid in range(len(diagram.crossings)) if cid not in removed]
    remap = {old: new for new, old in enumerate(keep)}
    crossings = tuple(
        tuple(rewrite.get(a, a) for a in diagram.crossings[cid]) for cid in keep
    )

    def move_endpoint(ep: Endpoint) -> Endpoint | None:
        cid, slot = ep
        return (remap[cid], slot) if cid not in removed else None

    rails = None
    if not positive:
        rails = _clean_rails(diagram, (bl, tl, br, tr), uf, outer, removed, remap)

    regions = []
    for other in diagram.twist_regions:
        if other.rid == reg.rid:
            if not positive:
                regions.append(TwistRegion(reg.rid, (), 0, rails))
            continue
        regions.append(_move_region(other, remap, move_endpoint))
    return replace(
        diagram,
        crossings=crossings,
        twist_regions=tuple(regions),
        free_loops=diagram.free_loops + loops,
    )


def _clean_rails(
    diagram: LinkDiagram,
    corners: tuple[int, int, int, int],
    uf: _UnionFind,
    outer: dict[int, list[Endpoint]],
    removed: set[int],
    remap: Mapping[int, int],
) -> Rails | None:
    bl, tl, br, tr = corners
    if len({bl, tl, br, tr}) != 4 or uf.find(bl) == uf.find(br):
        return None
    eps = []
    for corner in (bl, tl, br, tr):
        candidates = [
            (cid, slot)
            for cid, slot in outer.get(uf.find(corner), [])
            if diagram.crossings[cid][slot] == corner
        ]
        if len(candidates) != 1:
            return None
        cid, slot = candidates[0]
        eps.append((remap[cid], slot))
    left = {e for e in outer.get(uf.find(bl), [])}
    right = {e for e in outer.get(uf.find(br), [])}
    if len(left) != 2 or len(right) != 2:
        return None
    return (eps[0], eps[1], eps[2], eps[3])


def _grow_from_rails(
    diagram: LinkDiagram, reg: TwistRegion, target: int
) -> LinkDiagram:
    if reg.rails is None:
        raise DiagramError(
            f"region {reg.rid} was smoothed into an anonymous site and cannot "
            "be re-grown; rebuild the diagram instead"
        )
    (bl_ep, tl_ep, br_ep, tr_ep) = reg.rails
    bl = diagram.crossings[bl_ep[0]][bl_ep[1]]
    br = diagram.crossings[br_ep[0]][br_ep[1]]
    nxt = max(diagram.arcs()) + 1
    tl, tr = nxt, nxt + 1
    nxt += 2
    crossings = [list(x) for x in diagram.crossings]
    crossings[tl_ep[0]][tl_ep[1]] = tl
    crossings[tr_ep[0]][tr_ep[1]] = tr
    left = [bl] + list(range(nxt, nxt + target - 1)) + [tl]
    nxt += target - 1
    right = [br] + list(range(nxt, nxt + target - 1)) + [tr]
    first_new = len(crossings)
    for j in range(target):
        crossings.append([left[j], right[j], right[j + 1], left[j + 1]])
    regions = tuple(
        TwistRegion(reg.rid, tuple(range(first_new, first_new + target)), target)
        if other.rid == reg.rid
        else other
        for other in diagram.twist_regions
    )
    return replace(
        diagram,
        crossings=tuple(tuple(x) for x in crossings),
        twist_regions=regions,
    )
