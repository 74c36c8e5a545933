"""Combinatorial surfaces as ribbon graphs.

A surface is a fattened graph: vertices carry a cyclic order of slots,
pairs of slots are glued into bands, unpaired slots are marked boundary
intervals.  The genus and boundary count come from the Euler characteristic
and an explicit boundary walk (unpaired slots are completed by one-valent
leaf vertices, which changes neither the homotopy type nor the boundary).

Multi-vertex graphs reduce to a single vertex by contracting a spanning
tree of bands in a fixed lexicographic order; the contraction is the usual
fatgraph edge contraction and preserves the fattened surface.
"""

from __future__ import annotations


class SurfaceError(ValueError):
    """Malformed ribbon graph."""


class RibbonGraph:
    """vertices: list of slot lists (cyclic order); pairs: list of 2-lists;
    marked: ordered list of unpaired slots."""

    def __init__(self, vertices, pairs, marked):
        self.vertices = [list(v) for v in vertices]
        self.pairs = [tuple(p) for p in pairs]
        self.marked = list(marked)
        self._validate()

    def _validate(self):
        seen = {}
        for vi, v in enumerate(self.vertices):
            if not v:
                raise SurfaceError(f"vertex {vi} has no slots")
            for s in v:
                if s in seen:
                    raise SurfaceError(f"slot {s!r} appears twice")
                seen[s] = vi
        used = {}
        for p in self.pairs:
            if len(p) != 2 or p[0] == p[1]:
                raise SurfaceError(f"bad pair {p!r}")
            for s in p:
                if s not in seen:
                    raise SurfaceError(f"paired slot {s!r} is not on any vertex")
                if s in used:
                    raise SurfaceError(f"slot {s!r} used twice")
                used[s] = True
        for s in self.marked:
            if s not in seen:
                raise SurfaceError(f"marked slot {s!r} is not on any vertex")
            if s in used:
                raise SurfaceError(f"slot {s!r} both paired and marked")
            used[s] = True
        for s in seen:
            if s not in used:
                raise SurfaceError(f"slot {s!r} neither paired nor marked")
        for comp in self._components():
            if not any(self._vertex_of(s) in comp for s in self.marked):
                raise SurfaceError(
                    "every connected component needs at least one marked slot"
                )

    def _vertex_of(self, slot):
        for vi, v in enumerate(self.vertices):
            if slot in v:
                return vi
        raise SurfaceError(f"unknown slot {slot!r}")

    def _components(self):
        parent = list(range(len(self.vertices)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for a, b in self.pairs:
            ra, rb = find(self._vertex_of(a)), find(self._vertex_of(b))
            if ra != rb:
                parent[ra] = rb
        comps = {}
        for i in range(len(self.vertices)):
            comps.setdefault(find(i), set()).add(i)
        return list(comps.values())

    def signature(self):
        """(genus, boundary count, components, marked count); connected
        graphs get the usual chi = 2 - 2g - r bookkeeping."""
        comps = self._components()
        r = self._boundary_count()
        if len(comps) == 1:
            chi = len(self.vertices) - len(self.pairs)
            g2 = 2 - chi - r
            if g2 < 0 or g2 % 2:
                raise SurfaceError("inconsistent Euler characteristic")
            return (g2 // 2, r, 1, len(self.marked))
        return (None, r, len(comps), len(self.marked))

    def _boundary_count(self):
        # leaf completion: each marked slot m is paired to a fresh leaf slot
        nxt = {}
        for v in self.vertices:
            for i, s in enumerate(v):
                nxt[s] = v[(i + 1) % len(v)]
        alpha = {}
        for a, b in self.pairs:
            alpha[a] = b
            alpha[b] = a
        for m in self.marked:
            leaf = ("leaf", m)
            alpha[m] = leaf
            alpha[leaf] = m
            nxt[leaf] = leaf
        seen = set()
        count = 0
        for start in nxt:
            if start in seen:
                continue
            count += 1
            s = start
            while s not in seen:
                seen.add(s)
                s = nxt[alpha[s]]
        return count

    def to_dict(self):
        return {
            "vertices": [list(v) for v in self.vertices],
            "pairs": [list(p) for p in self.pairs],
            "marked": list(self.marked),
        }


def from_dict(data) -> RibbonGraph:
    for key in ("vertices", "pairs", "marked"):
        if key not in data:
            raise SurfaceError(f"surface data is missing {key!r}")
    return RibbonGraph(data["vertices"], data["pairs"], data["marked"])


# -- one-vertex reduction -----------------------------------------------------------


def _contract(vertices, pairs, pair):
    """Fatgraph contraction of a band joining two distinct vertices."""
    x, y = pair
    vx = next(i for i, v in enumerate(vertices) if x in v)
    vy = next(i for i, v in enumerate(vertices) if y in v)
    assert vx != vy
    a, b = vertices[vx], vertices[vy]
    i, j = a.index(x), b.index(y)
    merged = a[:i] + b[j + 1 :] + b[:j] + a[i + 1 :]
    out = [v for k, v in enumerate(vertices) if k not in (vx, vy)]
    out.append(merged)
    return out, [p for p in pairs if p != pair]


def one_vertex_model(graph: RibbonGraph):
    """Contract a spanning tree of bands, smallest label pair first.

    Returns (cyclic slot list rotated marked-first, remaining pairs in
    first-slot order, marked slot).  Requires a connected graph with exactly
    one marked slot.
    """
    g, r, comps, n = graph.signature()
    if comps != 1:
        raise SurfaceError("one-vertex reduction needs a connected graph")
    if n != 1:
        raise SurfaceError("one-vertex reduction needs exactly one marked slot")
    vertices = [list(v) for v in graph.vertices]
    pairs = list(graph.pairs)
    while len(vertices) > 1:
        crossing = sorted(
            (p for p in pairs
             if next(i for i, v in enumerate(vertices) if p[0] in v)
             != next(i for i, v in enumerate(vertices) if p[1] in v)),
            key=lambda p: sorted(map(str, p)),
        )
        if not crossing:
            raise SurfaceError("graph is not connected")
        vertices, pairs = _contract(vertices, pairs, crossing[0])
    cyc = vertices[0]
    m = graph.marked[0]
    k = cyc.index(m)
    cyc = cyc[k:] + cyc[:k]
    pos = {s: i for i, s in enumerate(cyc)}
    ordered = []
    for p in pairs:
        a, b = sorted(p, key=lambda s: pos[s])
        ordered.append((a, b))
    ordered.sort(key=lambda p: pos[p[0]])
    check = RibbonGraph([cyc], ordered, [m]).signature()
    assert check == (g, r, 1, 1)
    return cyc, ordered, m


# -- standard models ---------------------------------------------------------------


def disk():
    return RibbonGraph([["m"]], [], ["m"])


def annulus():
    return RibbonGraph([["m", "a", "b"]], [["a", "b"]], ["m"])


def torus_with_boundary():
    return RibbonGraph(
        [["m", "a", "b", "a'", "b'"]], [["a", "a'"], ["b", "b'"]], ["m"]
    )


def annulus_two_vertex():
    """Two disks joined by two bands: same surface as annulus()."""
    return RibbonGraph(
        [["a1", "a2", "m"], ["b1", "b2"]],
        [["a1", "b1"], ["a2", "b2"]],
        ["m"],
    )


def torus_two_vertex():
    """A vertex split of the one-holed torus."""
    return RibbonGraph(
        [["a", "b", "x", "m"], ["x'", "a'", "b'"]],
        [["a", "a'"], ["b", "b'"], ["x", "x'"]],
        ["m"],
    )


def graph_signature(graph: RibbonGraph):
    """(genus, boundary components, connected components, markings)."""
    return graph.signature()


STANDARD_SURFACES = {
    "disk": disk,
    "annulus": annulus,
    "torus": torus_with_boundary,
    "annulus2": annulus_two_vertex,
    "torus2": torus_two_vertex,
}
