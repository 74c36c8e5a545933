"""Ribbon-graph checks: signatures, canonical one-vertex models, splicing.

Oracles: signatures of the builders are computed by hand from Euler
characteristic (one vertex, k band pairs, faces counted by tracing); the
canonical layouts are frozen from exact runs and pinned so that any change
to the contraction or rotation rules is caught.
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skeintrace.surfaces import (
    RibbonGraph,
    annulus,
    annulus_two_vertex,
    disk,
    one_vertex_model,
    torus_two_vertex,
    torus_with_boundary,
)


def test_builder_signatures():
    assert disk().signature() == (0, 1, 1, 1)
    assert annulus().signature() == (0, 2, 1, 1)
    assert torus_with_boundary().signature() == (1, 1, 1, 1)
    assert annulus_two_vertex().signature() == (0, 2, 1, 1)
    assert torus_two_vertex().signature() == (1, 1, 1, 1)


def test_canonical_one_vertex_layouts():
    assert one_vertex_model(disk()) == (["m"], [], "m")
    assert one_vertex_model(annulus()) == (["m", "a", "b"], [("a", "b")], "m")
    assert one_vertex_model(torus_with_boundary()) == (
        ["m", "a", "b", "a'", "b'"],
        [("a", "a'"), ("b", "b'")],
        "m",
    )


def test_two_vertex_models_splice_to_one_vertex():
    cyc, pairs, marked = one_vertex_model(annulus_two_vertex())
    assert len(cyc) == 3 and len(pairs) == 1 and marked == "m"
    cyc, pairs, marked = one_vertex_model(torus_two_vertex())
    assert len(cyc) == 5 and len(pairs) == 2 and marked == "m"
    # the spliced torus keeps the interleaved chord pattern
    pos = {name: i for i, name in enumerate(cyc)}
    (a1, a2), (b1, b2) = pairs
    sa = sorted((pos[a1], pos[a2]))
    sb = sorted((pos[b1], pos[b2]))
    assert sa[0] < sb[0] < sa[1] < sb[1]


def test_pair_count_matches_dimension_exponent():
    for graph in (disk(), annulus(), torus_with_boundary(),
                  annulus_two_vertex(), torus_two_vertex()):
        g, r, comps, n = graph.signature()
        _, pairs, _ = one_vertex_model(graph)
        assert len(pairs) == 2 * g + r - 1


def _chord_graph(pairing):
    """One vertex with marked slot first and 2k legs paired by `pairing`."""
    k = len(pairing)
    legs = [f"e{i}" for i in range(2 * k)]
    pairs = [(legs[a], legs[b]) for a, b in pairing]
    return RibbonGraph([["m"] + legs], pairs, ["m"])


@st.composite
def chord_pairings(draw):
    k = draw(st.integers(min_value=0, max_value=4))
    slots = list(range(2 * k))
    rng = draw(st.randoms(use_true_random=False))
    rng.shuffle(slots)
    return [tuple(sorted((slots[2 * i], slots[2 * i + 1]))) for i in range(k)]


@given(chord_pairings())
@settings(max_examples=60, deadline=None)
def test_one_vertex_euler_identity(pairing):
    graph = _chord_graph(pairing)
    g, r, comps, n = graph.signature()
    assert comps == 1 and n == 1
    assert g >= 0 and r >= 1
    # Euler characteristic of a one-vertex graph with k bands: 1 - k = 2 - 2g - r
    assert 1 - len(pairing) == 2 - 2 * g - r


@given(chord_pairings())
@settings(max_examples=60, deadline=None)
def test_one_vertex_model_idempotent(pairing):
    graph = _chord_graph(pairing)
    cyc, pairs, marked = one_vertex_model(graph)
    again = one_vertex_model(RibbonGraph([cyc], pairs, [marked]))
    assert again == (cyc, pairs, marked)
    assert graph.signature() == RibbonGraph([cyc], pairs, [marked]).signature()
