import math
import random
import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import longest_bimonotone_subset
from simr.axes import tokenize_cognate_mode
from simr.evaluation import rms_perpendicular_error
from simr.geometry import BitextSpace, Point, interpolate, least_squares_fit
from simr.matching import PredicateConfig, TranslationLexicon
from simr.recognizer import Chain, SimrParams
from simr.search import (SearchConfig, SignalTooSparse, assemble_map, build_axes, map_many,
                         map_texts, read_map, run_search, write_map)
from simr.synthgen import DistortionSpec, generate, random_source

EXACT = PredicateConfig(lcsr_threshold=1.0)


def chain_of(*pts):
    pts = tuple(Point(*p) for p in pts)
    return Chain(pts, least_squares_fit(pts), 0.0)


def test_identity_bitext_maps_to_diagonal():
    text = ("the quick brown foxes jumped over seventeen lazy dogs while ninety "
            "clever ravens watched from twelve tall chimneys near the harbour. ") * 20
    bmap = map_texts(text, text, predicate=EXACT)
    params = SimrParams()
    assert bmap.chains
    for p in bmap.points:
        assert abs(p.x - p.y) <= params.max_point_dispersal
    for x in range(0, len(text), 37):
        assert interpolate(bmap, x) == pytest.approx(x, abs=params.max_point_dispersal)


def test_search_recovers_after_omission():
    src = random_source(6000, seed=11)
    bitext = generate(src, DistortionSpec(omission_spans=((3000, 500),), rng_seed=4))
    trace = []
    ax, ay = build_axes(bitext.text_x, bitext.text_y, PredicateConfig())
    bmap = run_search(ax, ay, SimrParams(), trace=trace)
    before = [c for _, c in trace if c.anchor_corner.x < 3000]
    after = [c for _, c in trace if min(p.x for p in c.points) > 3000]
    assert before and after
    # after the gap, accepted points sit 500 characters above the diagonal
    assert all(abs(p.y - p.x - 500) < 15 for c in after for p in c.points)
    assert rms_perpendicular_error(bmap, bitext.gold).rms_error < 50


def test_no_signal_degenerates():
    ax = tokenize_cognate_mode("aaaa bbbb cccc dddd")
    ay = tokenize_cognate_mode("wxyz wxyz qrst qrst")
    with pytest.warns(SignalTooSparse):
        bmap = run_search(ax, ay, SimrParams())
    assert bmap.points == [Point(0, 0), Point(ax.text_length, ay.text_length)]
    assert bmap.is_degenerate


def test_empty_axis_degenerates():
    with pytest.warns(SignalTooSparse):
        bmap = map_texts("no matches here", "rien ici", predicate=PredicateConfig(
            use_cognates=False, use_lexicon=True), lexicon=TranslationLexicon())
    assert len(bmap.points) == 2


def test_assemble_monotone_chains_discards_nothing():
    space = BitextSpace(100, 100)
    bmap = assemble_map([chain_of((10, 10), (20, 21), (30, 29)), chain_of((40, 42), (50, 50))], space)
    assert bmap.discarded == 0
    assert bmap.points == [Point(0, 0), Point(10, 10), Point(20, 21), Point(30, 29), Point(40, 42),
                           Point(50, 50), Point(100, 100)]


def test_assemble_drops_one_point_of_an_inversion():
    pts = [(10, 10), (20, 30), (30, 20), (40, 40)]
    assert longest_bimonotone_subset(pts) == 3
    chain = chain_of(*pts)
    bmap = assemble_map([chain], BitextSpace(100, 100))
    assert bmap.discarded == 1
    assert len(bmap.points) == 2 + 3
    assert set(bmap.chains[0].points) == {Point(*p) for p in pts}


def test_assemble_without_chains():
    bmap = assemble_map([], BitextSpace(7, 9))
    assert bmap.points == [Point(0, 0), Point(7, 9)]


@settings(max_examples=200)
@given(st.lists(st.lists(st.tuples(st.integers(0, 40), st.integers(0, 40)), min_size=2, max_size=4),
                max_size=3))
def test_assembled_maps_are_bimonotone(raw_chains):
    space = BitextSpace(40, 40)
    chains = []
    for raw in raw_chains:
        pts = list(dict.fromkeys(raw))
        if len({x for x, _ in pts}) > 1:
            chains.append(chain_of(*pts))
    bmap = assemble_map(chains, space)
    assert bmap.points[0] == Point(0, 0) and bmap.points[-1] == Point(40, 40)
    for a, b in zip(bmap.points, bmap.points[1:]):
        assert b.x > a.x and b.y > a.y
    interior = {p for c in chains for p in c.points if 0 < p.x < 40 and 0 < p.y < 40}
    if len(interior) <= 9:
        assert len(bmap.points) - 2 == longest_bimonotone_subset(list(interior))
    assert bmap.discarded == len(interior) - (len(bmap.points) - 2)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_trace_invariants(seed):
    src = random_source(5000, seed=seed)
    bitext = generate(src, DistortionSpec(substitution_rate=0.1, inversion_rate=0.1,
                                          length_jitter=0.2, rng_seed=seed))
    ax, ay = build_axes(bitext.text_x, bitext.text_y, PredicateConfig())
    trace = []
    bmap = run_search(ax, ay, SimrParams(), trace=trace)
    corners = [c.anchor_corner for _, c in trace]
    for a, b in zip(corners, corners[1:]):
        assert b.x > a.x and b.y > a.y
    for rect, chain in trace:
        assert all(rect.contains(p) for p in chain.points)
    again = run_search(ax, ay, SimrParams())
    assert again.points == bmap.points


def test_jump_rule_moves_past_dead_stretches():
    # nothing matches in the first half, then an identical stretch
    rng = random.Random(3)
    junk_x = " ".join("".join(rng.choice("bcdfg") for _ in range(6)) for _ in range(150))
    junk_y = " ".join("".join(rng.choice("hjklm") for _ in range(6)) for _ in range(150))
    tail = random_source(3000, seed=8)
    text_x, text_y = junk_x + " " + tail, junk_y + " " + tail
    cfg = SearchConfig(initial_width=20, growth_factor=1.5, max_expansions=3)
    bmap = map_texts(text_x, text_y, cfg=cfg, predicate=EXACT)
    assert bmap.chains
    assert min(p.x for c in bmap.chains for p in c.points) > len(junk_x)


def test_search_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(growth_factor=1.0)


def test_lexicon_mode_end_to_end():
    src = random_source(6000, seed=21)
    bitext = generate(src, DistortionSpec(substitution_rate=1.0, rng_seed=5))
    # every letter was enciphered, so cognates are useless; a lexicon carries the signal
    lex = TranslationLexicon.from_pairs(
        (wx, wy) for wx, wy in zip(src.split(), bitext.text_y.split())
        if wx.isalpha() and len(wx) >= 5)
    pred = PredicateConfig(use_cognates=False, use_lexicon=True)
    bmap = map_texts(bitext.text_x, bitext.text_y, predicate=pred, lexicon=lex)
    assert len(bmap.chains) > 10
    assert rms_perpendicular_error(bmap, bitext.gold).rms_error < 10


def test_batch_matches_sequential():
    texts = [(random_source(2000, seed=s), random_source(2000, seed=s)) for s in range(3)]
    seq = map_many(texts, predicate=EXACT)
    par = map_many(texts, predicate=EXACT, jobs=2)
    assert [m.points for m in seq] == [m.points for m in par]


def test_map_file_round_trip(tmp_path):
    space = BitextSpace(100, 120)
    bmap = assemble_map([chain_of((10.25, 12.5), (20, 25), (30, 37.5))], space)
    path = tmp_path / "map.tsv"
    write_map(bmap, path)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "x\ty"
    assert lines[1] == "0.00\t0.00"
    assert lines[-2:] == ["# discarded: 0", "# chains: 1"]
    back = read_map(path)
    assert back.space == space
    assert back.points[1] == Point(10.25, 12.5)
