import pytest

from lexsim import (Parameters, ValidationError, build_network, dense_run,
                    materialize_dense, prune_candidates, run, synthetic_lexicon)
from lexsim.network import Pool
from lexsim.reference import DenseEngine
from lexsim.tasks import make_monitor


def test_dense_materialization_counts(table1_network):
    dense = materialize_dense(table1_network)
    for o in table1_network.pool_ids[Pool.ORTHO]:
        assert dense.inhibitory_count(o) == 19  # every other orthographic node
    for p in table1_network.pool_ids[Pool.PHONO]:
        assert dense.inhibitory_count(p) == 19
    for s in table1_network.pool_ids[Pool.SEM]:
        assert dense.inhibitory_count(s) == 9
    for other in table1_network.pool_ids[Pool.LANG] + table1_network.pool_ids[Pool.INPUT]:
        assert dense.inhibitory_count(other) == 0


def test_size_guard_refuses_large_lexicons():
    lex = synthetic_lexicon(501)
    net = build_network(lex, Parameters())
    with pytest.raises(ValidationError, match="refused"):
        materialize_dense(net)
    # explicit override for benchmark use
    assert materialize_dense(net, max_entries=600) is not None


@pytest.mark.parametrize("gamma", [0.0, -0.0001, -0.1])
def test_dense_trace_bit_identical(homograph_lexicon, homograph_network, gamma):
    params = Parameters().updated(OO_gamma=gamma, PP_gamma=gamma)
    engine = DenseEngine(homograph_network)
    for stimulus in ("ROOM", "AARDE", "AARDBEI"):
        m1 = make_monitor("WT", "NL", "EN", params)
        m2 = make_monitor("WT", "NL", "EN", params)
        trace_fast, out_fast = run(homograph_network, stimulus, m1, params, trace="full")
        trace_dense, out_dense = engine.run(stimulus, m2, params, trace="full")
        assert trace_fast.frames == trace_dense.frames
        assert (out_fast.response_kind, out_fast.response_symbol, out_fast.cycles) \
            == (out_dense.response_kind, out_dense.response_symbol, out_dense.cycles)


def test_dense_run_convenience(table1, params):
    monitor = make_monitor("LD", "NL", None, params)
    _trace, outcome = dense_run(table1, "AARDE", monitor, params)
    assert outcome.response_kind == "yes"
    assert outcome.cycles == 12


def test_zero_gamma_matches_inhibition_free_run(table1, table1_network):
    p_zero = Parameters().updated(OO_gamma=0.0, PP_gamma=0.0)
    m1 = make_monitor("NAME", "NL", "NL", p_zero)
    m2 = make_monitor("NAME", "NL", "NL", p_zero)
    t_fast, _ = run(table1_network, "AAP", m1, p_zero, trace="full")
    t_dense, _ = dense_run(table1, "AAP", m2, p_zero, trace="full")
    assert t_fast.frames == t_dense.frames


# -- pruning heuristic --------------------------------------------------------

def test_prune_drops_disjoint_unrelated_pair():
    from lexsim import parse_lexicon
    lex = parse_lexicon("DOG,5.0,dQg,5.0,HOND,5.0,hOnt,5.0\n"
                        "PIE,5.0,p2,5.0,TAART,5.0,tart,5.0")
    counts = {c.pool: c for c in prune_candidates(lex, 0.001)}
    # DOG-PIE style pairs (no overlap, different concepts) are dropped;
    # within-pair readings survive through the semantic path
    assert counts["ortho"].dropped > 0
    assert counts["ortho"].kept >= 2


def test_prune_keeps_translation_pair_without_overlap(table1):
    # AAP and MONKEY share no orthography but one concept
    counts = prune_candidates(table1, weight_threshold=0.5)
    ortho = next(c for c in counts if c.pool == "ortho")
    # every entry contributes at least its own cross-language pair
    assert ortho.kept >= len(table1.entries)


def test_prune_monotone_in_threshold(table1):
    loose = {c.pool: c.kept for c in prune_candidates(table1, 0.0001)}
    tight = {c.pool: c.kept for c in prune_candidates(table1, 0.001)}
    assert loose["ortho"] >= tight["ortho"]
    assert loose["phono"] >= tight["phono"]


def test_prune_counts_cover_all_pairs(table1):
    n_readings = 2 * len(table1.entries)
    n_pairs = n_readings * (n_readings - 1) // 2
    for c in prune_candidates(table1, 0.001):
        assert c.kept + c.dropped == n_pairs


def test_prune_homograph_links_concepts(homograph_lexicon):
    # ROOM(NL) and ROOM(EN) share a form, linking the cream and room
    # concepts; their unrelated readings then survive via the one-hop path
    counts = {c.pool: c for c in prune_candidates(homograph_lexicon, 1.0)}
    room = [e for e in homograph_lexicon.entries if "ROOM" in (e.ortho_a, e.ortho_b)]
    assert len(room) == 2
    assert counts["ortho"].kept >= len(homograph_lexicon.entries) + 1


def test_prune_rejects_negative_threshold(table1):
    with pytest.raises(ValueError):
        prune_candidates(table1, -0.1)


def test_prune_report_rows_layout(table1):
    from lexsim.reference import prune_report_rows
    rows = prune_report_rows(prune_candidates(table1, 0.001))
    assert rows[0] == ["pool", "threshold", "kept", "dropped"]
    assert [r[0] for r in rows[1:]] == ["ortho", "phono"]
