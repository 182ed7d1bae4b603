import json
import random
from itertools import combinations

import pytest

import oracles
from wsatlab.config import Budget
from wsatlab.errors import DomainError
from wsatlab.graph import Graph, common_mask, complete_graph, contains_clique, generate_gnp, members
from wsatlab.properties import (check_Bs, check_Bstar, check_EXT, check_HAM, edges_without_clique,
                                ham_cell, mu)
from wsatlab.seeding import Seed


def _gnp(n, p, label, i):
    return generate_gnp(n, p, Seed(31).child(label, i))


@pytest.mark.parametrize("s", [3, 4, 5])
def test_ext_on_complete_graphs(s, backend):
    for n in range(s, 13):
        assert check_EXT(complete_graph(n), s).holds == (n >= 2 * s - 2)


def test_ext_c5(c5):
    rep = check_EXT(c5, 3)
    assert not rep.holds and len(rep.failure_witness) == 3


def test_ext_gnp_matches_triple_loop(backend):
    holds = 0
    for i in range(6):
        g = _gnp(60, 0.6, "ext", i)
        rep = check_EXT(g, 3)
        assert rep.holds == oracles.ext_holds(g, 3)
        holds += rep.holds
    assert holds >= 4


def test_ham_complete_and_c5(c5):
    assert check_HAM(complete_graph(7), 3).holds
    rep = check_HAM(c5, 3)
    assert not rep.holds
    # the first pair in lex order is adjacent and has no common neighbour
    assert rep.failure_witness == (0, 1) and rep.counts["witness_neighborhood_size"] == 0


def test_ham_s3_matches_hamilton_oracle(backend):
    rnd = random.Random(4)
    for i in range(25):
        g = _gnp(11, rnd.uniform(0.4, 0.9), "ham", i)
        expect = all(oracles.hamiltonian_path_exists(g, members(common_mask(g, pair)))
                     for pair in combinations(range(g.n), 2))
        assert check_HAM(g, 3).holds == expect


def test_ham_s4_matches_permutation_oracle():
    rnd = random.Random(5)
    for i in range(20):
        g = _gnp(9, rnd.uniform(0.7, 0.95), "ham4", i)
        expect = True
        for triple in combinations(range(g.n), 3):
            nb = members(common_mask(g, triple))
            if len(nb) < 2 or not oracles.path_power_exists(g, nb, 2):
                expect = False
                break
        assert check_HAM(g, 4).holds == expect


def test_ham_degenerate_convention():
    g = Graph.from_edges(3, [(0, 2), (1, 2)])
    budget = Budget()
    assert ham_cell(g, (0, 1), 3, budget)          # singleton neighbourhood passes
    assert ham_cell(g, (0, 2), 3, budget) is False  # empty neighbourhood fails
    # s = 4 needs at least two common neighbours
    k4 = complete_graph(4)
    assert ham_cell(k4, (0, 1, 2), 4, budget) is False


def test_ham_budget_lands_in_undecided():
    g = _gnp(30, 0.5, "hamb", 0)
    rep = check_HAM(g, 3, Budget(extensions=2))
    assert not rep.holds
    assert rep.undecided or rep.failure_witness is not None


def test_ham_cap():
    with pytest.raises(DomainError):
        check_HAM(complete_graph(20), 3, max_n=10)


def test_bs_examples(c5):
    rep = check_Bs(complete_graph(6), 4)
    assert rep.holds and rep.counts["N_s"] == 0
    rep = check_Bs(c5, 3)
    assert not rep.holds and rep.counts["N_s"] == 5


def test_bs_count_matches_oracle(backend):
    for i in range(5):
        g = _gnp(100, 0.2, "bs", i)
        assert check_Bs(g, 3).counts["N_s"] == oracles.bs_violations(g, 3)


def test_bstar_examples():
    assert check_Bstar(complete_graph(5), 3).holds
    g = complete_graph(6).without_edges([(0, v) for v in range(1, 6)])
    rep = check_Bstar(g, 3)
    assert not rep.holds and 0 in rep.failure_witness


def test_bstar_matches_oracle(backend):
    g = _gnp(200, 0.25, "bstar", 0)
    assert check_Bstar(g, 3).counts["violating_pairs"] == oracles.bstar_violations(g, 3)


def test_mu_examples(c5):
    assert mu(complete_graph(8), 2, 5, 3) == 6
    assert mu(c5, 0, 1, 3) == 0
    with pytest.raises(DomainError):
        mu(c5, 1, 1, 3)


def test_mu_matches_oracle(backend):
    g = _gnp(50, 0.5, "mu", 0)
    rnd = random.Random(9)
    for _ in range(30):
        u, v = rnd.sample(range(50), 2)
        assert mu(g, u, v, 4) == oracles.mu(g, u, v, 4)


def test_relations_on_random_graphs(backend):
    rnd = random.Random(10)
    for i in range(40):
        n = rnd.randint(4, 14)
        g = _gnp(n, rnd.uniform(0.3, 1.0), "rel", i)
        for s in (3, 4):
            bs, bstar = check_Bs(g, s), check_Bstar(g, s)
            if bstar.holds:
                assert bs.holds
            assert bs.holds == all(mu(g, u, v, s) >= 1 for u, v in g.edges())
            assert bs.counts["N_s"] == sum(mu(g, u, v, s) == 0 for u, v in g.edges())
            assert bs.counts["N_s"] == len(edges_without_clique(g, s))


def test_failure_witnesses_reverify(backend):
    rnd = random.Random(11)
    for i in range(40):
        n = rnd.randint(5, 12)
        g = _gnp(n, rnd.uniform(0.3, 0.9), "wit", i)
        for s in (3, 4):
            for rep in (check_Bs(g, s), check_Bstar(g, s), check_EXT(g, s) if n >= s else None):
                if rep is None or rep.holds:
                    continue
                w = rep.failure_witness
                assert contains_clique(g, members(common_mask(g, w)), s - 2) is None
                if rep.property == "B_s":
                    assert g.has_edge(*w)


def test_stop_first_matches_full_scan():
    g = _gnp(40, 0.3, "stop", 0)
    full, quick = check_Bstar(g, 3), check_Bstar(g, 3, stop_first=True)
    assert full.holds == quick.holds and full.failure_witness == quick.failure_witness


def test_report_json_shape(c5):
    d = json.loads(check_Bs(c5, 3).to_json())
    assert set(d) == {"property", "holds", "witness", "undecided", "counts"}
