import math
import random

import mpmath
import pytest

from wsatlab.analytics import (MONOTONE, NonBracketingError, beta_for, binom, c_s, delta_janson,
                               estimate_threshold, expected_Ns, lambda_janson, lemma2_p, q_s, q_star,
                               sweep_property, theorem4_bound, trial_seed, wilson_interval)
from wsatlab.errors import DomainError
from wsatlab.graph import generate_gnp
from wsatlab.properties import check_Bs
from wsatlab.wsat import lovasz_number

mpmath.mp.dps = 40


def _rel(a, b):
    return abs(a - b) / abs(b) if b else abs(a)


# independent direct-product evaluations in extended precision

def _mp_q(n, s):
    n = mpmath.mpf(n)
    return mpmath.exp(-2 * mpmath.log(n) / (s + 1) + 2 * mpmath.log(mpmath.log(n)) / ((s - 2) * (s + 1)))


def _mp_c(s):
    return mpmath.exp(2 * mpmath.log(2 * (1 - mpmath.mpf(1) / (s + 1)) * mpmath.factorial(s - 2))
                      / ((s + 1) * (s - 2)))


def _mp_lambda(n, p, s):
    return mpmath.binomial(n - 2, s - 2) * p ** (mpmath.mpf((s + 1) * (s - 2)) / 2)


def _mp_delta(n, p, s):
    return mpmath.fsum(
        mpmath.binomial(n - 2, s - 2) * mpmath.binomial(s - 2, l) * mpmath.binomial(n - s, s - 2 - l)
        * p ** (mpmath.mpf((s + 1) * (s - 2)) - mpmath.mpf((l + 3) * l) / 2)
        for l in range(1, s - 2) if n - s >= s - 2 - l)


GRID = [(n, s) for n in (10, 100, 1000, 12345, 10**6) for s in range(3, 9)]


@pytest.mark.parametrize("n, s", GRID)
def test_formulas_match_high_precision(n, s):
    assert _rel(q_s(n, s), float(_mp_q(n, s))) < 1e-12
    assert _rel(c_s(s), float(_mp_c(s))) < 1e-12
    qs_mp = _mp_q(n, s) * mpmath.exp(2 * mpmath.log(2 * mpmath.factorial(s - 2)) / ((s + 1) * (s - 2)))
    assert _rel(q_star(n, s), float(qs_mp)) < 1e-12
    for p in (0.05, 0.3, 0.9):
        assert _rel(lambda_janson(n, p, s), float(_mp_lambda(n, mpmath.mpf(p), s))) < 1e-12
        if s > 3:
            assert _rel(delta_janson(n, p, s), float(_mp_delta(n, mpmath.mpf(p), s))) < 1e-12


def test_q_examples():
    assert q_s(1000, 3) == pytest.approx(0.08311, abs=5e-6)
    assert q_s(math.e, 3) == pytest.approx(math.exp(-0.5), rel=1e-14)
    for s in range(3, 8):
        vals = [q_s(n, s) for n in range(10, 5000, 7)]
        assert all(a > b for a, b in zip(vals, vals[1:]))


def test_c_examples():
    assert c_s(3) == pytest.approx(1.5 ** 0.5, rel=1e-14)
    assert c_s(4) == pytest.approx(3.2 ** 0.2, rel=1e-14)
    assert all(c_s(s) > 1 for s in range(3, 13))


def test_q_star_examples():
    assert q_star(1000, 3) == pytest.approx(0.11754, abs=5e-6)
    for n in (50, 500, 5000):
        assert q_star(n, 3) == pytest.approx(math.sqrt(2) * q_s(n, 3), rel=1e-14)
    ratios = {round(q_star(n, 5) / q_s(n, 5), 12) for n in (20, 200, 2000)}
    assert len(ratios) == 1


def test_lambda_examples():
    assert lambda_janson(100, 0.2, 3) == pytest.approx(3.92, rel=1e-12)
    assert lambda_janson(100, 0.0, 4) == 0.0
    assert lambda_janson(30, 1.0, 5) == pytest.approx(math.comb(28, 3), rel=1e-12)


def test_delta_examples():
    assert delta_janson(100, 0.3, 3) == 0.0
    expect = math.comb(98, 2) * 2 * 96 * 0.2 ** 8
    assert delta_janson(100, 0.2, 4) == pytest.approx(expect, rel=1e-12)


def test_delta_over_lambda_vanishes_at_threshold_scale():
    for s in (4, 5):
        ratios = []
        for n in (10**3, 10**4, 10**5, 10**6):
            p = c_s(s) * q_s(n, s)
            ratios.append(delta_janson(n, p, s) / lambda_janson(n, p, s))
        assert all(a > b for a, b in zip(ratios, ratios[1:]))


def test_expected_ns_s3():
    point, (lo, hi) = expected_Ns(100, 0.2, 3)
    assert point == pytest.approx(4950 * 0.2 * 0.96 ** 98, rel=1e-12)
    assert lo == hi == point
    assert expected_Ns(40, 1.0, 3)[0] == 0.0


@pytest.mark.parametrize("n, p, s", [(200, 0.12, 4), (200, 0.3, 4), (500, 0.2, 5), (60, 0.5, 6)])
def test_expected_ns_bracket_orders(n, p, s):
    point, (lo, hi) = expected_Ns(n, p, s)
    assert 0 <= lo <= point <= hi <= binom(n, 2) * p


def test_lemma2_p():
    for n in (100, 10**4):
        ln = math.log(n)
        base = c_s(3) * q_s(n, 3) * (1 + 2 * math.log(ln) / (1 * 12 * ln))
        assert lemma2_p(n, 3, 0) == pytest.approx(base, rel=1e-14)
        assert lemma2_p(n, 3, -1) < lemma2_p(n, 3, 0) < lemma2_p(n, 3, 2)
    with pytest.raises(DomainError):
        lemma2_p(15, 3, 0)


def test_lemma2_p_brackets_measured_threshold():
    # measured p_half of B_3 falls between the w = -3 and w = +3 curves;
    # B_3 holds vacuously on the empty graph, so the bracket starts above 0
    est = estimate_threshold(100, 3, "bs", 100, 0.01, 5, lo=0.05)
    assert lemma2_p(100, 3, -3) <= est.p_half <= lemma2_p(100, 3, 3)


def test_theorem4_bound():
    assert theorem4_bound(500, 0.45, 3, 4) == pytest.approx(500 + 4 * math.log(500) ** 4 / 0.45 ** 3, rel=1e-14)
    assert theorem4_bound(500, 0.45, 3, 4) == pytest.approx(6.6e4, rel=0.01)
    assert theorem4_bound(500, 0.45, 3, 5) > theorem4_bound(500, 0.45, 3, 4)
    assert theorem4_bound(500, 0.5, 3, 4) < theorem4_bound(500, 0.45, 3, 4)
    for n in (20, 100, 1000):
        for s in (3, 4, 5, 6):
            for p in (0.1, 0.5, 0.9):
                assert theorem4_bound(n, p, s, 1) >= lovasz_number(n, s)


def test_beta_table():
    assert beta_for(3, 0.1) == pytest.approx(1 / 3 + 0.1)
    assert beta_for(4) == 8 / 5 and beta_for(7) == 1 / 2


def test_wilson_edges():
    assert wilson_interval(0, 20) [0] == 0.0
    assert wilson_interval(20, 20)[1] == 1.0
    lo, hi = wilson_interval(7, 20)
    assert lo < 0.35 < hi
    assert wilson_interval(0, 0) == (0.0, 1.0)


def test_wilson_coverage():
    rnd = random.Random(99)
    for p in (0.1, 0.5, 0.8):
        covered = 0
        reps = 2000
        for _ in range(reps):
            k = sum(rnd.random() < p for _ in range(60))
            lo, hi = wilson_interval(k, 60, 0.95)
            covered += lo <= p <= hi
        assert covered / reps >= 0.92


def test_sweep_full_density():
    res = sweep_property([50], [1.0], 3, 10, 1, "bs")
    assert res.cells[0].successes == 10


def test_sweep_sparse_fails():
    res = sweep_property([100], [0.02], 3, 30, 1, "bs")
    assert res.cells[0].successes == 0


def test_sweep_monotone_in_p():
    ps = [0.18, 0.22, 0.26, 0.30, 0.34]
    cells = sweep_property([100], ps, 3, 100, 3, "bstar").cells
    succ = [c.successes for c in cells]
    assert succ == sorted(succ) and succ[0] < succ[-1]


def test_common_random_numbers_nest_graphs():
    seed = trial_seed(4, 30, 2)
    low, high = generate_gnp(30, 0.3, seed), generate_gnp(30, 0.6, seed)
    assert low.is_subgraph_of(high)


def test_sweep_records_undecided():
    from wsatlab.config import Budget
    res = sweep_property([30], [0.9], 3, 4, 2, "ham", budget=Budget(extensions=1))
    c = res.cells[0]
    assert c.successes + c.undecided <= c.trials and c.undecided > 0


def test_sweep_csv_columns():
    res = sweep_property([20], [0.5, 0.9], 3, 5, 1, "bs")
    lines = res.to_csv().splitlines()
    assert lines[0] == "n,p,trials,successes,lo,hi,undecided"
    assert len(lines) == 3


def test_sweep_worker_independence():
    a = sweep_property([30, 40], [0.3, 0.5], 3, 12, 7, "bstar", workers=1)
    b = sweep_property([30, 40], [0.3, 0.5], 3, 12, 7, "bstar", workers=3)
    assert a.to_json() == b.to_json()


def test_threshold_determinism_and_order():
    a = estimate_threshold(60, 3, "bstar", 40, 0.02, 9)
    b = estimate_threshold(60, 3, "bstar", 40, 0.02, 9)
    assert a.p_half == b.p_half and a.bracket == b.bracket
    lo, hi = a.bracket
    assert hi - lo <= 0.02 and lo <= a.p_half <= hi


def test_threshold_nonempty_smoke():
    n = 6
    est = estimate_threshold(n, 3, "nonempty", 400, 0.002, 1)
    analytic = 1 - 2 ** (-1 / math.comb(n, 2))
    assert est.p_half == pytest.approx(analytic, abs=0.015)


def test_threshold_non_bracketing():
    with pytest.raises(NonBracketingError):
        estimate_threshold(50, 3, "bs", 10, 0.01, 1, lo=0.9, hi=1.0)


def test_threshold_rejects_non_monotone():
    assert "as" not in MONOTONE
    with pytest.raises(DomainError):
        estimate_threshold(30, 3, "as", 10, 0.05, 1)


def test_unknown_property():
    with pytest.raises(DomainError):
        sweep_property([10], [0.5], 3, 1, 1, "nope")


def test_ns_mean_near_expectation_small():
    # a quick version of the first-moment calibration
    vals = [check_Bs(generate_gnp(60, 0.25, trial_seed(3, 60, t)), 3).counts["N_s"] for t in range(300)]
    mean = sum(vals) / len(vals)
    sd = (sum((v - mean) ** 2 for v in vals) / (len(vals) - 1)) ** 0.5
    assert abs(mean - expected_Ns(60, 0.25, 3)[0]) < 4 * sd / len(vals) ** 0.5
