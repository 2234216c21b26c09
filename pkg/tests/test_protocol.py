import math

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from zenoqfi.dephasing import Markovian, Zeno
from zenoqfi.errors import BracketError, DegenerateObjectiveError, ModelRangeError, UnsupportedCaseError
from zenoqfi.hilbert import css_state, ghz_state, maximally_mixed_state, random_pure_state
from zenoqfi.optimize import project_to_simplex
from zenoqfi.protocol import (
    ProtocolBudget,
    allocation_gradient,
    allocation_objective,
    make_model,
    optimize_time_analytic,
    optimize_time_closed_form,
    optimize_time_numeric,
    total_qfi,
    total_time_bound,
    verify_uniform_allocation,
)
from zenoqfi.qfi import qfi_at

SUPPORTED = [
    ("ghz", "markovian", "local"),
    ("ghz", "markovian", "collective"),
    ("css", "markovian", "local"),
    ("ghz", "zeno", "local"),
    ("ghz", "zeno", "collective"),
    ("css", "zeno", "local"),
]


def test_budget_validation():
    with pytest.raises(ModelRangeError):
        ProtocolBudget(1.0, (0.5, 0.4))
    with pytest.raises(ModelRangeError):
        ProtocolBudget(1.0, (1.0, 0.0))
    assert sum(ProtocolBudget.uniform(2.0, 7).times) == pytest.approx(2.0, rel=1e-12)


def test_total_qfi_single_and_identical():
    rho, m = random_pure_state(3, 4), Zeno(0.9)
    assert total_qfi([rho], ProtocolBudget(0.7, (0.7,)), m, "local") == \
        qfi_at(rho, 0.7, m, "local")
    got = total_qfi([rho] * 5, ProtocolBudget.uniform(2.0, 5), m, "collective")
    assert got == pytest.approx(5 * qfi_at(rho, 0.4, m, "collective"), rel=1e-12)


def test_total_qfi_length_mismatch():
    with pytest.raises(ModelRangeError):
        total_qfi([ghz_state(2)], ProtocolBudget.uniform(1.0, 2), Markovian(1.0), "local")


def test_total_qfi_permutation_invariant():
    states = [random_pure_state(3, s) for s in range(4)]
    budget, m = ProtocolBudget.uniform(1.0, 4), Markovian(0.5)
    a = total_qfi(states, budget, m, "local")
    b = total_qfi(states[::-1], budget, m, "local")
    assert a == pytest.approx(b, rel=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_ghz_markovian_uniform_optimum(n):
    gamma, T = 1.0, 1.0
    k = round(2 * gamma * n * T)  # experiments of length 1/(2 gamma N)
    got = total_qfi([ghz_state(n)] * k, ProtocolBudget.uniform(T, k), Markovian(gamma), "local")
    assert got == pytest.approx(n * T / (2 * gamma * math.e), rel=1e-8)


def brute_max(objective, lo, hi):
    """Independent oracle: dense log grid then scipy's bounded Brent refinement."""
    ts = np.geomspace(lo, hi, 4001)
    vals = [objective(t) for t in ts]
    i = int(np.argmax(vals))
    res = minimize_scalar(lambda u: -objective(math.exp(u)),
                          bounds=(math.log(ts[max(i - 1, 0)]), math.log(ts[min(i + 1, 4000)])),
                          method="bounded", options={"xatol": 1e-12})
    return math.exp(res.x), -res.fun


def test_closed_form_ghz_markovian_example():
    rep = optimize_time_closed_form("ghz", 4, 1.0, "markovian", 1.0, "local")
    assert rep.t_star == 0.125
    assert rep.f_max == pytest.approx(4 / (2 * math.e), rel=1e-15)
    t_o, f_o = brute_max(lambda t: 16 * t * math.exp(-8 * t), 1e-4, 10)
    assert rep.t_star == pytest.approx(t_o, rel=1e-6)
    assert rep.f_max == pytest.approx(f_o, rel=1e-10)
    assert rep.method == "closed_form"


def test_closed_form_ghz_zeno_example():
    rep = optimize_time_closed_form("ghz", 100, 1.0, "zeno", 1.0, "local")
    assert rep.t_star == pytest.approx(200**-0.5, rel=1e-15)
    assert rep.f_max == pytest.approx(1000 / math.sqrt(2 * math.e), rel=1e-14)
    t_o, f_o = brute_max(lambda t: 1e4 * t * math.exp(-(t**2) * 100), 1e-5, 10)
    assert rep.t_star == pytest.approx(t_o, rel=1e-6)
    assert rep.f_max == pytest.approx(f_o, rel=1e-10)


@pytest.mark.parametrize("kind", ["markovian", "zeno"])
def test_ghz_and_css_local_same_maximum(kind):
    a = optimize_time_closed_form("ghz", 9, 2.0, kind, 0.7, "local")
    b = optimize_time_closed_form("css", 9, 2.0, kind, 0.7, "local")
    if kind == "markovian":
        assert a.f_max == pytest.approx(b.f_max, rel=1e-15)
    else:
        assert a.f_max / b.f_max == pytest.approx(3.0, rel=1e-14)


def test_css_collective_unsupported():
    with pytest.raises(UnsupportedCaseError, match="upper bound"):
        optimize_time_closed_form("css", 4, 1.0, "zeno", 1.0, "collective")
    with pytest.raises(UnsupportedCaseError):
        optimize_time_analytic("css", 4, 1.0, Zeno(1.0), "collective")


def test_integer_experiment_count():
    rep = optimize_time_closed_form("ghz", 4, 1.0, "markovian", 1.0, "local")
    assert rep.n_star == pytest.approx(8.0)
    assert rep.n_int == 8
    assert rep.f_at_n_int == pytest.approx(rep.f_max, rel=1e-12)


@pytest.mark.parametrize("state_class,kind,geometry", SUPPORTED)
@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_exact_numeric_matches_closed_form(state_class, kind, geometry, n):
    gamma, T = 0.8, 1.5
    rho = ghz_state(n) if state_class == "ghz" else css_state(n)
    num = optimize_time_numeric(rho, T, make_model(kind, gamma), geometry)
    cf = optimize_time_closed_form(state_class, n, T, kind, gamma, geometry)
    assert num.f_max == pytest.approx(cf.f_max, rel=1e-6)
    assert num.t_star == pytest.approx(cf.t_star, rel=1e-6)
    assert num.method == "numeric"


@pytest.mark.parametrize("state_class,kind,geometry", SUPPORTED)
@pytest.mark.parametrize("n", [10, 100, 1000])
def test_analytic_numeric_matches_closed_form(state_class, kind, geometry, n):
    num = optimize_time_analytic(state_class, n, 1.0, make_model(kind, 1.0), geometry)
    cf = optimize_time_closed_form(state_class, n, 1.0, kind, 1.0, geometry)
    assert num.f_max == pytest.approx(cf.f_max, rel=1e-6)
    assert num.t_star == pytest.approx(cf.t_star, rel=1e-6)


@pytest.mark.parametrize("state_class,kind,geometry", SUPPORTED)
@pytest.mark.parametrize("n", [1, 4, 50, 10**4])
def test_optimum_below_total_bound(state_class, kind, geometry, n):
    cf = optimize_time_closed_form(state_class, n, 1.0, kind, 0.6, geometry)
    assert cf.f_max <= total_time_bound(n, 1.0, kind, 0.6, geometry) + 1e-9


def test_css_numeric_markovian_time():
    gamma = 0.5
    rep = optimize_time_numeric(css_state(3), 1.0, Markovian(gamma), "local")
    assert rep.t_star == pytest.approx(1 / (2 * gamma), rel=1e-6)


def test_random_state_optimum_below_bound():
    rho = random_pure_state(4, 2)
    for geometry in ("local", "collective"):
        rep = optimize_time_numeric(rho, 1.0, Zeno(1.0), geometry)
        assert rep.f_max <= total_time_bound(4, 1.0, "zeno", 1.0, geometry) + 1e-9


def test_maximally_mixed_is_degenerate():
    with pytest.raises(DegenerateObjectiveError):
        optimize_time_numeric(maximally_mixed_state(2), 1.0, Markovian(1.0), "local")


def test_monotone_bracket_reported():
    with pytest.raises(BracketError):
        optimize_time_numeric(ghz_state(2), 1.0, Markovian(1.0), "local", t_bracket=(1e-4, 1e-2))


# --- uniform allocation --------------------------------------------------------

def test_simplex_projection():
    x = project_to_simplex([3.0, -1.0, 0.5], 1.0)
    assert x.sum() == pytest.approx(1.0)
    assert np.all(x >= 0)
    np.testing.assert_allclose(project_to_simplex([0.2, 0.3, 0.5], 1.0), [0.2, 0.3, 0.5])


def grid_best_pair(T, c, gamma, points=200_001):
    t1 = np.linspace(0, T, points)
    vals = t1**2 / (gamma**2 * t1**2 + c) + (T - t1) ** 2 / (gamma**2 * (T - t1) ** 2 + c)
    i = int(np.argmax(vals))
    return t1[i], vals[i]


@pytest.mark.parametrize("ratio", [0.8, 1.0, 2.0, 5.0])
def test_two_experiments_grid_oracle(ratio):
    # gamma^2 (T/2)^2 = ratio * c
    c, gamma = 0.04, 1.0
    T = 2 * math.sqrt(ratio * c) / gamma
    rep = verify_uniform_allocation(2, T, c, gamma, trials=20, seed=3)
    t1, best = grid_best_pair(T, c, gamma)
    assert t1 == pytest.approx(T / 2, abs=T * 1e-5)
    assert rep.uniform_is_best
    np.testing.assert_allclose(rep.best_allocation, [T / 2, T / 2], atol=1e-6)
    assert rep.best_value >= best - 1e-12


def test_uniform_is_stationary_for_three():
    c, gamma, T = 0.5, 1.3, 2.0
    grad = allocation_gradient(np.full(3, T / 3), c, gamma)
    assert np.ptp(grad) <= 1e-8


@pytest.mark.parametrize("n,ratio,seed", [(2, 0.1, 0), (3, 0.3, 1), (4, 1.0, 2), (5, 3.0, 3)])
def test_best_never_below_uniform(n, ratio, seed):
    c, gamma = 1.0, 1.0
    T = n * math.sqrt(ratio * c) / gamma
    rep = verify_uniform_allocation(n, T, c, gamma, trials=10, seed=seed)
    assert rep.best_value >= rep.uniform_value - 1e-12
    assert rep.best_value == pytest.approx(allocation_objective(rep.best_allocation, c, gamma))
    assert sum(rep.best_allocation) == pytest.approx(T, rel=1e-10)


def test_convex_regime_flags_nonuniform_winner():
    # gamma^2 (T/2)^2 = 0.2 c: the summand is convex there, so lumping the
    # whole budget into one experiment beats an even split
    c, gamma = 1.0, 1.0
    T = 2 * math.sqrt(0.2)
    rep = verify_uniform_allocation(2, T, c, gamma, trials=10, seed=0)
    t1, best = grid_best_pair(T, c, gamma)
    assert not rep.uniform_is_best
    assert rep.best_value == pytest.approx(best, rel=1e-9)
    assert min(rep.best_allocation) == pytest.approx(0.0, abs=1e-9)


def test_uniform_rejects_bad_arguments():
    with pytest.raises(ModelRangeError):
        verify_uniform_allocation(1, 1.0, 1.0, 1.0)
    with pytest.raises(ModelRangeError):
        verify_uniform_allocation(2, 1.0, 0.0, 1.0)
