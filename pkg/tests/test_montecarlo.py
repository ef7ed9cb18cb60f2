import pytest

from ttcsim.adm import AdmConfig, Jitter, Scenario, monte_carlo, simulate, sweep, sweep_values
from ttcsim.adm.montecarlo import draw_config

CFG = AdmConfig()
TWO = Scenario(horizon_s=1200.0)


def at(ambient, seed=0):
    return Scenario(ambient_c=ambient, horizon_s=1200.0, rng_seed=seed)


@pytest.mark.parametrize("ambient, p_full", [(20.0, 1.0), (-15.0, 1.0), (-25.5, 0.0)])
def test_zero_jitter_is_deterministic(ambient, p_full):
    rep = monte_carlo(at(ambient), CFG, 20, Jitter.uniform(0.0))
    assert rep.full_deployment_probability == p_full
    assert rep.partial_probability == 0.0


def test_colder_is_not_more_reliable():
    j = Jitter.uniform(0.05)
    warm = monte_carlo(at(-15.0, seed=3), CFG, 500, j)
    cold = monte_carlo(at(-25.5, seed=3), CFG, 500, j)
    assert warm.full_deployment_probability >= cold.full_deployment_probability
    assert cold.partial_probability > 0


def test_same_seed_same_report_and_different_seed_differs():
    j = Jitter.uniform(0.05)
    a = monte_carlo(at(-25.5, 7), CFG, 200, j)
    assert a == monte_carlo(at(-25.5, 7), CFG, 200, j)
    assert a != monte_carlo(at(-25.5, 8), CFG, 200, j)


def test_workers_do_not_change_results():
    j = Jitter.uniform(0.05)
    assert monte_carlo(at(-25.5), CFG, 40, j, workers=2) == monte_carlo(at(-25.5), CFG, 40, j)


def test_single_run_matches_direct_simulation():
    j = Jitter.uniform(0.05)
    sc = at(-25.5, seed=11)
    for i in range(5):
        sim = simulate(sc, draw_config(CFG, j, 11, i))
        rep = monte_carlo(sc, draw_config(CFG, j, 11, i), 1, Jitter.uniform(0.0))
        assert rep.mean_doors_open == sum(sim.state.doors_open)
        assert rep.mean_attempts == sim.state.attempt_count


def test_draws_are_positive_and_per_line():
    drawn = draw_config(CFG, Jitter.uniform(0.3), 1, 0).lines()
    assert len({p.melt_temp_c for p in drawn}) == CFG.n_doors
    assert all(p.conductance_w_per_k > 0 and p.heat_capacity_j_per_k > 0 for p in drawn)


def test_histogram_consistent():
    rep = monte_carlo(at(-25.5), CFG, 300, Jitter.uniform(0.05))
    assert sum(rep.door_histogram) == rep.runs == 300
    assert rep.full_deployment_probability == rep.door_histogram[-1] / 300
    assert rep.partial_probability == pytest.approx(sum(rep.door_histogram[1:-1]) / 300)
    assert set(rep.as_dict()) == {"runs", "full_deployment_probability", "partial_probability",
                                  "mean_attempts", "mean_doors_open", "door_histogram"}


def test_ambient_sweep_is_monotone():
    pts = sweep(at(0.0), CFG, "ambient_c", sweep_values(-30, 60, 5), 200, Jitter.uniform(0.05))
    probs = [r.full_deployment_probability for _, r in pts]
    assert probs == sorted(probs)
    assert probs[0] < 1.0 and probs[-1] == 1.0


def test_sweep_config_parameter():
    pts = sweep(at(20.0), CFG, "supply_volts", [3.0, 5.0], 20, Jitter.uniform(0.0))
    assert [r.full_deployment_probability for _, r in pts] == [0.0, 1.0]


@pytest.mark.parametrize("args", [(0, 1, 0), (5, 1, 1), (0, 1, -1)])
def test_bad_sweep_range(args):
    with pytest.raises(ValueError):
        sweep_values(*args)


def test_sweep_values_inclusive():
    assert sweep_values(-30, 60, 5)[-1] == 60
    assert len(sweep_values(0, 1, 0.1)) == 11


def test_unknown_sweep_param_and_zero_runs():
    with pytest.raises(ValueError):
        sweep(TWO, CFG, "n_doors", [1], 1)
    with pytest.raises(ValueError):
        monte_carlo(TWO, CFG, 0)
