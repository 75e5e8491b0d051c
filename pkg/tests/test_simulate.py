import pytest

import coherence_lab as cl
from coherence_lab.errors import BadParameterError, UnstableStepError


def test_two_node_noise_free_matches_analytic():
    cfg = cl.SimConfig(dt=1e-3, horizon=200.0, trials=20, seed=11)
    res = cl.simulate_nf(cl.build_path(2), (0,), cfg)
    assert res.stderr > 0.0
    assert abs(res.value - 0.5) <= 3.0 * res.stderr


def test_all_leaders_gives_exact_zero():
    cfg = cl.SimConfig(dt=1e-3, horizon=1.0, trials=3, seed=0)
    res = cl.simulate_nf(cl.build_cycle(4), range(4), cfg)
    assert res.value == 0.0 and res.stderr == 0.0


def test_cycle_eight_matches_closed_form():
    cfg = cl.SimConfig(dt=1e-3, horizon=150.0, trials=12, seed=5)
    res = cl.simulate_nf(cl.build_cycle(8), (0, 4), cfg)
    analytic = cl.cycle_nf_coherence((4, 4), n=8)
    assert analytic == pytest.approx(2.5)
    assert abs(res.value - analytic) <= 3.0 * res.stderr


def test_two_node_noise_corrupted_matches_analytic():
    cfg = cl.SimConfig(dt=1e-3, horizon=200.0, trials=20, seed=13)
    res = cl.simulate_nc(cl.build_path(2), (0,), cfg, kappa=1.0)
    assert abs(res.value - 1.5) <= 3.0 * res.stderr


def test_square_cycle_noise_corrupted_matches_analytic():
    cfg = cl.SimConfig(dt=1e-3, horizon=150.0, trials=12, seed=17)
    res = cl.simulate_nc(cl.build_cycle(4), (0, 2), cfg, kappa=1.0)
    assert abs(res.value - 5.0 / 3.0) <= 3.0 * res.stderr


def test_discretization_bias_shrinks_with_dt():
    # Euler-Maruyama inflates each mode's variance by 1/(1 - lambda dt / 2),
    # so halving dt must move the estimate toward the analytic value
    g = cl.build_path(2)
    estimates = []
    for dt in (0.2, 0.1, 0.05):
        cfg = cl.SimConfig(dt=dt, horizon=3000.0, trials=16, seed=7)
        estimates.append(cl.simulate_nf(g, (0,), cfg).value)
    gaps = [abs(e - 0.5) for e in estimates]
    assert gaps[0] > gaps[1] > gaps[2]
    assert all(e > 0.5 for e in estimates)


def test_seed_determinism_bit_for_bit():
    cfg = cl.SimConfig(dt=1e-2, horizon=20.0, trials=6, seed=42)
    g = cl.build_cycle(5)
    a = cl.simulate_nf(g, (0, 2), cfg)
    b = cl.simulate_nf(g, (0, 2), cfg)
    assert a.value == b.value and a.stderr == b.stderr
    c = cl.simulate_nf(g, (0, 2), cl.SimConfig(dt=1e-2, horizon=20.0,
                                               trials=6, seed=43))
    assert c.value != a.value


def test_unstable_step_rejected():
    # grounded system eigenvalue 1 means dt must stay below 2
    with pytest.raises(UnstableStepError):
        cl.simulate_nf(cl.build_path(2), (0,), cl.SimConfig(dt=2.5, horizon=10.0))


def test_stiff_leader_weight_needs_small_step():
    cfg = cl.SimConfig(dt=1e-3, horizon=1.0)
    with pytest.raises(UnstableStepError):
        cl.simulate_nc(cl.build_path(2), (0,), cfg, kappa=1e6)


def test_config_validation():
    with pytest.raises(BadParameterError):
        cl.SimConfig(dt=0.0, horizon=1.0)
    with pytest.raises(BadParameterError):
        cl.SimConfig(dt=1e-3, horizon=-1.0)
    with pytest.raises(BadParameterError):
        cl.SimConfig(dt=1e-3, horizon=1.0, burn_in=1.0)
    with pytest.raises(BadParameterError):
        cl.SimConfig(dt=1e-3, horizon=1.0, trials=0)


def test_burn_in_accounting():
    cfg = cl.SimConfig(dt=0.1, horizon=10.0, burn_in=0.25, trials=2, seed=1)
    res = cl.simulate_nf(cl.build_path(3), (0,), cfg)
    assert res.steps == 100
    assert res.kept_steps == 75
