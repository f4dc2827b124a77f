"""Smoke tests for the _drlb extension module."""

import math

import pytest

import _drlb as drlb


def test_bid_formula():
    assert drlb.compute_bid(0.02, 0.1) == pytest.approx(0.2)
    assert drlb.compute_bid(0.0, 5.0) == 0.0
    with pytest.raises(ValueError):
        drlb.compute_bid(1.0, 0.0)


def test_action_space():
    rates = drlb.action_rates()
    assert rates == [-0.08, -0.03, -0.01, 0.0, 0.01, 0.03, 0.08]
    assert drlb.apply_action(1.0, 6) == pytest.approx(1.08)
    assert drlb.apply_action(2.0, 3) == 2.0


def test_auction_roundtrip():
    imps = [
        drlb.Impression(slot=0, value=0.1, market_price=0.5),
        drlb.Impression(slot=0, value=0.2, market_price=3.0),
    ]
    data = drlb.EpisodeData("day1", 1, imps)
    env = drlb.AuctionEnv(data)
    env.reset(budget=10.0, lambda0=1.0)
    out = env.step(0.1)
    assert out.reward == pytest.approx(0.1)
    assert out.cost == pytest.approx(0.5)
    assert out.wins == 1
    assert out.cpm == pytest.approx(500.0)
    assert env.is_terminal()


def test_oracle_against_brute_force():
    imps = [
        drlb.Impression(slot=0, value=3.0, market_price=1.0),
        drlb.Impression(slot=0, value=2.0, market_price=1.0),
        drlb.Impression(slot=0, value=1.0, market_price=1.0),
    ]
    res = drlb.optimal_lambda_greedy(imps, 2.0)
    assert res.lambda_star == pytest.approx(1.0)
    assert res.r_star == pytest.approx(5.0)
    assert drlb.brute_force_value(imps, 2.0) == pytest.approx(5.0)
    assert drlb.r_over_rstar(res.r_star, res.r_star) == 1.0


def test_deviation_group():
    assert drlb.deviation_group(0.5, 1.0) == (-0.8, -0.4)
    assert drlb.deviation_group(3.0, 1.0)[0] == pytest.approx(1.6)
    assert math.isinf(drlb.deviation_group(3.0, 1.0)[1])


def test_epsilon_schedule_and_unimodality():
    cfg = drlb.AgentConfig()
    cfg.anneal_rate = 2e-5
    assert drlb.epsilon_at(0, cfg) == pytest.approx(0.95)
    assert drlb.epsilon_at(45000, cfg) == pytest.approx(0.05)
    assert drlb.is_unimodal([1.0, 2.0, 3.0, 2.0, 1.0])
    assert not drlb.is_unimodal([1.0, 3.0, 2.0, 3.0])


def test_mlp_forward_and_checkpoint():
    net = drlb.MlpNetwork([7, 16, 7], seed=3)
    out = net.forward([0.1] * 7)
    assert len(out) == 7
    clone = drlb.MlpNetwork.load_string(net.save_string())
    assert clone.same_parameters(net)
    assert clone.forward([0.1] * 7) == out
    assert net.gradient_check([0.1] * 7, 0.5, 2) <= 1e-4


def test_mlp_training_step():
    net = drlb.MlpNetwork.zeros([1, 1])
    cfg = drlb.TrainConfig()
    cfg.learning_rate = 0.1
    cfg.momentum = 0.0
    loss = net.sgd_step([[1.0]], [1.0], [0], cfg)
    assert loss == pytest.approx(1.0)


def test_baseline_bids():
    assert drlb.flb_bid(0.02, 0.1) == pytest.approx(0.2)
    assert drlb.bslb_bid(0.1, 0.5, 0.5, 0.5) == pytest.approx(drlb.flb_bid(0.1, 0.5))
    assert drlb.bslb_bid(0.1, 0.5, 0.0, 0.5) == pytest.approx(0.1 / 5.0)


def test_theorem_equivalence():
    mdp = drlb.MdpDescription(
        num_states=2,
        num_actions=2,
        horizon=2,
        initial_states=[0],
        successors=[[[0], [1]], [[0], [1]]],
        rewards=[[0.0, 1.0], [0.0, 1.0]],
    )
    assert drlb.theorem_equivalence_check(mdp)


def test_synthetic_generation_determinism():
    spec = drlb.SynthesisSpec()
    spec.episodes = 2
    spec.T = 8
    spec.per_slot_mean = 4.0
    a = drlb.generate_synthetic(spec, 7)
    b = drlb.generate_synthetic(spec, 7)
    assert len(a) == 2
    assert [i.value for i in a[0].impressions] == [i.value for i in b[0].impressions]
    env = drlb.AuctionEnv(a[0])
    env.reset(budget=max(1e-6, a[0].total_market_cost() * 0.25), lambda0=1.0)
    while not env.is_terminal():
        env.step(1.0)
    assert env.state.budget_left >= 0.0
