import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gradcheck import check_grads
from urbandrl import agents as ag
from urbandrl.agents import Batch, NoiseSchedule, ReplayBuffer, TrainConfig
from urbandrl.ndgrad import Tensor, no_grad

CHI2_DF9_P01 = 21.666   # upper 1% point of chi-square with 9 degrees of freedom


def _batch(rng, n=8, state_dim=3, action=None, done=None):
    return Batch(
        state=rng.normal(size=(n, state_dim)).astype(np.float32),
        action=action if action is not None else rng.uniform(-1, 1, size=(n, 2)).astype(np.float32),
        reward=rng.normal(size=n).astype(np.float32),
        next_state=rng.normal(size=(n, state_dim)).astype(np.float32),
        done=done if done is not None else (rng.random(n) < 0.3).astype(np.float32),
    )


def _const_q(values):
    """Fake Q-network returning the same row for every state."""
    row = np.asarray(values, dtype=np.float64)
    return lambda s: Tensor(np.tile(row, (len(s), 1)))


# -------------------------------------------------------------------- replay
def test_replay_fifo_eviction():
    buf = ReplayBuffer(3, 1, (1,))
    for i in range(5):
        buf.push([i], [0.0], float(i), [i], False)
    assert len(buf) == 3
    assert sorted(buf.state[:, 0].tolist()) == [2.0, 3.0, 4.0]
    assert buf.state[buf.indices_in_age_order(), 0].tolist() == [2.0, 3.0, 4.0]


def test_replay_sample_errors_and_coverage():
    buf = ReplayBuffer(10, 1, (1,), rng=np.random.default_rng(1))
    with pytest.raises(ValueError):
        buf.sample(1)
    for i in range(4):
        buf.push([i], [0.0], 0.0, [i], False)
    with pytest.raises(ValueError):
        buf.sample(5)
    seen = set()
    for _ in range(50):
        seen |= set(buf.sample(4).state[:, 0].tolist())
    assert seen == {0.0, 1.0, 2.0, 3.0}


def test_replay_uniform_chi_square():
    buf = ReplayBuffer(10, 1, (1,), rng=np.random.default_rng(7))
    for i in range(10):
        buf.push([i], [0.0], 0.0, [i], False)
    draws = np.concatenate([buf.sample_indices(10) for _ in range(10_000)])
    counts = np.bincount(draws, minlength=10)
    expected = 10_000
    chi2 = ((counts - expected) ** 2 / expected).sum()
    assert chi2 < CHI2_DF9_P01


def test_discrete_replay_stores_indices():
    buf = ReplayBuffer(4, 2, discrete=True)
    buf.push([0, 1], 7, 1.0, [1, 0], True)
    b = buf.sample(1)
    assert b.action.dtype == np.int64 and b.action[0] == 7 and b.done[0] == 1.0


# ---------------------------------------------------------------------- ddqn
def test_ddqn_target_terminal():
    b = Batch(np.zeros((1, 1)), np.array([0]), np.array([1.0]), np.zeros((1, 1)), np.array([1.0]))
    assert ag.ddqn_target(b, _const_q([2, 3]), _const_q([5, 1]), 0.99)[0] == 1.0


def test_ddqn_target_hand_case():
    b = Batch(np.zeros((1, 1)), np.array([0]), np.array([1.0]), np.zeros((1, 1)), np.array([0.0]))
    y = ag.ddqn_target(b, _const_q([2, 3]), _const_q([5, 1]), 0.99)[0]
    assert abs(y - 1.99) < 1e-9
    assert abs(ag.dqn_target(b, _const_q([5, 1]), 0.99)[0] - 5.95) < 1e-9


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_ddqn_target_never_exceeds_dqn(seed):
    rng = np.random.default_rng(seed)
    online = ag.ValueNetwork(3, (8,), 4, rng=rng)
    target = ag.ValueNetwork(3, (8,), 4, rng=rng)
    b = _batch(rng, 16, 3, action=rng.integers(0, 4, 16))
    assert (ag.ddqn_target(b, online, target, 0.9) <= ag.dqn_target(b, target, 0.9) + 1e-12).all()


def _ddqn(seed=0, period=1000, lr=1e-3):
    cfg = TrainConfig(target_update_period=period, lr_q_ddqn=lr)
    return ag.DDQNAgent(3, cfg, n_actions=4, rng=np.random.default_rng(seed), hidden=(16, 16))


def test_ddqn_zero_error_batch_leaves_params():
    agent = _ddqn()
    rng = np.random.default_rng(0)
    b = _batch(rng, 8, 3, action=rng.integers(0, 4, 8), done=np.ones(8, np.float32))
    q = agent.q_values(b.state)
    b.reward = q[np.arange(8), b.action].astype(np.float32)
    before = {k: v.copy() for k, v in agent.q.state_dict().items()}
    loss = ag.ddqn_update(agent, b)
    assert loss < 1e-12
    for k, v in agent.q.state_dict().items():
        assert np.array_equal(v, before[k])


def test_ddqn_loss_decreases_and_target_only_moves_on_copy():
    agent = _ddqn(period=50)
    rng = np.random.default_rng(1)
    b = _batch(rng, 32, 3, action=rng.integers(0, 4, 32))
    first = agent.update(b)["q_loss"]
    target0 = {k: v.copy() for k, v in agent.q_target.state_dict().items()}
    for i in range(2, 101):
        last = agent.update(b)["q_loss"]
        if i < 50:
            assert all(np.array_equal(v, target0[k]) for k, v in agent.q_target.state_dict().items())
        if i == 50:
            assert all(np.array_equal(v, agent.q.state_dict()[k]) for k, v in agent.q_target.state_dict().items())
    assert last < first


def test_q_weighted_exploration_greedy():
    rng = np.random.default_rng(0)
    assert all(ag.q_weighted_exploration([0.1, 5.0, -2.0], 0.0, rng) == 1 for _ in range(200))


def test_q_weighted_exploration_uniform_when_equal():
    rng = np.random.default_rng(3)
    draws = [ag.q_weighted_exploration(np.zeros(10), 1.0, rng) for _ in range(10_000)]
    counts = np.bincount(draws, minlength=10)
    assert ((counts - 1000.0) ** 2 / 1000.0).sum() < CHI2_DF9_P01


def test_q_weighted_exploration_softmax_ratio():
    rng = np.random.default_rng(5)
    draws = np.array([ag.q_weighted_exploration([0.0, math.log(2.0)], 1.0, rng) for _ in range(10_000)])
    ratio = (draws == 1).sum() / (draws == 0).sum()
    assert abs(ratio - 2.0) <= 0.2


def test_q_weighted_exploration_rejects_nan():
    with pytest.raises(ValueError):
        ag.q_weighted_exploration([0.0, np.nan], 0.5, np.random.default_rng(0))


def test_action_grid():
    assert len(ag.ACTION_GRID) == 15
    assert set(a for a, _ in ag.ACTION_GRID) == {-3.0, 0.0, 3.0}
    assert set(s for _, s in ag.ACTION_GRID) == {-0.5, -0.2, 0.0, 0.2, 0.5}


# ----------------------------------------------------------------------- td3
def _const_critic(value):
    return lambda s, a: np.full(len(s), value, dtype=np.float64)


def test_td3_target_terminal():
    b = Batch(np.zeros((1, 1)), np.zeros((1, 2)), np.array([-10.0]), np.zeros((1, 1)), np.array([1.0]))
    y = ag.td3_targets(b, lambda s: np.zeros((len(s), 2)), (_const_critic(2), _const_critic(5)), 0.9)
    assert y[0] == -10.0


def test_td3_target_hand_case():
    b = Batch(np.zeros((1, 1)), np.zeros((1, 2)), np.array([0.0]), np.zeros((1, 1)), np.array([0.0]))
    y = ag.td3_targets(b, lambda s: np.zeros((len(s), 2)), (_const_critic(2), _const_critic(5)), 0.9)
    assert abs(y[0] - 1.8) < 1e-12


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_td3_twin_min_below_single(seed):
    rng = np.random.default_rng(seed)
    agent = ag.TD3Agent(3, TrainConfig(), rng=rng, hidden=(8, 8))
    b = _batch(rng, 16)
    pol = agent._target_policy
    twin = ag.td3_targets(b, pol, (agent.q1, agent.q2), 0.9)
    for single in (agent.q1, agent.q2):
        assert (twin <= ag.td3_targets(b, pol, (single,), 0.9) + 1e-9).all()


def test_td3_smoothing_noise_clip():
    # noise_std huge: perturbation saturates at the clip, action stays in range
    rng = np.random.default_rng(0)
    b = _batch(rng, 64)
    seen = []
    critic = lambda s, a: (seen.append(np.asarray(a).copy()), np.zeros(len(s)))[1]
    ag.td3_targets(b, lambda s: np.zeros((len(s), 2)), (critic,), 0.9, noise_std=10.0, noise_clip=0.5, rng=rng)
    assert np.abs(seen[0]).max() <= 0.5 and np.isin(np.abs(seen[0]), [0.5]).mean() > 0.9


def _td3(seed=0, **kw):
    cfg = TrainConfig(**kw)
    return ag.TD3Agent(3, cfg, rng=np.random.default_rng(seed), hidden=(16, 16))


def test_td3_actor_only_on_delayed_steps():
    agent = _td3(policy_delay=2)
    b = _batch(np.random.default_rng(0), 16)
    actor0 = {k: v.copy() for k, v in agent.actor.state_dict().items()}
    targets0 = {k: v.copy() for k, v in agent.q1_target.state_dict().items()}
    out = ag.td3_update(agent, b, step=1)
    assert "actor_loss" not in out
    assert all(np.array_equal(v, actor0[k]) for k, v in agent.actor.state_dict().items())
    assert all(np.array_equal(v, targets0[k]) for k, v in agent.q1_target.state_dict().items())
    out = ag.td3_update(agent, b, step=2)
    assert "actor_loss" in out
    assert any(not np.array_equal(v, actor0[k]) for k, v in agent.actor.state_dict().items())


def test_td3_critic_loss_decreases_on_frozen_batch():
    agent = _td3(target_noise=0.0)
    b = _batch(np.random.default_rng(2), 32)
    first = agent.update(b)["q1_loss"]
    for _ in range(99):
        last = agent.update(b)
    assert last["q1_loss"] < first


def test_td3_actor_step_increases_q():
    agent = _td3(lr_actor_td3=1e-3)
    states = np.random.default_rng(3).normal(size=(32, 3)).astype(np.float32)

    def mean_q():
        with no_grad():
            return float(agent.q1(states, agent.actor(states)).data.mean())

    before = mean_q()
    loss = ag.actor_loss(agent.actor, agent.q1, states)
    agent.actor_opt.zero_grad()
    loss.backward()
    agent.actor_opt.step()
    assert mean_q() > before


def test_td3_exploration_noise_and_bounds():
    agent = _td3()
    s = np.zeros(3, np.float32)
    clean = agent.act(s, explore=False)
    noisy = [agent.act(s, explore=True, step=0, path_step=0) for _ in range(50)]
    assert np.all(np.abs(clean) <= 1) and all(np.all(np.abs(a) <= 1) for a in noisy)
    assert np.std([a[0] for a in noisy]) > 0.05


# ---------------------------------------------------------------- soft update
def test_soft_update_cases():
    rng = np.random.default_rng(0)
    a = ag.ValueNetwork(3, (4,), rng=rng).to(np.float64)
    b = ag.ValueNetwork(3, (4,), rng=rng).to(np.float64)
    ag.soft_update(a, b, 1.0)
    assert all(np.array_equal(a.state_dict()[k], v) for k, v in b.state_dict().items())
    for p in a.parameters():
        p.data[...] = 0.0
    for p in b.parameters():
        p.data[...] = 1.0
    ag.soft_update(a, b, 0.005)
    assert all(np.allclose(p.data, 0.005, rtol=0, atol=1e-15) for p in a.parameters())


@settings(max_examples=30, deadline=None)
@given(st.floats(0.0, 1.0), st.integers(0, 1000))
def test_soft_update_contraction(tau, seed):
    rng = np.random.default_rng(seed)
    a = ag.ValueNetwork(3, (5,), rng=rng).to(np.float64)
    b = ag.ValueNetwork(3, (5,), rng=rng).to(np.float64)
    vec = lambda m: np.concatenate([p.data.ravel() for p in m.parameters()])
    before = np.linalg.norm(vec(a) - vec(b))
    ag.soft_update(a, b, tau)
    after = np.linalg.norm(vec(a) - vec(b))
    assert abs(after - (1 - tau) * before) <= 1e-9 * max(1.0, before)


def test_soft_update_shape_mismatch():
    a = ag.ValueNetwork(3, (4,))
    b = ag.ValueNetwork(3, (5,))
    with pytest.raises(ValueError):
        ag.soft_update(a, b, 0.5)


def test_soft_update_covers_frozen_targets_and_buffers():
    agent = _td3()
    for p in agent.actor.parameters():
        p.data += 1.0
    bn_online = [b for _, b in agent.actor.named_buffers()]
    for b in bn_online:
        b += 2.0
    before = [b.copy() for _, b in agent.actor_target.named_buffers()]
    ag.soft_update(agent.actor_target, agent.actor, 0.5)
    after = [b for _, b in agent.actor_target.named_buffers()]
    assert all(np.allclose(x, 0.5 * y + 0.5 * z) for x, y, z in zip(after, before, bn_online))
    assert agent.actor_target.parameters() and not any(p.requires_grad for p in agent.actor_target.parameters())


# -------------------------------------------------------------- noise schedule
def test_sigma_anchors():
    sch = NoiseSchedule()
    assert abs(ag.exploration_sigma(sch, 0, 0, 0) - 1.0) < 1e-9
    assert abs(ag.exploration_sigma(sch, 50_000, 0, 1) - 0.025) < 1e-9
    assert abs(ag.exploration_sigma(sch, 100_000, 0, 0)) < 1e-9
    assert abs(ag.exploration_sigma(sch, 100_000, 0, 1)) < 1e-9


@settings(max_examples=300, deadline=None)
@given(st.floats(0, 1e6), st.floats(0, 500), st.integers(0, 1))
def test_sigma_nonnegative(t, tp, dim):
    sch = NoiseSchedule()
    assert sch.sigma(t, tp, dim) >= 0
    lam_t, lam_d, lam_p = sch.factors(t, tp)
    assert 0 <= lam_p <= 2 + 1e-12


def test_sigma_normalized_units():
    sch = NoiseSchedule()
    assert np.allclose(sch.normalized_sigma(0, 0), [1.0 / 3.0, 0.2 / 0.5])
    with pytest.raises(ValueError):
        sch.sigma(-1, 0, 0)


def test_epsilon_schedule():
    assert ag.linear_epsilon(0, 1.0, 0.1, 100) == 1.0
    assert ag.linear_epsilon(50, 1.0, 0.1, 100) == pytest.approx(0.55)
    assert ag.linear_epsilon(10_000, 1.0, 0.1, 100) == 0.1


# ----------------------------------------------------------------------- sac
def test_sac_value_target_hand_cases():
    assert ag.soft_value(2.0, -1.0, 1.0) == 3.0
    assert ag.soft_value(2.0, -1.0, 0.0) == 2.0
    vals = [ag.soft_value(2.0, lp, 0.2) for lp in np.linspace(-5, 5, 11)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    states = np.zeros((3, 2))
    sample = lambda s: (np.zeros((len(s), 2)), np.full(len(s), -1.0))
    v = ag.sac_value_target(states, sample, (_const_critic(2.0), _const_critic(4.0)), 1.0)
    assert np.allclose(v, 3.0)


def test_sac_q_target_cases():
    b = Batch(np.zeros((2, 1)), np.zeros((2, 2)), np.array([2.9, 0.0]), np.zeros((2, 1)), np.array([1.0, 0.0]))
    q = ag.sac_q_target(b, lambda s: np.full(len(s), 10.0), 0.99)
    assert q[0] == pytest.approx(2.9, abs=1e-12) and q[1] == pytest.approx(9.9, abs=1e-12)


def test_sac_q_target_matches_td3_formulation():
    rng = np.random.default_rng(4)
    agent = ag.SACAgent(3, TrainConfig(), rng=rng, hidden=(8, 8, 8))
    b = _batch(rng, 16)
    det_policy = lambda s: agent.policy.mean_action(s)
    det_sample = lambda s: (det_policy(s), np.zeros(len(s)))
    value_net = lambda s: ag.sac_value_target(s, det_sample, (agent.q1, agent.q2), 0.0)
    y_sac = ag.sac_q_target(b, value_net, 0.95)
    y_td3 = ag.td3_targets(b, det_policy, (agent.q1, agent.q2), 0.95)
    assert np.allclose(y_sac, y_td3, atol=1e-6)


def _sac64(seed=0, hidden=(8, 8, 6)):
    return ag.SACAgent(2, TrainConfig(), rng=np.random.default_rng(seed), hidden=hidden, dtype=np.float64)


def test_sac_policy_loss_alpha_linearity():
    agent = _sac64()
    rng = np.random.default_rng(0)
    s = rng.normal(size=(10, 2))
    eps = rng.normal(size=(10, 2))
    qs = (agent.q1, agent.q2)
    l0 = ag.sac_policy_loss(s, agent.policy, qs, 0.0, rng, eps).item()
    l1 = ag.sac_policy_loss(s, agent.policy, qs, 0.3, rng, eps).item()
    l2 = ag.sac_policy_loss(s, agent.policy, qs, 0.6, rng, eps).item()
    assert (l2 - l0) == pytest.approx(2 * (l1 - l0), rel=1e-9)


def test_sac_policy_loss_gradient_matches_finite_differences():
    agent = _sac64(1)
    rng = np.random.default_rng(1)
    s = rng.normal(size=(6, 2))
    eps = rng.normal(size=(6, 2))
    fn = lambda: ag.sac_policy_loss(s, agent.policy, (agent.q1, agent.q2), 0.2, rng, eps)
    err = check_grads(fn, agent.policy.parameters(), step=1e-6, max_entries=20)
    assert err < 1e-3


def test_sac_policy_gradient_reaches_policy_only():
    agent = _sac64(2)
    rng = np.random.default_rng(2)
    loss = ag.sac_policy_loss(rng.normal(size=(4, 2)), agent.policy, (agent.q1, agent.q2), 0.2, rng)
    loss.backward()
    assert all(p.grad is not None for p in agent.policy.parameters())
    assert all(p.grad is None for p in agent.q1.parameters() + agent.q2.parameters())
    assert all(p.requires_grad for p in agent.q1.parameters())


def test_sac_policy_optimization_improves_soft_objective():
    agent = _sac64(3, hidden=(16, 16, 8))
    rng = np.random.default_rng(3)
    s = rng.normal(size=(32, 2))
    eps = rng.normal(size=(32, 2))
    qs = (agent.q1, agent.q2)

    def objective():
        with no_grad():
            return -ag.sac_policy_loss(s, agent.policy, qs, 0.2, rng, eps).item()

    before = objective()
    opt = agent.opts["policy"]
    for _ in range(100):
        loss = ag.sac_policy_loss(s, agent.policy, qs, 0.2, rng, eps)
        opt.zero_grad()
        loss.backward()
        opt.step()
    assert objective() > before


def test_squashed_log_prob_matches_policy_and_integrates():
    agent = _sac64(4)
    s = np.array([[0.3, -0.2]])
    eps = np.array([[0.7, -1.1]])
    with no_grad():
        a, logp = agent.policy.sample(s, None, eps)
        mean, log_std = agent.policy.heads(s)
    ref = ag.squashed_gaussian_log_prob(a.data, mean.data, log_std.data).sum()
    assert logp.item() == pytest.approx(ref, abs=1e-6)
    # 1-D quadrature of the squashed density
    for m, ls in ((0.0, 0.0), (0.4, -0.7), (-1.0, -1.5)):
        grid = np.linspace(-1, 1, 400_001)[1:-1]
        dens = np.exp(ag.squashed_gaussian_log_prob(grid, m, ls))
        assert abs(np.trapezoid(dens, grid) - 1.0) < 1e-3


def test_sac_update_runs_and_moves_target_slowly():
    agent = ag.SACAgent(3, TrainConfig(tau=0.1), rng=np.random.default_rng(0), hidden=(8, 8, 8))
    b = _batch(np.random.default_rng(0), 16)
    v0 = {k: v.copy() for k, v in agent.value_target.state_dict().items()}
    out = agent.update(b)
    assert set(out) == {"v_loss", "q1_loss", "q2_loss", "policy_loss"}
    moved = {k: v for k, v in agent.value_target.state_dict().items()}
    online = agent.value.state_dict()
    for k in v0:
        assert np.allclose(moved[k], 0.9 * v0[k] + 0.1 * online[k], atol=1e-6)


# ---------------------------------------------------------------- policy heads
def test_policy_head_shapes():
    rng = np.random.default_rng(0)
    latent = rng.normal(size=(5, 64)).astype(np.float32) * 10
    cfg = TrainConfig()
    ddqn = ag.make_agent("ddqn", 64, cfg, rng=rng)
    td3 = ag.make_agent("td3", 64, cfg, rng=rng)
    sac = ag.make_agent("sac", 64, cfg, rng=rng)
    assert ag.policy_heads(latent, "ddqn", ddqn).shape == (5, 15)
    acts = ag.policy_heads(latent, "td3", td3)
    assert acts.shape == (5, 2) and np.abs(acts).max() <= 1.0
    assert ag.policy_heads(latent[:1], "sac", sac).shape == (1, 2, 2)
    with pytest.raises(ValueError):
        ag.make_agent("ppo", 64, cfg)


def test_reference_architectures():
    rng = np.random.default_rng(0)
    cfg = TrainConfig()
    dense = lambda m: [l for l in m.body.layers if hasattr(l, "weight") and l.weight.ndim == 2]
    ddqn = ag.make_agent("ddqn", 64, cfg, rng=rng)
    assert [l.weight.shape[1] for l in dense(ddqn.q)] == [256, 128, 64, 32, 15]
    td3 = ag.make_agent("td3", 64, cfg, rng=rng)
    assert [l.weight.shape[1] for l in dense(td3.actor)] == [64, 200, 20, 2]
    assert sum(type(l).__name__ == "BatchNorm1d" for l in td3.actor.body.layers) == 3
    assert not any(type(l).__name__ == "BatchNorm1d" for l in td3.q1.body.layers)
    assert dense(td3.q1)[0].weight.shape[0] == 66
    sac = ag.make_agent("sac", 64, cfg, rng=rng)
    assert [l.weight.shape[1] for l in dense(sac.q1)] == [256, 128, 64, 32, 1]
    assert sac.policy.mean_head.weight.shape == (32, 2) and sac.policy.log_std_head.weight.shape == (32, 2)


# ---------------------------------------------------------------- frame skip
class _ScriptedEnv:
    def __init__(self, end_at=None):
        self.frames = 0
        self.end_at = end_at

    def step_frame(self, action):
        self.frames += 1
        return -0.1, self.end_at is not None and self.frames >= self.end_at

    def observe(self):
        return np.array([self.frames])


def test_frame_skip_k1_matches_raw_step():
    a, b = _ScriptedEnv(), _ScriptedEnv()
    obs, r, done, n = ag.frame_skip_step(a, 0, 1)
    r2, d2 = b.step_frame(0)
    assert (r, done, n) == (r2, d2, 1) and np.array_equal(obs, b.observe())


def test_frame_skip_sums_constant_reward():
    obs, r, done, n = ag.frame_skip_step(_ScriptedEnv(), 0, 4)
    assert r == pytest.approx(-0.4, abs=1e-12) and n == 4 and not done


def test_frame_skip_truncates_on_termination():
    env = _ScriptedEnv(end_at=2)
    _, r, done, n = ag.frame_skip_step(env, 0, 4)
    assert done and n == 2 and env.frames == 2 and r == pytest.approx(-0.2)
    with pytest.raises(ValueError):
        ag.frame_skip_step(env, 0, 0)


def test_frame_skip_on_parked_car_sums_constant_term():
    from urbandrl.drivesim import ScenarioConfig
    from urbandrl.harness.env import LatentDrivingEnv
    env = LatentDrivingEnv(ScenarioConfig(n_traffic=0), None, discrete=False, render=False)
    env.reset(0)
    _, r, done, n = ag.frame_skip_step(env, np.array([-1.0, 0.0]), 4)
    assert r == pytest.approx(-0.4, abs=1e-12) and n == 4 and not done


# ---------------------------------------------------------------- toy tasks
def test_chain_value_iteration_fixed_point():
    env = ag.ChainMDP()
    q = env.value_iteration(0.9)
    assert q[4, 1] == pytest.approx(1.0) and q[0, 0] == pytest.approx(0.8)
    assert np.argmax(q, axis=1).tolist() == [0, 1, 1, 1, 1]


def test_point_mass_oracle_beats_idle():
    idle = ag.mean_return(ag.PointMass, lambda o: np.zeros(1), range(20))
    pd = ag.mean_return(ag.PointMass, ag.PDController(), range(20))
    assert pd > idle / 5  # the controller removes most of the idle cost
    assert ag.normalized_score(pd, idle, pd) == 1.0
