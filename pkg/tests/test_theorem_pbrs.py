"""
Exact-expectation checks on random tabular MDPs:
the outer direction predicts how one inner step on the intrinsic reward
changes the extrinsic objective, and potential-based shaping leaves
greedy policies unchanged.
"""
import numpy as np
import pytest

from reward_design import alignment_cosine, motivation, outer_parts, pbrs_terms
from tabular_mdp import exact_batch, objective, q_iteration, random_mdp


def test_exact_policy_gradient_matches_finite_differences():
    rng = np.random.default_rng(0)
    for _ in range(10):
        mdp = random_mdp(rng)
        theta = rng.normal(size=(mdp.S, mdp.A))
        batch = exact_batch(mdp, theta)
        grad = motivation(batch['scores'], batch['g_ex'], batch['weights'])
        numeric = np.zeros(theta.size)
        for i in range(theta.size):
            e = np.zeros(theta.size)
            e[i] = 1e-6
            numeric[i] = (objective(mdp, theta + e.reshape(theta.shape))
                          - objective(mdp, theta - e.reshape(theta.shape))) / 2e-6
        np.testing.assert_allclose(grad, numeric, rtol=1e-5, atol=1e-7)


def small_mdp(rng):
    mdp = random_mdp(rng, S=int(rng.integers(2, 5)), A=2, n_events=int(rng.integers(1, 4)))
    # every channel fires somewhere
    mdp.rho[int(rng.integers(mdp.S)), int(rng.integers(mdp.A))] = 1.0
    return mdp


@pytest.mark.parametrize('draw', [random_mdp, small_mdp], ids=['up_to_6x3', 'up_to_4x2'])
def test_outer_direction_predicts_one_inner_step(draw):
    rng = np.random.default_rng(1)
    alpha, h = 1e-3, 1e-2
    cosines = []
    for _ in range(200):
        mdp = draw(rng)
        theta = rng.normal(size=(mdp.S, mdp.A))
        n = mdp.rho.shape[-1]
        w = rng.normal(size=n)
        batch = exact_batch(mdp, theta)
        analytic = outer_parts(batch['scores'], batch['g_ex'], batch['g_rho'], w, np.zeros(n),
                               0.0, 'weight_anchor', weights=batch['weights'])['grad']

        def j_outer(w_):
            z_in = motivation(batch['scores'], batch['g_rho'] @ w_, batch['weights'])
            return objective(mdp, theta + alpha * z_in.reshape(theta.shape))

        numeric = np.zeros(n)
        for i in range(n):
            e = np.zeros(n)
            e[i] = h
            numeric[i] = (j_outer(w + e) - j_outer(w - e)) / (2 * h)
        cosines.append(alignment_cosine(analytic, numeric))

    cosines = np.array(cosines)
    assert np.mean(cosines > 0) >= 0.9
    assert np.median(cosines) > 0.9


def test_shaping_preserves_greedy_policy():
    rng = np.random.default_rng(2)
    for _ in range(50):
        mdp = random_mdp(rng)
        phi = rng.normal(size=mdp.S) * 3
        # expected shaping term E[gamma * phi(s') - phi(s) | s, a]
        shaping = np.einsum('sat,sat->sa', mdp.P,
                            pbrs_terms(np.broadcast_to(phi[:, None, None], mdp.P.shape),
                                       np.broadcast_to(phi[None, None, :], mdp.P.shape),
                                       np.zeros(mdp.P.shape, dtype=bool), mdp.gamma))
        plain = q_iteration(mdp.P, mdp.R, mdp.gamma)
        shaped = q_iteration(mdp.P, mdp.R + shaping, mdp.gamma)
        np.testing.assert_array_equal(plain.argmax(axis=1), shaped.argmax(axis=1))
        np.testing.assert_allclose(shaped, plain - phi[:, None], atol=1e-8)
