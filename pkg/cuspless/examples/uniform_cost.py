# -*- coding: utf-8 -*-

# This file is part of cuspless, a library to track sub-Riemannian geodesics
# in the projective line bundle and to probe their cusps and Maxwell sets.

# Cuspless is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.

# Cuspless is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.

# You should have received a copy of the GNU General Public License
# along with Cuspless.  If not, see <https://www.gnu.org/licenses/>.
r"""
Uniform cost distance maps on SE(2) and on the projective line bundle.

With C = 1 and xi = 1 the distance maps are known by symmetry: the projective
distance is the SE(2) distance from the identity folded by
min(W(g), W(g ⊙ (0, 0, pi))), the pure rotations cost min(theta, pi - theta) and
the straight segments are geodesics. This script checks the eikonal solvers and
the backtracking against these facts.

Description
------------
The SE(2) problem is solved on a 64x64x64 grid of [-6, 6]^2 x [0, 2pi), the
projective one on the same spatial grid with 32 orientations.

Examples
--------
>>> import numpy as np
>>> import time
>>> start = time.perf_counter()
>>> W_se2, W_pt, rep_se2, rep_pt = myMain()  # doctest: +ELLIPSIS
> SE(2) solve : ... cycles, converged True
> PT solve : ... cycles, converged True
>>> time.perf_counter() - start < 120.
True

The projective distance is the folded SE(2) distance
>>> h = W_pt.spec.largest_spacing
>>> float(np.max(np.abs(fold_to_projective(W_se2).data - W_pt.data))) <= 3*h
True

Pure rotations cost min(theta, pi - theta)
>>> s = W_pt.spec
>>> i, j, _ = s.nearest_node(0., 0., 0.)
>>> th = s.thetas
>>> bool(np.all(np.abs(W_pt.data[:, j, i] - np.minimum(th, np.pi - th)) <= 3*s.htheta))
True

After every node is reached, the sup change between cycles does not increase
>>> hist = rep_pt.history[rep_pt.first_complete:]
>>> all(b <= a + 1e-12 for a, b in zip(hist[:-1], hist[1:]))
True

Straight line from the identity, no cusp and at most two cells off the x axis
>>> metric = MetricParams(1., 0.1)
>>> line = backtrack(W_pt, metric, (5., 0., 0.))
>>> bool(np.max(np.abs(line.y)) <= 2*s.hy), detect_cusps(line).count
(True, 0)

Tracking consistency on 20 random reachable starts
>>> errors, decreasing, stalled = tracking_consistency(W_pt, metric, 20)
>>> max(errors) <= 0.02, all(decreasing), any(stalled)
(True, True, False)

Residual of the discretization, and its decrease under refinement
>>> stats, coarse, fine = residual_study(tol=1e-8)
>>> stats['median'] <= 10*1e-8
True
>>> fine < coarse
True

The Maxwell conclusions do not depend on eps
>>> rows = eps_stability()
>>> [r['eps'] for r in rows]
[0.2, 0.1, 0.05]
>>> len({r['stages'][0]['m2_present'] for r in rows}) == 1
True
"""
import numpy as np

from cuspless.fields import GridSpec, ScalarField3, fold_to_projective, resample
from cuspless.geometry import IDENTITY, MetricParams
from cuspless.eikonal import EikonalProblem, solve, residual, residual_stats
from cuspless.tracker import backtrack, detect_cusps
from cuspless.maxwell import eps_sweep


def uniform_problems(n=64, ntheta=64, half_width=6., eps=0.1):
    """The SE(2) problem from the identity and its projective counterpart."""
    spec = GridSpec(n, n, ntheta, -half_width, half_width, -half_width, half_width, 2*np.pi)
    metric = MetricParams(1., eps)
    prob_se2 = EikonalProblem(ScalarField3.constant(spec, 1.), metric, [IDENTITY], 'se2')
    spec_pt = spec.with_period(np.pi, ntheta // 2)
    prob_pt = EikonalProblem(ScalarField3.constant(spec_pt, 1.), metric, [(0., 0., 0.)], 'pt')
    return prob_se2, prob_pt


def tracking_consistency(W, metric, n=20, seed=0, w_range=(1., 3.)):
    """Track from `n` random nodes with W in `w_range`.

    Returns
    -------
    errors : list
        |length - W(start)| / W(start) per curve
    decreasing : list
        True when W strictly decreases along the samples
    stalled : list
        the stall flag of every curve
    """
    rng = np.random.default_rng(seed)
    s = W.spec
    X, Y, TH = s.mesh()
    inside = (np.abs(X) <= 0.7*s.x_max) & (np.abs(Y) <= 0.7*s.y_max)
    cand = np.flatnonzero(inside & (W.data >= w_range[0]) & (W.data <= w_range[1]))
    errors, decreasing, stalled = [], [], []
    for idx in rng.choice(cand, n, replace=False):
        start = (X.flat[idx], Y.flat[idx], TH.flat[idx])
        w0 = W.data.flat[idx]
        curve = backtrack(W, metric, start)
        errors.append(float(abs(curve.total_length - w0)/w0))
        stalled.append(curve.stalled)
        w = W.sample_many(curve.x, curve.y, curve.theta)
        decreasing.append(bool(np.all(np.diff(w) < 0)))
    return errors, decreasing, stalled


def residual_study(tol=1e-8, n=17, half_width=2.):
    """Residual of a converged projective solve and of a refinement.

    The coarse solution transferred on the refined grid is compared with the
    solution computed there.

    Returns
    -------
    stats : dict
        residual statistics of the coarse solve
    coarse, fine : float
        median residuals on the refined grid of the transferred coarse solution
        and of the refined solution
    """
    _, prob = uniform_problems(n, 16, half_width)
    W, _ = solve(prob, tol)
    stats = residual_stats(residual(W, prob), prob)
    _, prob_fine = uniform_problems(2*n - 1, 32, half_width)
    W_fine, _ = solve(prob_fine, tol)
    coarse = residual_stats(residual(resample(W, prob_fine.spec), prob_fine), prob_fine)['median']
    fine = residual_stats(residual(W_fine, prob_fine), prob_fine)['median']
    return stats, coarse, fine


def eps_stability(eps_values=(0.2, 0.1, 0.05), radii=(0.75*np.pi,)):
    """Stage reports of a small uniform grid for several eps."""
    spec = GridSpec(33, 33, 32, -3., 3., -3., 3., 2*np.pi)
    return eps_sweep(spec, list(eps_values), list(radii))


def myMain(eps=0.1):
    """Solve the uniform cost problems on SE(2) and on the projective line bundle.

    Returns
    -------
    W_se2, W_pt : ScalarField3
        the distance maps
    rep_se2, rep_pt : SolveReport
        the convergence summaries
    """
    prob_se2, prob_pt = uniform_problems(eps=eps)
    W_se2, rep_se2 = solve(prob_se2)
    print('> SE(2) solve : {} cycles, converged {}'.format(rep_se2.iterations, rep_se2.converged))
    W_pt, rep_pt = solve(prob_pt)
    print('> PT solve : {} cycles, converged {}'.format(rep_pt.iterations, rep_pt.converged))
    return W_se2, W_pt, rep_se2, rep_pt


if __name__ == '__main__':
    """Plot a few projective geodesics over the slab theta = 0."""
    import matplotlib.pyplot as plt
    from cuspless.plots import plot_curves, plot_slab

    W_se2, W_pt, rep_se2, rep_pt = myMain()
    metric = MetricParams(1., 0.1)
    curves = [backtrack(W_pt, metric, q) for q in [(5., 0., 0.), (3., 3., np.pi/2), (-2., 4., 0.3)]]
    plot_curves(curves, background=W_pt, labels=['(5, 0, 0)', '(3, 3, pi/2)', '(-2, 4, 0.3)'], nooutput=True)
    plot_slab(W_se2, 0, nooutput=True)
    plt.show()
