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
##Eikonal solvers for distance maps on SE(2) and on the projective line bundle

The distance map $W$ from a seed set is the viscosity solution of

$$ \frac{(A_1 W)^2}{\xi^2} + (A_2 W)^2 + \frac{\epsilon^2 (A_3 W)^2}{\xi^2} = C^2, \qquad W(\text{seeds}) = 0,$$

with the relaxed metric ($\epsilon > 0$). On projective grids the orientation
axis has period $\pi$, which realizes $W(x, y, \pi) = W(x, y, 0)$ without any
extra boundary condition.

Examples
--------
The basic use of this module is

1. Create the problem :
 `prob = EikonalProblem(cost, MetricParams(xi, eps), seeds=[(0, 0, 0)], mode='pt')`
2. Create the solver and solve :
 `prob.createSolver('gauss-seidel'); W, report = prob.solver.solve(tol)`
   or simply `W, report = solve(prob, tol)`
3. Check the discretization :
 `res = residual(W, prob)`

Uniform cost on a small PT grid, the pure rotations from the seed cost min(theta, pi - theta)
>>> spec = GridSpec(21, 21, 16, -2., 2., -2., 2., np.pi)
>>> prob = EikonalProblem(ScalarField3.constant(spec, 1.), MetricParams(1., 0.1), [(0., 0., 0.)], 'pt')
>>> prob
Instance of EikonalProblem class, pt mode on 21x21x16 grid, 1 seed(s), xi=1.0, eps=0.1.
>>> W, rep = solve(prob, tol=1e-10)
>>> rep.converged, W.sample(0., 0., 0.)
(True, 0.0)
>>> th = spec.thetas
>>> bool(np.all(np.abs(W.data[:, 10, 10] - np.minimum(th, np.pi - th)) <= 3*spec.htheta))
True
>>> bool(np.all(W.data >= 0))
True

After every node is reached, the sup-norm change does not increase
>>> hist = rep.history[rep.first_complete:]
>>> all(b <= a + 1e-12 for a, b in zip(hist[:-1], hist[1:]))
True

Reflection symmetry on SE(2), W(x, y, theta) = W(x, -y, 2pi - theta)
>>> spec = GridSpec(21, 21, 16, -2., 2., -2., 2., 2*np.pi)
>>> prob = EikonalProblem(ScalarField3.constant(spec, 1.), MetricParams(1., 0.1), [IDENTITY], 'se2')
>>> W, rep = solve(prob, tol=1e-10)
>>> mirror = W.data[(-np.arange(16)) % 16][:, ::-1, :]
>>> float(np.max(np.abs(W.data - mirror))) < 1e-6
True

The parallel Jacobi passes reach the same map, bit for bit whatever the number of threads
>>> gopts['threads'] = 1
>>> W1, rep1 = solve(prob, tol=1e-10, max_iter=1000, scheme='jacobi')
>>> gopts['threads'] = 4
>>> W4, rep4 = solve(prob, tol=1e-10, max_iter=1000, scheme='jacobi')
>>> gopts['threads'] = 1
>>> rep1.converged, np.array_equal(W1.data, W4.data)
(True, True)
>>> float(np.max(np.abs(W1.data - W.data))) < 1e-6
True

The residual of the zero field is one away from the seeds
>>> Z = ScalarField3.constant(spec, 0., 'value')
>>> res = residual(Z, prob).data
>>> bool(np.all(res[prob.seed_mask == 0] == 1.)), bool(np.all(res[prob.seed_mask == 1] == 0.))
(True, True)
"""
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import numpy as np
import numba

from cuspless.options import gopts
from cuspless.utils import Print
from cuspless.geometry import IDENTITY, GroupElement, MetricParams, antipode, project
from cuspless.fields import GridSpec, ScalarField3, fold_to_projective
from cuspless import _kernels

_MODES = ('se2', 'pt')


def _xyz(p):
    """Return the (x, y, theta) tuple of a point or of a tuple."""
    if hasattr(p, 'theta'):
        return (p.x, p.y, p.theta)
    x, y, theta = p
    return (float(x), float(y), float(theta))


@dataclass
class SolveReport:
    """Summary of an eikonal solve.

    Attributes
    ----------
    iterations : int
        number of sweep cycles
    final_residual : float
        sup-norm change of the last cycle
    wall_time : float
        seconds
    converged : bool
        the change went below the tolerance with every reachable node reached
    history : list
        sup-norm change of each cycle (inf while new nodes are reached)
    first_complete : int
        index of the first cycle without newly reached nodes
    """
    iterations: int = 0
    final_residual: float = np.inf
    wall_time: float = 0.
    converged: bool = False
    tol: float = 0.
    scheme: str = ''
    mode: str = ''
    history: list = field(default_factory=list)
    first_complete: int = None

    def asdict(self):
        return {'iterations': self.iterations, 'final_residual': self.final_residual,
                'wall_time': self.wall_time, 'converged': self.converged, 'tol': self.tol,
                'scheme': self.scheme, 'mode': self.mode}


class EikonalProblem:
    """Distance map problem on a SE(2) or projective grid.

    Attributes
    ----------
    cost : ScalarField3
        the cost, kind 'cost'
    metric : MetricParams
        the metric, its cost is `cost`
    seeds : list
        the seed points, snapped to the nearest nodes
    mode : {'se2', 'pt'}
        'pt' needs a pi periodic cost, 'se2' a 2pi periodic one
    """

    def __init__(self, cost, metric, seeds, mode='pt'):
        if cost.kind != 'cost':
            raise ValueError("the eikonal problem needs a cost field, got kind '{}'".format(cost.kind))
        if mode not in _MODES:
            raise ValueError("mode must be 'se2' or 'pt', got '{}'".format(mode))
        if mode == 'pt' and not cost.spec.is_projective:
            raise ValueError('pt mode needs a pi periodic cost field')
        if mode == 'se2' and cost.spec.is_projective:
            raise ValueError('se2 mode needs a 2pi periodic cost field')
        if not metric.eps > 0:
            raise ValueError('the eikonal solver uses the relaxed metric, eps must be > 0')
        if len(seeds) == 0:
            raise ValueError('at least one seed is needed')
        self.cost = cost
        self.metric = metric.with_cost(cost)
        self.mode = mode
        self.seeds = [_xyz(p) for p in seeds]
        self.seed_nodes = sorted(set(cost.spec.nearest_node(*p) for p in self.seeds))
        self.seed_mask = np.zeros(cost.spec.shape, dtype=np.uint8)
        for i, j, k in self.seed_nodes:
            self.seed_mask[k, j, i] = 1
        self.solver = None

    def __repr__(self):
        """Define the object representation."""
        s = self.spec
        return "Instance of EikonalProblem class, {} mode on {}x{}x{} grid, {} seed(s), xi={}, eps={}.".format(
            self.mode, s.nx, s.ny, s.ntheta, len(self.seed_nodes), self.metric.xi, self.metric.eps)

    @staticmethod
    def se2_emulating_pt(cost_2pi, metric, seed=IDENTITY):
        """SE(2) problem with the two antipodal seeds {seed, seed ⊙ (0, 0, pi)}."""
        seed = seed if isinstance(seed, GroupElement) else GroupElement(*seed)
        return EikonalProblem(cost_2pi, metric, [seed, antipode(seed)], 'se2')

    @property
    def spec(self):
        return self.cost.spec

    def default_tol(self):
        """Tolerance relative to the metric diameter of the domain."""
        return gopts['tol_factor']*self.spec.diameter(self.metric.xi, self.metric.max_cost)

    def createSolver(self, scheme=None):
        """Create the solver `self.solver` from its name in `_SOLVER_DICT`.

        Parameters
        ----------
        scheme : string, optional
            'gauss-seidel' (default, sequential) or 'jacobi' (parallel double buffer)
        """
        scheme = gopts['scheme'] if scheme is None else scheme
        try:
            self.solver = _SOLVER_DICT[scheme](self)
        except KeyError:
            raise NotImplementedError('The scheme {} is not yet implemented, use one of {}'.format(
                scheme, list(_SOLVER_DICT)))
        return self.solver

    def _discretization(self):
        """Arguments shared by all kernels."""
        s = self.spec
        xi, eps = self.metric.xi, self.metric.eps
        th = s.thetas
        return (np.cos(th), np.sin(th), s.hx, s.hy, s.htheta, min(s.hx, s.hy),
                1./xi**2, 1., eps**2/xi**2)


class EikonalSolver(ABC):
    """Define the abstract interface common to all eikonal solvers.

    Attributes
    ----------
    prob : EikonalProblem
        the problem to solve
    """
    # keep trace of the scheme
    _scheme = None

    def __init__(self, prob):
        self.prob = prob

    def solve(self, tol=None, max_iter=None):
        """Iterate sweep cycles until the sup-norm change is below `tol`.

        Parameters
        ----------
        tol : float, optional
            absolute tolerance on the change of W between two cycles
        max_iter : int, optional
            maximum number of cycles

        Returns
        -------
        W : ScalarField3
            the distance map, kind 'value'
        report : SolveReport
            the convergence summary. If `report.converged` is False, W is the
            partial result.
        """
        prob = self.prob
        tol = prob.default_tol() if tol is None else tol
        max_iter = gopts['max_iter'] if max_iter is None else max_iter
        if not tol > 0:
            raise ValueError('tol must be > 0, got {}'.format(tol))
        Print('> Solve {} eikonal problem with {} class...'.format(prob.mode, self.__class__.__name__))
        W = np.full(prob.spec.shape, np.inf)
        W[prob.seed_mask == 1] = 0.
        cost = np.ascontiguousarray(prob.cost.data)
        args = prob._discretization()
        report = SolveReport(tol=tol, scheme=self._scheme, mode=prob.mode)
        start = time.perf_counter()
        for it in range(max_iter):
            before = W.copy()
            W = self._cycle(W, cost, prob.seed_mask, args)
            known = np.isfinite(before)
            reached = int(np.count_nonzero(~known & np.isfinite(W)))
            change = float(np.max(before[known] - W[known])) if known.any() else 0.
            report.iterations = it + 1
            if reached:
                report.history.append(np.inf)
            else:
                report.history.append(change)
                if report.first_complete is None:
                    report.first_complete = it
            if gopts['verbose']:
                Print('  cycle {:3d} : sup change {:.3e}, {} new node(s)'.format(it + 1, change, reached))
            report.final_residual = report.history[-1]
            if reached == 0 and change < tol:
                report.converged = True
                break
        report.wall_time = time.perf_counter() - start
        if report.converged:
            Print('> Converged after {} cycles ({:.2f} s)'.format(report.iterations, report.wall_time))
        else:
            Print('Warning : Hamiltonian did not converge after {} cycles, last change {:.3e} > tol {:.3e}'.format(
                report.iterations, report.final_residual, tol))
        return ScalarField3(prob.spec, W, 'value'), report

    @abstractmethod
    def _cycle(self, W, cost, seeds, args):
        """Run one cycle and return the updated W."""
        pass


class GaussSeidelSolver(EikonalSolver):
    """Sequential solver, 8 in-place sweeps per cycle (bit reproducible)."""
    _scheme = 'gauss-seidel'

    def _cycle(self, W, cost, seeds, args):
        _kernels.gauss_seidel_cycle(W, cost, seeds, *args)
        return W


class JacobiSolver(EikonalSolver):
    """Double buffer solver, parallel across orientation slabs.

    A cycle is made of 8 Jacobi passes. The result does not depend on the number
    of threads, set with `gopts['threads']`.
    """
    _scheme = 'jacobi'

    def _cycle(self, W, cost, seeds, args):
        if gopts['threads'] and gopts['threads'] > 0:
            numba.set_num_threads(min(int(gopts['threads']), numba.config.NUMBA_NUM_THREADS))
        Wnew = np.empty_like(W)
        for _ in range(8):
            _kernels.jacobi_pass(W, Wnew, cost, seeds, *args)
            W, Wnew = Wnew, W
        return W


# list of available solvers
_SOLVER_DICT = {'gauss-seidel': GaussSeidelSolver,
                'jacobi': JacobiSolver}


def solve(prob, tol=None, max_iter=None, scheme=None):
    """Solve the eikonal problem `prob`, see `EikonalSolver.solve`."""
    prob.createSolver(scheme)
    return prob.solver.solve(tol, max_iter)


def residual(W, prob):
    """Relative upwind Hamiltonian residual |H - C^2| / C^2 at every node.

    Seeds get 0, unreached nodes keep inf.

    Parameters
    ----------
    W : ScalarField3
        a value field on the grid of `prob`
    prob : EikonalProblem
        the problem

    Returns
    -------
    res : ScalarField3
        kind 'value'
    """
    if W.spec != prob.spec:
        raise ValueError('incompatible grids: W and the problem cost differ')
    out = np.empty(prob.spec.shape)
    _kernels.residual_kernel(np.ascontiguousarray(W.data), np.ascontiguousarray(prob.cost.data),
                             prob.seed_mask, *prob._discretization(), out)
    return ScalarField3(prob.spec, out, 'value')


def residual_stats(res, prob):
    """Median and max of a residual field over the reached nodes that are not seeds."""
    vals = res.data[(prob.seed_mask == 0) & np.isfinite(res.data)]
    if vals.size == 0:
        return {'median': 0., 'max': 0., 'count': 0}
    return {'median': float(np.median(vals)), 'max': float(np.max(vals)), 'count': int(vals.size)}


def warmup():
    """Compile the kernels on a tiny problem so that timings exclude compilation."""
    spec = GridSpec(3, 3, 4, 0., 1., 0., 1., np.pi)
    prob = EikonalProblem(ScalarField3.constant(spec, 1.), MetricParams(1., 0.1), [(0., 0., 0.)], 'pt')
    verbose, gopts['verbose'] = gopts['verbose'], False
    try:
        for scheme in _SOLVER_DICT:
            W, _ = solve(prob, tol=1e-3, max_iter=2, scheme=scheme)
        residual(W, prob)
    finally:
        gopts['verbose'] = verbose


def bench_pt_vs_se2(cost_2pi, metric, tol=None, seed=IDENTITY, separate=False, scheme=None):
    """Time the SE(2) two-seed solve against the PT solve on the folded grid.

    Parameters
    ----------
    cost_2pi : ScalarField3
        pi-symmetric cost on a 2pi grid
    metric : MetricParams
        xi and eps (its cost is replaced)
    tol : float, optional
        common tolerance, default from the SE(2) domain
    seed : GroupElement
        the source
    separate : bool
        also time the two single-seed SE(2) solves giving both antipodal distance maps

    Returns
    -------
    record : dict
        wall times, iterations, speed ratio and the max W discrepancy after folding
    """
    cost_pt = fold_to_projective(cost_2pi)
    seed = seed if isinstance(seed, GroupElement) else GroupElement(*seed)
    prob_se2 = EikonalProblem.se2_emulating_pt(cost_2pi, metric, seed)
    prob_pt = EikonalProblem(cost_pt, metric, [project(seed)], 'pt')
    tol = prob_se2.default_tol() if tol is None else tol
    warmup()
    W_se2, rep_se2 = solve(prob_se2, tol, scheme=scheme)
    W_pt, rep_pt = solve(prob_pt, tol, scheme=scheme)
    folded = fold_to_projective(W_se2).data
    both = np.isfinite(folded) & np.isfinite(W_pt.data)
    discrepancy = float(np.max(np.abs(folded[both] - W_pt.data[both]))) if both.any() else 0.
    s = cost_2pi.spec
    record = {'se2': rep_se2.asdict(), 'pt': rep_pt.asdict(),
              'ratio': rep_pt.wall_time / rep_se2.wall_time,
              'discrepancy': discrepancy,
              'tolerance': 3*s.largest_spacing*float(np.max(cost_2pi.data))*max(metric.xi, 1.),
              'unreached_mismatch': int(np.count_nonzero(np.isfinite(folded) != np.isfinite(W_pt.data)))}
    if separate:
        t = 0.
        for g in (seed, antipode(seed)):
            _, rep = solve(EikonalProblem(cost_2pi, metric, [g], 'se2'), tol, scheme=scheme)
            t += rep.wall_time
        record['se2_separate_time'] = t
        record['ratio_separate'] = rep_pt.wall_time / t
    Print('> PT/SE(2) wall time ratio {:.3f}, discrepancy {:.3e}'.format(record['ratio'], discrepancy))
    return record
