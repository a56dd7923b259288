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
##Geodesic backtracking and cusp analysis

Minimizing geodesics are recovered from a distance map $W$ by the intrinsic
gradient descent

$$ \dot\gamma(t) = - \frac{G^{-1} dW}{\| G^{-1} dW \|_G}(\gamma(t)), $$

integrated with RK4 at unit metric speed from the end point until $W$ is below
a stop radius around the seed. The controls $u^1 = \dot x \cos\theta + \dot y \sin\theta$
and $u^2 = \dot\theta$ are stored with the samples, a cusp is a sign switch of $u^1$.

Examples
--------
Uniform cost, the geodesic from the identity to (5, 0, 0) is a straight segment
>>> spec = GridSpec(57, 33, 32, -1., 6., -2., 2., 2*np.pi)
>>> metric = MetricParams(1., 0.1)
>>> prob = EikonalProblem(ScalarField3.constant(spec, 1.), metric, [IDENTITY], 'se2')
>>> W, rep = solve(prob)
>>> abs(W.sample(5., 0., 0.) - 5.) < 0.05
True
>>> curve = backtrack(W, metric, (5., 0., 0.))
>>> curve.stalled, bool(np.all(np.abs(curve.y) <= 2*spec.hy))
(False, True)
>>> abs(curve.total_length - W.sample(5., 0., 0.)) <= 0.02*W.sample(5., 0., 0.)
True
>>> detect_cusps(curve).count
0

W strictly decreases along the samples
>>> w = W.sample_many(curve.x, curve.y, curve.theta)
>>> bool(np.all(np.diff(w) < 0))
True

On the projective grid the descent runs into the seed cell and ends on the seed
>>> spec_pt = spec.with_period(np.pi, 16)
>>> prob_pt = EikonalProblem(ScalarField3.constant(spec_pt, 1.), metric, [(0., 0., 0.)], 'pt')
>>> W_pt, _ = solve(prob_pt)
>>> curves = [backtrack(W_pt, metric, q) for q in [(3., 1., 0.5), (2., -1., 2.5), (4., 0.5, 1.2)]]
>>> [c.stalled for c in curves]
[False, False, False]
>>> all(np.allclose(c.samples[-1, 1:3], 0.) for c in curves)
True

A start point next to the seed gives the trivial curve
>>> short = backtrack(W, metric, (spec.hx, 0., 0.))
>>> len(short), abs(short.total_length - spec.hx) < 1e-12
(2, True)
"""
import math
from dataclasses import dataclass, field, replace

import numpy as np

from cuspless.options import gopts
from cuspless.utils import Print, write_csv, write_json
from cuspless.geometry import (IDENTITY, GroupElement, MetricParams, Tangent, antipode, project,
                               metric_eval, sr_gradient)
from cuspless.fields import GridSpec, ScalarField3, cartesian_derivatives, fold_to_projective
from cuspless.eikonal import EikonalProblem, solve

# sample columns
COLUMNS = ('t', 'x', 'y', 'theta', 'u1', 'u2')
# gradient norm under which the descent stalls
_GMIN = 1e-12
# number of step halvings when W does not decrease
_MAX_HALVING = 4
STALL_PLATEAU = 'stalled — likely Maxwell/seed plateau'


@dataclass
class GeodesicCurve:
    """Sampled curve with its controls.

    Attributes
    ----------
    samples : np.ndarray
        (n, 6) array of `t, x, y, theta, u1, u2` rows. `t` is the metric arclength
        from the start point, theta is lifted continuously.
    total_length : float
        metric length of the curve
    mode : {'se2', 'pt'}
        the grid the curve was tracked on
    w_start : float
        W at the start point
    stalled : bool
        the descent stopped before the seed, the curve is partial
    reason : string
        why the descent stalled
    """
    samples: np.ndarray
    total_length: float
    mode: str = 'se2'
    w_start: float = np.nan
    stalled: bool = False
    reason: str = ''

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float).reshape(-1, 6)

    def __repr__(self):
        """Define the object representation."""
        flag = ', stalled' if self.stalled else ''
        return 'Instance of GeodesicCurve class, {} samples, length {:.6g} ({}{}).'.format(
            len(self), self.total_length, self.mode, flag)

    def __len__(self):
        return self.samples.shape[0]

    @property
    def t(self):
        return self.samples[:, 0]

    @property
    def x(self):
        return self.samples[:, 1]

    @property
    def y(self):
        return self.samples[:, 2]

    @property
    def theta(self):
        return self.samples[:, 3]

    @property
    def u1(self):
        return self.samples[:, 4]

    @property
    def u2(self):
        return self.samples[:, 5]

    @property
    def length_error(self):
        """Relative gap between the curve length and W at the start point."""
        return abs(self.total_length - self.w_start) / self.w_start

    def reversed(self):
        """Return the same curve travelled backward, the controls change sign.

        Examples
        --------
        >>> t = np.linspace(0., 3*np.pi, 61)
        >>> c = GeodesicCurve(np.column_stack([t, t, 0*t, 0*t, np.cos(t), 0*t]), 3*np.pi)
        >>> r = c.reversed()
        >>> np.array_equal(r.u1, -c.u1[::-1]), detect_cusps(r).count == detect_cusps(c).count
        (True, True)
        """
        s = self.samples[::-1].copy()
        s[:, 0] = self.total_length - s[:, 0]
        s[:, 4:] *= -1
        return replace(self, samples=s)

    def rescaled(self):
        """Return the samples with tau = t / T in [0, 1] and the controls scaled by T.

        This is the constant speed parametrization of the curve on [0, 1].
        """
        T = self.total_length
        if not T > 0:
            raise ValueError('cannot rescale a curve of zero length')
        s = self.samples.copy()
        s[:, 0] /= T
        s[:, 4:] *= T
        return replace(self, samples=s)

    def to_csv(self, filename):
        """Write the samples in a csv file with the header `t,x,y,theta,u1,u2`."""
        write_csv(filename, COLUMNS, self.samples)

    def sidecar(self, cusps=None):
        """Return the json sidecar record of the curve."""
        cusps = detect_cusps(self) if cusps is None else cusps
        return {'length': self.total_length, 'cusp_times': list(cusps.cusp_times),
                'degenerate': cusps.degenerate, 'mode': self.mode,
                'w_start': self.w_start, 'stalled': self.stalled, 'reason': self.reason}

    def export(self, stem, cusps=None):
        """Write `stem.csv` and the sidecar `stem.json`."""
        self.to_csv(stem + '.csv')
        return write_json(self.sidecar(cusps), stem + '.json')


@dataclass
class CuspReport:
    """Cusps of a curve, the times where u1 switches sign.

    Attributes
    ----------
    cusp_times : list
        interpolated times of the sign switches
    count : int
        number of cusps
    degenerate : bool
        u1 stays in the zero band on a run of consecutive samples longer
        than 20% of the curve
    zero_band : float
        the band used
    """
    cusp_times: list = field(default_factory=list)
    count: int = 0
    degenerate: bool = False
    zero_band: float = 0.


class DescentField:
    """Normalized descent field of a distance map."""

    def __init__(self, W, metric):
        self.W = W
        self.spec = s = W.spec
        self.metric = metric
        self.period = s.theta_period
        dx, dy, dth = cartesian_derivatives(W)
        bad = ~(np.isfinite(dx) & np.isfinite(dy) & np.isfinite(dth))
        self.bad = ScalarField3(s, bad.astype(float), 'score')
        self.grad = [ScalarField3(s, np.where(bad, 0., d), 'score') for d in (dx, dy, dth)]
        seeds = np.argwhere(W.data == 0.)
        if seeds.size == 0:
            raise ValueError('the distance map has no seed node (W = 0)')
        self.seeds = np.array([s.node_coords(i, j, k) for k, j, i in seeds])
        self.scale = np.array(s.spacing)

    def value(self, q):
        return self.W.sample(q[0], q[1], q[2])

    def cells(self, dq):
        """Size of a displacement in grid cells."""
        return float(np.linalg.norm(np.asarray(dq) / self.scale))

    def nearest_seed(self, q):
        """Nearest seed lifted next to the continuous orientation of `q`, and its distance in cells."""
        d = self.seeds - np.asarray(q)
        d[:, 2] = (d[:, 2] + self.period/2) % self.period - self.period/2
        n = np.linalg.norm(d / self.scale, axis=1)
        m = int(np.argmin(n))
        return np.asarray(q) + d[m], float(n[m])

    def _upwind(self, q):
        """One-sided differences at the nearest node, toward the smaller neighbours."""
        s = self.spec
        i, j, k = s.nearest_node(*q)
        d = self.W.data
        w = d[k, j, i]
        out = []
        for lo, hi, h in ((d[k, j, max(i - 1, 0)], d[k, j, min(i + 1, s.nx - 1)], s.hx),
                          (d[k, max(j - 1, 0), i], d[k, min(j + 1, s.ny - 1), i], s.hy),
                          (d[(k - 1) % s.ntheta, j, i], d[(k + 1) % s.ntheta, j, i], s.htheta)):
            if min(lo, hi) >= w:
                out.append(0.)
            elif lo <= hi:
                out.append((w - lo) / h)
            else:
                out.append((hi - w) / h)
        return out

    def __call__(self, q):
        """Return the cartesian velocity and the frame controls at `q`.

        The velocity has unit metric speed, it is `None` when the gradient vanishes.
        """
        x, y, th = q
        seed, dist = self.nearest_seed(q)
        if dist < 1. or self.bad.sample(x, y, th) > 0:
            dx, dy, dth = self._upwind(q)
            if dist < 1. and dx == dy == dth == 0.:
                # the stencil sits on the seed node, head straight for it
                dx, dy, dth = np.asarray(q, dtype=float) - seed
        else:
            dx, dy, dth = (g.sample(x, y, th) for g in self.grad)
        g = GroupElement(x, y, th)
        dW = Tangent.from_cartesian(dx, dy, dth, th)
        v = sr_gradient(self.metric, g, (dW.a1, dW.a2, dW.a3))
        norm = math.sqrt(metric_eval(self.metric, g, v))
        if not norm > _GMIN:
            return None, None
        u = Tangent(-v.a1/norm, -v.a2/norm, -v.a3/norm)
        return np.array(u.to_cartesian(th)), u


def backtrack(W, metric, start, step=None, stop_radius=None, max_steps=None, descent=None):
    """Track the minimizing geodesic from `start` back to the seed of `W`.

    Parameters
    ----------
    W : ScalarField3
        converged distance map (kind 'value') on a SE(2) or PT grid
    metric : MetricParams
        the metric W was computed with, its cost is sampled along the curve
    start : tuple or GroupElement
        the end point of the geodesic
    step : float, optional
        RK4 step in grid cells, default `gopts['step']`
    stop_radius : float, optional
        stop when W is below this value, default `gopts['stop_factor']` times the
        smaller one-cell metric length at the seed. The descent also stops within
        `gopts['seed_cells']` cells of a seed, where W is interpolated from the seed node.
    max_steps : int, optional
        the descent stalls after this number of steps
    descent : DescentField, optional
        the descent field of `W`, to share it between several backtracks

    Returns
    -------
    curve : GeodesicCurve
        samples from `start` to the nearest seed. Its length is the traversed
        metric length plus W at the stopping point. If the descent stalls,
        `curve.stalled` is set and the curve is partial.
    """
    step = gopts['step'] if step is None else step
    max_steps = gopts['max_steps'] if max_steps is None else max_steps
    s = W.spec
    mode = 'pt' if s.is_projective else 'se2'
    q = np.array(start.astuple() if hasattr(start, 'astuple') else start, dtype=float)
    q[2] = float(q[2]) % s.theta_period
    field_ = DescentField(W, metric) if descent is None else descent
    w = field_.value(q)
    if not np.isfinite(w):
        raise ValueError('start point {} is not reached by the distance map'.format(tuple(q)))
    if w == 0.:
        raise ValueError('start point {} is a seed'.format(tuple(q)))
    if stop_radius is None:
        seed = field_.nearest_seed(q)[0]
        C = metric.cost_at(GroupElement(*seed))
        stop_radius = gopts['stop_factor']*min(metric.xi*C*min(s.hx, s.hy), C*s.htheta)
    seed_cells = gopts['seed_cells']
    w_start, t = w, 0.
    rows = []
    stalled, reason = False, ''
    while w >= stop_radius and field_.nearest_seed(q)[1] > seed_cells:
        if len(rows) >= max_steps:
            stalled, reason = True, 'step limit reached'
            break
        k1, u = field_(q)
        if k1 is None:
            stalled, reason = True, STALL_PLATEAU
            break
        rows.append((t, q[0], q[1], q[2], u.a1, u.a2))
        dt = step / field_.cells(k1)
        for _ in range(_MAX_HALVING + 1):
            try:
                q_new = _rk4(field_, q, k1, dt)
                w_new = field_.value(q_new) if q_new is not None else np.inf
            except ValueError:
                q_new, w_new = None, np.inf
            if w_new < w:
                break
            dt /= 2
        else:
            stalled, reason = True, STALL_PLATEAU
            break
        q, w, t = q_new, w_new, t + dt
    if stalled:
        Print('Warning : backtracking {} at W = {:.6g} after {} steps'.format(reason, w, len(rows)))
        if not rows or rows[-1][0] != t:
            rows.append((t, q[0], q[1], q[2]) + tuple(rows[-1][4:] if rows else (0., 0.)))
        total = t + w
    else:
        k1, u = field_(q)
        controls = (u.a1, u.a2) if u is not None else (tuple(rows[-1][4:]) if rows else (0., 0.))
        rows.append((t, q[0], q[1], q[2]) + controls)
        total = t + w
        if w > 0.:
            seed = field_.nearest_seed(q)[0]
            rows.append((total, seed[0], seed[1], seed[2]) + controls)
    curve = GeodesicCurve(np.array(rows), total, mode, w_start, stalled, reason)
    if not stalled and curve.length_error > gopts['delta']:
        Print('Warning : curve length {:.6g} differs from W(start) {:.6g} by more than {:.0%}'.format(
            total, w_start, gopts['delta']))
    return curve


def _rk4(field_, q, k1, dt):
    """Classical RK4 step of the normalized descent, `None` if the field vanishes."""
    k2 = field_(q + 0.5*dt*k1)[0]
    if k2 is None:
        return None
    k3 = field_(q + 0.5*dt*k2)[0]
    if k3 is None:
        return None
    k4 = field_(q + dt*k3)[0]
    if k4 is None:
        return None
    return q + dt/6.*(k1 + 2*k2 + 2*k3 + k4)


def _longest_run(mask):
    """Length of the longest run of True in a boolean array."""
    edges = np.diff(np.concatenate(([0], mask.astype(np.int8), [0])))
    starts, ends = np.flatnonzero(edges == 1), np.flatnonzero(edges == -1)
    return int(np.max(ends - starts)) if starts.size else 0


def detect_cusps(c, zero_band=None):
    """Locate the sign switches of the spatial control u1.

    Parameters
    ----------
    c : GeodesicCurve
        the curve, at least 3 samples are needed to find a cusp
    zero_band : float, optional
        samples with |u1| <= zero_band count as zero. Default to
        `gopts['zero_band_factor']` times the median |u1|, floored by
        `gopts['zero_band_floor']`.

    Returns
    -------
    report : CuspReport

    Examples
    --------
    >>> t = np.linspace(0., 3*np.pi, 301)
    >>> c = GeodesicCurve(np.column_stack([t, t, 0*t, 0*t, np.cos(t), 0*t]), 3*np.pi)
    >>> rep = detect_cusps(c)
    >>> rep.count, np.allclose(rep.cusp_times, [np.pi/2, 3*np.pi/2, 5*np.pi/2], atol=1e-3)
    (3, True)

    Pure rotations have no cusp but are flagged
    >>> c = GeodesicCurve(np.column_stack([t, 0*t, 0*t, t, 0*t, 1 + 0*t]), 3*np.pi)
    >>> rep = detect_cusps(c)
    >>> rep.count, rep.degenerate
    (0, True)

    Isolated zero samples do not make a degenerate curve, a long run does
    >>> u1 = np.ones(100)
    >>> u1[::3] = 0.
    >>> detect_cusps(GeodesicCurve(np.column_stack([t[:100], t[:100], 0*u1, 0*u1, u1, 0*u1]), 1.)).degenerate
    False
    >>> u1 = np.ones(100)
    >>> u1[40:70] = 0.
    >>> detect_cusps(GeodesicCurve(np.column_stack([t[:100], t[:100], 0*u1, 0*u1, u1, 0*u1]), 1.)).degenerate
    True
    """
    u1 = c.u1
    if zero_band is None:
        med = float(np.median(np.abs(u1))) if len(u1) else 0.
        zero_band = max(gopts['zero_band_factor']*med, gopts['zero_band_floor'])
    report = CuspReport(zero_band=zero_band)
    if len(u1) == 0:
        return report
    inband = np.abs(u1) <= zero_band
    report.degenerate = bool(_longest_run(inband) > 0.2*len(u1))
    if len(u1) < 3:
        return report
    strict = np.flatnonzero(~inband)
    t = c.t
    for a, b in zip(strict[:-1], strict[1:]):
        if np.sign(u1[a]) != np.sign(u1[b]):
            ua, ub = u1[a], u1[b]
            report.cusp_times.append(float(t[a] + (t[b] - t[a])*ua/(ua - ub)))
    report.count = len(report.cusp_times)
    return report


def pt_distance(W_g0, W_g0pi, g1):
    """Projective distance from the two antipodal SE(2) distance maps.

    It is the minimum over the four antipodal assignments of the end points.

    Parameters
    ----------
    W_g0, W_g0pi : ScalarField3
        SE(2) distance maps from g0 and from g0 ⊙ (0, 0, pi)
    g1 : GroupElement
        the end point
    """
    g1 = g1 if isinstance(g1, GroupElement) else GroupElement(*g1)
    return min(W.sample(g.x, g.y, g.theta) for W in (W_g0, W_g0pi) for g in (g1, antipode(g1)))


def compare_modes(cost_2pi, metric, p0, p1, tol=None, scheme=None):
    """Track the geodesic between `p0` and `p1` on SE(2) and on the projective line bundle.

    The SE(2) side solves from p0 and from its antipode and tracks from p1 and
    from its antipode, which covers the four orientation assignments. The PT side
    solves once on the folded cost.

    Parameters
    ----------
    cost_2pi : ScalarField3
        pi-symmetric cost on a 2pi grid
    metric : MetricParams
        xi and eps (its cost is replaced)
    p0, p1 : tuple or GroupElement
        the end points with orientations
    tol : float, optional
        eikonal tolerance
    scheme : string, optional
        eikonal solver

    Returns
    -------
    record : dict
        the four SE(2) branches (lengths, cusp counts), the PT branch, the
        four-way distance and the `consistent` flag
        |L_pt - min L_se2| <= 3 h max(C).
    curves : dict
        the tracked curves, keys 'pt' and the assignment labels

    Examples
    --------
    On the uniform cost the projective length is the shortest of the four assignments
    >>> spec = GridSpec(25, 25, 16, -3., 3., -3., 3., 2*np.pi)
    >>> record, curves = compare_modes(ScalarField3.constant(spec, 1.), MetricParams(1., 0.1),
    ...                                (0., 0., 0.), (2., 0.5, 0.3))
    >>> record['consistent'], sorted(curves)
    (True, ['p0+pi->p1', 'p0+pi->p1+pi', 'p0->p1', 'p0->p1+pi', 'pt'])
    >>> abs(record['pt_distance'] - record['min_se2_length']) <= record['tolerance']
    True
    """
    p0 = p0 if isinstance(p0, GroupElement) else GroupElement(*p0)
    p1 = p1 if isinstance(p1, GroupElement) else GroupElement(*p1)
    cost_pt = fold_to_projective(cost_2pi)
    m2 = metric.with_cost(cost_2pi)
    maps = {}
    for label, g0 in (('p0', p0), ('p0+pi', antipode(p0))):
        maps[label], _ = solve(EikonalProblem(cost_2pi, m2, [g0], 'se2'), tol, scheme=scheme)
    branches, curves = [], {}
    for l0, W in maps.items():
        for l1, g1 in (('p1', p1), ('p1+pi', antipode(p1))):
            label = '{}->{}'.format(l0, l1)
            curve = backtrack(W, m2, g1)
            cusps = detect_cusps(curve)
            curves[label] = curve
            branches.append({'assignment': label, 'length': curve.total_length,
                             'cusps': cusps.count, 'degenerate': cusps.degenerate,
                             'stalled': curve.stalled})
    mpt = metric.with_cost(cost_pt)
    W_pt, _ = solve(EikonalProblem(cost_pt, mpt, [project(p0)], 'pt'), tol, scheme=scheme)
    curve = backtrack(W_pt, mpt, project(p1).astuple())
    cusps = detect_cusps(curve)
    curves['pt'] = curve
    best = min(branches, key=lambda b: b['length'])
    s = cost_2pi.spec
    tolerance = 3*s.largest_spacing*float(np.max(cost_2pi.data))*max(metric.xi, 1.)
    record = {'se2': branches,
              'pt': {'length': curve.total_length, 'cusps': cusps.count,
                     'degenerate': cusps.degenerate, 'stalled': curve.stalled},
              'min_se2_length': best['length'], 'min_se2_assignment': best['assignment'],
              'pt_distance': pt_distance(maps['p0'], maps['p0+pi'], p1),
              'tolerance': tolerance}
    record['consistent'] = bool(abs(curve.total_length - best['length']) <= tolerance)
    if not record['consistent']:
        Print('Warning : PT length {:.6g} differs from the SE(2) minimum {:.6g} by more than {:.3g}'.format(
            curve.total_length, best['length'], tolerance))
    return record, curves
