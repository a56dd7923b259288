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
##Numerical probes of spheres and Maxwell strata for the uniform cost

Every function works on distance maps computed from the identity with C = 1 and
xi = 1. The antipodal Maxwell stratum M2 is detected on the SE(2) distance map
$W$ as the set of points with $W(g) = W(g \odot (0, 0, \pi))$, which is the
set where the projective distance $\min(W(g), W(g \odot (0, 0, \pi)))$ has two
minimizers coming from the two lifts.

Examples
--------
The basic use of this module is

1. Solve the uniform cost problem on a 2pi grid :
 `W, rep = solve(EikonalProblem(ScalarField3.constant(spec, 1.), MetricParams(1., eps), [IDENTITY], 'se2'))`
2. Report the strata at several radii :
 `table = stage_report(W, [0.4*np.pi, 0.75*np.pi, 1.2*np.pi])`

The five clauses of the reachable set union
>>> half_space = lambda g: g.x > 0
>>> reachable_union(half_space, ProjectivePoint(-1., 0., 0.))
True
>>> never = lambda g: False
>>> reachable_union(never, ProjectivePoint(0., 0., 1.)), reachable_union(never, ProjectivePoint(1., 0., 1.))
(True, False)

Enlarging the predicate never removes a point
>>> rng = np.random.default_rng(3)
>>> small = lambda g: g.x > 1. and np.cos(g.theta) > 0.5
>>> large = lambda g: g.x > 0.
>>> pts = [ProjectivePoint(*v) for v in rng.uniform(-2., 2., (200, 3))]
>>> all(reachable_union(large, p) for p in pts if reachable_union(small, p))
True
"""
from dataclasses import dataclass, field

import numpy as np
from scipy.cluster import hierarchy

from cuspless.options import gopts
from cuspless.utils import Print, write_csv
from cuspless.geometry import GroupElement, MetricParams, ProjectivePoint
from cuspless.fields import GridSpec, ScalarField3, fold_to_projective
from cuspless.eikonal import EikonalProblem, solve
from cuspless.tracker import DescentField, backtrack, detect_cusps

_STRATA = ('M1', 'M2', 'M3')
# number of samples of the resampled curves compared by the clustering
_NRESAMPLE = 64
# a stalled curve ending this close to a seed [cell] still counts
_SEED_BALL = 2.


def _point(spec, x, y, theta):
    return ProjectivePoint(x, y, theta) if spec.is_projective else GroupElement(x, y, theta)


@dataclass
class SphereSample:
    """Grid nodes close to a level set of W.

    Attributes
    ----------
    radius : float
        the level R
    points : list
        `ProjectivePoint` on PT grids, `GroupElement` on SE(2) grids
    values : np.ndarray
        W at the points
    band : float
        |W - R| <= band at every point
    """
    radius: float
    points: list = field(default_factory=list)
    values: np.ndarray = field(default_factory=lambda: np.zeros(0))
    band: float = 0.

    def __len__(self):
        return len(self.points)

    def to_csv(self, filename):
        """Write the points in a csv file `x,y,theta,W`."""
        write_csv(filename, ('x', 'y', 'theta', 'W'),
                  ((p.x, p.y, p.theta, w) for p, w in zip(self.points, self.values)))


@dataclass
class MaxwellStratumEstimate:
    """Points of a Maxwell stratum found on the grid.

    Attributes
    ----------
    stratum : {'M1', 'M2', 'M3'}
        the stratum
    points : list
        the points
    radii : np.ndarray
        the common distance of the points
    radius_range : tuple
        the radius filter applied
    tol : float
        the equality tolerance
    """
    stratum: str
    points: list = field(default_factory=list)
    radii: np.ndarray = field(default_factory=lambda: np.zeros(0))
    radius_range: tuple = (0., np.inf)
    tol: float = 0.

    def __post_init__(self):
        if self.stratum not in _STRATA:
            raise ValueError('stratum must be one of {}, got {}'.format(_STRATA, self.stratum))

    def __len__(self):
        return len(self.points)

    def near(self, R, band):
        """Indices of the points whose radius is within `band` of `R`, closest first."""
        idx = np.flatnonzero(np.abs(self.radii - R) <= band)
        return idx[np.argsort(np.abs(self.radii[idx] - R), kind='stable')]

    def to_csv(self, filename):
        """Write the points in a csv file `x,y,theta,W`."""
        write_csv(filename, ('x', 'y', 'theta', 'W'),
                  ((p.x, p.y, p.theta, r) for p, r in zip(self.points, self.radii)))


def _default_band(spec):
    return gopts['band_factor']*spec.largest_spacing


def extract_sphere(W, R, band=None):
    """Nodes where |W - R| <= band.

    Parameters
    ----------
    W : ScalarField3
        a converged distance map
    R : float
        the radius
    band : float, optional
        default `gopts['band_factor']` times the largest grid spacing

    Returns
    -------
    sphere : SphereSample
        may be empty

    Examples
    --------
    >>> spec = GridSpec(17, 17, 8, -2., 2., -2., 2., np.pi)
    >>> W, _ = solve(EikonalProblem(ScalarField3.constant(spec, 1.), MetricParams(1., 0.1), [(0., 0., 0.)], 'pt'))

    A band thinner than one cell at R = 0 keeps the seed only
    >>> seed = extract_sphere(W, 0., band=0.5*min(spec.spacing))
    >>> len(seed), np.allclose(seed.points[0].astuple(), 0.)
    (1, True)
    >>> len(extract_sphere(W, 100.))
    0

    Spatial motion costs at least xi times the Euclidean length
    >>> sphere = extract_sphere(W, 1.)
    >>> len(sphere) > 0
    True
    >>> all(w >= np.hypot(p.x, p.y) - spec.largest_spacing for p, w in zip(sphere.points, sphere.values))
    True
    """
    s = W.spec
    band = _default_band(s) if band is None else band
    d = W.data
    mask = np.isfinite(d) & (np.abs(d - R) <= band)
    X, Y, TH = s.mesh()
    points = [_point(s, x, y, t) for x, y, t in zip(X[mask], Y[mask], TH[mask])]
    return SphereSample(R, points, d[mask].copy(), band)


def maxwell_m2(W_se2, tol=None, radius_range=None):
    """Nodes g with W(g) = W(g ⊙ (0, 0, pi)) within `tol`.

    Parameters
    ----------
    W_se2 : ScalarField3
        SE(2) distance map from the identity, uniform cost, even ntheta
    tol : float, optional
        equality tolerance, default the largest grid spacing
    radius_range : tuple, optional
        keep only the points with a radius in this range

    Returns
    -------
    m2 : MaxwellStratumEstimate
        projective points with the common value as radius
    """
    s = W_se2.spec
    if s.is_projective or s.ntheta % 2:
        raise ValueError('M2 detection needs a 2pi grid with an even number of orientations')
    tol = s.largest_spacing if tol is None else tol
    lo, hi = (0., np.inf) if radius_range is None else radius_range
    half = s.ntheta // 2
    a, b = W_se2.data[:half], W_se2.data[half:]
    radius = 0.5*(a + b)
    with np.errstate(invalid='ignore'):
        mask = (np.isfinite(a) & np.isfinite(b) & (np.abs(a - b) <= tol)
                & (radius > 0) & (radius >= lo) & (radius <= hi))
    X, Y, TH = s.mesh()
    X, Y, TH = X[:half], Y[:half], TH[:half]
    points = [ProjectivePoint(x, y, t) for x, y, t in zip(X[mask], Y[mask], TH[mask])]
    return MaxwellStratumEstimate('M2', points, radius[mask].copy(), (lo, hi), tol)


def _offsets(spec, n):
    """Face then corner offsets of one cell, then the same at two cells."""
    hx, hy, ht = spec.spacing
    face = [(sx*hx, 0., 0.) for sx in (1, -1)] + [(0., sy*hy, 0.) for sy in (1, -1)] \
        + [(0., 0., st*ht) for st in (1, -1)]
    corner = [(sx*hx, sy*hy, st*ht) for sx in (1, -1) for sy in (1, -1) for st in (1, -1)]
    base = face + corner
    out = list(base)
    scale = 2
    while len(out) < n:
        out += [(scale*a, scale*b, scale*c) for a, b, c in base]
        scale += 1
    return out[:n]


def _resample(curve):
    """Curve positions on `_NRESAMPLE` points of normalized time."""
    T = curve.total_length
    tau = np.linspace(0., 1., _NRESAMPLE)
    t = curve.t / T if T > 0 else np.linspace(0., 1., len(curve))
    return np.column_stack([np.interp(tau, t, v) for v in (curve.x, curve.y, curve.theta)])


def curve_distance(a, b, period):
    """Maximal pointwise distance of two resampled curves, orientations wrapped."""
    d = a - b
    d[:, 2] = (d[:, 2] + period/2) % period - period/2
    return float(np.max(np.sqrt(np.sum(d**2, axis=1))))


def multiplicity_probe(W, q, n_perturb=None, cluster_tol=None, metric=None):
    """Lower bound of the number of minimizers reaching `q`.

    The geodesics are backtracked from `n_perturb` points around `q` (one cell
    away on the faces then on the corners). Among the curves whose length is
    within 3 h of the shortest, the complete linkage clusters at the distance
    `cluster_tol` are counted.

    Parameters
    ----------
    W : ScalarField3
        converged distance map
    q : point
        the probed point, not a seed
    n_perturb : int, optional
        number of perturbed starts, default `gopts['n_perturb']`
    cluster_tol : float, optional
        default `gopts['cluster_factor']` times the largest spacing
    metric : MetricParams, optional
        default xi = 1 and `gopts['eps']`

    Returns
    -------
    nu : int
        the number of clusters

    Raises
    ------
    RuntimeError
        the probe is inconclusive, more backtracks stalled away from the seed
        than reached it

    Examples
    --------
    A generic point of the uniform cost map has one minimizer
    >>> spec = GridSpec(33, 33, 16, -2., 2., -2., 2., np.pi)
    >>> metric = MetricParams(1., 0.1)
    >>> W, _ = solve(EikonalProblem(ScalarField3.constant(spec, 1.), metric, [(0., 0., 0.)], 'pt'))
    >>> multiplicity_probe(W, (1.5, 0.25, 0.2), metric=metric)
    1
    """
    s = W.spec
    n_perturb = gopts['n_perturb'] if n_perturb is None else n_perturb
    cluster_tol = gopts['cluster_factor']*s.largest_spacing if cluster_tol is None else cluster_tol
    metric = MetricParams(1., gopts['eps']) if metric is None else metric
    q = q.astuple() if hasattr(q, 'astuple') else tuple(q)
    descent = DescentField(W, metric)
    curves, stalled = [], 0
    for dx, dy, dt in _offsets(s, n_perturb):
        start = (q[0] + dx, q[1] + dy, q[2] + dt)
        if not s.contains(start[0], start[1]):
            continue
        w = W.sample(*start)
        if not (np.isfinite(w) and w > 0):
            continue
        curve = backtrack(W, metric, start, descent=descent)
        if curve.stalled and descent.nearest_seed(curve.samples[-1, 1:4])[1] > _SEED_BALL:
            stalled += 1
        else:
            curves.append(curve)
    if len(curves) == 0 or stalled > len(curves):
        raise RuntimeError('probe inconclusive: {} of {} backtracks from {} stalled'.format(
            stalled, stalled + len(curves), q))
    L = np.array([c.total_length for c in curves])
    keep = [c for c, l in zip(curves, L) if l <= L.min() + 3*s.largest_spacing]
    if len(keep) == 1:
        return 1
    pts = [_resample(c) for c in keep]
    n = len(pts)
    condensed = [curve_distance(pts[i], pts[j], s.theta_period) for i in range(n) for j in range(i + 1, n)]
    Z = hierarchy.linkage(np.array(condensed), method='complete')
    labels = hierarchy.fcluster(Z, t=cluster_tol, criterion='distance')
    return int(len(set(labels)))


def stage_report(W_se2, radii, metric=None, band=None, tol=None, n_probes=3):
    """Presence of the Maxwell strata on the spheres of radius `radii`.

    For each radius the table tells if M2 points lie on the sphere, the largest
    multiplicity found by `multiplicity_probe` on a few of them (on the
    projective distance min(W(g), W(g ⊙ (0, 0, pi)))), and if the orientation
    slab theta = 0 holds equality points away from the origin, the proxy of M3.

    Parameters
    ----------
    W_se2 : ScalarField3
        uniform cost SE(2) distance map from the identity
    radii : list
        the radii
    metric : MetricParams, optional
        default xi = 1 and `gopts['eps']`
    band : float, optional
        sphere half width, default `gopts['band_factor']` times the largest spacing
    tol : float, optional
        M2 equality tolerance
    n_probes : int
        number of probed points per radius

    Returns
    -------
    table : list
        one dict per radius. `max_nu` is `None` when a probe was inconclusive
        and no other probe found two minimizers.
    """
    s = W_se2.spec
    band = _default_band(s) if band is None else band
    metric = MetricParams(1., gopts['eps']) if metric is None else metric
    m2 = maxwell_m2(W_se2, tol)
    W_pt = fold_to_projective(W_se2)
    h = s.largest_spacing
    table = []
    for R in radii:
        Print('> Stage report at R = {:.6g} pi...'.format(R/np.pi))
        idx = m2.near(R, band)
        on_slab0 = [i for i in idx if m2.points[i].theta == 0. and np.hypot(m2.points[i].x, m2.points[i].y) > 2*h]
        if len(idx):
            step = max(len(idx) // max(n_probes, 1), 1)
            probes = [m2.points[i] for i in idx[::step][:n_probes]]
        else:
            sphere = extract_sphere(W_pt, R, band)
            step = max(len(sphere) // max(n_probes, 1), 1)
            probes = sphere.points[::step][:n_probes]
        nus, inconclusive = [], 0
        for q in probes:
            try:
                nus.append(multiplicity_probe(W_pt, q, metric=metric))
            except RuntimeError as err:
                inconclusive += 1
                Print('Warning : {}'.format(err))
        # a failed probe may hide a second minimizer
        max_nu = max(nus) if nus and (max(nus) >= 2 or not inconclusive) else None
        table.append({'R': R, 'R_over_pi': R/np.pi, 'm2_present': bool(len(idx)), 'm2_count': int(len(idx)),
                      'max_nu': max_nu, 'probed': len(nus), 'inconclusive': inconclusive,
                      'm3_proxy': bool(on_slab0), 'm3_count': len(on_slab0)})
    return table


def reachable_union(pred_R, q):
    """Evaluate the five clause union of the cuspless reachable set.

    (x, y, theta) or (x, y, theta + pi) or (-x, y, -theta) or (-x, y, -theta + pi)
    satisfies `pred_R`, or x = y = 0.

    Parameters
    ----------
    pred_R : callable
        membership predicate on `GroupElement`
    q : ProjectivePoint or tuple
        the point

    Returns
    -------
    reachable : bool
    """
    x, y, th = q.astuple() if hasattr(q, 'astuple') else q
    lifts = (GroupElement(x, y, th), GroupElement(x, y, th + np.pi),
             GroupElement(-x, y, -th), GroupElement(-x, y, -th + np.pi))
    return any(bool(pred_R(g)) for g in lifts) or (x == 0 and y == 0)


class MinimizerCusplessPredicate:
    """Approximate membership in the cuspless reachable set from the identity.

    A point is accepted when the minimizer tracked on `W` reaches it with u1 > 0
    everywhere (no cusp, forward travel). Points outside the domain or not reached
    are rejected.

    Attributes
    ----------
    W : ScalarField3
        SE(2) distance map from the identity
    metric : MetricParams
        the metric of W
    """

    def __init__(self, W, metric=None):
        self.W = W
        self.metric = MetricParams(1., gopts['eps']) if metric is None else metric
        self.descent = DescentField(W, self.metric)

    def __repr__(self):
        """Define the object representation."""
        return 'Instance of MinimizerCusplessPredicate class, xi={}, eps={}.'.format(
            self.metric.xi, self.metric.eps)

    def __call__(self, g):
        s = self.W.spec
        if not s.contains(g.x, g.y):
            return False
        w = self.W.sample(g.x, g.y, g.theta)
        if not np.isfinite(w):
            return False
        if w == 0.:
            return True
        curve = backtrack(self.W, self.metric, g, descent=self.descent)
        if curve.stalled:
            return False
        forward = curve.reversed()
        rep = detect_cusps(forward)
        return rep.count == 0 and bool(np.all(forward.u1 >= -rep.zero_band))


def eps_sweep(spec, eps_values, radii, tol=None, scheme=None):
    """Repeat the stage report for several relaxations of the metric.

    Parameters
    ----------
    spec : GridSpec
        2pi grid holding the identity
    eps_values : list
        the relaxations, like [0.2, 0.1, 0.05]
    radii : list
        the radii of the stage report

    Returns
    -------
    rows : list
        one dict per eps with the stage table and the solve report
    """
    rows = []
    cost = ScalarField3.constant(spec, 1.)
    for eps in eps_values:
        metric = MetricParams(1., eps)
        W, rep = solve(EikonalProblem(cost, metric, [GroupElement(0., 0., 0.)], 'se2'), tol, scheme=scheme)
        rows.append({'eps': eps, 'solve': rep.asdict(), 'stages': stage_report(W, radii, metric)})
    return rows
