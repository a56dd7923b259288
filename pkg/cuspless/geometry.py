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
##Roto-translation group, projective quotient and sub-Riemannian metric

Elements of SE(2) are triples $(x, y, \theta)$ composed with

$$ (x, y, \theta) \odot (x', y', \theta') = (x'\cos\theta + y'\sin\theta + x,\;
   -x'\sin\theta + y'\cos\theta + y,\; \theta + \theta'). $$

The translation part is rotated by the transpose rotation. This convention is
kept everywhere (antipode, symmetries, tests) so that all the formulas of the
package stay consistent with it.

The projective line bundle identifies $(x, y, \theta)$ with $(x, y, \theta + \pi)$.
Tangent vectors are stored by their coefficients in the left-invariant frame
$A_1 = \cos\theta\,\partial_x + \sin\theta\,\partial_y$, $A_2 = \partial_\theta$,
$A_3 = -\sin\theta\,\partial_x + \cos\theta\,\partial_y$.

Examples
--------
>>> g = GroupElement(3., -2., 1.2)
>>> group_product(g, IDENTITY) == g
True
>>> h = group_product(GroupElement(0., 0., np.pi/2), GroupElement(1., 0., 0.))
>>> abs(h.x) < 1e-15, abs(h.y + 1) < 1e-15, h.theta == np.pi/2
(True, True, True)

Group axioms on random samples
>>> rng = np.random.default_rng(1)
>>> def rand_g():
...     x, y = rng.uniform(-5, 5, 2)
...     return GroupElement(x, y, rng.uniform(0, 2*np.pi))
>>> ok = []
>>> for _ in range(100):
...     a, b, c = rand_g(), rand_g(), rand_g()
...     ok.append(is_close(group_product(group_product(a, b), c),
...                        group_product(a, group_product(b, c)), 1e-12))
...     ok.append(is_close(group_product(a, group_inverse(a)), IDENTITY, 1e-12))
...     ok.append(is_close(project(antipode(a)).lift(), project(a).lift(), 1e-12))
>>> all(ok)
True
"""
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

# relative position of the upper endpoint where angles wrap to 0
_WRAP_TOL = 1e-12


def wrap_angle(theta, period=2*np.pi):
    """Normalize an angle to the half-open interval [0, period).

    Values within 1e-12 of the upper endpoint wrap to 0.

    Examples
    --------
    >>> wrap_angle(-np.pi/2) == 1.5*np.pi
    True
    >>> wrap_angle(2*np.pi - 1e-14)
    0.0
    >>> wrap_angle(np.pi, np.pi)
    0.0
    """
    t = math.fmod(float(theta), period)
    if t < 0.:
        t += period
    if period - t < _WRAP_TOL:
        t = 0.
    return t


def wrap_angles(theta, period=2*np.pi):
    """Vectorized version of `wrap_angle`."""
    t = np.mod(np.asarray(theta, dtype=float), period)
    return np.where(period - t < _WRAP_TOL, 0., t)


@dataclass(frozen=True)
class GroupElement:
    """SE(2) element with theta in [0, 2pi)."""
    x: float
    y: float
    theta: float

    def __post_init__(self):
        object.__setattr__(self, 'x', float(self.x))
        object.__setattr__(self, 'y', float(self.y))
        object.__setattr__(self, 'theta', wrap_angle(self.theta))

    def astuple(self):
        return (self.x, self.y, self.theta)


@dataclass(frozen=True)
class ProjectivePoint:
    """Point of the projective line bundle, theta in [0, pi).

    >>> q = ProjectivePoint(1., 1., np.pi + 0.2)
    >>> abs(q.theta - 0.2) < 1e-14
    True
    """
    x: float
    y: float
    theta: float

    def __post_init__(self):
        object.__setattr__(self, 'x', float(self.x))
        object.__setattr__(self, 'y', float(self.y))
        object.__setattr__(self, 'theta', wrap_angle(self.theta, np.pi))

    def astuple(self):
        return (self.x, self.y, self.theta)

    def lift(self):
        """Return the lift with theta in [0, pi)."""
        return GroupElement(self.x, self.y, self.theta)


@dataclass(frozen=True)
class Tangent:
    """Tangent vector given by its coefficients in the frame {A1, A2, A3}.

    Examples
    --------
    >>> v = Tangent(0.3, -1.2, 0.7)
    >>> w = Tangent.from_cartesian(*v.to_cartesian(2.1), 2.1)
    >>> np.allclose([w.a1, w.a2, w.a3], [0.3, -1.2, 0.7], rtol=0, atol=1e-14)
    True
    """
    a1: float
    a2: float
    a3: float

    def to_cartesian(self, theta):
        """Return the (dx, dy, dtheta) components at orientation `theta`."""
        c, s = math.cos(theta), math.sin(theta)
        return (self.a1*c - self.a3*s, self.a1*s + self.a3*c, self.a2)

    @staticmethod
    def from_cartesian(dx, dy, dtheta, theta):
        """Build the frame coefficients from Cartesian components at `theta`."""
        c, s = math.cos(theta), math.sin(theta)
        return Tangent(c*dx + s*dy, dtheta, -s*dx + c*dy)


IDENTITY = GroupElement(0., 0., 0.)
# half turn used by the antipodal map
HALF_TURN = GroupElement(0., 0., np.pi)


def is_close(g, h, tol=1e-12):
    """Compare two group elements coordinate wise, angles modulo 2pi."""
    dth = abs(g.theta - h.theta)
    dth = min(dth, 2*np.pi - dth)
    return abs(g.x - h.x) <= tol and abs(g.y - h.y) <= tol and dth <= tol


def group_product(g, h):
    """Return g ⊙ h.

    Examples
    --------
    >>> k = group_product(GroupElement(1., 2., 0.5), GroupElement(-1., 0.5, 6.))
    >>> 0 <= k.theta < 2*np.pi
    True
    """
    c, s = math.cos(g.theta), math.sin(g.theta)
    return GroupElement(h.x*c + h.y*s + g.x,
                        -h.x*s + h.y*c + g.y,
                        g.theta + h.theta)


def group_inverse(g):
    """Return the inverse of `g`.

    Examples
    --------
    >>> group_inverse(IDENTITY) == IDENTITY
    True
    >>> group_inverse(GroupElement(0., 0., 1.)).theta == 2*np.pi - 1.
    True
    >>> g = GroupElement(1., -3., 4.)
    >>> is_close(group_product(group_inverse(g), g), IDENTITY)
    True
    """
    c, s = math.cos(g.theta), math.sin(g.theta)
    return GroupElement(-(c*g.x - s*g.y), -(s*g.x + c*g.y), -g.theta)


def antipode(g):
    """Return g ⊙ (0, 0, pi).

    Examples
    --------
    >>> antipode(IDENTITY) == HALF_TURN
    True
    >>> is_close(antipode(GroupElement(1., 0., 0.)), GroupElement(1., 0., np.pi))
    True
    >>> g = GroupElement(1., 2., 0.3)
    >>> is_close(antipode(antipode(g)), g)
    True
    """
    return group_product(g, HALF_TURN)


def project(g):
    """Project a group element on the projective line bundle.

    Examples
    --------
    >>> q = project(GroupElement(1., 1., np.pi + 0.2))
    >>> (q.x, q.y), abs(q.theta - 0.2) < 1e-14
    ((1.0, 1.0), True)
    >>> project(HALF_TURN)
    ProjectivePoint(x=0.0, y=0.0, theta=0.0)
    """
    return ProjectivePoint(g.x, g.y, g.theta)


def frame_at(g):
    """Return the Cartesian (dx, dy, dtheta) components of A1, A2, A3 at `g`.

    Examples
    --------
    >>> A1, A2, A3 = frame_at(GroupElement(0., 0., np.pi/2))
    >>> np.allclose(A1, (0, 1, 0)), np.allclose(A3, (-1, 0, 0)), A2
    (True, True, (0.0, 0.0, 1.0))
    >>> th = np.random.default_rng(3).uniform(0, 2*np.pi, 100)
    >>> all(abs(np.dot(frame_at(GroupElement(0, 0, t))[0], frame_at(GroupElement(0, 0, t))[2])) < 1e-15 for t in th)
    True
    """
    c, s = math.cos(g.theta), math.sin(g.theta)
    return (c, s, 0.), (0., 0., 1.), (-s, c, 0.)


@dataclass(frozen=True)
class MetricParams:
    """Parameters of the (relaxed) sub-Riemannian metric.

    Attributes
    ----------
    xi : float
        spatial anisotropy, > 0
    eps : float
        relaxation of the lateral direction A3, 0 means strictly sub-Riemannian
    cost : ScalarField3 or float
        the cost field (kind 'cost'). A positive float stands for a uniform cost.
    """
    xi: float
    eps: float
    cost: Any = 1.

    def __post_init__(self):
        if not self.xi > 0:
            raise ValueError('xi must be > 0, got {}'.format(self.xi))
        if not self.eps >= 0:
            raise ValueError('eps must be >= 0, got {}'.format(self.eps))
        if np.isscalar(self.cost):
            if not self.cost > 0:
                raise ValueError('uniform cost must be > 0, got {}'.format(self.cost))
        else:
            if self.cost.kind != 'cost':
                raise ValueError("metric cost field must have kind 'cost', got '{}'".format(self.cost.kind))
            if not (self.cost.c_min > 0 and np.min(self.cost.data) >= self.cost.c_min):
                raise ValueError('cost samples must be >= c_min > 0')

    @property
    def uniform(self):
        return np.isscalar(self.cost)

    @property
    def max_cost(self):
        return float(self.cost) if self.uniform else float(np.max(self.cost.data))

    def cost_at(self, q):
        """Return the cost at the point `q` (any object with x, y, theta)."""
        if self.uniform:
            return float(self.cost)
        return self.cost.sample(q.x, q.y, q.theta)

    def with_cost(self, cost):
        """Return a copy of the parameters with another cost."""
        return MetricParams(self.xi, self.eps, cost)


def metric_eval(p, q, v):
    """Evaluate the squared norm of the tangent vector `v` at `q`.

    Examples
    --------
    >>> metric_eval(MetricParams(1., 0.1), IDENTITY, Tangent(0., 0., 0.))
    0.0
    >>> metric_eval(MetricParams(1., 0.3), IDENTITY, Tangent(1., 0., 0.))
    1.0
    >>> metric_eval(MetricParams(0.5, 0.1, 2.), IDENTITY, Tangent(2., 3., 0.))
    40.0
    >>> metric_eval(MetricParams(1., 0.), IDENTITY, Tangent(0., 0., 1.))
    Traceback (most recent call last):
    ...
    ValueError: vector outside distribution Δ
    """
    C = p.cost_at(q)
    if p.eps > 0:
        return C**2 * (p.xi**2 * v.a1**2 + v.a2**2 + (p.xi/p.eps)**2 * v.a3**2)
    if v.a3 != 0:
        raise ValueError('vector outside distribution Δ')
    return C**2 * (p.xi**2 * v.a1**2 + v.a2**2)


def sr_gradient(p, q, dW):
    """Return the intrinsic gradient G^{-1} dW in frame coefficients.

    Parameters
    ----------
    p : MetricParams
        the metric
    q : GroupElement
        the base point
    dW : tuple
        the frame derivatives (A1W, A2W, A3W)

    Examples
    --------
    >>> sr_gradient(MetricParams(1., 0.), IDENTITY, (1., 1., 5.))
    Tangent(a1=1.0, a2=1.0, a3=0.0)

    Check the eikonal normalization on random samples
    >>> rng = np.random.default_rng(7)
    >>> ok = []
    >>> for _ in range(100):
    ...     xi, eps, C = rng.uniform(0.1, 2., 3)
    ...     dW = rng.normal(size=3)
    ...     prm = MetricParams(xi, eps, C)
    ...     lhs = metric_eval(prm, IDENTITY, sr_gradient(prm, IDENTITY, dW))
    ...     rhs = dW[0]**2/(xi*C)**2 + dW[1]**2/C**2 + eps**2*dW[2]**2/(xi*C)**2
    ...     ok.append(abs(lhs - rhs) <= 1e-12*max(1., rhs))
    >>> all(ok)
    True
    """
    C2 = p.cost_at(q)**2
    a1 = dW[0] / (p.xi**2 * C2)
    a2 = dW[1] / C2
    a3 = p.eps**2 * dW[2] / (p.xi**2 * C2) if p.eps > 0 else 0.
    return Tangent(float(a1), float(a2), float(a3))
