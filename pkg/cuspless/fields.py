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
##Sampled scalar fields on position-orientation grids

A `GridSpec` describes a rectangular $(x, y, \theta)$ grid. The spatial axes
include both end points, the orientation axis is half-open with period $\pi$
(projective line bundle) or $2\pi$ (roto-translation group), so a PT grid has
exactly half the orientation nodes of an SE(2) grid at the same resolution.

A `ScalarField3` stores the samples in a `(ntheta, ny, nx)` C-ordered array,
i.e. x is the fastest index. Unreached values of distance maps are `np.inf`.

Fields are exchanged in the binary `SRF1` format: magic bytes `SRF1`, then
little-endian u32 nx, ny, ntheta, u8 kind, f64 x_min, x_max, y_min, y_max,
theta_period, c_min and the nx*ny*ntheta f64 samples, x-fastest.

Examples
--------
>>> spec = GridSpec(5, 4, 8, 0., 4., -1., 2., 2*np.pi)
>>> f = ScalarField3.from_function(spec, lambda X, Y, TH: X + 10*Y + 100*TH, kind='score')
>>> f
Instance of ScalarField3 class, kind 'score' on 5x4x8 grid (theta period 2pi).
>>> bool(f.sample(3., 1., spec.thetas[5]) == f.data[5, 2, 3])
True
>>> g = ScalarField3.from_bytes(f.to_bytes())
>>> np.array_equal(g.data, f.data) and g.spec == f.spec and g.kind == 'score'
True
"""
import struct
from dataclasses import dataclass, replace

import numpy as np

from cuspless.geometry import wrap_angles

# kind name and SRF1 code
KINDS = {'cost': 0, 'value': 1, 'score': 2}
_MAGIC = b'SRF1'
_HEADER = struct.Struct('<4sIIIB6d')
# tolerance (in cells) to snap coordinates to nodes or to accept border points
_SNAP = 1e-9


@dataclass(frozen=True)
class GridSpec:
    """Rectangular position-orientation grid.

    Attributes
    ----------
    nx, ny, ntheta : int
        number of nodes along each axis
    x_min, x_max, y_min, y_max : float
        spatial box, both end points are nodes
    theta_period : float
        pi or 2pi, the orientations are k*theta_period/ntheta
    """
    nx: int
    ny: int
    ntheta: int
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    theta_period: float

    def __post_init__(self):
        if self.nx < 3 or self.ny < 3 or self.ntheta < 4:
            raise ValueError('grid must have nx, ny >= 3 and ntheta >= 4, got {}x{}x{}'
                             .format(self.nx, self.ny, self.ntheta))
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise ValueError('empty spatial box')
        for period in (np.pi, 2*np.pi):
            if abs(self.theta_period - period) < 1e-12:
                object.__setattr__(self, 'theta_period', period)
                break
        else:
            raise ValueError('theta_period must be pi or 2pi, got {}'.format(self.theta_period))

    @property
    def shape(self):
        """Shape of the data arrays, (ntheta, ny, nx)."""
        return (self.ntheta, self.ny, self.nx)

    @property
    def hx(self):
        return (self.x_max - self.x_min) / (self.nx - 1)

    @property
    def hy(self):
        return (self.y_max - self.y_min) / (self.ny - 1)

    @property
    def htheta(self):
        return self.theta_period / self.ntheta

    @property
    def spacing(self):
        return (self.hx, self.hy, self.htheta)

    @property
    def largest_spacing(self):
        return max(self.spacing)

    @property
    def is_projective(self):
        return self.theta_period == np.pi

    @property
    def xs(self):
        return self.x_min + self.hx*np.arange(self.nx)

    @property
    def ys(self):
        return self.y_min + self.hy*np.arange(self.ny)

    @property
    def thetas(self):
        return self.htheta*np.arange(self.ntheta)

    def mesh(self):
        """Return the (X, Y, TH) node coordinates, each of shape `self.shape`."""
        TH, Y, X = np.meshgrid(self.thetas, self.ys, self.xs, indexing='ij')
        return X, Y, TH

    def node_coords(self, i, j, k):
        """Return the (x, y, theta) coordinates of the node (i, j, k)."""
        return (self.x_min + i*self.hx, self.y_min + j*self.hy, (k % self.ntheta)*self.htheta)

    def contains(self, x, y):
        """Check if the spatial point is inside the box (up to round-off)."""
        tx, ty = _SNAP*self.hx, _SNAP*self.hy
        return (self.x_min - tx <= x <= self.x_max + tx) and (self.y_min - ty <= y <= self.y_max + ty)

    def nearest_node(self, x, y, theta):
        """Return the index (i, j, k) of the node nearest to (x, y, theta).

        Examples
        --------
        >>> spec = GridSpec(9, 9, 8, -4., 4., -4., 4., np.pi)
        >>> spec.nearest_node(0.1, -4., np.pi - 0.01)
        (4, 0, 0)
        """
        if not self.contains(x, y):
            raise ValueError('out of domain: ({}, {}) not in [{}, {}]x[{}, {}]'.format(
                x, y, self.x_min, self.x_max, self.y_min, self.y_max))
        i = int(np.clip(np.rint((x - self.x_min)/self.hx), 0, self.nx - 1))
        j = int(np.clip(np.rint((y - self.y_min)/self.hy), 0, self.ny - 1))
        k = int(np.rint(float(wrap_angles(theta, self.theta_period))/self.htheta)) % self.ntheta
        return (i, j, k)

    def diameter(self, xi=1., cmax=1.):
        """Metric diameter of the domain used to scale the default tolerance."""
        lx, ly = self.x_max - self.x_min, self.y_max - self.y_min
        return cmax*np.sqrt(xi**2*(lx**2 + ly**2) + self.theta_period**2)

    def with_period(self, theta_period, ntheta):
        return replace(self, theta_period=theta_period, ntheta=ntheta)


class ScalarField3:
    """Sampled function on a `GridSpec`.

    Attributes
    ----------
    spec : GridSpec
        the grid
    data : np.ndarray
        the samples, shape (ntheta, ny, nx)
    kind : {'cost', 'value', 'score'}
        what the samples stand for
    c_min : float
        positive lower bound of cost fields, 0 otherwise
    """

    def __init__(self, spec, data, kind='value', c_min=0.):
        if kind not in KINDS:
            raise ValueError("kind must be one of {}, got '{}'".format(list(KINDS), kind))
        data = np.array(data, dtype=np.float64, order='C')
        if data.shape != spec.shape:
            raise ValueError('data shape {} does not match grid {}'.format(data.shape, spec.shape))
        if np.any(np.isnan(data)):
            raise ValueError('NaN samples in {} field'.format(kind))
        if kind == 'cost':
            if not c_min > 0:
                raise ValueError('cost fields need c_min > 0, got {}'.format(c_min))
            if np.min(data) < c_min or not np.all(np.isfinite(data)):
                raise ValueError('non-positive cost sample (min {} < c_min {})'.format(np.min(data), c_min))
        elif kind == 'value':
            if np.any(data < 0):
                raise ValueError('negative sample in value field')
        elif not np.all(np.isfinite(data)):
            raise ValueError('non finite sample in score field')
        self.spec = spec
        self.data = data
        self.kind = kind
        self.c_min = float(c_min) if kind == 'cost' else 0.

    def __repr__(self):
        """Define the object representation."""
        period = 'pi' if self.spec.is_projective else '2pi'
        return "Instance of ScalarField3 class, kind '{}' on {}x{}x{} grid (theta period {}).".format(
            self.kind, self.spec.nx, self.spec.ny, self.spec.ntheta, period)

    @staticmethod
    def constant(spec, value, kind='cost'):
        """Build a constant field, `c_min` is set to `value` for cost fields."""
        return ScalarField3(spec, np.full(spec.shape, float(value)), kind,
                            c_min=value if kind == 'cost' else 0.)

    @staticmethod
    def from_function(spec, fun, kind='value', c_min=0.):
        """Evaluate `fun(X, Y, TH)` at the grid nodes."""
        X, Y, TH = spec.mesh()
        return ScalarField3(spec, np.broadcast_to(fun(X, Y, TH), spec.shape), kind, c_min)

    def copy(self):
        return ScalarField3(self.spec, self.data.copy(), self.kind, self.c_min)

    def sample(self, x, y, theta):
        """Trilinear interpolation at one point, see `sample`."""
        return float(self.sample_many(np.array([x]), np.array([y]), np.array([theta]))[0])

    def sample_many(self, x, y, theta):
        """Trilinear interpolation at many points, the orientation axis wraps.

        Infinite samples propagate to the result as soon as their weight is
        positive.

        Parameters
        ----------
        x, y, theta : array_like
            coordinates of the points, same shape

        Returns
        -------
        values : np.ndarray
        """
        s = self.spec
        x, y, theta = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float), np.asarray(theta, float))
        u = _snap((x - s.x_min)/s.hx)
        v = _snap((y - s.y_min)/s.hy)
        if np.any((u < -_SNAP) | (u > s.nx - 1 + _SNAP) | (v < -_SNAP) | (v > s.ny - 1 + _SNAP)):
            raise ValueError('out of domain: point outside [{}, {}]x[{}, {}]'.format(
                s.x_min, s.x_max, s.y_min, s.y_max))
        u = np.clip(u, 0, s.nx - 1)
        v = np.clip(v, 0, s.ny - 1)
        w = _snap(wrap_angles(theta, s.theta_period)/s.htheta)
        i0 = np.minimum(np.floor(u).astype(int), s.nx - 2)
        j0 = np.minimum(np.floor(v).astype(int), s.ny - 2)
        k0 = np.floor(w).astype(int)
        fu, fv, fw = u - i0, v - j0, w - k0
        k0 = k0 % s.ntheta
        k1 = (k0 + 1) % s.ntheta
        out = np.zeros(x.shape)
        with np.errstate(invalid='ignore'):
            for kk, wk in ((k0, 1 - fw), (k1, fw)):
                for jj, wj in ((j0, 1 - fv), (j0 + 1, fv)):
                    for ii, wi in ((i0, 1 - fu), (i0 + 1, fu)):
                        wgt = wk*wj*wi
                        out += np.where(wgt > 0, wgt*self.data[kk, jj, ii], 0.)
        return out

    def to_bytes(self):
        """Serialize the field in the SRF1 format."""
        s = self.spec
        header = _HEADER.pack(_MAGIC, s.nx, s.ny, s.ntheta, KINDS[self.kind],
                              s.x_min, s.x_max, s.y_min, s.y_max, s.theta_period, self.c_min)
        return header + self.data.astype('<f8').tobytes(order='C')

    @staticmethod
    def from_bytes(buf):
        """Read a field serialized in the SRF1 format.

        Examples
        --------
        >>> ScalarField3.from_bytes(b'SRF2' + bytes(80))
        Traceback (most recent call last):
        ...
        ValueError: bad magic b'SRF2' at byte 0, expected b'SRF1'
        >>> f = ScalarField3.constant(GridSpec(3, 3, 4, 0, 1, 0, 1, np.pi), 1.)
        >>> ScalarField3.from_bytes(f.to_bytes()[:-3])
        Traceback (most recent call last):
        ...
        ValueError: truncated SRF1 payload at byte 65: expected 288 bytes, got 285
        """
        buf = bytes(buf)
        if len(buf) < 4 or buf[:4] != _MAGIC:
            raise ValueError('bad magic {} at byte 0, expected {}'.format(buf[:4], _MAGIC))
        if len(buf) < _HEADER.size:
            raise ValueError('truncated SRF1 header: expected {} bytes, got {}'.format(_HEADER.size, len(buf)))
        _, nx, ny, nt, code, x0, x1, y0, y1, period, c_min = _HEADER.unpack_from(buf)
        kinds = {v: k for k, v in KINDS.items()}
        if code not in kinds:
            raise ValueError('unknown field kind code {} at byte 16'.format(code))
        n = nx*ny*nt*8
        payload = len(buf) - _HEADER.size
        if payload < n:
            raise ValueError('truncated SRF1 payload at byte {}: expected {} bytes, got {}'.format(
                _HEADER.size, n, payload))
        if payload > n:
            raise ValueError('unexpected {} trailing bytes after SRF1 payload'.format(payload - n))
        spec = GridSpec(nx, ny, nt, x0, x1, y0, y1, period)
        data = np.frombuffer(buf, dtype='<f8', offset=_HEADER.size).reshape(spec.shape)
        return ScalarField3(spec, data.astype(np.float64), kinds[code], c_min)

    def export(self, filename):
        """Export the field in a SRF1 file.

        Parameters
        ----------
        filename: string
            file to save the data
        """
        with open(filename, 'wb') as f:
            f.write(self.to_bytes())

    @staticmethod
    def load(filename):
        """Load a SRF1 file and return a ScalarField3 instance."""
        with open(filename, 'rb') as f:
            return ScalarField3.from_bytes(f.read())


def _snap(a):
    """Snap coordinates expressed in cells to the nearest node when closer than `_SNAP`."""
    r = np.rint(a)
    return np.where(np.abs(a - r) < _SNAP, r, a)


def sample(f, q):
    """Interpolate `f` at the point `q` (any object with x, y, theta).

    Examples
    --------
    >>> spec = GridSpec(4, 4, 8, 0., 3., 0., 3., np.pi)
    >>> f = ScalarField3.from_function(spec, lambda X, Y, TH: np.cos(2*TH) + X, kind='score')
    >>> from cuspless.geometry import GroupElement
    >>> bool(sample(f, GroupElement(1., 2., spec.thetas[3])) == f.data[3, 2, 1])
    True
    >>> abs(sample(ScalarField3.constant(spec, 2.5), GroupElement(0.3, 2.9, 1.)) - 2.5) < 1e-14
    True

    Across the seam the interpolation mixes the last and the first slab
    >>> h = spec.htheta
    >>> v = sample(f, GroupElement(1., 1., np.pi - h/2))
    >>> bool(abs(v - 0.5*(f.data[-1, 1, 1] + f.data[0, 1, 1])) < 1e-14)
    True
    >>> sample(f, GroupElement(3.5, 0., 0.))
    Traceback (most recent call last):
    ...
    ValueError: out of domain: point outside [0.0, 3.0]x[0.0, 3.0]
    """
    return f.sample(q.x, q.y, q.theta)


def cartesian_derivatives(f):
    """Central differences of a field along x, y and theta.

    Spatial borders use one-sided differences, the orientation axis wraps.

    Returns
    -------
    dx, dy, dth : np.ndarray
        arrays with the shape of `f.data`
    """
    s = f.spec
    d = f.data
    with np.errstate(invalid='ignore'):
        dx = np.gradient(d, s.hx, axis=2, edge_order=1)
        dy = np.gradient(d, s.hy, axis=1, edge_order=1)
        dth = (np.roll(d, -1, axis=0) - np.roll(d, 1, axis=0)) / (2*s.htheta)
    return dx, dy, dth


def frame_derivative_fields(f):
    """Frame derivatives (A1f, A2f, A3f) at every node, see `frame_derivatives`."""
    dx, dy, dth = cartesian_derivatives(f)
    c = np.cos(f.spec.thetas)[:, None, None]
    s = np.sin(f.spec.thetas)[:, None, None]
    return c*dx + s*dy, dth, -s*dx + c*dy


def frame_derivatives(f, node):
    r"""Left-invariant frame derivatives of `f` at the node (i, j, k).

    Parameters
    ----------
    f : ScalarField3
        the field
    node : tuple
        the node index (i, j, k)

    Returns
    -------
    A1f, A2f, A3f : float

    Examples
    --------
    Linear field in x
    >>> spec = GridSpec(7, 7, 16, -1., 1., -1., 1., 2*np.pi)
    >>> f = ScalarField3.from_function(spec, lambda X, Y, TH: X, kind='score')
    >>> th = spec.thetas[3]
    >>> np.allclose(frame_derivatives(f, (3, 2, 3)), (np.cos(th), 0., -np.sin(th)))
    True

    Orientation field, away from the seam
    >>> f = ScalarField3.from_function(spec, lambda X, Y, TH: TH, kind='score')
    >>> bool(abs(frame_derivatives(f, (3, 3, 5))[1] - 1.) < 1e-12)
    True

    Second order convergence on a smooth field
    >>> errs = []
    >>> for n in (9, 17, 33, 65):
    ...     spec = GridSpec(n, n, 8, -1., 1., -1., 1., 2*np.pi)
    ...     f = ScalarField3.from_function(spec, lambda X, Y, TH: np.sin(X)*np.cos(Y), kind='score')
    ...     i, j = spec.nearest_node(0.5, 0.25, 0.)[:2]
    ...     th = spec.thetas[1]
    ...     dx, dy = np.cos(0.5)*np.cos(0.25), -np.sin(0.5)*np.sin(0.25)
    ...     A1, A2, A3 = frame_derivatives(f, (i, j, 1))
    ...     errs.append(abs(A1 - (np.cos(th)*dx + np.sin(th)*dy)) + abs(A3 - (-np.sin(th)*dx + np.cos(th)*dy)))
    >>> slopes = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    >>> bool(np.all(np.abs(slopes - 2.) < 0.2))
    True
    """
    s = f.spec
    i, j, k = node
    d = f.data

    def diff(lo, hi, h):
        return (hi - lo) / h

    if 0 < i < s.nx - 1:
        dx = diff(d[k, j, i - 1], d[k, j, i + 1], 2*s.hx)
    elif i == 0:
        dx = diff(d[k, j, 0], d[k, j, 1], s.hx)
    else:
        dx = diff(d[k, j, i - 1], d[k, j, i], s.hx)
    if 0 < j < s.ny - 1:
        dy = diff(d[k, j - 1, i], d[k, j + 1, i], 2*s.hy)
    elif j == 0:
        dy = diff(d[k, 0, i], d[k, 1, i], s.hy)
    else:
        dy = diff(d[k, j - 1, i], d[k, j, i], s.hy)
    dth = diff(d[(k - 1) % s.ntheta, j, i], d[(k + 1) % s.ntheta, j, i], 2*s.htheta)
    th = k*s.htheta
    c, sn = np.cos(th), np.sin(th)
    return (float(c*dx + sn*dy), float(dth), float(-sn*dx + c*dy))


def _check_same_grid(f, g):
    if f.spec != g.spec:
        raise ValueError('incompatible grids: {} and {}'.format(f.spec, g.spec))


def pointwise_min(f, g):
    """Sample-wise minimum of two fields on the same grid.

    Examples
    --------
    >>> spec = GridSpec(3, 3, 4, 0., 1., 0., 1., np.pi)
    >>> rng = np.random.default_rng(0)
    >>> f = ScalarField3(spec, rng.uniform(size=spec.shape))
    >>> g = ScalarField3(spec, rng.uniform(size=spec.shape))
    >>> np.array_equal(pointwise_min(f, f).data, f.data)
    True
    >>> np.array_equal(pointwise_min(f, ScalarField3.constant(spec, np.inf, 'value')).data, f.data)
    True
    >>> np.array_equal(pointwise_min(f, g).data, np.where(f.data < g.data, f.data, g.data))
    True
    >>> pointwise_min(f, ScalarField3.constant(GridSpec(3, 3, 4, 0., 2., 0., 1., np.pi), 0., 'value'))
    ... # doctest: +ELLIPSIS
    Traceback (most recent call last):
    ...
    ValueError: incompatible grids: ...
    """
    _check_same_grid(f, g)
    return ScalarField3(f.spec, np.minimum(f.data, g.data), f.kind, f.c_min)


def fold_to_projective(f):
    """Fold a 2pi periodic field onto the projective grid.

    Value fields take the minimum over the two antipodal slabs, cost and
    score fields must agree on them within 1e-9 and are restricted to [0, pi).

    Examples
    --------
    >>> spec = GridSpec(3, 3, 8, 0., 1., 0., 1., 2*np.pi)
    >>> W = ScalarField3.from_function(spec, lambda X, Y, TH: np.where(TH < np.pi, TH, 2*np.pi - TH))
    >>> F = fold_to_projective(W)
    >>> F
    Instance of ScalarField3 class, kind 'value' on 3x3x4 grid (theta period pi).
    >>> th = F.spec.thetas[:, None, None]
    >>> np.allclose(F.data, np.minimum(th, np.pi - th))
    True
    >>> np.array_equal(fold_to_projective(unfold_to_group(F)).data, F.data)
    True
    >>> C = ScalarField3.from_function(spec, lambda X, Y, TH: 2 + np.cos(TH), kind='cost', c_min=0.5)
    >>> fold_to_projective(C)
    Traceback (most recent call last):
    ...
    ValueError: not projective-compatible: antipodal slabs differ by 2
    """
    s = f.spec
    if s.is_projective or s.ntheta % 2:
        raise ValueError('folding needs a 2pi grid with an even number of orientations')
    half = s.ntheta // 2
    first, second = f.data[:half], f.data[half:]
    if f.kind == 'value':
        data = np.minimum(first, second)
    else:
        gap = float(np.max(np.abs(first - second)))
        if gap > 1e-9:
            raise ValueError('not projective-compatible: antipodal slabs differ by {:.3g}'.format(gap))
        data = first.copy()
    return ScalarField3(s.with_period(np.pi, half), data, f.kind, f.c_min)


def unfold_to_group(f):
    """Duplicate the slabs of a pi periodic field onto a 2pi grid.

    Examples
    --------
    >>> spec = GridSpec(3, 3, 4, 0., 1., 0., 1., np.pi)
    >>> C = ScalarField3.from_function(spec, lambda X, Y, TH: 1 + X + np.sin(TH)**2, kind='cost', c_min=1.)
    >>> np.array_equal(fold_to_projective(unfold_to_group(C)).data, C.data)
    True
    """
    s = f.spec
    if not s.is_projective:
        raise ValueError('unfolding needs a pi periodic field')
    data = np.concatenate([f.data, f.data], axis=0)
    return ScalarField3(s.with_period(2*np.pi, 2*s.ntheta), data, f.kind, f.c_min)


def resample(f, spec):
    """Trilinear transfer of `f` on the nodes of another grid with the same period.

    Examples
    --------
    >>> s1 = GridSpec(5, 5, 8, 0., 1., 0., 1., np.pi)
    >>> s2 = GridSpec(9, 9, 16, 0., 1., 0., 1., np.pi)
    >>> f = ScalarField3.from_function(s1, lambda X, Y, TH: 1 + 2*X - Y, kind='score')
    >>> g = resample(f, s2)
    >>> X, Y, TH = s2.mesh()
    >>> np.allclose(g.data, 1 + 2*X - Y)
    True
    """
    if spec.theta_period != f.spec.theta_period:
        raise ValueError('incompatible grids: resampling cannot change the theta period')
    X, Y, TH = spec.mesh()
    data = f.sample_many(X.ravel(), Y.ravel(), TH.ravel()).reshape(spec.shape)
    if f.kind == 'cost':
        data = np.maximum(data, f.c_min)
    return ScalarField3(spec, data, f.kind, f.c_min)


def read_srf1(filename):
    """Read a SRF1 file, see `ScalarField3.load`."""
    return ScalarField3.load(filename)


def write_srf1(f, filename):
    """Write a SRF1 file, see `ScalarField3.export`."""
    f.export(filename)
