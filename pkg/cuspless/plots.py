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
"""
##Plotting helpers for tracked curves, metric spheres and distance slabs

Examples
--------
Plot a tracked straight line over the slab theta = 0 of its distance map
>>> from cuspless.fields import GridSpec, ScalarField3
>>> from cuspless.geometry import MetricParams
>>> from cuspless.eikonal import EikonalProblem, solve
>>> from cuspless.tracker import backtrack
>>> spec = GridSpec(21, 21, 16, -2., 2., -2., 2., np.pi)
>>> metric = MetricParams(1., 0.1)
>>> W, rep = solve(EikonalProblem(ScalarField3.constant(spec, 1.), metric, [(0., 0., 0.)], 'pt'))
>>> curve = backtrack(W, metric, (1.5, 0., 0.))
>>> fig, ax = plot_curves([curve], background=W, nooutput=True)
>>> isinstance(ax, plt.Axes), len(ax.lines) >= 1
(True, True)
>>> fig, ax = plot_slab(W, 0, nooutput=True)
>>> ax.get_title()
'W at theta = 0'
>>> plt.close('all')
"""
import numpy as np
import matplotlib.pyplot as plt

from cuspless.tracker import detect_cusps


def plot_curves(curves, background=None, slab=0, labels=None, cusps=True, fig=None, nooutput=False):
    """Plot the spatial projection of geodesics, with their cusps.

    Parameters
    ----------
    curves : list
        `GeodesicCurve` instances
    background : ScalarField3 or Image, optional
        a slab of a field or an image drawn behind the curves
    slab : int
        orientation index of the background field
    labels : list, optional
        curve labels for the legend
    cusps : bool
        mark the detected cusps with red crosses
    fig : int, optional
        figure number
    nooutput : bool
        do not show the figure (tests)

    Returns
    -------
    fig : Figure
        the pyplot figure
    ax : Axes
        the pyplot axes for further plot
    """
    Fig = plt.figure(num=fig)
    ax = Fig.add_subplot(111)
    if background is not None:
        if hasattr(background, 'pixels'):
            ax.imshow(background.pixels, cmap='gray', origin='lower')
        else:
            s = background.spec
            data = np.where(np.isfinite(background.data[slab]), background.data[slab], np.nan)
            ax.imshow(data, origin='lower', cmap=plt.cm.viridis,
                      extent=(s.x_min, s.x_max, s.y_min, s.y_max))
    for n, c in enumerate(curves):
        label = labels[n] if labels else None
        ax.plot(c.x, c.y, label=label)
        if cusps:
            rep = detect_cusps(c)
            if rep.count:
                ax.plot(np.interp(rep.cusp_times, c.t, c.x), np.interp(rep.cusp_times, c.t, c.y), 'rx')
    if labels:
        ax.legend()
    ax.set_xlabel('$x$')
    ax.set_ylabel('$y$')
    ax.set_aspect('equal')
    if not nooutput:
        plt.show()
    return Fig, ax


def plot_sphere(sphere, m2=None, fig=None, nooutput=False):
    """Scatter the nodes of a metric sphere in (x, y, theta), with the M2 points nearby.

    Parameters
    ----------
    sphere : SphereSample
        the sphere nodes
    m2 : MaxwellStratumEstimate, optional
        points drawn in red when they lie in the sphere band
    fig : int, optional
        figure number
    nooutput : bool
        do not show the figure (tests)

    Returns
    -------
    fig : Figure
    ax : Axes3D
    """
    Fig = plt.figure(num=fig)
    ax = Fig.add_subplot(111, projection='3d')
    if len(sphere):
        pts = np.array([p.astuple() for p in sphere.points])
        ax.scatter(pts[:, 0], pts[:, 1], pts[:, 2], s=2, c=sphere.values, cmap=plt.cm.Spectral)
    if m2 is not None:
        idx = m2.near(sphere.radius, sphere.band)
        if len(idx):
            pts = np.array([m2.points[i].astuple() for i in idx])
            ax.scatter(pts[:, 0], pts[:, 1], pts[:, 2], s=6, color='r')
    ax.set_xlabel('$x$')
    ax.set_ylabel('$y$')
    ax.set_zlabel(r'$\theta$')
    ax.set_title('R = {:.4g} pi'.format(sphere.radius/np.pi))
    if not nooutput:
        plt.show()
    return Fig, ax


def plot_slab(W, k, fig=None, nooutput=False):
    """Contour plot of the orientation slab `k` of a distance map."""
    s = W.spec
    X, Y = np.meshgrid(s.xs, s.ys)
    data = np.where(np.isfinite(W.data[k]), W.data[k], np.nan)
    Fig = plt.figure(num=fig)
    ax = Fig.add_subplot(111)
    cs = ax.contourf(X, Y, data, 20, cmap=plt.cm.viridis)
    Fig.colorbar(cs, ax=ax)
    ax.set_title('W at theta = {:.4g}'.format(s.thetas[k]))
    ax.set_aspect('equal')
    if not nooutput:
        plt.show()
    return Fig, ax
