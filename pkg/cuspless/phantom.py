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
Synthetic vessel images used to exercise the cost pipeline and the trackers.

Vessels are bright Gaussian ridges of width `sigma` on a black background. The
image coordinates are x = col and y = row.

Examples
--------
>>> img, (p0, p1) = scurve()
>>> img
Instance of Image class, 64x48 pixels.
>>> p0.theta == p1.theta == np.pi
True

The S-curve is invariant under the half turn about its centre on odd sized images
>>> odd, _ = scurve(65, 49)
>>> np.allclose(odd.pixels, np.rot90(odd.pixels, 2))
True
"""
import numpy as np
from scipy.spatial import cKDTree

from cuspless.geometry import GroupElement
from cuspless.cost import Image

# sampling step of the centrelines [px]
_DS = 0.05


def _ridge(width, height, points, sigma):
    """Gaussian profile of the distance to a sampled centreline."""
    y, x = np.mgrid[0:height, 0:width].astype(float)
    d, _ = cKDTree(points).query(np.column_stack([x.ravel(), y.ravel()]))
    return np.exp(-d**2/(2*sigma**2)).reshape(height, width)


def _segment(a, b):
    n = max(int(np.ceil(np.hypot(b[0] - a[0], b[1] - a[1]) / _DS)), 1)
    s = np.linspace(0., 1., n + 1)[:, None]
    return (1 - s)*np.asarray(a, float) + s*np.asarray(b, float)


def _arc(center, radius, phi0, phi1):
    n = max(int(np.ceil(abs(phi1 - phi0)*radius / _DS)), 1)
    phi = np.linspace(phi0, phi1, n + 1)
    return np.column_stack([center[0] + radius*np.cos(phi), center[1] + radius*np.sin(phi)])


def line(width, height, angle, center=None, sigma=1.5):
    """Straight ridge through `center` (default the image centre) at `angle`.

    Examples
    --------
    >>> img = line(21, 11, 0.)
    >>> bool(img.pixels[5, 3] > 0.999), bool(img.pixels[0, 3] < 0.01)
    (True, True)
    """
    cx, cy = ((width - 1)/2, (height - 1)/2) if center is None else center
    L = np.hypot(width, height)
    c, s = np.cos(angle), np.sin(angle)
    pts = _segment((cx - L*c, cy - L*s), (cx + L*c, cy + L*s))
    return Image(width, height, _ridge(width, height, pts, sigma))


def crossing(width, height, angle1=0., angle2=np.pi/2, sigma=1.5):
    """Two straight ridges crossing at the image centre.

    Examples
    --------
    The two strongest orientations of the lift at the centre are the ridge angles
    >>> from cuspless.cost import CostParams, orientation_lift
    >>> S = orientation_lift(crossing(41, 41), CostParams(ntheta=16)).data[:, 20, 20]
    >>> peaks = [k for k in range(16) if S[k] >= S[k - 1] and S[k] >= S[(k + 1) % 16]]
    >>> sorted(sorted(peaks, key=lambda k: -S[k])[:2])
    [0, 8]
    """
    a = line(width, height, angle1, sigma=sigma).pixels
    b = line(width, height, angle2, sigma=sigma).pixels
    return Image(width, height, np.maximum(a, b))


def scurve_centreline(width=64, height=48, radius=8., length=24.):
    """Centreline of the S-curve, from the lower hook tip to the upper one.

    A horizontal segment of `length` joins two semicircular hooks of `radius`,
    the right one turns toward y < 0, the left one toward y > 0.
    """
    cx, cy = float(width//2), float(height//2)
    a = (cx - length/2, cy)
    b = (cx + length/2, cy)
    left = _arc((a[0], cy + radius), radius, np.pi/2, 3*np.pi/2)
    right = _arc((b[0], cy - radius), radius, np.pi/2, -np.pi/2)
    return np.vstack([left, _segment(a, b), right])


def scurve(width=64, height=48, radius=8., length=24., sigma=1.5):
    """S-shaped vessel and the oriented end points of a cusp free travel along it.

    The vessel is travelled from the lower left hook tip to the upper right hook
    tip. At both tips the travel heads toward -x, so both orientations are pi.
    The naive assignment theta = 0 at both ends can only be reached with cusps
    on SE(2), while on the projective line bundle both are the same point.

    Returns
    -------
    img : Image
        the phantom
    endpoints : tuple
        the two `GroupElement` (p0, p1) at the hook tips
    """
    pts = scurve_centreline(width, height, radius, length)
    cx, cy = float(width//2), float(height//2)
    p0 = GroupElement(cx - length/2, cy + 2*radius, np.pi)
    p1 = GroupElement(cx + length/2, cy - 2*radius, np.pi)
    return Image(width, height, _ridge(width, height, pts, sigma)), (p0, p1)
