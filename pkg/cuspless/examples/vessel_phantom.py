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
Vessel tracking on a synthetic S-shaped vessel, SE(2) against the projective line bundle.

The S-curve phantom is a vessel whose two hook tips are both travelled toward
-x. On SE(2) the orientation of each end point must be guessed, and the
assignments opposite to the travel direction are reached only through cusps.
The projective line bundle identifies theta and theta + pi, so one solve covers
the four assignments and returns the cusp free vessel.

Description
------------
Phantom -> orientation lift -> vesselness -> cost C = 1/(1 + lambda V^p) with
lambda = 100, p = 3 -> distance maps with xi = 0.01 -> backtracking from the
second tip.

Examples
--------
>>> import numpy as np
>>> record, curves = myMain()  # doctest: +ELLIPSIS
> Cost : ... orientations, C in [...]
> Cusps : PT ..., SE(2) [...]

The projective track has no more cusps than any SE(2) assignment, and fewer than one of them
>>> se2_cusps = [b['cusps'] for b in record['se2']]
>>> all(record['pt']['cusps'] <= c for c in se2_cusps), any(record['pt']['cusps'] < c for c in se2_cusps)
(True, True)

Its length is the shortest of the four SE(2) lengths
>>> record['consistent']
True
>>> abs(record['pt_distance'] - record['min_se2_length']) <= record['tolerance']
True

One projective solve takes at most half the time of the two-seed SE(2) solve on a 128x128 image
>>> bench = speedup()  # doctest: +ELLIPSIS
> ...
>>> bench['ratio'] <= 0.5, bench['discrepancy'] <= bench['tolerance']
(True, True)
"""
import numpy as np

from cuspless.options import gopts
from cuspless.phantom import scurve
from cuspless.cost import CostParams, build_cost
from cuspless.fields import unfold_to_group
from cuspless.geometry import MetricParams
from cuspless.eikonal import bench_pt_vs_se2
from cuspless.tracker import compare_modes


def scurve_cost(width=64, height=48, radius=8., length=24., ntheta=16, lam=100., p=3.):
    """S-curve phantom and its cost on the 2pi grid.

    Returns
    -------
    img : Image
        the phantom
    cost_2pi : ScalarField3
        the pi-symmetric cost on SE(2)
    endpoints : tuple
        the hook tips (p0, p1)
    """
    img, endpoints = scurve(width, height, radius, length)
    _, _, C = build_cost(img, CostParams(lam, p, ntheta))
    print('> Cost : {} orientations, C in [{:.3g}, {:.3g}]'.format(ntheta, float(C.data.min()), float(C.data.max())))
    return img, unfold_to_group(C), endpoints


def speedup(size=128, ntheta=32):
    """Time the PT solve against the two-seed SE(2) solve on a `size` S-curve.

    Returns
    -------
    record : dict
        see `eikonal.bench_pt_vs_se2`
    """
    scale = size / 64
    _, cost_2pi, (p0, _) = scurve_cost(size, size, 8*scale, 24*scale, ntheta)
    return bench_pt_vs_se2(cost_2pi, MetricParams(gopts['xi'], gopts['eps']), seed=p0)


def myMain(xi=None, eps=None):
    """Run the S-curve comparison.

    Parameters
    ----------
    xi, eps : float, optional
        metric parameters, default from `gopts`

    Returns
    -------
    record : dict
        the comparison record, see `tracker.compare_modes`
    curves : dict
        the tracked curves
    """
    xi = gopts['xi'] if xi is None else xi
    eps = gopts['eps'] if eps is None else eps
    img, cost_2pi, (p0, p1) = scurve_cost()
    record, curves = compare_modes(cost_2pi, MetricParams(xi, eps), p0, p1)
    print('> Cusps : PT {}, SE(2) {}'.format(record['pt']['cusps'], [b['cusps'] for b in record['se2']]))
    return record, curves


if __name__ == '__main__':
    """Plot the five tracks over the phantom."""
    import matplotlib.pyplot as plt
    from cuspless.plots import plot_curves

    img, _, _ = scurve_cost()
    record, curves = myMain()
    labels = list(curves)
    plot_curves([curves[k] for k in labels], background=img, labels=labels, nooutput=True)
    plt.show()
