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
Development of the Maxwell set of the projective spheres with the radius.

For the uniform cost, points of the projective line bundle reached by two
minimizers appear at R = pi/2, when the two lifts g and g ⊙ (0, 0, pi) of a
point are at the same SE(2) distance from the identity. This antipodal stratum
M2 grows with R, and beyond R ~ pi the slab theta = 0 starts to meet it, which
is used as a proxy of the stratum M3.

Description
------------
One SE(2) solve from the identity on a 61x61x64 grid of [-4.5, 4.5]^2 feeds
every probe: M2 is read on the SE(2) map, the multiplicities are counted on
the folded projective map.

Examples
--------
>>> import numpy as np
>>> W, metric = myMain()  # doctest: +ELLIPSIS
> SE(2) solve : ... cycles, converged True
>>> h = W.spec.largest_spacing

No antipodal Maxwell point below pi/2, some between pi/2 and 0.9 pi
>>> m2 = maxwell_m2(W)
>>> bool(np.all(m2.radii >= np.pi/2 - 5*h))
True
>>> onset = maxwell_m2(W, radius_range=(np.pi/2 + 5*h, 0.9*np.pi))
>>> len(onset) > 0
True

Two minimizers reach an M2 point close to 0.6 pi
>>> q = onset.points[onset.near(0.6*np.pi, np.pi)[0]]
>>> multiplicity_probe(fold_to_projective(W), q, metric=metric) >= 2
True

The M2 points are mapped on M2 points by the reflection (x, y, theta) -> (x, -y, -theta)
>>> reflection_overlap(m2, W.spec) >= 0.9
True

The smallest M2 radius gets closer to pi/2 when the grid is refined
>>> errors = onset_errors(W)  # doctest: +ELLIPSIS
> SE(2) solve : ... cycles, converged True
> SE(2) solve : ... cycles, converged True
>>> errors[-1] <= errors[0]
True

Stages of the spheres: one minimizer at 0.4 pi, two at 0.75 pi, and at 1.2 pi
both M2 and the M3 proxy are present
>>> rows = stage_report(W, [0.4*np.pi, 0.75*np.pi, 1.2*np.pi], metric)
>>> [(r['m2_present'], r['max_nu']) for r in rows[:2]]
[(False, 1), (True, 2)]
>>> rows[2]['m2_present'], rows[2]['m3_proxy']
(True, True)

Cuspless reachable set, backward motions become reachable through the reflection
>>> pred = MinimizerCusplessPredicate(W, metric)
>>> pred
Instance of MinimizerCusplessPredicate class, xi=1.0, eps=0.1.
>>> pred(GroupElement(2., 0., 0.)), pred(GroupElement(-2., 0., 0.))
(True, False)
>>> reachable_union(pred, ProjectivePoint(-2., 0., 0.))
True
"""
import numpy as np

from cuspless.fields import GridSpec, ScalarField3, fold_to_projective
from cuspless.geometry import IDENTITY, GroupElement, MetricParams, ProjectivePoint
from cuspless.eikonal import EikonalProblem, solve
from cuspless.maxwell import (maxwell_m2, multiplicity_probe, stage_report, reachable_union,
                              extract_sphere, MinimizerCusplessPredicate)


def myMain(n=61, ntheta=64, half_width=4.5, eps=0.1):
    """Solve the uniform cost problem from the identity on SE(2).

    Parameters
    ----------
    n : int
        number of nodes along x and y
    ntheta : int
        number of orientations on [0, 2pi)
    half_width : float
        the domain is [-half_width, half_width]^2
    eps : float
        relaxation of the metric

    Returns
    -------
    W : ScalarField3
        the SE(2) distance map
    metric : MetricParams
        the metric used
    """
    spec = GridSpec(n, n, ntheta, -half_width, half_width, -half_width, half_width, 2*np.pi)
    metric = MetricParams(1., eps)
    W, rep = solve(EikonalProblem(ScalarField3.constant(spec, 1.), metric, [IDENTITY], 'se2'))
    print('> SE(2) solve : {} cycles, converged {}'.format(rep.iterations, rep.converged))
    return W, metric


def reflection_overlap(m2, s):
    """Share of the M2 nodes whose image by (x, y, theta) -> (x, -y, -theta) is an M2 node."""
    half = s.ntheta // 2

    def node(x, y, theta):
        return (int(round((x - s.x_min)/s.hx)), int(round((y - s.y_min)/s.hy)),
                int(round((theta % np.pi)/s.htheta)) % half)

    nodes = {node(p.x, p.y, p.theta) for p in m2.points}
    mirrored = {node(p.x, -p.y, -p.theta) for p in m2.points}
    return len(nodes & mirrored) / max(len(nodes), 1)


def onset_errors(W, grids=((21, 16), (31, 32))):
    """Gap between the smallest M2 radius and pi/2 on coarser grids, then on `W`."""
    maps = [myMain(n, ntheta)[0] for n, ntheta in grids] + [W]
    return [float(abs(np.min(maxwell_m2(Wi).radii) - np.pi/2)) for Wi in maps]


if __name__ == '__main__':
    """Plot the projective spheres with their M2 points and print the stage table."""
    import matplotlib.pyplot as plt
    from cuspless.plots import plot_sphere

    W, metric = myMain()
    W_pt = fold_to_projective(W)
    m2 = maxwell_m2(W)
    for R in (0.4*np.pi, 0.75*np.pi, 1.2*np.pi):
        plot_sphere(extract_sphere(W_pt, R), m2, nooutput=True)
    for row in stage_report(W, [0.4*np.pi, 0.75*np.pi, 1.2*np.pi], metric):
        print(row)
    plt.show()
