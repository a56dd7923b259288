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
This file is used to set the default values of cuspless options. They are read at
call time by every function whose keyword argument is left to `None`, so updating
`gopts` changes the behaviour globally.

  1. The cost defaults (`lambda`, `p`, `xi`) are those of the vessel tracking
  experiments on retinal patches. `c_min` must stay below 1/(1+lambda).
  2. `eps` relaxes the sub-Riemannian metric. Smaller values sharpen the geodesics
  but slow the convergence of the sweeps.
  3. `tol_factor` is multiplied by the metric diameter of the domain to get the
  default eikonal tolerance.
"""

gopts = {'xi': 0.01,                # spatial anisotropy of the metric
         'eps': 0.1,                # riemannian relaxation of the A3 direction
         'lambda': 100.,            # cost contrast
         'p': 3.,                   # cost exponent
         'c_min': 1e-3,             # cost floor
         'ntheta': 32,              # number of orientations on PT grids
         'sigma_long': 3.,          # filter scale along the orientation [px]
         'sigma_short': 1.,         # filter scale across the orientation [px]
         'sigma_a3': 2.,            # scale of the A3 vesselness derivative [px]
         'tol_factor': 1e-8,        # eikonal tolerance relative to the domain diameter
         'max_iter': 200,           # maximum number of sweep cycles
         'scheme': 'gauss-seidel',  # eikonal solver, see `eikonal._SOLVER_DICT`
         'threads': 1,              # numba threads used by the jacobi solver
         'step': 0.4,               # backtracking step [cell]
         'delta': 0.02,             # relative length tolerance of the tracked curves
         'stop_factor': 1.5,        # stop radius in one-cell metric lengths
         'seed_cells': 1.,          # backtracking ends this close to a seed [cell]
         'zero_band_factor': 0.05,  # cusp zero band relative to median |u1|
         'zero_band_floor': 1e-9,   # absolute floor of the zero band
         'max_steps': 20000,        # maximum number of backtracking steps
         'band_factor': 1.5,        # sphere band in grid steps
         'cluster_factor': 4.,      # multiplicity clustering tolerance in grid steps
         'n_perturb': 14,           # number of perturbed probes
         'schema_version': 1,       # version of the json reports
         'float_fmt': '.17g',       # csv and stdout float format
         'verbose': True,           # print progress on stderr
         }
