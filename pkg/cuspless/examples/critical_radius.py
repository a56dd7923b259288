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
Critical radius of the projective spheres and accuracy of the elliptic toolbox.

The Maxwell stratification of the spheres S(R) of the projective line bundle
changes at R~ ~ 1.11545 pi, the solution of a two-equation system in the moduli
(k1, k2). This script solves the system and checks every elliptic building block
it needs against independent oracles: adaptive quadrature for the integrals and
the theta series for the Jacobi functions.

Description
------------
The first equation fixes k1 through K(k1) = k2 p1(k2), where p1(k2) is the first
positive root of cn(p)(E(p) - p) - dn(p) sn(p). The second equation is scanned in
k2 on a 0.01 grid, bracketed and refined by bisection.

Examples
--------
>>> import time
>>> start = time.perf_counter()
>>> sol = myMain()  # doctest: +ELLIPSIS
> Rtilde = ... pi (k1 = ..., k2 = ...)
>>> elapsed = time.perf_counter() - start
>>> 1.11445 <= sol.ratio <= 1.11645
True
>>> max(abs(r) for r in sol.residuals) <= 1e-10, elapsed < 1.
(True, True)
>>> abs(sol.Rtilde - 2*ellip_K(sol.k1)) < 1e-12
True

Elliptic functions against their oracles on 100 random (u, k)
>>> errors = oracle_errors(100)
>>> all(e <= 1e-10 for e in errors.values())
True
>>> sorted(errors)
['E', 'E_incomplete', 'K', 'cn', 'dn', 'sn']

Jacobi identities on 1000 random points
>>> bool(identity_error(1000) <= 1e-12)
True
"""
import math

import numpy as np
from scipy.integrate import quad

from cuspless.elliptic import (ellip_K, ellip_E, ellip_E_incomplete, jacobi, theta_jacobi,
                               solve_rtilde)


def _relerr(a, b):
    return abs(a - b) / max(abs(b), 1e-300) if b != 0 else abs(a)


def oracle_errors(n=100, seed=0):
    """Largest relative errors of the elliptic functions on `n` random points.

    K, E and the incomplete E are checked against `scipy.integrate.quad`, sn,
    cn and dn against the theta series.

    Returns
    -------
    errors : dict
        the largest error per function
    """
    rng = np.random.default_rng(seed)
    us = rng.uniform(0.05, 3., n)
    ks = rng.uniform(0.05, 0.95, n)
    opts = {'epsabs': 1e-15, 'epsrel': 1e-14, 'limit': 200}
    errors = dict.fromkeys(('K', 'E', 'E_incomplete', 'sn', 'cn', 'dn'), 0.)
    for u, k in zip(us, ks):
        m = k*k
        K = quad(lambda t: 1/math.sqrt(1 - m*math.sin(t)**2), 0, math.pi/2, **opts)[0]
        E = quad(lambda t: math.sqrt(1 - m*math.sin(t)**2), 0, math.pi/2, **opts)[0]
        sn, cn, dn, am = jacobi(u, k)
        Ei = quad(lambda t: math.sqrt(1 - m*math.sin(t)**2), 0, am, **opts)[0]
        tsn, tcn, tdn = theta_jacobi(u, k)
        errors['K'] = max(errors['K'], _relerr(ellip_K(k), K))
        errors['E'] = max(errors['E'], _relerr(ellip_E(k), E))
        errors['E_incomplete'] = max(errors['E_incomplete'], _relerr(ellip_E_incomplete(u, k), Ei))
        # sn and cn vanish, the error is taken relative to the unit amplitude there
        errors['sn'] = max(errors['sn'], abs(sn - tsn) / max(abs(tsn), 1.))
        errors['cn'] = max(errors['cn'], abs(cn - tcn) / max(abs(tcn), 1.))
        errors['dn'] = max(errors['dn'], _relerr(dn, tdn))
    return errors


def identity_error(n=1000, seed=1):
    """Largest violation of sn^2 + cn^2 = 1 and dn^2 + k^2 sn^2 = 1."""
    rng = np.random.default_rng(seed)
    err = 0.
    for u, k in zip(rng.uniform(-20, 20, n), rng.uniform(0., 0.999, n)):
        sn, cn, dn, _ = jacobi(u, k)
        err = max(err, abs(sn*sn + cn*cn - 1.), abs(dn*dn + k*k*sn*sn - 1.))
    return err


def myMain(step=0.01):
    """Solve the critical radius system and print the solution.

    Parameters
    ----------
    step : float
        scanning step in k2

    Returns
    -------
    sol : RtildeSolution
    """
    sol = solve_rtilde(step)
    print('> Rtilde = {:.12f} = {:.8f} pi (k1 = {:.10f}, k2 = {:.10f})'.format(
        sol.Rtilde, sol.ratio, sol.k1, sol.k2))
    return sol


if __name__ == '__main__':
    """Plot the residual of the critical radius system along k2."""
    import matplotlib.pyplot as plt
    from cuspless.elliptic import rtilde_residual

    sol = myMain()
    k2 = np.linspace(0.05, 0.99, 200)
    res = [rtilde_residual(k) for k in k2]
    fig, ax = plt.subplots()
    ax.plot(k2, res, 'k-')
    ax.axhline(0., color='grey', linewidth=0.5)
    ax.axvline(sol.k2, color='r', linestyle='--')
    ax.set_xlabel('$k_2$')
    ax.set_ylabel('residual')
    plt.show()
