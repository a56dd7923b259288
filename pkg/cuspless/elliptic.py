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
##Elliptic integrals, Jacobi elliptic functions and the critical radius

Complete integrals use the arithmetic-geometric mean, the Jacobi functions the
descending Landen transformation and the incomplete integral of the second
kind the Carlson symmetric forms. All functions take the modulus $k$ (not the
parameter $m = k^2$).

The critical radius $\tilde R$ of the projective spheres solves

$$ \tilde R / 2 = K(k_1) = k_2 \, p_1(k_2), \qquad
\frac{K(k_1) - E(k_1)}{k_1 \sqrt{1 - k_2^2}} = \frac{p_1(k_2) - \mathrm{E}(p_1(k_2), k_2)}{\mathrm{dn}(p_1(k_2), k_2)},$$

where $p_1(k)$ is the first positive root of
$\mathrm{cn}(p, k)(\mathrm{E}(p, k) - p) - \mathrm{dn}(p, k)\,\mathrm{sn}(p, k)$.

Examples
--------
>>> ellip_K(0.) == np.pi/2, ellip_E(0.) == np.pi/2, ellip_E(1.)
(True, True, 1.0)
>>> sol = solve_rtilde()
>>> 1.11445 <= sol.ratio <= 1.11645
True
>>> max(abs(r) for r in sol.residuals) <= 1e-10
True
"""
import math
from dataclasses import dataclass

import numpy as np

from cuspless.utils import Print, scan_bracket, bisect_root

# AGM and Landen stopping threshold
_AGM_TOL = 1e-16
# Carlson duplication threshold, the truncation error behaves like its 6th power
_CARLSON_TOL = 1e-3
# largest modulus used to invert K
_K_MAX = 1. - 1e-15


def _check_modulus(k, allow_one=False):
    k = float(k)
    if not (0. <= k < 1. or (allow_one and k == 1.)):
        raise ValueError('modulus k must be in [0, {}, got {}'.format('1]' if allow_one else '1)', k))
    return k


@dataclass(frozen=True)
class EllipticModulus:
    """Modulus k in [0, 1) and its complement k' = sqrt(1 - k^2).

    >>> abs(EllipticModulus(0.6).complement - 0.8) < 1e-15
    True
    >>> EllipticModulus(1.)
    Traceback (most recent call last):
    ...
    ValueError: modulus k must be in [0, 1), got 1.0
    """
    k: float

    def __post_init__(self):
        object.__setattr__(self, 'k', _check_modulus(self.k))

    @property
    def complement(self):
        return math.sqrt(1. - self.k**2)


def _landen(k):
    """Descending AGM sequences (a_n, c_n) started from (1, k', k)."""
    a, b, c = 1., math.sqrt(1. - k*k), k
    A, C = [a], [c]
    for _ in range(64):
        if abs(c) <= _AGM_TOL*a:
            break
        a, b, c = 0.5*(a + b), math.sqrt(a*b), 0.5*(a - b)
        A.append(a)
        C.append(c)
    return A, C


def ellip_K(k):
    """Complete elliptic integral of the first kind.

    Examples
    --------
    >>> from scipy.integrate import quad
    >>> oracle = quad(lambda t: 1/np.sqrt(1 - 0.64*np.sin(t)**2), 0, np.pi/2, epsabs=1e-14, epsrel=1e-14)[0]
    >>> abs(ellip_K(0.8) - oracle) < 1e-10
    True
    >>> ellip_K(1.)
    Traceback (most recent call last):
    ...
    ValueError: modulus k must be in [0, 1), got 1.0
    """
    k = _check_modulus(k)
    A, _ = _landen(k)
    return math.pi / (2*A[-1])


def ellip_E(k):
    """Complete elliptic integral of the second kind, E(1) = 1.

    Examples
    --------
    >>> from scipy.integrate import quad
    >>> oracle = quad(lambda t: np.sqrt(1 - 0.64*np.sin(t)**2), 0, np.pi/2, epsabs=1e-14, epsrel=1e-14)[0]
    >>> abs(ellip_E(0.8) - oracle) < 1e-10
    True
    """
    k = _check_modulus(k, allow_one=True)
    if k == 1.:
        return 1.
    A, C = _landen(k)
    s = sum(2.**(n - 1)*c*c for n, c in enumerate(C))
    return math.pi / (2*A[-1]) * (1. - s)


def jacobi(u, k):
    """Jacobi elliptic functions (sn, cn, dn, am) of the real argument `u`.

    The amplitude is continuous in `u`, dn is computed from sn.

    Examples
    --------
    >>> jacobi(0.7, 0.) == (math.sin(0.7), math.cos(0.7), 1., 0.7)
    True
    >>> sn, cn, dn, am = jacobi(ellip_K(0.6), 0.6)
    >>> abs(sn - 1) < 1e-14, abs(cn) < 1e-14, abs(dn - 0.8) < 1e-14, abs(am - np.pi/2) < 1e-14
    (True, True, True, True)

    Identities on random points
    >>> rng = np.random.default_rng(0)
    >>> err = 0.
    >>> for u, k in zip(rng.uniform(-10, 10, 1000), rng.uniform(0, 0.999, 1000)):
    ...     sn, cn, dn, am = jacobi(u, k)
    ...     err = max(err, abs(sn**2 + cn**2 - 1), abs(dn**2 + k**2*sn**2 - 1))
    >>> bool(err <= 1e-12)
    True

    Theta series oracle
    >>> np.allclose(jacobi(1.3, 0.6)[:3], theta_jacobi(1.3, 0.6), rtol=0, atol=1e-10)
    True
    """
    k = _check_modulus(k)
    u = float(u)
    A, C = _landen(k)
    n = len(A) - 1
    phi = 2.**n * A[n] * u
    for i in range(n, 0, -1):
        phi = 0.5*(phi + math.asin(C[i]/A[i]*math.sin(phi)))
    sn, cn = math.sin(phi), math.cos(phi)
    dn = math.sqrt(max(1. - k*k*sn*sn, 0.))
    return sn, cn, dn, phi


def theta_jacobi(u, k, nterms=30):
    """Jacobi (sn, cn, dn) from the theta series, an independent check of `jacobi`."""
    k = _check_modulus(k)
    K = ellip_K(k)
    Kp = ellip_K(EllipticModulus(k).complement)
    q = math.exp(-math.pi*Kp/K)
    v = math.pi*u/(2*K)

    def thetas(z):
        t1 = 2*sum((-1)**n * q**((n + 0.5)**2) * math.sin((2*n + 1)*z) for n in range(nterms))
        t2 = 2*sum(q**((n + 0.5)**2) * math.cos((2*n + 1)*z) for n in range(nterms))
        t3 = 1 + 2*sum(q**(n*n) * math.cos(2*n*z) for n in range(1, nterms))
        t4 = 1 + 2*sum((-1)**n * q**(n*n) * math.cos(2*n*z) for n in range(1, nterms))
        return t1, t2, t3, t4

    _, t20, t30, t40 = thetas(0.)
    t1, t2, t3, t4 = thetas(v)
    return t30/t20*t1/t4, t40/t20*t2/t4, t40/t30*t3/t4


def carlson_rf(x, y, z):
    """Carlson symmetric integral R_F, at most one argument may vanish.

    Examples
    --------
    >>> abs(carlson_rf(0., 1., 2.) - 1.3110287771461) < 1e-12
    True
    """
    for _ in range(100):
        mu = (x + y + z)/3.
        X, Y, Z = 1. - x/mu, 1. - y/mu, 1. - z/mu
        if max(abs(X), abs(Y), abs(Z)) < _CARLSON_TOL:
            break
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx*(sy + sz) + sy*sz
        x, y, z = 0.25*(x + lam), 0.25*(y + lam), 0.25*(z + lam)
    e2 = X*Y - Z*Z
    e3 = X*Y*Z
    return (1. + (e2/24. - 0.1 - 3.*e3/44.)*e2 + e3/14.) / math.sqrt(mu)


def carlson_rd(x, y, z):
    """Carlson symmetric integral R_D, z > 0.

    Examples
    --------
    >>> abs(carlson_rd(0., 2., 1.) - 1.7972103521034) < 1e-12
    True
    """
    s, fac = 0., 1.
    for _ in range(100):
        mu = (x + y + 3.*z)/5.
        X, Y, Z = (mu - x)/mu, (mu - y)/mu, (mu - z)/mu
        if max(abs(X), abs(Y), abs(Z)) < _CARLSON_TOL:
            break
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx*(sy + sz) + sy*sz
        s += fac/(sz*(z + lam))
        fac *= 0.25
        x, y, z = 0.25*(x + lam), 0.25*(y + lam), 0.25*(z + lam)
    ea = X*Y
    eb = Z*Z
    ec = ea - eb
    ed = ea - 6.*eb
    ef = ed + ec + ec
    c1, c2, c3, c4 = 3./14., 1./6., 9./22., 3./26.
    s2 = ed*(-c1 + 0.25*c3*ed - 1.5*c4*Z*ef) + Z*(c2*ef + Z*(-c3*ec + Z*c4*ea))
    return 3.*s + fac*(1. + s2)/(mu*math.sqrt(mu))


def legendre_E(phi, k):
    """Incomplete integral of the second kind E(phi, k) in Legendre form, any real phi."""
    k = _check_modulus(k, allow_one=True)
    m = round(phi/math.pi)
    phi_r = phi - m*math.pi
    s, c = math.sin(phi_r), math.cos(phi_r)
    y = 1. - k*k*s*s
    val = s*carlson_rf(c*c, y, 1.) - k*k*s**3/3.*carlson_rd(c*c, y, 1.)
    return 2*m*ellip_E(k) + val if m else val


def ellip_E_incomplete(u, k):
    """Incomplete integral of the second kind in Jacobi form, E(am(u, k), k).

    Examples
    --------
    >>> ellip_E_incomplete(0., 0.4)
    0.0
    >>> abs(ellip_E_incomplete(ellip_K(0.5), 0.5) - ellip_E(0.5)) < 1e-12
    True
    >>> from scipy.integrate import quad
    >>> am = jacobi(0.9, 0.7)[3]
    >>> oracle = quad(lambda t: np.sqrt(1 - 0.49*np.sin(t)**2), 0, am, epsabs=1e-14, epsrel=1e-14)[0]
    >>> abs(ellip_E_incomplete(0.9, 0.7) - oracle) < 1e-10
    True

    Non-decreasing in u
    >>> vals = [ellip_E_incomplete(u, 0.9) for u in np.linspace(0, 12, 241)]
    >>> bool(np.all(np.diff(vals) >= 0))
    True
    """
    return legendre_E(jacobi(u, k)[3], k)


def p1_function(p, k):
    """The function cn(p)(E(p) - p) - dn(p)sn(p) whose first positive root is p1(k)."""
    sn, cn, dn, am = jacobi(p, k)
    return cn*(legendre_E(am, k) - p) - dn*sn


def p1(k):
    """First positive root of `p1_function`.

    The root is bracketed by scanning (0, 4K] with steps of K/64 and refined by
    bisection.

    Examples
    --------
    >>> all(abs(p1_function(p1(k), k)) <= 1e-10 for k in (0.3, 0.6, 0.9))
    True
    >>> ellip_K(0.8) < p1(0.8) < 2*ellip_K(0.8)
    True
    >>> abs(p1(0.5 + 1e-6) - p1(0.5)) <= 1e-3
    True
    """
    k = _check_modulus(k)
    if k == 0.:
        raise ValueError('p1 needs 0 < k < 1, got 0')
    K = ellip_K(k)
    bracket, table = scan_bracket(lambda p: p1_function(p, k), K/64, 4*K, K/64)
    if bracket is None:
        raise ValueError('root not bracketed: no sign change in (0, 4K] for k = {}'.format(k))
    return bisect_root(lambda p: p1_function(p, k), bracket)


def inverse_K(value):
    """Modulus k with K(k) = value, for value >= pi/2.

    Examples
    --------
    >>> abs(ellip_K(inverse_K(2.)) - 2.) < 1e-12
    True
    """
    if value < math.pi/2:
        raise ValueError('K(k) >= pi/2, cannot invert {}'.format(value))
    if value == math.pi/2:
        return 0.
    if value > ellip_K(_K_MAX):
        raise ValueError('K(k) = {} needs k too close to 1'.format(value))
    return bisect_root(lambda k: ellip_K(k) - value, (0., _K_MAX), xtol=1e-16)


@dataclass(frozen=True)
class RtildeSolution:
    """Solution of the critical radius system.

    Attributes
    ----------
    k1, k2 : float
        the moduli
    p1_of_k2 : float
        p1(k2)
    Rtilde : float
        the critical radius 2 K(k1)
    residuals : tuple
        residuals of the two equations
    """
    k1: float
    k2: float
    p1_of_k2: float
    Rtilde: float
    residuals: tuple

    @property
    def ratio(self):
        """Rtilde / pi."""
        return self.Rtilde / math.pi

    def asdict(self):
        return {'k1': self.k1, 'k2': self.k2, 'p1_of_k2': self.p1_of_k2, 'Rtilde': self.Rtilde,
                'Rtilde_over_pi': self.ratio, 'residuals': list(self.residuals)}


def _second_residual(k1, k2, p):
    """Residual of the second equation of the system."""
    lhs = 0. if k1 == 0. else (ellip_K(k1) - ellip_E(k1))/(k1*math.sqrt(1. - k2*k2))
    _, _, dn, am = jacobi(p, k2)
    return lhs - (p - legendre_E(am, k2))/dn


def rtilde_residual(k2):
    """Residual of the second equation once k1 is eliminated, nan where k1 is undefined."""
    p = p1(k2)
    try:
        k1 = inverse_K(k2*p)
    except ValueError:
        return float('nan')
    return _second_residual(k1, k2, p)


def solve_rtilde(step=0.01, k2_range=(0.01, 0.99)):
    """Solve the critical radius system.

    For a trial k2, k1 solves K(k1) = k2 p1(k2). The residual of the second
    equation is scanned on `k2_range` and its first sign change is refined by
    bisection.

    Parameters
    ----------
    step : float
        scanning step in k2
    k2_range : tuple
        the scanned interval

    Returns
    -------
    sol : RtildeSolution

    Examples
    --------
    The solution does not depend on the scanning step
    >>> a, b = solve_rtilde(0.01), solve_rtilde(0.0037)
    >>> abs(a.Rtilde - b.Rtilde) <= 1e-9
    True
    >>> abs(ellip_K(a.k1) - a.k2*p1(a.k2)) <= 1e-10
    True
    """
    bracket, table = scan_bracket(rtilde_residual, k2_range[0], k2_range[1], step)
    if bracket is None:
        rows = ', '.join('({:.4g}, {:.3g})'.format(x, f) for x, f in table)
        raise ValueError('system bracketing failed, scanned (k2, residual): {}'.format(rows))
    k2 = bisect_root(rtilde_residual, bracket)
    p = p1(k2)
    k1 = inverse_K(k2*p)
    K1 = ellip_K(k1)
    sol = RtildeSolution(k1, k2, p, 2*K1, (K1 - k2*p, _second_residual(k1, k2, p)))
    Print('> Rtilde = {:.12g} pi (k1 = {:.12g}, k2 = {:.12g})'.format(sol.ratio, k1, k2))
    return sol
