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
##Compiled kernels of the eikonal solvers

The node update solves the upwind discretization of

    (A1W)^2/xi^2 + (A2W)^2 + eps^2 (A3W)^2/xi^2 = C^2

with differences taken along the frame directions. The A2 neighbours are the
exact theta-adjacent nodes. The A1 and A3 neighbours are bilinear samples of the
same orientation slab at one spatial step. When such a sample uses the updated
node itself, its weight is eliminated: the neighbour becomes the average of the
other corners and the step is stretched accordingly.

All arrays are (ntheta, ny, nx) C-ordered, x is the innermost loop.
"""
import math

import numpy as np
from numba import njit, prange

INF = np.inf
# corner weights below this value are ignored
_WMIN = 1e-14
# snapping tolerance in cells
_SNAP = 1e-9


@njit(cache=True)
def _spatial_neighbour(W, k, j, i, ox, oy, hx, hy):
    """Bilinear sample of slab `k` at the offset (ox, oy) of node (i, j).

    Returns the neighbour value without the self weight and the remaining
    weight. The value is inf if the point leaves the box, touches an unreached
    node or only sees the node itself.
    """
    ny = W.shape[1]
    nx = W.shape[2]
    u = i + ox / hx
    v = j + oy / hy
    ru = math.floor(u + 0.5)
    if abs(u - ru) < _SNAP:
        u = ru
    rv = math.floor(v + 0.5)
    if abs(v - rv) < _SNAP:
        v = rv
    if u < 0. or u > nx - 1 or v < 0. or v > ny - 1:
        return INF, 0.
    i0 = int(math.floor(u))
    if i0 > nx - 2:
        i0 = nx - 2
    j0 = int(math.floor(v))
    if j0 > ny - 2:
        j0 = ny - 2
    fu = u - i0
    fv = v - j0
    acc = 0.
    wsum = 0.
    for c in range(4):
        di = c & 1
        dj = c >> 1
        wu = fu if di == 1 else 1. - fu
        wv = fv if dj == 1 else 1. - fv
        w = wu * wv
        if w <= _WMIN:
            continue
        ci = i0 + di
        cj = j0 + dj
        if ci == i and cj == j:
            continue
        val = W[k, cj, ci]
        if val == INF:
            return INF, 0.
        acc += w * val
        wsum += w
    if wsum <= 1e-12:
        return INF, 0.
    return acc / wsum, wsum


@njit(cache=True)
def _root(A, B, Q):
    disc = B*B - 4.*A*Q
    if disc < 0.:
        disc = 0.
    return (-B + math.sqrt(disc)) / (2.*A)


@njit(cache=True)
def _sorted_root(n1, a1, n2, a2, n3, a3, C2):
    """Solve sum_m a_m (W - n_m)_+^2 = C2 for W.

    Inactive terms have n = inf. The unknown is shifted by the smallest
    neighbour to avoid cancellations.
    """
    if n2 < n1:
        n1, n2 = n2, n1
        a1, a2 = a2, a1
    if n3 < n2:
        n2, n3 = n3, n2
        a2, a3 = a3, a2
    if n2 < n1:
        n1, n2 = n2, n1
        a1, a2 = a2, a1
    if n1 == INF:
        return INF
    # w = W - n1, the thresholds become d2, d3
    A = a1
    B = 0.
    Q = -C2
    r = _root(A, B, Q)
    if n2 == INF:
        return n1 + r
    d2 = n2 - n1
    if r <= d2:
        return n1 + r
    A += a2
    B += -2.*a2*d2
    Q += a2*d2*d2
    r = _root(A, B, Q)
    if n3 == INF:
        return n1 + r
    d3 = n3 - n1
    if r <= d3:
        return n1 + r
    A += a3
    B += -2.*a3*d3
    Q += a3*d3*d3
    return n1 + _root(A, B, Q)


@njit(cache=True)
def _neighbours(W, k, j, i, c, s, hs, hx, hy):
    """The four spatial neighbours (+A1, -A1, +A3, -A3) and their weights."""
    v1p, w1p = _spatial_neighbour(W, k, j, i, hs*c, hs*s, hx, hy)
    v1m, w1m = _spatial_neighbour(W, k, j, i, -hs*c, -hs*s, hx, hy)
    v3p, w3p = _spatial_neighbour(W, k, j, i, -hs*s, hs*c, hx, hy)
    v3m, w3m = _spatial_neighbour(W, k, j, i, hs*s, -hs*c, hx, hy)
    return v1p, w1p, v1m, w1m, v3p, w3p, v3m, w3m


@njit(cache=True)
def node_update(W, cost, k, j, i, c, s, hx, hy, ht, hs, g1, g2, g3):
    """Upwind solution at node (i, j, k) from its current neighbours."""
    nt = W.shape[0]
    C = cost[k, j, i]
    C2 = C*C
    na = W[(k + 1) % nt, j, i]
    nb = W[(k - 1) % nt, j, i]
    n2 = na if na < nb else nb
    a2 = g2 / (ht*ht)
    v1p, w1p, v1m, w1m, v3p, w3p, v3m, w3m = _neighbours(W, k, j, i, c, s, hs, hx, hy)
    h2 = hs*hs
    best = INF
    for side in range(4):
        if side & 1:
            n1 = v1m
            a1 = g1*w1m*w1m/h2
        else:
            n1 = v1p
            a1 = g1*w1p*w1p/h2
        if side & 2:
            n3 = v3m
            a3 = g3*w3m*w3m/h2
        else:
            n3 = v3p
            a3 = g3*w3p*w3p/h2
        r = _sorted_root(n1, a1, n2, a2, n3, a3, C2)
        if r < best:
            best = r
    return best


@njit(cache=True)
def gauss_seidel_cycle(W, cost, seeds, cth, sth, hx, hy, ht, hs, g1, g2, g3):
    """Run the 8 sweep orderings once, in place."""
    nt, ny, nx = W.shape
    for sweep in range(8):
        sk = 1 - 2*(sweep & 1)
        sj = 1 - 2*((sweep >> 1) & 1)
        si = 1 - 2*((sweep >> 2) & 1)
        for kk in range(nt):
            k = kk if sk > 0 else nt - 1 - kk
            c = cth[k]
            s = sth[k]
            for jj in range(ny):
                j = jj if sj > 0 else ny - 1 - jj
                for ii in range(nx):
                    i = ii if si > 0 else nx - 1 - ii
                    if seeds[k, j, i]:
                        continue
                    new = node_update(W, cost, k, j, i, c, s, hx, hy, ht, hs, g1, g2, g3)
                    if new < W[k, j, i]:
                        W[k, j, i] = new


@njit(cache=True, parallel=True)
def jacobi_pass(W, Wnew, cost, seeds, cth, sth, hx, hy, ht, hs, g1, g2, g3):
    """One Jacobi pass from `W` into `Wnew`, parallel over the orientation slabs."""
    nt, ny, nx = W.shape
    for k in prange(nt):
        c = cth[k]
        s = sth[k]
        for j in range(ny):
            for i in range(nx):
                old = W[k, j, i]
                Wnew[k, j, i] = old
                if seeds[k, j, i]:
                    continue
                new = node_update(W, cost, k, j, i, c, s, hx, hy, ht, hs, g1, g2, g3)
                if new < old:
                    Wnew[k, j, i] = new


@njit(cache=True)
def _upwind_slope(w, n, scale):
    if n == INF:
        return 0.
    d = (w - n)*scale
    return d if d > 0. else 0.


@njit(cache=True)
def residual_kernel(W, cost, seeds, cth, sth, hx, hy, ht, hs, g1, g2, g3, out):
    """Relative upwind Hamiltonian residual |H - C^2|/C^2 at every node.

    Seeds get 0, unreached nodes get inf.
    """
    nt, ny, nx = W.shape
    for k in range(nt):
        c = cth[k]
        s = sth[k]
        for j in range(ny):
            for i in range(nx):
                if seeds[k, j, i]:
                    out[k, j, i] = 0.
                    continue
                w = W[k, j, i]
                if w == INF:
                    out[k, j, i] = INF
                    continue
                v1p, w1p, v1m, w1m, v3p, w3p, v3m, w3m = _neighbours(W, k, j, i, c, s, hs, hx, hy)
                D1 = max(_upwind_slope(w, v1p, w1p/hs), _upwind_slope(w, v1m, w1m/hs))
                D2 = max(_upwind_slope(w, W[(k + 1) % nt, j, i], 1./ht),
                         _upwind_slope(w, W[(k - 1) % nt, j, i], 1./ht))
                D3 = max(_upwind_slope(w, v3p, w3p/hs), _upwind_slope(w, v3m, w3m/hs))
                H = g1*D1*D1 + g2*D2*D2 + g3*D3*D3
                C2 = cost[k, j, i]**2
                out[k, j, i] = abs(H - C2)/C2
