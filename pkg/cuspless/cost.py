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
##Data-driven cost from a grayscale image

The pipeline is

  1. `orientation_lift` : the image is lifted on a projective grid by a bank of
  oriented second-derivative-of-Gaussian filters (absolute response),
  2. `vesselness` : the lifted score is enhanced by a Gaussian second derivative
  taken along A3, i.e. across the orientation, negated, rectified and
  max-normalized,
  3. `cost_map` : $C = \max(1/(1 + \lambda V^p), c_{min})$.

Pixel (row, col) maps to the node (i=col, j=row) with unit spacing, so x = col
and y = row.

Examples
--------
>>> img = Image.from_array(np.zeros((21, 21)))
>>> prm = CostParams(ntheta=8)
>>> score, V, C = build_cost(img, prm, c_min=1e-3)
>>> float(np.max(score.data)), float(np.max(V.data)), float(np.min(C.data))
(0.0, 0.0, 1.0)
>>> C
Instance of ScalarField3 class, kind 'cost' on 21x21x8 grid (theta period pi).
"""
import re
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from cuspless.options import gopts
from cuspless.utils import Print
from cuspless.fields import GridSpec, ScalarField3

# integer token after blanks and comments of a PGM header
_TOKEN = re.compile(rb'(?:\s|#[^\n]*(?:\n|$))*(\d+)')
_MAGICS = (b'P2', b'P5')


@dataclass
class Image:
    """Grayscale image.

    Attributes
    ----------
    width, height : int
        the dimensions
    pixels : np.ndarray
        (height, width) array of values in [0, 1], row-major
    """
    width: int
    height: int
    pixels: np.ndarray

    def __post_init__(self):
        self.pixels = np.asarray(self.pixels, dtype=float)
        if self.width < 1 or self.height < 1:
            raise ValueError('image dimensions must be positive, got {}x{}'.format(self.width, self.height))
        if self.pixels.shape != (self.height, self.width):
            raise ValueError('pixels shape {} does not match {}x{}'.format(
                self.pixels.shape, self.width, self.height))
        if np.any((self.pixels < 0) | (self.pixels > 1)) or np.any(np.isnan(self.pixels)):
            raise ValueError('pixels must lie in [0, 1]')

    def __repr__(self):
        """Define the object representation."""
        return 'Instance of Image class, {}x{} pixels.'.format(self.width, self.height)

    @staticmethod
    def from_array(a):
        """Build an image from a (height, width) array of values in [0, 1]."""
        a = np.asarray(a, dtype=float)
        return Image(a.shape[1], a.shape[0], a)

    def to_pgm(self, binary=True, maxval=255):
        """Encode the image as a P5 (binary) or P2 (ascii) PGM stream.

        Examples
        --------
        >>> img = Image.from_array([[0., 1.], [0.5, 0.25]])
        >>> img.to_pgm(binary=False, maxval=4)
        b'P2\\n2 2\\n4\\n0 4\\n2 1\\n'
        >>> np.array_equal(load_pgm(img.to_pgm(maxval=4)).pixels, img.pixels)
        True
        """
        if not 0 < maxval < 65536:
            raise ValueError('maxval must be in [1, 65535], got {}'.format(maxval))
        q = np.rint(self.pixels*maxval).astype(int)
        header = '{}\n{} {}\n{}\n'.format('P5' if binary else 'P2', self.width, self.height, maxval).encode()
        if binary:
            return header + q.astype('>u2' if maxval > 255 else 'u1').tobytes()
        lines = '\n'.join(' '.join(str(v) for v in row) for row in q)
        return header + lines.encode() + b'\n'


def load_pgm(data):
    """Decode a P2 or P5 PGM stream, the pixels are scaled by 1/maxval.

    Parameters
    ----------
    data : bytes
        the file content

    Returns
    -------
    img : Image

    Examples
    --------
    >>> load_pgm(b'P2 2 2 7 0 7 0 7').pixels.tolist()
    [[0.0, 1.0], [0.0, 1.0]]
    >>> load_pgm(b'P2\\n# comment\\n2 2\\n7\\n0 7 0 7\\n').pixels.tolist()
    [[0.0, 1.0], [0.0, 1.0]]
    >>> np.array_equal(load_pgm(b'P5 2 2 7\\n\\x00\\x07\\x00\\x07').pixels, load_pgm(b'P2 2 2 7 0 7 0 7').pixels)
    True
    >>> load_pgm(b'P6 2 2 7 0 7 0 7')
    Traceback (most recent call last):
    ...
    ValueError: bad magic b'P6' at byte 0, expected P2 or P5
    >>> load_pgm(b'P5 2 2 255\\n\\x00\\x07\\x00')
    Traceback (most recent call last):
    ...
    ValueError: truncated P5 payload at byte 11: expected 4 bytes, got 3 (1 missing)
    >>> load_pgm(b'P2 2 2 0 0 0 0 0')
    Traceback (most recent call last):
    ...
    ValueError: maxval must be > 0 at byte 7, got 0
    """
    data = bytes(data)
    magic = data[:2]
    if magic not in _MAGICS:
        raise ValueError('bad magic {} at byte 0, expected P2 or P5'.format(magic))
    pos = 2
    values = []
    for name in ('width', 'height', 'maxval'):
        m = _TOKEN.match(data, pos)
        if m is None:
            raise ValueError('bad PGM header at byte {}: expected the {}'.format(pos, name))
        values.append(int(m.group(1)))
        start, pos = m.start(1), m.end()
    width, height, maxval = values
    if maxval <= 0:
        raise ValueError('maxval must be > 0 at byte {}, got {}'.format(start, maxval))
    if maxval > 65535:
        raise ValueError('maxval must be <= 65535 at byte {}, got {}'.format(start, maxval))
    if width <= 0 or height <= 0:
        raise ValueError('image dimensions must be positive, got {}x{}'.format(width, height))
    n = width*height
    if magic == b'P5':
        if pos >= len(data) or not data[pos:pos + 1].isspace():
            raise ValueError('bad PGM header at byte {}: expected one blank before the raster'.format(pos))
        pos += 1
        dtype = np.dtype('>u2' if maxval > 255 else 'u1')
        nbytes = n*dtype.itemsize
        got = len(data) - pos
        if got < nbytes:
            raise ValueError('truncated P5 payload at byte {}: expected {} bytes, got {} ({} missing)'.format(
                pos, nbytes, got, nbytes - got))
        raw = np.frombuffer(data, dtype=dtype, count=n, offset=pos).astype(float)
    else:
        tokens = data[pos:].split()
        if len(tokens) < n:
            raise ValueError('truncated P2 data at byte {}: expected {} samples, got {} ({} missing)'.format(
                len(data), n, len(tokens), n - len(tokens)))
        try:
            raw = np.array([int(t) for t in tokens[:n]], dtype=float)
        except ValueError:
            raise ValueError('bad P2 sample after byte {}'.format(pos))
    if np.any(raw > maxval):
        raise ValueError('sample above maxval {}'.format(maxval))
    return Image(width, height, (raw / maxval).reshape(height, width))


def read_pgm(filename):
    """Read a PGM file, see `load_pgm`."""
    with open(filename, 'rb') as f:
        return load_pgm(f.read())


def write_pgm(img, filename, binary=True, maxval=255):
    """Write a PGM file, see `Image.to_pgm`."""
    with open(filename, 'wb') as f:
        f.write(img.to_pgm(binary, maxval))


@dataclass
class CostParams:
    """Parameters of the cost pipeline, `None` means the `gopts` default.

    Attributes
    ----------
    lam : float
        contrast lambda > 0
    p : float
        exponent >= 1
    ntheta : int
        number of orientations on [0, pi), even and >= 4
    sigma_long, sigma_short : float
        filter scales along and across the orientation [px]
    sigma_a3 : float
        scale of the A3 derivative of the vesselness [px]

    Examples
    --------
    >>> CostParams(lam=100., p=0.5)
    Traceback (most recent call last):
    ...
    ValueError: p must be >= 1, got 0.5
    """
    lam: float = None
    p: float = None
    ntheta: int = None
    sigma_long: float = None
    sigma_short: float = None
    sigma_a3: float = None

    def __post_init__(self):
        for name, key in (('lam', 'lambda'), ('p', 'p'), ('ntheta', 'ntheta'), ('sigma_long', 'sigma_long'),
                          ('sigma_short', 'sigma_short'), ('sigma_a3', 'sigma_a3')):
            if getattr(self, name) is None:
                setattr(self, name, gopts[key])
        if not self.lam > 0:
            raise ValueError('lambda must be > 0, got {}'.format(self.lam))
        if not self.p >= 1:
            raise ValueError('p must be >= 1, got {}'.format(self.p))
        if self.ntheta < 4 or self.ntheta % 2:
            raise ValueError('ntheta must be even and >= 4, got {}'.format(self.ntheta))
        if not (self.sigma_long > 0 and self.sigma_short > 0 and self.sigma_a3 > 0):
            raise ValueError('filter scales must be > 0')


def oriented_kernel(theta, sigma_long, sigma_short):
    """Second derivative across `theta` of an anisotropic Gaussian, zero mean.

    The kernel is indexed (row, col) like the image, its half size is
    ceil(3 sigma_long).

    Examples
    --------
    >>> k = oriented_kernel(0.3, 3., 1.)
    >>> k.shape, abs(k.sum()) < 1e-12
    ((19, 19), True)
    >>> np.allclose(oriented_kernel(0.3 + np.pi, 3., 1.), k)
    True
    """
    half = int(np.ceil(3*sigma_long))
    y, x = np.mgrid[-half:half + 1, -half:half + 1].astype(float)
    c, s = np.cos(theta), np.sin(theta)
    u = c*x + s*y
    v = -s*x + c*y
    g = np.exp(-u**2/(2*sigma_long**2) - v**2/(2*sigma_short**2))
    g /= g.sum()
    k = g*(v**2/sigma_short**4 - 1./sigma_short**2)
    return k - k.mean()


def _grid(img, ntheta):
    return GridSpec(img.width, img.height, ntheta, 0., img.width - 1., 0., img.height - 1., np.pi)


def orientation_lift(img, prm):
    """Lift the image on the projective grid with the oriented filter bank.

    Parameters
    ----------
    img : Image
        the image
    prm : CostParams
        scales and number of orientations

    Returns
    -------
    score : ScalarField3
        kind 'score', the absolute filter responses, theta_k = k pi / ntheta

    Examples
    --------
    Straight bright ridge, the best orientation is the ridge angle
    >>> from cuspless.phantom import line
    >>> prm = CostParams(ntheta=16)
    >>> alpha = 3*np.pi/16
    >>> img = line(41, 41, alpha)
    >>> S = orientation_lift(img, prm)
    >>> int(np.argmax(S.data[:, 20, 20])) == 3
    True

    Rotating the image by pi rotates the score
    >>> S2 = orientation_lift(Image.from_array(img.pixels[::-1, ::-1]), prm)
    >>> np.allclose(S2.data[:, ::-1, ::-1], S.data)
    True
    """
    half = int(np.ceil(3*prm.sigma_long))
    if img.width <= 2*half + 1 or img.height <= 2*half + 1:
        raise ValueError('image too small: {}x{} pixels for a filter support of {} pixels'.format(
            img.width, img.height, 2*half + 1))
    spec = _grid(img, prm.ntheta)
    data = np.empty(spec.shape)
    for k, th in enumerate(spec.thetas):
        kern = oriented_kernel(th, prm.sigma_long, prm.sigma_short)
        data[k] = np.abs(ndimage.convolve(img.pixels, kern, mode='nearest'))
    return ScalarField3(spec, data, 'score')


def vesselness(score, sigma_a3=None):
    """Enhance the lifted score with its second derivative along A3.

    On each slab theta, the Hessian of the score is smoothed at scale `sigma_a3`
    and differentiated twice along (-sin theta, cos theta). The result is negated,
    rectified and normalized by its maximum.

    Returns
    -------
    V : ScalarField3
        kind 'score' with values in [0, 1]

    Examples
    --------
    >>> spec = GridSpec(11, 11, 4, 0., 10., 0., 10., np.pi)
    >>> float(np.max(vesselness(ScalarField3.constant(spec, 0., 'score')).data))
    0.0

    On a straight ridge at angle 0, the ridge row beats the row 3 sigma_a3 below
    >>> from cuspless.phantom import line
    >>> V = vesselness(orientation_lift(line(41, 41, 0.), CostParams(ntheta=8)), 2.)
    >>> float(np.max(V.data))
    1.0
    >>> bool(V.data[0, 20, 20] > V.data[0, 26, 20])
    True
    """
    sigma_a3 = gopts['sigma_a3'] if sigma_a3 is None else sigma_a3
    spec = score.spec
    if not spec.is_projective:
        raise ValueError('vesselness needs a pi periodic score')
    out = np.empty(spec.shape)
    for k, th in enumerate(spec.thetas):
        S = score.data[k]
        Sxx = ndimage.gaussian_filter(S, sigma_a3, order=(0, 2), mode='nearest')
        Syy = ndimage.gaussian_filter(S, sigma_a3, order=(2, 0), mode='nearest')
        Sxy = ndimage.gaussian_filter(S, sigma_a3, order=(1, 1), mode='nearest')
        c, s = np.cos(th), np.sin(th)
        out[k] = -(s*s*Sxx - 2*s*c*Sxy + c*c*Syy)
    out = np.maximum(out, 0.)
    vmax = float(np.max(out))
    if vmax > 0:
        out /= vmax
    else:
        Print('Warning : zero vesselness')
    return ScalarField3(spec, out, 'score')


def cost_map(V, prm, c_min=None):
    """Compute the cost C = max(1/(1 + lambda V^p), c_min).

    Examples
    --------
    >>> spec = GridSpec(3, 3, 4, 0., 2., 0., 2., np.pi)
    >>> prm = CostParams(lam=100., p=3.)
    >>> [float(cost_map(ScalarField3.constant(spec, v, 'score'), prm).data[0, 0, 0]) for v in (0., 1.)]
    [1.0, 0.009900990099009901]
    >>> bool(abs(cost_map(ScalarField3.constant(spec, 0.5, 'score'), prm).data[0, 0, 0] - 1/13.5) < 1e-15)
    True
    """
    c_min = gopts['c_min'] if c_min is None else c_min
    if not 0 < c_min <= 1./(1. + prm.lam):
        raise ValueError('c_min must be in (0, 1/(1+lambda)], got {}'.format(c_min))
    if np.any(V.data < 0) or np.any(V.data > 1):
        raise ValueError('vesselness must lie in [0, 1]')
    C = np.maximum(1./(1. + prm.lam*V.data**prm.p), c_min)
    return ScalarField3(V.spec, C, 'cost', c_min)


def build_cost(img, prm, c_min=None):
    """Run the full pipeline and return (score, V, C).

    Examples
    --------
    Shifting the ridge by whole pixels shifts the cheapest row
    >>> from cuspless.phantom import line
    >>> prm = CostParams(ntheta=8)
    >>> C0 = build_cost(line(41, 41, 0.), prm)[2]
    >>> C1 = build_cost(line(41, 41, 0., center=(20., 23.)), prm)[2]
    >>> [int(np.argmin(C.data[0, :, 20])) for C in (C0, C1)]
    [20, 23]
    """
    Print('> Lift {} on {} orientations...'.format(img, prm.ntheta))
    score = orientation_lift(img, prm)
    V = vesselness(score, prm.sigma_a3)
    return score, V, cost_map(V, prm, c_min)
