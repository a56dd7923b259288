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
Contains helping functions (parsing, root bracketing, output formatting, ...)
"""
import sys
import csv
import json
import re

import numpy as np
from scipy import optimize

from cuspless.options import gopts

# number with an optional `pi` factor, like '0.75pi', '-pi/2' is not supported
_NUMBER_RE = re.compile(r'^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)?\s*(pi)?\s*$')


def Print(*args, **kwargs):
    """Print diagnostics on the error stream when `gopts['verbose']` is set.

    Data are written on stdout or in files, this printer is kept for
    progress messages and warnings.
    """
    if gopts['verbose']:
        print(*args, file=sys.stderr, **kwargs)


def parse_number(text):
    """Parse a real number with an optional `pi` factor.

    Parameters
    ----------
    text : string
        the number, like '1.5', '0.75pi' or 'pi'

    Returns
    -------
    value : float

    Examples
    --------
    >>> parse_number('0.5pi') == 0.5*np.pi
    True
    >>> parse_number('pi') == np.pi
    True
    >>> parse_number('-2e-1')
    -0.2
    >>> parse_number('one')
    Traceback (most recent call last):
    ...
    ValueError: cannot parse 'one' as a number
    """
    m = _NUMBER_RE.match(text)
    if m is None or (m.group(1) is None and m.group(2) is None):
        raise ValueError("cannot parse '{}' as a number".format(text))
    value = float(m.group(1)) if m.group(1) is not None else 1.
    if m.group(2):
        value *= np.pi
    return value


def parse_point(text):
    """Parse a 'x,y,theta' triple.

    Examples
    --------
    >>> parse_point('5,0,0')
    (5.0, 0.0, 0.0)
    >>> parse_point('1, 2, 0.5pi')[2] == np.pi/2
    True
    >>> parse_point('1,2')
    Traceback (most recent call last):
    ...
    ValueError: expected 'x,y,theta', got '1,2'
    """
    parts = text.split(',')
    if len(parts) != 3:
        raise ValueError("expected 'x,y,theta', got '{}'".format(text))
    return tuple(parse_number(p) for p in parts)


def parse_list(text):
    """Parse a comma separated list of numbers.

    Examples
    --------
    >>> r = parse_list('0.4pi,0.75pi,1.2pi')
    >>> np.allclose(r, [0.4*np.pi, 0.75*np.pi, 1.2*np.pi])
    True
    """
    return [parse_number(p) for p in text.split(',') if p.strip()]


def fmt(x):
    """Format a float with the output precision (17 significant digits).

    Examples
    --------
    >>> fmt(0.1)
    '0.10000000000000001'
    >>> fmt(float('inf'))
    'inf'
    """
    return format(float(x), gopts['float_fmt'])


def jsonable(obj):
    """Recursively convert numpy scalars and arrays into json compatible types.

    Non finite floats are converted to `None`.

    Examples
    --------
    >>> jsonable({'a': np.float64(1.5), 'b': np.arange(2), 'c': np.inf})
    {'a': 1.5, 'b': [0, 1], 'c': None}
    """
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj) if np.isfinite(obj) else None
    return obj


def write_json(record, filename=None):
    """Write a report with its `schema_version` in a json file or on stdout.

    Parameters
    ----------
    record : dict
        the report
    filename : string, optional
        the output file. If `None`, the report is printed on stdout.
    """
    out = {'schema_version': gopts['schema_version']}
    out.update(jsonable(record))
    text = json.dumps(out, indent=2, allow_nan=False)
    if filename is None:
        print(text)
    else:
        with open(filename, 'w') as f:
            f.write(text + '\n')
    return out


def write_csv(filename, header, rows):
    """Write rows of floats with the output precision.

    Parameters
    ----------
    filename : string
        the csv file
    header : list
        column names
    rows : iterable
        rows of numbers
    """
    with open(filename, 'w', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])


def scan_bracket(fun, a, b, step):
    """Scan `fun` from `a` to `b` and return the first interval with a sign change.

    Parameters
    ----------
    fun : callable
        scalar function
    a, b : float
        the scanned interval
    step : float
        the scanning step

    Returns
    -------
    bracket : tuple or None
        the `(lo, hi)` bracket, `None` if no sign change is found
    table : list
        the scanned `(x, fun(x))` values, for error messages

    Examples
    --------
    >>> br, table = scan_bracket(np.cos, 0.1, 3., 0.25)
    >>> br[0] < np.pi/2 < br[1]
    True
    >>> scan_bracket(np.exp, 0., 1., 0.1)[0] is None
    True
    """
    table = []
    x_prev, f_prev = None, None
    n = int(np.ceil((b - a) / step))
    for i in range(n + 1):
        x = min(a + i*step, b)
        fx = fun(x)
        table.append((x, fx))
        if not np.isfinite(fx):
            x_prev, f_prev = None, None
            continue
        if f_prev is not None and np.sign(fx) != np.sign(f_prev):
            return (x_prev, x), table
        x_prev, f_prev = x, fx
    return None, table


def bisect_root(fun, bracket, xtol=1e-14):
    """Bracketed bisection (no derivatives) in `bracket`.

    Examples
    --------
    >>> abs(bisect_root(np.cos, (1., 2.)) - np.pi/2) < 1e-13
    True
    """
    lo, hi = bracket
    return optimize.bisect(fun, lo, hi, xtol=xtol, rtol=4*np.finfo(float).eps, maxiter=400)
