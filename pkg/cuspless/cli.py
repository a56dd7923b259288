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
Command line interface of cuspless.

Every stage reads and writes files (PGM images, SRF1 fields, CSV curves and
json reports), so that the full vessel tracking experiment is a short shell
script

    cuspless phantom --kind scurve --out s.pgm --endpoints ends.json
    cuspless cost --image s.pgm --out cost.srf
    cuspless solve --cost cost.srf --mode pt --seed 20,40,pi --out W.srf
    cuspless track --dist W.srf --cost cost.srf --start 44,8,pi --out curve

Diagnostics go to stderr, data to files or stdout. The exit code is 0 on
success, 1 on domain errors (bad value, missing file, solve not converged) and 2
on usage errors.

Examples
--------
>>> import os, json, tempfile
>>> tmp = tempfile.mkdtemp()
>>> out = lambda name: os.path.join(tmp, name)
>>> run(['rtilde', '--out', out('rt.json')])
0
>>> rt = json.load(open(out('rt.json')))
>>> 1.11445 <= rt['Rtilde_over_pi'] <= 1.11645, rt['schema_version']
(True, 1)
>>> run(['solve', '--cost', out('missing.srf'), '--out', out('W.srf')])
1

Every flag is documented, so that `--help` lists its default
>>> subs = build_parser()._subparsers._group_actions[0].choices
>>> [(name, a.dest) for name, p in subs.items() for a in p._actions if a.help is None]
[]
>>> helptext = subs['cost'].format_help()
>>> '(default: 100.0)' in helptext, '(default: 3.0)' in helptext
(True, True)

End to end run on the S-curve phantom
>>> run(['phantom', '--kind', 'scurve', '--out', out('s.pgm'), '--endpoints', out('ends.json')])
0
>>> run(['cost', '--image', out('s.pgm'), '--ntheta', '16', '--out', out('cost.srf')])
0
>>> ends = json.load(open(out('ends.json')))
>>> p0, p1 = ends['p0'], ends['p1']
>>> run(['solve', '--cost', out('cost.srf'), '--mode', 'pt', '--seed', '{},{},{}'.format(*p0),
...      '--max-iter', '500', '--out', out('W.srf'), '--report', out('solve.json')])
0
>>> code = run(['track', '--dist', out('W.srf'), '--cost', out('cost.srf'), '--start', '{},{},{}'.format(*p1),
...             '--out', out('curve')])
>>> open(out('curve.csv')).readline().strip()
't,x,y,theta,u1,u2'
>>> sorted(json.load(open(out('curve.json'))))
['cusp_times', 'degenerate', 'length', 'mode', 'reason', 'schema_version', 'stalled', 'w_start']
"""
import sys
import argparse

import numpy as np

from cuspless.options import gopts
from cuspless.utils import Print, fmt, parse_list, parse_number, parse_point, write_json
from cuspless.geometry import GroupElement, MetricParams
from cuspless.fields import ScalarField3, fold_to_projective, unfold_to_group
from cuspless import cost as _cost
from cuspless import eikonal, elliptic, maxwell, phantom, tracker

# smallest phantom side [px]
_MIN_SIZE = 32


def _number(text):
    """argparse type accepting the `pi` suffix."""
    try:
        return parse_number(text)
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err))


def _point(text):
    try:
        return parse_point(text)
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err))


def _metric_flags(p):
    p.add_argument('--xi', type=_number, default=gopts['xi'], help='spatial anisotropy')
    p.add_argument('--eps', type=_number, default=gopts['eps'], help='relaxation of A3')


def _solver_flags(p):
    p.add_argument('--tol', type=_number, default=None, help='eikonal tolerance (default from the domain diameter)')
    p.add_argument('--max-iter', type=int, default=gopts['max_iter'], help='maximum number of sweep cycles')
    p.add_argument('--scheme', choices=sorted(eikonal._SOLVER_DICT), default=gopts['scheme'],
                   help='sweeping scheme')
    p.add_argument('--threads', type=int, default=gopts['threads'], help='numba threads of the jacobi scheme')


def build_parser():
    """Return the argument parser with one sub-parser per stage."""
    fmt_cls = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(prog='cuspless', formatter_class=fmt_cls,
                                     description='Sub-Riemannian geodesics in the projective line bundle.')
    parser.add_argument('-q', '--quiet', action='store_true', help='no progress messages')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('phantom', formatter_class=fmt_cls, help='synthetic vessel image')
    p.add_argument('--kind', choices=('line', 'scurve', 'crossing'), required=True, help='phantom shape')
    p.add_argument('--width', type=int, default=64, help='image width [px]')
    p.add_argument('--height', type=int, default=48, help='image height [px]')
    p.add_argument('--angle', type=_number, default=0., help='ridge angle (line, first crossing ridge)')
    p.add_argument('--angle2', type=_number, default=np.pi/2, help='second crossing ridge angle')
    p.add_argument('--radius', type=float, default=8., help='hook radius of the S-curve [px]')
    p.add_argument('--length', type=float, default=24., help='straight part of the S-curve [px]')
    p.add_argument('--sigma', type=float, default=1.5, help='ridge width [px]')
    p.add_argument('--ascii', action='store_true', help='write a P2 file instead of P5')
    p.add_argument('--endpoints', default=None, help='json file for the S-curve end points')
    p.add_argument('--out', required=True, help='PGM output file')

    p = sub.add_parser('cost', formatter_class=fmt_cls, help='cost field from a PGM image')
    p.add_argument('--image', required=True, help='PGM input image')
    p.add_argument('--ntheta', type=int, default=gopts['ntheta'], help='orientations on [0, pi)')
    p.add_argument('--lambda', dest='lam', type=_number, default=gopts['lambda'], help='cost contrast lambda')
    p.add_argument('--p', type=_number, default=gopts['p'], help='cost exponent')
    p.add_argument('--c-min', type=_number, default=gopts['c_min'], help='cost floor')
    p.add_argument('--sigma-long', type=_number, default=gopts['sigma_long'], help='filter scale along the orientation [px]')
    p.add_argument('--sigma-short', type=_number, default=gopts['sigma_short'], help='filter scale across the orientation [px]')
    p.add_argument('--sigma-a3', type=_number, default=gopts['sigma_a3'], help='scale of the A3 vesselness derivative [px]')
    p.add_argument('--score', default=None, help='also write the orientation score')
    p.add_argument('--vesselness', default=None, help='also write the vesselness')
    p.add_argument('--out', required=True, help='SRF1 cost file')

    p = sub.add_parser('solve', formatter_class=fmt_cls, help='distance map')
    p.add_argument('--cost', required=True, help='SRF1 cost file')
    p.add_argument('--mode', choices=('se2', 'pt'), default='pt', help='2pi or pi periodic orientations')
    p.add_argument('--seed', type=_point, action='append', default=None,
                   help="'x,y,theta', repeat for several seeds (default the origin)")
    p.add_argument('--emulate-pt', action='store_true', help='se2 mode: add the antipode of every seed')
    _metric_flags(p)
    _solver_flags(p)
    p.add_argument('--report', default=None, help='json solve report')
    p.add_argument('--out', required=True, help='SRF1 distance map')

    p = sub.add_parser('track', formatter_class=fmt_cls, help='backtrack a geodesic')
    p.add_argument('--dist', required=True, help='SRF1 distance map')
    p.add_argument('--cost', default=None, help='cost field (default uniform)')
    p.add_argument('--start', type=_point, required=True, help='end point x,y,theta')
    _metric_flags(p)
    p.add_argument('--step', type=_number, default=gopts['step'], help='RK4 step [cell]')
    p.add_argument('--stop-radius', type=_number, default=None, help='stop when W is below (default from the seed cell)')
    p.add_argument('--zero-band', type=_number, default=None, help='cusp zero band on u1 (default relative to the median)')
    p.add_argument('--out', required=True, help='output stem of the csv and json files')

    p = sub.add_parser('compare', formatter_class=fmt_cls, help='SE(2) against PT tracking')
    p.add_argument('--cost', required=True, help='pi-symmetric cost, unfolded if pi periodic')
    p.add_argument('--p0', type=_point, required=True, help='first end point x,y,theta')
    p.add_argument('--p1', type=_point, required=True, help='second end point x,y,theta')
    _metric_flags(p)
    _solver_flags(p)
    p.add_argument('--curves', default=None, help='stem of the curve csv files')
    p.add_argument('--out', default=None, help='json report (default stdout)')

    p = sub.add_parser('maxwell', formatter_class=fmt_cls, help='Maxwell strata of a uniform cost solve')
    p.add_argument('--dist', required=True, help='SE(2) distance map from the identity')
    p.add_argument('--radii', type=parse_list, default='0.4pi,0.75pi,1.2pi', help='comma separated sphere radii')
    p.add_argument('--eps', type=_number, default=gopts['eps'], help='relaxation of A3 used by the probes')
    p.add_argument('--band', type=_number, default=None, help='sphere half width (default 1.5 grid steps)')
    p.add_argument('--points', default=None, help='csv of the M2 points')
    p.add_argument('--out', default=None, help='json report (default stdout)')

    p = sub.add_parser('rtilde', formatter_class=fmt_cls, help='critical radius')
    p.add_argument('--step', type=float, default=0.01, help='scanning step in k2')
    p.add_argument('--json', action='store_true', help='json on stdout')
    p.add_argument('--out', default=None, help='json file')

    p = sub.add_parser('bench', formatter_class=fmt_cls, help='PT against two-seed SE(2) wall time')
    p.add_argument('--cost', required=True, help='pi-symmetric cost, unfolded if pi periodic')
    p.add_argument('--seed', type=_point, default=(0., 0., 0.), help='seed x,y,theta')
    _metric_flags(p)
    _solver_flags(p)
    p.add_argument('--separate', action='store_true', help='also time two single-seed SE(2) solves')
    p.add_argument('--out', default=None, help='json report (default stdout)')
    return parser


def _group_cost(filename):
    """Load a cost and return its 2pi version."""
    c = ScalarField3.load(filename)
    return unfold_to_group(c) if c.spec.is_projective else c


def cmd_phantom(args):
    if args.width < _MIN_SIZE or args.height < _MIN_SIZE:
        raise ValueError('phantom size must be >= {} pixels, got {}x{}'.format(_MIN_SIZE, args.width, args.height))
    if args.kind == 'line':
        img = phantom.line(args.width, args.height, args.angle, sigma=args.sigma)
    elif args.kind == 'crossing':
        img = phantom.crossing(args.width, args.height, args.angle, args.angle2, sigma=args.sigma)
    else:
        img, (p0, p1) = phantom.scurve(args.width, args.height, args.radius, args.length, args.sigma)
        if args.endpoints:
            write_json({'p0': p0.astuple(), 'p1': p1.astuple()}, args.endpoints)
    _cost.write_pgm(img, args.out, binary=not args.ascii)
    return 0


def cmd_cost(args):
    img = _cost.read_pgm(args.image)
    prm = _cost.CostParams(args.lam, args.p, args.ntheta, args.sigma_long, args.sigma_short, args.sigma_a3)
    score, V, C = _cost.build_cost(img, prm, args.c_min)
    if args.score:
        score.export(args.score)
    if args.vesselness:
        V.export(args.vesselness)
    C.export(args.out)
    return 0


def cmd_solve(args):
    cost = ScalarField3.load(args.cost)
    if args.mode == 'se2' and cost.spec.is_projective:
        Print('> Unfold the pi periodic cost on the 2pi grid')
        cost = unfold_to_group(cost)
    elif args.mode == 'pt' and not cost.spec.is_projective:
        Print('> Fold the 2pi periodic cost on the pi grid')
        cost = fold_to_projective(cost)
    metric = MetricParams(args.xi, args.eps)
    seeds = args.seed or [(0., 0., 0.)]
    if args.emulate_pt:
        if args.mode != 'se2':
            raise ValueError('--emulate-pt needs --mode se2')
        seeds = seeds + [(x, y, th + np.pi) for x, y, th in seeds]
    prob = eikonal.EikonalProblem(cost, metric, seeds, args.mode)
    W, rep = eikonal.solve(prob, args.tol, args.max_iter, args.scheme)
    W.export(args.out)
    record = rep.asdict()
    record['residual'] = eikonal.residual_stats(eikonal.residual(W, prob), prob)
    if args.report:
        write_json(record, args.report)
    return 0 if rep.converged else 1


def cmd_track(args):
    W = ScalarField3.load(args.dist)
    cost = 1. if args.cost is None else ScalarField3.load(args.cost)
    if not np.isscalar(cost) and cost.spec.theta_period != W.spec.theta_period:
        cost = unfold_to_group(cost) if cost.spec.is_projective else fold_to_projective(cost)
    metric = MetricParams(args.xi, args.eps, cost)
    curve = tracker.backtrack(W, metric, args.start, args.step, args.stop_radius)
    cusps = tracker.detect_cusps(curve, args.zero_band)
    curve.export(args.out, cusps)
    Print('> {} with {} cusp(s)'.format(curve, cusps.count))
    return 1 if curve.stalled else 0


def cmd_compare(args):
    metric = MetricParams(args.xi, args.eps)
    record, curves = tracker.compare_modes(_group_cost(args.cost), metric, GroupElement(*args.p0),
                                           GroupElement(*args.p1), args.tol, args.scheme)
    if args.curves:
        for label, curve in curves.items():
            curve.to_csv('{}_{}.csv'.format(args.curves, label.replace('->', '_').replace('+', '')))
    write_json(record, args.out)
    return 0


def cmd_maxwell(args):
    W = ScalarField3.load(args.dist)
    table = maxwell.stage_report(W, args.radii, MetricParams(1., args.eps), args.band)
    if args.points:
        maxwell.maxwell_m2(W).to_csv(args.points)
    write_json({'stages': table}, args.out)
    return 0


def cmd_rtilde(args):
    sol = elliptic.solve_rtilde(args.step)
    if args.out:
        write_json(sol.asdict(), args.out)
    if args.json:
        write_json(sol.asdict())
    elif not args.out:
        for key, value in sol.asdict().items():
            if key == 'residuals':
                print('residuals', *(fmt(r) for r in value))
            else:
                print(key, fmt(value))
    return 0


def cmd_bench(args):
    record = eikonal.bench_pt_vs_se2(_group_cost(args.cost), MetricParams(args.xi, args.eps), args.tol,
                                     GroupElement(*args.seed), args.separate, args.scheme)
    write_json(record, args.out)
    return 0


_COMMANDS = {'phantom': cmd_phantom, 'cost': cmd_cost, 'solve': cmd_solve, 'track': cmd_track,
             'compare': cmd_compare, 'maxwell': cmd_maxwell, 'rtilde': cmd_rtilde, 'bench': cmd_bench}


def run(argv=None):
    """Run the command line `argv` and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return err.code
    saved = dict(gopts)
    if args.quiet:
        gopts['verbose'] = False
    if getattr(args, 'threads', None):
        gopts['threads'] = args.threads
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, RuntimeError, OSError) as err:
        print('cuspless {}: error: {}'.format(args.command, err), file=sys.stderr)
        return 1
    finally:
        gopts.update(saved)


def main():
    sys.exit(run())
