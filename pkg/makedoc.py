#!/usr/bin/python3
"""
Build the cuspless documentation.

  - the html API doc of the library modules and of the worked examples (`pdoc3`),
  - `docs/cli.md`, the `--help` text of every `cuspless` subcommand,
  - with `-c`, the class and package diagrams (`pyreverse` from `pylint`, and `graphviz`).

These tools are **optional** and are not needed to run `cuspless` computations.
"""
import os
import subprocess
import argparse

from cuspless.cli import build_parser

# compiled kernels, no public API
SKIP = ('cuspless._kernels',)


def cli_reference(filename):
    """Write the help of the parser and of every subcommand in a markdown file."""
    parser = build_parser()
    subs = parser._subparsers._group_actions[0].choices
    with open(filename, 'w') as f:
        f.write('# cuspless command line\n\n```\n{}```\n'.format(parser.format_help()))
        for name, sub in subs.items():
            f.write('\n## {}\n\n```\n{}```\n'.format(name, sub.format_help()))
    print(' > {} subcommands written in {}'.format(len(subs), filename))


def diagrams(outdir):
    """Class and package diagrams of the library, the kernels left aside."""
    ignore = ','.join(m.split('.')[-1] + '.py' for m in SKIP)
    subprocess.run(['pyreverse', '-s0', '-m', 'yes', '-f', 'ALL', '--ignore', ignore, '-o', 'dot', 'cuspless'])
    for name in ('classes', 'packages'):
        subprocess.run(['dot', '-Tsvg', name + '.dot', '-o', os.path.join(outdir, name + '.svg')])


if __name__ == '__main__':
    parser = argparse.ArgumentParser(description='Generate the html doc, the CLI reference and the diagrams')
    parser.add_argument('-c', dest='classes', action='store_true', help='re-generate the diagrams (slow)')
    parser.add_argument('-o', dest='outdir', default='docs', help='output directory')
    args = parser.parse_args()

    os.makedirs(args.outdir, exist_ok=True)
    cli_reference(os.path.join(args.outdir, 'cli.md'))
    if args.classes:
        diagrams(args.outdir)
    else:
        print(' > Keep previous diagrams.')
    subprocess.run(['pdoc3', '--html', '--force', '--config', 'latex_math=True', '-o', args.outdir, 'cuspless'])
