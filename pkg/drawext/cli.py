import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from drawext.constants import EXIT_NO, EXIT_REGIME, EXIT_USAGE, EXIT_YES, SOLVER_MODES
from drawext.drawing import logger
from drawext.exceptions import BudgetError, DrawExtException, ParseError, RegimeError
from drawext.generator import generate_instance
from drawext.instance import extension_violations
from drawext.instance_file import parse_drawing, parse_instance, write_drawing, write_instance
from drawext.solver import Extender
from drawext.svg import render_svg


def _emit(text: str, out: Optional[str]):
    if out is None:
        sys.stdout.write(text)

    else:
        Path(out).write_text(text, encoding='utf-8')


def _extend(args: argparse.Namespace) -> int:
    instance = parse_instance(Path(args.instance).read_text(encoding='utf-8'))
    solution = Extender().set_mode(args.mode).set_ic(args.ic).solve(instance)
    if solution is None:
        print('NO')
        return EXIT_NO

    _emit(write_drawing(solution), args.out)
    if args.svg is not None:
        Path(args.svg).write_text(render_svg(solution, highlight=instance.e_add), encoding='utf-8')

    if args.out is not None:
        print('YES')

    return EXIT_YES


def _generate(args: argparse.Namespace) -> int:
    instance = generate_instance(args.seed, args.n, k=args.k, vadd=args.vadd, crossings=args.crossings, ic=args.ic,
                                 extra=args.extra)
    _emit(write_instance(instance), args.out)

    return EXIT_YES


def _verify(args: argparse.Namespace) -> int:
    instance = parse_instance(Path(args.instance).read_text(encoding='utf-8'))
    solution = parse_drawing(Path(args.solution).read_text(encoding='utf-8'))
    violations = extension_violations(solution, instance)
    for v in violations:
        print(f'{v.kind}: {v.message}')

    if violations:
        return EXIT_NO

    print('ok')
    return EXIT_YES


def _render(args: argparse.Namespace) -> int:
    instance = parse_instance(Path(args.instance).read_text(encoding='utf-8'))
    if args.solution is None:
        svg = render_svg(instance.drawing)

    else:
        svg = render_svg(parse_drawing(Path(args.solution).read_text(encoding='utf-8')), highlight=instance.e_add)

    _emit(svg, args.out)

    return EXIT_YES


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='drawext', description='Extend partial 1-planar and IC-planar drawings.')
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_true', help='log solver progress')
    verbosity.add_argument('-q', '--quiet', action='store_true', help='log errors only')
    commands = parser.add_subparsers(dest='command', required=True)

    extend = commands.add_parser('extend', help='extend the drawing of an instance file')
    extend.add_argument('instance', help='instance file')
    extend.add_argument('--mode', choices=SOLVER_MODES, default='auto', help='solver to use')
    extend.add_argument('--ic', action='store_true', help='ask for an IC-planar extension')
    extend.add_argument('--svg', metavar='PATH', help='also render the solution as SVG')
    extend.add_argument('--out', metavar='PATH', help='solution file; stdout when omitted')
    extend.set_defaults(run=_extend)

    generate = commands.add_parser('generate', help='write a random instance file')
    generate.add_argument('--seed', type=int, default=0)
    generate.add_argument('--n', type=int, required=True, help='number of vertices of G')
    generate.add_argument('--k', type=int, default=0, help='number of added edges')
    generate.add_argument('--vadd', type=int, default=0, help='number of added vertices')
    generate.add_argument('--crossings', type=int, default=0, help='number of crossings in the full drawing')
    generate.add_argument('--ic', action='store_true', help='keep the drawing IC-planar')
    generate.add_argument('--extra', type=int, default=0, help='edges of G missing from the full drawing')
    generate.add_argument('--out', metavar='PATH', help='instance file; stdout when omitted')
    generate.set_defaults(run=_generate)

    verify = commands.add_parser('verify', help='check a solution file against an instance file')
    verify.add_argument('instance')
    verify.add_argument('solution')
    verify.set_defaults(run=_verify)

    render = commands.add_parser('render', help='render an instance or a solution as SVG')
    render.add_argument('instance')
    render.add_argument('--solution', metavar='PATH', help='solution whose added edges are highlighted')
    render.add_argument('--out', metavar='PATH', help='SVG file; stdout when omitted')
    render.set_defaults(run=_render)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Runs the command line and returns its exit status: 0 yes, 1 no, 2 usage or parse error, 3 out of regime."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)

    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_YES

    level = logging.DEBUG if args.verbose else logging.ERROR if args.quiet else logging.WARNING
    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s')

    try:
        return args.run(args)

    except ParseError as exc:
        logger.error(f'{exc.path}: {exc.message}' if exc.path else exc.message)
        return EXIT_USAGE

    except (RegimeError, BudgetError) as exc:
        logger.error(f'Out of the supported regime: {exc.message}')
        return EXIT_REGIME

    except OSError as exc:
        logger.error(str(exc))
        return EXIT_USAGE

    except DrawExtException as exc:
        logger.error(exc.message)
        return EXIT_USAGE
