from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .certifier import (
    CLASSIFY_YES,
    certificate_payload,
    certify_double_star,
    certify_path,
    classify_double_star,
    classify_path,
)
from .dynamics import leakage_curve
from .errors import InternalInconsistency, InvalidParameter, NumericFailure
from .graphs import (
    double_star_centers,
    double_star_pendant_pair,
    graph_from_json,
    is_connected,
    laplacian,
    make_double_star,
)
from .models import PAIR_CENTERS, PAIR_EXTREMAL, PAIR_PENDANTS, SpectralDecomposition
from .spectral import eigendecompose, path_spectrum
from .sweep import FAMILY_DOUBLE_STAR, FAMILY_PATH, FamilySweep


CURVE_HEADER = ('t', 'at_a', 'cross', 'leakage')
PAIR_CHOICES = (PAIR_CENTERS, PAIR_PENDANTS, PAIR_EXTREMAL)


def _add_instance_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--family', required=True, choices=(FAMILY_PATH, FAMILY_DOUBLE_STAR))
    parser.add_argument('--n', type=int, help='Path order, or pendant count of the second center')
    parser.add_argument('--a', type=int, help='Path vertex (its partner is n + 1 - a)')
    parser.add_argument('--m', type=int, help='Pendant count of the first double star center')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='pgfr-py',
        description='Certify Laplacian pretty good fractional revival on paths and double stars.',
    )
    commands = parser.add_subparsers(dest='command', required=True)

    classify = commands.add_parser('classify', help='Closed-form classification of one instance')
    _add_instance_flags(classify)

    certify = commands.add_parser('certify', help='Exact lattice certificate for one vertex pair')
    _add_instance_flags(certify)
    certify.add_argument('--pair', choices=PAIR_CHOICES, default=PAIR_CENTERS, help='Double star pair (default: centers)')
    certify.add_argument('--dump-lattice', action='store_true', help='Include lattice indices and exact eigenvalues')

    sweep = commands.add_parser('sweep', help='Certify a whole family and cross-check the classifier')
    sweep.add_argument('--family', required=True, choices=(FAMILY_PATH, FAMILY_DOUBLE_STAR))
    sweep.add_argument('--n-max', type=int, help='Largest path order (path family)')
    sweep.add_argument('--max', type=int, dest='max_size', help='Largest pendant count (double-star family)')
    sweep.add_argument('--out', required=True, help='JSONL output file')

    curve = commands.add_parser('curve', help='Leakage and cross curve as CSV')
    curve.add_argument('--family', required=True, choices=(FAMILY_PATH, FAMILY_DOUBLE_STAR, 'graph'))
    curve.add_argument('--n', type=int)
    curve.add_argument('--m', type=int)
    curve.add_argument('--a', type=int)
    curve.add_argument('--b', type=int)
    curve.add_argument('--pair', choices=(PAIR_CENTERS, PAIR_PENDANTS), help='Double star pair used when --a/--b are absent')
    curve.add_argument('--graph', help='Graph JSON file for --family graph')
    curve.add_argument('--t-max', type=float, required=True)
    curve.add_argument('--points', type=int, default=1001, help='Number of samples (default: 1001)')
    curve.add_argument('--out', help='CSV output path (default: stdout)')
    return parser


def _require(args: argparse.Namespace, *names: str) -> None:
    missing = [f'--{name.replace("_", "-")}' for name in names if getattr(args, name) is None]
    if missing:
        raise InvalidParameter(f'--family {args.family} needs {" ".join(missing)}')


def _emit(payload) -> None:
    print(json.dumps(payload, ensure_ascii=False))


def cmd_classify(args: argparse.Namespace) -> int:
    if args.family == FAMILY_PATH:
        _require(args, 'n', 'a')
        decision = classify_path(args.n, args.a)
        payload = {'decision': decision}
        if decision == CLASSIFY_YES:
            payload['partner'] = args.n + 1 - args.a
        _emit(payload)
        return 0
    _require(args, 'm', 'n')
    result = classify_double_star(args.m, args.n)
    _emit({
        'm': result.m,
        'n': result.n,
        'pairs': [
            {'pair': item.pair, 'vertices': list(item.vertices), 'phenomenon': item.phenomenon}
            for item in result.pairs
        ],
    })
    return 0


def cmd_certify(args: argparse.Namespace) -> int:
    if args.family == FAMILY_PATH:
        _require(args, 'n', 'a')
        cert = certify_path(args.n, args.a)
    else:
        _require(args, 'm', 'n')
        cert = certify_double_star(args.m, args.n, args.pair)
    _emit(certificate_payload(cert, dump_lattice=args.dump_lattice))
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    if args.family == FAMILY_PATH:
        _require(args, 'n_max')
        limit = args.n_max
    else:
        _require(args, 'max_size')
        limit = args.max_size
    disagreements = FamilySweep(args.family, limit).run(args.out)
    return 1 if disagreements else 0


def _curve_instance(args: argparse.Namespace) -> tuple[SpectralDecomposition, int, int]:
    if args.family == FAMILY_PATH:
        _require(args, 'n', 'a')
        b = args.b if args.b is not None else args.n + 1 - args.a
        return path_spectrum(args.n), args.a, b
    if args.family == FAMILY_DOUBLE_STAR:
        _require(args, 'm', 'n')
        if args.a is not None and args.b is not None:
            a, b = args.a, args.b
        elif args.pair == PAIR_PENDANTS:
            a, b = double_star_pendant_pair(args.m, args.n)
        else:
            a, b = double_star_centers(args.m, args.n)
        return eigendecompose(laplacian(make_double_star(args.m, args.n))), a, b
    _require(args, 'graph', 'a', 'b')
    try:
        text = Path(args.graph).read_text(encoding='utf-8')
    except OSError as exc:
        raise InvalidParameter(f'cannot read graph file {args.graph}: {exc}') from exc
    graph = graph_from_json(text)
    if not is_connected(graph):
        raise InvalidParameter(f'graph in {args.graph} is not connected')
    return eigendecompose(laplacian(graph)), args.a, args.b


def cmd_curve(args: argparse.Namespace) -> int:
    sd, a, b = _curve_instance(args)
    rows = leakage_curve(sd, a, b, args.t_max, args.points)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(CURVE_HEADER)
    for row in rows:
        writer.writerow([format(value, '.15g') for value in row])
    if args.out:
        Path(args.out).write_text(buffer.getvalue(), encoding='utf-8')
    else:
        sys.stdout.write(buffer.getvalue())
    return 0


COMMANDS = {
    'classify': cmd_classify,
    'certify': cmd_certify,
    'sweep': cmd_sweep,
    'curve': cmd_curve,
}


def main() -> int:
    args = build_parser().parse_args()
    try:
        return COMMANDS[args.command](args)
    except InvalidParameter as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except NumericFailure as exc:
        print(f'numeric failure: {exc}', file=sys.stderr)
        return 1
    except InternalInconsistency as exc:
        print(f'internal inconsistency: {exc}', file=sys.stderr)
        return 1


if __name__ == '__main__':
    raise SystemExit(main())
