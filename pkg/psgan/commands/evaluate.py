import json
import os

from psgan.commands.common import add_common_options, print_summary, require
from psgan.services.checkpoint import load_checkpoint
from psgan.services.report_service import ReportService
from psgan.services.scene_data import PAIRS_MANIFEST, load_pairs

NAME = 'eval'


def register(subparsers):
    parser = subparsers.add_parser(NAME, help='report reconstruction and discriminator metrics')
    add_common_options(parser)
    parser.add_argument('--ckpt', help='trained checkpoint')
    parser.add_argument('--data', help='dataset directory written by prep')
    parser.add_argument('--out', help='report JSON path (printed only when omitted)')
    parser.add_argument('--seed', type=int, default=0, help='seed of the untrained baseline generator')
    parser.set_defaults(handler=run)
    return parser


def _pairs_directory(data):
    """Prefer the held-out split, then the training split, then data itself"""
    for split in ('test', 'train'):
        candidate = os.path.join(data, split)
        manifest = os.path.join(candidate, PAIRS_MANIFEST)
        if os.path.exists(manifest) and os.path.isdir(os.path.join(candidate, 'x')):
            return candidate
    return data


def run(args):
    require(args, 'ckpt', 'data')

    directory = _pairs_directory(args.data)
    pairs = load_pairs(directory)

    state = load_checkpoint(args.ckpt)
    report = ReportService.get_generator_report(state, pairs, seed=args.seed)
    report['data'] = directory

    if args.out:
        out_dir = os.path.dirname(os.path.abspath(args.out))
        os.makedirs(out_dir, exist_ok=True)
        with open(args.out, 'w', encoding='utf-8') as f:
            json.dump(report, f, indent=2, sort_keys=True)

    print_summary('EVALUATION REPORT', sorted(report.items()))
    return 0
