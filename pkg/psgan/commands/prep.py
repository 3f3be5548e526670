import os

from psgan.commands.common import add_common_options, load_scenes, print_summary, require
from psgan.errors import EmptyDataset
from psgan.services.scene_data import (
    assemble_dataset,
    read_include_list,
    save_pairs,
    split_scenes,
)
from psgan.utils.seeding import make_generator

NAME = 'prep'


def register(subparsers):
    parser = subparsers.add_parser(NAME, help='filter boxes, crop patches and mask them with noise')
    add_common_options(parser)
    parser.add_argument('--annotations', help='annotation JSON document')
    parser.add_argument('--out', help='output dataset directory')
    parser.add_argument('--min-h', type=int, default=70)
    parser.add_argument('--min-w', type=int, default=25)
    parser.add_argument('--patch', type=int, default=256)
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--test-fraction', type=float, default=0.2)
    parser.add_argument('--include', help='optional <image>#<box index> list of boxes to keep')
    parser.add_argument('--workers', type=int, default=1)
    parser.set_defaults(handler=run)
    return parser


def run(args):
    """Build train/test patch pairs from an annotation document"""
    require(args, 'annotations', 'out')

    scenes = load_scenes(args.annotations)
    include = read_include_list(args.include) if args.include else None

    rng = make_generator(args.seed)
    train_scenes, test_scenes = split_scenes(scenes, args.test_fraction, rng)
    train_pairs = assemble_dataset(train_scenes, args.patch, rng, workers=args.workers, include=include,
                                  min_h=args.min_h, min_w=args.min_w)
    test_pairs = assemble_dataset(test_scenes, args.patch, rng, workers=args.workers, include=include,
                                  min_h=args.min_h, min_w=args.min_w)
    if not train_pairs:
        raise EmptyDataset('no boxes survived filtering; nothing to train on')

    save_pairs(train_pairs, os.path.join(args.out, 'train'))
    save_pairs(test_pairs, os.path.join(args.out, 'test'))

    print_summary('PATCH PAIRS PREPARED', [
        ('scenes', len(scenes)),
        ('train pairs', len(train_pairs)),
        ('test pairs', len(test_pairs)),
        ('patch size', args.patch),
        ('output', args.out),
    ])
    return 0
