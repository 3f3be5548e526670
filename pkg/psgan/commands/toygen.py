from psgan.commands.common import add_common_options, print_summary, require
from psgan.config import ToyConfig
from psgan.services.toyscapes import write_toy_dataset

NAME = 'toygen'


def register(subparsers):
    parser = subparsers.add_parser(NAME, help='render a procedural street-scene dataset')
    add_common_options(parser)
    parser.add_argument('--out', help='output directory')
    parser.add_argument('--scenes', type=int, default=32)
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--width', type=int, default=ToyConfig.width)
    parser.add_argument('--height', type=int, default=ToyConfig.height)
    parser.add_argument('--peds', type=int, default=ToyConfig.n_peds, help='pedestrians per scene')
    parser.add_argument('--min-ped-h', type=int, default=ToyConfig.ped_h_range[0])
    parser.add_argument('--max-ped-h', type=int, default=ToyConfig.ped_h_range[1])
    parser.set_defaults(handler=run)
    return parser


def run(args):
    require(args, 'out')
    cfg = ToyConfig(
        width=args.width,
        height=args.height,
        n_peds=args.peds,
        ped_h_range=(args.min_ped_h, args.max_ped_h),
    ).validate()

    path = write_toy_dataset(args.out, args.scenes, args.seed, cfg)

    print_summary('TOY DATASET CREATED', [
        ('scenes', args.scenes),
        ('pedestrians per scene', cfg.n_peds),
        ('size', f'{cfg.width}x{cfg.height}'),
        ('annotations', path),
    ])
    return 0
