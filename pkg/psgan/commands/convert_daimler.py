from psgan.commands.common import add_common_options, print_summary, require
from psgan.services.tsinghua_daimler import DEFAULT_IDENTITIES, convert_tsinghua_daimler

NAME = 'convert-daimler'


def register(subparsers):
    parser = subparsers.add_parser(NAME, help='turn Tsinghua-Daimler labels or background images into an annotation document')
    add_common_options(parser)
    parser.add_argument('--images', help='directory of scene images')
    parser.add_argument('--labels-dir', help='directory of per-image label JSON files; omit for background-only scenes')
    parser.add_argument('--out', help='annotation document to write')
    parser.add_argument('--identities', default=','.join(DEFAULT_IDENTITIES),
                        help='comma-separated object identities to keep')
    parser.set_defaults(handler=run)
    return parser


def run(args):
    require(args, 'images', 'out')
    identities = tuple(name.strip() for name in args.identities.split(',') if name.strip())
    scenes, boxes, backgrounds = convert_tsinghua_daimler(
        args.images, args.out, label_dir=args.labels_dir, identities=identities)

    print_summary('TSINGHUA-DAIMLER CONVERTED', [
        ('scenes', scenes),
        ('boxes', boxes),
        ('background scenes', backgrounds),
        ('annotations', args.out),
    ])
    return 0
