from psgan.commands.common import add_common_options, print_summary, require
from psgan.services.cityscapes import convert_cityscapes

NAME = 'convert-cityscapes'


def register(subparsers):
    parser = subparsers.add_parser(NAME, help='turn Cityscapes person polygons into an annotation document')
    add_common_options(parser)
    parser.add_argument('--gt', help='gtFine directory holding *_gtFine_polygons.json files')
    parser.add_argument('--images', help='leftImg8bit directory')
    parser.add_argument('--out', help='annotation document to write')
    parser.add_argument('--labels', default='person', help='comma-separated polygon labels to keep')
    parser.set_defaults(handler=run)
    return parser


def run(args):
    require(args, 'gt', 'images', 'out')
    labels = tuple(label.strip() for label in args.labels.split(',') if label.strip())
    scenes, boxes = convert_cityscapes(args.gt, args.images, args.out, labels=labels)

    print_summary('CITYSCAPES CONVERTED', [
        ('scenes', scenes),
        ('boxes', boxes),
        ('annotations', args.out),
    ])
    return 0
