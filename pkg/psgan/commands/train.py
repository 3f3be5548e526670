import math
import os

from psgan.commands.common import add_common_options, comma_ints, print_summary, require
from psgan.config import DbConfig, DpConfig, GeneratorConfig, LossKind, LossWeights, TrainConfig
from psgan.errors import ConfigError
from psgan.services.checkpoint import load_checkpoint
from psgan.services.scene_data import load_pairs
from psgan.services.trainer import metrics_path_for, train
from psgan.utils.validators import is_power_of_two

NAME = 'train'
LOSS_CHOICES = [kind.value for kind in LossKind]


def register(subparsers):
    parser = subparsers.add_parser(NAME, help='train the generator and both discriminators')
    add_common_options(parser)
    parser.add_argument('--data', help='dataset directory written by prep')
    parser.add_argument('--out', help='final checkpoint path')
    parser.add_argument('--epochs', type=int, default=200)
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--batch-size', type=int, default=1)
    parser.add_argument('--lr', type=float, default=2e-4, help='Adam step size for all three networks')
    parser.add_argument('--lambda', dest='lambda_l1', type=float, default=100.0, help='weight of the L1 term')
    parser.add_argument('--db-loss', choices=LOSS_CHOICES, default=LossKind.LEAST_SQUARES.value)
    parser.add_argument('--dp-loss', choices=LOSS_CHOICES, default=LossKind.LOG_LIKELIHOOD.value)
    parser.add_argument('--no-spp', action='store_true', help='resize crops instead of pyramid pooling')
    parser.add_argument('--no-dp', action='store_true', help='train without the pedestrian discriminator')
    parser.add_argument('--levels', type=int, help='U-Net levels (default log2 of the patch size)')
    parser.add_argument('--base-channels', type=int, default=64)
    parser.add_argument('--db-channels', type=comma_ints, default=DbConfig.layer_channels)
    parser.add_argument('--dp-channels', type=comma_ints, default=DpConfig.layer_channels)
    parser.add_argument('--dropout', action='store_true')
    parser.add_argument('--checkpoint-every', type=int, default=10)
    parser.add_argument('--resume', help='checkpoint to continue from')
    parser.set_defaults(handler=run)
    return parser


def build_train_config(args, patch_size):
    """Translate command-line options into a validated TrainConfig"""
    if not is_power_of_two(patch_size):
        raise ConfigError(f'patch size {patch_size} is not a power of two')
    levels = args.levels or int(math.log2(patch_size))
    cfg = TrainConfig(
        epochs=args.epochs,
        batch_size=args.batch_size,
        lr_g=args.lr,
        lr_db=args.lr,
        lr_dp=args.lr,
        seed=args.seed,
        checkpoint_every=args.checkpoint_every,
        dp_enabled=not args.no_dp,
        weights=LossWeights(lambda_l1=args.lambda_l1, db_kind=args.db_loss, dp_kind=args.dp_loss),
        generator=GeneratorConfig(
            patch_size=patch_size,
            levels=levels,
            base_channels=args.base_channels,
            use_dropout=args.dropout,
        ),
        db=DbConfig(layer_channels=tuple(args.db_channels)),
        dp=DpConfig(layer_channels=tuple(args.dp_channels), spp_enabled=not args.no_spp),
    )
    return cfg.validate()


def run(args):
    """Train on the prepared pairs and write checkpoints plus the metrics CSV"""
    require(args, 'data', 'out')

    train_dir = os.path.join(args.data, 'train')
    pairs = load_pairs(train_dir if os.path.isdir(train_dir) else args.data)

    state = None
    if args.resume:
        state = load_checkpoint(args.resume)
        cfg = state.cfg
        cfg.epochs = args.epochs
        cfg.validate()
    else:
        cfg = build_train_config(args, pairs[0].P if pairs else 0)

    result = train(cfg, pairs, out_path=args.out, state=state)
    last = result.history[-1] if result.history else {}

    print_summary('TRAINING COMPLETE', [
        ('pairs', len(pairs)),
        ('epochs', result.state.epoch),
        ('steps', result.state.step),
        ('final g_l1', last.get('g_l1', 'n/a')),
        ('final g_total', last.get('g_total', 'n/a')),
        ('checkpoint', args.out),
        ('metrics', metrics_path_for(args.out)),
    ])
    return 0
