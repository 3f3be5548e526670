import json
import os

from tqdm import tqdm

from psgan.commands.common import add_common_options, load_scenes, print_summary, require
from psgan.config import ProposalConfig, env_flag
from psgan.services.checkpoint import load_checkpoint
from psgan.services.synthesis import export_annotations, synthesize_scene
from psgan.utils.images import load_mask, save_png
from psgan.utils.seeding import make_generator, spawn_seeds

NAME = 'synth'
MANIFEST = 'manifest.json'


def register(subparsers):
    parser = subparsers.add_parser(NAME, help='place synthetic pedestrians into scenes')
    add_common_options(parser)
    parser.add_argument('--ckpt', help='trained checkpoint')
    parser.add_argument('--scenes', help='annotation document, a directory holding one, or a directory of background images')
    parser.add_argument('--mask', help='placement mask PNG (nonzero = allowed foot position)')
    parser.add_argument('--n-per-scene', type=int, default=1)
    parser.add_argument('--out', help='output directory')
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--min-h', type=int, default=ProposalConfig.h_min)
    parser.add_argument('--max-h', type=int, default=ProposalConfig.h_max)
    parser.add_argument('--min-aspect', type=float, default=ProposalConfig.aspect_range[0])
    parser.add_argument('--max-aspect', type=float, default=ProposalConfig.aspect_range[1])
    parser.add_argument('--min-w', type=int, default=ProposalConfig.min_w)
    parser.add_argument('--full-patch', action='store_true', help='paste the whole generated patch')
    parser.set_defaults(handler=run)
    return parser


def _placement_mask(path, scene):
    """A single mask file for every scene, or a directory with one mask per scene image name"""
    if not path:
        return None
    if os.path.isdir(path):
        candidate = os.path.join(path, os.path.basename(scene.source_id))
        return load_mask(candidate) if os.path.exists(candidate) else None
    return load_mask(path)


def run(args):
    """Augment every listed scene and export images, annotations and a manifest"""
    require(args, 'ckpt', 'scenes', 'out')

    state = load_checkpoint(args.ckpt)
    generator = state.generator
    proposal_cfg = ProposalConfig(
        h_min=args.min_h,
        h_max=min(args.max_h, generator.cfg.patch_size),
        aspect_range=(args.min_aspect, args.max_aspect),
        min_w=args.min_w,
    ).validate()

    scenes = load_scenes(args.scenes)
    seeds = spawn_seeds(make_generator(args.seed), len(scenes))

    os.makedirs(args.out, exist_ok=True)
    augmented, manifest = [], []
    progress = tqdm(list(zip(scenes, seeds)), desc='synth', disable=not env_flag('PSGAN_PROGRESS', True))
    for scene, seed in progress:
        before = len(scene.boxes)
        result = synthesize_scene(
            generator, scene, args.n_per_scene, proposal_cfg, make_generator(seed),
            placement_mask=_placement_mask(args.mask, scene), full_patch=args.full_patch,
        )
        name = os.path.splitext(os.path.basename(scene.source_id))[0] + '_synth.png'
        save_png(result.image, os.path.join(args.out, name))
        result.source_id = name
        augmented.append(result)
        manifest.append({
            'source': scene.source_id,
            'output': name,
            'seed': seed,
            'boxes': [box.to_dict() for box in result.boxes[before:]],
        })

    counts = export_annotations(augmented, os.path.join(args.out, 'annotations.json'))
    with open(os.path.join(args.out, MANIFEST), 'w', encoding='utf-8') as f:
        json.dump({'checkpoint': os.path.abspath(args.ckpt), 'seed': args.seed, 'scenes': manifest}, f, indent=2)

    print_summary('SYNTHESIS COMPLETE', [
        ('scenes', len(augmented)),
        ('real boxes', counts['real']),
        ('synthetic boxes', counts['synthetic']),
        ('output', args.out),
    ])
    return 0
