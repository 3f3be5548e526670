# Data types and networks
from .disc_background import BackgroundDiscriminator, build_db, db_forward, patch_targets
from .disc_pedestrian import PedestrianDiscriminator, build_dp, dp_forward, spp_pool
from .generator import UNetGenerator, build_generator, generator_forward, parameter_count
from .scene import BBox, BoxLabel, PatchGeometry, PatchPair, Scene

__all__ = [
    'BBox', 'BoxLabel', 'PatchGeometry', 'PatchPair', 'Scene',
    'UNetGenerator', 'build_generator', 'generator_forward', 'parameter_count',
    'BackgroundDiscriminator', 'build_db', 'db_forward', 'patch_targets',
    'PedestrianDiscriminator', 'build_dp', 'dp_forward', 'spp_pool',
]
