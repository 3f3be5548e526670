import torch


def make_generator(seed):
    """Create a CPU torch generator seeded with seed"""
    return torch.Generator().manual_seed(int(seed))


def spawn_seeds(rng, count):
    """Draw count independent 63-bit seeds from rng"""
    if count == 0:
        return []
    return torch.randint(0, 2 ** 62, (count,), generator=rng, dtype=torch.int64).tolist()


def set_deterministic(seed):
    """Seed torch's global state and request deterministic kernels"""
    torch.manual_seed(seed)
    torch.use_deterministic_algorithms(True, warn_only=True)
