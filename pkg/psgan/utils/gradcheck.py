"""Sampled central finite-difference check of parameter gradients"""

from dataclasses import dataclass, field
from typing import List

import torch


@dataclass
class GradCheckResult:
    checked: int
    max_relative_error: float
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures


def _locate(params, flat_index):
    for name, param in params:
        if flat_index < param.numel():
            return name, param, flat_index
        flat_index -= param.numel()
    raise IndexError(flat_index)


def check_parameter_gradients(module, loss_fn, samples=100, eps=1e-6, tolerance=1e-3, floor=1e-6, seed=0):
    """Compare autograd gradients of loss_fn() against central differences.

    loss_fn takes no arguments and returns a scalar tensor computed from module.
    Run it on float64 modules; `samples` parameter entries are drawn without
    replacement across all parameters of the module.
    """
    params = [(name, p) for name, p in module.named_parameters() if p.requires_grad]
    total = sum(p.numel() for _, p in params)

    module.zero_grad()
    loss_fn().backward()
    analytic = {name: p.grad.detach().clone().reshape(-1) for name, p in params}

    order = torch.randperm(total, generator=torch.Generator().manual_seed(seed))[:samples]
    worst = 0.0
    failures = []

    with torch.no_grad():
        for flat_index in order.tolist():
            name, param, i = _locate(params, flat_index)
            view = param.view(-1)
            original = view[i].item()

            view[i] = original + eps
            plus = loss_fn().item()
            view[i] = original - eps
            minus = loss_fn().item()
            view[i] = original

            numeric = (plus - minus) / (2 * eps)
            exact = analytic[name][i].item()
            error = abs(exact - numeric) / max(abs(exact), abs(numeric), floor)
            worst = max(worst, error)
            if error > tolerance:
                failures.append(f'{name}[{i}]: analytic={exact:.6e} numeric={numeric:.6e}')

    return GradCheckResult(checked=len(order), max_relative_error=worst, failures=failures)
