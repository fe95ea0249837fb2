import weakref

from . import _backend

_cache: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


def kernel_context(instance, kernels=None):
    """Per-instance kernel state, built once and cached for the instance's lifetime."""
    kernels = kernels or _backend.kernels
    per = _cache.setdefault(instance, {})
    ctx = per.get(kernels.NAME)
    if ctx is None:
        ctx = kernels.Context(instance.matrix, instance.coords, instance.neighbors)
        per[kernels.NAME] = ctx
    return kernels, ctx
