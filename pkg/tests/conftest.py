import functools

from hypothesis import HealthCheck, settings

from sphereqmc import digital_net, identity_pascal_spec, lift

settings.register_profile(
    "suite",
    derandomize=True,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
    deadline=None,
)
settings.load_profile("suite")


@functools.lru_cache(maxsize=None)
def net2(m: int):
    """Base-2 identity/Pascal net, cached (point sets are immutable)."""
    return digital_net(identity_pascal_spec(2, m))


@functools.lru_cache(maxsize=None)
def lifted2(m: int):
    return lift(net2(m))
