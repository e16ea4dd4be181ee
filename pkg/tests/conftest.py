import pytest

from stegomail import BitFunction, ChannelSpec, Key

MASTER_SEED = 20260811

UNIFORM_1024 = ChannelSpec.uniform(1024)
POINT_MASS = ChannelSpec.point_mass(4)
MARKOV2 = ChannelSpec.markov1([[0.9, 0.1], [0.5, 0.5]], [0.5, 0.5])

TEST_CHANNELS = {
    "uniform_1024": UNIFORM_1024,
    "point_mass": POINT_MASS,
    "markov1": MARKOV2,
}


@pytest.fixture
def fixed_key() -> Key:
    return Key.from_hex("000102030405060708090a0b0c0d0e0f")


@pytest.fixture
def keyed_fn(fixed_key) -> BitFunction:
    return BitFunction.keyed(fixed_key)


def find_key_where(predicate, limit: int = 4096) -> Key:
    """Deterministically search small keys until `predicate(fn)` holds."""
    for i in range(limit):
        key = Key(i.to_bytes(16, "big"))
        fn = BitFunction.keyed(key)
        if predicate(fn):
            return key
    raise AssertionError("no key satisfying the predicate in search range")
