import importlib.resources
import itertools

import pytest

from gyrokit import EinsteinModel, MobiusModel, table_load


def bundled_table_path(name: str):
    return importlib.resources.files("gyrokit") / "tables" / f"{name}.json"


def load_bundled(name: str):
    return table_load(bundled_table_path(name).read_text(), name=name)


@pytest.fixture(scope="session")
def z4():
    return load_bundled("z4")


@pytest.fixture(scope="session")
def klein4():
    return load_bundled("klein4")


@pytest.fixture(scope="session")
def g8():
    return load_bundled("g8")


@pytest.fixture(scope="session")
def einstein():
    return EinsteinModel(dim=3, c=1.0)


@pytest.fixture(scope="session")
def mobius():
    return MobiusModel()


def brute_subgyrogroups(model):
    """All subgyrogroups, found with no library help beyond op/inv."""
    n = model.n
    out = []
    for r in range(n):
        for extra in itertools.combinations(range(1, n), r):
            s = set((0,) + extra)
            if any(int(model.inv(x)) not in s for x in s):
                continue
            if any(int(model.op(x, y)) not in s for x in s for y in s):
                continue
            out.append(tuple(sorted(s)))
    return out


def brute_gyr(model, a, b, z):
    """gyr[a, b](z) solved from gyroassociativity by row scan (the oracle)."""
    ab = int(model.op(a, b))
    target = int(model.op(a, model.op(b, z)))
    hits = [w for w in range(model.n) if int(model.op(ab, w)) == target]
    assert len(hits) == 1, f"left division not unique at {(a, b, z)}"
    return hits[0]


def brute_l_subgyrogroups(model):
    """L-subgyrogroups via the brute-force gyration oracle."""
    out = []
    for sub in brute_subgyrogroups(model):
        s = set(sub)
        if all({brute_gyr(model, a, h, x) for x in s} == s
               for a in range(model.n) for h in s):
            out.append(sub)
    return out
