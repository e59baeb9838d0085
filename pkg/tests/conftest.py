from pathlib import Path

import pytest

from fraxdim.scene import SceneConfig, load_scene

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


def load_fixture(name: str) -> SceneConfig:
    return load_scene(FIXTURES / f"{name}.json")


@pytest.fixture(scope="session")
def cylinder_cfg():
    return load_fixture("cylinder_sierpinski")


@pytest.fixture(scope="session")
def interval_cfg():
    return load_fixture("interval_overlap")


@pytest.fixture(scope="session")
def moran_cfg():
    return load_fixture("moran_pair")


@pytest.fixture(scope="session")
def four_map_cfg():
    return load_fixture("four_map_cylinder")


@pytest.fixture(scope="session")
def torus_cfg():
    return load_fixture("torus_four_map")


@pytest.fixture(scope="session")
def golden_cfg():
    return load_fixture("golden_triangle")
