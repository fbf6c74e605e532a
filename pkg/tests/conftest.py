import pytest

import gpls


@pytest.fixture(scope="session")
def sphere_def():
    return gpls.catalog_lookup("ellipsoid", {"a": 1.0, "b": 1.0, "c": 1.0})


@pytest.fixture(scope="session")
def sphere_sample(sphere_def):
    return gpls.sample_surface(sphere_def, 50, seed=7)


@pytest.fixture(scope="session")
def sphere_fit(sphere_sample):
    return gpls.build_gpls(sphere_sample.points, gpls.build_index_set(3, 2, 2))


@pytest.fixture(scope="session")
def torus_def():
    return gpls.catalog_lookup("torus", {"R": 0.5, "r": 0.3})


@pytest.fixture(scope="session")
def torus_sample(torus_def):
    return gpls.sample_surface(torus_def, 100, seed=5)


@pytest.fixture(scope="session")
def torus_fit(torus_sample):
    return gpls.build_gpls(torus_sample.points, gpls.build_index_set(3, 4, 2))
