import pytest

from tnormlab.analysis import GridSpec
from tnormlab.core import (
    CShelf,
    Drastic,
    Lukasiewicz,
    Minimum,
    OrdinalSum,
    Product,
    SchweizerSklar,
)

# The family matrix every end-to-end check runs over, with the residual
# tier each instance must meet in catalog sweeps: 1e-12 where no
# fractional power occurs, 1e-9 otherwise.
FAMILY_MATRIX = [
    ("min", Minimum(), 1e-12),
    ("prod", Product(), 1e-12),
    ("drastic", Drastic(), 1e-12),
    ("ss:-2", SchweizerSklar(-2.0), 1e-9),
    ("ss:-1", SchweizerSklar(-1.0), 1e-9),
    ("ss:-0.5", SchweizerSklar(-0.5), 1e-9),
    ("ss:0.5", SchweizerSklar(0.5), 1e-9),
    ("ss:1", SchweizerSklar(1.0), 1e-12),  # beta = 1: powers stay exact
    ("ss:2", SchweizerSklar(2.0), 1e-9),
    ("ss:3", SchweizerSklar(3.0), 1e-9),
    ("cshelf:0.25", CShelf(0.25), 1e-12),
    ("cshelf:0.5", CShelf(0.5), 1e-12),
    ("cshelf:0.75", CShelf(0.75), 1e-12),
]

MATRIX_IDS = [name for name, _, _ in FAMILY_MATRIX]

ORDINAL_SUMS = [
    OrdinalSum([(0.0, 0.5, Lukasiewicz())]),
    OrdinalSum([(0.5, 1.0, Product())]),
    OrdinalSum([(0.2, 0.6, Lukasiewicz()), (0.6, 1.0, Product())]),
]


@pytest.fixture(scope="session")
def grid():
    return GridSpec()


@pytest.fixture(scope="session")
def coarse_grid():
    return GridSpec(points=21, samples=500)
