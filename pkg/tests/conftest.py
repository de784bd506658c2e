import numpy as np
import pytest

from pwtpack.model import build_context, parse_instance

TOY4_TEXT = """PROBLEM NAME:\tTOY4
KNAPSACK DATA TYPE:\tuncorrelated
DIMENSION:\t4
NUMBER OF ITEMS:\t3
CAPACITY OF KNAPSACK:\t15
MIN SPEED:\t0.1
MAX SPEED:\t1.0
RENTING RATIO:\t1
EDGE_WEIGHT_TYPE:\tEUC_2D
NODE_COORD_SECTION\t(INDEX, X, Y):
1\t0\t0
2\t1\t0
3\t1\t1
4\t0\t1
ITEMS SECTION\t(INDEX, PROFIT, WEIGHT, ASSIGNED NODE NUMBER):
1\t50\t10\t2
2\t20\t5\t3
3\t30\t5\t4
"""


@pytest.fixture
def toy4():
    return parse_instance(TOY4_TEXT)


@pytest.fixture
def toy4_ctx(toy4):
    return build_context(toy4, [1, 2, 3, 4])


@pytest.fixture
def toy4_files(tmp_path):
    inst = tmp_path / "toy4.ttp"
    inst.write_text(TOY4_TEXT)
    tour = tmp_path / "toy4.tour"
    tour.write_text("1 2 3 4\n")
    return inst, tour


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
