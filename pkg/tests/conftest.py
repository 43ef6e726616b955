import numpy as np
import pytest

from grane import (
    BoxSet,
    QuadraticGame,
    make_quadratic_game,
    mixing_from_laplacian,
    path_graph,
    random_tree,
)


def two_player_game(c: float) -> QuadraticGame:
    """The 2-player benchmark: a=(2,2), b=(-2,0), antisymmetric coupling c."""
    boxes = [BoxSet(-10.0, 10.0), BoxSet(-10.0, 10.0)]
    return QuadraticGame([2.0, 2.0], [-2.0, 0.0], [[0.0, c], [-c, 0.0]], boxes)


def linear_solve_equilibrium(game: QuadraticGame) -> np.ndarray:
    """Independent oracle for interior equilibria of quadratic games."""
    return np.linalg.solve(game.jacobian(), -game.b)


@pytest.fixture
def g2():
    return two_player_game(1.0)


@pytest.fixture
def g2r():
    return two_player_game(3.0)


@pytest.fixture
def w2():
    return mixing_from_laplacian(path_graph(2))


@pytest.fixture(scope="session")
def benchmark20():
    """The 20-player antisymmetric benchmark game with its tree mixing."""
    game = make_quadratic_game(
        20, 42, a_range=(1, 2), b_range=(-1, 1), c_range=(-0.01, 0.01),
        box_range=(5, 10), antisymmetric=True,
    )
    mixing = mixing_from_laplacian(random_tree(20, 7))
    return game, mixing
