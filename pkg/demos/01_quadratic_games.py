"""Build quadratic games, query their gradients, and solve them centrally.

Every player i minimizes 0.5*a_i*x_i^2 + b_i*x_i + (sum_j c_ij x_j)*x_i over
an interval. The stacked partial gradients form the game mapping; its zero
(clamped to the boxes) is the Nash equilibrium.
"""

import numpy as np

from grane import BoxSet, QuadraticGame, centralized_gradient_play, make_quadratic_game

# A tiny 2-player game with antisymmetric coupling. Player 0 wants x_0 near 1
# (cost 0.5*2*x^2 - 2x), but the players' couplings pull against each other.
game = QuadraticGame(
    a=[2.0, 2.0],
    b=[-2.0, 0.0],
    coupling=[[0.0, 1.0], [-1.0, 0.0]],
    boxes=[BoxSet(-10, 10), BoxSet(-10, 10)],
)

print("partial gradients at the origin:", game.mapping([0.0, 0.0]))
print("exact equilibrium (linear solve):", np.linalg.solve(game.jacobian(), -game.b))

x_star = centralized_gradient_play(game, tol=1e-14)
print("projected gradient play reaches:", x_star)
print("gradients there (should vanish):", game.mapping(x_star))

# The generator draws a, b, the coupling and the boxes uniformly, seeded.
big = make_quadratic_game(
    n=20, seed=42,
    a_range=(1, 2), b_range=(-1, 1), c_range=(-0.01, 0.01), box_range=(5, 10),
    antisymmetric=True,
)
print("\n20-player game: coupling is antisymmetric:", big.antisymmetric)

c = big.constants
print("monotonicity constant mu_F :", c.mu_F)
print("restricted constant mu_r   :", c.mu_r, "(= min a_i for antisymmetric coupling)")
print("per-player Lipschitz bounds:", np.round(c.per_player_lipschitz, 3))

x_star = centralized_gradient_play(big, tol=1e-13)
print("equilibrium found in", f"[{x_star.min():.3f}, {x_star.max():.3f}]")

# Games serialize to plain JSON for reproducible experiments.
blob = big.dumps()
print("\nround-trips through JSON:", QuadraticGame.loads(blob).dumps() == blob)
