"""Random desk-scale model generators: grids, chains, and free-form scopes."""

from __future__ import annotations

import numpy as np

from .model import GraphicalModel, Potential


def random_grid_model(
    rows: int,
    cols: int,
    cardinality: int = 2,
    *,
    rng: np.random.Generator,
    sigma: float = 1.0,
) -> GraphicalModel:
    """Pairwise grid MRF with one unary potential per node and one per edge.

    Table entries are log-normal, exp(sigma * N(0, 1)), so marginals span a
    realistic range of peakedness. Variables are numbered row-major; a chain
    is just a 1-row (or 1-column) grid.
    """
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be >= 1")
    if cardinality < 2:
        raise ValueError("cardinality must be >= 2")
    n = rows * cols
    cards = (cardinality,) * n

    def node(r: int, c: int) -> int:
        return r * cols + c

    def table(shape: tuple[int, ...]) -> np.ndarray:
        return np.exp(sigma * rng.standard_normal(shape))

    potentials = [Potential((v,), table((cardinality,))) for v in range(n)]
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                potentials.append(
                    Potential(
                        (node(r, c), node(r, c + 1)),
                        table((cardinality, cardinality)),
                    )
                )
            if r + 1 < rows:
                potentials.append(
                    Potential(
                        (node(r, c), node(r + 1, c)),
                        table((cardinality, cardinality)),
                    )
                )
    return GraphicalModel(cards, tuple(potentials))


def random_chain_model(
    n: int, cardinality: int = 2, *, rng: np.random.Generator, sigma: float = 1.0
) -> GraphicalModel:
    """Chain MRF over n variables; a 1-row grid."""
    return random_grid_model(1, n, cardinality, rng=rng, sigma=sigma)


def random_model(
    n_vars: int,
    *,
    rng: np.random.Generator,
    min_cardinality: int = 2,
    max_cardinality: int = 4,
    n_factors: int | None = None,
    max_scope: int = 3,
    low: float = 0.1,
    high: float = 1.0,
) -> GraphicalModel:
    """Free-form random model with strictly positive uniform tables.

    Draws random scopes of size 1..max_scope, then adds a unary potential for
    any variable the drawn scopes left uncovered.
    """
    if n_vars < 1:
        raise ValueError("n_vars must be >= 1")
    cards = tuple(int(c) for c in rng.integers(min_cardinality, max_cardinality + 1, n_vars))
    if n_factors is None:
        n_factors = n_vars
    potentials = []
    covered: set[int] = set()
    for _ in range(n_factors):
        size = int(rng.integers(1, min(max_scope, n_vars) + 1))
        scope = tuple(int(v) for v in rng.choice(n_vars, size=size, replace=False))
        shape = tuple(cards[v] for v in scope)
        potentials.append(Potential(scope, rng.uniform(low, high, shape)))
        covered.update(scope)
    for v in sorted(set(range(n_vars)) - covered):
        potentials.append(Potential((v,), rng.uniform(low, high, (cards[v],))))
    return GraphicalModel(cards, tuple(potentials))
