"""Shared fixtures: the rain/commute toy model and pure-Python enumeration oracles.

The enumeration helpers here deliberately avoid the package's numpy
broadcasting paths (plain itertools loops and float arithmetic), so they can
serve as independent ground truth for the factor algebra and the inference
engine.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from margmap import BenchmarkSpec, GraphicalModel, Potential, run_benchmark
from margmap.generate import random_grid_model
from margmap.uaiio import write_uai

# Two binary variables: X0 = rain (0 sunny, 1 rainy), X1 = commute (0 walk, 1 drive).
WEATHER_TEXT = "MARKOV\n2\n2 2\n2\n1 0\n2 0 1\n\n2\n0.6 0.4\n\n4\n0.5 0.5 0.125 0.875\n"

WEATHER_JOINT = [0.30, 0.30, 0.05, 0.35]  # flat over (X0, X1), X1 fastest


def make_weather_model() -> GraphicalModel:
    return GraphicalModel(
        (2, 2),
        (
            Potential((0,), [0.6, 0.4]),
            Potential((0, 1), [[0.5, 0.5], [0.125, 0.875]]),
        ),
    )


@pytest.fixture
def weather():
    return make_weather_model()


def eval_potential(p: Potential, assignment: dict[int, int]) -> float:
    """Look one entry up by joint state, independent of table layout helpers."""
    return float(p.values[tuple(assignment[v] for v in p.scope)])


def joint_by_enumeration(model: GraphicalModel) -> dict[tuple[int, ...], float]:
    """Unnormalized joint table by direct product over every joint state."""
    table = {}
    for state in itertools.product(*(range(c) for c in model.cardinalities)):
        assignment = dict(enumerate(state))
        value = 1.0
        for p in model.potentials:
            value *= eval_potential(p, assignment)
        table[state] = value
    return table


def pr_by_enumeration(model: GraphicalModel, evidence: dict[int, int]) -> float:
    """Evidence probability by summing the enumerated joint."""
    table = joint_by_enumeration(model)
    total = sum(table.values())
    consistent = sum(
        v
        for state, v in table.items()
        if all(state[var] == s for var, s in evidence.items())
    )
    return consistent / total


def mar_by_enumeration(
    model: GraphicalModel, evidence: dict[int, int], variable: int
) -> list[float]:
    """Conditional marginal of one variable by summing the enumerated joint."""
    table = joint_by_enumeration(model)
    sums = [0.0] * model.cardinalities[variable]
    for state, v in table.items():
        if all(state[var] == s for var, s in evidence.items()):
            sums[state[variable]] += v
    total = sum(sums)
    if total <= 0:
        raise ZeroDivisionError("evidence has probability zero")
    return [s / total for s in sums]


def entropy_by_formula(probs) -> float:
    """Normalized entropy straight from its definition, via math.log."""
    k = len(probs)
    if k <= 1:
        return 0.0
    return -sum(p * math.log(p, k) for p in probs if p > 0)


GRID_EPSILONS = (0.0, 0.5, 1.0)
GRID_K = 3
GRID_Q = 500


@pytest.fixture(scope="session")
def grid_bench(tmp_path_factory):
    """A 3x3 grid benchmark shared by the trend tests; expensive, so session scoped."""
    rng = np.random.default_rng(3)
    model = random_grid_model(3, 3, 3, rng=rng, sigma=2.0)
    path = tmp_path_factory.mktemp("grid") / "grid3x3.uai"
    path.write_text(write_uai(model))
    spec = BenchmarkSpec(
        model_path=path,
        k=GRID_K,
        q=GRID_Q,
        epsilon_grid=GRID_EPSILONS,
        seed=7,
    )
    points, results, skipped = run_benchmark(spec)
    return spec, points, results, skipped
