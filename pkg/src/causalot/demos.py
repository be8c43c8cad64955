"""Ready-made instances: demo scenarios and seeded random generators."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .exceptions import InputError
from .io import Instance
from .measure import DiscreteMeasure
from .spacetime import CausalGraphModel, MinkowskiModel, to_fraction

__all__ = ["hegerfeldt", "geometric", "diamond", "random_graph", "random_minkowski", "generate"]


def _random_weights(rng: np.random.Generator, ids) -> DiscreteMeasure:
    raw = [int(w) for w in rng.integers(1, 10, size=len(ids))]
    total = sum(raw)
    return DiscreteMeasure({int(p): Fraction(w, total) for p, w in zip(ids, raw)})


def _decimal(x: float, places: int) -> Fraction:
    return Fraction(f"{x:.{places}f}")


def hegerfeldt(leak=Fraction(1, 100), atoms: int = 5) -> Instance:
    """Localized initial state whose evolved state leaks outside the light cone.

    ``mu`` is uniform on ``atoms`` points of the slab ``t = 0, |x| <= 1``;
    ``nu`` sits at ``t = 1`` with mass ``1 - leak`` at ``x = 0`` (inside the
    future of every initial atom) and mass ``leak`` at ``x = 10`` (outside it).
    """
    leak = to_fraction(leak)
    if not 0 <= leak < 1:
        raise InputError("leak mass must lie in [0, 1)")
    if atoms < 1:
        raise InputError("need at least one initial atom")
    xs = [Fraction(0)] if atoms == 1 else [Fraction(-1) + Fraction(2 * k, atoms - 1) for k in range(atoms)]
    events = [(Fraction(0), x) for x in xs] + [(Fraction(1), Fraction(0)), (Fraction(1), Fraction(10))]
    model = MinkowskiModel(events, spatial_dim=1)
    mu = DiscreteMeasure({k: Fraction(1, atoms) for k in range(atoms)})
    nu = DiscreteMeasure({atoms: 1 - leak, atoms + 1: leak})
    return Instance(model, {"mu": mu, "nu": nu})


def geometric(n: int = 10, s: float = 1.0) -> Instance:
    """Truncated geometric escape to infinity in 1+1 Minkowski space.

    ``mu = δ_(0,0)``; ``nu`` has atoms at ``(2^(i/s), 0)`` for ``i = 1..n`` with
    weights ``2^-i`` renormalized to total mass 1.
    """
    if n < 1:
        raise InputError("geometric demo needs N >= 1")
    if not 0 < s <= 1:
        raise InputError("exponent s must lie in (0, 1]")
    if s == 1:
        times = [Fraction(2**i) for i in range(1, n + 1)]
    else:
        times = [to_fraction(2.0 ** (i / s)) for i in range(1, n + 1)]
    model = MinkowskiModel([(0, 0)] + [(t, 0) for t in times], spatial_dim=1)
    total = 2**n - 1
    nu = DiscreteMeasure({i: Fraction(2 ** (n - i), total) for i in range(1, n + 1)})
    return Instance(model, {"mu": DiscreteMeasure({0: 1}), "nu": nu})


def diamond(count: int = 10, seed: int = 0) -> Instance:
    """Random points in the causal diamond between ``(0, 0)`` and ``(2, 0)``.

    The earlier half of the points (by time) carry ``mu``, the later half
    ``nu``; coordinates are rounded to 6 decimals.
    """
    if count < 2:
        raise InputError("diamond demo needs count >= 2")
    rng = np.random.default_rng(seed)
    pts = []
    while len(pts) < count:
        t, x = rng.uniform(0, 2), rng.uniform(-1, 1)
        if abs(x) <= min(t, 2 - t):
            pts.append((_decimal(t, 6), _decimal(x, 6)))
    pts.sort()
    model = MinkowskiModel(pts, spatial_dim=1)
    half = count // 2
    mu = _random_weights(rng, range(half))
    nu = _random_weights(rng, range(half, count))
    return Instance(model, {"mu": mu, "nu": nu})


def _random_measures(rng: np.random.Generator, n: int, labels=("mu", "nu", "rho")) -> dict:
    out = {}
    for label in labels:
        k = int(rng.integers(1, min(n, 5) + 1))
        ids = sorted(int(p) for p in rng.choice(n, size=k, replace=False))
        out[label] = _random_weights(rng, ids)
    return out


def random_graph(size: int, rng: np.random.Generator, edge_prob: float = 0.3, null_prob: float = 0.25) -> CausalGraphModel:
    """Random DAG on ``size`` events; edges only go from lower to higher id."""
    edges = []
    for i in range(size):
        for j in range(i + 1, size):
            if rng.random() < edge_prob:
                if rng.random() < null_prob:
                    edges.append((i, j, Fraction(0), "null"))
                else:
                    edges.append((i, j, Fraction(int(rng.integers(1, 9)), 4), "timelike"))
    return CausalGraphModel(size, edges)


def random_minkowski(size: int, rng: np.random.Generator, spatial_dim: int = 1, box: float = 10.0) -> MinkowskiModel:
    """Uniform points in ``[0, box] x [-box/2, box/2]^d``, 3 decimals."""
    pts = [
        [_decimal(rng.uniform(0, box), 3)]
        + [_decimal(rng.uniform(-box / 2, box / 2), 3) for _ in range(spatial_dim)]
        for _ in range(size)
    ]
    return MinkowskiModel(pts, spatial_dim=spatial_dim)


def generate(kind: str, size: int, seed: int = 0, spatial_dim: int = 1) -> Instance:
    """Seeded random instance with measures ``mu``, ``nu`` and ``rho``."""
    if size < 1:
        raise InputError("size must be positive")
    rng = np.random.default_rng(seed)
    if kind == "graph":
        model = random_graph(size, rng)
    elif kind == "minkowski":
        model = random_minkowski(size, rng, spatial_dim)
    else:
        raise InputError(f"unknown model kind {kind!r} (expected 'graph' or 'minkowski')")
    return Instance(model, _random_measures(rng, size))
