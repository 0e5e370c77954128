"""Deterministic random planes and states over any backend.

All randomness flows through a PCG64 generator seeded directly with the
user-supplied 64-bit seed; there is no global RNG state.  Elements are
standard-normal combinations of the backend's sampling basis, and planes are
orthonormalized by Gram-Schmidt in the backend inner product (two passes).
"""

from __future__ import annotations

import numpy as np

from .curvature import Plane
from .errors import SamplingExhausted

#: Plane families over a semidirect backend.  ``contains-h`` keeps the second
#: leg purely in the h factor (legs are normalized but not orthogonalized).
FAMILIES = ("full", "gg", "hh", "gh", "contains-h")


def rng_for_seed(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def linear_combination(basis, coeffs):
    total = None
    for element, c in zip(basis, coeffs):
        piece = float(c) * element
        total = piece if total is None else total + piece
    if total is None:
        raise ValueError("empty sampling basis")
    return total


def random_element(backend, rng, band: int = 2, part: str | None = None):
    """Standard-normal combination of the sampling basis (optionally one factor)."""
    if part is None:
        basis = backend.sample_basis(band)
    else:
        basis = backend.sample_basis(band, part=part)
    return linear_combination(basis, rng.standard_normal(len(basis)))


def _normalize(backend, v, floor: float = 1e-12):
    n = backend.norm(v)
    if n <= floor:
        return None
    return (1.0 / n) * v


def _orthonormal_pair(backend, x, y):
    x = _normalize(backend, x)
    if x is None:
        return None
    for _ in range(2):  # two Gram-Schmidt passes for numerical orthogonality
        y = y - backend.inner(y, x) * x
    y = _normalize(backend, y)
    if y is None:
        return None
    return x, y


def _family_parts(family: str):
    if family not in FAMILIES:
        raise ValueError(f"unknown plane family {family!r} (expected one of {FAMILIES})")
    return {
        "full": (None, None),
        "gg": ("g", "g"),
        "hh": ("h", "h"),
        "gh": ("g", "h"),
        "contains-h": (None, "h"),
    }[family]


def sample_planes(backend, seed: int, count: int, family: str = "full", band: int = 2):
    """Draw ``count`` non-degenerate planes, deterministically in the seed.

    For every family except ``contains-h`` the two legs are orthonormalized,
    so the plane Gram determinant is one.  ``contains-h`` planes keep their
    second leg exactly in the h factor: both legs are normalized and draws
    with nearly collinear legs are rejected.
    """
    part1, part2 = _family_parts(family)
    if (part1 or part2) and not hasattr(backend, "h_map"):
        raise ValueError(f"family {family!r} needs a semidirect backend")
    rng = rng_for_seed(seed)
    planes: list[Plane] = []
    budget = 100 * max(count, 1)
    while len(planes) < count:
        if budget <= 0:
            raise SamplingExhausted(f"no non-degenerate draw after 100x{count} retries")
        budget -= 1
        x = random_element(backend, rng, band=band, part=part1)
        y = random_element(backend, rng, band=band, part=part2)
        if family == "contains-h":
            x = _normalize(backend, x)
            y = _normalize(backend, y)
            if x is None or y is None:
                continue
            gram2 = 1.0 - backend.inner(x, y) ** 2
            if gram2 < 0.05:
                continue
            planes.append(Plane(x, y))
        else:
            pair = _orthonormal_pair(backend, x, y)
            if pair is None:
                continue
            planes.append(Plane(*pair))
    return planes


def random_state(backend, seed: int, band: int = 2, normalize: bool = True):
    """One random element (for geodesic initial data), unit norm by default."""
    rng = rng_for_seed(seed)
    v = random_element(backend, rng, band=band)
    if normalize:
        u = _normalize(backend, v)
        if u is not None:
            return u
    return v
