"""Shared fixtures-in-spirit: canonical builtin sets and numeric helpers."""

import numpy as np

from liecurv import catalog
from liecurv.algebra import DenseBackend
from liecurv.backend import Pair

#: Seeds of the five random 4-dimensional solvable algebras used throughout.
SOLVABLE_SEEDS = (101, 102, 103, 104, 105)


def relerr(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))


def rel_vec_err(a, b) -> float:
    a, b = np.asarray(a, float), np.asarray(b, float)
    scale = max(1.0, float(np.max(np.abs(a))), float(np.max(np.abs(b))))
    return float(np.max(np.abs(a - b))) / scale


def finite_algebras():
    """Named finite-dimensional backends exercised by the property tests."""
    entries = [
        ("so3:I", DenseBackend(catalog.so3())),
        ("so3:diag123", DenseBackend(catalog.so3(gram=[1.0, 2.0, 3.0]))),
    ]
    for seed in SOLVABLE_SEEDS[:3]:
        entries.append((f"solvable4:{seed}", DenseBackend(catalog.random_solvable(4, seed))))
    return entries


def semidirect_builtins():
    """The canonical semidirect test set: five named plus five seeded random."""
    entries = [
        ("conjugation:so3:I", catalog.conjugation(catalog.so3())),
        ("conjugation:so3:diag123", catalog.conjugation(catalog.so3(gram=[1.0, 2.0, 3.0]))),
        ("linear_so3_on_r3", catalog.linear_so3_on_r3()),
        ("magnetic:so3:I", catalog.magnetic(catalog.so3())),
        ("magnetic:so3:diag123", catalog.magnetic(catalog.so3(gram=[1.0, 2.0, 3.0]))),
    ]
    for seed in SOLVABLE_SEEDS[:3]:
        entries.append((f"magnetic:solvable4:{seed}", catalog.magnetic(catalog.random_solvable(4, seed))))
    for seed in SOLVABLE_SEEDS[3:]:
        entries.append((f"conjugation:solvable4:{seed}", catalog.conjugation(catalog.random_solvable(4, seed))))
    return entries


def random_vectors(rng, dim, count):
    return [rng.standard_normal(dim) for _ in range(count)]


def random_pair(rng, sd) -> Pair:
    return Pair(rng.standard_normal(sd.g.dim), rng.standard_normal(sd.h.dim))
