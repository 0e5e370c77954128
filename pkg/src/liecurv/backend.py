"""Element pairs and the shared semidirect backend interface.

A semidirect backend couples a ``g`` backend and an ``h`` backend through an
action ``b`` (with adjoint ``b_transpose``) and the derived bilinear map
``h_map: h x h -> g`` satisfying <b(X)Y1, Y2> = <h_map(Y1, Y2), X>.  The base
class assembles from these the product bracket, product inner product and the
closed-form product ad-transpose

    ad(X1, Y1)^T (X2, Y2) = (ad(X1)^T X2 - h_map(Y1, Y2),
                             ad(Y1)^T Y2 + b(X1)^T Y2),

so any semidirect backend is itself a plain metric-algebra backend over
``Pair`` elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


@dataclass(frozen=True)
class Pair:
    """Element of a product algebra: g-part ``x`` and h-part ``y``."""

    x: Any
    y: Any

    def __add__(self, other):
        return Pair(self.x + other.x, self.y + other.y)

    def __sub__(self, other):
        return Pair(self.x - other.x, self.y - other.y)

    def __neg__(self):
        return Pair(-self.x, -self.y)

    def __mul__(self, scalar):
        return Pair(self.x * scalar, self.y * scalar)

    __rmul__ = __mul__


def as_pair(value) -> Pair:
    if isinstance(value, Pair):
        return value
    x, y = value
    return Pair(x, y)


class SemidirectBackendBase:
    """Product-algebra operations assembled from g, h, b, b^T and h_map.

    Subclasses set ``self.g`` and ``self.h`` (plain backends) and implement
    ``b``, ``b_transpose`` and ``h_map``.
    """

    g: Any
    h: Any

    def b(self, x, y):
        raise NotImplementedError

    def b_transpose(self, x, y):
        raise NotImplementedError

    def h_map(self, y1, y2):
        raise NotImplementedError

    @property
    def isometric(self) -> bool:
        raise NotImplementedError

    # -- plain backend interface over Pair elements --

    def zero(self) -> Pair:
        return Pair(self.g.zero(), self.h.zero())

    def pair(self, x, y) -> Pair:
        return Pair(x, y)

    def bracket(self, p, q) -> Pair:
        p, q = as_pair(p), as_pair(q)
        return Pair(
            self.g.bracket(p.x, q.x),
            self.h.bracket(p.y, q.y) + self.b(p.x, q.y) - self.b(q.x, p.y),
        )

    def inner(self, p, q) -> float:
        p, q = as_pair(p), as_pair(q)
        return self.g.inner(p.x, q.x) + self.h.inner(p.y, q.y)

    def norm(self, p) -> float:
        return float(self.inner(p, p)) ** 0.5

    def ad_transpose(self, p, q) -> Pair:
        p, q = as_pair(p), as_pair(q)
        return Pair(
            self.g.ad_transpose(p.x, q.x) - self.h_map(p.y, q.y),
            self.h.ad_transpose(p.y, q.y) + self.b_transpose(p.x, q.y),
        )

    def sample_basis(self, band: int = 2, part: str | None = None):
        """Product basis as embedded pairs; ``part`` restricts to one factor."""
        gz, hz = self.g.zero(), self.h.zero()
        basis = []
        if part in (None, "g"):
            basis.extend(Pair(e, hz) for e in self.g.sample_basis(band))
        if part in (None, "h"):
            basis.extend(Pair(gz, e) for e in self.h.sample_basis(band))
        return basis
