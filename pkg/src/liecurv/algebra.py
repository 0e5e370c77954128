"""Finite-dimensional metric Lie algebras.

An algebra is given by its structure constants c[i, j, k] (meaning
[e_i, e_j] = sum_k c[i, j, k] e_k) together with a symmetric positive
definite Gram matrix G defining the inner product <a, b> = a^T G b.
Elements are plain coordinate vectors (numpy arrays) in the declared basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve, eigvalsh

from .errors import DimensionMismatch, ValidationFailure

#: Default relative tolerance for the Jacobi identity check.
JACOBI_TOL = 1e-10

#: Default relative tolerance for adjointness residuals.
ADJOINT_TOL = 1e-10


@dataclass(eq=False)
class MetricAlgebraSpec:
    """Structure constants plus Gram matrix; immutable after construction."""

    structure: np.ndarray
    gram: np.ndarray
    name: str = ""

    def __post_init__(self):
        self.structure = np.asarray(self.structure, dtype=float)
        self.gram = np.asarray(self.gram, dtype=float)
        n = self.gram.shape[0]
        if self.gram.shape != (n, n):
            raise ValueError("gram must be square")
        if self.structure.shape != (n, n, n):
            raise ValueError(
                f"structure shape {self.structure.shape} incompatible with gram {self.gram.shape}"
            )

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    def basis(self, i: int) -> np.ndarray:
        e = np.zeros(self.dim)
        e[i] = 1.0
        return e


@dataclass
class ValidationIssue:
    invariant: str
    location: tuple
    residual: float
    message: str = ""

    def __str__(self):
        loc = "" if not self.location else f" at {self.location}"
        msg = f" ({self.message})" if self.message else ""
        return f"FAIL {self.invariant}{loc}: residual {self.residual:.3e}{msg}"


@dataclass
class ValidationReport:
    """Outcome of validating a spec; failures are entries, never exceptions."""

    subject: str
    issues: list[ValidationIssue] = field(default_factory=list)
    checked: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.issues

    def add(self, invariant: str, location: tuple, residual: float, message: str = ""):
        self.issues.append(ValidationIssue(invariant, location, residual, message))

    def __str__(self):
        head = f"validation of {self.subject}: " + ("pass" if self.passed else "FAIL")
        lines = [head]
        for name in self.checked:
            if not any(i.invariant == name for i in self.issues):
                lines.append(f"  ok   {name}")
        lines.extend("  " + str(i) for i in self.issues)
        return "\n".join(lines)


def _antisymmetry_worst(c: np.ndarray):
    resid = c + np.transpose(c, (1, 0, 2))
    idx = np.unravel_index(np.argmax(np.abs(resid)), resid.shape)
    return idx, float(np.abs(resid[idx]))


def _jacobi_worst(c: np.ndarray):
    # cyclic sum of [[e_i,e_j],e_k] in coordinates: sum_m c[i,j,m] c[m,k,l] + cyc
    d1 = np.einsum("ijm,mkl->ijkl", c, c)
    resid = d1 + np.transpose(d1, (1, 2, 0, 3)) + np.transpose(d1, (2, 0, 1, 3))
    idx = np.unravel_index(np.argmax(np.abs(resid)), resid.shape)
    return idx[:3], float(np.abs(resid[idx]))


def validate(spec: MetricAlgebraSpec, jacobi_tol: float = JACOBI_TOL) -> ValidationReport:
    """Check antisymmetry, the Jacobi identity and positive definiteness.

    Residuals are relative to the size of the structure constants (with a
    unit floor), so an exactly-given algebra passes regardless of scale.
    """
    report = ValidationReport(subject=spec.name or "algebra")
    report.checked = ["antisymmetry", "jacobi", "gram_symmetric", "gram_positive_definite"]
    c = spec.structure
    cmax = max(1.0, float(np.max(np.abs(c))) if c.size else 0.0)

    idx, worst = _antisymmetry_worst(c)
    if worst > jacobi_tol * cmax:
        report.add("antisymmetry", idx, worst / cmax)

    idx, worst = _jacobi_worst(c)
    if worst > jacobi_tol * cmax * cmax:
        report.add("jacobi", idx, worst / (cmax * cmax))

    g = spec.gram
    gmax = max(1.0, float(np.max(np.abs(g))))
    asym = float(np.max(np.abs(g - g.T)))
    if asym > jacobi_tol * gmax:
        report.add("gram_symmetric", (), asym / gmax)
    else:
        try:
            cho_factor(g)
        except np.linalg.LinAlgError:
            lam = float(eigvalsh(g)[0])
            report.add("gram_positive_definite", (), lam, "smallest eigenvalue")
        except ValueError:
            report.add("gram_positive_definite", (), float("nan"), "factorization rejected input")
    return report


class DenseBackend:
    """Metric-algebra operations over a validated finite-dimensional spec.

    Exposes the backend operation set (bracket, inner, ad_transpose) that
    the curvature and geodesic engines consume.  The Gram factorization is
    computed once and cached; all operations are pure.
    """

    def __init__(self, spec: MetricAlgebraSpec, check: bool = True, jacobi_tol: float = JACOBI_TOL):
        if check:
            report = validate(spec, jacobi_tol=jacobi_tol)
            if not report.passed:
                raise ValidationFailure(report)
        self.spec = spec
        self.dim = spec.dim
        self._cho = cho_factor(spec.gram)

    @property
    def name(self) -> str:
        return self.spec.name or f"algebra(dim={self.dim})"

    def _coerce(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=float)
        if a.shape != (self.dim,):
            raise DimensionMismatch(f"expected vector of length {self.dim}, got shape {a.shape}")
        return a

    def zero(self) -> np.ndarray:
        return np.zeros(self.dim)

    def basis(self, i: int) -> np.ndarray:
        return self.spec.basis(i)

    def bracket(self, a, b) -> np.ndarray:
        a, b = self._coerce(a), self._coerce(b)
        return np.einsum("i,j,ijk->k", a, b, self.spec.structure)

    def inner(self, a, b) -> float:
        a, b = self._coerce(a), self._coerce(b)
        return float(a @ self.spec.gram @ b)

    def norm(self, a) -> float:
        return float(np.sqrt(max(self.inner(a, a), 0.0)))

    def ad(self, x) -> np.ndarray:
        """Matrix of ad(x) = [x, .] in the declared basis."""
        x = self._coerce(x)
        return np.einsum("i,ijk->kj", x, self.spec.structure)

    def ad_transpose(self, x, y) -> np.ndarray:
        """Adjoint of ad(x) applied to y: solves G r = ad(x)^T G y."""
        y = self._coerce(y)
        return cho_solve(self._cho, self.ad(x).T @ (self.spec.gram @ y))

    def gram_solve(self, v) -> np.ndarray:
        """Solve G r = v for a vector or a stack of columns."""
        v = np.asarray(v, dtype=float)
        if v.shape[0] != self.dim:
            raise DimensionMismatch(f"expected leading dimension {self.dim}, got {v.shape}")
        return cho_solve(self._cho, v)

    def sample_basis(self, band: int = 0):
        """Basis elements for random sampling (band is a torus-only notion)."""
        return [self.basis(i) for i in range(self.dim)]

    def is_ad_invariant(self, tol: float = ADJOINT_TOL) -> bool:
        """True when every ad(e_i) is skew-adjoint for the Gram inner product."""
        g = self.spec.gram
        scale = max(1.0, float(np.max(np.abs(self.spec.structure))) * float(np.max(np.abs(g))))
        for i in range(self.dim):
            m = self.ad(self.basis(i))
            if np.max(np.abs(g @ m + m.T @ g)) > tol * scale:
                return False
        return True
