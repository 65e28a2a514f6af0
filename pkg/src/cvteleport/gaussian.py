"""Labeled Gaussian vectors and linear observables on them.

Everything in this package works at the level of second moments: a state is
a labeled mean vector plus covariance matrix, an observable is a linear form
over the labels, and all derived quantities (variances, covariances,
conditional variances) are bilinear expressions in the covariance.

Units follow the vacuum convention used throughout: a vacuum mode has
variance 1 in each quadrature, so conjugate-pair uncertainty products are
bounded below by 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .errors import DegenerateConditioningError, LabelError, ValidityError

# Tolerances for second-moment validation.  Asymmetry beyond SYMMETRY_TOL is
# treated as caller error rather than rounding; eigenvalues slightly below
# zero (down to PSD_TOL) are accepted as rounding of a PSD matrix.
SYMMETRY_TOL = 1e-9
PSD_TOL = -1e-10
_VARIANCE_CLAMP = -1e-12
_SAMPLE_JITTER = 1e-12


@dataclass(frozen=True)
class LinearForm:
    """A linear observable ``sum_i coeff_i * var_i + constant``.

    ``terms`` maps variable labels to coefficients.  Forms are immutable and
    support addition, subtraction and scalar multiplication, which keeps
    channel composition code close to the algebra it implements.
    """

    terms: Mapping[str, float]
    constant: float = 0.0

    def __post_init__(self):
        clean = {str(k): float(v) for k, v in dict(self.terms).items()}
        if not all(np.isfinite(v) for v in clean.values()) or not np.isfinite(self.constant):
            raise ValueError("linear form coefficients must be finite")
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "constant", float(self.constant))

    def __add__(self, other: "LinearForm | float") -> "LinearForm":
        if isinstance(other, (int, float)):
            return LinearForm(dict(self.terms), self.constant + other)
        if not isinstance(other, LinearForm):
            return NotImplemented
        merged = dict(self.terms)
        for k, v in other.terms.items():
            merged[k] = merged.get(k, 0.0) + v
        return LinearForm(merged, self.constant + other.constant)

    __radd__ = __add__

    def __sub__(self, other: "LinearForm | float") -> "LinearForm":
        if isinstance(other, (int, float)):
            return self + (-other)
        if not isinstance(other, LinearForm):
            return NotImplemented
        return self + (-1.0) * other

    def __mul__(self, scalar: float) -> "LinearForm":
        if not isinstance(scalar, (int, float)):
            return NotImplemented
        return LinearForm({k: scalar * v for k, v in self.terms.items()}, scalar * self.constant)

    __rmul__ = __mul__


def term(label: str, coeff: float = 1.0) -> LinearForm:
    """Shorthand for the single-variable form ``coeff * label``."""
    return LinearForm({label: coeff})


@dataclass(frozen=True)
class GaussianVector:
    """An immutable labeled Gaussian: unique labels, mean vector, covariance.

    The covariance is symmetrized on construction; the pre-symmetrization
    asymmetry magnitude is recorded in ``asymmetry``.  Asymmetry beyond
    ``SYMMETRY_TOL`` or an eigenvalue below ``PSD_TOL`` raises
    :class:`ValidityError`.
    """

    labels: tuple[str, ...]
    mean: np.ndarray
    cov: np.ndarray
    asymmetry: float = field(init=False)

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        if len(labels) == 0:
            raise ValueError("state needs at least one variable")
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate labels in {labels}")
        mean = np.asarray(self.mean, dtype=float).reshape(-1).copy()
        cov = np.asarray(self.cov, dtype=float)
        d = len(labels)
        if mean.shape != (d,) or cov.shape != (d, d):
            raise ValueError(
                f"shape mismatch: {d} labels, mean {mean.shape}, cov {cov.shape}"
            )
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(cov))):
            raise ValueError("mean and covariance must be finite")
        asym = float(np.max(np.abs(cov - cov.T))) if d > 1 else 0.0
        if asym > SYMMETRY_TOL:
            raise ValidityError(f"covariance asymmetry {asym:.3e} exceeds {SYMMETRY_TOL:.0e}")
        sym = (cov + cov.T) / 2.0
        lo = float(np.min(np.linalg.eigvalsh(sym)))
        if lo < PSD_TOL:
            raise ValidityError(
                f"covariance is not positive semidefinite: min eigenvalue {lo:.3e}"
            )
        mean.setflags(write=False)
        sym.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", sym)
        object.__setattr__(self, "asymmetry", asym)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise LabelError(f"unknown label {label!r}; state has {self.labels}") from None


def _coefficients(form: LinearForm, state: GaussianVector) -> np.ndarray:
    a = np.zeros(state.dim)
    for label, coeff in form.terms.items():
        a[state.index(label)] = coeff
    return a


def mean_of(form: LinearForm, state: GaussianVector) -> float:
    """Expectation value of a linear form over the state."""
    return float(_coefficients(form, state) @ state.mean + form.constant)


def variance_of(form: LinearForm, state: GaussianVector) -> float:
    """Variance of a linear form; tiny negative rounding is clamped to 0."""
    a = _coefficients(form, state)
    v = float(a @ state.cov @ a)
    return v if v > 0.0 else 0.0


def covariance_of(a: LinearForm, b: LinearForm, state: GaussianVector) -> float:
    """Covariance between two linear forms (bilinear in the state covariance)."""
    va = _coefficients(a, state)
    vb = _coefficients(b, state)
    return float(va @ state.cov @ vb)


def conditional_variance(a: LinearForm, b: LinearForm, state: GaussianVector) -> float:
    """Variance of ``a`` remaining after the optimal linear estimate from ``b``.

    Computes ``var(a) - cov(a, b)^2 / var(b)``.  Conditioning on a
    zero-variance variable returns ``var(a)`` unchanged when the correlation
    is zero too, and raises :class:`DegenerateConditioningError` otherwise
    (that combination cannot come from a consistent covariance).
    """
    v_a = variance_of(a, state)
    v_b = variance_of(b, state)
    c = covariance_of(a, b, state)
    if v_b == 0.0:
        if c != 0.0:
            raise DegenerateConditioningError(
                f"conditioning variable has zero variance but covariance {c:.3e}"
            )
        return v_a
    v = v_a - c * c / v_b
    return v if v > 0.0 else 0.0


def sample(state: GaussianVector, n: int, seed) -> np.ndarray:
    """Draw ``n`` rows from the state, deterministically for a fixed seed.

    Zero-variance coordinates come out exactly equal to their means.  The
    remaining block is Cholesky-factorized; if that fails on a singular but
    valid covariance, a one-time jitter of ``1e-12`` on the diagonal is
    applied before retrying.
    """
    if n < 1:
        raise ValueError("sample count must be >= 1")
    rng = np.random.default_rng(seed)
    out = np.tile(state.mean, (n, 1))
    live = np.flatnonzero(np.diag(state.cov) > 0.0)
    if live.size == 0:
        return out
    sub = state.cov[np.ix_(live, live)]
    try:
        chol = np.linalg.cholesky(sub)
    except np.linalg.LinAlgError:
        chol = np.linalg.cholesky(sub + _SAMPLE_JITTER * np.eye(live.size))
    z = rng.standard_normal((n, live.size))
    out[:, live] += z @ chol.T
    return out


def apply_form(form: LinearForm, state: GaussianVector, samples: np.ndarray) -> np.ndarray:
    """Evaluate a linear form on an array of samples (rows match state labels)."""
    return np.asarray(samples) @ _coefficients(form, state) + form.constant


def labels_of(forms: Iterable[LinearForm]) -> tuple[str, ...]:
    """All labels referenced by the given forms, in first-seen order."""
    seen: dict[str, None] = {}
    for f in forms:
        for k in f.terms:
            seen.setdefault(k)
    return tuple(seen)
