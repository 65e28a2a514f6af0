"""One-parameter teleportation scenario built on an imperfect EPR resource.

Two single-mode squeezed beams (squeezed quadrature variance ``s``) are
combined on a balanced splitter into an EPR pair; one beam feeds the
measurement stage, the other the reconstruction stage, each through a
channel of efficiency ``eta``.  Every figure of merit then has a closed
form in (eta, s):

* ``N_out = 2*(1 - eta + eta*s)`` per quadrature,
* ``T_sum = 2 / (3 - 2*eta + 2*eta*s)`` for a coherent input,
* ``F = 1 / (2 - eta + eta*s)``.

The same scenario maps onto a :class:`~cvteleport.channel.NoiseBudget`:
each EPR beam is attenuated by ``sqrt(eta)`` and padded with vacuum, which
gives measurement and reconstruction noises of equal variance
``eta*(s + 1/s)/2 + (1 - eta)`` with correlation ``eta*(s - 1/s)/2``.
Perfect squeezing (s = 0) is supported by the closed forms but has no
finite budget: the individual EPR beams diverge while only their sums stay
quiet, so budget-based paths reject s = 0 and the sweep falls back to the
analytic limit of the criterion there.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .channel import NoiseBudget, equivalent_output_noise
from .criteria import VERDICT_MARGIN, epr_criterion

# Column schema of the sweep CSV artifact, in order.
SWEEP_CSV_COLUMNS = (
    "eta",
    "s",
    "squeezing_db",
    "n_out",
    "n_product",
    "t_sum",
    "fidelity",
    "epr_violated",
)


def default_eta_grid() -> np.ndarray:
    return np.linspace(0.0, 1.0, 101)


def default_s_grid() -> np.ndarray:
    return np.linspace(0.0, 1.0, 11)


@dataclass(frozen=True)
class EprScenario:
    """Channel efficiency ``eta`` and squeezed-quadrature variance ``s``.

    ``s = 1`` is no squeezing, ``s = 0`` the perfect-squeezing limit.
    Values above 1 describe an anti-squeezed sanity input and are flagged
    through :attr:`is_anti_squeezed` rather than rejected.
    """

    eta: float
    s: float

    def __post_init__(self):
        if not (np.isfinite(self.eta) and 0.0 <= self.eta <= 1.0):
            raise ValueError(f"eta must lie in [0, 1], got {self.eta}")
        if not (np.isfinite(self.s) and self.s >= 0.0):
            raise ValueError(f"s must be >= 0, got {self.s}")

    @property
    def is_anti_squeezed(self) -> bool:
        return self.s > 1.0

    @property
    def squeezing_db(self) -> float:
        """Squeezing in decibels; infinite in the s = 0 limit."""
        return float(np.inf) if self.s == 0.0 else float(-10.0 * np.log10(self.s))


@dataclass(frozen=True)
class SweepPoint:
    """Closed-form figures of merit at one (eta, s) grid point."""

    eta: float
    s: float
    N_out: float
    T_sum: float
    F: float
    epr_violated: bool

    @property
    def squeezing_db(self) -> float:
        return float(np.inf) if self.s == 0.0 else float(-10.0 * np.log10(self.s))


def closed_form(sc: EprScenario) -> SweepPoint:
    """Evaluate all closed forms, plus the conditional-variance verdict."""
    reduced = 1.0 - sc.eta + sc.eta * sc.s
    return SweepPoint(
        eta=sc.eta,
        s=sc.s,
        N_out=2.0 * reduced,
        T_sum=2.0 / (1.0 + 2.0 * reduced),
        F=1.0 / (1.0 + reduced),
        epr_violated=_criterion_verdict(sc),
    )


def to_noise_budget(sc: EprScenario) -> NoiseBudget:
    """The scenario's added-noise budget (requires s > 0).

    Internally cross-checks that the budget reproduces the closed-form
    output noise; the comparison is scaled by the budget variance because
    the total is a near-complete cancellation for strong squeezing.
    """
    if sc.s == 0.0:
        raise ValueError(
            "perfect squeezing has no finite noise budget "
            "(beam variances diverge); use closed_form or sweep"
        )
    v = sc.eta * (sc.s + 1.0 / sc.s) / 2.0 + (1.0 - sc.eta)
    c = sc.eta * (sc.s - 1.0 / sc.s) / 2.0
    budget = NoiseBudget(v_Xm=v, v_Ym=v, v_Xr=v, v_Yr=v, c_XmXr=c, c_YmYr=c)
    n_budget = equivalent_output_noise(budget)
    n_closed = 2.0 * (1.0 - sc.eta + sc.eta * sc.s)
    tol = 1e-12 * max(1.0, v)
    if abs(n_budget[0] - n_closed) > tol or abs(n_budget[1] - n_closed) > tol:
        raise AssertionError(
            f"budget output noise {n_budget} does not match closed form {n_closed}"
        )
    return budget


def _criterion_verdict(sc: EprScenario) -> bool:
    """Conditional-variance verdict, with the analytic limit at s = 0.

    For s > 0 this is the criterion evaluated on the noise budget.  At
    s = 0 each conditional variance tends to ``2*(1 - eta)`` even though
    the budget entries diverge, so the verdict is taken on that limit.
    """
    if sc.s == 0.0:
        limit = 2.0 * (1.0 - sc.eta)
        return limit * limit < 1.0 - VERDICT_MARGIN
    return epr_criterion(to_noise_budget(sc)).violated


def sweep(
    eta_grid: Sequence[float] | Iterable[float] | None = None,
    s_grid: Sequence[float] | Iterable[float] | None = None,
) -> list[SweepPoint]:
    """Closed forms over the (eta, s) grid, eta varying slowest.

    Defaults to 101 efficiency points over [0, 1] and squeezing values
    {0, 0.1, ..., 1.0}.
    """
    etas = default_eta_grid() if eta_grid is None else list(eta_grid)
    esses = default_s_grid() if s_grid is None else list(s_grid)
    return [
        closed_form(EprScenario(float(eta), float(s))) for eta in etas for s in esses
    ]
