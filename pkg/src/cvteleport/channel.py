"""Two-stage teleportation channel model and noise bookkeeping.

A channel is a dual-quadrature measurement stage followed by a reconstruction
stage.  The measurement produces ``M_X = g_X*X_in + f_X*Y_in + B_X`` (and the
Y analog), the reconstruction emits ``X_out = h_X*M_X + C_X``.  All noises are
zero-mean Gaussians specified by second moments, in vacuum units (vacuum
variance 1), so the validity bounds read:

* measurement noise: ``dB_X * dB_Y >= |g_X * g_Y|``
* reconstruction noise: ``dC_X * dC_Y >= 1``

A stage whose noise is exactly zero in both quadratures is admitted as the
idealized noiseless reference even though it sits below those bounds; any
other sub-bound noise is rejected.  At unity total gain the channel reduces
to a :class:`NoiseBudget`: the four added-noise variances referred to the
output, plus the same-quadrature correlations between the two stages.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import (
    GainConditionError,
    GainError,
    UnsupportedRotationError,
    ValidityError,
)
from .gaussian import GaussianVector, LinearForm

VALIDITY_TOL = 1e-9
GAIN_TOL = 1e-9

INPUT_LABELS = ("X_in", "Y_in")
MEASUREMENT_NOISE_LABELS = ("B_X", "B_Y")
RECONSTRUCTION_NOISE_LABELS = ("C_X", "C_Y")
BUDGET_LABELS = ("X_m", "X_r", "Y_m", "Y_r")


def _check_noise_pair(noise: GaussianVector, labels: tuple[str, str]) -> None:
    if noise.labels != labels:
        raise ValueError(f"noise state must carry labels {labels}, got {noise.labels}")
    if np.any(noise.mean != 0.0):
        raise ValidityError("added noises must be zero-mean")


def _is_noiseless(noise: GaussianVector) -> bool:
    return bool(np.all(np.diag(noise.cov) == 0.0))


@dataclass(frozen=True)
class MeasurementStage:
    """Dual-quadrature measurement: gains, optional quadrature mixing, noise.

    ``noise_B`` holds the second moments of the added noises (B_X, B_Y).
    With no quadrature mixing (f_X = f_Y = 0) the noise must satisfy the
    measurement uncertainty product, unless it is exactly zero (idealized
    reference stage).
    """

    g_X: float
    g_Y: float
    noise_B: GaussianVector
    f_X: float = 0.0
    f_Y: float = 0.0

    def __post_init__(self):
        _check_noise_pair(self.noise_B, MEASUREMENT_NOISE_LABELS)
        if self.f_X == 0.0 and self.f_Y == 0.0 and not _is_noiseless(self.noise_B):
            product = float(np.sqrt(self.noise_B.cov[0, 0] * self.noise_B.cov[1, 1]))
            bound = abs(self.g_X * self.g_Y)
            if product < bound - VALIDITY_TOL:
                raise ValidityError(
                    "measurement noise bound dB_X*dB_Y >= |g_X*g_Y| violated: "
                    f"{product:.6g} < {bound:.6g}"
                )


@dataclass(frozen=True)
class ReconstructionStage:
    """Output stage: rescales the measurement record and adds noise (C_X, C_Y)."""

    h_X: float
    h_Y: float
    noise_C: GaussianVector

    def __post_init__(self):
        _check_noise_pair(self.noise_C, RECONSTRUCTION_NOISE_LABELS)
        if not _is_noiseless(self.noise_C):
            product = float(np.sqrt(self.noise_C.cov[0, 0] * self.noise_C.cov[1, 1]))
            if product < 1.0 - VALIDITY_TOL:
                raise ValidityError(
                    f"reconstruction noise bound dC_X*dC_Y >= 1 violated: {product:.6g} < 1"
                )


@dataclass(frozen=True)
class InputState:
    """Gaussian input: quadrature variances and coherent amplitude.

    A coherent state has ``var_X = var_Y = 1``.  The variance product must
    respect the uncertainty bound; inputs saturating it (within tolerance)
    are flagged minimum-uncertainty, which is what makes the transfer-sum
    criterion applicable.
    """

    var_X: float
    var_Y: float
    mean_x: float = 0.0
    mean_y: float = 0.0

    def __post_init__(self):
        if not (self.var_X > 0.0 and self.var_Y > 0.0):
            raise ValidityError("input variances must be positive")
        if self.var_X * self.var_Y < 1.0 - VALIDITY_TOL:
            raise ValidityError(
                f"input uncertainty product var_X*var_Y >= 1 violated: "
                f"{self.var_X * self.var_Y:.6g} < 1"
            )

    @property
    def is_minimum_uncertainty(self) -> bool:
        return abs(self.var_X * self.var_Y - 1.0) <= VALIDITY_TOL


def vacuum_input(mean_x: float = 0.0, mean_y: float = 0.0) -> InputState:
    """Coherent-state input with the given amplitude."""
    return InputState(1.0, 1.0, mean_x, mean_y)


@dataclass(frozen=True)
class NoiseBudget:
    """Unity-gain added noises: output-referred variances and correlations.

    ``v_Xm``/``v_Ym`` are the measurement contributions, ``v_Xr``/``v_Yr``
    the reconstruction contributions, ``c_XmXr``/``c_YmYr`` the
    same-quadrature cross correlations (the resource that lets the total
    output noise beat either contribution alone).  Opposite-quadrature
    correlations never enter the criteria and are not carried.
    """

    v_Xm: float
    v_Ym: float
    v_Xr: float
    v_Yr: float
    c_XmXr: float = 0.0
    c_YmYr: float = 0.0

    def __post_init__(self):
        v = (self.v_Xm, self.v_Ym, self.v_Xr, self.v_Yr)
        if not all(np.isfinite(v)) or any(x < 0.0 for x in v):
            raise ValidityError("budget variances must be finite and >= 0")
        if not (self.v_Xm == 0.0 and self.v_Ym == 0.0):
            if self.v_Xm * self.v_Ym < 1.0 - VALIDITY_TOL:
                raise ValidityError(
                    "measurement noise product v_Xm*v_Ym >= 1 violated: "
                    f"{self.v_Xm * self.v_Ym:.6g} < 1"
                )
        if not (self.v_Xr == 0.0 and self.v_Yr == 0.0):
            if self.v_Xr * self.v_Yr < 1.0 - VALIDITY_TOL:
                raise ValidityError(
                    "reconstruction noise product v_Xr*v_Yr >= 1 violated: "
                    f"{self.v_Xr * self.v_Yr:.6g} < 1"
                )
        if self.c_XmXr**2 > self.v_Xm * self.v_Xr + VALIDITY_TOL:
            raise ValidityError(
                f"correlation bound c_XmXr^2 <= v_Xm*v_Xr violated: "
                f"{self.c_XmXr**2:.6g} > {self.v_Xm * self.v_Xr:.6g}"
            )
        if self.c_YmYr**2 > self.v_Ym * self.v_Yr + VALIDITY_TOL:
            raise ValidityError(
                f"correlation bound c_YmYr^2 <= v_Ym*v_Yr violated: "
                f"{self.c_YmYr**2:.6g} > {self.v_Ym * self.v_Yr:.6g}"
            )

    def state(self) -> GaussianVector:
        """The implied Gaussian over (X_m, X_r, Y_m, Y_r).

        Correlations that sit within tolerance beyond the Cauchy-Schwarz
        edge are clamped to the edge so the covariance stays PSD.
        """
        cx = _clamp_edge(self.c_XmXr, self.v_Xm * self.v_Xr)
        cy = _clamp_edge(self.c_YmYr, self.v_Ym * self.v_Yr)
        cov = np.array(
            [
                [self.v_Xm, cx, 0.0, 0.0],
                [cx, self.v_Xr, 0.0, 0.0],
                [0.0, 0.0, self.v_Ym, cy],
                [0.0, 0.0, cy, self.v_Yr],
            ]
        )
        return GaussianVector(BUDGET_LABELS, np.zeros(4), cov)


def _clamp_edge(c: float, bound_sq: float) -> float:
    edge = float(np.sqrt(max(bound_sq, 0.0)))
    return float(np.clip(c, -edge, edge))


def shot_noise_budget() -> NoiseBudget:
    """Both stages independently at the vacuum limit (the classical reference)."""
    return NoiseBudget(1.0, 1.0, 1.0, 1.0, 0.0, 0.0)


def ideal_budget() -> NoiseBudget:
    """The idealized noiseless channel (all budget entries zero)."""
    return NoiseBudget(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class ChannelConfig:
    """Full channel: both stages, their cross correlations, and the input.

    ``cross_cov_BC`` is the 2x2 matrix of <B_i C_j> moments with rows
    (B_X, B_Y) and columns (C_X, C_Y).  The input is uncorrelated with both
    stage noises.  The joint six-variable covariance must be PSD.
    """

    measurement: MeasurementStage
    reconstruction: ReconstructionStage
    input: InputState
    cross_cov_BC: np.ndarray = field(default_factory=lambda: np.zeros((2, 2)))

    def __post_init__(self):
        cross = np.asarray(self.cross_cov_BC, dtype=float).copy()
        if cross.shape != (2, 2):
            raise ValueError(f"cross_cov_BC must be 2x2, got {cross.shape}")
        cross.setflags(write=False)
        object.__setattr__(self, "cross_cov_BC", cross)
        self.joint_state()  # validates the joint covariance

    def joint_state(self) -> GaussianVector:
        """Joint Gaussian over (X_in, Y_in, B_X, B_Y, C_X, C_Y)."""
        cov = np.zeros((6, 6))
        cov[0, 0] = self.input.var_X
        cov[1, 1] = self.input.var_Y
        cov[2:4, 2:4] = self.measurement.noise_B.cov
        cov[4:6, 4:6] = self.reconstruction.noise_C.cov
        cov[2:4, 4:6] = self.cross_cov_BC
        cov[4:6, 2:4] = self.cross_cov_BC.T
        mean = np.array([self.input.mean_x, self.input.mean_y, 0, 0, 0, 0], dtype=float)
        labels = INPUT_LABELS + MEASUREMENT_NOISE_LABELS + RECONSTRUCTION_NOISE_LABELS
        try:
            return GaussianVector(labels, mean, cov)
        except ValidityError as exc:
            raise ValidityError(f"joint stage covariance invalid: {exc}") from exc


class ComposedChannel(NamedTuple):
    """Output observables of a composed channel, with the total gains."""

    out_X: LinearForm
    out_Y: LinearForm
    state: GaussianVector
    g_T_X: float
    g_T_Y: float


def equivalent_measurement_noise(m: MeasurementStage) -> tuple[float, float]:
    """Added measurement noise referred to the input, per quadrature.

    Dividing the noise variances by the squared gains expresses the
    measurement record in input units.  Requires nonzero gains and no
    quadrature mixing.  The referred product must respect the dual
    measurement bound (N_X * N_Y >= 1) unless the stage is the noiseless
    reference.
    """
    if m.f_X != 0.0 or m.f_Y != 0.0:
        raise UnsupportedRotationError(
            "equivalent noise referral needs f_X = f_Y = 0 (no quadrature mixing)"
        )
    if m.g_X == 0.0 or m.g_Y == 0.0:
        raise GainError("cannot refer noise to the input through a zero gain")
    n_x = float(m.noise_B.cov[0, 0]) / m.g_X**2
    n_y = float(m.noise_B.cov[1, 1]) / m.g_Y**2
    if not _is_noiseless(m.noise_B) and n_x * n_y < 1.0 - VALIDITY_TOL:
        raise ValidityError(
            f"equivalent measurement noise product N_X*N_Y >= 1 violated: {n_x * n_y:.6g} < 1"
        )
    return n_x, n_y


def transfer_coefficients(
    n_x: float, n_y: float, inp: InputState
) -> tuple[float, float]:
    """Signal-to-noise transfer coefficients for the given added noises.

    Each coefficient is the ratio of output to input SNR for that
    quadrature, which for additive noise reduces to var / (var + N).
    """
    if n_x < 0.0 or n_y < 0.0:
        raise ValueError("equivalent noises must be >= 0")
    return (
        inp.var_X / (inp.var_X + n_x),
        inp.var_Y / (inp.var_Y + n_y),
    )


def compose(config: ChannelConfig) -> ComposedChannel:
    """Output quadratures as linear forms over the joint state.

    ``out_X = h_X*(g_X*X_in + f_X*Y_in + B_X) + C_X`` and the mirror-image
    Y line (with f_Y multiplying X_in).  The total gains h*g are reported
    alongside so callers can check the unity-gain condition.
    """
    m, r = config.measurement, config.reconstruction
    out_x = LinearForm(
        {"X_in": r.h_X * m.g_X, "Y_in": r.h_X * m.f_X, "B_X": r.h_X, "C_X": 1.0}
    )
    out_y = LinearForm(
        {"X_in": r.h_Y * m.f_Y, "Y_in": r.h_Y * m.g_Y, "B_Y": r.h_Y, "C_Y": 1.0}
    )
    return ComposedChannel(out_x, out_y, config.joint_state(), r.h_X * m.g_X, r.h_Y * m.g_Y)


def to_unity_gain_budget(config: ChannelConfig) -> NoiseBudget:
    """Reduce a unity-gain channel to its output-referred noise budget.

    Requires ``h_X*g_X`` and ``h_Y*g_Y`` equal to 1 within tolerance and no
    quadrature mixing.  Only same-quadrature second moments enter the
    budget; opposite-quadrature correlations (and the off-diagonal stage
    cross terms) are validated for positivity but play no further role.
    """
    m, r = config.measurement, config.reconstruction
    if m.f_X != 0.0 or m.f_Y != 0.0:
        raise UnsupportedRotationError("unity-gain budget needs f_X = f_Y = 0")
    for quad, gain in (("X", r.h_X * m.g_X), ("Y", r.h_Y * m.g_Y)):
        if abs(gain - 1.0) > GAIN_TOL:
            raise GainConditionError(
                f"total gain on {quad} is {gain:.12g}, unity gain required"
            )
    return NoiseBudget(
        v_Xm=r.h_X**2 * float(m.noise_B.cov[0, 0]),
        v_Ym=r.h_Y**2 * float(m.noise_B.cov[1, 1]),
        v_Xr=float(r.noise_C.cov[0, 0]),
        v_Yr=float(r.noise_C.cov[1, 1]),
        c_XmXr=r.h_X * float(config.cross_cov_BC[0, 0]),
        c_YmYr=r.h_Y * float(config.cross_cov_BC[1, 1]),
    )


def equivalent_output_noise(b: NoiseBudget) -> tuple[float, float]:
    """Total added output noise per quadrature: v_m + v_r + 2c.

    The correlation term is what an entangled resource exploits; with
    perfect anticorrelation the total can reach zero.
    """
    n_x = b.v_Xm + b.v_Xr + 2.0 * b.c_XmXr
    n_y = b.v_Ym + b.v_Yr + 2.0 * b.c_YmYr
    return max(n_x, 0.0), max(n_y, 0.0)


def budget_to_channel(b: NoiseBudget, inp: InputState | None = None) -> ChannelConfig:
    """Realize a budget as an explicit unity-gain channel.

    Round trip: ``to_unity_gain_budget(budget_to_channel(b)) == b``.
    """
    if inp is None:
        inp = vacuum_input()
    noise_b = GaussianVector(
        MEASUREMENT_NOISE_LABELS, np.zeros(2), np.diag([b.v_Xm, b.v_Ym])
    )
    noise_c = GaussianVector(
        RECONSTRUCTION_NOISE_LABELS, np.zeros(2), np.diag([b.v_Xr, b.v_Yr])
    )
    return ChannelConfig(
        measurement=MeasurementStage(g_X=1.0, g_Y=1.0, noise_B=noise_b),
        reconstruction=ReconstructionStage(h_X=1.0, h_Y=1.0, noise_C=noise_c),
        input=inp,
        cross_cov_BC=np.diag([b.c_XmXr, b.c_YmYr]),
    )
