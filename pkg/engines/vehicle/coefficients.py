"""Aero/hydrodynamic coefficient sources: tabulated grids or an analytic slender-body fallback."""

import logging
from pathlib import Path
from typing import Literal, Optional, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict
from scipy.interpolate import RegularGridInterpolator

from engines.errors import ParameterError

logger = logging.getLogger(__name__)

AXIS_COLUMNS = ("alpha_deg", "beta_deg", "mach")
FORCE_AXES = "xyzlmn"
RATE_TERMS = "0pqr"
# cx0..cn0, cxp..cnp, cxq..cnq, cxr..cnr
COEFFICIENT_COLUMNS = tuple(f"c{axis}{term}" for term in RATE_TERMS for axis in FORCE_AXES)

CoefficientMode = Literal["tabulated", "analytic_fallback"]
ArrayLike = Union[float, np.ndarray]


class AnalyticCoefficients(BaseModel):
    """Constants of the linear slender-body fallback (slopes per radian)."""

    model_config = ConfigDict(frozen=True)

    axial: float = -0.12
    normal_slope: float = -6.0
    pitch_slope: float = -2.0
    pitch_damping: float = -400.0

    @classmethod
    def placeholder(cls) -> "AnalyticCoefficients":
        """The lighter placeholder set (C_x0=-0.30, C_za=-2, C_ma=-0.5, C_mq=-200)."""
        return cls(axial=-0.30, normal_slope=-2.0, pitch_slope=-0.5, pitch_damping=-200.0)


class CoefficientProvider:
    """Answers C[i, j] for i in (x, y, z, l, m, n) and j in (static, p, q, r) at a flight condition.

    Angles passed to :meth:`coefficients` are in radians; table axes are in degrees.
    Out-of-grid queries clamp to the boundary and bump :attr:`clamp_count`.
    """

    def __init__(
        self,
        mode: CoefficientMode,
        analytic: Optional[AnalyticCoefficients] = None,
        axes: Optional[Tuple[np.ndarray, np.ndarray, np.ndarray]] = None,
        values: Optional[np.ndarray] = None,
        source: Optional[str] = None,
    ):
        self.mode = mode
        self.source = source
        self.clamp_count = 0
        self._analytic = analytic
        self._interpolator: Optional[RegularGridInterpolator] = None
        self._bounds: Optional[np.ndarray] = None

        if mode == "analytic_fallback":
            self._analytic = analytic or AnalyticCoefficients()
        elif mode == "tabulated":
            if axes is None or values is None:
                raise ParameterError("tabulated provider needs grid axes and values")
            self._build_grid(axes, values)
        else:
            raise ParameterError(f"unknown coefficient mode '{mode}'")

        logger.info(f"CoefficientProvider initialized (mode={mode}, source={source or 'built-in'})")

    @classmethod
    def analytic(cls, constants: Optional[AnalyticCoefficients] = None) -> "CoefficientProvider":
        return cls("analytic_fallback", analytic=constants or AnalyticCoefficients())

    @classmethod
    def tabulated(
        cls,
        alpha_deg: np.ndarray,
        beta_deg: np.ndarray,
        mach: np.ndarray,
        values: np.ndarray,
        source: Optional[str] = None,
    ) -> "CoefficientProvider":
        """Build from axis vectors and a (n_alpha, n_beta, n_mach, 24) value block."""
        axes = (np.asarray(alpha_deg, float), np.asarray(beta_deg, float), np.asarray(mach, float))
        return cls("tabulated", axes=axes, values=np.asarray(values, float), source=source)

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "CoefficientProvider":
        """Load a delimited table with one row per grid point of a full Cartesian grid."""
        path = Path(path)
        if not path.is_file():
            raise ParameterError(f"coefficient table not found: {path}")
        try:
            frame = pd.read_csv(path, sep=None, engine="python", comment="#")
        except Exception as e:
            raise ParameterError(f"could not read coefficient table {path}: {e}") from e

        frame.columns = [str(c).strip().lower() for c in frame.columns]
        missing_axes = [c for c in AXIS_COLUMNS if c not in frame.columns]
        if missing_axes:
            raise ParameterError(f"coefficient table {path} lacks axis columns {missing_axes}")
        unknown = [c for c in frame.columns if c not in AXIS_COLUMNS and c not in COEFFICIENT_COLUMNS]
        if unknown:
            raise ParameterError(f"coefficient table {path} has unknown columns {unknown}")
        absent = [c for c in COEFFICIENT_COLUMNS if c not in frame.columns]
        if absent:
            logger.info(f"Coefficient table {path.name}: {len(absent)} columns absent, filled with 0")
            for column in absent:
                frame[column] = 0.0

        numeric = frame[list(AXIS_COLUMNS + COEFFICIENT_COLUMNS)].apply(pd.to_numeric, errors="coerce")
        if numeric.isna().any().any() or not np.isfinite(numeric.to_numpy()).all():
            raise ParameterError(f"coefficient table {path} contains non-numeric or non-finite entries")
        if numeric.duplicated(subset=list(AXIS_COLUMNS)).any():
            raise ParameterError(f"coefficient table {path} repeats grid points")

        axes = tuple(np.sort(numeric[c].unique()) for c in AXIS_COLUMNS)
        expected = int(np.prod([len(a) for a in axes]))
        if len(numeric) != expected:
            raise ParameterError(
                f"coefficient table {path} is not a full grid: {len(numeric)} rows, expected {expected}"
            )
        ordered = numeric.sort_values(list(AXIS_COLUMNS))
        values = ordered[list(COEFFICIENT_COLUMNS)].to_numpy().reshape(
            len(axes[0]), len(axes[1]), len(axes[2]), len(COEFFICIENT_COLUMNS)
        )
        return cls.tabulated(*axes, values=values, source=str(path))

    def _build_grid(self, axes: Tuple[np.ndarray, ...], values: np.ndarray) -> None:
        if values.shape != tuple(len(a) for a in axes) + (len(COEFFICIENT_COLUMNS),):
            raise ParameterError(f"coefficient block shape {values.shape} does not match the grid axes")
        padded = []
        for k, axis in enumerate(axes):
            if axis.ndim != 1 or len(axis) == 0:
                raise ParameterError(f"grid axis '{AXIS_COLUMNS[k]}' must be a non-empty vector")
            if len(axis) > 1 and np.any(np.diff(axis) <= 0):
                raise ParameterError(f"grid axis '{AXIS_COLUMNS[k]}' must be strictly increasing")
            if len(axis) == 1:
                # constant along this axis; pad to two points so the interpolator accepts it
                axis = np.array([axis[0], axis[0] + 1.0])
                values = np.concatenate([values, values], axis=k)
            padded.append(axis)
        self._bounds = np.array([[a[0], a[-1]] for a in padded])
        self._interpolator = RegularGridInterpolator(tuple(padded), values, method="linear")

    @property
    def clamped(self) -> bool:
        return self.clamp_count > 0

    def coefficients(self, alpha: ArrayLike, beta: ArrayLike, mach: ArrayLike) -> np.ndarray:
        """Coefficient block of shape (6, 4) or (6, 4, *broadcast_shape)."""
        alpha, beta, mach = np.broadcast_arrays(
            np.asarray(alpha, float), np.asarray(beta, float), np.asarray(mach, float)
        )
        shape = alpha.shape
        if self.mode == "analytic_fallback":
            return self._analytic_block(alpha, beta, shape)

        points = np.stack([np.degrees(alpha).ravel(), np.degrees(beta).ravel(), mach.ravel()], axis=-1)
        clipped = np.clip(points, self._bounds[:, 0], self._bounds[:, 1])
        if np.any(clipped != points):
            self.clamp_count += 1
            logger.warning(
                f"Coefficient query outside grid clamped to boundary "
                f"(alpha={points[:, 0].min():.2f}..{points[:, 0].max():.2f} deg, "
                f"mach={points[:, 2].min():.3f}..{points[:, 2].max():.3f})"
            )
        flat = self._interpolator(clipped)  # (n, 24), term-major
        block = flat.reshape(-1, len(RATE_TERMS), len(FORCE_AXES)).transpose(2, 1, 0)
        return block.reshape((len(FORCE_AXES), len(RATE_TERMS)) + shape)

    def _analytic_block(self, alpha: np.ndarray, beta: np.ndarray, shape: tuple) -> np.ndarray:
        c = self._analytic
        block = np.zeros((len(FORCE_AXES), len(RATE_TERMS)) + shape)
        block[0, 0] = c.axial
        block[1, 0] = c.normal_slope * beta
        block[2, 0] = c.normal_slope * alpha
        block[4, 0] = c.pitch_slope * alpha
        block[5, 0] = -c.pitch_slope * beta
        block[4, 2] = c.pitch_damping
        block[5, 3] = c.pitch_damping
        return block
