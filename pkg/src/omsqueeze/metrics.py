"""Squeezing and entanglement figures of merit from a covariance matrix.

Two-mode shot noise is 1 for the collective quadratures and 1/2 for a
single mode; both references are hard-coded so they cannot drift.  The
headline quadratures are the phase sum y_c1 + y_c2 for the cavities and
the position sum x_d1 + x_d2 for the mechanics, but all four collective
variances are computed and exported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PhysicalityError
from .matrices import QUADRATURES, require_symmetric, symplectic_form

TWO_MODE_SHOT_NOISE = 1.0
THREE_DB = 3.0103  # -10 log10(1/2), the conventional squeezing threshold
COHERENT_BOUND = math.log(2.0)

PAIR_INDICES = {"cc": (0, 1, 2, 3), "mm": (4, 5, 6, 7)}

METRIC_COLUMNS = (
    "v_xc", "v_yc", "v_xd", "v_yd", "s2_c_db", "s2_m_db", "en_cc", "en_mm",
)


@dataclass(frozen=True)
class CollectiveVariances:
    v_xc: float
    v_yc: float
    v_xd: float
    v_yd: float


@dataclass(frozen=True)
class SqueezingResult:
    quadrature: str  # x_c, y_c, x_d or y_d
    variance: float
    db: float
    beats_3db: bool


@dataclass(frozen=True)
class NegativityResult:
    pair: str  # cc (cavity modes) or mm (mechanical modes)
    nu_tilde_minus: float
    e_n: float


def collective_variances(sigma: np.ndarray) -> CollectiveVariances:
    """Variances of the four collective (sum) quadratures."""
    sigma = np.asarray(sigma, dtype=float)
    require_symmetric(sigma)
    return CollectiveVariances(
        v_xc=float(sigma[0, 0] + sigma[2, 2] + 2 * sigma[0, 2]),
        v_yc=float(sigma[1, 1] + sigma[3, 3] + 2 * sigma[1, 3]),
        v_xd=float(sigma[4, 4] + sigma[6, 6] + 2 * sigma[4, 6]),
        v_yd=float(sigma[5, 5] + sigma[7, 7] + 2 * sigma[5, 7]),
    )


def squeezing_db(variance: float) -> float:
    """Collective-quadrature squeezing in dB below the two-mode shot noise."""
    if variance <= 0:
        raise ValueError("variance must be > 0")
    return -10.0 * math.log10(variance / TWO_MODE_SHOT_NOISE)


def squeezing_result(quadrature: str, variance: float) -> SqueezingResult:
    db = squeezing_db(variance)
    return SqueezingResult(
        quadrature=quadrature, variance=variance, db=db, beats_3db=db > THREE_DB
    )


def single_mode_variances(sigma: np.ndarray) -> dict[str, float]:
    """Diagonal variances labeled by quadrature; < 1/2 means squeezed."""
    sigma = np.asarray(sigma, dtype=float)
    require_symmetric(sigma)
    return {label: float(sigma[i, i]) for i, label in enumerate(QUADRATURES)}


def log_negativity(sigma: np.ndarray, pair: str) -> NegativityResult:
    """Logarithmic negativity of one two-mode block (vacuum variance 1/2).

    Uses the smaller symplectic eigenvalue of the partially transposed
    block, from the determinant form of the 2x2 sub-blocks.  Determinant
    arithmetic loses ~1e-12 on near-pure states, so sqrt arguments are
    clipped at zero within a 1e-9 band and flagged beyond it.
    """
    if pair not in PAIR_INDICES:
        raise ValueError(f"pair must be one of {sorted(PAIR_INDICES)}")
    sigma = np.asarray(sigma, dtype=float)
    require_symmetric(sigma)
    idx = np.asarray(PAIR_INDICES[pair])
    block = sigma[np.ix_(idx, idx)]

    det_a = float(np.linalg.det(block[:2, :2]))
    det_b = float(np.linalg.det(block[2:, 2:]))
    det_c = float(np.linalg.det(block[:2, 2:]))
    det_all = float(np.linalg.det(block))
    delta = det_a + det_b - 2.0 * det_c

    disc = delta**2 - 4.0 * det_all
    if disc < -1e-9:
        raise PhysicalityError(
            f"partial-transpose discriminant negative beyond tolerance ({disc:.3e})"
        )
    inner = (delta - math.sqrt(max(disc, 0.0))) / 2.0
    if inner < -1e-9:
        raise PhysicalityError(
            f"squared symplectic eigenvalue negative beyond tolerance ({inner:.3e})"
        )
    nu = math.sqrt(max(inner, 0.0))
    return NegativityResult(
        pair=pair, nu_tilde_minus=nu, e_n=max(0.0, -math.log(2.0 * nu))
    )


def physicality_check(sigma: np.ndarray, tol: float = 1e-9) -> bool:
    """True iff sigma + (i/2) Omega is positive semidefinite (within tol)."""
    sigma = np.asarray(sigma, dtype=float)
    require_symmetric(sigma)
    h = sigma + 0.5j * symplectic_form()
    return bool(np.min(np.linalg.eigvalsh(h)) >= -tol)


def metric_row(sigma: np.ndarray) -> dict[str, float]:
    """The canonical export row: all collective variances, headline dBs,
    both log negativities, and the physicality flag (1.0/0.0)."""
    v = collective_variances(sigma)
    return {
        "v_xc": v.v_xc,
        "v_yc": v.v_yc,
        "v_xd": v.v_xd,
        "v_yd": v.v_yd,
        "s2_c_db": squeezing_db(v.v_yc),
        "s2_m_db": squeezing_db(v.v_xd),
        "en_cc": log_negativity(sigma, "cc").e_n,
        "en_mm": log_negativity(sigma, "mm").e_n,
        "physical": 1.0 if physicality_check(sigma) else 0.0,
    }
