"""Drift, diffusion and covariance matrices in the fixed quadrature basis.

Basis ordering is immutable throughout the package:

    [x_c1, y_c1, x_c2, y_c2, x_d1, y_d1, x_d2, y_d2]

with x = (a' + a)/sqrt(2), y = i(a' - a)/sqrt(2), so a single vacuum mode
has variance 1/2 on each quadrature.
"""

from __future__ import annotations

import numpy as np

from .params import ModelParams

QUADRATURES = ("x_c1", "y_c1", "x_c2", "y_c2", "x_d1", "y_d1", "x_d2", "y_d2")
VACUUM_VARIANCE = 0.5


def coupling_coefficients(m: ModelParams) -> tuple[float, float, float, float]:
    """Return (A, B, C, S): tone difference/sum and pump quadrature parts.

    A = G_- - G_+ damps the mechanics (beam-splitter weight), B = G_- + G_+
    drives it (two-mode-squeeze weight); C and S are the pump coupling
    resolved along the two cavity quadrature axes.
    """
    a = m.G_minus - m.G_plus
    b = m.G_minus + m.G_plus
    c = m.lambda_pa * np.cos(m.phi)
    s = m.lambda_pa * np.sin(m.phi)
    return a, b, c, s


def build_drift(m: ModelParams) -> np.ndarray:
    """Assemble the 8x8 drift matrix of the linearized quadrature dynamics."""
    a, b, c, s = coupling_coefficients(m)
    k2 = -m.kappa / 2.0
    g2 = -m.gamma / 2.0
    return np.array(
        [
            [k2, 0., c, s, 0., -a, 0., 0.],
            [0., k2, s, -c, b, 0., 0., 0.],
            [c, s, k2, 0., 0., 0., 0., -a],
            [s, -c, 0., k2, 0., 0., b, 0.],
            [0., -a, 0., 0., g2, 0., 0., 0.],
            [b, 0., 0., 0., 0., g2, 0., 0.],
            [0., 0., 0., -a, 0., 0., g2, 0.],
            [0., 0., b, 0., 0., 0., 0., g2],
        ]
    )


def build_diffusion(m: ModelParams) -> np.ndarray:
    """Diagonal noise-injection matrix from the delta-correlated baths."""
    cav = m.kappa * (m.n_c + 0.5)
    mech = m.gamma * (m.n_m + 0.5)
    return np.diag([cav] * 4 + [mech] * 4)


def initial_covariance(m: ModelParams) -> np.ndarray:
    """Thermal product state matching the bath occupations."""
    return np.diag([m.n_c + 0.5] * 4 + [m.n_m + 0.5] * 4)


def symplectic_form(n_modes: int = 4) -> np.ndarray:
    """Block-diagonal symplectic form, one [[0,1],[-1,0]] block per mode."""
    omega = np.zeros((2 * n_modes, 2 * n_modes))
    for j in range(n_modes):
        omega[2 * j, 2 * j + 1] = 1.0
        omega[2 * j + 1, 2 * j] = -1.0
    return omega


def require_symmetric(sigma: np.ndarray, tol: float = 1e-9) -> None:
    """Raise if sigma is not symmetric to within tol (Frobenius norm)."""
    sigma = np.asarray(sigma)
    if sigma.shape != (8, 8):
        raise ValueError(f"expected an 8x8 covariance matrix, got {sigma.shape}")
    if np.linalg.norm(sigma - sigma.T) > tol:
        raise ValueError(f"covariance matrix asymmetric beyond {tol}")


def covariance_to_json(sigma: np.ndarray) -> dict:
    """Serialize as a row-major list of 64 numbers plus the basis labels."""
    sigma = np.asarray(sigma, dtype=float)
    return {"basis": list(QUADRATURES), "sigma": sigma.reshape(-1).tolist()}


def covariance_from_json(obj: dict) -> np.ndarray:
    if list(obj.get("basis", [])) != list(QUADRATURES):
        raise ValueError(f"covariance basis must be {list(QUADRATURES)}")
    flat = np.asarray(obj["sigma"], dtype=float)
    if flat.shape != (64,):
        raise ValueError("covariance payload must hold exactly 64 numbers")
    return flat.reshape(8, 8)
