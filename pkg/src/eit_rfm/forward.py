"""Closed-form current-gap operator for a concentric circular defect.

For a defect D = {|x| < rho} inside the unit disk, with constant coefficients
(gamma, mu) in the transmission condition

    d_r u+ - d_r u- = (-mu / rho**2 * d_theta**2 + gamma) u     on |x| = rho,

the current gap acts diagonally on boundary Fourier modes:

    mode 0:  f_0 -> sigma0 * f_0
    mode n:  f_n -> |n| * (sigma_n - 1) * f_n

so the operator is the convolution with the kernel

    K(theta, phi) = sigma0 + sum_{n != 0} |n| (sigma_n - 1) exp(i n (theta - phi)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import OperatorMatrix
from .errors import DegenerateParameterError, ValidationError

#: Denominators of the closed-form symbols below this magnitude are rejected.
#: Admissible (gamma, mu, rho) never come close; it only guards nonsense input.
DEGENERATE_TOL = 1e-14

#: Largest imaginary residue tolerated when a real-coefficient matrix is made real.
REAL_RESIDUE_TOL = 1e-12

DEFAULT_NMAX = 10
DEFAULT_MGRID = 64


@dataclass(frozen=True)
class BoundaryParams:
    """Constant coefficients of the generalized Robin condition on the defect boundary.

    ``gamma`` multiplies the trace and ``mu`` the tangential Laplacian. Both need a
    positive real part; imaginary parts are either both zero (real mode) or both
    strictly negative (complex mode).
    """

    gamma: complex
    mu: complex

    def __post_init__(self):
        object.__setattr__(self, "gamma", complex(self.gamma))
        object.__setattr__(self, "mu", complex(self.mu))
        for name in ("gamma", "mu"):
            value = getattr(self, name)
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                raise ValidationError(f"{name} must be finite, got {value}")
            if value.real <= 0:
                raise ValidationError(f"Re({name}) must be > 0, got {value}")
            if value.imag > 0:
                raise ValidationError(f"Im({name}) must be <= 0, got {value}")

    @property
    def mode(self) -> str:
        """``"real"`` or ``"complex"``; mixed imaginary signs are inadmissible."""
        if self.gamma.imag == 0 and self.mu.imag == 0:
            return "real"
        if self.gamma.imag < 0 and self.mu.imag < 0:
            return "complex"
        raise ValidationError(
            "Im(gamma) and Im(mu) must both be zero (real mode) or both negative "
            f"(complex mode), got gamma={self.gamma}, mu={self.mu}"
        )


@dataclass(frozen=True)
class DiskGeometry:
    """Radius of the defect boundary, strictly inside the unit disk."""

    rho: float

    def __post_init__(self):
        rho = float(self.rho)
        if not 0.0 < rho < 1.0:
            raise ValidationError(f"rho must lie in (0, 1), got {self.rho}")
        object.__setattr__(self, "rho", rho)


def _quotient(num: complex, den: complex, what: str) -> complex:
    if abs(den) < DEGENERATE_TOL:
        raise DegenerateParameterError(
            f"degenerate parameters: |denominator of {what}| = {abs(den):.3e} < {DEGENERATE_TOL}"
        )
    return num / den


def sigma0(params, geom) -> complex:
    """Symbol of the constant mode, gamma*rho / (1 - gamma*rho*ln(rho))."""
    gamma = complex(params.gamma)
    rho = geom.rho
    return _quotient(gamma * rho, 1.0 - gamma * rho * math.log(rho), "sigma0")


def _coupling(n: int, params, geom, symbol: str):
    """Return (c, x) with sigma_n = (c + x (1 + r)) / (c + x (1 - r)), r = rho**(2n)."""
    gamma = complex(params.gamma)
    mu = complex(params.mu)
    rho = geom.rho
    if symbol == "default":
        rn = rho**n
        return 2 * n * rn, mu * n * n + gamma * rn * rn
    if symbol == "interface":
        return 2 * n, mu * n * n / rho + gamma * rho
    raise ValidationError(f"unknown symbol variant {symbol!r}; expected 'default' or 'interface'")


def sigma_n(n: int, params, geom, symbol: str = "default") -> complex:
    """Symbol of mode ``n != 0``; depends on ``|n|`` only and tends to 1 as ``|n|`` grows.

    ``symbol="default"`` is the closed form

        [2|n| rho^|n| + (mu n^2 + gamma rho^2|n|)(1 + rho^2|n|)]
        / [2|n| rho^|n| + (mu n^2 + gamma rho^2|n|)(1 - rho^2|n|)].

    ``symbol="interface"`` solves the continuity and jump conditions on
    ``|x| = rho`` mode by mode, which replaces the coupling by
    ``mu n^2 / rho + gamma rho`` and the ``2|n| rho^|n|`` terms by ``2|n|``. The two
    coincide for ``|n| = 1`` only.
    """
    n = abs(int(n))
    if n == 0:
        raise ValidationError("sigma_n is defined for n != 0; use sigma0 for the constant mode")
    c, x = _coupling(n, params, geom, symbol)
    r2n = geom.rho ** (2 * n)
    return _quotient(c + x * (1.0 + r2n), c + x * (1.0 - r2n), f"sigma_{n}")


def sigma_gap(n: int, params, geom, symbol: str = "default") -> complex:
    """``sigma_n - 1`` without cancellation, ``2 rho^2|n| x / (c + x (1 - rho^2|n|))``."""
    n = abs(int(n))
    if n == 0:
        raise ValidationError("sigma_gap is defined for n != 0")
    c, x = _coupling(n, params, geom, symbol)
    r2n = geom.rho ** (2 * n)
    return _quotient(2.0 * r2n * x, c + x * (1.0 - r2n), f"sigma_{n}")


def mode_symbols(params, geom, n_max: int = DEFAULT_NMAX, symbol: str = "default") -> np.ndarray:
    """Eigenvalues of the current gap on modes 0..n_max.

    Entry 0 is ``sigma0``; entry n is ``n * (sigma_n - 1)``. Negative modes share
    the value of ``|n|``.
    """
    if int(n_max) < 1:
        raise ValidationError(f"n_max must be >= 1, got {n_max}")
    lam = np.empty(int(n_max) + 1, dtype=complex)
    lam[0] = sigma0(params, geom)
    for n in range(1, int(n_max) + 1):
        lam[n] = n * sigma_gap(n, params, geom, symbol)
    return lam


def kernel_matrix(
    params: BoundaryParams,
    geom: DiskGeometry,
    n_max: int = DEFAULT_NMAX,
    m_grid: int = DEFAULT_MGRID,
    symbol: str = "default",
) -> OperatorMatrix:
    """Collocation matrix of the truncated current-gap operator.

    Uses the rectangle rule on ``theta_j = 2*pi*j/m_grid``; the 2*pi/M weight
    cancels the 1/(2*pi) prefactor, so ``A[j, k] = K(theta_j, theta_k) / M``. The
    result is circulant and every sampled mode ``exp(i n theta)`` with
    ``|n| <= n_max`` is an exact eigenvector.
    """
    n_max = int(n_max)
    m_grid = int(m_grid)
    if n_max < 1:
        raise ValidationError(f"n_max must be >= 1, got {n_max}")
    if m_grid < 2 * n_max + 1:
        raise ValidationError(
            f"m_grid={m_grid} cannot resolve modes up to n_max={n_max} (need >= {2 * n_max + 1})"
        )
    lam = mode_symbols(params, geom, n_max, symbol)

    # column c[d] = K(theta_d, 0) / M, using the symmetry lam_{-n} = lam_n
    d = 2.0 * np.pi * np.arange(m_grid) / m_grid
    n = np.arange(1, n_max + 1)
    col = lam[0] + 2.0 * (np.cos(np.outer(d, n)) @ lam[1:])
    col /= m_grid
    idx = (np.arange(m_grid)[:, None] - np.arange(m_grid)[None, :]) % m_grid
    entries = col[idx]

    try:
        mode = params.mode
    except AttributeError:
        mode = "real" if complex(params.gamma).imag == 0 and complex(params.mu).imag == 0 else "complex"
    if mode == "real":
        residue = float(np.max(np.abs(entries.imag)))
        if residue > REAL_RESIDUE_TOL:
            raise DegenerateParameterError(
                f"real-mode matrix has imaginary residue {residue:.3e} > {REAL_RESIDUE_TOL}"
            )
        entries = entries.real.astype(complex)
        return OperatorMatrix(entries, "real-case")
    return OperatorMatrix(entries, "complex-case")
