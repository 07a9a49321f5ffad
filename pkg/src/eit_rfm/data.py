"""Synthetic measurement data: relative noise, imaginary part, SVD, matrix dump."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import NumericalError, ValidationError

logger = logging.getLogger(__name__)

MODES = ("real-case", "complex-case", "imaginary-part")
MATRIX_HEADER = "# eit-rfm matrix M={m} mode={mode}"


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense complex M x M discretization of the data operator, with a mode tag."""

    entries: np.ndarray
    mode: str

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValidationError(f"operator matrix must be square, got shape {entries.shape}")
        if self.mode not in MODES:
            raise ValidationError(f"unknown mode tag {self.mode!r}; expected one of {MODES}")
        object.__setattr__(self, "entries", entries)

    @property
    def size(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class NoiseModel:
    """Relative entrywise noise level and the seed of its generator."""

    delta: float
    seed: int = 0

    def __post_init__(self):
        if not float(self.delta) >= 0.0:
            raise ValidationError(f"noise level must be >= 0, got {self.delta}")


@dataclass(frozen=True)
class SvdFactors:
    """Singular values (nonincreasing) with left vectors as columns of ``left_vectors``."""

    singular_values: np.ndarray
    left_vectors: np.ndarray
    right_vectors_h: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.left_vectors * self.singular_values) @ self.right_vectors_h


def noise_matrix(m: int, seed: int) -> np.ndarray:
    """Uniform [-1, 1] entries rescaled to unit spectral norm.

    Drawn from ``numpy.random.default_rng(seed)`` (PCG64), so a seed fixes the
    matrix across platforms and numpy versions that keep that stream.
    """
    e = np.random.default_rng(seed).uniform(-1.0, 1.0, size=(m, m))
    return e / np.linalg.norm(e, 2)


def add_noise(a: OperatorMatrix, noise: NoiseModel) -> OperatorMatrix:
    """Return ``A_ij * (1 + delta * E_ij)`` with a fresh E per call."""
    if noise.delta == 0:
        return OperatorMatrix(a.entries.copy(), a.mode)
    e = noise_matrix(a.size, noise.seed)
    return OperatorMatrix(a.entries * (1.0 + noise.delta * e), a.mode)


def imaginary_part(a: OperatorMatrix) -> OperatorMatrix:
    """Hermitian part ``(A - A^*) / (2i)``, symmetrized so roundoff cannot break Hermiticity."""
    b = (a.entries - a.entries.conj().T) / 2j
    b = 0.5 * (b + b.conj().T)
    return OperatorMatrix(b, "imaginary-part")


def svd(a: OperatorMatrix) -> SvdFactors:
    if not np.all(np.isfinite(a.entries)):
        raise NumericalError("cannot factor a matrix with non-finite entries")
    try:
        u, s, vh = np.linalg.svd(a.entries)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD did not converge: {exc}") from exc
    return SvdFactors(s, u, vh)


def write_matrix_csv(a: OperatorMatrix, path) -> None:
    """Dump ``a`` column by column: line k holds re, im of A[0, k], A[1, k], ..."""
    path = Path(path)
    lines = [MATRIX_HEADER.format(m=a.size, mode=a.mode)]
    for col in a.entries.T:
        inter = np.empty(2 * col.size)
        inter[0::2] = col.real
        inter[1::2] = col.imag
        lines.append(",".join(repr(float(v)) for v in inter))
    try:
        path.write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write matrix to {path}: {exc}") from exc


def read_matrix_csv(path) -> OperatorMatrix:
    path = Path(path)
    text = path.read_text().splitlines()
    if not text or not text[0].startswith("# eit-rfm matrix"):
        raise ValidationError(f"{path}: missing eit-rfm matrix header")
    fields = dict(tok.split("=", 1) for tok in text[0].split()[3:])
    m = int(fields["M"])
    rows = [np.array(line.split(","), dtype=float) for line in text[1:] if line.strip()]
    if len(rows) != m or any(r.size != 2 * m for r in rows):
        raise ValidationError(f"{path}: expected {m} lines of {2 * m} values")
    cols = np.array([r[0::2] + 1j * r[1::2] for r in rows])
    return OperatorMatrix(cols.T, fields["mode"])
