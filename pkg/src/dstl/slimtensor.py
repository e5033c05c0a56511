"""Third-order tensor machinery for stacks of per-view feature matrices.

A collection of m feature matrices (each k x n, with n the sample count)
is arranged as a k x m x n array whose third mode runs over samples.  The
spectral quantities here (nuclear norm, tubal shrinkage) act on the
frontal slices of the FFT taken along that sample mode.

For real input the spectrum is conjugate symmetric, so the heavy routines
compute only the first floor(n/2)+1 slices and recover the rest by
mirroring (via rfft/irfft); the general full-spectrum transforms are also
exposed and define the reference semantics.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputError, NumericError

__all__ = [
    "SlimTensor",
    "FourierSlices",
    "stack_rotate",
    "unstack",
    "fft_mode3",
    "ifft_mode3",
    "tensor_nuclear_norm",
    "tubal_shrinkage",
]

# residual imaginary mass tolerated when inverting a symmetric spectrum
IMAG_RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class SlimTensor:
    """Real k x m x n array: m lateral slices of per-view features."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=float)
        if arr.ndim != 3:
            raise InputError(f"SlimTensor needs a 3-d array, got ndim={arr.ndim}")
        if min(arr.shape) < 1:
            raise InputError(f"SlimTensor dimensions must be >= 1, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InputError("SlimTensor contains non-finite entries")
        object.__setattr__(self, "data", arr)

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.data.shape


@dataclass(frozen=True)
class FourierSlices:
    """Full mode-3 spectrum: complex (k, m, n) array of frontal slices.

    ``real_origin`` records that the spectrum came from a real tensor and
    is therefore conjugate symmetric along the third mode.
    """

    slices: np.ndarray
    real_origin: bool = True


def stack_rotate(mats: Sequence[np.ndarray]) -> SlimTensor:
    """Arrange m equally-shaped (k, n) matrices into a k x m x n tensor.

    Matrix v becomes the lateral slice [:, v, :], so entry (i, v, j) of
    the tensor is entry (i, j) of the v-th input.
    """
    if len(mats) == 0:
        raise InputError("stack_rotate needs at least one matrix")
    arrs = [np.asarray(m, dtype=float) for m in mats]
    shape = arrs[0].shape
    for v, a in enumerate(arrs):
        if a.ndim != 2:
            raise InputError(f"stack_rotate: input {v} is not a matrix (ndim={a.ndim})")
        if a.shape != shape:
            raise InputError(
                f"stack_rotate: input {v} has shape {a.shape}, expected {shape}"
            )
    return SlimTensor(np.stack(arrs, axis=1))


def unstack(t: SlimTensor) -> list[np.ndarray]:
    """Recover the list of (k, n) matrices from a k x m x n tensor."""
    return [np.ascontiguousarray(t.data[:, v, :]) for v in range(t.data.shape[1])]


def fft_mode3(t: SlimTensor) -> FourierSlices:
    """Unnormalized forward FFT along the sample mode (full spectrum)."""
    return FourierSlices(slices=np.fft.fft(t.data, axis=2), real_origin=True)


def ifft_mode3(f: FourierSlices) -> SlimTensor:
    """Inverse FFT along the sample mode (applies the 1/n factor).

    For a symmetric spectrum the inverse is real up to rounding; the
    residual imaginary part is checked against IMAG_RESIDUAL_TOL before
    being discarded.
    """
    slices = np.asarray(f.slices)
    if slices.ndim != 3:
        raise InputError(f"ifft_mode3 needs a 3-d spectrum, got ndim={slices.ndim}")
    inv = np.fft.ifft(slices, axis=2)
    if f.real_origin:
        residual = float(np.max(np.abs(inv.imag)))
        bound = IMAG_RESIDUAL_TOL * (1.0 + float(np.max(np.abs(inv.real))))
        if residual > bound:
            raise NumericError(
                f"inverse FFT of a symmetric spectrum left imaginary residual "
                f"{residual:.3e} (bound {bound:.3e})"
            )
    return SlimTensor(np.ascontiguousarray(inv.real))


def _half_spectrum_svd(data: np.ndarray):
    """rfft slices moved to the batch axis plus their multiplicity weights."""
    n = data.shape[2]
    half = np.moveaxis(np.fft.rfft(data, axis=2), 2, 0)  # (n//2 + 1, k, m)
    weights = np.full(half.shape[0], 2.0)
    weights[0] = 1.0
    if n % 2 == 0:
        weights[-1] = 1.0
    return half, weights


def tensor_nuclear_norm(t: SlimTensor) -> float:
    """Sum of matrix nuclear norms of the Fourier-domain frontal slices.

    Conjugate slices share singular values, so only the half spectrum is
    decomposed and paired slices are counted twice.
    """
    half, weights = _half_spectrum_svd(t.data)
    try:
        sv = np.linalg.svd(half, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericError("SVD failed inside tensor_nuclear_norm") from exc
    return float(np.sum(weights * sv.sum(axis=1)))


def tubal_shrinkage(t: SlimTensor, rho: float) -> SlimTensor:
    """Proximal step of ``rho * tensor_nuclear_norm`` at t.

    Each Fourier-domain frontal slice has its singular values shrunk by
    n * rho (n the sample-mode length); the inverse transform is real by
    construction since only the half spectrum is touched and mirrored.
    """
    if not np.isfinite(rho) or rho < 0:
        raise InputError(f"tubal_shrinkage needs rho >= 0, got {rho}")
    if rho == 0:
        return SlimTensor(t.data.copy())
    n = t.data.shape[2]
    half, _ = _half_spectrum_svd(t.data)
    try:
        u, s, vh = np.linalg.svd(half, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericError("SVD failed inside tubal_shrinkage") from exc
    s = np.maximum(s - n * rho, 0.0)
    shrunk = (u * s[:, None, :]) @ vh
    out = np.fft.irfft(np.moveaxis(shrunk, 0, 2), n=n, axis=2)
    return SlimTensor(out)
