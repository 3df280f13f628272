"""Fractional Brownian motion on uniform grids.

Two generators produce paths with the exact finite-dimensional law of
fBm with Hurst parameter H: a Cholesky factorization of the increment
covariance (the oracle, O(n^2)) and a circulant-embedding spectral
synthesis (the workhorse, O(n log n)).  Both consume one Philox stream
per path, so ensembles are reproducible independent of scheduling.
"""

import io
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.linalg

from .errors import DomainError, FactorizationError
from .grids import RngSpec, TimeGrid

__all__ = [
    "FbmPath",
    "check_hurst",
    "fbm_covariance",
    "increment_covariance_row",
    "increment_noise_covariance",
    "sample_fbm_exact",
    "sample_fbm_circulant",
]

# relative tolerance for negative circulant eigenvalues before falling
# back to the exact generator
CIRCULANT_EIG_RTOL = 1e-9


def check_hurst(H, model_level=False):
    """Validate a Hurst parameter.

    The generators accept any H in (0,1); model-level constructors pass
    ``model_level=True`` to enforce the standing assumption H in (1/2,1).
    """
    H = float(H)
    if not 0.0 < H < 1.0:
        raise DomainError(f"Hurst parameter must lie in (0,1), got {H}")
    if model_level and not 0.5 < H < 1.0:
        raise DomainError(f"model requires H in (1/2,1), got {H}")
    return H


@dataclass(frozen=True)
class FbmPath:
    """A sampled fBm path on a uniform grid; values[0] = 0."""

    grid: TimeGrid
    H: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        check_hurst(self.H)
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.n_steps + 1,):
            raise DomainError(
                f"values must have length n_steps+1={self.grid.n_steps + 1}, got {v.shape}"
            )
        if v[0] != 0.0:
            raise DomainError("an fBm path starts at 0")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def increments(self):
        return np.diff(self.values)

    def restricted(self, factor):
        """Path on the coarser grid keeping every ``factor``-th node."""
        if self.grid.n_steps % factor:
            raise DomainError(f"n_steps not divisible by {factor}")
        coarse = TimeGrid(self.grid.dt * factor, self.grid.n_steps // factor)
        return FbmPath(coarse, self.H, self.values[::factor].copy())

    def to_csv(self, path_or_buf):
        """Write ``t,value`` CSV at full double precision."""
        data = np.column_stack([self.grid.times(), self.values])
        if isinstance(path_or_buf, (str, bytes)) or hasattr(path_or_buf, "__fspath__"):
            with open(path_or_buf, "w", newline="") as fh:
                self.to_csv(fh)
            return
        np.savetxt(path_or_buf, data, fmt="%.17g", delimiter=",",
                   header="t,value", comments="")

    def to_csv_string(self):
        buf = io.StringIO()
        self.to_csv(buf)
        return buf.getvalue()


def fbm_covariance(s, t, H):
    """fBm covariance R_H(s,t) = (s^{2H} + t^{2H} - |t-s|^{2H}) / 2.

    Symmetric in (s, t); vectorizes over array arguments.
    """
    H = check_hurst(H)
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(s < 0) or np.any(t < 0):
        raise DomainError("fbm_covariance requires s >= 0 and t >= 0")
    out = 0.5 * (s ** (2 * H) + t ** (2 * H) - np.abs(t - s) ** (2 * H))
    return out if out.ndim else float(out)


def increment_covariance_row(grid, H, n=None):
    """Autocovariance r(j) of the grid increments, j = 0..n-1.

    r(j) = (dt^{2H}/2) (|j+1|^{2H} + |j-1|^{2H} - 2 j^{2H}); this is the
    first row of the (Toeplitz) increment covariance matrix.
    """
    H = check_hurst(H)
    n = grid.n_steps if n is None else n
    j = np.arange(n, dtype=float)
    row = 0.5 * ((j + 1) ** (2 * H) + np.abs(j - 1) ** (2 * H) - 2 * j ** (2 * H))
    return grid.dt ** (2 * H) * row


def increment_noise_covariance(t, h, h1, H):
    """Covariance of two normalized increments at lag t.

    Returns E[(B_H(h)/h) * (B_H(t+h1) - B_H(t))/h1], evaluated exactly
    from the fBm covariance; as h, h1 -> 0 it tends to H(2H-1) t^{2H-2}.
    """
    H = check_hurst(H)
    if t <= 0:
        raise DomainError(f"lag t must be positive, got {t}")
    if h <= 0 or h1 <= 0:
        raise DomainError("increment widths h, h1 must be positive")
    num = fbm_covariance(h, t + h1, H) - fbm_covariance(h, t, H)
    return num / (h * h1)


@lru_cache(maxsize=16)
def _increment_cholesky(dt, n, H):
    row = increment_covariance_row(TimeGrid(dt, n), H)
    cov = scipy.linalg.toeplitz(row)
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        eigmin = float(np.linalg.eigvalsh(cov).min())
        raise FactorizationError(
            f"increment covariance not PSD under round-off "
            f"(n={n}, H={H}, min eigenvalue {eigmin:.3e})"
        ) from exc


def exact_increment_transform(grid, H):
    """Cholesky factor L of the increment covariance (cached).

    L @ xi with xi ~ N(0, I_n) has exactly the fGn law on the grid.
    """
    return _increment_cholesky(float(grid.dt), int(grid.n_steps), check_hurst(H))


def _path_from_increments(grid, H, increments):
    values = np.empty(grid.n_steps + 1)
    values[0] = 0.0
    np.cumsum(increments, out=values[1:])
    return FbmPath(grid, H, values)


def sample_fbm_exact(grid, H, rng: RngSpec):
    """Sample one fBm path whose law matches the covariance exactly.

    Cholesky of the Toeplitz increment covariance, cumulative-summed.
    """
    if grid.n_steps < 1:
        raise DomainError("need n_steps >= 1")
    L = exact_increment_transform(grid, H)
    xi = rng.generator().standard_normal(grid.n_steps)
    return _path_from_increments(grid, H, L @ xi)


@lru_cache(maxsize=16)
def _circulant_sqrt_eigs(dt, n, H):
    """sqrt(eigenvalues) of the 2n circulant embedding, or None if indefinite."""
    row = increment_covariance_row(TimeGrid(dt, n), H)
    circ = np.concatenate([row, [_lag_cov(dt, n, H)], row[:0:-1]])
    eigs = np.fft.fft(circ).real
    floor = -CIRCULANT_EIG_RTOL * eigs.max()
    if eigs.min() < floor:
        return None
    return np.sqrt(np.clip(eigs, 0.0, None))


def _lag_cov(dt, n, H):
    j = float(n)
    return 0.5 * dt ** (2 * H) * ((j + 1) ** (2 * H) + (j - 1) ** (2 * H) - 2 * j ** (2 * H))


def sample_fbm_circulant(grid, H, rng: RngSpec):
    """Sample one fBm path by circulant embedding (same law as exact).

    Falls back to the exact generator with a warning if the embedding
    has negative eigenvalues beyond tolerance.
    """
    H = check_hurst(H)
    n = grid.n_steps
    if n < 2:
        raise DomainError("circulant generator needs n_steps >= 2")
    sq = _circulant_sqrt_eigs(float(grid.dt), int(n), H)
    if sq is None:
        warnings.warn(
            f"circulant embedding indefinite for n={n}, H={H}; "
            "falling back to the exact generator"
        )
        return sample_fbm_exact(grid, H, rng)
    m = 2 * n
    xi = rng.generator().standard_normal(m)
    a, b = xi[: n + 1], xi[n + 1 :]
    w = np.empty(m, dtype=complex)
    w[0] = sq[0] * a[0] / np.sqrt(m)
    w[n] = sq[n] * a[n] / np.sqrt(m)
    core = sq[1:n] / np.sqrt(2 * m)
    w[1:n] = core * (a[1:n] + 1j * b)
    w[n + 1 :] = np.conj(w[1:n][::-1])
    increments = np.fft.fft(w).real[:n]
    return _path_from_increments(grid, H, increments)
