"""Gaussian-process regression with a Matern kernel.

Targets are standardized inside fit and de-standardized on prediction, so
callers always see raw-scale means. Predictive variances stay on the
standardized scale and include the noise term: far from the data they
approach signal-variance + noise-variance.

Hyperparameter tuning is gradient-free: five seeded restarts scored by log
marginal likelihood, then coordinate descent over length-scale, signal
variance, and noise on a multiplicative grid (65 likelihood evaluations
per fit).
"""

import json
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve, solve_triangular
from scipy.spatial.distance import cdist

from .errors import ConfigError, ShapeError, SingularKernel

NU_VALUES = (0.5, 1.5, 2.5)

LS_BOUNDS = (1e-2, 1e3)
SV_BOUNDS = (1e-4, 1e3)
NV_BOUNDS = (1e-6, 1.0)

# multiplicative line-search grid: 2 sweeps x 3 coords x 10 = 60 evals,
# plus the 5 restart evaluations
_FACTORS = (1 / 16, 1 / 8, 1 / 4, 1 / 2, 1 / 1.5, 1.5, 2.0, 4.0, 8.0, 16.0)
_SWEEPS = 2
_RESTARTS = 5

_JITTER_START = 1e-8
_JITTER_CEIL = 1e-2


@dataclass(frozen=True)
class MaternKernel:
    length_scale: float = 1.0
    signal_variance: float = 1.0
    nu: float = 2.5
    noise_variance: float = 1e-2

    def __post_init__(self):
        if self.nu not in NU_VALUES:
            raise ConfigError(f"nu must be one of {NU_VALUES}, got {self.nu}")
        if self.length_scale <= 0 or self.signal_variance <= 0:
            raise ConfigError("length-scale and signal variance must be positive")
        if self.noise_variance < 0:
            raise ConfigError("noise variance must be non-negative")

    def correlation(self, dists):
        """Unit-variance Matern correlation of a distance matrix."""
        r = np.asarray(dists, dtype=float) / self.length_scale
        if self.nu == 0.5:
            return np.exp(-r)
        if self.nu == 1.5:
            s = math.sqrt(3.0) * r
            return (1.0 + s) * np.exp(-s)
        s = math.sqrt(5.0) * r
        return (1.0 + s + s * s / 3.0) * np.exp(-s)

    def __call__(self, dists):
        return self.signal_variance * self.correlation(dists)


@dataclass
class GprModel:
    kernel: MaternKernel
    X: np.ndarray
    y_std_scale: float
    y_mean: float
    targets: np.ndarray  # standardized
    chol: tuple  # scipy cho_factor output
    alpha: np.ndarray
    jitter: float
    lml: float

    def to_json(self, graph_ids=None):
        """Hyperparameters and standardization constants, data by reference."""
        doc = {
            "kernel": {
                "length_scale": self.kernel.length_scale,
                "signal_variance": self.kernel.signal_variance,
                "nu": self.kernel.nu,
                "noise_variance": self.kernel.noise_variance,
            },
            "target_mean": self.y_mean,
            "target_std": self.y_std_scale,
            "jitter": self.jitter,
            "log_marginal_likelihood": self.lml,
            "num_training_rows": int(len(self.X)),
        }
        if graph_ids is not None:
            doc["training_graph_ids"] = list(graph_ids)
        return json.dumps(doc, indent=2)


def _chol_with_jitter(K, signal_variance):
    """Cholesky of K, escalating diagonal jitter on failure.

    Returns (cho_factor_result, jitter_used). Jitter scales with the signal
    variance and grows tenfold per attempt; past the ceiling the kernel is
    declared singular.
    """
    try:
        return cho_factor(K, lower=True), 0.0
    except np.linalg.LinAlgError:
        pass
    jitter = _JITTER_START
    eye = np.eye(K.shape[0])
    while jitter <= _JITTER_CEIL * (1 + 1e-12):
        try:
            bump = jitter * signal_variance
            return cho_factor(K + bump * eye, lower=True), bump
        except np.linalg.LinAlgError:
            jitter *= 10.0
    raise SingularKernel(
        f"kernel matrix not positive definite at jitter ceiling {_JITTER_CEIL:g}"
    )


def _lml(dists, targets, kernel):
    """Log marginal likelihood, -inf when the kernel matrix is singular."""
    n = len(targets)
    K = kernel(dists) + kernel.noise_variance * np.eye(n)
    try:
        c = cho_factor(K + 1e-12 * kernel.signal_variance * np.eye(n), lower=True)
    except np.linalg.LinAlgError:
        return -np.inf
    alpha = cho_solve(c, targets)
    logdet = 2.0 * np.log(np.diag(c[0])).sum()
    return -0.5 * float(targets @ alpha) - 0.5 * logdet - 0.5 * n * math.log(2 * math.pi)


def _clip(value, bounds):
    return min(max(value, bounds[0]), bounds[1])


def _tune(dists, targets, nu, seed):
    """Multi-start coordinate descent on the log marginal likelihood."""
    rng = np.random.default_rng(seed)
    starts = [(1.0, 1.0, 1e-2)]
    for _ in range(_RESTARTS - 1):
        ls = 10.0 ** rng.uniform(math.log10(LS_BOUNDS[0]), math.log10(LS_BOUNDS[1]))
        nv = 10.0 ** rng.uniform(math.log10(NV_BOUNDS[0]), math.log10(NV_BOUNDS[1]))
        starts.append((ls, 1.0, nv))

    def score(params):
        ls, sv, nv = params
        return _lml(dists, targets, MaternKernel(ls, sv, nu, nv))

    best_lml, best = max((score(s), s) for s in starts)
    bounds = (LS_BOUNDS, SV_BOUNDS, NV_BOUNDS)
    for _ in range(_SWEEPS):
        for coord in range(3):
            for f in _FACTORS:
                cand = list(best)
                cand[coord] = _clip(best[coord] * f, bounds[coord])
                cand = tuple(cand)
                val = score(cand)
                if val > best_lml:
                    best, best_lml = cand, val
    return MaternKernel(best[0], best[1], nu, best[2])


def fit(X, y, tune=True, seed=0, nu=2.5, kernel=None):
    """Fit a GP to rows X and raw targets y.

    With tune=False (or an explicit kernel) hyperparameters are taken as
    given and only the linear algebra runs.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2:
        raise ShapeError(f"training rows must be 2-D, got shape {X.shape}")
    if len(X) != len(y):
        raise ShapeError(f"{len(X)} rows vs {len(y)} targets")
    if len(X) < 2:
        raise ShapeError("need at least 2 training rows")
    if not (np.isfinite(X).all() and np.isfinite(y).all()):
        raise ShapeError("training data must be finite")
    y_mean = float(y.mean())
    y_scale = float(y.std())
    if y_scale < 1e-12:
        y_scale = 1.0
    targets = (y - y_mean) / y_scale
    dists = cdist(X, X)
    if kernel is None:
        if tune:
            kernel = _tune(dists, targets, nu, seed)
        else:
            kernel = MaternKernel(nu=nu)
    n = len(X)
    K = kernel(dists) + kernel.noise_variance * np.eye(n)
    chol, jitter = _chol_with_jitter(K, kernel.signal_variance)
    alpha = cho_solve(chol, targets)
    logdet = 2.0 * np.log(np.diag(chol[0])).sum()
    lml = -0.5 * float(targets @ alpha) - 0.5 * logdet - 0.5 * n * math.log(2 * math.pi)
    return GprModel(
        kernel=kernel,
        X=X,
        y_std_scale=y_scale,
        y_mean=y_mean,
        targets=targets,
        chol=chol,
        alpha=alpha,
        jitter=jitter,
        lml=lml,
    )


def predict(model, X_new):
    """(means, variances): raw-scale means, standardized-scale variances."""
    X_new = np.asarray(X_new, dtype=float)
    if X_new.ndim != 2 or X_new.shape[1] != model.X.shape[1]:
        raise ShapeError(
            f"query columns {X_new.shape} do not match training {model.X.shape}"
        )
    k_star = model.kernel(cdist(model.X, X_new))
    means = model.y_mean + model.y_std_scale * (k_star.T @ model.alpha)
    v = solve_triangular(model.chol[0], k_star, lower=True)
    prior = model.kernel.signal_variance + model.kernel.noise_variance
    variances = np.maximum(prior - (v * v).sum(axis=0), 0.0)
    return means, variances


def pearson(y_true, y_pred):
    """Sample Pearson correlation; 0 with a warning on zero variance."""
    y_true = np.asarray(y_true, dtype=float)
    y_pred = np.asarray(y_pred, dtype=float)
    if y_true.shape != y_pred.shape or y_true.ndim != 1:
        raise ShapeError("pearson needs two equal-length vectors")
    if len(y_true) < 2:
        raise ShapeError("pearson needs at least 2 points")
    a = y_true - y_true.mean()
    b = y_pred - y_pred.mean()
    denom = math.sqrt(float(a @ a) * float(b @ b))
    if denom == 0.0:
        warnings.warn("zero-variance input to pearson; returning 0", RuntimeWarning)
        return 0.0
    return float(a @ b) / denom
