"""Classical front-end: dataset ingestion, parametric fits, and baselines.

Covers the classical side of the workflow: load observations, fit a
parametric family by maximum likelihood, sample the fitted continuous
model for the i.i.d. Monte Carlo baseline, and evaluate the exact
grid expectation used as ground truth everywhere.
"""

import math
from dataclasses import dataclass

import numpy as np

from .dist import discretize


@dataclass
class Dataset:
    values: np.ndarray
    source_path: str
    skipped_rows: list          # (line_number, content) of non-data rows

    def __post_init__(self):
        if self.values.size == 0:
            raise ValueError("dataset is empty")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("dataset contains non-finite values")


def load_csv(path):
    """One numeric value per line; a single leading header line is allowed."""
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise OSError(f"cannot read dataset {path}: {exc}") from exc
    values = []
    skipped = []
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text:
            skipped.append((lineno, text))
            continue
        try:
            values.append(float(text))
        except ValueError:
            if lineno == 1 and not values:
                skipped.append((lineno, text))  # header
            else:
                raise ValueError(
                    f"{path}:{lineno}: non-numeric row {text!r}") from None
    if not values:
        raise ValueError(f"{path}: no numeric rows")
    return Dataset(np.asarray(values, dtype=float), str(path), skipped)


@dataclass
class FittedModel:
    family: str
    parameters: dict
    log_likelihood: float
    n_observations: int

    def to_json_dict(self):
        return {"family": self.family,
                "parameters": self.parameters,
                "n_observations": self.n_observations}


def fit_model(data, family):
    """Maximum-likelihood fit; gaussian uses the population (1/N) variance."""
    x = data.values
    n = x.size
    if family == "gaussian":
        mu = float(np.mean(x))
        sigma = float(np.sqrt(np.mean((x - mu) ** 2)))
        if sigma <= 0:
            raise ValueError("degenerate sigma: all observations are equal")
        ll = float(-0.5 * n * math.log(2 * math.pi) - n * math.log(sigma)
                   - 0.5 * np.sum(((x - mu) / sigma) ** 2))
        params = {"mu": mu, "sigma": sigma}
    elif family == "lognormal":
        if np.any(x <= 0):
            raise ValueError("lognormal fit requires positive observations")
        logs = np.log(x)
        mu = float(np.mean(logs))
        sigma = float(np.sqrt(np.mean((logs - mu) ** 2)))
        if sigma <= 0:
            raise ValueError("degenerate sigma: all observations are equal")
        ll = float(-0.5 * n * math.log(2 * math.pi) - n * math.log(sigma)
                   - np.sum(logs) - 0.5 * np.sum(((logs - mu) / sigma) ** 2))
        params = {"mu": mu, "sigma": sigma}
    elif family == "uniform":
        lo, hi = float(np.min(x)), float(np.max(x))
        if lo == hi:
            raise ValueError("degenerate range: all observations are equal")
        ll = float(-n * math.log(hi - lo))
        params = {"lo": lo, "hi": hi}
    else:
        raise ValueError(f"unknown model family {family!r}")
    return FittedModel(family, params, ll, n)


def default_range(model):
    """Discretization range: mu +- 5 sigma (log-space for lognormal)."""
    p = model.parameters
    if model.family == "gaussian":
        return p["mu"] - 5 * p["sigma"], p["mu"] + 5 * p["sigma"]
    if model.family == "lognormal":
        return (math.exp(p["mu"] - 5 * p["sigma"]),
                math.exp(p["mu"] + 5 * p["sigma"]))
    return p["lo"], p["hi"]


def model_to_distribution(model, n_qubits, x_lo=None, x_hi=None):
    lo, hi = default_range(model)
    if x_lo is not None:
        lo = x_lo
    if x_hi is not None:
        hi = x_hi
    return discretize(model.family, n_qubits, lo, hi, **model.parameters)


def sample_model(model, q, rng):
    p = model.parameters
    if model.family == "gaussian":
        return rng.normal(p["mu"], p["sigma"], size=q)
    if model.family == "lognormal":
        return rng.lognormal(p["mu"], p["sigma"], size=q)
    return rng.uniform(p["lo"], p["hi"], size=q)


def classical_mc(model, fn, q, rng):
    """(1/q) sum f(X_i) with X_i i.i.d. from the fitted continuous model."""
    if q < 1:
        raise ValueError("sample count must be >= 1")
    return float(np.mean(fn(sample_model(model, q, rng))))


def brute_force_expectation(dist, f):
    """Exact sum_x p(x) f(x) with compensated summation.

    Returns (normalized_expectation, denormalized_expectation).
    """
    if dist.probs.size != f.normalized.size:
        raise ValueError("distribution and function grids differ in length")
    a = math.fsum(p * v for p, v in zip(dist.probs, f.normalized))
    return a, f.denormalize(a)
