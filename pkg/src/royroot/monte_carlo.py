"""Ground-truth oracles: spiked complex Wishart sampling of the largest
generalized eigenvalue, empirical CDFs with KS distance, and direct
quadrature of the m = 2 joint eigenvalue density.

Sampling determinism
--------------------
Trials are generated in fixed-size chunks of ``CHUNK_TRIALS``.  Chunk c is
driven by a fresh counter-based Philox stream keyed by (seed, c), and every
trial consumes a fixed number of uniforms, so each trial's draws are a pure
function of (seed, trial index).  Results are therefore bit-identical for a
given (seed, trials) no matter how many workers run the chunks.

Complex Gaussians use the polar Box-Muller map z = sqrt(-ln(1-u1)) *
exp(2*pi*i*u2), giving E|z|^2 = 1 (real and imaginary parts each N(0, 1/2)),
the convention under which the closed-form CDFs hold.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .finite_cdf import ProblemDims, SpikeParam

__all__ = [
    "CHUNK_TRIALS",
    "McConfig",
    "EmpiricalCdf",
    "sample_lambda_max",
    "ks_distance",
    "joint_density_cdf_m2",
    "dump_samples",
]

CHUNK_TRIALS = 4096


@dataclass(frozen=True)
class McConfig:
    """Sampling run configuration; results depend only on (dims, spike, trials, seed)."""

    dims: ProblemDims
    spike: SpikeParam
    trials: int
    seed: int
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")


class EmpiricalCdf:
    """Sorted sample set with step-function evaluation."""

    __slots__ = ("samples",)

    def __init__(self, samples):
        arr = np.sort(np.asarray(samples, dtype=float))
        if arr.size == 0:
            raise ValueError("empirical CDF needs at least one sample")
        self.samples = arr

    @property
    def count(self) -> int:
        return self.samples.size

    def evaluate(self, x):
        """Fraction of samples <= x; scalar or array x."""
        out = np.searchsorted(self.samples, x, side="right") / self.count
        return float(out) if np.ndim(x) == 0 else out

    def scaled(self, factor: float) -> "EmpiricalCdf":
        """Empirical CDF of factor * sample (factor > 0), e.g. the p/n rescale."""
        if not factor > 0:
            raise ValueError(f"factor must be positive, got {factor}")
        return EmpiricalCdf(self.samples * factor)


def _chunk_lambda_max(dims: ProblemDims, eta: float, seed: int, chunk: int, count: int):
    """Largest generalized eigenvalues for `count` trials of chunk `chunk`."""
    m, n, p = dims.m, dims.n, dims.p
    draws = m * (p + n)
    gen = np.random.Generator(np.random.Philox(key=np.array([seed, chunk], dtype=np.uint64)))
    u = gen.random(count * 2 * draws).reshape(count, 2 * draws)
    z = np.sqrt(-np.log1p(-u[:, :draws])) * np.exp(2j * np.pi * u[:, draws:])
    X = z[:, :m * p].reshape(count, m, p)
    N = z[:, m * p:].reshape(count, m, n)
    # spike along the first coordinate; any unit vector gives the same law
    X[:, 0, :] *= math.sqrt(1.0 + eta)
    W1 = X @ X.conj().transpose(0, 2, 1)
    W2 = N @ N.conj().transpose(0, 2, 1)
    L = np.linalg.cholesky(W2)
    Y = np.linalg.solve(L, W1)
    C = np.linalg.solve(L, Y.conj().transpose(0, 2, 1)).conj().transpose(0, 2, 1)
    return np.linalg.eigvalsh(C)[:, -1]


def sample_lambda_max(config: McConfig) -> EmpiricalCdf:
    """Draw `trials` largest eigenvalues of W1 W2^{-1} under the configured spike.

    W1 = X X^H from p columns of CN_m(0, I + eta e1 e1^H) and W2 = N N^H from
    n columns of CN_m(0, I).  Samples are in the F-matrix scale; use
    ``.scaled(n/p)`` for the test-statistic scale.
    """
    dims, eta = config.dims, config.spike.eta
    nchunks = (config.trials + CHUNK_TRIALS - 1) // CHUNK_TRIALS
    counts = [min(CHUNK_TRIALS, config.trials - c * CHUNK_TRIALS) for c in range(nchunks)]

    def run(c):
        return _chunk_lambda_max(dims, eta, config.seed, c, counts[c])

    if config.workers == 1 or nchunks == 1:
        parts = [run(c) for c in range(nchunks)]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            parts = list(pool.map(run, range(nchunks)))
    return EmpiricalCdf(np.concatenate(parts))


def ks_distance(emp: EmpiricalCdf, analytic) -> float:
    """sup_i max(|i/N - F(x_i)|, |(i-1)/N - F(x_i)|) over the sorted samples.

    `analytic` must map an ndarray of points to CDF values.
    """
    f = np.asarray(analytic(emp.samples), dtype=float)
    n = emp.count
    i = np.arange(1, n + 1)
    return float(max(np.abs(i / n - f).max(), np.abs((i - 1) / n - f).max()))


def dump_samples(emp: EmpiricalCdf, stream) -> None:
    """Write one sample per line (17 significant digits) for external tooling."""
    for v in emp.samples:
        stream.write(f"{v:.17g}\n")


def joint_density_cdf_m2(n: int, p: int, eta: float, t: float, nodes: int = 64) -> float:
    """Pr(lambda_max <= t) for m = 2 by quadrature of the joint eigenvalue density.

    Integrates the transformed two-eigenvalue density g(x1, x2) over the
    ordered region 0 <= x1 <= x2 <= t/(1+t) with tensor Gauss-Legendre rules
    mapped onto the simplex.  The spike part of the density is evaluated in
    its cancellation-free polynomial-quotient form: the (x2 - x1) denominators
    of the two-term residue sum are cancelled symbolically against the squared
    Vandermonde, leaving

        (x2-x1)^2 * c * sum_{l<g} (1-c x1)^l (1-c x2)^{g-1-l}
                  / ((1-c x1)(1-c x2))^g

    with c = eta/(1+eta) and g = p + n - 1.  With eta = 0 the plain
    unspiked density is integrated instead.  t = inf integrates the full
    density, which is the normalization check for the constants.
    """
    m = 2
    if not (m <= n <= 12 and m <= p <= 12):
        raise ValueError(f"quadrature oracle envelope is 2 <= n,p <= 12, got n={n}, p={p}")
    if not eta >= 0:
        raise ValueError(f"eta must be >= 0, got {eta}")
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    s = 1.0 if math.isinf(t) else t / (1.0 + t)

    xg, wg = np.polynomial.legendre.leggauss(nodes)
    u, wu = (xg + 1.0) / 2.0, wg / 2.0
    x2 = s * u
    x1 = x2[:, None] * u[None, :]
    X2 = np.broadcast_to(x2[:, None], x1.shape)
    w2d = (s * wu)[:, None] * (x2[:, None] * wu[None, :])  # jacobian s * x2

    logk1 = (math.lgamma(n + p) + math.lgamma(n + p - 1)
             - math.lgamma(n) - math.lgamma(n - 1) - math.lgamma(p) - math.lgamma(p - 1))
    base = (x1 * X2) ** (p - 2) * ((1 - x1) * (1 - X2)) ** (n - 2) * (X2 - x1) ** 2
    if eta == 0.0:
        dens = math.exp(logk1) * base
    else:
        c = eta / (1.0 + eta)
        g = p + n - 1
        a1, a2 = 1.0 - c * x1, 1.0 - c * X2
        ssum = sum(a1 ** l * a2 ** (g - 1 - l) for l in range(g))
        logc0 = logk1 - math.log(p + n - 1) - math.log(eta) - (p - 1) * math.log1p(eta)
        dens = math.exp(logc0) * base * c * ssum / (a1 * a2) ** g
    return float((dens * w2d).sum())
