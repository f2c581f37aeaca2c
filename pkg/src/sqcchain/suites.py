"""Self-check suites run by ``sqcchain validate``.

Each suite compares a production code path against an independent oracle
and returns a :class:`SuiteResult`. The suites resolve the production
functions through their modules at call time, so a patched function (for
instance a sign error injected by a test) is picked up.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import correlators, ed, quantumness, toeplitz
from .criticality import analytic_dlambda, numeric_dlambda
from .model import ChainParams

__all__ = [
    "SuiteResult",
    "SUITES",
    "random_x_tensors",
    "random_toeplitz",
    "run_suites",
]


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checks: int
    worst: float
    tolerance: float
    seconds: float = 0.0
    failures: list = field(default_factory=list)
    skipped: int = 0

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checks": self.checks,
            "worst": self.worst,
            "tolerance": self.tolerance,
            "seconds": round(self.seconds, 3),
            "skipped": self.skipped,
            "failures": self.failures[:10],
        }


def random_x_tensors(rng: np.random.Generator, count: int) -> list:
    """Uniformly sampled physical Bloch tensors with t_0z == t_z0."""
    out = []
    while len(out) < count:
        z, xx, yy, zz = rng.uniform(-1, 1, 4)
        t = correlators.BlochTensor.from_components(z, xx, yy, zz)
        if t.is_physical(0.0):
            out.append(t)
    return out


def random_toeplitz(rng: np.random.Generator, size: int):
    """Column and row of a Toeplitz matrix with entries uniform in [-1, 1]."""
    c = rng.uniform(-1, 1, size)
    r = rng.uniform(-1, 1, size)
    r[0] = c[0]
    return c, r


def _finish(name, errors, tol, t0, labels) -> SuiteResult:
    errors = np.asarray(errors, dtype=float)
    bad = [labels[i] for i in np.flatnonzero(~(errors <= tol))]
    worst = float(np.nanmax(errors)) if errors.size else 0.0
    return SuiteResult(name, not bad, int(errors.size), worst, tol, time.perf_counter() - t0, bad)


def oracle_closed_form(count: int = 2000, seed: int = 7, tol: float = 1e-10) -> SuiteResult:
    """Measurement-branch oracle versus both closed forms."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    errors, labels = [], []
    for t in random_x_tensors(rng, count):
        state = quantumness.state_from_bloch(t)
        ref = quantumness.sqc_oracle(state)
        errors.append(max(abs(ref.l1 - quantumness.sqc_closed_l1(t)), abs(ref.re - quantumness.sqc_closed_re(t))))
        labels.append(t.as_tuple())
    return _finish("oracle_closed_form", errors, tol, t0, labels)


def levinson_dense(count: int = 300, seed: int = 11, tol: float = 1e-8) -> SuiteResult:
    """Recursion path versus dense LU on random instances.

    Instances where the recursion declines (and production falls back to
    dense LU anyway) are counted as skipped.
    """
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    errors, labels = [], []
    skipped = 0
    for i in range(count):
        size = int(rng.integers(1, 200))
        c, r = random_toeplitz(rng, size)
        try:
            fast = toeplitz.levinson_slogdet(c, r)
        except toeplitz.ToeplitzBreakdown:
            skipped += 1
            continue
        ref = toeplitz.dense_slogdet(c, r)
        same_sign = fast.sign == ref.sign
        # relative determinant error from the log difference
        errors.append(abs(math.expm1(fast.logabs - ref.logabs)) if same_sign else np.inf)
        labels.append((i, size))
    result = _finish("levinson_dense", errors, tol, t0, labels)
    result.skipped = skipped
    return result


ED_CASES = ((1.0, 0.3), (1.0, 1.5), (0.5, 1.5))
ED_SIZES = (7, 9, 11)


def ed_crosscheck(tol: float = 0.05, sizes=ED_SIZES, cases=ED_CASES, r_values=(1, 2)) -> SuiteResult:
    """Determinant pipeline versus exact diagonalization at equal odd N.

    Passes when every component agrees within ``tol`` at the largest size
    and the discrepancy does not grow with N.
    """
    t0 = time.perf_counter()
    errors, labels = [], []
    for gamma, lam in cases:
        history = {r: [] for r in r_values}
        for n in sizes:
            _, psi = ed.ground_state(ed.build_hamiltonian(n, gamma, lam, 0.0))
            for r in r_values:
                exact = np.array(ed.ed_bloch(psi, n, r).as_tuple())
                try:
                    approx = np.array(correlators.bloch_tensor(ChainParams(gamma, lam, 0.0, n), r).as_tuple())
                    history[r].append(float(np.abs(exact - approx).max()))
                except ArithmeticError:
                    history[r].append(np.inf)
        for r, diffs in history.items():
            monotone = all(b <= a + 1e-12 for a, b in zip(diffs, diffs[1:]))
            errors.append(diffs[-1] if monotone else np.inf)
            labels.append({"gamma": gamma, "lambda": lam, "r": r, "discrepancy_by_N": diffs})
    return _finish("ed_crosscheck", errors, tol, t0, labels)


def thermodynamic_goldens(n_sites: int = 2001, tol: float = 1e-3) -> SuiteResult:
    """Contractions against their infinite-chain closed forms."""
    t0 = time.perf_counter()
    errors, labels = [], []
    g = correlators.g_window(ChainParams(1.0, 1.0, 0.0, n_sites), 5)
    for n in range(-5, 6):
        errors.append(abs(g[n] + 2 / ((2 * n + 1) * math.pi)))
        labels.append(("ising lambda=1", n))
    g = correlators.g_window(ChainParams(1.0, 0.0, 0.0, n_sites), 5)
    for n in range(-5, 6):
        errors.append(abs(g[n] - (1.0 if n == -1 else 0.0)))
        labels.append(("ising lambda=0", n))
    g = correlators.g_window(ChainParams(0.0, 0.5, 0.0, n_sites), 1)
    theta0 = math.acos(0.5)
    errors.append(abs(g[0] - (2 * theta0 / math.pi - 1)))
    labels.append(("xx lambda=0.5", 0))
    errors.append(abs(g[1] - 2 * math.sin(theta0) / math.pi))
    labels.append(("xx lambda=0.5", 1))
    return _finish("thermodynamic_goldens", errors, tol, t0, labels)


def analytic_derivatives(tol: float = 1e-6, r: int = 5) -> SuiteResult:
    """Field derivatives of t_0z and G_n against central differences."""
    t0 = time.perf_counter()
    errors, labels = [], []
    for gamma, lam in ((1.0, 0.5), (1.0, 2.0), (0.5, 0.5), (0.1, 1.5)):
        params = ChainParams(gamma, lam, 0.0, 2001)
        dmag, dG = analytic_dlambda(params, r)
        num_mag = numeric_dlambda(lambda x: correlators.magnetization(params.replace(lam=x)), lam)
        num_G = numeric_dlambda(lambda x: correlators.g_window(params.replace(lam=x), r).values, lam)
        errors.append(abs(dmag - num_mag) / abs(num_mag))
        labels.append((gamma, lam, "t_0z"))
        # normwise relative: individual G_n derivatives can vanish by symmetry
        errors.append(float(np.abs(dG - num_G).max() / np.abs(num_G).max()))
        labels.append((gamma, lam, "G"))
    return _finish("analytic_derivatives", errors, tol, t0, labels)


SUITES = {
    "oracle_closed_form": oracle_closed_form,
    "levinson_dense": levinson_dense,
    "ed_crosscheck": ed_crosscheck,
    "thermodynamic_goldens": thermodynamic_goldens,
    "analytic_derivatives": analytic_derivatives,
}


def run_suites(names=None) -> list[SuiteResult]:
    names = list(SUITES) if names is None else list(names)
    unknown = set(names) - set(SUITES)
    if unknown:
        raise ValueError(f"unknown suites {sorted(unknown)}")
    results = []
    for name in names:
        correlators.clear_cache()
        results.append(SUITES[name]())
    return results
