"""Runtime and credit model for a trapped-ion QCCD machine, and the cooling power-law fit.

The run time of a circuit is split into ion transport and cooling. Cooling
follows a power law in the transport time, which fixes the split. Removing SWAPs
shortens transport by a fixed time per SWAP, and cooling shrinks accordingly.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable

import numpy as np
from scipy import optimize, stats

from .circuit import ResourceReport


@dataclass(frozen=True)
class CostParams:
    shots: int = 1
    spam: int = 0
    tau_hqc_s: float = 5.0  # seconds of machine time per credit
    alpha_swap_s: float = 1e-3  # transport time saved per removed SWAP
    cool_a_s: float = 0.6
    cool_b: float = 0.9

    def __post_init__(self) -> None:
        if self.shots < 1 or self.spam < 0:
            raise ValueError("shots must be >= 1 and spam >= 0")
        if min(self.tau_hqc_s, self.alpha_swap_s, self.cool_a_s) <= 0:
            raise ValueError("time constants must be positive")
        if not 0 < self.cool_b < 2:
            raise ValueError("cooling exponent must lie in (0, 2)")

    @classmethod
    def from_dict(cls, doc: dict) -> CostParams:
        unknown = set(doc) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown cost parameters: {sorted(unknown)}")
        return cls(**doc)

    @classmethod
    def from_json(cls, text: str) -> CostParams:
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class CostEstimate:
    hqc: float
    t_run: float
    t_transport: float
    t_cool: float
    t_transport_lpc: float
    t_cool_lpc: float
    t_run_lpc: float
    clamped: bool = False  # LPC transport would have gone negative and was set to 0

    def to_dict(self) -> dict:
        return asdict(self)


def hqc(params: CostParams, n1q: int, n2q: int) -> float:
    """Credits: 5 + C (n1q + 10 n2q + 5 M) / 5000."""
    if n1q < 0 or n2q < 0:
        raise ValueError("gate counts must be non-negative")
    return 5 + params.shots * (n1q + 10 * n2q + 5 * params.spam) / 5000


def runtime_from_gates(params: CostParams, n2q: float) -> float:
    """Leading-order run time 0.002 n2q credits times the seconds per credit."""
    if n2q < 0:
        raise ValueError("n2q must be non-negative")
    return 0.002 * n2q * params.tau_hqc_s


def cooling_time(params: CostParams, t_transport: float) -> float:
    if t_transport < 0:
        raise ValueError("transport time must be non-negative")
    return params.cool_a_s * t_transport**params.cool_b


def _split_residual(t: float, params: CostParams, t_run: float) -> float:
    return t + cooling_time(params, t) - t_run


def solve_transport(params: CostParams, n2q: float) -> float:
    """Transport time T with T + a T^b equal to the run time, by bisection.

    The left side increases strictly from 0 and exceeds the run time at
    T = run time, so [0, run time] brackets the unique root.
    """
    t_run = runtime_from_gates(params, n2q)
    if t_run == 0:
        return 0.0
    root = optimize.bisect(
        _split_residual, 0.0, t_run, args=(params, t_run), xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500
    )
    return float(root)


def lpc_transport(params: CostParams, t_transport: float, n_swap: int) -> float:
    """Transport time with the SWAP-related part removed, clamped at zero."""
    if t_transport < 0 or n_swap < 0:
        raise ValueError("inputs must be non-negative")
    return max(0.0, t_transport - params.alpha_swap_s * n_swap)


def estimate(params: CostParams, standard: ResourceReport, lpc: ResourceReport | None = None) -> CostEstimate:
    """Standard-compiler run time split into transport and cooling, and the SWAP-free counterpart.

    The LPC path follows the transport-reduction rule literally: it starts from
    the standard transport time and subtracts alpha per standard SWAP. ``lpc`` is
    accepted for symmetry but does not enter the time split.
    """
    del lpc
    t_run = runtime_from_gates(params, standard.n2q)
    t_tr = solve_transport(params, standard.n2q)
    t_cool = t_run - t_tr
    raw = t_tr - params.alpha_swap_s * standard.n_swap
    t_tr_lpc = lpc_transport(params, t_tr, standard.n_swap)
    t_cool_lpc = cooling_time(params, t_tr_lpc)
    return CostEstimate(
        hqc=hqc(params, standard.n1q, standard.n2q),
        t_run=t_run,
        t_transport=t_tr,
        t_cool=t_cool,
        t_transport_lpc=t_tr_lpc,
        t_cool_lpc=t_cool_lpc,
        t_run_lpc=t_tr_lpc + t_cool_lpc,
        clamped=raw < 0,
    )


def reference_counts(n: int) -> ResourceReport:
    """Standard-compiler counts used for the runtime figure: n2q = n^2/2 - n/2 - 2, nSwap = n^2/2 - n/2."""
    pairs = n * (n - 1) // 2
    return ResourceReport(n2q=max(pairs - 2, 0), n_swap=pairs)


def runtime_rows(params: CostParams, n_min: int, n_max: int) -> list[dict]:
    rows = []
    for n in range(n_min, n_max + 1):
        est = estimate(params, reference_counts(n))
        rows.append(
            {
                "n": n,
                "t_run_standard_s": est.t_run,
                "t_transp_s": est.t_transport,
                "t_cool_s": est.t_cool,
                "t_run_lpc_s": est.t_run_lpc,
            }
        )
    return rows


@dataclass(frozen=True)
class PowerLawFit:
    a: float
    b: float
    a_err: float
    b_err: float


def fit_power_law(points: Iterable[tuple[float, float]]) -> PowerLawFit:
    """Least squares of log y = log a + b log x; a's error by the delta method."""
    pts = np.asarray(list(points), dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 2 or pts.shape[1] != 2:
        raise ValueError("need at least two (x, y) points")
    if np.any(pts <= 0):
        raise ValueError("power-law fit needs strictly positive coordinates")
    x, y = np.log(pts[:, 0]), np.log(pts[:, 1])
    if np.ptp(x) == 0:
        raise ValueError("x values must not all coincide")
    res = stats.linregress(x, y)
    a = math.exp(res.intercept)
    return PowerLawFit(a=a, b=float(res.slope), a_err=a * float(res.intercept_stderr), b_err=float(res.stderr))


def load_fit_csv(path: str | Path) -> list[tuple[float, float]]:
    """Read ``transport_s,cooling_s`` rows."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"transport_s", "cooling_s"} <= set(reader.fieldnames):
            raise ValueError("CSV must have columns transport_s,cooling_s")
        return [(float(r["transport_s"]), float(r["cooling_s"])) for r in reader]
