"""Efficiency curves, high-efficiency bandwidth extraction, and optimization over damping.

The conversion efficiency of a network is eta(omega) = |S_out,in(omega)|^2 for a
chosen port pair.  This module scans it over frequency, extracts the maximal
disjoint intervals where eta stays above a threshold (endpoints refined by
bisection until eta sits on the threshold to 1e-9), counts branches, builds
(kappa, omega) efficiency maps for one-parameter converter families, and finds
the damping that maximizes the widest interval.

The width-versus-kappa curve is discontinuous where separate branches merge into
one (the merged interval is suddenly much wider), so the optimizer never trusts
local search alone: it scans a coarse grid, refines by golden section around the
best grid point, and returns the best evaluation it has ever seen.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .converter import (
    DetunedParams,
    ResonantParams,
    detuned_network,
    resonant_network,
    two_mode_network,
)
from .linalg import eigenvalues_hermitian
from .network import CoupledModeNetwork
from .scattering import transmission_grid

# Dense-scan density for interval extraction, and the bisection stopping rule
# |eta - threshold| <= ETA_REFINE_TOL at refined endpoints.
DEFAULT_SCAN_POINTS = 4001
ETA_REFINE_TOL = 1e-9

# Coarse kappa-grid density for optimize_kappa before golden-section refinement.
COARSE_KAPPA_POINTS = 201


@dataclass(frozen=True)
class EfficiencyCurve:
    """eta over an ascending frequency grid for one port pair."""

    omegas: np.ndarray
    etas: np.ndarray
    in_port: str
    out_port: str


@dataclass(frozen=True)
class Interval:
    """One contiguous frequency interval; width = hi - lo."""

    lo: float
    hi: float

    @property
    def width(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class BandwidthReport:
    """Disjoint ascending intervals where eta >= threshold, and the widest width."""

    threshold: float
    intervals: tuple[Interval, ...]
    max_width: float


@dataclass(frozen=True)
class EfficiencyMap:
    """eta over a (kappa, omega) grid; one row per kappa, one column per omega."""

    kappas: np.ndarray
    omegas: np.ndarray
    etas: np.ndarray


@dataclass(frozen=True)
class ConverterFamily:
    """One-parameter converter family: kappa_o = kappa_mu = kappa, rest fixed.

    kind "resonant" builds the symmetric three-mode chain with coupling ``g``;
    "detuned" adds intermediate-mode detuning ``delta_mu``; "two_mode" couples
    the resonators directly with strength ``s`` (defaulting to ``g``).
    """

    kind: str
    g: float = 1.0
    delta_mu: float = 0.0
    s: float | None = None

    def build(self, kappa: float) -> CoupledModeNetwork:
        if self.kind == "resonant":
            return resonant_network(ResonantParams(self.g, self.g, kappa, kappa))
        if self.kind == "detuned":
            return detuned_network(
                DetunedParams(self.g, self.g, kappa, kappa, delta_mu=self.delta_mu)
            )
        if self.kind == "two_mode":
            s = self.g if self.s is None else self.s
            return two_mode_network(s, kappa, kappa)
        raise ValueError(f"unknown family kind {self.kind!r}")


def _build_member(family, kappa: float) -> CoupledModeNetwork:
    """A family is a ConverterFamily or any callable kappa -> network."""
    if hasattr(family, "build"):
        return family.build(kappa)
    return family(kappa)


def _conversion_ports(net: CoupledModeNetwork) -> tuple[str, str]:
    labels = net.port_labels()
    return labels[0], labels[-1]


def default_omega_window(net: CoupledModeNetwork) -> tuple[float, float]:
    """Frequency window guaranteed to contain every high-efficiency branch.

    Branches sit near the eigenvalues of the coupling matrix and extend no
    further than a few damping/coupling widths, so the eigenvalue span padded by
    four off-diagonal coupling strengths covers them with margin.
    """
    eigs = eigenvalues_hermitian(net.coupling)
    off = net.coupling - np.diag(np.diag(net.coupling))
    margin = 4.0 * max(1.0, float(np.abs(off).max()) if off.size else 0.0)
    return float(eigs.min() - margin), float(eigs.max() + margin)


def _eta_grid(net, omegas, in_port, out_port, on_singular="raise") -> np.ndarray:
    return np.abs(transmission_grid(net, omegas, in_port, out_port, on_singular)) ** 2


def efficiency_curve(net: CoupledModeNetwork, in_port: str, out_port: str, omega_grid) -> EfficiencyCurve:
    """eta at each grid frequency; singular frequencies become gaps, not errors.

    The grid must be strictly ascending.  Any frequency where the network is
    singular (an undamped resonance hit exactly) is dropped from the curve with
    a warning, so ``omegas`` may come back shorter than the request.
    """
    omega_grid = np.asarray(omega_grid, dtype=float)
    if omega_grid.ndim != 1 or len(omega_grid) == 0:
        raise ValueError("omega_grid must be a non-empty 1-D array")
    if np.any(np.diff(omega_grid) <= 0.0):
        raise ValueError("omega_grid must be strictly ascending")
    etas = _eta_grid(net, omega_grid, in_port, out_port, on_singular="nan")
    keep = np.isfinite(etas)
    if not keep.all():
        dropped = omega_grid[~keep]
        warnings.warn(
            f"network singular at {len(dropped)} grid frequencies "
            f"(first at omega={dropped[0]:g}); points omitted from the curve",
            stacklevel=2,
        )
    omegas = omega_grid[keep].copy()
    omegas.setflags(write=False)
    kept = etas[keep]
    kept.setflags(write=False)
    return EfficiencyCurve(omegas=omegas, etas=kept, in_port=in_port, out_port=out_port)


def _refine_crossings(net, in_port, out_port, threshold, lo, hi, f_lo_sign):
    """Vectorized bisection on eta - threshold inside the brackets [lo, hi].

    Each bracket must change sign.  Returns the refined crossing frequencies,
    stopping per-crossing once |eta - threshold| <= ETA_REFINE_TOL.
    """
    lo = lo.copy()
    hi = hi.copy()
    sign_lo = f_lo_sign.copy()
    result = (lo + hi) / 2.0
    done = np.zeros(len(lo), dtype=bool)
    for _ in range(96):
        mid = (lo + hi) / 2.0
        f_mid = (
            _eta_grid(net, mid, in_port, out_port)
            - threshold
        )
        newly = (np.abs(f_mid) <= ETA_REFINE_TOL) & ~done
        result[newly] = mid[newly]
        done |= newly
        if done.all():
            break
        same = (np.sign(f_mid) == sign_lo) & ~done
        opposite = ~same & ~done
        lo[same] = mid[same]
        hi[opposite] = mid[opposite]
        result[~done] = mid[~done]
    return result


def high_efficiency_intervals(
    net: CoupledModeNetwork,
    in_port: str,
    out_port: str,
    threshold: float,
    omega_range,
    points: int = DEFAULT_SCAN_POINTS,
) -> BandwidthReport:
    """Maximal disjoint intervals with eta >= threshold inside omega_range.

    A dense scan (default 4001 points) locates the intervals; every interior
    endpoint is bisection-refined until eta equals the threshold to
    ``ETA_REFINE_TOL``.  Endpoints on the range boundary stay clipped there.
    An empty report (max_width 0) is returned when no grid point qualifies.
    """
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must lie in (0, 1), got {threshold}")
    w_lo, w_hi = float(omega_range[0]), float(omega_range[1])
    if not (math.isfinite(w_lo) and math.isfinite(w_hi)) or w_hi < w_lo:
        raise ValueError(f"omega_range must be finite with min <= max, got {omega_range}")
    if points < 2 or w_hi == w_lo:
        grid = np.array([w_lo])
    else:
        grid = np.linspace(w_lo, w_hi, int(points))
    etas = _eta_grid(net, grid, in_port, out_port, on_singular="nan")
    finite = np.isfinite(etas)
    if not finite.all():
        warnings.warn(
            f"network singular at {int((~finite).sum())} scan frequencies; "
            "those points are excluded from interval detection",
            stacklevel=2,
        )
    above = finite & (etas >= threshold)
    # A one-point singular gap between qualifying neighbors does not split an
    # interval: the curve is continuous through a removable singularity.
    for i in np.flatnonzero(~finite):
        if 0 < i < len(grid) - 1 and above[i - 1] and above[i + 1]:
            above[i] = True
    if not above.any():
        return BandwidthReport(threshold=float(threshold), intervals=(), max_width=0.0)

    runs: list[tuple[int, int]] = []
    start = None
    for i, flag in enumerate(above):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            runs.append((start, i - 1))
            start = None
    if start is not None:
        runs.append((start, len(above) - 1))

    # Gather refinable edges: (bracket_lo, bracket_hi, sign of eta-threshold at bracket_lo).
    edge_lo, edge_hi, edge_sign = [], [], []
    edge_slot: list[tuple[int, str]] = []
    for run_index, (i0, i1) in enumerate(runs):
        if i0 > 0 and finite[i0 - 1]:
            edge_lo.append(grid[i0 - 1])
            edge_hi.append(grid[i0])
            edge_sign.append(-1.0)
            edge_slot.append((run_index, "lo"))
        if i1 < len(grid) - 1 and finite[i1 + 1]:
            edge_lo.append(grid[i1])
            edge_hi.append(grid[i1 + 1])
            edge_sign.append(1.0)
            edge_slot.append((run_index, "hi"))
    refined: dict[tuple[int, str], float] = {}
    if edge_lo:
        crossings = _refine_crossings(
            net,
            in_port,
            out_port,
            threshold,
            np.array(edge_lo),
            np.array(edge_hi),
            np.array(edge_sign),
        )
        refined = dict(zip(edge_slot, (float(x) for x in crossings)))

    intervals = []
    for run_index, (i0, i1) in enumerate(runs):
        lo = refined.get((run_index, "lo"), float(grid[i0]))
        hi = refined.get((run_index, "hi"), float(grid[i1]))
        intervals.append(Interval(lo=lo, hi=hi))
    max_width = max((iv.width for iv in intervals), default=0.0)
    return BandwidthReport(
        threshold=float(threshold), intervals=tuple(intervals), max_width=float(max_width)
    )


def max_bandwidth(
    net: CoupledModeNetwork,
    in_port: str,
    out_port: str,
    threshold: float,
    omega_range,
    points: int = DEFAULT_SCAN_POINTS,
) -> float:
    """Width of the widest interval with eta >= threshold (0 if none)."""
    return high_efficiency_intervals(net, in_port, out_port, threshold, omega_range, points).max_width


def branch_count(
    net: CoupledModeNetwork,
    in_port: str,
    out_port: str,
    threshold: float,
    omega_range,
    points: int = DEFAULT_SCAN_POINTS,
) -> int:
    """Number of disjoint intervals with eta >= threshold."""
    return len(
        high_efficiency_intervals(net, in_port, out_port, threshold, omega_range, points).intervals
    )


def efficiency_map(family, kappa_grid, omega_grid) -> EfficiencyMap:
    """eta over the (kappa, omega) grid for a one-parameter converter family.

    Rows follow ``kappa_grid`` ascending, columns ``omega_grid`` ascending.
    Singular points (possible only for undamped members) are recorded as NaN
    gaps with a warning, as in :func:`efficiency_curve`.
    """
    kappas = np.asarray(kappa_grid, dtype=float)
    omegas = np.asarray(omega_grid, dtype=float)
    for name, grid in (("kappa_grid", kappas), ("omega_grid", omegas)):
        if grid.ndim != 1 or len(grid) == 0:
            raise ValueError(f"{name} must be a non-empty 1-D array")
        if np.any(np.diff(grid) <= 0.0):
            raise ValueError(f"{name} must be strictly ascending")
    rows = np.empty((len(kappas), len(omegas)))
    gap_count = 0
    for i, kappa in enumerate(kappas):
        net = _build_member(family, float(kappa))
        in_port, out_port = _conversion_ports(net)
        rows[i] = _eta_grid(net, omegas, in_port, out_port, on_singular="nan")
        gap_count += int(np.count_nonzero(~np.isfinite(rows[i])))
    if gap_count:
        warnings.warn(f"map contains {gap_count} singular grid points recorded as NaN", stacklevel=2)
    rows.setflags(write=False)
    return EfficiencyMap(kappas=kappas.copy(), omegas=omegas.copy(), etas=rows)


def optimize_kappa(
    family,
    threshold: float,
    kappa_range,
    coarse_points: int = COARSE_KAPPA_POINTS,
    omega_range=None,
) -> tuple[float, float]:
    """Damping that maximizes the widest above-threshold interval.

    Coarse scan over ``kappa_range`` (default 201 points) followed by
    golden-section refinement bracketed by the best point's neighbors.  The
    width is discontinuous where branches merge, so the optimizer does not
    assume unimodality: it returns the best (kappa, width) pair it actually
    evaluated anywhere, never a merely-converged-to point.  A single-point
    range returns that kappa with its width.
    """
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must lie in (0, 1), got {threshold}")
    k_lo, k_hi = float(kappa_range[0]), float(kappa_range[1])
    if not (0.0 < k_lo <= k_hi) or not math.isfinite(k_hi):
        raise ValueError(f"kappa_range must be positive and finite, got {kappa_range}")

    if omega_range is None:
        omega_range = default_omega_window(_build_member(family, (k_lo + k_hi) / 2.0))

    def width_at(kappa: float) -> float:
        net = _build_member(family, kappa)
        in_port, out_port = _conversion_ports(net)
        return max_bandwidth(net, in_port, out_port, threshold, omega_range)

    if k_lo == k_hi:
        return k_lo, width_at(k_lo)

    ks = np.linspace(k_lo, k_hi, max(int(coarse_points), 2))
    widths = np.array([width_at(float(k)) for k in ks])
    best_i = int(np.argmax(widths))
    best_k = float(ks[best_i])
    best_w = float(widths[best_i])

    def track(kappa: float) -> float:
        nonlocal best_k, best_w
        w = width_at(kappa)
        if w > best_w:
            best_k, best_w = kappa, w
        return w

    a = float(ks[max(best_i - 1, 0)])
    b = float(ks[min(best_i + 1, len(ks) - 1)])
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc = track(c)
    fd = track(d)
    tol = 1e-8 * max(1.0, k_hi - k_lo)
    for _ in range(200):
        if b - a <= tol:
            break
        if fc < fd:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = track(d)
        else:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = track(c)
    return best_k, best_w
