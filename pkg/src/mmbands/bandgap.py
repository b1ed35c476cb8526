"""Frequency coverage maps and band-gap detection.

A coverage map discretizes the frequency axis into bins and marks every bin
that any propagating branch can reach.  Between consecutive sweep samples of
the same branch the whole spanned interval is marked, so a coarse grid can
never fake a gap.  Above the end of the wavenumber grid a branch
contributes in one of two ways: a branch that has reached its horizontal
asymptote stops at its saturated value, while an unbounded branch keeps
rising and therefore covers everything up to the frequency ceiling.

Band-gaps are the maximal unmarked intervals wider than a minimum width.
The "complete" scope intersects the longitudinal and both transverse
blocks: an interval counts as a complete gap when no displacement-coupled
plane wave propagates there at any wavenumber.  The displacement-free
micro-modes can be added to the intersection with ``include_uncoupled``;
they are left out by default because several model variants let those modes
sweep the whole frequency axis, hiding the optic-branch gaps that the
coupled blocks exhibit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ElasticParams, InertiaParams, ModelKind, WaveBlock
from .dispersion import KGrid, cutoffs, default_grid, sweep

COMPLETE = "complete"

# ceiling = headroom * largest cut-off; bin and width defaults resolve the
# narrowest gaps the five variants produce while rejecting grid noise
CEILING_HEADROOM = 1.5
CEILING_TO_DELTA = 4000.0
CEILING_TO_MIN_GAP = 400.0


class InconsistentInputsError(Exception):
    """Coverage was asked to merge curves from different parameter sets."""


@dataclass(frozen=True)
class CoverageMap:
    """Boolean occupancy of the frequency axis up to a ceiling.

    ``provenance`` records, per occupied bin, which block/branch touched it.
    """

    omega_ceiling: float
    delta_omega: float
    bins: np.ndarray
    provenance: dict

    @property
    def n_bins(self) -> int:
        return int(self.bins.size)

    def empty_runs(self):
        """Maximal runs of unoccupied bins as (first_bin, last_bin) pairs."""
        runs = []
        start = None
        for i, occupied in enumerate(self.bins):
            if not occupied and start is None:
                start = i
            elif occupied and start is not None:
                runs.append((start, i - 1))
                start = None
        if start is not None:
            runs.append((start, self.n_bins - 1))
        return runs


@dataclass(frozen=True)
class Gap:
    """A frequency interval [omega_lo, omega_hi] free of propagating waves."""

    omega_lo: float
    omega_hi: float

    @property
    def width(self) -> float:
        return self.omega_hi - self.omega_lo


@dataclass(frozen=True)
class GapReport:
    """Band-gap intervals with the detection parameters echoed."""

    gaps: tuple[Gap, ...]
    scope: str
    blocks: tuple[str, ...]
    omega_ceiling: float
    delta_omega: float
    min_gap_width: float
    model: ModelKind
    elastic: ElasticParams
    inertia: InertiaParams


def coverage(curves, omega_ceiling: float, delta_omega: float) -> CoverageMap:
    """Mark every frequency bin reachable by any branch of the given curves."""
    curves = list(curves)
    if not curves:
        raise InconsistentInputsError("no curves given")
    keys = {c.parameter_key() for c in curves}
    if len(keys) != 1:
        raise InconsistentInputsError(
            "curves come from different parameter sets")

    n_bins = int(np.ceil(omega_ceiling / delta_omega))
    bins = np.zeros(n_bins, dtype=bool)
    provenance: dict[int, set] = {}

    def mark(lo: float, hi: float, tag: str):
        if lo > hi:
            lo, hi = hi, lo
        if lo >= omega_ceiling:
            return
        hi = min(hi, omega_ceiling)
        first = min(int(lo / delta_omega), n_bins - 1)
        last = min(int(hi / delta_omega), n_bins - 1)
        bins[first:last + 1] = True
        for b in range(first, last + 1):
            provenance.setdefault(b, set()).add(tag)

    for curve in curves:
        for idx, branch in enumerate(curve.branches):
            tag = f"{curve.block.value}:{branch.label}"
            om = branch.omegas
            for j in range(om.size - 1):
                mark(float(om[j]), float(om[j + 1]), tag)
            if om.size == 1:
                mark(float(om[0]), float(om[0]), tag)
            if not curve.asymptote_flags[idx]:
                # unbounded branch: it keeps rising past the grid end
                mark(float(om[-1]), omega_ceiling, tag)

    return CoverageMap(omega_ceiling=omega_ceiling, delta_omega=delta_omega,
                       bins=bins, provenance=provenance)


def gaps_from_coverage(cov: CoverageMap, min_gap_width: float) -> tuple[Gap, ...]:
    """Maximal empty intervals of a coverage map, at bin resolution."""
    out = []
    for first, last in cov.empty_runs():
        lo = first * cov.delta_omega
        hi = min((last + 1) * cov.delta_omega, cov.omega_ceiling)
        if hi - lo >= min_gap_width:
            out.append(Gap(omega_lo=lo, omega_hi=hi))
    return tuple(out)


def _blocks_for_scope(scope, include_uncoupled: bool):
    if scope == COMPLETE:
        blocks = [(WaveBlock.LONGITUDINAL, 2), (WaveBlock.TRANSVERSE, 2),
                  (WaveBlock.TRANSVERSE, 3)]
        if include_uncoupled:
            blocks.append((WaveBlock.UNCOUPLED, 2))
        return blocks
    if isinstance(scope, WaveBlock):
        return [(scope, 2)]
    raise ValueError(f"scope must be a WaveBlock or {COMPLETE!r}: {scope!r}")


def default_omega_ceiling(model: ModelKind, elastic: ElasticParams,
                          inertia: InertiaParams) -> float:
    """Default detection ceiling: headroom above the largest cut-off."""
    largest = max(c.omega for cuts in cutoffs(model, elastic, inertia).values()
                  for c in cuts)
    return CEILING_HEADROOM * largest


def detect_gaps(model: ModelKind, elastic: ElasticParams,
                inertia: InertiaParams, scope=COMPLETE, *,
                grid: KGrid | None = None,
                omega_ceiling: float | None = None,
                delta_omega: float | None = None,
                min_gap_width: float | None = None,
                include_uncoupled: bool = False) -> GapReport:
    """Sweep the requested blocks and report their band-gaps.

    ``scope`` is a single WaveBlock for a per-block report or ``COMPLETE``
    for the intersection over the displacement-coupled blocks (optionally
    also the uncoupled one, see the module docstring).
    """
    if grid is None:
        grid = default_grid(elastic)
    if omega_ceiling is None:
        omega_ceiling = default_omega_ceiling(model, elastic, inertia)
    if delta_omega is None:
        delta_omega = omega_ceiling / CEILING_TO_DELTA
    if min_gap_width is None:
        min_gap_width = omega_ceiling / CEILING_TO_MIN_GAP

    block_specs = _blocks_for_scope(scope, include_uncoupled)
    curves = [sweep(model, elastic, inertia, blk, grid, transverse_axis=axis)
              for blk, axis in block_specs]
    cov = coverage(curves, omega_ceiling, delta_omega)
    gaps = gaps_from_coverage(cov, min_gap_width)

    scope_name = scope if isinstance(scope, str) else scope.value
    block_names = tuple(
        blk.value if axis == 2 else f"{blk.value}-{axis}"
        for blk, axis in block_specs)
    return GapReport(gaps=gaps, scope=scope_name, blocks=block_names,
                     omega_ceiling=omega_ceiling, delta_omega=delta_omega,
                     min_gap_width=min_gap_width, model=model,
                     elastic=elastic, inertia=inertia)
