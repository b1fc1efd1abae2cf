"""Parallel rasterizer for linear twist slices at a fixed half-length.

Each pixel samples the twist at its center, classifies it with the
Markov-tree search, and records QF / NotQF / Undecided.  Work is split
by rows across a thread pool (the compiled search releases the GIL) and
merged in row order, so the output is bit-identical for any thread
count.  Images are written as binary PPM with the window and parameters
recorded in header comments; white = QF, black = NotQF, red = Undecided.

Verdict codes in the grid match the kernel: 0 QF, 1 NotQF, 2 Undecided.
Row 0 of the grid is the lowest imaginary part; PPM rows are written
top-down, so the file starts with the highest one.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._kernel import NOT_QF_CODE, QF_CODE, UNDECIDED_CODE, bq_search
from .bq import DEFAULT_TRACE_FLOOR
from .explicit_groups import markov_triple
from .limits import NumericFloorError, PRECISION_FLOOR

OUTCOME_NAMES = {QF_CODE: "QF", NOT_QF_CODE: "NotQF", UNDECIDED_CODE: "Undecided"}
DEFAULT_PALETTE = ((255, 255, 255), (0, 0, 0), (255, 0, 0))
_IM_SLACK = 1e-9


def default_window(c: float) -> tuple[float, float, float, float]:
    """One twist period wide, the full imaginary strip high."""
    return (-c, c, -math.pi, math.pi)


@dataclass(frozen=True)
class RasterJob:
    c: float
    window: tuple[float, float, float, float]
    width: int
    height: int
    budget: int = 50_000
    threads: int = 1
    palette: tuple[tuple[int, int, int], ...] = DEFAULT_PALETTE

    def __post_init__(self) -> None:
        if not (math.isfinite(self.c) and self.c > 0.0):
            raise ValueError(f"half-length must be positive, got {self.c}")
        if self.c <= PRECISION_FLOOR:
            raise NumericFloorError(
                f"half-length {self.c} is at or below the precision floor {PRECISION_FLOOR}"
            )
        re_min, re_max, im_min, im_max = self.window
        if not (re_min < re_max and im_min < im_max):
            raise ValueError(f"window must be nonempty, got {self.window}")
        if im_min < -math.pi - _IM_SLACK or im_max > math.pi + _IM_SLACK:
            raise ValueError(
                f"imaginary range must sit inside (-pi, pi], got [{im_min}, {im_max}]"
            )
        if self.width < 1 or self.height < 1:
            raise ValueError(f"need at least one pixel, got {self.width}x{self.height}")
        if self.budget < 1:
            raise ValueError(f"budget must be at least 1, got {self.budget}")
        if self.threads < 1:
            raise ValueError(f"thread count must be at least 1, got {self.threads}")
        if len(self.palette) != 3 or any(len(color) != 3 for color in self.palette):
            raise ValueError("palette needs exactly three RGB triples")

    def pixel_size(self) -> tuple[float, float]:
        re_min, re_max, im_min, im_max = self.window
        return ((re_max - re_min) / self.width, (im_max - im_min) / self.height)

    def pixel_center(self, row: int, col: int) -> complex:
        # measured from the window midpoint so that mirrored pixels sample
        # exactly conjugate twists when the window is symmetric
        re_min, re_max, im_min, im_max = self.window
        dre, dim = self.pixel_size()
        re = 0.5 * (re_min + re_max) + (col + 0.5 - self.width / 2.0) * dre
        im = 0.5 * (im_min + im_max) + (row + 0.5 - self.height / 2.0) * dim
        return complex(re, im)


@dataclass(frozen=True, eq=False)
class SliceImage:
    job: RasterJob
    grid: np.ndarray
    wall_time: float
    counts: dict[str, int]

    def count_of(self, outcome: str) -> int:
        return self.counts.get(outcome, 0)


def _count_verdicts(grid: np.ndarray) -> dict[str, int]:
    return {name: int(np.sum(grid == code)) for code, name in OUTCOME_NAMES.items()}


def _render_row(job: RasterJob, row: int) -> np.ndarray:
    out = np.empty(job.width, dtype=np.uint8)
    for col in range(job.width):
        tau = job.pixel_center(row, col)
        x, y, z = markov_triple(job.c, tau)
        code, _, _, _ = bq_search(x, y, z, job.budget, DEFAULT_TRACE_FLOOR)
        out[col] = code
    return out


def render(job: RasterJob) -> SliceImage:
    """Classify every pixel center; output is independent of thread count."""
    start = time.perf_counter()
    if job.threads == 1:
        rows = [_render_row(job, i) for i in range(job.height)]
    else:
        with ThreadPoolExecutor(max_workers=job.threads) as pool:
            rows = list(pool.map(lambda i: _render_row(job, i), range(job.height)))
    grid = np.vstack(rows) if rows else np.empty((0, job.width), np.uint8)
    grid.setflags(write=False)
    return SliceImage(
        job=job,
        grid=grid,
        wall_time=time.perf_counter() - start,
        counts=_count_verdicts(grid),
    )


@dataclass(frozen=True)
class ComponentReport:
    component_count: int
    pixel_counts: tuple[int, ...]
    real_axis_in_window: bool
    real_axis_component_count: int
    real_axis_unique: bool


def components(img: SliceImage) -> ComponentReport:
    """Label 4-connected QF components; Undecided pixels join nothing."""
    grid = img.grid
    height, width = grid.shape
    labels = np.full(grid.shape, -1, dtype=np.int32)
    sizes: list[int] = []
    for si in range(height):
        for sj in range(width):
            if grid[si, sj] != QF_CODE or labels[si, sj] >= 0:
                continue
            label = len(sizes)
            stack = [(si, sj)]
            labels[si, sj] = label
            size = 0
            while stack:
                i, j = stack.pop()
                size += 1
                for ni, nj in ((i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)):
                    if 0 <= ni < height and 0 <= nj < width:
                        if grid[ni, nj] == QF_CODE and labels[ni, nj] < 0:
                            labels[ni, nj] = label
                            stack.append((ni, nj))
            sizes.append(size)

    _, _, im_min, im_max = img.job.window
    _, dim = img.job.pixel_size()
    axis_in_window = im_min < 0.0 < im_max
    axis_labels: set[int] = set()
    if axis_in_window and height > 0:
        centers = im_min + (np.arange(height) + 0.5) * dim
        axis_row = int(np.argmin(np.abs(centers)))
        axis_labels = {int(v) for v in labels[axis_row] if v >= 0}
    return ComponentReport(
        component_count=len(sizes),
        pixel_counts=tuple(sorted(sizes, reverse=True)),
        real_axis_in_window=axis_in_window,
        real_axis_component_count=len(axis_labels),
        real_axis_unique=len(axis_labels) == 1,
    )


@dataclass(frozen=True)
class SymmetryReport:
    conjugation_fraction: float | None
    conjugation_skipped: str | None
    conjugation_mismatches: tuple[tuple[complex, complex, str, str], ...]
    periodicity_fraction: float | None
    periodicity_skipped: str | None
    periodicity_mismatches: tuple[tuple[complex, complex, str, str], ...]
    shift_pixels: int | None

    def format_lines(self) -> list[str]:
        lines = []
        if self.conjugation_skipped:
            lines.append(f"conjugation check skipped: {self.conjugation_skipped}")
        else:
            lines.append(
                f"conjugation agreement {self.conjugation_fraction:.6f}"
                f" ({len(self.conjugation_mismatches)} mismatches listed)"
            )
        if self.periodicity_skipped:
            lines.append(f"periodicity check skipped: {self.periodicity_skipped}")
        else:
            lines.append(
                f"periodicity agreement {self.periodicity_fraction:.6f}"
                f" over a {self.shift_pixels}-pixel shift"
                f" ({len(self.periodicity_mismatches)} mismatches listed)"
            )
        return lines


MISMATCH_CAP = 100


def symmetry_check(img: SliceImage) -> SymmetryReport:
    """Compare verdicts under twist conjugation and one-period translation."""
    grid = img.grid
    height, width = grid.shape
    job = img.job
    re_min, re_max, im_min, im_max = job.window
    dre, _ = job.pixel_size()

    conj_fraction = None
    conj_skipped = None
    conj_mismatches: list[tuple[complex, complex, str, str]] = []
    if abs(im_min + im_max) > _IM_SLACK * max(1.0, abs(im_min)):
        conj_skipped = "imaginary window is not symmetric about 0"
    elif height > 0 and width > 0:
        flipped = grid[::-1, :]
        agree = int(np.sum(grid == flipped))
        conj_fraction = agree / grid.size
        if agree < grid.size:
            for i, j in zip(*np.nonzero(grid != flipped)):
                if len(conj_mismatches) >= MISMATCH_CAP:
                    break
                tau = job.pixel_center(int(i), int(j))
                mirror = job.pixel_center(height - 1 - int(i), int(j))
                conj_mismatches.append(
                    (
                        tau,
                        mirror,
                        OUTCOME_NAMES[int(grid[i, j])],
                        OUTCOME_NAMES[int(flipped[i, j])],
                    )
                )

    period_fraction = None
    period_skipped = None
    period_mismatches: list[tuple[complex, complex, str, str]] = []
    shift_px: int | None = None
    shift_exact = 2.0 * job.c / dre
    shift = int(round(shift_exact))
    if re_max - re_min < 2.0 * job.c or shift >= width:
        period_skipped = "window narrower than one twist period"
    elif abs(shift_exact - shift) > 1e-6 or shift < 1:
        period_skipped = "one twist period is not a whole number of pixels"
    else:
        shift_px = shift
        left = grid[:, : width - shift]
        right = grid[:, shift:]
        agree = int(np.sum(left == right))
        period_fraction = agree / left.size
        if agree < left.size:
            for i, j in zip(*np.nonzero(left != right)):
                if len(period_mismatches) >= MISMATCH_CAP:
                    break
                tau = job.pixel_center(int(i), int(j))
                shifted = job.pixel_center(int(i), int(j) + shift)
                period_mismatches.append(
                    (
                        tau,
                        shifted,
                        OUTCOME_NAMES[int(left[i, j])],
                        OUTCOME_NAMES[int(right[i, j])],
                    )
                )

    return SymmetryReport(
        conjugation_fraction=conj_fraction,
        conjugation_skipped=conj_skipped,
        conjugation_mismatches=tuple(conj_mismatches),
        periodicity_fraction=period_fraction,
        periodicity_skipped=period_skipped,
        periodicity_mismatches=tuple(period_mismatches),
        shift_pixels=shift_px,
    )


@dataclass(frozen=True, eq=False)
class OverlayResult:
    cs: tuple[float, ...]
    level_grid: np.ndarray
    images: tuple[SliceImage, ...]
    containment: dict[tuple[float, float], float] = field(default_factory=dict)


def overlay(jobs: list[RasterJob]) -> OverlayResult:
    """Render several half-lengths over one window and stack the QF regions.

    The level grid holds, per pixel, the index (into the sorted lengths) of
    the largest half-length whose verdict is QF, or -1 for none.  Also
    reports, per pair c_small < c_large, the fraction of c_large-QF pixels
    that are QF at c_small.
    """
    if not jobs:
        raise ValueError("need at least one job")
    base = jobs[0]
    for job in jobs[1:]:
        if job.window != base.window or (job.width, job.height) != (base.width, base.height):
            raise ValueError("overlay jobs must share the window and pixel dimensions")
    if len({job.c for job in jobs}) != len(jobs):
        raise ValueError("overlay jobs must have distinct half-lengths")

    ordered = sorted(jobs, key=lambda job: job.c)
    images = tuple(render(job) for job in ordered)
    cs = tuple(img.job.c for img in images)
    level = np.full((base.height, base.width), -1, dtype=np.int16)
    for idx, img in enumerate(images):
        level[img.grid == QF_CODE] = idx
    level.setflags(write=False)

    containment: dict[tuple[float, float], float] = {}
    for small_idx in range(len(images)):
        for large_idx in range(small_idx + 1, len(images)):
            large_qf = images[large_idx].grid == QF_CODE
            total = int(np.sum(large_qf))
            if total == 0:
                containment[(cs[small_idx], cs[large_idx])] = float("nan")
                continue
            both = int(np.sum(large_qf & (images[small_idx].grid == QF_CODE)))
            containment[(cs[small_idx], cs[large_idx])] = both / total
    return OverlayResult(cs=cs, level_grid=level, images=images, containment=containment)


def _ppm_comments(img: SliceImage) -> list[str]:
    job = img.job
    re_min, re_max, im_min, im_max = job.window
    return [
        f"# c {job.c!r}",
        f"# window {re_min!r} {re_max!r} {im_min!r} {im_max!r}",
        f"# budget {job.budget}",
        f"# threads {job.threads}",
        "# counts "
        + " ".join(f"{name}={img.counts.get(name, 0)}" for name in OUTCOME_NAMES.values()),
    ]


def write_ppm(img: SliceImage, path: str | Path) -> None:
    """Binary PPM, top row = highest imaginary part, palette per job."""
    job = img.job
    palette = np.asarray(job.palette, dtype=np.uint8)
    rgb = palette[img.grid[::-1, :]]
    header = "\n".join(["P6", *_ppm_comments(img), f"{job.width} {job.height}", "255", ""])
    with open(path, "wb") as handle:
        handle.write(header.encode("ascii"))
        handle.write(rgb.tobytes())


def write_overlay_ppm(result: OverlayResult, path: str | Path) -> None:
    """Overlay picture: black = no QF level, lighter shades = larger c."""
    n = len(result.cs)
    colors = np.zeros((n + 1, 3), dtype=np.uint8)
    for k in range(n):
        shade = 120 + int(135 * k / max(1, n - 1))
        colors[k + 1] = (shade // 2, shade // 2, shade)
    base = result.images[0]
    rgb = colors[(result.level_grid + 1)[::-1, :]]
    lines = ["P6", f"# overlay cs {' '.join(repr(c) for c in result.cs)}"]
    re_min, re_max, im_min, im_max = base.job.window
    lines += [
        f"# window {re_min!r} {re_max!r} {im_min!r} {im_max!r}",
        f"{base.job.width} {base.job.height}",
        "255",
        "",
    ]
    with open(path, "wb") as handle:
        handle.write("\n".join(lines).encode("ascii"))
        handle.write(rgb.tobytes())


def _read_ppm_tokens(raw: bytes) -> tuple[list[bytes], list[str], int]:
    """Header tokens, comment lines, and the offset where pixel data starts."""
    tokens: list[bytes] = []
    comments: list[str] = []
    pos = 0
    while len(tokens) < 4:
        if pos >= len(raw):
            raise ValueError("truncated PPM header")
        ch = raw[pos : pos + 1]
        if ch == b"#":
            end = raw.find(b"\n", pos)
            if end < 0:
                raise ValueError("unterminated PPM comment")
            comments.append(raw[pos:end].decode("ascii", "replace"))
            pos = end + 1
        elif ch.isspace():
            pos += 1
        else:
            end = pos
            while end < len(raw) and not raw[end : end + 1].isspace():
                end += 1
            tokens.append(raw[pos:end])
            pos = end
    return tokens, comments, pos + 1


def read_ppm(path: str | Path) -> SliceImage:
    """Rebuild a SliceImage from a PPM written by write_ppm."""
    raw = Path(path).read_bytes()
    tokens, comments, offset = _read_ppm_tokens(raw)
    if tokens[0] != b"P6":
        raise ValueError(f"not a binary PPM file: magic {tokens[0]!r}")
    width, height, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    if maxval != 255:
        raise ValueError(f"unsupported PPM maxval {maxval}")
    meta: dict[str, list[str]] = {}
    for line in comments:
        parts = line[1:].split()
        if parts:
            meta[parts[0]] = parts[1:]
    if "c" not in meta or "window" not in meta:
        raise ValueError("missing slice metadata comments in PPM header")
    c = float(meta["c"][0])
    window = tuple(float(v) for v in meta["window"][:4])
    budget = int(meta["budget"][0]) if "budget" in meta else 1
    threads = int(meta["threads"][0]) if "threads" in meta else 1

    expected = width * height * 3
    data = raw[offset : offset + expected]
    if len(data) != expected:
        raise ValueError(f"PPM pixel payload is {len(data)} bytes, expected {expected}")
    rgb = np.frombuffer(data, dtype=np.uint8).reshape(height, width, 3)
    job = RasterJob(
        c=c,
        window=(window[0], window[1], window[2], window[3]),
        width=width,
        height=height,
        budget=budget,
        threads=threads,
    )
    palette = np.asarray(job.palette, dtype=np.uint8)
    grid = np.full((height, width), 255, dtype=np.uint8)
    for code in OUTCOME_NAMES:
        mask = np.all(rgb == palette[code], axis=2)
        grid[mask] = code
    if np.any(grid == 255):
        raise ValueError("PPM contains colors outside the verdict palette")
    grid = grid[::-1, :].copy()
    grid.setflags(write=False)
    return SliceImage(job=job, grid=grid, wall_time=0.0, counts=_count_verdicts(grid))
