"""Point clouds: validation, CSV round trips and synthetic simplex samples."""

from dataclasses import dataclass
import csv
import enum
import os
import warnings

import numpy as np

from .errors import DomainError, ParseError, UsageError

DEFAULT_SIMPLEX_TOL = 1e-9
# Coordinates below this are resampled so that generated points stay interior.
INTERIOR_FLOOR = 1e-12
# Rows formatted per write call when saving.
SAVE_BLOCK = 4096


class Validation(enum.Enum):
    NONE = "none"
    POSITIVE = "positive"
    SIMPLEX = "simplex"


@dataclass(frozen=True, eq=False)
class PointCloud:
    """An ``n x d`` float64 matrix of points plus how it was validated.

    The array is stored read-only.  Construct through :func:`as_cloud`,
    :func:`load_points` or :func:`sample_simplex` to get validation.
    """

    points: np.ndarray
    validation: Validation = Validation.NONE
    source: str = ""

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64, order="C")
        if pts.ndim != 2:
            raise UsageError(f"point cloud must be 2-d, got shape {pts.shape}")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self):
        return self.points.shape[0]

    @property
    def dim(self):
        return self.points.shape[1]

    def __len__(self):
        return self.points.shape[0]

    def __getitem__(self, key):
        return self.points[key]

    def __array__(self, dtype=None, copy=None):
        return self.points if dtype is None else self.points.astype(dtype)

    def __repr__(self):
        return f"PointCloud(n={self.n}, dim={self.dim}, validation={self.validation.value}, source={self.source!r})"


def _offending_rows(pts, validation, simplex_tol):
    if validation is Validation.POSITIVE:
        bad = np.any(pts <= 0, axis=1)
    elif validation is Validation.SIMPLEX:
        bad = np.any(pts < 0, axis=1) | (np.abs(pts.sum(axis=1) - 1.0) > simplex_tol)
    else:
        bad = np.zeros(len(pts), dtype=bool)
    return np.flatnonzero(bad)


def validate(points, validation=Validation.NONE, simplex_tol=DEFAULT_SIMPLEX_TOL, source=""):
    """Check domain membership and return a :class:`PointCloud`.

    Raises :class:`DomainError` listing up to the first 10 offending rows
    (0-based).  NaN and infinite entries are rejected in every mode.
    """
    validation = Validation(validation)
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.ndim != 2 or pts.shape[0] == 0 or pts.shape[1] == 0:
        raise UsageError(f"need a non-empty n x d array, got shape {pts.shape}")
    nonfinite = np.flatnonzero(~np.all(np.isfinite(pts), axis=1))
    if nonfinite.size:
        raise DomainError(f"non-finite values in rows {nonfinite[:10].tolist()}")
    bad = _offending_rows(pts, validation, simplex_tol)
    if bad.size:
        raise DomainError(
            f"{bad.size} rows fail {validation.value} validation; first rows: {bad[:10].tolist()}")
    return PointCloud(pts, validation, source)


def as_cloud(x, validation=Validation.NONE):
    if isinstance(x, PointCloud):
        return x
    return validate(x, validation)


def _is_number(tok):
    try:
        float(tok)
    except ValueError:
        return False
    return True


def _header_lines(path):
    """Number of leading lines to skip: blanks plus an optional header."""
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh)):
            toks = [t.strip() for t in row]
            if toks and any(toks):
                return lineno + (0 if all(_is_number(t) for t in toks) else 1)
    return None


def _parse_slow(path):
    # Token-by-token parse; only used to produce a precise error message.
    with open(path, newline="") as fh:
        lines = list(csv.reader(fh))
    rows = []
    width = None
    first = True
    for lineno, row in enumerate(lines, start=1):
        toks = [t.strip() for t in row]
        if not toks or all(t == "" for t in toks):
            continue
        if first:
            first = False
            if not all(_is_number(t) for t in toks):
                continue
        if width is None:
            width = len(toks)
        elif len(toks) != width:
            raise ParseError(f"{path}:{lineno}: expected {width} columns, found {len(toks)}")
        try:
            rows.append([float(t) for t in toks])
        except ValueError:
            raise ParseError(f"{path}:{lineno}: non-numeric value in {row!r}") from None
    if not rows:
        raise ParseError(f"{path}: no data rows")
    return np.array(rows)


def load_points(path, format="csv", validation=Validation.NONE, simplex_tol=DEFAULT_SIMPLEX_TOL):
    """Read a CSV of decimal reals, one point per row.

    A single non-numeric first row is treated as a header.  Blank lines are
    skipped.  Ragged rows and unparsable tokens raise :class:`ParseError`
    with the 1-based line number.
    """
    if format != "csv":
        raise UsageError(f"unsupported format {format!r}")
    path = os.fspath(path)
    try:
        skip = _header_lines(path)
        if skip is None:
            raise ParseError(f"{path}: no data rows")
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("error")
                pts = np.loadtxt(path, delimiter=",", skiprows=skip, ndmin=2,
                                 dtype=np.float64, comments=None)
        except (ValueError, UserWarning):
            pts = _parse_slow(path)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    if pts.size == 0:
        raise ParseError(f"{path}: no data rows")
    return validate(pts, validation, simplex_tol, source=path)


def save_points(cloud, path, make_dirs=False):
    """Write CSV with 17 significant digits, so that loading is lossless."""
    pts = np.asarray(cloud, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[None, :]
    path = os.fspath(path)
    parent = os.path.dirname(path)
    if parent and not os.path.isdir(parent):
        if not make_dirs:
            raise UsageError(f"directory {parent} does not exist")
        os.makedirs(parent, exist_ok=True)
    row = ",".join(["%.17g"] * pts.shape[1]) + "\n"
    try:
        with open(path, "w") as fh:
            for a in range(0, pts.shape[0], SAVE_BLOCK):
                blk = pts[a:a + SAVE_BLOCK]
                fh.write((row * blk.shape[0]) % tuple(blk.ravel().tolist()))
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from exc


def sample_simplex(d, n, seed=0):
    """``n`` points uniform on the open simplex in R^d (flat Dirichlet).

    Each point is a vector of unit-rate exponential draws divided by its
    sum.  Draws come from numpy's ``Philox`` counter-based bit generator
    keyed by ``seed``, so a given (d, n, seed) is reproducible everywhere.
    Points with a coordinate below 1e-12 are redrawn.
    """
    if d < 2:
        raise UsageError("simplex dimension must be at least 2")
    if n < 1:
        raise UsageError("count must be positive")
    rng = np.random.Generator(np.random.Philox(seed))
    out = np.empty((n, d))
    filled = 0
    while filled < n:
        e = rng.standard_exponential((n - filled, d))
        x = e / e.sum(axis=1, keepdims=True)
        x = x[np.all(x >= INTERIOR_FLOOR, axis=1)]
        out[filled:filled + len(x)] = x
        filled += len(x)
    return PointCloud(out, Validation.SIMPLEX, f"simplex(d={d}, n={n}, seed={seed})")
