"""Exact support map, thresholding, and Jaccard scores."""

import io
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDataError, DomainError
from .imaging import Algorithm, IndicatorMap


@dataclass(frozen=True)
class JaccardCurve:
    thresholds: np.ndarray
    scores: np.ndarray
    algorithm: str

    def __post_init__(self):
        if len(self.thresholds) != len(self.scores):
            raise DomainError("thresholds and scores differ in length")
        if np.any(np.diff(self.thresholds) <= 0):
            raise DomainError("thresholds must be strictly increasing")

    def best(self):
        i = int(np.argmax(self.scores))
        return float(self.thresholds[i]), float(self.scores[i])

    def to_csv(self):
        buf = io.StringIO()
        buf.write("kappa,score,algorithm\n")
        for k, s in zip(self.thresholds, self.scores):
            buf.write(f"{float(k)!r},{float(s)!r},{self.algorithm}\n")
        return buf.getvalue()


def exact_map(scene, grid):
    """|k(z) - k0| normalized by its maximum; cell membership by cell center."""
    bg = scene.background
    pts = grid.points()
    contrast = np.zeros(len(pts))
    for inc in scene.inhomogeneities:
        inside = np.hypot(*(pts - np.asarray(inc.center)).T) <= inc.radius
        contrast[inside] = abs(bg.wavenumber_in(inc.eps) - bg.k0)
    peak = contrast.max() if len(contrast) else 0.0
    if not peak > 0:
        raise DegenerateDataError("scene has no contrast on the grid; exact map undefined")
    return IndicatorMap(
        grid, contrast / peak, Algorithm.EXACT, raw=contrast, metadata={"scene": scene.fingerprint()}
    )


def _check_kappa(kappa):
    if not 0.0 <= kappa <= 1.0:
        raise DomainError(f"threshold must lie in [0, 1], got {kappa}")


def threshold_map(imap, kappa):
    """Zero every value below ``kappa``; values equal to ``kappa`` survive."""
    _check_kappa(kappa)
    vals = np.where(imap.values >= kappa, imap.values, 0.0)
    meta = dict(imap.metadata, kappa=kappa)
    return IndicatorMap(imap.grid, vals, imap.algorithm, raw=imap.raw, metadata=meta)


def _support(values, kappa):
    return (values >= kappa) & (values > 0)


def jaccard(imap, exact, kappa):
    """Jaccard index (percent) between the thresholded map support and the exact support."""
    _check_kappa(kappa)
    if imap.grid != exact.grid:
        raise DomainError("maps live on different grids")
    a = _support(imap.values, kappa)
    b = exact.values > 0
    union = np.count_nonzero(a | b)
    if union == 0:
        return 100.0
    return 100.0 * np.count_nonzero(a & b) / union


def jaccard_curve(imap, exact, steps=101):
    if steps < 2:
        raise DomainError("need at least two threshold steps")
    if imap.grid != exact.grid:
        raise DomainError("maps live on different grids")
    kappas = np.arange(steps) / (steps - 1)
    scores = np.array([jaccard(imap, exact, k) for k in kappas])
    return JaccardCurve(kappas, scores, str(imap.algorithm))
