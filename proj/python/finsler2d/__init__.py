"""Two-dimensional Finsler connection, curvature and transport."""

import json as _json

from . import _core
from ._core import Finsler2dError, Manifold

__all__ = [
    "Finsler2dError",
    "Manifold",
    "load",
    "metric",
    "theta",
    "theta_bounds",
    "sector_area",
    "indicatrix",
    "connection",
    "curvature",
    "transport",
    "verify",
    "identity_ids",
]


def load(source):
    """Manifold from a path, JSON text or a dict."""
    if isinstance(source, dict):
        return Manifold.from_json(_json.dumps(source))
    text = str(source)
    if text.lstrip().startswith("{"):
        return Manifold.from_json(text)
    return Manifold.from_file(text)


def _pair(v):
    return (float(v[0]), float(v[1]))


def metric(spec, x, y):
    return _json.loads(_core.metric(spec, _pair(x), _pair(y)))


def theta(spec, x, y):
    return _core.theta(spec, _pair(x), _pair(y))


def theta_bounds(spec, x):
    return _json.loads(_core.theta_bounds(spec, _pair(x)))


def sector_area(spec, x, y1, y2):
    return _core.sector_area(spec, _pair(x), _pair(y1), _pair(y2))


def indicatrix(spec, x, count=72):
    return _json.loads(_core.indicatrix(spec, _pair(x), count))


def connection(spec, x, y, k="frame"):
    return _json.loads(_core.connection(spec, _pair(x), _pair(y), k))


def curvature(spec, x, y, k="frame"):
    return _json.loads(_core.curvature(spec, _pair(x), _pair(y), k))


def transport(spec, curve, vectors, steps=10000, k="frame", report=None):
    """Horizontal transport of vectors along curve ({"x1","x2"} in t or {"polyline"})."""
    vecs = [_pair(v) for v in vectors]
    if report is None:
        report = len(vecs) >= 2
    return _json.loads(_core.transport(spec, _json.dumps(curve), vecs, int(steps), k, bool(report)))


def verify(spec, seed=42, samples=200, k="frame", only=()):
    return _json.loads(_core.verify(spec, int(seed), int(samples), k, list(only)))


def identity_ids():
    return list(_core.identity_ids())
