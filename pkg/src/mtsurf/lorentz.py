"""Minkowski linear algebra on R^{3,1}.

Vectors live along the leading axis: a single vector has shape (4,), a
vector field sampled on an (n_u, n_v) grid has shape (4, n_u, n_v).  The
inner product uses signature (+, +, +, -), the fourth component being the
timelike one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "METRIC_SIGNS",
    "minkowski_inner",
    "complex_bilinear",
    "LorentzRotation",
    "rotation_parabolic",
    "rotation_elliptic",
    "rotation_hyperbolic",
    "rotation",
    "isometry_defect",
]

#: Diagonal of the metric tensor, applied along the leading axis.
METRIC_SIGNS = np.array([1.0, 1.0, 1.0, -1.0])
METRIC_SIGNS.setflags(write=False)


def _check_leading_axis(x):
    if x.ndim == 0 or x.shape[0] != 4:
        raise ValueError("expected the leading axis to have length 4, got shape %r" % (x.shape,))


def minkowski_inner(v, w):
    """<v, w> = v1 w1 + v2 w2 + v3 w3 - v4 w4, broadcasting over trailing axes."""
    v = np.asarray(v)
    w = np.asarray(w)
    _check_leading_axis(v)
    _check_leading_axis(w)
    return v[0] * w[0] + v[1] * w[1] + v[2] * w[2] - v[3] * w[3]


def complex_bilinear(v, w):
    """Bilinear extension of the inner product to C^4; no conjugation on either slot."""
    return minkowski_inner(np.asarray(v, dtype=complex), np.asarray(w, dtype=complex))


@dataclass(frozen=True)
class LorentzRotation:
    """A one-parameter Lorentz isometry.

    The matrix is stored as a plain row-major 4x4 float array acting on
    column vectors; ``family`` is one of ``"parabolic"``, ``"elliptic"``,
    ``"hyperbolic"`` and ``parameter`` is the group parameter the matrix
    was built from.  Instances are immutable.
    """

    matrix: np.ndarray
    family: str
    parameter: float

    def __post_init__(self):
        m = np.ascontiguousarray(np.asarray(self.matrix, dtype=float))
        if m.shape != (4, 4):
            raise ValueError("rotation matrix must be 4x4")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "parameter", float(self.parameter))

    def apply(self, x):
        """Apply to a 4-vector or to a stacked (4, ...) array of vectors."""
        x = np.asarray(x)
        _check_leading_axis(x)
        return np.einsum("ij,j...->i...", self.matrix, x)


def rotation_parabolic(parameter):
    """Null rotation fixing the x1 axis and the null direction (0,0,-1,1)."""
    lam = float(parameter)
    m = np.eye(4)
    if lam != 0.0:
        half_sq = lam * lam / 2.0
        m[1, 2] = -lam
        m[1, 3] = -lam
        m[2, 1] = lam
        m[2, 2] = 1.0 - half_sq
        m[2, 3] = -half_sq
        m[3, 1] = -lam
        m[3, 2] = half_sq
        m[3, 3] = 1.0 + half_sq
    return LorentzRotation(m, "parabolic", lam)


def rotation_elliptic(parameter):
    """Euclidean rotation of the (x1, x2) plane; identity on (x3, x4)."""
    tau = float(parameter)
    m = np.eye(4)
    if tau != 0.0:
        c, s = np.cos(tau), np.sin(tau)
        m[0, 0] = c
        m[0, 1] = -s
        m[1, 0] = s
        m[1, 1] = c
    return LorentzRotation(m, "elliptic", tau)


def rotation_hyperbolic(parameter):
    """Boost of the (x3, x4) plane; identity on (x1, x2)."""
    eta = float(parameter)
    m = np.eye(4)
    if eta != 0.0:
        ch, sh = np.cosh(eta), np.sinh(eta)
        m[2, 2] = ch
        m[2, 3] = sh
        m[3, 2] = sh
        m[3, 3] = ch
    return LorentzRotation(m, "hyperbolic", eta)


_FAMILIES = {
    "parabolic": rotation_parabolic,
    "elliptic": rotation_elliptic,
    "hyperbolic": rotation_hyperbolic,
}


def rotation(family, parameter):
    """Dispatch on the family tag."""
    try:
        build = _FAMILIES[family]
    except KeyError:
        raise ValueError("unknown rotation family %r" % (family,)) from None
    return build(parameter)


def isometry_defect(rot):
    """max |A^T eta A - eta| for a rotation or a raw 4x4 matrix."""
    m = rot.matrix if isinstance(rot, LorentzRotation) else np.asarray(rot, dtype=float)
    eta = np.diag(METRIC_SIGNS)
    return float(np.max(np.abs(m.T @ eta @ m - eta)))
