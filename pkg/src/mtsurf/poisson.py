"""Weighted Poisson solver: produce the partner potential of a data triple.

The second-kind coupling condition lap(height) = Re(holo) lap(null_pot)
(and its third-representation analogue with weight
(-1+|g|^2)/(1+|g|^2)) is a linear constraint: given the weight and one
field, the other solves a Poisson equation.  This module closes that
equation with Dirichlet boundary data on the grid rectangle, discretizes
with the standard 5-point stencil, and solves the resulting symmetric
positive-definite system by conjugate gradients.

The right-hand side uses the discrete Laplacian of the source samples
(never an analytic callback), so the discrete identity
lap_h(M) = w lap_h(N) is exactly satisfiable and the solver can be
driven to roundoff rather than to discretization error.
"""

from __future__ import annotations

import json
import os
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix, identity, kron
from scipy.sparse.linalg import cg

from .fields import Analytic, ComplexField, Grid2D, RealField, load_field_csv
from .tolerances import EPS_IMMERSION, EPS_ZERO
from .weierstrass import WeierstrassSecond, validate_second

__all__ = [
    "DirichletBoundary",
    "SolverOptions",
    "PoissonProblem",
    "solve_weighted_poisson",
    "assemble_second_kind",
    "boundary_from_function",
    "boundary_from_samples",
    "named_weight",
    "named_field",
    "NAMED_WEIGHTS",
    "NAMED_FIELDS",
    "save_problem",
    "load_problem",
]

_EDGE_NAMES = ("u_min", "u_max", "v_min", "v_max")


@dataclass(frozen=True)
class DirichletBoundary:
    """Values of the unknown on the four grid edges.

    u_min / u_max run along the v axis (length n_v), v_min / v_max along
    the u axis (length n_u).  The four corner nodes are covered twice;
    the duplicates must agree.
    """

    u_min: np.ndarray
    u_max: np.ndarray
    v_min: np.ndarray
    v_max: np.ndarray

    def validate(self, grid):
        n_u, n_v = grid.shape
        for name, want in (("u_min", n_v), ("u_max", n_v),
                           ("v_min", n_u), ("v_max", n_u)):
            got = len(getattr(self, name))
            if got != want:
                raise ValueError("boundary edge %s has length %d, grid needs %d"
                                 % (name, got, want))
        scale = 1.0 + max(float(np.max(np.abs(getattr(self, n))))
                          for n in _EDGE_NAMES)
        corners = (
            abs(self.u_min[0] - self.v_min[0]),
            abs(self.u_min[-1] - self.v_max[0]),
            abs(self.u_max[0] - self.v_min[-1]),
            abs(self.u_max[-1] - self.v_max[-1]),
        )
        if max(corners) > 1e-10 * scale:
            raise ValueError("boundary edges disagree at a corner by %.3e"
                             % max(corners))

    def apply(self, grid):
        """Full-grid array: edges set, interior zero (corners from u-edges)."""
        m0 = np.zeros(grid.shape)
        m0[:, 0] = self.v_min
        m0[:, -1] = self.v_max
        m0[0, :] = self.u_min
        m0[-1, :] = self.u_max
        return m0

    def to_dict(self):
        return {name: [float(x) for x in getattr(self, name)]
                for name in _EDGE_NAMES}

    @classmethod
    def from_dict(cls, doc):
        return cls(**{name: np.asarray(doc[name], dtype=float)
                      for name in _EDGE_NAMES})


def boundary_from_function(grid, fn):
    """Dirichlet data by evaluating fn(u, v) along the four edges."""
    au, av = grid.axis_u, grid.axis_v
    return DirichletBoundary(
        u_min=np.asarray(fn(au[0], av), dtype=float),
        u_max=np.asarray(fn(au[-1], av), dtype=float),
        v_min=np.asarray(fn(au, av[0]), dtype=float),
        v_max=np.asarray(fn(au, av[-1]), dtype=float),
    )


def boundary_from_samples(values):
    """Dirichlet data read off the edge ring of a full-grid array or field."""
    arr = values.values if isinstance(values, RealField) else np.asarray(values)
    return DirichletBoundary(u_min=arr[0, :].copy(), u_max=arr[-1, :].copy(),
                             v_min=arr[:, 0].copy(), v_max=arr[:, -1].copy())


@dataclass(frozen=True)
class SolverOptions:
    max_iter: int = 20000
    target: float = 1e-10


@dataclass(frozen=True)
class PoissonProblem:
    """Grid, weight w, source N, Dirichlet data for the unknown M, options.

    The continuous statement is lap(M) = w lap(N) with M prescribed on
    the rectangle edge; discretely, lap_h(M) = w lap_h(N) at interior
    nodes with the 5-point stencil.
    """

    grid: Grid2D
    weight: RealField
    source: RealField
    boundary: DirichletBoundary
    options: SolverOptions = field(default_factory=SolverOptions)

    def __post_init__(self):
        if self.weight.grid != self.grid or self.source.grid != self.grid:
            raise ValueError("weight and source must be sampled on the problem grid")
        self.boundary.validate(self.grid)


def _laplacian_interior(arr, h_u, h_v):
    """5-point discrete Laplacian at interior nodes of a full-grid array."""
    return ((arr[:-2, 1:-1] - 2.0 * arr[1:-1, 1:-1] + arr[2:, 1:-1]) / h_u ** 2
            + (arr[1:-1, :-2] - 2.0 * arr[1:-1, 1:-1] + arr[1:-1, 2:]) / h_v ** 2)


def _negative_laplacian_matrix(grid):
    """-lap_h on interior nodes with zero Dirichlet ring, row-major order."""
    n_u, n_v = grid.shape
    mu, mv = n_u - 2, n_v - 2

    def second_diff(m):
        off = -np.ones(m - 1)
        return csr_matrix(
            np.diag(2.0 * np.ones(m)) + np.diag(off, 1) + np.diag(off, -1))

    a = (kron(second_diff(mu), identity(mv)) / grid.h_u ** 2
         + kron(identity(mu), second_diff(mv)) / grid.h_v ** 2)
    return csr_matrix(a)


class _IterCounter:
    def __init__(self):
        self.n = 0

    def __call__(self, _xk):
        self.n += 1


def solve_weighted_poisson(problem):
    """Solve lap_h(M) = w lap_h(N) with Dirichlet data; (RealField, report).

    Conjugate gradients on the interior unknowns, warm-restarted with a
    tightening 2-norm tolerance until the measured max-norm residual
    meets the target or the iteration budget runs out.  The report
    records convergence, iterations, the achieved max-norm residual, the
    effective target (the requested one, or the roundoff floor of the
    stencil if that is larger, with a warning) and the floor itself.
    Non-convergence is reported, not raised.
    """
    grid = problem.grid
    n_u, n_v = grid.shape
    h_u, h_v = grid.h_u, grid.h_v
    opts = problem.options

    m0 = problem.boundary.apply(grid)
    rhs = problem.weight.values[1:-1, 1:-1] * _laplacian_interior(
        problem.source.values, h_u, h_v)

    # Evaluating the stencil on an O(scale) field already loses about
    # eps * scale / h^2 per direction; targets below that are noise.
    scale = max(1.0, float(np.max(np.abs(m0))))
    floor = 8.0 * np.finfo(float).eps * (1.0 / h_u ** 2 + 1.0 / h_v ** 2) * scale
    target = float(opts.target)
    warned = False
    if target < floor:
        warnings.warn("residual target %.3e is below the stencil roundoff "
                      "floor %.3e; using the floor" % (target, floor))
        warned = True
    effective = max(target, floor)

    A = _negative_laplacian_matrix(grid)
    b = (_laplacian_interior(m0, h_u, h_v) - rhs).ravel()

    def assemble(x):
        m = m0.copy()
        m[1:-1, 1:-1] = x.reshape(n_u - 2, n_v - 2)
        return m

    def max_residual(m):
        return float(np.max(np.abs(_laplacian_interior(m, h_u, h_v) - rhs)))

    counter = _IterCounter()
    x = np.zeros_like(b)
    # A 2-norm below the max-norm target is sufficient but wasteful;
    # start sqrt(n)/4 looser and tighten only if the measurement says so.
    atol = effective * max(1.0, np.sqrt(b.size) / 4.0)
    res = max_residual(assemble(x))
    info = 0
    while res > effective:
        remaining = opts.max_iter - counter.n
        if remaining <= 0:
            break
        x_new, info = cg(A, b, x0=x, rtol=0.0, atol=atol,
                         maxiter=remaining, callback=counter)
        res_new = max_residual(assemble(x_new))
        stalled = res_new >= 0.9 * res and counter.n > 0 and info == 0
        x, res = x_new, res_new
        if stalled:
            break
        atol = atol / 100.0

    m = assemble(x)
    report = {
        "converged": bool(res <= effective),
        "iterations": counter.n,
        "max_iter": opts.max_iter,
        "residual_max": res,
        "target": target,
        "effective_target": effective,
        "roundoff_floor": floor,
        "floor_warning": warned,
        "cg_info": int(info),
        "unknowns": int(b.size),
    }
    return RealField(grid, m), report


def assemble_second_kind(holo, null_pot, boundary_height, options=None,
                         eps_zero=EPS_ZERO, eps_immersion=EPS_IMMERSION):
    """Solve for the height potential with weight Re(holo) and validate.

    ``boundary_height`` may be a DirichletBoundary, a callable fn(u, v),
    a full-grid array or RealField (edge ring is used), or a scalar.
    Returns (WeierstrassSecond, ValidationReport, solve report); the
    validation report localizes any failure of the nonvanishing tangent
    condition min |dz(height) - Re(holo) dz(null_pot)| rather than
    raising, since boundary data outside the closed-form catalog can
    legitimately violate it.
    """
    grid = holo.grid
    if null_pot.grid != grid:
        raise ValueError("holomorphic field and source live on different grids")
    boundary = _as_boundary(grid, boundary_height)
    weight = RealField(grid, np.real(holo.values))
    problem = PoissonProblem(grid, weight, null_pot, boundary,
                             options or SolverOptions())
    height, solve_report = solve_weighted_poisson(problem)
    data = WeierstrassSecond(holo, height, null_pot,
                             provenance={"transform": "poisson-solve",
                                         "solver": solve_report})
    report = validate_second(data, eps_zero=eps_zero, eps_immersion=eps_immersion)
    return data, report, solve_report


def _as_boundary(grid, spec):
    if isinstance(spec, DirichletBoundary):
        return spec
    if callable(spec):
        return boundary_from_function(grid, spec)
    if isinstance(spec, RealField) or (isinstance(spec, np.ndarray)
                                       and spec.shape == grid.shape):
        return boundary_from_samples(spec)
    if np.isscalar(spec):
        n_u, n_v = grid.shape
        c = float(spec)
        return DirichletBoundary(np.full(n_v, c), np.full(n_v, c),
                                 np.full(n_u, c), np.full(n_u, c))
    raise TypeError("cannot interpret %r as Dirichlet boundary data" % (spec,))


# Named analytic fields for problem descriptors and the CLI: weights that
# arise from the catalog's holomorphic fields, plus simple sources and
# boundary generators.  Each entry is (value, du, dv, lap).

def _w_re_exp_iz():
    return (lambda u, v: np.exp(-v) * np.cos(u),
            lambda u, v: -np.exp(-v) * np.sin(u),
            lambda u, v: -np.exp(-v) * np.cos(u),
            lambda u, v: 0.0 * u * v)


def _w_tanh_u():
    return (lambda u, v: np.tanh(u) + 0.0 * v,
            lambda u, v: 1.0 / np.cosh(u) ** 2 + 0.0 * v,
            lambda u, v: 0.0 * u * v,
            lambda u, v: -2.0 * np.tanh(u) / np.cosh(u) ** 2 + 0.0 * v)


def _f_exp_v_cosh_u():
    return (lambda u, v: np.exp(v) * np.cosh(u),
            lambda u, v: np.exp(v) * np.sinh(u),
            lambda u, v: np.exp(v) * np.cosh(u),
            lambda u, v: 2.0 * np.exp(v) * np.cosh(u))


def _f_sinh_u_sin_u():
    return (lambda u, v: np.sinh(u) * np.sin(u) + 0.0 * v,
            lambda u, v: np.cosh(u) * np.sin(u) + np.sinh(u) * np.cos(u) + 0.0 * v,
            lambda u, v: 0.0 * u * v,
            lambda u, v: 2.0 * np.cosh(u) * np.cos(u) + 0.0 * v)


def _f_coord_u():
    return (lambda u, v: u + 0.0 * v, lambda u, v: 1.0 + 0.0 * u * v,
            lambda u, v: 0.0 * u * v, lambda u, v: 0.0 * u * v)


def _f_zero():
    z = lambda u, v: 0.0 * u * v
    return (z, z, z, z)


def _f_one():
    return (lambda u, v: 1.0 + 0.0 * u * v, lambda u, v: 0.0 * u * v,
            lambda u, v: 0.0 * u * v, lambda u, v: 0.0 * u * v)


NAMED_WEIGHTS = {
    "zero": _f_zero,
    "one": _f_one,
    "re-exp-iz": _w_re_exp_iz,
    "tanh-u": _w_tanh_u,
}

NAMED_FIELDS = {
    "zero": _f_zero,
    "one": _f_one,
    "coord-u": _f_coord_u,
    "exp-v-cosh-u": _f_exp_v_cosh_u,
    "sinh-u-sin-u": _f_sinh_u_sin_u,
}


def _field_from_providers(grid, providers):
    value, du, dv, lap = providers
    return RealField.sample(grid, Analytic(value=value, du=du, dv=dv, lap=lap))


def named_weight(name, grid):
    if name not in NAMED_WEIGHTS:
        raise KeyError("unknown weight %r; known: %s"
                       % (name, ", ".join(sorted(NAMED_WEIGHTS))))
    return _field_from_providers(grid, NAMED_WEIGHTS[name]())


def named_field(name, grid):
    if name not in NAMED_FIELDS:
        raise KeyError("unknown field %r; known: %s"
                       % (name, ", ".join(sorted(NAMED_FIELDS))))
    return _field_from_providers(grid, NAMED_FIELDS[name]())


def _field_spec_to_dict(kind, name_or_file):
    return {"kind": kind, kind: name_or_file}


def save_problem(problem, path, weight_name=None, source_name=None):
    """Write a problem descriptor JSON next to any field payload files.

    Fields with a registry name are stored by name; others are written as
    CSV payloads referenced from the descriptor.
    """
    base = os.path.splitext(path)[0]

    def field_entry(fld, name, tag):
        if name is not None:
            return {"kind": "named", "name": name}
        fname = os.path.basename(base) + ".%s.csv" % tag
        from .fields import save_field_csv
        save_field_csv(fld, os.path.join(os.path.dirname(path) or ".", fname))
        return {"kind": "file", "file": fname, "format": "csv"}

    doc = {
        "format": "mtsurf-problem",
        "version": 1,
        "grid": problem.grid.to_dict(),
        "weight": field_entry(problem.weight, weight_name, "weight"),
        "source": field_entry(problem.source, source_name, "source"),
        "boundary": {"kind": "edges", "edges": problem.boundary.to_dict()},
        "options": {"max_iter": problem.options.max_iter,
                    "target": problem.options.target},
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _load_field_entry(entry, grid, registry, base_dir):
    kind = entry.get("kind")
    if kind == "named":
        name = entry["name"]
        if registry is NAMED_WEIGHTS:
            return named_weight(name, grid)
        return named_field(name, grid)
    if kind == "constant":
        return RealField(grid, np.full(grid.shape, float(entry["value"])))
    if kind == "file":
        fld = load_field_csv(os.path.join(base_dir, entry["file"]))
        if fld.grid != grid:
            raise ValueError("field payload %r grid disagrees with problem grid"
                             % entry["file"])
        if isinstance(fld, ComplexField):
            fld = RealField(grid, np.real(fld.values))
        return fld
    raise ValueError("unknown field spec kind %r" % kind)


def load_problem(path):
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("format") != "mtsurf-problem":
        raise ValueError("not a problem descriptor: %r" % path)
    grid = Grid2D.from_dict(doc["grid"])
    base_dir = os.path.dirname(path) or "."
    weight = _load_field_entry(doc["weight"], grid, NAMED_WEIGHTS, base_dir)
    source = _load_field_entry(doc["source"], grid, NAMED_FIELDS, base_dir)
    bspec = doc["boundary"]
    if bspec["kind"] == "edges":
        boundary = DirichletBoundary.from_dict(bspec["edges"])
    elif bspec["kind"] == "constant":
        boundary = _as_boundary(grid, float(bspec["value"]))
    elif bspec["kind"] == "named":
        providers = NAMED_FIELDS[bspec["name"]]()
        boundary = boundary_from_function(grid, providers[0])
    else:
        raise ValueError("unknown boundary spec kind %r" % bspec["kind"])
    opts = doc.get("options", {})
    options = SolverOptions(max_iter=int(opts.get("max_iter", 20000)),
                            target=float(opts.get("target", 1e-10)))
    return PoissonProblem(grid, weight, source, boundary, options)
