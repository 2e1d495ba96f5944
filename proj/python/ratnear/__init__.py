"""Rational points near curved manifolds: exact counts, curvature checks,
Fourier kernels, Legendre and stationary-phase numerics, matrix families and
the experiment harness."""

import json

from . import _ratnear
from ._ratnear import (
    BudgetExceededError,
    CertificateFailure,
    ConvergenceError,
    CurvatureRefusal,
    DimensionError,
    DomainError,
    IllConditionedError,
    ManifoldChart,
    NonPolynomialError,
    OutsideImageError,
    ParseError,
    RatnearError,
    SelbergPair,
    chart_from_suslin,
    dimension_growth_bound,
    fejer_eval,
    interval_indicator,
    invert_gradient,
    legendre_round_trip,
    load_chart,
    oscillatory_integral,
    pencil_certificate,
    radon_hurwitz,
    selberg_pair,
    stationary_phase,
    suslin_family,
    tangent_fields,
)

__version__ = _ratnear.__version__


def chart(maps, n, eps0="1/2", x0=None):
    return ManifoldChart(list(maps), n, str(eps0), None if x0 is None else [str(v) for v in x0])


def chart_from_json(data):
    return _ratnear.chart_from_json(data if isinstance(data, str) else json.dumps(data))


def verify_condition1(chart, t_grid=16, x_radius=None, localize=True):
    return json.loads(_ratnear.verify_condition1(chart, t_grid, x_radius, localize))


def count_near(chart, Q, delta, weight_center=None, weight_radius=0.0, threads=0, epsilon=0.05, scan_cap=None):
    """delta is a literal ("0.1", "1/8") or a rule ("Q^-1/4", "Q^-1/2+eps")."""
    return json.loads(
        _ratnear.count_near(chart, Q, str(delta), weight_center, weight_radius, threads, epsilon, scan_cap)
    )


def count_on(chart, Q, threads=0):
    return json.loads(_ratnear.count_on(chart, Q, threads))


def pencil_determinant(matrices, t):
    return int(_ratnear.pencil_determinant(matrices, list(t)))


def run_experiment(config, base_dir="."):
    """config: a dict, or a path to a config file."""
    if isinstance(config, dict):
        return json.loads(_ratnear.run_experiment(json.dumps(config), str(base_dir)))
    return json.loads(_ratnear.run_experiment_file(str(config)))


def fit_error_envelope(record):
    return json.loads(_ratnear.fit_error_envelope(json.dumps(record)))


def fit_synthetic_envelope(n, R, A, c, Q, delta_exponent):
    return json.loads(_ratnear.fit_synthetic_envelope(n, R, A, c, list(Q), delta_exponent))


def dimension_growth_check(chart, Q):
    return json.loads(_ratnear.dimension_growth_check(chart, list(Q)))
