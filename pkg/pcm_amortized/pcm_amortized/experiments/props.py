"""Property suites: global minimization through the PCM, the suboptimality
bound, the grid convex-envelope properties, LSE-vs-MA bounds, convexity and the
solver checks they rest on."""

import logging
from pathlib import Path

import numpy as np

from ..approximators import (
    MaNet,
    ModelKind,
    NetworkShape,
    init_network,
    lse_forward,
    ma_eval,
    plse_forward,
)
from ..config import Experiment, RunConfig
from ..gcm import (
    GridFunction,
    is_grid_convex,
    lower_convex_envelope,
    pgcm_continuity_probe,
    pgcm_slice_check,
)
from ..pcm import (
    EplseSurrogate,
    eplse_forward,
    predict_minimizer,
    report_schema,
    suboptimality_bound_check,
    write_validated_csv,
)
from ..solvers import Box, brute_force_grid, grid_axes, solve_dca, solve_pcm
from .case1 import case1_objective
from .manifest import write_manifest
from .models import ExperimentOutcome, SuiteResult, report_frame

logger = logging.getLogger(__name__)

ROUNDING = 1e-12
UNIT_BOX = Box.uniform(-1.0, 1.0, 1)
GCM_FUNCTIONS = 20
CONVEXITY_TRIPLES = 100
SOLVER_GRID_POINTS = 100_001
SOLVER_GRID_TOLERANCE = 1e-8
SOLVER_CHECKS = 50


def _u_column(values: np.ndarray) -> np.ndarray:
    return np.asarray(values, dtype=np.float64).reshape(-1, 1)


# ------------------------------------------------------- PCM minimization


def global_minimizer_suite(config: RunConfig) -> SuiteResult:
    """``f_hat(x, u_hat(x))`` is at most the grid minimum of ``f_hat(x, .)`` for random EPLSE models."""
    p = config.props
    seed = config.seed.child("props/global_minimizer")
    rng = seed.stream("x")
    shape = config.network_shape(1, 1)
    u_grid = _u_column(grid_axes(UNIT_BOX, p.minimizer_grid)[0])
    errors = []
    for index in range(p.minimizer_models):
        model = init_network(ModelKind.EPLSE, shape, seed.child(str(index)), UNIT_BOX, config.solver_opts())
        for x in rng.uniform(-1.0, 1.0, size=(p.minimizer_points, 1)):
            grid_values = eplse_forward(model, np.repeat(x[None, :], u_grid.shape[0], axis=0), u_grid).values
            u_hat = predict_minimizer(model, x).minimizer
            at_u_hat = float(eplse_forward(model, x[None, :], u_hat[None, :]).values[0])
            errors.append(at_u_hat - float(np.min(grid_values)))
    return SuiteResult.from_errors("global_minimizer", errors, p.minimizer_tolerance)


def suboptimality_bound_suite(config: RunConfig) -> SuiteResult:
    """The bound ``f(x, u_hat) <= 2 eps_hat + min f(x, .)`` for an untrained EPLSE on Case 1."""
    p = config.props
    x_box, u_box = config.case1_boxes()
    model = init_network(
        ModelKind.EPLSE, config.network_shape(1, 1), config.seed.child("props/gap_bound"), u_box, config.solver_opts()
    )
    x_grid = np.linspace(x_box.lower[0], x_box.upper[0], p.bound_x_points)
    u_grid = grid_axes(u_box, p.bound_u_points)[0]
    report = suboptimality_bound_check(EplseSurrogate(model), case1_objective, x_grid, u_grid, p.bound_tolerance)
    return SuiteResult.from_errors(
        "suboptimality_bound_untrained", report.suboptimality - 2.0 * report.epsilon_hat, p.bound_tolerance
    )


def solver_vs_grid_suite(config: RunConfig) -> SuiteResult:
    """``solve_pcm`` reaches the dense-grid minimum of random PLSE+ slices."""
    seed = config.seed.child("props/solver")
    rng = seed.stream("x")
    shape = NetworkShape(x_dim=1, u_dim=1, num_terms=6, sub_hidden=(8,))
    opts = config.solver_opts()
    errors = []
    for index in range(SOLVER_CHECKS):
        net = init_network(ModelKind.PLSE_PLUS, shape, seed.child(str(index)))
        x = rng.uniform(-1.0, 1.0, size=1)
        solved = solve_pcm(net, x, UNIT_BOX, opts)

        def slice_values(U: np.ndarray) -> np.ndarray:
            return plse_forward(net, np.repeat(x[None, :], U.shape[0], axis=0), U).values

        grid = brute_force_grid(slice_values, UNIT_BOX, SOLVER_GRID_POINTS)
        errors.append(solved.value - grid.value)
    return SuiteResult.from_errors("solve_pcm_vs_grid", errors, SOLVER_GRID_TOLERANCE)


def dca_monotone_suite(config: RunConfig) -> SuiteResult:
    """DCA objective traces never increase."""
    seed = config.seed.child("props/dca")
    rng = seed.stream("x")
    shape = NetworkShape(x_dim=1, u_dim=2, num_terms=6)
    box = Box.uniform(-1.0, 1.0, 2)
    errors = []
    for index in range(SOLVER_CHECKS):
        net = init_network(ModelKind.DLSE, shape, seed.child(str(index)))
        result = solve_dca(net, box, rng.uniform(-1.0, 1.0, size=1), config.solver_opts())
        trace = np.asarray(result.trace, dtype=np.float64)
        errors.append(float(np.max(np.diff(trace))) if trace.size > 1 else 0.0)
    return SuiteResult.from_errors("dca_monotone", errors, 0.0)


# --------------------------------------------------------- LSE and MA nets


def lse_ma_envelope_suite(config: RunConfig) -> SuiteResult:
    """``0 <= LSE - MA <= T log I`` at random points of random nets sharing affine terms."""
    p = config.props
    seed = config.seed.child("props/envelope")
    rng = seed.stream("points")
    errors = []
    for index in range(p.envelope_nets):
        shape = NetworkShape(
            x_dim=0,
            u_dim=int(rng.integers(1, 4)),
            num_terms=int(rng.integers(2, 30)),
            temperature=float(rng.uniform(0.05, 2.0)),
        )
        lse = init_network(ModelKind.LSE, shape, seed.child(str(index)))
        ma = MaNet(lse.terms)
        Z = rng.uniform(-3.0, 3.0, size=(p.envelope_points, lse.dim))
        lse_values, _, _ = lse_forward(lse, Z)
        gap = lse_values - ma_eval(ma, Z)
        bound = lse.temperature * np.log(len(lse.terms))
        errors.append(float(np.max(np.maximum(-gap, gap - bound))))
    return SuiteResult.from_errors("lse_ma_envelope", errors, ROUNDING)


def convexity_suites(config: RunConfig) -> list[SuiteResult]:
    """Midpoint convexity in u of random LSE, PLSE and PLSE+ networks."""
    p = config.props
    seed = config.seed.child("props/convexity")
    results = []
    for kind in (ModelKind.LSE, ModelKind.PLSE, ModelKind.PLSE_PLUS):
        rng = seed.stream(kind.value)
        errors = []
        for index in range(p.convexity_nets):
            x_dim = 0 if kind is ModelKind.LSE else 2
            shape = NetworkShape(x_dim=x_dim, u_dim=2, num_terms=8, sub_hidden=(6,))
            net = init_network(kind, shape, seed.child(f"{kind.value}/{index}"))
            X = rng.uniform(-2.0, 2.0, size=(CONVEXITY_TRIPLES, x_dim))
            U1 = rng.uniform(-2.0, 2.0, size=(CONVEXITY_TRIPLES, 2))
            U2 = rng.uniform(-2.0, 2.0, size=(CONVEXITY_TRIPLES, 2))

            def value(U: np.ndarray) -> np.ndarray:
                if kind is ModelKind.LSE:
                    return lse_forward(net, U)[0]
                return plse_forward(net, X, U).values

            midpoint = value(0.5 * (U1 + U2))
            errors.append(float(np.max(midpoint - 0.5 * (value(U1) + value(U2)))))
        results.append(SuiteResult.from_errors(f"convexity_{kind.value}", errors, ROUNDING))
    return results


# ---------------------------------------------------------- grid envelopes


def _gcm_functions(config: RunConfig) -> list[GridFunction]:
    """Case-1 slices and random wiggly functions on a common grid."""
    p = config.props
    us = grid_axes(UNIT_BOX, p.gcm_grid)[0]
    rng = config.seed.child("props/gcm").stream("functions")
    functions = [GridFunction(us, case1_objective(np.full(us.size, x), us)) for x in (-1.0, -0.3, 0.0, 0.5, 1.0)]
    for _ in range(GCM_FUNCTIONS):
        freqs = rng.uniform(1.0, 12.0, size=3)
        amps = rng.uniform(0.0, 1.0, size=3)
        phases = rng.uniform(0.0, 2.0 * np.pi, size=3)
        fs = rng.uniform(0.0, 2.0) * us * us + np.sum(
            amps[:, None] * np.sin(freqs[:, None] * np.pi * us[None, :] + phases[:, None]), axis=0
        )
        functions.append(GridFunction(us, fs))
    return functions


def _random_convex_minorant(g: GridFunction, rng: np.random.Generator) -> np.ndarray:
    """Max of random affine functions, each shifted down to touch ``g`` from below."""
    pieces = []
    for slope in rng.uniform(-10.0, 10.0, size=int(rng.integers(1, 6))):
        offset = float(np.min(g.fs - slope * g.us))
        pieces.append(slope * g.us + offset)
    return np.max(np.stack(pieces), axis=0)


def gcm_suites(config: RunConfig) -> list[SuiteResult]:
    """Envelope properties on 1D grids: minorant, idempotence, convexity, greatest-ness, slices."""
    p = config.props
    rng = config.seed.child("props/gcm").stream("minorants")
    minorant, idempotent, convex, greatest = [], [], [], []
    for g in _gcm_functions(config):
        envelope = lower_convex_envelope(g)
        minorant.append(float(np.max(envelope.fs - g.fs)))
        idempotent.append(float(np.max(np.abs(lower_convex_envelope(envelope).fs - envelope.fs))))
        convex.append(0.0 if is_grid_convex(envelope, ROUNDING) else 1.0)
        greatest.append(max(
            float(np.max(_random_convex_minorant(g, rng) - envelope.fs)) for _ in range(p.gcm_minorants)
        ))

    us = grid_axes(UNIT_BOX, p.gcm_grid)[0]
    slice_errors = []
    for x in np.linspace(-1.0, 1.0, 11):
        report = pgcm_slice_check(case1_objective, np.array([x]), us)
        slice_errors.append(abs(report.f_min - report.envelope_min) + (0.0 if report.argmin_included else 1.0))

    pairs = [(np.array([0.3]), np.array([0.3 + d])) for d in (0.5, 0.1, 0.01, 0.001)]
    continuity = pgcm_continuity_probe(case1_objective, pairs, us, ROUNDING)
    return [
        SuiteResult.from_errors("gcm_minorant", minorant, 0.0),
        SuiteResult.from_errors("gcm_idempotent", idempotent, ROUNDING),
        SuiteResult.from_errors("gcm_convex", convex, 0.0),
        SuiteResult.from_errors("gcm_greatest", greatest, ROUNDING),
        SuiteResult.from_errors("gcm_slice_minimum", slice_errors, 0.0),
        SuiteResult.from_errors("gcm_continuity", [0.0 if continuity.non_increasing else 1.0], 0.0),
    ]


# ---------------------------------------------------------------------- run


def props_suites(config: RunConfig) -> list[SuiteResult]:
    results = [
        global_minimizer_suite(config),
        suboptimality_bound_suite(config),
        solver_vs_grid_suite(config),
        dca_monotone_suite(config),
        lse_ma_envelope_suite(config),
    ]
    results.extend(convexity_suites(config))
    results.extend(gcm_suites(config))
    for result in results:
        log = logger.info if result.passed else logger.error
        log(f"{result.suite}: {result.failures}/{result.cases} failures, max error {result.max_error:.3g}")
    return results


def run_props(config: RunConfig) -> ExperimentOutcome:
    """All property suites; writes ``props-report.csv`` and ``manifest.txt``."""
    out_dir = Path(config.run.output_dir)
    outcome = ExperimentOutcome()
    outcome.artifacts.append(write_manifest(out_dir, config, Experiment.PROPS.value))
    results = props_suites(config)
    outcome.artifacts.append(write_validated_csv(report_frame(results), report_schema, out_dir / "props-report.csv"))
    outcome.failures.extend(result.suite for result in results if not result.passed)
    return outcome
