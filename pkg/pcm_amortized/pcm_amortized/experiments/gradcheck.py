"""Finite-difference gradient suites.

Every suite draws its random configurations from its own named stream, so a
seed-pinned run reproduces the report exactly. Errors are norm-wise relative
errors between the analytic gradient and central differences.
"""

import logging
from dataclasses import replace
from pathlib import Path
from typing import Callable

import numpy as np

from ..approximators import (
    Activation,
    ModelKind,
    NetworkShape,
    dlse_eval,
    dlse_param_grad,
    flatten_parameters,
    fnn_eval,
    fnn_grads,
    init_fnn,
    init_network,
    lse_eval,
    lse_hessian,
    lse_param_grad,
    plse_affine,
    plse_eval,
    unflatten_parameters,
)
from ..config import Experiment, RunConfig
from ..numerics import RngSeed, finite_diff_grad, relative_error, softmax_weights
from ..pcm import EplseModel, eplse_forward, eplse_loss_and_grad, report_schema, write_validated_csv
from ..sensitivity import minimizer_vjp
from ..solvers import Box, SolverOpts, solve_pcm
from .manifest import write_manifest
from .models import ExperimentOutcome, SuiteResult, report_frame

logger = logging.getLogger(__name__)

VJP_SOLVER_TOL = 1e-10
INTERIOR_MARGIN = 1e-3
MIN_CURVATURE = 1e-2
MAX_DRAWS = 50
VJP_BOX = Box.uniform(-3.0, 3.0, 1)
LOSS_BATCH = 8
LOSS_PARAMS_PER_PART = 5


def _random_shape(rng: np.random.Generator, kind: ModelKind) -> NetworkShape:
    u_dim = int(rng.integers(1, 3))
    x_dim = 0 if kind in (ModelKind.LSE, ModelKind.DLSE) else int(rng.integers(1, 3))
    return NetworkShape(
        x_dim=x_dim,
        u_dim=u_dim,
        num_terms=int(rng.integers(2, 6)),
        temperature=float(rng.uniform(0.5, 2.0)),
        hidden=(int(rng.integers(2, 6)),),
        sub_hidden=(int(rng.integers(2, 5)),),
    )


def _network(kind: ModelKind, rng: np.random.Generator, index: int, seed: RngSeed):
    shape = _random_shape(rng, kind)
    return init_network(kind, shape, seed.child(f"{kind.value}/{index}")), shape


def _scalar(value) -> float:
    return float(np.asarray(value, dtype=np.float64).reshape(-1)[0])


# ---------------------------------------------------------------- networks


def _fnn_case(rng, index, seed, h):
    widths = (int(rng.integers(1, 4)), int(rng.integers(2, 6)), int(rng.integers(2, 6)), 1)
    net = init_fnn(widths, seed.child(f"fnn/{index}").stream("init"), Activation.TANH)
    z = rng.normal(size=widths[0])
    jacobian, param_grad = fnn_grads(net, z)
    vector = flatten_parameters(net)
    input_err = relative_error(jacobian[0], finite_diff_grad(lambda v: _scalar(fnn_eval(net, v)), z, h))
    param_fd = finite_diff_grad(lambda p: _scalar(fnn_eval(unflatten_parameters(net, p), z)), vector, h)
    return input_err, relative_error(flatten_parameters(param_grad), param_fd)


def _lse_case(rng, index, seed, h):
    net, _ = _network(ModelKind.LSE, rng, index, seed)
    z = rng.normal(size=net.dim)
    _, grad = lse_eval(net, z)
    param_grad = flatten_parameters(lse_param_grad(net, z[None, :], np.ones(1)))
    vector = flatten_parameters(net)
    input_err = relative_error(grad, finite_diff_grad(lambda v: lse_eval(net, v)[0], z, h))
    param_fd = finite_diff_grad(lambda p: lse_eval(unflatten_parameters(net, p), z)[0], vector, h)
    return input_err, relative_error(param_grad, param_fd)


def _plse_case(kind: ModelKind):
    def case(rng, index, seed, h):
        net, shape = _network(kind, rng, index, seed)
        x = rng.normal(size=shape.x_dim)
        u = rng.normal(size=shape.u_dim)
        _, grad_u, grads_theta = plse_eval(net, x, u)
        vector = flatten_parameters(net)
        input_err = relative_error(grad_u, finite_diff_grad(lambda v: plse_eval(net, x, v)[0], u, h))
        param_fd = finite_diff_grad(lambda p: plse_eval(unflatten_parameters(net, p), x, u)[0], vector, h)
        return input_err, relative_error(flatten_parameters(grads_theta), param_fd)

    return case


def _dlse_case(rng, index, seed, h):
    net, _ = _network(ModelKind.DLSE, rng, index, seed)
    z = rng.normal(size=net.dim)
    _, grad = dlse_eval(net, z)
    param_grad = flatten_parameters(dlse_param_grad(net, z[None, :], np.ones(1)))
    vector = flatten_parameters(net)
    input_err = relative_error(grad, finite_diff_grad(lambda v: dlse_eval(net, v)[0], z, h))
    param_fd = finite_diff_grad(lambda p: dlse_eval(unflatten_parameters(net, p), z)[0], vector, h)
    return input_err, relative_error(param_grad, param_fd)


NETWORK_CASES: dict[str, Callable] = {
    "fnn": _fnn_case,
    "lse": _lse_case,
    "plse": _plse_case(ModelKind.PLSE),
    "plse+": _plse_case(ModelKind.PLSE_PLUS),
    "dlse": _dlse_case,
}


def network_gradient_suites(config: RunConfig) -> list[SuiteResult]:
    """Input and parameter gradients of every network kind against central differences."""
    g = config.gradcheck
    seed = config.seed.child("gradcheck")
    results = []
    for name, case in NETWORK_CASES.items():
        rng = seed.stream(f"{name}/configs")
        errors = [case(rng, index, seed, g.step) for index in range(g.configurations)]
        results.append(SuiteResult.from_errors(f"{name}_input_grad", [e[0] for e in errors], g.tolerance))
        results.append(SuiteResult.from_errors(f"{name}_param_grad", [e[1] for e in errors], g.tolerance))
    return results


# ------------------------------------------------------- implicit gradients


def _vjp_instance_net(index: int, seed: RngSeed):
    shape = NetworkShape(x_dim=1, u_dim=1, num_terms=4, temperature=1.0, sub_hidden=(3,))
    return init_network(ModelKind.PLSE_PLUS, shape, seed.child(f"vjp/{index}"))


def _curvature(net, x: np.ndarray, u: np.ndarray) -> float:
    slopes, offsets, _ = plse_affine(net, x)
    weights = softmax_weights(slopes[0] @ u + offsets[0], net.temperature)
    return float(np.min(np.linalg.eigvalsh(lse_hessian(slopes[0], weights, net.temperature))))


def _solver_vjp_fd(net, x, box, opts, upstream, h) -> np.ndarray:
    def projected(vector: np.ndarray) -> float:
        result = solve_pcm(unflatten_parameters(net, vector), x, box, opts)
        return float(upstream @ result.minimizer)

    return finite_diff_grad(projected, flatten_parameters(net), h)


def implicit_vjp_suites(config: RunConfig) -> list[SuiteResult]:
    """Minimizer VJP against differences through the solver, plus clamped minimizers.

    Interior instances are redrawn until the minimizer sits at least
    ``INTERIOR_MARGIN`` inside the box with curvature ``MIN_CURVATURE``.
    Clamped instances move the box so the minimizer lands on its lower
    bound, where the sensitivity must be exactly zero.
    """
    g = config.gradcheck
    seed = config.seed.child("gradcheck")
    rng = seed.stream("vjp/configs")
    opts = replace(config.solver_opts(), grad_tol=VJP_SOLVER_TOL, use_newton=True)
    interior_errors, clamped_errors = [], []
    draw = 0
    while len(interior_errors) < g.vjp_instances and draw < g.vjp_instances * MAX_DRAWS:
        net = _vjp_instance_net(draw, seed)
        draw += 1
        x = rng.uniform(-1.0, 1.0, size=1)
        solve = solve_pcm(net, x, VJP_BOX, opts)
        u = solve.minimizer
        inside = np.all(u - VJP_BOX.lower > INTERIOR_MARGIN) and np.all(VJP_BOX.upper - u > INTERIOR_MARGIN)
        if not (solve.converged and inside and _curvature(net, x, u) >= MIN_CURVATURE):
            continue
        upstream = np.ones(1)
        analytic = flatten_parameters(minimizer_vjp(net, x, solve, upstream, VJP_BOX))
        reference = _solver_vjp_fd(net, x, VJP_BOX, opts, upstream, g.vjp_step)
        interior_errors.append(relative_error(analytic, reference))

        shifted = Box(u + 0.5, u + 1.5)
        clamped = solve_pcm(net, x, shifted, opts)
        if clamped.converged:
            sensitivity = flatten_parameters(minimizer_vjp(net, x, clamped, upstream, shifted))
            clamped_errors.append(float(np.max(np.abs(sensitivity))))

    if len(interior_errors) < g.vjp_instances:
        logger.warning(f"Only {len(interior_errors)} interior VJP instances found in {draw} draws")
    return [
        SuiteResult.from_errors("implicit_vjp", interior_errors, g.vjp_tolerance),
        SuiteResult.from_errors("implicit_vjp_clamped", clamped_errors, 0.0),
    ]


def _eplse_instance(index: int, seed: RngSeed) -> EplseModel:
    shape = NetworkShape(x_dim=1, u_dim=1, num_terms=4, temperature=1.0, hidden=(6,), sub_hidden=(4,))
    opts = SolverOpts(grad_tol=VJP_SOLVER_TOL)
    return init_network(ModelKind.EPLSE, shape, seed.child(f"loss/{index}"), Box.uniform(-1.0, 1.0, 1), opts)


def eplse_loss_suite(config: RunConfig) -> SuiteResult:
    """EPLSE training-loss gradient on random coordinates of both parameter groups."""
    g = config.gradcheck
    seed = config.seed.child("gradcheck")
    rng = seed.stream("loss/configs")
    errors = []
    for index in range(g.loss_checks):
        model = _eplse_instance(index, seed)
        X = rng.uniform(-1.0, 1.0, size=(LOSS_BATCH, 1))
        U = rng.uniform(-1.0, 1.0, size=(LOSS_BATCH, 1))
        F = rng.normal(size=LOSS_BATCH)
        _, grads = eplse_loss_and_grad(model, X, U, F)
        analytic = flatten_parameters(grads)
        vector = flatten_parameters(model)
        pcm_size = flatten_parameters(model.pcm).size
        chosen = np.concatenate([
            rng.choice(pcm_size, size=LOSS_PARAMS_PER_PART, replace=False),
            pcm_size + rng.choice(vector.size - pcm_size, size=LOSS_PARAMS_PER_PART, replace=False),
        ])

        def restricted_loss(values: np.ndarray) -> float:
            perturbed = vector.copy()
            perturbed[chosen] = values
            predicted = eplse_forward(unflatten_parameters(model, perturbed), X, U).values
            return float(np.mean((predicted - F) ** 2))

        reference = finite_diff_grad(restricted_loss, vector[chosen], g.vjp_step)
        errors.append(relative_error(analytic[chosen], reference))
    return SuiteResult.from_errors("eplse_loss_grad", errors, g.loss_tolerance)


# ---------------------------------------------------------------------- run


def gradcheck_suites(config: RunConfig) -> list[SuiteResult]:
    results = network_gradient_suites(config)
    results.extend(implicit_vjp_suites(config))
    results.append(eplse_loss_suite(config))
    for result in results:
        log = logger.info if result.passed else logger.error
        log(f"{result.suite}: {result.failures}/{result.cases} failures, max error {result.max_error:.3g}")
    return results


def run_gradcheck(config: RunConfig) -> ExperimentOutcome:
    """All gradient suites; writes ``gradcheck-report.csv`` and ``manifest.txt``."""
    out_dir = Path(config.run.output_dir)
    outcome = ExperimentOutcome()
    outcome.artifacts.append(write_manifest(out_dir, config, Experiment.GRADCHECK.value))
    results = gradcheck_suites(config)
    outcome.artifacts.append(
        write_validated_csv(report_frame(results), report_schema, out_dir / "gradcheck-report.csv")
    )
    outcome.failures.extend(result.suite for result in results if not result.passed)
    return outcome
