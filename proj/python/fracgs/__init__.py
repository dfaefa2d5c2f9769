"""Ground states of a fractional Schrodinger system with one critical component."""

from ._core import (
    FracgsError,
    Grid,
    __version__,
    bubble_slopes,
    compute_lambda_tilde,
    compute_mu0,
    compute_mu0_bar,
    compute_s_s,
    compute_sharp_constants,
    frac_laplacian,
    minimize_on_nehari,
    nehari_project,
    run_cli,
    scaled_energy,
    solve_scalar,
    threshold_report,
)

__all__ = [
    "FracgsError",
    "Grid",
    "__version__",
    "bubble_slopes",
    "compute_lambda_tilde",
    "compute_mu0",
    "compute_mu0_bar",
    "compute_s_s",
    "compute_sharp_constants",
    "frac_laplacian",
    "minimize_on_nehari",
    "nehari_project",
    "run_cli",
    "scaled_energy",
    "solve_scalar",
    "threshold_report",
]
