//! Interface problem solution: flexibility operator, preconditioning, variable
//! scaling, projected Bi-CGSTAB, recovery and a dense monolithic reference.

mod bicgstab;
mod direct;
mod flexibility;
mod operator;
mod precond;
mod scaling;

use std::time::{Duration, Instant};

use num_complex::Complex64;

pub use bicgstab::{projected_bicgstab, KrylovReport};
pub use direct::{direct_monolithic_solve, DirectSolution, DIRECT_SIZE_CAP};
pub use flexibility::{apply_flexibility, factorize_subdomains, FactorizedSubdomain, FlexibilityOperator};
pub use operator::{to_dense, Identity, LinearOperator, Scaled};
pub use precond::{apply_preconditioner, BlockWeighting, Preconditioner, PreconditionerBlock};
pub use scaling::{lame_modulus, scale_system, ScalingState};

use crate::coupling::{make_projector, CoupledSystem, Projector};
use crate::error::Result;
use crate::linalg::{norm2, ComplexVector};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub precondition: bool,
    pub weighting: BlockWeighting,
    /// `None` disables variable scaling.
    pub scaling: Option<ScalingState>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 1000,
            precondition: true,
            weighting: BlockWeighting::Stiffness,
            scaling: None,
        }
    }
}

/// Subdomain displacements recovered from interface multipliers.
#[derive(Clone, Debug, PartialEq)]
pub struct Recovery {
    pub u: Vec<ComplexVector>,
    /// Frame displacements (localized multipliers only).
    pub u_frame: Option<ComplexVector>,
    /// `||B^T u - L u_I|| / ||u||` (or `||C^T u|| / ||u||` for mortar).
    pub gap_residual: f64,
}

/// `u = K^-1 (f - B lambda)`; frame displacements are the least-squares fit
/// `u_I = (L^T L)^-1 L^T (b - F lambda)` of the multiplier-stationarity rows.
pub fn recover_solution(
    flex: &FlexibilityOperator,
    projector: Option<&Projector>,
    lambda: &[Complex64],
    b: &[Complex64],
) -> Recovery {
    let u = flex.recover(lambda);
    let mut gap = flex.trace(&u);
    let u_frame = projector.map(|p| {
        let f = flex.apply(lambda);
        let d: Vec<Complex64> = b.iter().zip(f).map(|(b, f)| b - f).collect();
        let ui = p.frame_coefficients(&d);
        let lu = p.frame_matrix().mul_vec(&ui);
        for (g, l) in gap.iter_mut().zip(lu) {
            *g -= l;
        }
        ui
    });
    let unorm = u.iter().map(|v| norm2(v).powi(2)).sum::<f64>().sqrt();
    let gap_residual = if unorm > 0.0 { norm2(&gap) / unorm } else { norm2(&gap) };
    Recovery { u, u_frame, gap_residual }
}

/// Full iterative run: the report of the Krylov solve plus recovered fields.
#[derive(Clone, Debug)]
pub struct SolveReport {
    pub iterations: usize,
    pub residual_history: Vec<f64>,
    pub converged: bool,
    pub restarts: usize,
    pub lambda: ComplexVector,
    pub u_per_subdomain: Vec<ComplexVector>,
    pub u_frame: Option<ComplexVector>,
    pub gap_residual: f64,
    pub elapsed: Duration,
}

/// Factorizes subdomains, applies scaling and preconditioning, iterates and
/// recovers the subdomain displacements.
pub fn solve_iterative(system: &CoupledSystem, omega: f64, opts: &SolverOptions) -> Result<SolveReport> {
    let start = Instant::now();
    let factors = factorize_subdomains(system, omega)?;
    let flex = FlexibilityOperator::new(system, factors)?;
    let projector = system.frame.clone().map(make_projector).transpose()?;
    let b = flex.rhs();
    let pc = if opts.precondition {
        Preconditioner::build_weighted(system, opts.weighting)?
    } else {
        Preconditioner::Identity(system.n_multipliers)
    };
    let scaling = opts.scaling.unwrap_or_else(ScalingState::identity);
    let s2 = scaling.operator_factor();
    let op = Scaled { inner: &flex, factor: s2 };
    let pc = pc.scaled(1.0 / s2);
    let b_scaled = scaling.scale_displacement(&b);
    let lambda0 = vec![Complex64::new(0.0, 0.0); system.n_multipliers];
    let rep = projected_bicgstab(&op, &pc, projector.as_ref(), &b_scaled, &lambda0, opts.tol, opts.max_iter)?;
    let lambda = scaling.unscale_multipliers(&rep.lambda);
    let rec = recover_solution(&flex, projector.as_ref(), &lambda, &b);
    Ok(SolveReport {
        iterations: rep.iterations,
        residual_history: rep.residual_history,
        converged: rep.converged,
        restarts: rep.restarts,
        lambda,
        u_per_subdomain: rec.u,
        u_frame: rec.u_frame,
        gap_residual: rec.gap_residual,
        elapsed: start.elapsed(),
    })
}
