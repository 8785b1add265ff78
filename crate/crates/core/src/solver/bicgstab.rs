use log::{debug, warn};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::operator::LinearOperator;
use crate::coupling::Projector;
use crate::error::{FsiError, Result};
use crate::linalg::{axpy, dot, norm2};

const BREAKDOWN: f64 = 1e-30;
const SHADOW_SEED: u64 = 0x5eed_f5e7;

/// Outcome of the Krylov iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct KrylovReport {
    pub lambda: Vec<Complex64>,
    pub iterations: usize,
    /// `||r_i|| / ||r_0||` for `i = 0..=iterations`.
    pub residual_history: Vec<f64>,
    pub converged: bool,
    pub restarts: usize,
}

struct Recurrence {
    shadow: Vec<Complex64>,
    p: Vec<Complex64>,
    x: Vec<Complex64>,
    beta_prev: Complex64,
    gamma_prev: Complex64,
    alpha_prev: Complex64,
    first: bool,
}

impl Recurrence {
    fn new(shadow: Vec<Complex64>) -> Self {
        let n = shadow.len();
        let one = Complex64::new(1.0, 0.0);
        Self {
            shadow,
            p: vec![Complex64::new(0.0, 0.0); n],
            x: vec![Complex64::new(0.0, 0.0); n],
            beta_prev: one,
            gamma_prev: one,
            alpha_prev: one,
            first: true,
        }
    }
}

/// Projected, preconditioned complex Bi-CGSTAB for `P F P lambda = P b`.
///
/// Scalar names follow the projected formulation: `beta` is the shadow inner
/// product, `gamma` the first step length, `alpha` the stabilization step and
/// `omega_i` the search-direction coefficient. Inner products conjugate their
/// left argument. On a breakdown the recurrence is restarted once from the
/// current residual with a random shadow vector.
pub fn projected_bicgstab(
    op: &dyn LinearOperator,
    pc: &dyn LinearOperator,
    projector: Option<&Projector>,
    b: &[Complex64],
    lambda0: &[Complex64],
    eps: f64,
    max_iter: usize,
) -> Result<KrylovReport> {
    let n = op.dim();
    for len in [b.len(), lambda0.len(), pc.dim()] {
        if len != n {
            return Err(FsiError::DimensionMismatch { expected: n, got: len });
        }
    }
    if let Some(p) = projector {
        if p.dim() != n {
            return Err(FsiError::DimensionMismatch { expected: n, got: p.dim() });
        }
    }
    if !(eps > 0.0) {
        return Err(FsiError::InvalidArgument(format!("tolerance must be positive, got {eps}")));
    }
    let project = |v: Vec<Complex64>| match projector {
        Some(p) => p.apply(&v),
        None => v,
    };
    // Projection round-off scales with the unprojected right-hand side, not
    // with the (shrinking) residual.
    let b_norm = norm2(b).max(f64::MIN_POSITIVE);
    let check_orthogonal = |r: &[Complex64]| {
        if let Some(p) = projector {
            let lt = p.frame_matrix().tr_mul_vec(r);
            debug_assert!(
                norm2(&lt) <= 1e-10 * norm2(r).max(b_norm) * p.frame_matrix().rows().max(1) as f64,
                "projected residual is not orthogonal to the frame"
            );
        }
    };

    let mut lambda = lambda0.to_vec();
    let residual = |lambda: &[Complex64]| {
        let f = op.apply(lambda);
        project(b.iter().zip(f).map(|(bi, fi)| bi - fi).collect())
    };
    let mut r = residual(&lambda);
    let r0_norm = norm2(&r);
    let mut history = vec![1.0];
    if r0_norm == 0.0 {
        return Ok(KrylovReport {
            lambda,
            iterations: 0,
            residual_history: history,
            converged: true,
            restarts: 0,
        });
    }
    check_orthogonal(&r);

    let mut rec = Recurrence::new(r.clone());
    let mut restarts = 0;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < max_iter {
        iterations += 1;
        let step = (|| -> std::result::Result<bool, String> {
            let beta = dot(&rec.shadow, &r);
            if beta.norm() < BREAKDOWN * norm2(&rec.shadow) * norm2(&r) {
                return Err(format!("shadow inner product vanished (|beta| = {:e})", beta.norm()));
            }
            if rec.first {
                rec.p.clone_from(&r);
                rec.first = false;
            } else {
                let omega_i = (beta * rec.gamma_prev) / (rec.alpha_prev * rec.beta_prev);
                for ((p, x), ri) in rec.p.iter_mut().zip(&rec.x).zip(&r) {
                    *p = ri + omega_i * (*p - rec.alpha_prev * x);
                }
            }
            let z = project(pc.apply(&rec.p));
            rec.x = project(op.apply(&z));
            let denom = dot(&rec.shadow, &rec.x);
            if denom.norm() < BREAKDOWN * norm2(&rec.shadow) * norm2(&rec.x) || denom.norm() == 0.0 {
                return Err("shadow vector orthogonal to the search image".into());
            }
            let gamma = beta / denom;
            let mut u = r.clone();
            axpy(-gamma, &rec.x, &mut u);
            axpy(gamma, &z, &mut lambda);
            if norm2(&u) / r0_norm <= eps {
                r = u;
                return Ok(true);
            }
            let y = project(pc.apply(&u));
            let w = project(op.apply(&y));
            let ww = dot(&w, &w);
            if ww.norm() < BREAKDOWN * norm2(&u).powi(2) || ww.norm() == 0.0 {
                return Err("stabilization direction vanished".into());
            }
            let alpha = dot(&w, &u) / ww;
            axpy(alpha, &y, &mut lambda);
            axpy(-alpha, &w, &mut u);
            r = u;
            if alpha.norm() == 0.0 {
                return Err("stabilization step is zero".into());
            }
            rec.beta_prev = beta;
            rec.gamma_prev = gamma;
            rec.alpha_prev = alpha;
            Ok(false)
        })();
        match step {
            Ok(done) => {
                let rel = norm2(&r) / r0_norm;
                history.push(rel);
                check_orthogonal(&r);
                debug!("bicgstab iteration {iterations}: {rel:e}");
                if done || rel <= eps {
                    converged = true;
                    break;
                }
            }
            Err(reason) => {
                if restarts > 0 {
                    return Err(FsiError::Breakdown {
                        iteration: iterations,
                        reason,
                    });
                }
                restarts += 1;
                warn!("Bi-CGSTAB breakdown at iteration {iterations} ({reason}); restarting with a random shadow vector");
                r = residual(&lambda);
                let rel = norm2(&r) / r0_norm;
                history.push(rel);
                if rel <= eps {
                    converged = true;
                    break;
                }
                let mut rng = ChaCha8Rng::seed_from_u64(SHADOW_SEED);
                let shadow = project((0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect());
                rec = Recurrence::new(shadow);
            }
        }
    }
    Ok(KrylovReport {
        lambda,
        iterations,
        residual_history: history,
        converged,
        restarts,
    })
}
