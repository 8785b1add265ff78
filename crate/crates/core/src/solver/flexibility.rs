use num_complex::Complex64;
use rayon::prelude::*;

use super::operator::LinearOperator;
use crate::bem::RESONANCE_CONDITION_LIMIT;
use crate::coupling::CoupledSystem;
use crate::error::{FsiError, Result};
use crate::linalg::{ComplexVector, LuFactors, SparseMatrix};

/// LU factors of one subdomain stiffness with its condition estimate.
#[derive(Clone, Debug)]
pub struct FactorizedSubdomain {
    pub name: String,
    pub lu: LuFactors,
    pub condition: f64,
}

/// Factorizes every subdomain stiffness (in parallel). A singular or badly
/// conditioned block is reported as a resonance at `omega`.
pub fn factorize_subdomains(system: &CoupledSystem, omega: f64) -> Result<Vec<FactorizedSubdomain>> {
    system
        .subdomains
        .par_iter()
        .map(|s| {
            let resonance = |condition| FsiError::Resonance {
                what: format!("subdomain '{}'", s.name),
                omega,
                condition,
            };
            let lu = LuFactors::factorize(s.stiffness.clone()).map_err(|_| resonance(f64::INFINITY))?;
            let condition = lu.condition_estimate();
            if !(condition <= RESONANCE_CONDITION_LIMIT) {
                return Err(resonance(condition));
            }
            Ok(FactorizedSubdomain {
                name: s.name.clone(),
                lu,
                condition,
            })
        })
        .collect()
}

/// `F v = sum_p C_p^T K_p^-1 C_p v`, applied subdomain by subdomain.
#[derive(Clone, Debug)]
pub struct FlexibilityOperator {
    factors: Vec<FactorizedSubdomain>,
    couplings: Vec<SparseMatrix>,
    loads: Vec<ComplexVector>,
    n: usize,
}

impl FlexibilityOperator {
    pub fn new(system: &CoupledSystem, factors: Vec<FactorizedSubdomain>) -> Result<Self> {
        if factors.len() != system.subdomains.len() {
            return Err(FsiError::DimensionMismatch {
                expected: system.subdomains.len(),
                got: factors.len(),
            });
        }
        Ok(Self {
            factors,
            couplings: system.subdomains.iter().map(|s| s.coupling.clone()).collect(),
            loads: system.subdomains.iter().map(|s| s.load.clone()).collect(),
            n: system.n_multipliers,
        })
    }

    pub fn factors(&self) -> &[FactorizedSubdomain] {
        &self.factors
    }

    /// Sums per-subdomain contributions in subdomain order so results do not
    /// depend on scheduling.
    fn reduce(&self, parts: Vec<Vec<Complex64>>) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.n];
        for p in parts {
            for (o, v) in out.iter_mut().zip(p) {
                *o += v;
            }
        }
        out
    }

    /// `b = sum_p C_p^T K_p^-1 f_p`.
    pub fn rhs(&self) -> Vec<Complex64> {
        let parts = (0..self.factors.len())
            .into_par_iter()
            .map(|p| self.couplings[p].tr_mul_vec(&self.factors[p].lu.solve(&self.loads[p])))
            .collect();
        self.reduce(parts)
    }

    /// `u_p = K_p^-1 (f_p - C_p lambda)`.
    pub fn recover(&self, lambda: &[Complex64]) -> Vec<ComplexVector> {
        (0..self.factors.len())
            .into_par_iter()
            .map(|p| {
                let cl = self.couplings[p].mul_vec(lambda);
                let r: Vec<Complex64> = self.loads[p].iter().zip(cl).map(|(f, c)| f - c).collect();
                self.factors[p].lu.solve(&r)
            })
            .collect()
    }

    /// `sum_p C_p^T u_p`: the interface gap of subdomain displacements.
    pub fn trace(&self, u: &[ComplexVector]) -> Vec<Complex64> {
        let parts = self.couplings.iter().zip(u).map(|(c, u)| c.tr_mul_vec(u)).collect();
        self.reduce(parts)
    }
}

impl LinearOperator for FlexibilityOperator {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.n, "multiplier vector has the wrong length");
        let parts = (0..self.factors.len())
            .into_par_iter()
            .map(|p| {
                let c = &self.couplings[p];
                let x = self.factors[p].lu.solve(&c.mul_vec(v));
                c.tr_mul_vec(&x)
            })
            .collect();
        self.reduce(parts)
    }
}

/// `F v` with a size check.
pub fn apply_flexibility(op: &FlexibilityOperator, v: &[Complex64]) -> Result<Vec<Complex64>> {
    if v.len() != op.dim() {
        return Err(FsiError::DimensionMismatch {
            expected: op.dim(),
            got: v.len(),
        });
    }
    Ok(op.apply(v))
}
