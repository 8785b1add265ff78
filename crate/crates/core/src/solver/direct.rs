use crate::coupling::CoupledSystem;
use crate::error::{FsiError, Result};
use crate::linalg::{ComplexVector, LuFactors};

/// Default size limit for the dense monolithic solve.
pub const DIRECT_SIZE_CAP: usize = 20_000;

#[derive(Clone, Debug, PartialEq)]
pub struct DirectSolution {
    pub u: Vec<ComplexVector>,
    pub lambda: ComplexVector,
    pub u_frame: ComplexVector,
}

/// Dense LU solve of the full saddle-point system; the reference for the
/// iterative interface solver.
pub fn direct_monolithic_solve(system: &CoupledSystem, cap: usize) -> Result<DirectSolution> {
    let (a, rhs) = system.monolithic(cap)?;
    let lu = LuFactors::factorize(a).map_err(|e| {
        FsiError::Singularity(format!("monolithic saddle-point matrix is singular ({e})"))
    })?;
    let x = lu.solve(&rhs);
    let (u, lambda, u_frame) = system.split_monolithic(&x);
    Ok(DirectSolution { u, lambda, u_frame })
}
