use num_complex::Complex64;

use crate::error::{FsiError, Result};

/// Variable scaling `u~ = s u`, `lambda~ = lambda / s` with `s = sqrt(rho omega^2 Lambda)`
/// and `Lambda = E nu / ((1 + nu)(1 - 2 nu))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingState {
    pub lambda_modulus: f64,
    pub factor: f64,
}

pub fn lame_modulus(e: f64, nu: f64) -> Result<f64> {
    if !(nu > 0.0 && nu < 0.5) {
        return Err(FsiError::InvalidArgument(format!("Poisson ratio must lie in (0, 0.5), got {nu}")));
    }
    if !(e > 0.0) {
        return Err(FsiError::InvalidArgument(format!("Young modulus must be positive, got {e}")));
    }
    Ok(e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)))
}

impl ScalingState {
    pub fn new(e: f64, nu: f64, rho: f64, omega: f64) -> Result<Self> {
        let lambda_modulus = lame_modulus(e, nu)?;
        if !(rho > 0.0 && omega > 0.0) {
            return Err(FsiError::InvalidArgument("scaling needs rho > 0 and omega > 0".into()));
        }
        Ok(Self {
            lambda_modulus,
            factor: (rho * omega * omega * lambda_modulus).sqrt(),
        })
    }

    pub fn identity() -> Self {
        Self {
            lambda_modulus: 1.0,
            factor: 1.0,
        }
    }

    /// Flexibility multiplies by `s^2`.
    pub fn operator_factor(&self) -> f64 {
        self.factor * self.factor
    }

    pub fn scale_displacement(&self, v: &[Complex64]) -> Vec<Complex64> {
        v.iter().map(|x| x * self.factor).collect()
    }

    pub fn unscale_displacement(&self, v: &[Complex64]) -> Vec<Complex64> {
        v.iter().map(|x| x / self.factor).collect()
    }

    pub fn scale_multipliers(&self, v: &[Complex64]) -> Vec<Complex64> {
        v.iter().map(|x| x / self.factor).collect()
    }

    pub fn unscale_multipliers(&self, v: &[Complex64]) -> Vec<Complex64> {
        v.iter().map(|x| x * self.factor).collect()
    }
}

/// Scaling for a run: `(E, nu)` of the structure, fluid density and frequency.
pub fn scale_system(e: f64, nu: f64, rho: f64, omega: f64) -> Result<ScalingState> {
    ScalingState::new(e, nu, rho, omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn modulus_and_round_trip() {
        assert_relative_eq!(lame_modulus(2.1e11, 0.3).unwrap(), 1.211_538_461_5e11, max_relative = 1e-10);
        assert!(lame_modulus(2.1e11, 0.5).is_err());
        let s = ScalingState::new(2.1e11, 0.3, 1000.0, 31.4).unwrap();
        let v = vec![Complex64::new(1.25, -3.0), Complex64::new(1e-8, 7e5)];
        for (a, b) in s.unscale_multipliers(&s.scale_multipliers(&v)).iter().zip(&v) {
            assert!((a - b).norm() <= 1e-14 * b.norm());
        }
        for (a, b) in s.unscale_displacement(&s.scale_displacement(&v)).iter().zip(&v) {
            assert!((a - b).norm() <= 1e-14 * b.norm());
        }
    }
}
