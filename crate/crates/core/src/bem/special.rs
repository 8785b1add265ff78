//! Bessel functions of integer order 0 and 1 and the Hankel functions of the
//! first kind built from them.
//!
//! Ascending series are used up to [`SERIES_LIMIT`]; beyond it the Hankel
//! asymptotic expansion is summed until its terms stop decreasing. Both branches
//! hold a relative accuracy of about 1e-11 in `|H|` over `[1e-6, 1e4]`.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::error::{FsiError, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_LIMIT: f64 = 12.0;

/// `J0, Y0, J1, Y1` at one argument.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesselValues {
    pub j0: f64,
    pub y0: f64,
    pub j1: f64,
    pub y1: f64,
}

impl BesselValues {
    pub fn h0(&self) -> Complex64 {
        Complex64::new(self.j0, self.y0)
    }

    pub fn h1(&self) -> Complex64 {
        Complex64::new(self.j1, self.y1)
    }
}

/// Evaluates `J0, Y0, J1, Y1` for `z > 0`.
pub fn bessel_values(z: f64) -> Result<BesselValues> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(FsiError::Domain(format!("Bessel functions of the second kind need z > 0, got {z}")));
    }
    Ok(bessel_unchecked(z))
}

#[inline]
pub(crate) fn bessel_unchecked(z: f64) -> BesselValues {
    debug_assert!(z > 0.0);
    if z <= SERIES_LIMIT {
        ascending_series(z)
    } else {
        asymptotic(z)
    }
}

/// `H0^(1)(z) = J0(z) + i Y0(z)`.
pub fn hankel0_h1(z: f64) -> Result<Complex64> {
    bessel_values(z).map(|b| b.h0())
}

/// `H1^(1)(z) = J1(z) + i Y1(z)`.
pub fn hankel1_h1(z: f64) -> Result<Complex64> {
    bessel_values(z).map(|b| b.h1())
}

fn ascending_series(z: f64) -> BesselValues {
    let t = 0.25 * z * z;
    // a_k = (-t)^k / (k!)^2 and b_k = (-t)^k / (k! (k+1)!)
    let mut a = 1.0;
    let mut b = 1.0;
    let mut j0 = 1.0;
    let mut sj1 = 1.0;
    let mut s_y0 = 0.0; // sum of H_k a_k
    let mut s_y1 = 1.0 - 2.0 * EULER_GAMMA; // (psi(1) + psi(2)) b_0
    let mut harmonic = 0.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        harmonic += 1.0 / k;
        a *= -t / (k * k);
        b *= -t / (k * (k + 1.0));
        j0 += a;
        sj1 += b;
        s_y0 += harmonic * a;
        // psi(k+1) + psi(k+2) = 2 H_k + 1/(k+1) - 2 gamma
        s_y1 += (2.0 * harmonic + 1.0 / (k + 1.0) - 2.0 * EULER_GAMMA) * b;
        if k > t && a.abs() < 1e-18 && b.abs() < 1e-18 {
            break;
        }
    }
    let half = 0.5 * z;
    let log_half = half.ln();
    let j1 = half * sj1;
    let y0 = (2.0 / PI) * ((log_half + EULER_GAMMA) * j0 - s_y0);
    let y1 = (2.0 / PI) * log_half * j1 - 2.0 / (PI * z) - half * s_y1 / PI;
    BesselValues { j0, y0, j1, y1 }
}

fn asymptotic_pq(nu: f64, z: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let (mut p, mut q) = (0.0, 0.0);
    let mut term: f64 = 1.0; // a_m(nu) / z^m
    let mut last = f64::INFINITY;
    let mut m = 0usize;
    loop {
        if term.abs() > last {
            break;
        }
        let sign = if (m / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if m % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        if term.abs() < 1e-17 {
            break;
        }
        last = term.abs();
        m += 1;
        let odd = (2 * m - 1) as f64;
        term *= (mu - odd * odd) / (8.0 * m as f64 * z);
        if term == 0.0 {
            break;
        }
    }
    (p, q)
}

fn asymptotic(z: f64) -> BesselValues {
    let amp = (2.0 / (PI * z)).sqrt();
    let (p0, q0) = asymptotic_pq(0.0, z);
    let (p1, q1) = asymptotic_pq(1.0, z);
    let chi0 = z - FRAC_PI_4;
    let chi1 = z - 3.0 * FRAC_PI_4;
    let (s0, c0) = chi0.sin_cos();
    let (s1, c1) = chi1.sin_cos();
    BesselValues {
        j0: amp * (p0 * c0 - q0 * s0),
        y0: amp * (p0 * s0 + q0 * c0),
        j1: amp * (p1 * c1 - q1 * s1),
        y1: amp * (p1 * s1 + q1 * c1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn unit_argument() {
        let h = hankel0_h1(1.0).unwrap();
        assert_relative_eq!(h.re, 0.765_197_686_6, epsilon = 1e-10);
        assert_relative_eq!(h.im, 0.088_256_964_2, epsilon = 1e-10);
    }

    #[test]
    fn small_argument_log_singularity() {
        let mut prev = hankel0_h1(1e-2).unwrap().im;
        for z in [1e-3, 1e-4, 1e-5, 1e-6] {
            let im = hankel0_h1(z).unwrap().im;
            assert!(im < prev, "Y0 must decrease towards -inf");
            assert!((im - (2.0 / PI) * z.ln()).abs() < 0.2);
            prev = im;
        }
    }

    #[test]
    fn large_argument_magnitude() {
        let h = hankel0_h1(10.0).unwrap();
        let expected = (2.0 / (PI * 10.0)).sqrt();
        assert!((h.norm() - expected).abs() / expected < 0.01);
    }

    #[test]
    fn branches_agree_at_switch() {
        for z in [11.0, 12.0, 13.0] {
            let s = ascending_series(z);
            let a = asymptotic(z);
            let scale = s.h0().norm();
            assert!((s.h0() - a.h0()).norm() / scale < 1e-10, "z = {z}");
            assert!((s.h1() - a.h1()).norm() / s.h1().norm() < 1e-10, "z = {z}");
        }
    }

    #[test]
    fn wronskian() {
        // J1 Y0 - J0 Y1 = 2 / (pi z)
        for z in [1e-5, 0.3, 2.0, 7.0, 11.99, 12.01, 40.0, 3000.0] {
            let b = bessel_values(z).unwrap();
            let w = b.j1 * b.y0 - b.j0 * b.y1;
            assert_relative_eq!(w, 2.0 / (PI * z), max_relative = 1e-10);
        }
    }

    #[test]
    fn nonpositive_argument_is_a_domain_error() {
        assert!(matches!(hankel0_h1(0.0), Err(FsiError::Domain(_))));
        assert!(matches!(hankel1_h1(-1.0), Err(FsiError::Domain(_))));
    }
}
