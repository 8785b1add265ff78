use num_complex::Complex64;

use super::special::bessel_unchecked;
use crate::error::{FsiError, Result};
use crate::mesh::{Point2D, UnitNormal};

const I_QUARTER: Complex64 = Complex64::new(0.0, 0.25);

/// Free-space Helmholtz Green's function `(i/4) H0(k|x - y|)`.
pub fn greens_function(x: Point2D, y: Point2D, k: f64) -> Result<Complex64> {
    check_wavenumber(k)?;
    let r = x.distance(&y);
    if r == 0.0 {
        return Err(FsiError::Singularity(format!("source and field point coincide at {x:?}")));
    }
    Ok(I_QUARTER * bessel_unchecked(k * r).h0())
}

/// `dG/dn_y = -(ik/4) H1(kr) (r_hat . n)` with `r = y - x`.
pub fn greens_normal_derivative(x: Point2D, y: Point2D, n: UnitNormal, k: f64) -> Result<Complex64> {
    check_wavenumber(k)?;
    let r = x.distance(&y);
    if r == 0.0 {
        return Err(FsiError::Singularity(format!("source and field point coincide at {x:?}")));
    }
    let proj = n.dot(((y.x - x.x) / r, (y.y - x.y) / r));
    Ok(-I_QUARTER * k * proj * bessel_unchecked(k * r).h1())
}

/// Both kernels at distance `r > 0` given `(y - x) . n`. Returns `(G, dG/dn_y)`.
#[inline]
pub(crate) fn kernel_pair(r: f64, normal_offset: f64, k: f64) -> (Complex64, Complex64) {
    let b = bessel_unchecked(k * r);
    let g = I_QUARTER * b.h0();
    let dg = -I_QUARTER * (k * normal_offset / r) * b.h1();
    (g, dg)
}

pub(crate) fn check_wavenumber(k: f64) -> Result<()> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(FsiError::InvalidArgument(format!("wave number must be positive, got {k}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn unit_distance_value() {
        let g = greens_function(Point2D::new(0.0, 0.0), Point2D::new(1.0, 0.0), 1.0).unwrap();
        assert_relative_eq!(g.re, -0.022_064_24, epsilon = 1e-7);
        assert_relative_eq!(g.im, 0.191_299_42, epsilon = 1e-7);
    }

    #[test]
    fn reciprocity() {
        let (x, y) = (Point2D::new(0.3, -1.2), Point2D::new(2.5, 0.7));
        assert_eq!(greens_function(x, y, 2.1).unwrap(), greens_function(y, x, 2.1).unwrap());
    }

    #[test]
    fn tangential_normal_gives_zero_derivative() {
        let n = UnitNormal { nx: 0.0, ny: 1.0 };
        let d = greens_normal_derivative(Point2D::new(0.0, 0.0), Point2D::new(2.0, 0.0), n, 1.0).unwrap();
        assert_eq!(d, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn coincident_points_are_rejected() {
        let p = Point2D::new(1.0, 1.0);
        assert!(matches!(greens_function(p, p, 1.0), Err(FsiError::Singularity(_))));
    }
}
