use num_complex::Complex64;

use crate::error::{FsiError, Result};
use crate::linalg::norm2;

/// `||second difference|| / ||values||`; zero for linear data and largest for
/// alternating sequences.
pub fn wriggle_metric(values: &[Complex64]) -> Result<f64> {
    if values.len() < 3 {
        return Err(FsiError::InvalidArgument("wriggle metric needs at least three samples".into()));
    }
    let d2: Vec<Complex64> = values.windows(3).map(|w| w[0] - 2.0 * w[1] + w[2]).collect();
    let n = norm2(values);
    Ok(if n > 0.0 { norm2(&d2) / n } else { 0.0 })
}
