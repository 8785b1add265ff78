use crate::error::{FsiError, Result};
use crate::mesh::InterfaceDescriptor;

/// Where the independent frame nodes of a localized-multiplier interface go.
#[derive(Clone, Debug, PartialEq)]
pub enum FrameStrategy {
    /// Nodes of the side with fewer nodes.
    Coarse,
    /// Nodes of the side with more nodes.
    Fine,
    /// Explicit arc-length positions; the interface end points are always added.
    Custom(Vec<f64>),
}

/// Piecewise-linear frame along an interface, parametrized by arc length.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameMesh {
    coords: Vec<f64>,
    fixed_start: bool,
    fixed_end: bool,
}

impl FrameMesh {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 || coords.windows(2).any(|w| w[1] <= w[0]) {
            return Err(FsiError::InvalidArgument(
                "frame needs at least two strictly increasing nodes".into(),
            ));
        }
        Ok(Self {
            coords,
            fixed_start: false,
            fixed_end: false,
        })
    }

    /// Marks the end nodes as held at zero displacement; their hats are dropped.
    pub fn with_fixed_ends(mut self, start: bool, end: bool) -> Self {
        self.fixed_start = start;
        self.fixed_end = end;
        self
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn node_count(&self) -> usize {
        self.coords.len()
    }

    pub fn span(&self) -> f64 {
        self.coords[self.coords.len() - 1] - self.coords[0]
    }

    /// Frame nodes carrying an unknown displacement.
    pub fn free_nodes(&self) -> Vec<usize> {
        let n = self.coords.len();
        (0..n)
            .filter(|&i| !(i == 0 && self.fixed_start) && !(i == n - 1 && self.fixed_end))
            .collect()
    }

    /// Nonzero hat values `(node, N(s))` at `s`.
    pub fn shape_values(&self, s: f64) -> Result<Vec<(usize, f64)>> {
        let tol = 1e-10 * self.span();
        let (lo, hi) = (self.coords[0], self.coords[self.coords.len() - 1]);
        if s < lo - tol || s > hi + tol {
            return Err(FsiError::Mismatch(format!(
                "position {s} lies outside the frame span [{lo}, {hi}]"
            )));
        }
        let s = s.clamp(lo, hi);
        let n = self.coords.len();
        let e = match self.coords.binary_search_by(|c| c.total_cmp(&s)) {
            Ok(i) => return Ok(vec![(i, 1.0)]),
            Err(i) => (i - 1).min(n - 2),
        };
        let t = (s - self.coords[e]) / (self.coords[e + 1] - self.coords[e]);
        Ok(vec![(e, 1.0 - t), (e + 1, t)])
    }
}

pub fn build_frame(iface: &InterfaceDescriptor, strategy: &FrameStrategy) -> Result<FrameMesh> {
    let (a, b) = (&iface.side_a.coords, &iface.side_b.coords);
    match strategy {
        FrameStrategy::Coarse => FrameMesh::new(if a.len() <= b.len() { a.clone() } else { b.clone() }),
        FrameStrategy::Fine => FrameMesh::new(if a.len() >= b.len() { a.clone() } else { b.clone() }),
        FrameStrategy::Custom(nodes) => {
            let len = iface.length();
            let tol = 1e-10 * len;
            if nodes.iter().any(|&s| !s.is_finite() || s < -tol || s > len + tol) {
                return Err(FsiError::InvalidArgument(format!(
                    "custom frame nodes must lie in [0, {len}]"
                )));
            }
            let mut coords: Vec<f64> = nodes.iter().map(|s| s.clamp(0.0, len)).collect();
            coords.push(0.0);
            coords.push(len);
            coords.sort_by(f64::total_cmp);
            coords.dedup_by(|x, y| (*x - *y).abs() <= tol);
            FrameMesh::new(coords)
        }
    }
}
