use crate::bem::GaussLegendre;
use crate::error::{FsiError, Result};
use crate::fem::{hermite_shape, BeamModel};
use crate::linalg::{RealMatrix, SparseMatrix};
use crate::mesh::InterfaceDescriptor;

use super::system::InterfaceDofs;

/// Piecewise-linear multiplier basis on the structure (non-mortar) nodes.
///
/// Each function is stored by its nodal values; at an edge where the
/// displacement is prescribed the end hat is dropped and its neighbour is
/// extended to 1 over the end element, so the basis keeps partition of unity.
#[derive(Clone, Debug, PartialEq)]
pub struct MortarAnsatz {
    coords: Vec<f64>,
    values: Vec<Vec<f64>>,
    centers: Vec<usize>,
}

impl MortarAnsatz {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Non-mortar node at which each multiplier is centred.
    pub fn centers(&self) -> &[usize] {
        &self.centers
    }

    /// Value of function `j` at arc length `s`.
    pub fn eval(&self, j: usize, s: f64) -> f64 {
        let (e, t) = self.locate(s);
        self.values[j][e] * (1.0 - t) + self.values[j][e + 1] * t
    }

    fn locate(&self, s: f64) -> (usize, f64) {
        let n = self.coords.len();
        let e = match self.coords.binary_search_by(|c| c.total_cmp(&s)) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        };
        let t = ((s - self.coords[e]) / (self.coords[e + 1] - self.coords[e])).clamp(0.0, 1.0);
        (e, t)
    }
}

/// Builds the multiplier basis on side A of `iface`.
pub fn mortar_ansatz(iface: &InterfaceDescriptor, dirichlet_start: bool, dirichlet_end: bool) -> Result<MortarAnsatz> {
    let coords = iface.side_a.coords.clone();
    let n = coords.len();
    if n < 2 {
        return Err(FsiError::DegenerateInterface("mortar side needs at least two nodes".into()));
    }
    let first = usize::from(dirichlet_start);
    let last = n - 1 - usize::from(dirichlet_end);
    if first > last {
        return Err(FsiError::DegenerateInterface(
            "no multiplier left after removing constrained end nodes".into(),
        ));
    }
    let mut values = Vec::new();
    let mut centers = Vec::new();
    for c in first..=last {
        let mut v = vec![0.0; n];
        v[c] = 1.0;
        if dirichlet_start && c == first {
            v[0] = 1.0;
        }
        if dirichlet_end && c == last {
            v[n - 1] = 1.0;
        }
        values.push(v);
        centers.push(c);
    }
    Ok(MortarAnsatz { coords, values, centers })
}

/// Interpolation of the structure deflection inside the mortar integrals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MortarTrace {
    /// Cubic Hermite interpolation using deflection and rotation DOFs.
    #[default]
    Hermite,
    /// Linear interpolation of the nodal deflections only.
    Linear,
}

/// Mortar integrals and the resulting coupling matrices.
#[derive(Clone, Debug)]
pub struct MortarCoupling {
    /// Beam DOFs (all, including constrained) x multipliers.
    pub a_s: RealMatrix,
    /// Fluid interface nodes (side B order) x multipliers.
    pub a_f: RealMatrix,
    /// Beam free DOFs x multipliers.
    pub c_s: SparseMatrix,
    /// Fluid subdomain DOFs x multipliers.
    pub c_f: SparseMatrix,
}

impl MortarCoupling {
    pub fn multiplier_count(&self) -> usize {
        self.a_s.cols()
    }
}

/// Integrates structure and fluid traces against the multiplier basis over the
/// common refinement of both interface meshes.
///
/// `beam_sign` and `fluid.sign` relate each side's positive displacement to
/// the interface reference direction; the constraint is `C_S^T u_S + C_F^T u_F = 0`
/// with `C_S = sign_S A_S` and `C_F = -sign_F A_F`.
pub fn assemble_mortar(
    iface: &InterfaceDescriptor,
    beam: &BeamModel,
    beam_sign: f64,
    fluid: &InterfaceDofs,
    ansatz: &MortarAnsatz,
    trace: MortarTrace,
) -> Result<MortarCoupling> {
    let len = iface.length();
    let tol = 1e-10 * len;
    for (label, c) in [("structure", &iface.side_a.coords), ("fluid", &iface.side_b.coords)] {
        if c[0].abs() > tol || (c[c.len() - 1] - len).abs() > tol {
            return Err(FsiError::Mismatch(format!("{label} side does not span the whole interface")));
        }
    }
    if fluid.dofs.len() != iface.side_b.nodes.len() {
        return Err(FsiError::DimensionMismatch {
            expected: iface.side_b.nodes.len(),
            got: fluid.dofs.len(),
        });
    }
    let (tx, ty) = {
        let bl = beam.length();
        ((beam.end.x - beam.start.x) / bl, (beam.end.y - beam.start.y) / bl)
    };
    let beam_coord = |s: f64| {
        let p = iface.point_at(s);
        (p.x - beam.start.x) * tx + (p.y - beam.start.y) * ty
    };

    let mut breaks: Vec<f64> = iface.side_a.coords.iter().chain(&iface.side_b.coords).copied().collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() <= tol);

    let ni = ansatz.len();
    let fc = &iface.side_b.coords;
    let mut a_s = RealMatrix::zeros(beam.dof_count(), ni);
    let mut a_f = RealMatrix::zeros(fc.len(), ni);
    let rule = GaussLegendre::new(4);
    for w in breaks.windows(2) {
        let (s0, s1) = (w[0], w[1]);
        let h = s1 - s0;
        for (u, wt) in rule.iter() {
            let s = s0 + h * u;
            let weight = wt * h;
            let (ea, _) = ansatz.locate(s);
            let active: Vec<(usize, f64)> = (0..ni)
                .filter_map(|j| {
                    let v = &ansatz.values[j];
                    if v[ea] == 0.0 && v[ea + 1] == 0.0 {
                        None
                    } else {
                        Some((j, ansatz.eval(j, s)))
                    }
                })
                .collect();

            let (e, xi) = beam.locate(beam_coord(s));
            let structure: Vec<(usize, f64)> = match trace {
                MortarTrace::Hermite => hermite_shape(xi, beam.element_length(e))
                    .iter()
                    .enumerate()
                    .map(|(k, &v)| (2 * e + k, v))
                    .collect(),
                MortarTrace::Linear => vec![(2 * e, 1.0 - xi), (2 * e + 2, xi)],
            };
            let k = match fc.binary_search_by(|c| c.total_cmp(&s)) {
                Ok(i) => i.min(fc.len() - 2),
                Err(i) => i.saturating_sub(1).min(fc.len() - 2),
            };
            let eta = (s - fc[k]) / (fc[k + 1] - fc[k]);
            let fluid_basis = [(k, 1.0 - eta), (k + 1, eta)];

            for &(j, nj) in &active {
                for &(d, v) in &structure {
                    a_s[(d, j)] += weight * v * nj;
                }
                for &(r, v) in &fluid_basis {
                    a_f[(r, j)] += weight * v * nj;
                }
            }
        }
    }

    let mut c_s = SparseMatrix::new(beam.free_dofs().len(), ni);
    for d in 0..beam.dof_count() {
        if let Some(row) = beam.free_index(d) {
            for j in 0..ni {
                let v = a_s[(d, j)];
                if v != 0.0 {
                    c_s.add(row, j, beam_sign * v);
                }
            }
        }
    }
    let mut c_f = SparseMatrix::new(fluid.ndofs, ni);
    for (r, dof) in fluid.dofs.iter().enumerate() {
        if let Some(row) = *dof {
            for j in 0..ni {
                let v = a_f[(r, j)];
                if v != 0.0 {
                    c_f.add(row, j, -fluid.sign * v);
                }
            }
        }
    }
    Ok(MortarCoupling { a_s, a_f, c_s, c_f })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::{assemble_beam, BeamProperties};
    use crate::mesh::Point2D;
    use approx::assert_relative_eq;

    fn line_iface(na: usize, nb: usize, len: f64) -> InterfaceDescriptor {
        let pts = |n: usize| -> (Vec<usize>, Vec<Point2D>) {
            ((0..=n).collect(), (0..=n).map(|i| Point2D::new(len * i as f64 / n as f64, 0.0)).collect())
        };
        let (ia, pa) = pts(na);
        let (ib, pb) = pts(nb);
        InterfaceDescriptor::new(Point2D::new(0.0, 0.0), Point2D::new(len, 0.0), (&ia, &pa), (&ib, &pb)).unwrap()
    }

    #[test]
    fn modified_ansatz_plateaus_at_constrained_ends() {
        let a = mortar_ansatz(&line_iface(4, 4, 4.0), true, true).unwrap();
        assert_eq!(a.len(), 3);
        assert_eq!(a.eval(0, 0.0), 1.0);
        assert_eq!(a.eval(0, 0.5), 1.0);
        assert_eq!(a.eval(2, 3.7), 1.0);
        for i in 0..=1000 {
            let s = 4.0 * i as f64 / 1000.0;
            let sum: f64 = (0..a.len()).map(|j| a.eval(j, s)).sum();
            assert!((sum - 1.0).abs() < 1e-12);
        }
        assert_eq!(mortar_ansatz(&line_iface(4, 4, 4.0), false, false).unwrap().len(), 5);
        assert!(mortar_ansatz(&line_iface(1, 4, 4.0), true, true).is_err());
    }

    #[test]
    fn matching_linear_blocks_are_mass_matrices() {
        let iface = line_iface(4, 4, 2.0);
        let beam = assemble_beam(
            BeamModel::new(Point2D::new(0.0, 0.0), Point2D::new(2.0, 0.0), 4, BeamProperties::steel_wall(), (0.0, 1.0))
                .unwrap()
                .simply_supported(),
            1.0,
        )
        .unwrap();
        let ansatz = mortar_ansatz(&iface, false, false).unwrap();
        let fluid = InterfaceDofs {
            dofs: (0..5).map(Some).collect(),
            sign: -1.0,
            ndofs: 5,
        };
        let m = assemble_mortar(&iface, &beam, 1.0, &fluid, &ansatz, MortarTrace::Linear).unwrap();
        let l = 0.5;
        assert_relative_eq!(m.a_f[(1, 1)], 2.0 * l / 3.0, epsilon = 1e-14);
        assert_relative_eq!(m.a_f[(1, 2)], l / 6.0, epsilon = 1e-14);
        assert_relative_eq!(m.a_s[(2, 1)], 2.0 * l / 3.0, epsilon = 1e-14);
        assert_eq!(m.a_s[(3, 1)], 0.0);
        // rigid motion leaves no gap
        let hermite = assemble_mortar(&iface, &beam, 1.0, &fluid, &ansatz, MortarTrace::Hermite).unwrap();
        for j in 0..ansatz.len() {
            let s: f64 = (0..5).map(|n| hermite.a_s[(2 * n, j)]).sum();
            let f: f64 = (0..5).map(|n| hermite.a_f[(n, j)]).sum();
            assert_relative_eq!(s, f, epsilon = 1e-14);
        }
    }
}
