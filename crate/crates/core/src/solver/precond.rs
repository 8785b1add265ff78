use log::warn;
use num_complex::Complex64;

use super::operator::LinearOperator;
use crate::coupling::{CoupledSystem, CouplingMethod};
use crate::error::{FsiError, Result};
use crate::linalg::ComplexMatrix;

/// Block of the preconditioner acting on one subdomain's multipliers.
#[derive(Clone, Debug)]
pub struct PreconditionerBlock {
    pub subdomain: usize,
    pub multipliers: Vec<usize>,
    pub matrix: ComplexMatrix,
}

/// Weighting of the subdomain blocks on each interface.
///
/// The projector sums the contributions of both sides of an interface, so an
/// unweighted preconditioner is dominated by the stiffer side. `Stiffness`
/// scales each side's block by `kappa_other / (kappa_a + kappa_b)` on both
/// sides of the product, where `kappa` is the mean diagonal magnitude of the
/// block on that interface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BlockWeighting {
    None,
    #[default]
    Stiffness,
}

/// Approximate inverse of the flexibility: each subdomain contributes its
/// interface stiffness (`B^T K_bb B` for beams, the boundary fluid block for BEM).
#[derive(Clone, Debug)]
pub enum Preconditioner {
    Identity(usize),
    BlockDiagonal { n: usize, blocks: Vec<PreconditionerBlock>, factor: f64 },
}

impl Preconditioner {
    /// Lumped-type block preconditioner for localized multipliers; mortar
    /// systems get the identity because their multipliers are shared.
    pub fn build(system: &CoupledSystem) -> Result<Self> {
        Self::build_weighted(system, BlockWeighting::None)
    }

    pub fn build_weighted(system: &CoupledSystem, weighting: BlockWeighting) -> Result<Self> {
        let n = system.n_multipliers;
        if system.method == CouplingMethod::Mortar {
            return Ok(Self::Identity(n));
        }
        let mut owner = vec![None; n];
        let mut blocks = Vec::new();
        for (p, links) in system.multiplier_links().into_iter().enumerate() {
            if links.is_empty() {
                continue;
            }
            let multipliers: Vec<usize> = links.iter().map(|l| l.0).collect();
            let dofs: Vec<usize> = links.iter().map(|l| l.1).collect();
            let signs: Vec<f64> = links.iter().map(|l| l.2).collect();
            for &j in &multipliers {
                if owner[j].replace(p).is_some() {
                    return Err(FsiError::InvalidArgument(format!(
                        "multiplier {j} is linked to more than one DOF"
                    )));
                }
            }
            let m = multipliers.len();
            let matrix = match system.subdomains[p].boundary_operator(&dofs) {
                Some(x) => ComplexMatrix::from_fn(m, m, |a, b| x[(a, b)] * (signs[a] * signs[b])),
                None => {
                    warn!(
                        "no boundary operator for subdomain '{}'; using an identity preconditioner block",
                        system.subdomains[p].name
                    );
                    ComplexMatrix::identity(m)
                }
            };
            blocks.push(PreconditionerBlock {
                subdomain: p,
                multipliers,
                matrix,
            });
        }
        if owner.iter().any(Option::is_none) {
            return Err(FsiError::InvalidArgument("multiplier without a subdomain".into()));
        }
        if weighting == BlockWeighting::Stiffness {
            apply_stiffness_weights(&mut blocks, &system.interface_offsets);
        }
        Ok(Self::BlockDiagonal { n, blocks, factor: 1.0 })
    }

    /// Same preconditioner multiplied by `factor`.
    pub fn scaled(self, factor: f64) -> Self {
        match self {
            Self::Identity(n) => Self::Identity(n),
            Self::BlockDiagonal { n, blocks, factor: f } => Self::BlockDiagonal {
                n,
                blocks,
                factor: f * factor,
            },
        }
    }
}

fn apply_stiffness_weights(blocks: &mut [PreconditionerBlock], offsets: &[usize]) {
    let interface_of = |j: usize| offsets.partition_point(|&o| o <= j).saturating_sub(1);
    let ni = offsets.len().max(1);
    // kappa[block][interface] = (sum |diag|, count)
    let mut kappa = vec![vec![(0.0, 0usize); ni]; blocks.len()];
    for (b, blk) in blocks.iter().enumerate() {
        for (a, &j) in blk.multipliers.iter().enumerate() {
            let k = &mut kappa[b][interface_of(j)];
            k.0 += blk.matrix[(a, a)].norm();
            k.1 += 1;
        }
    }
    let mean = |k: (f64, usize)| if k.1 > 0 { k.0 / k.1 as f64 } else { 0.0 };
    let total: Vec<f64> = (0..ni).map(|i| kappa.iter().map(|k| mean(k[i])).sum()).collect();
    for (b, blk) in blocks.iter_mut().enumerate() {
        let w: Vec<f64> = blk
            .multipliers
            .iter()
            .map(|&j| {
                let i = interface_of(j);
                let own = mean(kappa[b][i]);
                if total[i] > own && total[i] > 0.0 {
                    (total[i] - own) / total[i]
                } else {
                    1.0
                }
            })
            .collect();
        let m = w.len();
        for a in 0..m {
            for c in 0..m {
                blk.matrix[(a, c)] *= w[a] * w[c];
            }
        }
    }
}

impl LinearOperator for Preconditioner {
    fn dim(&self) -> usize {
        match self {
            Self::Identity(n) | Self::BlockDiagonal { n, .. } => *n,
        }
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        match self {
            Self::Identity(_) => v.to_vec(),
            Self::BlockDiagonal { n, blocks, factor } => {
                let mut out = vec![Complex64::new(0.0, 0.0); *n];
                for b in blocks {
                    let seg: Vec<Complex64> = b.multipliers.iter().map(|&j| v[j]).collect();
                    let y = b.matrix.matvec(&seg);
                    for (&j, yj) in b.multipliers.iter().zip(y) {
                        out[j] = yj * *factor;
                    }
                }
                out
            }
        }
    }
}

pub fn apply_preconditioner(pc: &Preconditioner, v: &[Complex64]) -> Result<Vec<Complex64>> {
    if v.len() != pc.dim() {
        return Err(FsiError::DimensionMismatch {
            expected: pc.dim(),
            got: v.len(),
        });
    }
    Ok(pc.apply(v))
}
