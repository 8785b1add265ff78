use num_complex::Complex64;

use super::llm::LlmCoupling;
use super::mortar::MortarCoupling;
use crate::bem::CondensedFluid;
use crate::error::{FsiError, Result};
use crate::fem::BeamModel;
use crate::linalg::{ComplexMatrix, ComplexVector, SparseMatrix};

/// Subdomain DOF carrying the normal displacement at each node of one
/// interface side (`None` where the displacement is prescribed), and the sign
/// of that DOF relative to the interface reference direction.
#[derive(Clone, Debug, PartialEq)]
pub struct InterfaceDofs {
    pub dofs: Vec<Option<usize>>,
    pub sign: f64,
    pub ndofs: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubdomainKind {
    Structure,
    Fluid,
}

/// One subdomain of the decomposition: `stiffness u + coupling lambda = load`.
#[derive(Clone, Debug)]
pub struct Subdomain {
    pub name: String,
    pub kind: SubdomainKind,
    pub stiffness: ComplexMatrix,
    pub load: ComplexVector,
    /// Operator used by the preconditioner on interface DOFs; `None` means
    /// restrict `stiffness` itself.
    pub boundary: Option<ComplexMatrix>,
    /// Subdomain DOFs x global multipliers; filled when the system is assembled.
    pub coupling: SparseMatrix,
}

impl Subdomain {
    pub fn new(name: impl Into<String>, kind: SubdomainKind, stiffness: ComplexMatrix, load: ComplexVector) -> Result<Self> {
        if !stiffness.is_square() || stiffness.rows() != load.len() {
            return Err(FsiError::DimensionMismatch {
                expected: stiffness.rows(),
                got: load.len(),
            });
        }
        let n = load.len();
        Ok(Self {
            name: name.into(),
            kind,
            stiffness,
            load,
            boundary: None,
            coupling: SparseMatrix::new(n, 0),
        })
    }

    /// Beam over its free DOFs.
    pub fn structure(name: impl Into<String>, beam: &BeamModel) -> Result<Self> {
        Self::new(name, SubdomainKind::Structure, beam.kbar.clone(), beam.free_load())
    }

    /// Fluid condensed to its coupled normal displacements.
    pub fn fluid(name: impl Into<String>, fluid: &CondensedFluid) -> Result<Self> {
        let mut s = Self::new(name, SubdomainKind::Fluid, fluid.stiffness.clone(), fluid.load.clone())?;
        s.boundary = fluid.interface_block.clone();
        Ok(s)
    }

    pub fn dofs(&self) -> usize {
        self.load.len()
    }

    /// Preconditioner operator restricted to `dofs`; `None` if unavailable.
    pub fn boundary_operator(&self, dofs: &[usize]) -> Option<ComplexMatrix> {
        match (&self.boundary, self.kind) {
            (Some(b), _) => Some(b.select(dofs, dofs)),
            (None, SubdomainKind::Structure) => Some(self.stiffness.select(dofs, dofs)),
            (None, SubdomainKind::Fluid) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CouplingMethod {
    Mortar,
    Llm,
}

impl std::fmt::Display for CouplingMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CouplingMethod::Mortar => "mortar",
            CouplingMethod::Llm => "llm",
        })
    }
}

/// One localized-multiplier interface between subdomains `a` and `b`.
#[derive(Clone, Debug)]
pub struct LlmInterface {
    pub a: usize,
    pub b: usize,
    pub coupling: LlmCoupling,
}

/// Decomposed saddle-point problem.
///
/// Mortar: `K u + C lambda = f`, `C^T u = 0`.
/// Localized multipliers: `K u + B lambda = f`, `B^T u - L u_I = 0`, `L^T lambda = 0`.
#[derive(Clone, Debug)]
pub struct CoupledSystem {
    pub method: CouplingMethod,
    pub subdomains: Vec<Subdomain>,
    pub n_multipliers: usize,
    /// Multipliers x frame DOFs (localized multipliers only).
    pub frame: Option<SparseMatrix>,
    /// First global multiplier of each interface.
    pub interface_offsets: Vec<usize>,
}

impl CoupledSystem {
    pub fn total_dofs(&self) -> usize {
        self.subdomains.iter().map(Subdomain::dofs).sum()
    }

    pub fn frame_dofs(&self) -> usize {
        self.frame.as_ref().map_or(0, SparseMatrix::cols)
    }

    pub fn monolithic_size(&self) -> usize {
        self.total_dofs() + self.n_multipliers + self.frame_dofs()
    }

    /// Dense block matrix and right-hand side in the unknown order
    /// `[u_1, .., u_p, lambda, u_I]`.
    pub fn monolithic(&self, cap: usize) -> Result<(ComplexMatrix, ComplexVector)> {
        let n = self.monolithic_size();
        if n > cap {
            return Err(FsiError::TooLarge { size: n, cap });
        }
        let mut a = ComplexMatrix::zeros(n, n);
        let mut rhs = vec![Complex64::new(0.0, 0.0); n];
        let lam0 = self.total_dofs();
        let frame0 = lam0 + self.n_multipliers;
        let mut off = 0;
        for s in &self.subdomains {
            let nd = s.dofs();
            for i in 0..nd {
                a.row_mut(off + i)[off..off + nd].copy_from_slice(s.stiffness.row(i));
                rhs[off + i] = s.load[i];
                for &(j, v) in s.coupling.row(i) {
                    a[(off + i, lam0 + j)] += Complex64::new(v, 0.0);
                    a[(lam0 + j, off + i)] += Complex64::new(v, 0.0);
                }
            }
            off += nd;
        }
        if let Some(l) = &self.frame {
            for j in 0..l.rows() {
                for &(c, v) in l.row(j) {
                    a[(lam0 + j, frame0 + c)] -= Complex64::new(v, 0.0);
                    a[(frame0 + c, lam0 + j)] += Complex64::new(v, 0.0);
                }
            }
        }
        Ok((a, rhs))
    }

    /// Splits a monolithic solution vector into `(u per subdomain, lambda, u_I)`.
    pub fn split_monolithic(&self, x: &[Complex64]) -> (Vec<ComplexVector>, ComplexVector, ComplexVector) {
        let mut off = 0;
        let mut u = Vec::with_capacity(self.subdomains.len());
        for s in &self.subdomains {
            u.push(x[off..off + s.dofs()].to_vec());
            off += s.dofs();
        }
        let lambda = x[off..off + self.n_multipliers].to_vec();
        let frame = x[off + self.n_multipliers..].to_vec();
        (u, lambda, frame)
    }

    /// For each subdomain, the `(multiplier, local dof, sign)` triples linking it
    /// to the interface.
    pub fn multiplier_links(&self) -> Vec<Vec<(usize, usize, f64)>> {
        self.subdomains
            .iter()
            .map(|s| {
                let mut links = Vec::new();
                for i in 0..s.dofs() {
                    for &(j, v) in s.coupling.row(i) {
                        links.push((j, i, v));
                    }
                }
                links.sort_by_key(|&(j, i, _)| (j, i));
                links
            })
            .collect()
    }
}

fn check_nonempty(subdomains: &[Subdomain]) -> Result<()> {
    if subdomains.is_empty() {
        return Err(FsiError::InvalidArgument("no subdomains".into()));
    }
    Ok(())
}

/// Mortar system of one structure and one fluid sharing a single interface.
pub fn assemble_mortar_system(mut structure: Subdomain, mut fluid: Subdomain, coupling: &MortarCoupling) -> Result<CoupledSystem> {
    if coupling.c_s.rows() != structure.dofs() {
        return Err(FsiError::DimensionMismatch {
            expected: structure.dofs(),
            got: coupling.c_s.rows(),
        });
    }
    if coupling.c_f.rows() != fluid.dofs() {
        return Err(FsiError::DimensionMismatch {
            expected: fluid.dofs(),
            got: coupling.c_f.rows(),
        });
    }
    structure.coupling = coupling.c_s.clone();
    fluid.coupling = coupling.c_f.clone();
    Ok(CoupledSystem {
        method: CouplingMethod::Mortar,
        subdomains: vec![structure, fluid],
        n_multipliers: coupling.multiplier_count(),
        frame: None,
        interface_offsets: vec![0],
    })
}

/// Localized-multiplier system over any number of interfaces.
pub fn assemble_llm_system(mut subdomains: Vec<Subdomain>, interfaces: &[LlmInterface]) -> Result<CoupledSystem> {
    check_nonempty(&subdomains)?;
    let n_lambda: usize = interfaces
        .iter()
        .map(|i| {
            let (a, b) = i.coupling.multiplier_counts();
            a + b
        })
        .sum();
    let n_frame: usize = interfaces.iter().map(|i| i.coupling.frame_dofs()).sum();
    for s in subdomains.iter_mut() {
        s.coupling = SparseMatrix::new(s.dofs(), n_lambda);
    }
    let mut l = SparseMatrix::new(n_lambda, n_frame);
    let (mut lam, mut fr) = (0, 0);
    let mut offsets = Vec::new();
    for iface in interfaces {
        offsets.push(lam);
        let c = &iface.coupling;
        for (sub, b, lm) in [(iface.a, &c.b_a, &c.l_a), (iface.b, &c.b_b, &c.l_b)] {
            let s = subdomains
                .get_mut(sub)
                .ok_or_else(|| FsiError::InvalidArgument(format!("interface refers to missing subdomain {sub}")))?;
            if b.rows() != s.dofs() {
                return Err(FsiError::DimensionMismatch {
                    expected: s.dofs(),
                    got: b.rows(),
                });
            }
            for i in 0..b.rows() {
                for &(j, v) in b.row(i) {
                    s.coupling.add(i, lam + j, v);
                }
            }
            for j in 0..lm.rows() {
                for &(k, v) in lm.row(j) {
                    l.add(lam + j, fr + k, v);
                }
            }
            lam += b.cols();
        }
        fr += c.frame_dofs();
    }
    Ok(CoupledSystem {
        method: CouplingMethod::Llm,
        subdomains,
        n_multipliers: n_lambda,
        frame: Some(l),
        interface_offsets: offsets,
    })
}
