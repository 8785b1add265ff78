use super::frame::FrameMesh;
use super::system::InterfaceDofs;
use crate::error::{FsiError, Result};
use crate::linalg::SparseMatrix;
use crate::mesh::InterfaceDescriptor;

/// Localized multipliers of one interface: one multiplier per coupled node of
/// each side, tied to the frame by `B^T u = L u_I`.
#[derive(Clone, Debug)]
pub struct LlmCoupling {
    /// Side A DOFs x side A multipliers (signed selection).
    pub b_a: SparseMatrix,
    pub b_b: SparseMatrix,
    /// Side A multipliers x free frame nodes (hat values at the node positions).
    pub l_a: SparseMatrix,
    pub l_b: SparseMatrix,
    pub frame: FrameMesh,
}

impl LlmCoupling {
    pub fn multiplier_counts(&self) -> (usize, usize) {
        (self.b_a.cols(), self.b_b.cols())
    }

    pub fn frame_dofs(&self) -> usize {
        self.l_a.cols()
    }
}

fn side_matrices(coords: &[f64], side: &InterfaceDofs, frame: &FrameMesh, free_col: &[Option<usize>], nf: usize) -> Result<(SparseMatrix, SparseMatrix)> {
    if side.dofs.len() != coords.len() {
        return Err(FsiError::DimensionMismatch {
            expected: coords.len(),
            got: side.dofs.len(),
        });
    }
    let coupled: Vec<(usize, usize)> = side
        .dofs
        .iter()
        .enumerate()
        .filter_map(|(i, d)| d.map(|d| (i, d)))
        .collect();
    let mut b = SparseMatrix::new(side.ndofs, coupled.len());
    let mut l = SparseMatrix::new(coupled.len(), nf);
    for (j, &(node, dof)) in coupled.iter().enumerate() {
        b.add(dof, j, side.sign);
        for (f, v) in frame.shape_values(coords[node])? {
            if let Some(c) = free_col[f] {
                if v != 0.0 {
                    l.add(j, c, v);
                }
            }
        }
    }
    Ok((b, l))
}

pub fn assemble_llm(
    iface: &InterfaceDescriptor,
    side_a: &InterfaceDofs,
    side_b: &InterfaceDofs,
    frame: &FrameMesh,
) -> Result<LlmCoupling> {
    let free = frame.free_nodes();
    let mut free_col = vec![None; frame.node_count()];
    for (c, &f) in free.iter().enumerate() {
        free_col[f] = Some(c);
    }
    let (b_a, l_a) = side_matrices(&iface.side_a.coords, side_a, frame, &free_col, free.len())?;
    let (b_b, l_b) = side_matrices(&iface.side_b.coords, side_b, frame, &free_col, free.len())?;
    Ok(LlmCoupling {
        b_a,
        b_b,
        l_a,
        l_b,
        frame: frame.clone(),
    })
}
