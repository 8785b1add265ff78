use num_complex::Complex64;

use super::model::{couple_beam_fluid, BenchmarkModel, Region};
use super::CouplingChoice;
use crate::bem::{FluidBoundaryConditions, FluidProperties, FluidSubdomain, PlaneWave, QuadratureOrders};
use crate::error::{FsiError, Result};
use crate::fem::{assemble_beam, BeamModel, BeamProperties};
use crate::mesh::{rectangle_with_counts, Orientation, Point2D};

/// Square obstacle of side 10 m in water, hit by a plane wave. The bottom wall
/// is a simply supported steel beam; the other walls are rigid.
#[derive(Clone, Debug, PartialEq)]
pub struct ScatterParams {
    pub side: f64,
    /// Elements per side of the obstacle (fluid).
    pub lh: usize,
    /// Beam elements; `None` matches the fluid.
    pub lh_struct: Option<usize>,
    pub freq: f64,
    /// Propagation angle of the incident wave from the +x axis.
    pub alpha: f64,
    pub p0: Complex64,
    pub beam: BeamProperties,
    pub fluid: FluidProperties,
    pub coupling: CouplingChoice,
    pub orders: QuadratureOrders,
}

impl Default for ScatterParams {
    fn default() -> Self {
        Self {
            side: 10.0,
            lh: 64,
            lh_struct: None,
            freq: 500.0,
            alpha: std::f64::consts::FRAC_PI_4,
            p0: Complex64::new(1.0, 0.0),
            beam: BeamProperties::steel_wall(),
            fluid: FluidProperties::water(),
            coupling: CouplingChoice::default(),
            orders: QuadratureOrders::default(),
        }
    }
}

impl ScatterParams {
    pub fn new(lh: usize, freq: f64, alpha: f64) -> Self {
        Self {
            lh,
            freq,
            alpha,
            ..Self::default()
        }
    }
}

pub fn build_scatter(p: &ScatterParams) -> Result<BenchmarkModel> {
    if p.lh < 16 {
        return Err(FsiError::InvalidArgument(format!("scatter density must be at least 16, got {}", p.lh)));
    }
    let ns = p.lh_struct.unwrap_or(p.lh);
    if ns < 4 {
        return Err(FsiError::InvalidArgument(format!("beam needs at least 4 elements, got {ns}")));
    }
    if !(p.freq > 0.0) {
        return Err(FsiError::InvalidArgument(format!("frequency must be positive, got {}", p.freq)));
    }
    let omega = 2.0 * std::f64::consts::PI * p.freq;
    let half = 0.5 * p.side;
    let mesh = rectangle_with_counts(Point2D::new(-half, -half), p.side, p.side, [p.lh; 4], Orientation::Exterior)?;
    // Clockwise traversal ends with the bottom wall, from (half, -half) back to
    // node 0 at (-half, -half); list it by increasing x.
    let n = mesh.node_count();
    let mut wall: Vec<usize> = vec![0];
    wall.extend((n - p.lh + 1..n).rev());
    wall.push(n - p.lh);
    debug_assert!(wall.windows(2).all(|w| mesh.node(w[0]).x < mesh.node(w[1]).x));
    let k = p.fluid.wavenumber(omega);
    let wave = PlaneWave::new(p.p0, p.alpha, k)?;
    let bem = FluidSubdomain::new(mesh, p.fluid, omega, p.orders)?;
    let beam = BeamModel::new(Point2D::new(-half, -half), Point2D::new(half, -half), ns, p.beam, (0.0, -1.0))?.simply_supported();
    let beam = assemble_beam(beam, omega)?;
    let bc = FluidBoundaryConditions {
        incident: Some(wave),
        ..FluidBoundaryConditions::default()
    };
    // Outward from the fluid on the bottom wall is +y, against the deflection.
    couple_beam_fluid("scatter", beam, bem, Region::Exterior, &wall, bc, -1.0, &p.coupling)
}
