//! The three numerical experiments (interior cavity with a flexible wall,
//! partitioned rigid duct, exterior scattering by an obstacle with a flexible
//! wall), their analytic references and post-processing helpers.

mod cavity;
mod duct;
mod metrics;
mod model;
mod scatter;

pub use cavity::{build_cavity, end_rotation, transfer_function_sweep, CavityParams, SweepPoint};
pub use duct::{build_duct, duct_analytic, duct_long_side_elements, duct_pressure_error, DuctParams, DUCT_LENGTH};
pub use metrics::wriggle_metric;
pub use model::{BenchmarkModel, FluidPart, InterfaceModel, InterfaceSample, Region, SideKind, SideModel, Solution, SolverChoice};
pub use scatter::{build_scatter, ScatterParams};

use crate::coupling::{FrameStrategy, MortarTrace};
use crate::coupling::CouplingMethod;

/// Coupling choice shared by the beam-fluid benchmarks.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingChoice {
    pub method: CouplingMethod,
    pub frame: FrameStrategy,
    pub trace: MortarTrace,
}

impl Default for CouplingChoice {
    fn default() -> Self {
        Self {
            method: CouplingMethod::Llm,
            frame: FrameStrategy::Coarse,
            trace: MortarTrace::Hermite,
        }
    }
}
