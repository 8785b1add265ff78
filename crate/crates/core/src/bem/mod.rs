//! Collocation boundary elements for the 2D Helmholtz equation.

mod assembly;
mod fluid;
mod kernel;
mod quadrature;
pub mod special;

pub use assembly::{
    assemble_flux_lumping, assemble_g0, assemble_h, assemble_influence, assemble_lumping, FluxDofMap,
    QuadratureOrders,
};
pub use fluid::{
    fluid_dynamic_stiffness, incident_flux, incident_wave_neumann, interior_pressure, total_boundary_pressure,
    BoundaryState, CondensedFluid, FluidBoundaryConditions, FluidProperties, FluidSubdomain, PlaneWave,
    RESONANCE_CONDITION_LIMIT,
};
pub use kernel::{greens_function, greens_normal_derivative};
pub use quadrature::GaussLegendre;
pub use special::{bessel_values, hankel0_h1, hankel1_h1, BesselValues};
