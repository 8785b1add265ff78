//! Interface coupling between subdomains: mortar multipliers on the structure
//! side, or localized multipliers with an independent frame.

mod frame;
mod llm;
mod mortar;
mod projector;
mod system;

pub use frame::{build_frame, FrameMesh, FrameStrategy};
pub use llm::{assemble_llm, LlmCoupling};
pub use mortar::{assemble_mortar, mortar_ansatz, MortarAnsatz, MortarCoupling, MortarTrace};
pub use projector::{make_projector, Projector};
pub use system::{
    assemble_llm_system, assemble_mortar_system, CoupledSystem, CouplingMethod, InterfaceDofs, LlmInterface,
    Subdomain, SubdomainKind,
};
