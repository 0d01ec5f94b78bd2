//! Surface-current scattering: kernel, log-determinants, two-scattering sums,
//! the generating function Ψ(y) and the free-energy integrals built on it.

mod cache;
mod energy;
mod full;
mod kernel;
mod profile;
mod two_scatter;
mod wedge;

pub use cache::{fnv1a, geometry_hash, CacheRead, ProfileCache};
pub use energy::{
    casimir_free_energy, free_energy_of, high_t_form, log_moment, low_t_expansion, plates_source, ClosedFormPsi,
    FreeEnergyResult, HighTForm, LowTExpansion, PsiSource,
};
pub use full::{
    log_det, psi_full, psi_full_truncated, spectral_radius, FullOptions, LocalTreatment, LogDet, SolverPath,
};
pub use kernel::{green_derivative, kernel_block, tangent_frame, tangent_matrix, KernelMatrix};
pub use profile::{compute_profile, default_y_grid, log_grid, Engine, ProfileStats, PsiProfile, SmallYFit};
pub use two_scatter::{
    energy_two_scatter_sphere_plane, psi_two_scatter, psi_two_scatter_sphere_plane, Regularization, TwoScatterOptions,
};
pub use wedge::{
    far_field_scaling, wedge_mesh_energy, wedge_pair_energy, wedge_pair_energy_with, wedge_pair_exact, FarFieldFit,
    WedgeOptions, WedgeReport, WedgeRun,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiSample {
    pub y: f64,
    pub psi: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Full,
    TwoScatter,
    PlatesClosedForm,
}

impl Method {
    pub fn tag(&self) -> &'static str {
        match self {
            Method::Full => "full",
            Method::TwoScatter => "two-scatter",
            Method::PlatesClosedForm => "plates-closed-form",
        }
    }
}
