//! Transmission through finite serial arrays of identical single-mode
//! scatterers (loop graphs, comb graphs, sphere "bubbles").
//!
//! Everything numeric is generic over [`Real`] (`f32`/`f64`); the `*64`
//! aliases below are what most callers want.

pub mod comb;
pub mod error;
pub mod linalg;
pub mod loop_element;
pub mod poles;
pub mod real;
pub mod scatter;
pub mod serial;
pub mod special;
pub mod sphere;
pub mod tooth;

pub use comb::{
    comb_amplitudes, comb_bands, comb_beta, comb_beta_complex, comb_direct_oracle, comb_discriminant, comb_smatrix,
    comb_transfer, stub_spectrum, zero_energy_checks, CombAmplitudes, CombParams, ZeroEnergyReport,
};
pub use error::{Error, Result};
pub use poles::{
    band_region, band_resonance_count, classify_poles, continue_to_decoupled, continued_transmission, find_poles, krein_denominator,
    krein_determinant, mirror_defect, winding_number, Homotopy, Pole, PoleOrigin, PoleSearch, PoleSet, Region,
};
pub use real::{Real, C};
pub use scatter::{element_data, l_from_s, m_from_l, m_from_s, s_from_l, s_from_m, ElementData, LTransfer, MTransfer, SMatrix};
pub use special::{alt_harmonic, digamma, harmonic};
pub use sphere::{
    averaged_transmission, calibrate_delta_prime, delta_prime_reference, g_closed, g_series, local_maxima, mu_root, mu_roots,
    resonance_factor, sphere_element_data, sphere_quoted_t, sphere_series, sphere_transfer, sphere_transfer_from,
    sphere_transmission, z_closed, z_series, SphereParams, SphereSeries,
};
pub use tooth::{integrate_tooth, solve_tooth, Potential, ToothSolution};
pub use serial::{
    band_intervals, bloch_discriminant, cheb_u, envelope_bounds, serial_closed_form, serial_recursive,
    serial_transfer_product, BandInterval, BandIntervals, EnvelopeBounds, SerialResult,
};

pub type C64 = C<f64>;
pub type SMatrix64 = SMatrix<f64>;
pub type LTransfer64 = LTransfer<f64>;
pub type MTransfer64 = MTransfer<f64>;
pub type ElementData64 = ElementData<f64>;
pub type SerialResult64 = SerialResult<f64>;
pub type BandIntervals64 = BandIntervals<f64>;
pub type CombParams64 = CombParams<f64>;
pub type SphereParams64 = SphereParams<f64>;
pub type SphereSeries64 = SphereSeries<f64>;
