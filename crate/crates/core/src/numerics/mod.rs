//! Special functions and numeric utilities.
//!
//! Everything here is a pure function of its arguments.

mod elliptic;
mod fourier;
mod quadrature;
mod roots;

pub use elliptic::{
    carlson_rd, carlson_rf, ellip_e, ellip_e_complete, ellip_e_imaginary_modulus, ellip_f,
    ellip_f_imaginary_modulus, ellip_k,
};
pub use fourier::{fourier_decompose, fourier_from_samples, unit_circle, FourierSeries, DEFAULT_SAMPLES};
pub use quadrature::{integrate, Quadrature};
pub use roots::{find_root, find_root_with, RootOptions, DEFAULT_ROOT_TOL};
