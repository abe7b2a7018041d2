//! Multiphoton coincidence rates in linear interferometers and the sum
//! rules that let a scattering matrix be replaced by a Hessenberg coset
//! matrix.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of its inputs; IO, file formats and the command line live in
//! the companion `sumrules` crate.
//!
//! Conventions used throughout:
//!
//! * Mode (channel) indices in [`ModeRotation`] and [`PhotonConfig`] are
//!   1-based, matching detector and port labels. Raw matrix element
//!   access through [`ComplexMatrix::get`] and indexing is 0-based.
//! * [`compose`] multiplies left to right: `compose([a, b, c]) = a·b·c`.
//!   Light enters on the right, so `c` is the element nearest the sources
//!   and `a` is the element nearest the detectors.
//! * "Upper Hessenberg" means `M[i][i+k] = 0` for `k >= 2` (zeros strictly
//!   above the superdiagonal), the zero pattern produced by the output-side
//!   coset factorization. "Lower Hessenberg" is the transposed pattern.
//!
//! ```
//! use sumrules_core::coset::{factor_output_coset, Side};
//! use sumrules_core::{haar_unitary, sum_over_outputs, DelaySpec, PhotonConfig, SumSpec};
//!
//! let u = haar_unitary(4, 7)?;
//! let pinned = PhotonConfig::new(vec![2, 3, 4])?;
//! let spec = SumSpec::new(Side::Output, 4, 3, DelaySpec::coincident(3));
//! let report = sum_over_outputs(&u, &pinned, &spec)?;
//! assert!(report.holds(1e-9));
//! assert!(factor_output_coset(&u)?.max_zero_residual() < 1e-12);
//! # Ok::<(), sumrules_core::Error>(())
//! ```
#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod characters;
pub mod coset;
pub mod error;
pub mod haar;
pub mod matfun;
pub mod matrix;
pub mod numeric;
pub mod partition;
pub mod perm;
pub mod photons;
pub mod rates;
pub mod rotation;
pub mod sumrules;

pub use characters::{characters, CharacterTable};
pub use coset::{
    factor_input_coset, factor_input_coset_with, factor_output_coset, factor_output_coset_with,
    removed_elements, CosetFactorization, FactorOptions, Side,
};
pub use error::{Error, Result};
pub use haar::haar_unitary;
pub use matfun::{
    determinant, immanant, is_lower_hessenberg, is_upper_hessenberg, permanent_hessenberg,
    permanent_naive, permanent_ryser, t_map, HESSENBERG_TOL,
};
pub use matrix::{unitarity_defect, ComplexMatrix, UNITARITY_TOL};
pub use num_complex::Complex64;
pub use partition::Partition;
pub use photons::{scattering_submatrix, DelaySpec, PhotonConfig};
pub use rates::{
    rate, rate_indistinguishable, rate_oracle, rate_three_photon_partial, rate_two_photon,
    RateMethod, RateResult,
};
pub use rotation::{compose, embed_rotation, ModeRotation};
pub use sumrules::{
    enumerate_inputs, enumerate_outputs, sum_over_inputs, sum_over_outputs, PermanentPath,
    SumReport, SumSpec, SumTerm,
};
