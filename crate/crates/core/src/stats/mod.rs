//! Spectral statistics against the Kesten–McKay law.

pub mod discrepancy;
pub mod exceptional;
pub mod histogram;
pub mod kesten_mckay;
pub mod moments;
pub mod quadrature;
pub mod spacing;
pub mod words;

pub use discrepancy::{discrepancy, discrepancy_with_cdf};
pub use exceptional::{count_exceptional, exceptional_bound, fit_decay_exponent, ExceptionalCount};
pub use histogram::Histogram;
pub use kesten_mckay::{km_cdf, km_density, km_moment, KestenMcKay};
pub use moments::{
    moment_of_sample, moment_variance_mc, sl2_variance_bound, sln_log_variance_bound,
    MomentVariance,
};
pub use spacing::{
    is_quaternionic, kramers_reduce, ks_distance, spacing_ks, unfold_spacings, SpacingModel,
    SpacingSeries,
};
pub use words::{trivial_word_count, trivial_word_count_f64};

/// `2√(k−1)`.
pub fn ramanujan_bound(k: usize) -> f64 {
    2.0 * ((k.max(1) - 1) as f64).sqrt()
}
