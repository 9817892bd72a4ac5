//! Spectral and metric analysis of Schreier graphs of `SL_2(Z/pZ)`.
//!
//! Numeric routines are generic over [`Real`] (`f32` or `f64`); the aliases
//! at the bottom of this file fix the scalar to `f64`.

pub mod actions;
pub mod desymmetrize;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod metrics;
pub mod modp;
pub mod primes;
pub mod rng;
pub mod scalar;
pub mod spectra;
pub mod stats;

pub use actions::{
    act, fixed_generators, lps_generators, random_generators, random_generators_trial,
    random_permutations, Family, GeneratorSet, GroupElement, Permutation, Provenance, SpaceKind,
    VertexSpace,
};
pub use desymmetrize::{
    affine_extreme_nontrivial, monochromatic_spectrum, principal_series_indices, sector_block,
    steinberg_spectrum, torus_sector_blocks, Sector, SectorBlock, SpectrumSample,
};
pub use error::{Error, Result};
pub use experiments::{run, summarize, ExperimentConfig, ExperimentRecord, Measurement, Summary};
pub use graph::{build_schreier, connected_components, is_bipartite, GraphBuilder, SchreierGraph};
pub use metrics::{
    bfs, diameter, eccentricity, essential_diameter, girth_at_identity, radius_at, DistanceField,
    Girth,
};
pub use modp::{field_inv, primitive_root, sqrt_mod, DlogTable, FieldElement, Prime, Sl2Element};
pub use scalar::Real;
pub use spectra::{extreme_nontrivial, graph_spectrum, EigenMode, EigenRequest, ExtremePair};
pub use stats::{
    count_exceptional, discrepancy, km_cdf, km_density, km_moment, moment_variance_mc,
    ramanujan_bound, spacing_ks, unfold_spacings, KestenMcKay, SpacingModel, SpacingSeries,
};

pub type SpectrumSampleF64 = SpectrumSample<f64>;
pub type ExtremePairF64 = ExtremePair<f64>;
pub type KestenMcKayF64 = KestenMcKay<f64>;
pub type SpacingSeriesF64 = SpacingSeries<f64>;
