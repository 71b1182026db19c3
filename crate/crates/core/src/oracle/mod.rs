//! Independent ground truth: exact coverage of the circle, sampling checks
//! on `S^n`, and seeded instance generators.

pub mod circle;
pub mod generators;
pub mod sampling;

pub use circle::{
    cap_to_arc, circle_cover_check, remark_pairwise_check, shortset_to_arcset, Arc, ArcSet, ArcSetJson,
    CircleCover, RemarkReport,
};
pub use generators::{
    antipodal_free_cover, hemisphere_sector_instance, random_short_arcs, random_simplex_with_origin,
    shatter_cap, shattered_cover, shattered_lemma1_instance, simplex_cover,
};
pub use sampling::{sample_sphere, sample_sphere_augmented, sampling_cover_check, Region, SampleSet, SamplingReport};
