//! Words, harmonic words, truncated series and their norms.

pub mod norm;
pub mod random;
pub mod series;
pub mod shuffle;
pub mod word;

pub use norm::{norm_d, norm_ld, NormPoly};
pub use series::NCSeries;
pub use shuffle::{shuffle_set, stuffle_set};
pub use word::{HarmonicWord, Letter, Word};
