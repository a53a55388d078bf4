//! The representation map on generators, words and series.

pub mod engine;
pub mod export;
pub mod lincomb;
pub mod series;
pub mod word;

pub use engine::{ActionError, ActionTerm, Direction, Engine, Orientation};
pub use lincomb::{LinComb, Scalar};
pub use series::{locality_radius, series_partial, support_components, SeriesProbe, SeriesStatus, SeriesSupport};
pub use word::{apply_word, hat_generator, weyl_generator, Exact, Field, GenSymbol, HatKind, Numeric, OperatorWord};
