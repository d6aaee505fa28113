pub mod algebra;
pub mod growth;
pub mod gs;
pub mod presentation;
pub mod section6;

pub use algebra::{AlgElement, OverflowPolicy, TruncatedAlgebra};
pub use growth::{growth_g, growth_table, PowerChain};
pub use presentation::Presentation;
pub use gs::{gs_census_from_blocks, gs_check, gs_value, Census, GsOutcome, GsReport};
pub use section6::{build_section6_presentation, lemma12_sandwich_check, section6_miniature, SandwichRow, Section6Report};
