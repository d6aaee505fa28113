pub mod bounds;
pub mod gk;
pub mod schedule;
pub mod table;
pub mod wgamma;
pub mod witness;

pub use bounds::{
    corollary_bound_report, dense_gamma_dim_check, inclusion_report, lemma3_verify, lemma4prime_verify,
    DenseReport, InclusionReport, InclusionRow,
};
pub use gk::{gk_estimate, GkEstimate};
pub use schedule::{Faithfulness, FiltrationSchedule};
pub use table::{GrowthEntry, GrowthTable};
pub use wgamma::{compute_w, w_chain, w_gamma, w_gamma_table, WChain};
pub use witness::{density_witness, is_density_witness, lemma11_witness, lemma7_gamma, products_independent};
