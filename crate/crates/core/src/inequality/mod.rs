//! Singular value and norm inequalities for Heinz means and PSD block
//! matrices, plus the counterexample machinery for the geometric-mean
//! comparison that does *not* hold index by index.

pub mod agm;
pub mod block;
pub mod counterexample;
pub mod search;
pub mod zhan;

pub use agm::{agm_chain_check, geometric_heinz_singular_values, AgmChain};
pub use block::{
    block_form, s_from_r, substitution_check, tao_check, theorem2_steps, BlockForm, BlockPsd, BlockVariant, Branch,
    SubstitutionOutcome, Theorem2Steps,
};
pub use counterexample::{
    reference_counterexample, reference_pair, CounterexampleReport, GapFunction, NuGrid, ScanRow,
};
pub use search::{reevaluate, violation_search, SearchConfig, ViolationRecord};
pub use zhan::zhan_check;
