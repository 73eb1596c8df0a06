//! Dictionary of Arabic first names and their alternative written forms.
//!
//! The pipeline is:
//!
//! 1. [`textprep::clean`] turns raw input into a [`CleanName`].
//! 2. [`builder::build`] compares every pair of corpus names that could be
//!    one edit apart (or an article prefix apart), keeps the pairs that
//!    satisfy a variant rule from [`rules`], and assigns each connected
//!    group of variants its most frequent member as the standard form.
//! 3. [`store`] saves and loads the resulting [`Dictionary`] as a sorted
//!    TSV file and answers exact lookups by binary search.
//! 4. [`curate`] replays manual accept/reject/standard patches and reports
//!    how the dictionary changed.
//! 5. [`query`] serves the two runtime flows: expanding a searched name to
//!    its variants (reading mode) and advising the standard spelling when a
//!    name is entered (writing mode).

pub mod builder;
pub mod curate;
pub mod editdist;
pub mod query;
pub mod rules;
pub mod store;
pub mod synth;
pub mod textprep;
mod unionfind;

pub use builder::{build, AltEdge, BuildError, NameRecord, Origin};
pub use curate::{apply_patch, stats, CurationStats, Patch, PatchOp};
pub use editdist::{classify_single_edit, levenshtein, within, EditClass};
pub use query::{search_read, standardize_write, Expansion, ReadResult, WriteAdvice};
pub use rules::{expand, match_rules, RuleId, RuleSet, RuleTable};
pub use store::{DictEntry, Dictionary};
pub use textprep::{clean, is_compound, CleanError, CleanName};
