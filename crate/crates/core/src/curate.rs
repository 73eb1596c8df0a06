//! Manual curation of an automatically built dictionary.
//!
//! Curation is a patch file replayed on top of the auto build (fields are tab-separated):
//!
//! ```text
//! # comment
//! REJECT  حسين  حسن
//! ACCEPT  ادهميه  دهمه
//! STANDARD  ءلاء  علاء
//! ```
//!
//! [`stats`] compares two dictionaries over the same names: which pairings
//! were removed or added, and how the number of names with k alternatives
//! moved for each k.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{self, BufRead};
use std::path::Path;

use thiserror::Error;

use crate::store::{Dictionary, Origin};
use crate::textprep::{clean, CleanName};
use crate::unionfind::UnionFind;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatchOp {
    Reject(CleanName, CleanName),
    Accept(CleanName, CleanName),
    SetStandard { name: CleanName, standard: CleanName },
}

impl fmt::Display for PatchOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatchOp::Reject(a, b) => write!(f, "REJECT\t{a}\t{b}"),
            PatchOp::Accept(a, b) => write!(f, "ACCEPT\t{a}\t{b}"),
            PatchOp::SetStandard { name, standard } => write!(f, "STANDARD\t{name}\t{standard}"),
        }
    }
}

/// An ordered list of curation operations.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Patch {
    pub ops: Vec<PatchOp>,
}

#[derive(Debug, Error)]
pub enum CurateError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("operation {op_index} ({op}): unknown name {name}")]
    UnknownName { op_index: usize, op: String, name: CleanName },
    #[error("operation {op_index} ({op}): {standard} is not in the variant group of {name}")]
    StandardOutsideGroup { op_index: usize, op: String, name: CleanName, standard: CleanName },
    #[error("dictionaries cover different names ({only_before} only before, {only_after} only after)")]
    UniverseMismatch { only_before: usize, only_after: usize },
}

impl Patch {
    pub fn new(ops: Vec<PatchOp>) -> Self {
        Patch { ops }
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn parse<R: BufRead>(input: R) -> Result<Patch, CurateError> {
        let mut ops = Vec::new();
        for (idx, line) in input.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let line = line.strip_suffix('\r').unwrap_or(&line);
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let err = |message: String| CurateError::Parse { line: lineno, message };
            if fields.len() != 3 {
                return Err(err(format!("expected 3 tab-separated fields, found {}", fields.len())));
            }
            let a = clean(fields[1]).map_err(|e| err(e.to_string()))?;
            let b = clean(fields[2]).map_err(|e| err(e.to_string()))?;
            ops.push(match fields[0] {
                "REJECT" => PatchOp::Reject(a, b),
                "ACCEPT" => PatchOp::Accept(a, b),
                "STANDARD" => PatchOp::SetStandard { name: a, standard: b },
                other => return Err(err(format!("unknown operation {other:?}"))),
            });
        }
        Ok(Patch { ops })
    }

    pub fn load_from_path<P: AsRef<Path>>(path: P) -> Result<Patch, CurateError> {
        Patch::parse(io::BufReader::new(std::fs::File::open(path)?))
    }
}

impl std::str::FromStr for Patch {
    type Err = CurateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Patch::parse(s.as_bytes())
    }
}

impl fmt::Display for Patch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for op in &self.ops {
            writeln!(f, "{op}")?;
        }
        Ok(())
    }
}

/// Why an operation changed nothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Redundancy {
    RejectAbsentPair,
    AcceptPresentPair,
    SelfPair,
}

/// A non-fatal note about one patch operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RedundantOp {
    pub op_index: usize,
    pub op: PatchOp,
    pub reason: Redundancy,
}

impl fmt::Display for RedundantOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let why = match self.reason {
            Redundancy::RejectAbsentPair => "pair is not present",
            Redundancy::AcceptPresentPair => "pair is already present",
            Redundancy::SelfPair => "both names are the same",
        };
        write!(f, "operation {} ({}) ignored: {why}", self.op_index, self.op)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatchOutcome {
    pub dictionary: Dictionary,
    pub warnings: Vec<RedundantOp>,
}

/// Replays `patch` over `dict` and returns a new dictionary.
///
/// Rejects and accepts edit pairings symmetrically; accepted pairs are
/// marked curated. A standard set by hand holds for the target's whole
/// variant group, including after groups are recomputed at the end.
pub fn apply_patch(dict: &Dictionary, patch: &Patch) -> Result<PatchOutcome, CurateError> {
    let names = dict.names_and_counts();
    let mut pairs = dict.pairs();
    let mut pinned = dict.pinned_standards();
    let mut warnings = Vec::new();

    let resolve = |op_index: usize, op: &PatchOp, name: &CleanName| {
        dict.position(name.as_str()).ok_or_else(|| CurateError::UnknownName {
            op_index,
            op: op.to_string(),
            name: name.clone(),
        })
    };

    for (op_index, op) in patch.ops.iter().enumerate() {
        match op {
            PatchOp::Reject(a, b) | PatchOp::Accept(a, b) => {
                let i = resolve(op_index, op, a)?;
                let j = resolve(op_index, op, b)?;
                let redundant = if i == j {
                    Some(Redundancy::SelfPair)
                } else {
                    let key = (i.min(j), i.max(j));
                    match op {
                        PatchOp::Reject(..) => pairs.remove(&key).is_none().then_some(Redundancy::RejectAbsentPair),
                        _ => {
                            if let std::collections::btree_map::Entry::Vacant(slot) = pairs.entry(key) {
                                slot.insert(Origin::Curated);
                                None
                            } else {
                                Some(Redundancy::AcceptPresentPair)
                            }
                        }
                    }
                };
                if let Some(reason) = redundant {
                    warnings.push(RedundantOp { op_index, op: op.clone(), reason });
                }
            }
            PatchOp::SetStandard { name, standard } => {
                let i = resolve(op_index, op, name)?;
                let s = resolve(op_index, op, standard)?;
                let mut uf = UnionFind::new(names.len());
                for &(x, y) in pairs.keys() {
                    uf.union(x, y);
                }
                let group = uf.find(i);
                if uf.find(s) != group {
                    return Err(CurateError::StandardOutsideGroup {
                        op_index,
                        op: op.to_string(),
                        name: name.clone(),
                        standard: standard.clone(),
                    });
                }
                pinned.retain(|p| {
                    let k = dict.position(p.as_str()).expect("pinned names are entries");
                    uf.find(k) != group
                });
                pinned.insert(standard.clone());
            }
        }
    }

    Ok(PatchOutcome {
        dictionary: Dictionary::assemble(names, &pairs, &pinned),
        warnings,
    })
}

/// Applies patches in sequence, collecting warnings from all of them.
pub fn apply_patches<'a, I>(dict: &Dictionary, patches: I) -> Result<PatchOutcome, CurateError>
where
    I: IntoIterator<Item = &'a Patch>,
{
    let mut outcome = PatchOutcome { dictionary: dict.clone(), warnings: Vec::new() };
    for patch in patches {
        let next = apply_patch(&outcome.dictionary, patch)?;
        outcome.dictionary = next.dictionary;
        outcome.warnings.extend(next.warnings);
    }
    Ok(outcome)
}

/// An exact fraction. A zero denominator reads as zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rate {
    pub numerator: u64,
    pub denominator: u64,
}

impl Rate {
    pub fn new(numerator: u64, denominator: u64) -> Self {
        Rate { numerator, denominator }
    }

    pub fn as_f64(&self) -> f64 {
        if self.denominator == 0 {
            0.0
        } else {
            self.numerator as f64 / self.denominator as f64
        }
    }

    pub fn is_zero(&self) -> bool {
        self.numerator == 0
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}\t{:.4}", self.numerator, self.denominator, self.as_f64())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BucketRow {
    pub alternatives: usize,
    pub before: u64,
    pub after: u64,
}

impl BucketRow {
    pub fn change(&self) -> i64 {
        self.after as i64 - self.before as i64
    }
}

/// Number of names having k alternatives, before and after, for k = 1..=max.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BucketTable {
    pub rows: Vec<BucketRow>,
}

impl BucketTable {
    /// `before[k - 1]` and `after[k - 1]` are the counts for k alternatives.
    /// The shorter slice is padded with zeros.
    pub fn from_counts(before: &[u64], after: &[u64]) -> Self {
        let len = before.len().max(after.len());
        let rows = (0..len)
            .map(|k| BucketRow {
                alternatives: k + 1,
                before: before.get(k).copied().unwrap_or(0),
                after: after.get(k).copied().unwrap_or(0),
            })
            .collect();
        BucketTable { rows }
    }

    pub fn total_before(&self) -> u64 {
        self.rows.iter().map(|r| r.before).sum()
    }

    pub fn total_after(&self) -> u64 {
        self.rows.iter().map(|r| r.after).sum()
    }

    pub fn net_change(&self) -> i64 {
        self.rows.iter().map(BucketRow::change).sum()
    }

    /// Sum of the negative per-bucket changes, as a positive number.
    pub fn decreased(&self) -> u64 {
        self.rows.iter().map(|r| (-r.change()).max(0) as u64).sum()
    }

    /// Sum of the positive per-bucket changes.
    pub fn increased(&self) -> u64 {
        self.rows.iter().map(|r| r.change().max(0) as u64).sum()
    }

    pub fn changes(&self) -> Vec<i64> {
        self.rows.iter().map(BucketRow::change).collect()
    }
}

impl fmt::Display for BucketTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "alternatives\tbefore\tafter\tchange")?;
        for r in &self.rows {
            writeln!(f, "{}\t{}\t{}\t{:+}", r.alternatives, r.before, r.after, r.change())?;
        }
        write!(f, "total\t{}\t{}\t{:+}", self.total_before(), self.total_after(), self.net_change())
    }
}

/// Histogram of alternative-list lengths: index k - 1 counts names with k
/// alternatives. Names with none are not counted.
pub fn alternative_histogram(dict: &Dictionary) -> Vec<u64> {
    let max = dict.entries().iter().map(|e| e.alternatives.len()).max().unwrap_or(0);
    let mut counts = vec![0u64; max];
    for e in dict.entries() {
        if !e.alternatives.is_empty() {
            counts[e.alternatives.len() - 1] += 1;
        }
    }
    counts
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurationStats {
    /// Pairings in the `before` dictionary.
    pub auto_pairs: u64,
    /// Pairings present before and absent after.
    pub rejected_pairs: u64,
    /// Pairings absent before and present after.
    pub added_pairs: u64,
    /// `rejected_pairs / auto_pairs`.
    pub acceptance_error_rate: Rate,
    /// `added_pairs / auto_pairs`.
    pub rejection_error_rate: Rate,
    pub buckets: BucketTable,
}

impl fmt::Display for CurationStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.buckets)?;
        writeln!(f, "auto_pairs\t{}", self.auto_pairs)?;
        writeln!(f, "rejected_pairs\t{}", self.rejected_pairs)?;
        writeln!(f, "added_pairs\t{}", self.added_pairs)?;
        writeln!(f, "acceptance_error_rate\t{}", self.acceptance_error_rate)?;
        write!(f, "rejection_error_rate\t{}", self.rejection_error_rate)
    }
}

/// Compares a dictionary before and after curation.
pub fn stats(before: &Dictionary, after: &Dictionary) -> Result<CurationStats, CurateError> {
    let names_before: BTreeSet<&CleanName> = before.entries().iter().map(|e| &e.name).collect();
    let names_after: BTreeSet<&CleanName> = after.entries().iter().map(|e| &e.name).collect();
    if names_before != names_after {
        return Err(CurateError::UniverseMismatch {
            only_before: names_before.difference(&names_after).count(),
            only_after: names_after.difference(&names_before).count(),
        });
    }
    let pb: BTreeMap<(CleanName, CleanName), Origin> = before.pair_names();
    let pa: BTreeMap<(CleanName, CleanName), Origin> = after.pair_names();
    let auto_pairs = pb.len() as u64;
    let rejected_pairs = pb.keys().filter(|k| !pa.contains_key(*k)).count() as u64;
    let added_pairs = pa.keys().filter(|k| !pb.contains_key(*k)).count() as u64;
    Ok(CurationStats {
        auto_pairs,
        rejected_pairs,
        added_pairs,
        acceptance_error_rate: Rate::new(rejected_pairs, auto_pairs),
        rejection_error_rate: Rate::new(added_pairs, auto_pairs),
        buckets: BucketTable::from_counts(&alternative_histogram(before), &alternative_histogram(after)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::{build_default, NameRecord};
    use crate::textprep::clean;

    fn n(s: &str) -> CleanName {
        clean(s).unwrap()
    }

    fn dict(items: &[(&str, u64)]) -> Dictionary {
        let c: Vec<NameRecord> = items.iter().map(|&(s, k)| NameRecord::new(n(s), k)).collect();
        build_default(&c).unwrap()
    }

    fn alts(d: &Dictionary, name: &str) -> Vec<String> {
        d.lookup(name).unwrap().alternatives.iter().map(|a| a.name.to_string()).collect()
    }

    #[test]
    fn reject_unpairs_both_sides() {
        let d = dict(&[("حسين", 50), ("حسن", 80)]);
        assert_eq!(alts(&d, "حسين"), vec!["حسن"]);
        let p: Patch = "REJECT\tحسين\tحسن\n".parse().unwrap();
        let out = apply_patch(&d, &p).unwrap();
        assert!(out.warnings.is_empty());
        assert!(alts(&out.dictionary, "حسين").is_empty());
        assert!(alts(&out.dictionary, "حسن").is_empty());
        assert_eq!(out.dictionary.lookup("حسين").unwrap().standard.as_str(), "حسين");
    }

    #[test]
    fn accept_adds_curated_pair() {
        let d = dict(&[("ادهميه", 3), ("ادهمه", 2), ("دهمه", 1), ("ادهيمة", 1)]);
        assert_eq!(alts(&d, "ادهميه"), vec!["ادهمه"]);
        let p: Patch = "ACCEPT\tادهميه\tدهمه\nACCEPT\tادهميه\tادهيمة\n".parse().unwrap();
        let out = apply_patch(&d, &p).unwrap();
        let e = out.dictionary.lookup("ادهميه").unwrap();
        assert_eq!(e.alternatives.len(), 3);
        let dahma = e.alternatives.iter().find(|a| a.name.as_str() == "دهمه").unwrap();
        assert_eq!(dahma.origin, Origin::Curated);
        let back = out.dictionary.lookup("دهمه").unwrap();
        assert_eq!(back.alternatives[0].name.as_str(), "ادهميه");
        assert_eq!(back.alternatives[0].origin, Origin::Curated);
    }

    #[test]
    fn empty_patch_is_identity() {
        let d = dict(&[("رولا", 10), ("رولى", 3), ("روله", 2)]);
        let out = apply_patch(&d, &Patch::default()).unwrap();
        assert_eq!(out.dictionary, d);
        assert!(out.warnings.is_empty());
    }

    #[test]
    fn redundant_ops_warn() {
        let d = dict(&[("رولا", 10), ("رولى", 3), ("احمد", 1)]);
        let p: Patch = "REJECT\tرولا\tاحمد\nACCEPT\tرولا\tرولى\nACCEPT\tرولا\tرولا\n".parse().unwrap();
        let out = apply_patch(&d, &p).unwrap();
        let reasons: Vec<Redundancy> = out.warnings.iter().map(|w| w.reason).collect();
        assert_eq!(
            reasons,
            vec![Redundancy::RejectAbsentPair, Redundancy::AcceptPresentPair, Redundancy::SelfPair]
        );
        assert_eq!(out.dictionary, d);
    }

    #[test]
    fn unknown_name_is_fatal() {
        let d = dict(&[("رولا", 10)]);
        let p: Patch = "ACCEPT\tرولا\tزوبعة\n".parse().unwrap();
        assert!(matches!(apply_patch(&d, &p), Err(CurateError::UnknownName { op_index: 0, .. })));
    }

    #[test]
    fn reject_then_accept_restores_as_curated() {
        let d = dict(&[("رولا", 10), ("رولى", 3)]);
        let p: Patch = "REJECT\tرولا\tرولى\nACCEPT\tرولى\tرولا\n".parse().unwrap();
        let out = apply_patch(&d, &p).unwrap();
        let e = out.dictionary.lookup("رولا").unwrap();
        assert_eq!(e.alternatives.len(), 1);
        assert_eq!(e.alternatives[0].origin, Origin::Curated);
    }

    #[test]
    fn set_standard_overrides_whole_group_and_persists() {
        let d = dict(&[("ءلاء", 4), ("علاء", 1)]);
        let p: Patch = "ACCEPT\tءلاء\tعلاء\nSTANDARD\tءلاء\tعلاء\n".parse().unwrap();
        let out = apply_patch(&d, &p).unwrap().dictionary;
        assert_eq!(out.lookup("ءلاء").unwrap().standard.as_str(), "علاء");
        assert_eq!(out.lookup("علاء").unwrap().standard.as_str(), "علاء");

        // survives a later, unrelated patch and a save/load cycle
        let again = apply_patch(&out, &Patch::default()).unwrap().dictionary;
        assert_eq!(again, out);
        let reloaded = Dictionary::from_tsv_str(&out.to_tsv_string()).unwrap();
        assert_eq!(reloaded, out);
    }

    #[test]
    fn set_standard_outside_group_fails() {
        let d = dict(&[("ءلاء", 4), ("علاء", 1)]);
        let p: Patch = "STANDARD\tءلاء\tعلاء\n".parse().unwrap();
        assert!(matches!(apply_patch(&d, &p), Err(CurateError::StandardOutsideGroup { .. })));
    }

    #[test]
    fn patch_parse_errors() {
        assert!(matches!("DROP\tا\tب\n".parse::<Patch>(), Err(CurateError::Parse { line: 1, .. })));
        assert!(matches!("# x\nREJECT\tا\n".parse::<Patch>(), Err(CurateError::Parse { line: 2, .. })));
        assert!(matches!("REJECT\tا\t12\n".parse::<Patch>(), Err(CurateError::Parse { line: 1, .. })));
    }

    #[test]
    fn patch_text_round_trips() {
        let p: Patch = "REJECT\tحسين\tحسن\nSTANDARD\tءلاء\tعلاء\n".parse().unwrap();
        assert_eq!(p.to_string().parse::<Patch>().unwrap(), p);
    }

    #[test]
    fn stats_identical_is_zero() {
        let d = dict(&[("رولا", 10), ("رولى", 3), ("روله", 2)]);
        let s = stats(&d, &d).unwrap();
        assert!(s.acceptance_error_rate.is_zero());
        assert!(s.rejection_error_rate.is_zero());
        assert_eq!(s.auto_pairs, 2);
        assert_eq!(s.buckets.net_change(), 0);
    }

    #[test]
    fn stats_universe_mismatch() {
        let a = dict(&[("رولا", 10)]);
        let b = dict(&[("رولى", 10)]);
        assert!(matches!(stats(&a, &b), Err(CurateError::UniverseMismatch { only_before: 1, only_after: 1 })));
    }

    #[test]
    fn six_name_fixture_hand_counted() {
        // auto pairs: حسين-حسن (R13c), رولا-رولى (R15), رولا-روله (R5_6); غادة isolated
        let d = dict(&[("حسين", 9), ("حسن", 8), ("رولا", 7), ("رولى", 6), ("روله", 5), ("غادة", 4)]);
        assert_eq!(d.summary().pairs, 3);
        let p: Patch = "REJECT\tحسين\tحسن\nACCEPT\tرولى\tروله\n".parse().unwrap();
        let after = apply_patch(&d, &p).unwrap().dictionary;
        let s = stats(&d, &after).unwrap();
        assert_eq!((s.auto_pairs, s.rejected_pairs, s.added_pairs), (3, 1, 1));
        assert_eq!(s.acceptance_error_rate, Rate::new(1, 3));
        assert_eq!(s.rejection_error_rate, Rate::new(1, 3));
        // before: حسين,حسن,رولى,روله have 1; رولا has 2. after: رولا,رولى,روله have 2.
        assert_eq!(s.buckets, BucketTable::from_counts(&[4, 1], &[0, 3]));
    }
}
