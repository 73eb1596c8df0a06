//! Dictionary construction from a frequency-annotated name corpus.
//!
//! Two names are paired when at least one variant rule accepts them. Every
//! rule other than the article prefix requires the names to be exactly one
//! edit apart, so instead of comparing all pairs the builder only visits
//! candidates that share a single-deletion key (which finds every pair at
//! distance one) plus the article-prefixed form of each name. Each candidate
//! still passes the length gate and the bounded distance gate before rules
//! are evaluated.
//!
//! [`Strategy::LengthSweep`] is the plain approach: sort by length and
//! compare every pair whose lengths differ by at most two. Both strategies
//! return the same edges.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{self, BufRead};

use rayon::prelude::*;
use thiserror::Error;

use crate::editdist::{levenshtein_chars, within_chars};
use crate::rules::{Pattern, RuleSet, RuleTable};
pub use crate::store::{select_standard, Origin};
use crate::store::Dictionary;
use crate::textprep::{clean, CleanName};

/// A corpus name and the number of times it occurs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NameRecord {
    pub name: CleanName,
    pub count: u64,
}

impl NameRecord {
    pub fn new(name: CleanName, count: u64) -> Self {
        NameRecord { name, count }
    }
}

/// Evidence that two names are alternatives. `a < b` always.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AltEdge {
    pub a: CleanName,
    pub b: CleanName,
    pub rules: RuleSet,
    pub distance: usize,
    pub origin: Origin,
}

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("duplicate name {name}{}", line.map(|l| format!(" on line {l}")).unwrap_or_default())]
    DuplicateName { name: CleanName, line: Option<usize> },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("failed to start worker pool: {0}")]
    Pool(String),
}

/// How candidate pairs are enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Single-deletion index plus article lookups.
    #[default]
    Indexed,
    /// Every pair whose lengths differ by at most two.
    LengthSweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    /// Worker threads; 0 lets the pool decide, 1 runs on the calling thread.
    pub jobs: usize,
    pub strategy: Strategy,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { jobs: 1, strategy: Strategy::Indexed }
    }
}

/// Reads `name<TAB>count` lines. The count is optional and defaults to 1.
///
/// Blank lines and `#` comments are skipped. Names are cleaned; different
/// raw spellings that clean to the same name are merged and their counts
/// added. The same raw name appearing twice is an error.
pub fn read_corpus<R: BufRead>(input: R) -> Result<Vec<NameRecord>, BuildError> {
    let mut merged: BTreeMap<CleanName, u64> = BTreeMap::new();
    let mut raw_seen: HashMap<String, usize> = HashMap::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split('\t');
        let raw = fields.next().unwrap_or_default();
        let count = match fields.next().map(str::trim) {
            None | Some("") => 1,
            Some(text) => match text.parse::<u64>() {
                Ok(c) if c >= 1 => c,
                _ => {
                    return Err(BuildError::Parse {
                        line: lineno,
                        message: format!("count {text:?} is not a positive integer"),
                    })
                }
            },
        };
        if fields.next().is_some() {
            return Err(BuildError::Parse { line: lineno, message: "too many fields".into() });
        }
        let name = clean(raw).map_err(|e| BuildError::Parse { line: lineno, message: e.to_string() })?;
        if raw_seen.insert(raw.to_owned(), lineno).is_some() {
            return Err(BuildError::DuplicateName { name, line: Some(lineno) });
        }
        *merged.entry(name).or_insert(0) += count;
    }
    Ok(merged.into_iter().map(|(name, count)| NameRecord { name, count }).collect())
}

fn sorted_unique(corpus: &[NameRecord]) -> Result<Vec<NameRecord>, BuildError> {
    if corpus.is_empty() {
        return Err(BuildError::EmptyCorpus);
    }
    let mut records = corpus.to_vec();
    records.sort();
    for w in records.windows(2) {
        if w[0].name == w[1].name {
            return Err(BuildError::DuplicateName { name: w[0].name.clone(), line: None });
        }
    }
    Ok(records)
}

/// Finds every pair accepted by `table`. Edges come back sorted.
pub fn find_edges(corpus: &[NameRecord], table: &RuleTable, options: BuildOptions) -> Result<Vec<AltEdge>, BuildError> {
    let records = sorted_unique(corpus)?;
    let pairs = pair_indices(&records, table, options)?;
    Ok(pairs
        .into_iter()
        .map(|(i, j, rules, distance)| AltEdge {
            a: records[i].name.clone(),
            b: records[j].name.clone(),
            rules,
            distance,
            origin: Origin::Auto,
        })
        .collect())
}

/// Builds the dictionary: rule-accepted pairs, variant groups, standards.
pub fn build(corpus: &[NameRecord], table: &RuleTable, options: BuildOptions) -> Result<Dictionary, BuildError> {
    let records = sorted_unique(corpus)?;
    let pairs: BTreeMap<(usize, usize), Origin> = pair_indices(&records, table, options)?
        .into_iter()
        .map(|(i, j, _, _)| ((i, j), Origin::Auto))
        .collect();
    let names = records.into_iter().map(|r| (r.name, r.count)).collect();
    Ok(Dictionary::assemble(names, &pairs, &BTreeSet::new()))
}

/// [`build`] with the default rule table, single-threaded.
pub fn build_default(corpus: &[NameRecord]) -> Result<Dictionary, BuildError> {
    build(corpus, crate::rules::default_table(), BuildOptions::default())
}

type Pair = (usize, usize, RuleSet, usize);

fn pair_indices(records: &[NameRecord], table: &RuleTable, options: BuildOptions) -> Result<Vec<Pair>, BuildError> {
    let chars: Vec<Vec<char>> = records.iter().map(|r| r.name.chars()).collect();
    let prefixes: Vec<Vec<char>> = table
        .rules()
        .iter()
        .flat_map(|r| r.patterns.iter())
        .filter_map(|p| match p {
            Pattern::Prefix(s) => Some(s.chars().collect()),
            _ => None,
        })
        .collect();

    let run = || -> Vec<Pair> {
        match options.strategy {
            Strategy::Indexed => {
                let index = CandidateIndex::new(&chars);
                for_each_name(records.len(), options.jobs, |i| {
                    let candidates = index.candidates(i, &chars, &prefixes);
                    check_pairs(i, candidates, &chars, table)
                })
            }
            Strategy::LengthSweep => {
                let mut by_len: Vec<usize> = (0..records.len()).collect();
                by_len.sort_by_key(|&i| (chars[i].len(), i));
                let lens: Vec<usize> = by_len.iter().map(|&i| chars[i].len()).collect();
                for_each_name(records.len(), options.jobs, |i| {
                    let len = chars[i].len();
                    let lo = lens.partition_point(|&l| l + 2 < len);
                    let hi = lens.partition_point(|&l| l <= len + 2);
                    let candidates = by_len[lo..hi].iter().copied().filter(|&j| j > i).collect();
                    check_pairs(i, candidates, &chars, table)
                })
            }
        }
    };

    let mut pairs = if options.jobs == 1 {
        run()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(options.jobs)
            .build()
            .map_err(|e| BuildError::Pool(e.to_string()))?
            .install(run)
    };
    pairs.sort_by_key(|&(i, j, _, _)| (i, j));
    Ok(pairs)
}

fn for_each_name<F>(n: usize, jobs: usize, work: F) -> Vec<Pair>
where
    F: Fn(usize) -> Vec<Pair> + Sync + Send,
{
    if jobs == 1 {
        (0..n).flat_map(work).collect()
    } else {
        (0..n).into_par_iter().flat_map_iter(work).collect()
    }
}

/// Gate then rules, for candidates `j > i`.
fn check_pairs(i: usize, mut candidates: Vec<usize>, chars: &[Vec<char>], table: &RuleTable) -> Vec<Pair> {
    candidates.sort_unstable();
    candidates.dedup();
    let a = &chars[i];
    candidates
        .into_iter()
        .filter(|&j| j > i)
        .filter_map(|j| {
            let b = &chars[j];
            if a.len().abs_diff(b.len()) > 2 || !within_chars(a, b, 2) {
                return None;
            }
            let rules = table.match_chars(a, b);
            (!rules.is_empty()).then(|| (i, j, rules, levenshtein_chars(a, b)))
        })
        .collect()
}

/// Maps each name and each of its single-letter deletions to the names
/// that produced them.
struct CandidateIndex {
    keys: HashMap<Vec<char>, Vec<usize>>,
    whole: HashMap<Vec<char>, usize>,
}

impl CandidateIndex {
    fn new(chars: &[Vec<char>]) -> Self {
        let mut keys: HashMap<Vec<char>, Vec<usize>> = HashMap::with_capacity(chars.len() * 8);
        let mut whole = HashMap::with_capacity(chars.len());
        for (i, name) in chars.iter().enumerate() {
            whole.insert(name.clone(), i);
            for key in deletion_keys(name) {
                keys.entry(key).or_default().push(i);
            }
        }
        CandidateIndex { keys, whole }
    }

    fn candidates(&self, i: usize, chars: &[Vec<char>], prefixes: &[Vec<char>]) -> Vec<usize> {
        let name = &chars[i];
        let mut out = Vec::new();
        for key in deletion_keys(name) {
            if let Some(ids) = self.keys.get(&key) {
                out.extend_from_slice(ids);
            }
        }
        // names of which this one is a single deletion
        if let Some(ids) = self.keys.get(name) {
            out.extend_from_slice(ids);
        }
        for prefix in prefixes {
            let mut longer = prefix.clone();
            longer.extend_from_slice(name);
            if let Some(&j) = self.whole.get(&longer) {
                out.push(j);
            }
            if let Some(rest) = name.strip_prefix(prefix.as_slice()) {
                if let Some(&j) = self.whole.get(rest) {
                    out.push(j);
                }
            }
        }
        out
    }
}

/// The name itself and every distinct single-letter deletion of it.
fn deletion_keys(name: &[char]) -> Vec<Vec<char>> {
    let mut keys = Vec::with_capacity(name.len() + 1);
    keys.push(name.to_vec());
    for i in 0..name.len() {
        if i > 0 && name[i] == name[i - 1] {
            continue;
        }
        let mut key = name.to_vec();
        key.remove(i);
        keys.push(key);
    }
    keys
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::{match_rules, RuleId};

    fn n(s: &str) -> CleanName {
        clean(s).unwrap()
    }

    fn corpus(items: &[(&str, u64)]) -> Vec<NameRecord> {
        items.iter().map(|&(s, c)| NameRecord::new(n(s), c)).collect()
    }

    /// Brute force: every unordered pair through `match_rules`.
    fn naive_pairs(records: &[NameRecord]) -> BTreeSet<(CleanName, CleanName)> {
        let mut out = BTreeSet::new();
        for x in records {
            for y in records {
                if x.name < y.name && !match_rules(&x.name, &y.name).is_empty() {
                    out.insert((x.name.clone(), y.name.clone()));
                }
            }
        }
        out
    }

    fn edge_pairs(edges: &[AltEdge]) -> BTreeSet<(CleanName, CleanName)> {
        edges.iter().map(|e| (e.a.clone(), e.b.clone())).collect()
    }

    #[test]
    fn rola_fixture() {
        let c = corpus(&[("رولا", 10), ("رولى", 3), ("روله", 2), ("احمر", 5)]);
        let d = build_default(&c).unwrap();
        let alts: BTreeSet<&str> = d.lookup("رولا").unwrap().alternatives.iter().map(|a| a.name.as_str()).collect();
        assert_eq!(alts, BTreeSet::from(["رولى", "روله"]));
        assert!(d.lookup("احمر").unwrap().alternatives.is_empty());
        assert_eq!(d.summary().names_with_alternatives, 3);
        let edges = find_edges(&c, crate::rules::default_table(), BuildOptions::default()).unwrap();
        assert_eq!(edge_pairs(&edges), naive_pairs(&c));
    }

    #[test]
    fn single_name() {
        let d = build_default(&corpus(&[("احمد", 7)])).unwrap();
        let e = d.lookup("احمد").unwrap();
        assert!(e.alternatives.is_empty());
        assert_eq!(e.standard.as_str(), "احمد");
    }

    #[test]
    fn atallah_group_under_rules_alone() {
        let c = corpus(&[("عطا الله", 4827), ("عطاء الله", 12), ("عطالله", 1284)]);
        let d = build_default(&c).unwrap();
        let with = d.component_of("عطا الله").unwrap();
        let names: Vec<&str> = with.iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names, vec!["عطا الله", "عطاء الله"]);
        // the joined spelling also drops an alif, which no rule covers
        assert_eq!(d.component_of("عطالله").unwrap().len(), 1);
        assert_eq!(d.lookup("عطاء الله").unwrap().standard.as_str(), "عطا الله");
    }

    #[test]
    fn empty_corpus_rejected() {
        assert!(matches!(build_default(&[]), Err(BuildError::EmptyCorpus)));
        let only_comments = read_corpus("# header\n\n".as_bytes()).unwrap();
        assert!(matches!(build_default(&only_comments), Err(BuildError::EmptyCorpus)));
    }

    #[test]
    fn duplicate_records_rejected() {
        let c = corpus(&[("احمد", 1), ("احمد", 2)]);
        assert!(matches!(build_default(&c), Err(BuildError::DuplicateName { line: None, .. })));
    }

    #[test]
    fn edges_carry_rules_and_distance() {
        let c = corpus(&[("أخضر", 1), ("الأخضر", 1), ("غيدا", 1), ("غيداء", 1)]);
        let edges = find_edges(&c, crate::rules::default_table(), BuildOptions::default()).unwrap();
        assert_eq!(edges.len(), 2);
        let article = edges.iter().find(|e| e.rules.contains(RuleId::R10)).unwrap();
        assert_eq!(article.distance, 2);
        let hamza = edges.iter().find(|e| e.rules.contains(RuleId::R14)).unwrap();
        assert_eq!(hamza.distance, 1);
        assert!(hamza.rules.contains(RuleId::R9));
        for e in &edges {
            assert!(e.a < e.b);
            assert_eq!(e.origin, Origin::Auto);
        }
    }

    #[test]
    fn strategies_and_threads_agree() {
        let seeds = ["رولا", "غادة", "حسين", "سلطان", "عطا الله"];
        let mut names: BTreeSet<CleanName> = BTreeSet::new();
        for s in seeds {
            let s = n(s);
            names.extend(crate::rules::expand(&s).into_iter().take(40));
            names.insert(s);
        }
        let c: Vec<NameRecord> = names.into_iter().enumerate().map(|(i, name)| NameRecord::new(name, 1 + (i as u64 % 7))).collect();
        let table = crate::rules::default_table();
        let base = find_edges(&c, table, BuildOptions::default()).unwrap();
        assert_eq!(edge_pairs(&base), naive_pairs(&c));
        for strategy in [Strategy::Indexed, Strategy::LengthSweep] {
            for jobs in [1, 3] {
                let got = find_edges(&c, table, BuildOptions { jobs, strategy }).unwrap();
                assert_eq!(got, base, "{strategy:?} jobs={jobs}");
            }
        }
        let mut reversed = c.clone();
        reversed.reverse();
        assert_eq!(build_default(&reversed).unwrap(), build_default(&c).unwrap());
    }

    #[test]
    fn no_rule_spans_more_than_two_letters_of_length() {
        let a = n("احمد");
        let b = n("الاحمدين");
        assert!(match_rules(&a, &b).is_empty());
    }

    #[test]
    fn read_corpus_defaults_and_merges() {
        let text = "# names\nرولا\t10\nرولى\n\nرولا \t2\n";
        let records = read_corpus(text.as_bytes()).unwrap();
        assert_eq!(records, corpus(&[("رولا", 12), ("رولى", 1)]));
    }

    #[test]
    fn read_corpus_errors_carry_line_numbers() {
        let err = read_corpus("احمد\t3\nاحمد\t1\n".as_bytes()).unwrap_err();
        assert!(matches!(err, BuildError::DuplicateName { line: Some(2), .. }), "{err}");
        let err = read_corpus("احمد\tx\n".as_bytes()).unwrap_err();
        assert!(matches!(err, BuildError::Parse { line: 1, .. }));
        let err = read_corpus("احمد\n123\n".as_bytes()).unwrap_err();
        assert!(matches!(err, BuildError::Parse { line: 2, .. }));
        let err = read_corpus("احمد\t0\n".as_bytes()).unwrap_err();
        assert!(matches!(err, BuildError::Parse { line: 1, .. }));
    }

    #[test]
    fn deletion_keys_skip_repeats() {
        let keys = deletion_keys(&['ا', 'ا', 'ب']);
        assert_eq!(keys, vec![vec!['ا', 'ا', 'ب'], vec!['ا', 'ب'], vec!['ا', 'ا']]);
    }
}
