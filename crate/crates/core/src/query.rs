//! Runtime flows over a built dictionary.
//!
//! * Reading mode ([`search_read`]): a searched name is expanded to itself
//!   plus its alternatives, and the host system searches for all of them.
//! * Writing mode ([`standardize_write`]): a name about to be stored is
//!   checked against the dictionary and the standard form is suggested.
//!
//! Names the dictionary does not know pass through unchanged.

use std::cell::Cell;

use crate::store::Dictionary;
use crate::textprep::{clean, CleanError, CleanName};

/// How far reading mode expands a name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Expansion {
    /// The name's own alternative list.
    #[default]
    Adjacent,
    /// Every member of the name's variant group.
    Component,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReadResult {
    pub query: CleanName,
    /// Names to search for with their corpus counts, the query included.
    /// Sorted by descending count, then by name. Unknown names count 0.
    pub expansion: Vec<(CleanName, u64)>,
    pub standard: Option<CleanName>,
}

impl ReadResult {
    pub fn names(&self) -> impl Iterator<Item = &CleanName> {
        self.expansion.iter().map(|(n, _)| n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WriteAdvice {
    pub entered: CleanName,
    pub standard: CleanName,
    /// The entered name is known and is not its group's standard form.
    pub is_nonstandard: bool,
}

/// Reading mode for an already cleaned name.
pub fn read_clean(dict: &Dictionary, query: CleanName, mode: Expansion) -> ReadResult {
    let Some(entry) = dict.lookup(query.as_str()) else {
        return ReadResult { expansion: vec![(query.clone(), 0)], query, standard: None };
    };
    let mut expansion: Vec<(CleanName, u64)> = match mode {
        Expansion::Adjacent => std::iter::once((entry.name.clone(), entry.count))
            .chain(entry.alternatives.iter().map(|a| (a.name.clone(), a.count)))
            .collect(),
        Expansion::Component => dict
            .component_of(query.as_str())
            .expect("entry exists")
            .into_iter()
            .map(|e| (e.name.clone(), e.count))
            .collect(),
    };
    expansion.sort_by(|(na, ca), (nb, cb)| cb.cmp(ca).then_with(|| na.cmp(nb)));
    ReadResult { query, expansion, standard: Some(entry.standard.clone()) }
}

/// Cleans `raw` and expands it.
pub fn search_read(dict: &Dictionary, raw: &str, mode: Expansion) -> Result<ReadResult, CleanError> {
    Ok(read_clean(dict, clean(raw)?, mode))
}

/// Writing mode: suggests the standard form of `raw`.
pub fn standardize_write(dict: &Dictionary, raw: &str) -> Result<WriteAdvice, CleanError> {
    let entered = clean(raw)?;
    Ok(match dict.lookup(entered.as_str()) {
        Some(entry) => WriteAdvice {
            is_nonstandard: entry.standard != entered,
            standard: entry.standard.clone(),
            entered,
        },
        None => WriteAdvice { standard: entered.clone(), entered, is_nonstandard: false },
    })
}

/// Stand-in for a host database indexed by first name. Counts the key
/// comparisons its searches make.
#[derive(Debug, Default)]
pub struct HostTable {
    rows: Vec<(CleanName, usize)>,
    comparisons: Cell<usize>,
    searches: Cell<usize>,
}

impl HostTable {
    /// `names[i]` is the first name stored in row `i`. Names may repeat.
    pub fn new(names: Vec<CleanName>) -> Self {
        let mut rows: Vec<(CleanName, usize)> = names.into_iter().enumerate().map(|(i, n)| (n, i)).collect();
        rows.sort();
        HostTable { rows, comparisons: Cell::new(0), searches: Cell::new(0) }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    fn bound(&self, name: &CleanName, upper: bool) -> usize {
        let (mut lo, mut hi) = (0, self.rows.len());
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            self.comparisons.set(self.comparisons.get() + 1);
            let go_right = if upper { self.rows[mid].0 <= *name } else { self.rows[mid].0 < *name };
            if go_right {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Row ids whose name equals `name`, in ascending order.
    pub fn find(&self, name: &CleanName) -> Vec<usize> {
        self.searches.set(self.searches.get() + 1);
        let lo = self.bound(name, false);
        let hi = self.bound(name, true);
        let mut ids: Vec<usize> = self.rows[lo..hi].iter().map(|(_, id)| *id).collect();
        ids.sort_unstable();
        ids
    }

    pub fn comparisons(&self) -> usize {
        self.comparisons.get()
    }

    pub fn searches(&self) -> usize {
        self.searches.get()
    }

    pub fn reset_counters(&self) {
        self.comparisons.set(0);
        self.searches.set(0);
    }
}

/// What a reading-mode search against a host table cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HostSearch {
    pub result: ReadResult,
    pub rows: Vec<usize>,
    pub dictionary_comparisons: usize,
    pub host_searches: usize,
    pub host_comparisons: usize,
}

/// One dictionary lookup, then one exact host search per expanded name.
pub fn search_host(dict: &Dictionary, host: &HostTable, raw: &str, mode: Expansion) -> Result<HostSearch, CleanError> {
    let query = clean(raw)?;
    let (_, dictionary_comparisons) = dict.lookup_counted(query.as_str());
    let result = read_clean(dict, query, mode);
    host.reset_counters();
    let mut rows: Vec<usize> = result.names().flat_map(|n| host.find(n)).collect();
    rows.sort_unstable();
    Ok(HostSearch {
        rows,
        dictionary_comparisons,
        host_searches: host.searches(),
        host_comparisons: host.comparisons(),
        result,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::{build_default, NameRecord};
    use crate::curate::{apply_patch, Patch};

    fn n(s: &str) -> CleanName {
        clean(s).unwrap()
    }

    fn dict(items: &[(&str, u64)]) -> Dictionary {
        let c: Vec<NameRecord> = items.iter().map(|&(s, k)| NameRecord::new(n(s), k)).collect();
        build_default(&c).unwrap()
    }

    fn rola() -> Dictionary {
        dict(&[("رولا", 4420), ("رلى", 356), ("روله", 91), ("رلا", 218), ("رولى", 5)])
    }

    fn names(r: &ReadResult) -> Vec<&str> {
        r.names().map(CleanName::as_str).collect()
    }

    #[test]
    fn rola_reading_mode() {
        let d = rola();
        let r = search_read(&d, "رولا", Expansion::Adjacent).unwrap();
        assert_eq!(names(&r), vec!["رولا", "رلا", "روله", "رولى"]);
        assert_eq!(r.standard.as_ref().unwrap().as_str(), "رولا");
        // رلى is two edits from رولا and only joins through the group
        let r = search_read(&d, "رولا", Expansion::Component).unwrap();
        assert_eq!(names(&r), vec!["رولا", "رلى", "رلا", "روله", "رولى"]);
    }

    #[test]
    fn unknown_name_passes_through() {
        let d = rola();
        let r = search_read(&d, "زوبعة", Expansion::Adjacent).unwrap();
        assert_eq!(r.expansion, vec![(n("زوبعة"), 0)]);
        assert!(r.standard.is_none());
        let w = standardize_write(&d, "زوبعة").unwrap();
        assert_eq!(w.standard, n("زوبعة"));
        assert!(!w.is_nonstandard);
    }

    #[test]
    fn empty_query_is_an_error() {
        assert!(search_read(&rola(), "123", Expansion::Adjacent).is_err());
        assert!(standardize_write(&rola(), "!!").is_err());
    }

    #[test]
    fn writing_mode_alaa() {
        let d = dict(&[("ءلاء", 4), ("علاء", 1)]);
        let p: Patch = "ACCEPT\tءلاء\tعلاء\nSTANDARD\tعلاء\tعلاء\n".parse().unwrap();
        let d = apply_patch(&d, &p).unwrap().dictionary;
        let w = standardize_write(&d, "ءلاء").unwrap();
        assert_eq!(w.standard.as_str(), "علاء");
        assert!(w.is_nonstandard);
        let w = standardize_write(&d, "علاء").unwrap();
        assert_eq!(w.standard.as_str(), "علاء");
        assert!(!w.is_nonstandard);
    }

    #[test]
    fn expansion_symmetric_and_bounded() {
        let d = rola();
        for e in d.entries() {
            let r = search_read(&d, e.name.as_str(), Expansion::Adjacent).unwrap();
            assert!(r.expansion.len() <= e.alternatives.len() + 1);
            for other in r.names().filter(|x| **x != e.name) {
                let back = search_read(&d, other.as_str(), Expansion::Adjacent).unwrap();
                assert!(back.names().any(|x| *x == e.name));
            }
        }
    }

    #[test]
    fn standardize_is_idempotent() {
        let d = rola();
        for e in d.entries() {
            let w = standardize_write(&d, e.name.as_str()).unwrap();
            let again = standardize_write(&d, w.standard.as_str()).unwrap();
            assert_eq!(again.standard, w.standard);
            assert!(!again.is_nonstandard);
        }
    }

    #[test]
    fn host_search_is_one_lookup_plus_m_searches() {
        let d = rola();
        let host = HostTable::new(vec![n("رولا"), n("احمد"), n("رلا"), n("رولا"), n("روله"), n("علي")]);
        let s = search_host(&d, &host, "رولا", Expansion::Adjacent).unwrap();
        assert_eq!(s.rows, vec![0, 2, 3, 4]);
        assert_eq!(s.host_searches, s.result.expansion.len());
        let per_search = 2 * ((host.len() as f64).log2().ceil() as usize + 1);
        assert!(s.host_comparisons <= s.host_searches * per_search);
        assert!(s.dictionary_comparisons <= (d.len() as f64).log2().ceil() as usize + 1);
    }
}
