//! The dictionary value, its TSV file format, and indexed lookup.
//!
//! File layout, one row per name, rows sorted by name (fields are tab-separated):
//!
//! ```text
//! #name  standard  count  alternatives
//! رولا  رولا  10  روله:2:a;رولى:3:a
//! ```
//!
//! Alternatives are `name:count:origin` joined by `;`, where origin is `a`
//! (found by the rules) or `c` (added by curation). Lines starting with `#`
//! and blank lines are ignored on load.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use thiserror::Error;

use crate::textprep::CleanName;
use crate::unionfind::UnionFind;

pub const HEADER: &str = "#name\tstandard\tcount\talternatives";

/// How a pairing entered the dictionary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Origin {
    Auto,
    Curated,
}

impl Origin {
    pub fn code(self) -> char {
        match self {
            Origin::Auto => 'a',
            Origin::Curated => 'c',
        }
    }

    fn from_code(s: &str) -> Option<Self> {
        match s {
            "a" => Some(Origin::Auto),
            "c" => Some(Origin::Curated),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alternative {
    pub name: CleanName,
    pub count: u64,
    pub origin: Origin,
}

/// One row of the dictionary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DictEntry {
    pub name: CleanName,
    pub count: u64,
    pub standard: CleanName,
    /// Sorted by descending count, then by name.
    pub alternatives: Vec<Alternative>,
}

impl DictEntry {
    pub fn is_standard(&self) -> bool {
        self.name == self.standard
    }
}

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

/// Headline numbers of a dictionary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Summary {
    pub names: usize,
    pub names_with_alternatives: usize,
    pub components: usize,
    pub max_alternatives: usize,
    pub pairs: usize,
}

/// Sorted entries plus the variant groups they form.
///
/// Immutable once constructed; every mutation path (build, curation, load)
/// assembles a fresh value.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Dictionary {
    entries: Vec<DictEntry>,
    group_of: Vec<usize>,
    groups: Vec<Vec<usize>>,
}

/// Picks the standard form of a group: highest count, ties to the smallest
/// name in code-point order.
pub fn select_standard<'a, I>(members: I) -> Option<&'a CleanName>
where
    I: IntoIterator<Item = (&'a CleanName, u64)>,
{
    members
        .into_iter()
        .min_by(|(na, ca), (nb, cb)| cb.cmp(ca).then_with(|| na.cmp(nb)))
        .map(|(name, _)| name)
}

impl Dictionary {
    /// Assembles a dictionary.
    ///
    /// `names` must be sorted and unique. `pairs` holds `(i, j)` with
    /// `i < j` indexing into `names`. A group whose members include a name
    /// from `pinned` takes that name as its standard instead of the most
    /// frequent one.
    pub(crate) fn assemble(
        names: Vec<(CleanName, u64)>,
        pairs: &BTreeMap<(usize, usize), Origin>,
        pinned: &BTreeSet<CleanName>,
    ) -> Dictionary {
        debug_assert!(names.windows(2).all(|w| w[0].0 < w[1].0));
        let n = names.len();
        let mut adjacency: Vec<Vec<(usize, Origin)>> = vec![Vec::new(); n];
        let mut uf = UnionFind::new(n);
        for (&(i, j), &origin) in pairs {
            debug_assert!(i < j && j < n);
            adjacency[i].push((j, origin));
            adjacency[j].push((i, origin));
            uf.union(i, j);
        }
        let labels = uf.labels();

        let mut group_ids = BTreeMap::new();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut group_of = Vec::with_capacity(n);
        for (i, &label) in labels.iter().enumerate() {
            let id = *group_ids.entry(label).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[id].push(i);
            group_of.push(id);
        }

        let standards: Vec<usize> = groups
            .iter()
            .map(|members| {
                let pinned_members: Vec<usize> = members
                    .iter()
                    .copied()
                    .filter(|&m| pinned.contains(&names[m].0))
                    .collect();
                let pool = if pinned_members.is_empty() { members } else { &pinned_members };
                let pick = select_standard(pool.iter().map(|&m| (&names[m].0, names[m].1)))
                    .expect("groups are nonempty");
                *pool.iter().find(|&&m| &names[m].0 == pick).unwrap()
            })
            .collect();

        let entries = names
            .iter()
            .enumerate()
            .map(|(i, (name, count))| {
                let mut alternatives: Vec<Alternative> = adjacency[i]
                    .iter()
                    .map(|&(j, origin)| Alternative {
                        name: names[j].0.clone(),
                        count: names[j].1,
                        origin,
                    })
                    .collect();
                alternatives.sort_by(|x, y| y.count.cmp(&x.count).then_with(|| x.name.cmp(&y.name)));
                DictEntry {
                    name: name.clone(),
                    count: *count,
                    standard: names[standards[group_of[i]]].0.clone(),
                    alternatives,
                }
            })
            .collect();

        Dictionary { entries, group_of, groups }
    }

    pub fn entries(&self) -> &[DictEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Binary search for `name`. Returns the entry index and the number of
    /// key comparisons made.
    pub fn position_counted(&self, name: &str) -> (Option<usize>, usize) {
        let mut lo = 0usize;
        let mut hi = self.entries.len();
        let mut comparisons = 0;
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            comparisons += 1;
            match self.entries[mid].name.as_str().cmp(name) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return (Some(mid), comparisons),
            }
        }
        (None, comparisons)
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.position_counted(name).0
    }

    /// Exact-match lookup.
    pub fn lookup(&self, name: &str) -> Option<&DictEntry> {
        self.position(name).map(|i| &self.entries[i])
    }

    /// Lookup that also reports how many key comparisons it took.
    pub fn lookup_counted(&self, name: &str) -> (Option<&DictEntry>, usize) {
        let (pos, comparisons) = self.position_counted(name);
        (pos.map(|i| &self.entries[i]), comparisons)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.position(name).is_some()
    }

    /// Variant groups, each sorted by name, ordered by their first member.
    pub fn components(&self) -> Vec<Vec<&CleanName>> {
        self.groups
            .iter()
            .map(|g| g.iter().map(|&i| &self.entries[i].name).collect())
            .collect()
    }

    /// Members of the group containing `name`.
    pub fn component_of(&self, name: &str) -> Option<Vec<&DictEntry>> {
        let i = self.position(name)?;
        Some(self.groups[self.group_of[i]].iter().map(|&j| &self.entries[j]).collect())
    }

    pub fn component_count(&self) -> usize {
        self.groups.len()
    }

    /// All pairings as `(i, j)` entry indices with `i < j`.
    pub(crate) fn pairs(&self) -> BTreeMap<(usize, usize), Origin> {
        let mut out = BTreeMap::new();
        for (i, entry) in self.entries.iter().enumerate() {
            for alt in &entry.alternatives {
                let j = self.position(alt.name.as_str()).expect("alternatives are entries");
                if i < j {
                    out.insert((i, j), alt.origin);
                }
            }
        }
        out
    }

    /// Pairings by name, each pair ordered `(smaller, larger)`.
    pub fn pair_names(&self) -> BTreeMap<(CleanName, CleanName), Origin> {
        self.pairs()
            .into_iter()
            .map(|((i, j), o)| ((self.entries[i].name.clone(), self.entries[j].name.clone()), o))
            .collect()
    }

    pub(crate) fn names_and_counts(&self) -> Vec<(CleanName, u64)> {
        self.entries.iter().map(|e| (e.name.clone(), e.count)).collect()
    }

    /// Standards that differ from the frequency choice of their group, i.e.
    /// ones that were set by hand.
    pub fn pinned_standards(&self) -> BTreeSet<CleanName> {
        self.groups
            .iter()
            .filter_map(|g| {
                let standard = &self.entries[g[0]].standard;
                let natural = select_standard(g.iter().map(|&i| (&self.entries[i].name, self.entries[i].count)))?;
                (standard != natural).then(|| standard.clone())
            })
            .collect()
    }

    pub fn summary(&self) -> Summary {
        let with_alts = self.entries.iter().filter(|e| !e.alternatives.is_empty()).count();
        let max_alts = self.entries.iter().map(|e| e.alternatives.len()).max().unwrap_or(0);
        let pairs = self.entries.iter().map(|e| e.alternatives.len()).sum::<usize>() / 2;
        Summary {
            names: self.entries.len(),
            names_with_alternatives: with_alts,
            components: self.groups.len(),
            max_alternatives: max_alts,
            pairs,
        }
    }

    /// Writes the TSV form.
    pub fn save<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{HEADER}")?;
        for e in &self.entries {
            write!(out, "{}\t{}\t{}\t", e.name, e.standard, e.count)?;
            for (k, alt) in e.alternatives.iter().enumerate() {
                if k > 0 {
                    out.write_all(b";")?;
                }
                write!(out, "{}:{}:{}", alt.name, alt.count, alt.origin.code())?;
            }
            out.write_all(b"\n")?;
        }
        out.flush()
    }

    pub fn save_to_path<P: AsRef<Path>>(&self, path: P) -> io::Result<()> {
        self.save(BufWriter::new(File::create(path)?))
    }

    pub fn to_tsv_string(&self) -> String {
        let mut buf = Vec::new();
        self.save(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("names are valid UTF-8")
    }

    /// Reads and validates the TSV form.
    pub fn load<R: BufRead>(input: R) -> Result<Dictionary, StoreError> {
        let mut rows: Vec<Row> = Vec::new();
        for (idx, line) in input.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let line = line.strip_suffix('\r').unwrap_or(&line);
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = parse_row(line).map_err(|message| StoreError::Parse { line: lineno, message })?;
            if let Some(prev) = rows.last() {
                if prev.name >= row.name {
                    return Err(StoreError::Parse {
                        line: lineno,
                        message: format!("row {} is out of order or duplicated", row.name),
                    });
                }
            }
            rows.push(Row { line: lineno, ..row });
        }
        validate_rows(rows)
    }

    pub fn load_from_path<P: AsRef<Path>>(path: P) -> Result<Dictionary, StoreError> {
        Dictionary::load(BufReader::new(File::open(path)?))
    }

    pub fn from_tsv_str(text: &str) -> Result<Dictionary, StoreError> {
        Dictionary::load(text.as_bytes())
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "names\t{}", self.names)?;
        writeln!(f, "names_with_alternatives\t{}", self.names_with_alternatives)?;
        writeln!(f, "components\t{}", self.components)?;
        writeln!(f, "max_alternatives\t{}", self.max_alternatives)?;
        write!(f, "pairs\t{}", self.pairs)
    }
}

struct Row {
    line: usize,
    name: CleanName,
    standard: CleanName,
    count: u64,
    alternatives: Vec<Alternative>,
}

fn parse_name(field: &str, what: &str) -> Result<CleanName, String> {
    CleanName::parse_exact(field).ok_or_else(|| format!("{what} {field:?} is not a clean name"))
}

fn parse_count(field: &str, what: &str) -> Result<u64, String> {
    match field.parse::<u64>() {
        Ok(c) if c >= 1 => Ok(c),
        _ => Err(format!("{what} {field:?} is not a positive integer")),
    }
}

fn parse_row(line: &str) -> Result<Row, String> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != 4 {
        return Err(format!("expected 4 tab-separated fields, found {}", fields.len()));
    }
    let name = parse_name(fields[0], "name")?;
    let standard = parse_name(fields[1], "standard")?;
    let count = parse_count(fields[2], "count")?;
    let mut alternatives = Vec::new();
    if !fields[3].is_empty() {
        for item in fields[3].split(';') {
            let parts: Vec<&str> = item.split(':').collect();
            if parts.len() != 3 {
                return Err(format!("alternative {item:?} is not name:count:origin"));
            }
            let origin = Origin::from_code(parts[2]).ok_or_else(|| format!("unknown origin {:?}", parts[2]))?;
            alternatives.push(Alternative {
                name: parse_name(parts[0], "alternative")?,
                count: parse_count(parts[1], "alternative count")?,
                origin,
            });
        }
    }
    Ok(Row { line: 0, name, standard, count, alternatives })
}

fn validate_rows(rows: Vec<Row>) -> Result<Dictionary, StoreError> {
    let violation = |line: usize, msg: String| StoreError::InvariantViolation(format!("line {line}: {msg}"));
    let index: BTreeMap<&CleanName, usize> = rows.iter().enumerate().map(|(i, r)| (&r.name, i)).collect();

    let mut pairs: BTreeMap<(usize, usize), Origin> = BTreeMap::new();
    let mut listed: BTreeMap<(usize, usize), Origin> = BTreeMap::new();
    for (i, row) in rows.iter().enumerate() {
        let mut seen = BTreeSet::new();
        for alt in &row.alternatives {
            let Some(&j) = index.get(&alt.name) else {
                return Err(violation(row.line, format!("alternative {} has no row", alt.name)));
            };
            if j == i {
                return Err(violation(row.line, format!("{} lists itself", row.name)));
            }
            if !seen.insert(j) {
                return Err(violation(row.line, format!("{} listed twice", alt.name)));
            }
            if alt.count != rows[j].count {
                return Err(violation(
                    row.line,
                    format!("count {} for {} disagrees with its row ({})", alt.count, alt.name, rows[j].count),
                ));
            }
            listed.insert((i, j), alt.origin);
            pairs.insert((i.min(j), i.max(j)), alt.origin);
        }
    }
    for (&(i, j), &origin) in &listed {
        match listed.get(&(j, i)) {
            Some(&back) if back == origin => {}
            Some(_) => {
                return Err(violation(
                    rows[i].line,
                    format!("{} and {} disagree on origin", rows[i].name, rows[j].name),
                ))
            }
            None => {
                return Err(violation(
                    rows[i].line,
                    format!("{} lists {} but not the reverse", rows[i].name, rows[j].name),
                ))
            }
        }
    }

    let names: Vec<(CleanName, u64)> = rows.iter().map(|r| (r.name.clone(), r.count)).collect();
    let unpinned = Dictionary::assemble(names.clone(), &pairs, &BTreeSet::new());
    let mut pinned = BTreeSet::new();
    for group in &unpinned.groups {
        let standard = &rows[group[0]].standard;
        for &m in group {
            if &rows[m].standard != standard {
                return Err(violation(
                    rows[m].line,
                    format!("standard {} differs from {} used elsewhere in its group", rows[m].standard, standard),
                ));
            }
        }
        let Some(&s) = index.get(standard) else {
            return Err(violation(rows[group[0]].line, format!("standard {standard} has no row")));
        };
        if unpinned.group_of[s] != unpinned.group_of[group[0]] {
            return Err(violation(
                rows[group[0]].line,
                format!("standard {standard} is outside the group of {}", rows[group[0]].name),
            ));
        }
        if standard != &unpinned.entries[group[0]].standard {
            pinned.insert(standard.clone());
        }
    }
    Ok(Dictionary::assemble(names, &pairs, &pinned))
}
