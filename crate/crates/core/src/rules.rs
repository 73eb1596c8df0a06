//! Variant rules.
//!
//! Each rule is a symmetric predicate over a pair of names. Apart from the
//! definite-article rule, every rule only fires when the two names are one
//! edit apart, and it inspects that edit: which letters were swapped,
//! inserted or deleted, and where.
//!
//! "Final" rules compare the last letters of two names that are one edit
//! apart. That covers both a swap of the last letter (`رولا`/`رولى`) and a
//! letter appended after a stem (`يحي`/`يحيى`).

use std::fmt;
use std::str::FromStr;

use crate::editdist::{classify_chars, EditClass};
use crate::textprep::{CleanName, CleanError};

/// Identifier of one variant rule. Rules 5 and 6 are the two directions of
/// one symmetric pair and share an id; rules 8 and 13 are split by letter.
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R5_6,
    R7,
    R8a,
    R8b,
    R9,
    R10,
    R11,
    R12,
    R13a,
    R13b,
    R13c,
    R14,
    R15,
}

impl RuleId {
    pub const ALL: [RuleId; 17] = [
        RuleId::R1,
        RuleId::R2,
        RuleId::R3,
        RuleId::R4,
        RuleId::R5_6,
        RuleId::R7,
        RuleId::R8a,
        RuleId::R8b,
        RuleId::R9,
        RuleId::R10,
        RuleId::R11,
        RuleId::R12,
        RuleId::R13a,
        RuleId::R13b,
        RuleId::R13c,
        RuleId::R14,
        RuleId::R15,
    ];

    fn bit(self) -> u32 {
        1 << (self as u32)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RuleId::R1 => "R1",
            RuleId::R2 => "R2",
            RuleId::R3 => "R3",
            RuleId::R4 => "R4",
            RuleId::R5_6 => "R5_6",
            RuleId::R7 => "R7",
            RuleId::R8a => "R8a",
            RuleId::R8b => "R8b",
            RuleId::R9 => "R9",
            RuleId::R10 => "R10",
            RuleId::R11 => "R11",
            RuleId::R12 => "R12",
            RuleId::R13a => "R13a",
            RuleId::R13b => "R13b",
            RuleId::R13c => "R13c",
            RuleId::R14 => "R14",
            RuleId::R15 => "R15",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown rule id {0:?}")]
pub struct UnknownRuleId(pub String);

impl FromStr for RuleId {
    type Err = UnknownRuleId;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let wanted = s.trim();
        RuleId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(wanted))
            .or(match wanted {
                "R5" | "R6" | "r5" | "r6" | "R5&6" => Some(RuleId::R5_6),
                _ => None,
            })
            .ok_or_else(|| UnknownRuleId(s.to_owned()))
    }
}

/// A set of rule ids, ordered by id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct RuleSet(u32);

impl RuleSet {
    pub const EMPTY: RuleSet = RuleSet(0);

    pub fn only(id: RuleId) -> Self {
        RuleSet(id.bit())
    }

    pub fn insert(&mut self, id: RuleId) {
        self.0 |= id.bit();
    }

    pub fn remove(&mut self, id: RuleId) {
        self.0 &= !id.bit();
    }

    pub fn contains(&self, id: RuleId) -> bool {
        self.0 & id.bit() != 0
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: RuleSet) -> RuleSet {
        RuleSet(self.0 | other.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = RuleId> + '_ {
        RuleId::ALL.into_iter().filter(|id| self.contains(*id))
    }
}

impl FromIterator<RuleId> for RuleSet {
    fn from_iter<I: IntoIterator<Item = RuleId>>(iter: I) -> Self {
        let mut set = RuleSet::EMPTY;
        for id in iter {
            set.insert(id);
        }
        set
    }
}

impl<const N: usize> From<[RuleId; N]> for RuleSet {
    fn from(ids: [RuleId; N]) -> Self {
        ids.into_iter().collect()
    }
}

impl fmt::Display for RuleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for id in self.iter() {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            f.write_str(id.as_str())?;
        }
        Ok(())
    }
}

/// Where in the longer name an edit may sit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Site {
    Anywhere,
    /// 1-based position of the edited letter is at least this.
    FromPosition(usize),
    /// Compare last letters of two names one edit apart.
    Final,
}

/// One way a rule can be satisfied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pattern {
    /// The single edit swaps these two letters (either direction).
    Swap(char, char, Site),
    /// The single edit inserts or deletes this letter.
    Indel(char, Site),
    /// The longer name ends with `.0` followed by `.1` and the shorter ends
    /// with `.0`; the `.1` is the inserted letter.
    FinalIndelAfter(char, char),
    /// One name is this prefix followed by the other, verbatim.
    Prefix(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub id: RuleId,
    pub patterns: Vec<Pattern>,
    pub summary: &'static str,
}

impl Rule {
    fn new(id: RuleId, summary: &'static str, patterns: Vec<Pattern>) -> Self {
        Rule { id, patterns, summary }
    }
}

/// Which letter pair rule 4 uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum R4Variant {
    /// ج/ش, the pair the prose examples use.
    #[default]
    JeemSheen,
    /// ج/ث, the pair printed in the pseudocode.
    JeemTheh,
    Both,
}

impl FromStr for R4Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sheen" | "jeem-sheen" => Ok(R4Variant::JeemSheen),
            "theh" | "jeem-theh" => Ok(R4Variant::JeemTheh),
            "both" => Ok(R4Variant::Both),
            other => Err(format!("unknown R4 variant {other:?} (expected sheen, theh or both)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RuleOptions {
    pub disabled: RuleSet,
    pub r4: R4Variant,
}

pub const HAMZA: char = 'ء';
pub const ARTICLE: &str = "ال";

/// Hamza and the letters that carry it.
pub const HAMZA_FAMILY: [char; 6] = ['ء', 'أ', 'إ', 'آ', 'ؤ', 'ئ'];

/// The active rule table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleTable {
    rules: Vec<Rule>,
    letters: Vec<char>,
}

impl Default for RuleTable {
    fn default() -> Self {
        RuleTable::new(RuleOptions::default())
    }
}

fn full_table(r4: R4Variant) -> Vec<Rule> {
    use Pattern::*;
    use RuleId::*;
    use Site::*;

    let r4_patterns = match r4 {
        R4Variant::JeemSheen => vec![Swap('ج', 'ش', Anywhere)],
        R4Variant::JeemTheh => vec![Swap('ج', 'ث', Anywhere)],
        R4Variant::Both => vec![Swap('ج', 'ش', Anywhere), Swap('ج', 'ث', Anywhere)],
    };

    let mut r9: Vec<Pattern> = HAMZA_FAMILY.iter().map(|&c| Indel(c, Anywhere)).collect();
    r9.extend([
        Swap('ء', 'ي', Anywhere),
        Swap('ء', 'و', Anywhere),
        Swap('أ', 'ا', Anywhere),
        Swap('إ', 'ا', Anywhere),
        Swap('آ', 'ا', Anywhere),
        Swap('ؤ', 'و', Anywhere),
        Swap('ئ', 'ي', Anywhere),
        Swap('أ', 'و', Anywhere),
    ]);

    vec![
        Rule::new(R1, "seen/sad", vec![Swap('س', 'ص', Anywhere)]),
        Rule::new(R2, "final ya/alif maqsura", vec![Swap('ي', 'ى', Final)]),
        Rule::new(R3, "dad/zah", vec![Swap('ض', 'ظ', Anywhere)]),
        Rule::new(R4, "jeem accent variant", r4_patterns),
        Rule::new(R5_6, "final alif/ha", vec![Swap('ا', 'ه', Final)]),
        Rule::new(R7, "qaf/jeem", vec![Swap('ق', 'ج', Anywhere)]),
        Rule::new(R8a, "thal/dal", vec![Swap('ذ', 'د', Anywhere)]),
        Rule::new(R8b, "thal/dad", vec![Swap('ذ', 'ض', Anywhere)]),
        Rule::new(R9, "hamza dropped or moved to a carrier", r9),
        Rule::new(R10, "definite article prefix", vec![Prefix(ARTICLE)]),
        Rule::new(R11, "final ta marbuta/ta", vec![Swap('ة', 'ت', Final)]),
        Rule::new(R12, "final ta marbuta/ha", vec![Swap('ة', 'ه', Final)]),
        Rule::new(R13a, "long vowel alif", vec![Indel('ا', FromPosition(2))]),
        Rule::new(R13b, "long vowel waw", vec![Indel('و', FromPosition(2))]),
        Rule::new(R13c, "long vowel ya", vec![Indel('ي', FromPosition(2))]),
        Rule::new(R14, "final alif/alif-hamza", vec![FinalIndelAfter('ا', HAMZA)]),
        Rule::new(R15, "final alif/alif maqsura", vec![Swap('ا', 'ى', Final)]),
    ]
}

impl RuleTable {
    pub fn new(options: RuleOptions) -> Self {
        let rules: Vec<Rule> = full_table(options.r4)
            .into_iter()
            .filter(|r| !options.disabled.contains(r.id))
            .collect();
        let mut letters: Vec<char> = rules
            .iter()
            .flat_map(|r| r.patterns.iter())
            .flat_map(|p| match *p {
                Pattern::Swap(x, y, _) | Pattern::FinalIndelAfter(x, y) => vec![x, y],
                Pattern::Indel(x, _) => vec![x],
                Pattern::Prefix(_) => vec![],
            })
            .collect();
        letters.sort_unstable();
        letters.dedup();
        RuleTable { rules, letters }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn enabled(&self) -> RuleSet {
        self.rules.iter().map(|r| r.id).collect()
    }

    /// Every letter that any active rule swaps in or inserts.
    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    /// Rules satisfied by the pair. Empty means "not alternatives".
    pub fn match_rules(&self, a: &CleanName, b: &CleanName) -> RuleSet {
        if a == b {
            return RuleSet::EMPTY;
        }
        self.match_chars(&a.chars(), &b.chars())
    }

    /// Same as [`RuleTable::match_rules`] over pre-split characters.
    pub fn match_chars(&self, a: &[char], b: &[char]) -> RuleSet {
        let mut hits = RuleSet::EMPTY;
        match a.len().abs_diff(b.len()) {
            0 | 1 => {
                let edit = classify_chars(a, b);
                if !edit.is_single_edit() {
                    return hits;
                }
                let (last_a, last_b) = (a[a.len() - 1], b[b.len() - 1]);
                for rule in &self.rules {
                    if rule
                        .patterns
                        .iter()
                        .any(|p| pattern_fires(*p, &edit, last_a, last_b, a, b))
                    {
                        hits.insert(rule.id);
                    }
                }
            }
            2 => {
                for rule in &self.rules {
                    for p in &rule.patterns {
                        if let Pattern::Prefix(prefix) = *p {
                            if has_prefix_of(a, b, prefix) || has_prefix_of(b, a, prefix) {
                                hits.insert(rule.id);
                            }
                        }
                    }
                }
            }
            _ => {}
        }
        hits
    }

    /// All names `v != name` for which `match_rules(name, v)` is nonempty.
    ///
    /// Candidates are every single edit that uses a rule letter, every
    /// deletion, and the article prefix added or removed; each is then
    /// checked with [`RuleTable::match_rules`]. Output is sorted.
    pub fn expand(&self, name: &CleanName) -> Vec<CleanName> {
        let base = name.chars();
        let mut candidates: Vec<Vec<char>> = Vec::new();
        for i in 0..base.len() {
            for &c in &self.letters {
                if c != base[i] {
                    let mut v = base.clone();
                    v[i] = c;
                    candidates.push(v);
                }
            }
            let mut v = base.clone();
            v.remove(i);
            candidates.push(v);
        }
        for i in 0..=base.len() {
            for &c in &self.letters {
                let mut v = base.clone();
                v.insert(i, c);
                candidates.push(v);
            }
        }
        for rule in &self.rules {
            for p in &rule.patterns {
                if let Pattern::Prefix(prefix) = *p {
                    let prefix: Vec<char> = prefix.chars().collect();
                    let mut v = prefix.clone();
                    v.extend_from_slice(&base);
                    candidates.push(v);
                    if base.starts_with(&prefix) {
                        candidates.push(base[prefix.len()..].to_vec());
                    }
                }
            }
        }

        let mut out: Vec<CleanName> = candidates
            .into_iter()
            .filter(|v| !self.match_chars(&base, v).is_empty())
            .filter_map(|v| CleanName::parse_exact(&v.into_iter().collect::<String>()))
            .filter(|v| v != name)
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// One line per active rule: id, edit kind, letters, position constraint.
    pub fn describe(&self) -> Vec<String> {
        self.rules.iter().map(describe_rule).collect()
    }
}

fn describe_rule(rule: &Rule) -> String {
    let mut kinds: Vec<&str> = Vec::new();
    let mut letters: Vec<String> = Vec::new();
    let mut sites: Vec<String> = Vec::new();
    for p in &rule.patterns {
        let (kind, text, site) = match *p {
            Pattern::Swap(x, y, site) => ("substitution", format!("{x}/{y}"), site_label(site)),
            Pattern::Indel(x, site) => ("insert-delete", format!("{x}"), site_label(site)),
            Pattern::FinalIndelAfter(x, y) => ("insert-delete", format!("{x}{y}/{x}"), "final".into()),
            Pattern::Prefix(prefix) => ("prefix", format!("{prefix}+"), "initial".into()),
        };
        if !kinds.contains(&kind) {
            kinds.push(kind);
        }
        letters.push(text);
        if !sites.contains(&site) {
            sites.push(site);
        }
    }
    format!(
        "{}\t{}\t{}\t{}\t{}",
        rule.id,
        kinds.join("+"),
        letters.join(" "),
        sites.join(","),
        rule.summary
    )
}

fn site_label(site: Site) -> String {
    match site {
        Site::Anywhere => "any".into(),
        Site::FromPosition(p) => format!(">={p}"),
        Site::Final => "final".into(),
    }
}

fn has_prefix_of(longer: &[char], shorter: &[char], prefix: &str) -> bool {
    let mut rest = longer;
    for p in prefix.chars() {
        match rest.split_first() {
            Some((&c, tail)) if c == p => rest = tail,
            _ => return false,
        }
    }
    rest == shorter
}

fn pattern_fires(p: Pattern, edit: &EditClass, last_a: char, last_b: char, a: &[char], b: &[char]) -> bool {
    match (p, *edit) {
        (Pattern::Swap(x, y, Site::Final), _) => {
            (last_a == x && last_b == y) || (last_a == y && last_b == x)
        }
        (Pattern::Swap(x, y, site), EditClass::Substitution { position, from, to }) => {
            ((from == x && to == y) || (from == y && to == x)) && site_allows(site, position)
        }
        (Pattern::Indel(x, site), EditClass::InsertDel { position, ch, longer }) => {
            let len = match longer {
                crate::editdist::Side::A => a.len(),
                crate::editdist::Side::B => b.len(),
            };
            ch == x
                && match site {
                    Site::Final => position == len,
                    other => site_allows(other, position),
                }
        }
        (Pattern::FinalIndelAfter(stem, tail), EditClass::InsertDel { position, ch, longer }) => {
            let long = match longer {
                crate::editdist::Side::A => a,
                crate::editdist::Side::B => b,
            };
            ch == tail && position == long.len() && long.len() >= 2 && long[long.len() - 2] == stem
        }
        _ => false,
    }
}

fn site_allows(site: Site, position: usize) -> bool {
    match site {
        Site::Anywhere | Site::Final => true,
        Site::FromPosition(min) => position >= min,
    }
}

/// [`RuleTable::match_rules`] with the default table.
pub fn match_rules(a: &CleanName, b: &CleanName) -> RuleSet {
    default_table().match_rules(a, b)
}

/// [`RuleTable::expand`] with the default table.
pub fn expand(name: &CleanName) -> Vec<CleanName> {
    default_table().expand(name)
}

pub fn default_table() -> &'static RuleTable {
    static TABLE: std::sync::OnceLock<RuleTable> = std::sync::OnceLock::new();
    TABLE.get_or_init(RuleTable::default)
}

/// Pair evidence as reported by [`evaluate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleMatch {
    pub a: CleanName,
    pub b: CleanName,
    pub rules: RuleSet,
    pub distance: usize,
}

/// Matches a pair of raw strings after cleaning, reporting distance too.
pub fn evaluate(table: &RuleTable, a: &str, b: &str) -> Result<RuleMatch, CleanError> {
    let a = CleanName::new(a)?;
    let b = CleanName::new(b)?;
    let rules = table.match_rules(&a, &b);
    let distance = crate::editdist::levenshtein(&a, &b);
    Ok(RuleMatch { a, b, rules, distance })
}
