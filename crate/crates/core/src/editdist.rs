//! Levenshtein distance over Unicode scalar values, a bounded variant used
//! as the gate in front of rule checks, and single-edit classification.
//!
//! Positions reported by [`EditClass`] are 1-based.

use crate::textprep::CleanName;

/// Which of the two compared strings is the longer one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

/// How two strings differ when they are at most one edit apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EditClass {
    Identical,
    /// Equal lengths, one differing position. `from` is the letter in `a`,
    /// `to` the letter in `b`.
    Substitution { position: usize, from: char, to: char },
    /// Lengths differ by one. Deleting `ch` at `position` of the longer
    /// string yields the shorter. When `ch` sits in a run of equal letters
    /// the position of the last letter of the run is reported.
    InsertDel { position: usize, ch: char, longer: Side },
    /// Distance two or more.
    Other,
}

impl EditClass {
    pub fn is_single_edit(&self) -> bool {
        matches!(self, EditClass::Substitution { .. } | EditClass::InsertDel { .. })
    }
}

/// Edit distance between two character slices.
pub fn levenshtein_chars(a: &[char], b: &[char]) -> usize {
    let (a, b) = if a.len() < b.len() { (b, a) } else { (a, b) };
    if b.is_empty() {
        return a.len();
    }
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, &ca) in a.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let above = row[j + 1];
            let cost = usize::from(ca != cb);
            row[j + 1] = (diag + cost).min(above + 1).min(row[j] + 1);
            diag = above;
        }
    }
    row[b.len()]
}

pub fn levenshtein(a: &CleanName, b: &CleanName) -> usize {
    if a == b {
        return 0;
    }
    levenshtein_chars(&a.chars(), &b.chars())
}

/// `levenshtein_chars(a, b) <= max`, computed inside a diagonal band of
/// width `2 * max + 1` with early exit once every cell in a row exceeds `max`.
pub fn within_chars(a: &[char], b: &[char], max: usize) -> bool {
    let (n, m) = (a.len(), b.len());
    if n.abs_diff(m) > max {
        return false;
    }
    if max == 0 {
        return a == b;
    }
    let inf = max + 1;
    // row[j] holds D(i, j); cells outside the band are treated as > max.
    let mut prev = vec![inf; m + 1];
    let mut cur = vec![inf; m + 1];
    for (j, cell) in prev.iter_mut().enumerate().take(max.min(m) + 1) {
        *cell = j;
    }
    for i in 1..=n {
        let lo = i.saturating_sub(max).max(1);
        let hi = (i + max).min(m);
        cur.fill(inf);
        if i <= max {
            cur[0] = i;
        }
        let mut row_min = cur[0];
        for j in lo..=hi {
            let cost = usize::from(a[i - 1] != b[j - 1]);
            let v = (prev[j - 1] + cost).min(prev[j] + 1).min(cur[j - 1] + 1).min(inf);
            cur[j] = v;
            row_min = row_min.min(v);
        }
        if row_min > max {
            return false;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[m] <= max
}

pub fn within(a: &CleanName, b: &CleanName, max: usize) -> bool {
    within_chars(&a.chars(), &b.chars(), max)
}

/// Classifies the difference between two character slices.
pub fn classify_chars(a: &[char], b: &[char]) -> EditClass {
    if a == b {
        return EditClass::Identical;
    }
    if a.len() == b.len() {
        let mut diff = a.iter().zip(b).enumerate().filter(|(_, (x, y))| x != y);
        let (i, (&from, &to)) = diff.next().expect("unequal slices of equal length");
        if diff.next().is_some() {
            return EditClass::Other;
        }
        return EditClass::Substitution { position: i + 1, from, to };
    }
    let (longer, shorter, side) = if a.len() > b.len() { (a, b, Side::A) } else { (b, a, Side::B) };
    if longer.len() != shorter.len() + 1 {
        return EditClass::Other;
    }
    let i = longer
        .iter()
        .zip(shorter)
        .position(|(x, y)| x != y)
        .unwrap_or(shorter.len());
    if longer[i + 1..] != shorter[i..] {
        return EditClass::Other;
    }
    EditClass::InsertDel { position: i + 1, ch: longer[i], longer: side }
}

pub fn classify_single_edit(a: &CleanName, b: &CleanName) -> EditClass {
    classify_chars(&a.chars(), &b.chars())
}
