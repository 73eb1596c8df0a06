//! Synthetic corpora for tests and benchmarks.
//!
//! Real frequency-annotated name lists are not bundled. These generators
//! grow a corpus from seed names by sampling rule variants, optionally
//! mixed with random letter strings that share no rule with anything.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::builder::NameRecord;
use crate::rules::RuleTable;
use crate::textprep::CleanName;

/// Common first names, including the ones discussed alongside the rules.
pub const SEED_NAMES: &[&str] = &[
    "احمد", "محمد", "محمود", "علي", "حسين", "حسن", "رولا", "غادة", "سلطان", "قاسم",
    "يحيى", "رهام", "غيدا", "ضياء", "عزة", "خضرا", "تاله", "ذهب", "مذخر", "رائد",
    "ابراهيم", "عبد الله", "ضيف الله", "عطا الله", "بهاء الدين", "علاء", "اسماء", "ثريا", "بثينه", "جمانه",
    "اسامه", "بهجت", "داود", "زكريا", "بشير", "رزيق", "رميس", "رهيف", "صبيحه", "سحيم",
    "مارجريت", "اليزابيث", "تمارا", "اروى", "ايرين", "خالد", "عمر", "يوسف", "فاطمة", "مريم",
    "زينب", "سعاد", "نادية", "ليلى", "هدى", "سلمى", "منى", "عائشة", "خديجة", "سارة",
];

const LETTERS: &[char] = &[
    'ا', 'ب', 'ت', 'ث', 'ج', 'ح', 'خ', 'د', 'ذ', 'ر', 'ز', 'س', 'ش', 'ص', 'ض', 'ط', 'ظ', 'ع', 'غ',
    'ف', 'ق', 'ك', 'ل', 'م', 'ن', 'ه', 'و', 'ي', 'ى', 'ة', 'ء', 'أ', 'إ', 'ئ', 'ؤ',
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthConfig {
    /// Number of distinct names wanted.
    pub size: usize,
    /// Upper bound on variants sampled from each expanded name.
    pub variants_per_name: usize,
    /// Share of the corpus made of random letter strings.
    pub random_fraction: f64,
    pub max_count: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig { size: 200, variants_per_name: 6, random_fraction: 0.2, max_count: 5000 }
    }
}

pub fn seed_names() -> Vec<CleanName> {
    SEED_NAMES.iter().map(|s| CleanName::new(s).expect("seed names are clean")).collect()
}

/// A random string of 3 to 8 letters.
pub fn random_name<R: Rng + ?Sized>(rng: &mut R) -> CleanName {
    let len = rng.gen_range(3..=8);
    let text: String = (0..len).map(|_| *LETTERS.choose(rng).unwrap()).collect();
    CleanName::parse_exact(&text).expect("letters only")
}

/// Grows a corpus of `config.size` distinct names from `seeds`.
///
/// Names are expanded breadth-first; from each, up to
/// `variants_per_name` variants are sampled. Counts are drawn from a
/// heavy-tailed distribution so most groups have a clear standard form.
pub fn corpus<R: Rng + ?Sized>(
    table: &RuleTable,
    seeds: &[CleanName],
    config: SynthConfig,
    rng: &mut R,
) -> Vec<NameRecord> {
    let random_target = ((config.size as f64) * config.random_fraction).round() as usize;
    let variant_target = config.size.saturating_sub(random_target);
    let mut names: BTreeSet<CleanName> = BTreeSet::new();
    let mut frontier: Vec<CleanName> = seeds.to_vec();
    frontier.shuffle(rng);
    let mut cursor = 0;

    while names.len() < variant_target && cursor < frontier.len() {
        let current = frontier[cursor].clone();
        cursor += 1;
        if names.insert(current.clone()) && names.len() >= variant_target {
            break;
        }
        let mut variants = table.expand(&current);
        variants.shuffle(rng);
        for v in variants.into_iter().take(config.variants_per_name) {
            frontier.push(v);
        }
    }
    while names.len() < variant_target {
        names.insert(random_name(rng));
    }
    while names.len() < config.size {
        names.insert(random_name(rng));
    }

    names
        .into_iter()
        .map(|name| {
            let u: f64 = rng.gen_range(0.0..1.0);
            let count = ((config.max_count as f64).powf(u * u)).round().max(1.0) as u64;
            NameRecord { name, count }
        })
        .collect()
}
