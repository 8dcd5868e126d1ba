//! Deterministic stratified train/validation/test partitioning.
//!
//! The procedure, in full, so that it can be reproduced in any language:
//!
//! 1. Records are grouped into *units*: one unit per record, or one unit per
//!    `lesion_id` when grouping by lesion. Units are bucketed by class.
//! 2. Within a class, units are sorted by key (image id or lesion id), which
//!    makes the result independent of input row order.
//! 3. The sorted units are shuffled with a Fisher–Yates pass driven by
//!    [`SplitMix64`], seeded with `seed ^ mix64(class_index + 1)`. The pass
//!    walks `i` from `n - 1` down to `1` and swaps `i` with
//!    `rng.below(i + 1)`.
//! 4. The class's unit count `n` is apportioned with the largest-remainder
//!    method: each split first gets `floor(n * fraction)`; leftover seats go
//!    to the largest fractional parts, ties resolved TRAIN, then VAL, then
//!    TEST. Fractions are exact rationals, so `115 * 0.7 = 80.5` really is a
//!    tie at one half.
//! 5. The first block of shuffled units goes to TRAIN, the next to VAL, the
//!    rest to TEST.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_rational::Ratio;
use serde::Serialize;

use crate::dataset::{Manifest, ManifestRecord, Split};
use crate::error::{Error, Result};
use crate::taxonomy::{ClassId, ClassMap, NUM_CLASSES};

/// SplitMix64 (Steele, Lea & Flood 2014): a 64-bit state advanced by the
/// golden-ratio increment `0x9E3779B97F4A7C15`, with output passed through
/// [`mix64`].
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// The SplitMix64 output finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform integer in `0..bound` by rejection: draws at or above the
    /// largest multiple of `bound` that fits in 64 bits are discarded.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bound must be positive");
        let limit = u64::MAX - u64::MAX % bound;
        loop {
            let x = self.next_u64();
            if x < limit {
                return x % bound;
            }
        }
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}

pub type Fraction = Ratio<u64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitSpec {
    fractions: [Fraction; 3],
    pub seed: u64,
    pub group_by_lesion: bool,
}

impl SplitSpec {
    /// Fractions are in TRAIN, VAL, TEST order and must sum to exactly one.
    pub fn new(fractions: [Fraction; 3], seed: u64, group_by_lesion: bool) -> Result<Self> {
        let sum = fractions.iter().fold(Fraction::from_integer(0), |a, b| a + b);
        if sum != Fraction::from_integer(1) {
            return Err(Error::InvalidSplitSpec(format!(
                "fractions {}/{}/{} sum to {sum}, not 1",
                fractions[0], fractions[1], fractions[2]
            )));
        }
        Ok(SplitSpec {
            fractions,
            seed,
            group_by_lesion,
        })
    }

    /// 70/15/15 with the given seed.
    pub fn with_seed(seed: u64) -> Self {
        let f = |n, d| Fraction::new(n, d);
        SplitSpec::new([f(70, 100), f(15, 100), f(15, 100)], seed, false).expect("default fractions sum to one")
    }

    pub fn grouped(mut self, group_by_lesion: bool) -> Self {
        self.group_by_lesion = group_by_lesion;
        self
    }

    pub fn fractions(&self) -> &[Fraction; 3] {
        &self.fractions
    }

    /// Parses `"0.7,0.15,0.15"` (decimal or `a/b` terms).
    pub fn parse_fractions(s: &str) -> Result<[Fraction; 3]> {
        let parts: Vec<Fraction> = s.split(',').map(parse_fraction).collect::<Result<_>>()?;
        <[Fraction; 3]>::try_from(parts)
            .map_err(|p| Error::InvalidSplitSpec(format!("expected three fractions, got {}", p.len())))
    }
}

fn parse_fraction(term: &str) -> Result<Fraction> {
    let t = term.trim();
    let bad = || Error::InvalidSplitSpec(format!("cannot parse fraction `{t}`"));
    if let Some((n, d)) = t.split_once('/') {
        let n: u64 = n.trim().parse().map_err(|_| bad())?;
        let d: u64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Fraction::new(n, d));
    }
    let (int, frac) = t.split_once('.').unwrap_or((t, ""));
    if (int.is_empty() && frac.is_empty()) || frac.len() > 18 {
        return Err(bad());
    }
    let digits = |s: &str| s.is_empty() || s.bytes().all(|b| b.is_ascii_digit());
    if !digits(int) || !digits(frac) {
        return Err(bad());
    }
    let denom = 10u64.pow(frac.len() as u32);
    let int: u64 = if int.is_empty() {
        0
    } else {
        int.parse().map_err(|_| bad())?
    };
    let frac: u64 = if frac.is_empty() {
        0
    } else {
        frac.parse().map_err(|_| bad())?
    };
    let numer = int
        .checked_mul(denom)
        .and_then(|v| v.checked_add(frac))
        .ok_or_else(bad)?;
    Ok(Fraction::new(numer, denom))
}

/// Largest-remainder apportionment of `n` units over the three fractions.
pub fn apportion(n: usize, fractions: &[Fraction; 3]) -> [usize; 3] {
    let n = n as u64;
    let quotas = fractions.map(|f| f * n);
    let mut counts = quotas.map(|q| q.to_integer() as usize);
    let remainders = quotas.map(|q| q.fract());
    let assigned: usize = counts.iter().sum();
    let mut order = [0usize, 1, 2];
    // Stable sort keeps TRAIN < VAL < TEST among equal remainders.
    order.sort_by(|&a, &b| remainders[b].cmp(&remainders[a]));
    for &k in order.iter().take(n as usize - assigned) {
        counts[k] += 1;
    }
    counts
}

#[derive(Debug, Clone)]
pub struct SplitOutcome {
    pub manifest: Manifest,
    pub warnings: Vec<String>,
}

pub fn stratified_split(manifest: &Manifest, spec: &SplitSpec) -> Result<SplitOutcome> {
    let records = manifest.records();

    // unit key -> member record indices, bucketed by class.
    let mut by_class: [BTreeMap<&str, Vec<usize>>; NUM_CLASSES] = Default::default();
    let mut unit_class: HashMap<&str, ClassId> = HashMap::new();
    for (i, r) in records.iter().enumerate() {
        let key = if spec.group_by_lesion {
            r.lesion_id.as_deref().ok_or_else(|| {
                Error::Invalid(format!(
                    "record `{}` has no lesion_id; required when grouping by lesion",
                    r.image_id
                ))
            })?
        } else {
            r.image_id.as_str()
        };
        match unit_class.insert(key, r.label) {
            Some(prev) if prev != r.label => {
                return Err(Error::Invalid(format!(
                    "lesion `{key}` has images labelled both {prev} and {}",
                    r.label
                )));
            }
            _ => {}
        }
        by_class[r.label.index()].entry(key).or_default().push(i);
    }

    let nonzero = spec
        .fractions
        .iter()
        .filter(|f| **f > Fraction::from_integer(0))
        .count();
    let mut assignment: Vec<Option<Split>> = vec![None; records.len()];
    let mut warnings = Vec::new();
    for class in ClassId::ALL {
        let units = &by_class[class.index()];
        let n = units.len();
        if n > 0 && n < nonzero {
            let msg =
                format!("class {class} has only {n} unit(s) for {nonzero} non-empty splits; some splits get none");
            log::warn!("{msg}");
            warnings.push(msg);
        }
        let mut order: Vec<&Vec<usize>> = units.values().collect();
        let mut rng = SplitMix64::new(spec.seed ^ mix64(class.index() as u64 + 1));
        rng.shuffle(&mut order);

        let [n_train, n_val, _] = apportion(n, &spec.fractions);
        for (pos, members) in order.into_iter().enumerate() {
            let split = if pos < n_train {
                Split::Train
            } else if pos < n_train + n_val {
                Split::Val
            } else {
                Split::Test
            };
            for &i in members {
                assignment[i] = Some(split);
            }
        }
    }

    let out: Vec<ManifestRecord> = records
        .iter()
        .zip(assignment)
        .map(|(r, s)| ManifestRecord { split: s, ..r.clone() })
        .collect();
    Ok(SplitOutcome {
        manifest: Manifest::new(out)?,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitReport {
    /// Per-class counts for TRAIN, VAL, TEST.
    pub counts: [ClassMap<usize>; 3],
    pub totals: [usize; 3],
    pub fractions: [f64; 3],
    /// `None` when no record carries a lesion id.
    pub leakage: Option<bool>,
}

pub fn verify_split(manifest: &Manifest) -> Result<SplitReport> {
    let unassigned = manifest.iter().filter(|r| r.split.is_none()).count();
    if unassigned > 0 {
        return Err(Error::Unassigned(unassigned));
    }
    let mut counts = [ClassMap::<usize>::default(); 3];
    let mut totals = [0usize; 3];
    let mut lesion_splits: HashMap<&str, HashSet<Split>> = HashMap::new();
    for r in manifest {
        let s = r.split.expect("checked above");
        counts[s.index()][r.label] += 1;
        totals[s.index()] += 1;
        if let Some(l) = r.lesion_id.as_deref() {
            lesion_splits.entry(l).or_default().insert(s);
        }
    }
    let n = manifest.len().max(1) as f64;
    let leakage = (!lesion_splits.is_empty()).then(|| lesion_splits.values().any(|s| s.len() > 1));
    Ok(SplitReport {
        counts,
        totals,
        fractions: totals.map(|t| t as f64 / n),
        leakage,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Source;

    fn frac(s: &str) -> Fraction {
        parse_fraction(s).unwrap()
    }

    #[test]
    fn splitmix_reference_values() {
        // First outputs for seed 0 of the published SplitMix64 reference.
        let mut rng = SplitMix64::new(0);
        assert_eq!(rng.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(rng.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(rng.next_u64(), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn below_stays_in_range() {
        let mut rng = SplitMix64::new(42);
        for bound in 1..50u64 {
            for _ in 0..20 {
                assert!(rng.below(bound) < bound);
            }
        }
    }

    #[test]
    fn fraction_parsing() {
        assert_eq!(frac("0.7"), Fraction::new(7, 10));
        assert_eq!(frac(".15"), Fraction::new(3, 20));
        assert_eq!(frac("1"), Fraction::new(1, 1));
        assert_eq!(frac("2/3"), Fraction::new(2, 3));
        assert!(parse_fraction("x").is_err());
        assert!(parse_fraction("1/0").is_err());
        assert!(parse_fraction("-0.1").is_err());
        assert!(SplitSpec::parse_fractions("0.7,0.3").is_err());
    }

    #[test]
    fn spec_requires_exact_unit_sum() {
        let f = SplitSpec::parse_fractions("0.7,0.15,0.15").unwrap();
        assert!(SplitSpec::new(f, 1, false).is_ok());
        let f = SplitSpec::parse_fractions("0.7,0.15,0.16").unwrap();
        assert!(matches!(SplitSpec::new(f, 1, false), Err(Error::InvalidSplitSpec(_))));
    }

    #[test]
    fn dermatofibroma_apportionment() {
        // 115 * (0.70, 0.15, 0.15) = (80.5, 17.25, 17.25): floors 80/17/17, the
        // one leftover seat goes to the 0.5 remainder.
        let spec = SplitSpec::with_seed(0);
        assert_eq!(apportion(115, spec.fractions()), [81, 17, 17]);
    }

    #[test]
    fn apportion_tie_break_prefers_train_then_val() {
        let thirds = [Fraction::new(1, 3); 3];
        assert_eq!(apportion(1, &thirds), [1, 0, 0]);
        assert_eq!(apportion(2, &thirds), [1, 1, 0]);
        assert_eq!(apportion(0, &thirds), [0, 0, 0]);
    }

    fn toy_manifest(n_per_class: &[(ClassId, usize)]) -> Manifest {
        let mut recs = Vec::new();
        for &(c, n) in n_per_class {
            for i in 0..n {
                let id = format!("{}_{i:04}", c.code());
                recs.push(
                    ManifestRecord::new(id.clone(), format!("{id}.jpg"), Source::Ham10000, c).with_lesion(format!(
                        "L{}_{}",
                        c.code(),
                        i / 2
                    )),
                );
            }
        }
        Manifest::new(recs).unwrap()
    }

    #[test]
    fn empty_manifest_splits_to_empty() {
        let out = stratified_split(&Manifest::default(), &SplitSpec::with_seed(3)).unwrap();
        assert!(out.manifest.is_empty());
        assert!(out.warnings.is_empty());
    }

    #[test]
    fn split_counts_and_determinism() {
        let m = toy_manifest(&[(ClassId::Df, 115), (ClassId::Mel, 40)]);
        let spec = SplitSpec::with_seed(11);
        let a = stratified_split(&m, &spec).unwrap();
        let b = stratified_split(&m, &spec).unwrap();
        assert_eq!(a.manifest, b.manifest);
        let report = verify_split(&a.manifest).unwrap();
        assert_eq!(report.counts.map(|c| c[ClassId::Df]), [81, 17, 17]);
        assert_eq!(report.counts.map(|c| c[ClassId::Mel]), [28, 6, 6]);
        assert_eq!(report.totals.iter().sum::<usize>(), 155);
    }

    #[test]
    fn tiny_class_warns_but_succeeds() {
        let m = toy_manifest(&[(ClassId::Vasc, 2)]);
        let out = stratified_split(&m, &SplitSpec::with_seed(0)).unwrap();
        assert_eq!(out.warnings.len(), 1);
        assert!(out.manifest.iter().all(|r| r.split.is_some()));
    }

    #[test]
    fn grouped_split_has_no_leakage() {
        let m = toy_manifest(&[(ClassId::Nv, 60), (ClassId::Bkl, 31)]);
        let out = stratified_split(&m, &SplitSpec::with_seed(5).grouped(true)).unwrap();
        assert_eq!(verify_split(&out.manifest).unwrap().leakage, Some(false));
    }

    #[test]
    fn grouping_requires_lesion_ids() {
        let m = Manifest::new(vec![ManifestRecord::new("a", "a", Source::Ham10000, ClassId::Nv)]).unwrap();
        assert!(stratified_split(&m, &SplitSpec::with_seed(0).grouped(true)).is_err());
    }

    #[test]
    fn verify_flags_leakage_and_unassigned() {
        let mk = |id: &str, lesion: &str, split| {
            let mut r = ManifestRecord::new(id, id, Source::Ham10000, ClassId::Nv).with_lesion(lesion);
            r.split = split;
            r
        };
        let m = Manifest::new(vec![
            mk("a", "L1", Some(Split::Train)),
            mk("b", "L1", Some(Split::Test)),
            mk("c", "L2", Some(Split::Val)),
            mk("d", "L3", Some(Split::Train)),
        ])
        .unwrap();
        let report = verify_split(&m).unwrap();
        assert_eq!(report.leakage, Some(true));
        assert_eq!(report.totals, [2, 1, 1]);

        let m = Manifest::new(vec![mk("a", "L1", None)]).unwrap();
        assert!(matches!(verify_split(&m), Err(Error::Unassigned(1))));
    }
}
