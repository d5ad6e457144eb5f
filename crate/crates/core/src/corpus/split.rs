use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{ClaimRecord, VeracityLabel};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct DatasetSplit {
    pub train: Vec<ClaimRecord>,
    pub dev: Vec<ClaimRecord>,
    pub test: Vec<ClaimRecord>,
    pub seed: u64,
}

impl DatasetSplit {
    pub fn len(&self) -> usize {
        self.train.len() + self.dev.len() + self.test.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Apply `f` to every record of every part.
    pub fn map_records(&self, f: impl Fn(&ClaimRecord) -> ClaimRecord) -> DatasetSplit {
        DatasetSplit {
            train: self.train.iter().map(&f).collect(),
            dev: self.dev.iter().map(&f).collect(),
            test: self.test.iter().map(&f).collect(),
            seed: self.seed,
        }
    }
}

/// Largest-remainder apportionment of `n` items over `ratios`; every share
/// is within one item of its ideal `n * ratio`.
fn apportion(n: usize, ratios: [f64; 3]) -> [usize; 3] {
    let ideal = ratios.map(|r| r * n as f64);
    let mut counts = ideal.map(|x| x.floor() as usize);
    let mut remaining = n - counts.iter().sum::<usize>();
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| {
        let fa = ideal[a] - ideal[a].floor();
        let fb = ideal[b] - ideal[b].floor();
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    for &i in order.iter().cycle() {
        if remaining == 0 {
            break;
        }
        counts[i] += 1;
        remaining -= 1;
    }
    counts
}

/// Stratified, seeded train/dev/test split.
pub fn split(records: &[ClaimRecord], ratios: [f64; 3], seed: u64) -> Result<DatasetSplit> {
    let sum: f64 = ratios.iter().sum();
    if ratios.iter().any(|r| !(r.is_finite() && *r > 0.0)) || (sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidRatios(ratios));
    }
    if records.len() < VeracityLabel::COUNT {
        return Err(Error::TooFewRecords {
            needed: VeracityLabel::COUNT,
            got: records.len(),
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parts: [Vec<ClaimRecord>; 3] = Default::default();
    for label in VeracityLabel::ALL {
        let mut class: Vec<&ClaimRecord> = records.iter().filter(|r| r.label == label).collect();
        class.shuffle(&mut rng);
        let [n_train, n_dev, _] = apportion(class.len(), ratios);
        for (i, record) in class.into_iter().enumerate() {
            let part = if i < n_train {
                0
            } else if i < n_train + n_dev {
                1
            } else {
                2
            };
            parts[part].push(record.clone());
        }
    }
    for part in parts.iter_mut() {
        part.shuffle(&mut rng);
    }
    let [train, dev, test] = parts;
    Ok(DatasetSplit {
        train,
        dev,
        test,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use proptest::prelude::*;

    use super::*;
    use crate::corpus::{RawLabel, Source};

    fn balanced(n_per_class: usize) -> Vec<ClaimRecord> {
        let mut out = Vec::new();
        for (c, raw) in [RawLabel::False, RawLabel::Mixture, RawLabel::True]
            .into_iter()
            .enumerate()
        {
            for i in 0..n_per_class {
                out.push(
                    ClaimRecord::new(format!("r{c}-{i}"), "c", raw, vec![], Source::Synthetic)
                        .unwrap(),
                );
            }
        }
        out
    }

    fn count(part: &[ClaimRecord], label: VeracityLabel) -> usize {
        part.iter().filter(|r| r.label == label).count()
    }

    #[test]
    fn balanced_300_gives_exact_stratified_counts() {
        let records = balanced(100);
        let s = split(&records, [0.8, 0.1, 0.1], 7).unwrap();
        assert_eq!((s.train.len(), s.dev.len(), s.test.len()), (240, 30, 30));
        for label in VeracityLabel::ALL {
            assert_eq!(count(&s.train, label), 80);
            assert_eq!(count(&s.dev, label), 10);
            assert_eq!(count(&s.test, label), 10);
        }
    }

    #[test]
    fn split_is_deterministic() {
        let records = balanced(20);
        let a = split(&records, [0.6, 0.2, 0.2], 3).unwrap();
        let b = split(&records, [0.6, 0.2, 0.2], 3).unwrap();
        assert_eq!(a, b);
        let c = split(&records, [0.6, 0.2, 0.2], 4).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn preconditions() {
        let records = balanced(5);
        assert!(matches!(
            split(&records, [0.8, 0.05, 0.05], 1),
            Err(Error::InvalidRatios(_))
        ));
        assert!(split(&records, [1.0, 0.0, 0.0], 1).is_err());
        assert!(matches!(
            split(&records[..2], [0.8, 0.1, 0.1], 1),
            Err(Error::TooFewRecords { .. })
        ));
    }

    proptest! {
        #[test]
        fn partitions_are_disjoint_and_exhaustive(
            per_class in prop::array::uniform3(0usize..40),
            seed in any::<u64>(),
            a in 1u32..10, b in 1u32..10, c in 1u32..10,
        ) {
            let mut records = Vec::new();
            for (label_idx, n) in per_class.iter().enumerate() {
                let raw = VeracityLabel::ALL[label_idx].natural_raw();
                for i in 0..*n {
                    records.push(ClaimRecord::new(format!("{label_idx}-{i}"), "c", raw, vec![], Source::Synthetic).unwrap());
                }
            }
            prop_assume!(records.len() >= 3);
            let total = f64::from(a + b + c);
            let ratios = [f64::from(a) / total, f64::from(b) / total, f64::from(c) / total];
            let s = split(&records, ratios, seed).unwrap();
            let ids: Vec<&str> = s.train.iter().chain(&s.dev).chain(&s.test).map(|r| r.id.as_str()).collect();
            let unique: HashSet<&str> = ids.iter().copied().collect();
            prop_assert_eq!(ids.len(), records.len());
            prop_assert_eq!(unique.len(), records.len());
            for label in VeracityLabel::ALL {
                let n = records.iter().filter(|r| r.label == label).count() as f64;
                for (part, ratio) in [&s.train, &s.dev, &s.test].into_iter().zip(ratios) {
                    let got = count(part, label) as f64;
                    prop_assert!((got - n * ratio).abs() <= 1.0 + 1e-9);
                }
            }
        }
    }
}
