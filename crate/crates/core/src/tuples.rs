//! Scans over mixed-radix digit tuples, exhaustive under a budget and
//! seeded-random above it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::Config;

/// Outcome of a scan: the witness of the first failing tuple in scan or
/// sample order, the number of tuples examined, and whether every tuple was
/// examined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanOutcome {
    pub failure: Option<String>,
    pub tuples: u64,
    pub exhaustive: bool,
}

/// Runs `check` over every tuple with digit `i` in `0..radix[i]`, except the
/// all-zero tuple.
///
/// The space is scanned in full when it has at most `config.tuple_budget`
/// members or when `config.exhaustive` is set; otherwise `config.samples`
/// tuples are drawn with a generator seeded by `config.seed` and `salt`.
pub(crate) fn scan<F>(radix: &[u64], config: &Config, salt: u64, check: F) -> ScanOutcome
where
    F: Fn(&[u64]) -> Option<String> + Sync,
{
    let total = radix
        .iter()
        .try_fold(1u64, |acc, &r| acc.checked_mul(r))
        .map(|t| t - 1);
    let exhaustive = config.exhaustive || total.is_some_and(|t| t <= config.tuple_budget);
    if exhaustive {
        let Some(total) = total else {
            return ScanOutcome {
                failure: Some("tuple-space-overflows-u64".into()),
                tuples: 0,
                exhaustive: true,
            };
        };
        let decode = |mut code: u64| -> Vec<u64> {
            radix
                .iter()
                .map(|&r| {
                    let d = code % r;
                    code /= r;
                    d
                })
                .collect()
        };
        let failure = (1..=total)
            .into_par_iter()
            .filter_map(|code| check(&decode(code)).map(|w| (code, w)))
            .min_by_key(|(code, _)| *code)
            .map(|(_, w)| w);
        return ScanOutcome {
            failure,
            tuples: total,
            exhaustive: true,
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut samples: Vec<Vec<u64>> = Vec::with_capacity(config.samples);
    while samples.len() < config.samples {
        let digits: Vec<u64> = radix.iter().map(|&r| rng.gen_range(0..r)).collect();
        if digits.iter().any(|&d| d > 0) {
            samples.push(digits);
        }
    }
    let failure = samples
        .par_iter()
        .enumerate()
        .filter_map(|(k, d)| check(d).map(|w| (k, w)))
        .min_by_key(|(k, _)| *k)
        .map(|(_, w)| w);
    ScanOutcome {
        failure,
        tuples: samples.len() as u64,
        exhaustive: false,
    }
}
