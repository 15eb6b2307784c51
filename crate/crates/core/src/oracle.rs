//! Randomized self-check of the transform and feature kernels against the
//! direct-evaluation reference. Backs the `oracle-check` subcommand.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dct::{dct2d, dct2d_naive, masked, CoefficientBlock};
use crate::error::Result;
use crate::features::WeightTable;

pub const ORACLE_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_TRIALS: usize = 100;
pub const DEFAULT_SIZES: [(usize, usize); 5] = [(4, 4), (8, 8), (16, 16), (64, 64), (16, 8)];

/// Transform under test. The production path is [`dct2d`]; tests swap in
/// faulty implementations to make sure the harness notices.
pub type DctFn = fn(&[f64], usize, usize) -> Result<CoefficientBlock>;

#[derive(Debug, Clone, PartialEq)]
pub struct SizeReport {
    pub width: usize,
    pub height: usize,
    pub trials: usize,
    /// Max |fast - naive| over all coefficients.
    pub dct_max_abs: f64,
    /// Max |sum c^2 - sum p^2| / sum p^2.
    pub parseval_max_rel: f64,
    /// Max |TF(A, B) - SF(A - B)|.
    pub identity_max_abs: f64,
}

impl SizeReport {
    pub fn passed(&self) -> bool {
        self.dct_max_abs < ORACLE_TOLERANCE
            && self.parseval_max_rel < ORACLE_TOLERANCE
            && self.identity_max_abs < ORACLE_TOLERANCE
    }
}

impl fmt::Display for SizeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:>5}x{:<5} trials {:>4}  dct-vs-naive {:.3e}  parseval(rel) {:.3e}  tf-identity {:.3e}  {}",
            self.width,
            self.height,
            self.trials,
            self.dct_max_abs,
            self.parseval_max_rel,
            self.identity_max_abs,
            if self.passed() { "ok" } else { "FAIL" }
        )
    }
}

/// Random 8-bit block widened to reals.
pub fn random_block(rng: &mut impl Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| f64::from(rng.gen::<u8>())).collect()
}

/// Runs `trials` random checks per size with `dct` as the transform under
/// test.
pub fn run_oracle_checks(
    sizes: &[(usize, usize)],
    trials: usize,
    seed: u64,
    dct: DctFn,
) -> Result<Vec<SizeReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sizes
        .iter()
        .map(|&(w, h)| {
            let weights = WeightTable::new(w, h);
            let mut report = SizeReport {
                width: w,
                height: h,
                trials,
                dct_max_abs: 0.0,
                parseval_max_rel: 0.0,
                identity_max_abs: 0.0,
            };
            for _ in 0..trials {
                let a = random_block(&mut rng, w * h);
                let b = random_block(&mut rng, w * h);

                let fast = dct(&a, w, h)?;
                let slow = dct2d_naive(&a, w, h)?;
                report.dct_max_abs = report.dct_max_abs.max(fast.max_abs_diff(&slow));

                let energy: f64 = a.iter().map(|p| p * p).sum();
                if energy > 0.0 {
                    let rel = (fast.energy() - energy).abs() / energy;
                    report.parseval_max_rel = report.parseval_max_rel.max(rel);
                }

                let diff: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
                let tf = weights.temporal(&masked(&fast), &masked(&dct(&b, w, h)?))?;
                let sf_diff = weights.spatial(&masked(&dct(&diff, w, h)?))?;
                report.identity_max_abs = report.identity_max_abs.max((tf - sf_diff).abs());
            }
            Ok(report)
        })
        .collect()
}

/// [`run_oracle_checks`] against the production transform.
pub fn oracle_check(sizes: &[(usize, usize)], trials: usize, seed: u64) -> Result<Vec<SizeReport>> {
    run_oracle_checks(sizes, trials, seed, dct2d)
}
