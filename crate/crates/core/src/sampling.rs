//! Mean of `f(i) / log_3 i` over `2..=n`, exactly or by uniform sampling.

use std::io::Write;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::all_targets::{compute_table, ComplexityTable, Engine};
use crate::bounds::log3;
use crate::single_target::Evaluator;
use crate::{Error, Limits, Result};

/// Largest `n` accepted by [`exact_avg`].
pub const EXACT_MAX: u128 = 100_000_000;

/// Samples up to this value are read from one shared table.
pub const SHARED_TABLE_MAX: usize = 1 << 24;

pub const DEFAULT_LEVEL: f64 = 0.99999;

/// Per-thread evaluators drop their memo past this many entries.
const MEMO_LIMIT: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SampleMode {
    Exact,
    Sampled,
}

impl SampleMode {
    pub fn name(self) -> &'static str {
        match self {
            SampleMode::Exact => "exact",
            SampleMode::Sampled => "sampled",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleStats {
    pub n: u128,
    /// Number of terms averaged; `n - 1` in exact mode.
    pub samples: u64,
    pub mean: f64,
    /// Population variance in exact mode, sample variance otherwise.
    pub variance: f64,
    pub level: f64,
    /// Zero in exact mode.
    pub ci_halfwidth: f64,
    pub seed: u64,
    pub mode: SampleMode,
}

impl SampleStats {
    pub fn std_error(&self) -> f64 {
        match self.mode {
            SampleMode::Exact => 0.0,
            SampleMode::Sampled => (self.variance / self.samples as f64).sqrt(),
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{:.6},{:.6},{},{},{}",
            self.n,
            self.mean,
            self.ci_halfwidth,
            self.samples,
            self.mode.name(),
            self.seed
        )
    }
}

pub const CSV_HEADER: &str = "n,mean,ci_halfwidth,samples,mode,seed";

#[inline]
fn f_log(f: u8, i: u128) -> f64 {
    f as f64 / log3(i as f64)
}

/// Two-sided normal quantile for `level`.
pub fn z_score(level: f64) -> f64 {
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    normal.inverse_cdf(1.0 - (1.0 - level) / 2.0)
}

/// Exact mean over `2..=n` from a full table.
pub fn exact_avg(n: u128, limits: &Limits) -> Result<SampleStats> {
    if !(3..=EXACT_MAX).contains(&n) {
        return Err(Error::OutOfRange(format!(
            "exact average needs 3 <= n <= {EXACT_MAX}, got {n}"
        )));
    }
    let table = compute_table(n as usize, limits, Engine::Capped)?;
    Ok(exact_from_table(&table, n))
}

/// Exact mean over `2..=n` using an existing table with `table.n() >= n`.
pub fn exact_from_table(table: &ComplexityTable, n: u128) -> SampleStats {
    assert!(n >= 3 && n <= table.n() as u128);
    let mut sum = 0.0;
    let mut sq = 0.0;
    for i in 2..=n as usize {
        let x = f_log(table.get(i), i as u128);
        sum += x;
        sq += x * x;
    }
    let count = (n - 1) as f64;
    let mean = sum / count;
    SampleStats {
        n,
        samples: (n - 1) as u64,
        mean,
        variance: (sq / count - mean * mean).max(0.0),
        level: 1.0,
        ci_halfwidth: 0.0,
        seed: 0,
        mode: SampleMode::Exact,
    }
}

/// The `index`-th draw for `seed`, uniform on `2..=n`.
pub fn draw(n: u128, seed: u64, index: u64) -> u128 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng.gen_range(2..=n)
}

/// Mean of `m` uniform draws from `2..=n` with a `level` confidence interval.
///
/// Draw `k` comes from its own ChaCha8 stream, so the result does not depend
/// on the thread count.
pub fn estimate_avg(n: u128, m: u64, seed: u64, limits: &Limits) -> Result<SampleStats> {
    estimate_avg_at(n, m, seed, DEFAULT_LEVEL, limits)
}

pub fn estimate_avg_at(
    n: u128,
    m: u64,
    seed: u64,
    level: f64,
    limits: &Limits,
) -> Result<SampleStats> {
    if n < 3 || m < 2 {
        return Err(Error::OutOfRange(format!("sampling needs n >= 3 and m >= 2, got n = {n}, m = {m}")));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::OutOfRange(format!("confidence level {level} not in (0, 1)")));
    }
    let shared = (n.min(SHARED_TABLE_MAX as u128)) as usize;
    let table = Arc::new(compute_table(shared, limits, Engine::Capped)?);
    let values = sample_values(n, m, seed, table)?;
    let count = m as f64;
    let mut sum = 0.0;
    for &x in &values {
        sum += x;
    }
    let mean = sum / count;
    let mut ss = 0.0;
    for &x in &values {
        ss += (x - mean) * (x - mean);
    }
    let variance = ss / (count - 1.0);
    Ok(SampleStats {
        n,
        samples: m,
        mean,
        variance,
        level,
        ci_halfwidth: z_score(level) * (variance / count).sqrt(),
        seed,
        mode: SampleMode::Sampled,
    })
}

/// `f(i) / log_3 i` for every draw, in draw order.
pub fn sample_values(
    n: u128,
    m: u64,
    seed: u64,
    table: Arc<ComplexityTable>,
) -> Result<Vec<f64>> {
    let in_table = table.n() as u128;
    (0..m)
        .into_par_iter()
        .map_init(
            || Evaluator::with_prefix(table.clone()),
            |eval, k| {
                let i = draw(n, seed, k);
                let f = if i <= in_table {
                    table.get(i as usize)
                } else {
                    if eval.stats().memo_entries > MEMO_LIMIT {
                        eval.clear_memo();
                    }
                    eval.f(i)?
                };
                Ok(f_log(f, i))
            },
        )
        .collect()
}

/// One row of [`emit_table`]: `samples = None` asks for the exact mean.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RowRequest {
    pub n: u128,
    pub samples: Option<u64>,
}

/// Writes the header and one CSV row per request.
pub fn emit_table<W: Write>(
    rows: &[RowRequest],
    seed: u64,
    limits: &Limits,
    mut out: W,
) -> Result<Vec<SampleStats>> {
    let io = |e: std::io::Error| Error::Io {
        path: "<output>".into(),
        source: e,
    };
    writeln!(out, "{CSV_HEADER}").map_err(io)?;
    let mut all = Vec::with_capacity(rows.len());
    for row in rows {
        let stats = match row.samples {
            None => exact_avg(row.n, limits)?,
            Some(m) => estimate_avg(row.n, m, seed, limits)?,
        };
        writeln!(out, "{}", stats.csv_row()).map_err(io)?;
        all.push(stats);
    }
    out.flush().map_err(io)?;
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_exact_means() {
        let l = Limits::default();
        assert!((exact_avg(3, &l).unwrap().mean - 3.0850).abs() < 5e-5);
        assert!((exact_avg(9, &l).unwrap().mean - 3.1720).abs() < 5e-5);
        assert!((exact_avg(10, &l).unwrap().mean - 3.1906).abs() < 5e-5);
        assert!(exact_avg(2, &l).is_err());
        assert!(exact_avg(EXACT_MAX + 1, &l).is_err());
    }

    #[test]
    fn draws_cover_range() {
        let mut seen = [false; 9];
        for k in 0..500 {
            let i = draw(10, 7, k);
            assert!((2..=10).contains(&i));
            seen[i as usize - 2] = true;
        }
        assert!(seen.iter().all(|&s| s));
        assert_eq!(draw(1 << 100, 3, 17), draw(1 << 100, 3, 17));
        assert_ne!(draw(1 << 100, 3, 17), draw(1 << 100, 3, 18));
    }

    #[test]
    fn z_matches_known_quantiles() {
        assert!((z_score(0.95) - 1.959964).abs() < 1e-5);
        assert!((z_score(0.99999) - 4.417173).abs() < 1e-5);
    }

    #[test]
    fn rejects_bad_inputs() {
        let l = Limits::default();
        assert!(estimate_avg(2, 10, 0, &l).is_err());
        assert!(estimate_avg(10, 1, 0, &l).is_err());
        assert!(estimate_avg_at(10, 10, 0, 1.0, &l).is_err());
    }
}
