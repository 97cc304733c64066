//! Dense tables `f(1..=N)`.
//!
//! `func(l, r)` finishes the left half, folds the left half into the right
//! half with a (min,+)-convolution against the prefix `f(1..=B)`, then
//! finishes the right half. A leaf `l` is final once every merge above it has
//! run, so the multiplicative update happens there.

use rayon::prelude::*;

use crate::bounds::{addendum_limit, upper_bound};
use crate::convolution::{minplus_packed, BoundedSeq, PACKED_CUTOFF};
use crate::factorization::{build_spf, divisor_sieve, DivisorLists, SpfSieve};
use crate::{Complexity, Error, Limits, Result, INFINITY, MAX_FINITE};

/// Largest `N` accepted by [`naive_oracle`].
pub const ORACLE_MAX: usize = 100_000;

/// Above this size the pull-style leaf update reads divisors off a
/// smallest-prime-factor sieve instead of stored divisor lists.
pub const DIVISOR_LIST_MAX: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Engine {
    /// Full (min,+)-convolution at every merge.
    Brute,
    /// Prefix cut to the addendum limit, with lower-bound pruning.
    Capped,
    /// Packed polynomial (min,+)-convolution for long merges.
    Packed,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Brute => "brute",
            Engine::Capped => "capped",
            Engine::Packed => "packed",
        }
    }
}

impl std::str::FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(Engine::Brute),
            "capped" => Ok(Engine::Capped),
            "packed" => Ok(Engine::Packed),
            _ => Err(Error::OutOfRange(format!("unknown engine {s:?}"))),
        }
    }
}

/// How a table entry was achieved. Ties go to multiplication, then to the
/// smallest operand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Choice {
    One,
    /// `n = i + (n - i)` with `i` the smaller addend.
    Add(u64),
    /// `n = j * (n / j)` with `j` the smaller factor.
    Mul(u64),
}

const MUL_FLAG: u32 = 1 << 31;

fn encode_choice(c: Choice) -> u32 {
    match c {
        Choice::One => 0,
        Choice::Add(i) => i as u32,
        Choice::Mul(j) => j as u32 | MUL_FLAG,
    }
}

fn decode_choice(x: u32) -> Choice {
    if x == 0 {
        Choice::One
    } else if x & MUL_FLAG != 0 {
        Choice::Mul((x & !MUL_FLAG) as u64)
    } else {
        Choice::Add(x as u64)
    }
}

#[derive(Clone, Debug)]
pub struct ComplexityTable {
    /// index 0 unused
    values: Vec<Complexity>,
    engine: Engine,
    choices: Option<Vec<u32>>,
}

impl ComplexityTable {
    pub(crate) fn from_raw(values: Vec<Complexity>, engine: Engine) -> Self {
        let mut v = Vec::with_capacity(values.len() + 1);
        v.push(0);
        v.extend_from_slice(&values);
        Self {
            values: v,
            engine,
            choices: None,
        }
    }

    pub fn n(&self) -> usize {
        self.values.len() - 1
    }

    /// `f(k)` for `1 <= k <= N`.
    #[inline]
    pub fn get(&self, k: usize) -> Complexity {
        assert!(k >= 1, "f is indexed from 1");
        self.values[k]
    }

    /// `f(1..=N)`; position `k - 1` holds `f(k)`.
    pub fn values(&self) -> &[Complexity] {
        &self.values[1..]
    }

    pub fn engine(&self) -> Engine {
        self.engine
    }

    pub fn has_choices(&self) -> bool {
        self.choices.is_some()
    }

    pub fn choice(&self, k: usize) -> Result<Choice> {
        let c = self.choices.as_ref().ok_or(Error::MissingChoices)?;
        if k == 0 || k > self.n() {
            return Err(Error::OutOfRange(format!("{k} outside table 1..={}", self.n())));
        }
        Ok(decode_choice(c[k]))
    }

    /// Derives and stores the achieving split of every entry.
    pub fn record_choices(&mut self) -> Result<()> {
        if self.choices.is_some() {
            return Ok(());
        }
        let n = self.n();
        let spf = build_spf(n)?;
        let f = &self.values;
        let mut choices = vec![0u32; n + 1];
        choices
            .par_iter_mut()
            .enumerate()
            .skip(2)
            .with_min_len(4096)
            .for_each_init(Vec::new, |divs, (v, out)| {
                *out = encode_choice(best_choice(f, v, &spf, divs));
            });
        self.choices = Some(choices);
        Ok(())
    }

    pub fn with_choices(mut self) -> Result<Self> {
        self.record_choices()?;
        Ok(self)
    }
}

fn best_choice(f: &[Complexity], v: usize, spf: &SpfSieve, divs: &mut Vec<usize>) -> Choice {
    let target = f[v];
    spf.divisors_into(v, divs);
    divs.sort_unstable();
    for &j in divs.iter().skip(1) {
        if j * j > v {
            break;
        }
        if f[j] as u16 + f[v / j] as u16 == target as u16 {
            return Choice::Mul(j as u64);
        }
    }
    for i in 1..=v / 2 {
        if f[i] as u16 + f[v - i] as u16 == target as u16 {
            return Choice::Add(i as u64);
        }
    }
    unreachable!("no split of {v} achieves the stored value {target}")
}

/// One merge step: window `f(l..=m)` against prefix `f(1..=prefix_len)`,
/// written into `f(m+1..=r)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MergeRecord {
    pub l: usize,
    pub m: usize,
    pub r: usize,
    pub prefix_len: usize,
}

enum Divisors {
    None,
    Lists(DivisorLists),
    Spf(SpfSieve),
}

struct Run<'a> {
    f: Vec<Complexity>,
    n: usize,
    engine: Engine,
    limits: &'a Limits,
    divisors: Divisors,
    scratch: Vec<usize>,
    trace: Option<Vec<MergeRecord>>,
    /// `thresholds[k] = 3^((k-1)/3)`, slightly inflated.
    thresholds: Vec<f64>,
}

/// Builds `f(1..=N)` with the chosen engine.
pub fn compute_table(n: usize, limits: &Limits, engine: Engine) -> Result<ComplexityTable> {
    Ok(run(n, limits, engine, false)?.0)
}

/// Like [`compute_table`], also returning every merge step in execution order.
pub fn compute_table_traced(
    n: usize,
    limits: &Limits,
    engine: Engine,
) -> Result<(ComplexityTable, Vec<MergeRecord>)> {
    let (t, trace) = run(n, limits, engine, true)?;
    Ok((t, trace.unwrap_or_default()))
}

fn run(
    n: usize,
    limits: &Limits,
    engine: Engine,
    trace: bool,
) -> Result<(ComplexityTable, Option<Vec<MergeRecord>>)> {
    if n == 0 {
        return Err(Error::OutOfRange("table size must be at least 1".into()));
    }
    if n >= 2 && 2 * upper_bound(n as u128, limits)? > MAX_FINITE as u16 {
        return Err(Error::ValueOverflow { max: MAX_FINITE });
    }
    let divisors = match engine {
        Engine::Capped => Divisors::None,
        _ if n <= DIVISOR_LIST_MAX => Divisors::Lists(divisor_sieve(n)?),
        _ => Divisors::Spf(build_spf(n)?),
    };
    let thresholds = (0..=255u32)
        .map(|k| 3f64.powf((k as f64 - 1.0) / 3.0) * (1.0 + 1e-9))
        .collect();
    let mut f = vec![INFINITY; n + 1];
    f[0] = 0;
    f[1] = 1;
    let mut state = Run {
        f,
        n,
        engine,
        limits,
        divisors,
        scratch: Vec::new(),
        trace: trace.then(Vec::new),
        thresholds,
    };
    state.func(1, n)?;
    let Run { f, trace, .. } = state;
    Ok((
        ComplexityTable {
            values: f,
            engine,
            choices: None,
        },
        trace,
    ))
}

impl Run<'_> {
    fn func(&mut self, l: usize, r: usize) -> Result<()> {
        if l == r {
            self.leaf(l);
            return Ok(());
        }
        let m = (l + r) / 2;
        self.func(l, m)?;
        let prefix_len = (r - l).min(m);
        self.merge(l, m, r, prefix_len)?;
        self.func(m + 1, r)
    }

    fn leaf(&mut self, l: usize) {
        let f = &mut self.f;
        match &self.divisors {
            Divisors::None => {
                // push f(l) * f(j) forward for every j <= l
                let fl = f[l];
                let top = l.min(self.n / l);
                for j in 2..=top {
                    let k = l * j;
                    f[k] = f[k].min(fl + f[j]);
                }
            }
            Divisors::Lists(lists) => {
                if l < 4 {
                    return;
                }
                let mut best = f[l];
                for &i in &lists.get(l)[1..] {
                    let i = i as usize;
                    if i * i > l {
                        break;
                    }
                    best = best.min(f[i] + f[l / i]);
                }
                f[l] = best;
            }
            Divisors::Spf(sieve) => {
                if l < 4 || sieve.is_prime(l) {
                    return;
                }
                sieve.divisors_into(l, &mut self.scratch);
                let mut best = f[l];
                for &i in &self.scratch[1..] {
                    if i * i <= l {
                        best = best.min(f[i] + f[l / i]);
                    }
                }
                f[l] = best;
            }
        }
    }

    fn merge(&mut self, l: usize, m: usize, r: usize, prefix_len: usize) -> Result<()> {
        let prefix_len = match self.engine {
            Engine::Capped => {
                prefix_len.min(addendum_limit(r as u128, self.limits) as usize)
            }
            _ => prefix_len,
        };
        if let Some(t) = self.trace.as_mut() {
            t.push(MergeRecord { l, m, r, prefix_len });
        }
        match self.engine {
            Engine::Brute => merge_dense(&mut self.f, l, m, r, prefix_len),
            Engine::Capped => self.merge_pruned(l, m, r, prefix_len),
            Engine::Packed => {
                if (m - l + 1).min(prefix_len) < PACKED_CUTOFF {
                    merge_dense(&mut self.f, l, m, r, prefix_len);
                } else {
                    merge_packed(&mut self.f, l, m, r, prefix_len)?;
                }
            }
        }
        Ok(())
    }

    /// Only pairs that can strictly improve the current value are tried:
    /// `f(a) + f(b) >= 3 log_3(a b)`, and `a b` grows with `b` while `b <= v/2`.
    fn merge_pruned(&mut self, l: usize, m: usize, r: usize, prefix_len: usize) {
        let f = &mut self.f;
        let v_max = r.min(m + prefix_len);
        for v in m + 1..=v_max {
            let mut cur = f[v];
            let mut limit = if cur == INFINITY {
                let ub = upper_bound(v as u128, self.limits).unwrap_or(MAX_FINITE as u16);
                self.thresholds[(ub as usize + 1).min(255)]
            } else {
                self.thresholds[cur as usize]
            };
            let b_hi = prefix_len.min(v - l);
            let mut b = v - m;
            while b <= b_hi {
                let a = v - b;
                if 2 * b <= v && (a as f64) * (b as f64) > limit {
                    break;
                }
                let s = f[a] + f[b];
                if s < cur {
                    cur = s;
                    limit = self.thresholds[cur as usize];
                }
                b += 1;
            }
            f[v] = cur;
        }
    }
}

fn merge_dense(f: &mut [Complexity], l: usize, m: usize, r: usize, prefix_len: usize) {
    let (left, right) = f.split_at_mut(m + 1);
    for a in l..=m {
        let fa = left[a];
        let lo = (m + 1 - a).max(1);
        let hi = prefix_len.min(r - a);
        if lo > hi {
            continue;
        }
        let out = &mut right[a + lo - (m + 1)..=a + hi - (m + 1)];
        let pre = &left[lo..=hi];
        for (o, &p) in out.iter_mut().zip(pre) {
            *o = (*o).min(fa.saturating_add(p));
        }
    }
}

fn merge_packed(
    f: &mut [Complexity],
    l: usize,
    m: usize,
    r: usize,
    prefix_len: usize,
) -> Result<()> {
    let window = BoundedSeq::new(f[l..=m].to_vec());
    let prefix = BoundedSeq::new(f[1..=prefix_len].to_vec());
    let c = minplus_packed(&window, &prefix)?;
    // c[k] combines indices l + i and 1 + j with i + j = k
    for v in m + 1..=r {
        let k = v - l - 1;
        if k >= c.len() {
            break;
        }
        f[v] = f[v].min(c.entries()[k]);
    }
    Ok(())
}

/// Quadratic evaluation of the defining recurrence. Ground truth for tests.
pub fn naive_oracle(n: usize) -> Result<ComplexityTable> {
    if n == 0 || n > ORACLE_MAX {
        return Err(Error::OutOfRange(format!(
            "naive oracle supports 1 <= N <= {ORACLE_MAX}, got {n}"
        )));
    }
    let mut f = vec![INFINITY; n + 1];
    f[0] = 0;
    f[1] = 1;
    for v in 2..=n {
        let half = v / 2;
        let add = f[1..=half]
            .iter()
            .zip(f[v - half..v].iter().rev())
            .map(|(&x, &y)| x + y)
            .min()
            .unwrap_or(INFINITY);
        let mut best = add;
        let mut j = 2;
        while j * j <= v {
            if v % j == 0 {
                best = best.min(f[j] + f[v / j]);
            }
            j += 1;
        }
        f[v] = best;
    }
    Ok(ComplexityTable {
        values: f,
        engine: Engine::Brute,
        choices: None,
    })
}
