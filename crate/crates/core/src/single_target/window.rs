use crate::all_targets::{compute_table, Engine};
use crate::bounds::log3;
use crate::factorization::{factorize, isqrt, MAX_FACTOR_INPUT};
use crate::{Complexity, Error, Limits, Result, INFINITY};

use super::{SingleOptions, WindowConv, WindowMode, MAX_PREFIX, PAD};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindowPlan {
    pub n: u128,
    /// Prefix size: `f` and `f'` are tabulated on `1..=n0`.
    pub n0: u64,
    /// Windows exist for `1 <= d <= d_max`.
    pub d_max: u64,
    pub mode: WindowMode,
    ell: f64,
}

impl WindowPlan {
    pub fn new(n: u128, limits: &Limits, mode: WindowMode) -> Result<Self> {
        if n < 2 || n >= MAX_FACTOR_INPUT {
            return Err(Error::OutOfRange(format!("target must satisfy 2 <= n < 2^127, got {n}")));
        }
        let ell = limits.ell();
        let t = match mode {
            WindowMode::PerWindow => limits.t(),
            WindowMode::GlobalL => limits.t_global(),
        };
        let nf = n as f64;
        let by_t = nf.powf(t).ceil();
        let by_conv = (4.0 * nf.powf(ell)).ceil() + PAD as f64;
        let by_sqrt = isqrt(n) as f64 + 2.0;
        let n0 = by_t.max(by_conv).max(by_sqrt).max(100.0);
        if n0 > MAX_PREFIX as f64 {
            return Err(Error::MemoryBudget {
                needed: n0 as u128,
                budget: MAX_PREFIX as u128,
            });
        }
        let n0 = (n0 as u128).min(n) as u64;
        Ok(Self {
            n,
            n0,
            d_max: (n / n0 as u128) as u64,
            mode,
            ell,
        })
    }

    /// Addendum scale `x` for the window ending at `r`.
    fn scale(&self, r: u128) -> f64 {
        match self.mode {
            WindowMode::PerWindow => (r as f64).powf(self.ell),
            WindowMode::GlobalL => (self.n as f64).powf(self.ell),
        }
    }

    /// `(lo, guaranteed_from, conv_len)` for the window ending at `r`.
    pub fn geometry(&self, r: u128) -> (u128, u128, u64) {
        let x = self.scale(r);
        let conv_len = x.ceil() as u64 + PAD;
        let depth = (3.0 * x).floor() as u128 + PAD as u128;
        let guaranteed_from = r.saturating_sub(depth).max(1);
        let lo = r.saturating_sub(depth + conv_len as u128).max(1);
        (lo, guaranteed_from, conv_len)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WindowStats {
    pub windows: u64,
    pub cross_window_lookups: u64,
    /// Smallest `k - guaranteed_from` seen over all cross-window lookups.
    pub min_lookup_margin: Option<u128>,
    /// Window elements whose divisors came from `factorize` rather than
    /// walking multiples.
    pub factorized: u64,
    pub prefix_len: u64,
}

struct Window {
    r: u128,
    guaranteed_from: u128,
    /// `f` on `guaranteed_from..=r`
    f: Vec<Complexity>,
}

struct Prefix {
    f: Vec<Complexity>,
    fp: Vec<Complexity>,
}

fn build_prefix(n0: u64, limits: &Limits) -> Result<Prefix> {
    let table = compute_table(n0 as usize, limits, Engine::Capped)?;
    let mut f = Vec::with_capacity(n0 as usize + 1);
    f.push(0);
    f.extend_from_slice(table.values());
    let n0 = n0 as usize;
    let mut fp = vec![INFINITY; n0 + 1];
    fp[1] = 1;
    let mut j = 2;
    while j * j <= n0 {
        let fj = f[j];
        for k in j..=n0 / j {
            let v = j * k;
            fp[v] = fp[v].min(fj + f[k]);
        }
        j += 1;
    }
    Ok(Prefix { f, fp })
}

fn thresholds() -> Vec<f64> {
    (0..=255u32)
        .map(|k| 3f64.powf((k as f64 - 1.0) / 3.0) * (1.0 + 1e-9))
        .collect()
}

struct WindowRun<'a> {
    plan: &'a WindowPlan,
    prefix: Prefix,
    /// index d; entry 0 unused
    windows: Vec<Option<Window>>,
    stats: WindowStats,
    conv: WindowConv,
    thresholds: Vec<f64>,
}

/// `f(n)` by the window engine, with run statistics.
pub fn compute_single_with(
    n: u128,
    limits: &Limits,
    opts: SingleOptions,
) -> Result<(Complexity, WindowStats)> {
    let plan = WindowPlan::new(n, limits, opts.mode)?;
    let prefix = build_prefix(plan.n0, limits)?;
    let mut stats = WindowStats {
        prefix_len: plan.n0,
        ..Default::default()
    };
    if n <= plan.n0 as u128 {
        return Ok((prefix.f[n as usize], stats));
    }
    stats.prefix_len = plan.n0;
    let mut engine = WindowRun {
        plan: &plan,
        prefix,
        windows: (0..=plan.d_max).map(|_| None).collect(),
        stats,
        conv: opts.conv,
        thresholds: thresholds(),
    };
    for d in (1..=plan.d_max).rev() {
        let w = engine.build_window(d)?;
        engine.windows[d as usize] = Some(w);
        engine.stats.windows += 1;
    }
    let top = engine.windows[1].as_ref().expect("window for d = 1");
    let value = top.f[(n - top.guaranteed_from) as usize];
    Ok((value, engine.stats))
}

impl WindowRun<'_> {
    fn f_at(&mut self, d: u64, j: u128, k: u128) -> Result<Complexity> {
        if k <= self.plan.n0 as u128 {
            return Ok(self.prefix.f[k as usize]);
        }
        let dd = d as u128 * j;
        let r_outer = self.plan.n / d as u128;
        let r_inner = self.plan.n / dd;
        if r_inner != r_outer / j {
            return Err(Error::WindowInvariant(format!(
                "nested floor mismatch: n/(d j) = {r_inner}, (n/d)/j = {}",
                r_outer / j
            )));
        }
        let w = self
            .windows
            .get(dd as usize)
            .and_then(|w| w.as_ref())
            .ok_or_else(|| {
                Error::WindowInvariant(format!("window for d = {dd} (r = {r_inner}) not built"))
            })?;
        if k < w.guaranteed_from || k > w.r {
            return Err(Error::WindowInvariant(format!(
                "lookup of {k} outside guaranteed range [{}, {}] of window d = {dd}",
                w.guaranteed_from, w.r
            )));
        }
        let margin = k - w.guaranteed_from;
        self.stats.cross_window_lookups += 1;
        self.stats.min_lookup_margin = Some(self.stats.min_lookup_margin.map_or(margin, |m| m.min(margin)));
        Ok(w.f[(k - w.guaranteed_from) as usize])
    }

    fn build_window(&mut self, d: u64) -> Result<Window> {
        let n0 = self.plan.n0 as u128;
        let r = self.plan.n / d as u128;
        let (lo, guaranteed_from, conv_len) = self.plan.geometry(r);
        let len = (r - lo + 1) as usize;
        let mut fp = vec![INFINITY; len];

        // multiplicative values
        for v in lo..=r.min(n0) {
            fp[(v - lo) as usize] = self.prefix.fp[v as usize];
        }
        let first = lo.max(n0 + 1);
        if first <= r {
            let root = isqrt(r);
            if root <= 8 * len as u128 {
                let mut j = 2u128;
                while j <= root {
                    let fj = self.prefix.f[j as usize];
                    let mut k = first.div_ceil(j).max(j);
                    while j * k <= r {
                        let fk = self.f_at(d, j, k)?;
                        let slot = &mut fp[(j * k - lo) as usize];
                        *slot = (*slot).min(fj + fk);
                        k += 1;
                    }
                    j += 1;
                }
            } else {
                for v in first..=r {
                    self.stats.factorized += 1;
                    let mut best = INFINITY;
                    for j in factorize(v).divisors().into_iter().skip(1) {
                        if j * j > v {
                            break;
                        }
                        let fk = self.f_at(d, j, v / j)?;
                        best = best.min(self.prefix.f[j as usize] + fk);
                    }
                    fp[(v - lo) as usize] = best;
                }
            }
        }

        // additive values on the guaranteed range
        let mut f = Vec::with_capacity((r - guaranteed_from + 1) as usize);
        for v in guaranteed_from..=r {
            if v <= n0 {
                f.push(self.prefix.f[v as usize]);
                continue;
            }
            let mut cur = fp[(v - lo) as usize];
            let b_max = (conv_len as u128).min(v - lo);
            match self.conv {
                WindowConv::Brute => {
                    let base = (v - lo) as usize;
                    for b in 1..=b_max as usize {
                        cur = cur.min(self.prefix.f[b].saturating_add(fp[base - b]));
                    }
                }
                WindowConv::Pruned => {
                    let mut limit = self.threshold(cur, v);
                    let mut b = 1u128;
                    while b <= b_max {
                        if (b as f64) * ((v - b) as f64) > limit {
                            break;
                        }
                        let s = self.prefix.f[b as usize].saturating_add(fp[(v - b - lo) as usize]);
                        if s < cur {
                            cur = s;
                            limit = self.thresholds[cur as usize];
                        }
                        b += 1;
                    }
                }
            }
            if cur == INFINITY {
                return Err(Error::WindowInvariant(format!(
                    "no decomposition of {v} found inside window d = {d}"
                )));
            }
            f.push(cur);
        }
        Ok(Window {
            r,
            guaranteed_from,
            f,
        })
    }

    fn threshold(&self, cur: Complexity, v: u128) -> f64 {
        if cur == INFINITY {
            // f(v) <= 4.755 log_3 v for every v
            let ub = (4.755 * log3(v as f64)).floor() as usize + 1;
            self.thresholds[ub.min(255)]
        } else {
            self.thresholds[cur as usize]
        }
    }
}
