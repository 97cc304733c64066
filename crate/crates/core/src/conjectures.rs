//! Checks of conjectured closed forms and of power collapse.

use std::fmt::Write as _;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::single_target::Evaluator;
use crate::{Complexity, Error, Limits, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PowerRow {
    pub exponent: u32,
    pub power: u128,
    pub f_power: Complexity,
    /// `exponent * f(base)`
    pub bound: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CollapseStatus {
    Collapsed {
        exponent: u32,
        f_power: Complexity,
        bound: u32,
    },
    NoCollapseUpTo(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truncation {
    /// `base^i` would reach 2^127.
    Overflow,
    /// The runtime budget ran out.
    Budget,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapseReport {
    pub base: u128,
    pub f_base: Complexity,
    pub status: CollapseStatus,
    pub rows: Vec<PowerRow>,
    pub truncated: Option<Truncation>,
}

impl CollapseReport {
    /// `member,value_f,expected,status`, one row per evaluated power.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("member,value_f,expected,status\n");
        for row in &self.rows {
            let status = if (row.f_power as u32) < row.bound {
                "collapse"
            } else {
                "ok"
            };
            let _ = writeln!(s, "{},{},{},{}", row.power, row.f_power, row.bound, status);
        }
        if let Some(t) = self.truncated {
            let reason = match t {
                Truncation::Overflow => "truncated-overflow",
                Truncation::Budget => "truncated-budget",
            };
            let next = self.rows.last().map_or(1, |r| r.exponent + 1);
            let _ = writeln!(s, "{}^{},,,{}", self.base, next, reason);
        }
        s
    }
}

/// Finds the least `i <= i_max` with `f(base^i) < i f(base)`.
///
/// Builds an evaluator sized for `base^i_max` (or the largest power below
/// 2^127). `budget` bounds the whole run.
pub fn check_collapse(
    base: u128,
    i_max: u32,
    limits: &Limits,
    budget: Option<Duration>,
) -> Result<CollapseReport> {
    if base < 2 {
        return Err(Error::OutOfRange(format!("collapse base must be >= 2, got {base}")));
    }
    let deadline = budget.map(|b| Instant::now() + b);
    let mut top = base;
    for _ in 1..i_max {
        match top.checked_mul(base) {
            Some(p) if p < crate::factorization::MAX_FACTOR_INPUT => top = p,
            _ => break,
        }
    }
    let mut eval = Evaluator::for_target(top, limits)?;
    check_collapse_with(base, i_max, &mut eval, deadline)
}

pub fn check_collapse_with(
    base: u128,
    i_max: u32,
    eval: &mut Evaluator,
    deadline: Option<Instant>,
) -> Result<CollapseReport> {
    if base < 2 {
        return Err(Error::OutOfRange(format!("collapse base must be >= 2, got {base}")));
    }
    eval.set_deadline(deadline);
    let mut report = CollapseReport {
        base,
        f_base: 0,
        status: CollapseStatus::NoCollapseUpTo(0),
        rows: Vec::new(),
        truncated: None,
    };
    let f_base = match eval.f(base) {
        Ok(v) => v,
        Err(Error::BudgetExhausted) => {
            report.truncated = Some(Truncation::Budget);
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    report.f_base = f_base;
    let mut power = 1u128;
    let mut prev: Option<Complexity> = None;
    for i in 1..=i_max {
        power = match power.checked_mul(base) {
            Some(p) if p < crate::factorization::MAX_FACTOR_INPUT => p,
            _ => {
                report.truncated = Some(Truncation::Overflow);
                break;
            }
        };
        let fp = match eval.f(power) {
            Ok(v) => v,
            Err(Error::BudgetExhausted) => {
                report.truncated = Some(Truncation::Budget);
                break;
            }
            Err(e) => return Err(e),
        };
        if let Some(p) = prev {
            // base^i = base^(i-1) * base
            if fp as u32 > p as u32 + f_base as u32 {
                return Err(Error::WindowInvariant(format!(
                    "f({base}^{i}) = {fp} exceeds f({base}^{}) + f({base}) = {}",
                    i - 1,
                    p as u32 + f_base as u32
                )));
            }
        }
        prev = Some(fp);
        let bound = i * f_base as u32;
        report.rows.push(PowerRow {
            exponent: i,
            power,
            f_power: fp,
            bound,
        });
        if (fp as u32) < bound {
            report.status = CollapseStatus::Collapsed {
                exponent: i,
                f_power: fp,
                bound,
            };
            break;
        }
        report.status = CollapseStatus::NoCollapseUpTo(i);
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `f(2^i) = 2i`, `i >= 1`
    Pow2,
    /// `f(2^i 3^j 5^k) = 2i + 3j + 5k`, `k <= 5`, `i + j + k > 0`
    Pow235,
    /// `f(2^i + 1) = 2i + 1`, `i >= 1`, except `i = 3, 9`
    Pow2Plus1,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pow2" => Ok(Family::Pow2),
            "pow235" => Ok(Family::Pow235),
            "pow2plus1" => Ok(Family::Pow2Plus1),
            _ => Err(Error::OutOfRange(format!("unknown family {s:?}"))),
        }
    }
}

/// Members `<= limit` with their conjectured complexity, by increasing value.
pub fn family_members(family: Family, limit: u128) -> Vec<(u128, u32)> {
    let mut out = Vec::new();
    match family {
        Family::Pow2 => {
            let mut p = 2u128;
            let mut i = 1;
            while p <= limit {
                out.push((p, 2 * i));
                match p.checked_mul(2) {
                    Some(q) => p = q,
                    None => break,
                }
                i += 1;
            }
        }
        Family::Pow235 => {
            let mut p5 = 1u128;
            for k in 0..=5u32 {
                if p5 > limit {
                    break;
                }
                let mut p3 = p5;
                let mut j = 0u32;
                while p3 <= limit {
                    let mut p = p3;
                    let mut i = 0u32;
                    while p <= limit {
                        if i + j + k > 0 {
                            out.push((p, 2 * i + 3 * j + 5 * k));
                        }
                        match p.checked_mul(2) {
                            Some(q) => p = q,
                            None => break,
                        }
                        i += 1;
                    }
                    match p3.checked_mul(3) {
                        Some(q) => p3 = q,
                        None => break,
                    }
                    j += 1;
                }
                match p5.checked_mul(5) {
                    Some(q) => p5 = q,
                    None => break,
                }
            }
            out.sort_unstable();
        }
        Family::Pow2Plus1 => {
            for i in 1..127u32 {
                let m = (1u128 << i) + 1;
                if m > limit {
                    break;
                }
                if i != 3 && i != 9 {
                    out.push((m, 2 * i + 1));
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyRow {
    pub member: u128,
    pub value_f: Complexity,
    pub expected: u32,
}

impl FamilyRow {
    pub fn holds(&self) -> bool {
        self.value_f as u32 == self.expected
    }
}

/// Evaluates every member, in parallel, and returns all rows by member.
pub fn evaluate_family(family: Family, limit: u128, limits: &Limits) -> Result<Vec<FamilyRow>> {
    let members = family_members(family, limit);
    let top = members.last().map_or(2, |m| m.0);
    let prefix = Evaluator::for_target(top, limits)?.prefix().clone();
    evaluate_members(&members, prefix)
}

fn evaluate_members(
    members: &[(u128, u32)],
    prefix: Arc<crate::all_targets::ComplexityTable>,
) -> Result<Vec<FamilyRow>> {
    members
        .par_iter()
        .map_init(
            || Evaluator::with_prefix(prefix.clone()),
            |eval, &(member, expected)| {
                let value_f = eval.f(member)?;
                Ok(FamilyRow {
                    member,
                    value_f,
                    expected,
                })
            },
        )
        .collect()
}

/// Members whose complexity differs from the conjectured value.
pub fn check_family(family: Family, limit: u128, limits: &Limits) -> Result<Vec<FamilyRow>> {
    Ok(evaluate_family(family, limit, limits)?
        .into_iter()
        .filter(|r| !r.holds())
        .collect())
}

/// `member,value_f,expected,status` for the given rows.
pub fn family_csv(rows: &[FamilyRow]) -> String {
    let mut s = String::from("member,value_f,expected,status\n");
    for r in rows {
        let status = if r.holds() { "ok" } else { "violation" };
        let _ = writeln!(s, "{},{},{},{}", r.member, r.value_f, r.expected, status);
    }
    s
}
