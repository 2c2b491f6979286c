//! Discrete sums that enter the bounds, evaluated exactly where they are
//! rational and with outward-rounded enclosures otherwise.

use std::collections::BTreeMap;

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Float, Rational};
use serde::Serialize;

use crate::error::{precondition, Result};
use crate::interval::Interval;
use crate::precision::{rational_string, serde_float, Precision};

/// Above this `M`, rational powers are replaced by float enclosures.
pub const EXACT_MAX_M: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `value <= bound`
    Le,
    /// `value >= bound`
    Ge,
}

/// One sum inequality. `margin` is `bound - value` for [`Relation::Le`] and
/// `value - bound` for [`Relation::Ge`], rounded toward zero-or-below so that
/// `pass` (margin >= 0) is rigorous.
#[derive(Debug, Clone, Serialize)]
pub struct SumCheck {
    pub id: String,
    pub params: BTreeMap<String, String>,
    pub relation: Relation,
    /// Exact value when the sum is rational and was evaluated exactly.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    #[serde(serialize_with = "serde_float::serialize")]
    pub value: Float,
    #[serde(serialize_with = "serde_float::serialize")]
    pub bound: Float,
    #[serde(serialize_with = "serde_float::serialize")]
    pub margin: Float,
    pub pass: bool,
}

fn params(pairs: &[(&str, u32)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

impl SumCheck {
    /// Check from enclosures of the value and the bound.
    fn from_intervals(id: &str, params: BTreeMap<String, String>, relation: Relation, value: &Interval, bound: &Interval, exact: Option<&Rational>) -> Self {
        let margin = match relation {
            Relation::Le => bound.sub(value),
            Relation::Ge => value.sub(bound),
        };
        let (v, b) = match relation {
            Relation::Le => (value.hi().clone(), bound.lo().clone()),
            Relation::Ge => (value.lo().clone(), bound.hi().clone()),
        };
        let m = margin.lo().clone();
        SumCheck {
            id: id.to_string(),
            params,
            relation,
            exact: exact.map(rational_string),
            value: v,
            bound: b,
            pass: m >= 0,
            margin: m,
        }
    }
}

fn require_m(op: &'static str, m: u32, min: u32) -> Result<()> {
    if m < min {
        return Err(precondition(op, format!("M must be at least {min}, got {m}")));
    }
    Ok(())
}

/// `R(M) = sum_{j=1}^{M-1} (j/M)^{4j}`, exact.
pub fn r_sum(m: u32) -> Result<Rational> {
    require_m("r_sum", m, 2)?;
    Ok((1..m)
        .map(|j| Rational::from((j, m)).pow(4 * j))
        .sum())
}

/// `R(M)` from `exp(4j log(j/M))` at working precision.
pub fn r_sum_float(m: u32, prec: Precision) -> Result<Float> {
    require_m("r_sum_float", m, 2)?;
    let mut acc = prec.zero();
    for j in 1..m {
        let l = prec.float(Rational::from((j, m))).ln() * (4 * j);
        acc += l.exp();
    }
    Ok(acc)
}

fn r_sum_interval(m: u32, prec: Precision) -> Interval {
    (1..m).fold(Interval::from_i64(0, prec), |acc, j| {
        acc.add(&Interval::from_rational(&Rational::from((j, m)), prec).pow_u(4 * j))
    })
}

/// `R(M) <= 1/16` for `M >= 2`, and additionally `R(M) <= 1/30` for `M >= 5`.
pub fn check_r_sum(m: u32, prec: Precision) -> Result<Vec<SumCheck>> {
    require_m("check_r_sum", m, 2)?;
    let (value, exact) = if m <= EXACT_MAX_M {
        let q = r_sum(m)?;
        (Interval::from_rational(&q, prec), Some(q))
    } else {
        (r_sum_interval(m, prec), None)
    };
    let mut out = vec![SumCheck::from_intervals(
        "r_sum_le_1_16",
        params(&[("M", m)]),
        Relation::Le,
        &value,
        &Interval::from_rational(&Rational::from((1, 16)), prec),
        exact.as_ref(),
    )];
    if m >= 5 {
        out.push(SumCheck::from_intervals(
            "r_sum_le_1_30",
            params(&[("M", m)]),
            Relation::Le,
            &value,
            &Interval::from_rational(&Rational::from((1, 30)), prec),
            exact.as_ref(),
        ));
    }
    Ok(out)
}

/// The two tail sums over `j = l+2..=M`: `sum ((l+1)/j)^{4j}` and
/// `sum (l(l+1)/j^2)^{2j}`, exact.
pub fn tail_sum(l: u32, m: u32) -> Result<(Rational, Rational)> {
    if l < 1 || l + 2 > m {
        return Err(precondition("tail_sum", format!("need 1 <= l <= M - 2, got l = {l}, M = {m}")));
    }
    let mut a = Rational::new();
    let mut b = Rational::new();
    for j in l + 2..=m {
        a += Rational::from((l + 1, j)).pow(4 * j);
        b += Rational::from((l as u64 * (l as u64 + 1), j as u64 * j as u64)).pow(2 * j);
    }
    Ok((a, b))
}

fn tail_intervals(l: u32, m: u32, prec: Precision) -> (Interval, Interval) {
    let mut a = Interval::from_i64(0, prec);
    let mut b = Interval::from_i64(0, prec);
    for j in l + 2..=m {
        a = a.add(&Interval::from_rational(&Rational::from((l + 1, j)), prec).pow_u(4 * j));
        let q = Rational::from((l as u64 * (l as u64 + 1), j as u64 * j as u64));
        b = b.add(&Interval::from_rational(&q, prec).pow_u(2 * j));
    }
    (a, b)
}

/// `1/(e^4 - 1)`.
fn tail_bound(prec: Precision) -> Interval {
    let e4 = Interval::from_i64(4, prec).exp();
    Interval::from_i64(1, prec).div(&e4.sub(&Interval::from_i64(1, prec)))
}

/// Both tail sums against `1/(e^4 - 1)`.
pub fn check_tail_sum(l: u32, m: u32, prec: Precision) -> Result<Vec<SumCheck>> {
    let bound = tail_bound(prec);
    let (a, b, ea, eb) = if m <= EXACT_MAX_M {
        let (a, b) = tail_sum(l, m)?;
        (Interval::from_rational(&a, prec), Interval::from_rational(&b, prec), Some(a), Some(b))
    } else {
        if l < 1 || l + 2 > m {
            return Err(precondition("tail_sum", format!("need 1 <= l <= M - 2, got l = {l}, M = {m}")));
        }
        let (a, b) = tail_intervals(l, m, prec);
        (a, b, None, None)
    };
    let ps = params(&[("l", l), ("M", m)]);
    Ok(vec![
        SumCheck::from_intervals("tail_sum", ps.clone(), Relation::Le, &a, &bound, ea.as_ref()),
        SumCheck::from_intervals("tail_sum_product_form", ps, Relation::Le, &b, &bound, eb.as_ref()),
    ])
}

fn weighted_interval(m: u32, prec: Precision) -> Interval {
    let one_minus_ln2 = Interval::from_i64(1, prec).sub(&Interval::ln2(prec));
    (1..m).fold(Interval::from_i64(0, prec), |acc, l| {
        let root = Interval::from_i64(l as i64, prec).root(3);
        let expo = one_minus_ln2.mul_rational(&Rational::from((4, l))).exp();
        acc.add(&root.mul(&expo))
    })
}

/// `sum_{l=1}^{M-1} l^{1/3} (e/2)^{4/l}` at working precision.
pub fn weighted_sum(m: u32, prec: Precision) -> Float {
    let p = prec.bits();
    let one_minus_ln2 = prec.float(1) - Float::with_val(p, rug::float::Constant::Log2);
    let mut acc = prec.zero();
    for l in 1..m.max(1) {
        let root = prec.float(l).cbrt();
        let e = Float::with_val(p, &one_minus_ln2 * 4u32) / l;
        acc += root * e.exp();
    }
    acc
}

/// `3/4 M^{4/3} + 12 (1 - log 2) M^{1/3} + 3`.
fn weighted_bound(m: u32, prec: Precision) -> Interval {
    let cube = Interval::from_i64(m as i64, prec).root(3);
    let one_minus_ln2 = Interval::from_i64(1, prec).sub(&Interval::ln2(prec));
    Interval::from_i64(m as i64, prec)
        .mul(&cube)
        .mul_rational(&Rational::from((3, 4)))
        .add(&one_minus_ln2.mul(&cube).mul_rational(&Rational::from(12)))
        .add(&Interval::from_i64(3, prec))
}

pub fn check_weighted_sum(m: u32, prec: Precision) -> Result<SumCheck> {
    require_m("check_weighted_sum", m, 1)?;
    Ok(SumCheck::from_intervals(
        "weighted_sum",
        params(&[("M", m)]),
        Relation::Le,
        &weighted_interval(m, prec),
        &weighted_bound(m, prec),
        None,
    ))
}

/// `(log((M+1)/(l+1)), sum_{j=l+1}^{M} 1/j, log(M/l))`.
pub fn harmonic_bounds(l: u32, m: u32, prec: Precision) -> Result<(Float, Rational, Float)> {
    if m < 2 || l < 1 || l >= m {
        return Err(precondition("harmonic_bounds", format!("need M >= 2 and 1 <= l <= M - 1, got l = {l}, M = {m}")));
    }
    let value: Rational = (l + 1..=m).map(|j| Rational::from((1, j))).sum();
    let lower = prec.float(Rational::from((m + 1, l + 1))).ln();
    let upper = prec.float(Rational::from((m, l))).ln();
    Ok((lower, value, upper))
}

pub fn check_harmonic(l: u32, m: u32, prec: Precision) -> Result<Vec<SumCheck>> {
    let (_, value, _) = harmonic_bounds(l, m, prec)?;
    let v = Interval::from_rational(&value, prec);
    let lower = Interval::from_rational(&Rational::from((m + 1, l + 1)), prec).ln();
    let upper = Interval::from_rational(&Rational::from((m, l)), prec).ln();
    let ps = params(&[("l", l), ("M", m)]);
    Ok(vec![
        SumCheck::from_intervals("harmonic_lower", ps.clone(), Relation::Ge, &v, &lower, Some(&value)),
        SumCheck::from_intervals("harmonic_upper", ps, Relation::Le, &v, &upper, Some(&value)),
    ])
}

/// Every sum check for parameters up to `max_m`, in a fixed order:
/// `R(M)` for `M = 2..=max_m`, tails for `1 <= l <= M-2`, the weighted sum
/// for `M = 1..=max_m`, harmonic bounds for `1 <= l < M`.
pub fn check_all(max_m: u32, prec: Precision) -> Result<Vec<SumCheck>> {
    let mut jobs: Vec<(u8, u32, u32)> = Vec::new();
    jobs.extend((2..=max_m).map(|m| (0, 0, m)));
    for m in 3..=max_m {
        jobs.extend((1..=m - 2).map(|l| (1, l, m)));
    }
    jobs.extend((1..=max_m).map(|m| (2, 0, m)));
    for m in 2..=max_m {
        jobs.extend((1..m).map(|l| (3, l, m)));
    }
    let parts: Vec<Result<Vec<SumCheck>>> = jobs
        .into_par_iter()
        .map(|(kind, l, m)| match kind {
            0 => check_r_sum(m, prec),
            1 => check_tail_sum(l, m, prec),
            2 => check_weighted_sum(m, prec).map(|c| vec![c]),
            _ => check_harmonic(l, m, prec),
        })
        .collect();
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}
