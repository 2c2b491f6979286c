//! Closed-form expected log-distances to parallels and bands, the sums
//! `S_N` and `T(l)`, products of distances to the point set, and the
//! logarithmic energy.

use rayon::prelude::*;
use rug::{Float, Rational};
use serde::Serialize;

use crate::condition::{parallel_self_product_log, theta_product, theta_vanishes};
use crate::error::{precondition, Error, Result};
use crate::points::{build_parallels, check_height, ParallelSpec, PointSet, SpherePoint};
use crate::precision::{serde_float, Precision};

/// `1/2 - log 2`.
pub fn kappa(prec: Precision) -> Float {
    prec.kappa()
}

/// Mean of `log|p - q|` over `p` uniform on the parallel at height `t`, for
/// `q` at height `c`:
/// `(log(1+t) + log(1-c))/2` when `t >= c`, `(log(1-t) + log(1+c))/2` otherwise.
/// A vanishing argument gives `-inf`.
pub fn expected_log_parallel(t: &Float, c: &Float) -> Result<Float> {
    check_height("expected_log_parallel", t)?;
    check_height("expected_log_parallel", c)?;
    let p = t.prec().max(c.prec());
    let (a, b) = if t >= c {
        (Float::with_val(p, 1 + t), Float::with_val(p, 1 - c))
    } else {
        (Float::with_val(p, 1 - t), Float::with_val(p, 1 + c))
    };
    Ok((a.ln() + b.ln()) / 2u32)
}

/// A band `[h - eps, h + eps]` of heights and an evaluation height `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandGeometry {
    pub h: Rational,
    pub eps: Rational,
    pub c: Rational,
}

impl BandGeometry {
    pub fn new(h: Rational, eps: Rational, c: Rational) -> Result<Self> {
        let lo = Rational::from(&h - &eps);
        let hi = Rational::from(&h + &eps);
        if eps <= 0 || lo < -1 || hi > 1 {
            return Err(precondition("BandGeometry", "need eps > 0 and [h-eps, h+eps] inside [-1, 1]"));
        }
        if !(-1..=1).contains(&c) {
            return Err(precondition("BandGeometry", "evaluation height outside [-1, 1]"));
        }
        Ok(BandGeometry { h, eps, c })
    }

    pub fn lower(&self) -> Rational {
        Rational::from(&self.h - &self.eps)
    }

    pub fn upper(&self) -> Rational {
        Rational::from(&self.h + &self.eps)
    }

    /// `c >= h + eps`.
    pub fn above(&self) -> bool {
        self.c >= self.upper()
    }

    /// `c <= h - eps`.
    pub fn below(&self) -> bool {
        self.c <= self.lower()
    }
}

/// `u log u - u`, continuous at 0.
fn g(u: &Float) -> Float {
    let p = u.prec();
    if u.is_zero() {
        return Float::new(p);
    }
    Float::with_val(p, u * Float::with_val(p, u.ln_ref())) - u
}

/// `I_B(q) = 1/2 int_{h-eps}^{h+eps} Itilde(t, c) dt`, from the
/// antiderivatives of `log(1 +- t)` with the interval split at `t = c`.
pub fn band_integral(b: &BandGeometry, prec: Precision) -> Float {
    let p = prec.bits();
    let lo = prec.float(b.lower());
    let hi = prec.float(b.upper());
    let c = prec.float(&b.c);
    let split = if b.c <= b.lower() {
        lo.clone()
    } else if b.c >= b.upper() {
        hi.clone()
    } else {
        c.clone()
    };
    let one = prec.float(1);
    let mut total = prec.zero();
    // t in [lo, split]: Itilde = (log(1-t) + log(1+c)) / 2
    let len_low = Float::with_val(p, &split - &lo);
    if !len_low.is_zero() {
        let part = g(&Float::with_val(p, &one - &lo)) - g(&Float::with_val(p, &one - &split))
            + len_low * Float::with_val(p, &one + &c).ln();
        total += part;
    }
    // t in [split, hi]: Itilde = (log(1+t) + log(1-c)) / 2
    let len_high = Float::with_val(p, &hi - &split);
    if !len_high.is_zero() {
        let part = g(&Float::with_val(p, &one + &hi)) - g(&Float::with_val(p, &one + &split))
            + len_high * Float::with_val(p, &one - &c).ln();
        total += part;
    }
    total / 4u32
}

/// `(D, bound - D)` for `D = Itilde(h, c) - I_B/eps - eps^2/(12 (1 -+ h)^2)`
/// and `bound = (5/6 - log 2)/2 * eps^4 / (1 -+ h)^4`; the upper sign is used
/// when `c` lies above the band.
pub fn comparison_outside_margin(b: &BandGeometry, prec: Precision) -> Result<(Float, Float)> {
    let above = b.above();
    if !above && !b.below() {
        return Err(precondition("comparison_outside_margin", "evaluation height lies inside the band"));
    }
    let p = prec.bits();
    let side = if above { Rational::from(1 - &b.h) } else { Rational::from(1 + &b.h) };
    let ratio_sq = Rational::from(b.eps.square_ref()) / Rational::from(side.square_ref());
    let itilde = expected_log_parallel(&prec.float(&b.h), &prec.float(&b.c))?;
    let mean = band_integral(b, prec) / prec.float(&b.eps);
    let d = itilde - mean - prec.float(Rational::from(&ratio_sq / 12u32));
    let coeff = (prec.float(Rational::from((5, 6))) - Float::with_val(p, rug::float::Constant::Log2)) / 2u32;
    let bound = coeff * prec.float(Rational::from(ratio_sq.square_ref()));
    let upper = Float::with_val(p, &bound - &d);
    Ok((d, upper))
}

/// Margins for `-eps/(4(1-h^2)) <= Itilde(h, c) - I_B/eps <= (1 - log 2) eps^2 / (2 (1 -+ h)^2)`,
/// the upper sign when `c >= h`.
pub fn comparison_inside_margin(b: &BandGeometry, prec: Precision) -> Result<(Float, Float)> {
    if b.c < b.lower() || b.c > b.upper() {
        return Err(precondition("comparison_inside_margin", "evaluation height lies outside the band"));
    }
    let p = prec.bits();
    let one_minus_h_sq = 1 - Rational::from(b.h.square_ref());
    if one_minus_h_sq == 0 {
        return Err(precondition("comparison_inside_margin", "band centred at a pole"));
    }
    let side = if b.c >= b.h { Rational::from(1 - &b.h) } else { Rational::from(1 + &b.h) };
    let itilde = expected_log_parallel(&prec.float(&b.h), &prec.float(&b.c))?;
    let mean = band_integral(b, prec) / prec.float(&b.eps);
    let diff = itilde - mean;
    let lower_bound = -prec.float(&b.eps / Rational::from(&one_minus_h_sq * 4u32));
    let one_minus_ln2 = prec.float(1) - Float::with_val(p, rug::float::Constant::Log2);
    let upper_bound = one_minus_ln2
        * prec.float(Rational::from(b.eps.square_ref()) / (Rational::from(side.square_ref()) * 2u32));
    let lower = Float::with_val(p, &diff - &lower_bound);
    let upper = Float::with_val(p, &upper_bound - &diff);
    Ok((lower, upper))
}

/// `S_N(c) = sum_j r_j Itilde(h_j, c)`.
pub fn s_n(c: &Float, parallels: &[ParallelSpec]) -> Result<Float> {
    let p = c.prec();
    let mut sum = Float::new(p);
    for spec in parallels {
        let t = Float::with_val(p, &spec.h);
        sum += expected_log_parallel(&t, c)? * spec.r;
    }
    Ok(sum)
}

/// `T(l) = sum_{j<l} r_j^3 / (12 N^2 (1+h_j)^2) + sum_{j>l} r_j^3 / (12 N^2 (1-h_j)^2)`.
pub fn t_ell(l: usize, m: u32) -> Result<Rational> {
    let parallels = build_parallels(m)?;
    if l == 0 || l > m as usize {
        return Err(Error::IndexOutOfRange { index: l, len: m as usize });
    }
    let n = Rational::from(4 * m as u64 * m as u64);
    let denom_common = Rational::from(n.square_ref()) * 12u32;
    let mut total = Rational::new();
    for spec in &parallels {
        if spec.j == l {
            continue;
        }
        let side = if spec.j < l {
            Rational::from(1 + &spec.h)
        } else {
            Rational::from(1 - &spec.h)
        };
        let r3 = Rational::from(spec.r as u64 * spec.r as u64 * spec.r as u64);
        total += r3 / (&denom_common * Rational::from(side.square_ref()));
    }
    Ok(total)
}

/// `sum_k log|q - p_k|` through one closed-form product per parallel; `-inf`
/// when `q` coincides with a point.
pub fn log_product_to_set(q: &SpherePoint, parallels: &[ParallelSpec]) -> Float {
    let p = q.prec();
    let c = q.height().clone();
    let alpha = q.azimuth();
    let mut prod = Float::with_val(p, 1);
    for spec in parallels {
        let h = Float::with_val(p, &spec.h);
        let dphi = Float::with_val(p, &alpha - spec.phase);
        let theta = theta_product(spec.r, &h, &c, &dphi);
        if theta_vanishes(&theta, spec.r, &h, &c) {
            return Float::with_val(p, rug::float::Special::NegInfinity);
        }
        prod *= theta;
    }
    if prod.is_zero() {
        return Float::with_val(p, rug::float::Special::NegInfinity);
    }
    prod.ln() / 2u32
}

/// Brute-force `sum_k log|q - p_k|`.
pub fn log_product_to_set_pairwise(q: &SpherePoint, set: &PointSet) -> Float {
    let p = q.prec();
    let mut prod = Float::with_val(p, 1);
    for (_, pt) in set.iter() {
        prod *= q.distance_sq(pt);
    }
    if prod.is_zero() {
        return Float::with_val(p, rug::float::Special::NegInfinity);
    }
    prod.ln() / 2u32
}

#[derive(Debug, Clone, Serialize)]
pub struct EnergyReport {
    #[serde(rename = "M")]
    pub m: u32,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "E", serialize_with = "serde_float::serialize")]
    pub energy: Float,
    #[serde(rename = "kappaN2", serialize_with = "serde_float::serialize")]
    pub kappa_n2: Float,
    #[serde(rename = "halfNlogN", serialize_with = "serde_float::serialize")]
    pub half_n_log_n: Float,
    #[serde(serialize_with = "serde_float::serialize")]
    pub residual: Float,
}

impl EnergyReport {
    pub fn new(m: u32, n: usize, energy: Float) -> Self {
        let p = energy.prec();
        let nf = Float::with_val(p, n);
        let kappa_n2 = Precision::new(p).expect("precision").kappa() * Float::with_val(p, nf.square_ref());
        let half_n_log_n = Float::with_val(p, nf.ln_ref()) * &nf / 2u32;
        let residual = Float::with_val(p, &energy - &kappa_n2) + &half_n_log_n;
        let residual = residual / nf;
        EnergyReport {
            m,
            n,
            energy,
            kappa_n2,
            half_n_log_n,
            residual,
        }
    }
}

/// `E = sum_{i != j} log 1/|p_i - p_j|` over ordered pairs, as minus the sum
/// of the per-point log products, each from one closed form per parallel.
pub fn log_energy(set: &PointSet) -> Result<EnergyReport> {
    let parallels = set.parallels();
    let p = set.precision().bits();
    let cells: Vec<(usize, u32)> = parallels
        .iter()
        .enumerate()
        .flat_map(|(l, s)| (0..s.r).map(move |k| (l, k)))
        .collect();
    let logs: Vec<Result<Float>> = cells
        .into_par_iter()
        .map(|(l, k)| {
            let q = &set.points()[l][k as usize];
            let c = q.height().clone();
            let alpha = q.azimuth();
            let mut log = parallel_self_product_log(parallels[l].r, &c)?;
            let mut prod = Float::with_val(p, 1);
            for (j, spec) in parallels.iter().enumerate() {
                if j == l {
                    continue;
                }
                let dphi = Float::with_val(p, &alpha - spec.phase);
                prod *= theta_product(spec.r, &Float::with_val(p, &spec.h), &c, &dphi);
            }
            if prod.is_zero() {
                return Err(Error::MultipleRoot(l));
            }
            log += prod.ln() / 2u32;
            Ok(log)
        })
        .collect();
    let mut energy = Float::new(p);
    for v in logs {
        match v {
            Ok(v) => energy -= v,
            Err(_) => {
                energy = Float::with_val(p, rug::float::Special::Infinity);
                break;
            }
        }
    }
    Ok(EnergyReport::new(set.m(), set.n(), energy))
}

/// Pairwise `E`; coincident points give `+inf`.
pub fn log_energy_pairwise(points: &[SpherePoint]) -> Float {
    let p = points.first().map_or(64, |q| q.prec());
    let logs: Vec<Float> = (0..points.len())
        .into_par_iter()
        .map(|i| {
            let mut prod = Float::with_val(p, 1);
            for (j, q) in points.iter().enumerate() {
                if j != i {
                    prod *= points[i].distance_sq(q);
                }
            }
            if prod.is_zero() {
                Float::with_val(p, rug::float::Special::NegInfinity)
            } else {
                prod.ln() / 2u32
            }
        })
        .collect();
    let mut energy = Float::new(p);
    for v in logs {
        energy -= v;
    }
    energy
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::points::build_point_set;

    fn prec() -> Precision {
        Precision::default()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn kappa_value() {
        assert!((kappa(prec()).to_f64() + 0.193_147_180_559_945_3).abs() < 1e-15);
    }

    #[test]
    fn expected_log_examples() {
        let z = prec().zero();
        assert!(expected_log_parallel(&z, &z).unwrap().is_zero());
        let one = prec().float(1);
        let v = expected_log_parallel(&z, &one).unwrap();
        assert!((v.to_f64() - 0.5 * 2f64.ln()).abs() < 1e-15);
        let half = prec().float(0.5);
        assert!((expected_log_parallel(&half, &z).unwrap().to_f64() - 0.5 * 1.5f64.ln()).abs() < 1e-15);
        // q at the south pole, parallel at the north pole: distance 2
        let v = expected_log_parallel(&one, &-one.clone()).unwrap();
        assert!((v.to_f64() - 2f64.ln()).abs() < 1e-15);
        // coincident poles
        assert!(expected_log_parallel(&-one.clone(), &-one.clone()).unwrap().is_infinite());
        assert!(expected_log_parallel(&prec().float(1.5), &z).is_err());
    }

    #[test]
    fn band_integral_full_sphere_is_minus_kappa() {
        for c in [q(0, 1), q(1, 1), q(-1, 1), q(1, 3), q(-7, 9)] {
            let b = BandGeometry::new(q(0, 1), q(1, 1), c).unwrap();
            let v = band_integral(&b, prec());
            let d = Float::with_val(256, v + kappa(prec())).abs();
            assert!(d < 1e-60, "{d}");
        }
    }

    #[test]
    fn band_integral_small_band_limit() {
        let b = BandGeometry::new(q(1, 2), q(1, 1_000_000), q(-1, 4)).unwrap();
        let mean = band_integral(&b, prec()) / prec().float(&b.eps);
        let point = expected_log_parallel(&prec().float(0.5), &prec().float(-0.25)).unwrap();
        assert!((mean - point).abs() < 1e-11);
    }

    #[test]
    fn outside_matches_series() {
        // h = 0, eps = 1/2, c = 3/4: D = sum_{n>=2} eps^{2n} / (4n(2n+1))
        let b = BandGeometry::new(q(0, 1), q(1, 2), q(3, 4)).unwrap();
        let (d, upper) = comparison_outside_margin(&b, prec()).unwrap();
        let series: f64 = (2..200).map(|n| 0.25f64.powi(n) / (4.0 * n as f64 * (2.0 * n as f64 + 1.0))).sum();
        assert!((d.to_f64() - series).abs() < 1e-12);
        assert!(upper > 0);
        assert!(comparison_outside_margin(&BandGeometry::new(q(0, 1), q(1, 2), q(1, 4)).unwrap(), prec()).is_err());
    }

    #[test]
    fn inside_grid_margins_nonnegative() {
        for h in [q(3, 4), q(-3, 4), q(0, 1)] {
            let eps: Rational = (1 - Rational::from(h.abs_ref())) / 4u32;
            for i in 0..9 {
                let c = Rational::from(&h - &eps) + (&eps * q(i, 4));
                let b = BandGeometry::new(h.clone(), eps.clone(), c).unwrap();
                let (lo, hi) = comparison_inside_margin(&b, prec()).unwrap();
                assert!(lo >= 0 && hi >= 0, "h={h} i={i}");
            }
        }
    }

    #[test]
    fn inside_boundary_matches_outside_value() {
        let b = BandGeometry::new(q(1, 3), q(1, 6), q(1, 2)).unwrap();
        let (lo_in, _) = comparison_inside_margin(&b, prec()).unwrap();
        let (d, _) = comparison_outside_margin(&b, prec()).unwrap();
        // both measure Itilde - I_B/eps from different offsets
        let eps_term = prec().float(q(1, 36)) / 12u32 / prec().float(q(4, 9));
        let lower_bound = prec().float(q(1, 6)) / 4u32 / prec().float(q(8, 9));
        let via_outside = d + eps_term + lower_bound;
        assert!(Float::with_val(256, via_outside - lo_in).abs() < 1e-60);
    }

    #[test]
    fn s_n_examples() {
        let p1 = build_parallels(1).unwrap();
        assert!(s_n(&prec().zero(), &p1).unwrap().is_zero());
        let p2 = build_parallels(2).unwrap();
        let one = prec().float(1);
        let direct: f64 = p2
            .iter()
            .map(|s| s.r as f64 * 0.5 * ((1.0 - s.h.to_f64()).ln() + 2f64.ln()))
            .sum();
        assert!((s_n(&one, &p2).unwrap().to_f64() - direct).abs() < 1e-13);
        let p5 = build_parallels(5).unwrap();
        for c in [0.1, 0.37, 0.9] {
            let a = s_n(&prec().float(c), &p5).unwrap();
            let b = s_n(&prec().float(-c), &p5).unwrap();
            assert!(Float::with_val(256, a - b).abs() < 1e-60);
        }
    }

    #[test]
    fn t_ell_examples() {
        assert_eq!(t_ell(1, 1).unwrap(), 0);
        assert!(t_ell(0, 3).is_err());
        assert!(t_ell(4, 3).is_err());
        // M = 2, l = 1: only j = 2, 3 with (1 - h_j): r_2 = 8, h_2 = 0; r_3 = 4, h_3 = -3/4
        let want = Rational::from((512, 12 * 256)) + Rational::from(64) / (Rational::from(12 * 256) * q(49, 16));
        assert_eq!(t_ell(1, 2).unwrap(), want);
    }

    #[test]
    fn log_product_examples() {
        let set = build_point_set(1, None, prec()).unwrap();
        let north = SpherePoint::new(prec().zero(), prec().zero(), prec().float(1));
        let v = log_product_to_set(&north, set.parallels());
        assert!((v.to_f64() - 2.0 * 2f64.ln()).abs() < 1e-15);
        let on = set.points()[0][1].clone();
        assert!(log_product_to_set(&on, set.parallels()).is_infinite());
    }

    #[test]
    fn energy_examples() {
        let set = build_point_set(1, None, prec()).unwrap();
        let e = log_energy(&set).unwrap();
        assert!((e.energy.to_f64() + 8.0 * 2f64.ln()).abs() < 1e-13);
        let pair = [
            SpherePoint::new(prec().zero(), prec().zero(), prec().float(1)),
            SpherePoint::new(prec().zero(), prec().zero(), prec().float(-1)),
        ];
        assert!((log_energy_pairwise(&pair).to_f64() + 2.0 * 2f64.ln()).abs() < 1e-15);
        let set3 = build_point_set(3, None, prec()).unwrap();
        let pts: Vec<SpherePoint> = set3.iter().map(|(_, p)| p.clone()).collect();
        let d = Float::with_val(256, log_energy(&set3).unwrap().energy - log_energy_pairwise(&pts)).abs();
        assert!(d < 1e-60, "{d}");
    }
}
