//! Shub-Smale normalized condition number of the canonical polynomials.
//!
//! Two independent evaluations are provided. The coefficient route uses the
//! Bombieri-Weyl norm and `|f'|` at each root. The spherical route works on
//! the point set directly: a sphere integral of `prod |p - p_j|^2` against
//! the per-point product of distances to the other points.

use rayon::prelude::*;
use rug::{Float, Rational};
use serde::Serialize;

use crate::error::{precondition, Error, Result};
use crate::interval::Interval;
use crate::points::ParallelSpec;
use crate::polynomial::{
    bombieri_norm_sq, bombieri_norm_sq_log, canonical_polynomial, derivative_modulus_at_root, expand,
    roots, FactorizedPolynomial, NormConfig, RootList,
};
use crate::precision::{log_sum_exp, serde_float, Precision};
use crate::quadrature::GaussLegendre;

/// `0.454`, the lower constant valid for every degree-N polynomial.
pub fn lower_constant() -> Rational {
    Rational::from((454, 1000))
}

/// `19/2`, the upper constant in the `sqrt(N+1)` bound.
pub fn upper_constant() -> Rational {
    Rational::from((19, 2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Coefficient,
    Spherical,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::Coefficient => "coefficient",
            Route::Spherical => "spherical",
        }
    }
}

/// Condition number at one root (coefficient route) or one point
/// (spherical route). `log_mu` is `+inf` with a reason for multiple roots.
#[derive(Debug, Clone, Serialize)]
pub struct RootCondition {
    pub id: usize,
    /// Parallel of the point, or the factor's parallel label for roots.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parallel: Option<usize>,
    /// Index of the point within its parallel / of the root within its factor.
    pub azimuth: usize,
    #[serde(serialize_with = "serde_float::serialize")]
    pub log_mu: Float,
    #[serde(serialize_with = "serde_float::serialize")]
    pub mu: Float,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub infinite_reason: Option<String>,
}

impl RootCondition {
    fn finite(id: usize, parallel: Option<usize>, azimuth: usize, log_mu: Float) -> Self {
        let mu = Float::with_val(log_mu.prec(), log_mu.exp_ref());
        RootCondition {
            id,
            parallel,
            azimuth,
            log_mu,
            mu,
            infinite_reason: None,
        }
    }

    fn infinite(id: usize, parallel: Option<usize>, azimuth: usize, prec: Precision, reason: String) -> Self {
        let inf = Float::with_val(prec.bits(), rug::float::Special::Infinity);
        RootCondition {
            id,
            parallel,
            azimuth,
            log_mu: inf.clone(),
            mu: inf,
            infinite_reason: Some(reason),
        }
    }
}

/// Bound verdicts. `None` means undecided, which only happens in certified
/// mode when the enclosure straddles a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    #[serde(rename = "le_N")]
    pub le_n: Option<bool>,
    pub le_19half_sqrt: Option<bool>,
    pub ge_lower: Option<bool>,
}

impl Verdicts {
    /// Verdicts from a floating value of `mu^2` (compared without square roots).
    pub fn from_mu(mu: &Float, n: usize) -> Self {
        let mu_sq = Float::with_val(mu.prec(), mu.square_ref());
        let n_r = Rational::from(n);
        let le_n = mu_sq <= Rational::from(n_r.square_ref());
        let up = Rational::from(upper_constant().square_ref()) * Rational::from(n + 1);
        let lo = Rational::from(lower_constant().square_ref()) * n_r;
        Verdicts {
            le_n: Some(le_n),
            le_19half_sqrt: Some(mu_sq <= up),
            ge_lower: Some(mu_sq >= lo),
        }
    }

    /// Rigorous verdicts from an enclosure of `mu^2`.
    pub fn from_mu_sq_interval(mu_sq: &Interval, n: usize, prec: Precision) -> Self {
        let decide_le = |bound: &Rational| {
            let b = Interval::from_rational(bound, prec);
            if mu_sq.certainly_le(&b) {
                Some(true)
            } else if mu_sq.certainly_gt(&b) {
                Some(false)
            } else {
                None
            }
        };
        let n_r = Rational::from(n);
        let up = Rational::from(upper_constant().square_ref()) * Rational::from(n + 1);
        let lo = Rational::from(lower_constant().square_ref()) * &n_r;
        let lo_i = Interval::from_rational(&lo, prec);
        let ge_lower = if lo_i.certainly_le(mu_sq) {
            Some(true)
        } else if mu_sq.hi() < lo_i.lo() {
            Some(false)
        } else {
            None
        };
        Verdicts {
            le_n: decide_le(&Rational::from(n_r.square_ref())),
            le_19half_sqrt: decide_le(&up),
            ge_lower,
        }
    }

    pub fn decided(&self) -> bool {
        self.le_n.is_some() && self.le_19half_sqrt.is_some() && self.ge_lower.is_some()
    }

    /// `mu <= min(N, 9.5 sqrt(N+1))`.
    pub fn main_bound(&self) -> Option<bool> {
        match (self.le_n, self.le_19half_sqrt) {
            (Some(true), _) | (_, Some(true)) => Some(true),
            (Some(false), Some(false)) => Some(false),
            _ => None,
        }
    }
}

/// Node counts for the sphere integral. Counts default to the exactness
/// requirement plus `margin`; explicit counts below the requirement are
/// honoured but flagged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuadratureConfig {
    pub margin: usize,
    pub azimuth_nodes: Option<usize>,
    pub t_nodes: Option<usize>,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            margin: 16,
            azimuth_nodes: None,
            t_nodes: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadratureInfo {
    pub azimuth_nodes: usize,
    pub t_nodes: usize,
    pub required_azimuth_nodes: usize,
    pub required_t_nodes: usize,
    pub margin: usize,
    pub under_resolved: bool,
}

impl QuadratureConfig {
    /// Resolved node counts for a set of `n` points.
    pub fn resolve(&self, n: usize) -> QuadratureInfo {
        let req_az = n + 1;
        let req_t = (n + 1).div_ceil(2);
        let az = self.azimuth_nodes.unwrap_or(req_az + self.margin);
        let t = self.t_nodes.unwrap_or(req_t + self.margin);
        QuadratureInfo {
            azimuth_nodes: az,
            t_nodes: t,
            required_azimuth_nodes: req_az,
            required_t_nodes: req_t,
            margin: self.margin,
            under_resolved: az < req_az || t < req_t,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MuEnclosure {
    #[serde(serialize_with = "serde_float::serialize")]
    pub mu_sq_lo: Float,
    #[serde(serialize_with = "serde_float::serialize")]
    pub mu_sq_hi: Float,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    #[serde(rename = "M")]
    pub m: u32,
    #[serde(rename = "N")]
    pub n: usize,
    pub route: Route,
    pub precision_bits: u32,
    #[serde(serialize_with = "serde_float::serialize")]
    pub mu_max: Float,
    #[serde(serialize_with = "serde_float::serialize")]
    pub log_mu_max: Float,
    /// Id of the first record attaining the maximum.
    pub argmax: usize,
    pub verdicts: Verdicts,
    pub certified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub enclosure: Option<MuEnclosure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    #[serde(serialize_with = "serde_opt_float")]
    pub log_numerator: Option<Float>,
    pub per_root: Vec<RootCondition>,
}

fn serde_opt_float<S: serde::Serializer>(x: &Option<Float>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => serde_float::serialize(v, s),
        None => s.serialize_none(),
    }
}

impl ConditionReport {
    fn assemble(m: u32, n: usize, route: Route, prec: Precision, per_root: Vec<RootCondition>) -> Self {
        let (argmax, best) = per_root
            .iter()
            .enumerate()
            .fold((0usize, None::<&Float>), |(ai, best), (i, r)| match best {
                Some(b) if r.log_mu <= *b => (ai, best),
                _ => (i, Some(&r.log_mu)),
            });
        let log_mu_max = best
            .cloned()
            .unwrap_or_else(|| Float::with_val(prec.bits(), rug::float::Special::NegInfinity));
        let mu_max = Float::with_val(prec.bits(), log_mu_max.exp_ref());
        let verdicts = Verdicts::from_mu(&mu_max, n);
        ConditionReport {
            m,
            n,
            route,
            precision_bits: prec.bits(),
            argmax: per_root.get(argmax).map_or(0, |r| r.id),
            mu_max,
            log_mu_max,
            verdicts,
            certified: false,
            enclosure: None,
            quadrature: None,
            log_numerator: None,
            per_root,
        }
    }

    /// `mu_max / sqrt(N + 1)`.
    pub fn mu_over_sqrt_np1(&self) -> Float {
        let p = self.mu_max.prec();
        Float::with_val(p, &self.mu_max / Float::with_val(p, self.n + 1).sqrt())
    }
}

/// Coefficient-route data shared by all roots of one polynomial.
pub struct CoefficientRoute {
    degree: usize,
    log_norm_sq: Float,
    roots: RootList,
    prec: Precision,
}

impl CoefficientRoute {
    pub fn new(f: &FactorizedPolynomial, norm: NormConfig, prec: Precision) -> Result<Self> {
        let work = prec.with_guard(32);
        Ok(CoefficientRoute {
            degree: f.degree(),
            log_norm_sq: bombieri_norm_sq_log(f, norm, work),
            roots: roots(f, work)?,
            prec,
        })
    }

    pub fn roots(&self) -> &RootList {
        &self.roots
    }

    /// `log mu` at root `i`:
    /// `1/2 log N + (N-2)/2 log(1+|z|^2) + 1/2 log ||f||^2 - log |f'(z)|`.
    pub fn log_mu_at_root(&self, i: usize) -> Result<Float> {
        let work = self.roots.precision().bits();
        let root = &self.roots.roots()[i];
        let d = derivative_modulus_at_root(&self.roots, i)?;
        let n = self.degree;
        let abs_sq = Float::with_val(work, root.value.norm_ref());
        let mut v = Float::with_val(work, n).ln() / 2u32;
        v += Float::with_val(work, abs_sq + 1u32).ln() * (n as f64 - 2.0) / 2u32;
        v += Float::with_val(work, &self.log_norm_sq / 2u32);
        v -= d.log;
        Ok(Float::with_val(self.prec.bits(), v))
    }

    pub fn record(&self, i: usize) -> RootCondition {
        let root = &self.roots.roots()[i];
        match self.log_mu_at_root(i) {
            Ok(v) => RootCondition::finite(i, root.parallel, root.azimuth, v),
            Err(e) => RootCondition::infinite(i, root.parallel, root.azimuth, self.prec, e.to_string()),
        }
    }

    pub fn records(&self) -> Vec<RootCondition> {
        (0..self.roots.len()).into_par_iter().map(|i| self.record(i)).collect()
    }
}

/// `mu_norm(f, z_i)`; a multiple root gives the `+inf` sentinel with a reason.
pub fn mu_at_root(f: &FactorizedPolynomial, i: usize, prec: Precision) -> Result<RootCondition> {
    let route = CoefficientRoute::new(f, NormConfig::default(), prec)?;
    if i >= route.roots.len() {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: route.roots.len(),
        });
    }
    Ok(route.record(i))
}

/// Coefficient route over all roots of any factored polynomial.
pub fn mu_max_coefficient_route_for(f: &FactorizedPolynomial, m: u32, prec: Precision) -> Result<ConditionReport> {
    let route = CoefficientRoute::new(f, NormConfig::default(), prec)?;
    Ok(ConditionReport::assemble(m, f.degree(), Route::Coefficient, prec, route.records()))
}

pub fn mu_max_coefficient_route(m: u32, prec: Precision) -> Result<ConditionReport> {
    mu_max_coefficient_route_for(&canonical_polynomial(m)?, m, prec)
}

/// `Theta = x^{2r} + y^{2r} - 2 x^r y^r cos(r dphi)` with
/// `x = sqrt((1-c)(1+h))`, `y = sqrt((1+c)(1-h))`: the product of squared
/// distances from a point at height `c` to `r` equally spaced points at
/// height `h`, `dphi` being the azimuth offset to the first of them.
///
/// Evaluated as `(x^r - y^r)^2 + 4 x^r y^r sin^2(r dphi / 2)` to avoid
/// cancellation near the minimum.
pub fn theta_product(r: u32, h: &Float, c: &Float, dphi: &Float) -> Float {
    let p = c.prec().max(h.prec());
    let (xr, yr) = theta_legs(r, h, c);
    let diff = Float::with_val(p, &xr - &yr);
    let s = Float::with_val(p, dphi * r) / 2u32;
    let sin = s.sin();
    let cross = Float::with_val(p, &xr * &yr) * Float::with_val(p, sin.square_ref()) * 4u32;
    diff.square() + cross
}

/// `(x^r, y^r)` for [`theta_product`].
fn theta_legs(r: u32, h: &Float, c: &Float) -> (Float, Float) {
    use rug::ops::Pow;
    let p = c.prec().max(h.prec());
    let x2 = Float::with_val(p, 1 - c) * Float::with_val(p, 1 + h);
    let y2 = Float::with_val(p, 1 + c) * Float::with_val(p, 1 - h);
    let pow_half = |v: Float| -> Float {
        let v = v.max(&Float::new(p));
        if r.is_multiple_of(2) {
            v.pow(r / 2)
        } else {
            v.sqrt().pow(r)
        }
    };
    (pow_half(x2), pow_half(y2))
}

/// `(min, max)` of [`theta_product`] over the azimuth offset:
/// `(x^r - y^r)^2` at `dphi = 0` and `(x^r + y^r)^2` at `dphi = pi/r`.
pub fn theta_extremes(r: u32, h: &Float, c: &Float) -> (Float, Float) {
    let p = c.prec().max(h.prec());
    let (xr, yr) = theta_legs(r, h, c);
    (
        Float::with_val(p, &xr - &yr).square(),
        Float::with_val(p, &xr + &yr).square(),
    )
}

/// True when a computed `theta` is zero to working precision relative to
/// its largest possible value, i.e. the evaluation point sits on a node.
pub fn theta_vanishes(theta: &Float, r: u32, h: &Float, c: &Float) -> bool {
    if theta.is_zero() {
        return true;
    }
    let (_, max) = theta_extremes(r, h, c);
    let p = theta.prec() as i32;
    let scaled = Float::with_val(theta.prec(), &max * Float::with_val(theta.prec(), Float::i_exp(1, 32 - p)));
    *theta <= scaled
}

/// `log prod_{k=1}^{r-1} |p_k - p_0| = log r + (r-1) log sqrt(1-h^2)` for
/// `r` equally spaced points on the circle at height `h`. `r = 1` gives the
/// empty product.
pub fn parallel_self_product_log(r: u32, h: &Float) -> Result<Float> {
    let p = h.prec();
    if r == 0 {
        return Err(precondition("parallel_self_product_log", "r must be positive"));
    }
    if r == 1 {
        return Ok(Float::new(p));
    }
    let one_minus = Float::with_val(p, 1u32) - Float::with_val(p, h.square_ref());
    if one_minus <= 0 {
        return Err(precondition(
            "parallel_self_product_log",
            "degenerate circle at |h| = 1 with r >= 2",
        ));
    }
    Ok(Float::with_val(p, r).ln() + one_minus.ln() * (r - 1) / 2u32)
}

/// Azimuth of point `k` on parallel `spec`.
fn point_azimuth(spec: &ParallelSpec, k: u32, two_pi: &Float) -> Float {
    let p = two_pi.prec();
    Float::with_val(p, two_pi * k) / spec.r + spec.phase
}

/// `log int_S prod_j |p - p_j|^2 dsigma(p)` for the points carried by
/// `parallels`, as `1/2 int_{-1}^{1}` of the azimuthal average, by a
/// uniform azimuth rule and Gauss-Legendre in height.
pub fn numerator_integral_log(parallels: &[ParallelSpec], cfg: &QuadratureConfig, prec: Precision) -> (Float, QuadratureInfo) {
    let n: usize = parallels.iter().map(|s| s.r as usize).sum();
    let info = cfg.resolve(n);
    let work = prec.with_guard(32);
    let p = work.bits();
    let gl = GaussLegendre::new(info.t_nodes, work);
    let two_pi = work.pi() * 2u32;
    let heights: Vec<Float> = parallels.iter().map(|s| work.float(&s.h)).collect();
    let phases: Vec<Float> = parallels.iter().map(|s| work.float(s.phase)).collect();
    let k = info.azimuth_nodes;
    let terms: Vec<Float> = (0..gl.len())
        .into_par_iter()
        .flat_map_iter(|ti| {
            let t = &gl.nodes[ti];
            let log_w = Float::with_val(p, gl.weights[ti].ln_ref());
            let two_pi = &two_pi;
            let heights = &heights;
            let phases = &phases;
            (0..k).map(move |ai| {
                let alpha = Float::with_val(p, two_pi * ai as u32) / k as u32;
                let mut prod = Float::with_val(p, 1);
                for (j, spec) in parallels.iter().enumerate() {
                    let dphi = Float::with_val(p, &alpha - &phases[j]);
                    prod *= theta_product(spec.r, &heights[j], t, &dphi);
                }
                if prod.is_zero() {
                    Float::with_val(p, rug::float::Special::NegInfinity)
                } else {
                    prod.ln() + &log_w
                }
            })
        })
        .collect();
    let total = log_sum_exp(&terms, work) - Float::with_val(p, k).ln() - Float::with_val(p, 2).ln();
    (Float::with_val(prec.bits(), total), info)
}

/// `log prod_{i != self} |p_self - p_i|` for point `k` of parallel `l`.
pub fn point_denominator_log(parallels: &[ParallelSpec], l: usize, k: u32, prec: Precision) -> Result<Float> {
    let work = prec.with_guard(32);
    let p = work.bits();
    let two_pi = work.pi() * 2u32;
    let own = &parallels[l];
    let c = work.float(&own.h);
    let alpha = point_azimuth(own, k, &two_pi);
    let mut log = parallel_self_product_log(own.r, &c)?;
    let mut prod = Float::with_val(p, 1);
    for (j, spec) in parallels.iter().enumerate() {
        if j == l {
            continue;
        }
        let dphi = Float::with_val(p, &alpha - spec.phase);
        prod *= theta_product(spec.r, &work.float(&spec.h), &c, &dphi);
    }
    if prod.is_zero() {
        return Err(Error::MultipleRoot(l));
    }
    log += prod.ln() / 2u32;
    Ok(Float::with_val(prec.bits(), log))
}

/// Spherical-route options.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SphericalOptions {
    pub quadrature: QuadratureConfig,
    /// Evaluate only a quarter of each parallel, relying on the rotation by
    /// a quarter turn; valid when every count is a multiple of 4.
    pub quarter_symmetry: bool,
}

/// Spherical route for any point set given by parallels.
pub fn spherical_route_for(parallels: &[ParallelSpec], m: u32, opts: &SphericalOptions, prec: Precision) -> Result<ConditionReport> {
    let n: usize = parallels.iter().map(|s| s.r as usize).sum();
    if opts.quarter_symmetry && parallels.iter().any(|s| s.r % 4 != 0) {
        return Err(precondition(
            "spherical_route",
            "quarter-turn reduction needs every parallel count divisible by 4",
        ));
    }
    let (num_log, info) = numerator_integral_log(parallels, &opts.quadrature, prec);
    let work = prec.with_guard(32);
    let p = work.bits();
    let prefactor = (Float::with_val(p, n) * Float::with_val(p, n + 1)).sqrt().ln() - Float::with_val(p, 2).ln();
    let mut cells = Vec::with_capacity(n);
    let mut id = 0usize;
    for (l, spec) in parallels.iter().enumerate() {
        let count = if opts.quarter_symmetry { spec.r / 4 } else { spec.r };
        for k in 0..spec.r {
            if k < count {
                cells.push((id, l, k));
            }
            id += 1;
        }
    }
    let per_root: Vec<RootCondition> = cells
        .into_par_iter()
        .map(|(id, l, k)| {
            let j = parallels[l].j;
            match point_denominator_log(parallels, l, k, prec) {
                Ok(den) => {
                    let v = Float::with_val(p, &prefactor + Float::with_val(p, &num_log / 2u32)) - den;
                    RootCondition::finite(id, Some(j), k as usize, Float::with_val(prec.bits(), v))
                }
                Err(e) => RootCondition::infinite(id, Some(j), k as usize, prec, e.to_string()),
            }
        })
        .collect();
    let mut report = ConditionReport::assemble(m, n, Route::Spherical, prec, per_root);
    report.quadrature = Some(info);
    report.log_numerator = Some(num_log);
    Ok(report)
}

/// Spherical route on the canonical point set, optionally with phases.
pub fn mu_max_spherical_route(m: u32, phases: Option<&[f64]>, opts: &SphericalOptions, prec: Precision) -> Result<ConditionReport> {
    let set = crate::points::build_point_set(m, phases, Precision::new(64)?)?;
    spherical_route_for(set.parallels(), m, opts, prec)
}

/// Rigorous enclosure of `mu^2` at every root of a factored polynomial,
/// using `|f'(z)| = r_a |z|^{r_a-1} prod_{b != a} |z^{r_b} - s_b|` at a root
/// of factor `a`. Returns `None` when an enclosure of some `|z^{r_b} - s_b|`
/// touches zero (coincident roots cannot be excluded at this precision).
pub fn mu_sq_enclosures(f: &FactorizedPolynomial, prec: Precision) -> Option<Vec<Interval>> {
    let n = f.degree();
    let norm = Interval::from_rational(&bombieri_norm_sq(&expand(f)), prec);
    let n_i = Interval::from_i64(n as i64, prec);
    let factors = f.factors();
    let moduli: Vec<Interval> = factors
        .iter()
        .map(|fa| Interval::from_rational(&Rational::from(fa.s.abs_ref()), prec).root(fa.r))
        .collect();
    let mut out = Vec::with_capacity(n);
    for (a, fa) in factors.iter().enumerate() {
        let rho = &moduli[a];
        let rho_sq = rho.square();
        let one_plus = Interval::from_i64(1, prec).add(&rho_sq);
        let numer_common = n_i.mul(&norm).mul(&if n >= 2 {
            one_plus.pow_u((n - 2) as u32)
        } else {
            Interval::from_i64(1, prec).div(&one_plus.pow_u((2 - n) as u32))
        });
        let lead = Interval::from_i64(fa.r as i64, prec)
            .mul(&rho.pow_u(fa.r - 1))
            .square();
        let offset = if fa.s < 0 { Rational::from((1, 2)) } else { Rational::new() };
        for k in 0..fa.r {
            let mut deriv_sq = lead.clone();
            for (b, fb) in factors.iter().enumerate() {
                if b == a {
                    continue;
                }
                // z^{r_b} = rho^{r_b} e^{2 pi i (k + offset) r_b / r_a}
                let turn = ((Rational::from(k) + &offset) * fb.r) / fa.r;
                let cos = Interval::cos_turn(&turn, prec);
                let w = rho.pow_u(fb.r);
                let s = Interval::from_rational(&fb.s, prec);
                let dist_sq = w
                    .square()
                    .add(&s.square())
                    .sub(&Interval::from_i64(2, prec).mul(&s).mul(&w).mul(&cos));
                if *dist_sq.lo() <= 0 {
                    return None;
                }
                deriv_sq = deriv_sq.mul(&dist_sq);
            }
            out.push(numer_common.div(&deriv_sq));
        }
    }
    Some(out)
}

/// Upper limit for precision escalation in certified mode.
pub const MAX_CERTIFY_BITS: u32 = 8192;

/// Coefficient route with outward rounding. Precision is doubled until all
/// three verdicts are decided or [`MAX_CERTIFY_BITS`] is reached; undecided
/// verdicts stay `None` and the report is then not flagged certified.
pub fn certify_bound(m: u32, prec: Precision) -> Result<ConditionReport> {
    let f = canonical_polynomial(m)?;
    let mut report = mu_max_coefficient_route_for(&f, m, prec)?;
    let n = f.degree();
    let mut bits = prec;
    loop {
        if let Some(encl) = mu_sq_enclosures(&f, bits) {
            let hull = encl.iter().skip(1).fold(encl[0].clone(), |acc, e| acc.max(e));
            let verdicts = Verdicts::from_mu_sq_interval(&hull, n, bits);
            if verdicts.decided() || bits.bits() >= MAX_CERTIFY_BITS {
                report.verdicts = verdicts;
                report.certified = verdicts.decided();
                report.enclosure = Some(MuEnclosure {
                    mu_sq_lo: hull.lo().clone(),
                    mu_sq_hi: hull.hi().clone(),
                });
                return Ok(report);
            }
        } else if bits.bits() >= MAX_CERTIFY_BITS {
            report.verdicts = Verdicts {
                le_n: None,
                le_19half_sqrt: None,
                ge_lower: None,
            };
            report.certified = false;
            return Ok(report);
        }
        bits = bits.doubled();
    }
}
