//! Exact factored and dense forms of the well-conditioned polynomials,
//! the Bombieri-Weyl norm, closed-form roots and derivative moduli.

use rayon::prelude::*;
use rug::{Complex, Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::points::build_parallels;
use crate::precision::{log_sum_exp, serde_rational, Precision};

/// A sparse factor `z^r - s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Factor {
    pub r: u32,
    #[serde(with = "serde_rational")]
    pub s: Rational,
    /// Parallel whose stereographic image carries the roots, when known.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub parallel: Option<usize>,
}

/// Monic product of sparse factors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorizedPolynomial {
    factors: Vec<Factor>,
}

impl FactorizedPolynomial {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.iter().any(|f| f.s == 0) {
            return Err(Error::ZeroConstant);
        }
        if factors.iter().any(|f| f.r == 0) {
            return Err(Error::Parse("factor exponent must be positive".into()));
        }
        Ok(FactorizedPolynomial { factors })
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn degree(&self) -> usize {
        self.factors.iter().map(|f| f.r as usize).sum()
    }
}

/// Exact rational coefficients `a_0 .. a_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensePolynomial {
    coeffs: Vec<Rational>,
}

impl DensePolynomial {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        DensePolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Formal degree (length minus one).
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn derivative(&self) -> DensePolynomial {
        DensePolynomial {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| Rational::from(a * i as u64))
                .collect(),
        }
    }
}

/// `rho(h)^r = ((1 + h) / (1 - h))^(r/2)`, exact for even `r`.
pub fn rho_power(h: &Rational, r: u32) -> Rational {
    assert!(r.is_multiple_of(2), "rho_power needs an even exponent");
    let ratio = Rational::from(1 + h) / Rational::from(1 - h);
    rug::ops::Pow::pow(ratio, r / 2)
}

/// `(z^{r_M} - 1) * prod_{j<M} (z^{r_j} - rho(h_j)^{r_j}) (z^{r_j} - rho(h_j)^{-r_j})`.
pub fn canonical_polynomial(m: u32) -> Result<FactorizedPolynomial> {
    let parallels = build_parallels(m)?;
    let m = m as usize;
    let mut factors = vec![Factor {
        r: parallels[m - 1].r,
        s: Rational::from(1),
        parallel: Some(m),
    }];
    for spec in &parallels[..m - 1] {
        let s = rho_power(&spec.h, spec.r);
        let inv = Rational::from(s.recip_ref());
        factors.push(Factor {
            r: spec.r,
            s,
            parallel: Some(spec.j),
        });
        factors.push(Factor {
            r: spec.r,
            s: inv,
            parallel: Some(2 * m - spec.j),
        });
    }
    FactorizedPolynomial::new(factors)
}

pub fn expand(f: &FactorizedPolynomial) -> DensePolynomial {
    let mut coeffs = vec![Rational::from(1)];
    for factor in f.factors() {
        let r = factor.r as usize;
        let mut next = vec![Rational::new(); coeffs.len() + r];
        for (i, a) in coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            next[i + r] += a;
            next[i] -= Rational::from(a * &factor.s);
        }
        coeffs = next;
    }
    DensePolynomial { coeffs }
}

/// `sum_i a_i^2 / C(N, i)`, exact.
pub fn bombieri_norm_sq(f: &DensePolynomial) -> Rational {
    let n = f.degree() as u32;
    f.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, a)| **a != 0)
        .map(|(i, a)| {
            let binom = Integer::from(Integer::binomial_u(n, i as u32));
            Rational::from(a.square_ref()) / binom
        })
        .sum()
}

/// How the Bombieri-Weyl norm is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormConfig {
    /// Degrees up to this value use exact rational expansion; above it the
    /// floating log-domain path is used.
    pub exact_max_degree: usize,
}

impl Default for NormConfig {
    fn default() -> Self {
        NormConfig {
            exact_max_degree: 1024,
        }
    }
}

/// `log ||f||^2` from a floating expansion at `prec` (plus guard bits),
/// summed as a log-sum-exp of `2 log|a_i| - log C(N, i)`.
pub fn bombieri_norm_sq_log_float(f: &FactorizedPolynomial, prec: Precision) -> Float {
    let work = prec.with_guard(64);
    let mut coeffs = vec![work.float(1)];
    for factor in f.factors() {
        let r = factor.r as usize;
        let s = work.float(&factor.s);
        let mut next = vec![work.zero(); coeffs.len() + r];
        for (i, a) in coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            next[i + r] += a;
            next[i] -= Float::with_val(work.bits(), a * &s);
        }
        coeffs = next;
    }
    let n = coeffs.len() as u32 - 1;
    let terms: Vec<Float> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .map(|(i, a)| {
            let ln_binom = work.float(Integer::from(Integer::binomial_u(n, i as u32))).ln();
            Float::with_val(work.bits(), a.abs_ref()).ln() * 2u32 - ln_binom
        })
        .collect();
    Float::with_val(prec.bits(), log_sum_exp(&terms, work))
}

/// `log ||f||^2`, exact expansion below the configured cut-over.
pub fn bombieri_norm_sq_log(f: &FactorizedPolynomial, cfg: NormConfig, prec: Precision) -> Float {
    if f.degree() <= cfg.exact_max_degree {
        prec.float(bombieri_norm_sq(&expand(f))).ln()
    } else {
        bombieri_norm_sq_log_float(f, prec)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Root {
    pub value: Complex,
    /// Index of the factor the root belongs to.
    pub factor: usize,
    pub parallel: Option<usize>,
    /// `k` in `s^{1/r} e^{2 pi i k / r}`.
    pub azimuth: usize,
}

/// All roots of a factored polynomial, grouped by factor in factor order,
/// azimuth index ascending.
#[derive(Debug, Clone)]
pub struct RootList {
    roots: Vec<Root>,
    prec: Precision,
}

impl RootList {
    pub fn new(roots: Vec<Root>, prec: Precision) -> Self {
        RootList { roots, prec }
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }
}

/// Closed-form roots `|s|^{1/r} e^{i (2 pi k + arg s) / r}`.
pub fn roots(f: &FactorizedPolynomial, prec: Precision) -> Result<RootList> {
    let p = prec.bits();
    let two_pi = prec.pi() * 2u32;
    let mut out = Vec::with_capacity(f.degree());
    for (fi, factor) in f.factors().iter().enumerate() {
        if factor.s == 0 {
            return Err(Error::ZeroConstant);
        }
        let modulus = Float::with_val(p, Rational::from(factor.s.abs_ref())).root(factor.r);
        let offset = if factor.s < 0 { 0.5 } else { 0.0 };
        for k in 0..factor.r {
            let angle = Float::with_val(p, &two_pi * (k as f64 + offset)) / factor.r;
            let (sin, cos) = angle.sin_cos(Float::new(p));
            out.push(Root {
                value: Complex::with_val(p, (Float::with_val(p, &modulus * &cos), Float::with_val(p, &modulus * &sin))),
                factor: fi,
                parallel: factor.parallel,
                azimuth: k as usize,
            });
        }
    }
    Ok(RootList::new(out, prec))
}

/// A positive magnitude held by its logarithm.
#[derive(Debug, Clone, PartialEq)]
pub struct LogMagnitude {
    pub log: Float,
}

impl LogMagnitude {
    pub fn value(&self) -> Float {
        Float::with_val(self.log.prec(), self.log.exp_ref())
    }
}

/// `|f'(z_i)| = prod_{j != i} |z_i - z_j|` for a monic polynomial with
/// simple roots. The running product is an MPFR float, whose exponent range
/// cannot overflow for any degree handled here; only its logarithm is kept.
pub fn derivative_modulus_at_root(roots: &RootList, i: usize) -> Result<LogMagnitude> {
    let list = roots.roots();
    let zi = &list
        .get(i)
        .ok_or(Error::IndexOutOfRange {
            index: i,
            len: list.len(),
        })?
        .value;
    let p = roots.precision().bits();
    let mut prod = Float::with_val(p, 1);
    for (j, other) in list.iter().enumerate() {
        if j == i {
            continue;
        }
        let d = Complex::with_val(p, zi - &other.value);
        let n = Float::with_val(p, d.norm_ref());
        if n.is_zero() {
            return Err(Error::MultipleRoot(i));
        }
        prod *= n;
    }
    Ok(LogMagnitude {
        log: Float::with_val(p, prod.abs_ref()).ln() / 2u32,
    })
}

/// All derivative moduli, evaluated in parallel, in root order.
pub fn derivative_moduli(roots: &RootList) -> Vec<Result<LogMagnitude>> {
    (0..roots.len())
        .into_par_iter()
        .map(|i| derivative_modulus_at_root(roots, i))
        .collect()
}

/// Horner evaluation at the precision of `z`.
pub fn evaluate(f: &DensePolynomial, z: &Complex) -> Complex {
    let p = z.prec().0.max(z.prec().1);
    let mut acc = Complex::new(p);
    for a in f.coeffs().iter().rev() {
        acc *= z;
        acc += Float::with_val(p, a);
    }
    acc
}
