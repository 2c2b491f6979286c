//! Grid checks of the band, sum and product inequalities behind the
//! condition-number bound. Each inequality is restated as `lhs <= rhs` and
//! its margin `rhs - lhs` recorded per grid cell.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::float::Constant;
use rug::{Float, Rational};
use serde::Serialize;

use crate::condition::point_denominator_log;
use crate::energy::{
    comparison_inside_margin, comparison_outside_margin, log_product_to_set, s_n, t_ell, BandGeometry,
};
use crate::error::{Error, Result};
use crate::points::{build_bands, build_parallels, BandSpec, ParallelSpec, SpherePoint};
use crate::precision::{rational_string, serde_float, Precision};

/// Smallest `M` for which the gated inequalities are claimed.
pub const GATED_MIN_M: u32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationCell {
    pub params: BTreeMap<String, String>,
    pub side: Side,
    #[serde(serialize_with = "serde_float::serialize")]
    pub lhs: Float,
    #[serde(serialize_with = "serde_float::serialize")]
    pub rhs: Float,
    #[serde(serialize_with = "serde_float::serialize")]
    pub margin: Float,
}

impl VerificationCell {
    pub fn new(params: BTreeMap<String, String>, side: Side, lhs: Float, rhs: Float) -> Self {
        let p = lhs.prec().max(rhs.prec());
        let margin = Float::with_val(p, &rhs - &lhs);
        VerificationCell {
            params,
            side,
            lhs,
            rhs,
            margin,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub lemma: String,
    pub hypothesis: String,
    #[serde(rename = "M_range")]
    pub m_range: [u32; 2],
    pub grid: String,
    pub informational: bool,
    pub cells: Vec<VerificationCell>,
    #[serde(serialize_with = "opt_float")]
    pub worst_lower_margin: Option<Float>,
    #[serde(serialize_with = "opt_float")]
    pub worst_upper_margin: Option<Float>,
    #[serde(serialize_with = "opt_float")]
    pub worst_margin: Option<Float>,
    /// A cell passes when `margin >= -tolerance`.
    #[serde(serialize_with = "serde_float::serialize")]
    pub tolerance: Float,
    pub pass: bool,
    pub notes: Vec<String>,
}

fn opt_float<S: serde::Serializer>(x: &Option<Float>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => serde_float::serialize(v, s),
        None => s.serialize_none(),
    }
}

fn min_margin<'a>(it: impl Iterator<Item = &'a Float>) -> Option<Float> {
    it.fold(None, |acc: Option<&Float>, m| match acc {
        Some(a) if a <= m => Some(a),
        _ => Some(m),
    })
    .cloned()
}

/// Bits of working precision a margin may lose to rounding before it counts
/// against the check.
pub const TOLERANCE_GUARD_BITS: u32 = 32;

/// `2^(GUARD - p)` for the lowest cell precision `p`. Some inequalities hold
/// with equality on the grid (polar bands evaluated at the pole), and there the
/// computed margin is rounding noise of either sign.
fn rounding_tolerance(cells: &[VerificationCell]) -> Float {
    let p = cells.iter().map(|c| c.margin.prec()).min().unwrap_or(64);
    Float::with_val(p, 1) >> (p as i32 - TOLERANCE_GUARD_BITS as i32)
}

impl VerificationReport {
    pub fn new(
        lemma: &str,
        hypothesis: &str,
        m_range: [u32; 2],
        grid: String,
        informational: bool,
        cells: Vec<VerificationCell>,
        notes: Vec<String>,
    ) -> Self {
        let worst_lower_margin = min_margin(cells.iter().filter(|c| c.side == Side::Lower).map(|c| &c.margin));
        let worst_upper_margin = min_margin(cells.iter().filter(|c| c.side == Side::Upper).map(|c| &c.margin));
        let worst_margin = min_margin(cells.iter().map(|c| &c.margin));
        let tolerance = rounding_tolerance(&cells);
        let pass = cells.iter().all(|c| Float::with_val(c.margin.prec(), &c.margin + &tolerance) >= 0);
        VerificationReport {
            lemma: lemma.to_string(),
            hypothesis: hypothesis.to_string(),
            m_range,
            grid,
            informational,
            cells,
            worst_lower_margin,
            worst_upper_margin,
            worst_margin,
            tolerance,
            pass,
            notes,
        }
    }

    /// Concatenates per-`M` reports of the same check, in the given order.
    pub fn merge(reports: Vec<VerificationReport>) -> Option<VerificationReport> {
        let first = reports.first()?.clone();
        let lo = reports.iter().map(|r| r.m_range[0]).min()?;
        let hi = reports.iter().map(|r| r.m_range[1]).max()?;
        let informational = reports.iter().any(|r| r.informational);
        let mut cells = Vec::new();
        let mut notes = Vec::new();
        for r in reports {
            cells.extend(r.cells);
            notes.extend(r.notes);
        }
        Some(VerificationReport::new(
            &first.lemma,
            &first.hypothesis,
            [lo, hi],
            first.grid,
            informational,
            cells,
            notes,
        ))
    }

    /// Whether this report can fail a run.
    pub fn gating(&self) -> bool {
        !self.informational
    }
}

/// Heights and azimuths at which band- and product-based inequalities are
/// evaluated. Per band: both boundaries, the centre, the two quarter points,
/// and `random_per_band` seeded uniform heights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EvaluationGrid {
    pub seed: u64,
    pub random_per_band: usize,
    /// Azimuths `k/(4 * azimuths)` turns, `k < azimuths`, covering a quarter turn.
    pub azimuths: usize,
}

impl Default for EvaluationGrid {
    fn default() -> Self {
        EvaluationGrid {
            seed: 0,
            random_per_band: 8,
            azimuths: 8,
        }
    }
}

impl EvaluationGrid {
    pub fn with_seed(seed: u64) -> Self {
        EvaluationGrid {
            seed,
            ..Default::default()
        }
    }

    pub fn describe(&self) -> String {
        format!(
            "per band: boundaries, centre, centre +- half-width/2, {} random heights (ChaCha8, seed {}); azimuths k/{} turn for k < {}",
            self.random_per_band,
            self.seed,
            4 * self.azimuths,
            self.azimuths
        )
    }

    /// Heights in band `band` of the `M` construction, ascending for the
    /// fixed part followed by the random part.
    pub fn heights(&self, m: u32, band: &BandSpec) -> Vec<Rational> {
        let centre = band.center();
        let half = Rational::from(band.half_width() / 2u32);
        let mut out = vec![
            band.lower.clone(),
            Rational::from(&centre - &half),
            centre.clone(),
            Rational::from(&centre + &half),
            band.upper.clone(),
        ];
        let stream = self
            .seed
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            ^ ((m as u64) << 32)
            ^ band.j as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(stream);
        let width = Rational::from(&band.upper - &band.lower);
        for _ in 0..self.random_per_band {
            let u: u64 = rng.gen::<u64>() >> 11;
            let frac = Rational::from((u, 1u64 << 53));
            out.push(&band.lower + Rational::from(&width * &frac));
        }
        out
    }

    /// Azimuths in turns.
    pub fn azimuth_turns(&self) -> Vec<Rational> {
        (0..self.azimuths)
            .map(|k| Rational::from((k as u64, 4 * self.azimuths as u64)))
            .collect()
    }
}

fn gate(m: u32, informational: bool) -> Result<bool> {
    if m >= GATED_MIN_M {
        Ok(false)
    } else if informational {
        Ok(true)
    } else {
        Err(Error::Hypothesis {
            m,
            required: GATED_MIN_M,
        })
    }
}

fn params(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn ln2(prec: Precision) -> Float {
    Float::with_val(prec.bits(), Constant::Log2)
}

/// `N kappa` for the `M` construction.
fn n_kappa(m: u32, prec: Precision) -> Float {
    prec.kappa() * (4 * m * m)
}

/// The two band comparisons (evaluation height outside / inside the band),
/// over every band and every grid height of every band.
pub fn verify_band_comparisons(m: u32, grid: &EvaluationGrid, prec: Precision) -> Result<(VerificationReport, VerificationReport)> {
    let bands = build_bands(m)?;
    let heights: Vec<Rational> = bands.iter().flat_map(|b| grid.heights(m, b)).collect();
    let jobs: Vec<(usize, usize)> = (0..bands.len())
        .flat_map(|j| (0..heights.len()).map(move |i| (j, i)))
        .collect();
    let results: Vec<Result<(bool, Vec<VerificationCell>)>> = jobs
        .into_par_iter()
        .map(|(j, i)| {
            let band = &bands[j];
            let c = &heights[i];
            let geo = BandGeometry::new(band.center(), band.half_width().clone(), c.clone())?;
            let ps = params(&[
                ("M", m.to_string()),
                ("band", band.j.to_string()),
                ("c", rational_string(c)),
            ]);
            let outside = geo.above() || geo.below();
            let (lo, hi) = if outside {
                comparison_outside_margin(&geo, prec)?
            } else {
                comparison_inside_margin(&geo, prec)?
            };
            let zero = prec.zero();
            Ok((
                outside,
                vec![
                    VerificationCell::new(ps.clone(), Side::Lower, zero.clone(), lo),
                    VerificationCell::new(ps, Side::Upper, zero, hi),
                ],
            ))
        })
        .collect();
    let mut out_cells = Vec::new();
    let mut in_cells = Vec::new();
    for r in results {
        let (outside, cells) = r?;
        if outside {
            out_cells.extend(cells);
        } else {
            in_cells.extend(cells);
        }
    }
    // Cells on a band boundary belong to both cases; they appear under
    // "outside" since the outside inequality is the sharper statement there.
    let desc = format!("bands 1..{}; {}", 2 * m - 1, grid.describe());
    Ok((
        VerificationReport::new(
            "band_outside_comparison",
            "evaluation height outside the band; margins are the distance of D to 0 and to the quartic bound",
            [m, m],
            desc.clone(),
            false,
            out_cells,
            vec![],
        ),
        VerificationReport::new(
            "band_inside_comparison",
            "evaluation height inside the band",
            [m, m],
            desc,
            false,
            in_cells,
            vec![],
        ),
    ))
}

/// `(S_N + N kappa)` at every grid height of bands `1..=M`.
fn sn_kappa_cells(m: u32, grid: &EvaluationGrid, prec: Precision) -> Result<Vec<(usize, Rational, Float)>> {
    let bands = build_bands(m)?;
    let parallels = build_parallels(m)?;
    let nk = n_kappa(m, prec);
    let jobs: Vec<(usize, Rational)> = bands[..m as usize]
        .iter()
        .flat_map(|b| grid.heights(m, b).into_iter().map(move |c| (b.j, c)))
        .collect();
    jobs.into_par_iter()
        .map(|(l, c)| {
            let v = s_n(&prec.float(&c), &parallels)? + &nk;
            Ok((l, c, v))
        })
        .collect()
}

/// `-1 <= S_N + N kappa - T(l) <= 2(1 - log 2)/l + 1/15` for heights in
/// bands `l <= M`.
pub fn verify_sn_kappa_window(m: u32, grid: &EvaluationGrid, prec: Precision, informational: bool) -> Result<VerificationReport> {
    let info = gate(m, informational)?;
    let one_minus_ln2 = prec.float(1) - ln2(prec);
    let mut cells = Vec::new();
    for (l, c, v) in sn_kappa_cells(m, grid, prec)? {
        let x = v - prec.float(t_ell(l, m)?);
        let ps = params(&[("M", m.to_string()), ("l", l.to_string()), ("c", rational_string(&c))]);
        let upper = Float::with_val(prec.bits(), &one_minus_ln2 * 2u32) / l as u32 + prec.float(Rational::from((1, 15)));
        cells.push(VerificationCell::new(ps.clone(), Side::Lower, prec.float(-1), x.clone()));
        cells.push(VerificationCell::new(ps, Side::Upper, x, upper));
    }
    Ok(VerificationReport::new(
        "sn_kappa_window",
        "M >= 5, height in band l <= M",
        [m, m],
        format!("bands 1..{m}; {}", grid.describe()),
        info,
        cells,
        vec![],
    ))
}

/// `-1 + log((M+1)/(l+1))/3 <= S_N + N kappa <= log(M/l)/3 + 2(1 - log 2)/l + 1/4`.
pub fn verify_sn_kappa_chain(m: u32, grid: &EvaluationGrid, prec: Precision, informational: bool) -> Result<VerificationReport> {
    let info = gate(m, informational)?;
    let one_minus_ln2 = prec.float(1) - ln2(prec);
    let mut cells = Vec::new();
    for (l, c, v) in sn_kappa_cells(m, grid, prec)? {
        let ps = params(&[("M", m.to_string()), ("l", l.to_string()), ("c", rational_string(&c))]);
        let lower = prec.float(Rational::from((m + 1, l as u32 + 1))).ln() / 3u32 - 1u32;
        let upper = prec.float(Rational::from((m, l as u32))).ln() / 3u32
            + Float::with_val(prec.bits(), &one_minus_ln2 * 2u32) / l as u32
            + prec.float(0.25);
        cells.push(VerificationCell::new(ps.clone(), Side::Lower, lower, v.clone()));
        cells.push(VerificationCell::new(ps, Side::Upper, v, upper));
    }
    Ok(VerificationReport::new(
        "sn_kappa_chain",
        "M >= 5, height in band l <= M",
        [m, m],
        format!("bands 1..{m}; {}", grid.describe()),
        info,
        cells,
        vec![],
    ))
}

/// `log((M+1)/(l+1))/3 <= T(l) <= log(M/l)/3 + 1/6` for `l = 1..=M`.
pub fn verify_t_ell_bounds(m: u32, prec: Precision) -> Result<VerificationReport> {
    let mut cells = Vec::new();
    for l in 1..=m {
        let t = prec.float(t_ell(l as usize, m)?);
        let ps = params(&[("M", m.to_string()), ("l", l.to_string())]);
        let lower = prec.float(Rational::from((m + 1, l + 1))).ln() / 3u32;
        let upper = prec.float(Rational::from((m, l))).ln() / 3u32 + prec.float(Rational::from((1, 6)));
        cells.push(VerificationCell::new(ps.clone(), Side::Lower, lower, t.clone()));
        cells.push(VerificationCell::new(ps, Side::Upper, t, upper));
    }
    Ok(VerificationReport::new(
        "t_ell_bounds",
        "1 <= l <= M",
        [m, m],
        format!("l = 1..{m}, exact T(l)"),
        false,
        cells,
        vec![],
    ))
}

/// True when the point at height `c` and azimuth `turn` belongs to the
/// phase-free construction.
fn on_point_set(c: &Rational, turn: &Rational, parallels: &[ParallelSpec]) -> bool {
    parallels.iter().any(|s| {
        s.h == *c && s.phase == 0.0 && Rational::from(turn * s.r).denom() == &1u32
    })
}

/// Upper bounds on `log prod_k |q - p_k|` for `q` in bands `l <= M`:
/// `S_N + log 2 + 1/2` and `log 2 - N kappa + log(M/l)/3 + 3/4 + (2/l)(1 - log 2)`.
pub fn verify_numerator(m: u32, grid: &EvaluationGrid, prec: Precision, informational: bool) -> Result<(VerificationReport, VerificationReport)> {
    let info = gate(m, informational)?;
    let bands = build_bands(m)?;
    let parallels = build_parallels(m)?;
    let nk = n_kappa(m, prec);
    let two_pi = prec.pi() * 2u32;
    let one_minus_ln2 = prec.float(1) - ln2(prec);
    let turns = grid.azimuth_turns();
    let mut jobs = Vec::new();
    let mut notes = Vec::new();
    for b in &bands[..m as usize] {
        for c in grid.heights(m, b) {
            for t in &turns {
                if on_point_set(&c, t, &parallels) {
                    notes.push(format!(
                        "M={m} l={} c={} azimuth={} turn: coincides with a point of the set, skipped",
                        b.j,
                        rational_string(&c),
                        rational_string(t)
                    ));
                } else {
                    jobs.push((b.j, c.clone(), t.clone()));
                }
            }
        }
    }
    let rows: Vec<Result<(VerificationCell, VerificationCell)>> = jobs
        .into_par_iter()
        .map(|(l, c, t)| {
            let cf = prec.float(&c);
            let az = Float::with_val(prec.bits(), &two_pi * prec.float(&t));
            let q = SpherePoint::from_height_azimuth(&cf, &az);
            let lhs = log_product_to_set(&q, &parallels);
            let sn = s_n(&cf, &parallels)?;
            let ps = params(&[
                ("M", m.to_string()),
                ("l", l.to_string()),
                ("c", rational_string(&c)),
                ("azimuth_turns", rational_string(&t)),
            ]);
            let rhs_sn = sn + ln2(prec) + prec.float(0.5);
            let rhs_exp = ln2(prec) - &nk
                + prec.float(Rational::from((m, l as u32))).ln() / 3u32
                + prec.float(0.75)
                + Float::with_val(prec.bits(), &one_minus_ln2 * 2u32) / l as u32;
            Ok((
                VerificationCell::new(ps.clone(), Side::Upper, lhs.clone(), rhs_sn),
                VerificationCell::new(ps, Side::Upper, lhs, rhs_exp),
            ))
        })
        .collect();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for r in rows {
        let (x, y) = r?;
        a.push(x);
        b.push(y);
    }
    let desc = format!("bands 1..{m}; {}", grid.describe());
    Ok((
        VerificationReport::new(
            "numerator_product_bound",
            "M >= 5, q in band l <= M",
            [m, m],
            desc.clone(),
            info,
            a,
            notes.clone(),
        ),
        VerificationReport::new(
            "numerator_exponential_bound",
            "M >= 5, q in band l <= M",
            [m, m],
            desc,
            info,
            b,
            notes,
        ),
    ))
}

/// Lower bounds on `log prod_{i != p} |p_i - p|` for every point `p` of the
/// set: `S_N(p) + log(2 sqrt2 M) - 1/8` and `log sqrt(2N) - N kappa - 9/8`.
pub fn verify_denominator(m: u32, prec: Precision, informational: bool) -> Result<(VerificationReport, VerificationReport)> {
    let info = gate(m, informational)?;
    let parallels = build_parallels(m)?;
    let n = 4 * m * m;
    let nk = n_kappa(m, prec);
    let jobs: Vec<(usize, u32)> = parallels
        .iter()
        .enumerate()
        .flat_map(|(l, s)| (0..s.r).map(move |k| (l, k)))
        .collect();
    let log_2sqrt2m = (prec.float(8).sqrt() * m).ln();
    let exp_bound = prec.float(2 * n).ln() / 2u32 - &nk - prec.float(Rational::from((9, 8)));
    let rows: Vec<Result<(VerificationCell, VerificationCell)>> = jobs
        .into_par_iter()
        .map(|(l, k)| {
            let spec = &parallels[l];
            let den = point_denominator_log(&parallels, l, k, prec)?;
            let sn = s_n(&prec.float(&spec.h), &parallels)?;
            let ps = params(&[("M", m.to_string()), ("parallel", spec.j.to_string()), ("k", k.to_string())]);
            let lhs_sn = sn + &log_2sqrt2m - prec.float(Rational::from((1, 8)));
            Ok((
                VerificationCell::new(ps.clone(), Side::Lower, lhs_sn, den.clone()),
                VerificationCell::new(ps, Side::Lower, exp_bound.clone(), den),
            ))
        })
        .collect();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for r in rows {
        let (x, y) = r?;
        a.push(x);
        b.push(y);
    }
    let desc = format!("all {n} points of the set");
    Ok((
        VerificationReport::new(
            "denominator_product_bound",
            "M >= 5, p in the set",
            [m, m],
            desc.clone(),
            info,
            a,
            vec![],
        ),
        VerificationReport::new(
            "denominator_exponential_bound",
            "M >= 5, p in the set",
            [m, m],
            desc,
            info,
            b,
            vec![],
        ),
    ))
}

/// Outcome of [`verify_all`]: the reports that ran, and the hypothesis
/// error when gated checks were refused.
#[derive(Debug, Clone)]
pub struct SuiteRun {
    pub reports: Vec<VerificationReport>,
    pub refused: Option<Error>,
}

/// All energy-side checks for one `M`, in a fixed order. Gated checks are
/// refused below the hypothesis unless `informational` is set; the ungated
/// ones always run.
pub fn verify_all(m: u32, grid: &EvaluationGrid, prec: Precision, informational: bool) -> Result<SuiteRun> {
    let (outside, inside) = verify_band_comparisons(m, grid, prec)?;
    let mut reports = vec![outside, inside, verify_t_ell_bounds(m, prec)?];
    if let Err(e) = gate(m, informational) {
        return Ok(SuiteRun {
            reports,
            refused: Some(e),
        });
    }
    reports.push(verify_sn_kappa_window(m, grid, prec, informational)?);
    reports.push(verify_sn_kappa_chain(m, grid, prec, informational)?);
    let (a, b) = verify_numerator(m, grid, prec, informational)?;
    reports.push(a);
    reports.push(b);
    let (c, d) = verify_denominator(m, prec, informational)?;
    reports.push(c);
    reports.push(d);
    Ok(SuiteRun { reports, refused: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prec() -> Precision {
        Precision::default()
    }

    #[test]
    fn grid_is_deterministic_and_inside_band() {
        let g = EvaluationGrid::with_seed(7);
        let bands = build_bands(5).unwrap();
        for b in &bands {
            let a = g.heights(5, b);
            assert_eq!(a, g.heights(5, b));
            assert_eq!(a.len(), 13);
            for c in &a {
                assert!(*c >= b.lower && *c <= b.upper);
            }
        }
        assert_ne!(g.heights(5, &bands[0])[5], EvaluationGrid::with_seed(8).heights(5, &bands[0])[5]);
    }

    #[test]
    fn gated_checks_refuse_small_m() {
        let g = EvaluationGrid::default();
        assert_eq!(
            verify_sn_kappa_window(3, &g, prec(), false).unwrap_err(),
            Error::Hypothesis { m: 3, required: 5 }
        );
        let r = verify_sn_kappa_window(3, &g, prec(), true).unwrap();
        assert!(r.informational);
        assert!(verify_denominator(4, prec(), false).is_err());
    }

    #[test]
    fn m1_equatorial_denominator_informational() {
        let (_, exp) = verify_denominator(1, prec(), true).unwrap();
        assert!(exp.informational);
        let cell = &exp.cells[0];
        assert!((cell.rhs.to_f64() - 4f64.ln()).abs() < 1e-14);
        assert!((cell.lhs.to_f64().exp() - 1.99).abs() < 0.01);
        assert!(exp.pass);
    }

    #[test]
    fn m5_all_pass() {
        let run = verify_all(5, &EvaluationGrid::default(), prec(), false).unwrap();
        assert!(run.refused.is_none());
        let reports = run.reports;
        assert_eq!(reports.len(), 9);
        for r in &reports {
            assert!(r.pass, "{} failed: worst {:?}", r.lemma, r.worst_margin.as_ref().map(|x| x.to_f64()));
            assert!(!r.cells.is_empty());
        }
    }

    #[test]
    fn verify_all_small_m_runs_ungated_checks_only() {
        let refused = verify_all(3, &EvaluationGrid::default(), prec(), false).unwrap();
        assert_eq!(refused.reports.len(), 3);
        assert_eq!(refused.refused, Some(Error::Hypothesis { m: 3, required: 5 }));
        let info = verify_all(3, &EvaluationGrid::default(), prec(), true).unwrap();
        assert_eq!(info.reports.len(), 9);
        assert!(info.reports[3..].iter().all(|r| r.informational));
    }

    #[test]
    fn coincident_grid_points_are_noted() {
        let (a, _) = verify_numerator(5, &EvaluationGrid::default(), prec(), false).unwrap();
        // the band centre at azimuth 0 sits on a point of every northern parallel
        assert!(a.notes.len() >= 5);
        assert!(a.notes[0].contains("skipped"));
    }

    #[test]
    fn polar_band_at_pole_is_an_equality() {
        // band [-1, -1 + 2/49] seen from its own pole: eps / (1 + h) = 1
        let h = Rational::from((-48, 49));
        let b = BandGeometry::new(h, Rational::from((1, 49)), Rational::from(-1)).unwrap();
        let (_, upper) = comparison_outside_margin(&b, prec()).unwrap();
        assert!(upper.clone().abs() < Float::with_val(64, 1e-60));
        let cell = VerificationCell::new(BTreeMap::new(), Side::Upper, Float::with_val(prec().bits(), 0), upper);
        let r = VerificationReport::new("x", "", [7, 7], String::new(), false, vec![cell], vec![]);
        assert!(r.pass);
        assert_eq!(r.tolerance, Float::with_val(64, 2f64.powi(32 - prec().bits() as i32)));
    }

    #[test]
    fn tolerance_does_not_hide_real_violations() {
        let p = prec().bits();
        let cell = VerificationCell::new(BTreeMap::new(), Side::Upper, Float::with_val(p, 1e-40), Float::with_val(p, 0));
        let r = VerificationReport::new("x", "", [5, 5], String::new(), false, vec![cell], vec![]);
        assert!(!r.pass);
    }
}
