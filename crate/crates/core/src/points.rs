//! The spherical point set of degree `N = 4M^2`: `2M - 1` parallels, `r_j`
//! equally spaced points on the parallel of height `h_j`, and the bands
//! `B_j` of relative area `r_j / N` centred on each parallel.
//!
//! Heights, band boundaries and areas are exact rationals. Coordinates are
//! materialized at a caller-chosen precision.

use rug::{Complex, Float, Rational};
use serde::Serialize;

use crate::error::{precondition, Error, Result};
use crate::precision::{serde_float, serde_rational, Precision};

/// One parallel of the construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParallelSpec {
    /// 1-based index, north to south.
    pub j: usize,
    #[serde(with = "serde_rational")]
    pub h: Rational,
    pub r: u32,
    /// Azimuth of the first point, radians.
    pub phase: f64,
}

/// Band `B_j = { H_j <= z <= H_{j-1} }`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandSpec {
    pub j: usize,
    /// `H_j`
    #[serde(with = "serde_rational")]
    pub lower: Rational,
    /// `H_{j-1}`
    #[serde(with = "serde_rational")]
    pub upper: Rational,
    /// Relative area `(H_{j-1} - H_j) / 2`.
    #[serde(with = "serde_rational")]
    pub area: Rational,
}

impl BandSpec {
    /// Central height `(H_{j-1} + H_j) / 2`.
    pub fn center(&self) -> Rational {
        Rational::from(&self.lower + &self.upper) / 2u32
    }

    /// Half-width, equal to the relative area.
    pub fn half_width(&self) -> &Rational {
        &self.area
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpherePoint {
    #[serde(with = "serde_float")]
    pub x: Float,
    #[serde(with = "serde_float")]
    pub y: Float,
    #[serde(with = "serde_float")]
    pub z: Float,
}

impl SpherePoint {
    pub fn new(x: Float, y: Float, z: Float) -> Self {
        SpherePoint { x, y, z }
    }

    /// Point at `height` and `azimuth` on the unit sphere.
    pub fn from_height_azimuth(height: &Float, azimuth: &Float) -> Self {
        let prec = height.prec().max(azimuth.prec());
        let radius = Float::with_val(prec, 1 - Float::with_val(prec, height.square_ref())).sqrt();
        let (s, c) = Float::with_val(prec, azimuth).sin_cos(Float::new(prec));
        SpherePoint {
            x: Float::with_val(prec, &radius * &c),
            y: radius * s,
            z: Float::with_val(prec, height),
        }
    }

    pub fn prec(&self) -> u32 {
        self.x.prec()
    }

    pub fn height(&self) -> &Float {
        &self.z
    }

    pub fn azimuth(&self) -> Float {
        Float::with_val(self.prec(), self.y.atan2_ref(&self.x))
    }

    pub fn distance_sq(&self, o: &SpherePoint) -> Float {
        let p = self.prec().max(o.prec());
        let dx = Float::with_val(p, &self.x - &o.x);
        let dy = Float::with_val(p, &self.y - &o.y);
        let dz = Float::with_val(p, &self.z - &o.z);
        dx.square() + dy.square() + dz.square()
    }

    pub fn distance(&self, o: &SpherePoint) -> Float {
        self.distance_sq(o).sqrt()
    }

    /// `x^2 + y^2 + z^2 - 1`.
    pub fn norm_defect(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.x.square_ref()) + Float::with_val(p, self.y.square_ref())
            + Float::with_val(p, self.z.square_ref())
            - 1
    }
}

/// The full configuration for a given `M`.
#[derive(Debug, Clone)]
pub struct PointSet {
    m: u32,
    parallels: Vec<ParallelSpec>,
    bands: Vec<BandSpec>,
    points: Vec<Vec<SpherePoint>>,
    prec: Precision,
}

impl PointSet {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> usize {
        4 * (self.m as usize).pow(2)
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn parallels(&self) -> &[ParallelSpec] {
        &self.parallels
    }

    pub fn bands(&self) -> &[BandSpec] {
        &self.bands
    }

    /// Points grouped by parallel: `points()[j - 1][k]` is `p_{j,k}`.
    pub fn points(&self) -> &[Vec<SpherePoint>] {
        &self.points
    }

    /// All points with their (1-based) parallel index, in parallel order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &SpherePoint)> {
        self.points
            .iter()
            .zip(&self.parallels)
            .flat_map(|(pts, spec)| pts.iter().map(move |p| (spec.j, p)))
    }

    pub fn len(&self) -> usize {
        self.points.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Band index containing `q`, with the boundary convention of [`band_of`].
    pub fn band_of(&self, q: &SpherePoint) -> usize {
        band_of(q, &self.bands)
    }
}

fn check_m(m: u32) -> Result<()> {
    if m == 0 {
        Err(Error::ZeroM)
    } else {
        Ok(())
    }
}

/// `2M - 1` parallels with `r_j = 4 min(j, 2M - j)` and
/// `h_j = 1 - j^2/M^2` (north), `-1 + (2M - j)^2/M^2` (south).
pub fn build_parallels(m: u32) -> Result<Vec<ParallelSpec>> {
    check_m(m)?;
    let m2 = Rational::from(m * m);
    Ok((1..2 * m)
        .map(|j| {
            let (r, h) = if j <= m {
                (4 * j, 1 - Rational::from(j * j) / &m2)
            } else {
                let k = 2 * m - j;
                (4 * k, Rational::from(k * k) / &m2 - 1)
            };
            ParallelSpec {
                j: j as usize,
                h,
                r,
                phase: 0.0,
            }
        })
        .collect())
}

/// Band boundaries `H_0 = 1 > H_1 > ... > H_{2M-1} = -1`.
pub fn band_boundaries(m: u32) -> Result<Vec<Rational>> {
    check_m(m)?;
    let m2 = Rational::from(m * m);
    Ok((0..2 * m)
        .map(|j| {
            if j < m {
                1 - Rational::from(j * (j + 1)) / &m2
            } else {
                Rational::from((2 * m - j - 1) * (2 * m - j)) / &m2 - 1
            }
        })
        .collect())
}

pub fn build_bands(m: u32) -> Result<Vec<BandSpec>> {
    let hs = band_boundaries(m)?;
    Ok(hs
        .windows(2)
        .enumerate()
        .map(|(i, w)| BandSpec {
            j: i + 1,
            lower: w[1].clone(),
            upper: w[0].clone(),
            area: Rational::from(&w[0] - &w[1]) / 2u32,
        })
        .collect())
}

/// Points of one parallel at the given precision.
pub fn parallel_points(spec: &ParallelSpec, prec: Precision) -> Vec<SpherePoint> {
    let h = prec.float(&spec.h);
    let phase = prec.float(spec.phase);
    let two_pi = prec.pi() * 2u32;
    (0..spec.r)
        .map(|k| {
            let az = Float::with_val(prec.bits(), &two_pi * k) / spec.r + &phase;
            SpherePoint::from_height_azimuth(&h, &az)
        })
        .collect()
}

/// Builds the point set; `phases`, if given, holds one azimuth offset per
/// parallel in `[0, 2pi/r_j)`. Default phases are all zero.
pub fn build_point_set(m: u32, phases: Option<&[f64]>, prec: Precision) -> Result<PointSet> {
    let mut parallels = build_parallels(m)?;
    if let Some(phases) = phases {
        if phases.len() != parallels.len() {
            return Err(Error::PhaseCount {
                expected: parallels.len(),
                got: phases.len(),
            });
        }
        for (spec, &phase) in parallels.iter_mut().zip(phases) {
            let period = 2.0 * std::f64::consts::PI / spec.r as f64;
            if !(0.0..period).contains(&phase) {
                return Err(Error::PhaseRange {
                    j: spec.j,
                    r: spec.r,
                    phase,
                });
            }
            spec.phase = phase;
        }
    }
    let bands = build_bands(m)?;
    let points = parallels.iter().map(|s| parallel_points(s, prec)).collect();
    Ok(PointSet {
        m,
        parallels,
        bands,
        points,
        prec,
    })
}

/// Projection from the north pole onto the equatorial plane:
/// `(x + iy) / (1 - z)`.
pub fn stereographic(p: &SpherePoint) -> Result<Complex> {
    let prec = p.prec();
    let denom = Float::with_val(prec, 1 - &p.z);
    if denom.is_zero() {
        return Err(Error::PointAtInfinity);
    }
    let re = Float::with_val(prec, &p.x / &denom);
    let im = Float::with_val(prec, &p.y / &denom);
    Ok(Complex::with_val(prec, (re, im)))
}

pub fn inverse_stereographic(z: &Complex) -> SpherePoint {
    let prec = z.prec().0.max(z.prec().1);
    let s = Float::with_val(prec, z.real().square_ref()) + Float::with_val(prec, z.imag().square_ref());
    let denom = Float::with_val(prec, &s + 1u32);
    SpherePoint {
        x: Float::with_val(prec, z.real() * 2u32) / &denom,
        y: Float::with_val(prec, z.imag() * 2u32) / &denom,
        z: Float::with_val(prec, &s - 1u32) / denom,
    }
}

/// `rho(h) = sqrt((1 + h) / (1 - h))`, the modulus of the stereographic image
/// of the parallel at height `h`.
pub fn rho(h: &Float) -> Float {
    let p = h.prec();
    (Float::with_val(p, 1 + h) / Float::with_val(p, 1 - h)).sqrt()
}

fn band_index<F>(bands: &[BandSpec], height_ge: F, height_is_nonneg: bool) -> usize
where
    F: Fn(&Rational, bool) -> bool,
{
    // bands are symmetric about the equator, band M is the equatorial one
    let m = bands.len().div_ceil(2);
    let north = |ge: &dyn Fn(&Rational) -> bool| {
        bands[..m]
            .iter()
            .find(|b| ge(&b.lower))
            .map_or(m, |b| b.j)
    };
    if height_is_nonneg {
        north(&|h| height_ge(h, false))
    } else {
        2 * m - north(&|h| height_ge(h, true))
    }
}

/// Band containing `q`. A height equal to a boundary belongs to the more
/// polar of the two adjacent bands; the equator belongs to `B_M`.
pub fn band_of(q: &SpherePoint, bands: &[BandSpec]) -> usize {
    let c = q.height();
    let nonneg = !c.is_sign_negative() || c.is_zero();
    band_index(
        bands,
        |h, mirrored| {
            if mirrored {
                Float::with_val(c.prec(), -c) >= *h
            } else {
                *c >= *h
            }
        },
        nonneg,
    )
}

/// [`band_of`] for an exact height.
pub fn band_of_height(c: &Rational, bands: &[BandSpec]) -> usize {
    let nonneg = *c >= 0;
    band_index(
        bands,
        |h, mirrored| {
            if mirrored {
                Rational::from(-c) >= *h
            } else {
                c >= h
            }
        },
        nonneg,
    )
}

/// Rejects heights outside `[-1, 1]`.
pub fn check_height(op: &'static str, c: &Float) -> Result<()> {
    if *c > 1 || *c < -1 {
        return Err(precondition(op, format!("height {c} outside [-1, 1]")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn parallels_small_m() {
        let p1 = build_parallels(1).unwrap();
        assert_eq!(p1.len(), 1);
        assert_eq!((p1[0].j, p1[0].r, p1[0].h.clone()), (1, 4, q(0, 1)));

        let p3 = build_parallels(3).unwrap();
        let rs: Vec<u32> = p3.iter().map(|s| s.r).collect();
        let hs: Vec<Rational> = p3.iter().map(|s| s.h.clone()).collect();
        assert_eq!(rs, [4, 8, 12, 8, 4]);
        assert_eq!(hs, [q(8, 9), q(5, 9), q(0, 1), q(-5, 9), q(-8, 9)]);

        let total: u32 = build_parallels(2).unwrap().iter().map(|s| s.r).sum();
        assert_eq!(total, 16);
        assert_eq!(build_parallels(0), Err(Error::ZeroM));
    }

    #[test]
    fn bands_small_m() {
        let b3 = band_boundaries(3).unwrap();
        assert_eq!(b3, [q(1, 1), q(7, 9), q(1, 3), q(-1, 3), q(-7, 9), q(-1, 1)]);
        let p3 = build_parallels(3).unwrap();
        for (b, p) in build_bands(3).unwrap().iter().zip(&p3) {
            assert_eq!(b.center(), p.h);
        }
        let b1 = build_bands(1).unwrap();
        assert_eq!(b1.len(), 1);
        assert_eq!((b1[0].lower.clone(), b1[0].upper.clone()), (q(-1, 1), q(1, 1)));
        assert_eq!(b1[0].area, q(1, 1));
        assert_eq!(build_bands(2).unwrap()[0].area, q(1, 4));
    }

    #[test]
    fn exact_invariants_hold_for_many_m() {
        for m in 1..=20u32 {
            let n = 4 * m * m;
            let ps = build_parallels(m).unwrap();
            let bs = build_bands(m).unwrap();
            assert_eq!(ps.iter().map(|s| s.r).sum::<u32>(), n);
            let mut area = Rational::new();
            for (p, b) in ps.iter().zip(&bs) {
                let nu = Rational::from((p.r, n));
                assert_eq!(b.area, nu);
                assert_eq!(Rational::from(&p.h - &b.lower), nu);
                assert_eq!(Rational::from(&b.upper - &p.h), nu);
                area += &b.area;
                let mirror = &ps[2 * m as usize - 1 - p.j];
                assert_eq!(mirror.r, p.r);
                assert_eq!(Rational::from(-&mirror.h), p.h);
            }
            assert_eq!(area, 1);
            assert_eq!(ps[m as usize - 1].h, 0);
        }
    }

    #[test]
    fn m1_points_are_axis_points() {
        let prec = Precision::default();
        let set = build_point_set(1, None, prec).unwrap();
        let expect = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)];
        for (p, (x, y)) in set.points()[0].iter().zip(expect) {
            assert!((p.x.to_f64() - x).abs() < 1e-60);
            assert!((p.y.to_f64() - y).abs() < 1e-60);
            assert!(p.z.is_zero());
        }
        let set2 = build_point_set(2, None, prec).unwrap();
        assert_eq!(set2.len(), 16);
        assert_eq!(set2.points()[1].len(), 8);
    }

    #[test]
    fn phases_validated() {
        let prec = Precision::default();
        assert!(matches!(
            build_point_set(2, Some(&[0.0, 0.0]), prec),
            Err(Error::PhaseCount { expected: 3, got: 2 })
        ));
        assert!(matches!(
            build_point_set(2, Some(&[0.0, 1.0, 0.0]), prec),
            Err(Error::PhaseRange { j: 2, .. })
        ));
        let set = build_point_set(2, Some(&[0.1, 0.2, 0.3]), prec).unwrap();
        let az = set.points()[1][0].azimuth().to_f64();
        assert!((az - 0.2).abs() < 1e-15);
    }

    #[test]
    fn min_distance_positive_and_on_sphere() {
        let prec = Precision::default();
        for m in 1..=4 {
            let set = build_point_set(m, None, prec).unwrap();
            let pts: Vec<&SpherePoint> = set.iter().map(|(_, p)| p).collect();
            for (i, a) in pts.iter().enumerate() {
                assert!(a.norm_defect().abs() < 1e-70);
                for b in &pts[i + 1..] {
                    assert!(a.distance(b) > 1e-3);
                }
            }
        }
    }

    #[test]
    fn stereographic_examples() {
        let prec = Precision::default();
        let p = |x: f64, y: f64, z: f64| SpherePoint::new(prec.float(x), prec.float(y), prec.float(z));
        let one = stereographic(&p(1.0, 0.0, 0.0)).unwrap();
        assert_eq!(one.real().to_f64(), 1.0);
        assert!(one.imag().is_zero());
        let zero = stereographic(&p(0.0, 0.0, -1.0)).unwrap();
        assert!(zero.real().is_zero() && zero.imag().is_zero());
        assert_eq!(stereographic(&p(0.0, 0.0, 1.0)), Err(Error::PointAtInfinity));

        let h = prec.float(0.75);
        let pt = SpherePoint::from_height_azimuth(&h, &prec.zero());
        let z = stereographic(&pt).unwrap();
        let s7 = prec.float(7).sqrt();
        assert!(Float::with_val(256, z.real() - &s7).abs() < 1e-70);
        assert!(Float::with_val(256, &s7 - rho(&h)).abs() < 1e-70);

        let back = inverse_stereographic(&Complex::with_val(256, (s7, 0)));
        assert!(Float::with_val(256, back.z - 0.75).abs() < 1e-70);
        let origin = inverse_stereographic(&Complex::new(256));
        assert_eq!(origin.z.to_f64(), -1.0);
        let unit = inverse_stereographic(&Complex::with_val(256, (1, 0)));
        assert_eq!((unit.x.to_f64(), unit.z.to_f64()), (1.0, 0.0));
    }

    #[test]
    fn band_of_examples() {
        let prec = Precision::default();
        for m in 1..=6u32 {
            let bands = build_bands(m).unwrap();
            let eq = SpherePoint::from_height_azimuth(&prec.zero(), &prec.zero());
            assert_eq!(band_of(&eq, &bands), m as usize);
            assert_eq!(band_of_height(&Rational::new(), &bands), m as usize);
            assert_eq!(band_of_height(&q(1, 1), &bands), 1);
            assert_eq!(band_of_height(&q(-1, 1), &bands), 2 * m as usize - 1);
        }
        let bands = build_bands(3).unwrap();
        let at = |c: f64| band_of(&SpherePoint::from_height_azimuth(&prec.float(c), &prec.zero()), &bands);
        assert_eq!(at(0.9), 1);
        assert_eq!(band_of_height(&q(7, 9), &bands), 1);
        assert_eq!(band_of_height(&q(1, 3), &bands), 2);
        assert_eq!(band_of_height(&q(-1, 3), &bands), 4);
        assert_eq!(band_of_height(&q(-7, 9), &bands), 5);
        assert_eq!(at(-0.5), 4);
        assert_eq!(at(0.5), 2);
    }

    #[test]
    fn band_of_agrees_with_inequalities_off_boundary() {
        for m in 1..=7u32 {
            let bands = build_bands(m).unwrap();
            for k in -199i64..=199 {
                let c = q(k, 200);
                if bands.iter().any(|b| b.lower == c || b.upper == c) {
                    continue;
                }
                let l = band_of_height(&c, &bands);
                let b = &bands[l - 1];
                assert!(b.lower <= c && c <= b.upper, "m={m} c={c} band {l}");
            }
        }
    }

    #[test]
    fn symmetry_of_default_point_set() {
        let prec = Precision::default();
        let set = build_point_set(3, None, prec).unwrap();
        let pts: Vec<&SpherePoint> = set.iter().map(|(_, p)| p).collect();
        let tol = Float::with_val(256, 1e-60);
        let has = |x: &Float, y: &Float, z: &Float| {
            pts.iter().any(|p| {
                Float::with_val(256, &p.x - x).abs() < tol
                    && Float::with_val(256, &p.y - y).abs() < tol
                    && Float::with_val(256, &p.z - z).abs() < tol
            })
        };
        for p in &pts {
            assert!(has(&p.x, &p.y, &Float::with_val(256, -&p.z)));
            assert!(has(&Float::with_val(256, -&p.y), &p.x, &p.z));
        }
    }
}
