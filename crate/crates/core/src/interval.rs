//! Closed real intervals with outward rounding.
//!
//! Endpoints are MPFR floats; every operation rounds the lower endpoint
//! toward -inf and the upper endpoint toward +inf. MPFR's elementary functions
//! are correctly rounded, so a directed-rounding evaluation of a monotone
//! function at an endpoint is a valid bound on the true value there.

use std::cmp::Ordering;
use std::fmt;

use rug::float::{Constant, Round};
use rug::ops::{AssignRound, Pow};
use rug::{Complete, Float, Rational};

use crate::precision::{float_string, Precision};

#[derive(Clone, PartialEq)]
pub struct Interval {
    lo: Float,
    hi: Float,
}

fn down<T>(prec: u32, v: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    let mut f = Float::new(prec);
    let _ = f.assign_round(v, Round::Down);
    f
}

fn up<T>(prec: u32, v: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    let mut f = Float::new(prec);
    let _ = f.assign_round(v, Round::Up);
    f
}

impl Interval {
    /// Interval from explicit endpoints; panics if `lo > hi`.
    pub fn new(lo: Float, hi: Float) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    /// Degenerate interval holding an exactly representable value.
    pub fn point(x: Float) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn from_rational(q: &Rational, prec: Precision) -> Self {
        let p = prec.bits();
        Interval {
            lo: down(p, q),
            hi: up(p, q),
        }
    }

    pub fn from_i64(n: i64, prec: Precision) -> Self {
        let p = prec.bits();
        Interval {
            lo: down(p, n),
            hi: up(p, n),
        }
    }

    pub fn pi(prec: Precision) -> Self {
        let p = prec.bits();
        Interval {
            lo: down(p, Constant::Pi),
            hi: up(p, Constant::Pi),
        }
    }

    pub fn ln2(prec: Precision) -> Self {
        let p = prec.bits();
        Interval {
            lo: down(p, Constant::Log2),
            hi: up(p, Constant::Log2),
        }
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    fn prec(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    pub fn width(&self) -> Float {
        up(self.prec(), &self.hi - &self.lo)
    }

    pub fn contains(&self, x: &Float) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rational(&self, q: &Rational) -> bool {
        self.lo.partial_cmp(q) != Some(Ordering::Greater)
            && self.hi.partial_cmp(q) != Some(Ordering::Less)
    }

    /// True when every element is `<= bound`.
    pub fn certainly_le(&self, bound: &Interval) -> bool {
        self.hi <= bound.lo
    }

    /// True when every element is `> bound`.
    pub fn certainly_gt(&self, bound: &Interval) -> bool {
        self.lo > bound.hi
    }

    pub fn add(&self, o: &Interval) -> Interval {
        let p = self.prec().max(o.prec());
        Interval {
            lo: down(p, &self.lo + &o.lo),
            hi: up(p, &self.hi + &o.hi),
        }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        let p = self.prec().max(o.prec());
        Interval {
            lo: down(p, &self.lo - &o.hi),
            hi: up(p, &self.hi - &o.lo),
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let p = self.prec().max(o.prec());
        let pairs = [
            (&self.lo, &o.lo),
            (&self.lo, &o.hi),
            (&self.hi, &o.lo),
            (&self.hi, &o.hi),
        ];
        let lo = pairs
            .iter()
            .map(|(a, b)| down(p, *a * *b))
            .min_by(|a, b| a.partial_cmp(b).unwrap())
            .unwrap();
        let hi = pairs
            .iter()
            .map(|(a, b)| up(p, *a * *b))
            .max_by(|a, b| a.partial_cmp(b).unwrap())
            .unwrap();
        Interval { lo, hi }
    }

    /// Division; the divisor must not contain zero.
    pub fn div(&self, o: &Interval) -> Interval {
        assert!(
            o.lo > 0 || o.hi < 0,
            "interval division by an interval containing zero"
        );
        let p = self.prec().max(o.prec());
        let pairs = [
            (&self.lo, &o.lo),
            (&self.lo, &o.hi),
            (&self.hi, &o.lo),
            (&self.hi, &o.hi),
        ];
        let lo = pairs
            .iter()
            .map(|(a, b)| down(p, *a / *b))
            .min_by(|a, b| a.partial_cmp(b).unwrap())
            .unwrap();
        let hi = pairs
            .iter()
            .map(|(a, b)| up(p, *a / *b))
            .max_by(|a, b| a.partial_cmp(b).unwrap())
            .unwrap();
        Interval { lo, hi }
    }

    pub fn mul_rational(&self, q: &Rational) -> Interval {
        self.mul(&Interval::from_rational(q, Precision::new(self.prec()).unwrap()))
    }

    /// Square of the interval (tight when the interval straddles zero).
    pub fn square(&self) -> Interval {
        let p = self.prec();
        if self.lo >= 0 {
            Interval {
                lo: down(p, self.lo.square_ref()),
                hi: up(p, self.hi.square_ref()),
            }
        } else if self.hi <= 0 {
            self.neg().square()
        } else {
            let m = if self.lo.cmp_abs(&self.hi) == Some(Ordering::Greater) {
                &self.lo
            } else {
                &self.hi
            };
            Interval {
                lo: Float::new(p),
                hi: up(p, m.square_ref()),
            }
        }
    }

    /// Square root; negative lower endpoints are clamped to zero.
    pub fn sqrt(&self) -> Interval {
        assert!(self.hi >= 0, "sqrt of a negative interval");
        let p = self.prec();
        let lo = if self.lo > 0 {
            down(p, self.lo.sqrt_ref())
        } else {
            Float::new(p)
        };
        Interval {
            lo,
            hi: up(p, self.hi.sqrt_ref()),
        }
    }

    /// Natural logarithm; the interval must be strictly positive.
    pub fn ln(&self) -> Interval {
        assert!(self.lo > 0, "ln of a non-positive interval");
        let p = self.prec();
        Interval {
            lo: down(p, self.lo.ln_ref()),
            hi: up(p, self.hi.ln_ref()),
        }
    }

    pub fn exp(&self) -> Interval {
        let p = self.prec();
        Interval {
            lo: down(p, self.lo.exp_ref()),
            hi: up(p, self.hi.exp_ref()),
        }
    }

    /// Positive k-th root of a nonnegative interval.
    pub fn root(&self, k: u32) -> Interval {
        assert!(self.lo >= 0, "root of a negative interval");
        let p = self.prec();
        Interval {
            lo: down(p, self.lo.root_ref(k)),
            hi: up(p, self.hi.root_ref(k)),
        }
    }

    /// Integer power of a nonnegative interval.
    pub fn pow_u(&self, k: u32) -> Interval {
        assert!(self.lo >= 0, "pow_u of a negative interval");
        let p = self.prec();
        Interval {
            lo: down(p, (&self.lo).pow(k)),
            hi: up(p, (&self.hi).pow(k)),
        }
    }

    pub fn max(&self, o: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().max(&o.lo),
            hi: self.hi.clone().max(&o.hi),
        }
    }

    /// Enclosure of `cos(2*pi*turn)` for a rational number of turns.
    ///
    /// Multiples of a quarter turn are exact. Otherwise the angle is enclosed
    /// as `[t_lo, t_hi]` and, since cos is 1-Lipschitz,
    /// `cos(theta)` lies in `[cos_down(t_lo) - w, cos_up(t_lo) + w]` with
    /// `w >= t_hi - t_lo`.
    pub fn cos_turn(turn: &Rational, prec: Precision) -> Interval {
        let p = prec.bits();
        let mut frac = turn.clone();
        let floor = frac.floor_ref().complete();
        frac -= floor;
        let quarter = frac.clone() * 4u32;
        if *quarter.denom() == 1 {
            let v: i64 = match quarter.numer().to_i32().unwrap() {
                0 => 1,
                1 | 3 => 0,
                2 => -1,
                _ => unreachable!(),
            };
            return Interval::from_i64(v, prec);
        }
        let angle = Interval::pi(prec).mul_rational(&(frac * 2u32));
        let w = angle.width();
        let cos_lo = down(p, angle.lo.cos_ref());
        let cos_hi = up(p, angle.lo.cos_ref());
        let one = Float::with_val(p, 1);
        let lo = down(p, &cos_lo - &w).max(&-one.clone());
        let hi = up(p, &cos_hi + &w).min(&one);
        Interval { lo, hi }
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", float_string(&self.lo), float_string(&self.hi))
    }
}
