//! Dyadic arbitrary-precision floats with explicit error bookkeeping.
//!
//! A [`BF`] is mant * 2^exp with a `BigInt` mantissa. Addition, subtraction
//! and multiplication are exact; division and the transcendental functions
//! round and report (or absorb into documented bounds) an error of at most a
//! few ulps at the requested precision. This is all the certification the
//! project needs: every comparison downstream has margins that dwarf the
//! rounding slack, and anything load-bearing is re-verified in exact
//! arithmetic.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BF {
    pub mant: BigInt,
    pub exp: i64,
}

impl BF {
    pub fn zero() -> Self {
        BF { mant: BigInt::zero(), exp: 0 }
    }

    pub fn from_int(n: i64) -> Self {
        BF { mant: BigInt::from(n), exp: 0 }
    }

    pub fn from_bigint(n: BigInt) -> Self {
        BF { mant: n, exp: 0 }
    }

    /// 2^e
    pub fn pow2(e: i64) -> Self {
        BF { mant: BigInt::one(), exp: e }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.sign() == Sign::Minus
    }

    /// floor(log2 |x|) + 1, i.e. position of the top bit; 0 for x = 0.
    pub fn mag(&self) -> i64 {
        if self.is_zero() {
            i64::MIN / 2
        } else {
            self.mant.bits() as i64 + self.exp
        }
    }

    pub fn abs(&self) -> BF {
        BF { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn neg(&self) -> BF {
        BF { mant: -self.mant.clone(), exp: self.exp }
    }

    fn align(a: &BF, b: &BF) -> (BigInt, BigInt, i64) {
        if a.is_zero() {
            return (BigInt::zero(), b.mant.clone(), b.exp);
        }
        if b.is_zero() {
            return (a.mant.clone(), BigInt::zero(), a.exp);
        }
        if a.exp >= b.exp {
            ((&a.mant) << ((a.exp - b.exp) as u64), b.mant.clone(), b.exp)
        } else {
            (a.mant.clone(), (&b.mant) << ((b.exp - a.exp) as u64), a.exp)
        }
    }

    pub fn add(&self, other: &BF) -> BF {
        let (x, y, e) = BF::align(self, other);
        BF { mant: x + y, exp: e }
    }

    pub fn sub(&self, other: &BF) -> BF {
        let (x, y, e) = BF::align(self, other);
        BF { mant: x - y, exp: e }
    }

    pub fn mul(&self, other: &BF) -> BF {
        BF { mant: &self.mant * &other.mant, exp: self.exp + other.exp }
    }

    pub fn mul_i64(&self, k: i64) -> BF {
        BF { mant: &self.mant * BigInt::from(k), exp: self.exp }
    }

    /// Rounds to at most `prec` mantissa bits (round to nearest); the result
    /// differs from self by at most 2^(mag - prec).
    pub fn round_to(&self, prec: u32) -> BF {
        let bits = self.mant.bits() as i64;
        if bits <= prec as i64 {
            return self.clone();
        }
        let drop = (bits - prec as i64) as u64;
        let half = BigInt::one() << (drop - 1);
        let adj = if self.mant.sign() == Sign::Minus { -half } else { half };
        BF { mant: (&self.mant + adj) >> drop, exp: self.exp + drop as i64 }
    }

    /// Division rounded to `prec` significant bits; |error| <= 2 ulp.
    pub fn div(&self, other: &BF, prec: u32) -> BF {
        assert!(!other.is_zero(), "BF division by zero");
        if self.is_zero() {
            return BF::zero();
        }
        let shift = prec as i64 + 4 + other.mant.bits() as i64 - self.mant.bits() as i64;
        let (num, sh) = if shift > 0 {
            ((&self.mant) << (shift as u64), shift)
        } else {
            (self.mant.clone(), 0)
        };
        let q = num / &other.mant;
        BF { mant: q, exp: self.exp - other.exp - sh }.round_to(prec + 2)
    }

    pub fn recip(&self, prec: u32) -> BF {
        BF::from_int(1).div(self, prec)
    }

    pub fn cmp_bf(&self, other: &BF) -> Ordering {
        let d = self.sub(other);
        if d.is_zero() {
            Ordering::Equal
        } else if d.is_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    pub fn from_q(q: &BigRational, prec: u32) -> BF {
        if q.is_zero() {
            return BF::zero();
        }
        let num = BF::from_bigint(q.numer().clone());
        let den = BF::from_bigint(q.denom().clone());
        num.div(&den, prec)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = self.round_to(64);
        r.mant.to_f64().unwrap_or(f64::NAN) * (r.exp as f64).exp2()
    }

    /// Nearest integer together with the distance to the nearest half-integer
    /// boundary (as a lower bound in units of 1); the caller compares that
    /// margin with its own error bound before trusting the rounding.
    pub fn nearest_int(&self) -> (BigInt, BF) {
        if self.exp >= 0 {
            return ((&self.mant) << (self.exp as u64), BF::from_q(&BigRational::new(BigInt::one(), BigInt::from(2)), 8));
        }
        let shift = (-self.exp) as u64;
        let one = BigInt::one() << shift;
        let half: BigInt = &one >> 1u64;
        let adj = if self.mant.sign() == Sign::Minus { -&half } else { half.clone() };
        let n = (&self.mant + adj) / &one;
        let frac = &self.mant - &n * &one; // in (-one/2, one/2]
        let margin = &half - frac.abs();
        (n, BF { mant: margin, exp: self.exp })
    }

    /// sqrt rounded to prec bits; error <= 2 ulp. Requires self >= 0.
    pub fn sqrt(&self, prec: u32) -> BF {
        assert!(!self.is_negative(), "BF sqrt of negative");
        if self.is_zero() {
            return BF::zero();
        }
        // scale so the mantissa has ~2*(prec+4) bits and even exponent
        let want = 2 * (prec as i64 + 4);
        let bits = self.mant.bits() as i64;
        let mut sh = want - bits;
        if (self.exp - sh) % 2 != 0 {
            sh += 1;
        }
        let (m, e) = if sh >= 0 {
            ((&self.mant) << (sh as u64), self.exp - sh)
        } else {
            ((&self.mant) >> ((-sh) as u64), self.exp - sh)
        };
        BF { mant: m.sqrt(), exp: e / 2 }.round_to(prec + 2)
    }
}

/// Complex value with a shared error radius: |true - (re + i im)| <= rad.
#[derive(Debug, Clone)]
pub struct CBall {
    pub re: BF,
    pub im: BF,
    pub rad: BF,
}

impl CBall {
    pub fn exact(re: BF, im: BF) -> Self {
        CBall { re, im, rad: BF::zero() }
    }

    pub fn real(re: BF) -> Self {
        CBall { re, im: BF::zero(), rad: BF::zero() }
    }

    pub fn with_rad(re: BF, im: BF, rad: BF) -> Self {
        CBall { re, im, rad }
    }

    /// Upper bound for the modulus of the midpoint.
    fn mid_bound(&self) -> BF {
        // |re| + |im| over-estimates |mid| by at most sqrt(2)
        self.re.abs().add(&self.im.abs())
    }

    pub fn add(&self, o: &CBall) -> CBall {
        CBall {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
            rad: self.rad.add(&o.rad),
        }
    }

    pub fn sub(&self, o: &CBall) -> CBall {
        CBall {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
            rad: self.rad.add(&o.rad),
        }
    }

    pub fn mul(&self, o: &CBall) -> CBall {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        // |a b - m_a m_b| <= |m_a| r_b + |m_b| r_a + r_a r_b
        let rad = self
            .mid_bound()
            .mul(&o.rad)
            .add(&o.mid_bound().mul(&self.rad))
            .add(&self.rad.mul(&o.rad));
        CBall { re, im, rad }
    }

    pub fn scale_q(&self, q: &BigRational, prec: u32) -> CBall {
        let s = BF::from_q(q, prec);
        let slack = ulp_bound(&s, prec.saturating_sub(2));
        let sb = s.abs().add(&slack);
        CBall {
            re: self.re.mul(&s),
            im: self.im.mul(&s),
            rad: self.rad.mul(&sb).add(&self.mid_bound().add(&self.rad).mul(&slack)),
        }
    }

    /// Rounds midpoint to prec bits, absorbing the rounding into rad.
    pub fn compress(&self, prec: u32) -> CBall {
        let re = self.re.round_to(prec);
        let im = self.im.round_to(prec);
        let err = ulp_bound(&re, prec).add(&ulp_bound(&im, prec));
        CBall { re, im, rad: self.rad.add(&err).round_up_coarse(prec) }
    }

    /// |z|^2 as a BF pair (value, error bound).
    pub fn abs_sq(&self) -> (BF, BF) {
        let v = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        // |(|z|^2 - |m|^2)| <= 2|m| r + r^2
        let err = self
            .mid_bound()
            .mul(&self.rad)
            .mul_i64(2)
            .add(&self.rad.mul(&self.rad));
        (v, err)
    }
}

/// 2^(mag(x) - prec + 1), or zero when x is zero: an upper bound on the
/// rounding error of `x.round_to(prec)`.
pub fn ulp_bound(x: &BF, prec: u32) -> BF {
    if x.is_zero() {
        BF::zero()
    } else {
        BF::pow2(x.mag() - prec as i64 + 1)
    }
}

impl BF {
    /// Coarse upward rounding for error radii: keeps a handful of mantissa
    /// bits, never decreases the value, and keeps exponents sane.
    pub fn round_up_coarse(&self, _prec: u32) -> BF {
        if self.is_zero() {
            return BF::zero();
        }
        debug_assert!(!self.is_negative(), "radius must be nonnegative");
        BF::pow2(self.mag() + 1)
    }
}

// ---- transcendental functions ----
//
// All of these compute at prec + guard internal bits and return values with
// absolute error at most 2^-(prec) (for arguments in the ranges this crate
// uses; magnitudes here are between 2^-40 and 2^60).

const GUARD: u32 = 32;

/// atanh(p/q) for |p/q| <= 1/2 via the odd series, to absolute error 2^-prec.
fn atanh_ratio(p: &BigInt, q: &BigInt, prec: u32) -> BF {
    let wp = prec + GUARD;
    // work with scaled integer arithmetic: result accumulated as mant * 2^-wp
    let scale = BigInt::one() << wp;
    let x = BF { mant: (p * &scale) / q, exp: -(wp as i64) };
    let x2 = x.mul(&x).round_to(wp);
    let mut term = x.clone();
    let mut acc = BF::zero();
    let mut k = 0u32;
    loop {
        let contrib = term.div(&BF::from_int(2 * k as i64 + 1), wp);
        acc = acc.add(&contrib).round_to(wp + 8);
        if contrib.mag() < -(wp as i64) || contrib.is_zero() {
            break;
        }
        term = term.mul(&x2).round_to(wp);
        k += 1;
        assert!(k < 10 * prec, "atanh series failed to converge");
    }
    acc.round_to(wp)
}

pub fn ln2(prec: u32) -> BF {
    atanh_ratio(&BigInt::one(), &BigInt::from(3), prec).mul_i64(2)
}

/// Natural log of a positive BF, absolute error <= 2^-prec.
pub fn ln(x: &BF, prec: u32) -> BF {
    assert!(!x.is_zero() && !x.is_negative(), "ln of non-positive value");
    let wp = prec + GUARD;
    // x = m * 2^k with m in [1, 2)
    let k = x.mag() - 1;
    let m = BF { mant: x.mant.clone(), exp: x.exp - k }; // in [1, 2)
    // ln m = 2 atanh((m-1)/(m+1)), argument in [0, 1/3)
    let num = m.sub(&BF::from_int(1));
    let den = m.add(&BF::from_int(1));
    let r = num.div(&den, wp);
    // convert r to a ratio of integers for the series
    let (p, q) = if r.exp >= 0 {
        (r.mant.clone() << (r.exp as u64), BigInt::one())
    } else {
        (r.mant.clone(), BigInt::one() << ((-r.exp) as u64))
    };
    let lnm = atanh_ratio(&p, &q, wp).mul_i64(2);
    lnm.add(&ln2(wp).mul_i64(k)).round_to(wp)
}

/// pi via Machin's formula, absolute error <= 2^-prec.
pub fn pi(prec: u32) -> BF {
    let wp = prec + GUARD;
    let a = atanh_like_atan(&BigInt::one(), &BigInt::from(5), wp).mul_i64(16);
    let b = atanh_like_atan(&BigInt::one(), &BigInt::from(239), wp).mul_i64(4);
    a.sub(&b).round_to(wp)
}

/// atan(p/q) for |p/q| < 1 via the alternating odd series.
fn atanh_like_atan(p: &BigInt, q: &BigInt, prec: u32) -> BF {
    let wp = prec + GUARD;
    let scale = BigInt::one() << wp;
    let x = BF { mant: (p * &scale) / q, exp: -(wp as i64) };
    let x2 = x.mul(&x).round_to(wp);
    let mut term = x.clone();
    let mut acc = BF::zero();
    let mut k = 0u32;
    loop {
        let contrib = term.div(&BF::from_int(2 * k as i64 + 1), wp);
        if k % 2 == 0 {
            acc = acc.add(&contrib);
        } else {
            acc = acc.sub(&contrib);
        }
        acc = acc.round_to(wp + 8);
        if contrib.mag() < -(wp as i64) || contrib.is_zero() {
            break;
        }
        term = term.mul(&x2).round_to(wp);
        k += 1;
        assert!(k < 40 * prec, "atan series failed to converge");
    }
    acc.round_to(wp)
}

/// atan(x) for any BF, absolute error <= 2^-prec.
pub fn atan(x: &BF, prec: u32) -> BF {
    let wp = prec + GUARD;
    if x.is_zero() {
        return BF::zero();
    }
    if x.is_negative() {
        return atan(&x.neg(), prec).neg();
    }
    // |x| >= 2: atan x = pi/2 - atan(1/x), and 1/x lands strictly below 1
    if x.mag() >= 2 {
        let inv = x.recip(wp);
        let p = pi(wp);
        let half_pi = BF { mant: p.mant, exp: p.exp - 1 };
        return half_pi.sub(&atan(&inv, prec)).round_to(wp);
    }
    // halve until small: atan x = 2 atan(x / (1 + sqrt(1 + x^2)))
    if x.mag() > -3 {
        let x2 = x.mul(x);
        let s = BF::from_int(1).add(&x2).sqrt(wp);
        let y = x.div(&BF::from_int(1).add(&s), wp);
        return atan(&y, prec).mul_i64(2).round_to(wp);
    }
    let (p, q) = if x.exp >= 0 {
        (x.mant.clone() << (x.exp as u64), BigInt::one())
    } else {
        (x.mant.clone(), BigInt::one() << ((-x.exp) as u64))
    };
    atanh_like_atan(&p, &q, wp)
}

/// Principal-branch argument of (re, im), in (-pi, pi]. Error <= 2^-prec.
pub fn atan2(im: &BF, re: &BF, prec: u32) -> BF {
    let wp = prec + GUARD;
    if im.is_zero() {
        return if re.is_negative() { pi(wp) } else { BF::zero() };
    }
    if re.is_zero() {
        let half_pi = {
            let p = pi(wp);
            BF { mant: p.mant, exp: p.exp - 1 }
        };
        return if im.is_negative() { half_pi.neg() } else { half_pi };
    }
    let base = atan(&im.div(re, wp), prec);
    if !re.is_negative() {
        base
    } else if !im.is_negative() {
        base.add(&pi(wp))
    } else {
        base.sub(&pi(wp))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    fn assert_close_to_decimal(x: &BF, digits: &str, tol_exp: i64) {
        // digits like "3.14159..." — compare against the dyadic value
        let parts: Vec<&str> = digits.split('.').collect();
        let scale = parts[1].len() as u32;
        let as_int = BigInt::from_str(&format!("{}{}", parts[0], parts[1])).unwrap();
        let q = BigRational::new(as_int, BigInt::from(10u32).pow(scale));
        let ref_bf = BF::from_q(&q, 400);
        let diff = x.sub(&ref_bf).abs();
        assert!(
            diff.mag() < tol_exp,
            "value {} differs from {} by 2^{}",
            x.to_f64(),
            digits,
            diff.mag()
        );
    }

    #[test]
    fn pi_matches_reference_digits() {
        let p = pi(256);
        assert_close_to_decimal(
            &p,
            "3.14159265358979323846264338327950288419716939937510582097494459230781640628620899",
            -250,
        );
    }

    #[test]
    fn ln2_matches_reference_digits() {
        let l = ln2(256);
        assert_close_to_decimal(
            &l,
            "0.69314718055994530941723212145817656807550013436025525412068000949339362196969471",
            -250,
        );
    }

    #[test]
    fn ln_of_three_matches() {
        let l = ln(&BF::from_int(3), 256);
        assert_close_to_decimal(
            &l,
            "1.09861228866810969139524523692252570464749055782274945173469433363749429321860896",
            -250,
        );
    }

    #[test]
    fn sqrt_three_matches() {
        let s = BF::from_int(3).sqrt(256);
        assert_close_to_decimal(
            &s,
            "1.73205080756887729352744634150587236694280525381038062805580697945193301690880003",
            -250,
        );
    }

    #[test]
    fn atan2_quadrants() {
        let p = pi(128);
        let q3 = atan2(&BF::from_int(-1), &BF::from_int(-1), 128);
        // -3pi/4
        let expect = p.mul_i64(-3).div(&BF::from_int(4), 200);
        assert!(q3.sub(&expect).abs().mag() < -120);
    }

    #[test]
    fn nearest_int_margins() {
        let x = BF::from_q(&BigRational::new(BigInt::from(7), BigInt::from(2)), 128);
        // 3.5 rounds with zero margin to a half-integer
        let (_, margin) = x.nearest_int();
        assert!(margin.mag() <= -120 || margin.is_zero());
        let y = BF::from_q(&BigRational::new(BigInt::from(10), BigInt::from(4)), 128);
        let (n, _) = y.nearest_int();
        assert_eq!(n, BigInt::from(3)); // 2.5 rounds half-up under our convention
    }

    #[test]
    fn division_error_is_small() {
        let a = BF::from_int(1);
        let b = BF::from_int(7);
        let q = a.div(&b, 200);
        let back = q.mul(&BF::from_int(7)).sub(&BF::from_int(1)).abs();
        assert!(back.mag() < -195);
    }
}
