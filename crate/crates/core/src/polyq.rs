//! Dense univariate polynomials over Q, sized for the degree <= 6 work in
//! this project: resultants, discriminants, and factorization over Q of
//! polynomials of degree at most 5 (rational roots, then quadratic-times-
//! something splittings located through divisor pairs of the outer
//! coefficients).

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;
pub type Z = BigInt;

pub fn qz(n: i64) -> Q {
    Q::from_integer(Z::from(n))
}

/// Coefficients in ascending degree order; the zero polynomial is an empty vec.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPoly(pub Vec<Q>);

impl QPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly(coeffs)
    }

    pub fn zero() -> Self {
        QPoly(Vec::new())
    }

    pub fn from_int_coeffs(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| qz(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn lc(&self) -> Q {
        self.0.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.0.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        QPoly::new(out)
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let n = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - other.coeff(i));
        }
        QPoly::new(out)
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Q::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    pub fn scale(&self, s: &Q) -> QPoly {
        QPoly::new(self.0.iter().map(|c| c * s).collect())
    }

    pub fn derivative(&self) -> QPoly {
        if self.0.len() <= 1 {
            return QPoly::zero();
        }
        QPoly::new(
            self.0[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * qz(i as i64 + 1))
                .collect(),
        )
    }

    /// Quotient and remainder; panics if `div` is zero.
    pub fn divrem(&self, div: &QPoly) -> (QPoly, QPoly) {
        assert!(!div.is_zero(), "division by the zero polynomial");
        let mut rem = self.0.clone();
        let d = div.degree();
        if self.is_zero() || self.degree() < d {
            return (QPoly::zero(), self.clone());
        }
        let mut quot = vec![Q::zero(); self.degree() - d + 1];
        let lead = div.lc();
        for i in (d..rem.len()).rev() {
            let c = rem[i].clone();
            if c.is_zero() {
                continue;
            }
            let q = c / &lead;
            quot[i - d] = q.clone();
            for (j, b) in div.0.iter().enumerate() {
                let idx = i - d + j;
                let t = &q * b;
                rem[idx] -= t;
            }
        }
        (QPoly::new(quot), QPoly::new(rem))
    }

    pub fn divides(&self, other: &QPoly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.divrem(self).1.is_zero()
    }

    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            let inv = a.lc().recip();
            a.scale(&inv)
        }
    }

    /// Primitive integer form: clears denominators and the integer content,
    /// with a positive leading coefficient. Returns the coefficient vector.
    pub fn primitive_int(&self) -> Vec<Z> {
        assert!(!self.is_zero());
        let mut den = Z::one();
        for c in &self.0 {
            den = num_integer::lcm(den, c.denom().clone());
        }
        let mut ints: Vec<Z> = self.0.iter().map(|c| (c * Q::from_integer(den.clone())).to_integer()).collect();
        let mut g = Z::zero();
        for c in &ints {
            g = num_integer::gcd(g, c.clone());
        }
        if !g.is_zero() && !g.is_one() {
            for c in ints.iter_mut() {
                *c /= &g;
            }
        }
        if ints.last().map_or(false, |c| c.sign() == Sign::Minus) {
            for c in ints.iter_mut() {
                *c = -c.clone();
            }
        }
        ints
    }
}

/// Resultant of two rational polynomials (Euclidean-remainder form).
pub fn resultant(f: &QPoly, g: &QPoly) -> Q {
    if f.is_zero() || g.is_zero() {
        return Q::zero();
    }
    let (mut a, mut b) = (f.clone(), g.clone());
    let mut acc = Q::one();
    let mut sign_swaps = 0usize;
    loop {
        if b.degree() == 0 {
            // res(a, c) = c^deg(a)
            let mut p = Q::one();
            for _ in 0..a.degree() {
                p *= b.lc();
            }
            return acc * p;
        }
        let (_, r) = a.divrem(&b);
        if r.is_zero() {
            return Q::zero();
        }
        // res(a, b) = (-1)^{da db} lc(b)^{da - dr} res(b, r)
        let mut p = Q::one();
        for _ in 0..(a.degree() - r.degree()) {
            p *= b.lc();
        }
        acc *= p;
        sign_swaps += a.degree() * b.degree();
        a = b;
        b = r;
        if sign_swaps % 2 == 1 {
            acc = -acc;
            sign_swaps = 0;
        }
    }
}

/// Discriminant of f with the classical normalization
/// disc(f) = (-1)^{n(n-1)/2} res(f, f') / lc(f).
pub fn poly_disc(f: &QPoly) -> Q {
    let n = f.degree();
    assert!(n >= 1);
    let r = resultant(f, &f.derivative());
    let s = if (n * (n - 1) / 2) % 2 == 1 { -Q::one() } else { Q::one() };
    s * r / f.lc()
}

pub fn is_rational_square(q: &Q) -> Option<Q> {
    if q.is_zero() {
        return Some(Q::zero());
    }
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

/// Is q the cube of a rational? Returns the cube root when it is.
pub fn rational_cbrt(q: &Q) -> Option<Q> {
    if q.is_zero() {
        return Some(Q::zero());
    }
    let cbrt_int = |z: &Z| -> Option<Z> {
        let neg = z.sign() == Sign::Minus;
        let a = z.abs();
        let r = a.nth_root(3);
        if &r * &r * &r == a {
            Some(if neg { -r } else { r })
        } else {
            None
        }
    };
    let n = cbrt_int(q.numer())?;
    let d = cbrt_int(q.denom())?;
    Some(Q::new(n, d))
}

fn divisors(n: &Z) -> Vec<Z> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = Z::one();
    loop {
        let dd = &d * &d;
        if dd > n {
            break;
        }
        if (&n % &d).is_zero() {
            small.push(d.clone());
            if dd != n {
                large.push(&n / &d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// All rational roots of f, with multiplicity stripped to one each.
pub fn rational_roots(f: &QPoly) -> Vec<Q> {
    if f.is_zero() {
        return Vec::new();
    }
    let ints = f.primitive_int();
    // strip powers of x
    let shift = ints.iter().position(|c| !c.is_zero()).unwrap();
    let mut roots = Vec::new();
    if shift > 0 {
        roots.push(Q::zero());
    }
    let ints = &ints[shift..];
    if ints.len() <= 1 {
        return roots;
    }
    let lead = ints.last().unwrap();
    let tail = &ints[0];
    for p in divisors(tail) {
        for q in divisors(lead) {
            for sgn in [1i64, -1] {
                let cand = Q::new(p.clone() * Z::from(sgn), q.clone());
                if f.eval(&cand).is_zero() && !roots.contains(&cand) {
                    roots.push(cand.clone());
                }
            }
        }
    }
    roots
}

/// Factors f into irreducible factors over Q (degree <= 5 supported, which is
/// all this project needs). Returns (constant, monic irreducible factors with
/// multiplicity).
pub fn factor_q(f: &QPoly) -> (Q, Vec<QPoly>) {
    assert!(!f.is_zero());
    let mut constant = f.lc();
    let inv = constant.recip();
    let mut rest = f.scale(&inv);
    let mut factors = Vec::new();
    // rational linear factors first
    loop {
        let roots = rational_roots(&rest);
        if roots.is_empty() {
            break;
        }
        for r in roots {
            let lin = QPoly::new(vec![-r.clone(), Q::one()]);
            loop {
                let (q, rem) = rest.divrem(&lin);
                if rem.is_zero() {
                    factors.push(lin.clone());
                    rest = q;
                } else {
                    break;
                }
            }
        }
        break;
    }
    if rest.degree() >= 2 {
        factor_nonlinear(&rest, &mut factors);
    }
    // `rest` was monic throughout, so the constant is just the original lc
    let _ = &mut constant;
    (constant, factors)
}

fn factor_nonlinear(f: &QPoly, out: &mut Vec<QPoly>) {
    match f.degree() {
        2 => {
            if let Some(s) = is_rational_square(&poly_disc(f)) {
                // monic quadratic with rational roots (should have been caught,
                // unless the square root is exact but roots were missed)
                let b = f.coeff(1);
                let r1 = (-&b + &s) / qz(2);
                let r2 = (-&b - &s) / qz(2);
                out.push(QPoly::new(vec![-r1, Q::one()]));
                out.push(QPoly::new(vec![-r2, Q::one()]));
            } else {
                out.push(f.clone());
            }
        }
        3 => {
            // no rational root remains, so irreducible
            out.push(f.clone());
        }
        4 => {
            if let Some((a, b)) = split_quartic(f) {
                factor_nonlinear(&a, out);
                factor_nonlinear(&b, out);
            } else {
                out.push(f.clone());
            }
        }
        5 => {
            if let Some((a, b)) = split_quintic_23(f) {
                factor_nonlinear(&a, out);
                factor_nonlinear(&b, out);
            } else {
                out.push(f.clone());
            }
        }
        d => panic!("factor_q: unsupported degree {d}"),
    }
}

/// Try to write a monic quartic without rational roots as a product of two
/// rational quadratics; returns monic factors.
fn split_quartic(f: &QPoly) -> Option<(QPoly, QPoly)> {
    let ints = f.primitive_int();
    let (e4, e3, e2, e1, e0) = (
        ints[4].clone(),
        ints[3].clone(),
        ints[2].clone(),
        ints[1].clone(),
        ints[0].clone(),
    );
    // (a x^2 + b x + c)(d x^2 + e x + g), ad = e4, cg = e0
    for a in divisors(&e4) {
        let d = &e4 / &a;
        for c in divisors(&e0) {
            for csgn in [1i64, -1] {
                let c = &c * Z::from(csgn);
                let g = &e0 / &c;
                // unknowns b, e:
                //   d b + a e = e3
                //   g b + c e = e1
                //   c d + b e + a g = e2
                let det = &d * &c - &a * &g;
                if !det.is_zero() {
                    let bn = &e3 * &c - &a * &e1;
                    let en = &d * &e1 - &e3 * &g;
                    if (&bn % &det).is_zero() && (&en % &det).is_zero() {
                        let b = bn / &det;
                        let e = en / &det;
                        if &c * &d + &b * &e + &a * &g == e2 {
                            let p = QPoly::new(vec![
                                Q::from_integer(c.clone()),
                                Q::from_integer(b),
                                Q::from_integer(a.clone()),
                            ]);
                            let q = QPoly::new(vec![
                                Q::from_integer(g),
                                Q::from_integer(e),
                                Q::from_integer(d),
                            ]);
                            return Some((monicize(&p), monicize(&q)));
                        }
                    }
                } else {
                    // degenerate: (b, e) constrained to a line; use the middle
                    // equation. b e = e2 - cd - ag with d b + a e = e3.
                    if d.is_zero() || a.is_zero() {
                        continue;
                    }
                    // b = (e3 - a e)/d; substitute into b e = m
                    let m = &e2 - &c * &d - &a * &g;
                    // (e3 - a e) e = m d  =>  a e^2 - e3 e + m d = 0
                    let disc = &e3 * &e3 - Z::from(4) * &a * &m * &d;
                    if disc.sign() == Sign::Minus {
                        continue;
                    }
                    let s = disc.sqrt();
                    if &s * &s != disc {
                        continue;
                    }
                    for pm in [1i64, -1] {
                        let num = &e3 + Z::from(pm) * &s;
                        let den = Z::from(2) * &a;
                        if (&num % &den).is_zero() {
                            let e = num / &den;
                            let bn = &e3 - &a * &e;
                            if (&bn % &d).is_zero() {
                                let b = bn / &d;
                                // check the x^1 equation too
                                if &g * &b + &c * &e == e1 {
                                    let p = QPoly::new(vec![
                                        Q::from_integer(c.clone()),
                                        Q::from_integer(b),
                                        Q::from_integer(a.clone()),
                                    ]);
                                    let q = QPoly::new(vec![
                                        Q::from_integer(g.clone()),
                                        Q::from_integer(e),
                                        Q::from_integer(d.clone()),
                                    ]);
                                    return Some((monicize(&p), monicize(&q)));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

/// Try to split a monic quintic without rational roots into quadratic * cubic.
fn split_quintic_23(f: &QPoly) -> Option<(QPoly, QPoly)> {
    let ints = f.primitive_int();
    let e: Vec<Z> = ints;
    // (a x^2 + b x + c)(d3 x^3 + d2 x^2 + d1 x + d0)
    for a in divisors(&e[5]) {
        let d3 = &e[5] / &a;
        for c in divisors(&e[0]) {
            for csgn in [1i64, -1] {
                let c = &c * Z::from(csgn);
                let d0 = &e[0] / &c;
                // coefficient equations, unknowns b, d2, d1:
                //   x^4: a d2 + b d3            = e4
                //   x^3: a d1 + b d2 + c d3     = e3
                //   x^2: a d0 + b d1 + c d2     = e2
                //   x^1:        b d0 + c d1     = e1
                // Solve x^4 and x^1 for d2, d1 in terms of b, then check the rest.
                // d2 = (e4 - b d3)/a, d1 = (e1 - b d0)/c  (a, c nonzero)
                if a.is_zero() || c.is_zero() {
                    continue;
                }
                // substitute into x^3: a d1 + b d2 + c d3 = e3
                //   a(e1 - b d0)/c + b (e4 - b d3)/a + c d3 = e3
                // multiply by a c:  a^2 (e1 - b d0) + b c (e4 - b d3) + a c^2 d3 = a c e3
                //   -> quadratic in b:  (-c d3) b^2 + (c e4 - a^2 d0) b + (a^2 e1 + a c^2 d3 - a c e3) = 0
                let qa = -(&c * &d3);
                let qb = &c * &e[4] - &a * &a * &d0;
                let qc = &a * &a * &e[1] + &a * &c * &c * &d3 - &a * &c * &e[3];
                let disc = &qb * &qb - Z::from(4) * &qa * &qc;
                if disc.sign() == Sign::Minus {
                    continue;
                }
                let s = disc.sqrt();
                if &s * &s != disc {
                    continue;
                }
                for pm in [1i64, -1] {
                    let num = -&qb + Z::from(pm) * &s;
                    let den = Z::from(2) * &qa;
                    if den.is_zero() {
                        // linear case
                        if qb.is_zero() {
                            continue;
                        }
                        if (&(-&qc) % &qb).is_zero() {
                            let b = -&qc / &qb;
                            if let Some(pair) = try_quintic_factors(&e, &a, &b, &c, &d3, &d0) {
                                return Some(pair);
                            }
                        }
                        continue;
                    }
                    if (&num % &den).is_zero() {
                        let b = num / &den;
                        if let Some(pair) = try_quintic_factors(&e, &a, &b, &c, &d3, &d0) {
                            return Some(pair);
                        }
                    }
                }
            }
        }
    }
    None
}

fn try_quintic_factors(e: &[Z], a: &Z, b: &Z, c: &Z, d3: &Z, d0: &Z) -> Option<(QPoly, QPoly)> {
    let n2 = &e[4] - b * d3;
    let n1 = &e[1] - b * d0;
    if !(&n2 % a).is_zero() || !(&n1 % c).is_zero() {
        return None;
    }
    let d2 = n2 / a;
    let d1 = n1 / c;
    if a * d0 + b * &d1 + c * &d2 != e[2] {
        return None;
    }
    if a * &d1 + b * &d2 + c * d3 != e[3] {
        return None;
    }
    let p = QPoly::new(vec![
        Q::from_integer(c.clone()),
        Q::from_integer(b.clone()),
        Q::from_integer(a.clone()),
    ]);
    let q = QPoly::new(vec![
        Q::from_integer(d0.clone()),
        Q::from_integer(d1),
        Q::from_integer(d2),
        Q::from_integer(d3.clone()),
    ]);
    Some((monicize(&p), monicize(&q)))
}

fn monicize(f: &QPoly) -> QPoly {
    let inv = f.lc().recip();
    f.scale(&inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coeffs: &[i64]) -> QPoly {
        QPoly::from_int_coeffs(coeffs)
    }

    #[test]
    fn resultant_of_cyclotomic_and_linear() {
        // res(x^2 + x + 1, 2x + 1) computed by evaluation: prod of g at roots of f
        let f = p(&[1, 1, 1]);
        let g = p(&[1, 2]);
        assert_eq!(resultant(&f, &g), qz(3));
    }

    #[test]
    fn disc_matches_known_values() {
        assert_eq!(poly_disc(&p(&[1, -3, 0, 1])), qz(81)); // x^3 - 3x + 1
        assert_eq!(poly_disc(&p(&[-3, 0, 0, 1])), qz(-243)); // x^3 - 3
        assert_eq!(poly_disc(&p(&[1, 1, 1])), qz(-3));
        assert_eq!(poly_disc(&p(&[3, 0, 0, 0, 0, 0, 1])), qz(-11337408)); // x^6 + 3
    }

    #[test]
    fn factor_strips_rational_roots_and_splits_quadratics() {
        // x^4 + x = x (x+1) (x^2 - x + 1)
        let f = p(&[0, 1, 0, 0, 1]);
        let (c, fs) = factor_q(&f);
        assert_eq!(c, qz(1));
        assert_eq!(fs.len(), 3);
        let degs: Vec<usize> = fs.iter().map(|g| g.degree()).collect();
        assert_eq!(degs.iter().sum::<usize>(), 4);
        assert!(fs.contains(&p(&[1, -1, 1])));
    }

    #[test]
    fn factor_quartic_into_two_quadratics() {
        // (x^2+1)(x^2+x+2) = x^4 + x^3 + 3x^2 + x + 2
        let f = p(&[2, 1, 3, 1, 1]);
        let (_, fs) = factor_q(&f);
        assert_eq!(fs.len(), 2);
        assert!(fs.contains(&p(&[1, 0, 1])));
        assert!(fs.contains(&p(&[2, 1, 1])));
    }

    #[test]
    fn factor_keeps_irreducible_quartic_whole() {
        // x^4 + 1 is irreducible over Q
        let f = p(&[1, 0, 0, 0, 1]);
        let (_, fs) = factor_q(&f);
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].degree(), 4);
    }

    #[test]
    fn factor_quintic_with_quadratic_factor() {
        // (x^2 + x + 1)(x^3 - 2) — no rational roots
        let f = p(&[1, 1, 1]).mul(&p(&[-2, 0, 0, 1]));
        let (_, fs) = factor_q(&f);
        assert_eq!(fs.len(), 2);
        assert!(fs.contains(&p(&[1, 1, 1])));
        assert!(fs.contains(&p(&[-2, 0, 0, 1])));
    }

    #[test]
    fn rational_root_enumeration_includes_fractions() {
        // (2x - 3)(x^2 + 1)
        let f = p(&[-3, 2]).mul(&p(&[1, 0, 1]));
        let roots = rational_roots(&f);
        assert_eq!(roots, vec![Q::new(Z::from(3), Z::from(2))]);
    }
}
