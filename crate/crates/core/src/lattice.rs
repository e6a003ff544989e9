//! Integer-lattice LLL reduction in exact rational arithmetic, plus the
//! shortest-vector lower bound 2^(-t/2) ||b0|| used to collapse the Baker
//! bound. Dimensions here never exceed 4, so there is no reason to leave
//! exact arithmetic.

use crate::polyq::{Q, Z};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Columns are the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntLattice {
    pub basis: Vec<Vec<Z>>,
    pub dim: usize,
}

impl IntLattice {
    pub fn from_columns(cols: Vec<Vec<Z>>) -> Result<Self> {
        let dim = cols.len();
        if dim == 0 || cols.iter().any(|c| c.len() != dim) {
            return Err(Error::Degenerate("lattice basis must be square".into()));
        }
        Ok(IntLattice { basis: cols, dim })
    }

    pub fn det(&self) -> Z {
        let n = self.dim;
        let mut m: Vec<Vec<Q>> = (0..n)
            .map(|i| (0..n).map(|j| Q::from_integer(self.basis[j][i].clone())).collect())
            .collect();
        let mut det = Q::from_integer(Z::from(1));
        for col in 0..n {
            let piv = match (col..n).find(|&r| !m[r][col].is_zero()) {
                Some(p) => p,
                None => return Z::zero(),
            };
            if piv != col {
                m.swap(col, piv);
                det = -det;
            }
            det *= &m[col][col];
            let inv = m[col][col].clone().recip();
            for r in col + 1..n {
                if m[r][col].is_zero() {
                    continue;
                }
                let f = &m[r][col] * &inv;
                for c in col..n {
                    let t = &f * &m[col][c];
                    m[r][c] -= t;
                }
            }
        }
        det.to_integer()
    }

    fn col_dot(a: &[Z], b: &[Z]) -> Z {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    pub fn norm_sq(v: &[Z]) -> Z {
        Self::col_dot(v, v)
    }
}

fn dot_qz(a: &[Q], b: &[Z]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * Q::from_integer(y.clone())).sum()
}

fn dot_qq(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

struct GramSchmidt {
    /// orthogonalized vectors (rational)
    star: Vec<Vec<Q>>,
    /// mu[i][j] for j < i
    mu: Vec<Vec<Q>>,
    /// squared lengths of star vectors
    b: Vec<Q>,
}

fn gram_schmidt(basis: &[Vec<Z>]) -> GramSchmidt {
    let n = basis.len();
    let mut star: Vec<Vec<Q>> = Vec::with_capacity(n);
    let mut mu: Vec<Vec<Q>> = vec![vec![Q::zero(); n]; n];
    let mut b: Vec<Q> = Vec::with_capacity(n);
    for i in 0..n {
        let mut v: Vec<Q> = basis[i].iter().map(|z| Q::from_integer(z.clone())).collect();
        for j in 0..i {
            let m = if b[j].is_zero() {
                Q::zero()
            } else {
                dot_qz(&star[j], &basis[i]) / &b[j]
            };
            mu[i][j] = m.clone();
            for (vk, sk) in v.iter_mut().zip(&star[j]) {
                *vk -= &m * sk;
            }
        }
        let bb = dot_qq(&v, &v);
        b.push(bb);
        star.push(v);
    }
    GramSchmidt { star, mu, b }
}

/// LLL with Lovász parameter `delta` (default call sites use 3/4); exact
/// rational Gram-Schmidt throughout. Returns a reduced basis of the same
/// lattice.
pub fn lll_reduce(lat: &IntLattice, delta: &Q) -> Result<IntLattice> {
    let n = lat.dim;
    let mut basis = lat.basis.clone();
    {
        let gs = gram_schmidt(&basis);
        if gs.b.iter().any(|x| x.is_zero()) {
            return Err(Error::DependentColumns);
        }
    }
    let mut gs = gram_schmidt(&basis);
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let mut k = 1usize;
    let mut guard = 0u64;
    while k < n {
        guard += 1;
        assert!(guard < 1_000_000, "LLL failed to terminate");
        // size-reduce b_k against b_j, j = k-1 .. 0
        for j in (0..k).rev() {
            let m = gs.mu[k][j].clone();
            if m.abs() > half {
                let r = round_q(&m);
                for t in 0..n {
                    let d = &r * &basis[j][t];
                    basis[k][t] -= d;
                }
                gs = gram_schmidt(&basis);
            }
        }
        // Lovász condition
        let lhs = &gs.b[k];
        let rhs = (delta - &gs.mu[k][k - 1] * &gs.mu[k][k - 1]) * &gs.b[k - 1];
        if *lhs >= rhs {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            gs = gram_schmidt(&basis);
            k = k.max(2) - 1;
        }
    }
    Ok(IntLattice { basis, dim: n })
}

fn round_q(q: &Q) -> Z {
    let two = BigInt::from(2);
    let num = q.numer() * &two + q.denom();
    let den = q.denom() * &two;
    num_integer::Integer::div_floor(&num, &den)
}

/// Checks the size-reduction and Lovász conditions on a basis.
pub fn is_lll_reduced(lat: &IntLattice, delta: &Q) -> bool {
    let gs = gram_schmidt(&lat.basis);
    if gs.b.iter().any(|x| x.is_zero()) {
        return false;
    }
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    for i in 0..lat.dim {
        for j in 0..i {
            if gs.mu[i][j].abs() > half {
                return false;
            }
        }
    }
    for k in 1..lat.dim {
        let rhs = (delta - &gs.mu[k][k - 1] * &gs.mu[k][k - 1]) * &gs.b[k - 1];
        if gs.b[k] < rhs {
            return false;
        }
    }
    let _ = gs.star;
    true
}

/// 2^(-t/2) ||b0|| for an LLL-reduced basis living in dimension t + 1,
/// returned as a rational lower bound for the squared length scaled by
/// 2^t: every nonzero lattice vector v has ||v||^2 >= ||b0||^2 / 2^t.
pub fn shortest_vector_sq_lower_bound(lat: &IntLattice) -> Result<Q> {
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
    if !is_lll_reduced(lat, &delta) {
        return Err(Error::NotReduced);
    }
    let t = lat.dim - 1;
    let b0 = IntLattice::norm_sq(&lat.basis[0]);
    Ok(Q::new(b0, BigInt::from(1) << t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(cols: &[&[i64]]) -> IntLattice {
        IntLattice::from_columns(
            cols.iter().map(|c| c.iter().map(|&x| Z::from(x)).collect()).collect(),
        )
        .unwrap()
    }

    fn delta34() -> Q {
        Q::new(Z::from(3), Z::from(4))
    }

    #[test]
    fn identity_basis_is_fixed() {
        let l = lat(&[&[1, 0], &[0, 1]]);
        let r = lll_reduce(&l, &delta34()).unwrap();
        assert_eq!(r.basis, l.basis);
    }

    #[test]
    fn skew_basis_of_z2_reduces_to_short_vectors() {
        let l = lat(&[&[1, 0], &[10, 1]]);
        let r = lll_reduce(&l, &delta34()).unwrap();
        assert!(IntLattice::norm_sq(&r.basis[0]) <= Z::from(2));
        assert_eq!(r.det().abs(), Z::from(1));
    }

    #[test]
    fn reduction_preserves_determinant_and_satisfies_lovasz() {
        // deliberately nasty unimodular transform of diag(1,2,3)
        let l = lat(&[&[1, 7, 23], &[0, 2, 9], &[0, 0, 3]]);
        let r = lll_reduce(&l, &delta34()).unwrap();
        assert_eq!(r.det().abs(), Z::from(6));
        assert!(is_lll_reduced(&r, &delta34()));
    }

    #[test]
    fn shortest_vector_bound_via_box_enumeration() {
        let l = lat(&[&[4, 1, 0], &[1, 5, 1], &[0, 3, 7]]);
        let r = lll_reduce(&l, &delta34()).unwrap();
        let bound = shortest_vector_sq_lower_bound(&r).unwrap();
        // enumerate all small combinations and confirm none beats the bound
        let mut min_sq: Option<Z> = None;
        for a in -6i64..=6 {
            for b in -6i64..=6 {
                for c in -6i64..=6 {
                    if a == 0 && b == 0 && c == 0 {
                        continue;
                    }
                    let v: Vec<Z> = (0..3)
                        .map(|t| {
                            &r.basis[0][t] * Z::from(a)
                                + &r.basis[1][t] * Z::from(b)
                                + &r.basis[2][t] * Z::from(c)
                        })
                        .collect();
                    let n = IntLattice::norm_sq(&v);
                    if min_sq.as_ref().map_or(true, |m| &n < m) {
                        min_sq = Some(n);
                    }
                }
            }
        }
        let min_sq = Q::from_integer(min_sq.unwrap());
        assert!(min_sq >= bound);
    }

    #[test]
    fn dependent_columns_rejected() {
        let l = lat(&[&[1, 2], &[2, 4]]);
        assert!(matches!(lll_reduce(&l, &delta34()), Err(Error::DependentColumns)));
    }
}
