//! Complete solution of the S-unit equation tau0 + tau1 = 1 over the five
//! fields, with S the prime above 3 together with the infinite places.
//!
//! The pipeline per field: a Baker–Wüstholz bound C0 on the maximum exponent
//! of a solution whose extremal index avoids the finite place, an LLL
//! reduction of C0 to a small working bound C0', a congruence sieve over
//! exponent vectors modulo completely split primes, exact verification of
//! the survivors, and closure under the cycle operation which recovers the
//! solutions the extremal-index restriction excluded.

mod bounds;
mod compare;
mod sieve;

pub use bounds::BoundReport;

use crate::bigfloat::BF;
use crate::nf::{field, FieldId, NFElem, PlaceIndex, PlaceKind};
use crate::polyq::{Q, Z};
use crate::{Error, Result};
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// An S-unit as (torsion exponent mod w, exponents of the free generators).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExponentVector {
    pub a0: u32,
    pub a: Vec<i64>,
}

impl ExponentVector {
    pub fn new(a0: u32, a: Vec<i64>) -> Self {
        ExponentVector { a0, a }
    }

    /// max_j |a_j| over the free part.
    pub fn height(&self) -> i64 {
        self.a.iter().map(|x| x.abs()).max().unwrap_or(0)
    }

    pub fn is_torsion(&self) -> bool {
        self.a.iter().all(|&x| x == 0)
    }
}

/// Unordered solution pair of tau0 + tau1 = 1, stored in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SUnitSolution {
    pub tau0: ExponentVector,
    pub tau1: ExponentVector,
}

impl SUnitSolution {
    pub fn new_unordered(x: ExponentVector, y: ExponentVector) -> Self {
        if x <= y {
            SUnitSolution { tau0: x, tau1: y }
        } else {
            SUnitSolution { tau0: y, tau1: x }
        }
    }

    pub fn height(&self) -> i64 {
        self.tau0.height().max(self.tau1.height())
    }
}

/// Generators of the S-unit group of one field, validated at load.
#[derive(Debug, Clone)]
pub struct SUnitGroupSpec {
    pub field: FieldId,
    pub rho0: NFElem,
    pub free_gens: Vec<NFElem>,
    pub t: usize,
    pub w: u32,
    /// action of each field automorphism on exponent vectors:
    /// sigma(rho0^a0 prod rho_i^{a_i}) has torsion part a0 * t0[k] + sum a_i * tors[k][i]
    /// and free part given by the integer matrix mats[k]
    auto_tors_rho0: Vec<u32>,
    auto_tors: Vec<Vec<u32>>,
    auto_mats: Vec<Vec<Vec<i64>>>,
}

#[derive(Deserialize)]
struct GenFileEntry {
    field: String,
    rho0: Vec<String>,
    free: Vec<Vec<String>>,
}

#[derive(Deserialize)]
struct GenFile {
    fields: Vec<GenFileEntry>,
}

static GENERATOR_JSON: &str = include_str!("../../data/sunit_generators.json");

fn parse_q(s: &str) -> Result<Q> {
    let parse_z = |x: &str| -> Result<Z> {
        x.trim().parse::<Z>().map_err(|e| Error::BadData(format!("bad integer {x}: {e}")))
    };
    if let Some((n, d)) = s.split_once('/') {
        Ok(Q::new(parse_z(n)?, parse_z(d)?))
    } else {
        Ok(Q::from_integer(parse_z(s)?))
    }
}

static GROUPS: Lazy<HashMap<FieldId, SUnitGroupSpec>> = Lazy::new(|| {
    let file: GenFile = serde_json::from_str(GENERATOR_JSON).expect("generator data parses");
    let mut m = HashMap::new();
    for entry in file.fields {
        let spec = SUnitGroupSpec::from_entry(&entry).expect("generator data validates");
        m.insert(spec.field, spec);
    }
    assert_eq!(m.len(), 5, "generator data must cover all five fields");
    m
});

pub fn group(f: FieldId) -> &'static SUnitGroupSpec {
    &GROUPS[&f]
}

impl SUnitGroupSpec {
    fn from_entry(entry: &GenFileEntry) -> Result<Self> {
        let f = FieldId::parse(&entry.field)
            .ok_or_else(|| Error::BadData(format!("unknown field {}", entry.field)))?;
        let spec = field(f);
        let coords = |v: &[String]| -> Result<NFElem> {
            if v.len() != spec.degree {
                return Err(Error::BadData(format!("{f}: coordinate length")));
            }
            let mut cs = Vec::with_capacity(v.len());
            for s in v {
                cs.push(parse_q(s)?);
            }
            Ok(NFElem::from_coords(f, cs))
        };
        let rho0 = coords(&entry.rho0)?;
        let free_gens: Vec<NFElem> = entry.free.iter().map(|v| coords(v)).collect::<Result<_>>()?;
        let t = free_gens.len();
        let mut g = SUnitGroupSpec {
            field: f,
            rho0,
            free_gens,
            t,
            w: spec.w,
            auto_tors_rho0: Vec::new(),
            auto_tors: Vec::new(),
            auto_mats: Vec::new(),
        };
        g.validate()?;
        g.build_galois_action()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        let spec = field(self.field);
        // expected rank: t = s + r1 + r2 - 1 = 1 + (r1 + r2 - 1)
        if self.t != spec.r1 + spec.r2 {
            return Err(Error::BadData(format!("{}: rank should be {}", self.field, spec.r1 + spec.r2)));
        }
        // rho0 has exact order w
        let mut p = self.rho0.clone();
        for k in 1..spec.w {
            if p.is_one() {
                return Err(Error::BadData(format!("{}: rho0 has order {k} < w", self.field)));
            }
            p = p.mul(&self.rho0);
        }
        if !p.is_one() {
            return Err(Error::BadData(format!("{}: rho0 does not have order w", self.field)));
        }
        for (i, gsn) in self.free_gens.iter().enumerate() {
            if !gsn.is_s_unit() {
                return Err(Error::BadData(format!("{}: generator {i} is not an S-unit", self.field)));
            }
            let v = gsn.ord_at_3()?;
            let want = if i + 1 == self.t { 1 } else { 0 };
            if v != want {
                return Err(Error::BadData(format!(
                    "{}: generator {i} has ord_at_3 = {v}, expected {want}",
                    self.field
                )));
            }
        }
        // full-rank log-valuation matrix (multiplicative independence)
        let mat = self.log_valuation_matrix(96)?;
        if !full_rank(&mat) {
            return Err(Error::BadData(format!("{}: generators are multiplicatively dependent", self.field)));
        }
        // at every infinite place, some free generator is not a positive real
        for (pi, place) in spec.places().into_iter().enumerate() {
            if place.kind == PlaceKind::Finite {
                continue;
            }
            let ok = self.free_gens.iter().any(|gsn| {
                let b = gsn.embed(place, 96).expect("embed");
                let im_nonzero = b.im.abs().cmp_bf(&b.rad.mul_i64(4)) == std::cmp::Ordering::Greater;
                let re_negative = b.re.is_negative()
                    && b.re.abs().cmp_bf(&b.rad.mul_i64(4)) == std::cmp::Ordering::Greater;
                im_nonzero || re_negative
            });
            if !ok {
                return Err(Error::BadData(format!(
                    "{}: all free generators are positive reals at infinite place {pi}",
                    self.field
                )));
            }
        }
        // p-saturation spot checks
        for p in [2u32, 3] {
            self.check_saturation(p)?;
        }
        Ok(())
    }

    /// (t+1) x t matrix of log|rho_j|_{p_i} over all places of S.
    fn log_valuation_matrix(&self, prec: u32) -> Result<Vec<Vec<BF>>> {
        let spec = field(self.field);
        let mut rows = Vec::new();
        for place in spec.places() {
            let mut row = Vec::new();
            for gsn in &self.free_gens {
                row.push(gsn.log_abs_place(place, prec)?);
            }
            rows.push(row);
        }
        Ok(rows)
    }

    fn check_saturation(&self, p: u32) -> Result<()> {
        let mut exps = vec![0u32; self.t];
        loop {
            // advance odometer over [0, p)^t, skipping the all-zero vector
            let mut i = 0;
            loop {
                if i == self.t {
                    return Ok(());
                }
                exps[i] += 1;
                if exps[i] < p {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
            for j in 0..self.w {
                let ev = ExponentVector::new(j, exps.iter().map(|&e| e as i64).collect());
                let v = self.value(&ev)?;
                // fast norm filter: N(v) = +-3^k must be a p-th power in Q
                let n = v.norm();
                let k = crate::nf::val3_q(&n);
                if k % (p as i64) != 0 {
                    continue;
                }
                if p % 2 == 0 && n.is_negative() {
                    continue;
                }
                // residue filter at a couple of split primes
                if !sieve::pth_power_residue_filter(self, &ev, p)? {
                    continue;
                }
                if crate::nf::pth_root_in_field(&v, p).is_some() {
                    return Err(Error::BadData(format!(
                        "{}: generator lattice is not {p}-saturated at {:?}",
                        self.field, ev
                    )));
                }
            }
        }
    }

    fn build_galois_action(&mut self) -> Result<()> {
        let spec = field(self.field);
        for k in 0..spec.automorphism_images.len() {
            let im0 = self.rho0.apply_auto(k);
            let d0 = self
                .dlog(&im0)?
                .ok_or_else(|| Error::BadData(format!("{}: sigma(rho0) not in group", self.field)))?;
            if !d0.is_torsion() {
                return Err(Error::BadData(format!("{}: sigma(rho0) not torsion", self.field)));
            }
            self.auto_tors_rho0.push(d0.a0);
            let mut tors = Vec::new();
            let mut mat = Vec::new();
            for gsn in &self.free_gens {
                let img = gsn.apply_auto(k);
                let d = self
                    .dlog(&img)?
                    .ok_or_else(|| Error::BadData(format!("{}: sigma(gen) not in group", self.field)))?;
                tors.push(d.a0);
                mat.push(d.a.clone());
            }
            self.auto_tors.push(tors);
            self.auto_mats.push(mat);
        }
        Ok(())
    }

    /// Image of an exponent vector under the k-th field automorphism.
    pub fn apply_auto_ev(&self, k: usize, ev: &ExponentVector) -> ExponentVector {
        let w = self.w as i64;
        let mut a0 = ev.a0 as i64 * self.auto_tors_rho0[k] as i64;
        let mut a = vec![0i64; self.t];
        for (j, &aj) in ev.a.iter().enumerate() {
            a0 += aj * self.auto_tors[k][j] as i64;
            for i in 0..self.t {
                a[i] += aj * self.auto_mats[k][j][i];
            }
        }
        ExponentVector::new(a0.rem_euclid(w) as u32, a)
    }

    pub fn value(&self, ev: &ExponentVector) -> Result<NFElem> {
        let mut acc = self.rho0.pow(ev.a0 as i64)?;
        for (gsn, &e) in self.free_gens.iter().zip(&ev.a) {
            if e != 0 {
                acc = acc.mul(&gsn.pow(e)?);
            }
        }
        Ok(acc)
    }

    /// Exponent vector of an S-unit, or None if x is not in the group
    /// generated by the stored generators (which, for valid data, means it is
    /// not an S-unit at all).
    pub fn dlog(&self, x: &NFElem) -> Result<Option<ExponentVector>> {
        if x.is_zero() || !x.is_s_unit() {
            return Ok(None);
        }
        let spec = field(self.field);
        // the last generator carries the finite valuation
        let v = x.ord_at_3()?;
        let mut a = vec![0i64; self.t];
        if self.t > 0 {
            a[self.t - 1] = v;
        }
        let unit_part = x.div(&self.value(&ExponentVector::new(0, a.clone()))?)?;
        // solve for unit exponents against the r = t-1 unit generators
        let r = self.t - 1;
        if r > 0 {
            let mut prec = 192u32;
            'retry: loop {
                // matrix rows: first r infinite places; columns: unit generators
                let places: Vec<PlaceIndex> = spec
                    .places()
                    .into_iter()
                    .filter(|p| p.kind != PlaceKind::Finite)
                    .take(r)
                    .collect();
                let mut m = Vec::new();
                for p in &places {
                    let mut row = Vec::new();
                    for gsn in &self.free_gens[..r] {
                        row.push(gsn.log_abs_place(*p, prec)?);
                    }
                    m.push(row);
                }
                let mut rhs = Vec::new();
                for p in &places {
                    rhs.push(unit_part.log_abs_place(*p, prec)?);
                }
                let sol = solve_bf(&m, &rhs, prec);
                let mut ok = true;
                for (i, s) in sol.iter().enumerate() {
                    let (n, margin) = s.nearest_int();
                    if margin.cmp_bf(&BF::pow2(-8)) == std::cmp::Ordering::Less {
                        ok = false;
                    }
                    a[i] = match i64::try_from(&n) {
                        Ok(v) => v,
                        Err(_) => return Ok(None),
                    };
                }
                if ok {
                    break 'retry;
                }
                prec *= 2;
                if prec > 4096 {
                    return Ok(None);
                }
            }
        }
        // remaining factor must be torsion
        let rem = x.div(&self.value(&ExponentVector::new(0, a.clone()))?)?;
        let mut tor = NFElem::one(self.field);
        for j in 0..self.w {
            if tor == rem {
                return Ok(Some(ExponentVector::new(j, a)));
            }
            tor = tor.mul(&self.rho0);
        }
        Ok(None)
    }

    /// Exact verification that the pair really solves tau0 + tau1 = 1.
    pub fn verify_solution(&self, s: &SUnitSolution) -> Result<bool> {
        let x = self.value(&s.tau0)?;
        let y = self.value(&s.tau1)?;
        Ok(x.add(&y).is_one())
    }

    /// The inverse of an exponent vector.
    pub fn ev_inv(&self, ev: &ExponentVector) -> ExponentVector {
        let w = self.w;
        ExponentVector::new((w - ev.a0 % w) % w, ev.a.iter().map(|x| -x).collect())
    }

    /// Product of exponent vectors, optionally times -1 (as rho0^(w/2)).
    pub fn ev_mul(&self, x: &ExponentVector, y: &ExponentVector, negate: bool) -> ExponentVector {
        let w = self.w;
        let mut a0 = x.a0 + y.a0;
        if negate {
            a0 += w / 2;
        }
        ExponentVector::new(a0 % w, x.a.iter().zip(&y.a).map(|(p, q)| p + q).collect())
    }

    /// The cycle {s, s', s''} of a solution.
    pub fn cycle(&self, s: &SUnitSolution) -> Result<Vec<SUnitSolution>> {
        let t0 = &s.tau0;
        let t1 = &s.tau1;
        let t0i = self.ev_inv(t0);
        let t1i = self.ev_inv(t1);
        let sp = SUnitSolution::new_unordered(t0i.clone(), self.ev_mul(&t0i, t1, true));
        let spp = SUnitSolution::new_unordered(self.ev_mul(t0, &t1i, true), t1i.clone());
        let mut out = vec![s.clone(), sp, spp];
        out.sort();
        out.dedup();
        for m in &out {
            if !self.verify_solution(m)? {
                return Err(Error::Degenerate(format!("cycle member fails verification: {m:?}")));
            }
        }
        Ok(out)
    }

    /// nu(tau) and the extremal index: the largest place index achieving the
    /// minimal normalized absolute value. Comparisons are exact.
    pub fn extremal_index(&self, ev: &ExponentVector) -> Result<PlaceIndex> {
        let x = self.value(ev)?;
        compare::extremal_place(&x)
    }

    /// Full solve: Baker bound, lattice reduction, sieve, cycle closure.
    pub fn solve_all(&self) -> Result<(Vec<SUnitSolution>, BoundReport)> {
        let mut report = bounds::baker_bound(self)?;
        bounds::reduce_bound(self, &mut report)?;
        let sols = self.solve_with_bound(report.c0_prime)?;
        Ok((sols, report))
    }

    /// Sieve at the given height bound and close under cycles.
    pub fn solve_with_bound(&self, bound: i64) -> Result<Vec<SUnitSolution>> {
        let raw = sieve::sieve_solve(self, bound.max(1))?;
        let mut all: Vec<SUnitSolution> = Vec::new();
        for s in raw {
            for m in self.cycle(&s)? {
                if !all.contains(&m) {
                    all.push(m);
                }
            }
        }
        all.sort();
        Ok(all)
    }

    /// Exhaustive search over the box H(tau0) <= bound, keeping pairs whose
    /// full height stays inside the box. Independent of the sieve path.
    pub fn brute_force_box(&self, bound: i64) -> Result<Vec<SUnitSolution>> {
        sieve::brute_force_box(self, bound)
    }
}

fn full_rank(m: &[Vec<BF>]) -> bool {
    // (t+1) x t: check some t x t minor has clearly nonzero determinant
    let t = if m.is_empty() { 0 } else { m[0].len() };
    if t == 0 {
        return false;
    }
    for skip in 0..m.len() {
        let rows: Vec<&Vec<BF>> = m.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, r)| r).collect();
        if rows.len() != t {
            continue;
        }
        let det = det_bf(&rows, 96);
        if det.abs().mag() > -40 {
            return true;
        }
    }
    false
}

fn det_bf(rows: &[&Vec<BF>], prec: u32) -> BF {
    let n = rows.len();
    let mut m: Vec<Vec<BF>> = rows.iter().map(|r| (*r).clone()).collect();
    let mut det = BF::from_int(1);
    for col in 0..n {
        let piv = (col..n).max_by_key(|&r| m[r][col].abs().mag()).unwrap();
        if m[piv][col].is_zero() {
            return BF::zero();
        }
        if piv != col {
            m.swap(col, piv);
            det = det.neg();
        }
        det = det.mul(&m[col][col]).round_to(prec);
        let inv = m[col][col].recip(prec);
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].mul(&inv).round_to(prec);
            for c in col..n {
                let t = f.mul(&m[col][c]);
                m[r][c] = m[r][c].sub(&t).round_to(prec);
            }
        }
    }
    det
}

fn solve_bf(m: &[Vec<BF>], rhs: &[BF], prec: u32) -> Vec<BF> {
    let n = m.len();
    let mut a: Vec<Vec<BF>> = m.iter().cloned().collect();
    let mut b: Vec<BF> = rhs.to_vec();
    for col in 0..n {
        let piv = (col..n).max_by_key(|&r| a[r][col].abs().mag()).unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip(prec);
        for c in col..n {
            a[col][c] = a[col][c].mul(&inv).round_to(prec);
        }
        b[col] = b[col].mul(&inv).round_to(prec);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..n {
                    let t = f.mul(&a[col][c]);
                    a[r][c] = a[r][c].sub(&t).round_to(prec);
                }
                let t = f.mul(&b[col]);
                b[r] = b[r].sub(&t).round_to(prec);
            }
        }
    }
    b
}
