//! Exact comparison of the normalized absolute values |x|_p across the
//! places of S, used for the minimal absolute value and the extremal index.
//!
//! Every infinite-place value is written as psi_h(z)^(1/2) or psi_h(z) for a
//! closure element z = i(x) * kappa_h(i(x)) that is real and positive at the
//! closure place h. Comparisons then reduce to the sign of psi_h(d) for an
//! exactly-computed difference d, decided by intervals at escalating
//! precision; d = 0 is an exact equality certificate, and a nonzero field
//! element has no zero embeddings, so the loop terminates.

use crate::nf::{field, FieldId, NFElem, PlaceIndex, PlaceKind};
use crate::polyq::{Q, Z};
use crate::{Error, Result};
use num_traits::{Signed, Zero};
use once_cell::sync::Lazy;
use std::cmp::Ordering;
use std::collections::HashMap;

struct CmpTables {
    closure: FieldId,
    iota_theta: NFElem,
    /// field infinite place (0-based among infinite places) -> closure place (0-based)
    place_map: Vec<usize>,
    /// closure place -> automorphism realizing complex conjugation there
    kappa: Vec<usize>,
    /// (h1, h2) -> automorphism sigma with psi_h1 ∘ sigma = psi_h2 (up to conj)
    transport: Vec<Vec<usize>>,
}

fn f64_embed(f: FieldId, place_idx: usize, x: &NFElem) -> (f64, f64) {
    let b = crate::nf::theta_ball(f, place_idx, 96);
    let (tr, ti) = (b.re.to_f64(), b.im.to_f64());
    let mut re = 0.0f64;
    let mut im = 0.0f64;
    for c in x.coords.iter().rev() {
        let nr = re * tr - im * ti + c.to_f64().unwrap();
        let ni = re * ti + im * tr;
        re = nr;
        im = ni;
    }
    (re, im)
}

fn close(a: (f64, f64), b: (f64, f64)) -> bool {
    (a.0 - b.0).abs() + (a.1 - b.1).abs() < 1e-6
}

static TABLES: Lazy<HashMap<FieldId, CmpTables>> = Lazy::new(|| {
    let mut m = HashMap::new();
    for f in FieldId::ALL {
        m.insert(f, build_tables(f));
    }
    m
});

fn build_tables(f: FieldId) -> CmpTables {
    let closure = match f {
        FieldId::K3 => FieldId::L3,
        other => other,
    };
    let iota_theta = match f {
        FieldId::K3 => NFElem::from_int_coords(FieldId::L3, &[0, 0, -1, 0, 0, 0]),
        other => NFElem::theta(other),
    };
    let cspec = field(closure);
    let fspec = field(f);
    let n_places = cspec.num_infinite_places();
    // kappa: conj o psi_h = psi_h o a_k
    let mut kappa = Vec::with_capacity(n_places);
    let theta_c = NFElem::theta(closure);
    for h in 0..n_places {
        let target = {
            let v = f64_embed(closure, h, &theta_c);
            (v.0, -v.1)
        };
        let k = (0..cspec.automorphism_images.len())
            .find(|&k| close(f64_embed(closure, h, &theta_c.apply_auto(k)), target))
            .expect("conjugation automorphism exists at every place");
        kappa.push(k);
    }
    // place map: field place i -> closure place h with psi_h(iota theta) = psi_i(theta) or conj
    let mut place_map = Vec::new();
    for i in 0..fspec.num_infinite_places() {
        let v = f64_embed(f, i, &NFElem::theta(f));
        let h = (0..n_places)
            .find(|&h| {
                let w = f64_embed(closure, h, &iota_theta);
                close(w, v) || close((w.0, -w.1), v)
            })
            .expect("every field place restricts from a closure place");
        place_map.push(h);
    }
    // transport: psi_h1 o sigma = psi_h2 (possibly composed with conj)
    let mut transport = vec![vec![0usize; n_places]; n_places];
    for h1 in 0..n_places {
        for h2 in 0..n_places {
            let target = f64_embed(closure, h2, &theta_c);
            let k = (0..cspec.automorphism_images.len())
                .find(|&k| {
                    let w = f64_embed(closure, h1, &theta_c.apply_auto(k));
                    close(w, target) || close((w.0, -w.1), target)
                })
                .expect("Galois transitivity on places");
            transport[h1][h2] = k;
        }
    }
    CmpTables { closure, iota_theta, place_map, kappa, transport }
}

enum PlaceVal {
    Rat(Q),
    /// value = psi_h(z)^(1/2) when sq is false (real place), psi_h(z) when true
    Alg { z: NFElem, h: usize, sq: bool },
}

fn iota(f: FieldId, x: &NFElem) -> NFElem {
    let t = &TABLES[&f];
    if t.closure == f {
        return x.clone();
    }
    let mut acc = NFElem::zero(t.closure);
    for c in x.coords.iter().rev() {
        acc = acc.mul(&t.iota_theta);
        acc.coords[0] += c;
    }
    acc
}

fn place_value(x: &NFElem, place: PlaceIndex) -> Result<PlaceVal> {
    let f = x.field;
    match place.kind {
        PlaceKind::Finite => {
            let v = x.ord_at_3()?;
            let three = Q::from_integer(Z::from(3));
            let mut q = Q::from_integer(Z::from(1));
            for _ in 0..v.abs() {
                q *= &three;
            }
            Ok(PlaceVal::Rat(if v >= 0 { q.recip() } else { q }))
        }
        PlaceKind::Real | PlaceKind::Complex => {
            let t = &TABLES[&f];
            let i0 = place.index - 1;
            let h = t.place_map[i0];
            let ix = iota(f, x);
            let z = ix.mul(&ix.apply_auto(t.kappa[h]));
            // rational z: the value is exactly sqrt(z) or z
            if let Some(q) = z.as_rational() {
                let q = q.abs();
                if place.kind == PlaceKind::Complex {
                    return Ok(PlaceVal::Rat(q));
                }
                if let Some(r) = crate::polyq::is_rational_square(&q) {
                    return Ok(PlaceVal::Rat(r));
                }
            }
            Ok(PlaceVal::Alg { z, h, sq: place.kind == PlaceKind::Complex })
        }
    }
}

/// Sign of psi_h(d) for a nonzero d that is real at closure place h.
fn sign_at(closure: FieldId, d: &NFElem, h: usize) -> Result<Ordering> {
    if d.is_zero() {
        return Ok(Ordering::Equal);
    }
    let kind = if h < field(closure).r1 { PlaceKind::Real } else { PlaceKind::Complex };
    let place = PlaceIndex { index: h + 1, kind };
    let mut prec = 128u32;
    loop {
        let ball = d.embed(place, prec)?;
        let margin = ball.rad.mul_i64(4);
        if ball.re.abs().cmp_bf(&margin) == Ordering::Greater {
            return Ok(if ball.re.is_negative() { Ordering::Less } else { Ordering::Greater });
        }
        prec *= 2;
        if prec > 1 << 14 {
            return Err(Error::Degenerate("sign_at failed to converge".into()));
        }
    }
}

/// Compares |x|_p at two places of S, exactly.
pub fn place_value_cmp(x: &NFElem, p1: PlaceIndex, p2: PlaceIndex) -> Result<Ordering> {
    let a = place_value(x, p1)?;
    let b = place_value(x, p2)?;
    let closure = TABLES[&x.field].closure;
    match (a, b) {
        (PlaceVal::Rat(r), PlaceVal::Rat(s)) => Ok(r.cmp(&s)),
        (PlaceVal::Rat(r), PlaceVal::Alg { z, h, sq }) => {
            let d = alg_minus_rat(&z, sq, &r);
            sign_at(closure, &d, h).map(Ordering::reverse)
        }
        (PlaceVal::Alg { z, h, sq }, PlaceVal::Rat(r)) => {
            let d = alg_minus_rat(&z, sq, &r);
            sign_at(closure, &d, h)
        }
        (PlaceVal::Alg { z: z1, h: h1, sq: s1 }, PlaceVal::Alg { z: z2, h: h2, sq: s2 }) => {
            let t = &TABLES[&x.field];
            // psi_h1(sigma z2) = psi_h2(z2) (or its conjugate; z2 is real there)
            let z2t = z2.apply_auto(t.transport[h1][h2]);
            // squared values: real place -> psi(z), complex place -> psi(z)^2
            let d = match (s1, s2) {
                (false, false) | (true, true) => z1.sub(&z2t),
                (false, true) => z1.sub(&z2t.mul(&z2t)),
                (true, false) => z1.mul(&z1).sub(&z2t),
            };
            sign_at(closure, &d, h1)
        }
    }
}

fn alg_minus_rat(z: &NFElem, sq: bool, r: &Q) -> NFElem {
    // value = psi(z)^(1/2) (real) or psi(z) (complex); compare against r > 0:
    // real: psi(z) - r^2 ; complex: psi(z) - r
    let rr = if sq { r.clone() } else { r * r };
    let mut d = z.clone();
    d.coords[0] -= rr;
    d
}

/// The extremal place: the largest index achieving the minimal value.
pub fn extremal_place(x: &NFElem) -> Result<PlaceIndex> {
    let spec = field(x.field);
    let places = spec.places();
    let mut best = places[0];
    for &p in &places[1..] {
        // replace when strictly smaller or equal (larger index wins ties)
        match place_value_cmp(x, p, best)? {
            Ordering::Less | Ordering::Equal => best = p,
            Ordering::Greater => {}
        }
    }
    Ok(best)
}
