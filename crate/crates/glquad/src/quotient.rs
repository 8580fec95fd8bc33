//! Invariants of the quotient by an ideal, computed from the initial
//! monomial ideal: Krull dimension, Hilbert series, and the
//! regular-sequence certificate (codimension criterion) with the Hilbert
//! series as an independent second witness.

use num::bigint::BigInt;
use num::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::{buchberger, initial_ideal, GroebnerConfig, MonomialIdeal};
use crate::monomial::Monomial;
use crate::poly::{PolyRing, Polynomial};

/// Hilbert series of a monomial quotient as numerator/(1-t)^nvars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertSeries {
    /// Coefficients of the numerator polynomial in t, index = degree.
    pub numerator: Vec<BigInt>,
    pub nvars: usize,
}

impl HilbertSeries {
    /// Coefficient of t^d in the expanded series: the dimension of the
    /// degree-d graded piece of the quotient.
    pub fn coefficient(&self, d: usize) -> BigInt {
        let mut acc = BigInt::zero();
        for (e, c) in self.numerator.iter().enumerate() {
            if e > d || c.is_zero() {
                continue;
            }
            acc += c * binomial(self.nvars - 1 + d - e, self.nvars - 1);
        }
        acc
    }
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn poly_t_mul_one_minus_td(p: &[BigInt], d: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); p.len() + d];
    for (i, c) in p.iter().enumerate() {
        out[i] += c;
        out[i + d] -= c;
    }
    trim(out)
}

fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

fn poly_t_add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    trim(out)
}

fn poly_t_shift(p: &[BigInt], by: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); p.len() + by];
    for (i, c) in p.iter().enumerate() {
        out[i + by] = c.clone();
    }
    trim(out)
}

/// Numerator of the Hilbert series of R/(gens) over (1-t)^nvars, by the
/// standard pivot-splitting recursion.
fn k_polynomial(gens: &[Monomial]) -> Vec<BigInt> {
    // any generator equal to 1 kills the quotient
    if gens.iter().any(|g| g.is_one()) {
        return Vec::new();
    }
    // pairwise-coprime base case: product of (1 - t^deg)
    let coprime = gens
        .iter()
        .enumerate()
        .all(|(a, g)| gens[a + 1..].iter().all(|h| g.coprime(h)));
    if coprime {
        let mut acc = vec![BigInt::one()];
        for g in gens {
            acc = poly_t_mul_one_minus_td(&acc, g.degree() as usize);
        }
        return acc;
    }
    // pivot: the variable occurring in the most generators
    let nvars = gens[0].nvars();
    let mut counts = vec![0usize; nvars];
    for g in gens {
        for v in g.support() {
            counts[v] += 1;
        }
    }
    let pivot = (0..nvars).max_by_key(|&v| counts[v]).unwrap();

    // I + (x_pivot): generators not involving the pivot, plus the pivot
    let rest: Vec<Monomial> = gens
        .iter()
        .filter(|g| g.exps()[pivot] == 0)
        .cloned()
        .collect();
    let rest = minimalize(rest);
    // x_pivot is coprime to everything left
    let sum_part = poly_t_mul_one_minus_td(&k_polynomial(&rest), 1);

    // I : x_pivot, shifted by t
    let colon: Vec<Monomial> = gens
        .iter()
        .map(|g| {
            if g.exps()[pivot] > 0 {
                let mut e = g.exps().to_vec();
                e[pivot] -= 1;
                Monomial::from_exps(e)
            } else {
                g.clone()
            }
        })
        .collect();
    let colon = minimalize(colon);
    let colon_part = poly_t_shift(&k_polynomial(&colon), 1);

    poly_t_add(&sum_part, &colon_part)
}

fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|g| g.degree());
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::new();
    for g in gens {
        if !out.iter().any(|m| m.divides(&g)) {
            out.push(g);
        }
    }
    out
}

/// Exact Hilbert series of R/mi with R in `nvars` variables.
pub fn hilbert_series(mi: &MonomialIdeal, nvars: usize) -> HilbertSeries {
    HilbertSeries { numerator: k_polynomial(&mi.gens), nvars }
}

/// Krull dimension of R/mi: the size of the largest variable subset
/// meeting no generator's support (equivalently nvars minus a minimum
/// vertex cover of the supports), by exact branch and bound.
pub fn krull_dimension(mi: &MonomialIdeal, nvars: usize) -> usize {
    let supports: Vec<Vec<usize>> = mi.gens.iter().map(|g| g.support()).collect();
    let mut best = usize::MAX;
    let mut covered: Vec<u32> = vec![0; nvars];
    fn cover(
        supports: &[Vec<usize>],
        k: usize,
        used: usize,
        covered: &mut Vec<u32>,
        best: &mut usize,
    ) {
        if used >= *best {
            return;
        }
        // next uncovered generator
        let next = (k..supports.len())
            .find(|&i| supports[i].iter().all(|&v| covered[v] == 0));
        match next {
            None => *best = used,
            Some(i) => {
                for &v in &supports[i] {
                    covered[v] += 1;
                    cover(supports, i + 1, used + 1, covered, best);
                    covered[v] -= 1;
                }
            }
        }
    }
    cover(&supports, 0, 0, &mut covered, &mut best);
    nvars - best.min(nvars)
}

/// Verdict on whether a homogeneous sequence is regular, with the data
/// that witnesses it. Over the rationals this is a certificate; over a
/// prime field it is a heuristic for characteristic-zero behavior and is
/// labeled as such.
#[derive(Clone, Debug, Serialize)]
pub struct RegSeqCertificate {
    pub regular: bool,
    pub codim: usize,
    pub expected: usize,
    pub field: String,
    /// true when computed over a characteristic-zero field
    pub certified: bool,
}

fn check_homogeneous<F: Field>(fs: &[Polynomial<F>]) -> Result<()> {
    for f in fs {
        if f.is_zero() || f.homogeneous_degree().map(|d| d == 0).unwrap_or(true) {
            return Err(Error::invalid(
                "regular-sequence check needs nonzero homogeneous polynomials of positive degree",
            ));
        }
    }
    Ok(())
}

/// Regular-sequence test by the codimension criterion: a homogeneous
/// sequence of length c in a polynomial ring is regular iff the ideal it
/// generates has height c.
pub fn is_regular_sequence<F: Field>(
    ring: &PolyRing<F>,
    fs: &[Polynomial<F>],
    cfg: &GroebnerConfig,
) -> Result<RegSeqCertificate> {
    check_homogeneous(fs)?;
    let gb = buchberger(ring, fs, cfg)?;
    let mi = initial_ideal(&gb);
    let nvars = ring.nvars();
    let dim = krull_dimension(&mi, nvars);
    let codim = nvars - dim;
    Ok(RegSeqCertificate {
        regular: codim == fs.len(),
        codim,
        expected: fs.len(),
        field: ring.field.label(),
        certified: ring.field.characteristic() == 0,
    })
}

/// Independent complete-intersection witness: the Hilbert series of R/I
/// equals prod (1 - t^{d_i}) / (1-t)^nvars exactly.
pub fn hilbert_ci_check<F: Field>(
    ring: &PolyRing<F>,
    fs: &[Polynomial<F>],
    cfg: &GroebnerConfig,
) -> Result<bool> {
    check_homogeneous(fs)?;
    let gb = buchberger(ring, fs, cfg)?;
    let mi = initial_ideal(&gb);
    Ok(hilbert_ci_check_from_initial(&mi, ring.nvars(), fs))
}

/// Same check reusing an already-computed initial ideal.
pub fn hilbert_ci_check_from_initial<F: Field>(
    mi: &MonomialIdeal,
    nvars: usize,
    fs: &[Polynomial<F>],
) -> bool {
    let hs = hilbert_series(mi, nvars);
    let mut expected = vec![BigInt::one()];
    for f in fs {
        let d = f.homogeneous_degree().unwrap() as usize;
        expected = poly_t_mul_one_minus_td(&expected, d);
    }
    hs.numerator == expected
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::monomial::{Frame, MonomialOrder};

    fn mono(exps: &[u32]) -> Monomial {
        Monomial::from_exps(exps.to_vec())
    }

    fn ideal(monos: Vec<Monomial>) -> MonomialIdeal {
        MonomialIdeal::new(monos, &MonomialOrder::grevlex())
    }

    #[test]
    fn krull_dimension_examples() {
        // zero ideal in N vars -> N
        assert_eq!(krull_dimension(&ideal(vec![]), 5), 5);
        // (x1) in k[x1,x2] -> 1
        assert_eq!(krull_dimension(&ideal(vec![mono(&[1, 0])]), 2), 1);
        // (x1, x2) in k[x1,x2] -> 0
        assert_eq!(
            krull_dimension(&ideal(vec![mono(&[1, 0]), mono(&[0, 1])]), 2),
            0
        );
        // (x1*x2) -> cover needs one var -> dim 1
        assert_eq!(krull_dimension(&ideal(vec![mono(&[1, 1])]), 2), 1);
    }

    #[test]
    fn hilbert_series_examples() {
        // zero ideal -> 1/(1-t)^N
        let hs = hilbert_series(&ideal(vec![]), 3);
        assert_eq!(hs.numerator, vec![BigInt::one()]);
        assert_eq!(hs.coefficient(2), BigInt::from(6)); // C(4,2)
        // (x^2) in one variable -> 1 + t
        let hs = hilbert_series(&ideal(vec![mono(&[2])]), 1);
        assert_eq!(hs.coefficient(0), BigInt::one());
        assert_eq!(hs.coefficient(1), BigInt::one());
        assert_eq!(hs.coefficient(2), BigInt::zero());
        // numerator is 1 - t^2 over (1-t)^1
        assert_eq!(hs.numerator, vec![BigInt::one(), BigInt::zero(), -BigInt::one()]);
    }

    #[test]
    fn hilbert_series_matches_standard_monomial_counts() {
        // non-coprime example exercising the splitting recursion
        let mi = ideal(vec![mono(&[2, 1, 0]), mono(&[1, 0, 3]), mono(&[0, 2, 2])]);
        let hs = hilbert_series(&mi, 3);
        for d in 0..=8u32 {
            let count = crate::koszul::standard_monomials(&mi, 3, d).len();
            assert_eq!(hs.coefficient(d as usize), BigInt::from(count));
        }
    }

    #[test]
    fn single_quadric_is_regular_and_ci() {
        let ring = PolyRing::new(Frame::new(2, 1), Rationals, MonomialOrder::grevlex());
        let x = ring.var(0);
        let y = ring.var(1);
        let f = ring.add(&ring.mul(&x, &x), &ring.mul(&y, &y));
        let cert = is_regular_sequence(&ring, &[f.clone()], &GroebnerConfig::default()).unwrap();
        assert!(cert.regular);
        assert_eq!(cert.codim, 1);
        assert!(cert.certified);
        assert!(hilbert_ci_check(&ring, &[f], &GroebnerConfig::default()).unwrap());
    }

    #[test]
    fn inhomogeneous_input_rejected() {
        let ring = PolyRing::new(Frame::new(2, 1), Rationals, MonomialOrder::grevlex());
        let x = ring.var(0);
        let p = ring.add(&ring.mul(&x, &x), &x);
        assert!(is_regular_sequence(&ring, &[p], &GroebnerConfig::default()).is_err());
        assert!(is_regular_sequence(&ring, &[ring.one()], &GroebnerConfig::default()).is_err());
    }
}
