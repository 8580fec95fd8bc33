//! Strength and collective strength of quadrics.
//!
//! The strength of a quadric is ceil(rank/2) - 1 with the rank taken
//! from the symmetric Gram matrix (valid over any field of odd or zero
//! characteristic, with the strength read in the algebraic closure).
//! Witness decompositions sum_{i=1}^{k+1} g_i h_i are produced
//! best-effort by symbolic diagonalization and hyperbolic pairing; when
//! the base field lacks the needed square roots the witness is omitted
//! and the method label says so.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{PolyRing, Polynomial};

/// Symmetric Gram matrix of a degree-2 form: Q(x) = x^T G x, so the
/// off-diagonal entries are half the mixed coefficients.
#[derive(Clone, Debug)]
pub struct QuadricForm<F: Field> {
    pub mat: Vec<Vec<F::Elem>>,
}

impl<F: Field> QuadricForm<F> {
    pub fn size(&self) -> usize {
        self.mat.len()
    }
}

/// Build the Gram matrix of a homogeneous quadric.
pub fn gram_matrix<F: Field>(ring: &PolyRing<F>, q: &Polynomial<F>) -> Result<QuadricForm<F>> {
    if ring.field.characteristic() == 2 {
        return Err(Error::invalid("Gram matrix needs characteristic != 2"));
    }
    if q.homogeneous_degree() != Some(2) {
        return Err(Error::invalid(
            "Gram matrix needs a nonzero homogeneous polynomial of degree 2",
        ));
    }
    let n = ring.nvars();
    let field = &ring.field;
    let half = field.inv(&field.from_i64(2)).unwrap();
    let mut mat = vec![vec![field.zero(); n]; n];
    for (m, c) in q.terms() {
        let support: Vec<(usize, u32)> = m
            .exps()
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(v, e)| (v, *e))
            .collect();
        match support.as_slice() {
            [(v, 2)] => {
                mat[*v][*v] = c.clone();
            }
            [(u, 1), (v, 1)] => {
                let hc = field.mul(c, &half);
                mat[*u][*v] = hc.clone();
                mat[*v][*u] = hc;
            }
            _ => unreachable!("degree-2 terms have shape x^2 or xy"),
        }
    }
    Ok(QuadricForm { mat })
}

/// Recover the polynomial from a Gram matrix; the round trip is the
/// identity in characteristic != 2.
pub fn gram_to_poly<F: Field>(ring: &PolyRing<F>, g: &QuadricForm<F>) -> Polynomial<F> {
    let field = &ring.field;
    let n = g.size();
    let mut terms = Vec::new();
    for u in 0..n {
        for v in u..n {
            let c = if u == v {
                g.mat[u][u].clone()
            } else {
                field.add(&g.mat[u][v], &g.mat[u][v])
            };
            if field.is_zero(&c) {
                continue;
            }
            let m = crate::monomial::Monomial::var(n, u).mul_var(v);
            terms.push((m, c));
        }
    }
    ring.from_terms(terms)
}

pub fn gram_rank<F: Field>(ring: &PolyRing<F>, g: &QuadricForm<F>) -> usize {
    ring.field.mat_rank(g.mat.clone())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrengthMethod {
    /// rank of the Gram matrix, with a witness decomposition
    GramRank,
    /// rank of the Gram matrix; witness omitted (no rational splitting)
    GramRankNoWitness,
    /// exhaustive projective search (collective strength)
    Exhaustive,
    /// random sampling: an upper bound only
    SampledUpperBound,
}

#[derive(Clone, Debug)]
pub struct StrengthReport<F: Field> {
    pub rank: usize,
    pub strength: usize,
    pub method: StrengthMethod,
    /// decomposition q = sum g_i h_i with strength + 1 products
    pub witness: Option<Vec<(Polynomial<F>, Polynomial<F>)>>,
}

/// Symbolic diagonalization by iterated completion of the square:
/// returns (c_k, l_k) with q = sum c_k l_k^2 and the l_k linear.
fn diagonalize<F: Field>(
    ring: &PolyRing<F>,
    q: &Polynomial<F>,
) -> Vec<(F::Elem, Polynomial<F>)> {
    let field = ring.field.clone();
    let two = field.from_i64(2);
    let mut rest = q.clone();
    let mut out: Vec<(F::Elem, Polynomial<F>)> = Vec::new();
    while !rest.is_zero() {
        // a variable with a square term?
        let square_var = rest.terms().iter().find_map(|(m, _)| {
            m.exps()
                .iter()
                .position(|&e| e == 2)
                .filter(|_| m.degree() == 2 && m.support().len() == 1)
        });
        if let Some(v) = square_var {
            let a = ring.coeff_of(&rest, &crate::monomial::Monomial::var(ring.nvars(), v).mul_var(v));
            // l = (1/2a) * dq/dx_v = x_v + (cross terms)/(2a)
            let grad = ring.derivative(&rest, v);
            let scale = field.inv(&field.mul(&two, &a)).unwrap();
            let l = ring.scale(&grad, &scale);
            let contrib = ring.scale(&ring.mul(&l, &l), &a);
            rest = ring.sub(&rest, &contrib);
            out.push((a, l));
            continue;
        }
        // otherwise pick a cross term x_u x_v and split off a product
        let Some((m, c)) = rest.terms().first().cloned() else { break };
        let sup = m.support();
        debug_assert_eq!(sup.len(), 2);
        let (u, v) = (sup[0], sup[1]);
        // rest = x_u * alpha + x_v * beta + r, alpha = c x_v + alpha'
        let alpha = ring.derivative(&rest, u);
        let beta_full = ring.derivative(&rest, v); // = c x_u + beta
        let xu = ring.var(u);
        let xv = ring.var(v);
        let beta = ring.sub(&beta_full, &ring.scale(&xu, &c));
        let alpha_p = ring.sub(&alpha, &ring.scale(&xv, &c));
        let cinv = field.inv(&c).unwrap();
        // q = (x_u + beta/c)(c x_v + alpha') + (r - beta*alpha'/c)
        let g = ring.add(&xu, &ring.scale(&beta, &cinv));
        let h = ring.add(&ring.scale(&xv, &c), &alpha_p);
        let prod = ring.mul(&g, &h);
        rest = ring.sub(&rest, &prod);
        // g*h as difference of squares: ((g+h)/2)^2 - ((g-h)/2)^2
        let half = field.inv(&two).unwrap();
        let s1 = ring.scale(&ring.add(&g, &h), &half);
        let s2 = ring.scale(&ring.sub(&g, &h), &half);
        out.push((field.one(), s1));
        out.push((field.neg(&field.one()), s2));
    }
    out
}

/// Pair diagonal pieces into products. c_a l_a^2 + c_b l_b^2 factors as
/// c_a (l_a + t l_b)(l_a - t l_b) exactly when t^2 = -c_b/c_a exists in
/// the field.
fn pair_witness<F: Field>(
    ring: &PolyRing<F>,
    diag: &[(F::Elem, Polynomial<F>)],
) -> Option<Vec<(Polynomial<F>, Polynomial<F>)>> {
    let field = ring.field.clone();
    let r = diag.len();
    let want_products = r.div_ceil(2);
    let mut used = vec![false; r];
    let mut products: Vec<(Polynomial<F>, Polynomial<F>)> = Vec::new();
    // greedy maximum matching over splittable pairs
    for a in 0..r {
        if used[a] {
            continue;
        }
        for b in a + 1..r {
            if used[b] {
                continue;
            }
            let ratio = field.neg(&field.div(&diag[b].0, &diag[a].0));
            if let Some(t) = field.sqrt(&ratio) {
                let la = &diag[a].1;
                let lb = ring.scale(&diag[b].1, &t);
                let g = ring.scale(&ring.add(la, &lb), &diag[a].0);
                let h = ring.sub(la, &lb);
                products.push((g, h));
                used[a] = true;
                used[b] = true;
                break;
            }
        }
    }
    // an odd leftover is a product on its own
    let leftovers: Vec<usize> = (0..r).filter(|&k| !used[k]).collect();
    if leftovers.len() == r % 2 {
        for k in leftovers {
            let (c, l) = &diag[k];
            products.push((ring.scale(l, c), l.clone()));
        }
        (products.len() == want_products).then_some(products)
    } else {
        None
    }
}

/// Strength of a quadric via the Gram rank, with a best-effort witness.
pub fn quadric_strength<F: Field>(
    ring: &PolyRing<F>,
    q: &Polynomial<F>,
) -> Result<StrengthReport<F>> {
    let gram = gram_matrix(ring, q)?;
    let rank = gram_rank(ring, &gram);
    let strength = rank.div_ceil(2) - 1;
    let diag = diagonalize(ring, q);
    debug_assert_eq!(diag.len(), rank);
    match pair_witness(ring, &diag) {
        Some(w) => Ok(StrengthReport {
            rank,
            strength,
            method: StrengthMethod::GramRank,
            witness: Some(w),
        }),
        None => Ok(StrengthReport {
            rank,
            strength,
            method: StrengthMethod::GramRankNoWitness,
            witness: None,
        }),
    }
}

/// Guard for the exhaustive search: number of projective points
/// (p^r - 1)/(p - 1) may not exceed this.
pub const EXHAUSTIVE_POINT_BUDGET: u128 = 10_000_000;

fn projective_point_count(p: u64, r: usize) -> u128 {
    let mut total: u128 = 0;
    let mut power: u128 = 1;
    for _ in 0..r {
        total += power;
        power *= p as u128;
    }
    total
}

/// Exact collective strength over GF(p) by exhaustive search of the
/// projective space of nonzero coefficient vectors. `threads` chunks the
/// search; the result is a deterministic min-reduce.
pub fn collective_strength_exact<F: Field>(
    ring: &PolyRing<F>,
    qs: &[Polynomial<F>],
    threads: usize,
) -> Result<usize> {
    let p = ring.field.characteristic();
    if p == 0 {
        return Err(Error::invalid(
            "exhaustive collective strength needs a prime field; use the sampled or family path over QQ",
        ));
    }
    if qs.is_empty() {
        return Err(Error::invalid("collective strength of an empty list"));
    }
    let r = qs.len();
    let count = projective_point_count(p, r);
    if count > EXHAUSTIVE_POINT_BUDGET {
        return Err(Error::cap(format!(
            "projective search space has {count} points (> {EXHAUSTIVE_POINT_BUDGET}); \
             use collective_strength_sampled or the family formula"
        )));
    }

    let grams: Vec<QuadricForm<F>> = qs
        .iter()
        .map(|q| gram_matrix(ring, q))
        .collect::<Result<_>>()?;
    let n = grams[0].size();
    let field = ring.field.clone();

    // representatives: first nonzero coordinate normalized to 1
    let eval_range = |lo: u128, hi: u128| -> usize {
        // leading coordinate normalized to 1; block of points with the
        // leading 1 at position `lead` has p^(r-1-lead) members
        let block_sizes: Vec<u128> = (0..r)
            .map(|lead| (p as u128).pow((r - 1 - lead) as u32))
            .collect();
        let mut best = usize::MAX;
        for mut code in lo..hi {
            let mut lead = 0usize;
            while code >= block_sizes[lead] {
                code -= block_sizes[lead];
                lead += 1;
            }
            let mut coeffs = vec![field.zero(); r];
            coeffs[lead] = field.one();
            let mut rem = code;
            for c in coeffs.iter_mut().take(r).skip(lead + 1) {
                *c = field.from_i64((rem % p as u128) as i64);
                rem /= p as u128;
            }
            // rank of the combined Gram matrix
            let mut mat = vec![vec![field.zero(); n]; n];
            for (q, a) in grams.iter().zip(&coeffs) {
                if field.is_zero(a) {
                    continue;
                }
                for row in 0..n {
                    for col in 0..n {
                        let add = field.mul(&q.mat[row][col], a);
                        mat[row][col] = field.add(&mat[row][col], &add);
                    }
                }
            }
            let rank = field.mat_rank(mat);
            if rank > 0 {
                best = best.min(rank.div_ceil(2) - 1);
            }
        }
        best
    };

    let threads = threads.max(1);
    let best = if threads == 1 || count < 1024 {
        eval_range(0, count)
    } else {
        let chunk = count / threads as u128 + 1;
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for t in 0..threads as u128 {
                let lo = t * chunk;
                let hi = ((t + 1) * chunk).min(count);
                if lo >= hi {
                    continue;
                }
                let eval = &eval_range;
                handles.push(scope.spawn(move || eval(lo, hi)));
            }
            handles
                .into_iter()
                .map(|h| h.join().expect("search worker"))
                .min()
                .unwrap_or(usize::MAX)
        })
    };
    if best == usize::MAX {
        return Err(Error::invalid(
            "every combination vanished: the forms are linearly dependent and zero",
        ));
    }
    Ok(best)
}

/// Minimum strength over random nonzero combinations: an upper bound on
/// the collective strength, labeled as such.
pub fn collective_strength_sampled<F: Field>(
    ring: &PolyRing<F>,
    qs: &[Polynomial<F>],
    trials: usize,
    seed: u64,
) -> Result<usize> {
    if qs.is_empty() {
        return Err(Error::invalid("collective strength of an empty list"));
    }
    let grams: Vec<QuadricForm<F>> = qs
        .iter()
        .map(|q| gram_matrix(ring, q))
        .collect::<Result<_>>()?;
    let n = grams[0].size();
    let field = ring.field.clone();
    let p = field.characteristic();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = usize::MAX;
    for _ in 0..trials {
        let coeffs: Vec<F::Elem> = (0..qs.len())
            .map(|_| {
                if p > 0 {
                    field.from_i64(rng.gen_range(0..p as i64))
                } else {
                    field.from_i64(rng.gen_range(-50i64..=50))
                }
            })
            .collect();
        if coeffs.iter().all(|c| field.is_zero(c)) {
            continue;
        }
        let mut mat = vec![vec![field.zero(); n]; n];
        for (q, a) in grams.iter().zip(&coeffs) {
            if field.is_zero(a) {
                continue;
            }
            for row in 0..n {
                for col in 0..n {
                    let add = field.mul(&q.mat[row][col], a);
                    mat[row][col] = field.add(&mat[row][col], &add);
                }
            }
        }
        let rank = field.mat_rank(mat);
        if rank > 0 {
            best = best.min(rank.div_ceil(2) - 1);
        }
    }
    if best == usize::MAX {
        return Err(Error::invalid("no nonzero combination sampled"));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family;
    use crate::field::{PrimeField, Rationals};
    use crate::monomial::{Frame, MonomialOrder};

    fn ring_q(n: usize, m: usize) -> PolyRing<Rationals> {
        PolyRing::new(Frame::new(n, m), Rationals, MonomialOrder::grevlex())
    }

    #[test]
    fn gram_examples() {
        let r = ring_q(2, 1);
        let x1 = r.var(0);
        let q = r.mul(&x1, &x1);
        let g = gram_matrix(&r, &q).unwrap();
        assert_eq!(g.mat[0][0], r.field.from_i64(1));
        assert!(r.field.is_zero(&g.mat[1][1]));
        // x1*x2 -> off-diagonal 1/2
        let x2 = r.var(1);
        let g = gram_matrix(&r, &r.mul(&x1, &x2)).unwrap();
        let half = r.field.div(&r.field.one(), &r.field.from_i64(2));
        assert_eq!(g.mat[0][1], half);
        assert_eq!(g.mat[1][0], g.mat[0][1]);
    }

    #[test]
    fn gram_round_trip() {
        let r = ring_q(3, 2);
        let f = family::generator(&r, 1, 2).unwrap();
        let g = gram_matrix(&r, &f).unwrap();
        assert_eq!(gram_to_poly(&r, &g), f);
    }

    #[test]
    fn gram_rejects_wrong_degree() {
        let r = ring_q(2, 1);
        let x = r.var(0);
        assert!(gram_matrix(&r, &x).is_err());
        assert!(gram_matrix(&r, &r.pow(&x, 3)).is_err());
        assert!(gram_matrix(&r, &r.zero()).is_err());
    }

    #[test]
    fn strength_examples() {
        // strength(x^2) = 0
        let r = ring_q(1, 1);
        let x = r.var(0);
        let rep = quadric_strength(&r, &r.mul(&x, &x)).unwrap();
        assert_eq!(rep.rank, 1);
        assert_eq!(rep.strength, 0);
        // witness exists: x^2 = x * x
        let w = rep.witness.unwrap();
        assert_eq!(w.len(), 1);
    }

    #[test]
    fn witness_multiplies_back() {
        let fp = PrimeField::new(101).unwrap();
        let r = PolyRing::new(Frame::new(4, 2), fp, MonomialOrder::grevlex());
        for (i, j) in [(1, 1), (1, 2), (2, 2)] {
            let f = family::generator(&r, i, j).unwrap();
            let rep = quadric_strength(&r, &f).unwrap();
            if let Some(w) = rep.witness {
                assert_eq!(w.len(), rep.strength + 1);
                let mut acc = r.zero();
                for (g, h) in &w {
                    assert!(g.homogeneous_degree().unwrap() > 0);
                    assert!(h.homogeneous_degree().unwrap() > 0);
                    acc = r.add(&acc, &r.mul(g, h));
                }
                assert_eq!(acc, f);
            }
        }
    }

    #[test]
    fn diagonalization_reproduces_input() {
        let r = ring_q(3, 2);
        for (i, j) in [(1, 1), (1, 2), (2, 2)] {
            let f = family::generator(&r, i, j).unwrap();
            let diag = diagonalize(&r, &f);
            let mut acc = r.zero();
            for (c, l) in &diag {
                acc = r.add(&acc, &r.scale(&r.mul(l, l), c));
            }
            assert_eq!(acc, f);
        }
    }

    #[test]
    fn collective_strength_trivial_examples() {
        let fp = PrimeField::new(101).unwrap();
        let r = PolyRing::new(Frame::new(2, 1), fp, MonomialOrder::grevlex());
        let x = r.var(0);
        let y = r.var(1);
        let qs = vec![r.mul(&x, &x), r.mul(&y, &y)];
        // x^2 alone has rank 1 -> strength 0
        assert_eq!(collective_strength_exact(&r, &qs, 1).unwrap(), 0);
        // sampling gives an upper bound consistent with exact
        let s = collective_strength_sampled(&r, &qs, 500, 7).unwrap();
        assert!(s >= collective_strength_exact(&r, &qs, 1).unwrap());
    }

    #[test]
    fn exhaustive_budget_guard() {
        let fp = PrimeField::new(32003).unwrap();
        let r = PolyRing::new(Frame::new(2, 3), fp, MonomialOrder::grevlex());
        let qs = family::sequence_f(&r).unwrap(); // 6 quadrics: 32003^6 points
        match collective_strength_exact(&r, &qs, 1) {
            Err(Error::ResourceCap(_)) => {}
            other => panic!("expected budget guard, got {other:?}"),
        }
    }
}
