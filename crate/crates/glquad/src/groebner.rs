//! Buchberger's algorithm with the normal selection strategy, the
//! coprime-lcm and chain elimination criteria, full inter-reduction, and
//! configurable resource caps. The reduced basis is the gateway to every
//! quotient invariant downstream.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{PolyRing, Polynomial};

#[derive(Clone, Copy, Debug)]
pub struct GroebnerConfig {
    /// Cap on S-pairs actually reduced.
    pub max_pairs: usize,
    /// Cap on the degree of any selected S-pair lcm.
    pub max_degree: u32,
}

impl Default for GroebnerConfig {
    fn default() -> Self {
        GroebnerConfig { max_pairs: 500_000, max_degree: 80 }
    }
}

/// A reduced Groebner basis: monic generators, no leading monomial
/// divides any term of another generator. Keeps the source generators
/// for provenance.
#[derive(Clone, Debug)]
pub struct GroebnerBasis<F: Field> {
    pub ring: PolyRing<F>,
    pub generators: Vec<Polynomial<F>>,
    pub input: Vec<Polynomial<F>>,
}

impl<F: Field> GroebnerBasis<F> {
    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.generators
            .iter()
            .map(|g| g.leading_monomial().unwrap().clone())
            .collect()
    }
}

/// Minimal generators of a monomial ideal: an antichain under
/// divisibility.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialIdeal {
    pub gens: Vec<Monomial>,
}

impl MonomialIdeal {
    /// Minimalize an arbitrary generating set; the result is sorted for
    /// determinism (by the given order).
    pub fn new(mut gens: Vec<Monomial>, order: &MonomialOrder) -> MonomialIdeal {
        gens.sort_by(|a, b| order.cmp(a, b));
        gens.dedup();
        let mut minimal: Vec<Monomial> = Vec::new();
        for g in gens {
            if !minimal.iter().any(|m| m.divides(&g)) {
                minimal.push(g);
            }
        }
        MonomialIdeal { gens: minimal }
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }
}

/// The classical S-polynomial (lcm/lt(f))*f - (lcm/lt(g))*g; the leading
/// terms cancel by construction.
pub fn s_polynomial<F: Field>(
    ring: &PolyRing<F>,
    f: &Polynomial<F>,
    g: &Polynomial<F>,
) -> Result<Polynomial<F>> {
    let (lmf, lcf) = f.leading().ok_or_else(|| Error::invalid("s_polynomial of zero"))?;
    let (lmg, lcg) = g.leading().ok_or_else(|| Error::invalid("s_polynomial of zero"))?;
    let lcm = lmf.lcm(lmg);
    let mf = lmf.quotient_of(&lcm).unwrap();
    let mg = lmg.quotient_of(&lcm).unwrap();
    let a = ring.mul_term(f, &mf, &ring.field.inv(lcf).unwrap());
    let b = ring.mul_term(g, &mg, &ring.field.inv(lcg).unwrap());
    Ok(ring.sub(&a, &b))
}

/// Full normal form: no term of the result is divisible by any basis
/// leading monomial, and p - result lies in the ideal of the basis.
pub fn normal_form<F: Field>(
    ring: &PolyRing<F>,
    p: &Polynomial<F>,
    basis: &[Polynomial<F>],
) -> Polynomial<F> {
    let lms: Vec<(&Monomial, &F::Elem)> = basis
        .iter()
        .filter_map(|g| g.leading().map(|(m, c)| (m, c)))
        .collect();
    let mut work = p.clone();
    let mut remainder: Vec<(Monomial, F::Elem)> = Vec::new();
    'outer: while let Some((lm, lc)) = work.leading().cloned() {
        for (k, (glm, glc)) in lms.iter().enumerate() {
            if glm.divides(&lm) {
                let q = glm.quotient_of(&lm).unwrap();
                let coeff = ring.field.div(&lc, glc);
                work = ring.sub(&work, &ring.mul_term(&basis[k], &q, &coeff));
                continue 'outer;
            }
        }
        // leading term is irreducible: move it to the remainder
        remainder.push((lm, lc));
        work = Polynomial::from_terms_unchecked(work.terms()[1..].to_vec());
    }
    // remainder was produced in strictly descending order
    Polynomial::from_terms_unchecked(remainder)
}

#[derive(PartialEq, Eq)]
struct PairKey {
    degree: u32,
    lcm_rank: Vec<u32>,
    i: usize,
    j: usize,
}

impl Ord for PairKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.degree, &self.lcm_rank, self.i, self.j).cmp(&(
            other.degree,
            &other.lcm_rank,
            other.i,
            other.j,
        ))
    }
}

impl PartialOrd for PairKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Buchberger's algorithm; returns the unique reduced Groebner basis of
/// the input ideal for the ring's order. Deterministic for fixed input.
pub fn buchberger<F: Field>(
    ring: &PolyRing<F>,
    gens: &[Polynomial<F>],
    cfg: &GroebnerConfig,
) -> Result<GroebnerBasis<F>> {
    let input: Vec<Polynomial<F>> = gens.to_vec();
    let mut basis: Vec<Polynomial<F>> = Vec::new();
    for g in gens {
        if !g.is_zero() {
            basis.push(ring.monic(g));
        }
    }

    let mut heap: BinaryHeap<Reverse<PairKey>> = BinaryHeap::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    let push_pair = |heap: &mut BinaryHeap<Reverse<PairKey>>,
                     pending: &mut HashSet<(usize, usize)>,
                     basis: &[Polynomial<F>],
                     i: usize,
                     j: usize| {
        let lcm = basis[i]
            .leading_monomial()
            .unwrap()
            .lcm(basis[j].leading_monomial().unwrap());
        heap.push(Reverse(PairKey {
            degree: lcm.degree(),
            lcm_rank: lcm.exps().to_vec(),
            i,
            j,
        }));
        pending.insert((i, j));
    };
    for j in 1..basis.len() {
        for i in 0..j {
            push_pair(&mut heap, &mut pending, &basis, i, j);
        }
    }

    let mut processed = 0usize;
    while let Some(Reverse(key)) = heap.pop() {
        let (i, j) = (key.i, key.j);
        pending.remove(&(i, j));
        let lmi = basis[i].leading_monomial().unwrap();
        let lmj = basis[j].leading_monomial().unwrap();
        // product criterion
        if lmi.coprime(lmj) {
            continue;
        }
        let lcm = lmi.lcm(lmj);
        // chain criterion: some k with lm_k | lcm and both mixed pairs
        // already handled (no longer pending)
        let chain = (0..basis.len()).any(|k| {
            if k == i || k == j {
                return false;
            }
            if !basis[k].leading_monomial().unwrap().divides(&lcm) {
                return false;
            }
            let p1 = (i.min(k), i.max(k));
            let p2 = (j.min(k), j.max(k));
            !pending.contains(&p1) && !pending.contains(&p2)
        });
        if chain {
            continue;
        }
        if lcm.degree() > cfg.max_degree {
            return Err(Error::cap(format!(
                "S-pair lcm degree {} exceeds max_degree {}",
                lcm.degree(),
                cfg.max_degree
            )));
        }
        processed += 1;
        if processed > cfg.max_pairs {
            return Err(Error::cap(format!(
                "S-pair count exceeds max_pairs {}",
                cfg.max_pairs
            )));
        }
        let s = s_polynomial(ring, &basis[i], &basis[j])?;
        let r = normal_form(ring, &s, &basis);
        if !r.is_zero() {
            let r = ring.monic(&r);
            basis.push(r);
            let t = basis.len() - 1;
            for i in 0..t {
                push_pair(&mut heap, &mut pending, &basis, i, t);
            }
        }
    }

    // Minimalize: drop generators whose leading monomial is divisible by
    // another's.
    let lms: Vec<Monomial> = basis
        .iter()
        .map(|g| g.leading_monomial().unwrap().clone())
        .collect();
    let mut keep: Vec<bool> = vec![true; basis.len()];
    for a in 0..basis.len() {
        for b in 0..basis.len() {
            if a != b
                && keep[a]
                && keep[b]
                && lms[b].divides(&lms[a])
                && (lms[a] != lms[b] || b < a)
            {
                keep[a] = false;
            }
        }
    }
    let mut minimal: Vec<Polynomial<F>> = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(g, k)| k.then_some(g))
        .collect();

    // Inter-reduce tails to obtain the reduced basis.
    loop {
        let mut changed = false;
        for k in 0..minimal.len() {
            let others: Vec<Polynomial<F>> = minimal
                .iter()
                .enumerate()
                .filter_map(|(t, g)| (t != k).then(|| g.clone()))
                .collect();
            let reduced = ring.monic(&normal_form(ring, &minimal[k], &others));
            if reduced != minimal[k] {
                minimal[k] = reduced;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    minimal.retain(|g| !g.is_zero());
    minimal.sort_by(|a, b| {
        ring.order
            .cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap())
    });

    Ok(GroebnerBasis { ring: ring.clone(), generators: minimal, input })
}

/// Minimal monomial generators of the initial (leading-term) ideal.
pub fn initial_ideal<F: Field>(gb: &GroebnerBasis<F>) -> MonomialIdeal {
    MonomialIdeal::new(gb.leading_monomials(), &gb.ring.order)
}
