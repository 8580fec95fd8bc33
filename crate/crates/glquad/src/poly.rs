//! Sparse multivariate polynomials over an exact field.
//!
//! A `PolyRing` bundles the variable frame, the coefficient field, and
//! the active monomial order; it is the arithmetic context for every
//! polynomial operation. Polynomials store their terms strictly
//! descending in the ring's order, with no zero coefficients and no
//! duplicate monomials. Values are immutable after construction and all
//! operations are pure.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::{Frame, Monomial, MonomialOrder};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial<F: Field> {
    terms: Vec<(Monomial, F::Elem)>,
}

impl<F: Field> Polynomial<F> {
    pub fn zero() -> Polynomial<F> {
        Polynomial { terms: Vec::new() }
    }

    /// Caller guarantees the terms are strictly descending in the active
    /// order with no zero coefficients.
    pub(crate) fn from_terms_unchecked(terms: Vec<(Monomial, F::Elem)>) -> Polynomial<F> {
        Polynomial { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, F::Elem)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Leading (largest) term in the ring's order.
    pub fn leading(&self) -> Option<&(Monomial, F::Elem)> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }

    /// Total degree (max over terms); `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    /// The common degree when every term shares one; `None` otherwise
    /// (and `Some(0)` convention is never needed: zero is homogeneous of
    /// every degree, reported here as `None`).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let first = self.terms.first()?.0.degree();
        self.terms
            .iter()
            .all(|(m, _)| m.degree() == first)
            .then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing<F: Field> {
    pub frame: Frame,
    pub field: F,
    pub order: MonomialOrder,
}

impl<F: Field> PolyRing<F> {
    pub fn new(frame: Frame, field: F, order: MonomialOrder) -> PolyRing<F> {
        PolyRing { frame, field, order }
    }

    pub fn nvars(&self) -> usize {
        self.frame.nvars()
    }

    fn check_frame(&self, p: &Polynomial<F>) -> Result<()> {
        match p.terms.first() {
            Some((m, _)) if m.nvars() != self.nvars() => Err(Error::FrameMismatch {
                expected: self.nvars(),
                got: m.nvars(),
            }),
            _ => Ok(()),
        }
    }

    pub fn zero(&self) -> Polynomial<F> {
        Polynomial::zero()
    }

    pub fn constant(&self, c: F::Elem) -> Polynomial<F> {
        if self.field.is_zero(&c) {
            Polynomial::zero()
        } else {
            Polynomial { terms: vec![(Monomial::one(self.nvars()), c)] }
        }
    }

    pub fn one(&self) -> Polynomial<F> {
        self.constant(self.field.one())
    }

    pub fn var(&self, idx: usize) -> Polynomial<F> {
        Polynomial {
            terms: vec![(Monomial::var(self.nvars(), idx), self.field.one())],
        }
    }

    /// x[s,t] by 1-based grid position.
    pub fn var_st(&self, s: usize, t: usize) -> Result<Polynomial<F>> {
        Ok(self.var(self.frame.var(s, t)?))
    }

    pub fn monomial(&self, m: Monomial) -> Polynomial<F> {
        Polynomial { terms: vec![(m, self.field.one())] }
    }

    /// Normalize an arbitrary term list: sort descending, merge equal
    /// monomials, drop zeros.
    pub fn from_terms(&self, mut terms: Vec<(Monomial, F::Elem)>) -> Polynomial<F> {
        terms.sort_by(|a, b| self.order.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, F::Elem)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => {
                    *lc = self.field.add(lc, &c);
                }
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !self.field.is_zero(c));
        Polynomial { terms: out }
    }

    /// Merge-add of two normalized polynomials.
    pub fn add(&self, a: &Polynomial<F>, b: &Polynomial<F>) -> Polynomial<F> {
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let mut ia = 0;
        let mut ib = 0;
        while ia < a.terms.len() && ib < b.terms.len() {
            let (ma, ca) = &a.terms[ia];
            let (mb, cb) = &b.terms[ib];
            match self.order.cmp(ma, mb) {
                Ordering::Greater => {
                    out.push((ma.clone(), ca.clone()));
                    ia += 1;
                }
                Ordering::Less => {
                    out.push((mb.clone(), cb.clone()));
                    ib += 1;
                }
                Ordering::Equal => {
                    let c = self.field.add(ca, cb);
                    if !self.field.is_zero(&c) {
                        out.push((ma.clone(), c));
                    }
                    ia += 1;
                    ib += 1;
                }
            }
        }
        out.extend_from_slice(&a.terms[ia..]);
        out.extend_from_slice(&b.terms[ib..]);
        Polynomial { terms: out }
    }

    pub fn neg(&self, a: &Polynomial<F>) -> Polynomial<F> {
        Polynomial {
            terms: a
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), self.field.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, a: &Polynomial<F>, b: &Polynomial<F>) -> Polynomial<F> {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &Polynomial<F>, c: &F::Elem) -> Polynomial<F> {
        if self.field.is_zero(c) {
            return Polynomial::zero();
        }
        Polynomial {
            terms: a
                .terms
                .iter()
                .map(|(m, cc)| (m.clone(), self.field.mul(cc, c)))
                .collect(),
        }
    }

    /// a * (coeff * mono); preserves normalization.
    pub fn mul_term(&self, a: &Polynomial<F>, mono: &Monomial, coeff: &F::Elem) -> Polynomial<F> {
        if self.field.is_zero(coeff) {
            return Polynomial::zero();
        }
        Polynomial {
            terms: a
                .terms
                .iter()
                .map(|(m, c)| (m.mul(mono), self.field.mul(c, coeff)))
                .collect(),
        }
    }

    pub fn mul(&self, a: &Polynomial<F>, b: &Polynomial<F>) -> Polynomial<F> {
        let mut terms = Vec::with_capacity(a.terms.len() * b.terms.len());
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                terms.push((ma.mul(mb), self.field.mul(ca, cb)));
            }
        }
        self.from_terms(terms)
    }

    pub fn pow(&self, a: &Polynomial<F>, k: u32) -> Polynomial<F> {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Frame-checked sum; errors on a variable-count mismatch.
    pub fn checked_add(&self, a: &Polynomial<F>, b: &Polynomial<F>) -> Result<Polynomial<F>> {
        self.check_frame(a)?;
        self.check_frame(b)?;
        Ok(self.add(a, b))
    }

    /// Frame-checked product.
    pub fn checked_mul(&self, a: &Polynomial<F>, b: &Polynomial<F>) -> Result<Polynomial<F>> {
        self.check_frame(a)?;
        self.check_frame(b)?;
        Ok(self.mul(a, b))
    }

    pub fn coeff_of(&self, a: &Polynomial<F>, m: &Monomial) -> F::Elem {
        a.terms
            .iter()
            .find(|(mm, _)| mm == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.field.zero())
    }

    /// Formal partial derivative with respect to variable `idx`.
    pub fn derivative(&self, a: &Polynomial<F>, idx: usize) -> Polynomial<F> {
        let mut terms = Vec::new();
        for (m, c) in &a.terms {
            let e = m.exps()[idx];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[idx] -= 1;
            let coeff = self.field.mul(c, &self.field.from_i64(e as i64));
            terms.push((Monomial::from_exps(exps), coeff));
        }
        self.from_terms(terms)
    }

    /// Make monic by its leading coefficient; zero stays zero.
    pub fn monic(&self, a: &Polynomial<F>) -> Polynomial<F> {
        match a.leading() {
            None => Polynomial::zero(),
            Some((_, lc)) => {
                let inv = self.field.inv(lc).unwrap();
                self.scale(a, &inv)
            }
        }
    }

    /// Drop all terms involving a column outside `keep_cols` and
    /// re-index the survivors into the sub-frame on the kept columns
    /// (in ascending original column order). Returns the sub-ring and
    /// the image polynomial; equivalently, the substitution
    /// x[s,t] = 0 for t outside the kept set.
    pub fn specialize(
        &self,
        p: &Polynomial<F>,
        keep_cols: &[usize],
    ) -> Result<(PolyRing<F>, Polynomial<F>)> {
        let mut cols: Vec<usize> = keep_cols.to_vec();
        cols.sort_unstable();
        cols.dedup();
        if cols.iter().any(|&t| t < 1 || t > self.frame.cols) {
            return Err(Error::invalid(format!(
                "keep_cols must lie in 1..={}",
                self.frame.cols
            )));
        }
        let sub_frame = Frame::new(self.frame.rows, cols.len());
        let sub_ring = PolyRing::new(sub_frame, self.field.clone(), self.order.clone());
        let mut col_pos = vec![None; self.frame.cols + 1];
        for (k, &t) in cols.iter().enumerate() {
            col_pos[t] = Some(k + 1);
        }
        let mut terms = Vec::new();
        'term: for (m, c) in &p.terms {
            let mut exps = vec![0u32; sub_frame.nvars()];
            for (idx, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let (s, t) = self.frame.row_col(idx);
                match col_pos[t] {
                    Some(new_t) => {
                        exps[sub_frame.var(s, new_t).unwrap()] = e;
                    }
                    None => continue 'term, // term dies under x[s,t] = 0
                }
            }
            terms.push((Monomial::from_exps(exps), c.clone()));
        }
        Ok((sub_ring.clone(), sub_ring.from_terms(terms)))
    }

    /// Evaluate `p` under a variable-wise substitution into `target`:
    /// `images[v]` is the image of variable v. Intended for linear
    /// changes of coordinates; degrees are handled generically.
    pub fn substitute(
        &self,
        p: &Polynomial<F>,
        target: &PolyRing<F>,
        images: &[Polynomial<F>],
    ) -> Polynomial<F> {
        debug_assert_eq!(images.len(), self.nvars());
        let mut acc = target.zero();
        for (m, c) in &p.terms {
            let mut prod = target.constant(c.clone());
            for (idx, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                prod = target.mul(&prod, &target.pow(&images[idx], e));
            }
            acc = target.add(&acc, &prod);
        }
        acc
    }

    /// Render using the CLI expression grammar: terms joined by +/-,
    /// variables as x[s,t], exponents with ^.
    pub fn fmt_poly(&self, p: &Polynomial<F>) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in p.terms.iter().enumerate() {
            let cs = self.field.fmt_elem(c);
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            if mag != "1" || m.is_one() {
                factors.push(mag);
            }
            for (idx, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let (s, t) = self.frame.row_col(idx);
                if e == 1 {
                    factors.push(format!("x[{s},{t}]"));
                } else {
                    factors.push(format!("x[{s},{t}]^{e}"));
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}
