//! Variable frames, monomials, and graded monomial orders.
//!
//! Variables x[s,t] live in an n-by-m frame and are numbered
//! column-major: x[1,1] > x[2,1] > ... > x[n,1] > x[1,2] > ...
//! so that specializing away a set of columns deletes a contiguous block
//! of low-priority variables.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An n-by-m grid of variables x[s,t], 1 <= s <= n, 1 <= t <= m.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Frame {
    pub rows: usize,
    pub cols: usize,
}

impl Frame {
    pub fn new(rows: usize, cols: usize) -> Frame {
        Frame { rows, cols }
    }

    pub fn nvars(&self) -> usize {
        self.rows * self.cols
    }

    /// Column-major index of x[s,t] (1-based s, t).
    pub fn var(&self, s: usize, t: usize) -> Result<usize> {
        if s < 1 || s > self.rows || t < 1 || t > self.cols {
            return Err(Error::invalid(format!(
                "variable x[{s},{t}] out of frame {}x{}",
                self.rows, self.cols
            )));
        }
        Ok((t - 1) * self.rows + (s - 1))
    }

    /// Inverse of `var`: (row, col), 1-based.
    pub fn row_col(&self, idx: usize) -> (usize, usize) {
        (idx % self.rows + 1, idx / self.rows + 1)
    }
}

/// Exponent vector with cached total degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
    degree: u32,
}

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial { exps: vec![0; nvars], degree: 0 }
    }

    pub fn var(nvars: usize, idx: usize) -> Monomial {
        let mut exps = vec![0; nvars];
        exps[idx] = 1;
        Monomial { exps, degree: 1 }
    }

    pub fn from_exps(exps: Vec<u32>) -> Monomial {
        let degree = exps.iter().sum();
        Monomial { exps, degree }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a + b)
            .collect();
        Monomial { exps, degree: self.degree + other.degree }
    }

    pub fn mul_var(&self, idx: usize) -> Monomial {
        let mut exps = self.exps.clone();
        exps[idx] += 1;
        Monomial { exps, degree: self.degree + 1 }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree
            && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// other / self, when self divides other.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let exps = other.exps.iter().zip(&self.exps).map(|(b, a)| b - a).collect();
        Some(Monomial { exps, degree: other.degree - self.degree })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let exps: Vec<u32> = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| *a.max(b))
            .collect();
        Monomial::from_exps(exps)
    }

    /// True when supports are disjoint (gcd = 1).
    pub fn coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn support(&self) -> Vec<usize> {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(i, _)| i)
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrderKind {
    Grevlex,
    Lex,
}

/// A graded-compatible monomial order, with an optional variable
/// priority permutation: `priority[k]` is the variable index holding
/// priority position k (position 0 is the largest variable).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    pub priority: Option<Vec<usize>>,
}

impl MonomialOrder {
    pub fn grevlex() -> MonomialOrder {
        MonomialOrder { kind: OrderKind::Grevlex, priority: None }
    }

    pub fn lex() -> MonomialOrder {
        MonomialOrder { kind: OrderKind::Lex, priority: None }
    }

    #[inline]
    fn exp_at(&self, m: &Monomial, pos: usize) -> u32 {
        match &self.priority {
            None => m.exps()[pos],
            Some(p) => m.exps()[p[pos]],
        }
    }

    /// Total order on monomials of one frame. Grevlex: higher total
    /// degree wins; ties broken by the last nonzero entry of the
    /// exponent difference being negative.
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.nvars(), b.nvars());
        let n = a.nvars();
        match self.kind {
            OrderKind::Grevlex => {
                match a.degree().cmp(&b.degree()) {
                    Ordering::Equal => {}
                    ord => return ord,
                }
                for pos in (0..n).rev() {
                    let ea = self.exp_at(a, pos);
                    let eb = self.exp_at(b, pos);
                    match ea.cmp(&eb) {
                        Ordering::Equal => {}
                        // last nonzero difference negative => a > b
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                    }
                }
                Ordering::Equal
            }
            OrderKind::Lex => {
                for pos in 0..n {
                    let ea = self.exp_at(a, pos);
                    let eb = self.exp_at(b, pos);
                    match ea.cmp(&eb) {
                        Ordering::Equal => {}
                        ord => return ord,
                    }
                }
                Ordering::Equal
            }
        }
    }
}
