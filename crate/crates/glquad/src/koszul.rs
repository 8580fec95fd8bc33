//! Graded Betti numbers via the Koszul complex on the variables
//! tensored with R/I, and Castelnuovo-Mumford regularity.
//!
//! Tor against the residue field is computed slice by slice: the chain
//! space in homological index i and internal degree j has basis
//! {e_S (x) m : |S| = i, m a standard monomial of degree j - i}, the
//! differential sends e_S (x) m to sum over s in S of
//! (-1)^{pos(s,S)} e_{S\s} (x) (x_s * m mod I), and each Betti number is
//! dim ker minus the rank of the incoming map. Subsets are kept in
//! colexicographic order so matrices are reproducible bit for bit.
//!
//! When the quotient is positive-dimensional, the driver first tries an
//! Artinian reduction by a linear change of coordinates, verified by a
//! Hilbert series comparison; graded Betti numbers are preserved when
//! the verification succeeds, and the direct (dense) computation on the
//! original ring remains as the fallback.

use std::collections::{BTreeMap, HashMap};

use num::bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::{buchberger, initial_ideal, GroebnerBasis, GroebnerConfig, MonomialIdeal};
use crate::monomial::{Frame, Monomial};
use crate::poly::{PolyRing, Polynomial};
use crate::quotient::{hilbert_series, krull_dimension};

#[derive(Clone, Copy, Debug)]
pub struct KoszulConfig {
    /// Highest homological index to compute; defaults to the number of
    /// variables of the (possibly reduced) ring.
    pub i_max: Option<usize>,
    /// Cap on the internal degree; defaults to (sum of generator
    /// degrees) + 2, i.e. 2c + 2 for c quadrics.
    pub j_cap: Option<usize>,
    /// Dense matrix entry cap; exceeding it is a reported error.
    pub max_entries: usize,
    /// Attempt the verified Artinian reduction first.
    pub artinian_reduction: bool,
    pub seed: u64,
}

impl Default for KoszulConfig {
    fn default() -> Self {
        KoszulConfig {
            i_max: None,
            j_cap: None,
            max_entries: 40_000_000,
            artinian_reduction: true,
            seed: 42,
        }
    }
}

/// Graded Betti numbers beta_{i,j} with the bounds used to compute them.
/// `truncated` means entries beyond the bounds could not be ruled out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub entries: BTreeMap<(usize, usize), usize>,
    pub i_max: usize,
    pub j_cap: usize,
    pub truncated: bool,
}

impl BettiTable {
    pub fn beta(&self, i: usize, j: usize) -> usize {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.entries
            .iter()
            .filter(|(_, b)| **b > 0)
            .map(|(&(i, j), &b)| (i, j, b))
    }

    /// max(j - i) over nonzero entries; exact when the table is not
    /// truncated. The quotient convention: reg(R/I).
    pub fn regularity(&self) -> RegularityReport {
        let value = self
            .nonzero()
            .map(|(i, j, _)| j as i64 - i as i64)
            .max()
            .unwrap_or(0);
        RegularityReport { value, exact: !self.truncated }
    }

    /// Sum over j of beta_{1,j}: the minimal number of generators of I.
    pub fn minimal_generator_count(&self) -> usize {
        self.nonzero().filter(|(i, _, _)| *i == 1).map(|(_, _, b)| b).sum()
    }

    /// Conventional layout: rows are j - i, columns are i.
    pub fn render(&self) -> String {
        let imax = self.nonzero().map(|(i, _, _)| i).max().unwrap_or(0);
        let rmax = self
            .nonzero()
            .map(|(i, j, _)| j - i)
            .max()
            .unwrap_or(0);
        let mut out = String::new();
        out.push_str("      ");
        for i in 0..=imax {
            out.push_str(&format!("{i:>8}"));
        }
        out.push('\n');
        for r in 0..=rmax {
            out.push_str(&format!("{r:>5}:"));
            for i in 0..=imax {
                let b = self.beta(i, i + r);
                if b == 0 {
                    out.push_str(&format!("{:>8}", "."));
                } else {
                    out.push_str(&format!("{b:>8}"));
                }
            }
            out.push('\n');
        }
        if self.truncated {
            out.push_str("(truncated)\n");
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct RegularityReport {
    pub value: i64,
    /// false when the table was truncated, in which case the value is
    /// only a lower bound.
    pub exact: bool,
}

/// The closed-form Betti table of a length-c complete intersection of
/// forms of degree d: beta_{i, d*i} = C(c, i), everything else zero.
pub fn ci_betti_analytic(c: usize, d: usize) -> BettiTable {
    let mut entries = BTreeMap::new();
    for i in 0..=c {
        let b = crate::quotient::binomial(c, i);
        let b: usize = b.try_into().expect("binomial fits usize at desk scale");
        entries.insert((i, d * i), b);
    }
    BettiTable { entries, i_max: c, j_cap: d * c, truncated: false }
}

/// All degree-d monomials outside the monomial ideal: a basis of the
/// degree-d piece of the quotient. Sorted descending in `order` for
/// deterministic matrix layouts.
pub fn standard_monomials(mi: &MonomialIdeal, nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; nvars];
    fn rec(
        mi: &MonomialIdeal,
        exps: &mut Vec<u32>,
        var: usize,
        remaining: u32,
        out: &mut Vec<Monomial>,
    ) {
        if var + 1 == exps.len() {
            exps[var] = remaining;
            let m = Monomial::from_exps(exps.clone());
            if !mi.contains(&m) {
                out.push(m);
            }
            exps[var] = 0;
            return;
        }
        for e in 0..=remaining {
            exps[var] = e;
            rec(mi, exps, var + 1, remaining - e, out);
        }
        exps[var] = 0;
    }
    if nvars == 0 {
        if d == 0 && !mi.gens.iter().any(|g| g.is_one()) {
            out.push(Monomial::one(0));
        }
        return out;
    }
    rec(mi, &mut exps, 0, d, &mut out);
    out
}

fn colex_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(n, k, v + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut subsets);
    subsets.sort_by(|a, b| {
        let ra: Vec<usize> = a.iter().rev().copied().collect();
        let rb: Vec<usize> = b.iter().rev().copied().collect();
        ra.cmp(&rb)
    });
    subsets
}

/// Shared scratch for computing many (i, j) slices of one quotient.
pub struct KoszulComputer<'a, F: Field> {
    pub gb: &'a GroebnerBasis<F>,
    pub mi: MonomialIdeal,
    max_entries: usize,
    std_cache: HashMap<u32, (Vec<Monomial>, HashMap<Monomial, usize>)>,
    subset_cache: HashMap<usize, (Vec<Vec<usize>>, HashMap<Vec<usize>, usize>)>,
    nf_cache: HashMap<Monomial, Polynomial<F>>,
}

impl<'a, F: Field> KoszulComputer<'a, F> {
    pub fn new(gb: &'a GroebnerBasis<F>, max_entries: usize) -> KoszulComputer<'a, F> {
        let mi = initial_ideal(gb);
        KoszulComputer {
            gb,
            mi,
            max_entries,
            std_cache: HashMap::new(),
            subset_cache: HashMap::new(),
            nf_cache: HashMap::new(),
        }
    }

    fn ring(&self) -> &PolyRing<F> {
        &self.gb.ring
    }

    fn std_monos(&mut self, d: u32) -> &(Vec<Monomial>, HashMap<Monomial, usize>) {
        let mi = &self.mi;
        let ring = &self.gb.ring;
        self.std_cache.entry(d).or_insert_with(|| {
            let mut monos = standard_monomials(mi, ring.nvars(), d);
            monos.sort_by(|a, b| ring.order.cmp(b, a));
            let index = monos
                .iter()
                .enumerate()
                .map(|(k, m)| (m.clone(), k))
                .collect();
            (monos, index)
        })
    }

    fn subsets(&mut self, k: usize) -> &(Vec<Vec<usize>>, HashMap<Vec<usize>, usize>) {
        let n = self.gb.ring.nvars();
        self.subset_cache.entry(k).or_insert_with(|| {
            let subsets = colex_subsets(n, k);
            let index = subsets
                .iter()
                .enumerate()
                .map(|(i, s)| (s.clone(), i))
                .collect();
            (subsets, index)
        })
    }

    /// dim of the chain space at (i, j).
    pub fn chain_dim(&mut self, i: usize, j: usize) -> usize {
        let n = self.gb.ring.nvars();
        if i > n || j < i {
            return 0;
        }
        let nm = self.std_monos((j - i) as u32).0.len();
        let ns = self.subsets(i).0.len();
        nm * ns
    }

    fn normal_form_of_var_mul(&mut self, var: usize, m: &Monomial) -> Polynomial<F> {
        let key = m.mul_var(var);
        if let Some(p) = self.nf_cache.get(&key) {
            return p.clone();
        }
        let ring = self.ring().clone();
        let p = crate::groebner::normal_form(&ring, &ring.monomial(key.clone()), &self.gb.generators);
        self.nf_cache.insert(key, p.clone());
        p
    }

    /// Dense matrix of the differential C_{i,j} -> C_{i-1,j}; rows are
    /// target basis elements, columns source basis elements.
    pub fn differential(&mut self, i: usize, j: usize) -> Result<Vec<Vec<F::Elem>>> {
        let field = self.ring().field.clone();
        let cols = self.chain_dim(i, j);
        let rows = if i == 0 { 0 } else { self.chain_dim(i - 1, j) };
        if cols == 0 || rows == 0 {
            return Ok(vec![vec![field.zero(); cols]; rows]);
        }
        if rows.saturating_mul(cols) > self.max_entries {
            return Err(Error::cap(format!(
                "Koszul differential at (i={i}, j={j}) needs a {rows}x{cols} matrix"
            )));
        }
        let src_monos = self.std_monos((j - i) as u32).0.clone();
        let src_subsets = self.subsets(i).0.clone();
        let tgt_mono_count = self.std_monos((j - i + 1) as u32).0.len();
        let mut mat = vec![vec![field.zero(); cols]; rows];
        for (si, subset) in src_subsets.iter().enumerate() {
            // target subset indices for each removed element
            let removed: Vec<(usize, usize)> = subset
                .iter()
                .enumerate()
                .map(|(pos, &s)| {
                    let mut sub = subset.clone();
                    sub.remove(pos);
                    let tidx = self.subsets(i - 1).1[&sub];
                    (s, tidx)
                })
                .collect();
            for (mi_idx, m) in src_monos.iter().enumerate() {
                let col = si * src_monos.len() + mi_idx;
                for (pos, &(s, tsub)) in removed.iter().enumerate() {
                    let nf = self.normal_form_of_var_mul(s, m);
                    if nf.is_zero() {
                        continue;
                    }
                    let negate = pos % 2 == 1;
                    let tgt_index = &self.std_cache[&((j - i + 1) as u32)].1;
                    for (tm, c) in nf.terms() {
                        let row = tsub * tgt_mono_count + tgt_index[tm];
                        let c = if negate { field.neg(c) } else { c.clone() };
                        mat[row][col] = field.add(&mat[row][col], &c);
                    }
                }
            }
        }
        Ok(mat)
    }

    /// beta_{i,j}: dim ker d_{i,j} - rank d_{i+1,j}.
    pub fn tor(&mut self, i: usize, j: usize) -> Result<usize> {
        let dim = self.chain_dim(i, j);
        if dim == 0 {
            return Ok(0);
        }
        let field = self.ring().field.clone();
        let rank_out = if i == 0 {
            0
        } else {
            field.mat_rank(self.differential(i, j)?)
        };
        let rank_in = if i + 1 > self.ring().nvars() {
            0
        } else {
            field.mat_rank(self.differential(i + 1, j)?)
        };
        Ok(dim - rank_out - rank_in)
    }

    /// d o d = 0 on the slice ending at (i, j): the composite of
    /// C_{i+1,j} -> C_{i,j} -> C_{i-1,j} is the zero matrix.
    pub fn dd_is_zero(&mut self, i: usize, j: usize) -> Result<bool> {
        let field = self.ring().field.clone();
        let d1 = self.differential(i + 1, j)?;
        let d0 = self.differential(i, j)?;
        if d0.is_empty() || d1.is_empty() || d1[0].is_empty() {
            return Ok(true);
        }
        for col in 0..d1[0].len() {
            for row in 0..d0.len() {
                let mut acc = field.zero();
                for k in 0..d1.len() {
                    if field.is_zero(&d1[k][col]) {
                        continue;
                    }
                    acc = field.add(&acc, &field.mul(&d0[row][k], &d1[k][col]));
                }
                if !field.is_zero(&acc) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Degreewise Euler characteristic: alternating sum of chain
    /// dimensions equals alternating sum of Betti numbers in degree j.
    pub fn euler_check(&mut self, j: usize) -> Result<bool> {
        let n = self.ring().nvars();
        let mut chain_sum: i64 = 0;
        let mut betti_sum: i64 = 0;
        for i in 0..=n.min(j) {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            chain_sum += sign * self.chain_dim(i, j) as i64;
            betti_sum += sign * self.tor(i, j)? as i64;
        }
        Ok(chain_sum == betti_sum)
    }
}

/// A single Betti number straight from the definition, no reduction.
pub fn koszul_tor<F: Field>(
    gb: &GroebnerBasis<F>,
    i: usize,
    j: usize,
    max_entries: usize,
) -> Result<usize> {
    KoszulComputer::new(gb, max_entries).tor(i, j)
}

/// Result of the table driver, with provenance of the ring actually
/// used.
#[derive(Clone, Debug)]
pub struct BettiOutcome {
    pub table: BettiTable,
    /// true when a verified Artinian reduction was applied
    pub reduced: bool,
    pub field: String,
}

/// Verified Artinian reduction: substitute away `dim` variables by
/// generic linear forms and accept only if the Hilbert series numerator
/// is preserved (which certifies the linear forms were a regular
/// sequence on R/I, hence Betti numbers are unchanged).
pub fn artinian_reduction<F: Field>(
    ring: &PolyRing<F>,
    gens: &[Polynomial<F>],
    mi: &MonomialIdeal,
    gcfg: &GroebnerConfig,
    seed: u64,
) -> Result<Option<(PolyRing<F>, Vec<Polynomial<F>>, GroebnerBasis<F>)>> {
    let nvars = ring.nvars();
    let dim = krull_dimension(mi, nvars);
    if dim == 0 {
        return Ok(None);
    }
    let target_numerator: Vec<BigInt> = hilbert_series(mi, nvars).numerator;
    let kept_count = nvars - dim;
    let sub_frame = Frame::new(kept_count, 1);
    let sub_ring = PolyRing::new(sub_frame, ring.field.clone(), ring.order.clone());
    for attempt in 0..8u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt * 0x9e37_79b9));
        // choose the eliminated variables
        let mut all: Vec<usize> = (0..nvars).collect();
        for k in (1..all.len()).rev() {
            let r = rng.gen_range(0..=k);
            all.swap(k, r);
        }
        let mut eliminated = all[..dim].to_vec();
        eliminated.sort_unstable();
        let kept: Vec<usize> = (0..nvars).filter(|v| !eliminated.contains(v)).collect();
        // images: kept variable -> its slot, eliminated -> random combo
        let mut images: Vec<Polynomial<F>> = vec![sub_ring.zero(); nvars];
        for (slot, &v) in kept.iter().enumerate() {
            images[v] = sub_ring.var(slot);
        }
        for &v in &eliminated {
            let mut form = sub_ring.zero();
            for slot in 0..kept_count {
                let c = ring.field.from_i64(rng.gen_range(-20i64..=20));
                form = sub_ring.add(&form, &sub_ring.scale(&sub_ring.var(slot), &c));
            }
            images[v] = form;
        }
        let gens2: Vec<Polynomial<F>> =
            gens.iter().map(|g| ring.substitute(g, &sub_ring, &images)).collect();
        let gb2 = match buchberger(&sub_ring, &gens2, gcfg) {
            Ok(gb) => gb,
            Err(Error::ResourceCap(_)) => continue,
            Err(e) => return Err(e),
        };
        let mi2 = initial_ideal(&gb2);
        if krull_dimension(&mi2, kept_count) != 0 {
            continue;
        }
        if hilbert_series(&mi2, kept_count).numerator == target_numerator {
            return Ok(Some((sub_ring, gens2, gb2)));
        }
    }
    Ok(None)
}

/// Full Betti table of R/(gens) with truncation bookkeeping.
pub fn betti_table<F: Field>(
    ring: &PolyRing<F>,
    gens: &[Polynomial<F>],
    gcfg: &GroebnerConfig,
    kcfg: &KoszulConfig,
) -> Result<BettiOutcome> {
    let gb = buchberger(ring, gens, gcfg)?;
    let mi = initial_ideal(&gb);

    let mut work_ring = ring.clone();
    let mut work_gb = gb;
    let mut reduced = false;
    if kcfg.artinian_reduction {
        if let Some((r2, _g2, gb2)) = artinian_reduction(ring, gens, &mi, gcfg, kcfg.seed)? {
            work_ring = r2;
            work_gb = gb2;
            reduced = true;
        }
    }

    let nvars = work_ring.nvars();
    let mut comp = KoszulComputer::new(&work_gb, kcfg.max_entries);
    let artinian = krull_dimension(&comp.mi, nvars) == 0;

    let degree_sum: usize = gens
        .iter()
        .filter_map(|g| g.homogeneous_degree())
        .map(|d| d as usize)
        .sum();
    let i_max = kcfg.i_max.unwrap_or(nvars).min(nvars);
    // for an Artinian quotient, the socle degree bounds every internal
    // degree that matters
    let top = if artinian {
        let mut d = 0u32;
        while !standard_monomials(&comp.mi, nvars, d).is_empty() {
            d += 1;
        }
        d as usize
    } else {
        usize::MAX
    };
    let j_cap = kcfg
        .j_cap
        .unwrap_or(if artinian { i_max + top } else { degree_sum + 2 });

    let mut entries = BTreeMap::new();
    let mut max_attained_j = 0usize;
    let mut pd_reached = false;
    for i in 0..=i_max {
        let mut row_nonzero = false;
        let mut row_has_chain = false;
        for j in i..=j_cap {
            if comp.chain_dim(i, j) == 0 {
                continue;
            }
            row_has_chain = true;
            let b = comp.tor(i, j)?;
            if b > 0 {
                entries.insert((i, j), b);
                row_nonzero = true;
                max_attained_j = max_attained_j.max(j);
            }
        }
        // a fully computed all-zero row pins the projective dimension
        if i > 0 && !row_nonzero && row_has_chain {
            pd_reached = true;
            break;
        }
        if !row_has_chain && i > 0 {
            // no chain space at all within the cap
            break;
        }
    }

    let complete_i = i_max >= nvars || pd_reached;
    let complete_j = if artinian {
        j_cap >= i_max + top
    } else {
        pd_reached && j_cap > max_attained_j
    };
    let truncated = !(complete_i && complete_j);

    Ok(BettiOutcome {
        table: BettiTable { entries, i_max, j_cap, truncated },
        reduced,
        field: ring.field.label(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::monomial::{Frame, MonomialOrder};

    fn ring_q(n: usize, m: usize) -> PolyRing<Rationals> {
        PolyRing::new(Frame::new(n, m), Rationals, MonomialOrder::grevlex())
    }

    #[test]
    fn standard_monomials_examples() {
        let ord = MonomialOrder::grevlex();
        // zero ideal, d = 1, N = 2 -> {x1, x2}
        let mi = MonomialIdeal::new(vec![], &ord);
        assert_eq!(standard_monomials(&mi, 2, 1).len(), 2);
        // (x^2) in k[x], d = 5 -> empty
        let mi = MonomialIdeal::new(vec![Monomial::from_exps(vec![2])], &ord);
        assert!(standard_monomials(&mi, 1, 5).is_empty());
    }

    #[test]
    fn colex_subsets_ordered() {
        let s = colex_subsets(4, 2);
        assert_eq!(s[0], vec![0, 1]);
        assert_eq!(s[1], vec![0, 2]);
        assert_eq!(s[2], vec![1, 2]);
        assert_eq!(s[3], vec![0, 3]);
        assert_eq!(s.len(), 6);
    }

    #[test]
    fn principal_quadric_betti() {
        // I = (q), q nonzero quadric: resolution 0 -> R(-2) -> R
        let r = ring_q(2, 1);
        let x = r.var(0);
        let y = r.var(1);
        let q = r.add(&r.mul(&x, &x), &r.mul(&y, &y));
        let out = betti_table(&r, &[q], &GroebnerConfig::default(), &KoszulConfig::default())
            .unwrap();
        assert_eq!(out.table.beta(0, 0), 1);
        assert_eq!(out.table.beta(1, 2), 1);
        assert_eq!(out.table.beta(1, 3), 0);
        assert!(!out.table.truncated);
        assert_eq!(out.table.regularity().value, 1);
        assert!(out.table.regularity().exact);
        assert_eq!(out.table.entries, ci_betti_analytic(1, 2).entries);
    }

    #[test]
    fn ci_betti_analytic_examples() {
        let t0 = ci_betti_analytic(0, 2);
        assert_eq!(t0.beta(0, 0), 1);
        assert_eq!(t0.entries.len(), 1);
        let t3 = ci_betti_analytic(3, 2);
        for (i, expect) in [1usize, 3, 3, 1].iter().enumerate() {
            assert_eq!(t3.beta(i, 2 * i), *expect);
        }
        assert_eq!(t3.regularity().value, 3);
        // regularity of the analytic table is c(d-1)
        let t4 = ci_betti_analytic(4, 3);
        assert_eq!(t4.regularity().value, 8);
    }

    #[test]
    fn dd_zero_and_euler_on_principal_ideal() {
        let r = ring_q(2, 1);
        let x = r.var(0);
        let y = r.var(1);
        let q = r.add(&r.mul(&x, &x), &r.mul(&y, &y));
        let gb = buchberger(&r, &[q], &GroebnerConfig::default()).unwrap();
        let mut comp = KoszulComputer::new(&gb, 1_000_000);
        for j in 0..6 {
            assert!(comp.euler_check(j).unwrap(), "euler failed at j={j}");
            for i in 0..2 {
                assert!(comp.dd_is_zero(i, j).unwrap());
            }
        }
    }

    #[test]
    fn betti_numbers_field_independent_on_small_instance() {
        // x^2 + y^2, over QQ and GF(32003)
        let rq = ring_q(2, 1);
        let x = rq.var(0);
        let y = rq.var(1);
        let q = rq.add(&rq.mul(&x, &x), &rq.mul(&y, &y));
        let tq = betti_table(&rq, &[q], &GroebnerConfig::default(), &KoszulConfig::default())
            .unwrap();

        let fp = PrimeField::new(32003).unwrap();
        let rp = PolyRing::new(Frame::new(2, 1), fp, MonomialOrder::grevlex());
        let xp = rp.var(0);
        let yp = rp.var(1);
        let qp = rp.add(&rp.mul(&xp, &xp), &rp.mul(&yp, &yp));
        let tp = betti_table(&rp, &[qp], &GroebnerConfig::default(), &KoszulConfig::default())
            .unwrap();
        assert_eq!(tq.table.entries, tp.table.entries);
    }
}
