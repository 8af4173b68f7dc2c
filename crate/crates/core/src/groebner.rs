//! Buchberger's algorithm for polynomial ideals and for submodules of the
//! free module `ℚ[ξ]^m`.
//!
//! Ideals are handled as rank-one modules. Every basis element carries its
//! expression in terms of the input generators, so membership queries can
//! return explicit coefficients. Module terms are ordered position over
//! term: a lower component index always beats a larger monomial.

use std::cmp::Ordering;

use num_traits::One;
use thiserror::Error;

use crate::algebra::{MultiIndex, MultiPoly, Rational, TermOrder};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroebnerError {
    #[error("target is not in the module (nonzero normal form)")]
    NotMember { remainder: ModuleElement },
    #[error("module rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
}

/// Element of the free module `ℚ[ξ_1..ξ_N]^rank`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModuleElement {
    nvars: usize,
    entries: Vec<MultiPoly>,
}

impl ModuleElement {
    pub fn new(nvars: usize, entries: Vec<MultiPoly>) -> Self {
        for e in &entries {
            assert_eq!(e.nvars(), nvars, "module entry arity");
        }
        Self { nvars, entries }
    }

    pub fn zero(nvars: usize, rank: usize) -> Self {
        Self {
            nvars,
            entries: vec![MultiPoly::zero(nvars); rank],
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[MultiPoly] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<MultiPoly> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(MultiPoly::is_zero)
    }

    /// Common degree of the nonzero entries.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut deg = None;
        for p in self.entries.iter().filter(|p| !p.is_zero()) {
            let d = p.homogeneous_degree()?;
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return None,
                _ => {}
            }
        }
        deg
    }

    /// Leading (position, monomial, coefficient) under position-over-term.
    pub fn lead(&self, order: TermOrder) -> Option<(usize, &MultiIndex, &Rational)> {
        self.entries.iter().enumerate().find_map(|(pos, p)| {
            p.leading_term(order).map(|(m, c)| (pos, m, c))
        })
    }

    fn add_scaled(&mut self, other: &ModuleElement, m: &MultiIndex, c: &Rational) {
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            if !b.is_zero() {
                *a = &*a + &b.mul_term(m, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            nvars: self.nvars,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale_poly(&self, q: &MultiPoly) -> Self {
        Self {
            nvars: self.nvars,
            entries: self.entries.iter().map(|a| a * q).collect(),
        }
    }
}

fn add_scaled_vec(acc: &mut [MultiPoly], other: &[MultiPoly], m: &MultiIndex, c: &Rational) {
    for (a, b) in acc.iter_mut().zip(other) {
        if !b.is_zero() {
            *a = &*a + &b.mul_term(m, c);
        }
    }
}

/// Basis element together with its coordinates in the input generators.
#[derive(Clone, Debug)]
struct Tracked {
    elem: ModuleElement,
    repr: Vec<MultiPoly>,
}

/// Gröbner basis of a submodule of `ℚ[ξ]^rank` (rank one for ideals).
#[derive(Clone, Debug)]
pub struct ModuleGroebnerBasis {
    nvars: usize,
    rank: usize,
    order: TermOrder,
    generators: Vec<ModuleElement>,
    basis: Vec<Tracked>,
}

impl ModuleGroebnerBasis {
    /// Runs Buchberger's algorithm and returns the reduced, monic basis.
    pub fn new(nvars: usize, rank: usize, generators: &[ModuleElement], order: TermOrder) -> Self {
        let ngens = generators.len();
        for g in generators {
            assert_eq!(g.rank(), rank, "generator rank");
            assert_eq!(g.nvars(), nvars, "generator arity");
        }
        let mut basis: Vec<Tracked> = Vec::new();
        for (j, g) in generators.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let mut repr = vec![MultiPoly::zero(nvars); ngens];
            repr[j] = MultiPoly::one(nvars);
            basis.push(Tracked {
                elem: g.clone(),
                repr,
            });
        }
        let mut gb = Self {
            nvars,
            rank,
            order,
            generators: generators.to_vec(),
            basis: Vec::new(),
        };

        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for j in 0..basis.len() {
            for i in 0..j {
                pairs.push((i, j));
            }
        }
        while let Some(idx) = gb.select_pair(&basis, &pairs) {
            let (i, j) = pairs.swap_remove(idx);
            if gb.skip_pair(&basis[i], &basis[j]) {
                continue;
            }
            let Some(s) = gb.s_vector(&basis[i], &basis[j]) else {
                continue;
            };
            let h = gb.reduce_full(s, &basis);
            if h.elem.is_zero() {
                continue;
            }
            let k = basis.len();
            basis.push(h);
            for i in 0..k {
                pairs.push((i, k));
            }
        }
        gb.basis = gb.interreduce(basis);
        gb
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> TermOrder {
        self.order
    }

    pub fn generators(&self) -> &[ModuleElement] {
        &self.generators
    }

    pub fn elements(&self) -> Vec<&ModuleElement> {
        self.basis.iter().map(|t| &t.elem).collect()
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    fn lead_of<'a>(&self, e: &'a ModuleElement) -> Option<(usize, &'a MultiIndex, &'a Rational)> {
        e.lead(self.order)
    }

    fn pair_lcm(&self, a: &Tracked, b: &Tracked) -> Option<MultiIndex> {
        let (pa, ma, _) = self.lead_of(&a.elem)?;
        let (pb, mb, _) = self.lead_of(&b.elem)?;
        (pa == pb).then(|| ma.lcm(mb))
    }

    /// Normal selection strategy: smallest lcm degree, ties by index.
    fn select_pair(&self, basis: &[Tracked], pairs: &[(usize, usize)]) -> Option<usize> {
        let mut best: Option<(u32, (usize, usize), usize)> = None;
        for (idx, &(i, j)) in pairs.iter().enumerate() {
            let deg = self
                .pair_lcm(&basis[i], &basis[j])
                .map_or(0, |m| m.degree());
            let key = (deg, (i, j), idx);
            if best.as_ref().is_none_or(|b| (key.0, key.1) < (b.0, b.1)) {
                best = Some(key);
            }
        }
        best.map(|b| b.2)
    }

    /// Product criterion, valid for ideals only.
    fn skip_pair(&self, a: &Tracked, b: &Tracked) -> bool {
        if self.rank != 1 {
            return false;
        }
        match (self.lead_of(&a.elem), self.lead_of(&b.elem)) {
            (Some((_, ma, _)), Some((_, mb, _))) => ma.is_coprime(mb),
            _ => true,
        }
    }

    fn s_vector(&self, a: &Tracked, b: &Tracked) -> Option<Tracked> {
        let (pa, ma, ca) = self.lead_of(&a.elem)?;
        let (pb, mb, cb) = self.lead_of(&b.elem)?;
        if pa != pb {
            return None;
        }
        let l = ma.lcm(mb);
        let ta = l.div(ma).expect("lcm divisible");
        let tb = l.div(mb).expect("lcm divisible");
        let fa = ca.recip();
        let fb = -cb.recip();
        let mut elem = ModuleElement::zero(self.nvars, self.rank);
        elem.add_scaled(&a.elem, &ta, &fa);
        elem.add_scaled(&b.elem, &tb, &fb);
        let mut repr = vec![MultiPoly::zero(self.nvars); a.repr.len()];
        add_scaled_vec(&mut repr, &a.repr, &ta, &fa);
        add_scaled_vec(&mut repr, &b.repr, &tb, &fb);
        Some(Tracked { elem, repr })
    }

    fn find_reducer<'a>(
        &self,
        pos: usize,
        m: &MultiIndex,
        basis: &'a [Tracked],
        skip: Option<usize>,
    ) -> Option<&'a Tracked> {
        basis.iter().enumerate().find_map(|(k, g)| {
            if Some(k) == skip {
                return None;
            }
            let (gp, gm, _) = g.elem.lead(self.order)?;
            (gp == pos && gm.divides(m)).then_some(g)
        })
    }

    /// Full reduction: every term of the result is irreducible.
    fn reduce_full_skip(&self, f: Tracked, basis: &[Tracked], skip: Option<usize>) -> Tracked {
        let mut p = f;
        let mut rem = ModuleElement::zero(self.nvars, self.rank);
        while let Some((pos, m, c)) = p.elem.lead(self.order) {
            let (pos, m, c) = (pos, m.clone(), c.clone());
            if let Some(g) = self.find_reducer(pos, &m, basis, skip) {
                let (_, gm, gc) = g.elem.lead(self.order).expect("reducer is nonzero");
                let t = m.div(gm).expect("divisible");
                let f = -(c / gc);
                p.elem.add_scaled(&g.elem, &t, &f);
                add_scaled_vec(&mut p.repr, &g.repr, &t, &f);
            } else {
                let term = MultiPoly::monomial(m, c);
                rem.entries[pos] = &rem.entries[pos] + &term;
                p.elem.entries[pos] = &p.elem.entries[pos] - &term;
            }
        }
        Tracked {
            elem: rem,
            repr: p.repr,
        }
    }

    fn reduce_full(&self, f: Tracked, basis: &[Tracked]) -> Tracked {
        self.reduce_full_skip(f, basis, None)
    }

    fn interreduce(&self, mut basis: Vec<Tracked>) -> Vec<Tracked> {
        // drop elements whose leading term is divisible by another's
        let mut keep: Vec<Tracked> = Vec::new();
        for (i, g) in basis.iter().enumerate() {
            let (gp, gm, _) = g.elem.lead(self.order).expect("nonzero basis element");
            let redundant = basis.iter().enumerate().any(|(j, h)| {
                if i == j {
                    return false;
                }
                let (hp, hm, _) = h.elem.lead(self.order).expect("nonzero");
                hp == gp && hm.divides(gm) && (hm != gm || j < i)
            });
            if !redundant {
                keep.push(g.clone());
            }
        }
        basis.clear();
        // tail-reduce each element against the others, then normalise
        for i in 0..keep.len() {
            let g = keep[i].clone();
            let mut r = self.reduce_tail(g, &keep, i);
            let lc = r.elem.lead(self.order).expect("nonzero").2.clone();
            if !lc.is_one() {
                let inv = lc.recip();
                let unit = MultiIndex::zero(self.nvars);
                let mut e = ModuleElement::zero(self.nvars, self.rank);
                e.add_scaled(&r.elem, &unit, &inv);
                let mut repr = vec![MultiPoly::zero(self.nvars); r.repr.len()];
                add_scaled_vec(&mut repr, &r.repr, &unit, &inv);
                r = Tracked { elem: e, repr };
            }
            keep[i] = r;
        }
        keep.sort_by(|a, b| self.cmp_lead(&a.elem, &b.elem));
        keep
    }

    fn reduce_tail(&self, g: Tracked, basis: &[Tracked], own: usize) -> Tracked {
        // keep the leading term, reduce the rest
        let (pos, m, c) = {
            let (p, m, c) = g.elem.lead(self.order).expect("nonzero");
            (p, m.clone(), c.clone())
        };
        let lt = MultiPoly::monomial(m, c);
        let mut tail = g.clone();
        tail.elem.entries[pos] = &tail.elem.entries[pos] - &lt;
        let mut r = self.reduce_full_skip(tail, basis, Some(own));
        r.elem.entries[pos] = &r.elem.entries[pos] + &lt;
        r
    }

    fn cmp_lead(&self, a: &ModuleElement, b: &ModuleElement) -> Ordering {
        match (a.lead(self.order), b.lead(self.order)) {
            (Some((pa, ma, _)), Some((pb, mb, _))) => {
                pa.cmp(&pb).then_with(|| self.order.cmp(mb, ma))
            }
            _ => Ordering::Equal,
        }
    }

    /// Unique remainder of `f` modulo the module.
    pub fn normal_form(&self, f: &ModuleElement) -> ModuleElement {
        self.reduce_with_coeffs(f).0
    }

    /// Remainder and coefficients `q` with `f = remainder + Σ q_j · generator_j`.
    pub fn reduce_with_coeffs(&self, f: &ModuleElement) -> (ModuleElement, Vec<MultiPoly>) {
        assert_eq!(f.rank(), self.rank, "module rank");
        let start = Tracked {
            elem: f.clone(),
            repr: vec![MultiPoly::zero(self.nvars); self.generators.len()],
        };
        let r = self.reduce_full(start, &self.basis);
        // reduce_full tracks f - Σ t·g, so the coefficients are the negation
        let coeffs = r.repr.iter().map(|q| -q).collect();
        (r.elem, coeffs)
    }

    pub fn contains(&self, f: &ModuleElement) -> bool {
        self.normal_form(f).is_zero()
    }

    /// Coefficients `q` with `target = Σ q_j · generator_j`, re-verified by
    /// exact expansion before being returned.
    pub fn representation(&self, target: &ModuleElement) -> Result<Vec<MultiPoly>, GroebnerError> {
        if target.rank() != self.rank {
            return Err(GroebnerError::RankMismatch {
                expected: self.rank,
                found: target.rank(),
            });
        }
        let (rem, coeffs) = self.reduce_with_coeffs(target);
        if !rem.is_zero() {
            return Err(GroebnerError::NotMember { remainder: rem });
        }
        assert_eq!(
            &combine(self.nvars, self.rank, &coeffs, &self.generators),
            target,
            "representation does not reproduce the target"
        );
        Ok(coeffs)
    }

    /// Buchberger's criterion, checked on every pair: all S-vectors reduce
    /// to zero.
    pub fn satisfies_buchberger_criterion(&self) -> bool {
        for j in 0..self.basis.len() {
            for i in 0..j {
                if let Some(s) = self.s_vector(&self.basis[i], &self.basis[j]) {
                    if !self.reduce_full(s, &self.basis).elem.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Every basis element equals its tracked combination of generators and
    /// every generator reduces to zero, so both modules coincide.
    pub fn certifies_same_module(&self) -> bool {
        let tracked_ok = self
            .basis
            .iter()
            .all(|t| combine(self.nvars, self.rank, &t.repr, &self.generators) == t.elem);
        tracked_ok && self.generators.iter().all(|g| self.contains(g))
    }

    pub fn leading_monomials(&self) -> Vec<(usize, MultiIndex)> {
        self.basis
            .iter()
            .filter_map(|t| t.elem.lead(self.order).map(|(p, m, _)| (p, m.clone())))
            .collect()
    }
}

/// `Σ q_j · g_j`
pub fn combine(
    nvars: usize,
    rank: usize,
    coeffs: &[MultiPoly],
    gens: &[ModuleElement],
) -> ModuleElement {
    let mut acc = ModuleElement::zero(nvars, rank);
    for (q, g) in coeffs.iter().zip(gens) {
        if !q.is_zero() {
            acc = acc.add(&g.scale_poly(q));
        }
    }
    acc
}

/// Reduced Gröbner basis of a polynomial ideal.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    inner: ModuleGroebnerBasis,
}

impl GroebnerBasis {
    pub fn new(nvars: usize, generators: &[MultiPoly], order: TermOrder) -> Self {
        let gens: Vec<ModuleElement> = generators
            .iter()
            .map(|p| ModuleElement::new(nvars, vec![p.clone()]))
            .collect();
        Self {
            inner: ModuleGroebnerBasis::new(nvars, 1, &gens, order),
        }
    }

    pub fn order(&self) -> TermOrder {
        self.inner.order
    }

    pub fn generators(&self) -> Vec<MultiPoly> {
        self.inner
            .basis
            .iter()
            .map(|t| t.elem.entries[0].clone())
            .collect()
    }

    pub fn normal_form(&self, f: &MultiPoly) -> MultiPoly {
        let e = ModuleElement::new(self.inner.nvars, vec![f.clone()]);
        self.inner.normal_form(&e).entries.swap_remove(0)
    }

    pub fn contains(&self, f: &MultiPoly) -> bool {
        self.normal_form(f).is_zero()
    }

    pub fn leading_monomials(&self) -> Vec<MultiIndex> {
        self.inner
            .leading_monomials()
            .into_iter()
            .map(|(_, m)| m)
            .collect()
    }

    pub fn satisfies_buchberger_criterion(&self) -> bool {
        self.inner.satisfies_buchberger_criterion()
    }

    pub fn certifies_same_ideal(&self) -> bool {
        self.inner.certifies_same_module()
    }

    /// The ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        self.leading_monomials().iter().any(|m| m.degree() == 0)
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens` (default order
/// graded reverse lexicographic).
pub fn buchberger(nvars: usize, gens: &[MultiPoly]) -> GroebnerBasis {
    GroebnerBasis::new(nvars, gens, TermOrder::GradedRevLex)
}

/// Decides whether the common complex zero set of homogeneous `gens` is
/// contained in `{0}`: the reduced basis must contain a pure power of every
/// variable among its leading monomials.
pub fn zero_dim_origin(nvars: usize, gens: &[MultiPoly]) -> bool {
    if nvars == 0 {
        return true;
    }
    let nonzero: Vec<MultiPoly> = gens.iter().filter(|p| !p.is_zero()).cloned().collect();
    if nonzero.is_empty() {
        return false;
    }
    let gb = buchberger(nvars, &nonzero);
    if gb.is_unit() {
        return true;
    }
    let leads = gb.leading_monomials();
    (0..nvars).all(|var| leads.iter().any(|m| m.pure_power_var() == Some(var)))
}

/// Coefficients `q` with `target = Σ q_j · gens_j`, or `NotMember`.
pub fn module_member_with_coeffs(
    target: &ModuleElement,
    gens: &[ModuleElement],
) -> Result<Vec<MultiPoly>, GroebnerError> {
    let gb = ModuleGroebnerBasis::new(target.nvars(), target.rank(), gens, TermOrder::GradedRevLex);
    gb.representation(target)
}
