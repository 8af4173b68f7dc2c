//! Sparse multivariate polynomials with exact coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::One;

use super::scalar::{Field, Rational};
use super::AlgebraError;

/// Exponent vector `α ∈ ℕ^N`.
///
/// The derived ordering is *not* used; `Ord` is graded lexicographic so that
/// the canonical term map of a [`MultiPoly`] is sorted by total degree first.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exps: Vec<u32>) -> Self {
        Self(exps)
    }

    pub fn zero(nvars: usize) -> Self {
        Self(vec![0; nvars])
    }

    pub fn unit(nvars: usize, var: usize) -> Self {
        let mut e = vec![0; nvars];
        e[var] = 1;
        Self(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    /// `|α|`
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Self) -> Option<Self> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if b > a {
                return None;
            }
            out.push(a - b);
        }
        Some(Self(out))
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// If the monomial is `ξ_i^e` with `e ≥ 1`, returns `i`.
    pub fn pure_power_var(&self) -> Option<usize> {
        let mut found = None;
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }

    /// `α!`
    pub fn factorial(&self) -> Rational {
        let mut acc = Rational::one();
        for &e in &self.0 {
            for j in 2..=e {
                acc *= Rational::from_integer(j.into());
            }
        }
        acc
    }

    /// All multi-indices with `|α| = degree`, in descending lexicographic
    /// order: `(d,0,..)`, `(d-1,1,..)`, ... , `(0,..,d)`.
    pub fn all_of_degree(nvars: usize, degree: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; nvars];
        fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            let n = cur.len();
            if pos + 1 == n {
                cur[pos] = left;
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for e in (0..=left).rev() {
                cur[pos] = e;
                rec(pos + 1, left - e, cur, out);
            }
        }
        if nvars == 0 {
            if degree == 0 {
                out.push(MultiIndex(Vec::new()));
            }
            return out;
        }
        rec(0, degree, &mut cur, &mut out);
        out
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        TermOrder::GradedLex.cmp(self, other)
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Monomial order used by leading-term computations.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TermOrder {
    GradedLex,
    #[default]
    GradedRevLex,
}

impl TermOrder {
    pub fn cmp(self, a: &MultiIndex, b: &MultiIndex) -> Ordering {
        let by_degree = a.degree().cmp(&b.degree());
        if by_degree != Ordering::Equal {
            return by_degree;
        }
        match self {
            TermOrder::GradedLex => a.0.cmp(&b.0),
            TermOrder::GradedRevLex => {
                for (x, y) in a.0.iter().zip(&b.0).rev() {
                    if x != y {
                        // smaller exponent in the last differing variable wins
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }
        }
    }
}

/// Polynomial in `nvars` variables. The term map never stores zero
/// coefficients, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPoly<F: Field = Rational> {
    nvars: usize,
    terms: BTreeMap<MultiIndex, F>,
}

impl<F: Field> MultiPoly<F> {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, F::one())
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        Self::monomial(MultiIndex::zero(nvars), c)
    }

    /// The coordinate polynomial `ξ_var`.
    pub fn var(nvars: usize, var: usize) -> Self {
        Self::monomial(MultiIndex::unit(nvars, var), F::one())
    }

    pub fn monomial(m: MultiIndex, c: F) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { nvars, terms }
    }

    /// Builds a polynomial from possibly repeated or zero terms.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (MultiIndex, F)>,
    {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity mismatch");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: MultiIndex, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &MultiIndex) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    /// `Some(deg)` when every term has the same total degree. The zero
    /// polynomial is homogeneous of every degree and reports `None`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(MultiIndex::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous_of(&self, deg: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == deg)
    }

    pub fn homogeneous_component(&self, deg: u32) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == deg)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Leading monomial and coefficient under `order`.
    pub fn leading_term(&self, order: TermOrder) -> Option<(&MultiIndex, &F)> {
        match order {
            TermOrder::GradedLex => self.terms.iter().next_back(),
            _ => self
                .terms
                .iter()
                .max_by(|(a, _), (b, _)| order.cmp(a, b)),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.clone() * c.clone()))
                .collect(),
        }
    }

    /// `c · x^m · self`
    pub fn mul_term(&self, m: &MultiIndex, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.mul(m), v.clone() * c.clone()))
                .collect(),
        }
    }

    fn check_vars(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.nvars != other.nvars {
            return Err(AlgebraError::VariableMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_vars(other)?;
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact evaluation at a point of any field containing the coefficients.
    pub fn eval<G>(&self, point: &[G]) -> G
    where
        G: Field + From<F>,
    {
        assert_eq!(point.len(), self.nvars, "evaluation point arity");
        let maxdeg = self.degree().unwrap_or(0) as usize;
        let powers: Vec<Vec<G>> = point
            .iter()
            .map(|x| {
                let mut p = Vec::with_capacity(maxdeg + 1);
                p.push(G::one());
                for j in 1..=maxdeg {
                    let next = p[j - 1].clone() * x.clone();
                    p.push(next);
                }
                p
            })
            .collect();
        let mut acc = G::zero();
        for (m, c) in &self.terms {
            let mut t: G = c.clone().into();
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t = t * powers[i][e as usize].clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Formal partial derivative `∂/∂x_var`.
    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exps()[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[var] -= 1;
            let factor: F = Rational::from_integer(e.into()).into();
            out.add_term(MultiIndex::new(exps), c.clone() * factor);
        }
        out
    }

    /// `∂^α self`
    pub fn derivative_multi(&self, alpha: &MultiIndex) -> Self {
        let mut out = self.clone();
        for (var, &e) in alpha.exps().iter().enumerate() {
            for _ in 0..e {
                out = out.derivative(var);
            }
        }
        out
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> MultiPoly<G> {
        MultiPoly::from_terms(
            self.nvars,
            self.terms.iter().map(|(m, c)| (m.clone(), f(c))),
        )
    }

    /// Renders with variable names `{prefix}1, {prefix}2, ...`.
    pub fn to_string_with(&self, prefix: &str) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        // highest graded-lex term first
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let cs = c.to_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) if !rest.contains(['+', '-']) => (true, rest.to_string()),
                _ => (false, cs.clone()),
            };
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mag = if mag.contains(['+', '-']) {
                format!("({mag})")
            } else {
                mag
            };
            let mut factors = Vec::new();
            for (i, &e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("{prefix}{}", i + 1)),
                    _ => factors.push(format!("{prefix}{}^{e}", i + 1)),
                }
            }
            if factors.is_empty() {
                out.push_str(&mag);
            } else {
                if mag != "1" {
                    out.push_str(&mag);
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

impl<F: Field> fmt::Display for MultiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with("x"))
    }
}

impl<F: Field> Add for &MultiPoly<F> {
    type Output = MultiPoly<F>;

    fn add(self, rhs: Self) -> MultiPoly<F> {
        self.checked_add(rhs).expect("polynomial arity mismatch")
    }
}

impl<F: Field> Sub for &MultiPoly<F> {
    type Output = MultiPoly<F>;

    fn sub(self, rhs: Self) -> MultiPoly<F> {
        self.checked_add(&-rhs).expect("polynomial arity mismatch")
    }
}

impl<F: Field> Mul for &MultiPoly<F> {
    type Output = MultiPoly<F>;

    fn mul(self, rhs: Self) -> MultiPoly<F> {
        self.checked_mul(rhs).expect("polynomial arity mismatch")
    }
}

impl<F: Field> Neg for &MultiPoly<F> {
    type Output = MultiPoly<F>;

    fn neg(self) -> MultiPoly<F> {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl<F: Field> Add for MultiPoly<F> {
    type Output = MultiPoly<F>;

    fn add(self, rhs: Self) -> MultiPoly<F> {
        &self + &rhs
    }
}

impl<F: Field> Sub for MultiPoly<F> {
    type Output = MultiPoly<F>;

    fn sub(self, rhs: Self) -> MultiPoly<F> {
        &self - &rhs
    }
}

impl<F: Field> Mul for MultiPoly<F> {
    type Output = MultiPoly<F>;

    fn mul(self, rhs: Self) -> MultiPoly<F> {
        &self * &rhs
    }
}

impl<F: Field> Neg for MultiPoly<F> {
    type Output = MultiPoly<F>;

    fn neg(self) -> MultiPoly<F> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{rat, rat_int, GaussianRational};
    use num_traits::Zero;

    fn x(i: usize) -> MultiPoly {
        MultiPoly::var(2, i)
    }

    #[test]
    fn add_and_difference_of_squares() {
        let s = &x(0) + &x(1);
        assert_eq!(s.num_terms(), 2);
        let d = &x(0) - &x(1);
        let prod = &s * &d;
        let expect = &x(0).pow(2) - &x(1).pow(2);
        assert_eq!(prod, expect);
    }

    #[test]
    fn square_of_norm_squared() {
        // (ξ1²+ξ2²)² = ξ1⁴ + 2ξ1²ξ2² + ξ2⁴, expanded term by term
        let q = &x(0).pow(2) + &x(1).pow(2);
        let sq = &q * &q;
        let expect = MultiPoly::from_terms(
            2,
            [
                (MultiIndex::new(vec![4, 0]), rat_int(1)),
                (MultiIndex::new(vec![2, 2]), rat_int(2)),
                (MultiIndex::new(vec![0, 4]), rat_int(1)),
            ],
        );
        assert_eq!(sq, expect);
        assert_eq!(sq.homogeneous_degree(), Some(4));
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        let a = MultiPoly::<Rational>::var(2, 0);
        let b = MultiPoly::<Rational>::var(3, 0);
        assert!(matches!(
            a.checked_add(&b),
            Err(AlgebraError::VariableMismatch { left: 2, right: 3 })
        ));
        assert!(a.checked_mul(&b).is_err());
    }

    #[test]
    fn evaluation_examples() {
        let q = &x(0).pow(2) + &x(1).pow(2);
        let iso = [GaussianRational::one(), GaussianRational::i()];
        assert!(q.eval(&iso).is_zero());
        let e1 = [GaussianRational::one(), GaussianRational::zero()];
        assert_eq!(q.eval(&e1), GaussianRational::one());
        let p = &x(0) * &x(1);
        assert_eq!(p.eval(&[rat(2, 3), rat(3, 2)]), rat_int(1));
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let p = &x(0) - &x(0);
        assert!(p.is_zero());
        assert_eq!(p.degree(), None);
    }

    #[test]
    fn grevlex_vs_grlex() {
        // x1*x3 vs x2^2 in three variables
        let a = MultiIndex::new(vec![1, 0, 1]);
        let b = MultiIndex::new(vec![0, 2, 0]);
        assert_eq!(TermOrder::GradedLex.cmp(&a, &b), Ordering::Greater);
        assert_eq!(TermOrder::GradedRevLex.cmp(&a, &b), Ordering::Less);
    }

    #[test]
    fn multi_indices_of_degree() {
        let all = MultiIndex::all_of_degree(2, 2);
        let exps: Vec<_> = all.iter().map(|m| m.exps().to_vec()).collect();
        assert_eq!(exps, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(MultiIndex::all_of_degree(3, 2).len(), 6);
        assert_eq!(MultiIndex::all_of_degree(3, 0).len(), 1);
    }

    #[test]
    fn derivative_and_display() {
        let p = &(&x(0).pow(2) * &x(1)) - &x(1).scale(&rat(1, 2));
        assert_eq!(p.derivative(0), (&x(0) * &x(1)).scale(&rat_int(2)));
        assert_eq!(p.to_string_with("ξ"), "ξ1^2*ξ2 - 1/2*ξ2");
    }
}
