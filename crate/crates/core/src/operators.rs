//! Homogeneous constant-coefficient differential operators, their Fourier
//! symbols, the operator catalog and the JSON operator file format.
//!
//! An operator `A u = Σ_{|α|=k} A_α ∂^α u` maps `ℝ^d`-valued fields on
//! `ℝ^N` to `ℝ^l`-valued ones. Its symbol is the `l×d` polynomial matrix
//! `A[ξ] = Σ A_α ξ^α`. All coefficient matrices are exact rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{rat, Field, MultiIndex, MultiPoly, PolyMatrix, Rational, ScalarMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OperatorError {
    #[error("{field}: malformed rational {value:?}")]
    MalformedRational { field: String, value: String },
    #[error("{field}: zero denominator in {value:?}")]
    ZeroDenominator { field: String, value: String },
    #[error("{field}: multi-index order mismatch (|alpha| = {found}, k = {expected})")]
    OrderMismatch {
        field: String,
        expected: u32,
        found: u32,
    },
    #[error("{field}: dimension mismatch ({detail})")]
    DimensionMismatch { field: String, detail: String },
    #[error("{field}: duplicate multi-index {alpha:?}")]
    DuplicateMultiIndex { field: String, alpha: Vec<u32> },
    #[error("{field}: weight must be positive")]
    NonPositiveWeight { field: String },
    #[error("operator {name:?} has no nonzero coefficient matrix")]
    ZeroOperator { name: String },
    #[error("symbol is not homogeneous of degree {expected}")]
    NotHomogeneous { expected: u32 },
    #[error("invalid operator JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown catalog operator {0:?}")]
    UnknownOperator(String),
    #[error("{name} is not defined for N = {n}")]
    UnsupportedDimension { name: String, n: usize },
    #[error("missing parameter {param} for {name}")]
    MissingParameter { name: String, param: &'static str },
}

/// `A u = Σ_{|α|=k} A_α ∂^α u` with `A_α ∈ ℚ^{l×d}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiffOp {
    name: String,
    n: usize,
    d: usize,
    l: usize,
    k: u32,
    terms: BTreeMap<MultiIndex, ScalarMatrix<Rational>>,
    /// Inner product on the target, `⟨y, z⟩ = Σ w_i y_i z_i`. Symmetric
    /// tensors stored by their upper triangle weight off-diagonal rows by 2
    /// so the norm is Frobenius. Exact algebra ignores the weights.
    target_weights: Option<Vec<Rational>>,
}

impl DiffOp {
    /// Validating constructor. Zero matrices are dropped; at least one
    /// nonzero coefficient must remain.
    pub fn new(
        name: impl Into<String>,
        n: usize,
        d: usize,
        l: usize,
        k: u32,
        terms: impl IntoIterator<Item = (MultiIndex, ScalarMatrix<Rational>)>,
    ) -> Result<Self, OperatorError> {
        let op = Self::new_allow_zero(name, n, d, l, k, terms)?;
        if op.terms.is_empty() {
            return Err(OperatorError::ZeroOperator { name: op.name });
        }
        Ok(op)
    }

    fn new_allow_zero(
        name: impl Into<String>,
        n: usize,
        d: usize,
        l: usize,
        k: u32,
        terms: impl IntoIterator<Item = (MultiIndex, ScalarMatrix<Rational>)>,
    ) -> Result<Self, OperatorError> {
        let name = name.into();
        let mut map = BTreeMap::new();
        for (idx, (alpha, m)) in terms.into_iter().enumerate() {
            let field = format!("terms[{idx}]");
            if alpha.nvars() != n {
                return Err(OperatorError::DimensionMismatch {
                    field: format!("{field}.alpha"),
                    detail: format!("length {} but N = {n}", alpha.nvars()),
                });
            }
            if alpha.degree() != k {
                return Err(OperatorError::OrderMismatch {
                    field: format!("{field}.alpha"),
                    expected: k,
                    found: alpha.degree(),
                });
            }
            if (m.rows(), m.cols()) != (l, d) {
                return Err(OperatorError::DimensionMismatch {
                    field: format!("{field}.matrix"),
                    detail: format!("{}x{} but l x d = {l}x{d}", m.rows(), m.cols()),
                });
            }
            if map.contains_key(&alpha) {
                return Err(OperatorError::DuplicateMultiIndex {
                    field: format!("{field}.alpha"),
                    alpha: alpha.exps().to_vec(),
                });
            }
            if !m.is_zero() {
                map.insert(alpha, m);
            }
        }
        Ok(Self {
            name,
            n,
            d,
            l,
            k,
            terms: map,
            target_weights: None,
        })
    }

    /// Attaches target inner-product weights (positive, one per row).
    pub fn with_target_weights(mut self, weights: Vec<Rational>) -> Result<Self, OperatorError> {
        if weights.len() != self.l {
            return Err(OperatorError::DimensionMismatch {
                field: "target_weights".into(),
                detail: format!("{} weights but l = {}", weights.len(), self.l),
            });
        }
        if let Some(i) = weights.iter().position(|w| *w <= Rational::zero()) {
            return Err(OperatorError::NonPositiveWeight {
                field: format!("target_weights[{i}]"),
            });
        }
        self.target_weights = Some(weights).filter(|w| w.iter().any(|x| !x.is_one()));
        Ok(self)
    }

    pub fn target_weights(&self) -> Option<&[Rational]> {
        self.target_weights.as_deref()
    }

    /// Weight of target row `i` (1 unless weights are attached).
    pub fn target_weight(&self, i: usize) -> Rational {
        self.target_weights
            .as_ref()
            .map_or_else(Rational::one, |w| w[i].clone())
    }

    /// Reads the coefficients off a symbol homogeneous of degree `k`. The
    /// zero symbol is accepted here (annihilators can vanish).
    pub fn from_symbol(name: impl Into<String>, symbol: &PolyMatrix, k: u32) -> Result<Self, OperatorError> {
        let n = symbol.nvars();
        let (l, d) = (symbol.rows(), symbol.cols());
        let mut terms: BTreeMap<MultiIndex, ScalarMatrix<Rational>> = BTreeMap::new();
        for i in 0..l {
            for j in 0..d {
                let p = symbol.get(i, j);
                if !p.is_homogeneous_of(k) {
                    return Err(OperatorError::NotHomogeneous { expected: k });
                }
                for (m, c) in p.terms() {
                    terms
                        .entry(m.clone())
                        .or_insert_with(|| ScalarMatrix::zeros(l, d))
                        .set(i, j, c.clone());
                }
            }
        }
        Self::new_allow_zero(name, n, d, l, k, terms)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Space dimension `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Domain (field) dimension `d`.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Target dimension `l`.
    pub fn l(&self) -> usize {
        self.l
    }

    /// Order `k`.
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, ScalarMatrix<Rational>> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `l×d` polynomial matrix `Σ_α A_α ξ^α`, homogeneous of degree `k`.
    pub fn symbol(&self) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(self.n, self.l, self.d);
        for i in 0..self.l {
            for j in 0..self.d {
                let p = MultiPoly::from_terms(
                    self.n,
                    self.terms
                        .iter()
                        .map(|(a, m)| (a.clone(), m.get(i, j).clone())),
                );
                out.set(i, j, p);
            }
        }
        out
    }

    /// `A[ξ]` at a point of ℚ^N or ℚ(i)^N.
    pub fn symbol_at<G: Field>(&self, xi: &[G]) -> ScalarMatrix<G> {
        let mut out = ScalarMatrix::zeros(self.l, self.d);
        for (alpha, m) in &self.terms {
            let mut mono = G::one();
            for (x, &e) in xi.iter().zip(alpha.exps()) {
                for _ in 0..e {
                    mono = mono * x.clone();
                }
            }
            let term = m.map(|c| G::from(c.clone()) * mono.clone());
            out = out.add(&term);
        }
        out
    }

    /// Applies the operator to a vector of polynomials in `x` by formal
    /// differentiation.
    pub fn apply_to_polys(&self, u: &[MultiPoly]) -> Vec<MultiPoly> {
        assert_eq!(u.len(), self.d, "field has wrong number of components");
        let mut out = vec![MultiPoly::zero(self.n); self.l];
        for (alpha, m) in &self.terms {
            let derivs: Vec<MultiPoly> = u.iter().map(|p| p.derivative_multi(alpha)).collect();
            for (i, acc) in out.iter_mut().enumerate() {
                for (j, dp) in derivs.iter().enumerate() {
                    let c = m.get(i, j);
                    if !c.is_zero() && !dp.is_zero() {
                        *acc = &*acc + &dp.scale(c);
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (N={}, d={}, l={}, k={}): {}",
            self.name,
            self.n,
            self.d,
            self.l,
            self.k,
            self.symbol()
        )
    }
}

/// `L ∘ A`, realised as the symbol product `L[ξ]·A[ξ]`.
pub fn compose(outer: &DiffOp, inner: &DiffOp) -> Result<DiffOp, OperatorError> {
    if outer.n != inner.n || outer.d != inner.l {
        return Err(OperatorError::DimensionMismatch {
            field: "compose".into(),
            detail: format!(
                "outer (N={}, d={}) cannot follow inner (N={}, l={})",
                outer.n, outer.d, inner.n, inner.l
            ),
        });
    }
    let sym = outer.symbol().mul(&inner.symbol());
    DiffOp::from_symbol(
        format!("{}∘{}", outer.name, inner.name),
        &sym,
        outer.k + inner.k,
    )
}

/// Vertical concatenation of two operators with the same `N`, `d`, `k`.
pub fn stack(top: &DiffOp, bottom: &DiffOp) -> Result<DiffOp, OperatorError> {
    if top.n != bottom.n || top.d != bottom.d || top.k != bottom.k {
        return Err(OperatorError::DimensionMismatch {
            field: "stack".into(),
            detail: format!(
                "(N,d,k) = ({},{},{}) vs ({},{},{})",
                top.n, top.d, top.k, bottom.n, bottom.d, bottom.k
            ),
        });
    }
    let sym = top
        .symbol()
        .vstack(&bottom.symbol())
        .expect("column counts checked");
    let op = DiffOp::from_symbol(format!("[{};{}]", top.name, bottom.name), &sym, top.k)?;
    if top.target_weights.is_none() && bottom.target_weights.is_none() {
        return Ok(op);
    }
    let weights = (0..top.l)
        .map(|i| top.target_weight(i))
        .chain((0..bottom.l).map(|i| bottom.target_weight(i)))
        .collect();
    op.with_target_weights(weights)
}

/// Ordered index tuples `β ∈ {0..n−1}^s`, lexicographic. Row `(β, i)` of
/// `D^s` on `ℝ^e`-valued fields sits at `tuple_index·e + i`.
pub fn index_tuples(n: usize, s: u32) -> Vec<Vec<usize>> {
    let count = n.pow(s);
    (0..count)
        .map(|mut t| {
            let mut digits = vec![0; s as usize];
            for slot in digits.iter_mut().rev() {
                *slot = t % n;
                t /= n;
            }
            digits
        })
        .collect()
}

/// `D^s` on `ℝ^e`-valued fields: the full (unsymmetrised) tensor of `s`-th
/// derivatives, `N^s·e` rows with symbol row `ξ_{β_1}⋯ξ_{β_s}·e_i`.
/// `D^0` is the identity.
pub fn grad_power(s: u32, e: usize, n: usize) -> DiffOp {
    let tuples = index_tuples(n, s);
    let l = tuples.len() * e;
    let mut sym = PolyMatrix::zeros(n, l, e);
    for (t, beta) in tuples.iter().enumerate() {
        let mut exps = vec![0u32; n];
        for &b in beta {
            exps[b] += 1;
        }
        let mono = MultiPoly::monomial(MultiIndex::new(exps), Rational::one());
        for i in 0..e {
            sym.set(t * e + i, i, mono.clone());
        }
    }
    let name = match (s, e) {
        (0, _) => format!("identity(d={e})"),
        (1, 1) => "gradient".to_string(),
        _ => format!("D^{s}(d={e})"),
    };
    DiffOp::from_symbol(name, &sym, s).expect("D^s symbol is homogeneous")
}

/// Optional parameters for parametrised catalog entries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogParams {
    /// Number of field components for `gradient` (default 1).
    pub components: Option<usize>,
    /// Order for `div_k`.
    pub order: Option<u32>,
}

pub const CATALOG_NAMES: &[&str] = &[
    "gradient",
    "divergence",
    "curl",
    "sym_gradient",
    "laplacian",
    "bilaplacian",
    "cauchy_riemann",
    "d2_laplacian",
    "div_k",
];

/// Standard operator by frozen name, default parameters.
pub fn catalog(name: &str, n: usize) -> Result<DiffOp, OperatorError> {
    catalog_with(name, n, CatalogParams::default())
}

pub fn catalog_with(name: &str, n: usize, params: CatalogParams) -> Result<DiffOp, OperatorError> {
    let x = |i: usize| MultiPoly::<Rational>::var(n, i);
    let zero = || MultiPoly::<Rational>::zero(n);
    let norm2 = || (0..n).fold(zero(), |acc, i| &acc + &x(i).pow(2));
    let unsupported = || OperatorError::UnsupportedDimension {
        name: name.to_string(),
        n,
    };
    if n == 0 {
        return Err(unsupported());
    }
    let op = match name {
        "gradient" => {
            let e = params.components.unwrap_or(1);
            let g = grad_power(1, e, n);
            if e == 1 {
                g
            } else {
                g.with_name(format!("gradient(d={e})"))
            }
        }
        "divergence" => {
            let sym = PolyMatrix::from_rows(n, vec![(0..n).map(x).collect()]);
            DiffOp::from_symbol("divergence", &sym, 1)?
        }
        "curl" => match n {
            3 => {
                let sym = PolyMatrix::from_rows(
                    3,
                    vec![
                        vec![zero(), -x(2), x(1)],
                        vec![x(2), zero(), -x(0)],
                        vec![-x(1), x(0), zero()],
                    ],
                );
                DiffOp::from_symbol("curl", &sym, 1)?
            }
            2 => {
                let sym = PolyMatrix::from_rows(2, vec![vec![-x(1), x(0)]]);
                DiffOp::from_symbol("curl", &sym, 1)?
            }
            _ => return Err(unsupported()),
        },
        "sym_gradient" => {
            let half = rat(1, 2);
            let mut rows = Vec::new();
            for i in 0..n {
                let mut r = vec![zero(); n];
                r[i] = x(i);
                rows.push(r);
            }
            for i in 0..n {
                for j in i + 1..n {
                    let mut r = vec![zero(); n];
                    r[i] = x(j).scale(&half);
                    r[j] = x(i).scale(&half);
                    rows.push(r);
                }
            }
            let weights = (0..rows.len())
                .map(|r| if r < n { Rational::one() } else { rat(2, 1) })
                .collect();
            DiffOp::from_symbol("sym_gradient", &PolyMatrix::from_rows(n, rows), 1)?
                .with_target_weights(weights)?
        }
        "laplacian" => {
            DiffOp::from_symbol("laplacian", &PolyMatrix::from_rows(n, vec![vec![norm2()]]), 2)?
        }
        "bilaplacian" => DiffOp::from_symbol(
            "bilaplacian",
            &PolyMatrix::from_rows(n, vec![vec![norm2().pow(2)]]),
            4,
        )?,
        "cauchy_riemann" => {
            if n != 2 {
                return Err(unsupported());
            }
            let sym = PolyMatrix::from_rows(2, vec![vec![x(0), -x(1)], vec![x(1), x(0)]]);
            DiffOp::from_symbol("cauchy_riemann", &sym, 1)?
        }
        "d2_laplacian" => {
            let lap = catalog("laplacian", n)?;
            compose(&grad_power(2, 1, n), &lap)?.with_name("d2_laplacian")
        }
        "div_k" => {
            let k = params.order.ok_or(OperatorError::MissingParameter {
                name: name.to_string(),
                param: "order",
            })?;
            let row: Vec<MultiPoly> = MultiIndex::all_of_degree(n, k)
                .into_iter()
                .map(|b| MultiPoly::monomial(b, Rational::one()))
                .collect();
            DiffOp::from_symbol(format!("div_k(k={k})"), &PolyMatrix::from_rows(n, vec![row]), k)?
        }
        other => return Err(OperatorError::UnknownOperator(other.to_string())),
    };
    Ok(op)
}

/// Which inequality family a pair belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairMode {
    /// `ord A = ord 𝒜`
    Korn,
    /// `ord A = ord 𝒜 − 1`
    Sobolev,
}

impl std::str::FromStr for PairMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "korn" => Ok(PairMode::Korn),
            "sobolev" => Ok(PairMode::Sobolev),
            other => Err(format!("unknown mode {other:?} (expected korn|sobolev)")),
        }
    }
}

/// Right-hand operator `𝒜` (`cal_a`) and left-hand operator `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorPair {
    pub cal_a: DiffOp,
    pub a: DiffOp,
    pub mode: PairMode,
}

impl OperatorPair {
    pub fn new(cal_a: DiffOp, a: DiffOp, mode: PairMode) -> Result<Self, OperatorError> {
        if cal_a.n != a.n || cal_a.d != a.d {
            return Err(OperatorError::DimensionMismatch {
                field: "pair".into(),
                detail: format!(
                    "(N, d) = ({}, {}) for 𝒜 but ({}, {}) for A",
                    cal_a.n, cal_a.d, a.n, a.d
                ),
            });
        }
        let expected = match mode {
            PairMode::Korn => Some(cal_a.k),
            PairMode::Sobolev => cal_a.k.checked_sub(1),
        };
        if expected != Some(a.k) {
            return Err(OperatorError::OrderMismatch {
                field: format!("pair ({mode:?} mode)"),
                expected: expected.unwrap_or(0),
                found: a.k,
            });
        }
        Ok(Self { cal_a, a, mode })
    }

    /// Order of the factor `L` in `D^s∘A = L∘𝒜`.
    pub fn factor_order(&self, s: u32) -> Option<u32> {
        (s + self.a.k).checked_sub(self.cal_a.k)
    }
}

// ---------------------------------------------------------------------------
// file format

#[derive(Serialize, Deserialize)]
struct OperatorFile {
    name: String,
    #[serde(rename = "N")]
    n: usize,
    d: usize,
    l: usize,
    k: u32,
    terms: Vec<TermEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    target_weights: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct TermEntry {
    alpha: Vec<u32>,
    matrix: Vec<Vec<String>>,
}

pub fn parse_rational(s: &str, field: &str) -> Result<Rational, OperatorError> {
    let malformed = || OperatorError::MalformedRational {
        field: field.to_string(),
        value: s.to_string(),
    };
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| malformed())?;
    let den: BigInt = den.parse().map_err(|_| malformed())?;
    if den.is_zero() {
        return Err(OperatorError::ZeroDenominator {
            field: field.to_string(),
            value: s.to_string(),
        });
    }
    Ok(Rational::new(num, den))
}

/// Parses the JSON operator file format.
pub fn parse_op(text: &str) -> Result<DiffOp, OperatorError> {
    let file: OperatorFile = serde_json::from_str(text).map_err(|e| OperatorError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut terms = Vec::with_capacity(file.terms.len());
    for (t, entry) in file.terms.iter().enumerate() {
        if entry.alpha.len() != file.n {
            return Err(OperatorError::DimensionMismatch {
                field: format!("terms[{t}].alpha"),
                detail: format!("length {} but N = {}", entry.alpha.len(), file.n),
            });
        }
        let found: u32 = entry.alpha.iter().sum();
        if found != file.k {
            return Err(OperatorError::OrderMismatch {
                field: format!("terms[{t}].alpha"),
                expected: file.k,
                found,
            });
        }
        if entry.matrix.len() != file.l {
            return Err(OperatorError::DimensionMismatch {
                field: format!("terms[{t}].matrix"),
                detail: format!("{} rows but l = {}", entry.matrix.len(), file.l),
            });
        }
        let mut rows = Vec::with_capacity(file.l);
        for (i, row) in entry.matrix.iter().enumerate() {
            if row.len() != file.d {
                return Err(OperatorError::DimensionMismatch {
                    field: format!("terms[{t}].matrix[{i}]"),
                    detail: format!("{} columns but d = {}", row.len(), file.d),
                });
            }
            let parsed = row
                .iter()
                .enumerate()
                .map(|(j, s)| parse_rational(s, &format!("terms[{t}].matrix[{i}][{j}]")))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(parsed);
        }
        terms.push((
            MultiIndex::new(entry.alpha.clone()),
            ScalarMatrix::from_rows(file.d, &rows),
        ));
    }
    let op = DiffOp::new(file.name, file.n, file.d, file.l, file.k, terms)?;
    match file.target_weights {
        None => Ok(op),
        Some(ws) => {
            let parsed = ws
                .iter()
                .enumerate()
                .map(|(i, w)| parse_rational(w, &format!("target_weights[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            op.with_target_weights(parsed)
        }
    }
}

/// Canonical pretty-printed JSON; `parse_op(&serialize_op(op)) == op`.
pub fn serialize_op(op: &DiffOp) -> String {
    let file = OperatorFile {
        name: op.name.clone(),
        n: op.n,
        d: op.d,
        l: op.l,
        k: op.k,
        terms: op
            .terms
            .iter()
            .map(|(alpha, m)| TermEntry {
                alpha: alpha.exps().to_vec(),
                matrix: (0..m.rows())
                    .map(|i| m.row(i).iter().map(|c| c.to_string()).collect())
                    .collect(),
            })
            .collect(),
        target_weights: op
            .target_weights
            .as_ref()
            .map(|w| w.iter().map(|c| c.to_string()).collect()),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("operator serialisation");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat_int;

    fn x(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    #[test]
    fn basic_symbols() {
        let g = catalog("gradient", 2).unwrap();
        assert_eq!(g.symbol(), PolyMatrix::from_rows(2, vec![vec![x(2, 0)], vec![x(2, 1)]]));
        let div = catalog("divergence", 2).unwrap();
        assert_eq!(div.symbol(), PolyMatrix::from_rows(2, vec![vec![x(2, 0), x(2, 1)]]));
        let lap = catalog("laplacian", 2).unwrap();
        assert_eq!(
            lap.symbol(),
            PolyMatrix::from_rows(2, vec![vec![&x(2, 0).pow(2) + &x(2, 1).pow(2)]])
        );
    }

    #[test]
    fn compose_examples() {
        let div = catalog("divergence", 2).unwrap();
        let grad = catalog("gradient", 2).unwrap();
        let lap = catalog("laplacian", 2).unwrap();
        let dg = compose(&div, &grad).unwrap();
        assert_eq!(dg.symbol(), lap.symbol());
        assert_eq!(dg.k(), 2);

        let id = grad_power(0, 1, 2);
        assert_eq!(compose(&id, &lap).unwrap().symbol(), lap.symbol());

        let d1_lap = compose(&grad_power(1, 1, 2), &lap).unwrap();
        assert_eq!(d1_lap.k(), 3);
        let q = &x(2, 0).pow(2) + &x(2, 1).pow(2);
        assert_eq!(d1_lap.symbol().get(0, 0), &(&x(2, 0) * &q));
        assert_eq!(d1_lap.symbol().get(1, 0), &(&x(2, 1) * &q));

        assert!(compose(&grad, &grad).is_err());
    }

    #[test]
    fn grad_power_examples() {
        let id = grad_power(0, 3, 2);
        assert_eq!(id.symbol(), PolyMatrix::identity(2, 3));
        assert_eq!(grad_power(1, 1, 2).symbol(), catalog("gradient", 2).unwrap().symbol());
        let d2 = grad_power(2, 1, 2);
        let col: Vec<MultiPoly> = (0..4).map(|i| d2.symbol().get(i, 0).clone()).collect();
        assert_eq!(
            col,
            vec![x(2, 0).pow(2), &x(2, 0) * &x(2, 1), &x(2, 1) * &x(2, 0), x(2, 1).pow(2)]
        );
    }

    #[test]
    fn grad_power_composes() {
        for (s1, s2) in [(1, 1), (1, 2), (2, 1), (0, 2)] {
            let lhs = grad_power(s1 + s2, 2, 2);
            let inner = grad_power(s2, 2, 2);
            let outer = grad_power(s1, inner.l(), 2);
            let rhs = compose(&outer, &inner).unwrap();
            assert_eq!(lhs.symbol(), rhs.symbol());
        }
    }

    #[test]
    fn stack_dimensions() {
        let div = catalog("divergence", 2).unwrap();
        let grad2 = catalog_with("gradient", 2, CatalogParams { components: Some(2), order: None }).unwrap();
        assert_eq!(stack(&div, &grad2).unwrap().l(), 5);
        let eps = catalog("sym_gradient", 2).unwrap();
        assert_eq!(stack(&eps, &grad2).unwrap().l(), 7);
        assert_eq!(stack(&eps, &eps).unwrap().l(), 6);
        assert!(stack(&div, &catalog("laplacian", 2).unwrap()).is_err());
    }

    #[test]
    fn catalog_examples() {
        let cr = catalog("cauchy_riemann", 2).unwrap();
        assert_eq!(
            cr.symbol(),
            PolyMatrix::from_rows(2, vec![vec![x(2, 0), -x(2, 1)], vec![x(2, 1), x(2, 0)]])
        );
        let eps = catalog("sym_gradient", 2).unwrap();
        let half = rat(1, 2);
        assert_eq!(
            eps.symbol(),
            PolyMatrix::from_rows(
                2,
                vec![
                    vec![x(2, 0), MultiPoly::zero(2)],
                    vec![MultiPoly::zero(2), x(2, 1)],
                    vec![x(2, 1).scale(&half), x(2, 0).scale(&half)],
                ]
            )
        );
        let divk = catalog_with("div_k", 2, CatalogParams { components: None, order: Some(2) }).unwrap();
        assert_eq!((divk.l(), divk.d(), divk.k()), (1, 3, 2));
        assert_eq!(divk.symbol().get(0, 1), &(&x(2, 0) * &x(2, 1)));
        assert!(matches!(catalog("curl", 4), Err(OperatorError::UnsupportedDimension { .. })));
        assert!(matches!(catalog("nabla", 2), Err(OperatorError::UnknownOperator(_))));
        assert!(catalog("div_k", 2).is_err());
        assert_eq!(catalog("sym_gradient", 3).unwrap().l(), 6);
        let d2l = catalog("d2_laplacian", 2).unwrap();
        assert_eq!((d2l.l(), d2l.d(), d2l.k()), (4, 1, 4));
    }

    #[test]
    fn every_catalog_symbol_is_homogeneous() {
        for &name in CATALOG_NAMES {
            for n in 2..=3 {
                let params = CatalogParams { components: None, order: Some(2) };
                let Ok(op) = catalog_with(name, n, params) else {
                    continue;
                };
                let sym = op.symbol();
                assert_eq!((sym.rows(), sym.cols()), (op.l(), op.d()));
                assert_eq!(sym.homogeneous_degree(), Some(op.k()), "{name}");
            }
        }
    }

    #[test]
    fn round_trip_and_diagnostics() {
        let g = catalog("sym_gradient", 2).unwrap();
        let text = serialize_op(&g);
        assert_eq!(parse_op(&text).unwrap(), g);
        assert_eq!(serialize_op(&parse_op(&text).unwrap()), text);

        let bad_order = r#"{"name":"x","N":2,"d":1,"l":1,"k":1,"terms":[{"alpha":[1,1],"matrix":[["1"]]}]}"#;
        let err = parse_op(bad_order).unwrap_err();
        assert!(err.to_string().contains("multi-index order mismatch"));

        let zero_den = r#"{"name":"x","N":2,"d":1,"l":1,"k":1,"terms":[{"alpha":[1,0],"matrix":[["1/0"]]}]}"#;
        let err = parse_op(zero_den).unwrap_err();
        assert!(err.to_string().contains("zero denominator"));

        let bad_shape = r#"{"name":"x","N":2,"d":2,"l":1,"k":1,"terms":[{"alpha":[1,0],"matrix":[["1"]]}]}"#;
        assert!(matches!(parse_op(bad_shape), Err(OperatorError::DimensionMismatch { .. })));

        let junk = r#"{"name":"x","N":2,"d":1,"l":1,"k":1,"terms":[{"alpha":[1,0],"matrix":[["one"]]}]}"#;
        assert!(matches!(parse_op(junk), Err(OperatorError::MalformedRational { .. })));

        let w = r#"{"name":"x","N":2,"d":1,"l":1,"k":1,"terms":[{"alpha":[1,0],"matrix":[["1"]]}],"target_weights":["-1"]}"#;
        assert!(matches!(parse_op(w), Err(OperatorError::NonPositiveWeight { .. })));

        let broken = "{\n  \"name\": 3\n}";
        match parse_op(broken) {
            Err(OperatorError::Json { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        let zero = r#"{"name":"x","N":2,"d":1,"l":1,"k":1,"terms":[{"alpha":[1,0],"matrix":[["0"]]}]}"#;
        assert!(matches!(parse_op(zero), Err(OperatorError::ZeroOperator { .. })));
    }

    #[test]
    fn apply_to_polynomials() {
        let div = catalog("divergence", 2).unwrap();
        let u = vec![&x(2, 0) * &x(2, 1), MultiPoly::zero(2)];
        assert_eq!(div.apply_to_polys(&u), vec![x(2, 1)]);
        let lap = catalog("laplacian", 2).unwrap();
        let u = vec![&x(2, 0).pow(2) * &x(2, 1)];
        assert_eq!(lap.apply_to_polys(&u), vec![x(2, 1).scale(&rat_int(2))]);
    }

    #[test]
    fn pair_validation() {
        let eps = catalog("sym_gradient", 2).unwrap();
        let grad2 = catalog_with("gradient", 2, CatalogParams { components: Some(2), order: None }).unwrap();
        assert!(OperatorPair::new(eps.clone(), grad2.clone(), PairMode::Korn).is_ok());
        assert!(OperatorPair::new(eps.clone(), grad2, PairMode::Sobolev).is_err());
        assert!(OperatorPair::new(eps, grad_power(0, 2, 2), PairMode::Sobolev).is_ok());
    }
}
