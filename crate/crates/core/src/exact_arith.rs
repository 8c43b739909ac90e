//! Laurent polynomials in one variable `t` with big-integer coefficients,
//! small matrices over them, and cofactor determinants.
//!
//! Two coefficient rings share the [`Ring`] interface: the exact
//! [`LaurentPoly`] and [`TopSeries`], which keeps only the highest terms of
//! a polynomial together with a bound below which nothing is known.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tropicalisation convention: `Max` reads degrees, `Min` reads valuations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    Max,
    Min,
}

impl Convention {
    pub fn opposite(self) -> Self {
        match self {
            Convention::Max => Convention::Min,
            Convention::Min => Convention::Max,
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Max => "max",
            Convention::Min => "min",
        })
    }
}

impl std::str::FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max" | "+" => Ok(Convention::Max),
            "min" | "-" => Ok(Convention::Min),
            _ => Err(Error::InvalidMap(format!("unknown convention {s}"))),
        }
    }
}

/// Univariate Laurent polynomial with arbitrary-precision coefficients.
///
/// Terms are stored sorted by exponent and never hold a zero coefficient,
/// so the zero polynomial is the empty term list.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: Vec<(i64, BigInt)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * t^e`.
    pub fn monomial(c: impl Into<BigInt>, e: i64) -> Self {
        let c = c.into();
        if c.is_zero() {
            Self::zero()
        } else {
            LaurentPoly { terms: vec![(e, c)] }
        }
    }

    /// Builds a polynomial from arbitrary `(exponent, coefficient)` pairs,
    /// combining repeated exponents.
    pub fn from_terms<I: IntoIterator<Item = (i64, BigInt)>>(it: I) -> Self {
        let mut v: Vec<(i64, BigInt)> = it.into_iter().collect();
        v.sort_unstable_by_key(|t| t.0);
        Self::from_sorted(v)
    }

    fn from_sorted(v: Vec<(i64, BigInt)>) -> Self {
        let mut terms: Vec<(i64, BigInt)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match terms.last_mut() {
                Some(last) if last.0 == e => last.1 += c,
                _ => {
                    if let Some(last) = terms.last() {
                        if last.1.is_zero() {
                            terms.pop();
                        }
                    }
                    terms.push((e, c));
                }
            }
        }
        if terms.last().is_some_and(|t| t.1.is_zero()) {
            terms.pop();
        }
        LaurentPoly { terms }
    }

    pub fn terms(&self) -> &[(i64, BigInt)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        match self.terms.binary_search_by_key(&e, |t| t.0) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn deg(&self) -> Result<i64> {
        self.terms.last().map(|t| t.0).ok_or(Error::ZeroPolynomial)
    }

    pub fn val(&self) -> Result<i64> {
        self.terms.first().map(|t| t.0).ok_or(Error::ZeroPolynomial)
    }

    pub fn deg_val(&self) -> Result<(i64, i64)> {
        Ok((self.deg()?, self.val()?))
    }

    /// Degree under `Max`, valuation under `Min`.
    pub fn trop(&self, conv: Convention) -> Result<i64> {
        match conv {
            Convention::Max => self.deg(),
            Convention::Min => self.val(),
        }
    }

    /// Multiplies by `t^e`.
    pub fn shift(&self, e: i64) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(x, c)| (x + e, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// Substitutes `t -> 1/t`.
    pub fn invert_variable(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().rev().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Keeps the terms with exponent at least `floor`.
    fn drop_below(&mut self, floor: i64) {
        let cut = self.terms.partition_point(|t| t.0 < floor);
        if cut > 0 {
            self.terms.drain(..cut);
        }
    }

    /// Keeps the `cap` highest terms and returns the lowest kept exponent
    /// when anything was cut.
    fn keep_top(&mut self, cap: usize) -> Option<i64> {
        if self.terms.len() <= cap {
            return None;
        }
        let cut = self.terms.len() - cap;
        self.terms.drain(..cut);
        self.terms.first().map(|t| t.0)
    }

    fn merge(&self, other: &Self, negate_other: bool) -> Self {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                let c = if negate_other { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0, c));
                j += 1;
            } else {
                let c = if negate_other { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        LaurentPoly { terms: out }
    }

    fn product(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let (a, b) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        if a.len() == 1 {
            let (e, c) = &a.terms[0];
            return if c.is_one() { b.shift(*e) } else { b.shift(*e).scale(c) };
        }
        let lo = a.terms[0].0 + b.terms[0].0;
        let hi = a.terms[a.len() - 1].0 + b.terms[b.len() - 1].0;
        let span = (hi - lo) as u64 + 1;
        let work = (a.len() * b.len()) as u64;
        if span <= 4 * work + 64 {
            let mut acc = vec![BigInt::zero(); span as usize];
            for (ea, ca) in &a.terms {
                for (eb, cb) in &b.terms {
                    acc[(ea + eb - lo) as usize] += ca * cb;
                }
            }
            let terms = acc
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (lo + i as i64, c))
                .collect();
            LaurentPoly { terms }
        } else {
            let mut v = Vec::with_capacity(work as usize);
            for (ea, ca) in &a.terms {
                for (eb, cb) in &b.terms {
                    v.push((ea + eb, ca * cb));
                }
            }
            v.sort_unstable_by_key(|t| t.0);
            Self::from_sorted(v)
        }
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.merge(rhs, false)
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.merge(rhs, true)
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.product(rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            match *e {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    if *e == 1 {
                        f.write_str("t")?;
                    } else {
                        write!(f, "t^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Ring operation selector for [`lp_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpOp {
    Add,
    Sub,
    Mul,
}

pub fn lp_arith(op: LpOp, a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    match op {
        LpOp::Add => a + b,
        LpOp::Sub => a - b,
        LpOp::Mul => a * b,
    }
}

pub fn lp_deg_val(p: &LaurentPoly) -> Result<(i64, i64)> {
    p.deg_val()
}

/// Commutative ring of one-variable series used by the evaluation pipeline.
pub trait Ring: Clone + fmt::Debug + Send + Sync {
    /// Construction parameters shared by all values of one computation.
    type Ctx: Copy + Send + Sync;

    fn from_poly(ctx: Self::Ctx, p: &LaurentPoly) -> Self;
    fn constant(ctx: Self::Ctx, c: i64) -> Self {
        Self::from_poly(ctx, &LaurentPoly::constant(c))
    }
    fn radd(&self, other: &Self) -> Self;
    fn rsub(&self, other: &Self) -> Self;
    fn rmul(&self, other: &Self) -> Self;
    fn rneg(&self) -> Self;
    /// True only when the value is known to be exactly zero.
    fn is_exact_zero(&self) -> bool;
    fn trop(&self, conv: Convention) -> Result<i64>;
}

impl Ring for LaurentPoly {
    type Ctx = ();

    fn from_poly(_: (), p: &LaurentPoly) -> Self {
        p.clone()
    }
    fn radd(&self, other: &Self) -> Self {
        self + other
    }
    fn rsub(&self, other: &Self) -> Self {
        self - other
    }
    fn rmul(&self, other: &Self) -> Self {
        self * other
    }
    fn rneg(&self) -> Self {
        -self
    }
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
    fn trop(&self, conv: Convention) -> Result<i64> {
        LaurentPoly::trop(self, conv)
    }
}

/// Leading part of a Laurent polynomial.
///
/// Every term with exponent `>= floor` is exact; below `floor` nothing is
/// known. With `floor == None` the value is exact. At most `cap` terms are
/// kept, so the degree stays exact as long as a term survives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopSeries {
    known: LaurentPoly,
    floor: Option<i64>,
    cap: usize,
}

impl TopSeries {
    pub fn known(&self) -> &LaurentPoly {
        &self.known
    }

    pub fn floor(&self) -> Option<i64> {
        self.floor
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    fn finish(mut known: LaurentPoly, floor: Option<i64>, cap: usize) -> Self {
        if let Some(f) = floor {
            known.drop_below(f);
        }
        let floor = match known.keep_top(cap) {
            Some(low) => Some(floor.map_or(low, |f| f.max(low))),
            None => floor,
        };
        TopSeries { known, floor, cap }
    }

    /// Largest exponent that can occur in the true value.
    fn upper(&self) -> Option<i64> {
        match (self.known.deg(), self.floor) {
            (Ok(d), _) => Some(d),
            (Err(_), Some(f)) => Some(f - 1),
            (Err(_), None) => None,
        }
    }
}

fn max_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl Ring for TopSeries {
    type Ctx = usize;

    fn from_poly(cap: usize, p: &LaurentPoly) -> Self {
        Self::finish(p.clone(), None, cap)
    }

    fn radd(&self, other: &Self) -> Self {
        let cap = self.cap.max(other.cap);
        Self::finish(&self.known + &other.known, max_opt(self.floor, other.floor), cap)
    }

    fn rsub(&self, other: &Self) -> Self {
        let cap = self.cap.max(other.cap);
        Self::finish(&self.known - &other.known, max_opt(self.floor, other.floor), cap)
    }

    fn rmul(&self, other: &Self) -> Self {
        let cap = self.cap.max(other.cap);
        let (ua, ub) = match (self.upper(), other.upper()) {
            (Some(a), Some(b)) => (a, b),
            _ => return TopSeries { known: LaurentPoly::zero(), floor: None, cap },
        };
        let fa = self.floor.map(|f| f + ub);
        let fb = other.floor.map(|f| f + ua);
        let floor = max_opt(fa, fb);
        let known = match floor {
            Some(f) => {
                // Terms that cannot reach the floor are skipped before multiplying.
                let da = other.known.deg().unwrap_or(i64::MIN / 4);
                let db = self.known.deg().unwrap_or(i64::MIN / 4);
                let mut a = self.known.clone();
                a.drop_below(f.saturating_sub(da));
                let mut b = other.known.clone();
                b.drop_below(f.saturating_sub(db));
                &a * &b
            }
            None => &self.known * &other.known,
        };
        Self::finish(known, floor, cap)
    }

    fn rneg(&self) -> Self {
        TopSeries { known: -&self.known, floor: self.floor, cap: self.cap }
    }

    fn is_exact_zero(&self) -> bool {
        self.known.is_zero() && self.floor.is_none()
    }

    fn trop(&self, conv: Convention) -> Result<i64> {
        match conv {
            Convention::Max => match (self.known.deg(), self.floor) {
                (Ok(d), _) => Ok(d),
                (Err(_), Some(_)) => Err(Error::PrecisionLoss),
                (Err(_), None) => Err(Error::ZeroPolynomial),
            },
            Convention::Min => {
                if self.floor.is_none() {
                    self.known.val()
                } else {
                    Err(Error::Unsupported("valuation of a truncated series"))
                }
            }
        }
    }
}

/// Determinant of the square matrix with columns `cols`, restricted to
/// the rows `rows` (one row per column). Cofactor expansion row by row with
/// memoised minors over column subsets.
pub fn det_select<R: Ring>(ctx: R::Ctx, cols: &[&[R]], rows: &[usize]) -> R {
    let k = cols.len();
    debug_assert_eq!(rows.len(), k);
    if k == 0 {
        return R::constant(ctx, 1);
    }
    let full = (1usize << k) - 1;
    let mut minors: Vec<Option<R>> = vec![None; full + 1];
    minors[0] = Some(R::constant(ctx, 1));
    for mask in 0..full {
        let Some(base) = minors[mask].take() else { continue };
        let r = mask.count_ones() as usize;
        let row = rows[r];
        for (c, col) in cols.iter().enumerate() {
            let bit = 1 << c;
            if mask & bit != 0 {
                continue;
            }
            let entry = &col[row];
            if entry.is_exact_zero() {
                continue;
            }
            let mut term = base.rmul(entry);
            if (mask >> (c + 1)).count_ones() % 2 == 1 {
                term = term.rneg();
            }
            let slot = &mut minors[mask | bit];
            *slot = Some(match slot.take() {
                Some(prev) => prev.radd(&term),
                None => term,
            });
        }
    }
    minors[full].take().unwrap_or_else(|| R::constant(ctx, 0))
}

/// Determinant of the square matrix with the given columns.
pub fn det_columns<R: Ring>(ctx: R::Ctx, cols: &[&[R]]) -> R {
    let rows: Vec<usize> = (0..cols.len()).collect();
    det_select(ctx, cols, &rows)
}

/// Dense row-major matrix of Laurent polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<LaurentPoly>,
}

impl LMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<LaurentPoly>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(LMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Builds a `k x n` matrix from `n` columns of length `k`.
    pub fn from_columns(cols: &[Vec<LaurentPoly>]) -> Result<Self> {
        let n = cols.len();
        let k = cols.first().map_or(0, |c| c.len());
        if cols.iter().any(|c| c.len() != k) {
            return Err(Error::ShapeMismatch("ragged columns".into()));
        }
        let mut entries = Vec::with_capacity(k * n);
        for r in 0..k {
            for col in cols {
                entries.push(col[r].clone());
            }
        }
        Ok(LMatrix { rows: k, cols: n, entries })
    }

    pub fn get(&self, r: usize, c: usize) -> &LaurentPoly {
        &self.entries[r * self.cols + c]
    }

    pub fn column(&self, c: usize) -> Vec<LaurentPoly> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<LaurentPoly>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }
}

/// Exact determinant of the submatrix on `row_set` x `col_set`.
pub fn lmat_det(m: &LMatrix, row_set: &[usize], col_set: &[usize]) -> Result<LaurentPoly> {
    if row_set.len() != col_set.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} rows against {} columns",
            row_set.len(),
            col_set.len()
        )));
    }
    if row_set.iter().any(|&r| r >= m.rows) || col_set.iter().any(|&c| c >= m.cols) {
        return Err(Error::ShapeMismatch("index out of range".into()));
    }
    let cols: Vec<Vec<LaurentPoly>> = col_set.iter().map(|&c| m.column(c)).collect();
    let refs: Vec<&[LaurentPoly]> = cols.iter().map(|c| c.as_slice()).collect();
    Ok(det_select((), &refs, row_set))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(e, c)| (e, BigInt::from(c))))
    }

    #[test]
    fn difference_of_squares() {
        let a = p(&[(1, 1), (0, 1)]);
        let b = p(&[(1, 1), (0, -1)]);
        assert_eq!(lp_arith(LpOp::Mul, &a, &b), p(&[(2, 1), (0, -1)]));
    }

    #[test]
    fn cancellation_to_zero() {
        let r = lp_arith(LpOp::Add, &p(&[(2, 3)]), &p(&[(2, -3)]));
        assert!(r.is_zero());
        assert_eq!(r.terms().len(), 0);
    }

    #[test]
    fn monomial_product() {
        assert_eq!(lp_arith(LpOp::Mul, &p(&[(-1, 2)]), &p(&[(3, 5)])), p(&[(2, 10)]));
    }

    #[test]
    fn deg_val_examples() {
        assert_eq!(lp_deg_val(&p(&[(2, 3), (-1, 2)])), Ok((2, -1)));
        assert_eq!(lp_deg_val(&LaurentPoly::constant(7)), Ok((0, 0)));
        assert_eq!(lp_deg_val(&p(&[(5, 1), (5, -1), (1, 1)])), Ok((1, 1)));
        assert_eq!(lp_deg_val(&LaurentPoly::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn determinants() {
        let one = LaurentPoly::one;
        let z = LaurentPoly::zero;
        let id = LMatrix::from_rows(vec![
            vec![one(), z(), z()],
            vec![z(), one(), z()],
            vec![z(), z(), one()],
        ])
        .unwrap();
        assert_eq!(lmat_det(&id, &[0, 1, 2], &[0, 1, 2]).unwrap(), one());
        let t = LaurentPoly::monomial(1, 1);
        let m = LMatrix::from_rows(vec![vec![t.clone(), one()], vec![one(), t]]).unwrap();
        assert_eq!(lmat_det(&m, &[0, 1], &[0, 1]).unwrap(), p(&[(2, 1), (0, -1)]));
        assert!(matches!(lmat_det(&m, &[0, 1], &[0]), Err(Error::ShapeMismatch(_))));
        assert!(matches!(lmat_det(&m, &[0, 2], &[0, 1]), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[(2, 3), (0, -1), (-1, 1)]).to_string(), "3t^2 - 1 + t^-1");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
    }

    #[test]
    fn top_series_keeps_leading_terms() {
        let a = p(&[(5, 1), (3, 2), (1, 1), (0, 4)]);
        let b = p(&[(2, 1), (1, -1), (-3, 7)]);
        let exact = &a * &b;
        let ta = TopSeries::from_poly(2, &a);
        let tb = TopSeries::from_poly(2, &b);
        let prod = ta.rmul(&tb);
        let f = prod.floor().unwrap();
        for (e, c) in prod.known().terms() {
            assert!(*e >= f);
            assert_eq!(exact.coeff(*e), *c);
        }
        assert_eq!(prod.trop(Convention::Max), exact.deg());
    }

    #[test]
    fn top_series_reports_precision_loss() {
        let a = TopSeries::from_poly(1, &p(&[(3, 1), (1, 1)]));
        let b = TopSeries::from_poly(1, &p(&[(3, 1), (0, 5)]));
        let d = a.rsub(&b);
        assert_eq!(d.trop(Convention::Max), Err(Error::PrecisionLoss));
    }
}
