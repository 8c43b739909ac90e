//! Rectangular semistandard tableaux, dominant monomials and the
//! g-vector dictionary, together with Bender–Knuth, promotion and evacuation.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cluster_core::TropPoint;
use crate::error::{Error, Result};
use crate::grassmannian::{GrContext, Node};

/// A column: strictly increasing, length `k`, entries in `1..=n`.
pub type Column = Vec<usize>;

#[derive(Deserialize)]
struct RawTableau {
    k: usize,
    n: usize,
    cols: Vec<Column>,
}

impl TryFrom<RawTableau> for Tableau {
    type Error = Error;
    fn try_from(raw: RawTableau) -> Result<Self> {
        Tableau::from_cols(raw.k, raw.n, raw.cols)
    }
}

/// Element of SSYT(k,[n]), stored column-wise in left-to-right order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawTableau")]
pub struct Tableau {
    k: usize,
    n: usize,
    cols: Vec<Column>,
}

impl Tableau {
    /// The empty tableau.
    pub fn empty(k: usize, n: usize) -> Self {
        Tableau { k, n, cols: Vec::new() }
    }

    /// Builds a tableau from its columns given in any order.
    pub fn from_cols(k: usize, n: usize, mut cols: Vec<Column>) -> Result<Self> {
        for c in &cols {
            if c.len() != k {
                return Err(Error::NotSemistandard(format!("column {c:?} does not have length {k}")));
            }
            if c.iter().any(|&x| x == 0 || x > n) {
                return Err(Error::NotSemistandard(format!("column {c:?} has entries outside 1..={n}")));
            }
            if c.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::NotSemistandard(format!("column {c:?} is not strictly increasing")));
            }
        }
        cols.sort();
        let t = Tableau { k, n, cols };
        if t.cols.windows(2).any(|w| w[0].iter().zip(&w[1]).any(|(a, b)| a > b)) {
            return Err(Error::NotSemistandard(format!("rows of {:?} are not weakly increasing", t.cols)));
        }
        Ok(t)
    }

    /// Builds a tableau from its `k` rows.
    pub fn from_rows(k: usize, n: usize, rows: &[Vec<usize>]) -> Result<Self> {
        if rows.len() != k {
            return Err(Error::NotSemistandard(format!("expected {k} rows, got {}", rows.len())));
        }
        let width = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::NotSemistandard("rows have different lengths".into()));
        }
        if rows.iter().any(|r| r.windows(2).any(|w| w[0] > w[1])) {
            return Err(Error::NotSemistandard("rows are not weakly increasing".into()));
        }
        let cols = (0..width).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
        Self::from_cols(k, n, cols)
    }

    /// Single-column tableau.
    pub fn column(k: usize, n: usize, col: Column) -> Result<Self> {
        Self::from_cols(k, n, vec![col])
    }

    /// Reads nested lists in either orientation: `k` inner lists are rows,
    /// inner lists of length `k` are columns. A square shape is read as rows.
    pub fn from_nested(k: usize, n: usize, lists: &[Vec<usize>]) -> Result<Self> {
        if lists.len() == k && lists.iter().all(|l| l.len() == lists[0].len()) {
            Self::from_rows(k, n, lists)
        } else {
            Self::from_cols(k, n, lists.to_vec())
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> &[Column] {
        &self.cols
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.k).map(|i| self.cols.iter().map(|c| c[i]).collect()).collect()
    }

    fn same_shape(&self, other: &Tableau) -> Result<()> {
        if self.k != other.k || self.n != other.n {
            Err(Error::ShapeMismatch(format!(
                "SSYT({},[{}]) vs SSYT({},[{}])",
                self.k, self.n, other.k, other.n
            )))
        } else {
            Ok(())
        }
    }

    fn from_row_multisets(k: usize, n: usize, mut rows: Vec<Vec<usize>>) -> Result<Self> {
        for r in rows.iter_mut() {
            r.sort_unstable();
        }
        Self::from_rows(k, n, &rows)
    }

    /// Row-wise multiset union.
    pub fn union(&self, other: &Tableau) -> Result<Tableau> {
        self.same_shape(other)?;
        let rows = self.rows().into_iter().zip(other.rows()).map(|(mut a, b)| {
            a.extend(b);
            a
        });
        Self::from_row_multisets(self.k, self.n, rows.collect())
    }

    /// Union of many columns.
    pub fn union_of_columns(k: usize, n: usize, cols: &[Column]) -> Result<Tableau> {
        let single = Self::from_cols(k, n, Vec::new())?;
        let mut rows = vec![Vec::new(); k];
        for c in cols {
            Self::column(k, n, c.clone())?;
            for (i, &x) in c.iter().enumerate() {
                rows[i].push(x);
            }
        }
        if cols.is_empty() {
            return Ok(single);
        }
        Self::from_row_multisets(k, n, rows)
    }

    /// Whether every row of `s` is contained in the matching row of `self`
    /// and the remainder is semistandard.
    pub fn has_factor(&self, s: &Tableau) -> bool {
        self.quotient(s).is_ok()
    }

    /// Row-wise multiset difference `self / s`.
    pub fn quotient(&self, s: &Tableau) -> Result<Tableau> {
        self.same_shape(s)?;
        let mut rows = self.rows();
        for (row, remove) in rows.iter_mut().zip(s.rows()) {
            for x in remove {
                let pos = row.iter().position(|&y| y == x).ok_or(Error::NotAFactor)?;
                row.remove(pos);
            }
        }
        Self::from_rows(self.k, self.n, &rows).map_err(|_| Error::NotAFactor)
    }

    /// Columns `{a+1, ..., a+k}`.
    pub fn trivial_columns(k: usize, n: usize) -> Vec<Column> {
        (0..=n - k).map(|a| (a + 1..=a + k).collect()).collect()
    }

    /// Columns of the frozen Plücker coordinates: the cyclic intervals of length `k`.
    pub fn frozen_columns(k: usize, n: usize) -> Vec<Column> {
        (0..n)
            .map(|a| {
                let mut c: Column = (a..a + k).map(|x| x % n + 1).collect();
                c.sort_unstable();
                c
            })
            .collect()
    }

    fn strip(&self, factors: &[Column]) -> Tableau {
        let mut t = self.clone();
        'outer: loop {
            for f in factors {
                let f = Tableau { k: t.k, n: t.n, cols: vec![f.clone()] };
                if let Ok(q) = t.quotient(&f) {
                    t = q;
                    continue 'outer;
                }
            }
            return t;
        }
    }

    /// Removes a maximal trivial factor.
    pub fn reduce(&self) -> Tableau {
        self.strip(&Self::trivial_columns(self.k, self.n))
    }

    /// Removes every frozen column factor.
    pub fn strip_frozen(&self) -> Tableau {
        self.strip(&Self::frozen_columns(self.k, self.n))
    }

    pub fn has_frozen_factor(&self) -> bool {
        Self::frozen_columns(self.k, self.n).into_iter().any(|c| {
            let f = Tableau { k: self.k, n: self.n, cols: vec![c] };
            self.has_factor(&f)
        })
    }

    /// The unique small-gap tableau with the same monomial.
    pub fn small_gap_form(&self) -> Tableau {
        monomial_to_tableau(&tableau_to_monomial(self), self.k, self.n)
            .expect("monomial of a tableau is dominant and in range")
    }

    /// Trivial: every entry is one less than the entry below it.
    pub fn is_trivial(&self) -> bool {
        self.cols.iter().all(|c| c.windows(2).all(|w| w[1] == w[0] + 1))
    }

    /// Fundamental: a single column whose content is an interval of length
    /// `k+1` minus one interior element.
    pub fn is_fundamental_column(col: &[usize]) -> bool {
        let gaps: Vec<usize> = col.windows(2).map(|w| w[1] - w[0]).collect();
        gaps.iter().filter(|&&g| g == 2).count() == 1 && gaps.iter().all(|&g| g <= 2)
    }

    pub fn is_small_gap(&self) -> bool {
        self.cols.iter().all(|c| Self::is_fundamental_column(c) || c.windows(2).all(|w| w[1] == w[0] + 1))
    }

    /// Bender–Knuth involution exchanging the free letters `i` and `i+1`.
    pub fn bender_knuth(&self, i: usize) -> Tableau {
        assert!(i >= 1 && i < self.n, "BK_{i} outside 1..{}", self.n);
        let mut rows = self.rows();
        let width = self.cols.len();
        for r in 0..self.k {
            let bound = |j: usize| {
                let x = self.cols[j][r];
                (x == i && r + 1 < self.k && self.cols[j][r + 1] == i + 1)
                    || (x == i + 1 && r > 0 && self.cols[j][r - 1] == i)
            };
            let free_i = (0..width).filter(|&j| self.cols[j][r] == i && !bound(j)).count();
            let free_next = (0..width).filter(|&j| self.cols[j][r] == i + 1 && !bound(j)).count();
            let row = &mut rows[r];
            // free letters form a contiguous block; rewrite it with counts swapped
            let start = (0..width).find(|&j| (self.cols[j][r] == i || self.cols[j][r] == i + 1) && !bound(j));
            if let Some(start) = start {
                for (off, slot) in row[start..start + free_i + free_next].iter_mut().enumerate() {
                    *slot = if off < free_next { i } else { i + 1 };
                }
            }
        }
        Self::from_rows(self.k, self.n, &rows).expect("Bender-Knuth preserves semistandardness")
    }

    /// `pr = BK_1 ∘ ... ∘ BK_{n-1}` with `BK_{n-1}` applied first.
    pub fn promotion(&self) -> Tableau {
        (1..self.n).rev().fold(self.clone(), |t, i| t.bender_knuth(i))
    }

    /// `eva = BK_1 ∘ (BK_2 ∘ BK_1) ∘ ... ∘ (BK_{n-1} ∘ ... ∘ BK_1)`.
    pub fn evacuation(&self) -> Tableau {
        let mut t = self.clone();
        for top in (1..self.n).rev() {
            for i in 1..=top {
                t = t.bender_knuth(i);
            }
        }
        t
    }

    /// All tableaux in SSYT(k,[n]) with exactly `r` columns, in lexicographic order.
    pub fn enumerate(k: usize, n: usize, r: usize) -> Vec<Tableau> {
        let mut all: Vec<Column> = Vec::new();
        let mut cur = Vec::with_capacity(k);
        fn subsets(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Column>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for x in start..=n {
                cur.push(x);
                subsets(x + 1, n, k, cur, out);
                cur.pop();
            }
        }
        subsets(1, n, k, &mut cur, &mut all);
        let mut out = Vec::new();
        let mut chain: Vec<usize> = Vec::with_capacity(r);
        fn extend(all: &[Column], from: usize, r: usize, chain: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if chain.len() == r {
                out.push(chain.clone());
                return;
            }
            for j in from..all.len() {
                if let Some(&last) = chain.last() {
                    if all[last].iter().zip(&all[j]).any(|(a, b)| a > b) {
                        continue;
                    }
                }
                chain.push(j);
                extend(all, j, r, chain, out);
                chain.pop();
            }
        }
        let mut chains = Vec::new();
        extend(&all, 0, r, &mut chain, &mut chains);
        for c in chains {
            out.push(Tableau { k, n, cols: c.into_iter().map(|j| all[j].clone()).collect() });
        }
        out
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// Laurent monomial in the variables `Y_{i,s}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominantMonomial {
    exps: BTreeMap<(usize, i64), i64>,
}

impl DominantMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(i: usize, s: i64) -> Self {
        let mut m = Self::one();
        m.add(i, s, 1);
        m
    }

    pub fn exponent(&self, i: usize, s: i64) -> i64 {
        self.exps.get(&(i, s)).copied().unwrap_or(0)
    }

    pub fn add(&mut self, i: usize, s: i64, e: i64) {
        let slot = self.exps.entry((i, s)).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.exps.remove(&(i, s));
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, s), &e) in &other.exps {
            out.add(i, s, e);
        }
        out
    }

    pub fn pow(&self, e: i64) -> Self {
        let mut out = Self::one();
        for (&(i, s), &x) in &self.exps {
            out.add(i, s, x * e);
        }
        out
    }

    pub fn is_dominant(&self) -> bool {
        self.exps.values().all(|&e| e >= 0)
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, i64), i64)> + '_ {
        self.exps.iter().map(|(&k, &v)| (k, v))
    }
}

impl fmt::Display for DominantMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return f.write_str("1");
        }
        for (&(i, s), &e) in &self.exps {
            write!(f, "Y_{{{i},{s}}}")?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// The fundamental column `T_{i,s}`.
pub fn fundamental_column(k: usize, n: usize, i: usize, s: i64) -> Result<Column> {
    let twice = i as i64 - s;
    if i == 0 || i >= k || twice % 2 != 0 {
        return Err(Error::ShapeMismatch(format!("Y_{{{i},{s}}} has no fundamental tableau for k={k}")));
    }
    let u = twice / 2;
    if u < 1 || u + k as i64 > n as i64 {
        return Err(Error::ShapeMismatch(format!("Y_{{{i},{s}}} lies outside SSYT({k},[{n}])")));
    }
    let u = u as usize;
    Ok((u..=u + k).filter(|&x| x != u + k - i).collect())
}

/// Monomial of a single column: gaps between consecutive entries become
/// strings of `Y`s in the matching colour.
pub fn column_monomial(col: &[usize]) -> DominantMonomial {
    let k = col.len();
    let mut out = DominantMonomial::one();
    let mut s = 1 - 2 * (col[k - 1] as i64 - k as i64);
    for i in 1..k {
        let gap = (col[k - i] - col[k - i - 1] - 1) as i64;
        for a in 0..gap {
            out.add(i, s + 2 * a + i as i64 - 1, 1);
        }
        s += 2 * gap;
    }
    out
}

/// `M_T`.
pub fn tableau_to_monomial(t: &Tableau) -> DominantMonomial {
    t.cols().iter().fold(DominantMonomial::one(), |acc, c| acc.mul(&column_monomial(c)))
}

/// Union of the fundamental columns of a dominant monomial.
pub fn monomial_to_tableau(m: &DominantMonomial, k: usize, n: usize) -> Result<Tableau> {
    if !m.is_dominant() {
        return Err(Error::NotSemistandard(format!("{m} is not dominant")));
    }
    let mut cols = Vec::new();
    for ((i, s), e) in m.iter() {
        let c = fundamental_column(k, n, i, s)?;
        cols.extend(std::iter::repeat(c).take(e as usize));
    }
    Tableau::union_of_columns(k, n, &cols)
}

/// Monomial of the initial cluster variable at `(a,b)`: `∏_{j=1}^{a} Y_{b,b-2j}`.
pub fn node_monomial(ctx: &GrContext, (a, b): Node) -> DominantMonomial {
    let mut m = DominantMonomial::one();
    if b < ctx.k {
        for j in 1..=a {
            m.add(b, b as i64 - 2 * j as i64, 1);
        }
    }
    m
}

/// Monomials of the active nodes in coordinate order followed by the frozen nodes.
pub fn initial_cluster_monomials(ctx: &GrContext) -> Vec<(Node, DominantMonomial)> {
    ctx.active_nodes()
        .into_iter()
        .chain(ctx.frozen_nodes())
        .map(|nd| (nd, node_monomial(ctx, nd)))
        .collect()
}

fn check_ctx(t: &Tableau, ctx: &GrContext) -> Result<()> {
    if t.k() != ctx.k || t.n() != ctx.n {
        Err(Error::ShapeMismatch(format!("tableau in SSYT({},[{}]) used with Gr({},{})", t.k(), t.n(), ctx.k, ctx.n)))
    } else {
        Ok(())
    }
}

/// Truncated g-vector of a tableau without frozen factors.
pub fn tableau_to_gvector(t: &Tableau, ctx: &GrContext) -> Result<TropPoint> {
    check_ctx(t, ctx)?;
    if t.has_frozen_factor() {
        return Err(Error::HasFrozenFactor);
    }
    let m = tableau_to_monomial(t);
    let e = |b: usize, a: usize| m.exponent(b, b as i64 - 2 * a as i64);
    Ok((0..ctx.m)
        .map(|idx| {
            let (a, b) = ctx.node(idx);
            e(b, a) - e(b, a + 1)
        })
        .collect())
}

/// The unique tableau without frozen factors whose truncated g-vector is `g`.
pub fn gvector_to_tableau(g: &[i64], ctx: &GrContext) -> Result<Tableau> {
    if g.len() != ctx.m {
        return Err(Error::LengthMismatch { expected: ctx.m, got: g.len() });
    }
    let (k, n) = (ctx.k, ctx.n);
    let l = n - k;
    let mut mono = DominantMonomial::one();
    for b in 1..k {
        // e[a] for a = 1..=l, with e[l] = 0
        let mut e = vec![0i64; l + 1];
        for a in (1..l).rev() {
            e[a] = e[a + 1] + g[ctx.index(a, b)];
        }
        let lift = (-e[1..].iter().copied().min().unwrap_or(0)).max(0);
        for a in 1..=l {
            mono.add(b, b as i64 - 2 * a as i64, e[a] + lift);
        }
    }
    let t = monomial_to_tableau(&mono, k, n)?;
    Ok(t.reduce())
}

/// Number of columns of the tableau of `g`.
pub fn degree(g: &[i64], ctx: &GrContext) -> Result<usize> {
    Ok(gvector_to_tableau(g, ctx)?.ncols())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(k: usize, n: usize, c: &[usize]) -> Tableau {
        Tableau::column(k, n, c.to_vec()).unwrap()
    }

    #[test]
    fn union_example() {
        let t = col(3, 6, &[1, 3, 5]).union(&col(3, 6, &[2, 4, 6])).unwrap();
        assert_eq!(t.rows(), vec![vec![1, 2], vec![3, 4], vec![5, 6]]);
        assert_eq!(t.union(&Tableau::empty(3, 6)).unwrap(), t);
    }

    #[test]
    fn quotient_and_reduce() {
        let t = Tableau::from_rows(3, 6, &[vec![1, 2], vec![3, 4], vec![5, 6]]).unwrap();
        assert_eq!(t.quotient(&col(3, 6, &[1, 3, 5])).unwrap(), col(3, 6, &[2, 4, 6]));
        assert_eq!(t.quotient(&t).unwrap(), Tableau::empty(3, 6));
        assert_eq!(t.quotient(&col(3, 6, &[1, 2, 3])), Err(Error::NotAFactor));
        let r = Tableau::from_rows(3, 6, &[vec![1, 2], vec![2, 3], vec![3, 6]]).unwrap();
        assert_eq!(r.reduce(), col(3, 6, &[2, 3, 6]));
        assert_eq!(col(3, 6, &[1, 2, 3]).reduce(), Tableau::empty(3, 6));
    }

    #[test]
    fn monomials() {
        let t = Tableau::from_rows(3, 6, &[vec![1, 2], vec![3, 4], vec![5, 6]]).unwrap();
        let mut want = DominantMonomial::one();
        for (i, s) in [(1, -5), (1, -3), (2, -2), (2, 0)] {
            want.add(i, s, 1);
        }
        assert_eq!(tableau_to_monomial(&t), want);
        assert_eq!(tableau_to_monomial(&col(4, 8, &[1, 2, 3, 5])), DominantMonomial::var(1, -1));
        assert!(tableau_to_monomial(&col(4, 8, &[3, 4, 5, 6])).is_one());
    }

    #[test]
    fn dictionary_examples() {
        let g48 = GrContext::new(4, 8).unwrap();
        let t = gvector_to_tableau(&[-1, 0, 0, -1, 0, 1, 1, 0, 0], &g48).unwrap();
        assert_eq!(t.cols(), &[vec![1, 3, 4, 7], vec![2, 4, 5, 8]]);
        let g36 = GrContext::new(3, 6).unwrap();
        assert_eq!(tableau_to_gvector(&col(3, 6, &[1, 3, 5]), &g36).unwrap(), vec![-1, 1, 1, 0]);
        let t = gvector_to_tableau(&[-1, 0, 0, 1], &g36).unwrap();
        assert_eq!(t.rows(), vec![vec![1, 2], vec![3, 4], vec![5, 6]]);
        assert_eq!(tableau_to_gvector(&col(3, 6, &[1, 5, 6]), &g36), Err(Error::HasFrozenFactor));
    }

    #[test]
    fn operators() {
        assert_eq!(col(3, 6, &[1, 2, 4]).promotion(), col(3, 6, &[2, 3, 5]));
        assert_eq!(col(3, 6, &[1, 2, 6]).bender_knuth(3), col(3, 6, &[1, 2, 6]));
        assert_eq!(col(3, 6, &[1, 2, 5]).evacuation(), col(3, 6, &[2, 5, 6]));
        let t = Tableau::from_rows(3, 8, &[vec![1, 2, 3], vec![4, 4, 5], vec![6, 7, 8]]).unwrap();
        let e = Tableau::from_rows(3, 8, &[vec![1, 2, 3], vec![4, 5, 5], vec![6, 7, 8]]).unwrap();
        assert_eq!(t.evacuation(), e);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(Tableau::enumerate(3, 6, 1).len(), 20);
        // SSYT of a 2x2 rectangle with entries <= 4: 20
        assert_eq!(Tableau::enumerate(2, 4, 2).len(), 20);
    }

    #[test]
    fn json_roundtrip() {
        let t = Tableau::from_rows(3, 6, &[vec![1, 2], vec![3, 4], vec![5, 6]]).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"k":3,"n":6,"cols":[[1,3,5],[2,4,6]]}"#);
        assert_eq!(serde_json::from_str::<Tableau>(&s).unwrap(), t);
        assert!(serde_json::from_str::<Tableau>(r#"{"k":2,"n":4,"cols":[[2,1]]}"#).is_err());
    }
}
