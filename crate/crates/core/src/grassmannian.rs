//! The Gr(k,n) initial seed, the web matrix, quasi-automorphisms as maps on
//! `k x n` matrices, and pointwise evaluation of their tropicalisations.
//!
//! `Q_f(v)` is computed by building `W(t^v)`, applying the matrix map of
//! `f^{-1}`, and reading every initial ŷ as a ratio of Plücker minors. The
//! degree (max) or valuation (min) of each ratio is the tropical value.
//! Composition follows `Q_{f∘g} = Q_f ∘ Q_g`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cluster_core::TropPoint;
use crate::error::{Error, Result};
use crate::exact_arith::{det_columns, det_select, Convention, LMatrix, LaurentPoly, Ring, TopSeries};

/// A node of the initial quiver: `(0,0)` or `(a,b)` with `1 <= a <= n-k`, `1 <= b <= k`.
pub type Node = (usize, usize);

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Parameters of Gr(k,n) together with the initial seed data.
#[derive(Clone, Debug)]
pub struct GrContext {
    pub k: usize,
    pub n: usize,
    /// `gcd(k, n)`.
    pub d: usize,
    /// Active rank `(k-1)(n-k-1)`.
    pub m: usize,
    pluckers: Vec<Vec<usize>>,
    /// For each active node, indices into `pluckers` of the numerator and denominator.
    yhat: Vec<(Vec<usize>, Vec<usize>)>,
}

impl GrContext {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if k < 2 || n < k + 2 {
            return Err(Error::InvalidContext { k, n });
        }
        let m = (k - 1) * (n - k - 1);
        let mut ctx = GrContext { k, n, d: gcd(k, n), m, pluckers: Vec::new(), yhat: Vec::new() };
        let arrows = ctx.arrows();
        let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut yhat = Vec::with_capacity(m);
        for (a, b) in ctx.active_nodes() {
            let mut side = |sel: &dyn Fn(&(Node, Node)) -> Option<Node>| -> Vec<usize> {
                arrows
                    .iter()
                    .filter_map(sel)
                    .map(|nd| {
                        let set = ctx.plucker(nd);
                        let next = ids.len();
                        *ids.entry(set).or_insert(next)
                    })
                    .collect()
            };
            let num = side(&|&(s, t)| (t == (a, b)).then_some(s));
            let den = side(&|&(s, t)| (s == (a, b)).then_some(t));
            yhat.push((num, den));
        }
        let mut pluckers = vec![Vec::new(); ids.len()];
        for (set, i) in ids {
            pluckers[i] = set;
        }
        ctx.pluckers = pluckers;
        ctx.yhat = yhat;
        Ok(ctx)
    }

    /// 0-based coordinate of the active node `(a,b)`: `(a-1)(k-1) + b - 1`.
    pub fn index(&self, a: usize, b: usize) -> usize {
        (a - 1) * (self.k - 1) + b - 1
    }

    /// Inverse of [`GrContext::index`].
    pub fn node(&self, idx: usize) -> Node {
        (idx / (self.k - 1) + 1, idx % (self.k - 1) + 1)
    }

    /// Active nodes in coordinate order.
    pub fn active_nodes(&self) -> Vec<Node> {
        (0..self.m).map(|i| self.node(i)).collect()
    }

    /// Frozen nodes: `(0,0)`, the last row `a = n-k` and the last column `b = k`.
    pub fn frozen_nodes(&self) -> Vec<Node> {
        let mut out = vec![(0, 0)];
        for a in 1..=self.n - self.k {
            for b in 1..=self.k {
                if a == self.n - self.k || b == self.k {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// 1-based column set of the Plücker coordinate at a node:
    /// `{1..k-b} ∪ {k-b+a+1..k+a}`, and `{1..k}` at `(0,0)`.
    pub fn plucker(&self, (a, b): Node) -> Vec<usize> {
        let k = self.k;
        if (a, b) == (0, 0) {
            return (1..=k).collect();
        }
        (1..=k - b).chain(k - b + a + 1..=k + a).collect()
    }

    /// Arrows of the initial quiver.
    pub fn arrows(&self) -> Vec<(Node, Node)> {
        let (k, n) = (self.k, self.n);
        let mut out = vec![((0, 0), (1, 1))];
        for a in 1..=n - k {
            for b in 1..=k {
                if a >= 2 {
                    out.push(((a - 1, b), (a, b)));
                }
                if b >= 2 {
                    out.push(((a, b - 1), (a, b)));
                }
                if a < n - k && b < k {
                    out.push(((a + 1, b + 1), (a, b)));
                }
            }
        }
        out
    }

    /// Column sets of the Plücker coordinates in the numerator and
    /// denominator of the initial ŷ at an active node.
    pub fn yhat_sets(&self, (a, b): Node) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let (num, den) = &self.yhat[self.index(a, b)];
        (
            num.iter().map(|&i| self.pluckers[i].clone()).collect(),
            den.iter().map(|&i| self.pluckers[i].clone()).collect(),
        )
    }

    fn check_point(&self, v: &[i64]) -> Result<()> {
        if v.len() != self.m {
            Err(Error::LengthMismatch { expected: self.m, got: v.len() })
        } else {
            Ok(())
        }
    }
}

/// Quasi-automorphisms of Gr(k,n).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QuasiAuto {
    Rho,
    RhoInv,
    Theta,
    Tau,
    TauInv,
    Sigma(usize),
    SigmaInv(usize),
}

impl QuasiAuto {
    pub fn inverse(self) -> Self {
        match self {
            QuasiAuto::Rho => QuasiAuto::RhoInv,
            QuasiAuto::RhoInv => QuasiAuto::Rho,
            QuasiAuto::Theta => QuasiAuto::Theta,
            QuasiAuto::Tau => QuasiAuto::TauInv,
            QuasiAuto::TauInv => QuasiAuto::Tau,
            QuasiAuto::Sigma(i) => QuasiAuto::SigmaInv(i),
            QuasiAuto::SigmaInv(i) => QuasiAuto::Sigma(i),
        }
    }

    /// `-1` for the reflection, `+1` otherwise.
    pub fn signature(self) -> i32 {
        if self == QuasiAuto::Theta {
            -1
        } else {
            1
        }
    }

    /// Braid generators `σ_i^{±1}`, `i = 1..=d`.
    pub fn braid_generators(ctx: &GrContext) -> Vec<QuasiAuto> {
        if ctx.d < 2 {
            return Vec::new();
        }
        (1..=ctx.d).flat_map(|i| [QuasiAuto::Sigma(i), QuasiAuto::SigmaInv(i)]).collect()
    }

    fn validate(self, ctx: &GrContext) -> Result<()> {
        match self {
            QuasiAuto::Sigma(i) | QuasiAuto::SigmaInv(i) => {
                if ctx.d < 2 || i == 0 || i > ctx.d {
                    Err(Error::InvalidMap(format!("{self} on Gr({},{}) with d={}", ctx.k, ctx.n, ctx.d)))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for QuasiAuto {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuasiAuto::Rho => f.write_str("rho"),
            QuasiAuto::RhoInv => f.write_str("rho-inv"),
            QuasiAuto::Theta => f.write_str("theta"),
            QuasiAuto::Tau => f.write_str("tau"),
            QuasiAuto::TauInv => f.write_str("tau-inv"),
            QuasiAuto::Sigma(i) => write!(f, "sigma:{i}"),
            QuasiAuto::SigmaInv(i) => write!(f, "sigma-inv:{i}"),
        }
    }
}

impl Serialize for QuasiAuto {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QuasiAuto {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl FromStr for QuasiAuto {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidMap(s.to_string());
        Ok(match s {
            "rho" => QuasiAuto::Rho,
            "rho-inv" => QuasiAuto::RhoInv,
            "theta" => QuasiAuto::Theta,
            "tau" => QuasiAuto::Tau,
            "tau-inv" => QuasiAuto::TauInv,
            _ => {
                let (head, idx) = s.split_once(':').ok_or_else(bad)?;
                let i: usize = idx.parse().map_err(|_| bad())?;
                match head {
                    "sigma" => QuasiAuto::Sigma(i),
                    "sigma-inv" => QuasiAuto::SigmaInv(i),
                    _ => return Err(bad()),
                }
            }
        })
    }
}

/// Entries of `M` in `W = (1_k | M)` as exact polynomials, column by column.
fn web_columns(ctx: &GrContext, v: &[i64]) -> Vec<Vec<LaurentPoly>> {
    let (k, n) = (ctx.k, ctx.n);
    // prefix[b][l] = sum_{a=1}^{l} v(a,b)
    let prefix: Vec<Vec<i64>> = (1..k)
        .map(|b| {
            let mut acc = vec![0i64];
            for a in 1..n - k {
                let last = *acc.last().unwrap();
                acc.push(last + v[ctx.index(a, b)]);
            }
            acc
        })
        .collect();
    fn chains(prefix: &[Vec<i64>], b: usize, len: usize, top: usize, acc: i64, out: &mut Vec<i64>) {
        if b == len {
            out.push(acc);
            return;
        }
        for lam in 0..=top {
            chains(prefix, b + 1, len, lam, acc + prefix[b][lam], out);
        }
    }
    let mut cols: Vec<Vec<LaurentPoly>> = (0..k)
        .map(|c| (0..k).map(|r| LaurentPoly::constant(i64::from(r == c))).collect())
        .collect();
    for j in 1..=n - k {
        let col = (1..=k)
            .map(|i| {
                let mut exps = Vec::new();
                chains(&prefix, 0, k - i, j - 1, 0, &mut exps);
                let sign = if (k + i) % 2 == 0 { 1 } else { -1 };
                LaurentPoly::from_terms(exps.into_iter().map(|e| (e, sign.into())))
            })
            .collect();
        cols.push(col);
    }
    cols
}

/// The web matrix `W(t^v)`.
pub fn web_matrix(ctx: &GrContext, v: &[i64]) -> Result<LMatrix> {
    ctx.check_point(v)?;
    LMatrix::from_columns(&web_columns(ctx, v))
}

type Cols<R> = Vec<Vec<R>>;

struct MapEval<'a, R: Ring> {
    ctx: &'a GrContext,
    rctx: R::Ctx,
    cols: &'a [Vec<R>],
}

impl<R: Ring> MapEval<'_, R> {
    /// Column `z_l` of the periodic extension `z_{l+qn} = (-1)^{(k-1)q} z_l`.
    fn ext(&self, l: i64) -> Vec<R> {
        let n = self.ctx.n as i64;
        let q = (l - 1).div_euclid(n);
        let z = &self.cols[(l - 1).rem_euclid(n) as usize];
        if (self.ctx.k as i64 - 1) * q % 2 != 0 {
            z.iter().map(|x| x.rneg()).collect()
        } else {
            z.clone()
        }
    }

    fn det(&self, zs: &[Vec<R>]) -> R {
        let refs: Vec<&[R]> = zs.iter().map(|z| z.as_slice()).collect();
        det_columns(self.rctx, &refs)
    }

    fn span(&self, from: i64, to: i64) -> Vec<Vec<R>> {
        (from..=to).map(|l| self.ext(l)).collect()
    }

    /// Generalised cross product: component `r` is `det(zs, e_r)`.
    fn cross(&self, zs: &[Vec<R>]) -> Vec<R> {
        let k = self.ctx.k;
        let refs: Vec<&[R]> = zs.iter().map(|z| z.as_slice()).collect();
        (0..k)
            .map(|r| {
                let rows: Vec<usize> = (0..k).filter(|&x| x != r).collect();
                let m = det_select(self.rctx, &refs, &rows);
                if (r + k - 1) % 2 == 1 {
                    m.rneg()
                } else {
                    m
                }
            })
            .collect()
    }

    /// `a*x - b*y` columnwise.
    fn combine(a: &R, x: &[R], b: &R, y: &[R]) -> Vec<R> {
        x.iter().zip(y).map(|(xi, yi)| a.rmul(xi).rsub(&b.rmul(yi))).collect()
    }

    fn scaled(z: Vec<R>, negate: bool) -> Vec<R> {
        if negate {
            z.into_iter().map(|x| x.rneg()).collect()
        } else {
            z
        }
    }

    fn nonzero(det: &R, what: &str) -> Result<()> {
        if det.is_exact_zero() {
            Err(Error::SingularPivot(what.to_string()))
        } else {
            Ok(())
        }
    }

    fn apply(&self, f: QuasiAuto) -> Result<Cols<R>> {
        let (k, n) = (self.ctx.k as i64, self.ctx.n as i64);
        let d = self.ctx.d as i64;
        let residue = |l: i64, i: i64| (l - i).rem_euclid(d) == 0;
        Ok(match f {
            QuasiAuto::Rho => (1..=n).map(|l| self.ext(l + 1)).collect(),
            QuasiAuto::RhoInv => (1..=n).map(|l| self.ext(l - 1)).collect(),
            QuasiAuto::Theta => {
                let negate = (k * (k - 1) / 2) % 2 == 1;
                (1..=n).map(|l| Self::scaled(self.ext(n + 1 - l), negate)).collect()
            }
            QuasiAuto::Tau => (1..=n)
                .map(|i| {
                    let negate = i <= k - 1 && (i * (k - i)) % 2 == 1;
                    Self::scaled(self.cross(&self.span(i - k + 1, i - 1)), negate)
                })
                .collect(),
            QuasiAuto::TauInv => (1..=n).map(|i| self.cross(&self.span(i + 1, i + k - 1))).collect(),
            QuasiAuto::Sigma(i) => {
                let i = i as i64;
                let mut out = Vec::with_capacity(n as usize);
                for l in 1..=n {
                    if residue(l, i) {
                        out.push(self.ext(l + 1));
                    } else if residue(l, i + 1) {
                        let a = l - 1;
                        let mut num_cols = vec![self.ext(a)];
                        num_cols.extend(self.span(a + 2, a + k));
                        let num = self.det(&num_cols);
                        let den = self.det(&self.span(a + 1, a + k));
                        Self::nonzero(&den, "braid denominator")?;
                        out.push(Self::combine(&num, &self.ext(a + 1), &den, &self.ext(a)));
                    } else {
                        out.push(self.ext(l));
                    }
                }
                out
            }
            QuasiAuto::SigmaInv(i) => {
                let i = i as i64;
                let mut out = Vec::with_capacity(n as usize);
                for l in 1..=n {
                    if residue(l, i) {
                        let base = self.span(l - k + 1, l - 1);
                        let mut with_next = base.clone();
                        with_next.push(self.ext(l + 1));
                        let mut with_self = base;
                        with_self.push(self.ext(l));
                        let num = self.det(&with_next);
                        let den = self.det(&with_self);
                        Self::nonzero(&den, "inverse braid denominator")?;
                        out.push(Self::combine(&num, &self.ext(l), &den, &self.ext(l + 1)));
                    } else if residue(l, i + 1) {
                        out.push(self.ext(l - 1));
                    } else {
                        out.push(self.ext(l));
                    }
                }
                out
            }
        })
    }
}

fn apply_columns<R: Ring>(ctx: &GrContext, rctx: R::Ctx, cols: &[Vec<R>], f: QuasiAuto) -> Result<Cols<R>> {
    f.validate(ctx)?;
    MapEval { ctx, rctx, cols }.apply(f)
}

/// Applies `f` as a map on `k x n` matrices (columns `z_1..z_n`).
///
/// Braid maps use the denominator-cleared form: only the replaced column
/// carries the cleared determinant.
pub fn apply_quasi_auto(m: &LMatrix, f: QuasiAuto, ctx: &GrContext) -> Result<LMatrix> {
    if m.rows != ctx.k || m.cols != ctx.n {
        return Err(Error::ShapeMismatch(format!("expected {}x{}, got {}x{}", ctx.k, ctx.n, m.rows, m.cols)));
    }
    let out = apply_columns(ctx, (), &m.columns(), f)?;
    LMatrix::from_columns(&out)
}

fn minor_of<R: Ring>(rctx: R::Ctx, cols: &[Vec<R>], set: &[usize]) -> R {
    let refs: Vec<&[R]> = set.iter().map(|&c| cols[c - 1].as_slice()).collect();
    det_columns(rctx, &refs)
}

/// Initial ŷ at an active node, evaluated on `m`, as (numerator, denominator).
pub fn yhat_value(m: &LMatrix, ctx: &GrContext, node: Node) -> Result<(LaurentPoly, LaurentPoly)> {
    let (a, b) = node;
    if a == 0 || b == 0 || a >= ctx.n - ctx.k || b >= ctx.k {
        return Err(Error::ShapeMismatch(format!("({a},{b}) is not an active node")));
    }
    let cols = m.columns();
    let (num, den) = ctx.yhat_sets(node);
    let product = |sets: &[Vec<usize>]| -> Result<LaurentPoly> {
        let mut acc = LaurentPoly::one();
        for s in sets {
            let p = minor_of((), &cols, s);
            if p.is_zero() {
                return Err(Error::SingularPivot(format!("Plücker minor {s:?} vanishes")));
            }
            acc = &acc * &p;
        }
        Ok(acc)
    };
    Ok((product(&num)?, product(&den)?))
}

/// Tropical values of all initial ŷ on the matrix with columns `cols`.
fn read_yhat<R: Ring>(ctx: &GrContext, rctx: R::Ctx, cols: &[Vec<R>], conv: Convention) -> Result<TropPoint> {
    let mut vals = Vec::with_capacity(ctx.pluckers.len());
    for set in &ctx.pluckers {
        let p = minor_of(rctx, cols, set);
        if p.is_exact_zero() {
            return Err(Error::SingularPivot(format!("Plücker minor {set:?} vanishes")));
        }
        vals.push(p.trop(conv)?);
    }
    Ok(ctx
        .yhat
        .iter()
        .map(|(num, den)| num.iter().map(|&i| vals[i]).sum::<i64>() - den.iter().map(|&i| vals[i]).sum::<i64>())
        .collect())
}

fn evaluate<R: Ring>(ctx: &GrContext, rctx: R::Ctx, f: QuasiAuto, v: &[i64], conv: Convention) -> Result<TropPoint> {
    let web: Cols<R> = web_columns(ctx, v)
        .iter()
        .map(|c| c.iter().map(|p| R::from_poly(rctx, p)).collect())
        .collect();
    let image = apply_columns(ctx, rctx, &web, f.inverse())?;
    read_yhat(ctx, rctx, &image, conv)
}

/// `Q^±_f(v)` with exact Laurent polynomials throughout.
pub fn trop_q_exact(ctx: &GrContext, f: QuasiAuto, v: &[i64], conv: Convention) -> Result<TropPoint> {
    ctx.check_point(v)?;
    evaluate::<LaurentPoly>(ctx, (), f, v, conv)
}

const CAPS: [usize; 4] = [6, 24, 96, 384];

/// `Q^±_f(v)`.
///
/// Evaluates with truncated leading-term series, doubling precision on loss
/// and falling back to exact polynomials. The min convention uses
/// `Q^-_f(v) = -Q^+_f(-v)`, which is the substitution `t -> 1/t`.
pub fn trop_q(ctx: &GrContext, f: QuasiAuto, v: &[i64], conv: Convention) -> Result<TropPoint> {
    ctx.check_point(v)?;
    f.validate(ctx)?;
    if conv == Convention::Min {
        let neg: Vec<i64> = v.iter().map(|x| -x).collect();
        return Ok(trop_q(ctx, f, &neg, Convention::Max)?.into_iter().map(|x| -x).collect());
    }
    for cap in CAPS {
        match evaluate::<TopSeries>(ctx, cap, f, v, Convention::Max) {
            Err(Error::PrecisionLoss) => continue,
            other => return other,
        }
    }
    evaluate::<LaurentPoly>(ctx, (), f, v, Convention::Max)
}

/// Applies the maps in order: `maps[0]` first.
pub fn trop_q_seq(ctx: &GrContext, maps: &[QuasiAuto], v: &[i64], conv: Convention) -> Result<TropPoint> {
    let mut cur = v.to_vec();
    for &f in maps {
        cur = trop_q(ctx, f, &cur, conv)?;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contexts() {
        let g = GrContext::new(3, 6).unwrap();
        assert_eq!((g.d, g.m), (3, 4));
        assert_eq!(g.plucker((1, 1)), vec![1, 2, 4]);
        assert_eq!(g.plucker((1, 2)), vec![1, 3, 4]);
        assert_eq!(g.plucker((2, 1)), vec![1, 2, 5]);
        assert_eq!(g.plucker((2, 2)), vec![1, 4, 5]);
        assert_eq!(g.plucker((3, 3)), vec![4, 5, 6]);
        assert!(GrContext::new(3, 4).is_err());
        let (num, den) = g.yhat_sets((1, 1));
        assert_eq!(num, vec![vec![1, 2, 3], vec![1, 4, 5]]);
        let mut den = den;
        den.sort();
        assert_eq!(den, vec![vec![1, 2, 5], vec![1, 3, 4]]);
    }

    #[test]
    fn parse_maps() {
        for s in ["rho", "rho-inv", "theta", "tau", "tau-inv", "sigma:2", "sigma-inv:1"] {
            assert_eq!(s.parse::<QuasiAuto>().unwrap().to_string(), s);
        }
        assert!("sigma".parse::<QuasiAuto>().is_err());
        assert!("sigma:x".parse::<QuasiAuto>().is_err());
    }

    #[test]
    fn web_matrix_shape() {
        let g = GrContext::new(3, 6).unwrap();
        let w = web_matrix(&g, &[0, 0, 0, 0]).unwrap();
        for j in 3..6 {
            assert_eq!(w.get(2, j), &LaurentPoly::one());
        }
        assert_eq!(w.get(1, 3), &LaurentPoly::constant(-1));
        assert_eq!(crate::exact_arith::lmat_det(&w, &[0, 1, 2], &[0, 1, 2]).unwrap(), LaurentPoly::one());
    }
}
