//! Labelled seeds with tracked C- and G-matrices, tropical mutation of
//! ŷ-coordinates, and the tropical duality identities.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::Convention;

pub type IntMatrix = Vec<Vec<i64>>;

/// Integer vector of tropical coordinates or a (truncated) g-vector.
pub type TropPoint = Vec<i64>;

fn pos(x: i64) -> i64 {
    x.max(0)
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn transpose(m: &IntMatrix) -> IntMatrix {
    let r = m.len();
    let c = m.first().map_or(0, |x| x.len());
    (0..c).map(|j| (0..r).map(|i| m[i][j]).collect()).collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let c = b.first().map_or(0, |x| x.len());
    a.iter()
        .map(|row| (0..c).map(|j| (0..inner).map(|t| row[t] * b[t][j]).sum()).collect())
        .collect()
}

/// Column `j` of `m`.
pub fn column(m: &IntMatrix, j: usize) -> Vec<i64> {
    m.iter().map(|row| row[j]).collect()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn int_det(m: &IntMatrix) -> i128 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    if n == 0 {
        1
    } else {
        sign * a[n - 1][n - 1]
    }
}

/// Inverse of a unimodular integer matrix, `None` when the determinant is not ±1.
pub fn int_inverse(m: &IntMatrix) -> Option<IntMatrix> {
    let n = m.len();
    let d = int_det(m);
    if d != 1 && d != -1 {
        return None;
    }
    let minor = |r: usize, c: usize| -> IntMatrix {
        m.iter()
            .enumerate()
            .filter(|(i, _)| *i != r)
            .map(|(_, row)| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, &x)| x).collect())
            .collect()
    };
    let mut inv = vec![vec![0i64; n]; n];
    for (i, row) in inv.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            *slot = (sign * int_det(&minor(j, i)) * d) as i64;
        }
    }
    Some(inv)
}

/// Square skew-symmetrizable exchange matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExchangeMatrix {
    b: IntMatrix,
}

impl ExchangeMatrix {
    /// Validates squareness and skew-symmetrizability with symmetrizer
    /// entries in `1..=6`.
    pub fn new(b: IntMatrix) -> Result<Self> {
        let n = b.len();
        if b.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch("exchange matrix must be square".into()));
        }
        let m = ExchangeMatrix { b };
        if m.symmetrizer().is_none() {
            return Err(Error::NotSkewSymmetrizable);
        }
        Ok(m)
    }

    pub fn rank(&self) -> usize {
        self.b.len()
    }

    /// Entry `b_ij` with 0-based indices.
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.b[i][j]
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.b
    }

    /// A positive diagonal `d` with `d_i b_ij = -d_j b_ji`, entries at most 6.
    pub fn symmetrizer(&self) -> Option<Vec<i64>> {
        let n = self.rank();
        for i in 0..n {
            if self.b[i][i] != 0 {
                return None;
            }
            for j in 0..n {
                let (x, y) = (self.b[i][j], self.b[j][i]);
                if (x == 0) != (y == 0) || x.signum() == y.signum() && x != 0 {
                    return None;
                }
            }
        }
        // Ratios d_j / d_i = -b_ij / b_ji propagate along each component.
        let mut ratio: Vec<Option<(i64, i64)>> = vec![None; n];
        let mut d = vec![0i64; n];
        for root in 0..n {
            if ratio[root].is_some() {
                continue;
            }
            ratio[root] = Some((1, 1));
            let mut comp = vec![root];
            let mut stack = vec![root];
            while let Some(i) = stack.pop() {
                let (pi, qi) = ratio[i].unwrap();
                for j in 0..n {
                    if self.b[i][j] == 0 {
                        continue;
                    }
                    let (pj, qj) = (pi * -self.b[i][j], qi * self.b[j][i]);
                    let (pj, qj) = reduce_frac(pj, qj);
                    match ratio[j] {
                        None => {
                            ratio[j] = Some((pj, qj));
                            comp.push(j);
                            stack.push(j);
                        }
                        Some((a, b)) if a * qj != b * pj => return None,
                        _ => {}
                    }
                }
            }
            let l = comp.iter().fold(1i64, |acc, &j| lcm(acc, ratio[j].unwrap().1));
            let g = comp.iter().fold(0i64, |acc, &j| gcd(acc, ratio[j].unwrap().0 * l / ratio[j].unwrap().1));
            for &j in &comp {
                let (p, q) = ratio[j].unwrap();
                d[j] = p * l / q / g;
                if !(1..=6).contains(&d[j]) {
                    return None;
                }
            }
        }
        Some(d)
    }

    /// `B^op = -B`.
    pub fn op(&self) -> Self {
        ExchangeMatrix { b: self.b.iter().map(|r| r.iter().map(|x| -x).collect()).collect() }
    }

    /// `B^∨ = -Bᵀ`.
    pub fn dual(&self) -> Self {
        ExchangeMatrix { b: transpose(&self.b).into_iter().map(|r| r.into_iter().map(|x| -x).collect()).collect() }
    }

    /// `B^{op,∨} = Bᵀ`.
    pub fn op_dual(&self) -> Self {
        self.op().dual()
    }

    fn check_node(&self, k: usize) -> Result<usize> {
        if k == 0 || k > self.rank() {
            Err(Error::NodeOutOfRange { node: k, rank: self.rank() })
        } else {
            Ok(k - 1)
        }
    }

    /// Matrix mutation at the 1-based node `k`.
    pub fn mutate(&self, k: usize) -> Result<Self> {
        let k = self.check_node(k)?;
        let n = self.rank();
        let b = &self.b;
        let mut out = b.clone();
        for i in 0..n {
            for j in 0..n {
                out[i][j] = if i == k || j == k {
                    -b[i][j]
                } else {
                    b[i][j] + b[i][k].signum() * pos(b[i][k] * b[k][j])
                };
            }
        }
        Ok(ExchangeMatrix { b: out })
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

fn reduce_frac(p: i64, q: i64) -> (i64, i64) {
    let g = gcd(p, q).max(1);
    let s = if q < 0 { -1 } else { 1 };
    (s * p / g, s * q / g)
}

/// Labelled seed with its C- and G-matrices relative to a reference vertex.
/// Columns of `c` are c-vectors and columns of `g` are g-vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seed {
    pub b: ExchangeMatrix,
    pub c: IntMatrix,
    pub g: IntMatrix,
    /// Mutation word from the reference vertex, immediate backtracks cancelled.
    pub label: Vec<usize>,
}

impl Seed {
    /// The reference vertex itself.
    pub fn initial(b: ExchangeMatrix) -> Self {
        let n = b.rank();
        Seed { b, c: identity(n), g: identity(n), label: Vec::new() }
    }

    /// Seed reached from the reference vertex along `word`.
    pub fn along(b0: &ExchangeMatrix, word: &[usize]) -> Result<Self> {
        let mut s = Seed::initial(b0.clone());
        for &k in word {
            s = mutate_seed(&s, k, b0)?;
        }
        Ok(s)
    }
}

/// New g-vector at node `k` using the `[b]_+` form of the mutation rule (first)
/// and the `[-b]_+` form (second).
pub fn g_mutation_forms(s: &Seed, k: usize, b0: &ExchangeMatrix) -> Result<(Vec<i64>, Vec<i64>)> {
    let kk = s.b.check_node(k)?;
    let n = s.b.rank();
    let mut plus = vec![0i64; n];
    let mut minus = vec![0i64; n];
    for r in 0..n {
        let gk = s.g[r][kk];
        let mut a = -gk;
        let mut b = -gk;
        for i in 0..n {
            a += pos(s.b.get(i, kk)) * s.g[r][i];
            b += pos(-s.b.get(i, kk)) * s.g[r][i];
        }
        for j in 0..n {
            a -= pos(s.c[j][kk]) * b0.get(r, j);
            b -= pos(-s.c[j][kk]) * b0.get(r, j);
        }
        plus[r] = a;
        minus[r] = b;
    }
    Ok((plus, minus))
}

/// Mutates `s` at the 1-based node `k`; `reference_b0` is the exchange
/// matrix at the reference vertex.
pub fn mutate_seed(s: &Seed, k: usize, reference_b0: &ExchangeMatrix) -> Result<Seed> {
    let b = s.b.mutate(k)?;
    let kk = k - 1;
    let n = s.b.rank();
    if reference_b0.rank() != n {
        return Err(Error::LengthMismatch { expected: n, got: reference_b0.rank() });
    }
    let mut c = s.c.clone();
    for i in 0..n {
        for j in 0..n {
            c[i][j] = if j == kk {
                -s.c[i][j]
            } else {
                s.c[i][j] + s.c[i][kk].signum() * pos(s.c[i][kk] * s.b.get(kk, j))
            };
        }
    }
    let (gk, gk_alt) = g_mutation_forms(s, k, reference_b0)?;
    debug_assert_eq!(gk, gk_alt);
    let mut g = s.g.clone();
    for r in 0..n {
        g[r][kk] = gk[r];
    }
    let mut label = s.label.clone();
    if label.last() == Some(&k) {
        label.pop();
    } else {
        label.push(k);
    }
    Ok(Seed { b, c, g, label })
}

/// One tropical mutation step at the 1-based node `k`.
///
/// Under `Max`: `v'_k = -v_k`, `v'_j = v_j + [b_jk]_+ v_k - b_jk min(v_k, 0)`.
/// Under `Min` the same rule is applied to `B^op`. For the max convention this
/// is also the change of g-vectors under mutation of the initial vertex.
pub fn trop_step(v: &[i64], b: &ExchangeMatrix, k: usize, conv: Convention) -> Result<TropPoint> {
    let kk = b.check_node(k)?;
    if v.len() != b.rank() {
        return Err(Error::LengthMismatch { expected: b.rank(), got: v.len() });
    }
    let vk = v[kk];
    Ok(v
        .iter()
        .enumerate()
        .map(|(j, &vj)| {
            if j == kk {
                return -vk;
            }
            let bjk = match conv {
                Convention::Max => b.get(j, kk),
                Convention::Min => -b.get(j, kk),
            };
            vj + pos(bjk) * vk - bjk * vk.min(0)
        })
        .collect())
}

/// Tropicalisation of the ŷ-mutation of `b` itself at node `k`:
/// `v'_j = v_j + [b_kj]_+ v_k - b_kj max(v_k, 0)` (max) or with `min` (min).
pub fn yhat_trop_step(v: &[i64], b: &ExchangeMatrix, k: usize, conv: Convention) -> Result<TropPoint> {
    let kk = b.check_node(k)?;
    if v.len() != b.rank() {
        return Err(Error::LengthMismatch { expected: b.rank(), got: v.len() });
    }
    let vk = v[kk];
    let edge = match conv {
        Convention::Max => vk.max(0),
        Convention::Min => vk.min(0),
    };
    Ok(v
        .iter()
        .enumerate()
        .map(|(j, &vj)| if j == kk { -vk } else { vj + pos(b.get(kk, j)) * vk - b.get(kk, j) * edge })
        .collect())
}

/// Change of a g-vector when the initial vertex is mutated at `k`.
pub fn gvector_coordinate_change(g: &[i64], b: &ExchangeMatrix, k: usize) -> Result<TropPoint> {
    trop_step(g, b, k, Convention::Max)
}

/// Applies [`trop_step`] along `word`, mutating the carried matrix as it goes.
pub fn trop_compose(v: &[i64], b0: &ExchangeMatrix, word: &[usize], conv: Convention) -> Result<TropPoint> {
    let mut v = v.to_vec();
    let mut b = b0.clone();
    for &k in word {
        v = trop_step(&v, &b, k, conv)?;
        b = b.mutate(k)?;
    }
    Ok(v)
}

/// One identity checked by [`check_tropical_duality`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityCheck {
    pub name: String,
    pub pass: bool,
    pub lhs: IntMatrix,
    pub rhs: IntMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub checks: Vec<DualityCheck>,
}

impl DualityReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// `C` matrix of the reference vertex seen from the seed `s` (mutating back along its label).
fn c_back_to_reference(s: &Seed) -> Result<IntMatrix> {
    let word: Vec<usize> = s.label.iter().rev().copied().collect();
    Ok(Seed::along(&s.b, &word)?.c)
}

/// Checks `Gᵀ = (C^∨)^{-1}` for the four dual pairs and `C_{t,t0} = (C^op_{t0,t})^{-1}`
/// for the plain and dual seeds.
pub fn check_tropical_duality(s: &Seed, s_dual: &Seed, s_op: &Seed, s_opdual: &Seed) -> DualityReport {
    let mut checks = Vec::new();
    let n = s.b.rank();
    let id = identity(n);
    let pairs = [
        ("G^T C_dual = 1", s, s_dual),
        ("G_dual^T C = 1", s_dual, s),
        ("G_op^T C_opdual = 1", s_op, s_opdual),
        ("G_opdual^T C_op = 1", s_opdual, s_op),
    ];
    for (name, a, b) in pairs {
        let lhs = mat_mul(&transpose(&a.g), &b.c);
        checks.push(DualityCheck { name: name.into(), pass: lhs == id, lhs, rhs: id.clone() });
    }
    let back = [("C C_op(back) = 1", s, s_op), ("C_dual C_opdual(back) = 1", s_dual, s_opdual)];
    for (name, a, b) in back {
        match c_back_to_reference(b) {
            Ok(cb) => {
                let lhs = mat_mul(&a.c, &cb);
                checks.push(DualityCheck { name: name.into(), pass: lhs == id, lhs, rhs: id.clone() });
            }
            Err(_) => checks.push(DualityCheck { name: name.into(), pass: false, lhs: Vec::new(), rhs: id.clone() }),
        }
    }
    DualityReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> ExchangeMatrix {
        ExchangeMatrix::new(vec![vec![0, 2], vec![-1, 0]]).unwrap()
    }

    #[test]
    fn c2_first_mutation() {
        let b0 = c2();
        let s1 = mutate_seed(&Seed::initial(b0.clone()), 1, &b0).unwrap();
        assert_eq!(s1.b.matrix(), &vec![vec![0, -2], vec![1, 0]]);
        assert_eq!(s1.c, vec![vec![-1, 2], vec![0, 1]]);
        assert_eq!(s1.g, vec![vec![-1, 0], vec![1, 1]]);
        let s2 = mutate_seed(&s1, 2, &b0).unwrap();
        assert_eq!(s2.g, vec![vec![-1, -2], vec![1, 1]]);
        assert_eq!(mutate_seed(&s1, 1, &b0).unwrap(), Seed::initial(b0));
    }

    #[test]
    fn out_of_range() {
        let b0 = c2();
        assert_eq!(
            mutate_seed(&Seed::initial(b0.clone()), 3, &b0),
            Err(Error::NodeOutOfRange { node: 3, rank: 2 })
        );
        assert!(trop_step(&[0, 0], &b0, 0, Convention::Max).is_err());
    }

    #[test]
    fn b2_dual_example() {
        // ŷ of B2 is the dual data of C2.
        let v = trop_step(&[2, 5], &c2(), 1, Convention::Max).unwrap();
        assert_eq!(v, vec![-2, 5]);
        for v1 in -4..=4 {
            let v = trop_step(&[v1, 3], &c2(), 1, Convention::Max).unwrap();
            assert_eq!(v, vec![-v1, v1 + 3 - v1.max(0)]);
        }
        assert_eq!(trop_step(&[0, 0], &c2(), 2, Convention::Min).unwrap(), vec![0, 0]);
    }

    #[test]
    fn symmetrizers() {
        assert_eq!(c2().symmetrizer(), Some(vec![1, 2]));
        assert!(ExchangeMatrix::new(vec![vec![0, 1], vec![1, 0]]).is_err());
        assert!(ExchangeMatrix::new(vec![vec![0, 7], vec![-1, 0]]).is_err());
        let a3 = ExchangeMatrix::new(vec![vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 0]]).unwrap();
        assert_eq!(a3.symmetrizer(), Some(vec![1, 1, 1]));
    }

    #[test]
    fn unimodular_inverse() {
        let m = vec![vec![-1, 2], vec![0, 1]];
        let inv = int_inverse(&m).unwrap();
        assert_eq!(mat_mul(&m, &inv), identity(2));
        assert!(int_inverse(&vec![vec![2, 0], vec![0, 1]]).is_none());
    }
}
