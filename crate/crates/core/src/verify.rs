//! Acceptance checks against the reference fixtures.
//!
//! Each criterion returns a [`CriterionResult`] with the number of individual
//! comparisons, the first few failures and the wall time against its budget.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cluster_core::{column, ExchangeMatrix, IntMatrix, Seed, TropPoint};
use crate::dynamics::{
    act_on_tableau, braid_orbit, classify_stability, distinct_points, find_fixed_points, fixed_tableaux,
    reflect_via_evacuation, totient_closed_form, totient_profile, Stability, StabilityConfig,
};
use crate::error::Result;
use crate::exact_arith::{Convention, LMatrix, LaurentPoly};
use crate::fixtures::{Fixtures, Rank2Table};
use crate::grassmannian::{apply_quasi_auto, trop_q, trop_q_seq, web_matrix, yhat_value, GrContext, QuasiAuto};
use crate::tableaux::{degree, gvector_to_tableau, tableau_to_gvector, Tableau};
use crate::tropexpr::{grassmannian_assignment, indexed_assignment, parse_sfexpr, trop_eval, MapFixture};

const KEPT_FAILURES: usize = 12;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub checks: usize,
    pub failed: usize,
    /// First few failure descriptions.
    pub failures: Vec<String>,
    pub elapsed_secs: f64,
    pub budget_secs: f64,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} {}: {} ({} checks, {} failed, {:.2}s of {:.0}s)",
            self.id,
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.checks,
            self.failed,
            self.elapsed_secs,
            self.budget_secs
        )
    }
}

/// `(id, name, budget in seconds)`.
pub const CRITERIA: [(usize, &str, u64); 11] = [
    (1, "rank-2 tables", 1),
    (2, "tropical transport", 10),
    (3, "Gr(3,6) dictionary", 5),
    (4, "Gr(3,6) braid table", 10),
    (5, "oracle equivalence", 120),
    (6, "fixed-point catalogues", 600),
    (7, "stable points", 300),
    (8, "relation suites", 60),
    (9, "totient counts", 900),
    (10, "conjecture reports", 60),
    (11, "property suites", 300),
];

#[derive(Default)]
struct Tally {
    checks: usize,
    failed: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) -> bool {
        self.checks += 1;
        if !ok {
            self.fail(what());
        }
        ok
    }

    fn eq<T: PartialEq + fmt::Debug>(&mut self, got: &T, want: &T, what: impl FnOnce() -> String) -> bool {
        self.check(got == want, || format!("{}: got {got:?}, expected {want:?}", what()))
    }

    fn fail(&mut self, msg: String) {
        self.failed += 1;
        if self.failures.len() < KEPT_FAILURES {
            self.failures.push(msg);
        }
    }

    fn ok<T>(&mut self, r: Result<T>, what: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(x) => Some(x),
            Err(e) => {
                self.checks += 1;
                self.fail(format!("{}: {e}", what()));
                None
            }
        }
    }
}

/// Runs one criterion. Random samples are drawn from streams derived from `rng_seed`.
pub fn run(id: usize, fx: &Fixtures, rng_seed: u64) -> Option<CriterionResult> {
    let &(_, name, budget) = CRITERIA.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let mut t = Tally::default();
    match id {
        1 => rank2_tables(fx, &mut t),
        2 => transport(fx, &mut t, rng(rng_seed, 2)),
        3 => gr36_dictionary(fx, &mut t),
        4 => gr36_braid_table(fx, &mut t),
        5 => oracle_equivalence(fx, &mut t, rng(rng_seed, 5)),
        6 => catalogues(fx, &mut t, rng_seed),
        7 => stable_points(fx, &mut t, rng_seed),
        8 => relation_suites(fx, &mut t),
        9 => totients(fx, &mut t),
        10 => conjectures(fx, &mut t, rng(rng_seed, 10)),
        11 => properties(&mut t, rng(rng_seed, 11)),
        _ => unreachable!(),
    }
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(budget);
    if elapsed > budget {
        t.fail(format!("took {:.1}s, budget {}s", elapsed.as_secs_f64(), budget.as_secs()));
    }
    Some(CriterionResult {
        id,
        name,
        pass: t.failed == 0 && t.checks > 0,
        checks: t.checks,
        failed: t.failed,
        failures: t.failures,
        elapsed_secs: elapsed.as_secs_f64(),
        budget_secs: budget.as_secs_f64(),
    })
}

pub fn run_all(fx: &Fixtures, rng_seed: u64) -> Vec<CriterionResult> {
    CRITERIA.iter().filter_map(|c| run(c.0, fx, rng_seed)).collect()
}

pub fn random_point(rng: &mut impl Rng, m: usize, range: i64) -> TropPoint {
    (0..m).map(|_| rng.gen_range(-range..=range)).collect()
}

/// Union of `1..=max_cols` uniformly chosen `k`-subsets of `[n]`.
pub fn random_tableau(rng: &mut impl Rng, k: usize, n: usize, max_cols: usize) -> Tableau {
    let r = rng.gen_range(1..=max_cols);
    let cols: Vec<Vec<usize>> = (0..r)
        .map(|_| {
            let mut c: Vec<usize> = sample(rng, n, k).into_iter().map(|i| i + 1).collect();
            c.sort_unstable();
            c
        })
        .collect();
    Tableau::union_of_columns(k, n, &cols).expect("k-subsets form a semistandard tableau")
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn ctx(k: usize, n: usize) -> GrContext {
    GrContext::new(k, n).expect("fixture contexts are valid")
}

fn neg(v: &[i64]) -> TropPoint {
    v.iter().map(|x| -x).collect()
}

fn neg_rev(v: &[i64]) -> TropPoint {
    v.iter().rev().map(|x| -x).collect()
}

fn add(a: &[i64], b: &[i64]) -> TropPoint {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn scale(c: i64, v: &[i64]) -> TropPoint {
    v.iter().map(|x| c * x).collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn rank2_tables(fx: &Fixtures, t: &mut Tally) {
    for table in &fx.rank2 {
        let Some(b0) = t.ok(ExchangeMatrix::new(table.rows[0].b.clone()), || format!("{} B_t0", table.table)) else {
            continue;
        };
        let Some(b1) = t.ok(b0.mutate(1), || format!("{} B_t1", table.table)) else { continue };
        for row in &table.rows {
            let what = |field: &str| format!("{} t={} {field}", table.table, row.t);
            if let Some(s) = t.ok(Seed::along(&b0, &Rank2Table::word_from_t0(row.t)), || what("from t0")) {
                t.eq(s.b.matrix(), &row.b, || what("B"));
                t.eq(&s.c, &row.c_t0, || what("C_t0"));
                t.eq(&s.g, &row.g_t0, || what("G_t0"));
            }
            if let Some(s) = t.ok(Seed::along(&b1, &Rank2Table::word_from_t1(row.t)), || what("from t1")) {
                t.eq(&s.c, &row.c_t1, || what("C_t1"));
                t.eq(&s.g, &row.g_t1, || what("G_t1"));
            }
        }
    }
}

fn words(max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for k in [1, 2] {
                let mut w2: Vec<usize> = w.clone();
                w2.push(k);
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn yhat_compose(v: &[i64], b0: &ExchangeMatrix, word: &[usize], conv: Convention) -> Result<TropPoint> {
    let mut v = v.to_vec();
    let mut b = b0.clone();
    for &k in word {
        v = crate::cluster_core::yhat_trop_step(&v, &b, k, conv)?;
        b = b.mutate(k)?;
    }
    Ok(v)
}

fn g_after(b: &ExchangeMatrix, back: &[usize], to_s: &[usize]) -> Result<IntMatrix> {
    let word: Vec<usize> = back.iter().chain(to_s).copied().collect();
    Ok(Seed::along(b, &word)?.g)
}

fn transport(fx: &Fixtures, t: &mut Tally, mut rng: ChaCha8Rng) {
    let all_words = words(8);
    for name in ["c2", "b2", "a2"] {
        let Some(table) = fx.rank2_table(name) else {
            t.fail(format!("missing table {name}"));
            continue;
        };
        let Some(b0) = t.ok(ExchangeMatrix::new(table.rows[0].b.clone()), || format!("{name} B_t0")) else {
            continue;
        };
        let seeds: Vec<Vec<usize>> = table.rows.iter().map(|r| Rank2Table::word_from_t0(r.t)).collect();
        let mut g_t0 = Vec::new();
        let mut g_t0_op = Vec::new();
        for u in &seeds {
            g_t0.push(g_after(&b0, &[], u));
            g_t0_op.push(g_after(&b0.op(), &[], u));
        }
        for w in &all_words {
            let Some(bt) = t.ok(Seed::along(&b0, w).map(|s| s.b), || format!("{name} {w:?}")) else { continue };
            let back: Vec<usize> = w.iter().rev().copied().collect();
            for (u, (g0, g0op)) in seeds.iter().zip(g_t0.iter().zip(&g_t0_op)) {
                let (Ok(g0), Ok(g0op)) = (g0, g0op) else { continue };
                let targets = [
                    (Convention::Max, g0, g_after(&bt, &back, u)),
                    (Convention::Min, g0op, g_after(&bt.op(), &back, u)),
                ];
                for (conv, src, target) in targets {
                    let Some(target) = t.ok(target, || format!("{name} {w:?} {u:?}")) else { continue };
                    for l in 0..2 {
                        let got = crate::cluster_core::trop_compose(&column(src, l), &b0, w, conv);
                        if let Some(got) = t.ok(got, || format!("{name} {w:?}")) {
                            t.eq(&got, &column(&target, l), || format!("{name} {conv} w={w:?} seed {u:?} col {l}"));
                        }
                    }
                }
            }
            for conv in [Convention::Max, Convention::Min] {
                let v = random_point(&mut rng, 2, 12);
                let a = crate::cluster_core::trop_compose(&v, &b0, w, conv);
                let b = yhat_compose(&v, &b0.dual(), w, conv);
                if let (Some(a), Some(b)) = (t.ok(a, || format!("{name} {w:?}")), t.ok(b, || format!("{name} {w:?}"))) {
                    t.eq(&a, &b, || format!("{name} {conv} w={w:?} v={v:?} dual y-hat route"));
                }
            }
        }
        for row in &table.rows {
            let exprs: Vec<_> = row.yhat.iter().map(|s| parse_sfexpr(s)).collect();
            for _ in 0..20 {
                let v = random_point(&mut rng, 2, 12);
                for conv in [Convention::Max, Convention::Min] {
                    let want = yhat_compose(&v, &b0, &Rank2Table::word_from_t0(row.t), conv);
                    let Some(want) = t.ok(want, || format!("{name} t={}", row.t)) else { continue };
                    for (j, e) in exprs.iter().enumerate() {
                        let got = match e {
                            Ok(e) => trop_eval(e, &indexed_assignment(&v), conv),
                            Err(err) => Err(err.clone()),
                        };
                        if let Some(got) = t.ok(got, || format!("{name} t={} y-hat {}", row.t, j + 1)) {
                            t.eq(&got, &want[j], || format!("{name} t={} {conv} y-hat {} at {v:?}", row.t, j + 1));
                        }
                    }
                }
            }
        }
    }
}

fn tableau_of(k: usize, n: usize, cols: &[Vec<usize>]) -> Result<Tableau> {
    Tableau::from_cols(k, n, cols.to_vec())
}

fn gr36_dictionary(fx: &Fixtures, t: &mut Tally) {
    let g36 = ctx(3, 6);
    let tab = &fx.gr36;
    let mut by_tableau: BTreeMap<Vec<Vec<usize>>, &crate::fixtures::DictionaryRow> = BTreeMap::new();
    for row in &tab.dictionary {
        let Some(tt) = t.ok(tableau_of(tab.k, tab.n, &row.cols), || row.name.clone()) else { continue };
        if let Some(g) = t.ok(tableau_to_gvector(&tt, &g36), || row.name.clone()) {
            t.eq(&g, &row.g, || format!("g({})", row.name));
        }
        by_tableau.insert(tt.cols().to_vec(), row);
    }
    let g_of = |name: &str| tab.dictionary.iter().find(|r| r.name == name).map(|r| r.g.clone());
    let e1 = vec![1, 0, 0, 0];
    let mut examples: Vec<(String, Result<TropPoint>, Option<TropPoint>)> = vec![
        ("Q+sigma1 g(P124)".into(), trop_q(&g36, QuasiAuto::Sigma(1), &e1, Convention::Max), g_of("P125")),
        ("Q+rho g(P124)".into(), trop_q(&g36, QuasiAuto::Rho, &e1, Convention::Max), g_of("P235")),
        ("Q+tau g(P124)".into(), trop_q(&g36, QuasiAuto::Tau, &e1, Convention::Max), g_of("P236")),
        ("-Q+theta g(P124)".into(), trop_q(&g36, QuasiAuto::Theta, &e1, Convention::Max).map(|v| neg(&v)), {
            tab.dictionary.iter().find(|r| r.name == "P356").map(|r| r.g_op.clone())
        }),
    ];
    if let Some(g135) = g_of("P135") {
        examples.push((
            "Q+sigma1 g(P135)".into(),
            trop_q(&g36, QuasiAuto::Sigma(1), &g135, Convention::Max),
            Some(vec![-1, 0, 0, 1]),
        ));
    }
    examples.push(("literal (0,0,1,0)".into(), Ok(vec![0, 0, 1, 0]), g_of("P125")));
    examples.push(("literal (-1,0,1,0)".into(), Ok(vec![-1, 0, 1, 0]), g_of("P235")));
    examples.push(("literal (-1,0,0,0)".into(), Ok(vec![-1, 0, 0, 0]), g_of("P236")));
    for (what, got, want) in examples {
        let Some(want) = want else {
            t.fail(format!("{what}: reference row missing"));
            continue;
        };
        if let Some(got) = t.ok(got, || what.clone()) {
            t.eq(&got, &want, || what);
        }
    }
    for row in &tab.dictionary {
        for conv in [Convention::Max, Convention::Min] {
            let got = trop_q_seq(&g36, &[QuasiAuto::Sigma(1); 4], &row.g, conv);
            if let Some(got) = t.ok(got, || row.name.clone()) {
                t.eq(&got, &row.g, || format!("(Q{conv} sigma1)^4 g({})", row.name));
            }
        }
        let reflected: Vec<Vec<usize>> = row
            .cols
            .iter()
            .map(|c| {
                let mut d: Vec<usize> = c.iter().map(|&x| tab.n + 1 - x).collect();
                d.sort_unstable();
                d
            })
            .collect();
        let Some(image) = t.ok(tableau_of(tab.k, tab.n, &reflected), || row.name.clone()) else { continue };
        let Some(target) = by_tableau.get(image.cols()) else {
            t.fail(format!("theta image of {} not in table", row.name));
            continue;
        };
        let a = trop_q(&g36, QuasiAuto::Theta, &row.g_op, Convention::Min).map(|v| neg(&v));
        if let Some(a) = t.ok(a, || row.name.clone()) {
            t.eq(&a, &target.g, || format!("-Q-theta g_op({}) = g({})", row.name, target.name));
        }
        let b = trop_q(&g36, QuasiAuto::Theta, &row.g, Convention::Max).map(|v| neg(&v));
        if let Some(b) = t.ok(b, || row.name.clone()) {
            t.eq(&b, &target.g_op, || format!("-Q+theta g({}) = g_op({})", row.name, target.name));
        }
    }
}

fn gr36_braid_table(fx: &Fixtures, t: &mut Tally) {
    let g36 = ctx(3, 6);
    let tab = &fx.gr36;
    for row in &tab.braid_images {
        let Some(src) = t.ok(tableau_of(tab.k, tab.n, &row.cols), || format!("{:?}", row.cols)) else {
            continue;
        };
        for (f, want) in [(QuasiAuto::Sigma(1), &row.sigma1), (QuasiAuto::Sigma(2), &row.sigma2)] {
            let Some(want) = t.ok(tableau_of(tab.k, tab.n, want), || format!("{want:?}")) else { continue };
            if let Some(got) = t.ok(act_on_tableau(f, &src, &g36), || format!("{f} {:?}", row.cols)) {
                t.eq(&got.cols().to_vec(), &want.cols().to_vec(), || format!("{f}({:?})", row.cols));
            }
        }
    }
}

fn oracle_equivalence(fx: &Fixtures, t: &mut Tally, mut rng: ChaCha8Rng) {
    for map in &fx.maps {
        let c = ctx(map.k, map.n);
        let Some(oracle) = t.ok(MapFixture::parse(&map.text), || map.name.clone()) else { continue };
        if !t.eq(&oracle.components.len(), &c.m, || format!("{} component count", map.name)) {
            continue;
        }
        for _ in 0..1000 {
            let v = random_point(&mut rng, c.m, 10);
            for conv in [Convention::Max, Convention::Min] {
                let got = trop_q(&c, map.q, &v, conv);
                let want = oracle.eval(&grassmannian_assignment(&c, &v), conv);
                if let (Some(got), Some(want)) =
                    (t.ok(got, || format!("{} at {v:?}", map.name)), t.ok(want, || format!("{} oracle", map.name)))
                {
                    t.eq(&got, &want, || format!("{} (Q = {}) {conv} at {v:?}", map.name, map.q));
                }
            }
        }
    }
}

type Rows = Vec<Vec<usize>>;

fn catalogues(fx: &Fixtures, t: &mut Tally, rng_seed: u64) {
    let cfg = StabilityConfig { rng_seed, ..StabilityConfig::default() };
    for cat in &fx.catalogues.fixed_points {
        let c = ctx(cat.k, cat.n);
        let label = format!("Gr({},{}) {} rank {}", cat.k, cat.n, cat.generator, cat.rank);
        let Some(found) = t.ok(find_fixed_points(&c, cat.generator, cat.rank, &cfg), || label.clone()) else {
            continue;
        };
        let got: BTreeSet<Rows> = found.iter().map(|r| r.tableau.rows()).collect();
        let want: BTreeSet<Rows> = cat.rows.iter().cloned().collect();
        t.eq(&got.len(), &want.len(), || format!("{label} count"));
        t.eq(&got, &want, || format!("{label} fixed tableaux"));
        let got_stable: BTreeSet<Rows> =
            found.iter().filter(|r| r.stability == Stability::Stable).map(|r| r.tableau.rows()).collect();
        let want_stable: BTreeSet<Rows> = cat.stable.iter().cloned().collect();
        t.eq(&got_stable, &want_stable, || format!("{label} stable"));
        for r in &found {
            t.check(r.stability != Stability::Inconclusive, || format!("{label} {:?} inconclusive", r.tableau.rows()));
        }
    }
}

fn stable_points(fx: &Fixtures, t: &mut Tally, rng_seed: u64) {
    let cfg = StabilityConfig { rng_seed, ..StabilityConfig::default() };
    let mut exhaustive: BTreeMap<(usize, usize, QuasiAuto, usize), BTreeSet<Rows>> = BTreeMap::new();
    for e in &fx.catalogues.stable {
        let c = ctx(e.k, e.n);
        let label = format!("Gr({},{}) {} {:?}", e.k, e.n, e.generator, e.rows);
        let Some(tt) = t.ok(Tableau::from_rows(e.k, e.n, &e.rows), || label.clone()) else { continue };
        let Some(g) = t.ok(tableau_to_gvector(&tt, &c), || label.clone()) else { continue };
        let fixed = trop_q(&c, e.generator, &g, Convention::Max);
        if let Some(fixed) = t.ok(fixed, || label.clone()) {
            t.eq(&fixed, &g, || format!("{label} fixed"));
        }
        if let Some(rep) = t.ok(classify_stability(&c, e.generator, &g, &cfg), || label.clone()) {
            t.eq(&rep.verdict, &Stability::Stable, || label.clone());
        }
        if matches!((e.k, e.n), (3, 9) | (4, 8)) {
            exhaustive.entry((e.k, e.n, e.generator, tt.ncols())).or_default().insert(e.rows.clone());
        }
    }
    // On Gr(3,9) and Gr(4,8) no other fixed tableau of the same rank is stable.
    for ((k, n, gen, rank), listed) in exhaustive {
        let c = ctx(k, n);
        let label = format!("Gr({k},{n}) {gen} rank {rank}");
        let Some(fixed) = t.ok(fixed_tableaux(&c, gen, rank), || label.clone()) else { continue };
        let mut stable = BTreeSet::new();
        for (tt, g) in fixed {
            if let Some(rep) = t.ok(classify_stability(&c, gen, &g, &cfg), || label.clone()) {
                if rep.verdict == Stability::Stable {
                    stable.insert(tt.rows());
                }
            }
        }
        t.eq(&stable, &listed, || format!("{label} stable set"));
    }
}

/// Rank of an integer matrix given by rows, by fraction-free elimination.
fn int_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][col] != 0) else { continue };
        m.swap(rank, p);
        for i in rank + 1..m.len() {
            let (a, b) = (m[rank][col], m[i][col]);
            if b == 0 {
                continue;
            }
            for j in 0..ncols {
                m[i][j] = a * m[i][j] - b * m[rank][j];
            }
            let g = m[i].iter().fold(0i128, |g, &x| {
                let (mut a, mut b) = (g.abs(), x.abs());
                while b != 0 {
                    (a, b) = (b, a % b);
                }
                a
            });
            if g > 1 {
                m[i].iter_mut().for_each(|x| *x /= g);
            }
        }
        rank += 1;
    }
    rank
}

fn relation_suites(fx: &Fixtures, t: &mut Tally) {
    for (name, suite) in &fx.relations {
        let c = ctx(suite.k, suite.n);
        for r in &suite.relations {
            let label = format!("{name}: {}({}) = {}", r.map, r.source, r.image.join("+"));
            let (Some(src), Some(img)) = (
                suite.vectors.get(&r.source),
                r.image.iter().map(|x| suite.vectors.get(x)).collect::<Option<Vec<_>>>(),
            ) else {
                t.fail(format!("{label}: unknown vector"));
                continue;
            };
            let want = img.iter().fold(vec![0; c.m], |acc, v| add(&acc, v));
            if let Some(got) = t.ok(trop_q(&c, r.map, src, Convention::Max), || label.clone()) {
                t.eq(&got, &want, || label);
            }
        }
    }
    if let Some(s) = fx.relations.get("gr48") {
        if let (Some(g2), Some(g3), Some(g4)) = (s.vectors.get("g2"), s.vectors.get("g3"), s.vectors.get("g4")) {
            t.eq(g2, &add(g3, g4), || "gr48: g2 = g3 + g4".into());
        }
    }
    match fx.relations.get("gr39") {
        Some(s) => {
            let vs: Vec<Vec<i64>> = (1..=6).filter_map(|i| s.vectors.get(&format!("g{i}")).cloned()).collect();
            t.eq(&vs.len(), &6, || "gr39: g1..g6 present".into());
            t.eq(&int_rank(&vs), &6, || "gr39: g1..g6 linearly independent".into());
        }
        None => t.fail("gr39 relations missing".into()),
    }
}

fn stable_seeds(fx: &Fixtures, c: &GrContext, t: &mut Tally) -> Vec<TropPoint> {
    let gs = fx.catalogues.stable.iter().filter(|e| e.k == c.k && e.n == c.n).filter_map(|e| {
        let tt = t.ok(Tableau::from_rows(e.k, e.n, &e.rows), || format!("{:?}", e.rows))?;
        t.ok(tableau_to_gvector(&tt, c), || format!("{:?}", e.rows))
    });
    distinct_points(gs.collect::<Vec<_>>())
}

fn totients(fx: &Fixtures, t: &mut Tally) {
    let mut gr48_points = HashSet::new();
    for seq in [&fx.orbits.gr39, &fx.orbits.gr48] {
        let c = ctx(seq.k, seq.n);
        let label = format!("Gr({},{})", seq.k, seq.n);
        let seeds = stable_seeds(fx, &c, t);
        let Some(orbit) = t.ok(braid_orbit(&c, &seeds, seq.r_max), || label.clone()) else { continue };
        let Some(profile) = t.ok(totient_profile(&orbit, seq.r_max), || label.clone()) else { continue };
        for r in 1..=seq.r_max {
            let got = profile[r - 1];
            if let Some(&reference) = seq.reference.get(r - 1) {
                t.eq(&got, &reference, || format!("{label} N_{r} against the reference sequence"));
            }
            t.eq(&Some(got), &totient_closed_form(seq.k, seq.n, r), || format!("{label} N_{r} against the closed form"));
        }
        if (seq.k, seq.n) == (4, 8) {
            gr48_points = orbit.entries.iter().map(|e| e.g.clone()).collect();
        }
    }
    let grid = &fx.orbits.degree_grid;
    let (Some(gr48), true) = (fx.relations.get("gr48"), grid.k == 4 && grid.n == 8) else {
        t.fail("Gr(4,8) vectors missing".into());
        return;
    };
    let c = ctx(4, 8);
    let vec_of = |name: &str| gr48.vectors.get(name).cloned();
    let (Some(ga), Some(gb)) = (vec_of(&grid.axes[0]), vec_of(&grid.axes[1])) else {
        t.fail("grid axes missing".into());
        return;
    };
    let cap = fx.orbits.gr48.r_max;
    for l in &grid.labels {
        let v = add(&scale(l.b, &ga), &scale(l.c, &gb));
        if let Some(d) = t.ok(degree(&v, &c), || format!("({},{})", l.b, l.c)) {
            t.eq(&d, &l.degree, || format!("degree at ({},{})", l.b, l.c));
        }
        let closed = if l.b > l.c { 4 * l.b - 2 * l.c } else { 4 * l.c - 2 * l.b };
        t.eq(&(closed as usize), &l.degree, || format!("closed-form degree at ({},{})", l.b, l.c));
        if l.degree <= cap {
            t.check(gr48_points.contains(&v), || format!("({},{}) missing from the orbit", l.b, l.c));
        }
    }
    for b in 0..=8i64 {
        for cc in 0..=8i64 {
            if gcd(b, cc) > 1 {
                let v = add(&scale(b, &ga), &scale(cc, &gb));
                t.check(!gr48_points.contains(&v), || format!("non-coprime ({b},{cc}) in the orbit"));
            }
        }
    }
    let cones: Vec<(TropPoint, TropPoint)> = [("g1", "g3"), ("g1", "g4"), ("g3", "g4")]
        .iter()
        .filter_map(|(a, b)| Some((vec_of(a)?, vec_of(b)?)))
        .collect();
    for p in &gr48_points {
        let inside = cones.iter().any(|(a, b)| {
            (0..=cap as i64).any(|x| {
                (0..=cap as i64).any(|y| gcd(x, y) == 1 && add(&scale(x, a), &scale(y, b)) == *p)
            })
        });
        t.check(inside, || format!("{p:?} outside the cones"));
    }
}

fn conjectures(fx: &Fixtures, t: &mut Tally, mut rng: ChaCha8Rng) {
    let g36 = ctx(3, 6);
    let theta_tau = [QuasiAuto::Tau, QuasiAuto::Theta];
    for row in &fx.gr36.dictionary {
        if let Some(got) = t.ok(trop_q_seq(&g36, &theta_tau, &row.g, Convention::Max), || row.name.clone()) {
            t.eq(&got, &neg_rev(&row.g), || format!("Q+ theta tau g({})", row.name));
        }
    }
    for _ in 0..200 {
        let v = random_point(&mut rng, g36.m, 10);
        if let Some(got) = t.ok(trop_q_seq(&g36, &theta_tau, &v, Convention::Max), || format!("{v:?}")) {
            t.eq(&got, &neg_rev(&v), || format!("Q+ theta tau at {v:?}"));
        }
    }
    let col = |c: &[usize]| Tableau::column(3, 6, c.to_vec());
    let cases: [(&str, [usize; 3], [usize; 3]); 2] = [("rho", [1, 2, 4], [2, 3, 5]), ("theta", [1, 2, 5], [1, 4, 6])];
    for (what, src, want) in cases {
        let (Some(src), Some(want)) = (t.ok(col(&src), || what.into()), t.ok(col(&want), || what.into())) else {
            continue;
        };
        if what == "rho" {
            if let Some(got) = t.ok(act_on_tableau(QuasiAuto::Rho, &src, &g36), || "rho".into()) {
                t.eq(&got, &want, || "rho([1,2,4])".into());
            }
            t.eq(&src.promotion(), &want, || "pr([1,2,4])".into());
        } else {
            if let Some(got) = t.ok(act_on_tableau(QuasiAuto::Theta, &src, &g36), || "theta".into()) {
                t.eq(&got, &want, || "theta([1,2,5]) through Q+theta".into());
            }
            if let Some(got) = t.ok(reflect_via_evacuation(&src, &g36), || "eva tau^-1".into()) {
                t.eq(&got, &want, || "eva(tau^-1([1,2,5]))".into());
            }
        }
    }
    if let (Some(a), Some(b)) = (t.ok(col(&[1, 2, 5]), || "eva".into()), t.ok(col(&[2, 5, 6]), || "eva".into())) {
        t.eq(&a.evacuation(), &b, || "eva([1,2,5])".into());
    }
    let g38 = ctx(3, 8);
    let tab = Tableau::from_rows(3, 8, &[vec![1, 2, 3], vec![4, 4, 5], vec![6, 7, 8]]);
    let eva = Tableau::from_rows(3, 8, &[vec![1, 2, 3], vec![4, 5, 5], vec![6, 7, 8]]);
    if let (Some(tab), Some(eva)) = (t.ok(tab, || "SSYT(3,[8])".into()), t.ok(eva, || "SSYT(3,[8])".into())) {
        t.eq(&tab.evacuation(), &eva, || "eva in SSYT(3,[8])".into());
        if let Some(g) = t.ok(tableau_to_gvector(&tab, &g38), || "g(T)".into()) {
            if let Some(got) = t.ok(gvector_to_tableau(&neg_rev(&g), &g38), || "T_{-g^pi}".into()) {
                t.eq(&got, &eva, || "T_{-g^pi} = eva(T)".into());
            }
        }
    }
}

fn rescale_columns(m: &LMatrix, shifts: &[i64]) -> Result<LMatrix> {
    let cols: Vec<Vec<LaurentPoly>> = m
        .columns()
        .into_iter()
        .zip(shifts)
        .map(|(c, &s)| c.iter().map(|p| p.shift(s)).collect())
        .collect();
    LMatrix::from_columns(&cols)
}

fn same_ratio(a: &(LaurentPoly, LaurentPoly), b: &(LaurentPoly, LaurentPoly)) -> bool {
    &a.0 * &b.1 == &b.0 * &a.1
}

fn properties(t: &mut Tally, mut rng: ChaCha8Rng) {
    for _ in 0..500 {
        let (k, n) = [(3, 6), (3, 8), (4, 8), (2, 7)][rng.gen_range(0..4)];
        let tt = random_tableau(&mut rng, k, n, 5);
        for i in 1..n {
            t.eq(&tt.bender_knuth(i).bender_knuth(i), &tt, || format!("BK_{i} twice on {tt:?}"));
        }
        t.eq(&tt.evacuation().evacuation(), &tt, || format!("eva twice on {tt:?}"));
    }
    for _ in 0..300 {
        let tt = random_tableau(&mut rng, 3, 6, 5);
        let p = (0..6).fold(tt.clone(), |acc, _| acc.promotion());
        t.eq(&p, &tt, || format!("pr^6 on {tt:?}"));
    }
    for _ in 0..300 {
        let (a, b, c) = (random_tableau(&mut rng, 3, 8, 3), random_tableau(&mut rng, 3, 8, 3), random_tableau(&mut rng, 3, 8, 3));
        let one = Tableau::empty(3, 8);
        let (Ok(ab), Ok(ba), Ok(a1)) = (a.union(&b), b.union(&a), a.union(&one)) else {
            t.fail("union failed".into());
            continue;
        };
        t.eq(&ab, &ba, || "union commutes".into());
        t.eq(&a1, &a, || "empty tableau is the identity".into());
        if let (Ok(l), Ok(r)) = (ab.union(&c), b.union(&c).and_then(|bc| a.union(&bc))) {
            t.eq(&l, &r, || "union associates".into());
        }
        if let Some(q) = t.ok(ab.quotient(&a), || "quotient".into()) {
            t.eq(&q, &b, || "quotient undoes union".into());
        }
    }
    let contexts = [ctx(3, 6), ctx(3, 8), ctx(4, 8), ctx(3, 9)];
    for i in 0..1000 {
        let c = &contexts[i % contexts.len()];
        let g = random_point(&mut rng, c.m, 4);
        let Some(tt) = t.ok(gvector_to_tableau(&g, c), || format!("T_g for {g:?}")) else { continue };
        if let Some(back) = t.ok(tableau_to_gvector(&tt, c), || format!("g(T) for {g:?}")) {
            t.eq(&back, &g, || format!("roundtrip on Gr({},{})", c.k, c.n));
        }
    }
    for c in [&contexts[0], &contexts[2]] {
        for _ in 0..20 {
            let v = random_point(&mut rng, c.m, 6);
            let shifts = random_point(&mut rng, c.n, 5);
            let (Some(w), Some(w2)) = (
                t.ok(web_matrix(c, &v), || "web matrix".into()),
                t.ok(web_matrix(c, &v).and_then(|w| rescale_columns(&w, &shifts)), || "rescale".into()),
            ) else {
                continue;
            };
            let pairs = [
                (Ok(w.clone()), Ok(w2.clone())),
                (apply_quasi_auto(&w, QuasiAuto::Sigma(1), c), apply_quasi_auto(&w2, QuasiAuto::Sigma(1), c)),
            ];
            for (a, b) in pairs {
                let (Some(a), Some(b)) = (t.ok(a, || "apply".into()), t.ok(b, || "apply".into())) else { continue };
                for node in c.active_nodes() {
                    if let (Ok(x), Ok(y)) = (yhat_value(&a, c, node), yhat_value(&b, c, node)) {
                        t.check(same_ratio(&x, &y), || format!("y-hat {node:?} changed under rescaling at {v:?}"));
                    } else {
                        t.fail(format!("y-hat {node:?} failed at {v:?}"));
                    }
                }
            }
        }
    }
    for c in [&contexts[3], &contexts[2]] {
        let d = (1..=c.k).rev().find(|d| c.k % d == 0 && c.n % d == 0).unwrap_or(1);
        for _ in 0..200 {
            let v = random_point(&mut rng, c.m, 10);
            for i in 1..d {
                let (s, s1) = (QuasiAuto::Sigma(i), QuasiAuto::Sigma(i + 1));
                let l = trop_q_seq(c, &[s, s1, s], &v, Convention::Max);
                let r = trop_q_seq(c, &[s1, s, s1], &v, Convention::Max);
                if let (Some(l), Some(r)) = (t.ok(l, || "braid".into()), t.ok(r, || "braid".into())) {
                    t.eq(&l, &r, || format!("braid relation {i} on Gr({},{}) at {v:?}", c.k, c.n));
                }
                let conj = trop_q_seq(c, &[QuasiAuto::RhoInv, s, QuasiAuto::Rho], &v, Convention::Max);
                let direct = trop_q(c, s1, &v, Convention::Max);
                if let (Some(a), Some(b)) = (t.ok(conj, || "conj".into()), t.ok(direct, || "conj".into())) {
                    t.eq(&a, &b, || format!("sigma_{} by conjugation at {v:?}", i + 1));
                }
            }
        }
    }
    for c in [&contexts[0], &contexts[2], &contexts[3]] {
        for _ in 0..200 {
            let v = random_point(&mut rng, c.m, 10);
            let l = trop_q_seq(c, &[QuasiAuto::Tau, QuasiAuto::Tau], &v, Convention::Max);
            let r = trop_q_seq(c, &vec![QuasiAuto::RhoInv; c.k], &v, Convention::Max);
            if let (Some(l), Some(r)) = (t.ok(l, || "tau^2".into()), t.ok(r, || "rho^-k".into())) {
                t.eq(&l, &r, || format!("Q_tau^2 = Q_rho^-k on Gr({},{}) at {v:?}", c.k, c.n));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(int_rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(int_rank(&[vec![1, 2, 3], vec![0, 1, 1], vec![1, 3, 4]]), 2);
        assert_eq!(int_rank(&[vec![2, 0], vec![0, 3]]), 2);
    }

    #[test]
    fn word_count() {
        assert_eq!(words(8).len(), 511);
    }
}
