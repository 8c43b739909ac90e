use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use clustertrop::cluster_core::{trop_compose, IntMatrix};
use clustertrop::dynamics::{
    act_on_tableau, braid_orbit, distinct_points, find_fixed_points, totient_profile, StabilityConfig,
};
use clustertrop::fixtures::Fixtures;
use clustertrop::tableaux::{gvector_to_tableau, tableau_to_gvector};
use clustertrop::{verify, Convention, ExchangeMatrix, GrContext, QuasiAuto, Seed, Tableau, TropPoint};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lib(#[from] clustertrop::Error),
    #[error("verification failed")]
    Verification,
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "clustertrop", version, about = "Tropical quasi-automorphisms, g-vectors and tableaux")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Load reference data from this directory instead of the embedded copy.
    #[arg(long, global = true)]
    fixtures: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct Gr {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    n: usize,
}

impl Gr {
    fn ctx(&self) -> CliResult<GrContext> {
        Ok(GrContext::new(self.k, self.n)?)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Mutate a labelled seed along a word and optionally transport a tropical point.
    Mutate {
        /// Exchange matrix, rows separated by ';'.
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// Comma-separated 1-based nodes.
        #[arg(long, default_value = "")]
        word: String,
        #[arg(long, value_parser = parse_ints, allow_hyphen_values = true)]
        g: Option<TropPoint>,
        #[arg(long, default_value = "max")]
        conv: Convention,
    },
    /// Evaluate the tropicalised map Q_f at a point.
    TropMap {
        #[command(flatten)]
        gr: Gr,
        #[arg(long)]
        map: QuasiAuto,
        #[arg(long, default_value = "max")]
        conv: Convention,
        #[arg(long, value_parser = parse_ints, allow_hyphen_values = true)]
        g: TropPoint,
    },
    /// Tableau of a truncated g-vector.
    Gvec2tab {
        #[command(flatten)]
        gr: Gr,
        #[arg(long, value_parser = parse_ints, allow_hyphen_values = true)]
        g: TropPoint,
    },
    /// Truncated g-vector of a tableau.
    Tab2gvec {
        #[command(flatten)]
        gr: Gr,
        #[arg(long)]
        tableau: String,
    },
    /// Image of a tableau under a map.
    Act {
        #[command(flatten)]
        gr: Gr,
        #[arg(long)]
        map: QuasiAuto,
        #[arg(long)]
        tableau: String,
    },
    /// Fixed tableaux of a map at a given rank, with stability verdicts.
    FixedPoints {
        #[command(flatten)]
        gr: Gr,
        #[arg(long)]
        map: QuasiAuto,
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
    },
    /// Braid orbit of seed g-vectors up to a degree cap.
    Orbit {
        #[command(flatten)]
        gr: Gr,
        #[arg(long)]
        degree_cap: usize,
        /// Seed g-vector; repeatable. Defaults to the known stable points.
        #[arg(long, value_parser = parse_ints, allow_hyphen_values = true)]
        g: Vec<TropPoint>,
    },
    /// Number of orbit points of each degree `1..=degree-cap`.
    Totient {
        #[command(flatten)]
        gr: Gr,
        #[arg(long)]
        degree_cap: usize,
        #[arg(long, value_parser = parse_ints, allow_hyphen_values = true)]
        g: Vec<TropPoint>,
    },
    /// Run the acceptance criteria.
    Verify {
        /// Criterion number; repeatable. Defaults to all.
        #[arg(long)]
        criterion: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
    },
}

fn parse_ints(s: &str) -> Result<Vec<i64>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| x.trim().parse::<i64>().map_err(|e| format!("{x:?}: {e}"))).collect()
}

fn parse_matrix(s: &str) -> CliResult<IntMatrix> {
    s.split(';').map(|r| parse_ints(r).map_err(CliError::Usage)).collect()
}

fn parse_tableau(s: &str, gr: &Gr) -> CliResult<Tableau> {
    let bad = |e: serde_json::Error| CliError::Usage(format!("--tableau: {e}"));
    let v: Value = serde_json::from_str(s).map_err(bad)?;
    if v.is_object() {
        let t: Tableau = serde_json::from_value(v).map_err(bad)?;
        if (t.k(), t.n()) != (gr.k, gr.n) {
            return Err(CliError::Usage(format!("--tableau is in SSYT({},[{}])", t.k(), t.n())));
        }
        return Ok(t);
    }
    let lists: Vec<Vec<usize>> = serde_json::from_value(v).map_err(bad)?;
    Ok(Tableau::from_nested(gr.k, gr.n, &lists)?)
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn cols_text(t: &Tableau) -> String {
    serde_json::to_string(t.cols()).expect("columns serialise")
}

fn matrix_text(m: &IntMatrix) -> String {
    m.iter().map(|r| join(r)).collect::<Vec<_>>().join(";")
}

fn emit_point(v: &[i64], f: Format) -> String {
    match f {
        Format::Json => json!(v).to_string(),
        _ => join(v),
    }
}

fn emit_tableau(t: &Tableau, f: Format) -> String {
    match f {
        Format::Json => serde_json::to_string(t).expect("tableau serialises"),
        Format::Csv => t.cols().iter().map(|c| join(c)).collect::<Vec<_>>().join("\n"),
        Format::Text => cols_text(t),
    }
}

fn emit_table(header: &[&str], rows: &[Vec<String>], records: Value, f: Format) -> String {
    let quote = |s: &String| if s.contains(',') { format!("\"{}\"", s.replace('"', "\"\"")) } else { s.clone() };
    match f {
        Format::Json => records.to_string(),
        Format::Csv => std::iter::once(header.join(","))
            .chain(rows.iter().map(|r| r.iter().map(quote).collect::<Vec<_>>().join(",")))
            .collect::<Vec<_>>()
            .join("\n"),
        Format::Text => rows.iter().map(|r| r.join("  ")).collect::<Vec<_>>().join("\n"),
    }
}

fn load_fixtures(dir: &Option<PathBuf>) -> CliResult<Fixtures> {
    Ok(match dir {
        Some(d) => Fixtures::from_dir(d)?,
        None => Fixtures::embedded()?,
    })
}

fn default_seeds(fx: &Fixtures, ctx: &GrContext) -> CliResult<Vec<TropPoint>> {
    let mut gs = Vec::new();
    for e in fx.catalogues.stable.iter().filter(|e| (e.k, e.n) == (ctx.k, ctx.n)) {
        gs.push(tableau_to_gvector(&Tableau::from_rows(e.k, e.n, &e.rows)?, ctx)?);
    }
    if gs.is_empty() {
        return Err(CliError::Usage(format!("no known stable points on Gr({},{}); pass --g", ctx.k, ctx.n)));
    }
    Ok(distinct_points(gs))
}

#[derive(Serialize)]
struct FixedRow<'a> {
    tableau: &'a Tableau,
    g: &'a TropPoint,
    stability: clustertrop::dynamics::Stability,
}

fn run(cli: Cli) -> CliResult<String> {
    let f = cli.format;
    match cli.cmd {
        Cmd::Mutate { b, word, g, conv } => {
            let b0 = ExchangeMatrix::new(parse_matrix(&b)?)?;
            let word = parse_ints(&word)
                .map_err(CliError::Usage)?
                .into_iter()
                .map(|x| usize::try_from(x).map_err(|_| CliError::Usage(format!("bad node {x}"))))
                .collect::<CliResult<Vec<usize>>>()?;
            let s = Seed::along(&b0, &word)?;
            let moved = g.map(|g| trop_compose(&g, &b0, &word, conv)).transpose()?;
            Ok(match f {
                Format::Json => json!({ "seed": s, "transported": moved }).to_string(),
                _ => {
                    let mut rows = vec![
                        vec!["B".to_string(), matrix_text(s.b.matrix())],
                        vec!["C".to_string(), matrix_text(&s.c)],
                        vec!["G".to_string(), matrix_text(&s.g)],
                    ];
                    if let Some(v) = moved {
                        rows.push(vec!["transported".to_string(), join(&v)]);
                    }
                    emit_table(&["field", "value"], &rows, Value::Null, f)
                }
            })
        }
        Cmd::TropMap { gr, map, conv, g } => {
            let ctx = gr.ctx()?;
            Ok(emit_point(&clustertrop::grassmannian::trop_q(&ctx, map, &g, conv)?, f))
        }
        Cmd::Gvec2tab { gr, g } => Ok(emit_tableau(&gvector_to_tableau(&g, &gr.ctx()?)?, f)),
        Cmd::Tab2gvec { gr, tableau } => {
            let t = parse_tableau(&tableau, &gr)?;
            Ok(emit_point(&tableau_to_gvector(&t, &gr.ctx()?)?, f))
        }
        Cmd::Act { gr, map, tableau } => {
            let t = parse_tableau(&tableau, &gr)?;
            Ok(emit_tableau(&act_on_tableau(map, &t, &gr.ctx()?)?, f))
        }
        Cmd::FixedPoints { gr, map, rank, rng_seed } => {
            let ctx = gr.ctx()?;
            let cfg = StabilityConfig { rng_seed, ..StabilityConfig::default() };
            let found = find_fixed_points(&ctx, map, rank, &cfg)?;
            let rows: Vec<Vec<String>> = found
                .iter()
                .map(|r| vec![cols_text(&r.tableau), join(&r.g), format!("{:?}", r.stability).to_lowercase()])
                .collect();
            let records: Vec<FixedRow> =
                found.iter().map(|r| FixedRow { tableau: &r.tableau, g: &r.g, stability: r.stability }).collect();
            Ok(emit_table(&["tableau", "g", "stability"], &rows, json!(records), f))
        }
        Cmd::Orbit { gr, degree_cap, g } => {
            let ctx = gr.ctx()?;
            let seeds = if g.is_empty() { default_seeds(&load_fixtures(&cli.fixtures)?, &ctx)? } else { g };
            let orbit = braid_orbit(&ctx, &seeds, degree_cap)?;
            let mut rows = Vec::new();
            for e in &orbit.entries {
                let t = gvector_to_tableau(&e.g, &ctx)?;
                let word: Vec<String> = e.word.iter().map(|w| w.to_string()).collect();
                rows.push(vec![e.degree.to_string(), join(&e.g), cols_text(&t), e.seed.to_string(), word.join(" ")]);
            }
            Ok(emit_table(&["degree", "g", "tableau", "seed", "word"], &rows, json!(orbit.entries), f))
        }
        Cmd::Totient { gr, degree_cap, g } => {
            let ctx = gr.ctx()?;
            let seeds = if g.is_empty() { default_seeds(&load_fixtures(&cli.fixtures)?, &ctx)? } else { g };
            let orbit = braid_orbit(&ctx, &seeds, degree_cap)?;
            let counts = totient_profile(&orbit, degree_cap)?;
            Ok(match f {
                Format::Json => json!(counts).to_string(),
                _ => join(&counts),
            })
        }
        Cmd::Verify { criterion, rng_seed } => {
            let fx = load_fixtures(&cli.fixtures)?;
            let ids: Vec<usize> =
                if criterion.is_empty() { verify::CRITERIA.iter().map(|c| c.0).collect() } else { criterion };
            let mut results = Vec::new();
            for id in ids {
                let r = verify::run(id, &fx, rng_seed).ok_or_else(|| CliError::Usage(format!("no criterion {id}")))?;
                if f == Format::Text {
                    say(&r.to_string());
                    for msg in &r.failures {
                        say(&format!("    {msg}"));
                    }
                }
                results.push(r);
            }
            let rows: Vec<Vec<String>> = results
                .iter()
                .map(|r| {
                    vec![
                        r.id.to_string(),
                        r.name.to_string(),
                        if r.pass { "pass" } else { "fail" }.to_string(),
                        r.checks.to_string(),
                        r.failed.to_string(),
                        format!("{:.3}", r.elapsed_secs),
                    ]
                })
                .collect();
            let out = match f {
                Format::Text => {
                    let passed = results.iter().filter(|r| r.pass).count();
                    format!("{passed}/{} criteria passed", results.len())
                }
                _ => emit_table(&["id", "name", "status", "checks", "failed", "seconds"], &rows, json!(results), f),
            };
            if results.iter().all(|r| r.pass) {
                Ok(out)
            } else {
                say(&out);
                Err(CliError::Verification)
            }
        }
    }
}

/// Writes a line to stdout, ignoring a closed pipe.
fn say(s: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{s}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            say(&out);
            ExitCode::SUCCESS
        }
        Err(CliError::Verification) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
