//! Reference data: rank-2 mutation tables, displayed map fixtures, the Gr(3,6)
//! dictionary and braid table, fixed-point catalogues, relation suites and
//! orbit counts.
//!
//! The data is embedded at compile time. [`Fixtures::from_dir`] loads the same
//! layout from disk instead.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::cluster_core::IntMatrix;
use crate::error::{Error, Result};
use crate::grassmannian::QuasiAuto;

pub const RANK2_TABLES: [&str; 6] = ["c2", "c2_op", "b2", "b2_op", "a2", "a2_op"];

pub const MAP_FILES: [&str; 14] = [
    "gr36_rho_inv",
    "gr36_theta",
    "gr36_tau_inv",
    "gr36_sigma1_inv",
    "gr48_sigma1",
    "gr48_sigma1_inv",
    "gr48_sigma2",
    "gr48_sigma2_inv",
    "gr48_sigma3",
    "gr48_sigma3_inv",
    "gr39_sigma1",
    "gr39_sigma1_inv",
    "gr39_sigma2",
    "gr39_sigma2_inv",
];

macro_rules! embed {
    ($p:literal) => {
        ($p, include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/", $p)))
    };
}

const EMBEDDED: [(&str, &str); 24] = [
    embed!("rank2/c2.json"),
    embed!("rank2/c2_op.json"),
    embed!("rank2/b2.json"),
    embed!("rank2/b2_op.json"),
    embed!("rank2/a2.json"),
    embed!("rank2/a2_op.json"),
    embed!("maps/gr36_rho_inv.txt"),
    embed!("maps/gr36_theta.txt"),
    embed!("maps/gr36_tau_inv.txt"),
    embed!("maps/gr36_sigma1_inv.txt"),
    embed!("maps/gr48_sigma1.txt"),
    embed!("maps/gr48_sigma1_inv.txt"),
    embed!("maps/gr48_sigma2.txt"),
    embed!("maps/gr48_sigma2_inv.txt"),
    embed!("maps/gr48_sigma3.txt"),
    embed!("maps/gr48_sigma3_inv.txt"),
    embed!("maps/gr39_sigma1.txt"),
    embed!("maps/gr39_sigma1_inv.txt"),
    embed!("maps/gr39_sigma2.txt"),
    embed!("maps/gr39_sigma2_inv.txt"),
    embed!("gr36.json"),
    embed!("catalogues.json"),
    embed!("relations.json"),
    embed!("orbits.json"),
];

/// One vertex of a rank-2 table. Matrices are row-major.
#[derive(Clone, Debug, Deserialize)]
pub struct Rank2Row {
    pub t: usize,
    pub b: IntMatrix,
    pub c_t0: IntMatrix,
    pub g_t0: IntMatrix,
    pub c_t1: IntMatrix,
    pub g_t1: IntMatrix,
    /// ŷ-variables at this vertex as expressions in `x1, x2` (the ŷ at `t0`).
    pub yhat: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Rank2Table {
    pub table: String,
    pub rows: Vec<Rank2Row>,
}

impl Rank2Table {
    /// Mutation word from `t0` to row `t`: alternating nodes starting at 1.
    pub fn word_from_t0(t: usize) -> Vec<usize> {
        (0..t).map(|i| 1 + i % 2).collect()
    }

    /// Mutation word from `t1 = μ1 t0` to row `t`.
    pub fn word_from_t1(t: usize) -> Vec<usize> {
        if t == 0 {
            vec![1]
        } else {
            (0..t - 1).map(|i| 2 - i % 2).collect()
        }
    }
}

/// A displayed map: the expressions in `text` tropicalise to `Q_q`.
#[derive(Clone, Debug)]
pub struct MapText {
    pub name: String,
    pub k: usize,
    pub n: usize,
    pub q: QuasiAuto,
    pub text: String,
}

/// Reads `grKN_<map>` where `<map>` is the displayed pullback. Its
/// tropicalisation is `Q` of the inverse map.
pub fn parse_map_name(name: &str) -> Result<(usize, usize, QuasiAuto)> {
    let bad = || Error::Fixture(format!("unrecognised map fixture name {name}"));
    let (gr, f) = name.split_once('_').ok_or_else(bad)?;
    let (k, n) = match gr {
        "gr36" => (3, 6),
        "gr39" => (3, 9),
        "gr48" => (4, 8),
        _ => return Err(bad()),
    };
    let displayed = match f {
        "rho" => QuasiAuto::Rho,
        "rho_inv" => QuasiAuto::RhoInv,
        "theta" => QuasiAuto::Theta,
        "tau" => QuasiAuto::Tau,
        "tau_inv" => QuasiAuto::TauInv,
        _ => {
            let rest = f.strip_prefix("sigma").ok_or_else(bad)?;
            let (i, inv) = match rest.strip_suffix("_inv") {
                Some(i) => (i, true),
                None => (rest, false),
            };
            let i: usize = i.parse().map_err(|_| bad())?;
            if inv {
                QuasiAuto::SigmaInv(i)
            } else {
                QuasiAuto::Sigma(i)
            }
        }
    };
    Ok((k, n, displayed.inverse()))
}

#[derive(Clone, Debug, Deserialize)]
pub struct DictionaryRow {
    pub name: String,
    pub cols: Vec<Vec<usize>>,
    pub g: Vec<i64>,
    pub g_op: Vec<i64>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct BraidImageRow {
    pub cols: Vec<Vec<usize>>,
    pub sigma1: Vec<Vec<usize>>,
    pub sigma2: Vec<Vec<usize>>,
}

/// Gr(3,6) cluster variables with g-vectors, and their images under σ1, σ2.
/// Tableaux are given as column lists.
#[derive(Clone, Debug, Deserialize)]
pub struct Gr36Tables {
    pub k: usize,
    pub n: usize,
    pub dictionary: Vec<DictionaryRow>,
    pub braid_images: Vec<BraidImageRow>,
}

/// Fixed tableaux of one generator at one rank; tableaux are row lists.
#[derive(Clone, Debug, Deserialize)]
pub struct FixedPointCatalogue {
    pub k: usize,
    pub n: usize,
    pub generator: QuasiAuto,
    pub rank: usize,
    pub rows: Vec<Vec<Vec<usize>>>,
    pub stable: Vec<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct StableEntry {
    pub k: usize,
    pub n: usize,
    pub generator: QuasiAuto,
    pub rows: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Catalogues {
    pub fixed_points: Vec<FixedPointCatalogue>,
    pub stable: Vec<StableEntry>,
}

/// `map(source) = sum of image`.
#[derive(Clone, Debug, Deserialize)]
pub struct Relation {
    pub map: QuasiAuto,
    pub source: String,
    pub image: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct RelationSuite {
    pub k: usize,
    pub n: usize,
    /// Plücker labels of the coordinates, for display.
    pub order: Vec<String>,
    pub vectors: BTreeMap<String, Vec<i64>>,
    pub relations: Vec<Relation>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct OrbitCounts {
    pub k: usize,
    pub n: usize,
    pub r_max: usize,
    /// `N_r` for `r = 1, 2, ...`, possibly longer than `r_max`.
    pub reference: Vec<usize>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct DegreeLabel {
    pub b: i64,
    pub c: i64,
    pub degree: usize,
}

/// Degrees of `b g3 + c g4` on Gr(4,8).
#[derive(Clone, Debug, Deserialize)]
pub struct DegreeGrid {
    pub k: usize,
    pub n: usize,
    pub axes: [String; 2],
    pub labels: Vec<DegreeLabel>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct OrbitData {
    pub gr39: OrbitCounts,
    pub gr48: OrbitCounts,
    pub degree_grid: DegreeGrid,
}

#[derive(Clone, Debug)]
pub struct Fixtures {
    pub rank2: Vec<Rank2Table>,
    pub maps: Vec<MapText>,
    pub gr36: Gr36Tables,
    pub catalogues: Catalogues,
    pub relations: BTreeMap<String, RelationSuite>,
    pub orbits: OrbitData,
}

fn json<T: DeserializeOwned>(path: &str, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Fixture(format!("{path}: {e}")))
}

impl Fixtures {
    pub fn embedded() -> Result<Self> {
        Self::load(|p| {
            EMBEDDED
                .iter()
                .find(|(q, _)| *q == p)
                .map(|(_, t)| t.to_string())
                .ok_or_else(|| Error::Fixture(format!("{p} is not embedded")))
        })
    }

    /// Loads the same files from `dir`.
    pub fn from_dir(dir: &Path) -> Result<Self> {
        Self::load(|p| {
            let path = dir.join(p);
            fs::read_to_string(&path).map_err(|e| Error::Fixture(format!("{}: {e}", path.display())))
        })
    }

    fn load(read: impl Fn(&str) -> Result<String>) -> Result<Self> {
        let mut rank2 = Vec::new();
        for t in RANK2_TABLES {
            let p = format!("rank2/{t}.json");
            rank2.push(json(&p, &read(&p)?)?);
        }
        let mut maps = Vec::new();
        for name in MAP_FILES {
            let (k, n, q) = parse_map_name(name)?;
            let text = read(&format!("maps/{name}.txt"))?;
            maps.push(MapText { name: name.to_string(), k, n, q, text });
        }
        Ok(Fixtures {
            rank2,
            maps,
            gr36: json("gr36.json", &read("gr36.json")?)?,
            catalogues: json("catalogues.json", &read("catalogues.json")?)?,
            relations: json("relations.json", &read("relations.json")?)?,
            orbits: json("orbits.json", &read("orbits.json")?)?,
        })
    }

    pub fn rank2_table(&self, name: &str) -> Option<&Rank2Table> {
        self.rank2.iter().find(|t| t.table == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_loads() {
        let f = Fixtures::embedded().unwrap();
        assert_eq!(f.rank2.len(), 6);
        assert_eq!(f.maps.len(), 14);
        assert_eq!(f.gr36.dictionary.len(), 16);
        assert_eq!(f.gr36.braid_images.len(), 16);
        assert_eq!(f.catalogues.fixed_points.len(), 6);
        assert_eq!(f.catalogues.stable.len(), 16);
        assert_eq!(f.relations.len(), 2);
        assert!(f.orbits.gr48.reference.len() >= 30);
        assert_eq!(f.orbits.degree_grid.labels.len(), 45);
    }

    #[test]
    fn map_names() {
        assert_eq!(parse_map_name("gr36_rho_inv").unwrap(), (3, 6, QuasiAuto::Rho));
        assert_eq!(parse_map_name("gr48_sigma3").unwrap(), (4, 8, QuasiAuto::SigmaInv(3)));
        assert_eq!(parse_map_name("gr39_sigma2_inv").unwrap(), (3, 9, QuasiAuto::Sigma(2)));
        assert!(parse_map_name("gr37_rho").is_err());
    }

    #[test]
    fn words() {
        assert_eq!(Rank2Table::word_from_t0(3), vec![1, 2, 1]);
        assert_eq!(Rank2Table::word_from_t1(0), vec![1]);
        assert_eq!(Rank2Table::word_from_t1(3), vec![2, 1]);
    }
}
