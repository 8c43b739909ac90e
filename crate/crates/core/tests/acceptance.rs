use std::io::Write;
use std::sync::OnceLock;

use clustertrop::fixtures::Fixtures;
use clustertrop::verify;

fn fixtures() -> &'static Fixtures {
    static FX: OnceLock<Fixtures> = OnceLock::new();
    FX.get_or_init(|| Fixtures::embedded().expect("embedded fixtures load"))
}

fn criterion(id: usize) {
    let r = verify::run(id, fixtures(), 0).expect("known criterion");
    // Written to the stream directly so the line shows without --nocapture.
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{r}");
    for f in &r.failures {
        let _ = writeln!(out, "    {f}");
    }
    assert!(r.pass, "{r}");
}

#[test]
fn criterion_01_rank2_tables() {
    criterion(1);
}

#[test]
fn criterion_02_tropical_transport() {
    criterion(2);
}

#[test]
fn criterion_03_gr36_dictionary() {
    criterion(3);
}

#[test]
fn criterion_04_gr36_braid_table() {
    criterion(4);
}

#[test]
fn criterion_05_oracle_equivalence() {
    criterion(5);
}

#[test]
fn criterion_06_fixed_point_catalogues() {
    criterion(6);
}

#[test]
fn criterion_07_stable_points() {
    criterion(7);
}

#[test]
fn criterion_08_relation_suites() {
    criterion(8);
}

#[test]
fn criterion_09_totient_counts() {
    criterion(9);
}

#[test]
fn criterion_10_conjecture_reports() {
    criterion(10);
}

#[test]
fn criterion_11_property_suites() {
    criterion(11);
}
