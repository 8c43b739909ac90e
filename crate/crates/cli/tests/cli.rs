use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clustertrop")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

#[test]
fn trop_map_sigma1() {
    let o = run(&["trop-map", "--k", "3", "--n", "6", "--map", "sigma:1", "--conv", "max", "--g", "1,0,0,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0,0,1,0");
}

#[test]
fn trop_map_json() {
    let o = run(&["trop-map", "--k", "3", "--n", "6", "--map", "rho", "--g", "1,0,0,0", "--format", "json"]);
    assert_eq!(stdout(&o), "[-1,0,1,0]");
}

#[test]
fn gvec2tab_gr48() {
    let o = run(&["gvec2tab", "--k", "4", "--n", "8", "--g", "-1,0,0,-1,0,1,1,0,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "[[1,3,4,7],[2,4,5,8]]");
}

#[test]
fn tab2gvec_accepts_both_forms() {
    let a = run(&["tab2gvec", "--k", "4", "--n", "8", "--tableau", "[[1,3,4,7],[2,4,5,8]]"]);
    let b = run(&["tab2gvec", "--k", "4", "--n", "8", "--tableau", r#"{"k":4,"n":8,"cols":[[1,3,4,7],[2,4,5,8]]}"#]);
    assert_eq!(stdout(&a), "-1,0,0,-1,0,1,1,0,0");
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn act_on_column() {
    let o = run(&["act", "--k", "3", "--n", "6", "--map", "rho", "--tableau", "[[1,2,4]]"]);
    assert_eq!(stdout(&o), "[[2,3,5]]");
}

#[test]
fn totient_gr48() {
    let o = run(&["totient", "--k", "4", "--n", "8", "--degree-cap", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0,2,0,2,0,4,0,4,0,8");
}

#[test]
fn mutate_rank2() {
    let o = run(&["mutate", "--b", "0,2;-1,0", "--word", "1,2", "--format", "csv"]);
    let text = stdout(&o);
    assert!(text.contains("G,\"-1,-2;1,1\""), "{text}");
}

#[test]
fn fixed_points_json() {
    let o = run(&["fixed-points", "--k", "4", "--n", "8", "--map", "sigma:1", "--rank", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 8);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["trop-map", "--k", "3", "--n", "6", "--map", "bogus", "--g", "1"]).status.code(), Some(2));
    assert_eq!(run(&["trop-map", "--k", "3", "--n", "6", "--map", "rho", "--g", "1,0"]).status.code(), Some(2));
    assert_eq!(run(&["gvec2tab", "--k", "1", "--n", "6", "--g", "1"]).status.code(), Some(2));
    assert_eq!(run(&["orbit", "--k", "3", "--n", "6", "--degree-cap", "3"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--criterion", "99"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let ok = run(&["verify", "--criterion", "1", "--criterion", "8"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("2/2 criteria passed"));
    let mut args = vec!["verify", "--criterion", "3", "--fixtures"];
    let dir = std::env::temp_dir().join(format!("clustertrop-bad-fixtures-{}", std::process::id()));
    copy_dir(std::path::Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures")), &dir);
    let gr36 = dir.join("gr36.json");
    let text = std::fs::read_to_string(&gr36).unwrap();
    std::fs::write(&gr36, text.replacen(r#""g":[1,0,0,0]"#, r#""g":[2,0,0,0]"#, 1)).unwrap();
    let d = dir.to_string_lossy().to_string();
    args.push(&d);
    let bad = run(&args);
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(bad.status.code(), Some(1), "{}", stdout(&bad));
}

#[test]
fn verify_is_deterministic() {
    let a = run(&["verify", "--criterion", "10", "--rng-seed", "7", "--format", "json"]);
    let b = run(&["verify", "--criterion", "10", "--rng-seed", "7", "--format", "json"]);
    let va: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let vb: serde_json::Value = serde_json::from_slice(&b.stdout).unwrap();
    assert_eq!(va[0]["checks"], vb[0]["checks"]);
    assert_eq!(va[0]["failures"], vb[0]["failures"]);
}

fn copy_dir(from: &std::path::Path, to: &std::path::Path) {
    std::fs::create_dir_all(to).unwrap();
    for e in std::fs::read_dir(from).unwrap() {
        let e = e.unwrap();
        let target = to.join(e.file_name());
        if e.file_type().unwrap().is_dir() {
            copy_dir(&e.path(), &target);
        } else {
            std::fs::copy(e.path(), target).unwrap();
        }
    }
}
