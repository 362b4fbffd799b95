use std::fs;
use std::io::Write;
use std::process::{Command, Stdio};
use std::time::Duration;

use latpoly::enumerate::{enumerate_polytopes_with, EnumOptions};
use latpoly::properties::AnalyzeOptions;
use latpoly::store::*;
use latpoly::*;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_latpoly"))
}

#[test]
fn database_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d3.db");
    let recs = records(&enumerate_polytopes(3, 4));
    write_db(&path, &DbInfo::polytopes(3, 4), &recs).unwrap();
    let (info, back) = read_db(&path).unwrap();
    assert_eq!(info.unwrap().max_volume, 4);
    assert_eq!(back, recs);
    for r in &back {
        let p = r.polytope().unwrap();
        assert_eq!(p.volume(), r.volume);
        assert_eq!(canonical_key(&p), r.key());
    }
}

#[test]
fn corrupted_file_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.db");
    let recs = records(&enumerate_polytopes(2, 3));
    write_db(&path, &DbInfo::polytopes(2, 3), &recs).unwrap();
    let mut text: Vec<String> = fs::read_to_string(&path).unwrap().lines().map(String::from).collect();
    let target = text.len() - 1;
    text[target] = text[target].replace('|', "|x");
    fs::write(&path, text.join("\n")).unwrap();
    match read_db(&path) {
        Err(Error::Format { line, .. }) => assert_eq!(line, target + 1),
        other => panic!("{other:?}"),
    }
}

#[test]
fn stats_match_reference_rows() {
    let recs = records(&enumerate_polytopes(3, 5));
    let flags = analyze_all(&recs, &AnalyzeOptions::default()).unwrap();
    let pairs: Vec<_> = recs.into_iter().zip(flags).collect();
    let t = stats(3, 5, &pairs);
    let want = [[1, 1, 1, 1, 1, 1], [3, 2, 2, 2, 2, 2], [6, 5, 5, 5, 5, 5], [17, 15, 14, 14, 14, 14], [19, 17, 15, 15, 15, 15]];
    for (r, w) in t.rows.iter().zip(want) {
        let got: Vec<usize> = r.columns()[..6].iter().map(|c| c.unwrap()).collect();
        assert_eq!(got, w);
        assert!(r.hierarchy_holds());
    }
    let smooth: Vec<usize> = t.rows.iter().map(|r| r.smooth.unwrap()).collect();
    assert_eq!(smooth, [1, 0, 1, 1, 2]);
    assert!(verify(&t, &Fixture::embedded()).ok());
}

#[test]
fn undecided_cells_stay_blank() {
    let recs = records(&enumerate_polytopes(3, 3));
    let opts = AnalyzeOptions { props: vec!["spanning".into(), "va".into()], ..Default::default() };
    let flags = analyze_all(&recs, &opts).unwrap();
    let pairs: Vec<_> = recs.into_iter().zip(flags).collect();
    let t = stats(3, 3, &pairs);
    assert!(t.rows.iter().all(|r| r.idp.is_none() && r.uc.is_none() && r.sp.is_some()));
    let text = t.to_string();
    assert!(text.lines().nth(3).unwrap().trim_end().ends_with('5'));
    assert!(t.to_csv().lines().nth(3).unwrap().starts_with("3,6,5,5,,,,"));
}

#[test]
fn verify_flags_overcounting() {
    let opts = EnumOptions { dedup: false, ..Default::default() };
    let set = enumerate_polytopes_with(3, 5, &opts, &|_, _| {});
    let recs = records(&set);
    let pairs: Vec<_> = recs.into_iter().map(|r| (r, Default::default())).collect();
    let t = stats(3, 5, &pairs);
    let rep = verify(&t, &Fixture::embedded());
    assert!(!rep.ok());
    assert!(rep.mismatches.iter().all(|m| m.column == "TOT" && m.found > m.expected));
}

#[test]
fn four_dimensional_reference() {
    let recs = records(&enumerate_polytopes(4, 6));
    let opts = AnalyzeOptions { props: vec!["spanning".into(), "va".into(), "idp".into()], ..Default::default() };
    let flags = analyze_all(&recs, &opts).unwrap();
    let pairs: Vec<_> = recs.into_iter().zip(flags).collect();
    let rep = verify(&stats(4, 6, &pairs), &Fixture::embedded());
    assert_eq!(rep.compared, 24);
    assert!(rep.ok(), "{:?}", rep.mismatches);
}

#[test]
fn diff_reports_missing_classes() {
    let a = records(&enumerate_polytopes(3, 3));
    let mut b = a.clone();
    let gone = b.remove(4);
    let d = diff(&a, &b);
    assert_eq!(d.only_left, vec![gone.key()]);
    assert!(d.only_right.is_empty());
    assert!(diff(&a, &a).is_empty());
}

#[test]
fn resume_from_partial_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.db");
    let full = enumerate_to_file(4, 5, &out, false, &EnumOptions::default()).unwrap();
    let bytes = fs::read(&out).unwrap();

    // pretend the run stopped after half of the seeds
    let mut m = RunManifest::load(&manifest_path(&out)).unwrap();
    let keep: Vec<String> = m.completed_seeds.iter().step_by(2).cloned().collect();
    m.completed_seeds = keep.into_iter().collect();
    m.finished = false;
    m.save(&manifest_path(&out)).unwrap();
    fs::remove_file(&out).unwrap();
    // and a torn line at the end of the journal
    let mut j = fs::OpenOptions::new().append(true).open(journal_path(&out)).unwrap();
    write!(j, "4;3;0,0,0,0|1,0").unwrap();
    drop(j);

    let again = enumerate_to_file(4, 5, &out, true, &EnumOptions::default()).unwrap();
    assert_eq!(again, full);
    assert_eq!(fs::read(&out).unwrap(), bytes);
    assert!(RunManifest::load(&manifest_path(&out)).unwrap().finished);

    // resuming a finished run redoes nothing and changes nothing
    enumerate_to_file(4, 5, &out, true, &EnumOptions::default()).unwrap();
    assert_eq!(fs::read(&out).unwrap(), bytes);
}

#[test]
fn resume_rejects_other_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.db");
    enumerate_to_file(3, 3, &out, false, &EnumOptions::default()).unwrap();
    assert!(enumerate_to_file(3, 4, &out, true, &EnumOptions::default()).is_err());
}

#[test]
fn cli_kill_and_resume_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let full = dir.path().join("full.db");
    let part = dir.path().join("part.db");
    let args = |p: &std::path::Path| {
        vec!["enumerate".to_string(), "--dim".into(), "5".into(), "--max-volume".into(), "9".into(), "--out".into(), p.display().to_string()]
    };
    assert!(bin().args(args(&full)).stdout(Stdio::null()).status().unwrap().success());
    for wait in [1500, 3000] {
        let _ = fs::remove_file(&part);
        let mut child = bin().args(args(&part)).stdout(Stdio::null()).spawn().unwrap();
        std::thread::sleep(Duration::from_millis(wait));
        let _ = child.kill();
        child.wait().unwrap();
        let st = bin().args(args(&part)).arg("--resume").stdout(Stdio::null()).status().unwrap();
        assert!(st.success());
        assert_eq!(fs::read(&part).unwrap(), fs::read(&full).unwrap(), "killed after {wait} ms");
    }
}

#[test]
fn worker_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for jobs in ["1", "3"] {
        let p = dir.path().join(format!("j{jobs}.db"));
        let st = bin()
            .args(["--jobs", jobs, "enumerate", "--dim", "4", "--max-volume", "5", "--out"])
            .arg(&p)
            .stdout(Stdio::null())
            .status()
            .unwrap();
        assert!(st.success());
        files.push(fs::read(&p).unwrap());
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.db");
    let bad = dir.path().join("bad.db");
    let run = |args: &[&str]| bin().args(args).stdout(Stdio::null()).stderr(Stdio::null()).status().unwrap().code();
    let g = good.to_str().unwrap();
    let b = bad.to_str().unwrap();
    assert_eq!(run(&["enumerate", "--dim", "3", "--max-volume", "4", "--out", g]), Some(0));
    assert_eq!(run(&["enumerate", "--dim", "3", "--max-volume", "4", "--no-dedup", "--out", b]), Some(0));
    assert_eq!(run(&["verify", "--in", g]), Some(0));
    assert_eq!(run(&["verify", "--in", b, "--props", "spanning"]), Some(1));
    assert_eq!(run(&["diff", g, g]), Some(0));
    assert_eq!(run(&["diff", g, b]), Some(1));
    assert_eq!(run(&["enumerate", "--dim", "3"]), Some(2));
    assert_eq!(run(&["stats", "--in", g, "--props", "nonsense"]), Some(2));
    assert_eq!(run(&["hstar", "--in", "/nonexistent/db"]), Some(2));
    assert_eq!(run(&["frobnicate"]), Some(2));

    let csv = dir.path().join("h.csv");
    assert_eq!(run(&["hstar", "--in", g, "--out", csv.to_str().unwrap()]), Some(0));
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("key,volume,points,interior,h0,h1,h2,h3,degree"));
    assert_eq!(lines.next(), Some("3;1;1;0;0;0;1;0;0;0;1,1,4,0,1,0,0,0,0"));
    assert_eq!(text.lines().count(), 1 + 27);

    let csv = dir.path().join("a.csv");
    assert_eq!(run(&["analyze", "--in", g, "--props", "spanning,smooth", "--out", csv.to_str().unwrap()]), Some(0));
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().nth(1), Some("3;1;1;0;0;0;1;0;0;0;1,1,4,true,,,,,true"));
}
