mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use common::{fixture, image_tree};

fn dermbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dermbench"))
        .args(args)
        .env_remove("DERMBENCH_SEED")
        .output()
        .expect("binary runs")
}

fn ok(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}\nstdout:\n{}\nstderr:\n{}",
        out.status.code(),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn manifest_build_then_split() {
    let tree = image_tree();
    let work = tempfile::tempdir().unwrap();
    let manifest = work.path().join("manifest.csv");
    let meta = fixture("ham10000_metadata.csv");
    let index = fixture("ph2_index.csv");
    let stdout = ok(&dermbench(&[
        "manifest",
        "build",
        "--ham10000-meta",
        s(&meta),
        "--ham10000-images",
        s(&tree.ham),
        "--ph2-index",
        s(&index),
        "--ph2-images",
        s(&tree.ph2),
        "-o",
        s(&manifest),
    ]));
    assert!(stdout.contains("10135"), "{stdout}");
    assert_eq!(fs::read_to_string(&manifest).unwrap().lines().count(), 10136);

    let split_a = work.path().join("a.csv");
    let split_b = work.path().join("b.csv");
    ok(&dermbench(&[
        "split",
        "--manifest",
        s(&manifest),
        "--seed",
        "11",
        "-o",
        s(&split_a),
    ]));
    // The environment supplies the seed when the flag is absent.
    let env_run = Command::new(env!("CARGO_BIN_EXE_dermbench"))
        .args(["split", "--manifest", s(&manifest), "-o", s(&split_b)])
        .env("DERMBENCH_SEED", "11")
        .output()
        .unwrap();
    ok(&env_run);
    assert_eq!(fs::read(&split_a).unwrap(), fs::read(&split_b).unwrap());

    // The flag wins over the environment.
    let split_c = work.path().join("c.csv");
    let flag_run = Command::new(env!("CARGO_BIN_EXE_dermbench"))
        .args(["split", "--manifest", s(&manifest), "--seed", "11", "-o", s(&split_c)])
        .env("DERMBENCH_SEED", "12")
        .output()
        .unwrap();
    ok(&flag_run);
    assert_eq!(fs::read(&split_a).unwrap(), fs::read(&split_c).unwrap());

    let grouped = work.path().join("g.csv");
    let stdout = ok(&dermbench(&[
        "split",
        "--manifest",
        s(&manifest),
        "--seed",
        "11",
        "--group-by-lesion",
        "-o",
        s(&grouped),
    ]));
    assert!(stdout.contains("lesion leakage across splits: false"), "{stdout}");
}

#[test]
fn preprocess_writes_images_and_manifest() {
    let work = tempfile::tempdir().unwrap();
    let img = work.path().join("ISIC_1.png");
    image::RgbImage::from_fn(450, 600, |x, y| image::Rgb([x as u8, y as u8, 7]))
        .save(&img)
        .unwrap();
    let manifest = work.path().join("m.csv");
    fs::write(
        &manifest,
        format!(
            "image_id,path,source,label,lesion_id,split\nISIC_1,{},HAM10000,MEL,HAM_1,TEST\n",
            s(&img)
        ),
    )
    .unwrap();
    let out = work.path().join("out");
    ok(&dermbench(&[
        "preprocess",
        "--manifest",
        s(&manifest),
        "--size",
        "299x299",
        "-o",
        s(&out),
    ]));
    let text = fs::read_to_string(out.join("manifest.csv")).unwrap();
    assert!(text.lines().next().unwrap().ends_with(",checksum"));
    let decoded = image::open(out.join("ISIC_1.png")).unwrap();
    assert_eq!((decoded.width(), decoded.height()), (299, 299));
}

#[test]
fn eval_writes_all_artifacts() {
    let out = tempfile::tempdir().unwrap();
    let perfect = fixture("scores_perfect.csv");
    let uniform = fixture("scores_uniform.csv");
    let stdout = ok(&dermbench(&[
        "--out-dir",
        s(out.path()),
        "eval",
        "--scores",
        s(&perfect),
        s(&uniform),
        "--name",
        "perfect",
        "--name",
        "uniform",
    ]));
    assert!(stdout.contains(&format!("perfect{}", ",100.00".repeat(10))), "{stdout}");
    assert!(stdout.contains(&format!("uniform{}", ",50.00".repeat(10))), "{stdout}");
    for f in ["table1.csv", "table2.csv"] {
        assert!(out.path().join(f).is_file(), "{f}");
    }
    for f in [
        "confusion_counts.csv",
        "confusion_normalized.csv",
        "roc_MEL.csv",
        "roc_MEL.svg",
        "roc_micro.csv",
        "roc_macro.csv",
        "roc_all.svg",
        "report.json",
    ] {
        assert!(out.path().join("perfect").join(f).is_file(), "{f}");
    }

    let md = tempfile::tempdir().unwrap();
    ok(&dermbench(&[
        "--format",
        "md",
        "--out-dir",
        s(md.path()),
        "eval",
        "--scores",
        s(&perfect),
    ]));
    let table = fs::read_to_string(md.path().join("table1.md")).unwrap();
    assert!(table.starts_with("| Algorithm |"), "{table}");
}

#[test]
fn compare_reproduces_reader_row() {
    let out = tempfile::tempdir().unwrap();
    let stdout = ok(&dermbench(&[
        "--out-dir",
        s(out.path()),
        "compare",
        "--scores",
        s(&fixture("scores_mixed.csv")),
        "--operators",
        s(&fixture("operators.csv")),
    ]));
    assert!(stdout.contains("Dermatologist,82.26,88.82"), "{stdout}");
    for f in [
        "table3.csv",
        "comparison.csv",
        "comparison.json",
        "roc_vs_operators_MEL.svg",
        "roc_vs_operators_BCC.svg",
    ] {
        assert!(out.path().join(f).is_file(), "{f}");
    }
}

#[test]
fn exit_codes() {
    let out = tempfile::tempdir().unwrap();
    // missing file: I/O error
    let r = dermbench(&[
        "--out-dir",
        s(out.path()),
        "eval",
        "--scores",
        "/nonexistent/scores.csv",
    ]);
    assert_eq!(r.status.code(), Some(2));

    // usage errors count as validation errors
    assert_eq!(dermbench(&["eval", "--no-such-flag"]).status.code(), Some(1));
    assert_eq!(dermbench(&["--help"]).status.code(), Some(0));

    // malformed content: validation error
    let bad = out.path().join("bad.csv");
    fs::write(
        &bad,
        "image_id,true_label,MEL,NV,BCC,AKIEC,BKL,DF,VASC,ATYP_NV\na,MEL,0.9,0,0,0,0,0,0,0\n",
    )
    .unwrap();
    let r = dermbench(&["--out-dir", s(out.path()), "eval", "--scores", s(&bad)]);
    assert_eq!(r.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&r.stderr).contains("row 2"));

    let r = dermbench(&[
        "split",
        "--manifest",
        "m.csv",
        "--seed",
        "1",
        "--fractions",
        "0.5,0.5,0.5",
        "-o",
        "x.csv",
    ]);
    assert_eq!(r.status.code(), Some(1));

    // operator class with no samples in the scores
    let ops = out.path().join("ops.csv");
    fs::write(&ops, "name,target_class,sensitivity,specificity\nr,DF,0.8,0.8\n").unwrap();
    let one = out.path().join("one.csv");
    fs::write(
        &one,
        "image_id,true_label,MEL,NV,BCC,AKIEC,BKL,DF,VASC,ATYP_NV\na,MEL,1,0,0,0,0,0,0,0\nb,NV,0,1,0,0,0,0,0,0\n",
    )
    .unwrap();
    let r = dermbench(&[
        "--out-dir",
        s(out.path()),
        "compare",
        "--scores",
        s(&one),
        "--operators",
        s(&ops),
        "--classes",
        "DF",
    ]);
    assert_eq!(r.status.code(), Some(1));
}
