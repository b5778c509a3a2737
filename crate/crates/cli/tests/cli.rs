use std::path::Path;
use std::process::{Command, Output};

fn run(exe: &str, dir: &Path, args: &str) -> Output {
    Command::new(exe).current_dir(dir).args(args.split_whitespace()).output().expect("spawn")
}

fn pro(dir: &Path, rest: &str) -> Output {
    run(env!("CARGO_BIN_EXE_pro_sphwv"), dir, &format!("-max_memory 4096 -prec 100 -verbose n -c 2 -m 1 -n 3 {rest}"))
}

fn obl(dir: &Path, rest: &str) -> Output {
    run(env!("CARGO_BIN_EXE_obl_sphwv"), dir, &format!("-max_memory 4096 -prec 100 -verbose n -c 2 -m 1 -n 3 {rest}"))
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(pro(dir.path(), "-w lambda").status.code(), Some(0));
    assert_eq!(pro(dir.path(), "-w bogus").status.code(), Some(2));
    assert_eq!(pro(dir.path(), "-w Q").status.code(), Some(2));
    assert_eq!(pro(dir.path(), "-w S1 -a -2 -b 0 -d 1").status.code(), Some(3));
    let zero_c = run(
        env!("CARGO_BIN_EXE_pro_sphwv"),
        dir.path(),
        "-max_memory 4096 -prec 100 -verbose n -c 0 -m 0 -n 0 -w k1",
    );
    assert_eq!(zero_c.status.code(), Some(3));
    let tight = run(
        env!("CARGO_BIN_EXE_obl_sphwv"),
        dir.path(),
        "-max_memory 0 -prec 100 -verbose n -c 2 -m 0 -n 0 -w lambda",
    );
    assert_eq!(tight.status.code(), Some(5));
}

#[test]
fn quantities_land_in_the_data_directory() {
    let dir = tempfile::tempdir().unwrap();
    assert!(obl(dir.path(), "-w everything").status.success());
    for tag in ["lambda", "dr", "dr_neg", "N", "F", "k1", "k2", "c2k", "Q", "B2r"] {
        let f = dir.path().join(format!("data/obl_00002000_001_003_{tag}.txt"));
        let text = std::fs::read_to_string(&f).unwrap_or_else(|_| panic!("{} missing", f.display()));
        assert!(text.trim_end().ends_with("# end"), "{tag}");
    }
}

#[test]
fn rows_and_digits() {
    let dir = tempfile::tempdir().unwrap();
    let out = pro(dir.path(), "-w S1 -a -1 -b 1 -d 0.5 -p 12");
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 5);
    for row in rows {
        let fields: Vec<&str> = row.split_whitespace().collect();
        assert_eq!(fields.len(), 3);
        // dS1/deta is infinite at eta = +-1 when m = 1
        for f in fields.into_iter().filter(|f| !f.ends_with("inf")) {
            let mantissa = f.split(['e', 'E']).next().unwrap();
            let digits = mantissa.chars().filter(|c| c.is_ascii_digit()).count();
            assert_eq!(digits, 12, "{f}");
        }
    }

    let out = obl(dir.path(), "-w R -a 0 -b 2 -d 1 -which R1_1,R2_2");
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<&str>> =
        text.lines().filter(|l| !l.starts_with('#')).map(|l| l.split_whitespace().collect()).collect();
    assert_eq!(rows.len(), 3);
    // t, two value/derivative pairs, the chosen pair, the Wronskian error
    assert!(rows.iter().all(|r| r.len() == 7));
    // R1_1 is undefined at xi = 0
    assert_eq!(&rows[0][1..3], &["nan", "nan"]);
}

#[test]
fn repeated_runs_are_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cmd = "-w R -a 1.5 -b 3 -d 0.5";
    let first = pro(a.path(), cmd);
    let again = pro(a.path(), cmd);
    let fresh = pro(b.path(), cmd);
    assert!(first.status.success());
    assert_eq!(first.stdout, again.stdout);
    assert_eq!(first.stdout, fresh.stdout);
}
