use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minmaxcc")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Fresh scratch directory per test.
fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("minmaxcc-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn exact_on_triangle() {
    let dir = scratch("exact");
    let k3 = write(&dir, "k3.sgc", "sgc 3\n1 2\n");
    let o = bin(&["exact", "cc", "--input", &k3]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("OPT 1\n"));

    let mc = write(&dir, "p.mc", "mc 3 2 1\n0 1 1\n1 2 1\n0 2\n");
    let o = bin(&["exact", "mc", "--input", &mc]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("OPT 1\n"));
}

#[test]
fn solve_output_verifies() {
    let dir = scratch("solve");
    let g = bin(&["gen", "planted", "7", "2", "0.1", "--seed", "4"]);
    let inst = write(&dir, "g.sgc", &stdout(&g));
    let sol = dir.join("g.sol");
    let o = bin(&["solve", "cc", "--input", &inst, "--seed", "1", "--out", sol.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = bin(&["verify", "--instance", &inst, "--solution", sol.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).starts_with("OK max_cost "));

    // Non-complete input goes through the reduction.
    let sparse = write(&dir, "s.sg", "sg 4 3\n0 1 +\n1 2 - 2\n2 3 +\n");
    let o = bin(&["solve", "cc", "--input", &sparse]);
    assert_eq!(o.status.code(), Some(0));
    let sol = write(&dir, "s.sol", &stdout(&o));
    assert_eq!(bin(&["verify", "--instance", &sparse, "--solution", &sol]).status.code(), Some(0));

    let mc = write(&dir, "grid.mc", &stdout(&bin(&["gen", "grid-mc", "2", "3", "2", "--seed", "5"])));
    for extra in [&[][..], &["--k", "2", "--constrained"][..]] {
        let mut args = vec!["solve", "mc", "--input", mc.as_str()];
        args.extend_from_slice(extra);
        let o = bin(&args);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let sol = write(&dir, "grid.sol", &stdout(&o));
        assert_eq!(bin(&["verify", "--instance", &mc, "--solution", &sol]).status.code(), Some(0));
    }
}

#[test]
fn same_seed_same_bytes() {
    let dir = scratch("det");
    let inst = write(&dir, "r.sgc", &stdout(&bin(&["gen", "random-signed", "8", "0.5", "--seed", "9"])));
    let a = bin(&["solve", "cc", "--input", &inst, "--seed", "3"]);
    let b = bin(&["solve", "cc", "--input", &inst, "--seed", "3"]);
    assert_eq!(a.stdout, b.stdout);
    let c1 = bin(&["bench", "--suite", "small-mc", "--seed", "2"]);
    let c2 = bin(&["bench", "--suite", "small-mc", "--seed", "2"]);
    assert_eq!(c1.status.code(), Some(0));
    assert_eq!(c1.stdout, c2.stdout);
    assert!(stdout(&c1).starts_with("suite,index,kind,n,seed,heuristic,opt,ratio,lp_bound,wall_ms\n"));
}

#[test]
fn bad_inputs_exit_one() {
    let dir = scratch("bad");
    let k3 = write(&dir, "k3.sgc", "sgc 3\n1 2\n");
    let not_partition = write(&dir, "bad.sol", "0 1\n");
    let o = bin(&["verify", "--instance", &k3, "--solution", &not_partition]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());

    let self_loop = write(&dir, "loop.sg", "sg 2 1\n0 0 +\n");
    assert_eq!(bin(&["solve", "cc", "--input", &self_loop]).status.code(), Some(1));
    assert_eq!(bin(&["exact", "cc", "--input", &dir.join("missing").to_string_lossy()]).status.code(), Some(1));
    assert_eq!(bin(&["solve"]).status.code(), Some(1));
}

#[test]
fn oracle_size_guard_exits_two() {
    let dir = scratch("big");
    let big = write(&dir, "big.sgc", "sgc 14\n");
    let o = bin(&["exact", "cc", "--input", &big]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reduce_writes_multicut() {
    let dir = scratch("reduce");
    let k3 = write(&dir, "k3.sgc", "sgc 3\n1 2\n");
    let o = bin(&["reduce", "--input", &k3]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("mc 4 3 1\n"));
    let mc = write(&dir, "k3.mc", &text);
    assert!(stdout(&bin(&["exact", "mc", "--input", &mc])).starts_with("OPT 1\n"));
}
