use std::process::{Command, ExitCode};
use std::time::Instant;

use bkss_cli::checks::{self, Check};
use serde_json::Value;

fn bkss(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_bkss")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

/// The binary must tell the same story as the library for the low-degree maps.
fn low_degree_cli(c: &mut Check) {
    let (code, two) = bkss(&["d1", "--p", "2"]);
    if code != 0 || !two.contains("map: isomorphism") || !two.contains("d1(y(1)) = -x(1,2)") {
        c.passed = false;
        c.failures.push(format!("`d1 --p 2` exited {code}:\n{two}"));
    }
    let (code, three) = bkss(&["d1", "--p", "3"]);
    let cancel = "x(2,3) - (x(1,3) + x(2,3)) + (x(1,2) + x(1,3)) - x(1,2) = 0";
    if code != 0 || !three.contains("map: zero") || !three.contains(cancel) {
        c.passed = false;
        c.failures.push(format!("`d1 --p 3` exited {code}:\n{three}"));
    }
}

fn second_page_cli(c: &mut Check) {
    for (p, want) in [("0", "0"), ("1", "0"), ("2", "0"), ("3", "Z")] {
        let (code, out) = bkss(&["e2", "--p", p]);
        if code != 0 || out.lines().next() != Some(&format!("E2({p},{p}) = {want}")) {
            c.passed = false;
            c.failures.push(format!("`e2 --p {p}` exited {code}: {out}"));
        }
    }
    for p in ["4", "5"] {
        let (code, out) = bkss(&["e2", "--p", p, "--format", "json"]);
        let v: Value = match serde_json::from_str(&out) {
            Ok(v) => v,
            Err(e) => {
                c.passed = false;
                c.failures.push(format!("`e2 --p {p}` json: {e}"));
                continue;
            }
        };
        let cert = &v["certificates"];
        let ok = code == 0
            && v["e2_invariant_factors"].is_array()
            && v["d1_matrix_rank"].is_u64()
            && cert["equal"] == Value::Bool(true)
            && cert["image_in_stu2"] == Value::Bool(true)
            && cert["stu2_in_image"] == Value::Bool(true);
        if !ok {
            c.passed = false;
            c.failures.push(format!("`e2 --p {p}` exited {code}: {out}"));
        }
    }
}

fn main() -> ExitCode {
    let mut all = true;
    for id in 1..=10u8 {
        let start = Instant::now();
        let mut c = match checks::run(id) {
            Ok(c) => c,
            Err(e) => {
                println!("criterion {id}: FAIL: error ({e:#})");
                all = false;
                continue;
            }
        };
        match id {
            1 => low_degree_cli(&mut c),
            8 => second_page_cli(&mut c),
            _ => {}
        }
        println!("{}", c.line());
        for f in &c.failures {
            println!("    {f}");
        }
        eprintln!("    took {:.2?}", start.elapsed());
        all &= c.passed;
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
