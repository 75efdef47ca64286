#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

pub fn pathloss<P: AsRef<Path>>(dir: P, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pathloss"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("failed to launch pathloss")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Rows of the `fit` table: (location, [n, sigma, pl_d0, r2], samples).
pub fn fit_rows(o: &Output) -> Vec<(String, [f64; 4], usize)> {
    stdout(o)
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            let num = |i: usize| f[i].parse::<f64>().unwrap();
            (
                f[0].to_string(),
                [num(1), num(2), num(3), num(4)],
                f[5].parse().unwrap(),
            )
        })
        .collect()
}
