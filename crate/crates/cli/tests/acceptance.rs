//! One pass/fail line per acceptance criterion. Exits non-zero if any fails.

use std::process::Command;
use std::time::Instant;
use waring::acceptance::{self, Outcome, Status, COUNT};
use waring::comparable;

const SEED: u64 = 0;

/// `verify` run twice through the binary, compared with timestamps and
/// timings blanked.
fn reproducibility() -> Outcome {
    let start = Instant::now();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_waring"))
            .args(["verify", "--quick", "--seed", &SEED.to_string()])
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    let (ta, tb) = (String::from_utf8_lossy(&a.stdout), String::from_utf8_lossy(&b.stdout));
    let same = !ta.is_empty() && comparable(&ta) == comparable(&tb) && a.status.code() == b.status.code();
    Outcome {
        id: 14,
        name: acceptance::name(14),
        status: if same { Status::Pass } else { Status::Fail },
        detail: format!(
            "two `verify --quick` runs {} ({} bytes, exit {:?})",
            if same { "byte-identical" } else { "differ" },
            ta.len(),
            a.status.code()
        ),
        quick: false,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn main() {
    let mut failed = Vec::new();
    for id in 1..=COUNT {
        let o = if id == 14 { reproducibility() } else { acceptance::run(id, SEED) };
        println!("criterion {} ({:.2}s)", o.line(), o.seconds);
        if !o.passed() {
            failed.push(id);
        }
    }
    println!(
        "acceptance: {} of {COUNT} criteria pass{}",
        COUNT as usize - failed.len(),
        if failed.is_empty() {
            String::new()
        } else {
            format!("; failing: {failed:?}")
        }
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
