//! Acceptance run: one PASS/FAIL line per criterion.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::criteria::{self, Outcome};

type Check<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() -> ExitCode {
    let reg = common::registry();
    let checks: Vec<Check> = vec![
        ("corpus verification", Box::new(|| criteria::corpus_verification(&reg))),
        ("singular-space dimensions", Box::new(|| criteria::singular_dimensions(&reg))),
        ("psi reproduction", Box::new(|| criteria::psi_reproduction(&reg))),
        ("group lower bounds", Box::new(criteria::lower_bounds)),
        ("fusion table and symmetries", Box::new(|| criteria::fusion_table(&reg))),
        ("property suites", Box::new(|| criteria::property_suites(&reg))),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in checks.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail}; {secs:.1}s)", i + 1),
            Err(why) => {
                println!("criterion {}: FAIL {name} ({why}; {secs:.1}s)", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 6 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
