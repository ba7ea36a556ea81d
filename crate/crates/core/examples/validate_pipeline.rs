//! Full comparison for one scheme: solver optimum, exact errors, length
//! bound, and the finite-blocklength converse at a large n.

use vldht::exponent::{delta_n, ExponentQuery, SolverOptions, SourceModel};
use vldht::prob::Channel;
use vldht::scheme::{SchemeConfig, SchemeParams};
use vldht::sim::{exact_enumerate, theory_report, ConverseSettings};

fn main() -> vldht::Result<()> {
    let model = SourceModel::dsbs(0.1)?;
    let scheme = SchemeParams::build(&model, &Channel::bsc(0.25)?, SchemeConfig::new(12, 0.2, 0.4, 0))?;
    let measured = exact_enumerate(&scheme)?;
    let query = ExponentQuery::new(0.2, scheme.design_rate())?;
    let report = theory_report(
        &scheme,
        &measured,
        &query,
        &SolverOptions::default(),
        Some(ConverseSettings { n: 100_000, eta: 0.01 }),
    )?;
    for c in &report.checks {
        println!("{:<16} {:?}  {}", c.name, c.passed, c.detail);
    }
    println!("all passed: {}", report.all_passed());

    for n in [10u64, 100, 1000, 100_000] {
        println!("delta_n(0.1, 0, {n}) = {:.6}", delta_n(0.1, 0.0, n, 2)?.delta_n);
    }
    Ok(())
}
