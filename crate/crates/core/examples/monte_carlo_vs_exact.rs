//! Runs the coding scheme at n = 8 and compares simulated error
//! probabilities with exact enumeration.

use vldht::exponent::SourceModel;
use vldht::prob::Channel;
use vldht::scheme::{SchemeConfig, SchemeParams};
use vldht::sim::{exact_enumerate, simulate, TrialPlan};

fn main() -> vldht::Result<()> {
    let model = SourceModel::dsbs(0.1)?;
    let scheme = SchemeParams::build(&model, &Channel::bsc(0.25)?, SchemeConfig::new(8, 0.2, 0.25, 0))?;
    println!(
        "{} codewords, I(U;X) = {:.4}, I(U;Y) = {:.4}",
        scheme.codebook().size(),
        scheme.i_ux(),
        scheme.i_uy()
    );
    let exact = exact_enumerate(&scheme)?;
    let mc = simulate(&scheme, &TrialPlan::new(200_000, 42));
    println!("exact:       {}", serde_json::to_string(&exact)?);
    println!("monte-carlo: {}", serde_json::to_string(&mc)?);
    Ok(())
}
