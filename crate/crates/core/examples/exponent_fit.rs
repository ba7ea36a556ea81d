//! Exact type-II errors over growing blocklengths and the fitted exponent.

use vldht::exponent::SourceModel;
use vldht::prob::Channel;
use vldht::sim::{empirical_exponent, write_csv_rows, CsvRow};

fn main() -> vldht::Result<()> {
    let model = SourceModel::dsbs(0.1)?;
    let est = empirical_exponent(&model, &Channel::bsc(0.25)?, 0.2, 0.4, &[6, 8, 10, 12], 0)?;
    write_csv_rows(std::io::stdout(), &CsvRow::from_estimate(&est, 0), true)?;
    println!("-log2(beta_n)/n: {:?}", est.normalized_exponents());
    println!("slope {:.4}, I(U;Y) {:.4}", est.slope_bits, est.theory_theta);
    Ok(())
}
