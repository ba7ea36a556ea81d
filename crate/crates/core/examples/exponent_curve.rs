//! The optimal exponent as a function of the expected rate, for several
//! type-I budgets, checked against the exhaustive grid at one point.

use vldht::exponent::{
    grid_oracle, solve_exponent, sweep_curve, write_curve_csv, ExponentQuery, GridOptions,
    SolverOptions, SourceModel,
};

fn main() -> vldht::Result<()> {
    let model = SourceModel::dsbs(0.1)?;
    let opts = SolverOptions::default();
    let rates: Vec<f64> = (0..=10).map(|k| 0.1 * k as f64).collect();
    for eps in [0.0, 0.25, 0.5] {
        let curve = sweep_curve(&model, eps, &rates, &opts)?;
        println!("epsilon = {eps}");
        write_curve_csv(std::io::stdout(), &curve)?;
    }

    let q = ExponentQuery::new(0.2, 0.4)?;
    let solved = solve_exponent(&model, &q, &opts)?;
    let grid = grid_oracle(&model, &q, &GridOptions { u_alphabet: Some(2), ..GridOptions::with_resolution(0.01) })?;
    println!(
        "theta(0.2, 0.4): solver {:.9}, grid at 0.01 {:.9}, I(X;Y) = {:.9}",
        solved.theta,
        grid.theta,
        model.mutual_information()
    );
    Ok(())
}
