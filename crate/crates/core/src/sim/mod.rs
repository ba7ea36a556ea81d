//! Measuring a scheme: Monte-Carlo estimates, the exact-enumeration oracle,
//! empirical exponents, and side-by-side comparison with the theory.

mod exact;
mod fit;
mod montecarlo;
mod report;
pub mod stats;
mod theory;

pub use exact::{exact_enumerate, exact_enumerate_guarded, pair_count, EXACT_GUARD};
pub use fit::empirical_exponent;
pub use montecarlo::{simulate, trial_rng, Hypotheses, TrialPlan};
pub use report::{write_csv_rows, CsvRow, ErrorReport, ExponentEstimate, ReportMode, CSV_HEADER};
pub use theory::{
    theory_report, CheckItem, ConverseSettings, TheoryReport, EXPONENT_GAP_TOLERANCE, TYPE_I_SLACK,
};
