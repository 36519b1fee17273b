//! Increment stationarity in the model with boundary weights.

use cgmldp::lattice_sim::burke_check;
use cgmldp::ParameterLaw;

fn main() -> cgmldp::Result<()> {
    let alpha = ParameterLaw::uniform(0.5, 1.5)?;
    let beta = ParameterLaw::discrete(vec![(0.8, 0.5), (1.6, 0.5)])?;
    let report = burke_check(&alpha, &beta, 0.2, 12, 12, 2000, 5)?;
    for stat in report.row_increments.iter().take(4) {
        println!(
            "row {:>2}: mean {:.4} expected {:.4} z {:+.2}",
            stat.index, stat.mean, stat.expected_mean, stat.z_score
        );
    }
    println!(
        "means pass: {}, {} correlation pairs with max |z| {:.2}, correlations pass: {}",
        report.means_pass, report.correlations.pairs, report.correlations.max_abs_z, report.correlations_pass
    );
    Ok(())
}
