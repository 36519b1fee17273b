//! The annealed rate as a quenched rate in a tilted environment plus the
//! entropy cost of that tilt.

use cgmldp::annealed_entropy::{entropy_decomposition_residual, mean_tilt_comparison, optimal_tilts, tilt_objective};
use cgmldp::rate::annealed_j;
use cgmldp::{Direction, ParameterLaw};

fn main() -> cgmldp::Result<()> {
    let alpha = ParameterLaw::discrete(vec![(0.5, 0.5), (1.5, 0.5)])?;
    let beta = ParameterLaw::discrete(vec![(0.7, 0.3), (1.2, 0.7)])?;
    let dir = Direction::new(1.0, 1.0)?;

    for r in [4.0, 5.0, 7.0] {
        let pair = optimal_tilts(&alpha, &beta, dir, r)?;
        let residual = entropy_decomposition_residual(&alpha, &beta, dir, r)?;
        println!(
            "r = {r}: J = {}, H1 = {}, H2 = {}, residual {residual:.2e}",
            annealed_j(&alpha, &beta, dir, r)?.value,
            pair.h1,
            pair.h2
        );
        println!("    nu1 atoms {:?}", pair.nu1.as_law().and_then(|l| l.atoms()));
    }

    // any other tilt costs at least as much
    let uneven = ParameterLaw::discrete(vec![(0.5, 0.8), (1.5, 0.2)])?;
    println!("uneven tilt at r = 5: {}", tilt_objective(&alpha, &beta, &uneven, &beta, dir, 5.0)?);

    let size_biased = mean_tilt_comparison(&alpha, &beta, dir)?;
    println!(
        "size-biased alpha: g {:.6} -> {:.6}, entropy {}",
        size_biased.g_base, size_biased.g_tilt, size_biased.entropy
    );
    Ok(())
}
