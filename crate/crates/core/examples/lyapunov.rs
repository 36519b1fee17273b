//! Quenched and annealed Lyapunov exponents across the admissible range of λ.

use cgmldp::lyapunov::{critical_lambdas, l_prime, lyapunov_exponent};
use cgmldp::{Direction, Kind, ParameterLaw};

fn main() -> cgmldp::Result<()> {
    let alpha = ParameterLaw::discrete(vec![(1.0, 0.5), (2.0, 0.5)])?;
    let beta = ParameterLaw::point_mass(1.0)?;
    let dir = Direction::new(1.0, 2.0)?;

    for kind in [Kind::Quenched, Kind::Annealed] {
        let crit = critical_lambdas(kind, &alpha, &beta, dir);
        println!("{kind:?}: lambda1 = {:.6}, lambda2 = {:.6}", crit.lambda1, crit.lambda2);
        for k in 1..=7 {
            let lambda = 0.25 * k as f64;
            let point = lyapunov_exponent(kind, &alpha, &beta, dir, lambda)?;
            let slope = l_prime(kind, &alpha, &beta, dir, lambda)?;
            println!(
                "  lambda {lambda:.2}  L = {:<22} L' = {slope:<10.6} zhat = {:.6} ({:?})",
                point.value.to_string(),
                point.zhat,
                point.boundary
            );
        }
    }
    Ok(())
}
