//! Legendre transform of the rate function recovers the Lyapunov exponent.

use cgmldp::rate::duality_check;
use cgmldp::{Direction, Kind, ParameterLaw};

fn main() -> cgmldp::Result<()> {
    let alpha = ParameterLaw::poly(1.0, 2.0, 2)?;
    let beta = ParameterLaw::discrete(vec![(0.5, 0.4), (1.0, 0.6)])?;
    let dir = Direction::new(2.0, 1.0)?;
    for kind in [Kind::Quenched, Kind::Annealed] {
        for lambda in [0.1, 0.5, 1.0, 1.4] {
            let d = duality_check(kind, &alpha, &beta, dir, lambda)?;
            println!(
                "{kind:?} lambda {lambda}: sup = {:.10}, L = {:.10}, residual {:.1e}",
                d.transform, d.exponent, d.residual
            );
        }
    }
    Ok(())
}
