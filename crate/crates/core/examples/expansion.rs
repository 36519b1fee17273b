//! Small-deviation behaviour of J(g + ε) in the concave and linear regions,
//! compared with the rate function itself.

use cgmldp::rate::{expansion, right_tail};
use cgmldp::{shape_function, Direction, Kind, ParameterLaw};

fn main() -> cgmldp::Result<()> {
    let alpha = ParameterLaw::poly(1.0, 2.0, 3)?;
    let beta = ParameterLaw::point_mass(1.0)?;

    for dir in [Direction::new(1.0, 1.0)?, Direction::new(1.0, 0.05)?] {
        let (g, _) = shape_function(&alpha, &beta, dir);
        for kind in [Kind::Quenched, Kind::Annealed] {
            let report = expansion(kind, &alpha, &beta, dir)?;
            println!(
                "({}, {}) {kind:?}: {:?}, J ~ {:?} eps^{}",
                dir.s, dir.t, report.region, report.coefficient, report.exponent
            );
            if let Some(c) = report.coefficient {
                for eps in [1e-2, 1e-3, 1e-4, 1e-5] {
                    let j = right_tail(kind, &alpha, &beta, dir, g + eps)?.value.value();
                    println!(
                        "    eps {eps:.0e}: J = {j:.6e}, ratio to prediction {:.4}",
                        j / (c * eps.powf(report.exponent))
                    );
                }
            }
        }
    }
    Ok(())
}
