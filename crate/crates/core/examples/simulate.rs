//! Monte Carlo estimates against the analytic shape, Lyapunov exponent and
//! right-tail rate.

use cgmldp::lattice_sim::{mc_lyapunov_estimate, mc_shape_estimate, mc_tail_estimate, Mode};
use cgmldp::lyapunov::lyapunov_exponent;
use cgmldp::rate::right_tail;
use cgmldp::{shape_function, Direction, Kind, ParameterLaw};

fn main() -> cgmldp::Result<()> {
    let alpha = ParameterLaw::uniform(0.5, 1.5)?;
    let beta = ParameterLaw::point_mass(1.0)?;
    let dir = Direction::new(1.0, 1.0)?;
    let (n, reps, seed) = (200, 400, 3);

    let (g, _) = shape_function(&alpha, &beta, dir);
    let est = mc_shape_estimate(&alpha, &beta, dir, n, reps, seed, Mode::Quenched)?;
    // G/n sits below g at finite n; the quenched run also carries the noise of
    // its single environment
    println!("shape: analytic {g:.4}, simulated {:.4} ± {:.4}", est.mean, est.stderr);

    for (mode, kind) in [(Mode::Quenched, Kind::Quenched), (Mode::Annealed, Kind::Annealed)] {
        let lambda = 0.2;
        let exact = lyapunov_exponent(kind, &alpha, &beta, dir, lambda)?.value;
        let mc = mc_lyapunov_estimate(&alpha, &beta, dir, lambda, n, reps, seed, mode)?;
        println!("{kind:?} L({lambda}): analytic {exact:.4}, simulated {:.4}", mc.value);

        // polynomial prefactors dominate at this n; expect only the ordering
        let r = g + 0.1;
        let exact = right_tail(kind, &alpha, &beta, dir, r)?.value;
        let mc = mc_tail_estimate(&alpha, &beta, dir, r, 40, 4000, seed, mode)?;
        println!("{kind:?} J({r:.3}): analytic {exact:.4}, simulated at n = 40: {mc:.4}");
    }
    Ok(())
}
