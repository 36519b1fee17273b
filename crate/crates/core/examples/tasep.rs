//! Particle positions of the associated exclusion process and the rate for
//! the first particle's current.

use cgmldp::lattice_sim::{passage_times, sample_env, sample_weights, tasep_positions, Mode};
use cgmldp::rate::tasep_rate;
use cgmldp::{Kind, ParameterLaw};

fn main() -> cgmldp::Result<()> {
    let alpha = ParameterLaw::point_mass(0.5)?;
    let beta = ParameterLaw::uniform(0.5, 1.0)?;
    let env = sample_env(&alpha, &beta, 8, 60, 1, Mode::Quenched)?;
    let table = passage_times(&sample_weights(&env, 0));
    for t in [2.0, 5.0, 10.0] {
        let snap = tasep_positions(&table, t)?;
        println!("t = {t:>4}: {:?}", snap.positions);
    }
    for kind in [Kind::Quenched, Kind::Annealed] {
        println!("{kind:?} rate at (x, y) = (1, 1), t = 6: {}", tasep_rate(kind, &alpha, &beta, 1.0, 1.0, 6.0)?);
    }
    Ok(())
}
