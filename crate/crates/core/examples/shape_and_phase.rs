//! Shape function and phase portrait for a law whose row rates pile up near
//! their lower edge, so some directions leave the concave region.

use cgmldp::{phase_portrait, shape_function, Direction, ParameterLaw};

fn main() -> cgmldp::Result<()> {
    let alpha = ParameterLaw::poly(1.0, 2.0, 3)?;
    let beta = ParameterLaw::point_mass(1.0)?;

    let portrait = phase_portrait(&alpha, &beta, Direction::new(1.0, 1.0)?);
    println!("c1 = {}, c2 = {}", portrait.c1, portrait.c2);

    println!("{:>6} {:>12} {:>12}  region", "t/s", "g", "zeta");
    for ratio in [0.05, 0.1, 0.125, 0.25, 1.0, 4.0, 16.0] {
        let dir = Direction::new(1.0, ratio)?;
        let (g, zeta) = shape_function(&alpha, &beta, dir);
        let region = phase_portrait(&alpha, &beta, dir).region;
        println!("{ratio:>6} {g:>12.8} {zeta:>12.8}  {region:?}");
    }
    Ok(())
}
