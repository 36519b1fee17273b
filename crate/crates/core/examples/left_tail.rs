//! Entropy cost of moving the shape value into an interval below it.

use cgmldp::annealed_entropy::left_tail_bound;
use cgmldp::{shape_function, Direction, ParameterLaw};

fn main() -> cgmldp::Result<()> {
    let alpha = ParameterLaw::discrete(vec![(0.5, 0.5), (1.5, 0.5)])?;
    let beta = ParameterLaw::point_mass(1.0)?;
    let dir = Direction::new(1.0, 1.0)?;
    let (g, _) = shape_function(&alpha, &beta, dir);
    println!("g = {g:.6}");
    for (x, y) in [(g - 0.1, g + 0.1), (2.0, 2.2), (1.8, 2.0), (1.0, 1.5)] {
        println!("({x:.3}, {y:.3}): {}", left_tail_bound(&alpha, &beta, dir, x, y)?);
    }
    Ok(())
}
