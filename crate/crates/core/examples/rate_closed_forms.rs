//! Right-tail rate functions, checked against the closed forms available for
//! point-mass, two-point and uniform environments.

use cgmldp::rate::{closed_form_j_homogeneous, closed_form_j_twopoint, closed_form_j_uniform, quenched_j, right_tail};
use cgmldp::{shape_function, Direction, Kind, ParameterLaw};

type ClosedForm<'a> = &'a dyn Fn(f64) -> cgmldp::Result<f64>;

fn main() -> cgmldp::Result<()> {
    let dir = Direction::new(1.0, 1.0)?;

    // each closed form paired with the law it describes
    let half = ParameterLaw::point_mass(0.5)?;
    let two_point = ParameterLaw::two_point(0.5, 0.3, 1.5)?;
    let uniform = ParameterLaw::uniform(0.5, 1.5)?;
    let cases: [(&str, &ParameterLaw, ClosedForm); 3] = [
        ("delta 0.5", &half, &|r| closed_form_j_homogeneous(1.0, dir, r)),
        ("two-point", &two_point, &|r| closed_form_j_twopoint(0.3, 0.7, 0.5, 1.5, 1.0, r)),
        ("uniform", &uniform, &|r| closed_form_j_uniform(1.0, 1.0, 1.0, r)),
    ];

    for (name, law, closed) in cases {
        let (g, _) = shape_function(law, law, dir);
        println!("{name}: g = {g:.10}");
        for excess in [0.1, 0.5, 1.0, 4.0] {
            let r = g + excess;
            let eval = quenched_j(law, law, dir, r)?;
            println!(
                "    r = {r:<8.4} J = {:<14.10} closed form {:<14.10} ({:?})",
                eval.value.value(),
                closed(r)?,
                eval.regime
            );
        }
    }

    let annealed = right_tail(Kind::Annealed, &two_point, &two_point, dir, 3.0)?;
    println!("annealed two-point J(3) = {:.10} at lambda* = {:.6}", annealed.value.value(), annealed.lambda_star);
    Ok(())
}
