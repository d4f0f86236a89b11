//! Searching for a translate `A = -(A^c) + z` and, when one exists, checking
//! the resulting anti-isomorphism `ψ` of product systems.

use carflow::car_flow::symmetry_witness;
use carflow::lattice::{symmetry_check, ConeSpec, Halfspace, ModuleSpec, Point, Window};
use carflow::rng::SplitMix64;

fn main() -> carflow::Result<()> {
    let quadrant = ModuleSpec::halfspaces(
        2,
        vec![
            Halfspace {
                normal: Point::from([1, 0]),
                offset: 0,
            },
            Halfspace {
                normal: Point::from([0, 1]),
                offset: 0,
            },
        ],
    );
    let cases = [
        (
            "half-line",
            ModuleSpec::halfspace([1], 0),
            ConeSpec::orthant(1),
            Window::new([-8], [8])?,
            Window::new([0], [7])?,
        ),
        (
            "half-plane",
            ModuleSpec::halfspace([1, 1], 0),
            ConeSpec::orthant(2),
            Window::cube(2, -3, 3)?,
            Window::new([-1, -1], [2, 1])?,
        ),
        (
            "quadrant",
            quadrant,
            ConeSpec::orthant(2),
            Window::cube(2, -4, 4)?,
            Window::new([0, 0], [2, 3])?,
        ),
    ];
    let mut rng = SplitMix64::new(6);
    for (name, module, cone, window, flow_window) in cases {
        let search = Window::cube(cone.dim(), -5, 5)?;
        let verdict = symmetry_check(&module, &search, &window);
        match verdict.witness {
            Some(z) => {
                let r = symmetry_witness(
                    &module,
                    &cone,
                    &z,
                    &flow_window,
                    cone.generators(),
                    20,
                    &mut rng,
                )?;
                println!(
                    "{name}: z = {z}, ψ residual {:.2e}, norm defect {:.2e}",
                    r.max_residual, r.max_norm_defect
                );
            }
            None => println!("{name}: no witness in box"),
        }
    }
    Ok(())
}
