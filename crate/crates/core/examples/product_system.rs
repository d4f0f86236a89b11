//! Fibres of the product system on the half-line, both multiplications, and
//! the sign table of the embedding into intertwiners.

use carflow::lattice::{ConeSpec, ModuleSpec, Point, Window};
use carflow::product_system::{
    fiber, forward_product, opposite_product, sign_table, Convention, FlowContext, ShiftRep,
};
use carflow::rng::SplitMix64;

fn main() -> carflow::Result<()> {
    let rep = ShiftRep::new(ModuleSpec::halfspace([1], 0), ConeSpec::orthant(1));
    let window = Window::new([0], [7])?;
    let mut rng = SplitMix64::new(3);
    let (x, y) = (Point::from([2]), Point::from([3]));

    let fx = fiber(&rep, &x, &window)?;
    let fy = fiber(&rep, &y, &window)?;
    let modes: Vec<String> = fx.modes.iter().map(Point::to_string).collect();
    println!(
        "fibre at {x}: modes {}, dimension {}",
        modes.join(" "),
        fx.fock_dim()
    );

    let e1 = fx.random_element(&mut rng, None)?;
    let e2 = fy.random_element(&mut rng, None)?;
    for (name, product) in [
        ("forward", forward_product as fn(_, _, _) -> _),
        ("opposite", opposite_product),
    ] {
        let p = product(&rep, &e1, &e2)?;
        println!(
            "{name} product: base {}, {} modes, |e1 e2| - |e1||e2| = {:.2e}",
            p.base(),
            p.modes().len(),
            p.norm() - e1.norm() * e2.norm()
        );
    }

    let ctx = FlowContext::new(rep, window, 1 << 12)?;
    for convention in Convention::ALL {
        let table = sign_table(&ctx, &x, &y, convention, 1e-10, &mut rng)?;
        println!("{} sign table:", convention.name());
        for (key, sign) in &table.entries {
            println!(
                "  {key}: {}",
                sign.map_or("none".into(), |s| format!("{s:+}"))
            );
        }
    }
    Ok(())
}
