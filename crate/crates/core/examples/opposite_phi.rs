//! The map `φ` onto the opposite product system: a signed permutation of
//! basis elements that reverses products.

use carflow::fock::{FockVector, OccupationMask};
use carflow::lattice::{ConeSpec, ModuleSpec, Point, Window};
use carflow::product_system::{
    fiber, phi_antihomomorphism_check, phi_map, Convention, PSElement, ShiftRep,
};
use carflow::rng::SplitMix64;

fn main() -> carflow::Result<()> {
    let rep = ShiftRep::new(ModuleSpec::halfspace([1], 0), ConeSpec::orthant(1));
    let e = PSElement::new(
        &rep,
        Point::from([3]),
        vec![Point::from([0]), Point::from([1])],
        FockVector::basis(2, OccupationMask::from_modes(&[0, 1]))?,
    )?;
    for convention in Convention::ALL {
        let image = phi_map(&rep, &e, convention)?;
        let modes: Vec<String> = image.modes().iter().map(Point::to_string).collect();
        let (_, amp) = image.vector().support().next().expect("basis image");
        println!(
            "{}: φ(δ0 ∧ δ1) = {:+} on modes {}",
            convention.name(),
            amp.re,
            modes.join(" ")
        );
    }

    let window = Window::new([0], [7])?;
    let mut rng = SplitMix64::new(4);
    let fx = fiber(&rep, &Point::from([2]), &window)?;
    let fy = fiber(&rep, &Point::from([3]), &window)?;
    for convention in Convention::ALL {
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let a = fx.random_element(&mut rng, None)?;
            let b = fy.random_element(&mut rng, None)?;
            worst = worst.max(phi_antihomomorphism_check(&rep, &a, &b, convention)?);
        }
        println!(
            "{}: max |φ(ab) - φ(b)φ(a)| = {worst:.2e}",
            convention.name()
        );
    }
    Ok(())
}
