//! The CAR flow `β_x` on a windowed half-plane: defining relation, unitality
//! on the range projection and the semigroup law.

use carflow::car_flow::{
    defining_relation_check, semigroup_check, unitality_residual, FlowContext,
};
use carflow::fock::SingleParticleVector;
use carflow::lattice::{ConeSpec, ModuleSpec, Point, Window};
use carflow::product_system::ShiftRep;
use carflow::rng::SplitMix64;
use num_complex::Complex64;

fn main() -> carflow::Result<()> {
    let rep = ShiftRep::new(ModuleSpec::halfspace([1, 1], 0), ConeSpec::orthant(2));
    let ctx = FlowContext::new(rep, Window::new([-1, -1], [2, 1])?, 1 << 12)?;
    println!("{} modes, Fock dimension {}", ctx.n_modes(), ctx.fock_dim());

    let mut rng = SplitMix64::new(5);
    let shifts = [
        Point::from([1, 0]),
        Point::from([0, 1]),
        Point::from([1, 1]),
    ];
    for x in &shifts {
        let f = SingleParticleVector::new(
            ctx.valid_modes(&[x])
                .iter()
                .map(|&v| {
                    if v {
                        rng.complex()
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect(),
        );
        println!(
            "x = {x}: |β_x(a(f)) - a(V_x f)| = {:.2e}, |β_x(1) - P| = {:.2e}",
            defining_relation_check(&ctx, x, &f)?,
            unitality_residual(&ctx, x)?
        );
    }
    let (e1, e2) = (&shifts[0], &shifts[1]);
    println!(
        "|β_{e1} β_{e2} - β_{}| = {:.2e}",
        e1 + e2,
        semigroup_check(&ctx, e1, e2)?
    );
    Ok(())
}
