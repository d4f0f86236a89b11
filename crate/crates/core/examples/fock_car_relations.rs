//! Creation and annihilation operators on a 4-mode Fock space and the
//! canonical anticommutation relations.

use carflow::fock::{
    annihilation, anticommutator, creation, vacuum, FockOperator, SingleParticleVector,
};
use carflow::rng::SplitMix64;

fn main() -> carflow::Result<()> {
    let n = 4;
    let mut rng = SplitMix64::new(1);
    let f = SingleParticleVector::new((0..n).map(|_| rng.complex()).collect());
    let g = SingleParticleVector::new((0..n).map(|_| rng.complex()).collect());

    let af = annihilation(&f)?;
    let mixed = anticommutator(&af, &creation(&g)?)?;
    let expected = FockOperator::identity(n)?.scale(f.inner(&g));
    println!("<f,g> = {:.6}", f.inner(&g));
    println!(
        "|{{a(f), a(g)*}} - <f,g>I| = {:.2e}",
        (&mixed - &expected)?.frobenius_norm()
    );
    println!(
        "|{{a(f), a(g)}}|          = {:.2e}",
        anticommutator(&af, &annihilation(&g)?)?.frobenius_norm()
    );

    // a*(δ_0) a*(δ_2) Ω is the basis state 0b0101 with a sign.
    let d0 = SingleParticleVector::basis(n, 0);
    let d2 = SingleParticleVector::basis(n, 2);
    let state = creation(&d0)?.apply(&creation(&d2)?.apply(&vacuum(n)?)?)?;
    for (mask, amp) in state.support() {
        println!("a*(δ0) a*(δ2) Ω = {amp} |{mask:?}>");
    }
    let swapped = creation(&d2)?.apply(&creation(&d0)?.apply(&vacuum(n)?)?)?;
    println!(
        "swapping the order flips the sign: {}",
        (&state + &swapped).norm() == 0.0
    );
    Ok(())
}
