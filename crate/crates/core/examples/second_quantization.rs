//! Second quantization `Γ(W)` of an isometry via minors, checked against
//! functoriality and the intertwining `Γ(W) a*(f) = a*(Wf) Γ(W)`.

use carflow::fock::{
    creation, random_isometry, second_quantization, FockOperator, SingleParticleVector,
};
use carflow::rng::SplitMix64;
use nalgebra::DVector;

fn main() -> carflow::Result<()> {
    let mut rng = SplitMix64::new(2);
    let w1 = random_isometry(6, 4, &mut rng)?;
    let w2 = random_isometry(4, 3, &mut rng)?;
    let g1 = second_quantization(&w1)?;
    let g2 = second_quantization(&w2)?;
    println!(
        "Γ(W1): {} -> {} modes, {} nonzeros",
        g1.source_modes(),
        g1.target_modes(),
        g1.nnz()
    );

    let composed = second_quantization(&(&w1 * &w2))?;
    println!(
        "|Γ(W1 W2) - Γ(W1)Γ(W2)| = {:.2e}",
        (&composed - &g1.compose(&g2)?)?.frobenius_norm()
    );

    let gram = g1.adjoint().compose(&g1)?;
    println!(
        "|Γ(W1)*Γ(W1) - I| = {:.2e}",
        (&gram - &FockOperator::identity(4)?)?.frobenius_norm()
    );

    let f = SingleParticleVector::new((0..4).map(|_| rng.complex()).collect());
    let wf = &w1 * DVector::from_vec(f.coefficients().to_vec());
    let wf = SingleParticleVector::new(wf.iter().copied().collect());
    let lhs = g1.compose(&creation(&f)?)?;
    let rhs = creation(&wf)?.compose(&g1)?;
    println!(
        "|Γ(W) a*(f) - a*(Wf) Γ(W)| = {:.2e}",
        (&lhs - &rhs)?.frobenius_norm()
    );

    // A relabelling of modes needs no minors.
    let fast = FockOperator::mode_map(&[Some(2), Some(0), None], 3)?;
    println!("mode map 0->2, 1->0, 2 dropped: {} nonzeros", fast.nnz());
    Ok(())
}
