//! The CAR flow `β_x` on the windowed operator algebra.
//!
//! `β_x(T) = Σ_b S_b T S_b^*`, where `b` runs over the occupation masks of the
//! fibre at `x` and `S_b` is the parity-twisted embedding of the basis element
//! `b`. The sum of `S_b S_b^*` is the projection onto masks whose modes are
//! either kernel points of `x` or translates of represented points; that
//! projection is returned with every result and all identities are compared
//! under it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{
    annihilation, creation, masks, parity_operator, FockOperator, OccupationMask,
    SingleParticleVector, MAX_MODES,
};
use crate::lattice::{ConeSpec, ModuleSpec, Point, Window};
use crate::product_system::{
    fiber, forward_product, left_embedding, phi_map, Convention, PSElement, ShiftRep,
};
use crate::rng::SplitMix64;

pub use crate::product_system::FlowContext;

/// `β_x(T)` together with the masks on which it is exact.
#[derive(Debug, Clone)]
pub struct FlowResult {
    pub operator: FockOperator,
    pub valid: Vec<bool>,
}

/// Masks whose modes are kernel points of `x` or images `V_x y` of
/// represented points.
pub fn range_projection(ctx: &FlowContext, x: &Point) -> Vec<bool> {
    let rep = ctx.rep();
    let ok: u32 = ctx
        .modes()
        .iter()
        .enumerate()
        .filter(|(_, m)| rep.in_kernel(x, m) || ctx.index_of(&rep.unstep(m, x)).is_some())
        .fold(0, |acc, (i, _)| acc | (1 << i));
    masks(ctx.n_modes()).map(|m| m.bits() & !ok == 0).collect()
}

pub fn flow_action(ctx: &FlowContext, x: &Point, t: &FockOperator) -> Result<FlowResult> {
    let n = ctx.n_modes();
    if t.source_modes() != n || t.target_modes() != n {
        return Err(Error::DimensionMismatch {
            context: "flow action operand",
            expected: n,
            found: t.source_modes(),
        });
    }
    let fib = ctx.fiber(x, None)?;
    if fib.modes.len() > MAX_MODES {
        return Err(Error::ModeCap {
            requested: fib.modes.len(),
            cap: MAX_MODES,
        });
    }
    let kernel_idx: Vec<usize> = fib
        .modes
        .iter()
        .map(|m| ctx.index_of(m).expect("fibre modes are ambient modes"))
        .collect();
    let gamma = ctx.second_quantized_shift(x)?;
    let gamma_odd = gamma.compose(&parity_operator(n)?)?;
    // S_b sends a mask to at most one mask, so each term is a signed
    // relabelling of the entries of T; distinct b have disjoint ranges.
    let terms = (0..1u32 << kernel_idx.len())
        .into_par_iter()
        .map(|bits| {
            let local = OccupationMask::from_bits(bits);
            let b = OccupationMask::from_modes(
                &local.modes().map(|k| kernel_idx[k]).collect::<Vec<_>>(),
            );
            let shift = if local.parity() == 1 {
                &gamma_odd
            } else {
                &gamma
            };
            let image = |m: OccupationMask| {
                shift.column(m).iter().find_map(|&(u, c)| {
                    let u = OccupationMask::from_bits(u);
                    b.is_disjoint(u).then(|| {
                        (
                            OccupationMask::from_bits(b.bits() | u.bits()),
                            c * b.wedge_sign(u),
                        )
                    })
                })
            };
            t.entries()
                .filter_map(|(r, c, v)| {
                    let (i, a) = image(r)?;
                    let (j, d) = image(c)?;
                    Some((i, j, a * v * d.conj()))
                })
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>();
    Ok(FlowResult {
        operator: FockOperator::from_entries(n, n, terms.into_iter().flatten())?,
        valid: range_projection(ctx, x),
    })
}

fn compressed_residual(a: &FockOperator, b: &FockOperator, valid: &[bool]) -> Result<f64> {
    Ok((a - b)?.compress(valid, valid).frobenius_norm())
}

/// `||P (β_x(a(f)) - a(V_x f)) P||`.
pub fn defining_relation_check(
    ctx: &FlowContext,
    x: &Point,
    f: &SingleParticleVector,
) -> Result<f64> {
    let moved = ctx.translate(f, x)?;
    let lhs = flow_action(ctx, x, &annihilation(f)?)?;
    compressed_residual(&lhs.operator, &annihilation(&moved)?, &lhs.valid)
}

/// Ambient modes `m` such that `m + y` and `m + y + x` are represented.
fn generator_modes(ctx: &FlowContext, chain: &[&Point]) -> Vec<usize> {
    ctx.valid_modes(chain)
        .iter()
        .enumerate()
        .filter(|(_, v)| **v)
        .map(|(i, _)| i)
        .collect()
}

/// `a(δ_m)` and `a(δ_m)^*` for the listed modes, labelled.
fn generators(ctx: &FlowContext, modes: &[usize]) -> Result<Vec<(String, FockOperator)>> {
    let mut out = Vec::with_capacity(2 * modes.len());
    for &m in modes {
        let delta = SingleParticleVector::basis(ctx.n_modes(), m);
        let point = &ctx.modes()[m];
        out.push((format!("a({point})"), annihilation(&delta)?));
        out.push((format!("a*({point})"), creation(&delta)?));
    }
    Ok(out)
}

/// Maximum over generators of `||P (β_x(β_y(g)) - β_{x+y}(g)) P||`.
pub fn semigroup_check(ctx: &FlowContext, x: &Point, y: &Point) -> Result<f64> {
    let xy = x + y;
    let modes = generator_modes(ctx, &[y, x]);
    let inner_valid = range_projection(ctx, y);
    let composite = flow_action(ctx, x, &FockOperator::projection(&inner_valid)?)?;
    let direct_valid = range_projection(ctx, &xy);
    let valid: Vec<bool> = masks(ctx.n_modes())
        .map(|m| {
            composite.valid[m.index()]
                && composite.operator.get(m, m).re > 0.5
                && direct_valid[m.index()]
        })
        .collect();
    let mut worst: f64 = 0.0;
    for (_, g) in generators(ctx, &modes)? {
        let once = flow_action(ctx, y, &g)?;
        let twice = flow_action(ctx, x, &once.operator)?;
        let direct = flow_action(ctx, &xy, &g)?;
        worst = worst.max(compressed_residual(
            &twice.operator,
            &direct.operator,
            &valid,
        )?);
    }
    Ok(worst)
}

/// Per-generator residuals of `β_x(S) T - T S`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntertwinerTable {
    pub rows: Vec<(String, f64)>,
}

impl IntertwinerTable {
    pub fn max(&self) -> f64 {
        self.rows.iter().map(|(_, r)| *r).fold(0.0, f64::max)
    }
}

/// `||P_out (β_x(S) T - T S) P_in||` for `S = a(δ_m), a(δ_m)^*` with `m + x`
/// represented.
pub fn intertwiner_check(
    ctx: &FlowContext,
    x: &Point,
    t: &FockOperator,
) -> Result<IntertwinerTable> {
    let modes = generator_modes(ctx, &[x]);
    let p_in = ctx.valid_inputs(&[x]);
    let p_out = range_projection(ctx, x);
    let mut rows = Vec::new();
    for (label, s) in generators(ctx, &modes)? {
        let moved = flow_action(ctx, x, &s)?;
        let diff = (&moved.operator.compose(t)? - &t.compose(&s)?)?;
        rows.push((label, diff.compress(&p_out, &p_in).frobenius_norm()));
    }
    Ok(IntertwinerTable { rows })
}

/// Worst intertwining residual of `T_f` for random `f` of each parity under
/// each convention, keyed `"literal/odd"` etc.
pub fn intertwiner_parity_table(
    ctx: &FlowContext,
    x: &Point,
    rng: &mut SplitMix64,
) -> Result<Vec<(String, f64)>> {
    let fib = ctx.fiber(x, None)?;
    let mut out = Vec::new();
    for convention in Convention::ALL {
        for parity in 0..2 {
            let e = fib.random_element(rng, Some(parity))?;
            let t = left_embedding(ctx, &e, convention)?;
            let table = intertwiner_check(ctx, x, &t)?;
            let name = if parity == 0 { "even" } else { "odd" };
            out.push((format!("{}/{}", convention.name(), name), table.max()));
        }
    }
    Ok(out)
}

/// The fibrewise map `ψ_x = Γ(u) ∘ φ_x` built from a symmetry witness `z`,
/// where `u(w) = z - w` carries `A^c` onto `A`.
pub struct SymmetryWitness {
    rep: ShiftRep,
    z: Point,
}

impl SymmetryWitness {
    /// Verifies `A = -(A^c) + z` on the window before building anything.
    pub fn new(module: ModuleSpec, cone: ConeSpec, z: Point, window: &Window) -> Result<Self> {
        let opposite = module.opposite();
        if window
            .points()
            .iter()
            .any(|y| module.contains(y) != opposite.contains(&(y - &z)))
        {
            return Err(Error::InvalidWitness(z));
        }
        Ok(Self {
            rep: ShiftRep::new(module, cone),
            z,
        })
    }

    pub fn rep(&self) -> &ShiftRep {
        &self.rep
    }

    pub fn witness(&self) -> &Point {
        &self.z
    }

    /// `E^V(x) → E^V(x)`.
    pub fn psi(&self, e: &PSElement) -> Result<PSElement> {
        let phi = phi_map(&self.rep, e, Convention::Twisted)?;
        phi.transport(&self.rep, |w| &self.z - w)
    }

    /// `||ψ(e1·e2) - ψ(e2)·ψ(e1)||`.
    pub fn anti_multiplicativity_residual(&self, e1: &PSElement, e2: &PSElement) -> Result<f64> {
        let lhs = self.psi(&forward_product(&self.rep, e1, e2)?)?;
        let rhs = forward_product(&self.rep, &self.psi(e2)?, &self.psi(e1)?)?;
        lhs.distance(&rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub witness: Point,
    pub pairs: usize,
    pub max_residual: f64,
    /// Largest deviation of `||ψ(e)||` from `||e||`.
    pub max_norm_defect: f64,
}

/// Builds `ψ` from `z` and measures anti-multiplicativity over random pairs
/// drawn from fibres at the given shifts.
pub fn symmetry_witness(
    module: &ModuleSpec,
    cone: &ConeSpec,
    z: &Point,
    window: &Window,
    shifts: &[Point],
    pairs: usize,
    rng: &mut SplitMix64,
) -> Result<WitnessReport> {
    let witness = SymmetryWitness::new(module.clone(), cone.clone(), z.clone(), window)?;
    let mut max_residual = witness.anti_multiplicativity_residual(
        &PSElement::vacuum(shifts[0].clone()),
        &PSElement::vacuum(shifts[0].clone()),
    )?;
    let mut max_norm_defect: f64 = 0.0;
    for _ in 0..pairs {
        let x = &shifts[rng.below(shifts.len())];
        let y = &shifts[rng.below(shifts.len())];
        let e1 = fiber(witness.rep(), x, window)?.random_element(rng, None)?;
        let e2 = fiber(witness.rep(), y, window)?.random_element(rng, None)?;
        max_residual = max_residual.max(witness.anti_multiplicativity_residual(&e1, &e2)?);
        max_norm_defect = max_norm_defect.max((witness.psi(&e1)?.norm() - e1.norm()).abs());
    }
    Ok(WitnessReport {
        witness: z.clone(),
        pairs,
        max_residual,
        max_norm_defect,
    })
}

/// `β_x(I)` equals the range projection; returns `||β_x(I) - P||`.
pub fn unitality_residual(ctx: &FlowContext, x: &Point) -> Result<f64> {
    let r = flow_action(ctx, x, &FockOperator::identity(ctx.n_modes())?)?;
    let p = FockOperator::projection(&r.valid)?;
    Ok((&r.operator - &p)?.frobenius_norm())
}

/// `||P (β_x(ST) - β_x(S) β_x(T)) P||`.
pub fn multiplicativity_residual(
    ctx: &FlowContext,
    x: &Point,
    s: &FockOperator,
    t: &FockOperator,
) -> Result<f64> {
    let st = flow_action(ctx, x, &s.compose(t)?)?;
    let bs = flow_action(ctx, x, s)?;
    let bt = flow_action(ctx, x, t)?;
    compressed_residual(&st.operator, &bs.operator.compose(&bt.operator)?, &st.valid)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p<const N: usize>(c: [i64; N]) -> Point {
        Point::from(c)
    }

    fn half_line_ctx(hi: i64) -> FlowContext {
        let rep = ShiftRep::new(ModuleSpec::halfspace([1], 0), ConeSpec::orthant(1));
        FlowContext::new(rep, Window::new([0], [hi]).unwrap(), 1 << 12).unwrap()
    }

    #[test]
    fn zero_shift_is_identity() {
        let ctx = half_line_ctx(4);
        let t = creation(&ctx.delta(&p([1])).unwrap()).unwrap();
        let r = flow_action(&ctx, &p([0]), &t).unwrap();
        assert_eq!(r.operator, t);
        assert!(r.valid.iter().all(|v| *v));
    }

    #[test]
    fn unital_on_valid_corner() {
        let ctx = half_line_ctx(5);
        for x in 1..=3 {
            assert!(unitality_residual(&ctx, &p([x])).unwrap() < 1e-12);
        }
    }

    #[test]
    fn creation_is_moved_by_one() {
        let ctx = half_line_ctx(5);
        let a0 = creation(&ctx.delta(&p([0])).unwrap()).unwrap();
        let a1 = creation(&ctx.delta(&p([1])).unwrap()).unwrap();
        let r = flow_action(&ctx, &p([1]), &a0).unwrap();
        assert!(compressed_residual(&r.operator, &a1, &r.valid).unwrap() < 1e-10);
    }

    #[test]
    fn defining_relation_half_line() {
        let ctx = half_line_ctx(5);
        let zero = SingleParticleVector::zeros(ctx.n_modes());
        assert_eq!(defining_relation_check(&ctx, &p([2]), &zero).unwrap(), 0.0);
        let f = ctx.delta(&p([0])).unwrap();
        assert!(defining_relation_check(&ctx, &p([2]), &f).unwrap() < 1e-10);
        let escape = ctx.delta(&p([5])).unwrap();
        assert!(matches!(
            defining_relation_check(&ctx, &p([1]), &escape),
            Err(Error::SupportEscapes)
        ));
    }

    #[test]
    fn semigroup_trivial_and_half_line() {
        let ctx = half_line_ctx(5);
        assert_eq!(semigroup_check(&ctx, &p([0]), &p([0])).unwrap(), 0.0);
        assert!(semigroup_check(&ctx, &p([1]), &p([2])).unwrap() < 1e-9);
    }

    #[test]
    fn intertwiner_vacuum_embedding() {
        let ctx = half_line_ctx(5);
        let t = ctx.second_quantized_shift(&p([2])).unwrap();
        assert!(intertwiner_check(&ctx, &p([2]), &t).unwrap().max() < 1e-10);
    }

    #[test]
    fn parity_table_separates_conventions() {
        let ctx = half_line_ctx(5);
        let mut rng = SplitMix64::new(3);
        let table: std::collections::HashMap<_, _> =
            intertwiner_parity_table(&ctx, &p([2]), &mut rng)
                .unwrap()
                .into_iter()
                .collect();
        assert!(table["literal/even"] < 1e-10);
        assert!(table["literal/odd"] > 1e-3);
        assert!(table["twisted/even"] < 1e-10);
        assert!(table["twisted/odd"] < 1e-10);
    }

    #[test]
    fn witness_must_verify() {
        let w = Window::cube(1, -6, 6).unwrap();
        let m = ModuleSpec::halfspace([1], 0);
        assert!(matches!(
            SymmetryWitness::new(m.clone(), ConeSpec::orthant(1), p([1]), &w),
            Err(Error::InvalidWitness(_))
        ));
        let sw = SymmetryWitness::new(m, ConeSpec::orthant(1), p([-1]), &w).unwrap();
        let vac = PSElement::vacuum(p([1]));
        assert_eq!(sw.anti_multiplicativity_residual(&vac, &vac).unwrap(), 0.0);
    }
}
