//! The product system of a shift representation.
//!
//! The fibre over `x` is the Fock space over `Ker(V_x^*)`, realized on the
//! kernel points `A \ (A + x)` of a window. An element `(x, f)` keeps its own
//! list of kernel points, in lexicographic order, as its mode list.
//!
//! The forward product is `(x, f)·(y, g) = (x + y, f ∧ Γ(V_x) g)`: the modes
//! of `g` are translated by `x`, appended after the modes of `f`, and the
//! result is re-sorted into lexicographic order (with the sign of that sort).
//! The opposite product swaps the factors.
//!
//! On the ambient Fock space over `A ∩ W` an element defines the operator
//! `T_f η = f ∧ Γ(V_x) η`. Fermionic signs make the literal `T_f` intertwine
//! the flow only up to `(-1)^{parity(f)}`; the parity-twisted variant
//! `η ↦ f ∧ Γ(V_x) (-1)^{N·parity(f)} η` intertwines for both parities. Both are
//! available through [`Convention`] and the sign tables measure the difference.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{
    check_modes, masks, parity_operator, wedge_embed, FockOperator, FockVector, OccupationMask,
    SingleParticleVector, MAX_MODES,
};
use crate::lattice::{ConeSpec, ModuleSpec, Point, Window};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `V_x δ_y = δ_{y+x}` on `ℓ²(A)`.
    Forward,
    /// `V^op_x δ_y = δ_{y-x}` on `ℓ²(A^c)`.
    Opposite,
}

/// Sign convention for the maps that move fermionic factors past each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// The formula as written, with no grading correction.
    Literal,
    /// Grading-corrected: `T_f` composes with `(-1)^{N·parity(f)}`, and `φ`
    /// multiplies the k-particle sector by `(-1)^{k(k-1)/2}`.
    Twisted,
}

impl Convention {
    pub const ALL: [Convention; 2] = [Convention::Literal, Convention::Twisted];

    pub fn name(self) -> &'static str {
        match self {
            Self::Literal => "literal",
            Self::Twisted => "twisted",
        }
    }
}

/// A shift representation `V^A` or its opposite `V^op`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftRep {
    module: ModuleSpec,
    cone: ConeSpec,
    orientation: Orientation,
}

impl ShiftRep {
    pub fn new(module: ModuleSpec, cone: ConeSpec) -> Self {
        Self {
            module,
            cone,
            orientation: Orientation::Forward,
        }
    }

    /// `V^op`: translation by `-x` on `ℓ²(A^c)`.
    pub fn opposite(&self) -> Self {
        Self {
            module: self.module.clone(),
            cone: self.cone.clone(),
            orientation: match self.orientation {
                Orientation::Forward => Orientation::Opposite,
                Orientation::Opposite => Orientation::Forward,
            },
        }
    }

    pub fn module(&self) -> &ModuleSpec {
        &self.module
    }

    pub fn cone(&self) -> &ConeSpec {
        &self.cone
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    /// Whether `p` indexes a basis vector of the representation space.
    pub fn contains(&self, p: &Point) -> bool {
        match self.orientation {
            Orientation::Forward => self.module.contains(p),
            Orientation::Opposite => !self.module.contains(p),
        }
    }

    /// `V_x δ_p = δ_{step(p, x)}`.
    pub fn step(&self, p: &Point, x: &Point) -> Point {
        match self.orientation {
            Orientation::Forward => p + x,
            Orientation::Opposite => p - x,
        }
    }

    /// Inverse of [`ShiftRep::step`]; this is the dilation `U_{-x}` in the
    /// direction that carries `Ker(V_x^*)` onto `Ker((V^op_x)^*)`.
    pub fn unstep(&self, p: &Point, x: &Point) -> Point {
        match self.orientation {
            Orientation::Forward => p - x,
            Orientation::Opposite => p + x,
        }
    }

    /// `p ∈ Ker(V_x^*)`: in the space but not in the range of `V_x`.
    pub fn in_kernel(&self, x: &Point, p: &Point) -> bool {
        self.contains(p) && !self.contains(&self.unstep(p, x))
    }

    pub fn kernel_basis(&self, x: &Point, window: &Window) -> Vec<Point> {
        window
            .points()
            .into_iter()
            .filter(|p| self.in_kernel(x, p))
            .collect()
    }
}

/// `Γ_a(Ker V_x^*)` cut to the kernel points inside a window.
#[derive(Debug, Clone, PartialEq)]
pub struct Fiber {
    pub base: Point,
    pub modes: Vec<Point>,
}

impl Fiber {
    pub fn fock_dim(&self) -> usize {
        1 << self.modes.len()
    }

    pub fn basis_element(&self, mask: OccupationMask) -> Result<PSElement> {
        Ok(PSElement {
            base: self.base.clone(),
            modes: self.modes.clone(),
            vector: FockVector::basis(self.modes.len(), mask)?,
        })
    }

    pub fn vacuum(&self) -> PSElement {
        PSElement::vacuum(self.base.clone())
    }

    /// Random element, normalized, with all masks of the given parity (or
    /// all masks when `parity` is `None`).
    pub fn random_element(&self, rng: &mut SplitMix64, parity: Option<usize>) -> Result<PSElement> {
        let n = self.modes.len();
        let amplitudes = masks(n)
            .map(|m| {
                let z = rng.complex();
                match parity {
                    Some(p) if m.parity() != p => Complex64::new(0.0, 0.0),
                    _ => z,
                }
            })
            .collect();
        let vector = FockVector::from_amplitudes(n, amplitudes)?.normalized();
        Ok(PSElement {
            base: self.base.clone(),
            modes: self.modes.clone(),
            vector,
        })
    }
}

pub fn fiber(rep: &ShiftRep, x: &Point, window: &Window) -> Result<Fiber> {
    rep.cone().require(x)?;
    let modes = rep.kernel_basis(x, window);
    if modes.len() > MAX_MODES {
        return Err(Error::ModeCap {
            requested: modes.len(),
            cap: MAX_MODES,
        });
    }
    Ok(Fiber {
        base: x.clone(),
        modes,
    })
}

/// A product-system element `(x, f)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PSElement {
    base: Point,
    modes: Vec<Point>,
    vector: FockVector,
}

impl PSElement {
    /// Checks that the modes are strictly increasing kernel points of `base`.
    pub fn new(rep: &ShiftRep, base: Point, modes: Vec<Point>, vector: FockVector) -> Result<Self> {
        if vector.modes() != modes.len() {
            return Err(Error::DimensionMismatch {
                context: "element vector vs mode list",
                expected: modes.len(),
                found: vector.modes(),
            });
        }
        if modes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidElement(
                "modes not strictly increasing".into(),
            ));
        }
        if let Some(bad) = modes.iter().find(|m| !rep.in_kernel(&base, m)) {
            return Err(Error::InvalidElement(format!(
                "mode {bad} is not in the kernel at {base}"
            )));
        }
        Ok(Self {
            base,
            modes,
            vector,
        })
    }

    /// Builds an element from modes in arbitrary order, sorting them and
    /// applying the sign of the sort to every mask.
    pub fn from_unsorted(
        rep: &ShiftRep,
        base: Point,
        modes: Vec<Point>,
        vector: FockVector,
    ) -> Result<Self> {
        let mut sorted = modes.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidElement("repeated mode".into()));
        }
        let map: Vec<Option<usize>> = modes.iter().map(|m| sorted.binary_search(m).ok()).collect();
        let vector = FockOperator::mode_map(&map, sorted.len())?.apply(&vector)?;
        Self::new(rep, base, sorted, vector)
    }

    pub fn vacuum(base: Point) -> Self {
        Self {
            base,
            modes: Vec::new(),
            vector: FockVector::basis(0, OccupationMask::VACUUM).expect("zero modes"),
        }
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn modes(&self) -> &[Point] {
        &self.modes
    }

    pub fn vector(&self) -> &FockVector {
        &self.vector
    }

    pub fn norm(&self) -> f64 {
        self.vector.norm()
    }

    pub fn parity(&self) -> Option<usize> {
        self.vector.parity()
    }

    /// The vector over a sorted superset of this element's modes.
    pub fn embed_into(&self, modes: &[Point]) -> Result<FockVector> {
        let map = self
            .modes
            .iter()
            .map(|m| {
                modes
                    .binary_search(m)
                    .map(Some)
                    .map_err(|_| Error::InvalidElement(format!("mode {m} missing from target")))
            })
            .collect::<Result<Vec<_>>>()?;
        FockOperator::mode_map(&map, modes.len())?.apply(&self.vector)
    }

    fn union_modes(&self, other: &Self) -> Vec<Point> {
        let mut all: Vec<Point> = self.modes.iter().chain(&other.modes).cloned().collect();
        all.sort();
        all.dedup();
        all
    }

    /// `<self, other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.same_base(other)?;
        let modes = self.union_modes(other);
        Ok(self.embed_into(&modes)?.inner(&other.embed_into(&modes)?))
    }

    /// `||self - other||` over the union of both mode lists.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.same_base(other)?;
        let modes = self.union_modes(other);
        Ok((&self.embed_into(&modes)? - &other.embed_into(&modes)?).norm())
    }

    fn same_base(&self, other: &Self) -> Result<()> {
        if self.base != other.base {
            return Err(Error::InvalidElement(format!(
                "elements over different base points {} and {}",
                self.base, other.base
            )));
        }
        Ok(())
    }

    /// Relabels every mode through `map` and re-sorts. `map` must be injective.
    pub fn transport(&self, target: &ShiftRep, map: impl Fn(&Point) -> Point) -> Result<Self> {
        let modes = self.modes.iter().map(map).collect();
        Self::from_unsorted(target, self.base.clone(), modes, self.vector.clone())
    }
}

/// `(x, f)·(y, g) = (x + y, f ∧ Γ(V_x) g)`.
pub fn forward_product(rep: &ShiftRep, e1: &PSElement, e2: &PSElement) -> Result<PSElement> {
    let x = &e1.base;
    let mut modes = e1.modes.clone();
    modes.extend(e2.modes.iter().map(|m| rep.step(m, x)));
    check_modes(modes.len())?;
    let vector = wedge_embed(&e1.vector, &e2.vector)?;
    PSElement::from_unsorted(rep, x + &e2.base, modes, vector)
}

/// `(x, f)∘(y, g) = (x + y, g ∧ Γ(V_y) f)`.
pub fn opposite_product(rep: &ShiftRep, e1: &PSElement, e2: &PSElement) -> Result<PSElement> {
    forward_product(rep, e2, e1)
}

/// The ambient single-particle space `ℓ²(A ∩ W)` and its Fock space.
#[derive(Debug, Clone)]
pub struct FlowContext {
    rep: ShiftRep,
    window: Window,
    modes: Vec<Point>,
    index: HashMap<Point, usize>,
}

impl FlowContext {
    /// Fails when `2^{|A ∩ W|}` exceeds `fock_cap` or the hard mode limit.
    pub fn new(rep: ShiftRep, window: Window, fock_cap: usize) -> Result<Self> {
        let modes: Vec<Point> = window
            .points()
            .into_iter()
            .filter(|p| rep.contains(p))
            .collect();
        check_modes(modes.len())?;
        if (1usize << modes.len()) > fock_cap {
            return Err(Error::DimensionCap {
                modes: modes.len(),
                cap: fock_cap,
            });
        }
        let index = modes
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        Ok(Self {
            rep,
            window,
            modes,
            index,
        })
    }

    pub fn rep(&self) -> &ShiftRep {
        &self.rep
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn modes(&self) -> &[Point] {
        &self.modes
    }

    pub fn n_modes(&self) -> usize {
        self.modes.len()
    }

    pub fn fock_dim(&self) -> usize {
        1 << self.modes.len()
    }

    pub fn index_of(&self, p: &Point) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// `j ↦ index of step(mode_j, x)` when that point is represented.
    pub fn shift_map(&self, x: &Point) -> Vec<Option<usize>> {
        self.modes
            .iter()
            .map(|p| self.index_of(&self.rep.step(p, x)))
            .collect()
    }

    /// `Γ(V_x)` on the ambient Fock space; masks with a mode leaving the
    /// window are annihilated.
    pub fn second_quantized_shift(&self, x: &Point) -> Result<FockOperator> {
        FockOperator::mode_map(&self.shift_map(x), self.n_modes())
    }

    /// Modes that stay inside the window under the successive shifts.
    pub fn valid_modes(&self, chain: &[&Point]) -> Vec<bool> {
        self.modes
            .iter()
            .map(|p| {
                let mut cur = p.clone();
                chain.iter().all(|x| {
                    cur = self.rep.step(&cur, x);
                    self.index.contains_key(&cur)
                })
            })
            .collect()
    }

    /// Masks all of whose modes are valid for the chain of shifts.
    pub fn valid_inputs(&self, chain: &[&Point]) -> Vec<bool> {
        let ok = self.valid_modes(chain);
        let good_bits: u32 = ok
            .iter()
            .enumerate()
            .filter(|(_, v)| **v)
            .fold(0, |acc, (i, _)| acc | (1 << i));
        masks(self.n_modes())
            .map(|m| m.bits() & !good_bits == 0)
            .collect()
    }

    /// Kernel points of `x` inside the window, whose translates by `then`
    /// (when given) stay in the window.
    pub fn fiber(&self, x: &Point, then: Option<&Point>) -> Result<Fiber> {
        self.rep.cone().require(x)?;
        let modes: Vec<Point> = self
            .modes
            .iter()
            .filter(|p| self.rep.in_kernel(x, p))
            .filter(|p| then.is_none_or(|t| self.index.contains_key(&self.rep.step(p, t))))
            .cloned()
            .collect();
        check_modes(modes.len())?;
        Ok(Fiber {
            base: x.clone(),
            modes,
        })
    }

    /// The element's vector placed in the ambient Fock space.
    pub fn ambient_vector(&self, e: &PSElement) -> Result<FockVector> {
        let map = e
            .modes
            .iter()
            .map(|m| {
                self.index_of(m)
                    .map(Some)
                    .ok_or_else(|| Error::WindowTooSmall(format!("mode {m} outside the window")))
            })
            .collect::<Result<Vec<_>>>()?;
        FockOperator::mode_map(&map, self.n_modes())?.apply(&e.vector)
    }

    pub fn delta(&self, p: &Point) -> Result<SingleParticleVector> {
        let i = self
            .index_of(p)
            .ok_or_else(|| Error::WindowTooSmall(format!("point {p} outside the window")))?;
        Ok(SingleParticleVector::basis(self.n_modes(), i))
    }

    /// `V_x f` for `f` supported on modes whose translate stays represented.
    pub fn translate(&self, f: &SingleParticleVector, x: &Point) -> Result<SingleParticleVector> {
        if f.len() != self.n_modes() {
            return Err(Error::DimensionMismatch {
                context: "single-particle vector vs ambient modes",
                expected: self.n_modes(),
                found: f.len(),
            });
        }
        let map = self.shift_map(x);
        let mut out = vec![Complex64::new(0.0, 0.0); f.len()];
        for (j, c) in f.coefficients().iter().enumerate() {
            if *c == Complex64::new(0.0, 0.0) {
                continue;
            }
            match map[j] {
                Some(t) => out[t] = *c,
                None => return Err(Error::SupportEscapes),
            }
        }
        Ok(SingleParticleVector::new(out))
    }
}

/// `T_f` on the ambient Fock space.
pub fn left_embedding(
    ctx: &FlowContext,
    e: &PSElement,
    convention: Convention,
) -> Result<FockOperator> {
    let f = ctx.ambient_vector(e)?;
    let mut op = FockOperator::wedge_left(&f)?.compose(&ctx.second_quantized_shift(&e.base)?)?;
    if convention == Convention::Twisted {
        let parity = e.parity().ok_or(Error::ParityUndefined)?;
        if parity == 1 {
            op = op.compose(&parity_operator(ctx.n_modes())?)?;
        }
    }
    Ok(op)
}

/// `||P (T_g^* T_f - <g, f> I) P||` on the masks valid for `x`.
///
/// With the inner product conjugate-linear in its first slot the scalar is
/// `<g, f>`.
pub fn embedding_isometry_residual(
    ctx: &FlowContext,
    f: &PSElement,
    g: &PSElement,
    convention: Convention,
) -> Result<f64> {
    let tf = left_embedding(ctx, f, convention)?;
    let tg = left_embedding(ctx, g, convention)?;
    let valid = ctx.valid_inputs(&[&f.base]);
    let lhs = tg.adjoint().compose(&tf)?;
    let rhs = FockOperator::identity(ctx.n_modes())?.scale(g.inner(f)?);
    Ok((&lhs - &rhs)?.compress(&valid, &valid).frobenius_norm())
}

/// Residuals of `T_{e1} T_{e2} ∓ T_{e1·e2}` and the sign that fits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignReport {
    pub left_parity: Option<usize>,
    pub right_parity: Option<usize>,
    pub residual_plus: f64,
    pub residual_minus: f64,
    pub sign: Option<i8>,
}

pub fn multiplicativity_check(
    ctx: &FlowContext,
    e1: &PSElement,
    e2: &PSElement,
    convention: Convention,
    tolerance: f64,
) -> Result<SignReport> {
    let product = forward_product(ctx.rep(), e1, e2)?;
    let t1 = left_embedding(ctx, e1, convention)?;
    let t2 = left_embedding(ctx, e2, convention)?;
    let t12 = left_embedding(ctx, &product, convention)?;
    let lhs = t1.compose(&t2)?;
    let valid = ctx.valid_inputs(&[&e2.base, &e1.base]);
    let all = vec![true; ctx.fock_dim()];
    let residual = |s: f64| -> Result<f64> {
        let diff =
            lhs.linear_combination(Complex64::new(1.0, 0.0), &t12, Complex64::new(-s, 0.0))?;
        Ok(diff.compress(&all, &valid).frobenius_norm())
    };
    let residual_plus = residual(1.0)?;
    let residual_minus = residual(-1.0)?;
    let sign = if residual_plus <= tolerance {
        Some(1)
    } else if residual_minus <= tolerance {
        Some(-1)
    } else {
        None
    };
    Ok(SignReport {
        left_parity: e1.parity(),
        right_parity: e2.parity(),
        residual_plus,
        residual_minus,
        sign,
    })
}

fn parity_name(p: usize) -> &'static str {
    if p == 0 {
        "even"
    } else {
        "odd"
    }
}

/// Fitted sign per `(left parity, right parity)`, keyed `"even/odd"` etc.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignTable {
    pub convention: Convention,
    pub entries: BTreeMap<String, Option<i8>>,
}

impl SignTable {
    pub fn get(&self, left: usize, right: usize) -> Option<i8> {
        self.entries
            .get(&format!("{}/{}", parity_name(left), parity_name(right)))
            .copied()
            .flatten()
    }
}

/// Runs [`multiplicativity_check`] on random parity-homogeneous elements at
/// `x` and `y` for all four parity pairs.
pub fn sign_table(
    ctx: &FlowContext,
    x: &Point,
    y: &Point,
    convention: Convention,
    tolerance: f64,
    rng: &mut SplitMix64,
) -> Result<SignTable> {
    let left = ctx.fiber(x, None)?;
    let right = ctx.fiber(y, Some(x))?;
    let mut entries = BTreeMap::new();
    for p in 0..2 {
        for q in 0..2 {
            let key = format!("{}/{}", parity_name(p), parity_name(q));
            let e1 = left.random_element(rng, Some(p))?;
            let e2 = right.random_element(rng, Some(q))?;
            let sign = if e1.norm() == 0.0 || e2.norm() == 0.0 {
                None
            } else {
                multiplicativity_check(ctx, &e1, &e2, convention, tolerance)?.sign
            };
            entries.insert(key, sign);
        }
    }
    Ok(SignTable {
        convention,
        entries,
    })
}

/// `(-1)^{k(k-1)/2}` on the k-particle sector: the sign of reversing k factors.
fn reversal_sign(mask: OccupationMask) -> f64 {
    let k = mask.count();
    if (k * k.saturating_sub(1) / 2).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `φ(x, f) = (x, Γ(U_{-x}) f)`, an element of the opposite representation's
/// product system.
///
/// `U_{-x}` maps each kernel point `k` of `V_x` to `k - x` (for a forward
/// representation), a kernel point of `V^op_x`. Under [`Convention::Twisted`]
/// the k-particle sector is additionally multiplied by `(-1)^{k(k-1)/2}`,
/// which turns the graded anti-multiplicativity of the literal map into strict
/// anti-multiplicativity.
pub fn phi_map(rep: &ShiftRep, e: &PSElement, convention: Convention) -> Result<PSElement> {
    let target = rep.opposite();
    let x = e.base.clone();
    let moved = e.transport(&target, |m| rep.unstep(m, &x))?;
    Ok(match convention {
        Convention::Literal => moved,
        Convention::Twisted => {
            let mut v = moved.vector.clone();
            for mask in masks(v.modes()) {
                let a = v.amplitude(mask);
                v.set(mask, a * reversal_sign(mask));
            }
            PSElement { vector: v, ..moved }
        }
    })
}

/// `||φ(e1·e2) - φ(e2)·φ(e1)||`, the right side multiplied in the opposite
/// representation's product system.
pub fn phi_antihomomorphism_check(
    rep: &ShiftRep,
    e1: &PSElement,
    e2: &PSElement,
    convention: Convention,
) -> Result<f64> {
    let lhs = phi_map(rep, &forward_product(rep, e1, e2)?, convention)?;
    let opposite = rep.opposite();
    let rhs = forward_product(
        &opposite,
        &phi_map(rep, e2, convention)?,
        &phi_map(rep, e1, convention)?,
    )?;
    lhs.distance(&rhs)
}

/// `Γ(R)` for the reflection `y ↦ -y`, carrying the opposite representation
/// onto the forward shift on `-(A^c)`. `e` must belong to `rep.opposite()`.
pub fn reflect_opposite(rep: &ShiftRep, e: &PSElement) -> Result<PSElement> {
    let target = ShiftRep::new(rep.module().opposite(), rep.cone().clone());
    e.transport(&target, |m| -m)
}

/// Anti-multiplicativity of `Γ(R) ∘ φ` from `E^{V^A}` to `E^{V^{-(A^c)}}`.
pub fn reflected_phi_check(
    rep: &ShiftRep,
    e1: &PSElement,
    e2: &PSElement,
    convention: Convention,
) -> Result<f64> {
    let psi = |e: &PSElement| -> Result<PSElement> {
        reflect_opposite(rep, &phi_map(rep, e, convention)?)
    };
    let target = ShiftRep::new(rep.module().opposite(), rep.cone().clone());
    let lhs = psi(&forward_product(rep, e1, e2)?)?;
    let rhs = forward_product(&target, &psi(e2)?, &psi(e1)?)?;
    lhs.distance(&rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{creation, SingleParticleVector};

    fn half_line() -> ShiftRep {
        ShiftRep::new(ModuleSpec::halfspace([1], 0), ConeSpec::orthant(1))
    }

    fn p<const N: usize>(c: [i64; N]) -> Point {
        Point::from(c)
    }

    fn single(rep: &ShiftRep, base: Point, mode: Point) -> PSElement {
        PSElement::new(
            rep,
            base,
            vec![mode],
            FockVector::basis(1, OccupationMask::from_modes(&[0])).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn fiber_examples() {
        let rep = half_line();
        let w = Window::new([-2], [10]).unwrap();
        let f = fiber(&rep, &p([2]), &w).unwrap();
        assert_eq!(f.modes, vec![p([0]), p([1])]);
        assert_eq!(f.fock_dim(), 4);
        assert_eq!(fiber(&rep, &p([0]), &w).unwrap().fock_dim(), 1);

        let quadrant = ShiftRep::new(
            ModuleSpec::halfspaces(
                2,
                vec![
                    crate::lattice::Halfspace {
                        normal: p([1, 0]),
                        offset: 0,
                    },
                    crate::lattice::Halfspace {
                        normal: p([0, 1]),
                        offset: 0,
                    },
                ],
            ),
            ConeSpec::orthant(2),
        );
        let f = fiber(&quadrant, &p([1, 1]), &Window::cube(2, 0, 3).unwrap()).unwrap();
        assert_eq!(f.modes.len(), 7);
        assert!(matches!(
            fiber(&rep, &p([-1]), &w),
            Err(Error::NotInCone(_))
        ));
    }

    #[test]
    fn fiber_cap() {
        let rep = half_line();
        let w = Window::new([0], [40]).unwrap();
        assert!(matches!(
            fiber(&rep, &p([20]), &w),
            Err(Error::ModeCap { .. })
        ));
    }

    #[test]
    fn vacuum_products() {
        let rep = half_line();
        let e =
            forward_product(&rep, &PSElement::vacuum(p([1])), &PSElement::vacuum(p([2]))).unwrap();
        assert_eq!(e, PSElement::vacuum(p([3])));
        let e =
            opposite_product(&rep, &PSElement::vacuum(p([1])), &PSElement::vacuum(p([2]))).unwrap();
        assert_eq!(e, PSElement::vacuum(p([3])));
    }

    #[test]
    fn single_particle_product() {
        // (1, δ0)·(1, δ0) = (2, δ0 ∧ δ1)
        let rep = half_line();
        let e = single(&rep, p([1]), p([0]));
        let prod = forward_product(&rep, &e, &e).unwrap();
        assert_eq!(prod.base(), &p([2]));
        assert_eq!(prod.modes(), &[p([0]), p([1])]);
        assert_eq!(
            prod.vector().amplitude(OccupationMask::from_modes(&[0, 1])),
            Complex64::new(1.0, 0.0)
        );
        assert_eq!(prod.norm(), 1.0);
        // opposite order: (1, δ0)∘(2, δ0 ∧ δ1) puts the translated δ0 first
        let opp = opposite_product(&rep, &e, &prod).unwrap();
        assert_eq!(opp.modes(), &[p([0]), p([1]), p([2])]);
    }

    #[test]
    fn element_validation() {
        let rep = half_line();
        let v = FockVector::basis(1, OccupationMask::from_modes(&[0])).unwrap();
        assert!(PSElement::new(&rep, p([1]), vec![p([1])], v.clone()).is_err());
        assert!(PSElement::new(
            &rep,
            p([1]),
            vec![p([0]), p([0])],
            FockVector::zeros(2).unwrap()
        )
        .is_err());
        assert!(PSElement::new(&rep, p([1]), vec![p([0])], FockVector::zeros(2).unwrap()).is_err());
    }

    #[test]
    fn phi_maps_kernel_by_translation() {
        let rep = half_line();
        let w = Window::new([-5], [10]).unwrap();
        let f = fiber(&rep, &p([3]), &w).unwrap();
        let e = f
            .basis_element(OccupationMask::from_modes(&[0, 1]))
            .unwrap();
        let image = phi_map(&rep, &e, Convention::Literal).unwrap();
        assert_eq!(image.modes(), &[p([-3]), p([-2]), p([-1])]);
        assert_eq!(
            image
                .vector()
                .amplitude(OccupationMask::from_modes(&[0, 1])),
            Complex64::new(1.0, 0.0)
        );
        let vac = phi_map(&rep, &PSElement::vacuum(p([3])), Convention::Literal).unwrap();
        assert_eq!(vac, PSElement::vacuum(p([3])));
    }

    #[test]
    fn phi_sign_for_odd_pairs() {
        let rep = half_line();
        let e1 = single(&rep, p([1]), p([0]));
        let e2 = single(&rep, p([1]), p([0]));
        let literal = phi_antihomomorphism_check(&rep, &e1, &e2, Convention::Literal).unwrap();
        let twisted = phi_antihomomorphism_check(&rep, &e1, &e2, Convention::Twisted).unwrap();
        assert!((literal - 2.0).abs() < 1e-12, "literal residual {literal}");
        assert!(twisted < 1e-12);
    }

    #[test]
    fn left_embedding_of_vacuum_is_second_quantized_shift() {
        let rep = half_line();
        let ctx = FlowContext::new(rep, Window::new([0], [5]).unwrap(), 1 << 12).unwrap();
        let gamma = ctx.second_quantized_shift(&p([2])).unwrap();
        for c in Convention::ALL {
            let t = left_embedding(&ctx, &PSElement::vacuum(p([2])), c).unwrap();
            assert_eq!(t, gamma);
        }
    }

    #[test]
    fn twisted_rejects_mixed_parity() {
        let rep = half_line();
        let ctx = FlowContext::new(rep.clone(), Window::new([0], [5]).unwrap(), 1 << 12).unwrap();
        let mut v = FockVector::zeros(1).unwrap();
        v.set(OccupationMask::VACUUM, Complex64::new(1.0, 0.0));
        v.set(OccupationMask::from_modes(&[0]), Complex64::new(1.0, 0.0));
        let e = PSElement::new(&rep, p([1]), vec![p([0])], v).unwrap();
        assert!(matches!(
            left_embedding(&ctx, &e, Convention::Twisted),
            Err(Error::ParityUndefined)
        ));
        assert!(left_embedding(&ctx, &e, Convention::Literal).is_ok());
    }

    #[test]
    fn literal_embedding_is_wedge_after_shift() {
        // T_{δ0} (δ0) = δ0 ∧ δ1 for x = 1
        let rep = half_line();
        let ctx = FlowContext::new(rep.clone(), Window::new([0], [3]).unwrap(), 1 << 12).unwrap();
        let e = single(&rep, p([1]), p([0]));
        let t = left_embedding(&ctx, &e, Convention::Literal).unwrap();
        let eta = creation(&SingleParticleVector::basis(4, 0))
            .unwrap()
            .apply(&crate::fock::vacuum(4).unwrap())
            .unwrap();
        let out = t.apply(&eta).unwrap();
        assert_eq!(
            out.amplitude(OccupationMask::from_modes(&[0, 1])),
            Complex64::new(1.0, 0.0)
        );
        assert!((out.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn vacuum_sign_report() {
        let rep = half_line();
        let ctx = FlowContext::new(rep, Window::new([0], [6]).unwrap(), 1 << 12).unwrap();
        let r = multiplicativity_check(
            &ctx,
            &PSElement::vacuum(p([1])),
            &PSElement::vacuum(p([1])),
            Convention::Literal,
            1e-10,
        )
        .unwrap();
        assert_eq!(r.sign, Some(1));
        assert_eq!(r.residual_plus, 0.0);
    }

    #[test]
    fn translate_support_escape() {
        let ctx = FlowContext::new(half_line(), Window::new([0], [3]).unwrap(), 1 << 12).unwrap();
        let f = ctx.delta(&p([3])).unwrap();
        assert!(matches!(
            ctx.translate(&f, &p([1])),
            Err(Error::SupportEscapes)
        ));
        let g = ctx.delta(&p([1])).unwrap();
        assert_eq!(
            ctx.translate(&g, &p([2])).unwrap(),
            ctx.delta(&p([3])).unwrap()
        );
    }

    #[test]
    fn context_respects_cap() {
        let err = FlowContext::new(half_line(), Window::new([0], [9]).unwrap(), 512).unwrap_err();
        assert!(matches!(
            err,
            Error::DimensionCap {
                modes: 10,
                cap: 512
            }
        ));
    }
}
