//! Finite-dimensional antisymmetric Fock space.
//!
//! Basis states are occupation masks over `n` modes. A mask `S` stands for the
//! ordered wedge `e_{s_1} ∧ e_{s_2} ∧ … ∧ e_{s_k}` with `s_1 < s_2 < … < s_k`.
//! Creating mode `i` in front of `S` and sorting it into place costs the sign
//! `(-1)^{#{j ∈ S : j < i}}`.
//!
//! Inner products are conjugate-linear in the **first** argument. With that
//! convention `a(f)^*` is linear in `f`, `a(f)` is antilinear, and the
//! anticommutator `{a(f), a(g)^*}` equals `<f, g> I`.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Hard limit on the number of modes of any Fock space built here (2^14 states).
pub const MAX_MODES: usize = 14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub(crate) fn check_modes(n: usize) -> Result<()> {
    if n > MAX_MODES {
        return Err(Error::ModeCap {
            requested: n,
            cap: MAX_MODES,
        });
    }
    Ok(())
}

/// A basis state: the set of occupied modes, stored as a bit set.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct OccupationMask(u32);

impl OccupationMask {
    pub const VACUUM: Self = Self(0);

    pub const fn from_bits(bits: u32) -> Self {
        Self(bits)
    }

    pub fn from_modes(modes: &[usize]) -> Self {
        Self(modes.iter().fold(0, |acc, &m| acc | (1 << m)))
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub const fn count(self) -> usize {
        self.0.count_ones() as usize
    }

    /// 0 for even particle number, 1 for odd.
    pub const fn parity(self) -> usize {
        self.count() & 1
    }

    pub const fn contains(self, mode: usize) -> bool {
        self.0 & (1 << mode) != 0
    }

    pub const fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    /// Occupied modes in increasing order.
    pub fn modes(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let m = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(m)
            }
        })
    }

    /// `(-1)^{number of occupied modes below `mode`}`.
    pub fn sign_below(self, mode: usize) -> f64 {
        let below = self.0 & ((1u32 << mode) - 1);
        if below.count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    /// Sign of the reordering `S ∧ R → sorted(S ∪ R)` for disjoint masks:
    /// `(-1)^{#{(s, r) : s ∈ S, r ∈ R, s > r}}`.
    pub fn wedge_sign(self, right: Self) -> f64 {
        let mut inversions = 0u32;
        for r in right.modes() {
            inversions += (self.0 >> (r + 1)).count_ones();
        }
        if inversions.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

impl fmt::Debug for OccupationMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, m) in self.modes().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

/// All `2^n` masks in increasing bit order.
pub fn masks(n: usize) -> impl Iterator<Item = OccupationMask> {
    (0..1u32 << n).map(OccupationMask)
}

/// A vector of the one-particle space `C^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleParticleVector {
    coefficients: Vec<Complex64>,
}

impl SingleParticleVector {
    pub fn new(coefficients: Vec<Complex64>) -> Self {
        Self { coefficients }
    }

    pub fn zeros(n: usize) -> Self {
        Self::new(vec![ZERO; n])
    }

    /// Standard basis vector `e_i` of `C^n`.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.coefficients[i] = ONE;
        v
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// `<self, other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.coefficients.iter().map(|a| a * c).collect())
    }
}

/// An element of the Fock space over `n` modes, one amplitude per mask.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    modes: usize,
    amplitudes: Vec<Complex64>,
}

impl FockVector {
    pub fn zeros(modes: usize) -> Result<Self> {
        check_modes(modes)?;
        Ok(Self {
            modes,
            amplitudes: vec![ZERO; 1 << modes],
        })
    }

    pub fn basis(modes: usize, mask: OccupationMask) -> Result<Self> {
        let mut v = Self::zeros(modes)?;
        v.amplitudes[mask.index()] = ONE;
        Ok(v)
    }

    pub fn from_amplitudes(modes: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_modes(modes)?;
        if amplitudes.len() != 1 << modes {
            return Err(Error::DimensionMismatch {
                context: "Fock vector amplitudes",
                expected: 1 << modes,
                found: amplitudes.len(),
            });
        }
        Ok(Self { modes, amplitudes })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, mask: OccupationMask) -> Complex64 {
        self.amplitudes[mask.index()]
    }

    pub fn set(&mut self, mask: OccupationMask, value: Complex64) {
        self.amplitudes[mask.index()] = value;
    }

    /// Nonzero amplitudes in mask order.
    pub fn support(&self) -> impl Iterator<Item = (OccupationMask, Complex64)> + '_ {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| **a != ZERO)
            .map(|(i, a)| (OccupationMask(i as u32), *a))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .fold(0.0, |acc, x| acc + x)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `<self, other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            modes: self.modes,
            amplitudes: self.amplitudes.iter().map(|a| a * c).collect(),
        }
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            self.clone()
        } else {
            self.scale(Complex64::new(1.0 / n, 0.0))
        }
    }

    /// `Some(0)` or `Some(1)` when every occupied mask has the same parity;
    /// the zero vector counts as even.
    pub fn parity(&self) -> Option<usize> {
        let mut seen = None;
        for (mask, _) in self.support() {
            match seen {
                None => seen = Some(mask.parity()),
                Some(p) if p != mask.parity() => return None,
                _ => {}
            }
        }
        Some(seen.unwrap_or(0))
    }

    /// Wedge product of two vectors over the same modes. Pairs of masks that
    /// share a mode contribute nothing.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.modes != other.modes {
            return Err(Error::DimensionMismatch {
                context: "wedge",
                expected: self.modes,
                found: other.modes,
            });
        }
        let mut out = Self::zeros(self.modes)?;
        for (s, a) in self.support() {
            for (r, b) in other.support() {
                if s.is_disjoint(r) {
                    out.amplitudes[(s.0 | r.0) as usize] += a * b * s.wedge_sign(r);
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.modes, other.modes, "Fock vectors over different modes");
        Self {
            modes: self.modes,
            amplitudes: self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        }
    }
}

impl Add for &FockVector {
    type Output = FockVector;
    fn add(self, rhs: Self) -> FockVector {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &FockVector {
    type Output = FockVector;
    fn sub(self, rhs: Self) -> FockVector {
        self.zip_with(rhs, |a, b| a - b)
    }
}

/// The vacuum `Ω` over `n` modes.
pub fn vacuum(modes: usize) -> Result<FockVector> {
    FockVector::basis(modes, OccupationMask::VACUUM)
}

/// `u ⊗ v ↦ u ∧ v'` where `v'` is `v` with its modes shifted past those of `u`.
///
/// On basis masks this is `S₁ ∪ (S₂ << p)` with sign `+1`, which realizes the
/// unitary `Γ(H₁) ⊗ Γ(H₂) ≅ Γ(H₁ ⊕ H₂)`.
pub fn wedge_embed(u: &FockVector, v: &FockVector) -> Result<FockVector> {
    let p = u.modes;
    let mut out = FockVector::zeros(p + v.modes)?;
    for (s, a) in u.support() {
        for (r, b) in v.support() {
            out.amplitudes[(s.0 | (r.0 << p)) as usize] = a * b;
        }
    }
    Ok(out)
}

/// Sparse complex matrix between Fock spaces, stored by source column.
///
/// Each column holds `(target mask, value)` pairs sorted by target.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    source_modes: usize,
    target_modes: usize,
    columns: Vec<Vec<(u32, Complex64)>>,
}

impl FockOperator {
    pub fn zeros(target_modes: usize, source_modes: usize) -> Result<Self> {
        check_modes(source_modes)?;
        check_modes(target_modes)?;
        Ok(Self {
            source_modes,
            target_modes,
            columns: vec![Vec::new(); 1 << source_modes],
        })
    }

    pub fn identity(modes: usize) -> Result<Self> {
        Self::diagonal(modes, |_| ONE)
    }

    pub fn diagonal(modes: usize, entry: impl Fn(OccupationMask) -> Complex64) -> Result<Self> {
        let mut op = Self::zeros(modes, modes)?;
        for (j, col) in op.columns.iter_mut().enumerate() {
            let v = entry(OccupationMask(j as u32));
            if v != ZERO {
                col.push((j as u32, v));
            }
        }
        Ok(op)
    }

    /// Orthogonal projection onto the span of the masks where `keep` is true.
    pub fn projection(keep: &[bool]) -> Result<Self> {
        let modes = keep.len().trailing_zeros() as usize;
        Self::diagonal(modes, |m| if keep[m.index()] { ONE } else { ZERO })
    }

    fn from_columns(
        target_modes: usize,
        source_modes: usize,
        mut columns: Vec<Vec<(u32, Complex64)>>,
    ) -> Self {
        for col in &mut columns {
            col.sort_by_key(|(t, _)| *t);
        }
        Self {
            source_modes,
            target_modes,
            columns,
        }
    }

    /// Second quantization of a partial injection of modes: source mode `j`
    /// goes to target mode `map[j]`, or is annihilated when `map[j]` is `None`.
    ///
    /// A mask survives only if all its modes are mapped; its image is the
    /// sorted image set with the sign of the sorting permutation. This is the
    /// same operator `second_quantization` produces from the 0/1 matrix of the
    /// map, computed without minors.
    pub fn mode_map(map: &[Option<usize>], target_modes: usize) -> Result<Self> {
        let source_modes = map.len();
        let mut op = Self::zeros(target_modes, source_modes)?;
        for mask in masks(source_modes) {
            let mut image = OccupationMask::VACUUM;
            let mut sign = 1.0;
            let mut alive = true;
            for m in mask.modes() {
                match map[m] {
                    Some(t) => {
                        debug_assert!(t < target_modes);
                        // earlier (smaller) sources already placed; count those above t
                        if image.contains(t) {
                            alive = false;
                            break;
                        }
                        if (image.0 >> (t + 1)).count_ones() % 2 == 1 {
                            sign = -sign;
                        }
                        image.0 |= 1 << t;
                    }
                    None => {
                        alive = false;
                        break;
                    }
                }
            }
            if alive {
                op.columns[mask.index()].push((image.0, Complex64::new(sign, 0.0)));
            }
        }
        Ok(op)
    }

    /// Builds an operator from `(target, source, value)` triples, summing
    /// repeated positions in the order given.
    pub fn from_entries(
        target_modes: usize,
        source_modes: usize,
        entries: impl IntoIterator<Item = (OccupationMask, OccupationMask, Complex64)>,
    ) -> Result<Self> {
        let mut op = Self::zeros(target_modes, source_modes)?;
        for (t, s, v) in entries {
            op.columns[s.index()].push((t.0, v));
        }
        for col in &mut op.columns {
            col.sort_by_key(|(t, _)| *t);
            col.dedup_by(|later, kept| {
                if later.0 == kept.0 {
                    kept.1 += later.1;
                    true
                } else {
                    false
                }
            });
            col.retain(|(_, v)| *v != ZERO);
        }
        Ok(op)
    }

    /// `η ↦ f ∧ η` on the Fock space of `f`.
    pub fn wedge_left(f: &FockVector) -> Result<Self> {
        let n = f.modes;
        let support: Vec<_> = f.support().collect();
        let mut op = Self::zeros(n, n)?;
        for r in masks(n) {
            let col = &mut op.columns[r.index()];
            for &(s, a) in &support {
                if s.is_disjoint(r) {
                    col.push((s.0 | r.0, a * s.wedge_sign(r)));
                }
            }
        }
        Ok(Self::from_columns(n, n, op.columns))
    }

    pub fn source_modes(&self) -> usize {
        self.source_modes
    }

    pub fn target_modes(&self) -> usize {
        self.target_modes
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn column(&self, source: OccupationMask) -> &[(u32, Complex64)] {
        &self.columns[source.index()]
    }

    pub fn get(&self, target: OccupationMask, source: OccupationMask) -> Complex64 {
        let col = &self.columns[source.index()];
        match col.binary_search_by_key(&target.0, |(t, _)| *t) {
            Ok(k) => col[k].1,
            Err(_) => ZERO,
        }
    }

    /// All nonzero entries as `(target, source, value)`, column-major.
    pub fn entries(
        &self,
    ) -> impl Iterator<Item = (OccupationMask, OccupationMask, Complex64)> + '_ {
        self.columns.iter().enumerate().flat_map(|(j, col)| {
            col.iter()
                .map(move |&(t, v)| (OccupationMask(t), OccupationMask(j as u32), v))
        })
    }

    pub fn adjoint(&self) -> Self {
        let mut columns = vec![Vec::new(); 1 << self.target_modes];
        for (t, s, v) in self.entries() {
            columns[t.index()].push((s.0, v.conj()));
        }
        Self::from_columns(self.source_modes, self.target_modes, columns)
    }

    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        if v.modes != self.source_modes {
            return Err(Error::DimensionMismatch {
                context: "operator application",
                expected: self.source_modes,
                found: v.modes,
            });
        }
        let mut out = FockVector::zeros(self.target_modes)?;
        for (j, col) in self.columns.iter().enumerate() {
            let a = v.amplitudes[j];
            if a == ZERO {
                continue;
            }
            for &(t, w) in col {
                out.amplitudes[t as usize] += w * a;
            }
        }
        Ok(out)
    }

    /// `self · rhs`.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        if rhs.target_modes != self.source_modes {
            return Err(Error::DimensionMismatch {
                context: "operator composition",
                expected: self.source_modes,
                found: rhs.target_modes,
            });
        }
        let mut scratch = vec![ZERO; 1 << self.target_modes];
        let mut touched = vec![false; 1 << self.target_modes];
        let mut rows: Vec<u32> = Vec::new();
        let mut columns = Vec::with_capacity(rhs.columns.len());
        for col in &rhs.columns {
            for &(k, b) in col {
                for &(t, a) in &self.columns[k as usize] {
                    if !touched[t as usize] {
                        touched[t as usize] = true;
                        rows.push(t);
                    }
                    scratch[t as usize] += a * b;
                }
            }
            rows.sort_unstable();
            let mut out = Vec::with_capacity(rows.len());
            for &t in &rows {
                let v = scratch[t as usize];
                if v != ZERO {
                    out.push((t, v));
                }
                scratch[t as usize] = ZERO;
                touched[t as usize] = false;
            }
            rows.clear();
            columns.push(out);
        }
        Ok(Self {
            source_modes: rhs.source_modes,
            target_modes: self.target_modes,
            columns,
        })
    }

    fn check_same_shape(&self, other: &Self, context: &'static str) -> Result<()> {
        if self.source_modes != other.source_modes {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.source_modes,
                found: other.source_modes,
            });
        }
        if self.target_modes != other.target_modes {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.target_modes,
                found: other.target_modes,
            });
        }
        Ok(())
    }

    /// `a·self + b·other`, merging sorted columns.
    pub fn linear_combination(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        self.check_same_shape(other, "operator sum")?;
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(x, y)| {
                let mut out = Vec::with_capacity(x.len() + y.len());
                let (mut i, mut j) = (0, 0);
                while i < x.len() || j < y.len() {
                    let (t, v) = if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
                        i += 1;
                        (x[i - 1].0, a * x[i - 1].1)
                    } else if i == x.len() || y[j].0 < x[i].0 {
                        j += 1;
                        (y[j - 1].0, b * y[j - 1].1)
                    } else {
                        i += 1;
                        j += 1;
                        (x[i - 1].0, a * x[i - 1].1 + b * y[j - 1].1)
                    };
                    if v != ZERO {
                        out.push((t, v));
                    }
                }
                out
            })
            .collect();
        Ok(Self {
            source_modes: self.source_modes,
            target_modes: self.target_modes,
            columns,
        })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            source_modes: self.source_modes,
            target_modes: self.target_modes,
            columns: self
                .columns
                .iter()
                .map(|col| {
                    col.iter()
                        .map(|&(t, v)| (t, v * c))
                        .filter(|(_, v)| *v != ZERO)
                        .collect()
                })
                .collect(),
        }
    }

    /// `P_left · self · P_right` for diagonal 0/1 projections given as masks
    /// of kept basis states.
    pub fn compress(&self, left: &[bool], right: &[bool]) -> Self {
        let columns = self
            .columns
            .iter()
            .enumerate()
            .map(|(j, col)| {
                if !right[j] {
                    Vec::new()
                } else {
                    col.iter()
                        .copied()
                        .filter(|(t, _)| left[*t as usize])
                        .collect()
                }
            })
            .collect();
        Self {
            source_modes: self.source_modes,
            target_modes: self.target_modes,
            columns,
        }
    }

    /// Frobenius norm; an upper bound for the operator norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.columns
            .iter()
            .flatten()
            .map(|(_, v)| v.norm_sqr())
            .fold(0.0, |acc, x| acc + x)
            .sqrt()
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(1 << self.target_modes, 1 << self.source_modes);
        for (t, s, v) in self.entries() {
            m[(t.index(), s.index())] = v;
        }
        m
    }
}

impl Add for &FockOperator {
    type Output = Result<FockOperator>;
    fn add(self, rhs: Self) -> Result<FockOperator> {
        self.linear_combination(ONE, rhs, ONE)
    }
}

impl Sub for &FockOperator {
    type Output = Result<FockOperator>;
    fn sub(self, rhs: Self) -> Result<FockOperator> {
        self.linear_combination(ONE, rhs, -ONE)
    }
}

impl Mul for &FockOperator {
    type Output = Result<FockOperator>;
    fn mul(self, rhs: Self) -> Result<FockOperator> {
        self.compose(rhs)
    }
}

/// `a(f)^*`: wedge with `f` from the left. Linear in `f`.
pub fn creation(f: &SingleParticleVector) -> Result<FockOperator> {
    let n = f.len();
    let mut op = FockOperator::zeros(n, n)?;
    for s in masks(n) {
        let col = &mut op.columns[s.index()];
        for (i, &c) in f.coefficients.iter().enumerate() {
            if c == ZERO || s.contains(i) {
                continue;
            }
            col.push((s.0 | (1 << i), c * s.sign_below(i)));
        }
        col.sort_by_key(|(t, _)| *t);
    }
    Ok(op)
}

/// `a(f)`, the adjoint of `creation(f)`. Antilinear in `f`.
pub fn annihilation(f: &SingleParticleVector) -> Result<FockOperator> {
    Ok(creation(f)?.adjoint())
}

/// `AB + BA` for operators on the same space.
pub fn anticommutator(a: &FockOperator, b: &FockOperator) -> Result<FockOperator> {
    if a.source_modes != a.target_modes {
        return Err(Error::DimensionMismatch {
            context: "anticommutator (non-square left factor)",
            expected: a.source_modes,
            found: a.target_modes,
        });
    }
    a.check_same_shape(b, "anticommutator")?;
    let ab = a.compose(b)?;
    let ba = b.compose(a)?;
    &ab + &ba
}

/// The grading operator `(-1)^N`.
pub fn parity_operator(modes: usize) -> Result<FockOperator> {
    FockOperator::diagonal(modes, |m| if m.parity() == 0 { ONE } else { -ONE })
}

/// `||W*W - I||_F` for an `m × n` matrix.
pub fn isometry_residual(w: &DMatrix<Complex64>) -> f64 {
    let gram = w.adjoint() * w;
    (gram - DMatrix::identity(w.ncols(), w.ncols())).norm()
}

/// Random `rows × cols` isometry: the Q factor of a matrix with entries drawn
/// from [`SplitMix64::complex`] in column-major order. Requires `cols <= rows`.
pub fn random_isometry(
    rows: usize,
    cols: usize,
    rng: &mut SplitMix64,
) -> Result<DMatrix<Complex64>> {
    if cols > rows {
        return Err(Error::DimensionMismatch {
            context: "isometry columns vs rows",
            expected: rows,
            found: cols,
        });
    }
    let m = DMatrix::from_fn(rows, cols, |_, _| rng.complex());
    Ok(m.qr().q())
}

/// Tolerance on `||W*W - I||_F` accepted by [`second_quantization`].
pub const ISOMETRY_TOLERANCE: f64 = 1e-9;

/// `Γ_a(W)` for an isometry `W` with `m` rows (target modes) and `n` columns
/// (source modes).
///
/// The entry from source mask `I` to target mask `J` with `|I| = |J| = k` is
/// the minor `det W[J, I]`; masks of different size never mix.
pub fn second_quantization(w: &DMatrix<Complex64>) -> Result<FockOperator> {
    let (m, n) = (w.nrows(), w.ncols());
    check_modes(m)?;
    check_modes(n)?;
    let residual = isometry_residual(w);
    if residual > ISOMETRY_TOLERANCE {
        return Err(Error::NotIsometry { residual });
    }
    Ok(minor_lift(w))
}

/// Minor expansion without the isometry precondition.
pub(crate) fn minor_lift(w: &DMatrix<Complex64>) -> FockOperator {
    let (m, n) = (w.nrows(), w.ncols());
    let mut by_size: Vec<Vec<OccupationMask>> = vec![Vec::new(); m.max(n) + 1];
    for mask in masks(m) {
        by_size[mask.count()].push(mask);
    }
    let mut columns = vec![Vec::new(); 1 << n];
    for source in masks(n) {
        let k = source.count();
        if k > m {
            continue;
        }
        let cols: Vec<usize> = source.modes().collect();
        let col = &mut columns[source.index()];
        for &target in &by_size[k] {
            let rows: Vec<usize> = target.modes().collect();
            let det = if k == 0 {
                ONE
            } else {
                DMatrix::from_fn(k, k, |a, b| w[(rows[a], cols[b])]).determinant()
            };
            if det != ZERO {
                col.push((target.0, det));
            }
        }
    }
    FockOperator::from_columns(m, n, columns)
}
