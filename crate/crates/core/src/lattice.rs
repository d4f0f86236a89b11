//! Lattice cones, P-modules and their shift representations on finite windows.
//!
//! A cone is the monoid generated by finitely many vectors of `Z^d`. A module
//! `A ⊆ Z^d` satisfies `A + g ⊆ A` for every generator `g`, and carries the
//! shift isometries `V_x δ_y = δ_{y+x}` on `ℓ²(A)`. The unitary dilation is
//! plain translation on `ℓ²(Z^d)`, and the opposite representation is the
//! translation by `-x` compressed to `ℓ²(A^c)`.
//!
//! Every infinite object is cut down to an axis-aligned [`Window`]. Truncated
//! shifts remember which columns are represented exactly (the validity mask),
//! so every identity below is checked exactly on those columns.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on the number of lattice points in a window.
pub const MAX_WINDOW_POINTS: usize = 1 << 20;

/// Radius of the box searched for a strictly positive functional on the cone.
const FUNCTIONAL_SEARCH_RADIUS: i64 = 6;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct Point(pub Vec<i64>);

impl Point {
    pub fn new(coords: Vec<i64>) -> Self {
        Self(coords)
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn dot(&self, other: &Point) -> i64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn l1(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).sum()
    }
}

impl From<Vec<i64>> for Point {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

impl<const N: usize> From<[i64; N]> for Point {
    fn from(v: [i64; N]) -> Self {
        Self(v.to_vec())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl Add for &Point {
    type Output = Point;
    fn add(self, rhs: &Point) -> Point {
        debug_assert_eq!(self.dim(), rhs.dim());
        Point(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Point {
    type Output = Point;
    fn sub(self, rhs: &Point) -> Point {
        debug_assert_eq!(self.dim(), rhs.dim());
        Point(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point(self.0.iter().map(|a| -a).collect())
    }
}

/// Determinant of a small integer matrix by fraction-free elimination.
fn integer_det(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    if n == 0 {
        1
    } else {
        sign * m[n - 1][n - 1]
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Visit all k-subsets of `0..n` in lexicographic order.
fn for_each_subset(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// The monoid generated by finitely many lattice vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeSpec {
    dim: usize,
    generators: Vec<Point>,
    functional: Point,
}

impl ConeSpec {
    /// Validates that the generators span `Z^d` as a group and that the cone
    /// is pointed (some integer functional is positive on every generator).
    pub fn new(dim: usize, generators: Vec<Point>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidCone("dimension must be positive".into()));
        }
        for g in &generators {
            if g.dim() != dim {
                return Err(Error::InvalidCone(format!(
                    "generator {g} has dimension {}, expected {dim}",
                    g.dim()
                )));
            }
            if g.is_zero() {
                return Err(Error::InvalidCone("zero generator".into()));
            }
        }
        let mut lattice_gcd = 0i128;
        for_each_subset(generators.len(), dim, |subset| {
            let m = subset
                .iter()
                .map(|&i| generators[i].0.iter().map(|&c| c as i128).collect())
                .collect();
            lattice_gcd = gcd(lattice_gcd, integer_det(m));
        });
        if lattice_gcd != 1 {
            return Err(Error::InvalidCone(format!(
                "generators do not span Z^{dim} as a group (index {lattice_gcd})"
            )));
        }
        let functional = positive_functional(dim, &generators).ok_or_else(|| {
            Error::InvalidCone(format!(
                "no functional with coefficients in [-{r},{r}] is positive on all generators; cone is not pointed",
                r = FUNCTIONAL_SEARCH_RADIUS
            ))
        })?;
        Ok(Self {
            dim,
            generators,
            functional,
        })
    }

    /// The standard cone `N^d`.
    pub fn orthant(dim: usize) -> Self {
        let generators = (0..dim)
            .map(|i| {
                let mut p = Point::zero(dim);
                p.0[i] = 1;
                p
            })
            .collect();
        Self::new(dim, generators).expect("orthant is a valid cone")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Point] {
        &self.generators
    }

    /// Membership in the generated monoid.
    pub fn contains(&self, x: &Point) -> bool {
        if x.dim() != self.dim {
            return false;
        }
        if self.generators.len() == self.dim {
            return self.simplicial_contains(x);
        }
        let mut memo = HashMap::new();
        self.contains_memo(x, &mut memo)
    }

    /// Cramer's rule: `x = Σ c_i g_i` with every `c_i` a nonnegative integer.
    fn simplicial_contains(&self, x: &Point) -> bool {
        let columns = |replace: Option<usize>| -> Vec<Vec<i128>> {
            (0..self.dim)
                .map(|row| {
                    (0..self.dim)
                        .map(|col| {
                            let v = if replace == Some(col) {
                                x
                            } else {
                                &self.generators[col]
                            };
                            v.0[row] as i128
                        })
                        .collect()
                })
                .collect()
        };
        let det = integer_det(columns(None));
        (0..self.dim).all(|i| {
            let num = integer_det(columns(Some(i)));
            num % det == 0 && num / det >= 0
        })
    }

    fn contains_memo(&self, x: &Point, memo: &mut HashMap<Point, bool>) -> bool {
        if x.is_zero() {
            return true;
        }
        if self.functional.dot(x) <= 0 {
            return false;
        }
        if let Some(&known) = memo.get(x) {
            return known;
        }
        let found = self.generators.iter().any(|g| {
            let rest = x - g;
            self.functional.dot(&rest) >= 0 && self.contains_memo(&rest, memo)
        });
        memo.insert(x.clone(), found);
        found
    }

    pub fn require(&self, x: &Point) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::NotInCone(x.clone()))
        }
    }
}

fn positive_functional(dim: usize, generators: &[Point]) -> Option<Point> {
    for radius in 1..=FUNCTIONAL_SEARCH_RADIUS {
        let lo = Point(vec![-radius; dim]);
        let hi = Point(vec![radius; dim]);
        let box_ = Window {
            lower: lo,
            upper: hi,
        };
        if let Some(w) = box_
            .points()
            .into_iter()
            .find(|w| generators.iter().all(|g| w.dot(g) > 0))
        {
            return Some(w);
        }
    }
    None
}

/// `{y : <normal, y> >= offset}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Point,
    pub offset: i64,
}

impl Halfspace {
    pub fn contains(&self, y: &Point) -> bool {
        self.normal.dot(y) >= self.offset
    }
}

/// A lattice P-module.
#[derive(Debug, Clone, PartialEq)]
pub enum ModuleSpec {
    /// Intersection of halfspaces.
    Halfspaces {
        dim: usize,
        constraints: Vec<Halfspace>,
    },
    /// `∪_{f ∈ offsets} (f + P)`.
    Translates { cone: ConeSpec, offsets: Vec<Point> },
    /// `{y : -y ∉ A}`.
    ReflectedComplement(Box<ModuleSpec>),
    /// `A + by`.
    Shifted { base: Box<ModuleSpec>, by: Point },
}

impl ModuleSpec {
    pub fn halfspaces(dim: usize, constraints: Vec<Halfspace>) -> Self {
        Self::Halfspaces { dim, constraints }
    }

    /// Convenience for a single constraint `<normal, y> >= offset`.
    pub fn halfspace(normal: impl Into<Point>, offset: i64) -> Self {
        let normal = normal.into();
        Self::Halfspaces {
            dim: normal.dim(),
            constraints: vec![Halfspace { normal, offset }],
        }
    }

    pub fn translates(cone: ConeSpec, offsets: Vec<Point>) -> Self {
        Self::Translates { cone, offsets }
    }

    pub fn shifted(&self, by: Point) -> Self {
        Self::Shifted {
            base: Box::new(self.clone()),
            by,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Halfspaces { dim, .. } => *dim,
            Self::Translates { cone, .. } => cone.dim(),
            Self::ReflectedComplement(inner) => inner.dim(),
            Self::Shifted { base, .. } => base.dim(),
        }
    }

    pub fn contains(&self, y: &Point) -> bool {
        match self {
            Self::Halfspaces { constraints, .. } => constraints.iter().all(|h| h.contains(y)),
            Self::Translates { cone, offsets } => offsets.iter().any(|f| cone.contains(&(y - f))),
            Self::ReflectedComplement(inner) => !inner.contains(&-y),
            Self::Shifted { base, by } => base.contains(&(y - by)),
        }
    }

    /// `-(A^c) = {y : -y ∉ A}`.
    ///
    /// A single halfspace `<n,y> >= c` reflects to `<n,y> >= 1 - c`; a shifted
    /// module reflects to the shifted reflection; reflecting twice returns the
    /// original description.
    pub fn opposite(&self) -> Self {
        match self {
            Self::Halfspaces { dim, constraints } if constraints.len() == 1 => Self::Halfspaces {
                dim: *dim,
                constraints: vec![Halfspace {
                    normal: constraints[0].normal.clone(),
                    offset: 1 - constraints[0].offset,
                }],
            },
            Self::ReflectedComplement(inner) => (**inner).clone(),
            Self::Shifted { base, by } => Self::Shifted {
                base: Box::new(base.opposite()),
                by: -by,
            },
            other => Self::ReflectedComplement(Box::new(other.clone())),
        }
    }
}

/// Membership test.
pub fn module_membership(module: &ModuleSpec, y: &Point) -> Result<bool> {
    if y.dim() != module.dim() {
        return Err(Error::DimensionMismatch {
            context: "module membership",
            expected: module.dim(),
            found: y.dim(),
        });
    }
    Ok(module.contains(y))
}

/// `-(A^c)`, the lattice version of the reflected complement of the interior.
pub fn opposite_module(module: &ModuleSpec) -> ModuleSpec {
    module.opposite()
}

/// Axis-aligned box of lattice points, corners included.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub lower: Point,
    pub upper: Point,
}

impl Window {
    pub fn new(lower: impl Into<Point>, upper: impl Into<Point>) -> Result<Self> {
        let (lower, upper) = (lower.into(), upper.into());
        if lower.dim() != upper.dim() {
            return Err(Error::DimensionMismatch {
                context: "window corners",
                expected: lower.dim(),
                found: upper.dim(),
            });
        }
        if lower.0.iter().zip(&upper.0).any(|(l, u)| l > u) {
            return Err(Error::InvertedWindow);
        }
        let w = Self { lower, upper };
        let points = w.len();
        if points > MAX_WINDOW_POINTS {
            return Err(Error::WindowCap {
                points,
                cap: MAX_WINDOW_POINTS,
            });
        }
        Ok(w)
    }

    /// The cube `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: i64, hi: i64) -> Result<Self> {
        Self::new(Point(vec![lo; dim]), Point(vec![hi; dim]))
    }

    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    pub fn len(&self) -> usize {
        self.lower
            .0
            .iter()
            .zip(&self.upper.0)
            .map(|(l, u)| (u - l + 1).max(0) as usize)
            .fold(1usize, |acc, k| acc.saturating_mul(k))
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, y: &Point) -> bool {
        y.dim() == self.dim()
            && y.0
                .iter()
                .zip(self.lower.0.iter().zip(&self.upper.0))
                .all(|(c, (l, u))| l <= c && c <= u)
    }

    /// All points in lexicographic order.
    pub fn points(&self) -> Vec<Point> {
        let d = self.dim();
        let mut out = Vec::with_capacity(self.len());
        if self.lower.0.iter().zip(&self.upper.0).any(|(l, u)| l > u) {
            return out;
        }
        let mut cur = self.lower.clone();
        loop {
            out.push(cur.clone());
            let mut k = d;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if cur.0[k] < self.upper.0[k] {
                    cur.0[k] += 1;
                    for j in k + 1..d {
                        cur.0[j] = self.lower.0[j];
                    }
                    break;
                }
            }
        }
    }

    pub fn translate(&self, by: &Point) -> Self {
        Self {
            lower: &self.lower + by,
            upper: &self.upper + by,
        }
    }

    /// `-W`.
    pub fn reflect(&self) -> Self {
        Self {
            lower: -&self.upper,
            upper: -&self.lower,
        }
    }

    /// `W ∩ (W + x)`: the points `w` with `w - x` still in the window.
    pub fn core(&self, x: &Point) -> Option<Self> {
        let shifted = self.translate(x);
        let lower = Point(
            self.lower
                .0
                .iter()
                .zip(&shifted.lower.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        );
        let upper = Point(
            self.upper
                .0
                .iter()
                .zip(&shifted.upper.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        );
        if lower.0.iter().zip(&upper.0).any(|(l, u)| l > u) {
            None
        } else {
            Some(Self { lower, upper })
        }
    }
}

/// Points of the module inside the window, lexicographically.
pub fn module_points(module: &ModuleSpec, window: &Window) -> Vec<Point> {
    window
        .points()
        .into_iter()
        .filter(|y| module.contains(y))
        .collect()
}

/// Pairs `(y, g)` with `y ∈ A ∩ W` but `y + g ∉ A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleReport {
    pub checked: usize,
    pub violations: Vec<(Point, Point)>,
}

impl ModuleReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `A + g ⊆ A` for every generator `g` on the points of `A ∩ W`.
pub fn validate_module(module: &ModuleSpec, cone: &ConeSpec, window: &Window) -> ModuleReport {
    let points = module_points(module, window);
    let violations = points
        .iter()
        .flat_map(|y| {
            cone.generators()
                .iter()
                .filter(move |g| !module.contains(&(y + *g)))
                .map(move |g| (y.clone(), g.clone()))
        })
        .collect();
    ModuleReport {
        checked: points.len(),
        violations,
    }
}

/// A translation restricted to a finite set of lattice points.
///
/// Column `j` is the basis vector at `points[j]`; it maps to the basis vector
/// at `image[j]`, or leaves the window when `image[j]` is `None` (an invalid
/// column).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowedIsometry {
    shift: Point,
    points: Vec<Point>,
    image: Vec<Option<usize>>,
}

impl WindowedIsometry {
    /// `δ_y ↦ δ_{y + shift}` on `points`, valid when the image is again in `points`.
    pub fn translation(points: Vec<Point>, shift: Point) -> Self {
        let index: HashMap<&Point, usize> =
            points.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let image = points
            .iter()
            .map(|p| index.get(&(p + &shift)).copied())
            .collect();
        Self {
            shift,
            points,
            image,
        }
    }

    pub fn shift(&self) -> &Point {
        &self.shift
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn image(&self) -> &[Option<usize>] {
        &self.image
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn validity(&self) -> Vec<bool> {
        self.image.iter().map(Option::is_some).collect()
    }

    pub fn index_of(&self, p: &Point) -> Option<usize> {
        self.points.binary_search(p).ok()
    }

    /// Valid columns are distinct standard basis vectors.
    pub fn is_exact_isometry(&self) -> bool {
        let mut hit = vec![false; self.points.len()];
        for t in self.image.iter().flatten() {
            if hit[*t] {
                return false;
            }
            hit[*t] = true;
        }
        true
    }

    /// `(self ∘ rhs)` as an index map; invalid if either step leaves the window.
    pub fn compose(&self, rhs: &Self) -> Vec<Option<usize>> {
        rhs.image
            .iter()
            .map(|j| j.and_then(|j| self.image[j]))
            .collect()
    }

    /// 0/1 matrix with rows and columns indexed by `points`.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.points.len();
        let mut m = DMatrix::zeros(n, n);
        for (j, t) in self.image.iter().enumerate() {
            if let Some(t) = t {
                m[(*t, j)] = 1.0;
            }
        }
        m
    }
}

/// `V^A_x` restricted to `A ∩ W`.
pub fn shift_isometry(
    module: &ModuleSpec,
    cone: &ConeSpec,
    x: &Point,
    window: &Window,
) -> Result<WindowedIsometry> {
    cone.require(x)?;
    Ok(WindowedIsometry::translation(
        module_points(module, window),
        x.clone(),
    ))
}

/// Checks that `V_a V_b` and `V_c` agree on every column valid for both.
pub fn composition_agrees(
    a: &WindowedIsometry,
    b: &WindowedIsometry,
    c: &WindowedIsometry,
) -> bool {
    a.compose(b)
        .iter()
        .zip(c.image())
        .all(|(ab, c)| match (ab, c) {
            (Some(x), Some(y)) => x == y,
            _ => true,
        })
}

/// `(A \ (A + x)) ∩ W`, lexicographically. These points index an orthonormal
/// basis of `Ker(V_x^*)` inside the window.
pub fn kernel_basis(module: &ModuleSpec, x: &Point, window: &Window) -> Vec<Point> {
    window
        .points()
        .into_iter()
        .filter(|y| module.contains(y) && !module.contains(&(y - x)))
        .collect()
}

pub fn kernel_dimension_profile(module: &ModuleSpec, xs: &[Point], window: &Window) -> Vec<usize> {
    xs.iter()
        .map(|x| kernel_basis(module, x, window).len())
        .collect()
}

/// Outcome of comparing `A \ (A+x+y)` with `(A \ (A+x)) ⊔ (x + (A \ (A+y)))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelDecompositionReport {
    /// The sub-window `W ∩ (W + x)` on which the identity is compared.
    pub core: Option<Window>,
    pub points_checked: usize,
    pub kernel_size: usize,
    /// In the left side only.
    pub missing: Vec<Point>,
    /// In the right side only.
    pub extra: Vec<Point>,
    /// In both parts of the disjoint union.
    pub overlap: Vec<Point>,
}

impl KernelDecompositionReport {
    pub fn passed(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty() && self.overlap.is_empty()
    }
}

pub fn kernel_decomposition_check(
    module: &ModuleSpec,
    x: &Point,
    y: &Point,
    window: &Window,
) -> KernelDecompositionReport {
    let core = window.core(x);
    let points = core.as_ref().map(Window::points).unwrap_or_default();
    let xy = x + y;
    let mut report = KernelDecompositionReport {
        core: core.clone(),
        points_checked: points.len(),
        kernel_size: 0,
        missing: Vec::new(),
        extra: Vec::new(),
        overlap: Vec::new(),
    };
    for w in points {
        let in_a = module.contains(&w);
        let lhs = in_a && !module.contains(&(&w - &xy));
        let first = in_a && !module.contains(&(&w - x));
        let shifted = &w - x;
        let second = module.contains(&shifted) && !module.contains(&(&shifted - y));
        if lhs {
            report.kernel_size += 1;
        }
        if first && second {
            report.overlap.push(w.clone());
        }
        let rhs = first || second;
        match (lhs, rhs) {
            (true, false) => report.missing.push(w),
            (false, true) => report.extra.push(w),
            _ => {}
        }
    }
    report
}

/// Translation `U_x` on all of `Z^d ∩ W`. `x` may be any lattice vector.
pub fn dilation_shift(x: &Point, window: &Window) -> WindowedIsometry {
    WindowedIsometry::translation(window.points(), x.clone())
}

/// The opposite representation at `x` together with its reflected model.
#[derive(Debug, Clone)]
pub struct OppositeRep {
    /// `U_{-x}` compressed to `ℓ²(A^c ∩ W)`.
    pub isometry: WindowedIsometry,
    /// `V^B_x` on `B ∩ (-W)` with `B = -(A^c)`.
    pub reflected: WindowedIsometry,
    /// `reflection[j]` is the index of `-points[j]` in the reflected basis.
    pub reflection: Vec<usize>,
}

impl OppositeRep {
    /// `R V^op_x = V^B_x R` column by column, including which columns are valid.
    pub fn intertwines(&self) -> bool {
        self.isometry.image().iter().enumerate().all(|(j, img)| {
            let via_b = self.reflected.image()[self.reflection[j]];
            img.map(|t| self.reflection[t]) == via_b
        })
    }
}

pub fn opposite_rep(
    module: &ModuleSpec,
    cone: &ConeSpec,
    x: &Point,
    window: &Window,
) -> Result<OppositeRep> {
    cone.require(x)?;
    let complement: Vec<Point> = window
        .points()
        .into_iter()
        .filter(|y| !module.contains(y))
        .collect();
    let isometry = WindowedIsometry::translation(complement, -x);
    let reflected_module = module.opposite();
    let reflected = shift_isometry(&reflected_module, cone, x, &window.reflect())?;
    let reflection = isometry
        .points()
        .iter()
        .map(|p| {
            reflected
                .index_of(&-p)
                .expect("reflection maps A^c ∩ W onto -(A^c) ∩ -W")
        })
        .collect();
    Ok(OppositeRep {
        isometry,
        reflected,
        reflection,
    })
}

/// First `z` (lexicographic over `search_box`) with `B ∩ W = (A + z) ∩ W`.
///
/// Candidates are tested in parallel; the lexicographically first success is
/// returned regardless of completion order. A returned `z` is verified on
/// `window` only.
pub fn translation_equivalence_search(
    a: &ModuleSpec,
    b: &ModuleSpec,
    search_box: &Window,
    window: &Window,
) -> Option<Point> {
    let points = window.points();
    let in_b: Vec<bool> = points.iter().map(|y| b.contains(y)).collect();
    search_box.points().into_par_iter().find_first(|z| {
        points
            .iter()
            .zip(&in_b)
            .all(|(y, &yb)| a.contains(&(y - z)) == yb)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymmetryClass {
    /// `A = -(A^c) + z` verified on the window.
    Symmetric,
    /// No translation in the search box works. Evidence only.
    NoWitnessInBox,
}

impl fmt::Display for SymmetryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Symmetric => "symmetric (witnessed)",
            Self::NoWitnessInBox => "no witness in box",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryVerdict {
    pub witness: Option<Point>,
    pub class: SymmetryClass,
}

/// Searches for `z` with `A = -(A^c) + z` on the window.
pub fn symmetry_check(
    module: &ModuleSpec,
    search_box: &Window,
    window: &Window,
) -> SymmetryVerdict {
    let witness = translation_equivalence_search(&module.opposite(), module, search_box, window);
    let class = if witness.is_some() {
        SymmetryClass::Symmetric
    } else {
        SymmetryClass::NoWitnessInBox
    };
    SymmetryVerdict { witness, class }
}
