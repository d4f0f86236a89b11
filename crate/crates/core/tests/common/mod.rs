//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use carflow::lattice::{ConeSpec, Halfspace, ModuleSpec, Point};
use carflow::rng::SplitMix64;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Sign of the permutation sorting `seq` (distinct entries), by counting
/// inversions.
pub fn sort_sign(seq: &[usize]) -> f64 {
    let mut inv = 0;
    for a in 0..seq.len() {
        for b in a + 1..seq.len() {
            if seq[a] > seq[b] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `Γ(W) e_{i1} ∧ ... ∧ e_{ik}` by expanding `W e_{i1} ∧ ... ∧ W e_{ik}` over
/// all index tuples.
pub fn brute_force_lift(w: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (m, n) = (w.nrows(), w.ncols());
    let mut out = DMatrix::zeros(1 << m, 1 << n);
    for source in 0..1usize << n {
        let cols: Vec<usize> = (0..n).filter(|b| source >> b & 1 == 1).collect();
        let k = cols.len();
        if k > m {
            continue;
        }
        let mut tuple = vec![0usize; k];
        loop {
            let mut distinct = true;
            for a in 0..k {
                for b in a + 1..k {
                    distinct &= tuple[a] != tuple[b];
                }
            }
            if distinct {
                let mut coeff = Complex64::new(sort_sign(&tuple), 0.0);
                for (row, col) in tuple.iter().zip(&cols) {
                    coeff *= w[(*row, *col)];
                }
                let target: usize = tuple.iter().map(|r| 1 << r).sum();
                out[(target, source)] += coeff;
            }
            let mut pos = 0;
            while pos < k {
                tuple[pos] += 1;
                if tuple[pos] < m {
                    break;
                }
                tuple[pos] = 0;
                pos += 1;
            }
            if pos == k {
                break;
            }
        }
    }
    out
}

pub fn small(rng: &mut SplitMix64, lo: i64, hi: i64) -> i64 {
    lo + rng.below((hi - lo + 1) as usize) as i64
}

pub fn random_point(d: usize, rng: &mut SplitMix64, lo: i64, hi: i64) -> Point {
    Point::new((0..d).map(|_| small(rng, lo, hi)).collect())
}

pub fn random_cone(d: usize, rng: &mut SplitMix64) -> ConeSpec {
    if d == 2 && rng.below(2) == 0 {
        ConeSpec::new(2, vec![Point::from([1, 0]), Point::from([1, 1])]).unwrap()
    } else {
        ConeSpec::orthant(d)
    }
}

pub fn random_shift(cone: &ConeSpec, rng: &mut SplitMix64) -> Point {
    let mut x = Point::zero(cone.dim());
    for g in cone.generators() {
        for _ in 0..rng.below(2) {
            x = &x + g;
        }
    }
    x
}

/// Halfspaces with normals nonnegative on the generators, or translates of
/// the cone.
pub fn random_module(cone: &ConeSpec, rng: &mut SplitMix64) -> ModuleSpec {
    let d = cone.dim();
    if rng.below(2) == 0 {
        let mut constraints = Vec::new();
        while constraints.len() < 1 + rng.below(2) {
            let normal = random_point(d, rng, 0, 2);
            if normal.is_zero() || cone.generators().iter().any(|g| normal.dot(g) < 0) {
                continue;
            }
            constraints.push(Halfspace {
                normal,
                offset: small(rng, -2, 2),
            });
        }
        ModuleSpec::halfspaces(d, constraints)
    } else {
        let offsets = (0..1 + rng.below(3))
            .map(|_| random_point(d, rng, -2, 2))
            .collect();
        ModuleSpec::translates(cone.clone(), offsets)
    }
}

/// `A \ (A + z)` over an explicit enumeration.
pub fn kernel_set(a: &ModuleSpec, z: &Point, points: &[Point]) -> BTreeSet<Point> {
    points
        .iter()
        .filter(|w| a.contains(w) && !a.contains(&(*w - z)))
        .cloned()
        .collect()
}
