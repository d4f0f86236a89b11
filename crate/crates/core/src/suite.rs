//! Named checks and the suite runner.
//!
//! Every check draws from its own stream `SplitMix64::for_label(seed, name)`,
//! so records do not depend on which other checks were selected or on the
//! order in which threads finish.

use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::car_flow::{defining_relation_check, semigroup_check, symmetry_witness};
use crate::config::{CheckName, Experiment};
use crate::error::{Error, Result};
use crate::fock::{
    annihilation, anticommutator, creation, masks, random_isometry, second_quantization,
    FockOperator, SingleParticleVector,
};
use crate::lattice::{kernel_decomposition_check, symmetry_check, Point};
use crate::product_system::{
    embedding_isometry_residual, forward_product, multiplicativity_check, opposite_product,
    phi_antihomomorphism_check, phi_map, reflected_phi_check, Convention, FlowContext, PSElement,
    ShiftRep,
};
use crate::report::{Record, Report, SignTables};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, Default)]
pub struct SuiteOptions {
    /// Fill `elapsed_ms`. Off by default because wall time breaks
    /// byte-identical reruns.
    pub timings: bool,
}

pub fn run_suite(exp: &Experiment, options: SuiteOptions) -> Report {
    let records = exp
        .config
        .suite
        .par_iter()
        .map(|&name| run_check(exp, name, options))
        .collect();
    Report::new(exp.config.clone(), records)
}

pub fn run_check(exp: &Experiment, name: CheckName, options: SuiteOptions) -> Record {
    let label = name.as_str();
    let mut rng = SplitMix64::for_label(exp.config.seed, label);
    let mut record = Record::new(label, inputs(exp, name));
    let start = Instant::now();
    let outcome = match name {
        CheckName::CarRelations => car_relations(exp, &mut rng, &mut record),
        CheckName::Functoriality => functoriality(exp, &mut rng, &mut record),
        CheckName::KernelDecomposition => kernel_decomposition(exp, &mut record),
        CheckName::FiberIsometry => fiber_isometry(exp, &mut rng, &mut record),
        CheckName::SignTable => sign_tables(exp, &mut rng, &mut record),
        CheckName::ProductLaws => product_laws(exp, &mut rng, &mut record),
        CheckName::PhiAntihomomorphism => phi_antihomomorphism(exp, &mut rng, &mut record),
        CheckName::DefiningRelation => defining_relation(exp, &mut rng, &mut record),
        CheckName::Semigroup => semigroup(exp, &mut record),
        CheckName::SymmetryClassification => symmetry_classification(exp, &mut record),
        CheckName::SymmetryWitness => witness(exp, &mut rng, &mut record),
    };
    if let Err(e) = outcome {
        record = record.failed_with(&e);
    }
    if options.timings {
        record.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    record
}

fn inputs(exp: &Experiment, name: CheckName) -> String {
    let c = &exp.config;
    let shifts = exp
        .shifts
        .iter()
        .map(Point::to_string)
        .collect::<Vec<_>>()
        .join(" ");
    let order = match name {
        CheckName::CarRelations => format!("{} pairs, modes 2..=10", c.samples),
        CheckName::Functoriality => format!("{} isometry pairs up to 8x5", c.samples),
        CheckName::KernelDecomposition | CheckName::Semigroup => {
            format!("ordered pairs of shifts [{shifts}]")
        }
        CheckName::SymmetryClassification => "search box in lexicographic order".to_string(),
        CheckName::DefiningRelation => format!("3 vectors per shift [{shifts}]"),
        CheckName::SignTable => "two draws per parity pair and convention".to_string(),
        _ => format!("{} draws over shifts [{shifts}]", c.samples),
    };
    format!("seed {}, stream \"{}\", {order}", c.seed, name.as_str())
}

fn flow_context(exp: &Experiment) -> Result<FlowContext> {
    FlowContext::new(rep(exp), exp.flow_window.clone(), exp.config.fock_cap)
}

fn rep(exp: &Experiment) -> ShiftRep {
    ShiftRep::new(exp.module.clone(), exp.cone.clone())
}

fn pick<'a>(shifts: &'a [Point], rng: &mut SplitMix64) -> &'a Point {
    &shifts[rng.below(shifts.len())]
}

fn random_vector(n: usize, rng: &mut SplitMix64) -> SingleParticleVector {
    SingleParticleVector::new((0..n).map(|_| rng.complex()).collect())
}

fn conclude(record: &mut Record, residual: f64, tolerance: f64) {
    record.residual = Some(residual);
    record.passed = residual <= tolerance;
}

fn car_relations(exp: &Experiment, rng: &mut SplitMix64, record: &mut Record) -> Result<()> {
    let mut worst: f64 = 0.0;
    for _ in 0..exp.config.samples {
        let n = 2 + rng.below(9);
        let f = random_vector(n, rng);
        let g = random_vector(n, rng);
        let (af, ag) = (annihilation(&f)?, annihilation(&g)?);
        let mixed = anticommutator(&af, &creation(&g)?)?;
        let id = FockOperator::identity(n)?.scale(f.inner(&g));
        worst = worst
            .max((&mixed - &id)?.frobenius_norm())
            .max(anticommutator(&af, &ag)?.frobenius_norm());
    }
    record.detail = format!("{} pairs", exp.config.samples);
    conclude(record, worst, exp.config.tolerance);
    Ok(())
}

fn functoriality(exp: &Experiment, rng: &mut SplitMix64, record: &mut Record) -> Result<()> {
    let mut worst: f64 = 0.0;
    for _ in 0..exp.config.samples {
        let m = 1 + rng.below(8);
        let k = 1 + rng.below(m.min(5));
        let j = 1 + rng.below(k);
        let w1 = random_isometry(m, k, rng)?;
        let w2 = random_isometry(k, j, rng)?;
        let lhs = second_quantization(&(&w1 * &w2))?;
        let rhs = second_quantization(&w1)?.compose(&second_quantization(&w2)?)?;
        worst = worst.max((&lhs - &rhs)?.frobenius_norm());
    }
    record.detail = format!("{} compositions", exp.config.samples);
    conclude(record, worst, exp.config.tolerance);
    Ok(())
}

fn kernel_decomposition(exp: &Experiment, record: &mut Record) -> Result<()> {
    let (mut pairs, mut points, mut bad) = (0, 0, 0);
    for x in &exp.shifts {
        for y in &exp.shifts {
            let r = kernel_decomposition_check(&exp.module, x, y, &exp.window);
            pairs += 1;
            points += r.points_checked;
            bad += r.missing.len() + r.extra.len() + r.overlap.len();
        }
    }
    record.detail = format!("{pairs} pairs, {points} points compared, {bad} discrepancies");
    record.residual = Some(bad as f64);
    record.passed = bad == 0;
    Ok(())
}

fn fiber_isometry(exp: &Experiment, rng: &mut SplitMix64, record: &mut Record) -> Result<()> {
    let ctx = flow_context(exp)?;
    let mut worst: f64 = 0.0;
    for _ in 0..exp.config.samples {
        let fib = ctx.fiber(pick(&exp.shifts, rng), None)?;
        let f = fib.random_element(rng, None)?;
        let g = fib.random_element(rng, None)?;
        worst = worst.max(embedding_isometry_residual(
            &ctx,
            &f,
            &g,
            Convention::Literal,
        )?);
    }
    record.detail = format!(
        "{} pairs, ambient Fock dimension {}",
        exp.config.samples,
        ctx.fock_dim()
    );
    conclude(record, worst, exp.config.tolerance);
    Ok(())
}

fn sign_tables(exp: &Experiment, rng: &mut SplitMix64, record: &mut Record) -> Result<()> {
    let ctx = flow_context(exp)?;
    let tol = exp.config.tolerance;
    let x = &exp.shifts[0];
    let y = &exp.shifts[1 % exp.shifts.len()];
    let left = ctx.fiber(x, None)?;
    let right = ctx.fiber(y, Some(x))?;
    let mut tables = SignTables::new();
    let mut worst: f64 = 0.0;
    let mut stable = true;
    let mut even_left_plus = true;
    for convention in Convention::ALL {
        let mut entries = std::collections::BTreeMap::new();
        for p in 0..2 {
            for q in 0..2 {
                let mut signs = Vec::new();
                for _ in 0..2 {
                    let e1 = left.random_element(rng, Some(p))?;
                    let e2 = right.random_element(rng, Some(q))?;
                    if e1.norm() == 0.0 || e2.norm() == 0.0 {
                        signs.push(None);
                        continue;
                    }
                    let r = multiplicativity_check(&ctx, &e1, &e2, convention, tol)?;
                    worst = worst.max(r.residual_plus.min(r.residual_minus));
                    signs.push(r.sign);
                }
                stable &= signs[0] == signs[1] && signs[0].is_some();
                if p == 0 {
                    even_left_plus &= signs[0] == Some(1);
                }
                let key = format!("{}/{}", parity(p), parity(q));
                entries.insert(key, signs[0]);
            }
        }
        tables.insert(convention.name().to_string(), entries);
    }
    record.detail =
        format!("x = {x}, y = {y}; stable: {stable}; even left factors +1: {even_left_plus}");
    record.sign_table = Some(tables);
    record.residual = Some(worst);
    record.passed = stable && even_left_plus && worst <= tol;
    Ok(())
}

fn parity(p: usize) -> &'static str {
    if p == 0 {
        "even"
    } else {
        "odd"
    }
}

type Product = fn(&ShiftRep, &PSElement, &PSElement) -> Result<PSElement>;

fn product_laws(exp: &Experiment, rng: &mut SplitMix64, record: &mut Record) -> Result<()> {
    let ctx = flow_context(exp)?;
    let rep = ctx.rep();
    let mut assoc: f64 = 0.0;
    let mut norm: f64 = 0.0;
    for _ in 0..exp.config.samples {
        let e: Vec<_> = (0..3)
            .map(|_| {
                let x = pick(&exp.shifts, rng).clone();
                ctx.fiber(&x, None)?.random_element(rng, None)
            })
            .collect::<Result<_>>()?;
        let products: [Product; 2] = [forward_product, opposite_product];
        for product in products {
            let left = product(rep, &product(rep, &e[0], &e[1])?, &e[2])?;
            let right = product(rep, &e[0], &product(rep, &e[1], &e[2])?)?;
            assoc = assoc.max(left.distance(&right)?);
            let p = product(rep, &e[0], &e[1])?;
            norm = norm.max((p.norm() - e[0].norm() * e[1].norm()).abs());
        }
    }
    record.detail = format!("associativity {assoc:.3e}, norm defect {norm:.3e}, both products");
    conclude(record, assoc.max(norm), exp.config.tolerance);
    Ok(())
}

fn phi_antihomomorphism(exp: &Experiment, rng: &mut SplitMix64, record: &mut Record) -> Result<()> {
    let ctx = flow_context(exp)?;
    let rep = ctx.rep();
    let mut twisted: f64 = 0.0;
    let mut literal: f64 = 0.0;
    let mut unitary: f64 = 0.0;
    let mut permutation_exact = true;
    for x in &exp.shifts {
        let fib = ctx.fiber(x, None)?;
        for mask in masks(fib.modes.len()) {
            let image = phi_map(rep, &fib.basis_element(mask)?, Convention::Twisted)?;
            let support: Vec<Complex64> = image.vector().support().map(|(_, a)| a).collect();
            permutation_exact &= support.len() == 1
                && (support[0] == Complex64::new(1.0, 0.0)
                    || support[0] == Complex64::new(-1.0, 0.0));
        }
    }
    for _ in 0..exp.config.samples {
        let e1 = ctx
            .fiber(pick(&exp.shifts, rng), None)?
            .random_element(rng, None)?;
        let e2 = ctx
            .fiber(pick(&exp.shifts, rng), None)?
            .random_element(rng, None)?;
        twisted = twisted
            .max(phi_antihomomorphism_check(
                rep,
                &e1,
                &e2,
                Convention::Twisted,
            )?)
            .max(reflected_phi_check(rep, &e1, &e2, Convention::Twisted)?);
        literal = literal.max(phi_antihomomorphism_check(
            rep,
            &e1,
            &e2,
            Convention::Literal,
        )?);
        let (p1, p2) = (
            phi_map(rep, &e1, Convention::Twisted)?,
            phi_map(rep, &e2, Convention::Twisted)?,
        );
        if e1.base() == e2.base() {
            unitary = unitary.max((p1.inner(&p2)? - e1.inner(&e2)?).norm());
        }
        unitary = unitary.max((p1.norm() - e1.norm()).abs());
    }
    record.detail = format!(
        "twisted {twisted:.3e}, unitarity {unitary:.3e}, permutation exact: {permutation_exact}; literal (graded) {literal:.3e}"
    );
    conclude(record, twisted.max(unitary), exp.config.tolerance);
    record.passed &= permutation_exact;
    Ok(())
}

fn defining_relation(exp: &Experiment, rng: &mut SplitMix64, record: &mut Record) -> Result<()> {
    let ctx = flow_context(exp)?;
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for x in &exp.shifts {
        let valid = ctx.valid_modes(&[x]);
        for _ in 0..3 {
            let f = SingleParticleVector::new(
                valid
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
            worst = worst.max(defining_relation_check(&ctx, x, &f)?);
            count += 1;
        }
    }
    record.detail = format!("{count} vectors, ambient Fock dimension {}", ctx.fock_dim());
    conclude(record, worst, exp.config.tolerance);
    Ok(())
}

fn semigroup(exp: &Experiment, record: &mut Record) -> Result<()> {
    let ctx = flow_context(exp)?;
    let pairs: Vec<(&Point, &Point)> = exp
        .shifts
        .iter()
        .flat_map(|x| exp.shifts.iter().map(move |y| (x, y)))
        .collect();
    let worst = pairs
        .par_iter()
        .map(|(x, y)| semigroup_check(&ctx, x, y))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    record.detail = format!(
        "{} pairs, tolerance {:e}",
        pairs.len(),
        10.0 * exp.config.tolerance
    );
    conclude(record, worst, 10.0 * exp.config.tolerance);
    Ok(())
}

fn symmetry_classification(exp: &Experiment, record: &mut Record) -> Result<()> {
    let verdict = symmetry_check(&exp.module, &exp.search_box, &exp.window);
    record.detail = verdict.class.to_string();
    record.witness = verdict.witness;
    record.passed = true;
    Ok(())
}

fn witness(exp: &Experiment, rng: &mut SplitMix64, record: &mut Record) -> Result<()> {
    let verdict = symmetry_check(&exp.module, &exp.search_box, &exp.window);
    let Some(z) = verdict.witness else {
        record.detail = "no witness in box; no ψ constructed".to_string();
        record.passed = true;
        return Ok(());
    };
    if exp.shifts.is_empty() {
        return Err(Error::Config(
            "symmetry_witness needs at least one shift".into(),
        ));
    }
    let r = symmetry_witness(
        &exp.module,
        &exp.cone,
        &z,
        &exp.flow_window,
        &exp.shifts,
        exp.config.samples,
        rng,
    )?;
    record.detail = format!(
        "{} pairs, anti-multiplicativity {:.3e}, norm defect {:.3e}",
        r.pairs, r.max_residual, r.max_norm_defect
    );
    record.witness = Some(z);
    conclude(
        record,
        r.max_residual.max(r.max_norm_defect),
        exp.config.tolerance,
    );
    Ok(())
}
