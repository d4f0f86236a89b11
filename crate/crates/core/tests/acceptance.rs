//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.
//!
//! Run alone with `cargo test --test acceptance`.

mod common;

use std::collections::BTreeSet;
use std::path::Path;
use std::time::{Duration, Instant};

use carflow::car_flow::{defining_relation_check, semigroup_check, symmetry_witness};
use carflow::config::{parse_config, Experiment};
use carflow::fock::{
    annihilation, anticommutator, creation, masks, random_isometry, second_quantization,
    FockOperator, OccupationMask, SingleParticleVector,
};
use carflow::lattice::{kernel_decomposition_check, symmetry_check, ModuleSpec, Point, Window};
use carflow::product_system::{
    embedding_isometry_residual, fiber, forward_product, opposite_product,
    phi_antihomomorphism_check, phi_map, sign_table, Convention, FlowContext, ShiftRep,
};
use carflow::report::{emit_report, Format};
use carflow::rng::SplitMix64;
use carflow::suite::{run_suite, SuiteOptions};
use carflow::Result;
use num_complex::Complex64;

use common::{brute_force_lift, kernel_set, random_cone, random_module, random_shift};

const SEED: u64 = 20240611;

type Criterion = (&'static str, fn() -> Result<Outcome>, u64);

struct Outcome {
    passed: bool,
    summary: String,
}

fn load(name: &str) -> Experiment {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name);
    parse_config(&std::fs::read_to_string(path).unwrap())
        .unwrap()
        .build()
        .unwrap()
}

fn fixtures() -> Vec<Experiment> {
    [
        "halfline.json",
        "halfplane.json",
        "quadrant.json",
        "staircase.json",
    ]
    .iter()
    .map(|f| load(f))
    .collect()
}

fn rep(exp: &Experiment) -> ShiftRep {
    ShiftRep::new(exp.module.clone(), exp.cone.clone())
}

fn random_vector(n: usize, rng: &mut SplitMix64) -> SingleParticleVector {
    SingleParticleVector::new((0..n).map(|_| rng.complex()).collect())
}

/// Cone points with `1 <= |x|_1 <= max`, found by adding generators.
fn small_shifts(exp: &Experiment, max: i64) -> Vec<Point> {
    let mut found: BTreeSet<Point> = BTreeSet::new();
    let mut frontier = vec![Point::zero(exp.cone.dim())];
    while let Some(p) = frontier.pop() {
        for g in exp.cone.generators() {
            let q = &p + g;
            if q.l1() <= max && found.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    found.into_iter().collect()
}

fn car_relations() -> Result<Outcome> {
    let mut rng = SplitMix64::for_label(SEED, "car");
    let (mut mixed, mut pure): (f64, f64) = (0.0, 0.0);
    for i in 0..200 {
        let n = 2 + i % 9;
        let f = random_vector(n, &mut rng);
        let g = random_vector(n, &mut rng);
        let af = annihilation(&f)?;
        let id = FockOperator::identity(n)?.scale(f.inner(&g));
        mixed = mixed.max((&anticommutator(&af, &creation(&g)?)? - &id)?.frobenius_norm());
        pure = pure.max(anticommutator(&af, &annihilation(&g)?)?.frobenius_norm());
    }
    Ok(Outcome {
        passed: mixed <= 1e-10 && pure <= 1e-10,
        summary: format!(
            "200 pairs, n in 2..=10: |{{a(f),a(g)*}} - <f,g>I| = {mixed:.2e}, |{{a(f),a(g)}}| = {pure:.2e} (tol 1e-10)"
        ),
    })
}

fn second_quantization_oracle() -> Result<Outcome> {
    let mut rng = SplitMix64::for_label(SEED, "lift");
    let (mut oracle, mut functor): (f64, f64) = (0.0, 0.0);
    for i in 0..50 {
        let m = 1 + i % 8;
        let n = 1 + (i / 8) % m.min(5);
        let w = random_isometry(m, n, &mut rng)?;
        let diff = second_quantization(&w)?.to_dense() - brute_force_lift(&w);
        oracle = oracle.max(diff.norm());
        let j = 1 + rng.below(n);
        let w2 = random_isometry(n, j, &mut rng)?;
        let lhs = second_quantization(&(&w * &w2))?;
        let rhs = second_quantization(&w)?.compose(&second_quantization(&w2)?)?;
        functor = functor.max((&lhs - &rhs)?.frobenius_norm());
    }
    Ok(Outcome {
        passed: oracle <= 1e-10 && functor <= 1e-10,
        summary: format!(
            "50 isometries up to 8x5: minors vs wedge expansion {oracle:.2e}, functoriality {functor:.2e} (tol 1e-10)"
        ),
    })
}

fn kernel_decomposition() -> Result<Outcome> {
    let mut rng = SplitMix64::for_label(SEED, "kernel");
    let mut failures = 0;
    let mut points = 0;
    for case in 0..50 {
        let d = 1 + case % 3;
        let cone = random_cone(d, &mut rng);
        let a = random_module(&cone, &mut rng);
        let x = random_shift(&cone, &mut rng);
        let y = random_shift(&cone, &mut rng);
        let window = Window::cube(d, -4, 4)?;
        let report = kernel_decomposition_check(&a, &x, &y, &window);
        points += report.points_checked;

        let core: BTreeSet<Point> = window
            .core(&x)
            .map(|c| c.points())
            .unwrap_or_default()
            .into_iter()
            .collect();
        let wide = Window::cube(d, -7, 4)?.points();
        let lhs: BTreeSet<Point> = kernel_set(&a, &(&x + &y), &wide)
            .intersection(&core)
            .cloned()
            .collect();
        let first: BTreeSet<Point> = kernel_set(&a, &x, &wide)
            .intersection(&core)
            .cloned()
            .collect();
        let second: BTreeSet<Point> = kernel_set(&a, &y, &wide)
            .iter()
            .map(|k| k + &x)
            .filter(|p| core.contains(p))
            .collect();
        let union: BTreeSet<Point> = first.union(&second).cloned().collect();
        let oracle_ok = first.is_disjoint(&second) && union == lhs;
        if !report.passed() || !oracle_ok || report.kernel_size != lhs.len() {
            failures += 1;
        }
    }
    Ok(Outcome {
        passed: failures == 0,
        summary: format!(
            "50 random (A, x, y), d <= 3, {points} core points: {failures} mismatches (exact)"
        ),
    })
}

fn fibre_and_product_laws() -> Result<Outcome> {
    let mut rng = SplitMix64::for_label(SEED, "fibres");
    let d1 = [
        (ModuleSpec::halfspace([1], 0), Window::new([0], [7])?),
        (ModuleSpec::halfspace([1], -2), Window::new([-2], [9])?),
    ];
    let cone = carflow::lattice::ConeSpec::orthant(1);
    let (mut iso, mut assoc, mut norm): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut stable = true;
    let mut even_left = true;
    let mut rendered = Vec::new();
    let mut max_modes = 0;
    for (module, window) in d1 {
        let rep = ShiftRep::new(module, cone.clone());
        let ctx = FlowContext::new(rep.clone(), window, 1 << 12)?;
        max_modes = max_modes.max(ctx.n_modes());
        let shifts: Vec<Point> = (1..=3).map(|k| Point::from([k])).collect();
        for x in &shifts {
            let fib = ctx.fiber(x, None)?;
            for _ in 0..10 {
                let (p, q) = (rng.below(2), rng.below(2));
                let f = fib.random_element(&mut rng, Some(p))?;
                let g = fib.random_element(&mut rng, Some(q))?;
                for c in Convention::ALL {
                    iso = iso.max(embedding_isometry_residual(&ctx, &f, &g, c)?);
                }
            }
        }
        for c in Convention::ALL {
            let tables: Vec<_> = [1u64, 2, 3]
                .iter()
                .map(|s| {
                    sign_table(
                        &ctx,
                        &shifts[0],
                        &shifts[1],
                        c,
                        1e-10,
                        &mut SplitMix64::new(*s),
                    )
                })
                .collect::<Result<_>>()?;
            stable &= tables.iter().all(|t| t == &tables[0]);
            even_left &= tables[0].get(0, 0) == Some(1) && tables[0].get(0, 1) == Some(1);
            stable &= tables[0].entries.values().all(Option::is_some);
            if rendered.len() < 2 {
                let cells: Vec<String> = tables[0]
                    .entries
                    .iter()
                    .map(|(k, v)| format!("{k} {}", v.map_or("none".into(), |s| format!("{s:+}"))))
                    .collect();
                rendered.push(format!("{}: {}", c.name(), cells.join(", ")));
            }
        }
        for _ in 0..20 {
            let e: Vec<_> = (0..3)
                .map(|_| {
                    let x = &shifts[rng.below(shifts.len())];
                    fiber(&rep, x, ctx.window())?.random_element(&mut rng, None)
                })
                .collect::<Result<_>>()?;
            for product in [forward_product, opposite_product] {
                let l = product(&rep, &product(&rep, &e[0], &e[1])?, &e[2])?;
                let r = product(&rep, &e[0], &product(&rep, &e[1], &e[2])?)?;
                assoc = assoc.max(l.distance(&r)?);
                norm = norm
                    .max((product(&rep, &e[0], &e[1])?.norm() - e[0].norm() * e[1].norm()).abs());
            }
        }
    }
    Ok(Outcome {
        passed: iso <= 1e-10 && assoc <= 1e-10 && norm <= 1e-10 && stable && even_left && max_modes <= 12,
        summary: format!(
            "d=1, <= {max_modes} modes: T_g*T_f {iso:.2e}, associativity {assoc:.2e}, norm {norm:.2e}; signs stable {stable}, even-left +1 {even_left} [{}]",
            rendered.join("; ")
        ),
    })
}

fn phi_map_laws() -> Result<Outcome> {
    let mut rng = SplitMix64::for_label(SEED, "phi");
    let (mut twisted, mut literal, mut unitary): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut permutation = true;
    for exp in fixtures() {
        let rep = rep(&exp);
        let shifts = &exp.shifts;
        for x in shifts {
            let fib = fiber(&rep, x, &exp.flow_window)?;
            for mask in masks(fib.modes.len()) {
                let image = phi_map(&rep, &fib.basis_element(mask)?, Convention::Twisted)?;
                let support: Vec<(OccupationMask, Complex64)> = image.vector().support().collect();
                permutation &= support.len() == 1
                    && support[0].0.count() == mask.count()
                    && (support[0].1.re.abs() == 1.0 && support[0].1.im == 0.0);
            }
        }
        for _ in 0..50 {
            let x = &shifts[rng.below(shifts.len())];
            let y = &shifts[rng.below(shifts.len())];
            let e1 = fiber(&rep, x, &exp.flow_window)?.random_element(&mut rng, None)?;
            let e2 = fiber(&rep, y, &exp.flow_window)?.random_element(&mut rng, None)?;
            let e3 = fiber(&rep, x, &exp.flow_window)?.random_element(&mut rng, None)?;
            twisted = twisted.max(phi_antihomomorphism_check(
                &rep,
                &e1,
                &e2,
                Convention::Twisted,
            )?);
            literal = literal.max(phi_antihomomorphism_check(
                &rep,
                &e1,
                &e2,
                Convention::Literal,
            )?);
            let (p1, p3) = (
                phi_map(&rep, &e1, Convention::Twisted)?,
                phi_map(&rep, &e3, Convention::Twisted)?,
            );
            unitary = unitary.max((p1.inner(&p3)? - e1.inner(&e3)?).norm());
        }
    }
    Ok(Outcome {
        passed: twisted <= 1e-10 && unitary <= 1e-10 && permutation,
        summary: format!(
            "4 fixtures x 50 pairs: anti-multiplicativity {twisted:.2e}, inner products {unitary:.2e}, signed permutation {permutation} (tol 1e-10); ungraded literal map {literal:.2e}"
        ),
    })
}

fn flow_laws() -> Result<Outcome> {
    let mut rng = SplitMix64::for_label(SEED, "flow");
    let (mut defining, mut semigroup): (f64, f64) = (0.0, 0.0);
    let (mut n_def, mut n_semi) = (0, 0);
    for exp in fixtures() {
        let ctx = FlowContext::new(rep(&exp), exp.flow_window.clone(), exp.config.fock_cap)?;
        let shifts = small_shifts(&exp, 3);
        for x in &shifts {
            let valid = ctx.valid_modes(&[x]);
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
            defining = defining.max(defining_relation_check(&ctx, x, &f)?);
            n_def += 1;
        }
        for x in &shifts {
            for y in &shifts {
                if (x + y).l1() <= 3 {
                    semigroup = semigroup.max(semigroup_check(&ctx, x, y)?);
                    n_semi += 1;
                }
            }
        }
    }
    Ok(Outcome {
        passed: defining <= 1e-10 && semigroup <= 1e-9,
        summary: format!(
            "4 fixtures, |x|_1 <= 3: defining relation {defining:.2e} over {n_def} shifts (tol 1e-10), semigroup {semigroup:.2e} over {n_semi} pairs (tol 1e-9)"
        ),
    })
}

fn symmetry() -> Result<Outcome> {
    let mut rng = SplitMix64::for_label(SEED, "symmetry");
    let line = load("halfline.json");
    let plane = load("halfplane.json");
    let quadrant = load("quadrant.json");
    let box2 = Window::cube(2, -5, 5)?;

    let z_line = symmetry_check(&line.module, &line.search_box, &line.window).witness;
    let z_plane = symmetry_check(&plane.module, &plane.search_box, &plane.window).witness;
    let z_quad = symmetry_check(&quadrant.module, &box2, &quadrant.window).witness;
    let line_ok = z_line == Some(Point::from([-1]));
    let plane_ok = z_plane
        .as_ref()
        .is_some_and(|z| z.coords()[0] + z.coords()[1] == -1);
    let quad_ok = z_quad.is_none();

    let mut residual: f64 = 0.0;
    for (exp, z) in [(&line, &z_line), (&plane, &z_plane)] {
        if let Some(z) = z {
            let r = symmetry_witness(
                &exp.module,
                &exp.cone,
                z,
                &exp.flow_window,
                &exp.shifts,
                50,
                &mut rng,
            )?;
            residual = residual.max(r.max_residual).max(r.max_norm_defect);
        } else {
            residual = f64::INFINITY;
        }
    }
    let show = |z: &Option<Point>| z.as_ref().map_or("none".to_string(), Point::to_string);
    Ok(Outcome {
        passed: line_ok && plane_ok && quad_ok && residual <= 1e-10,
        summary: format!(
            "half-line z = {}, half-plane z = {}, quadrant in [-5,5]^2: {}; psi anti-multiplicativity {residual:.2e} (tol 1e-10)",
            show(&z_line),
            show(&z_plane),
            if quad_ok { "no witness in box".to_string() } else { show(&z_quad) }
        ),
    })
}

fn determinism() -> Result<Outcome> {
    let mut identical = true;
    let mut all_pass = true;
    let mut slowest = Duration::ZERO;
    for exp in fixtures() {
        let start = Instant::now();
        let a = emit_report(&run_suite(&exp, SuiteOptions::default()), Format::Json);
        slowest = slowest.max(start.elapsed());
        let report = run_suite(&exp, SuiteOptions::default());
        all_pass &= report.verdict.as_str() == "pass";
        identical &= a == emit_report(&report, Format::Json);
    }
    Ok(Outcome {
        passed: identical && slowest < Duration::from_secs(60),
        summary: format!(
            "4 fixtures, full suite twice each: byte-identical {identical}, slowest run {:.2} s (< 60 s); all verdicts pass {all_pass}",
            slowest.as_secs_f64()
        ),
    })
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("CAR relations", car_relations, 5),
        (
            "second quantization oracle and functoriality",
            second_quantization_oracle,
            10,
        ),
        ("kernel decomposition", kernel_decomposition, 2),
        (
            "fibre embeddings, sign table, product laws",
            fibre_and_product_laws,
            30,
        ),
        ("phi unitary and anti-multiplicative", phi_map_laws, 20),
        ("defining relation and semigroup law", flow_laws, 30),
        ("symmetry classification and witness", symmetry, 20),
        ("determinism", determinism, 120),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let (passed, summary) = match outcome {
            Ok(o) => (o.passed, o.summary),
            Err(e) => (false, format!("error: {e}")),
        };
        let in_time = secs < *budget as f64;
        let ok = passed && in_time;
        if !ok {
            failed += 1;
        }
        println!(
            "{} [{}] {name}: {summary}; {secs:.2} s (budget {budget} s)",
            if ok { "PASS" } else { "FAIL" },
            i + 1
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
