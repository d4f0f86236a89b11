//! Cones, modules, kernels of `V_x^*` and the kernel decomposition
//! `K(x + y) = K(x) ⊔ (K(y) + x)` on a window.

use carflow::lattice::{
    kernel_basis, kernel_decomposition_check, validate_module, ConeSpec, Halfspace, ModuleSpec,
    Point, Window,
};

fn main() -> carflow::Result<()> {
    let cone = ConeSpec::orthant(2);
    let window = Window::cube(2, -3, 3)?;
    let modules = [
        ("half-plane u+v >= 0", ModuleSpec::halfspace([1, 1], 0)),
        (
            "quadrant",
            ModuleSpec::halfspaces(
                2,
                vec![
                    Halfspace {
                        normal: Point::from([1, 0]),
                        offset: 0,
                    },
                    Halfspace {
                        normal: Point::from([0, 1]),
                        offset: 0,
                    },
                ],
            ),
        ),
        (
            "staircase",
            ModuleSpec::translates(
                cone.clone(),
                vec![Point::from([0, 0]), Point::from([1, -1])],
            ),
        ),
    ];
    let (x, y) = (Point::from([1, 0]), Point::from([0, 1]));
    for (name, module) in &modules {
        let report = validate_module(module, &cone, &window);
        println!(
            "{name}: module check over {} pairs, {} violations",
            report.checked,
            report.violations.len()
        );
        let kernel: Vec<String> = kernel_basis(module, &x, &window)
            .iter()
            .map(Point::to_string)
            .collect();
        println!("  K({x}) = {{{}}}", kernel.join(", "));
        let d = kernel_decomposition_check(module, &x, &y, &window);
        println!(
            "  K({}) splits over {} core points: {} ({} kernel points)",
            &x + &y,
            d.points_checked,
            if d.passed() { "exact" } else { "mismatch" },
            d.kernel_size
        );
    }
    Ok(())
}
