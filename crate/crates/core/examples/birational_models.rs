//! Geometrically ruled models of a surface with main fibres, and the degree
//! of its image.

use conic_fibers::enumeration::{generating_script, main_fiber};
use conic_fibers::fiber::{FiberConfig, FiberKind};
use conic_fibers::models::{count_models, degree_of_image, grc_models, SurfaceLevel};
use conic_fibers::script::apply_script;

fn main() {
    for (kind, n) in [(FiberKind::A, 1), (FiberKind::A, 3), (FiberKind::D, 4)] {
        let f = main_fiber(kind, n).unwrap();
        println!("{kind}{n}:");
        for m in grc_models(&f).unwrap() {
            let order: Vec<&str> = m.contraction_order.iter().map(|c| c.as_str()).collect();
            println!(
                "  keep {:<3} elm^{}  contract {}",
                m.survivor.as_str(),
                m.elm_chain_length,
                order.join(" ")
            );
        }
    }

    let surface = SurfaceLevel::new(vec![
        (FiberKind::A, 3),
        (FiberKind::A, 2),
        (FiberKind::D, 4),
    ]);
    let d = 12;
    let mut d_self = Some(d);
    for &(kind, l) in &surface.fibers {
        let f = apply_script(
            &FiberConfig::smooth(d_self),
            &generating_script(kind, l).unwrap(),
        )
        .unwrap();
        d_self = f.d_self();
    }
    println!(
        "\nsurface with fibres {:?}, level {}",
        surface.fibers,
        surface.total()
    );
    println!("  models: {}", count_models(&surface));
    println!(
        "  degree: {} (tracked D^2 = {:?})",
        degree_of_image(d, &surface),
        d_self
    );
}
