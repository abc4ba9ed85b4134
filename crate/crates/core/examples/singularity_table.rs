//! The image of every main fibre up to level 10 under the adjoint map:
//! shape of the image fibre and the rational double points on it.

use conic_fibers::enumeration::main_fiber;
use conic_fibers::fiber::FiberKind;
use conic_fibers::resolution::{embedded_level, resolve};

fn main() {
    println!("{:<6} {:<8}  image", "fibre", "level");
    for n in 1..=10 {
        for kind in [FiberKind::A, FiberKind::D] {
            let Ok(f) = main_fiber(kind, n) else { continue };
            let report = resolve(&f).unwrap();
            let level = embedded_level(&report).unwrap();
            println!(
                "{:<6} {:<8}  {}",
                format!("{kind}{n}"),
                level,
                report.signature()
            );
            for s in &report.singularities {
                let cluster: Vec<&str> = s.cluster.iter().map(|c| c.as_str()).collect();
                println!("{:17}{} from {{{}}}", "", s.kind, cluster.join(", "));
            }
        }
    }
}
