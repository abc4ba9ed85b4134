//! Base locus computation for a chain of level 6 whose last node is blown
//! up: one component has negative degree, and subtracting it pushes the
//! negativity down the chain until five components have been removed.

use conic_fibers::enumeration::main_fiber;
use conic_fibers::fiber::FiberKind;
use conic_fibers::resolution::{
    base_locus_trace, classify_cluster, contraction_clusters, embedded_level, resolve,
};
use conic_fibers::transform::{blow_up, BlowUpCenter};

fn main() {
    let f = blow_up(
        &main_fiber(FiberKind::A, 6).unwrap(),
        &BlowUpCenter::node("e6", "e5"),
    )
    .unwrap();
    let trace = base_locus_trace(&f, 10 * f.len()).unwrap();

    let ids: Vec<&str> = f.components().iter().map(|c| c.id.as_str()).collect();
    println!("{:>10}  {:?}", "", ids);
    println!("{:>10}  {:?}", "degrees", trace.initial);
    for step in &trace.steps {
        println!(
            "{:>10}  {:?}",
            format!("-{}", f.component(step.subtracted).id),
            step.degrees
        );
    }
    println!("\nbase locus: {}", trace.base_locus);

    for cluster in contraction_clusters(&f, &trace.degrees) {
        let names: Vec<&str> = cluster.iter().map(|&i| ids[i]).collect();
        println!(
            "cluster {{{}}} -> {}",
            names.join(", "),
            classify_cluster(&f, &cluster)
        );
    }
    let report = resolve(&f).unwrap();
    println!("\n{}", report.signature());
    println!(
        "embedded level {} (blown up {} times)",
        embedded_level(&report).unwrap(),
        f.level()
    );
}
