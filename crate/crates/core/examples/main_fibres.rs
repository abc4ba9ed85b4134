//! Main fibres of both kinds: intersection matrices, multiplicities and
//! degrees, and the blow-up scripts that produce them.
//!
//! cargo run --example main_fibres -- D 5

use conic_fibers::enumeration::{generating_script, main_fiber};
use conic_fibers::fiber::FiberKind;

fn main() {
    let mut args = std::env::args().skip(1);
    let kind: FiberKind = args
        .next()
        .as_deref()
        .unwrap_or("A")
        .parse()
        .expect("kind is A or D");
    let level: usize = args
        .next()
        .map_or(4, |s| s.parse().expect("level is a number"));

    let f = main_fiber(kind, level).expect("D fibres need level >= 2");
    println!("main fibre {kind}{level}\n");
    println!("generated by:\n{}", generating_script(kind, level).unwrap());

    let ids: Vec<String> = f
        .components()
        .iter()
        .map(|c| format!("{:>4}", c.id))
        .collect();
    println!("     {}", ids.join(""));
    let m = f.intersection_matrix();
    for (c, row) in f.components().iter().zip(m.rows()) {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:>4}")).collect();
        println!("{:>4} {}", c.id, cells.join(""));
    }
    println!("\nmult {:?}", f.multiplicities());
    println!("deg  {:?}", f.degrees());
    println!("I.mu {:?}", m.mul_vec(&f.multiplicities()));
}
