//! Graphviz rendering of a fibre; pipe into `dot -Tsvg`.
//!
//! cargo run --example render_dot | dot -Tsvg > fibre.svg

use conic_fibers::enumeration::main_fiber;
use conic_fibers::fiber::FiberKind;
use conic_fibers::render::to_dot;
use conic_fibers::transform::{blow_up, BlowUpCenter};

fn main() {
    let f = blow_up(
        &main_fiber(FiberKind::D, 4).unwrap(),
        &BlowUpCenter::smooth("e3"),
    )
    .unwrap();
    print!("{}", to_dot(&f));
}
