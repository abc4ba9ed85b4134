//! Applies a blow-up script step by step, then contracts the exceptional
//! curves again in reverse order.
//!
//! cargo run --example blow_up_script -- path/to/script.txt

use conic_fibers::fiber::FiberConfig;
use conic_fibers::render::to_ascii;
use conic_fibers::script::BlowUpScript;
use conic_fibers::transform::{blow_down, blow_up};

const DEFAULT: &str = "\
# a fork with a double component
smooth f0
node f0 e1
smooth e2
";

fn main() {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path).expect("readable script"),
        None => DEFAULT.to_string(),
    };
    let script: BlowUpScript = text.parse().unwrap_or_else(|e| panic!("{e}"));

    let mut states = vec![FiberConfig::smooth(Some(6))];
    println!("{}", to_ascii(&states[0]));
    for center in script.iter() {
        let next =
            blow_up(states.last().unwrap(), center).unwrap_or_else(|e| panic!("{center}: {e}"));
        println!("after `{center}`:\n{}", to_ascii(&next));
        states.push(next);
    }

    let mut f = states.pop().unwrap();
    while let Some(previous) = states.pop() {
        let last = f.component(f.len() - 1).id.clone();
        f = blow_down(&f, last.as_str()).unwrap();
        assert_eq!(f, previous);
        println!("blew down {last}");
    }
    println!("back to the smooth fibre, D^2 = {:?}", f.d_self());
}
