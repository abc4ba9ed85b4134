//! Reading a configuration from JSON and what the validator reports when
//! an invariant fails.

use conic_fibers::enumeration::main_fiber;
use conic_fibers::fiber::FiberKind;
use conic_fibers::fiber::{parse, serialize, ConfigError};

fn main() {
    let text = serialize(&main_fiber(FiberKind::D, 2).unwrap());
    println!("{text}");
    assert_eq!(parse(&text).unwrap(), main_fiber(FiberKind::D, 2).unwrap());

    let broken = text.replacen("\"self_int\": -1", "\"self_int\": -2", 1);
    match parse(&broken) {
        Err(ConfigError::Invariant(report)) => println!("rejected:\n{report}"),
        other => panic!("expected an invariant error, got {other:?}"),
    }
    let dangling = text.replacen("\"e2\",", "\"e9\",", 1);
    println!("{}", parse(&dangling).unwrap_err());
}
