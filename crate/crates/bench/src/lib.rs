//! Shared fixtures for the benchmarks.

use dehn_core::{handle_pipe, parse_diagram, JohanssonDiagram, PipeChoice};

const SPHERE: &str = include_str!("../../../corpus/s2xs1_sphere.jd");
const TORUS: &str = include_str!("../../../corpus/s2xs1_torus.jd");

pub fn sphere() -> JohanssonDiagram {
    parse_diagram(SPHERE).expect("bundled corpus parses")
}

pub fn torus() -> JohanssonDiagram {
    parse_diagram(TORUS).expect("bundled corpus parses")
}

/// The sphere piped `n` times at its first triple point.
pub fn piped_sphere(n: usize) -> JohanssonDiagram {
    (0..n).fold(sphere(), |d, _| {
        handle_pipe(&d, 0, PipeChoice::default()).expect("piping a valid diagram")
    })
}
