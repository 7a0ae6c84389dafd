#![allow(dead_code)]

use projgeom::{ComplexMatrix, ToleranceConfig};

pub fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

pub fn dist(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).norm()
}
