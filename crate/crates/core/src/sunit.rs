//! S-unit equation solver (stub while lower layers are built).

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentVector {
    pub a0: u32,
    pub a: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SUnitSolution {
    pub tau0: ExponentVector,
    pub tau1: ExponentVector,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    pub c3: f64,
    pub c0: f64,
    pub c0_prime: i64,
}
