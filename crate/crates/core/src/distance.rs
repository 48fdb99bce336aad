//! The product metric `D(F, G) = sum_k dbar(f_k, g_k) / 2^k` on sequences.

use std::sync::{Arc, OnceLock};

use crate::alphabet::{ContractionAlphabet, Symbol};
use crate::error::{Error, Result};
use crate::metric::bounded_distance;
use crate::sequence::{same_alphabet, IfsSequence};

/// Default truncation tolerance, `2^-40`.
pub const DEFAULT_TOLERANCE: f64 = 1.0 / (1u64 << 40) as f64;

/// Truncated value of `D` with a rigorous tail bound: the true distance lies
/// in `[value, value + tail_bound)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceReport {
    pub value: f64,
    pub truncation_depth: u32,
    pub tail_bound: f64,
}

impl DistanceReport {
    pub fn upper(&self) -> f64 {
        self.value + self.tail_bound
    }
}

/// Smallest `K` with `2^-K <= tolerance`.
pub fn truncation_depth(tolerance: f64) -> Result<u32> {
    if !(tolerance > 0.0 && tolerance < 1.0) {
        return Err(Error::InvalidTolerance(tolerance));
    }
    let mut k = (-tolerance.log2()).ceil().max(1.0) as u32;
    while k > 1 && (2f64).powi(-(k as i32 - 1)) <= tolerance {
        k -= 1;
    }
    while (2f64).powi(-(k as i32)) > tolerance {
        k += 1;
    }
    Ok(k)
}

/// Write-once cache of `dbar` between the symbols of two alphabets.
#[derive(Debug)]
pub struct SymbolDistanceTable {
    left: Arc<ContractionAlphabet>,
    right: Arc<ContractionAlphabet>,
    cells: Vec<OnceLock<f64>>,
}

impl SymbolDistanceTable {
    pub fn new(left: Arc<ContractionAlphabet>, right: Arc<ContractionAlphabet>) -> Result<Self> {
        if left.space() != right.space() {
            return Err(Error::SpaceMismatch);
        }
        let cells = (0..left.len() * right.len()).map(|_| OnceLock::new()).collect();
        Ok(Self { left, right, cells })
    }

    pub fn covers(&self, f: &IfsSequence, g: &IfsSequence) -> bool {
        same_alphabet(&self.left, f.alphabet()) && same_alphabet(&self.right, g.alphabet())
    }

    pub fn get(&self, a: Symbol, b: Symbol) -> f64 {
        let cell = &self.cells[a.index() * self.right.len() + b.index()];
        *cell.get_or_init(|| {
            bounded_distance(self.left.map(a), self.right.map(b))
                .expect("alphabets share a space")
        })
    }

    /// Truncated `D(F, G)`; `F` must use the left alphabet and `G` the right.
    pub fn distance(&self, f: &IfsSequence, g: &IfsSequence, tolerance: f64) -> Result<DistanceReport> {
        if !self.covers(f, g) {
            return Err(Error::AlphabetMismatch);
        }
        let depth = truncation_depth(tolerance)?;
        let mut value = 0.0;
        let mut weight = 1.0;
        for (a, b) in f.symbols().zip(g.symbols()).take(depth as usize) {
            weight *= 0.5;
            if a == b && same_alphabet(&self.left, &self.right) {
                continue;
            }
            value += self.get(a, b) * weight;
        }
        Ok(DistanceReport {
            value,
            truncation_depth: depth,
            tail_bound: weight,
        })
    }
}

/// Truncated `D(F, G)` at the given tolerance.
pub fn sequence_distance(f: &IfsSequence, g: &IfsSequence, tolerance: f64) -> Result<DistanceReport> {
    SymbolDistanceTable::new(f.alphabet().clone(), g.alphabet().clone())?.distance(f, g, tolerance)
}
