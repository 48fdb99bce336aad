//! The right shift on sequences and the two evolution operators built on it.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::distance::SymbolDistanceTable;
use crate::error::{Error, Result};
use crate::sequence::{same_alphabet, sequences_equal, IfsSequence, Representation, SequenceEquality};

/// `(f_1, f_2, f_3, ...) -> (f_2, f_3, ...)`.
pub fn shift(seq: &IfsSequence) -> IfsSequence {
    shift_n(seq, 1)
}

/// `n`-fold shift; constant time in `n` for both representations.
pub fn shift_n(seq: &IfsSequence, n: u64) -> IfsSequence {
    let repr = match seq.representation() {
        Representation::EventuallyPeriodic { preperiod, period } => {
            let pre_len = preperiod.len() as u64;
            if n <= pre_len {
                Representation::EventuallyPeriodic {
                    preperiod: preperiod[n as usize..].to_vec(),
                    period: period.clone(),
                }
            } else {
                let mut period = period.clone();
                let turn = ((n - pre_len) % period.len() as u64) as usize;
                period.rotate_left(turn);
                Representation::EventuallyPeriodic {
                    preperiod: Vec::new(),
                    period,
                }
            }
        }
        Representation::Generated(g) => {
            let mut g = g.clone();
            g.advance(n);
            Representation::Generated(g)
        }
    };
    IfsSequence::with_parts(seq.alphabet().clone(), repr)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    /// `phi(F, n) = shift^n(F)` on `T = {0, 1, 2, ...}`.
    ShiftDiscrete,
    /// `phi(F, t) = e^{-t} F` on `T = [0, inf)`.
    ScaleExp,
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OperatorKind::ShiftDiscrete => "shift_discrete",
            OperatorKind::ScaleExp => "scale_exp",
        })
    }
}

impl FromStr for OperatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shift_discrete" => Ok(Self::ShiftDiscrete),
            "scale_exp" => Ok(Self::ScaleExp),
            other => Err(Error::UnknownSymbol(other.to_string())),
        }
    }
}

/// A time value; discrete times are exact integers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Time {
    Steps(u64),
    Real(f64),
}

impl fmt::Display for Time {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Time::Steps(n) => write!(f, "{n}"),
            Time::Real(t) => write!(f, "{t}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvolutionOperator {
    pub kind: OperatorKind,
}

impl EvolutionOperator {
    pub const SHIFT: Self = Self {
        kind: OperatorKind::ShiftDiscrete,
    };
    pub const SCALE_EXP: Self = Self {
        kind: OperatorKind::ScaleExp,
    };

    pub fn new(kind: OperatorKind) -> Self {
        Self { kind }
    }

    fn steps(&self, t: Time) -> Result<u64> {
        match t {
            Time::Steps(n) => Ok(n),
            Time::Real(x) if x >= 0.0 && x.fract() == 0.0 && x <= u64::MAX as f64 => Ok(x as u64),
            other => Err(Error::TimeOutsideDomain(other.to_string())),
        }
    }

    fn real(&self, t: Time) -> Result<f64> {
        match t {
            Time::Steps(n) => Ok(n as f64),
            Time::Real(x) if x >= 0.0 && x.is_finite() => Ok(x),
            other => Err(Error::TimeOutsideDomain(other.to_string())),
        }
    }

    /// Action on contraction ratios: identity for the shift, `r -> e^{-t} r`
    /// for exponential scaling.
    pub fn ratio_action(&self, ratio: f64, t: Time) -> Result<f64> {
        match self.kind {
            OperatorKind::ShiftDiscrete => self.steps(t).map(|_| ratio),
            OperatorKind::ScaleExp => self.real(t).map(|t| (-t).exp() * ratio),
        }
    }

    /// `phi(F, t)`.
    pub fn evolve(&self, seq: &IfsSequence, t: Time) -> Result<IfsSequence> {
        match self.kind {
            OperatorKind::ShiftDiscrete => Ok(shift_n(seq, self.steps(t)?)),
            OperatorKind::ScaleExp => {
                let t = self.real(t)?;
                if !seq.alphabet().space().contains_origin() {
                    return Err(Error::OriginNotInSpace);
                }
                if t == 0.0 {
                    return Ok(seq.clone());
                }
                let factor = (-t).exp();
                let alphabet = seq.alphabet().map_entries(|m| m.scaled(factor))?;
                Ok(IfsSequence::with_parts(
                    Arc::new(alphabet),
                    seq.representation().clone(),
                ))
            }
        }
    }
}

/// Outcome of checking `phi(F,0) = F` and `phi(F, t1 + t2) = phi(phi(F, t1), t2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupPropertyReport {
    pub identity_exact: bool,
    /// Largest coefficient difference between the two sides of the
    /// composition law (`0` when the streams coincide exactly).
    pub max_coefficient_diff: f64,
    pub tolerance: f64,
    pub passed: bool,
}

pub fn verify_group_property(
    op: &EvolutionOperator,
    seq: &IfsSequence,
    t1: Time,
    t2: Time,
    tolerance: f64,
) -> Result<GroupPropertyReport> {
    let zero = match op.kind {
        OperatorKind::ShiftDiscrete => Time::Steps(0),
        OperatorKind::ScaleExp => Time::Real(0.0),
    };
    let identity_exact = op.evolve(seq, zero)? == *seq;
    let total = match (t1, t2) {
        (Time::Steps(a), Time::Steps(b)) => Time::Steps(
            a.checked_add(b)
                .ok_or_else(|| Error::TimeOutsideDomain(format!("{a} + {b}")))?,
        ),
        _ => Time::Real(op.real(t1)? + op.real(t2)?),
    };
    let direct = op.evolve(seq, total)?;
    let composed = op.evolve(&op.evolve(seq, t1)?, t2)?;
    let diff = coefficient_gap(&direct, &composed)?;
    let passed = identity_exact
        && match op.kind {
            OperatorKind::ShiftDiscrete => diff == 0.0,
            OperatorKind::ScaleExp => diff <= tolerance,
        };
    Ok(GroupPropertyReport {
        identity_exact,
        max_coefficient_diff: diff,
        tolerance,
        passed,
    })
}

/// Coefficient-level gap between two sequences with the same stream
/// structure; infinite when the symbol streams differ.
pub fn coefficient_gap(a: &IfsSequence, b: &IfsSequence) -> Result<f64> {
    if same_alphabet(a.alphabet(), b.alphabet()) {
        return Ok(match sequences_equal(a, b, crate::sequence::DEFAULT_EQUALITY_HORIZON)? {
            SequenceEquality::NotEqual => f64::INFINITY,
            _ => 0.0,
        });
    }
    let (la, lb) = (a.alphabet(), b.alphabet());
    if la.len() != lb.len() || a.canonical().representation() != b.canonical().representation() {
        return Ok(f64::INFINITY);
    }
    Ok(la
        .symbols()
        .map(|s| la.map(s).coefficient_distance(lb.map(s)))
        .fold(0.0, f64::max))
}

/// Check of `D(shift F, shift G) = 2 D(F, G) - dbar(f_1, g_1)` and of the
/// continuity bound `D(shift F, shift G) <= 2 D(F, G)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftIdentityReport {
    pub shifted_distance: f64,
    pub doubled_minus_head: f64,
    pub doubled: f64,
    pub identity_error: f64,
    pub allowed_error: f64,
    pub identity_holds: bool,
    pub continuity_holds: bool,
}

impl ShiftIdentityReport {
    pub fn passed(&self) -> bool {
        self.identity_holds && self.continuity_holds
    }
}

pub fn shift_distance_identity(
    f: &IfsSequence,
    g: &IfsSequence,
    tolerance: f64,
    slack: f64,
) -> Result<ShiftIdentityReport> {
    let table = SymbolDistanceTable::new(f.alphabet().clone(), g.alphabet().clone())?;
    let base = table.distance(f, g, tolerance)?;
    let shifted = table.distance(&shift(f), &shift(g), tolerance)?;
    let head = table.get(f.index(1), g.index(1));
    let doubled = 2.0 * base.value;
    let rhs = doubled - head;
    let err = (shifted.value - rhs).abs();
    let allowed = 2.0 * base.tail_bound + slack;
    Ok(ShiftIdentityReport {
        shifted_distance: shifted.value,
        doubled_minus_head: rhs,
        doubled,
        identity_error: err,
        allowed_error: allowed,
        identity_holds: err <= allowed,
        continuity_holds: shifted.value <= doubled + shifted.tail_bound + slack,
    })
}
