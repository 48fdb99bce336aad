//! Periodic, eventually periodic and (bounded-horizon) aperiodic points of the shift.

use std::fmt;

use crate::dynamics::shift_n;
use crate::sequence::{IfsSequence, Representation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Periodicity {
    Fixed,
    Periodic(u64),
    EventuallyFixed(u64),
    EventuallyPeriodic { preperiod: u64, period: u64 },
    /// No period up to `h` matches the prefix of length `3h`.
    AperiodicUpTo(u64),
}

impl fmt::Display for Periodicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Periodicity::Fixed => write!(f, "fixed"),
            Periodicity::Periodic(p) => write!(f, "periodic({p})"),
            Periodicity::EventuallyFixed(k) => write!(f, "eventually_fixed({k})"),
            Periodicity::EventuallyPeriodic { preperiod, period } => {
                write!(f, "eventually_periodic({preperiod},{period})")
            }
            Periodicity::AperiodicUpTo(h) => write!(f, "aperiodic_up_to({h})"),
        }
    }
}

/// Evidence for a classification: `shift^from(F)` and `shift^to(F)` share the
/// canonical form `canonical`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicityWitness {
    pub from: u64,
    pub to: u64,
    pub canonical: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicityReport {
    pub classification: Periodicity,
    pub witness: Option<PeriodicityWitness>,
}

/// Exact for eventually periodic streams (read off the canonical form);
/// semi-decided up to `horizon` for generated streams.
pub fn classify_periodicity(seq: &IfsSequence, horizon: u64) -> PeriodicityReport {
    let horizon = horizon.max(1);
    match seq.canonical().representation() {
        Representation::EventuallyPeriodic { preperiod, period } => {
            let (k, p) = (preperiod.len() as u64, period.len() as u64);
            let classification = match (k, p) {
                (0, 1) => Periodicity::Fixed,
                (0, p) => Periodicity::Periodic(p),
                (k, 1) => Periodicity::EventuallyFixed(k),
                (k, p) => Periodicity::EventuallyPeriodic {
                    preperiod: k,
                    period: p,
                },
            };
            let at_k = shift_n(seq, k).canonical();
            let at_kp = shift_n(seq, k + p).canonical();
            debug_assert_eq!(at_k, at_kp);
            PeriodicityReport {
                classification,
                witness: Some(PeriodicityWitness {
                    from: k,
                    to: k + p,
                    canonical: at_kp.describe(),
                }),
            }
        }
        Representation::Generated(_) => {
            let prefix = seq.prefix((3 * horizon) as usize);
            let periods = prefix_periods(&prefix);
            // Largest h <= horizon whose 3h-prefix has no period <= h. This is
            // `horizon` itself except deep inside a long run of equal words.
            let confirmed = (1..=horizon)
                .rev()
                .find(|&h| periods[(3 * h - 1) as usize] as u64 > h)
                .unwrap_or(0);
            PeriodicityReport {
                classification: Periodicity::AperiodicUpTo(confirmed),
                witness: None,
            }
        }
    }
}

/// `periods[i]` is the smallest period of `s[..=i]`, via the prefix function.
pub(crate) fn prefix_periods<T: PartialEq>(s: &[T]) -> Vec<usize> {
    let n = s.len();
    let mut border = vec![0usize; n];
    for i in 1..n {
        let mut k = border[i - 1];
        while k > 0 && s[i] != s[k] {
            k = border[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        border[i] = k;
    }
    border.iter().enumerate().map(|(i, b)| i + 1 - b).collect()
}

pub(crate) fn smallest_period<T: PartialEq>(s: &[T]) -> usize {
    prefix_periods(s).last().copied().unwrap_or(0)
}

/// The purely periodic point repeating the first `n` symbols of `seq`.
pub fn periodic_truncation(seq: &IfsSequence, n: usize) -> IfsSequence {
    let n = n.max(1);
    IfsSequence::eventually_periodic(seq.alphabet().clone(), Vec::new(), seq.prefix(n))
        .expect("nonempty period over the same alphabet")
        .canonical()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::{ContractionAlphabet, Symbol};
    use crate::contraction::validate_contraction;
    use crate::space::SpaceBox;
    use std::sync::Arc;

    fn alphabet(n: usize) -> Arc<ContractionAlphabet> {
        let space = SpaceBox::unit(1).unwrap();
        let entries = (0..n)
            .map(|i| {
                (
                    format!("f{}", i + 1),
                    validate_contraction(&space, &[vec![0.25]], &[i as f64 * 0.1]).unwrap(),
                )
            })
            .collect();
        Arc::new(ContractionAlphabet::new(space, entries).unwrap())
    }

    fn blocks(a: &Arc<ContractionAlphabet>) -> IfsSequence {
        let order: Vec<Symbol> = vec![a.symbol("f1").unwrap(), a.symbol("f2").unwrap()];
        IfsSequence::block_enumeration(a.clone(), order).unwrap()
    }

    /// Brute force: smallest p such that p is a period of the whole slice.
    fn naive_period(s: &[u8]) -> usize {
        (1..=s.len())
            .find(|&p| (p..s.len()).all(|i| s[i] == s[i - p]))
            .unwrap_or(s.len())
    }

    #[test]
    fn prefix_function_period_matches_naive() {
        let words: [&[u8]; 6] = [b"a", b"abab", b"abaab", b"aaaa", b"abcabcab", b"abcd"];
        for w in words {
            assert_eq!(smallest_period(w), naive_period(w), "{:?}", w);
        }
    }

    #[test]
    fn fixed_and_eventually_fixed() {
        let a = alphabet(4);
        let f = IfsSequence::from_names(a.clone(), &[], &["f2"]).unwrap();
        assert_eq!(classify_periodicity(&f, 10).classification, Periodicity::Fixed);
        let f = IfsSequence::from_names(a, &["f1", "f2", "f3", "f4"], &["f1"]).unwrap();
        let r = classify_periodicity(&f, 10);
        assert_eq!(r.classification, Periodicity::EventuallyFixed(4));
        let w = r.witness.unwrap();
        assert_eq!((w.from, w.to), (4, 5));
    }

    #[test]
    fn periodic_and_eventually_periodic() {
        let a = alphabet(4);
        let f = IfsSequence::from_names(a.clone(), &[], &["f1", "f2", "f3", "f1", "f2", "f3"]).unwrap();
        assert_eq!(classify_periodicity(&f, 10).classification, Periodicity::Periodic(3));
        let f = IfsSequence::from_names(a, &["f4", "f4"], &["f1", "f2"]).unwrap();
        assert_eq!(
            classify_periodicity(&f, 10).classification,
            Periodicity::EventuallyPeriodic {
                preperiod: 2,
                period: 2
            }
        );
    }

    #[test]
    fn block_enumeration_is_aperiodic() {
        let a = alphabet(2);
        let r = classify_periodicity(&blocks(&a), 1000);
        assert_eq!(r.classification, Periodicity::AperiodicUpTo(1000));
    }

    #[test]
    fn truncation_examples() {
        let a = alphabet(2);
        let b = blocks(&a);
        let g = periodic_truncation(&b, 4);
        assert_eq!(
            g,
            IfsSequence::from_names(a.clone(), &[], &["f1", "f2", "f1", "f1"]).unwrap()
        );
        let g1 = periodic_truncation(&b, 1);
        assert_eq!(g1, IfsSequence::from_names(a, &[], &["f1"]).unwrap());
    }
}
