//! Elements of the sequence space `Con(X)^N` over a finite alphabet.
//!
//! Two representations are supported: eventually periodic streams, stored as
//! a (possibly empty) preperiod followed by a repeating cycle, and the block
//! enumeration stream, which lists every word of length 1, 2, 3, ... over an
//! ordered set of symbols in lexicographic order and is never eventually
//! periodic.

use std::fmt;
use std::sync::Arc;

use crate::alphabet::{ContractionAlphabet, Symbol};
use crate::error::{Error, Result};

/// Prefix length used by [`sequences_equal`] when a stream is generated.
pub const DEFAULT_EQUALITY_HORIZON: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Representation {
    EventuallyPeriodic {
        preperiod: Vec<Symbol>,
        period: Vec<Symbol>,
    },
    Generated(BlockEnumeration),
}

/// Concatenation of all 1-blocks, 2-blocks, 3-blocks, ... over `symbol_order`,
/// started `offset` letters in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockEnumeration {
    symbol_order: Vec<Symbol>,
    offset: u128,
}

impl BlockEnumeration {
    pub fn symbol_order(&self) -> &[Symbol] {
        &self.symbol_order
    }

    pub fn offset(&self) -> u128 {
        self.offset
    }

    pub(crate) fn advance(&mut self, n: u64) {
        self.offset = self.offset.saturating_add(n as u128);
    }

    /// Symbol at zero-based position `pos` of the unshifted stream.
    fn symbol_at(&self, pos: u128) -> Symbol {
        let cursor = BlockCursor::at(self.symbol_order.len(), pos);
        self.symbol_order[cursor.digits[cursor.letter]]
    }
}

/// Position inside the block enumeration: current word length, the word's
/// base-`m` digits (most significant first), and the letter within it.
#[derive(Debug, Clone)]
struct BlockCursor {
    radix: usize,
    digits: Vec<usize>,
    letter: usize,
}

impl BlockCursor {
    fn at(radix: usize, pos: u128) -> Self {
        let m = radix as u128;
        let mut rem = pos;
        let mut len: u128 = 1;
        let mut words = m;
        loop {
            let block = words.checked_mul(len);
            match block {
                Some(b) if rem >= b => {
                    rem -= b;
                    len += 1;
                    words = words.saturating_mul(m);
                }
                _ => break,
            }
        }
        let mut word = rem / len;
        let letter = (rem % len) as usize;
        let mut digits = vec![0usize; len as usize];
        for d in digits.iter_mut().rev() {
            *d = (word % m) as usize;
            word /= m;
        }
        Self {
            radix,
            digits,
            letter,
        }
    }

    fn advance(&mut self) {
        self.letter += 1;
        if self.letter < self.digits.len() {
            return;
        }
        self.letter = 0;
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < self.radix {
                return;
            }
            *d = 0;
        }
        // every word of this length has been listed
        let len = self.digits.len() + 1;
        self.digits = vec![0; len];
    }
}

/// A point of the sequence space: an infinite stream of alphabet symbols.
#[derive(Debug, Clone)]
pub struct IfsSequence {
    alphabet: Arc<ContractionAlphabet>,
    repr: Representation,
}

impl PartialEq for IfsSequence {
    /// Structural equality of representation and alphabet; use
    /// [`sequences_equal`] for stream equality.
    fn eq(&self, other: &Self) -> bool {
        same_alphabet(&self.alphabet, &other.alphabet) && self.repr == other.repr
    }
}

pub(crate) fn same_alphabet(a: &Arc<ContractionAlphabet>, b: &Arc<ContractionAlphabet>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl IfsSequence {
    /// An eventually periodic stream; the period must be nonempty.
    pub fn eventually_periodic(
        alphabet: Arc<ContractionAlphabet>,
        preperiod: Vec<Symbol>,
        period: Vec<Symbol>,
    ) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        check_symbols(&alphabet, preperiod.iter().chain(period.iter()))?;
        Ok(Self {
            alphabet,
            repr: Representation::EventuallyPeriodic { preperiod, period },
        })
    }

    /// Like [`IfsSequence::eventually_periodic`], with symbols given by name.
    pub fn from_names(
        alphabet: Arc<ContractionAlphabet>,
        preperiod: &[&str],
        period: &[&str],
    ) -> Result<Self> {
        let pre = names_to_symbols(&alphabet, preperiod)?;
        let per = names_to_symbols(&alphabet, period)?;
        Self::eventually_periodic(alphabet, pre, per)
    }

    /// The block enumeration stream over `symbol_order` (at least two distinct symbols).
    pub fn block_enumeration(
        alphabet: Arc<ContractionAlphabet>,
        symbol_order: Vec<Symbol>,
    ) -> Result<Self> {
        check_symbols(&alphabet, symbol_order.iter())?;
        let distinct = symbol_order
            .iter()
            .enumerate()
            .all(|(i, s)| !symbol_order[..i].contains(s));
        if symbol_order.len() < 2 || !distinct {
            return Err(Error::GeneratorTooSmall);
        }
        Ok(Self {
            alphabet,
            repr: Representation::Generated(BlockEnumeration {
                symbol_order,
                offset: 0,
            }),
        })
    }

    pub fn alphabet(&self) -> &Arc<ContractionAlphabet> {
        &self.alphabet
    }

    pub fn representation(&self) -> &Representation {
        &self.repr
    }

    pub fn is_generated(&self) -> bool {
        matches!(self.repr, Representation::Generated(_))
    }

    pub(crate) fn with_parts(alphabet: Arc<ContractionAlphabet>, repr: Representation) -> Self {
        Self { alphabet, repr }
    }

    /// The `k`-th symbol, counting from 1.
    ///
    /// # Panics
    /// If `k == 0`.
    pub fn index(&self, k: u64) -> Symbol {
        assert!(k >= 1, "sequence positions start at 1");
        let pos = k - 1;
        match &self.repr {
            Representation::EventuallyPeriodic { preperiod, period } => {
                let pre = preperiod.len() as u64;
                if pos < pre {
                    preperiod[pos as usize]
                } else {
                    period[((pos - pre) % period.len() as u64) as usize]
                }
            }
            Representation::Generated(g) => g.symbol_at(g.offset + pos as u128),
        }
    }

    pub fn name_at(&self, k: u64) -> &str {
        self.alphabet.name(self.index(k))
    }

    /// Iterates the stream from position 1.
    pub fn symbols(&self) -> SymbolStream<'_> {
        let state = match &self.repr {
            Representation::EventuallyPeriodic { preperiod, period } => StreamState::Periodic {
                preperiod,
                period,
                pos: 0,
            },
            Representation::Generated(g) => StreamState::Blocks {
                order: &g.symbol_order,
                cursor: BlockCursor::at(g.symbol_order.len(), g.offset),
            },
        };
        SymbolStream { state }
    }

    pub fn prefix(&self, n: usize) -> Vec<Symbol> {
        self.symbols().take(n).collect()
    }

    /// The unique canonical form of an eventually periodic stream.
    ///
    /// The period is replaced by its primitive root, then the preperiod is
    /// shortened while its last symbol equals the period's last symbol,
    /// rotating the period right each time.
    pub fn normalize(&self) -> Result<Self> {
        match &self.repr {
            Representation::Generated(_) => Err(Error::NotNormalizable),
            Representation::EventuallyPeriodic { preperiod, period } => {
                let mut period = primitive_root(period).to_vec();
                let mut preperiod = preperiod.clone();
                while let (Some(&p), Some(&q)) = (preperiod.last(), period.last()) {
                    if p != q {
                        break;
                    }
                    preperiod.pop();
                    period.rotate_right(1);
                }
                Ok(Self {
                    alphabet: self.alphabet.clone(),
                    repr: Representation::EventuallyPeriodic { preperiod, period },
                })
            }
        }
    }

    /// Canonical form when one exists, otherwise the sequence unchanged.
    pub fn canonical(&self) -> Self {
        self.normalize().unwrap_or_else(|_| self.clone())
    }

    /// Display of the representation with symbol names.
    pub fn describe(&self) -> String {
        let names = |syms: &[Symbol]| {
            syms.iter()
                .map(|&s| self.alphabet.name(s))
                .collect::<Vec<_>>()
                .join(",")
        };
        match &self.repr {
            Representation::EventuallyPeriodic { preperiod, period } => {
                format!("pre=({}) period=({})", names(preperiod), names(period))
            }
            Representation::Generated(g) => {
                format!("blocks({}) offset={}", names(&g.symbol_order), g.offset)
            }
        }
    }
}

impl fmt::Display for IfsSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// Shortest word whose repetition reproduces `period`.
pub(crate) fn primitive_root(period: &[Symbol]) -> &[Symbol] {
    let n = period.len();
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .find(|&d| (d..n).all(|i| period[i] == period[i - d]))
        .map(|d| &period[..d])
        .unwrap_or(period)
}

fn check_symbols<'a>(
    alphabet: &ContractionAlphabet,
    symbols: impl Iterator<Item = &'a Symbol>,
) -> Result<()> {
    for s in symbols {
        if s.index() >= alphabet.len() {
            return Err(Error::UnknownSymbol(format!("#{}", s.index())));
        }
    }
    Ok(())
}

pub(crate) fn names_to_symbols(alphabet: &ContractionAlphabet, names: &[&str]) -> Result<Vec<Symbol>> {
    names.iter().map(|n| alphabet.symbol(n)).collect()
}

/// Iterator over the symbols of an [`IfsSequence`].
pub struct SymbolStream<'a> {
    state: StreamState<'a>,
}

enum StreamState<'a> {
    Periodic {
        preperiod: &'a [Symbol],
        period: &'a [Symbol],
        pos: usize,
    },
    Blocks {
        order: &'a [Symbol],
        cursor: BlockCursor,
    },
}

impl Iterator for SymbolStream<'_> {
    type Item = Symbol;

    fn next(&mut self) -> Option<Symbol> {
        Some(match &mut self.state {
            StreamState::Periodic {
                preperiod,
                period,
                pos,
            } => {
                let s = if *pos < preperiod.len() {
                    preperiod[*pos]
                } else {
                    period[(*pos - preperiod.len()) % period.len()]
                };
                *pos += 1;
                // keep the counter bounded once inside the cycle
                if *pos >= preperiod.len() + period.len() {
                    *pos -= period.len();
                }
                s
            }
            StreamState::Blocks { order, cursor } => {
                let s = order[cursor.digits[cursor.letter]];
                cursor.advance();
                s
            }
        })
    }
}

/// Outcome of a stream comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceEquality {
    Equal,
    NotEqual,
    /// No discrepancy found among the first `horizon` symbols.
    UnknownUpTo(u64),
}

/// Decides stream equality exactly for eventually periodic inputs; otherwise
/// compares prefixes up to `horizon`.
pub fn sequences_equal(f: &IfsSequence, g: &IfsSequence, horizon: u64) -> Result<SequenceEquality> {
    if !same_alphabet(&f.alphabet, &g.alphabet) {
        return Err(Error::AlphabetMismatch);
    }
    match (&f.repr, &g.repr) {
        (Representation::EventuallyPeriodic { .. }, Representation::EventuallyPeriodic { .. }) => {
            let equal = f.canonical().repr == g.canonical().repr;
            Ok(if equal {
                SequenceEquality::Equal
            } else {
                SequenceEquality::NotEqual
            })
        }
        (Representation::Generated(a), Representation::Generated(b)) if a == b => {
            Ok(SequenceEquality::Equal)
        }
        _ => {
            let differs = f
                .symbols()
                .zip(g.symbols())
                .take(horizon as usize)
                .any(|(x, y)| x != y);
            Ok(if differs {
                SequenceEquality::NotEqual
            } else {
                SequenceEquality::UnknownUpTo(horizon)
            })
        }
    }
}

/// A finite iterated function system: nonempty, pairwise distinct maps.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteIfs(ContractionAlphabet);

impl FiniteIfs {
    pub fn new(alphabet: ContractionAlphabet) -> Result<Self> {
        if alphabet.is_empty() {
            return Err(Error::EmptySystem);
        }
        Ok(Self(alphabet))
    }

    pub fn as_alphabet(&self) -> &ContractionAlphabet {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> Vec<&str> {
        self.0.entries().iter().map(|(n, _)| n.as_str()).collect()
    }

    pub fn maps(&self) -> impl Iterator<Item = &crate::contraction::AffineContraction> {
        self.0.entries().iter().map(|(_, m)| m)
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.maps().map(|m| m.ratio()).collect()
    }

    /// True when every map of `self` occurs (coefficient-wise) in `other`.
    pub fn is_subsystem_of(&self, other: &FiniteIfs) -> bool {
        self.maps().all(|m| other.maps().any(|o| o.same_map(m)))
    }
}

/// The stream `(f_1, ..., f_n, f_1, f_1, ...)` representing a finite system.
pub fn embed_finite(ifs: &FiniteIfs) -> Result<IfsSequence> {
    if ifs.is_empty() {
        return Err(Error::EmptySystem);
    }
    let alphabet = Arc::new(ifs.0.clone());
    let preperiod: Vec<Symbol> = alphabet.symbols().collect();
    let period = vec![preperiod[0]];
    IfsSequence::eventually_periodic(alphabet, preperiod, period)
}

/// Distinct maps of the stream, in order of first appearance.
pub fn distinct_system(seq: &IfsSequence) -> FiniteIfs {
    let order = first_appearance(seq);
    let entries = order
        .iter()
        .map(|&s| (seq.alphabet.name(s).to_string(), seq.alphabet.map(s).clone()))
        .collect();
    let alphabet = ContractionAlphabet::new(*seq.alphabet.space(), entries)
        .expect("entries drawn from a valid alphabet");
    FiniteIfs(alphabet)
}

pub(crate) fn first_appearance(seq: &IfsSequence) -> Vec<Symbol> {
    let total = match &seq.repr {
        Representation::EventuallyPeriodic { preperiod, period } => {
            let mut seen = Vec::new();
            for &s in preperiod.iter().chain(period.iter()) {
                if !seen.contains(&s) {
                    seen.push(s);
                }
            }
            return seen;
        }
        Representation::Generated(g) => g.symbol_order.len(),
    };
    // every symbol recurs in the last letter of consecutive words
    let mut seen = Vec::with_capacity(total);
    for s in seq.symbols() {
        if !seen.contains(&s) {
            seen.push(s);
            if seen.len() == total {
                break;
            }
        }
    }
    seen
}
