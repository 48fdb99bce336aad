use std::fmt;

use crate::contraction::AffineContraction;
use crate::error::{Error, Result};
use crate::space::SpaceBox;

/// Index of a map inside its [`ContractionAlphabet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(pub(crate) u32);

impl Symbol {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A finite, ordered set of named contractions on one space.
///
/// Names are unique and no two entries share coefficients, so symbol
/// equality coincides with map equality.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractionAlphabet {
    space: SpaceBox,
    entries: Vec<(String, AffineContraction)>,
}

impl ContractionAlphabet {
    pub fn new(space: SpaceBox, entries: Vec<(String, AffineContraction)>) -> Result<Self> {
        for (i, (name, map)) in entries.iter().enumerate() {
            if map.space() != &space {
                return Err(Error::Validation {
                    entity: name.clone(),
                    source: Box::new(Error::SpaceMismatch),
                });
            }
            for (other, other_map) in &entries[..i] {
                if other == name {
                    return Err(Error::DuplicateName(name.clone()));
                }
                if other_map.same_map(map) {
                    return Err(Error::DuplicateMap(other.clone(), name.clone()));
                }
            }
        }
        Ok(Self { space, entries })
    }

    pub fn space(&self) -> &SpaceBox {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn symbol(&self, name: &str) -> Result<Symbol> {
        self.entries
            .iter()
            .position(|(n, _)| n == name)
            .map(|i| Symbol(i as u32))
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        (0..self.entries.len() as u32).map(Symbol)
    }

    pub fn name(&self, s: Symbol) -> &str {
        &self.entries[s.index()].0
    }

    pub fn map(&self, s: Symbol) -> &AffineContraction {
        &self.entries[s.index()].1
    }

    pub fn entries(&self) -> &[(String, AffineContraction)] {
        &self.entries
    }

    /// Applies `f` to every map, keeping names and order.
    pub fn map_entries<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&AffineContraction) -> Result<AffineContraction>,
    {
        let entries = self
            .entries
            .iter()
            .map(|(n, m)| {
                f(m).map(|m| (n.clone(), m)).map_err(|e| Error::Validation {
                    entity: n.clone(),
                    source: Box::new(e),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.space, entries)
    }
}

impl fmt::Display for ContractionAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.entries.iter().map(|(n, _)| n.as_str()).collect();
        write!(f, "{{{}}}", names.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contraction::validate_contraction;

    #[test]
    fn rejects_duplicates() {
        let space = SpaceBox::unit(1).unwrap();
        let f = validate_contraction(&space, &[vec![0.5]], &[0.0]).unwrap();
        let g = validate_contraction(&space, &[vec![0.5]], &[0.5]).unwrap();
        assert!(matches!(
            ContractionAlphabet::new(space, vec![("f".into(), f.clone()), ("f".into(), g)]),
            Err(Error::DuplicateName(_))
        ));
        assert!(matches!(
            ContractionAlphabet::new(space, vec![("f".into(), f.clone()), ("g".into(), f)]),
            Err(Error::DuplicateMap(_, _))
        ));
    }

    #[test]
    fn rejects_foreign_space() {
        let space = SpaceBox::unit(1).unwrap();
        let other = SpaceBox::new(&[-1.0], &[1.0]).unwrap();
        let f = validate_contraction(&other, &[vec![0.5]], &[0.0]).unwrap();
        assert!(ContractionAlphabet::new(space, vec![("f".into(), f)]).is_err());
    }
}
