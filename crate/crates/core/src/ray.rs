use std::fmt;
use std::hash::{Hash, Hasher};

use crate::cyclotomic::CyclotomicNumber;
use crate::error::{Error, Result};

/// A projective class of nonzero vectors over a cyclotomic field.
///
/// Equality and hashing go through the canonical key (first nonzero entry
/// scaled to 1); the entries as given are kept for display.
#[derive(Clone)]
pub struct Ray {
    entries: Vec<CyclotomicNumber>,
    key: Vec<CyclotomicNumber>,
}

impl Ray {
    pub fn new(entries: Vec<CyclotomicNumber>) -> Result<Ray> {
        let lead = entries
            .iter()
            .find(|c| !c.is_zero())
            .ok_or_else(|| Error::BadCoordinates("zero vector".into()))?;
        let inv = lead.inverse()?;
        let key = entries
            .iter()
            .map(|c| c.checked_mul(&inv))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ray { entries, key })
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[CyclotomicNumber] {
        &self.entries
    }

    pub fn canonical_key(&self) -> &[CyclotomicNumber] {
        &self.key
    }

    /// Hermitian form `sum conj(a_i) * b_i`, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &Ray) -> Result<CyclotomicNumber> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        let ctx = self.entries[0].context();
        let mut acc = ctx.zero();
        for (a, b) in self.entries.iter().zip(&other.entries) {
            if a.is_zero() || b.is_zero() {
                continue;
            }
            acc = acc.checked_add(&a.conjugate().checked_mul(b)?)?;
        }
        Ok(acc)
    }

    pub fn is_orthogonal(&self, other: &Ray) -> Result<bool> {
        Ok(self.inner_product(other)?.is_zero())
    }
}

impl PartialEq for Ray {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for Ray {}

impl Hash for Ray {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key.hash(state);
    }
}

impl fmt::Display for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
