//! Finitely supported coordinate vectors, the universal element type for
//! points and functionals alike.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// A finitely supported vector with 1-based coordinate indices.
///
/// Canonical form: no stored entry is zero, so `support()` returns exactly
/// the stored keys. All arithmetic preserves this.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseVector {
    entries: BTreeMap<u32, f64>,
}

impl SparseVector {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The basis vector e_i (1-based).
    pub fn unit(i: u32) -> Self {
        assert!(i >= 1, "coordinates are 1-based");
        let mut entries = BTreeMap::new();
        entries.insert(i, 1.0);
        Self { entries }
    }

    pub fn from_entries(it: impl IntoIterator<Item = (u32, f64)>) -> Self {
        let mut entries = BTreeMap::new();
        for (i, v) in it {
            assert!(i >= 1, "coordinates are 1-based");
            if v != 0.0 {
                let slot = entries.entry(i).or_insert(0.0);
                *slot += v;
                if *slot == 0.0 {
                    entries.remove(&i);
                }
            }
        }
        Self { entries }
    }

    /// Dense slice interpreted as coordinates 1..=len.
    pub fn from_dense(values: &[f64]) -> Self {
        Self::from_entries(
            values
                .iter()
                .enumerate()
                .map(|(i, &v)| (i as u32 + 1, v)),
        )
    }

    pub fn to_dense(&self, dim: usize) -> Vec<f64> {
        let mut out = vec![0.0; dim];
        for (&i, &v) in &self.entries {
            if (i as usize) <= dim {
                out[i as usize - 1] = v;
            }
        }
        out
    }

    pub fn get(&self, i: u32) -> f64 {
        self.entries.get(&i).copied().unwrap_or(0.0)
    }

    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.entries.iter().map(|(&i, &v)| (i, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Largest supported coordinate, 0 for the zero vector.
    pub fn max_index(&self) -> u32 {
        self.entries.keys().next_back().copied().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_entries(self.iter().chain(other.iter()))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_entries(self.iter().chain(other.iter().map(|(i, v)| (i, -v))))
    }

    pub fn scale(&self, t: f64) -> Self {
        Self::from_entries(self.iter().map(|(i, v)| (i, t * v)))
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    /// The dual pairing ⟨self, x⟩, an exact sum over the common support.
    pub fn pairing(&self, x: &Self) -> f64 {
        let (small, large) = if self.nnz() <= x.nnz() {
            (self, x)
        } else {
            (x, self)
        };
        small.iter().map(|(i, v)| v * large.get(i)).sum()
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.support()
            .chain(other.support())
            .all(|i| (self.get(i) - other.get(i)).abs() <= tol)
    }

    /// Dense lexicographic order over coordinates 1..=dim.
    pub fn cmp_lex(&self, other: &Self, dim: usize) -> Ordering {
        for i in 1..=dim as u32 {
            match self.get(i).partial_cmp(&other.get(i)) {
                Some(Ordering::Equal) | None => continue,
                Some(ord) => return ord,
            }
        }
        Ordering::Equal
    }
}

impl fmt::Display for SparseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, v) in self.iter() {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{v:+}e{i}")?;
            first = false;
        }
        Ok(())
    }
}

/// The dual pairing ⟨f, x⟩.
pub fn pairing(f: &SparseVector, x: &SparseVector) -> f64 {
    f.pairing(x)
}

/// Splits x into its first coordinate plus the positive and negative parts
/// of the remainder: x = e1coeff·e₁ + xplus − xminus, where xplus and
/// xminus are nonnegative, have disjoint supports, and avoid coordinate 1.
pub fn split_parts(x: &SparseVector) -> (f64, SparseVector, SparseVector) {
    let e1coeff = x.get(1);
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for (i, v) in x.iter() {
        if i == 1 {
            continue;
        }
        if v > 0.0 {
            plus.push((i, v));
        } else {
            minus.push((i, -v));
        }
    }
    (
        e1coeff,
        SparseVector::from_entries(plus),
        SparseVector::from_entries(minus),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_drops_zeros() {
        let v = SparseVector::from_entries([(1, 1.0), (2, 0.0), (3, -1.0), (3, 1.0)]);
        assert_eq!(v.support().collect::<Vec<_>>(), vec![1]);
        let w = v.sub(&v);
        assert!(w.is_zero());
    }

    #[test]
    fn pairing_examples() {
        let e1 = SparseVector::unit(1);
        assert_eq!(e1.pairing(&e1), 1.0);
        let f = SparseVector::from_entries([(1, 1.0), (2, -1.0)]);
        let x = SparseVector::from_entries([(1, 1.0), (2, 2.0)]);
        assert_eq!(f.pairing(&x), -1.0);
        assert_eq!(SparseVector::zero().pairing(&x), 0.0);
    }

    #[test]
    fn split_parts_examples() {
        let (c, p, m) = split_parts(&SparseVector::unit(1));
        assert_eq!(c, 1.0);
        assert!(p.is_zero() && m.is_zero());

        let x = SparseVector::from_entries([(1, 1.0), (3, -2.0)]);
        let (c, p, m) = split_parts(&x);
        assert_eq!(c, 1.0);
        assert!(p.is_zero());
        assert_eq!(m, SparseVector::from_entries([(3, 2.0)]));

        let x = SparseVector::from_entries([(2, 0.5), (4, -0.25)]);
        let (c, p, m) = split_parts(&x);
        assert_eq!(c, 0.0);
        assert_eq!(p, SparseVector::from_entries([(2, 0.5)]));
        assert_eq!(m, SparseVector::from_entries([(4, 0.25)]));

        // recomposition is exact
        let back = SparseVector::unit(1).scale(c).add(&p).sub(&m);
        assert_eq!(back, x);
    }
}
