use std::fmt;

use crate::error::{Error, Result};

/// A permutation of {0, 1, 2, 3}, stored as its images.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm4([u8; 4]);

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    pub fn new(images: [u8; 4]) -> Result<Self> {
        let mut seen = [false; 4];
        for &x in &images {
            if x > 3 || seen[x as usize] {
                return Err(Error::InvalidTriangulation(format!(
                    "{images:?} is not a permutation of 0..3"
                )));
            }
            seen[x as usize] = true;
        }
        Ok(Perm4(images))
    }

    pub fn images(&self) -> [u8; 4] {
        self.0
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn inverse(&self) -> Perm4 {
        let mut inv = [0u8; 4];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Perm4(inv)
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Perm4) -> Perm4 {
        let mut out = [0u8; 4];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.0[other.0[i] as usize];
        }
        Perm4(out)
    }

    pub fn sign(&self) -> i8 {
        let mut s = 1;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.0[i] > self.0[j] {
                    s = -s;
                }
            }
        }
        s
    }

    pub fn is_odd(&self) -> bool {
        self.sign() < 0
    }

    pub fn all() -> impl Iterator<Item = Perm4> {
        (0..24u8).map(|mut code| {
            let mut pool = vec![0u8, 1, 2, 3];
            let mut out = [0u8; 4];
            for (i, slot) in out.iter_mut().enumerate() {
                let radix = (4 - i) as u8;
                *slot = pool.remove((code % radix) as usize);
                code /= radix;
            }
            Perm4(out)
        })
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "{a} {b} {c} {d}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_sign() {
        let p = Perm4::new([2, 0, 1, 3]).unwrap();
        assert_eq!(p.compose(&p.inverse()), Perm4::IDENTITY);
        assert_eq!(p.sign(), 1);
        assert!(Perm4::new([1, 0, 2, 3]).unwrap().is_odd());
        assert!(Perm4::new([0, 0, 1, 2]).is_err());
    }

    #[test]
    fn all_distinct() {
        let mut v: Vec<_> = Perm4::all().collect();
        v.sort();
        v.dedup();
        assert_eq!(v.len(), 24);
        assert_eq!(v.iter().filter(|p| p.is_odd()).count(), 12);
    }
}
