use std::fmt;

/// A permutation of `{0, 1, 2, 3}` stored as its images.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm4([u8; 4]);

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    /// Builds a permutation from its images, rejecting non-bijections.
    pub fn new(images: [u8; 4]) -> Option<Self> {
        let mut seen = [false; 4];
        for &i in &images {
            if i > 3 || seen[i as usize] {
                return None;
            }
            seen[i as usize] = true;
        }
        Some(Perm4(images))
    }

    /// Const constructor for literals known to be permutations.
    pub(crate) const fn new_unchecked(images: [u8; 4]) -> Self {
        Perm4(images)
    }

    /// Parses four digits such as `"0132"`.
    pub fn from_digits(s: &str) -> Option<Self> {
        let b = s.as_bytes();
        if b.len() != 4 || !b.iter().all(u8::is_ascii_digit) {
            return None;
        }
        Self::new([b[0] - b'0', b[1] - b'0', b[2] - b'0', b[3] - b'0'])
    }

    pub fn images(self) -> [u8; 4] {
        self.0
    }

    pub fn apply(self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// `self ∘ rhs`, i.e. apply `rhs` first.
    pub fn compose(self, rhs: Perm4) -> Perm4 {
        Perm4([
            self.0[rhs.0[0] as usize],
            self.0[rhs.0[1] as usize],
            self.0[rhs.0[2] as usize],
            self.0[rhs.0[3] as usize],
        ])
    }

    pub fn inverse(self) -> Perm4 {
        let mut inv = [0u8; 4];
        for (i, &p) in self.0.iter().enumerate() {
            inv[p as usize] = i as u8;
        }
        Perm4(inv)
    }

    pub fn is_odd(self) -> bool {
        let mut inversions = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.0[i] > self.0[j] {
                    inversions += 1;
                }
            }
        }
        inversions % 2 == 1
    }

    /// Rank in the order of [`Perm4::all`].
    pub fn index(self) -> usize {
        let mut rank = 0;
        for i in 0..4 {
            let smaller = (i + 1..4).filter(|&j| self.0[j] < self.0[i]).count();
            rank = rank * (4 - i) + smaller;
        }
        rank
    }

    /// All 24 permutations in lexicographic order of their images.
    pub fn all() -> impl Iterator<Item = Perm4> {
        (0..4u8).flat_map(|a| {
            (0..4u8).flat_map(move |b| {
                (0..4u8).flat_map(move |c| (0..4u8).filter_map(move |d| Perm4::new([a, b, c, d])))
            })
        })
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}{}", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

impl fmt::Debug for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm4({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_laws() {
        let all: Vec<_> = Perm4::all().collect();
        assert_eq!(all.len(), 24);
        assert_eq!(all[0], Perm4::IDENTITY);
        assert_eq!(all.iter().filter(|p| p.is_odd()).count(), 12);
        for (i, p) in all.iter().enumerate() {
            assert_eq!(p.index(), i);
        }
        for &p in &all {
            assert_eq!(p.compose(p.inverse()), Perm4::IDENTITY);
            for &q in &all {
                assert_eq!(p.compose(q).is_odd(), p.is_odd() != q.is_odd());
                for i in 0..4 {
                    assert_eq!(p.compose(q).apply(i), p.apply(q.apply(i)));
                }
            }
        }
    }

    #[test]
    fn parsing() {
        assert_eq!(Perm4::from_digits("1032").unwrap().images(), [1, 0, 3, 2]);
        assert!(Perm4::from_digits("1123").is_none());
        assert!(Perm4::from_digits("012").is_none());
        assert!(Perm4::from_digits("01234").is_none());
        assert_eq!(Perm4::from_digits("3201").unwrap().to_string(), "3201");
    }
}
