//! Three-fold tensor Pauli words, their 8x8 signed permutation matrices and
//! the sign-quotiented group `L` of order 64 that acts on the root lines.
//!
//! The letters are the real 2x2 matrices I, X, Z and Y = XZ. A word carries
//! an overall sign that is tracked exactly through products; the group `L`
//! identifies a word with its negative.

use crate::exact::{rat, RationalMatrix};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PauliError {
    #[error("cannot parse {input:?} as a Pauli word: expected an optional '-' followed by three letters from IXYZ")]
    Parse { input: String },
}

/// One tensor leg: I, X, Y = XZ or Z. The declaration order gives the
/// tie-breaking order I < X < Y < Z used everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

pub const LETTERS: [PauliLetter; 4] = [
    PauliLetter::I,
    PauliLetter::X,
    PauliLetter::Y,
    PauliLetter::Z,
];

impl PauliLetter {
    /// The real 2x2 matrix of this letter.
    pub fn matrix2(self) -> [[i64; 2]; 2] {
        match self {
            PauliLetter::I => [[1, 0], [0, 1]],
            PauliLetter::X => [[0, 1], [1, 0]],
            PauliLetter::Y => [[0, -1], [1, 0]], // XZ
            PauliLetter::Z => [[1, 0], [0, -1]],
        }
    }

    /// Single-letter product with exact sign: `a * b = (letter, negative)`.
    pub fn mul(self, b: PauliLetter) -> (PauliLetter, bool) {
        use PauliLetter::*;
        match (self, b) {
            (I, x) => (x, false),
            (x, I) => (x, false),
            (X, X) => (I, false),
            (X, Y) => (Z, false), // X * XZ = Z
            (X, Z) => (Y, false), // the defining relation Y = XZ
            (Y, X) => (Z, true),  // XZX = -Z
            (Y, Y) => (I, true),  // Y^2 = -I
            (Y, Z) => (X, false), // XZZ = X
            (Z, X) => (Y, true),  // ZX = -XZ
            (Z, Y) => (X, true),  // ZXZ = -X
            (Z, Z) => (I, false),
        }
    }

    /// As one leg of a signed permutation on two indices:
    /// column j is mapped to `sign[j] * e_{perm[j]}`.
    fn signed_permutation2(self) -> ([usize; 2], [i64; 2]) {
        match self {
            PauliLetter::I => ([0, 1], [1, 1]),
            PauliLetter::X => ([1, 0], [1, 1]),
            PauliLetter::Y => ([1, 0], [1, -1]), // col1 -> -e0
            PauliLetter::Z => ([0, 1], [1, -1]),
        }
    }

    pub fn to_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<PauliLetter> {
        match c {
            'I' => Some(PauliLetter::I),
            'X' => Some(PauliLetter::X),
            'Y' => Some(PauliLetter::Y),
            'Z' => Some(PauliLetter::Z),
            _ => None,
        }
    }
}

/// A signed 3-letter Pauli word, realized as an 8x8 signed permutation
/// matrix via the Kronecker product with leg 1 outermost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliWord {
    pub letters: [PauliLetter; 3],
    pub negative: bool,
}

impl PauliWord {
    pub fn new(letters: [PauliLetter; 3]) -> Self {
        PauliWord {
            letters,
            negative: false,
        }
    }

    pub fn identity() -> Self {
        Self::new([PauliLetter::I; 3])
    }

    /// The 8x8 integer matrix of the word: sign times the Kronecker product
    /// of the three 2x2 letters, leg 1 outermost.
    pub fn matrix(&self) -> RationalMatrix {
        let (perm, sign) = self.signed_permutation();
        RationalMatrix::from_fn(8, 8, |r, c| {
            if perm[c] == r {
                rat(sign[c])
            } else {
                rat(0)
            }
        })
    }

    /// The same matrix in signed permutation form: column j holds
    /// `sign[j] * e_{perm[j]}`.
    pub fn signed_permutation(&self) -> ([usize; 8], [i64; 8]) {
        let legs: Vec<([usize; 2], [i64; 2])> = self
            .letters
            .iter()
            .map(|l| l.signed_permutation2())
            .collect();
        let mut perm = [0usize; 8];
        let mut sign = [0i64; 8];
        let global = if self.negative { -1 } else { 1 };
        for j in 0..8 {
            let (j1, j2, j3) = (j >> 2 & 1, j >> 1 & 1, j & 1);
            perm[j] = (legs[0].0[j1] << 2) | (legs[1].0[j2] << 1) | legs[2].0[j3];
            sign[j] = global * legs[0].1[j1] * legs[1].1[j2] * legs[2].1[j3];
        }
        (perm, sign)
    }

    /// Applies the word's matrix to a coordinate vector.
    pub fn apply(&self, x: &[i64; 8]) -> [i64; 8] {
        let (perm, sign) = self.signed_permutation();
        let mut out = [0i64; 8];
        for j in 0..8 {
            out[perm[j]] = sign[j] * x[j];
        }
        out
    }

    /// Letterwise product with exact sign tracking; the matrix of the result
    /// equals the product of the matrices.
    pub fn mul(&self, other: &PauliWord) -> PauliWord {
        let mut letters = [PauliLetter::I; 3];
        let mut negative = self.negative ^ other.negative;
        for i in 0..3 {
            let (l, neg) = self.letters[i].mul(other.letters[i]);
            letters[i] = l;
            negative ^= neg;
        }
        PauliWord { letters, negative }
    }

    /// True iff the two words commute including sign; equivalently the number
    /// of legs carrying distinct non-identity letters is even.
    pub fn commutes(&self, other: &PauliWord) -> bool {
        let anticommuting = self
            .letters
            .iter()
            .zip(other.letters.iter())
            .filter(|(a, b)| **a != PauliLetter::I && **b != PauliLetter::I && a != b)
            .count();
        anticommuting % 2 == 0
    }

    pub fn negated(&self) -> PauliWord {
        PauliWord {
            letters: self.letters,
            negative: !self.negative,
        }
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "-")?;
        }
        for l in self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliWord {
    type Err = PauliError;

    fn from_str(s: &str) -> Result<Self, PauliError> {
        let err = || PauliError::Parse {
            input: s.to_string(),
        };
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let chars: Vec<char> = body.chars().collect();
        if chars.len() != 3 {
            return Err(err());
        }
        let mut letters = [PauliLetter::I; 3];
        for (i, c) in chars.iter().enumerate() {
            letters[i] = PauliLetter::from_char(*c).ok_or_else(err)?;
        }
        Ok(PauliWord { letters, negative })
    }
}

/// An element of the group `L`: a Pauli word modulo sign. The 64 elements
/// form an elementary abelian group of order 64.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElementL {
    letters: [PauliLetter; 3],
}

impl GroupElementL {
    pub fn new(letters: [PauliLetter; 3]) -> Self {
        GroupElementL { letters }
    }

    pub fn from_word(w: PauliWord) -> Self {
        GroupElementL { letters: w.letters }
    }

    pub fn identity() -> Self {
        GroupElementL {
            letters: [PauliLetter::I; 3],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.letters == [PauliLetter::I; 3]
    }

    pub fn letters(&self) -> [PauliLetter; 3] {
        self.letters
    }

    /// The representative word with positive sign.
    pub fn word(&self) -> PauliWord {
        PauliWord::new(self.letters)
    }

    /// Product modulo sign.
    pub fn mul(&self, other: &GroupElementL) -> GroupElementL {
        GroupElementL {
            letters: self.word().mul(&other.word()).letters,
        }
    }

    /// Applies the positive representative to a coordinate vector. Callers
    /// working modulo sign canonicalize afterwards.
    pub fn apply(&self, x: &[i64; 8]) -> [i64; 8] {
        self.word().apply(x)
    }

    /// Renders as a 3-letter string, e.g. "XIZ".
    pub fn name(&self) -> String {
        self.letters.iter().map(|l| l.to_char()).collect()
    }

    pub fn parse(s: &str) -> Result<Self, PauliError> {
        let w: PauliWord = s.parse()?;
        Ok(Self::from_word(w))
    }
}

impl fmt::Display for GroupElementL {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// The six generators of `L`: X and Z placed on each of the three legs.
pub fn generators() -> [GroupElementL; 6] {
    use PauliLetter::*;
    [
        GroupElementL::new([X, I, I]),
        GroupElementL::new([I, X, I]),
        GroupElementL::new([I, I, X]),
        GroupElementL::new([Z, I, I]),
        GroupElementL::new([I, Z, I]),
        GroupElementL::new([I, I, Z]),
    ]
}

/// All 64 elements of `L`, generated from the six generators by closure and
/// returned in lexicographic order (I < X < Y < Z).
pub fn enumerate_l() -> Vec<GroupElementL> {
    let mut set = std::collections::BTreeSet::new();
    set.insert(GroupElementL::identity());
    let gens = generators();
    loop {
        let mut grew = false;
        let current: Vec<GroupElementL> = set.iter().cloned().collect();
        for g in &gens {
            for e in &current {
                if set.insert(e.mul(g)) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    set.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use PauliLetter::*;

    fn w(s: &str) -> PauliWord {
        s.parse().unwrap()
    }

    #[test]
    fn word_matrix_basics() {
        assert_eq!(PauliWord::identity().matrix(), RationalMatrix::identity(8));
        // X on leg 1 swaps the coordinate blocks {0..3} and {4..7}
        let xii = w("XII").matrix();
        for j in 0..8 {
            for r in 0..8 {
                let expect = if r == (j + 4) % 8 { 1 } else { 0 };
                assert_eq!(*xii.entry(r, j), rat(expect));
            }
        }
        // Z on leg 3 is diag(1,-1,1,-1,1,-1,1,-1)
        let iiz = w("IIZ").matrix();
        for r in 0..8 {
            for c in 0..8 {
                let expect = if r == c {
                    if r % 2 == 0 {
                        1
                    } else {
                        -1
                    }
                } else {
                    0
                };
                assert_eq!(*iiz.entry(r, c), rat(expect));
            }
        }
    }

    #[test]
    fn words_are_orthogonal_matrices() {
        for a in LETTERS {
            for b in LETTERS {
                for c in LETTERS {
                    let m = PauliWord::new([a, b, c]).matrix();
                    let prod = m.mul(&m.transpose()).unwrap();
                    assert_eq!(prod, RationalMatrix::identity(8));
                }
            }
        }
    }

    #[test]
    fn defining_relations() {
        assert_eq!(w("XII").mul(&w("ZII")), w("YII"));
        assert_eq!(w("ZII").mul(&w("XII")), w("-YII"));
        let any = w("XYZ");
        assert_eq!(PauliWord::identity().mul(&any), any);
        assert_eq!(w("XII").mul(&w("XII")), w("III"));
        assert_eq!(w("YII").mul(&w("YII")), w("-III"));
    }

    #[test]
    fn word_mul_matches_matrix_product_exhaustively() {
        // all 4096 pairs of signless words
        let mut all = Vec::new();
        for a in LETTERS {
            for b in LETTERS {
                for c in LETTERS {
                    all.push(PauliWord::new([a, b, c]));
                }
            }
        }
        for x in &all {
            for y in &all {
                let lhs = x.mul(y).matrix();
                let rhs = x.matrix().mul(&y.matrix()).unwrap();
                assert_eq!(lhs, rhs, "{x} * {y}");
            }
        }
    }

    #[test]
    fn commutation() {
        assert!(w("XII").commutes(&w("IXI")));
        assert!(!w("XII").commutes(&w("ZII")));
        let v = w("YZX");
        assert!(v.commutes(&v));
        // commutes(a,b) iff ab and ba agree including sign (exhaustive)
        for a in LETTERS {
            for b in LETTERS {
                for c in LETTERS {
                    let x = PauliWord::new([a, b, c]);
                    for d in LETTERS {
                        for e in LETTERS {
                            for f in LETTERS {
                                let y = PauliWord::new([d, e, f]);
                                assert_eq!(x.commutes(&y), x.mul(&y) == y.mul(&x));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn group_l_structure() {
        let l = enumerate_l();
        assert_eq!(l.len(), 64);
        assert!(l.contains(&GroupElementL::identity()));
        // closure, exponent 2, commutativity modulo sign
        let set: std::collections::BTreeSet<_> = l.iter().cloned().collect();
        for a in &l {
            assert!(a.mul(a).is_identity());
            for b in &l {
                assert!(set.contains(&a.mul(b)));
                assert_eq!(a.mul(b), b.mul(a));
            }
        }
        // deterministic lexicographic order
        let mut sorted = l.clone();
        sorted.sort();
        assert_eq!(l, sorted);
    }

    #[test]
    fn parse_and_display_roundtrip() {
        for s in ["XIZ", "-YYI", "III", "-ZZZ"] {
            let word: PauliWord = s.parse().unwrap();
            assert_eq!(word.to_string(), s);
        }
        assert!("XY".parse::<PauliWord>().is_err());
        assert!("ABC".parse::<PauliWord>().is_err());
        assert!("".parse::<PauliWord>().is_err());
    }

    #[test]
    fn signed_permutation_matches_matrix() {
        for a in LETTERS {
            for b in LETTERS {
                for c in LETTERS {
                    for neg in [false, true] {
                        let word = PauliWord {
                            letters: [a, b, c],
                            negative: neg,
                        };
                        let (perm, sign) = word.signed_permutation();
                        let m = word.matrix();
                        for j in 0..8 {
                            for r in 0..8 {
                                let expect = if perm[j] == r { rat(sign[j]) } else { rat(0) };
                                assert_eq!(*m.entry(r, j), expect);
                            }
                        }
                    }
                }
            }
        }
    }
}
