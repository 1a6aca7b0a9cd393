//! Words and presentations on two generators, Brown's fibering criterion
//! and integral lifts of mod-2 characters.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::intalg::{homology_at, kernel_basis, solve_linear, FgAbelianGroup, IntAlgError, IntMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FiberingError {
    #[error("unexpected character {0:?} in word (allowed: a, b, A, B)")]
    BadCharacter(char),
    #[error("malformed presentation: {0}")]
    BadPresentation(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("w1 = ({0}, {1}) is not a character: it is odd on relator {2}")]
    NotACharacter(u8, u8, String),
    #[error(transparent)]
    IntAlg(#[from] IntAlgError),
}

pub type Result<T> = std::result::Result<T, FiberingError>;

/// `a`, `b` or an inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    /// `0` for `a`, `1` for `b`.
    pub generator: u8,
    pub inverse: bool,
}

impl Letter {
    fn from_char(c: char) -> Result<Self> {
        let (generator, inverse) = match c {
            'a' => (0, false),
            'b' => (1, false),
            'A' => (0, true),
            'B' => (1, true),
            _ => return Err(FiberingError::BadCharacter(c)),
        };
        Ok(Self { generator, inverse })
    }

    fn to_char(self) -> char {
        match (self.generator, self.inverse) {
            (0, false) => 'a',
            (0, true) => 'A',
            (_, false) => 'b',
            (_, true) => 'B',
        }
    }

    pub fn inv(self) -> Self {
        Self { inverse: !self.inverse, ..self }
    }

    fn exponent(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A freely reduced word in `a`, `b`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FreeWord {
    letters: Vec<Letter>,
}

impl FreeWord {
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self { letters: out }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self { letters: self.letters.iter().rev().map(|l| l.inv()).collect() }
    }

    pub fn concat(&self, other: &Self) -> Self {
        Self::from_letters(self.letters.iter().chain(&other.letters).copied())
    }

    /// Rotation by `k` letters: `w_{k+1} ... w_n w_1 ... w_k`.
    pub fn rotate(&self, k: usize) -> Self {
        if self.letters.is_empty() {
            return self.clone();
        }
        let k = k % self.letters.len();
        Self::from_letters(self.letters[k..].iter().chain(&self.letters[..k]).copied())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(&f), Some(&l)) => self.letters.len() == 1 || f != l.inv(),
            _ => true,
        }
    }

    /// Exponent sums `(in a, in b)`.
    pub fn exponent_sums(&self) -> [i64; 2] {
        let mut s = [0, 0];
        for l in &self.letters {
            s[l.generator as usize] += l.exponent();
        }
        s
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.letters.iter().try_for_each(|l| write!(f, "{}", l.to_char()))
    }
}

impl FromStr for FreeWord {
    type Err = FiberingError;

    fn from_str(s: &str) -> Result<Self> {
        parse_word(s)
    }
}

/// Parses and freely reduces; uppercase letters are inverses.
pub fn parse_word(s: &str) -> Result<FreeWord> {
    let letters = s.trim().chars().map(Letter::from_char).collect::<Result<Vec<_>>>()?;
    Ok(FreeWord::from_letters(letters))
}

/// Strips inverse pairs from the two ends.
pub fn cyclically_reduce(w: &FreeWord) -> FreeWord {
    let l = &w.letters;
    let (mut i, mut j) = (0, l.len());
    while j - i >= 2 && l[i] == l[j - 1].inv() {
        i += 1;
        j -= 1;
    }
    FreeWord { letters: l[i..j].to_vec() }
}

/// `<a,b | r_1, ..., r_k>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    relators: Vec<FreeWord>,
}

impl Presentation {
    pub fn new(relators: Vec<FreeWord>) -> Result<Self> {
        if relators.iter().any(FreeWord::is_empty) {
            return Err(FiberingError::BadPresentation("relators must be nontrivial after free reduction".into()));
        }
        Ok(Self { relators })
    }

    /// Parses `<a,b|w1,w2,...>`; whitespace is ignored.
    pub fn parse(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix('<')
            .and_then(|r| r.strip_suffix('>'))
            .ok_or_else(|| FiberingError::BadPresentation("expected <a,b|...>".into()))?;
        let (gens, rels) =
            inner.split_once('|').ok_or_else(|| FiberingError::BadPresentation("missing '|'".into()))?;
        if gens != "a,b" {
            return Err(FiberingError::BadPresentation(format!("generators must be a,b, got {gens:?}")));
        }
        let relators = if rels.is_empty() {
            Vec::new()
        } else {
            rels.split(',').map(parse_word).collect::<Result<Vec<_>>>()?
        };
        Self::new(relators)
    }

    pub fn relators(&self) -> &[FreeWord] {
        &self.relators
    }

    /// `2 × r` matrix of exponent sums.
    pub fn exponent_matrix(&self) -> IntMatrix {
        IntMatrix::from_fn(2, self.relators.len(), |i, j| BigInt::from(self.relators[j].exponent_sums()[i]))
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(ToString::to_string).collect();
        write!(f, "<a,b|{}>", rels.join(","))
    }
}

impl FromStr for Presentation {
    type Err = FiberingError;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

pub fn abelianization(p: &Presentation) -> Result<FgAbelianGroup> {
    Ok(homology_at(&p.exponent_matrix(), &IntMatrix::zeros(0, 2))?)
}

/// A homomorphism `F(a, b) -> Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ZMap {
    pub a: i64,
    pub b: i64,
}

impl ZMap {
    pub fn eval(&self, w: &FreeWord) -> i64 {
        let [x, y] = w.exponent_sums();
        self.a * x + self.b * y
    }

    pub fn neg(&self) -> Self {
        Self { a: -self.a, b: -self.b }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum BrownVerdict {
    /// Unique extrema; indices are 1-based prefix lengths.
    FiberedKernelFg { min_index: usize, min: i64, max_index: usize, max: i64, values: Vec<i64> },
    NotFg { reason: String, values: Vec<i64> },
}

impl BrownVerdict {
    pub fn is_fibered(&self) -> bool {
        matches!(self, BrownVerdict::FiberedKernelFg { .. })
    }

    pub fn values(&self) -> &[i64] {
        match self {
            BrownVerdict::FiberedKernelFg { values, .. } | BrownVerdict::NotFg { values, .. } => values,
        }
    }
}

/// `φ(R_1), ..., φ(R_n)` for the prefixes `R_i` of `R`.
pub fn prefix_values(relator: &FreeWord, phi: ZMap) -> Vec<i64> {
    relator
        .letters()
        .iter()
        .scan(0i64, |acc, l| {
            *acc += l.exponent() * if l.generator == 0 { phi.a } else { phi.b };
            Some(*acc)
        })
        .collect()
}

/// Brown's criterion for `<a,b | R>` and `φ`.
pub fn brown_fibered(relator: &FreeWord, phi: ZMap) -> Result<BrownVerdict> {
    let fail = |m: &str| Err(FiberingError::PreconditionViolated(m.into()));
    if relator.is_empty() {
        return fail("the relator is trivial");
    }
    if !relator.is_cyclically_reduced() {
        return fail("the relator is not cyclically reduced");
    }
    if phi.a == 0 || phi.b == 0 {
        return fail("φ must be nonzero on both generators");
    }
    if phi.eval(relator) != 0 {
        return fail("φ does not kill the relator");
    }
    let values = prefix_values(relator, phi);
    let min = *values.iter().min().expect("nonempty");
    let max = *values.iter().max().expect("nonempty");
    let at = |v: i64| values.iter().enumerate().filter(|(_, &x)| x == v).map(|(i, _)| i + 1).collect::<Vec<_>>();
    let (mins, maxs) = (at(min), at(max));
    Ok(match (mins.as_slice(), maxs.as_slice()) {
        ([i], [j]) => BrownVerdict::FiberedKernelFg { min_index: *i, min, max_index: *j, max, values },
        _ => {
            let mut parts = Vec::new();
            if mins.len() > 1 {
                parts.push(format!("minimum {min} attained {} times", mins.len()));
            }
            if maxs.len() > 1 {
                parts.push(format!("maximum {max} attained {} times", maxs.len()));
            }
            BrownVerdict::NotFg { reason: parts.join(", "), values }
        }
    })
}

/// Primitive maps to `Z` killing all relators, up to sign. When the
/// first Betti number exceeds 1 the list is a basis and `multiple` is set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Epimorphisms {
    pub maps: Vec<ZMap>,
    pub multiple: bool,
}

fn to_i64(x: &BigInt) -> Result<i64> {
    i64::try_from(x).map_err(|_| FiberingError::PreconditionViolated("coefficient out of range".into()))
}

/// Maps to `Z` form the kernel of the transposed exponent matrix.
fn homs_to_z(p: &Presentation) -> IntMatrix {
    kernel_basis(&p.exponent_matrix().transpose())
}

pub fn epimorphisms_to_z(p: &Presentation) -> Result<Epimorphisms> {
    let k = homs_to_z(p);
    let mut maps = Vec::new();
    for j in 0..k.cols() {
        let col = k.column(j);
        let mut phi = ZMap { a: to_i64(&col[0])?, b: to_i64(&col[1])? };
        if phi.b < 0 || (phi.b == 0 && phi.a < 0) {
            phi = phi.neg();
        }
        maps.push(phi);
    }
    Ok(Epimorphisms { multiple: maps.len() > 1, maps })
}

fn check_character(p: &Presentation, w1: [bool; 2]) -> Result<()> {
    for r in p.relators() {
        let [x, y] = r.exponent_sums();
        if (i64::from(w1[0]) * x + i64::from(w1[1]) * y) % 2 != 0 {
            return Err(FiberingError::NotACharacter(u8::from(w1[0]), u8::from(w1[1]), r.to_string()));
        }
    }
    Ok(())
}

/// Whether some `θ: G -> Z` reduces to `w1` mod 2.
pub fn integral_lift_exists(p: &Presentation, w1: [bool; 2]) -> Result<bool> {
    check_character(p, w1)?;
    let k = homs_to_z(p);
    // θ = K u with K u - 2 t = w1
    let system = k.hstack(&IntMatrix::identity(2).scale(&BigInt::from(-2)))?;
    let rhs = [BigInt::from(u8::from(w1[0])), BigInt::from(u8::from(w1[1]))];
    Ok(solve_linear(&system, &rhs, None)?.is_some())
}

/// Sufficient test for the absence of an integral lift of `w1` on a
/// one-relator presentation: `b_1 = 1`, the unique epimorphism `φ` has a
/// finitely generated kernel by Brown's criterion, and `w1` is neither `0`
/// nor `φ mod 2` (so it is nonzero on the fiber). `Ok(false)` means
/// inconclusive, never that a lift exists.
pub fn fibered_lift_obstruction(p: &Presentation, w1: [bool; 2]) -> Result<bool> {
    check_character(p, w1)?;
    let [relator] = p.relators() else {
        return Err(FiberingError::PreconditionViolated("expected a one-relator presentation".into()));
    };
    let h1 = abelianization(p)?;
    let epis = epimorphisms_to_z(p)?;
    if h1.free_rank() != 1 || epis.maps.len() != 1 {
        return Ok(false);
    }
    let phi = epis.maps[0];
    if phi.a == 0 || phi.b == 0 {
        return Ok(false);
    }
    if !brown_fibered(&cyclically_reduce(relator), phi)?.is_fibered() {
        return Ok(false);
    }
    let phi_mod2 = [phi.a.rem_euclid(2) == 1, phi.b.rem_euclid(2) == 1];
    Ok(w1 != [false, false] && w1 != phi_mod2)
}

/// Whether `φ` vanishes on every relator.
pub fn kills_relators(p: &Presentation, phi: ZMap) -> bool {
    p.relators().iter().all(|r| phi.eval(r) == 0)
}

impl From<[i64; 2]> for ZMap {
    fn from([a, b]: [i64; 2]) -> Self {
        Self { a, b }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const R: &str = "aaaBAAAbbaaababb";
    const M: &str = "<a,b|aaaBAAAbbaaababb, aaabAAbbaaaBABAAAB>";

    #[test]
    fn parse_and_reduce() {
        assert!(parse_word("aA").unwrap().is_empty());
        assert_eq!(cyclically_reduce(&parse_word("baaB").unwrap()).to_string(), "aa");
        assert_eq!(parse_word(R).unwrap().to_string(), R);
        assert_eq!(parse_word("abc"), Err(FiberingError::BadCharacter('c')));
    }

    #[test]
    fn presentations() {
        let p = Presentation::parse(M).unwrap();
        assert_eq!(p.relators().len(), 2);
        assert_eq!(abelianization(&p).unwrap().to_string(), "Z + Z/4");
        assert_eq!(abelianization(&Presentation::parse("<a,b|>").unwrap()).unwrap(), FgAbelianGroup::free(2));
        assert!(Presentation::parse("<a,b|aA>").is_err());
        assert!(Presentation::parse("<x,y|xy>").is_err());
    }

    #[test]
    fn brown_examples() {
        let v = brown_fibered(&parse_word(R).unwrap(), ZMap { a: -1, b: 1 }).unwrap();
        assert!(matches!(v, BrownVerdict::FiberedKernelFg { min_index: 4, min: -4, max_index: 9, max: 1, .. }));
        let v = brown_fibered(&parse_word("abAB").unwrap(), ZMap { a: 1, b: 1 }).unwrap();
        assert_eq!(v.values(), &[1, 2, 1, 0]);
        assert!(v.is_fibered());
        let v = brown_fibered(&parse_word("abab").unwrap(), ZMap { a: -1, b: 1 }).unwrap();
        assert!(!v.is_fibered());
        assert!(brown_fibered(&parse_word("abab").unwrap(), ZMap { a: 0, b: 1 }).is_err());
        assert!(brown_fibered(&parse_word("aab").unwrap(), ZMap { a: 1, b: 1 }).is_err());
    }

    #[test]
    fn epimorphisms() {
        let p = Presentation::parse(M).unwrap();
        assert_eq!(epimorphisms_to_z(&p).unwrap().maps, vec![ZMap { a: -1, b: 1 }]);
        let free = epimorphisms_to_z(&Presentation::parse("<a,b|>").unwrap()).unwrap();
        assert!(free.multiple);
        assert_eq!(free.maps.len(), 2);
        assert!(epimorphisms_to_z(&Presentation::parse("<a,b|aa,bbb>").unwrap()).unwrap().maps.is_empty());
    }

    #[test]
    fn integral_lifts() {
        let p = Presentation::parse(M).unwrap();
        assert!(!integral_lift_exists(&p, [false, true]).unwrap());
        assert!(integral_lift_exists(&p, [false, false]).unwrap());
        assert!(integral_lift_exists(&p, [true, true]).unwrap());
        assert!(integral_lift_exists(&Presentation::parse("<a,b|>").unwrap(), [true, false]).unwrap());
        assert!(matches!(
            integral_lift_exists(&Presentation::parse("<a,b|a>").unwrap(), [true, false]),
            Err(FiberingError::NotACharacter(..))
        ));
        let n = Presentation::parse(&format!("<a,b|{R}>")).unwrap();
        assert!(fibered_lift_obstruction(&n, [false, true]).unwrap());
    }
}
