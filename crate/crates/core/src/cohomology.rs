//! Mod-2 cohomology rings of cyclic groups and of `Z^4`, with cup products,
//! `Sq^1`, `Sq^2` and the twisted operation `Sq^2_{w1,w2}`.
//!
//! For `n = 2^m·q`, `q` odd, `H^*(Z/n; Z/2)` is `F2[t]` when `m = 1` and
//! `Λ(t) ⊗ F2[s]` when `m >= 2` (`|t| = 1`, `|s| = 2`); it is `F2` in
//! degree 0 when `n` is odd. The degree-`d` generator is `t^d` or
//! `t^(d mod 2)·s^(d div 2)`. `H^*(Z^4; Z/2)` is the exterior algebra on
//! `e1..e4`; a class is a bitset over the 16 subsets of `{1,2,3,4}`.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::groupring::{coefficients_complex, standard_resolution, CoefficientModule, GroupRingError};
pub use crate::groupring::{CyclicHom, HomError};
use crate::intalg::FgAbelianGroup;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("classes live in different rings: {0} and {1}")]
    RingMismatch(Mod2Ring, Mod2Ring),
    #[error("expected a class of degree {expected}, got degree {got}")]
    DegreeMismatch { expected: u32, got: u32 },
    #[error("invalid class: {0}")]
    InvalidClass(String),
    #[error("twisted coefficients over Z/{0} need an even order")]
    InvalidTwist(usize),
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    GroupRing(#[from] GroupRingError),
}

pub type Result<T> = std::result::Result<T, CohomologyError>;

/// Exponent of 2 in `n`.
pub fn two_adic_exponent(n: usize) -> u32 {
    if n == 0 {
        0
    } else {
        n.trailing_zeros()
    }
}

/// The rings supported here.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mod2Ring {
    Cyclic(usize),
    FreeAbelian4,
}

impl fmt::Display for Mod2Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mod2Ring::Cyclic(n) => write!(f, "H*(Z/{n};Z/2)"),
            Mod2Ring::FreeAbelian4 => write!(f, "H*(Z^4;Z/2)"),
        }
    }
}

impl Mod2Ring {
    pub fn dim(&self, degree: u32) -> usize {
        match self {
            Mod2Ring::Cyclic(n) => usize::from(degree == 0 || n % 2 == 0),
            Mod2Ring::FreeAbelian4 => Z4Mod2Class::masks(degree).len(),
        }
    }

    /// Basis of the degree-`degree` part.
    pub fn basis(&self, degree: u32) -> Vec<Mod2Class> {
        match self {
            Mod2Ring::Cyclic(n) => {
                if self.dim(degree) == 1 {
                    vec![Mod2Class::Cyclic(CyclicMod2Class::generator(*n, degree))]
                } else {
                    Vec::new()
                }
            }
            Mod2Ring::FreeAbelian4 => Z4Mod2Class::masks(degree)
                .into_iter()
                .map(|m| Mod2Class::FreeAbelian4(Z4Mod2Class { degree, bits: 1 << m }))
                .collect(),
        }
    }

    /// Coordinates of `x` in [`Mod2Ring::basis`].
    pub fn coordinates(&self, x: &Mod2Class) -> Result<Vec<bool>> {
        if x.ring() != *self {
            return Err(CohomologyError::RingMismatch(*self, x.ring()));
        }
        Ok(match x {
            Mod2Class::Cyclic(c) => {
                if self.dim(c.degree) == 1 {
                    vec![c.value]
                } else {
                    Vec::new()
                }
            }
            Mod2Class::FreeAbelian4(z) => {
                Z4Mod2Class::masks(z.degree).into_iter().map(|m| z.bits & (1 << m) != 0).collect()
            }
        })
    }

    pub fn zero(&self, degree: u32) -> Mod2Class {
        match self {
            Mod2Ring::Cyclic(n) => Mod2Class::Cyclic(CyclicMod2Class::new(*n, degree, false)),
            Mod2Ring::FreeAbelian4 => Mod2Class::FreeAbelian4(Z4Mod2Class { degree, bits: 0 }),
        }
    }
}

/// A class in `H^degree(Z/n; Z/2)`, which is `Z/2` for even `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CyclicMod2Class {
    n: usize,
    degree: u32,
    value: bool,
}

impl CyclicMod2Class {
    /// `value` is forced to 0 when the group is zero in that degree.
    pub fn new(n: usize, degree: u32, value: bool) -> Self {
        let value = value && (degree == 0 || n.is_multiple_of(2));
        Self { n, degree, value }
    }

    pub fn generator(n: usize, degree: u32) -> Self {
        Self::new(n, degree, true)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn value(&self) -> bool {
        self.value
    }

    fn with(&self, degree: u32, value: bool) -> Self {
        Self::new(self.n, degree, value)
    }

    fn cup(&self, other: &Self) -> Self {
        let m = two_adic_exponent(self.n);
        let both_odd = self.degree % 2 == 1 && other.degree % 2 == 1;
        let product_vanishes = m >= 2 && both_odd;
        self.with(self.degree + other.degree, self.value && other.value && !product_vanishes)
    }

    fn sq1(&self) -> Self {
        let d = self.degree;
        let nonzero = two_adic_exponent(self.n) == 1 && d % 2 == 1;
        self.with(d + 1, self.value && nonzero)
    }

    fn sq2(&self) -> Self {
        let d = self.degree;
        let coefficient = if two_adic_exponent(self.n) == 1 {
            (u64::from(d) * u64::from(d.saturating_sub(1)) / 2) % 2 == 1
        } else {
            (d / 2) % 2 == 1
        };
        self.with(d + 2, self.value && coefficient)
    }
}

/// A class in `H^degree(Z^4; Z/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Z4Mod2Class {
    degree: u32,
    bits: u16,
}

impl Z4Mod2Class {
    /// Subset masks of size `degree`, in increasing order.
    pub fn masks(degree: u32) -> Vec<u32> {
        (0u32..16).filter(|m| m.count_ones() == degree).collect()
    }

    pub fn new(degree: u32, bits: u16) -> Result<Self> {
        let allowed: u32 = Self::masks(degree).iter().map(|m| 1u32 << m).sum();
        if u32::from(bits) & !allowed != 0 {
            return Err(CohomologyError::InvalidClass(format!("bits {bits:#06x} are not all of degree {degree}")));
        }
        Ok(Self { degree, bits })
    }

    /// `e_{i1} ∪ ... ∪ e_{ik}` for 1-based indices.
    pub fn monomial(indices: &[usize]) -> Result<Self> {
        let mut mask = 0u32;
        for &i in indices {
            if !(1..=4).contains(&i) {
                return Err(CohomologyError::InvalidClass(format!("index e{i} outside e1..e4")));
            }
            if mask & (1 << (i - 1)) != 0 {
                return Ok(Self { degree: indices.len() as u32, bits: 0 });
            }
            mask |= 1 << (i - 1);
        }
        Ok(Self { degree: indices.len() as u32, bits: 1 << mask })
    }

    pub fn e(i: usize) -> Result<Self> {
        Self::monomial(&[i])
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn bits(&self) -> u16 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    fn cup(&self, other: &Self) -> Self {
        let mut bits = 0u16;
        for p in 0..16 {
            if self.bits & (1 << p) == 0 {
                continue;
            }
            for q in 0..16 {
                if other.bits & (1 << q) != 0 && p & q == 0 {
                    bits ^= 1 << (p | q);
                }
            }
        }
        Self { degree: self.degree + other.degree, bits }
    }
}

impl fmt::Display for Z4Mod2Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = (0u32..16)
            .filter(|m| self.bits & (1 << m) != 0)
            .map(|m| {
                if m == 0 {
                    "1".to_string()
                } else {
                    (0..4).filter(|i| m & (1 << i) != 0).map(|i| format!("e{}", i + 1)).collect()
                }
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mod2Class {
    Cyclic(CyclicMod2Class),
    FreeAbelian4(Z4Mod2Class),
}

impl Mod2Class {
    pub fn ring(&self) -> Mod2Ring {
        match self {
            Mod2Class::Cyclic(c) => Mod2Ring::Cyclic(c.n),
            Mod2Class::FreeAbelian4(_) => Mod2Ring::FreeAbelian4,
        }
    }

    pub fn degree(&self) -> u32 {
        match self {
            Mod2Class::Cyclic(c) => c.degree,
            Mod2Class::FreeAbelian4(z) => z.degree,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Mod2Class::Cyclic(c) => !c.value,
            Mod2Class::FreeAbelian4(z) => z.bits == 0,
        }
    }

    /// `t` in `H^1(Z/n; Z/2)`.
    pub fn t(n: usize) -> Self {
        Mod2Class::Cyclic(CyclicMod2Class::generator(n, 1))
    }

    /// `s` in `H^2(Z/n; Z/2)`.
    pub fn s(n: usize) -> Self {
        Mod2Class::Cyclic(CyclicMod2Class::generator(n, 2))
    }

    pub fn z4(indices: &[usize]) -> Result<Self> {
        Ok(Mod2Class::FreeAbelian4(Z4Mod2Class::monomial(indices)?))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.ring() != other.ring() {
            return Err(CohomologyError::RingMismatch(self.ring(), other.ring()));
        }
        if self.degree() != other.degree() {
            return Err(CohomologyError::DegreeMismatch { expected: self.degree(), got: other.degree() });
        }
        Ok(match (self, other) {
            (Mod2Class::Cyclic(a), Mod2Class::Cyclic(b)) => Mod2Class::Cyclic(a.with(a.degree, a.value ^ b.value)),
            (Mod2Class::FreeAbelian4(a), Mod2Class::FreeAbelian4(b)) => {
                Mod2Class::FreeAbelian4(Z4Mod2Class { degree: a.degree, bits: a.bits ^ b.bits })
            }
            _ => unreachable!("rings already compared"),
        })
    }
}

impl fmt::Display for Mod2Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mod2Class::Cyclic(c) => {
                if !c.value {
                    return write!(f, "0");
                }
                let d = c.degree;
                if d == 0 {
                    return write!(f, "1");
                }
                if two_adic_exponent(c.n) == 1 {
                    return if d == 1 { write!(f, "t") } else { write!(f, "t^{d}") };
                }
                let t = if d % 2 == 1 { "t" } else { "" };
                match d / 2 {
                    0 => write!(f, "{t}"),
                    1 => write!(f, "{t}s"),
                    j => write!(f, "{t}s^{j}"),
                }
            }
            Mod2Class::FreeAbelian4(z) => write!(f, "{z}"),
        }
    }
}

pub fn cup(a: &Mod2Class, b: &Mod2Class) -> Result<Mod2Class> {
    match (a, b) {
        (Mod2Class::Cyclic(x), Mod2Class::Cyclic(y)) if x.n == y.n => Ok(Mod2Class::Cyclic(x.cup(y))),
        (Mod2Class::FreeAbelian4(x), Mod2Class::FreeAbelian4(y)) => Ok(Mod2Class::FreeAbelian4(x.cup(y))),
        _ => Err(CohomologyError::RingMismatch(a.ring(), b.ring())),
    }
}

pub fn sq1(x: &Mod2Class) -> Mod2Class {
    match x {
        Mod2Class::Cyclic(c) => Mod2Class::Cyclic(c.sq1()),
        Mod2Class::FreeAbelian4(z) => Mod2Class::FreeAbelian4(Z4Mod2Class { degree: z.degree + 1, bits: 0 }),
    }
}

pub fn sq2(x: &Mod2Class) -> Mod2Class {
    match x {
        Mod2Class::Cyclic(c) => Mod2Class::Cyclic(c.sq2()),
        Mod2Class::FreeAbelian4(z) => Mod2Class::FreeAbelian4(Z4Mod2Class { degree: z.degree + 2, bits: 0 }),
    }
}

/// `Sq^2(x) + Sq^1(x) ∪ w1 + x ∪ w2`.
pub fn sq2_w(w1: &Mod2Class, w2: &Mod2Class, x: &Mod2Class) -> Result<Mod2Class> {
    if w1.degree() != 1 {
        return Err(CohomologyError::DegreeMismatch { expected: 1, got: w1.degree() });
    }
    if w2.degree() != 2 {
        return Err(CohomologyError::DegreeMismatch { expected: 2, got: w2.degree() });
    }
    sq2(x).add(&cup(&sq1(x), w1)?)?.add(&cup(x, w2)?)
}

/// `φ^*: H^*(Z/l2; Z/2) -> H^*(Z/l1; Z/2)` for `φ: a -> a^m`.
pub fn pullback(phi: &CyclicHom, x: &CyclicMod2Class) -> Result<CyclicMod2Class> {
    if x.n != phi.target_order() {
        return Err(CohomologyError::RingMismatch(Mod2Ring::Cyclic(phi.target_order()), Mod2Ring::Cyclic(x.n)));
    }
    let (l1, l2, m) = (phi.source_order(), phi.target_order(), phi.multiplier());
    let q = (m * l1 / l2) % 2 == 1;
    let d = x.degree;
    let multiplier = if d.is_multiple_of(2) { q || d == 0 } else { m % 2 == 1 && (q || d == 1) };
    Ok(CyclicMod2Class::new(l1, d, x.value && multiplier))
}

/// `H_k(Z/n; Z^w)` from the standard resolution.
pub fn h_twisted(n: usize, w: bool, k: usize) -> Result<FgAbelianGroup> {
    if w && !n.is_multiple_of(2) {
        return Err(CohomologyError::InvalidTwist(n));
    }
    let coeff = if w { CoefficientModule::TwistedIntegers } else { CoefficientModule::Integers };
    let complex = coefficients_complex(&standard_resolution(n, k + 1)?, coeff)?;
    Ok(complex.homology.homology(k)?)
}

/// Integral cohomology of `Z/n` via the standard resolution, used to
/// cross-check the Bockstein tabulation.
pub fn integral_cohomology(n: usize, k: usize) -> Result<FgAbelianGroup> {
    let complex = coefficients_complex(&standard_resolution(n, k + 1)?, CoefficientModule::Integers)?;
    Ok(complex.cohomology.cohomology(k)?)
}

/// Chain-level mod-2 Bockstein of the degree-`d` generator: `δ(lift)/2`
/// reduced mod 2, read off the integral cochain complex.
pub fn chain_level_sq1(n: usize, d: u32) -> Result<bool> {
    let complex = coefficients_complex(&standard_resolution(n, d as usize + 1)?, CoefficientModule::Integers)?;
    let delta = complex.cohomology.coboundaries[d as usize].get(0, 0).clone();
    Ok(n.is_multiple_of(2) && ((delta / BigInt::from(2)) % BigInt::from(2)) != BigInt::from(0))
}
