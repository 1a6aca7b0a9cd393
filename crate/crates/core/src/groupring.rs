//! The integral group ring `Z[Z/n]`, free complexes over it, and their
//! expansion to integer complexes with coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::intalg::{
    homology_mod_subquotient, homology_subquotient, FgAbelianGroup, IntAlgError, IntMatrix, Subquotient,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupRingError {
    #[error("group order must be at least 1")]
    ZeroOrder,
    #[error("the twisted construction needs an even group order, got {0}")]
    OddOrder(usize),
    #[error("elements of Z[Z/{0}] and Z[Z/{1}] cannot be combined")]
    DifferentGroups(usize, usize),
    #[error("expected {expected} coefficients, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("the boundary into degree {0} does not compose to zero with the next one")]
    NotAComplex(usize),
    #[error("degree {degree} outside 0..={top}")]
    DegreeOutOfRange { degree: usize, top: usize },
    #[error("unsupported coefficient module: {0}")]
    UnsupportedCoefficient(String),
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    IntAlg(#[from] IntAlgError),
}

pub type Result<T> = std::result::Result<T, GroupRingError>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomError {
    #[error("a -> a^{m} does not define a homomorphism Z/{l1} -> Z/{l2}")]
    IllFormedHom { l1: usize, l2: usize, m: usize },
}

/// The homomorphism `Z/l1 -> Z/l2`, `a -> a^m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CyclicHom {
    l1: usize,
    l2: usize,
    m: usize,
}

impl CyclicHom {
    pub fn new(l1: usize, l2: usize, m: usize) -> std::result::Result<Self, HomError> {
        if l1 == 0 || l2 == 0 || !(m * l1).is_multiple_of(l2) {
            return Err(HomError::IllFormedHom { l1, l2, m });
        }
        Ok(Self { l1, l2, m: m % l2 })
    }

    pub fn identity(n: usize) -> Self {
        Self { l1: n, l2: n, m: 1 % n.max(1) }
    }

    /// The quotient map `Z/l1 -> Z/l2` for `l2 | l1`.
    pub fn projection(l1: usize, l2: usize) -> std::result::Result<Self, HomError> {
        Self::new(l1, l2, 1)
    }

    pub fn source_order(&self) -> usize {
        self.l1
    }

    pub fn target_order(&self) -> usize {
        self.l2
    }

    pub fn multiplier(&self) -> usize {
        self.m
    }

    /// All homomorphisms `Z/l1 -> Z/l2`.
    pub fn all(l1: usize, l2: usize) -> Vec<CyclicHom> {
        (0..l2).filter_map(|m| CyclicHom::new(l1, l2, m).ok()).collect()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &CyclicHom) -> std::result::Result<CyclicHom, HomError> {
        if self.l2 != other.l1 {
            return Err(HomError::IllFormedHom { l1: self.l1, l2: other.l2, m: self.m * other.m });
        }
        CyclicHom::new(self.l1, other.l2, (self.m * other.m) % other.l2)
    }
}

/// An element `Σ c_i a^i` of `Z[Z/n]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupRingElement {
    n: usize,
    coeffs: Vec<BigInt>,
}

impl GroupRingElement {
    pub fn new(n: usize, coeffs: Vec<BigInt>) -> Result<Self> {
        if n == 0 {
            return Err(GroupRingError::ZeroOrder);
        }
        if coeffs.len() != n {
            return Err(GroupRingError::LengthMismatch { expected: n, got: coeffs.len() });
        }
        Ok(Self { n, coeffs })
    }

    /// Builds `Σ c_i a^i`; exponents are read modulo `n`.
    pub fn from_i64(n: usize, coeffs: &[i64]) -> Result<Self> {
        if n == 0 {
            return Err(GroupRingError::ZeroOrder);
        }
        let mut out = vec![BigInt::zero(); n];
        for (i, &c) in coeffs.iter().enumerate() {
            out[i % n] += c;
        }
        Ok(Self { n, coeffs: out })
    }

    pub fn zero(n: usize) -> Self {
        Self { n, coeffs: vec![BigInt::zero(); n] }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(n, 0, BigInt::one())
    }

    /// `c·a^e`.
    pub fn monomial(n: usize, e: usize, c: BigInt) -> Self {
        let mut x = Self::zero(n);
        x.coeffs[e % n] = c;
        x
    }

    pub fn generator(n: usize) -> Self {
        Self::monomial(n, 1, BigInt::one())
    }

    /// `1 - a`.
    pub fn one_minus_a(n: usize) -> Self {
        Self::one(n).sub(&Self::generator(n)).expect("same ring")
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &BigInt {
        &self.coeffs[i % self.n]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(GroupRingError::DifferentGroups(self.n, other.n))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self { n: self.n, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Self { n: self.n, coeffs })
    }

    pub fn neg(&self) -> Self {
        Self { n: self.n, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self { n: self.n, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let n = self.n;
        let mut out = vec![BigInt::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other.coeffs.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                out[(i + j) % n] += a * b;
            }
        }
        Ok(Self { n, coeffs: out })
    }

    /// Image under the augmentation `a -> 1`.
    pub fn augmentation(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Image under `a -> -1`; requires an even order.
    pub fn twisted_augmentation(&self) -> Result<BigInt> {
        if !self.n.is_multiple_of(2) {
            return Err(GroupRingError::OddOrder(self.n));
        }
        Ok(self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 0 { c.clone() } else { -c })
            .sum())
    }

    /// The involution `a -> a^{-1}`.
    pub fn conjugate(&self) -> Self {
        let n = self.n;
        Self { n, coeffs: (0..n).map(|i| self.coeffs[(n - i) % n].clone()).collect() }
    }

    /// Image under the ring map induced by `φ: a -> a^m`.
    pub fn map_along(&self, phi: &CyclicHom) -> Result<Self> {
        if phi.source_order() != self.n {
            return Err(GroupRingError::DifferentGroups(self.n, phi.source_order()));
        }
        let l2 = phi.target_order();
        let mut out = vec![BigInt::zero(); l2];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[(i * phi.multiplier()) % l2] += c;
        }
        Ok(Self { n: l2, coeffs: out })
    }

    /// Matrix of multiplication by `self` in the basis `1, a, ..., a^{n-1}`.
    pub fn regular_representation(&self) -> IntMatrix {
        let n = self.n;
        IntMatrix::from_fn(n, n, |i, j| self.coeffs[(i + n - j) % n].clone())
    }

    /// `Σ c_i R^i` for an action matrix `R` of the generator.
    pub fn represent(&self, action: &IntMatrix) -> Result<IntMatrix> {
        if action.rows() != action.cols() {
            return Err(GroupRingError::Shape("action matrix must be square".into()));
        }
        let r = action.rows();
        let mut power = IntMatrix::identity(r);
        let mut acc = IntMatrix::zeros(r, r);
        for c in &self.coeffs {
            if !c.is_zero() {
                acc = acc.add(&power.scale(c))?;
            }
            power = power.mul(action)?;
        }
        Ok(acc)
    }
}

impl fmt::Debug for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in Z[Z/{}]", self, self.n)
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "a")?,
                (1, false) => write!(f, "{mag}a")?,
                (_, true) => write!(f, "a^{i}")?,
                (_, false) => write!(f, "{mag}a^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The norm element `Σ_{i<n} a^i`.
pub fn norm(n: usize) -> Result<GroupRingElement> {
    if n == 0 {
        return Err(GroupRingError::ZeroOrder);
    }
    Ok(GroupRingElement { n, coeffs: vec![BigInt::one(); n] })
}

/// The twisted norm `(1 - a)·Σ_{i<k} a^{2i}` for `n = 2k`, equal to
/// `Σ_{j<n} (-1)^j a^j`.
pub fn twisted_norm(n: usize) -> Result<GroupRingElement> {
    if n == 0 {
        return Err(GroupRingError::ZeroOrder);
    }
    if !n.is_multiple_of(2) {
        return Err(GroupRingError::OddOrder(n));
    }
    let coeffs = (0..n).map(|j| if j % 2 == 0 { BigInt::one() } else { -BigInt::one() }).collect();
    Ok(GroupRingElement { n, coeffs })
}

/// A matrix over `Z[Z/n]`; it maps column vectors of length `cols` to
/// column vectors of length `rows`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingMatrix {
    n: usize,
    rows: usize,
    cols: usize,
    entries: Vec<GroupRingElement>,
}

impl GroupRingMatrix {
    pub fn new(n: usize, rows: usize, cols: usize, entries: Vec<GroupRingElement>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(GroupRingError::Shape(format!("{} entries for {rows}x{cols}", entries.len())));
        }
        if let Some(bad) = entries.iter().find(|e| e.n != n) {
            return Err(GroupRingError::DifferentGroups(n, bad.n));
        }
        Ok(Self { n, rows, cols, entries })
    }

    pub fn scalar(x: GroupRingElement) -> Self {
        Self { n: x.n, rows: 1, cols: 1, entries: vec![x] }
    }

    pub fn zeros(n: usize, rows: usize, cols: usize) -> Self {
        Self { n, rows, cols, entries: vec![GroupRingElement::zero(n); rows * cols] }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &GroupRingElement {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[GroupRingElement] {
        &self.entries
    }

    pub fn mul(&self, other: &GroupRingMatrix) -> Result<GroupRingMatrix> {
        if self.n != other.n {
            return Err(GroupRingError::DifferentGroups(self.n, other.n));
        }
        if self.cols != other.rows {
            return Err(GroupRingError::Shape("inner dimensions differ".into()));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = GroupRingElement::zero(self.n);
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j))?)?;
                }
                entries.push(acc);
            }
        }
        Ok(GroupRingMatrix { n: self.n, rows: self.rows, cols: other.cols, entries })
    }

    pub fn sub(&self, other: &GroupRingMatrix) -> Result<GroupRingMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(GroupRingError::Shape("shapes differ".into()));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b)).collect::<Result<_>>()?;
        GroupRingMatrix::new(self.n, self.rows, self.cols, entries)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(GroupRingElement::is_zero)
    }

    pub fn map_along(&self, phi: &CyclicHom) -> Result<GroupRingMatrix> {
        let entries = self.entries.iter().map(|e| e.map_along(phi)).collect::<Result<_>>()?;
        GroupRingMatrix::new(phi.target_order(), self.rows, self.cols, entries)
    }

    /// Integer matrix with `(i, j)` block `f(entry(i, j))`.
    pub fn expand_with(&self, block: usize, f: impl Fn(&GroupRingElement) -> Result<IntMatrix>) -> Result<IntMatrix> {
        let mut blocks = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let row = (0..self.cols).map(|j| f(self.get(i, j))).collect::<Result<Vec<_>>>()?;
            blocks.push(row);
        }
        if self.rows == 0 || self.cols == 0 {
            return Ok(IntMatrix::zeros(self.rows * block, self.cols * block));
        }
        Ok(IntMatrix::from_blocks(&blocks)?)
    }

    /// Expansion through the regular representation.
    pub fn expand(&self) -> IntMatrix {
        self.expand_with(self.n, |x| Ok(x.regular_representation())).expect("regular blocks are uniform")
    }
}

/// A bounded free complex `C_top -> ... -> C_0` over `Z[Z/n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingComplex {
    n: usize,
    ranks: Vec<usize>,
    /// `boundaries[k - 1]` is `d_k: C_k -> C_{k-1}`.
    boundaries: Vec<GroupRingMatrix>,
}

impl GroupRingComplex {
    pub fn new(n: usize, rank0: usize, boundaries: Vec<GroupRingMatrix>) -> Result<Self> {
        let mut ranks = vec![rank0];
        for (k, d) in boundaries.iter().enumerate() {
            if d.n != n {
                return Err(GroupRingError::DifferentGroups(n, d.n));
            }
            if d.rows != ranks[k] {
                return Err(GroupRingError::Shape(format!("d_{} has {} rows, expected {}", k + 1, d.rows, ranks[k])));
            }
            ranks.push(d.cols);
        }
        for k in 1..boundaries.len() {
            if !boundaries[k - 1].mul(&boundaries[k])?.is_zero() {
                return Err(GroupRingError::NotAComplex(k));
            }
        }
        Ok(Self { n, ranks, boundaries })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn top_degree(&self) -> usize {
        self.boundaries.len()
    }

    pub fn rank(&self, k: usize) -> usize {
        self.ranks[k]
    }

    /// `d_k` for `1 <= k <= top_degree`.
    pub fn boundary(&self, k: usize) -> &GroupRingMatrix {
        &self.boundaries[k - 1]
    }

    pub fn boundaries(&self) -> &[GroupRingMatrix] {
        &self.boundaries
    }
}

/// The periodic resolution `... -N-> Z[Z/n] -(1-a)-> Z[Z/n]` of `Z`.
pub fn standard_resolution(n: usize, top_degree: usize) -> Result<GroupRingComplex> {
    let one_minus_a = GroupRingElement::one_minus_a(n.max(1));
    let nrm = norm(n)?;
    let boundaries = (1..=top_degree)
        .map(|k| GroupRingMatrix::scalar(if k % 2 == 1 { one_minus_a.clone() } else { nrm.clone() }))
        .collect();
    GroupRingComplex::new(n, 1, boundaries)
}

/// Coefficient modules over `Z[Z/n]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoefficientModule {
    /// `Z` with trivial action.
    Integers,
    /// `Z^w`: the generator acts by `-1`.
    TwistedIntegers,
    /// `Z/2` with trivial action.
    Mod2,
    /// `Z[Z/2]` with the generator swapping the basis `1, t`.
    TwistedGroupRingZ2,
}

impl CoefficientModule {
    pub fn rank(&self) -> usize {
        match self {
            CoefficientModule::TwistedGroupRingZ2 => 2,
            _ => 1,
        }
    }

    pub fn modulus(&self) -> Option<BigInt> {
        match self {
            CoefficientModule::Mod2 => Some(BigInt::from(2)),
            _ => None,
        }
    }

    /// Action matrix of the generator `a` of `Z/n`.
    pub fn action(&self, n: usize) -> Result<IntMatrix> {
        let needs_even = matches!(self, CoefficientModule::TwistedIntegers | CoefficientModule::TwistedGroupRingZ2);
        if needs_even && !n.is_multiple_of(2) {
            return Err(GroupRingError::UnsupportedCoefficient(format!("{self:?} over Z/{n} needs an even order")));
        }
        Ok(match self {
            CoefficientModule::Integers | CoefficientModule::Mod2 => IntMatrix::from_rows(&[&[1]]),
            CoefficientModule::TwistedIntegers => IntMatrix::from_rows(&[&[-1]]),
            CoefficientModule::TwistedGroupRingZ2 => IntMatrix::from_rows(&[&[0, 1], &[1, 0]]),
        })
    }

    pub fn as_action(&self, n: usize) -> Result<ModuleAction> {
        Ok(ModuleAction { action: self.action(n)?, modulus: self.modulus() })
    }
}

/// A module given by a free `Z`- or `Z/m`-basis and the action of `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleAction {
    pub action: IntMatrix,
    pub modulus: Option<BigInt>,
}

impl ModuleAction {
    pub fn rank(&self) -> usize {
        self.action.rows()
    }

    /// The same module twisted by the sign character.
    pub fn twisted(&self) -> ModuleAction {
        ModuleAction { action: self.action.scale(&-BigInt::one()), modulus: self.modulus.clone() }
    }

    fn check_order(&self, n: usize) -> Result<()> {
        let mut p = IntMatrix::identity(self.rank());
        for _ in 0..n {
            p = p.mul(&self.action)?;
        }
        let p = match &self.modulus {
            Some(m) => p.reduce_mod(m),
            None => p,
        };
        let id = match &self.modulus {
            Some(m) => IntMatrix::identity(self.rank()).reduce_mod(m),
            None => IntMatrix::identity(self.rank()),
        };
        if p == id {
            Ok(())
        } else {
            Err(GroupRingError::UnsupportedCoefficient(format!("action does not have order dividing {n}")))
        }
    }
}

/// Chain complex of free abelian groups (or free `Z/m`-modules).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntChainComplex {
    pub ranks: Vec<usize>,
    /// `boundaries[k - 1]` is `d_k`.
    pub boundaries: Vec<IntMatrix>,
    pub modulus: Option<BigInt>,
}

/// Cochain complex; `coboundaries[k]` is `δ^k: C^k -> C^{k+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntCochainComplex {
    pub ranks: Vec<usize>,
    pub coboundaries: Vec<IntMatrix>,
    pub modulus: Option<BigInt>,
}

fn subquotient(d_in: &IntMatrix, d_out: &IntMatrix, modulus: &Option<BigInt>) -> Result<Subquotient> {
    Ok(match modulus {
        Some(m) => homology_mod_subquotient(d_in, d_out, m)?,
        None => homology_subquotient(d_in, d_out)?,
    })
}

impl IntChainComplex {
    pub fn top_degree(&self) -> usize {
        self.boundaries.len()
    }

    pub fn homology_subquotient(&self, k: usize) -> Result<Subquotient> {
        let top = self.top_degree();
        if k > top {
            return Err(GroupRingError::DegreeOutOfRange { degree: k, top });
        }
        let d_out = if k == 0 { IntMatrix::zeros(0, self.ranks[0]) } else { self.boundaries[k - 1].clone() };
        let d_in = if k < top { self.boundaries[k].clone() } else { IntMatrix::zeros(self.ranks[k], 0) };
        subquotient(&d_in, &d_out, &self.modulus)
    }

    pub fn homology(&self, k: usize) -> Result<FgAbelianGroup> {
        Ok(self.homology_subquotient(k)?.group().clone())
    }
}

impl IntCochainComplex {
    pub fn top_degree(&self) -> usize {
        self.coboundaries.len()
    }

    pub fn cohomology_subquotient(&self, k: usize) -> Result<Subquotient> {
        let top = self.top_degree();
        if k > top {
            return Err(GroupRingError::DegreeOutOfRange { degree: k, top });
        }
        let d_out = if k < top { self.coboundaries[k].clone() } else { IntMatrix::zeros(0, self.ranks[k]) };
        let d_in = if k == 0 { IntMatrix::zeros(self.ranks[0], 0) } else { self.coboundaries[k - 1].clone() };
        subquotient(&d_in, &d_out, &self.modulus)
    }

    pub fn cohomology(&self, k: usize) -> Result<FgAbelianGroup> {
        Ok(self.cohomology_subquotient(k)?.group().clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientComplexes {
    /// `C ⊗ A`.
    pub homology: IntChainComplex,
    /// `Hom(C, A)`.
    pub cohomology: IntCochainComplex,
}

pub fn coefficients_complex(c: &GroupRingComplex, coeff: CoefficientModule) -> Result<CoefficientComplexes> {
    coefficients_complex_with(c, &coeff.as_action(c.order())?)
}

/// `C ⊗ A` uses blocks `ρ(conj(d_ij))` at `(i, j)`; `Hom(C, A)` uses
/// `ρ(d_ij)` at `(j, i)`.
pub fn coefficients_complex_with(c: &GroupRingComplex, module: &ModuleAction) -> Result<CoefficientComplexes> {
    module.check_order(c.order())?;
    let r = module.rank();
    let ranks: Vec<usize> = c.ranks.iter().map(|k| k * r).collect();
    let mut boundaries = Vec::new();
    let mut coboundaries = Vec::new();
    for d in &c.boundaries {
        boundaries.push(d.expand_with(r, |x| x.conjugate().represent(&module.action))?);
        let mut blocks = Vec::with_capacity(d.cols);
        for j in 0..d.cols {
            blocks.push((0..d.rows).map(|i| d.get(i, j).represent(&module.action)).collect::<Result<Vec<_>>>()?);
        }
        coboundaries.push(if d.rows == 0 || d.cols == 0 {
            IntMatrix::zeros(d.cols * r, d.rows * r)
        } else {
            IntMatrix::from_blocks(&blocks)?
        });
    }
    Ok(CoefficientComplexes {
        homology: IntChainComplex { ranks: ranks.clone(), boundaries, modulus: module.modulus.clone() },
        cohomology: IntCochainComplex { ranks, coboundaries, modulus: module.modulus.clone() },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(n: usize, c: &[i64]) -> GroupRingElement {
        GroupRingElement::from_i64(n, c).unwrap()
    }

    #[test]
    fn norm_examples() {
        assert_eq!(norm(2).unwrap(), el(2, &[1, 1]));
        for n in [2, 4, 6, 8] {
            assert!(GroupRingElement::one_minus_a(n).mul(&norm(n).unwrap()).unwrap().is_zero());
        }
        for k in 1..=3 {
            assert!(norm(2 * k).unwrap().mul(&twisted_norm(2 * k).unwrap()).unwrap().is_zero());
        }
        assert_eq!(twisted_norm(3), Err(GroupRingError::OddOrder(3)));
    }

    #[test]
    fn twisted_norm_factorization() {
        for k in 1..=5 {
            let n = 2 * k;
            let sum: GroupRingElement = (0..k).fold(GroupRingElement::zero(n), |acc, i| {
                acc.add(&GroupRingElement::monomial(n, 2 * i, BigInt::one())).unwrap()
            });
            let product = GroupRingElement::one_minus_a(n).mul(&sum).unwrap();
            assert_eq!(product, twisted_norm(n).unwrap());
        }
    }

    #[test]
    fn regular_representation_examples() {
        assert_eq!(GroupRingElement::one(3).regular_representation(), IntMatrix::identity(3));
        assert_eq!(GroupRingElement::generator(2).regular_representation(), IntMatrix::from_rows(&[&[0, 1], &[1, 0]]));
    }

    #[test]
    fn resolution_shape() {
        let c = standard_resolution(2, 2).unwrap();
        assert_eq!(*c.boundary(1).get(0, 0), el(2, &[1, -1]));
        assert_eq!(*c.boundary(2).get(0, 0), el(2, &[1, 1]));
        for n in 2..=8 {
            assert!(standard_resolution(n, 6).is_ok());
        }
    }

    #[test]
    fn untwisted_cyclic_homology() {
        for n in 2..=8u64 {
            let c = standard_resolution(n as usize, 5).unwrap();
            let h = coefficients_complex(&c, CoefficientModule::Integers).unwrap().homology;
            assert_eq!(h.homology(0).unwrap(), FgAbelianGroup::free(1));
            assert_eq!(h.homology(1).unwrap(), FgAbelianGroup::cyclic(n));
            assert_eq!(h.homology(2).unwrap(), FgAbelianGroup::trivial());
            assert_eq!(h.homology(3).unwrap(), FgAbelianGroup::cyclic(n));
            assert_eq!(h.homology(4).unwrap(), FgAbelianGroup::trivial());
        }
    }

    #[test]
    fn twisted_boundaries() {
        for k in 1..=4 {
            let c = standard_resolution(2 * k, 5).unwrap();
            let h = coefficients_complex(&c, CoefficientModule::TwistedIntegers).unwrap().homology;
            let expect = [2, 0, 2, 0];
            for (i, e) in expect.iter().enumerate() {
                assert_eq!(h.boundaries[i], IntMatrix::from_rows(&[&[*e]]));
            }
            assert_eq!(h.homology(4).unwrap(), FgAbelianGroup::cyclic(2));
        }
    }

    #[test]
    fn unsupported_coefficient() {
        let c = standard_resolution(3, 2).unwrap();
        assert!(matches!(
            coefficients_complex(&c, CoefficientModule::TwistedGroupRingZ2),
            Err(GroupRingError::UnsupportedCoefficient(_))
        ));
    }

    #[test]
    fn cyclic_hom_validation() {
        assert!(CyclicHom::new(2, 4, 2).is_ok());
        assert!(CyclicHom::new(2, 4, 1).is_err());
        assert_eq!(CyclicHom::all(4, 2).len(), 2);
        assert_eq!(CyclicHom::all(2, 4).len(), 2);
    }

    #[test]
    fn display() {
        assert_eq!(el(4, &[1, -1, 0, 2]).to_string(), "1 - a + 2a^3");
        assert_eq!(GroupRingElement::zero(3).to_string(), "0");
        assert_eq!(el(3, &[0, -2]).to_string(), "-2a");
    }
}
