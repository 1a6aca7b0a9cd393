//! `d2` differentials of the James spectral sequence on the 4-line and the
//! realizable images of the fundamental class.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cohomology::{cup, h_twisted, sq2_w, CohomologyError, Mod2Class, Mod2Ring};
use crate::groupring::{coefficients_complex, standard_resolution, CoefficientModule, GroupRingError};
use crate::intalg::{kernel_basis, lattice_basis, solve_linear, FgAbelianGroup, IntAlgError, IntMatrix, Subquotient};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JamesError {
    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),
    #[error("w2 = inf has no Sq^2_(w1,w2); the oriented bordism page applies")]
    NotAlmostSpin,
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    GroupRing(#[from] GroupRingError),
    #[error(transparent)]
    IntAlg(#[from] IntAlgError),
}

pub type Result<T> = std::result::Result<T, JamesError>;

/// Supported fundamental groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupFamily {
    Trivial,
    Cyclic(usize),
    InfiniteCyclic,
    FreeAbelian4,
}

impl fmt::Display for GroupFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupFamily::Trivial => write!(f, "1"),
            GroupFamily::Cyclic(n) => write!(f, "Z/{n}"),
            GroupFamily::InfiniteCyclic => write!(f, "Z"),
            GroupFamily::FreeAbelian4 => write!(f, "Z^4"),
        }
    }
}

/// `w2` up to automorphisms; `Infinity` means not almost spin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum W2 {
    Zero,
    One,
    Infinity,
    E12,
    E12PlusE34,
}

impl W2 {
    pub fn token(&self) -> &'static str {
        match self {
            W2::Zero => "0",
            W2::One => "1",
            W2::Infinity => "inf",
            W2::E12 => "e12",
            W2::E12PlusE34 => "e12+e34",
        }
    }

    pub fn parse(s: &str) -> Option<W2> {
        Some(match s {
            "0" => W2::Zero,
            "1" => W2::One,
            "inf" | "∞" | "infinity" => W2::Infinity,
            "e12" => W2::E12,
            "e12+e34" => W2::E12PlusE34,
            _ => return None,
        })
    }
}

impl fmt::Display for W2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.token())
    }
}

/// Checks that `(family, w1, w2)` is a normal 1-type this crate supports.
pub fn validate_normal_type(family: GroupFamily, w1: bool, w2: W2) -> Result<()> {
    let bad = |msg: String| Err(JamesError::UnsupportedFamily(msg));
    match family {
        GroupFamily::Cyclic(0) => return bad("Z/0 is not a finite cyclic group".into()),
        GroupFamily::Cyclic(n) if w1 && n % 2 != 0 => return bad(format!("w1 != 0 needs an even order, got Z/{n}")),
        GroupFamily::Trivial | GroupFamily::FreeAbelian4 if w1 => {
            return bad(format!("{family} only carries w1 = 0"));
        }
        _ => {}
    }
    match (family, w2) {
        (_, W2::Zero | W2::Infinity) => Ok(()),
        (GroupFamily::Cyclic(n), W2::One) if n % 2 == 0 => Ok(()),
        (GroupFamily::FreeAbelian4, W2::E12 | W2::E12PlusE34) => Ok(()),
        _ => bad(format!("w2 = {w2} is not a class of H^2({family};Z/2)")),
    }
}

/// Dense matrix over `F2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, bits: vec![false; rows * cols] }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<bool>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, &b) in col.iter().enumerate() {
                m.bits[i * m.cols + j] = b;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.cols + j]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.bits[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, other.rows, "F2 matrix shapes");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                out.bits[i * other.cols + j] = (0..self.cols).filter(|&k| self.get(i, k) && other.get(k, j)).count() % 2 == 1;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[bool]) -> Vec<bool> {
        (0..self.rows).map(|i| (0..self.cols).filter(|&j| self.get(i, j) && v[j]).count() % 2 == 1).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|b| !b)
    }

    pub fn rank(&self) -> usize {
        let mut m = self.bits.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| m[r * self.cols + c]) else {
                continue;
            };
            for j in 0..self.cols {
                m.swap(p * self.cols + j, rank * self.cols + j);
            }
            for r in 0..self.rows {
                if r != rank && m[r * self.cols + c] {
                    for j in 0..self.cols {
                        let v = m[rank * self.cols + j];
                        m[r * self.cols + j] ^= v;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.rows
    }

    fn to_int(&self) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| BigInt::from(u8::from(self.get(i, j))))
    }
}

impl fmt::Display for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<&str> = (0..self.cols).map(|j| if self.get(i, j) { "1" } else { "0" }).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Mod-2 cohomology ring of the family, where one is tabulated.
fn ring(family: GroupFamily) -> Option<Mod2Ring> {
    match family {
        GroupFamily::Trivial => Some(Mod2Ring::Cyclic(1)),
        GroupFamily::Cyclic(n) => Some(Mod2Ring::Cyclic(n)),
        GroupFamily::FreeAbelian4 => Some(Mod2Ring::FreeAbelian4),
        GroupFamily::InfiniteCyclic => None,
    }
}

/// `dim H^p(π; Z/2)`.
pub fn mod2_dim(family: GroupFamily, p: u32) -> usize {
    match ring(family) {
        Some(r) => r.dim(p),
        None => usize::from(p <= 1),
    }
}

/// `(w1, w2)` as cohomology classes.
pub fn characteristic_classes(family: GroupFamily, w1: bool, w2: W2) -> Result<Option<(Mod2Class, Mod2Class)>> {
    validate_normal_type(family, w1, w2)?;
    if w2 == W2::Infinity {
        return Err(JamesError::NotAlmostSpin);
    }
    let Some(r) = ring(family) else {
        return Ok(None);
    };
    let w1c = match (w1, family) {
        (true, GroupFamily::Cyclic(n)) => Mod2Class::t(n),
        _ => r.zero(1),
    };
    let w2c = match (w2, family) {
        (W2::One, GroupFamily::Cyclic(n)) => Mod2Class::s(n),
        (W2::E12, _) => Mod2Class::z4(&[1, 2])?,
        (W2::E12PlusE34, _) => Mod2Class::z4(&[1, 2])?.add(&Mod2Class::z4(&[3, 4])?)?,
        _ => r.zero(2),
    };
    Ok(Some((w1c, w2c)))
}

/// Matrix of `Sq^2_{w1,w2}: H^p -> H^{p+2}` in the tabulated bases.
pub fn sq2w_matrix(family: GroupFamily, w1: bool, w2: W2, p: u32) -> Result<F2Matrix> {
    let rows = mod2_dim(family, p + 2);
    let Some((w1c, w2c)) = characteristic_classes(family, w1, w2)? else {
        return Ok(F2Matrix::zeros(rows, mod2_dim(family, p)));
    };
    let r = w1c.ring();
    let columns = r
        .basis(p)
        .iter()
        .map(|x| Ok(r.coordinates(&sq2_w(&w1c, &w2c, x)?)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(F2Matrix::from_columns(rows, &columns))
}

/// `H_4(π; Z^{w1})`.
pub fn fundamental_class_group(family: GroupFamily, w1: bool) -> Result<FgAbelianGroup> {
    validate_normal_type(family, w1, W2::Zero)?;
    Ok(match family {
        GroupFamily::Cyclic(n) => h_twisted(n, w1, 4)?,
        GroupFamily::FreeAbelian4 => FgAbelianGroup::free(1),
        GroupFamily::Trivial | GroupFamily::InfiniteCyclic => FgAbelianGroup::trivial(),
    })
}

/// Reduction `H_4(π; Z^{w1}) -> H_4(π; Z/2)` on canonical generators.
pub fn mod2_reduction(family: GroupFamily, w1: bool) -> Result<F2Matrix> {
    match family {
        GroupFamily::Cyclic(n) => {
            let coeff = if w1 { CoefficientModule::TwistedIntegers } else { CoefficientModule::Integers };
            let resolution = standard_resolution(n, 5)?;
            let integral = coefficients_complex(&resolution, coeff)?.homology.homology_subquotient(4)?;
            let mod2 = coefficients_complex(&resolution, CoefficientModule::Mod2)?.homology.homology_subquotient(4)?;
            let columns = integral
                .generators()
                .iter()
                .map(|g| {
                    let c = mod2.coordinates(g)?.ok_or(IntAlgError::NotInLattice)?;
                    Ok(c.iter().map(|x| x.is_odd()).collect())
                })
                .collect::<Result<Vec<Vec<bool>>>>()?;
            Ok(F2Matrix::from_columns(mod2.group().generator_count(), &columns))
        }
        GroupFamily::FreeAbelian4 => Ok(F2Matrix::from_columns(1, &[vec![true]])),
        GroupFamily::Trivial | GroupFamily::InfiniteCyclic => Ok(F2Matrix::zeros(0, 0)),
    }
}

/// `d2: H_4(π; Z^{w1}) -> H_2(π; Z/2)`: mod-2 reduction followed by the
/// dual of `Sq^2_{w1,w2}` on `H^2`.
pub fn d2_40(family: GroupFamily, w1: bool, w2: W2) -> Result<F2Matrix> {
    let dual = sq2w_matrix(family, w1, w2, 2)?.transpose();
    let reduction = mod2_reduction(family, w1)?;
    if dual.cols() != reduction.rows() {
        return Err(JamesError::UnsupportedFamily(format!("H_4 of {family} does not match its dual")));
    }
    Ok(dual.mul(&reduction))
}

/// `ker(d2: E_{4,0} -> E_{2,1})` as a subgroup of `H_4(π; Z^{w1})`.
pub fn d2_40_kernel(family: GroupFamily, w1: bool, w2: W2) -> Result<Subgroup> {
    let ambient = fundamental_class_group(family, w1)?;
    let d = d2_40(family, w1, w2)?;
    let g = ambient.generator_count();
    let ext = d.to_int().hstack(&IntMatrix::identity(d.rows()).scale(&BigInt::from(2)))?;
    let k = kernel_basis(&ext);
    let generators: Vec<Vec<BigInt>> = (0..k.cols()).map(|j| k.column(j)[..g].to_vec()).collect();
    Subgroup::new(&ambient, generators)
}

/// `d2: H_3(π; Z/2) -> H_1(π; Z/2)`: the dual of `Sq^2_{w1,w2}` on `H^1`.
pub fn d2_31(family: GroupFamily, w1: bool, w2: W2) -> Result<F2Matrix> {
    Ok(sq2w_matrix(family, w1, w2, 1)?.transpose())
}

/// A subgroup of a finitely generated abelian group, given by generators in
/// the canonical coordinates of the ambient group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    ambient: FgAbelianGroup,
    generators: Vec<Vec<BigInt>>,
    group: FgAbelianGroup,
    index: Option<BigInt>,
}

impl Subgroup {
    pub fn new(ambient: &FgAbelianGroup, generators: Vec<Vec<BigInt>>) -> Result<Self> {
        let g = ambient.generator_count();
        let relations = Self::relations(ambient);
        let all = IntMatrix::from_columns(g, &generators)?.hstack(&relations)?;
        let lattice = lattice_basis(&all);
        let group = Subquotient::new(lattice.clone(), &relations)?.group().clone();
        let quotient = Subquotient::new(IntMatrix::identity(g), &all)?.group().clone();
        let index = if quotient.free_rank() == 0 {
            Some(quotient.torsion().iter().fold(BigInt::one(), |acc, d| acc * d))
        } else {
            None
        };
        let generators = (0..lattice.cols())
            .map(|j| ambient.normalize(&lattice.column(j)))
            .filter(|v| v.iter().any(|x| !x.is_zero()))
            .collect();
        Ok(Self { ambient: ambient.clone(), generators, group, index })
    }

    fn relations(ambient: &FgAbelianGroup) -> IntMatrix {
        let g = ambient.generator_count();
        let orders: Vec<BigInt> = (0..g).map(|i| ambient.generator_order(i)).collect();
        IntMatrix::diagonal(g, g, &orders)
    }

    pub fn whole(ambient: &FgAbelianGroup) -> Result<Self> {
        let g = ambient.generator_count();
        Self::new(ambient, (0..g).map(|j| IntMatrix::identity(g).column(j)).collect())
    }

    pub fn zero(ambient: &FgAbelianGroup) -> Result<Self> {
        Self::new(ambient, Vec::new())
    }

    pub fn ambient(&self) -> &FgAbelianGroup {
        &self.ambient
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    /// Isomorphism type of the subgroup.
    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    /// Index in the ambient group, when finite.
    pub fn index(&self) -> Option<&BigInt> {
        self.index.as_ref()
    }

    pub fn is_trivial(&self) -> bool {
        self.group.is_trivial()
    }

    pub fn is_whole(&self) -> bool {
        self.index.as_ref().is_some_and(One::is_one)
    }

    pub fn contains(&self, element: &[BigInt]) -> Result<bool> {
        let g = self.ambient.generator_count();
        if element.len() != g {
            return Err(JamesError::IntAlg(IntAlgError::DimensionMismatch(format!(
                "element with {} coordinates in a group with {g} generators",
                element.len()
            ))));
        }
        let system = IntMatrix::from_columns(g, &self.generators)?.hstack(&Self::relations(&self.ambient))?;
        Ok(solve_linear(&system, element, None)?.is_some())
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        if self.is_whole() {
            return write!(f, "{}", self.ambient);
        }
        if self.ambient == FgAbelianGroup::free(1) {
            if let Some(d) = &self.index {
                return write!(f, "{d}Z");
            }
        }
        write!(f, "subgroup {} of index {}", self.group, self.index.as_ref().map_or("inf".to_string(), ToString::to_string))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Realizability {
    /// Exactly these classes are realized.
    Determined(Subgroup),
    /// The realized classes lie in this subgroup; a `d3` is not excluded.
    UpperBound(Subgroup),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizableSet {
    pub ambient: FgAbelianGroup,
    pub status: Realizability,
    pub reason: &'static str,
}

impl RealizableSet {
    pub fn subgroup(&self) -> &Subgroup {
        match &self.status {
            Realizability::Determined(s) | Realizability::UpperBound(s) => s,
        }
    }

    pub fn is_determined(&self) -> bool {
        matches!(self.status, Realizability::Determined(_))
    }

    /// Whether `c` (coordinates in `ambient`) lies in the set or its bound.
    pub fn admits(&self, c: &[BigInt]) -> Result<bool> {
        self.subgroup().contains(c)
    }
}

/// Which fundamental-class images occur for the normal 1-type.
pub fn realizable_classes(family: GroupFamily, w1: bool, w2: W2) -> Result<RealizableSet> {
    validate_normal_type(family, w1, w2)?;
    let ambient = fundamental_class_group(family, w1)?;
    let done = |status, reason| Ok(RealizableSet { ambient: ambient.clone(), status, reason });
    if w2 == W2::Infinity {
        return done(
            Realizability::Determined(Subgroup::whole(&ambient)?),
            "oriented bordism vanishes in degrees 1..3, so no differential leaves E_{4,0}",
        );
    }
    if matches!(family, GroupFamily::Cyclic(n) if w1 && w2 == W2::One && n % 2 == 0) {
        return done(
            Realizability::Determined(Subgroup::whole(&ambient)?),
            "non-orientable cyclic with w2 = 1: a rational homology ball with nonzero class exists",
        );
    }
    let kernel = d2_40_kernel(family, w1, w2)?;
    if kernel.is_trivial() {
        return done(Realizability::Determined(kernel), "d2 on E_{4,0} is injective");
    }
    if d2_31(family, w1, w2)?.is_surjective() {
        return done(
            Realizability::Determined(kernel),
            "d2 into E_{1,2} is onto, so E3_{1,2} = 0 and the kernel of d2 survives",
        );
    }
    done(Realizability::UpperBound(kernel), "a d3 out of ker d2 is not excluded")
}

/// Whether some manifold with this normal 1-type has fundamental-class
/// image `c`; `None` when only an upper bound is known and `c` lies in it.
pub fn realizes(set: &RealizableSet, c: &[BigInt]) -> Result<Option<bool>> {
    let inside = set.admits(c)?;
    Ok(match (&set.status, inside) {
        (Realizability::Determined(_), x) => Some(x),
        (Realizability::UpperBound(_), false) => Some(false),
        (Realizability::UpperBound(_), true) => None,
    })
}

/// Whether `t ∪ t` is the nonzero class of `H^2(Z/n; Z/2)`.
pub fn w1_squared_nonzero(n: usize) -> Result<bool> {
    Ok(!cup(&Mod2Class::t(n), &Mod2Class::t(n))?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> Vec<BigInt> {
        vec![BigInt::from(v)]
    }

    #[test]
    fn z4_kernel_is_2z() {
        let set = realizable_classes(GroupFamily::FreeAbelian4, false, W2::E12PlusE34).unwrap();
        assert!(set.is_determined());
        assert_eq!(set.subgroup().to_string(), "2Z");
        assert!(set.admits(&b(4)).unwrap());
        assert!(!set.admits(&b(3)).unwrap());
        assert!(d2_31(GroupFamily::FreeAbelian4, false, W2::E12PlusE34).unwrap().is_surjective());
    }

    #[test]
    fn z4_upper_bounds() {
        let set = realizable_classes(GroupFamily::FreeAbelian4, false, W2::Zero).unwrap();
        assert!(!set.is_determined());
        assert!(set.subgroup().is_whole());
        assert!(d2_31(GroupFamily::FreeAbelian4, false, W2::Zero).unwrap().is_zero());
        let set = realizable_classes(GroupFamily::FreeAbelian4, false, W2::E12).unwrap();
        assert!(!set.is_determined());
        assert_eq!(set.subgroup().to_string(), "2Z");
    }

    #[test]
    fn cyclic_differentials() {
        for k in 1..=4 {
            let n = 2 * k;
            let d = d2_40(GroupFamily::Cyclic(n), true, W2::Zero).unwrap();
            assert!(!d.is_zero());
            let set = realizable_classes(GroupFamily::Cyclic(n), true, W2::Zero).unwrap();
            assert!(set.is_determined() && set.subgroup().is_trivial());
            assert!(d2_40(GroupFamily::Cyclic(n), true, W2::One).unwrap().is_zero());
            let set = realizable_classes(GroupFamily::Cyclic(n), true, W2::One).unwrap();
            assert!(set.is_determined() && set.subgroup().is_whole());
        }
        for n in [4, 8, 12] {
            assert!(d2_31(GroupFamily::Cyclic(n), true, W2::One).unwrap().is_surjective());
        }
    }

    #[test]
    fn infinite_w2_is_everything() {
        let set = realizable_classes(GroupFamily::FreeAbelian4, false, W2::Infinity).unwrap();
        assert!(set.is_determined() && set.subgroup().is_whole());
        assert_eq!(d2_40(GroupFamily::Cyclic(2), true, W2::Infinity), Err(JamesError::NotAlmostSpin));
    }

    #[test]
    fn invalid_types() {
        assert!(validate_normal_type(GroupFamily::Cyclic(3), true, W2::Zero).is_err());
        assert!(validate_normal_type(GroupFamily::Cyclic(3), false, W2::One).is_err());
        assert!(validate_normal_type(GroupFamily::FreeAbelian4, true, W2::Zero).is_err());
        assert!(validate_normal_type(GroupFamily::InfiniteCyclic, false, W2::One).is_err());
        assert!(validate_normal_type(GroupFamily::Cyclic(4), false, W2::E12).is_err());
    }

    #[test]
    fn f2_rank() {
        let m = F2Matrix::from_columns(2, &[vec![true, true], vec![true, true], vec![false, true]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.transpose().rank(), 2);
    }
}
