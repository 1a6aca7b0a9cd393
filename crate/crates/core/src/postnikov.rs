//! Chain-level Postnikov machinery for cyclic groups: the model complex
//! `X`, lifting problems, chain-map existence and the shift homomorphism.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::groupring::{
    coefficients_complex, coefficients_complex_with, norm, standard_resolution, twisted_norm, CoefficientModule,
    CyclicHom, GroupRingComplex, GroupRingElement, GroupRingError, GroupRingMatrix, HomError, IntChainComplex,
    ModuleAction,
};
use crate::intalg::{kernel_basis, solve_linear, FgAbelianGroup, IntAlgError, IntMatrix, Subquotient};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PostnikovError {
    #[error("the model complex needs k >= 1")]
    ZeroK,
    #[error("a nontrivial twist over Z/{0} needs an even order")]
    InvalidTwist(usize),
    #[error("unsupported coefficients: {0}")]
    UnsupportedCoefficient(String),
    #[error("invalid class: {0}")]
    InvalidClass(String),
    #[error("complexes do not fit: {0}")]
    Shape(String),
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    GroupRing(#[from] GroupRingError),
    #[error(transparent)]
    IntAlg(#[from] IntAlgError),
}

pub type Result<T> = std::result::Result<T, PostnikovError>;

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

/// `Z[Z/2k] -N_w-> Z[Z/2k] -N-> Z[Z/2k] -(1-a)-> Z[Z/2k]`.
pub fn model_complex_x(k: usize) -> Result<GroupRingComplex> {
    if k == 0 {
        return Err(PostnikovError::ZeroK);
    }
    let n = 2 * k;
    let boundaries = vec![
        GroupRingMatrix::scalar(GroupRingElement::one_minus_a(n)),
        GroupRingMatrix::scalar(norm(n)?),
        GroupRingMatrix::scalar(twisted_norm(n)?),
    ];
    Ok(GroupRingComplex::new(n, 1, boundaries)?)
}

/// The model complex for `π = Z/2^exp`.
pub fn model_complex_for_exponent(exp: u32) -> Result<GroupRingComplex> {
    if exp == 0 {
        return Err(PostnikovError::ZeroK);
    }
    model_complex_x(1usize << (exp - 1))
}

/// `H^degree(Hom(X, A))` for `X` the model over `Z[Z/2^exp]`.
pub fn model_cohomology(exp: u32, coeff: CoefficientModule, degree: usize) -> Result<FgAbelianGroup> {
    let x = model_complex_for_exponent(exp)?;
    let cx = coefficients_complex(&x, coeff).map_err(unsupported)?;
    Ok(cx.cohomology.cohomology(degree)?)
}

fn unsupported(e: GroupRingError) -> PostnikovError {
    match e {
        GroupRingError::UnsupportedCoefficient(s) => PostnikovError::UnsupportedCoefficient(s),
        other => other.into(),
    }
}

/// Coefficient surjections onto `Z/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reduction {
    /// `Z/2 -> Z/2`.
    Identity,
    /// `Z -> Z/2`.
    Integers,
    /// `Z[Z/2]_w -> Z/2`, `x + y t ↦ x + y`.
    TwistedGroupRing,
}

impl Reduction {
    pub fn source(&self) -> CoefficientModule {
        match self {
            Reduction::Identity => CoefficientModule::Mod2,
            Reduction::Integers => CoefficientModule::Integers,
            Reduction::TwistedGroupRing => CoefficientModule::TwistedGroupRingZ2,
        }
    }

    fn matrix(&self) -> IntMatrix {
        match self {
            Reduction::TwistedGroupRing => IntMatrix::from_rows(&[&[1, 1]]),
            _ => IntMatrix::from_rows(&[&[1]]),
        }
    }
}

/// Whether the class with the given coordinates in `H^2(X; Z/2)` lifts
/// along `along` (X the model over `Z[Z/2^exp]`).
pub fn lift_exists(exp: u32, class: &[BigInt], along: Reduction) -> Result<bool> {
    let x = model_complex_for_exponent(exp)?;
    let target = coefficients_complex(&x, CoefficientModule::Mod2)?.cohomology;
    let h2 = target.cohomology_subquotient(2)?;
    if class.len() != h2.group().generator_count() {
        return Err(PostnikovError::InvalidClass(format!(
            "expected {} coordinates in H^2(X; Z/2) = {}",
            h2.group().generator_count(),
            h2.group()
        )));
    }
    let rep = h2.representative(class)?;
    let source = coefficients_complex(&x, along.source())?.cohomology;
    // block-diagonal reduction C^2(X; A) -> C^2(X; Z/2)
    let r = along.matrix();
    let rank2 = x.rank(2);
    let red = IntMatrix::from_fn(rank2, rank2 * r.cols(), |i, j| {
        if j / r.cols() == i {
            r.get(0, j % r.cols()).clone()
        } else {
            BigInt::zero()
        }
    });
    // unknowns (z, y, t): δ_A z = 0 and red z - δ y - 2 t = rep
    let delta2_a = &source.coboundaries[2];
    let delta1 = &target.coboundaries[1];
    let nz = delta2_a.cols();
    let ny = delta1.cols();
    let top = delta2_a
        .hstack(&IntMatrix::zeros(delta2_a.rows(), ny))?
        .hstack(&IntMatrix::zeros(delta2_a.rows(), rank2))?;
    let bottom = red.hstack(&delta1.scale(&big(-1)))?.hstack(&IntMatrix::identity(rank2).scale(&big(-2)))?;
    let system = top.vstack(&bottom)?;
    let mut rhs = vec![BigInt::zero(); delta2_a.rows()];
    rhs.extend(rep);
    debug_assert_eq!(system.cols(), nz + ny + rank2);
    Ok(solve_linear(&system, &rhs, None)?.is_some())
}

/// `φ`-linear maps `h_k: C_k -> D_k` in degrees 2 and (when both
/// complexes reach it) 3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMapWitness {
    pub h2: GroupRingMatrix,
    pub h3: Option<GroupRingMatrix>,
}

fn flatten(m: &GroupRingMatrix) -> Vec<BigInt> {
    m.entries().iter().flat_map(|e| e.coeffs().to_vec()).collect()
}

fn unflatten(n: usize, rows: usize, cols: usize, v: &[BigInt]) -> Result<GroupRingMatrix> {
    let entries =
        v.chunks(n).map(|c| GroupRingElement::new(n, c.to_vec())).collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(GroupRingMatrix::new(n, rows, cols, entries)?)
}

/// `h ↦ d·h` on flattened `s × t` matrices.
fn left_operator(d: &GroupRingMatrix, t: usize) -> IntMatrix {
    let n = d.order();
    let (r, s) = (d.rows(), d.cols());
    let mut out = IntMatrix::zeros(r * t * n, s * t * n);
    for i in 0..r {
        for l in 0..s {
            let block = d.get(i, l).regular_representation();
            for j in 0..t {
                for p in 0..n {
                    for q in 0..n {
                        out.set((i * t + j) * n + p, (l * t + j) * n + q, block.get(p, q).clone());
                    }
                }
            }
        }
    }
    out
}

/// `h ↦ h·e` on flattened `r × s` matrices.
fn right_operator(e: &GroupRingMatrix, r: usize) -> IntMatrix {
    let n = e.order();
    let (s, t) = (e.rows(), e.cols());
    let mut out = IntMatrix::zeros(r * t * n, r * s * n);
    for i in 0..r {
        for j in 0..t {
            for l in 0..s {
                let block = e.get(l, j).regular_representation();
                for p in 0..n {
                    for q in 0..n {
                        out.set((i * t + j) * n + p, (i * s + l) * n + q, block.get(p, q).clone());
                    }
                }
            }
        }
    }
    out
}

fn check_hom(c: &GroupRingComplex, d: &GroupRingComplex, phi: &CyclicHom) -> Result<()> {
    if phi.source_order() != c.order() || phi.target_order() != d.order() {
        return Err(PostnikovError::Shape(format!(
            "φ: Z/{} -> Z/{} does not match complexes over Z/{} and Z/{}",
            phi.source_order(),
            phi.target_order(),
            c.order(),
            d.order()
        )));
    }
    Ok(())
}

/// Solves `d_2^D h_2 = h_1 φ(d_2^C)` (and `d_3^D h_3 = h_2 φ(d_3^C)` when
/// both complexes have degree 3) for `φ`-linear `h_2`, `h_3`.
pub fn chain_map_exists(
    c: &GroupRingComplex,
    d: &GroupRingComplex,
    phi: &CyclicHom,
    h1: &GroupRingMatrix,
) -> Result<Option<ChainMapWitness>> {
    check_hom(c, d, phi)?;
    if c.top_degree() < 2 || d.top_degree() < 2 {
        return Err(PostnikovError::Shape("both complexes need degree 2".into()));
    }
    if h1.order() != d.order() || h1.rows() != d.rank(1) || h1.cols() != c.rank(1) {
        return Err(PostnikovError::Shape("h1 must be a rank(D_1) x rank(C_1) matrix over the target".into()));
    }
    let n = d.order();
    let (rd2, rc2) = (d.rank(2), c.rank(2));
    let rhs2 = flatten(&h1.mul(&c.boundary(2).map_along(phi)?)?);
    let eq2 = left_operator(d.boundary(2), rc2);
    let with_h3 = c.top_degree() >= 3 && d.top_degree() >= 3;
    let (system, rhs) = if with_h3 {
        let (rd3, rc3) = (d.rank(3), c.rank(3));
        let e3 = c.boundary(3).map_along(phi)?;
        let eq3_h3 = left_operator(d.boundary(3), rc3);
        let eq3_h2 = right_operator(&e3, rd2).scale(&big(-1));
        let top = eq2.hstack(&IntMatrix::zeros(eq2.rows(), rd3 * rc3 * n))?;
        let bottom = eq3_h2.hstack(&eq3_h3)?;
        let mut rhs = rhs2;
        rhs.extend(std::iter::repeat_n(BigInt::zero(), bottom.rows()));
        (top.vstack(&bottom)?, rhs)
    } else {
        (eq2, rhs2)
    };
    let Some(sol) = solve_linear(&system, &rhs, None)? else {
        return Ok(None);
    };
    let split = rd2 * rc2 * n;
    let h2 = unflatten(n, rd2, rc2, &sol[..split])?;
    let h3 = if with_h3 { Some(unflatten(n, d.rank(3), c.rank(3), &sol[split..])?) } else { None };
    let witness = ChainMapWitness { h2, h3 };
    let mut maps = vec![h1.clone(), witness.h2.clone()];
    maps.extend(witness.h3.clone());
    debug_assert!(verify_chain_map_from(c, d, phi, 1, &maps)?);
    Ok(Some(witness))
}

/// Checks `d_k^D h_k = h_{k-1} φ(d_k^C)` for consecutive `maps = [h_0, h_1, ...]`.
pub fn verify_chain_map(c: &GroupRingComplex, d: &GroupRingComplex, phi: &CyclicHom, maps: &[GroupRingMatrix]) -> Result<bool> {
    verify_chain_map_from(c, d, phi, 0, maps)
}

fn verify_chain_map_from(
    c: &GroupRingComplex,
    d: &GroupRingComplex,
    phi: &CyclicHom,
    start: usize,
    maps: &[GroupRingMatrix],
) -> Result<bool> {
    check_hom(c, d, phi)?;
    for (i, pair) in maps.windows(2).enumerate() {
        let k = start + i + 1;
        if k > c.top_degree() || k > d.top_degree() {
            return Err(PostnikovError::Shape(format!("no boundary in degree {k}")));
        }
        let lhs = d.boundary(k).mul(&pair[1]).map_err(|_| PostnikovError::Shape(format!("h_{k} has the wrong shape")))?;
        let rhs = pair[0].mul(&c.boundary(k).map_along(phi)?)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `h_1 = 1 + a + ... + a^{m-1}` for `φ(a) = a^m`: the degree-1 part of
/// any chain map over `φ` with `h_0 = 1` up to `ker(1 - a)`.
pub fn forced_c1_map(phi: &CyclicHom) -> GroupRingElement {
    let n = phi.target_order();
    let m = phi.multiplier();
    (0..m).fold(GroupRingElement::zero(n), |acc, i| {
        acc.add(&GroupRingElement::monomial(n, i % n, BigInt::one())).expect("same group")
    })
}

/// The submodule on which `f` must restrict to the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Restriction {
    /// `ker N ⊂ Z[Z/2k]`, with `f` landing in `ker N`.
    KernelOfNorm,
    /// All of `Z[Z/2k]`.
    Full,
}

/// True iff there is no module map `f: Z[Z/2k] -> ker N` restricting to
/// the identity on `ker N`.
pub fn factorization_obstruction(k: usize) -> Result<bool> {
    factorization_obstruction_for(k, Restriction::KernelOfNorm)
}

pub fn factorization_obstruction_for(k: usize, restriction: Restriction) -> Result<bool> {
    if k == 0 {
        return Err(PostnikovError::ZeroK);
    }
    let n = 2 * k;
    let nrm = norm(n)?.regular_representation();
    // f is determined by y = f(1); f(b) = b·y
    let (basis, mut rows, mut rhs) = match restriction {
        Restriction::KernelOfNorm => (kernel_basis(&nrm), vec![nrm.clone()], vec![BigInt::zero(); n]),
        Restriction::Full => (IntMatrix::identity(n), Vec::new(), Vec::new()),
    };
    for j in 0..basis.cols() {
        let b = GroupRingElement::new(n, basis.column(j))?;
        rows.push(b.regular_representation());
        rhs.extend(basis.column(j));
    }
    let mut system = rows[0].clone();
    for r in &rows[1..] {
        system = system.vstack(r)?;
    }
    Ok(solve_linear(&system, &rhs, None)?.is_none())
}

/// A short exact sequence `0 -> M' -ι-> M -π-> M'' -> 0` of `Z[Z/n]`-lattices.
#[derive(Clone, Debug)]
struct Extension {
    sub: IntChainComplex,
    mid: IntChainComplex,
    quotient: IntChainComplex,
    iota: IntMatrix,
    pi: IntMatrix,
}

fn action_on_sublattice(basis: &IntMatrix, action: &IntMatrix) -> Result<IntMatrix> {
    let image = action.mul(basis)?;
    let columns = (0..basis.cols())
        .map(|j| solve_linear(basis, &image.column(j), None)?.ok_or(IntAlgError::NotInLattice))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(IntMatrix::from_columns(basis.cols(), &columns)?)
}

fn coordinates_in(basis: &IntMatrix, map: &IntMatrix) -> Result<IntMatrix> {
    let columns = (0..map.cols())
        .map(|j| solve_linear(basis, &map.column(j), None)?.ok_or(IntAlgError::NotInLattice))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(IntMatrix::from_columns(basis.cols(), &columns)?)
}

/// The three connecting homomorphisms
/// `H_4(Z^w) -> H_3(K_0^w) -> H_2(K_1^w) -> H_1(A^w)` cut out of
/// `0 -> A -> C_2 -> C_1 -> C_0 -> Z -> 0`.
#[derive(Clone, Debug)]
pub struct ShiftMap {
    n: usize,
    steps: Vec<Extension>,
    domain: Subquotient,
    codomain: Subquotient,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftValue {
    pub domain: FgAbelianGroup,
    pub codomain: FgAbelianGroup,
    pub value: Vec<BigInt>,
}

impl ShiftMap {
    pub fn new(n: usize, w: bool) -> Result<Self> {
        if n == 0 {
            return Err(GroupRingError::ZeroOrder.into());
        }
        if w && !n.is_multiple_of(2) {
            return Err(PostnikovError::InvalidTwist(n));
        }
        let res = standard_resolution(n, 5)?;
        let gen = GroupRingElement::generator(n).regular_representation();
        let d1 = GroupRingElement::one_minus_a(n).regular_representation();
        let d2 = norm(n)?.regular_representation();
        let eps = IntMatrix::from_fn(1, n, |_, _| BigInt::one());
        let k0 = kernel_basis(&eps);
        let k1 = kernel_basis(&d1);
        let a = kernel_basis(&d2);
        let complex = |action: IntMatrix| -> Result<IntChainComplex> {
            let module = ModuleAction { action, modulus: None };
            let module = if w { module.twisted() } else { module };
            Ok(coefficients_complex_with(&res, &module)?.homology)
        };
        let trivial = IntMatrix::identity(1);
        let on_k0 = action_on_sublattice(&k0, &gen)?;
        let on_k1 = action_on_sublattice(&k1, &gen)?;
        let on_a = action_on_sublattice(&a, &gen)?;
        let steps = vec![
            Extension {
                sub: complex(on_k0.clone())?,
                mid: complex(gen.clone())?,
                quotient: complex(trivial)?,
                iota: k0.clone(),
                pi: eps,
            },
            Extension {
                sub: complex(on_k1.clone())?,
                mid: complex(gen.clone())?,
                quotient: complex(on_k0)?,
                iota: k1.clone(),
                pi: coordinates_in(&k0, &d1)?,
            },
            Extension {
                sub: complex(on_a)?,
                mid: complex(gen)?,
                quotient: complex(on_k1)?,
                iota: a,
                pi: coordinates_in(&k1, &d2)?,
            },
        ];
        let domain = steps[0].quotient.homology_subquotient(4)?;
        let codomain = steps[2].sub.homology_subquotient(1)?;
        Ok(Self { n, steps, domain, codomain })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn domain(&self) -> &FgAbelianGroup {
        self.domain.group()
    }

    pub fn codomain(&self) -> &FgAbelianGroup {
        self.codomain.group()
    }

    /// Applies the shift with canonical chain-level choices.
    pub fn apply(&self, c: &[BigInt]) -> Result<ShiftValue> {
        self.apply_inner(c, None)
    }

    /// Applies the shift, perturbing every representative and preimage by
    /// random boundaries and kernel elements drawn from `seed`.
    pub fn apply_with_seed(&self, c: &[BigInt], seed: u64) -> Result<ShiftValue> {
        self.apply_inner(c, Some(ChaCha8Rng::seed_from_u64(seed)))
    }

    fn apply_inner(&self, c: &[BigInt], mut rng: Option<ChaCha8Rng>) -> Result<ShiftValue> {
        if c.len() != self.domain().generator_count() {
            return Err(PostnikovError::InvalidClass(format!(
                "expected {} coordinates in H_4 = {}",
                self.domain().generator_count(),
                self.domain()
            )));
        }
        let mut z = self.domain.representative(c)?;
        let mut degree = 4;
        for step in &self.steps {
            if let Some(rng) = rng.as_mut() {
                z = perturb_by_image(&z, &step.quotient.boundaries[degree], rng)?;
            }
            z = connecting(step, degree, &z, rng.as_mut())?;
            degree -= 1;
        }
        let value = self.codomain.coordinates(&z)?.ok_or_else(|| {
            PostnikovError::InvalidClass("connecting homomorphism left the cycles".into())
        })?;
        Ok(ShiftValue { domain: self.domain().clone(), codomain: self.codomain().clone(), value })
    }
}

fn random_vector(len: usize, rng: &mut ChaCha8Rng) -> Vec<BigInt> {
    (0..len).map(|_| BigInt::from(rng.gen_range(-3i64..=3))).collect()
}

fn perturb_by_image(v: &[BigInt], map: &IntMatrix, rng: &mut ChaCha8Rng) -> Result<Vec<BigInt>> {
    let shift = map.mul_vec(&random_vector(map.cols(), rng))?;
    Ok(v.iter().zip(shift).map(|(a, b)| a + b).collect())
}

/// Snake lemma: lift `z ∈ P_k ⊗ M''` to `P_k ⊗ M`, take the boundary and
/// pull it back to `P_{k-1} ⊗ M'`.
fn connecting(step: &Extension, k: usize, z: &[BigInt], rng: Option<&mut ChaCha8Rng>) -> Result<Vec<BigInt>> {
    let pi = block_diagonal(&step.pi, step.mid.ranks[k] / step.pi.cols());
    let mut lift = solve_linear(&pi, z, None)?.ok_or(IntAlgError::NotInLattice)?;
    if let Some(rng) = rng {
        lift = perturb_by_image(&lift, &kernel_basis(&pi), rng)?;
    }
    let boundary = step.mid.boundaries[k - 1].mul_vec(&lift)?;
    let iota = block_diagonal(&step.iota, step.mid.ranks[k - 1] / step.iota.rows());
    Ok(solve_linear(&iota, &boundary, None)?.ok_or(IntAlgError::NotInLattice)?)
}

fn block_diagonal(block: &IntMatrix, copies: usize) -> IntMatrix {
    let (r, c) = (block.rows(), block.cols());
    IntMatrix::from_fn(r * copies, c * copies, |i, j| {
        if i / r == j / c {
            block.get(i % r, j % c).clone()
        } else {
            BigInt::zero()
        }
    })
}

/// `shift: H_4(Z/n; Z^w) -> H_1(Z/n; (ker d_2)^w)`.
pub fn shift(n: usize, w: bool, c: &[BigInt]) -> Result<ShiftValue> {
    ShiftMap::new(n, w)?.apply(c)
}

pub fn shift_with_seed(n: usize, w: bool, c: &[BigInt], seed: u64) -> Result<ShiftValue> {
    ShiftMap::new(n, w)?.apply_with_seed(c, seed)
}
