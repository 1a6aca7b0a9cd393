//! Exact integer linear algebra.
//!
//! Everything downstream (group homology, lifting problems, chain-map
//! searches) reduces to three primitives over `Z` or `Z/m`: Smith normal form,
//! subquotients of lattices, and solving linear systems. Entries are
//! [`BigInt`]; no operation here can overflow.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntAlgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("boundary maps do not compose to zero")]
    NotAComplex,
    #[error("vector does not lie in the lattice")]
    NotInLattice,
}

pub type Result<T> = std::result::Result<T, IntAlgError>;

fn mismatch(msg: impl Into<String>) -> IntAlgError {
    IntAlgError::DimensionMismatch(msg.into())
}

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(mismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { BigInt::one() } else { BigInt::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self { rows, cols, entries }
    }

    /// Builds a matrix from `i64` rows. Panics on ragged input.
    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| BigInt::from(rows[i][j]))
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        Self::new(rows, cols, entries.iter().map(|&e| BigInt::from(e)).collect())
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Result<Self> {
        if let Some(bad) = columns.iter().find(|c| c.len() != rows) {
            return Err(mismatch(format!("column of length {} in {rows}-row matrix", bad.len())));
        }
        Ok(Self::from_fn(rows, columns.len(), |i, j| columns[j][i].clone()))
    }

    pub fn diagonal(rows: usize, cols: usize, diag: &[BigInt]) -> Self {
        Self::from_fn(rows, cols, |i, j| {
            if i == j && i < diag.len() {
                diag[i].clone()
            } else {
                BigInt::zero()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(mismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(mismatch(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.entries[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &IntMatrix) -> Result<IntMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &IntMatrix, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Result<IntMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(mismatch("shapes differ"));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect();
        Ok(IntMatrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * k).collect(),
        }
    }

    /// Entries reduced into `[0, m)`.
    pub fn reduce_mod(&self, m: &BigInt) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.mod_floor(m)).collect(),
        }
    }

    pub fn hstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows {
            return Err(mismatch("hstack with different row counts"));
        }
        Ok(IntMatrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        }))
    }

    pub fn vstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.cols {
            return Err(mismatch("vstack with different column counts"));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(IntMatrix { rows: self.rows + other.rows, cols: self.cols, entries })
    }

    /// Assembles a block matrix. `blocks[i][j]` must share row counts along
    /// block-rows and column counts along block-columns.
    pub fn from_blocks(blocks: &[Vec<IntMatrix>]) -> Result<IntMatrix> {
        let Some(first) = blocks.first() else {
            return Ok(IntMatrix::zeros(0, 0));
        };
        let col_widths: Vec<usize> = first.iter().map(IntMatrix::cols).collect();
        let mut out: Option<IntMatrix> = None;
        for block_row in blocks {
            if block_row.len() != col_widths.len() {
                return Err(mismatch("ragged block rows"));
            }
            let height = block_row.first().map_or(0, IntMatrix::rows);
            let mut strip = IntMatrix::zeros(height, 0);
            for (b, &w) in block_row.iter().zip(&col_widths) {
                if b.rows != height || b.cols != w {
                    return Err(mismatch("inconsistent block shapes"));
                }
                strip = strip.hstack(b)?;
            }
            out = Some(match out {
                None => strip,
                Some(acc) => acc.vstack(&strip)?,
            });
        }
        Ok(out.unwrap_or_else(|| IntMatrix::zeros(0, 0)))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(mismatch("determinant of a non-square matrix"));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut m = self.entries.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k * n + k].is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !m[i * n + k].is_zero()) else {
                    return Ok(BigInt::zero());
                };
                for j in 0..n {
                    m.swap(k * n + j, swap * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[i * n + j] * &m[k * n + k] - &m[i * n + k] * &m[k * n + j]) / &prev;
                    m[i * n + j] = v;
                }
            }
            prev = m[k * n + k].clone();
        }
        Ok(sign * &m[n * n - 1])
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += c * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, c: &BigInt) {
        for j in 0..self.cols {
            let v = &self.entries[src * self.cols + j] * c;
            self.entries[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += c * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, c: &BigInt) {
        for i in 0..self.rows {
            let v = &self.entries[i * self.cols + src] * c;
            self.entries[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self.entries[r * self.cols + j];
            self.entries[r * self.cols + j] = v;
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let v = -&self.entries[i * self.cols + c];
            self.entries[i * self.cols + c] = v;
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}", self.rows, self.cols)?;
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Smith normal form `U·A·V = diag(d) ⊕ 0`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Nonzero invariant factors, positive, each dividing the next.
    pub diagonal: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
    /// Inverse of `u`, tracked alongside it.
    pub u_inv: IntMatrix,
    pub rows: usize,
    pub cols: usize,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal_matrix(&self) -> IntMatrix {
        IntMatrix::diagonal(self.rows, self.cols, &self.diagonal)
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (rows, cols) = (a.rows, a.cols);
    let mut m = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut u_inv = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut diagonal = Vec::new();

    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let e = m.get(i, j);
                    if !e.is_zero() && pivot.is_none_or(|(pi, pj)| e.abs() < m.get(pi, pj).abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return SmithForm { diagonal, u, v, u_inv, rows, cols };
            };
            m.swap_rows(t, pi);
            u.swap_rows(t, pi);
            u_inv.swap_cols(t, pi);
            m.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let p = m.get(t, t).clone();
            let mut dirty = false;
            for i in t + 1..rows {
                if m.get(i, t).is_zero() {
                    continue;
                }
                let q = -(m.get(i, t) / &p);
                m.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                u_inv.add_col_multiple(t, i, &-&q);
                dirty |= !m.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                if m.get(t, j).is_zero() {
                    continue;
                }
                let q = -(m.get(t, j) / &p);
                m.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                dirty |= !m.get(t, j).is_zero();
            }
            if dirty {
                continue;
            }
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !m.get(i, j).is_multiple_of(&p)));
            if let Some(i) = offender {
                let one = BigInt::one();
                m.add_row_multiple(t, i, &one);
                u.add_row_multiple(t, i, &one);
                u_inv.add_col_multiple(i, t, &-one);
                continue;
            }
            break;
        }
        if m.get(t, t).is_negative() {
            m.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
        diagonal.push(m.get(t, t).clone());
    }
    SmithForm { diagonal, u, v, u_inv, rows, cols }
}

pub fn rank(a: &IntMatrix) -> usize {
    smith_normal_form(a).rank()
}

/// Columns form a Z-basis of `{x : A x = 0}`.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let r = snf.rank();
    IntMatrix::from_fn(a.cols, a.cols - r, |i, j| snf.v.get(i, r + j).clone())
}

/// Z-basis of the lattice spanned by the columns of `generators`.
pub fn lattice_basis(generators: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(generators);
    IntMatrix::from_fn(generators.rows, snf.rank(), |i, j| snf.u_inv.get(i, j) * &snf.diagonal[j])
}

/// Solves `A x = b` over `Z`, or over `Z/m` when `modulus` is given.
/// Solutions mod `m` are reduced into `[0, m)`.
pub fn solve_linear(a: &IntMatrix, b: &[BigInt], modulus: Option<&BigInt>) -> Result<Option<Vec<BigInt>>> {
    if b.len() != a.rows {
        return Err(mismatch(format!("right-hand side of length {} for {} rows", b.len(), a.rows)));
    }
    if let Some(m) = modulus {
        if !m.is_positive() {
            return Err(mismatch("modulus must be positive"));
        }
        let extended = a.hstack(&IntMatrix::identity(a.rows).scale(m))?;
        return Ok(solve_over_z(&extended, b)?.map(|x| x[..a.cols].iter().map(|e| e.mod_floor(m)).collect()));
    }
    solve_over_z(a, b)
}

fn solve_over_z(a: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    let snf = smith_normal_form(a);
    let c = snf.u.mul_vec(b)?;
    let r = snf.rank();
    let mut y = vec![BigInt::zero(); a.cols];
    for (i, ci) in c.iter().enumerate() {
        if i < r {
            let (q, rem) = ci.div_rem(&snf.diagonal[i]);
            if !rem.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        } else if !ci.is_zero() {
            return Ok(None);
        }
    }
    let x = snf.v.mul_vec(&y)?;
    debug_assert_eq!(a.mul_vec(&x)?, b);
    Ok(Some(x))
}

/// A finitely generated abelian group `Z^r ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k` with
/// `2 <= d_1 | d_2 | ... | d_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FgAbelianGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FgAbelianGroup {
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Option<Self> {
        let chain_ok = torsion.windows(2).all(|w| w[1].is_multiple_of(&w[0]));
        if torsion.iter().all(|d| *d >= BigInt::from(2)) && chain_ok {
            Some(Self { free_rank, torsion })
        } else {
            None
        }
    }

    pub fn trivial() -> Self {
        Self { free_rank: 0, torsion: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        Self { free_rank: rank, torsion: Vec::new() }
    }

    pub fn cyclic(order: u64) -> Self {
        match order {
            0 => Self::free(1),
            1 => Self::trivial(),
            d => Self { free_rank: 0, torsion: vec![BigInt::from(d)] },
        }
    }

    /// Canonical form of `⊕ Z/c_i` for arbitrary non-negative `c_i`
    /// (`0` meaning `Z`).
    pub fn from_cyclic_factors(factors: &[BigInt]) -> Self {
        let n = factors.len();
        let snf = smith_normal_form(&IntMatrix::diagonal(n, n, factors));
        let torsion: Vec<BigInt> = snf.diagonal.iter().filter(|d| !d.is_one()).cloned().collect();
        Self { free_rank: n - snf.rank(), torsion }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Number of canonical generators (torsion first, then free).
    pub fn generator_count(&self) -> usize {
        self.torsion.len() + self.free_rank
    }

    /// Order of the `i`-th canonical generator, `0` for free ones.
    pub fn generator_order(&self, i: usize) -> BigInt {
        self.torsion.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Reduces a coordinate vector to its canonical representative.
    pub fn normalize(&self, coords: &[BigInt]) -> Vec<BigInt> {
        coords
            .iter()
            .enumerate()
            .map(|(i, c)| match self.torsion.get(i) {
                Some(d) => c.mod_floor(d),
                None => c.clone(),
            })
            .collect()
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = match self.free_rank {
            0 => Vec::new(),
            1 => vec!["Z".to_string()],
            r => vec![format!("Z^{r}")],
        };
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

pub(crate) fn serialize_bigint<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_i64() {
        Some(x) => s.serialize_i64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

pub(crate) fn serialize_bigints<S: Serializer>(vs: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    struct Wrap<'a>(&'a BigInt);
    impl Serialize for Wrap<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
            serialize_bigint(self.0, s)
        }
    }
    let mut seq = s.serialize_seq(Some(vs.len()))?;
    for v in vs {
        seq.serialize_element(&Wrap(v))?;
    }
    seq.end()
}

impl Serialize for FgAbelianGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Torsion<'a>(&'a [BigInt]);
        impl Serialize for Torsion<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                serialize_bigints(self.0, s)
            }
        }
        let mut st = s.serialize_struct("FgAbelianGroup", 3)?;
        st.serialize_field("free_rank", &self.free_rank)?;
        st.serialize_field("torsion", &Torsion(&self.torsion))?;
        st.serialize_field("display", &self.to_string())?;
        st.end()
    }
}

/// The quotient `L / R` of a lattice `L ⊆ Z^n` by a sublattice `R ⊆ L`,
/// together with coordinates for its canonical generators.
#[derive(Clone, Debug)]
pub struct Subquotient {
    group: FgAbelianGroup,
    /// Z-basis of `L` as columns.
    basis: IntMatrix,
    /// New coordinates are `transform · (coordinates in basis)`.
    transform: IntMatrix,
    /// Representatives of the new coordinate axes, as columns in `Z^n`.
    axes: IntMatrix,
    /// Order of each new axis (`0` = free); same length as `basis.cols()`.
    axis_orders: Vec<BigInt>,
}

impl Subquotient {
    /// `numerator` must have independent columns; `relations` columns must
    /// lie in their span.
    pub fn new(numerator: IntMatrix, relations: &IntMatrix) -> Result<Self> {
        if numerator.rows != relations.rows {
            return Err(mismatch("numerator and relations live in different ambient spaces"));
        }
        let p = numerator.cols;
        let mut rel_coords = Vec::with_capacity(relations.cols);
        for j in 0..relations.cols {
            let x = solve_over_z(&numerator, &relations.column(j))?.ok_or(IntAlgError::NotInLattice)?;
            rel_coords.push(x);
        }
        let x = IntMatrix::from_columns(p, &rel_coords)?;
        let snf = smith_normal_form(&x);
        let axis_orders: Vec<BigInt> =
            (0..p).map(|i| snf.diagonal.get(i).cloned().unwrap_or_else(BigInt::zero)).collect();
        let torsion: Vec<BigInt> = snf.diagonal.iter().filter(|d| !d.is_one()).cloned().collect();
        let group = FgAbelianGroup { free_rank: p - snf.rank(), torsion };
        let axes = numerator.mul(&snf.u_inv)?;
        Ok(Self { group, basis: numerator, transform: snf.u, axes, axis_orders })
    }

    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    fn kept_axes(&self) -> impl Iterator<Item = usize> + '_ {
        self.axis_orders.iter().enumerate().filter(|(_, d)| !d.is_one()).map(|(i, _)| i)
    }

    /// Canonical coordinates of `v ∈ L`; `None` when `v ∉ L`.
    pub fn coordinates(&self, v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        let Some(y) = solve_over_z(&self.basis, v)? else {
            return Ok(None);
        };
        let z = self.transform.mul_vec(&y)?;
        Ok(Some(
            self.kept_axes()
                .map(|i| {
                    let d = &self.axis_orders[i];
                    if d.is_zero() {
                        z[i].clone()
                    } else {
                        z[i].mod_floor(d)
                    }
                })
                .collect(),
        ))
    }

    /// A vector of `L` representing the given canonical coordinates.
    pub fn representative(&self, coords: &[BigInt]) -> Result<Vec<BigInt>> {
        let kept: Vec<usize> = self.kept_axes().collect();
        if coords.len() != kept.len() {
            return Err(mismatch("coordinate vector has the wrong length"));
        }
        let mut out = vec![BigInt::zero(); self.basis.rows];
        for (c, &axis) in coords.iter().zip(&kept) {
            for (i, o) in out.iter_mut().enumerate() {
                *o += c * self.axes.get(i, axis);
            }
        }
        Ok(out)
    }

    /// Representative vectors of the canonical generators.
    pub fn generators(&self) -> Vec<Vec<BigInt>> {
        self.kept_axes().map(|i| self.axes.column(i)).collect()
    }
}

fn check_complex(d_in: &IntMatrix, d_out: &IntMatrix, modulus: Option<&BigInt>) -> Result<()> {
    if d_in.rows != d_out.cols {
        return Err(mismatch(format!(
            "incoming map has {} rows but outgoing map has {} columns",
            d_in.rows, d_out.cols
        )));
    }
    let prod = d_out.mul(d_in)?;
    let zero = match modulus {
        Some(m) => prod.reduce_mod(m).is_zero(),
        None => prod.is_zero(),
    };
    if zero {
        Ok(())
    } else {
        Err(IntAlgError::NotAComplex)
    }
}

/// `ker(d_out) / im(d_in)` over `Z`, with coordinates.
pub fn homology_subquotient(d_in: &IntMatrix, d_out: &IntMatrix) -> Result<Subquotient> {
    check_complex(d_in, d_out, None)?;
    Subquotient::new(kernel_basis(d_out), d_in)
}

/// `ker(d_out) / im(d_in)` over `Z`.
pub fn homology_at(d_in: &IntMatrix, d_out: &IntMatrix) -> Result<FgAbelianGroup> {
    Ok(homology_subquotient(d_in, d_out)?.group)
}

/// Homology of a complex of free `Z/m`-modules, with coordinates. Vectors
/// are integer lifts; the lattice `m Z^n` is quotiented out.
pub fn homology_mod_subquotient(d_in: &IntMatrix, d_out: &IntMatrix, modulus: &BigInt) -> Result<Subquotient> {
    check_complex(d_in, d_out, Some(modulus))?;
    let n = d_out.cols;
    let m_id = IntMatrix::identity(n).scale(modulus);
    // {x : d_out x ≡ 0 (mod m)} is the projection of ker [d_out | m I]
    let ext = d_out.hstack(&IntMatrix::identity(d_out.rows).scale(modulus))?;
    let k = kernel_basis(&ext);
    let projected = IntMatrix::from_fn(n, k.cols, |i, j| k.get(i, j).clone());
    let numerator = lattice_basis(&projected.hstack(&m_id)?);
    Subquotient::new(numerator, &d_in.hstack(&m_id)?)
}

pub fn homology_mod(d_in: &IntMatrix, d_out: &IntMatrix, modulus: &BigInt) -> Result<FgAbelianGroup> {
    Ok(homology_mod_subquotient(d_in, d_out, modulus)?.group)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_snf(a: &IntMatrix) -> SmithForm {
        let snf = smith_normal_form(a);
        let prod = snf.u.mul(a).unwrap().mul(&snf.v).unwrap();
        assert_eq!(prod, snf.diagonal_matrix());
        assert!(snf.u.determinant().unwrap().abs().is_one());
        assert!(snf.v.determinant().unwrap().abs().is_one());
        assert_eq!(snf.u.mul(&snf.u_inv).unwrap(), IntMatrix::identity(a.rows()));
        for w in snf.diagonal.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        assert!(snf.diagonal.iter().all(|d| d.is_positive()));
        snf
    }

    #[test]
    fn snf_identity() {
        let snf = check_snf(&IntMatrix::identity(3));
        assert_eq!(snf.diagonal, big(&[1, 1, 1]));
    }

    #[test]
    fn snf_zero() {
        let snf = check_snf(&IntMatrix::zeros(2, 3));
        assert!(snf.diagonal.is_empty());
    }

    #[test]
    fn snf_diag_2_3() {
        let snf = check_snf(&IntMatrix::from_rows(&[&[2, 0], &[0, 3]]));
        assert_eq!(snf.diagonal, big(&[1, 6]));
    }

    #[test]
    fn snf_rectangular_and_negative() {
        let a = IntMatrix::from_rows(&[&[-4, 6, 2], &[8, 0, -10], &[0, 12, 4], &[2, 2, 2]]);
        check_snf(&a);
        check_snf(&a.transpose());
    }

    #[test]
    fn homology_examples() {
        let h = homology_at(&IntMatrix::from_rows(&[&[2]]), &IntMatrix::zeros(0, 1)).unwrap();
        assert_eq!(h, FgAbelianGroup::cyclic(2));
        let h = homology_at(&IntMatrix::zeros(3, 0), &IntMatrix::zeros(0, 3)).unwrap();
        assert_eq!(h, FgAbelianGroup::free(3));
    }

    #[test]
    fn homology_errors() {
        let e = homology_at(&IntMatrix::zeros(2, 1), &IntMatrix::zeros(1, 3)).unwrap_err();
        assert!(matches!(e, IntAlgError::DimensionMismatch(_)));
        let e = homology_at(&IntMatrix::from_rows(&[&[1]]), &IntMatrix::from_rows(&[&[1]])).unwrap_err();
        assert_eq!(e, IntAlgError::NotAComplex);
    }

    #[test]
    fn homology_mod_two() {
        // Z --2--> Z --0--> : mod 2 the incoming map vanishes
        let h = homology_mod(&IntMatrix::from_rows(&[&[2]]), &IntMatrix::zeros(0, 1), &BigInt::from(2)).unwrap();
        assert_eq!(h, FgAbelianGroup::cyclic(2));
        let h = homology_mod(&IntMatrix::from_rows(&[&[3]]), &IntMatrix::zeros(0, 1), &BigInt::from(6)).unwrap();
        assert_eq!(h, FgAbelianGroup::cyclic(3));
    }

    #[test]
    fn solve_examples() {
        let a = IntMatrix::from_rows(&[&[2]]);
        assert_eq!(solve_linear(&a, &big(&[1]), None).unwrap(), None);
        assert_eq!(solve_linear(&a, &big(&[1]), Some(&BigInt::from(3))).unwrap(), Some(big(&[2])));
        assert_eq!(solve_linear(&a, &big(&[0]), None).unwrap(), Some(big(&[0])));
        assert!(matches!(solve_linear(&a, &big(&[1, 2]), None), Err(IntAlgError::DimensionMismatch(_))));
    }

    #[test]
    fn subquotient_coordinates() {
        // Z^2 / <(2, 0), (0, 3)> = Z/6
        let sq = Subquotient::new(IntMatrix::identity(2), &IntMatrix::from_rows(&[&[2, 0], &[0, 3]])).unwrap();
        assert_eq!(*sq.group(), FgAbelianGroup::cyclic(6));
        let g = &sq.generators()[0];
        let c = sq.coordinates(g).unwrap().unwrap();
        assert_eq!(c, big(&[1]));
        let rep = sq.representative(&big(&[5])).unwrap();
        assert_eq!(sq.coordinates(&rep).unwrap().unwrap(), big(&[5]));
        assert_eq!(sq.coordinates(&big(&[2, 3])).unwrap().unwrap(), big(&[0]));
    }

    #[test]
    fn group_canonical_form() {
        let g = FgAbelianGroup::from_cyclic_factors(&big(&[2, 3, 0, 1, 4]));
        assert_eq!(g, FgAbelianGroup::new(1, big(&[2, 12])).unwrap());
        assert_eq!(g.to_string(), "Z + Z/2 + Z/12");
        assert!(FgAbelianGroup::new(0, big(&[4, 2])).is_none());
        assert!(FgAbelianGroup::new(0, big(&[1])).is_none());
    }
}
