//! Block-structured matrices and column vectors over the graded algebra:
//! product, supertranspose, entrywise star, block inverse, superdeterminant,
//! and the supervector scalar product and norm.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{Element, GeneratorTable, Parity, ParityClass};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Block sizes (n even slots, m odd slots). Slot i carries parity |i| = 0 for
/// i < n and |i| = 1 otherwise (0-indexed).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SuperDims {
    pub n: usize,
    pub m: usize,
}

impl SuperDims {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n + m == 0 {
            return Err(Error::DimensionMismatch("n + m must be at least 1".into()));
        }
        Ok(SuperDims { n, m })
    }

    pub fn total(&self) -> usize {
        self.n + self.m
    }

    pub fn slot_parity(&self, i: usize) -> Parity {
        if i < self.n {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for SuperDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.n, self.m)
    }
}

/// A square (n+m)×(n+m) matrix of algebra elements, row-major.
#[derive(Clone, Debug)]
pub struct SuperMatrix<C: Scalar> {
    dims: SuperDims,
    table: Arc<GeneratorTable>,
    entries: Vec<Element<C>>,
}

/// A column of n+m algebra elements with a declared parity. An even vector
/// has even entries in the top n slots and odd entries below; an odd vector
/// has the pattern reversed.
#[derive(Clone, Debug)]
pub struct SuperVector<C: Scalar> {
    dims: SuperDims,
    entries: Vec<Element<C>>,
    parity: Parity,
}

/// The supertranspose of a supervector: a row with the sign convention baked
/// into the first n entries.
#[derive(Clone, Debug)]
pub struct RowSuperVector<C: Scalar> {
    dims: SuperDims,
    entries: Vec<Element<C>>,
}

impl<C: Scalar> SuperMatrix<C> {
    pub fn zero(dims: SuperDims, table: &Arc<GeneratorTable>) -> Self {
        let t = dims.total();
        SuperMatrix {
            dims,
            table: Arc::clone(table),
            entries: vec![Element::zero(table); t * t],
        }
    }

    pub fn identity(dims: SuperDims, table: &Arc<GeneratorTable>) -> Self {
        let mut out = Self::zero(dims, table);
        for i in 0..dims.total() {
            out.set(i, i, Element::one(table));
        }
        out
    }

    /// Builds a matrix from row-major entries, checking the even parity
    /// pattern: entry (i,j) homogeneous of parity |i|+|j| (zero entries
    /// count as any parity).
    pub fn from_rows(
        dims: SuperDims,
        table: &Arc<GeneratorTable>,
        rows: Vec<Vec<Element<C>>>,
    ) -> Result<Self> {
        let t = dims.total();
        if rows.len() != t || rows.iter().any(|r| r.len() != t) {
            return Err(Error::DimensionMismatch(format!(
                "expected {t}×{t} entries for dims {dims}"
            )));
        }
        let mut entries = Vec::with_capacity(t * t);
        for row in rows {
            for e in row {
                if !e.table().compatible(table) {
                    return Err(Error::IncompatibleContext);
                }
                entries.push(e);
            }
        }
        let out = SuperMatrix {
            dims,
            table: Arc::clone(table),
            entries,
        };
        out.require_even_pattern()?;
        Ok(out)
    }

    pub fn from_columns(columns: Vec<SuperVector<C>>) -> Result<Self> {
        let dims = columns
            .first()
            .map(|c| c.dims)
            .ok_or_else(|| Error::DimensionMismatch("no columns".into()))?;
        let t = dims.total();
        if columns.len() != t {
            return Err(Error::DimensionMismatch(format!(
                "expected {t} columns, got {}",
                columns.len()
            )));
        }
        let table = Arc::clone(columns[0].entries[0].table());
        let mut out = Self::zero(dims, &table);
        for (l, col) in columns.iter().enumerate() {
            for i in 0..t {
                out.set(i, l, col.entries[i].clone());
            }
        }
        Ok(out)
    }

    pub fn dims(&self) -> SuperDims {
        self.dims
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn entry(&self, i: usize, j: usize) -> &Element<C> {
        &self.entries[i * self.dims.total() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: Element<C>) {
        let t = self.dims.total();
        self.entries[i * t + j] = e;
    }

    /// Checks the even-supermatrix parity pattern, naming the first bad entry.
    pub fn require_even_pattern(&self) -> Result<()> {
        let t = self.dims.total();
        for i in 0..t {
            for j in 0..t {
                let want = self.dims.slot_parity(i).combine(self.dims.slot_parity(j));
                if !self.entry(i, j).has_parity(want) {
                    return Err(Error::Parity(format!(
                        "entry ({i},{j}) is not homogeneous of parity |i|+|j|"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_even_pattern(&self) -> bool {
        self.require_even_pattern().is_ok()
    }

    pub fn column(&self, l: usize) -> SuperVector<C> {
        let t = self.dims.total();
        SuperVector {
            dims: self.dims,
            entries: (0..t).map(|i| self.entry(i, l).clone()).collect(),
            parity: self.dims.slot_parity(l),
        }
    }

    fn check_dims(&self, other: &SuperMatrix<C>) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!(
                "{} vs {}",
                self.dims, other.dims
            )));
        }
        if !self.table.compatible(&other.table) {
            return Err(Error::IncompatibleContext);
        }
        Ok(())
    }

    pub fn matmul(&self, other: &SuperMatrix<C>) -> Result<SuperMatrix<C>> {
        self.check_dims(other)?;
        let t = self.dims.total();
        let mut out = Self::zero(self.dims, &self.table);
        for i in 0..t {
            for j in 0..t {
                let mut acc = Element::zero(&self.table);
                for k in 0..t {
                    let p = self.entry(i, k).try_mul(other.entry(k, j))?;
                    acc = acc.add_ref(&p);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &SuperVector<C>) -> Result<SuperVector<C>> {
        if self.dims != x.dims {
            return Err(Error::DimensionMismatch(format!(
                "{} vs {}",
                self.dims, x.dims
            )));
        }
        let t = self.dims.total();
        let mut entries = Vec::with_capacity(t);
        for i in 0..t {
            let mut acc = Element::zero(&self.table);
            for k in 0..t {
                acc = acc.add_ref(&self.entry(i, k).try_mul(&x.entries[k])?);
            }
            entries.push(acc);
        }
        Ok(SuperVector {
            dims: self.dims,
            entries,
            parity: x.parity,
        })
    }

    pub fn add(&self, other: &SuperMatrix<C>) -> Result<SuperMatrix<C>> {
        self.check_dims(other)?;
        let mut out = self.clone();
        let t = self.dims.total();
        for i in 0..t {
            for j in 0..t {
                out.set(i, j, self.entry(i, j).add_ref(other.entry(i, j)));
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SuperMatrix<C>) -> Result<SuperMatrix<C>> {
        self.check_dims(other)?;
        let mut out = self.clone();
        let t = self.dims.total();
        for i in 0..t {
            for j in 0..t {
                out.set(i, j, self.entry(i, j).sub_ref(other.entry(i, j)));
            }
        }
        Ok(out)
    }

    /// Block transpose with the odd sign: (A,B,C,D) → (Aᵗ, Cᵗ, −Bᵗ, Dᵗ).
    pub fn supertranspose(&self) -> Result<SuperMatrix<C>> {
        self.require_even_pattern()?;
        let t = self.dims.total();
        let n = self.dims.n;
        let mut out = Self::zero(self.dims, &self.table);
        for i in 0..t {
            for j in 0..t {
                let e = self.entry(j, i);
                // the lower-left block of the result receives −Bᵗ
                let e = if i >= n && j < n {
                    e.neg_ref()
                } else {
                    e.clone()
                };
                out.set(i, j, e);
            }
        }
        Ok(out)
    }

    /// Entrywise star; the parity pattern is preserved.
    pub fn dagger(&self) -> SuperMatrix<C> {
        let mut out = self.clone();
        let t = self.dims.total();
        for i in 0..t {
            for j in 0..t {
                out.set(i, j, self.entry(i, j).star());
            }
        }
        out
    }

    fn blocks(
        &self,
    ) -> (
        BlockMatrix<C>,
        BlockMatrix<C>,
        BlockMatrix<C>,
        BlockMatrix<C>,
    ) {
        let (n, m) = (self.dims.n, self.dims.m);
        let take = |r0: usize, c0: usize, rows: usize, cols: usize| BlockMatrix {
            rows,
            cols,
            entries: (0..rows)
                .flat_map(|i| (0..cols).map(move |j| self.entry(r0 + i, c0 + j).clone()))
                .collect(),
            table: Arc::clone(&self.table),
        };
        (
            take(0, 0, n, n),
            take(0, n, n, m),
            take(n, 0, m, n),
            take(n, n, m, m),
        )
    }

    fn assemble(
        dims: SuperDims,
        table: &Arc<GeneratorTable>,
        tl: BlockMatrix<C>,
        tr: BlockMatrix<C>,
        bl: BlockMatrix<C>,
        br: BlockMatrix<C>,
    ) -> SuperMatrix<C> {
        let n = dims.n;
        let mut out = Self::zero(dims, table);
        for i in 0..tl.rows {
            for j in 0..tl.cols {
                out.set(i, j, tl.at(i, j).clone());
            }
        }
        for i in 0..tr.rows {
            for j in 0..tr.cols {
                out.set(i, n + j, tr.at(i, j).clone());
            }
        }
        for i in 0..bl.rows {
            for j in 0..bl.cols {
                out.set(n + i, j, bl.at(i, j).clone());
            }
        }
        for i in 0..br.rows {
            for j in 0..br.cols {
                out.set(n + i, n + j, br.at(i, j).clone());
            }
        }
        out
    }

    /// Inverse of an even supermatrix through the block formula
    /// [[ (A−BD⁻¹C)⁻¹, −A⁻¹B(D−CA⁻¹B)⁻¹ ], [ −D⁻¹C(A−BD⁻¹C)⁻¹, (D−CA⁻¹B)⁻¹ ]].
    /// Requires the A and D blocks to have invertible body matrices.
    pub fn block_inverse(&self) -> Result<SuperMatrix<C>> {
        self.require_even_pattern()?;
        let (a, b, c, d) = self.blocks();
        let a_inv = a.inverse("A")?;
        let d_inv = d.inverse("D")?;
        let schur_a = a.sub(&b.mul(&d_inv)?.mul(&c)?)?;
        let schur_d = d.sub(&c.mul(&a_inv)?.mul(&b)?)?;
        let sa_inv = schur_a.inverse("A−BD⁻¹C")?;
        let sd_inv = schur_d.inverse("D−CA⁻¹B")?;
        let tr = a_inv.mul(&b)?.mul(&sd_inv)?.neg();
        let bl = d_inv.mul(&c)?.mul(&sa_inv)?.neg();
        Ok(Self::assemble(
            self.dims,
            &self.table,
            sa_inv,
            tr,
            bl,
            sd_inv,
        ))
    }

    /// Superdeterminant det(A−BD⁻¹C)·det(D)⁻¹; needs the D-block body to be
    /// invertible.
    pub fn sdet(&self) -> Result<Element<C>> {
        self.require_even_pattern()?;
        let (a, b, c, d) = self.blocks();
        let d_inv = d.inverse("D")?;
        let schur_a = a.sub(&b.mul(&d_inv)?.mul(&c)?)?;
        let det_top = schur_a.det()?;
        let det_d = d.det()?;
        det_top.try_mul(&det_d.invert_even()?)
    }

    /// The cross-check route det(A)·det(D−CA⁻¹B)⁻¹, defined when the A block
    /// has an invertible body.
    pub fn sdet_alt(&self) -> Result<Element<C>> {
        self.require_even_pattern()?;
        let (a, b, c, d) = self.blocks();
        let a_inv = a.inverse("A")?;
        let schur_d = d.sub(&c.mul(&a_inv)?.mul(&b)?)?;
        a.det()?.try_mul(&schur_d.det()?.invert_even()?)
    }
}

impl<C: Scalar> PartialEq for SuperMatrix<C> {
    fn eq(&self, other: &Self) -> bool {
        self.dims == other.dims && self.entries == other.entries
    }
}

impl<C: Scalar> fmt::Display for SuperMatrix<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.dims.total();
        for i in 0..t {
            write!(f, "[ ")?;
            for j in 0..t {
                if j > 0 {
                    write!(f, " | ")?;
                }
                write!(f, "{}", self.entry(i, j))?;
            }
            writeln!(f, " ]")?;
        }
        Ok(())
    }
}

/// A rectangular block of algebra elements over the commutative even
/// subring. Internal carrier for the block-inverse and determinant work.
#[derive(Clone, Debug)]
struct BlockMatrix<C: Scalar> {
    rows: usize,
    cols: usize,
    entries: Vec<Element<C>>,
    table: Arc<GeneratorTable>,
}

impl<C: Scalar> BlockMatrix<C> {
    fn at(&self, i: usize, j: usize) -> &Element<C> {
        &self.entries[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, e: Element<C>) {
        self.entries[i * self.cols + j] = e;
    }

    fn identity(k: usize, table: &Arc<GeneratorTable>) -> Self {
        let mut out = BlockMatrix {
            rows: k,
            cols: k,
            entries: vec![Element::zero(table); k * k],
            table: Arc::clone(table),
        };
        for i in 0..k {
            out.set(i, i, Element::one(table));
        }
        out
    }

    fn mul(&self, other: &BlockMatrix<C>) -> Result<BlockMatrix<C>> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "block {}×{} times {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = BlockMatrix {
            rows: self.rows,
            cols: other.cols,
            entries: vec![Element::zero(&self.table); self.rows * other.cols],
            table: Arc::clone(&self.table),
        };
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Element::zero(&self.table);
                for k in 0..self.cols {
                    acc = acc.add_ref(&self.at(i, k).try_mul(other.at(k, j))?);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    fn sub(&self, other: &BlockMatrix<C>) -> Result<BlockMatrix<C>> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("block subtraction".into()));
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.at(i, j).sub_ref(other.at(i, j)));
            }
        }
        Ok(out)
    }

    fn neg(&self) -> BlockMatrix<C> {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e = e.neg_ref();
        }
        out
    }

    /// Gauss-Jordan inverse over the even subring. Pivots must have
    /// invertible bodies; rows are swapped to find one (the float mode picks
    /// the largest body modulus).
    fn inverse(&self, label: &str) -> Result<BlockMatrix<C>> {
        assert_eq!(self.rows, self.cols);
        let k = self.rows;
        let mut work = self.clone();
        let mut inv = Self::identity(k, &self.table);
        for col in 0..k {
            let mut pivot_row = None;
            let mut best = 0.0f64;
            for r in col..k {
                let modulus = work.at(r, col).body().modulus();
                let usable = if C::EXACT {
                    !work.at(r, col).body().is_zero()
                } else {
                    modulus > crate::scalar::FLOAT_TOLERANCE
                };
                if usable && (pivot_row.is_none() || modulus > best) {
                    pivot_row = Some(r);
                    best = modulus;
                    if C::EXACT {
                        break;
                    }
                }
            }
            let r = pivot_row.ok_or_else(|| {
                Error::NotInvertible(format!(
                    "{label} block has a singular body (no pivot in column {col})"
                ))
            })?;
            if r != col {
                for j in 0..k {
                    work.entries.swap(r * k + j, col * k + j);
                    inv.entries.swap(r * k + j, col * k + j);
                }
            }
            let pivot_inv = work.at(col, col).invert_even()?;
            for j in 0..k {
                work.set(col, j, work.at(col, j).try_mul(&pivot_inv)?);
                inv.set(col, j, inv.at(col, j).try_mul(&pivot_inv)?);
            }
            for r2 in 0..k {
                if r2 == col || work.at(r2, col).is_zero_element() {
                    continue;
                }
                let factor = work.at(r2, col).clone();
                for j in 0..k {
                    let w = work.at(r2, j).sub_ref(&factor.try_mul(work.at(col, j))?);
                    work.set(r2, j, w);
                    let v = inv.at(r2, j).sub_ref(&factor.try_mul(inv.at(col, j))?);
                    inv.set(r2, j, v);
                }
            }
        }
        Ok(inv)
    }

    /// Cofactor-expansion determinant over the commutative even subring.
    fn det(&self) -> Result<Element<C>> {
        assert_eq!(self.rows, self.cols);
        let k = self.rows;
        if k == 0 {
            return Ok(Element::one(&self.table));
        }
        if k == 1 {
            return Ok(self.at(0, 0).clone());
        }
        let mut acc = Element::zero(&self.table);
        for j in 0..k {
            if self.at(0, j).is_zero_element() {
                continue;
            }
            let mut minor = BlockMatrix {
                rows: k - 1,
                cols: k - 1,
                entries: Vec::with_capacity((k - 1) * (k - 1)),
                table: Arc::clone(&self.table),
            };
            for i in 1..k {
                for j2 in 0..k {
                    if j2 != j {
                        minor.entries.push(self.at(i, j2).clone());
                    }
                }
            }
            let term = self.at(0, j).try_mul(&minor.det()?)?;
            if j % 2 == 0 {
                acc = acc.add_ref(&term);
            } else {
                acc = acc.sub_ref(&term);
            }
        }
        Ok(acc)
    }
}

impl<C: Scalar> SuperVector<C> {
    /// Builds a vector after checking the declared-parity slot pattern.
    pub fn new(dims: SuperDims, entries: Vec<Element<C>>, parity: Parity) -> Result<Self> {
        if entries.len() != dims.total() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for dims {dims}",
                dims.total()
            )));
        }
        for (i, e) in entries.iter().enumerate() {
            let want = dims.slot_parity(i).combine(parity);
            if !e.has_parity(want) {
                return Err(Error::Parity(format!(
                    "vector slot {i} is not homogeneous of parity |{i}|+|X|"
                )));
            }
        }
        Ok(SuperVector {
            dims,
            entries,
            parity,
        })
    }

    /// The standard basis column e_l, declared with the slot's parity.
    pub fn basis(dims: SuperDims, table: &Arc<GeneratorTable>, l: usize) -> Self {
        let t = dims.total();
        let mut entries = vec![Element::zero(table); t];
        entries[l] = Element::one(table);
        SuperVector {
            dims,
            entries,
            parity: dims.slot_parity(l),
        }
    }

    pub fn dims(&self) -> SuperDims {
        self.dims
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn entry(&self, i: usize) -> &Element<C> {
        &self.entries[i]
    }

    pub fn entries(&self) -> &[Element<C>] {
        &self.entries
    }

    pub fn sub(&self, other: &SuperVector<C>) -> Result<SuperVector<C>> {
        if self.dims != other.dims || self.parity != other.parity {
            return Err(Error::DimensionMismatch(
                "supervector subtraction needs matching dims and parity".into(),
            ));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.sub_ref(b))
            .collect();
        Ok(SuperVector {
            dims: self.dims,
            entries,
            parity: self.parity,
        })
    }

    /// Right scalar multiple X·λ. Flips the declared parity iff λ is odd.
    pub fn scale_right(&self, lambda: &Element<C>) -> Result<SuperVector<C>> {
        let parity = match lambda.parity_class() {
            ParityClass::Odd => self.parity.flip(),
            ParityClass::Even | ParityClass::Zero => self.parity,
            ParityClass::Mixed => {
                return Err(Error::Parity(
                    "right scaling needs a homogeneous scalar".into(),
                ))
            }
        };
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            entries.push(e.try_mul(lambda)?);
        }
        Ok(SuperVector {
            dims: self.dims,
            entries,
            parity,
        })
    }

    /// Entrywise star; the declared parity is preserved.
    pub fn dagger(&self) -> SuperVector<C> {
        SuperVector {
            dims: self.dims,
            entries: self.entries.iter().map(|e| e.star()).collect(),
            parity: self.parity,
        }
    }

    /// The row (−1)^{|X|}X₁ … (−1)^{|X|}X_n, χ₁ … χ_m.
    pub fn supertranspose(&self) -> RowSuperVector<C> {
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, e)| {
                if i < self.dims.n && self.parity == Parity::Odd {
                    e.neg_ref()
                } else {
                    e.clone()
                }
            })
            .collect();
        RowSuperVector {
            dims: self.dims,
            entries,
        }
    }
}

impl<C: Scalar> PartialEq for SuperVector<C> {
    fn eq(&self, other: &Self) -> bool {
        self.dims == other.dims && self.parity == other.parity && self.entries == other.entries
    }
}

impl<C: Scalar> RowSuperVector<C> {
    /// Row-times-column contraction.
    pub fn dot(&self, col: &SuperVector<C>) -> Result<Element<C>> {
        if self.dims != col.dims {
            return Err(Error::DimensionMismatch(format!(
                "{} vs {}",
                self.dims, col.dims
            )));
        }
        let table = Arc::clone(self.entries[0].table());
        let mut acc = Element::zero(&table);
        for (a, b) in self.entries.iter().zip(&col.entries) {
            acc = acc.add_ref(&a.try_mul(b)?);
        }
        Ok(acc)
    }
}

/// The scalar product (X,Y) = X^{‡st}·Y; the result has parity |X|+|Y|.
pub fn scalar_product<C: Scalar>(x: &SuperVector<C>, y: &SuperVector<C>) -> Result<Element<C>> {
    x.dagger().supertranspose().dot(y)
}

/// ‖X‖ = √(X,X); errors propagate from `sqrt_even`.
pub fn norm<C: Scalar>(x: &SuperVector<C>) -> Result<Element<C>> {
    scalar_product(x, x)?.sqrt_even()
}
