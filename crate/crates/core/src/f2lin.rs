//! Dense linear algebra over F2 on bit-packed words.
//!
//! Vectors pack 64 coordinates per `u64`; matrices store one packed row per
//! matrix row.  Everything downstream (Steenrod action matrices, module
//! realisations, the localisation window) reduces to the handful of
//! primitives in this module, so they are written for predictability rather
//! than for asymptotics: all elimination uses the same fixed rule (scan for
//! the lowest-index unused column, eliminate downwards and upwards), which
//! makes every derived basis canonical.
//!
//! # Conventions
//!
//! * Vectors are row vectors.  A matrix `m` with `r` rows and `c` columns
//!   represents a linear map `F2^r -> F2^c` acting by `v * m` (XOR of the
//!   rows of `m` selected by the set bits of `v`).  Composition of maps is
//!   [`F2Matrix::mul`] in application order.
//! * [`F2Matrix::kernel_basis`] is the right kernel `{x : m·x = 0}`, the
//!   null space of the columns; the kernel of the *map* `v ↦ v*m` is
//!   [`F2Matrix::left_kernel_basis`].
//! * Kernel and span bases are emitted with pivots in ascending column
//!   order, so two runs over the same data produce identical bases.
//!
//! # Determinism
//!
//! No randomness, no hashing, no pointer-dependent iteration.  Each
//! operation is a pure function of its arguments.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// A vector over F2 with a fixed length, packed 64 bits to a word.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct F2Vec {
    len: usize,
    words: Vec<u64>,
}

impl F2Vec {
    /// The zero vector of the given length.
    pub fn zeros(len: usize) -> Self {
        F2Vec { len, words: vec![0; len.div_ceil(64)] }
    }

    /// The standard basis vector with a single 1 at `pos`.
    pub fn unit(len: usize, pos: usize) -> Self {
        let mut v = F2Vec::zeros(len);
        v.set(pos, true);
        v
    }

    /// Build a vector from an explicit list of bits.
    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = F2Vec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Build a vector of length `len` with ones exactly at `positions`.
    pub fn from_support(len: usize, positions: &[usize]) -> Self {
        let mut v = F2Vec::zeros(len);
        for &p in positions {
            v.set(p, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, pos: usize) -> bool {
        assert!(pos < self.len, "bit index {pos} out of range {}", self.len);
        self.words[pos / 64] >> (pos % 64) & 1 == 1
    }

    pub fn set(&mut self, pos: usize, value: bool) {
        assert!(pos < self.len, "bit index {pos} out of range {}", self.len);
        let mask = 1u64 << (pos % 64);
        if value {
            self.words[pos / 64] |= mask;
        } else {
            self.words[pos / 64] &= !mask;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// In-place XOR with another vector of the same length.
    pub fn xor_assign(&mut self, other: &F2Vec) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// The F2 inner product (parity of the AND of the two vectors).
    pub fn dot(&self, other: &F2Vec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    /// Index of the lowest set bit, if any.
    pub fn leading(&self) -> Option<usize> {
        for (i, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(i * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Indices of all set bits, ascending.
    pub fn ones(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, &w) in self.words.iter().enumerate() {
            let mut rest = w;
            while rest != 0 {
                out.push(i * 64 + rest.trailing_zeros() as usize);
                rest &= rest - 1;
            }
        }
        out
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

impl fmt::Debug for F2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::with_capacity(self.len);
        for i in 0..self.len {
            s.push(if self.get(i) { '1' } else { '0' });
        }
        write!(f, "F2Vec({s})")
    }
}

/// A matrix over F2, stored as bit-packed rows.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<F2Vec>,
}

impl F2Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        F2Matrix { rows, cols, data: vec![F2Vec::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = F2Matrix::zero(n, n);
        for i in 0..n {
            m.data[i].set(i, true);
        }
        m
    }

    /// Assemble a matrix from rows; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<F2Vec>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length mismatch");
        }
        F2Matrix { rows: rows.len(), cols, data: rows }
    }

    /// Build from 0/1 entries given row by row.
    pub fn from_entries(entries: &[&[u8]]) -> Self {
        let rows = entries.len();
        let cols = entries.first().map_or(0, |r| r.len());
        let mut m = F2Matrix::zero(rows, cols);
        for (i, row) in entries.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, &e) in row.iter().enumerate() {
                if e % 2 == 1 {
                    m.set(i, j, true);
                }
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

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value);
    }

    pub fn row(&self, r: usize) -> &F2Vec {
        &self.data[r]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F2Vec::is_zero)
    }

    /// Apply the map to a row vector: `v * self`, with `v.len() == rows`.
    pub fn apply(&self, v: &F2Vec) -> F2Vec {
        assert_eq!(v.len(), self.rows, "vector/matrix size mismatch");
        let mut out = F2Vec::zeros(self.cols);
        for (i, row) in self.data.iter().enumerate() {
            if v.get(i) {
                out.xor_assign(row);
            }
        }
        out
    }

    /// Composition in application order: `(v * self) * other`.
    pub fn mul(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let rows = self.data.iter().map(|r| other.apply(r)).collect();
        F2Matrix::from_rows(other.cols, rows)
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.data[r].ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    pub fn xor_assign(&mut self, other: &F2Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            a.xor_assign(b);
        }
    }

    /// Reduced row echelon form together with the pivot columns (ascending).
    pub fn rref(&self) -> (F2Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut next_row = 0;
        for col in 0..m.cols {
            let Some(pivot_row) = (next_row..m.rows).find(|&r| m.data[r].get(col)) else {
                continue;
            };
            m.data.swap(next_row, pivot_row);
            let pivot = m.data[next_row].clone();
            for (r, row) in m.data.iter_mut().enumerate() {
                if r != next_row && row.get(col) {
                    row.xor_assign(&pivot);
                }
            }
            pivots.push(col);
            next_row += 1;
            if next_row == m.rows {
                break;
            }
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{x : self · x = 0}`, pivot-free columns in
    /// ascending order.  `rank + kernel_basis().len() == cols`.
    pub fn kernel_basis(&self) -> Vec<F2Vec> {
        let (rref, pivots) = self.rref();
        let mut basis = Vec::with_capacity(self.cols - pivots.len());
        for free in 0..self.cols {
            if pivots.binary_search(&free).is_ok() {
                continue;
            }
            let mut x = F2Vec::unit(self.cols, free);
            for (row, &p) in pivots.iter().enumerate() {
                if rref.data[row].get(free) {
                    x.set(p, true);
                }
            }
            basis.push(x);
        }
        basis
    }

    /// Basis of the kernel of the map `v ↦ v * self`.
    pub fn left_kernel_basis(&self) -> Vec<F2Vec> {
        self.transpose().kernel_basis()
    }

    /// A solution `x` of `x * self = b`, if one exists.
    pub fn preimage(&self, b: &F2Vec) -> Option<F2Vec> {
        let mut span = Span::new(self.cols);
        for row in &self.data {
            span.insert(row);
        }
        span.express(b)
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{} [", self.rows, self.cols)?;
        for row in &self.data {
            writeln!(f, "  {row:?}")?;
        }
        write!(f, "]")
    }
}

/// An incrementally built subspace with expression tracking.
///
/// Rows are kept reduced against each other with distinct pivots, sorted by
/// pivot column.  Each row remembers how it was formed from the inserted
/// vectors, so [`Span::express`] can write any member of the span as an XOR
/// of the inserted vectors — the workhorse for solving, for change of basis,
/// and for extending maps along generators.
#[derive(Clone)]
pub struct Span {
    cols: usize,
    /// `(pivot, reduced vector, expression over inserted vectors)`.
    rows: Vec<(usize, F2Vec, F2Vec)>,
    inserted: usize,
}

impl Span {
    pub fn new(cols: usize) -> Self {
        Span { cols, rows: Vec::new(), inserted: 0 }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Number of vectors inserted so far (independent or not).
    pub fn inserted(&self) -> usize {
        self.inserted
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn reduce_tracked(&self, v: &F2Vec) -> (F2Vec, F2Vec) {
        let mut residue = v.clone();
        let mut expr = F2Vec::zeros(self.inserted);
        for (pivot, row, row_expr) in &self.rows {
            if residue.get(*pivot) {
                residue.xor_assign(row);
                for b in row_expr.ones() {
                    expr.set(b, !expr.get(b));
                }
            }
        }
        (residue, expr)
    }

    /// Insert a vector; returns `true` if it enlarged the span.
    pub fn insert(&mut self, v: &F2Vec) -> bool {
        assert_eq!(v.len(), self.cols, "span length mismatch");
        let (residue, mut expr) = self.reduce_tracked(v);
        let index = self.inserted;
        self.inserted += 1;
        let Some(pivot) = residue.leading() else {
            return false;
        };
        let mut padded = F2Vec::zeros(self.inserted);
        for b in expr.ones() {
            padded.set(b, true);
        }
        padded.set(index, true);
        expr = padded;
        // Back-substitute to keep the basis fully reduced.
        for (_, row, row_expr) in self.rows.iter_mut() {
            if row.get(pivot) {
                row.xor_assign(&residue);
                let mut ext = F2Vec::zeros(self.inserted);
                for b in row_expr.ones() {
                    ext.set(b, true);
                }
                for b in expr.ones() {
                    ext.set(b, !ext.get(b));
                }
                *row_expr = ext;
            }
        }
        let at = self.rows.partition_point(|(p, _, _)| *p < pivot);
        self.rows.insert(at, (pivot, residue, expr));
        true
    }

    /// Reduce `v` against the span; zero residue means membership.
    pub fn reduce(&self, v: &F2Vec) -> F2Vec {
        self.reduce_tracked(v).0
    }

    pub fn contains(&self, v: &F2Vec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Write `v` as an XOR of inserted vectors: bit `i` set means the `i`-th
    /// inserted vector participates.  `None` if `v` is outside the span.
    pub fn express(&self, v: &F2Vec) -> Option<F2Vec> {
        let (residue, expr) = self.reduce_tracked(v);
        if residue.is_zero() {
            let mut padded = F2Vec::zeros(self.inserted);
            for b in expr.ones() {
                padded.set(b, true);
            }
            Some(padded)
        } else {
            None
        }
    }

    /// The reduced basis rows, pivots ascending.
    pub fn basis(&self) -> Vec<F2Vec> {
        self.rows.iter().map(|(_, v, _)| v.clone()).collect()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _, _)| *p).collect()
    }
}

/// A quotient `U / T` of subspaces of a fixed ambient coordinate space,
/// with canonical coset representatives.
///
/// Representatives are chosen by reducing a basis of `U` (by default the
/// ambient standard basis) against `T` and keeping the vectors that remain
/// independent, in ascending index order.  When `U` is the whole ambient
/// space the representatives are therefore standard basis vectors at the
/// non-pivot columns of `T`.
#[derive(Clone)]
pub struct CosetBasis {
    ambient: usize,
    reps: Vec<F2Vec>,
    /// `T`-rows first (untracked slots), then the representatives.
    solver: Span,
    denom_count: usize,
}

impl CosetBasis {
    /// Quotient of the space spanned by `numerator` (or the full ambient
    /// space if `None`) by the span of `denominator`.
    pub fn new(ambient: usize, denominator: &[F2Vec], numerator: Option<&[F2Vec]>) -> Self {
        let mut denom = Span::new(ambient);
        for v in denominator {
            denom.insert(v);
        }
        let mut solver = Span::new(ambient);
        for row in denom.basis() {
            solver.insert(&row);
        }
        let denom_count = solver.inserted();
        // Probe candidates against a separate span so that only accepted
        // vectors consume expression slots in the solver; `to_coords` relies
        // on solver slot `denom_count + i` being exactly the `i`-th
        // representative.
        let mut probe = denom;
        let mut reps = Vec::new();
        let push = |v: F2Vec, probe: &mut Span, solver: &mut Span, reps: &mut Vec<F2Vec>| {
            if probe.insert(&v) {
                let fresh = solver.insert(&v);
                debug_assert!(fresh, "probe and solver must agree");
                reps.push(v);
            }
        };
        match numerator {
            Some(basis) => {
                for v in basis {
                    push(v.clone(), &mut probe, &mut solver, &mut reps);
                }
            }
            None => {
                for j in 0..ambient {
                    push(F2Vec::unit(ambient, j), &mut probe, &mut solver, &mut reps);
                }
            }
        }
        CosetBasis { ambient, reps, solver, denom_count }
    }

    /// Dimension of the quotient.
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// The chosen representative of the `i`-th quotient basis vector.
    pub fn rep(&self, i: usize) -> &F2Vec {
        &self.reps[i]
    }

    /// Coordinates of the class of `v` in the quotient basis; `None` if `v`
    /// does not lie in `U + T`.
    pub fn to_coords(&self, v: &F2Vec) -> Option<F2Vec> {
        let expr = self.solver.express(v)?;
        let mut out = F2Vec::zeros(self.reps.len());
        for b in expr.ones() {
            if b >= self.denom_count {
                out.set(b - self.denom_count, true);
            }
        }
        Some(out)
    }

    /// Matrix of the projection `ambient -> quotient` on the standard basis
    /// (rows indexed by ambient coordinates).  Ambient vectors outside
    /// `U + T` make no sense here, so this is only available when `U` is the
    /// full space, which is the common case.
    pub fn projection_matrix(&self) -> Option<F2Matrix> {
        let mut rows = Vec::with_capacity(self.ambient);
        for j in 0..self.ambient {
            rows.push(self.to_coords(&F2Vec::unit(self.ambient, j))?);
        }
        Some(F2Matrix::from_rows(self.reps.len(), rows))
    }
}

/// Dimensions and basis labels of a graded F2 vector space, degrees
/// `0..=trunc`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    pub dims: Vec<usize>,
    pub labels: Vec<Vec<String>>,
}

impl GradedSpace {
    pub fn empty(trunc: u32) -> Self {
        let n = trunc as usize + 1;
        GradedSpace { dims: vec![0; n], labels: vec![Vec::new(); n] }
    }

    pub fn trunc(&self) -> u32 {
        self.dims.len() as u32 - 1
    }

    pub fn dim(&self, degree: u32) -> usize {
        self.dims.get(degree as usize).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }
}
