//! Dense complex linear-algebra substrate.
//!
//! Vectors and operators carry an explicit list of tensor-factor
//! dimensions. The index convention is fixed once: **factor 0 is the
//! slowest-varying index** (big-endian over factors), so
//! `a.kron(&b)` places `a`'s indices above `b`'s.
//!
//! SVD and hermitian eigendecomposition delegate to `nalgebra`; the
//! contract here is the residual bound, not the algorithm.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

pub type C64 = Complex64;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Mixed-radix strides for a factor-dimension list (factor 0 slowest).
pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

pub(crate) fn unrank(mut x: usize, dims: &[usize]) -> Vec<usize> {
    let s = strides(dims);
    let mut out = vec![0usize; dims.len()];
    for i in 0..dims.len() {
        out[i] = x / s[i];
        x %= s[i];
    }
    out
}

// ---------------------------------------------------------------------------
// ComplexVector
// ---------------------------------------------------------------------------

/// A complex amplitude vector together with its tensor-factor dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    data: DVector<C64>,
    dims: Vec<usize>,
}

impl ComplexVector {
    pub fn new(amplitudes: Vec<C64>, dims: Vec<usize>) -> Result<Self> {
        let len: usize = dims.iter().product();
        if dims.is_empty() || len != amplitudes.len() {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} with factor dims {:?}",
                amplitudes.len(),
                dims
            )));
        }
        Ok(Self { data: DVector::from_vec(amplitudes), dims })
    }

    pub fn from_dvector(data: DVector<C64>, dims: Vec<usize>) -> Result<Self> {
        Self::new(data.iter().copied().collect(), dims)
    }

    /// Single-factor ket from a slice of amplitudes.
    pub fn ket(amplitudes: &[C64]) -> Self {
        Self { data: DVector::from_column_slice(amplitudes), dims: vec![amplitudes.len()] }
    }

    /// Real single-factor ket.
    pub fn ket_real(amplitudes: &[f64]) -> Self {
        Self::ket(&amplitudes.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>())
    }

    /// Computational basis state `|index⟩` of a single factor.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = DVector::from_element(dim, C64::ZERO);
        v[index] = C64::ONE;
        Self { data: v, dims: vec![dim] }
    }

    pub fn data(&self) -> &DVector<C64> {
        &self.data
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn amp(&self, i: usize) -> C64 {
        self.data[i]
    }

    pub fn norm(&self) -> f64 {
        self.data.norm()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= tol::NORM
    }

    pub fn assert_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::NotNormalized(self.norm()))
        }
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm();
        if n < 1e-300 {
            return Err(Error::NotNormalized(n));
        }
        self.data /= c(n, 0.0);
        Ok(self)
    }

    /// Reinterpret the factor structure without touching amplitudes.
    pub fn reshaped(mut self, dims: Vec<usize>) -> Result<Self> {
        if dims.iter().product::<usize>() != self.len() || dims.is_empty() {
            return Err(Error::DimensionMismatch(format!(
                "cannot view length-{} vector with dims {:?}",
                self.len(),
                dims
            )));
        }
        self.dims = dims;
        Ok(self)
    }

    /// `⟨self|other⟩` (conjugate-linear in `self`).
    pub fn inner(&self, other: &Self) -> C64 {
        assert_eq!(self.len(), other.len(), "inner product length mismatch");
        self.data.dotc(&other.data)
    }

    /// Tensor product; `self` becomes the slowest-varying block of factors.
    pub fn kron(&self, other: &Self) -> Self {
        let mut data = DVector::from_element(self.len() * other.len(), C64::ZERO);
        for (i, a) in self.data.iter().enumerate() {
            for (j, b) in other.data.iter().enumerate() {
                data[i * other.len() + j] = a * b;
            }
        }
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self { data, dims }
    }

    pub fn scaled(mut self, z: C64) -> Self {
        self.data *= z;
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "vector sum length mismatch");
        Self { data: &self.data + &other.data, dims: self.dims.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "vector difference length mismatch");
        Self { data: &self.data - &other.data, dims: self.dims.clone() }
    }

    /// Fix the global phase so the first nonzero amplitude is real-positive.
    pub fn canonical_phase(mut self) -> Self {
        if let Some(z) = self.data.iter().find(|z| z.norm() > 1e-14) {
            let phase = z / z.norm();
            self.data /= phase;
        }
        self
    }

    /// The projector `|v⟩⟨v|`.
    pub fn density(&self) -> ComplexOperator {
        let m = &self.data * self.data.adjoint();
        ComplexOperator { mat: m, dims_out: self.dims.clone(), dims_in: self.dims.clone() }
    }

    /// Reshape into a matrix splitting the factor list after `left_factors`
    /// factors (rows run over the leading factors).
    pub fn as_matrix(&self, left_factors: usize) -> DMatrix<C64> {
        assert!(left_factors > 0 && left_factors < self.dims.len());
        let rows: usize = self.dims[..left_factors].iter().product();
        let cols: usize = self.dims[left_factors..].iter().product();
        DMatrix::from_fn(rows, cols, |r, k| self.data[r * cols + k])
    }
}

// ---------------------------------------------------------------------------
// ComplexOperator
// ---------------------------------------------------------------------------

/// A dense complex matrix with tensor-factor dimension lists on both sides.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexOperator {
    mat: DMatrix<C64>,
    dims_out: Vec<usize>,
    dims_in: Vec<usize>,
}

impl ComplexOperator {
    pub fn new(mat: DMatrix<C64>, dims_out: Vec<usize>, dims_in: Vec<usize>) -> Result<Self> {
        if dims_out.iter().product::<usize>() != mat.nrows()
            || dims_in.iter().product::<usize>() != mat.ncols()
            || dims_out.is_empty()
            || dims_in.is_empty()
        {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix with dims_out {:?}, dims_in {:?}",
                mat.nrows(),
                mat.ncols(),
                dims_out,
                dims_in
            )));
        }
        Ok(Self { mat, dims_out, dims_in })
    }

    /// Square operator with identical input/output factorization.
    pub fn square(mat: DMatrix<C64>, dims: Vec<usize>) -> Result<Self> {
        Self::new(mat, dims.clone(), dims)
    }

    /// Square single-factor operator from row-major entries.
    pub fn from_rows(dim: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {dim}x{dim} matrix",
                entries.len()
            )));
        }
        let mat = DMatrix::from_fn(dim, dim, |r, c_| entries[r * dim + c_]);
        Self::square(mat, vec![dim])
    }

    pub fn identity(dims: &[usize]) -> Self {
        let d: usize = dims.iter().product();
        Self { mat: DMatrix::identity(d, d), dims_out: dims.to_vec(), dims_in: dims.to_vec() }
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.mat
    }

    pub fn dims_in(&self) -> &[usize] {
        &self.dims_in
    }

    pub fn dims_out(&self) -> &[usize] {
        &self.dims_out
    }

    pub fn dim_in(&self) -> usize {
        self.mat.ncols()
    }

    pub fn dim_out(&self) -> usize {
        self.mat.nrows()
    }

    pub fn is_square(&self) -> bool {
        self.mat.is_square()
    }

    pub fn reshaped(mut self, dims_out: Vec<usize>, dims_in: Vec<usize>) -> Result<Self> {
        if dims_out.iter().product::<usize>() != self.mat.nrows()
            || dims_in.iter().product::<usize>() != self.mat.ncols()
        {
            return Err(Error::DimensionMismatch(format!(
                "cannot view {}x{} operator with dims {:?} / {:?}",
                self.mat.nrows(),
                self.mat.ncols(),
                dims_out,
                dims_in
            )));
        }
        self.dims_out = dims_out;
        self.dims_in = dims_in;
        Ok(self)
    }

    pub fn dagger(&self) -> Self {
        Self {
            mat: self.mat.adjoint(),
            dims_out: self.dims_in.clone(),
            dims_in: self.dims_out.clone(),
        }
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.mat.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_unitary(&self) -> bool {
        if !self.mat.is_square() {
            return false;
        }
        let d = self.mat.ncols();
        let g = self.mat.adjoint() * &self.mat - DMatrix::<C64>::identity(d, d);
        g.iter().map(|z| z.norm()).fold(0.0, f64::max) <= tol::HERM
    }

    pub fn is_hermitian(&self) -> bool {
        if !self.mat.is_square() {
            return false;
        }
        let g = &self.mat - self.mat.adjoint();
        g.iter().map(|z| z.norm()).fold(0.0, f64::max) <= tol::HERM
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim_in() != other.dim_out() {
            return Err(Error::DimensionMismatch(format!(
                "composing {}x{} with {}x{}",
                self.dim_out(),
                self.dim_in(),
                other.dim_out(),
                other.dim_in()
            )));
        }
        Ok(Self {
            mat: &self.mat * &other.mat,
            dims_out: self.dims_out.clone(),
            dims_in: other.dims_in.clone(),
        })
    }

    pub fn apply(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if self.dim_in() != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "applying {}x{} operator to length-{} vector",
                self.dim_out(),
                self.dim_in(),
                v.len()
            )));
        }
        Ok(ComplexVector { data: &self.mat * &v.data, dims: self.dims_out.clone() })
    }

    /// Tensor product; `self` becomes the slowest-varying block of factors.
    pub fn kron(&self, other: &Self) -> Self {
        let mat = self.mat.kronecker(&other.mat);
        let mut dims_out = self.dims_out.clone();
        dims_out.extend_from_slice(&other.dims_out);
        let mut dims_in = self.dims_in.clone();
        dims_in.extend_from_slice(&other.dims_in);
        Self { mat, dims_out, dims_in }
    }

    pub fn scaled(mut self, z: C64) -> Self {
        self.mat *= z;
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.mat.shape(), other.mat.shape(), "operator sum shape mismatch");
        Self { mat: &self.mat + &other.mat, dims_out: self.dims_out.clone(), dims_in: self.dims_in.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.mat.shape(), other.mat.shape(), "operator difference shape mismatch");
        Self { mat: &self.mat - &other.mat, dims_out: self.dims_out.clone(), dims_in: self.dims_in.clone() }
    }

    /// Integer power by repeated squaring (square operators only).
    pub fn pow(&self, mut e: u64) -> Self {
        assert!(self.is_square(), "pow of a non-square operator");
        let mut acc = Self::identity(&self.dims_in);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base).expect("square compose");
            }
            base = base.compose(&base).expect("square compose");
            e >>= 1;
        }
        acc
    }

    /// Partial trace keeping the factors listed in `keep` (original order).
    ///
    /// Requires a square operator with matching input/output factorization.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        if self.dims_in != self.dims_out || !self.mat.is_square() {
            return Err(Error::DimensionMismatch(
                "partial trace requires a square operator with equal factor lists".into(),
            ));
        }
        let dims = &self.dims_in;
        let nf = dims.len();
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        for &f in &keep {
            if f >= nf {
                return Err(Error::BadFactorIndex { index: f, nfactors: nf });
            }
        }
        if keep.is_empty() {
            return Err(Error::BadFactorIndex { index: 0, nfactors: nf });
        }
        let traced: Vec<usize> = (0..nf).filter(|f| !keep.contains(f)).collect();
        let kdims: Vec<usize> = keep.iter().map(|&f| dims[f]).collect();
        let tdims: Vec<usize> = traced.iter().map(|&f| dims[f]).collect();
        let kd: usize = kdims.iter().product();
        let td: usize = tdims.iter().product();
        let full_strides = strides(dims);

        let flat = |kmulti: &[usize], tmulti: &[usize]| -> usize {
            let mut idx = 0;
            for (pos, &f) in keep.iter().enumerate() {
                idx += kmulti[pos] * full_strides[f];
            }
            for (pos, &f) in traced.iter().enumerate() {
                idx += tmulti[pos] * full_strides[f];
            }
            idx
        };

        let mut out = DMatrix::from_element(kd, kd, C64::ZERO);
        for r in 0..kd {
            let rm = unrank(r, &kdims);
            for col in 0..kd {
                let cm = unrank(col, &kdims);
                let mut acc = C64::ZERO;
                for t in 0..td {
                    let tm = unrank(t, &tdims);
                    acc += self.mat[(flat(&rm, &tm), flat(&cm, &tm))];
                }
                out[(r, col)] = acc;
            }
        }
        Self::square(out, kdims)
    }
}

// ---------------------------------------------------------------------------
// Eigendecomposition / SVD
// ---------------------------------------------------------------------------

/// Eigendecomposition of a hermitian operator: real ascending eigenvalues
/// and orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub vectors: DMatrix<C64>,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.vectors.nrows()
    }

    pub fn eigenvector(&self, k: usize) -> ComplexVector {
        let col = self.vectors.column(k);
        ComplexVector {
            data: DVector::from_iterator(self.dim(), col.iter().copied()),
            dims: vec![self.dim()],
        }
    }

    pub fn is_orthonormal(&self) -> bool {
        let d = self.vectors.ncols();
        let g = self.vectors.adjoint() * &self.vectors - DMatrix::<C64>::identity(d, d);
        g.iter().map(|z| z.norm()).fold(0.0, f64::max) <= tol::HERM
    }
}

/// Hermitian eigendecomposition (eigenvalues ascending).
pub fn eigh(h: &ComplexOperator) -> Result<EigenSystem> {
    if !h.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    let se = nalgebra::SymmetricEigen::try_new(h.mat.clone(), f64::EPSILON, tol::SOLVER_MAX_ITER)
        .ok_or(Error::NoConvergence)?;
    let d = se.eigenvalues.len();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].partial_cmp(&se.eigenvalues[b]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vectors = DMatrix::from_element(d, d, C64::ZERO);
    for (j, &i) in order.iter().enumerate() {
        vectors.set_column(j, &se.eigenvectors.column(i));
    }
    Ok(EigenSystem { eigenvalues, vectors })
}

/// Singular value decomposition `m = U · diag(s) · V†`.
#[derive(Debug, Clone)]
pub struct SvdData {
    pub u: DMatrix<C64>,
    /// Nonnegative singular values, descending.
    pub singulars: Vec<f64>,
    pub v_h: DMatrix<C64>,
}

pub fn svd(m: &ComplexOperator) -> Result<SvdData> {
    svd_matrix(&m.mat)
}

/// Thin SVD via the hermitian eigendecomposition of the smaller Gram
/// matrix (`MM†` or `M†M`). nalgebra's native complex `try_svd` returns
/// grossly wrong singular values on some complex inputs, so it is not
/// used; the Gram route also delivers the squared singular values (the
/// Schmidt weights) without squaring error.
pub fn svd_matrix(m: &DMatrix<C64>) -> Result<SvdData> {
    let (rows, cols) = m.shape();
    let k = rows.min(cols);
    let left_smaller = rows <= cols;
    let gram = if left_smaller { m * m.adjoint() } else { m.adjoint() * m };
    let gram = ComplexOperator::square(
        (&gram + gram.adjoint()) * C64::new(0.5, 0.0),
        vec![k],
    )?;
    let es = eigh(&gram)?;

    // eigenvalues below the Gram route's resolution (ε·λ_max) are
    // indistinguishable from zero; clamping keeps √ from lifting the
    // noise floor to √ε
    let floor = es.eigenvalues.last().copied().unwrap_or(0.0).max(0.0) * 1e-13;
    let mut singulars = Vec::with_capacity(k);
    let mut small = DMatrix::from_element(k, k, C64::ZERO); // eigvec side
    for i in 0..k {
        let lam = es.eigenvalues[k - 1 - i]; // descending
        singulars.push(if lam > floor { lam.sqrt() } else { 0.0 });
        small.set_column(i, &es.vectors.column(k - 1 - i));
    }

    // derive the other side column by column; complete the null space by
    // Gram–Schmidt so both factors stay orthonormal
    let other_dim = rows.max(cols);
    let mut other = DMatrix::from_element(other_dim, k, C64::ZERO);
    let cutoff = f64::EPSILON.sqrt() * singulars.first().copied().unwrap_or(0.0).max(1.0);
    for i in 0..k {
        let col = if singulars[i] > cutoff {
            let w = if left_smaller {
                m.adjoint() * small.column(i)
            } else {
                m * small.column(i)
            };
            w / C64::new(singulars[i], 0.0)
        } else {
            // any unit vector orthogonal to the columns found so far
            let mut found = DVector::from_element(other_dim, C64::ZERO);
            for e in 0..other_dim {
                let mut cand = DVector::from_element(other_dim, C64::ZERO);
                cand[e] = C64::ONE;
                for j in 0..i {
                    let overlap = other.column(j).dotc(&cand);
                    cand -= other.column(j) * overlap;
                }
                if cand.norm() > 0.5 {
                    found = cand.normalize();
                    break;
                }
            }
            found
        };
        other.set_column(i, &col);
    }

    let (u, v) = if left_smaller { (small, other) } else { (other, small) };
    Ok(SvdData { u, singulars, v_h: v.adjoint() })
}

/// `Σ_k e^{−i E_k t} |k⟩⟨k|` over the given orthonormal eigenbasis columns.
pub fn unitary_from_spectrum(
    energies: &[f64],
    basis: &DMatrix<C64>,
    t: i64,
) -> Result<ComplexOperator> {
    let d = basis.nrows();
    if !basis.is_square() || energies.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "{} energies with a {}x{} basis",
            energies.len(),
            basis.nrows(),
            basis.ncols()
        )));
    }
    let gram = basis.adjoint() * basis - DMatrix::<C64>::identity(d, d);
    if gram.iter().map(|z| z.norm()).fold(0.0, f64::max) > tol::HERM {
        return Err(Error::NonOrthonormalBasis);
    }
    let phases = DMatrix::from_fn(d, d, |r, c_| {
        if r == c_ {
            C64::from_polar(1.0, -energies[r] * t as f64)
        } else {
            C64::ZERO
        }
    });
    let mat = basis * phases * basis.adjoint();
    ComplexOperator::square(mat, vec![d])
}

/// `e^{−iH}` for hermitian `H`, via eigendecomposition.
pub fn exp_minus_i_hermitian(h: &ComplexOperator) -> Result<ComplexOperator> {
    let es = eigh(h)?;
    let d = es.dim();
    let phases = DMatrix::from_fn(d, d, |r, c_| {
        if r == c_ {
            C64::from_polar(1.0, -es.eigenvalues[r])
        } else {
            C64::ZERO
        }
    });
    let mat = &es.vectors * phases * es.vectors.adjoint();
    Ok(ComplexOperator {
        mat,
        dims_out: h.dims_out.clone(),
        dims_in: h.dims_in.clone(),
    })
}

/// The Fourier clock states `|k̃⟩ = N^{−1/2} Σ_t e^{i2πkt/N} |t⟩`.
pub fn dft_states(n: usize) -> Vec<ComplexVector> {
    assert!(n >= 1, "dft_states requires N >= 1");
    let norm = 1.0 / (n as f64).sqrt();
    (0..n)
        .map(|k| {
            let amps: Vec<C64> = (0..n)
                .map(|t| C64::from_polar(norm, 2.0 * std::f64::consts::PI * (k * t) as f64 / n as f64))
                .collect();
            ComplexVector::ket(&amps)
        })
        .collect()
}

/// Matrix whose columns are the Fourier clock states.
pub fn fourier_matrix(n: usize) -> DMatrix<C64> {
    let cols = dft_states(n);
    DMatrix::from_fn(n, n, |t, k| cols[k].amp(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn rng(seed: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(seed)
    }

    #[test]
    fn kron_identity_case() {
        let a = ComplexOperator::identity(&[2]);
        let k = a.kron(&a);
        assert_eq!(k.dims_in(), &[2, 2]);
        let diff = (k.matrix() - DMatrix::<C64>::identity(4, 4))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(diff == 0.0);
    }

    #[test]
    fn kron_basis_bookkeeping() {
        let v = ComplexVector::basis(2, 0).kron(&ComplexVector::basis(2, 1));
        assert_eq!(v.dims(), &[2, 2]);
        assert_eq!(v.amp(1), C64::ONE);
        for i in [0usize, 2, 3] {
            assert_eq!(v.amp(i), C64::ZERO);
        }
    }

    // quadruple-loop direct tensor-product oracle
    #[test]
    fn kron_matches_elementwise_definition() {
        let mut r = rng(11);
        for _ in 0..5 {
            let a = random::haar_unitary(2, &mut r);
            let b = random::haar_unitary(2, &mut r);
            let k = a.kron(&b);
            for i in 0..2 {
                for j in 0..2 {
                    for p in 0..2 {
                        for q in 0..2 {
                            let lhs = k.matrix()[(i * 2 + p, j * 2 + q)];
                            let rhs = a.matrix()[(i, j)] * b.matrix()[(p, q)];
                            assert!((lhs - rhs).norm() <= 1e-14);
                        }
                    }
                }
            }
        }
    }

    proptest::proptest! {
        // kron associativity on random small operators
        #[test]
        fn kron_associative(seed in 0u64..200) {
            let mut r = rng(seed);
            let a = random::haar_unitary(2, &mut r);
            let b = random::haar_unitary(3, &mut r);
            let cc = random::haar_unitary(2, &mut r);
            let lhs = a.kron(&b).kron(&cc);
            let rhs = a.kron(&b.kron(&cc));
            let diff = lhs.sub(&rhs).max_abs();
            proptest::prop_assert!(diff <= 1e-13);
        }
    }

    #[test]
    fn partial_trace_product_state() {
        let mut r = rng(3);
        let rho_a = random::random_state(2, &mut r).density();
        let rho_b = random::random_state(3, &mut r).density();
        let joint = rho_a.kron(&rho_b);
        let got_b = joint.partial_trace(&[1]).unwrap();
        assert!(got_b.sub(&rho_b).max_abs() <= 1e-12);
        let got_a = joint.partial_trace(&[0]).unwrap();
        assert!(got_a.sub(&rho_a).max_abs() <= 1e-12);
    }

    #[test]
    fn partial_trace_bell_state() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phi = ComplexVector::ket_real(&[s, 0.0, 0.0, s]).reshaped(vec![2, 2]).unwrap();
        let rho = phi.density();
        let red = rho.partial_trace(&[0]).unwrap();
        let half = ComplexOperator::identity(&[2]).scaled(C64::new(0.5, 0.0));
        assert!(red.sub(&half).max_abs() <= 1e-14);
    }

    // explicit nested-sum oracle on a 3-factor state
    #[test]
    fn partial_trace_matches_index_summation() {
        let mut r = rng(17);
        let psi = random::random_state_dims(&[2, 3, 2], &mut r);
        let rho = psi.density();
        let got = rho.partial_trace(&[0, 2]).unwrap();
        // direct sum over the middle factor
        let mut want = DMatrix::from_element(4, 4, C64::ZERO);
        for a in 0..2 {
            for c1 in 0..2 {
                for ap in 0..2 {
                    for cp in 0..2 {
                        let mut acc = C64::ZERO;
                        for b in 0..3 {
                            let i = a * 6 + b * 2 + c1;
                            let j = ap * 6 + b * 2 + cp;
                            acc += psi.amp(i) * psi.amp(j).conj();
                        }
                        want[(a * 2 + c1, ap * 2 + cp)] = acc;
                    }
                }
            }
        }
        let diff = (got.matrix() - &want).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(diff <= 1e-13);
        // trace preserved
        assert!((got.trace().re - 1.0).abs() <= 1e-12 && got.trace().im.abs() <= 1e-12);
    }

    #[test]
    fn partial_trace_bad_factor() {
        let rho = ComplexOperator::identity(&[2, 2]);
        assert!(matches!(
            rho.partial_trace(&[5]),
            Err(Error::BadFactorIndex { .. })
        ));
    }

    #[test]
    fn svd_trivial_cases() {
        let id = ComplexOperator::identity(&[3]);
        let s = svd(&id).unwrap();
        for v in &s.singulars {
            assert!((v - 1.0).abs() <= 1e-12);
        }
        let d = ComplexOperator::from_rows(
            2,
            &[c(3.0, 0.0), C64::ZERO, C64::ZERO, C64::ZERO],
        )
        .unwrap();
        let s = svd(&d).unwrap();
        assert!((s.singulars[0] - 3.0).abs() <= 1e-12);
        assert!(s.singulars[1].abs() <= 1e-12);
    }

    // reconstruction oracle on a random rectangular complex matrix
    #[test]
    fn svd_reconstructs() {
        let mut r = rng(5);
        let m = DMatrix::from_fn(4, 6, |_, _| random::random_complex(&mut r));
        let s = svd_matrix(&m).unwrap();
        let k = s.singulars.len();
        let sig = DMatrix::from_fn(k, k, |i, j| if i == j { c(s.singulars[i], 0.0) } else { C64::ZERO });
        let rec = &s.u * sig * &s.v_h;
        let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let diff = (&rec - &m).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(diff <= 1e-10 * scale);
        for w in s.singulars.windows(2) {
            assert!(w[0] >= w[1]);
        }
    }

    // regression: complex rank-1 matrices with generic phases must give
    // a single unit singular value (nalgebra's own complex SVD fails
    // badly here, which is why svd_matrix goes through the Gram matrix)
    #[test]
    fn svd_rank_one_phase_matrices() {
        let mut r = rng(6);
        for trial in 0..200 {
            let rows = 2 + (trial % 3);
            let cols = 3 + (trial % 13);
            let v = random::random_state(rows, &mut r);
            let phases: Vec<C64> = (0..cols)
                .map(|_| {
                    let z = random::random_complex(&mut r);
                    z / z.norm() / (cols as f64).sqrt()
                })
                .collect();
            let m = DMatrix::from_fn(rows, cols, |i, j| v.amp(i) * phases[j]);
            let s = svd_matrix(&m).unwrap();
            assert!((s.singulars[0] - 1.0).abs() <= 1e-12, "trial {trial}");
            for &x in &s.singulars[1..] {
                assert!(x.abs() <= 1e-12, "trial {trial}");
            }
            let k = s.singulars.len();
            let sig = DMatrix::from_fn(
                k,
                k,
                |i, j| if i == j { c(s.singulars[i], 0.0) } else { C64::ZERO },
            );
            let rec = &s.u * sig * &s.v_h;
            let diff = (&rec - &m).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(diff <= 1e-11, "trial {trial}");
            // both factors orthonormal, including completed null columns
            let gu = s.u.adjoint() * &s.u;
            let gv = &s.v_h * s.v_h.adjoint();
            for g in [gu, gv] {
                let dev = (&g - DMatrix::<C64>::identity(k, k))
                    .iter()
                    .map(|z| z.norm())
                    .fold(0.0, f64::max);
                assert!(dev <= 1e-11, "trial {trial}");
            }
        }
    }

    #[test]
    fn eigh_pauli_z_and_zero() {
        let z = ComplexOperator::from_rows(2, &[C64::ONE, C64::ZERO, C64::ZERO, -C64::ONE]).unwrap();
        let es = eigh(&z).unwrap();
        assert!((es.eigenvalues[0] + 1.0).abs() <= 1e-12);
        assert!((es.eigenvalues[1] - 1.0).abs() <= 1e-12);

        let zero = ComplexOperator::square(DMatrix::from_element(3, 3, C64::ZERO), vec![3]).unwrap();
        let es = eigh(&zero).unwrap();
        assert!(es.eigenvalues.iter().all(|e| e.abs() <= 1e-14));
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        let m = ComplexOperator::from_rows(2, &[C64::ZERO, C64::ONE, C64::ZERO, C64::ZERO]).unwrap();
        assert!(matches!(eigh(&m), Err(Error::NotHermitian)));
    }

    // trace oracle + reconstruction on a random hermitian matrix
    #[test]
    fn eigh_trace_and_reconstruction() {
        let mut r = rng(7);
        let h = random::random_hermitian(8, &mut r);
        let es = eigh(&h).unwrap();
        let sum: f64 = es.eigenvalues.iter().sum();
        assert!((sum - h.trace().re).abs() <= 1e-10);
        assert!(es.is_orthonormal());
        // Σ E_k |k⟩⟨k| = H
        let mut rec = DMatrix::from_element(8, 8, C64::ZERO);
        for k in 0..8 {
            let v = es.vectors.column(k);
            rec += (v * v.adjoint()).scale(es.eigenvalues[k]);
        }
        let diff = (&rec - h.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(diff <= tol::EIG);
        // per-pair residual
        for k in 0..8 {
            let v = es.eigenvector(k);
            let res = h.apply(&v).unwrap().sub(&v.scaled(c(es.eigenvalues[k], 0.0)));
            assert!(res.norm() <= tol::EIG);
        }
    }

    #[test]
    fn unitary_from_spectrum_cases() {
        let basis = DMatrix::<C64>::identity(2, 2);
        // t = 0 is the identity
        let u0 = unitary_from_spectrum(&[0.3, 1.7], &basis, 0).unwrap();
        assert!(u0.sub(&ComplexOperator::identity(&[2])).max_abs() <= 1e-14);
        // H = πZ at t = 1 gives -1
        let u = unitary_from_spectrum(&[std::f64::consts::PI, -std::f64::consts::PI], &basis, 1).unwrap();
        let minus = ComplexOperator::identity(&[2]).scaled(c(-1.0, 0.0));
        assert!(u.sub(&minus).max_abs() <= 1e-12);
    }

    // repeated-multiplication oracle
    #[test]
    fn unitary_from_spectrum_powers() {
        let mut r = rng(23);
        let h = random::random_hermitian(3, &mut r);
        let es = eigh(&h).unwrap();
        let u1 = unitary_from_spectrum(&es.eigenvalues, &es.vectors, 1).unwrap();
        let u5 = unitary_from_spectrum(&es.eigenvalues, &es.vectors, 5).unwrap();
        assert!(u5.sub(&u1.pow(5)).max_abs() <= 1e-10);
        assert!(u5.is_unitary());
    }

    #[test]
    fn unitary_from_spectrum_rejects_bad_basis() {
        let mut basis = DMatrix::<C64>::identity(2, 2);
        basis[(0, 0)] = c(2.0, 0.0);
        assert!(matches!(
            unitary_from_spectrum(&[0.0, 1.0], &basis, 1),
            Err(Error::NonOrthonormalBasis)
        ));
    }

    #[test]
    fn dft_states_small() {
        let one = dft_states(1);
        assert_eq!(one.len(), 1);
        assert!((one[0].amp(0) - C64::ONE).norm() <= 1e-15);

        let two = dft_states(2);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((two[0].amp(0).re - s).abs() <= 1e-15 && (two[0].amp(1).re - s).abs() <= 1e-15);
        assert!((two[1].amp(0).re - s).abs() <= 1e-15 && (two[1].amp(1).re + s).abs() <= 1e-15);
    }

    // Gram-matrix oracle
    #[test]
    fn dft_states_orthonormal() {
        let states = dft_states(5);
        for (k, a) in states.iter().enumerate() {
            for (l, b) in states.iter().enumerate() {
                let g = a.inner(b);
                let want = if k == l { C64::ONE } else { C64::ZERO };
                assert!((g - want).norm() <= 1e-13);
            }
        }
    }
}
