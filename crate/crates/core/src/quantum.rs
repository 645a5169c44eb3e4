//! Reduced density matrices, spectra and per-state entanglement measures of
//! pure states on a multi-partite factorization.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::partition::{disjoint, FactorList, PartitionError, Selector};

/// Largest matrix side handed to the eigensolver or materialised as a
/// reduced density matrix.
pub const DEFAULT_SPECTRAL_CAP: usize = 2048;

/// Tolerance on the squared norm of a [`PureState`].
pub const NORM_TOL: f64 = 1e-12;

/// Eigenvalues in `[-CLAMP_TOL, 0)` are rounding noise and become 0; anything
/// more negative is a solver failure.
pub const CLAMP_TOL: f64 = 1e-8;

/// Mutual information values in `[-MI_TOL, 0)` are reported as 0.
pub const MI_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("state has {len} amplitudes but the factors multiply to {total}")]
    LengthMismatch { len: usize, total: String },
    #[error("state is not normalized: squared norm {norm_sq}")]
    NotNormalized { norm_sq: f64 },
    #[error(
        "{what} dimension {size} exceeds the cap {cap}; use spectrum_of, which diagonalizes the smaller side"
    )]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("eigenvalue {value} is below -{CLAMP_TOL}; eigensolver result is unusable")]
    NegativeEigenvalue { value: f64 },
    #[error("spectrum sums to {sum}, not 1")]
    BadTrace { sum: f64 },
    #[error("entropy order q must be > 0 and != 1, got {0}")]
    BadOrder(f64),
    #[error("collections overlap: {a} and {b} share a factor")]
    Overlap { a: String, b: String },
    #[error("mutual information {value} is negative beyond tolerance")]
    NegativeInfo { value: f64 },
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

pub type Result<T> = std::result::Result<T, QuantumError>;

/// A normalized vector on `H_0 (x) ... (x) H_{N-1}`, row-major.
#[derive(Clone, Debug)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
    factors: FactorList,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>, factors: FactorList) -> Result<Self> {
        if factors.total_usize() != Some(amplitudes.len()) {
            return Err(QuantumError::LengthMismatch {
                len: amplitudes.len(),
                total: factors.total().to_string(),
            });
        }
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(QuantumError::NotNormalized { norm_sq });
        }
        Ok(PureState {
            amplitudes,
            factors,
        })
    }

    /// Scales `amplitudes` to unit norm.
    pub fn normalized(mut amplitudes: Vec<Complex64>, factors: FactorList) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(QuantumError::NotNormalized {
                norm_sq: norm * norm,
            });
        }
        let inv = 1.0 / norm;
        for z in &mut amplitudes {
            *z *= inv;
        }
        PureState::new(amplitudes, factors)
    }

    /// The basis state with the given flat index.
    pub fn basis(factors: FactorList, index: usize) -> Result<Self> {
        let n = factors.total_usize().unwrap_or(usize::MAX);
        let mut amps = vec![Complex64::new(0.0, 0.0); n];
        amps[index] = Complex64::new(1.0, 0.0);
        PureState::new(amps, factors)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn factors(&self) -> &FactorList {
        &self.factors
    }

    /// Tensor product `self (x) other`, factors concatenated.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let mut dims = self.factors.dims().to_vec();
        dims.extend_from_slice(other.factors.dims());
        let mut amps = Vec::with_capacity(self.amplitudes.len() * other.amplitudes.len());
        for x in &self.amplitudes {
            for y in &other.amplitudes {
                amps.push(x * y);
            }
        }
        PureState::new(amps, FactorList::new(dims)?)
    }

    /// The amplitudes arranged as an `n_K x n_{K-bar}` matrix, rows indexed by
    /// the kept multi-index and columns by the complement multi-index.
    pub fn reshape(&self, keep: &Selector) -> DMatrix<Complex64> {
        let dims = self.factors.dims();
        let rows = dim_usize(keep.kept_dim());
        let cols = dim_usize(keep.complement_dim());
        // Strides of each factor within the kept or complement multi-index.
        let mut stride = vec![0usize; dims.len()];
        let (mut sk, mut sc) = (1usize, 1usize);
        for j in (0..dims.len()).rev() {
            if keep.contains(j) {
                stride[j] = sk;
                sk *= dims[j] as usize;
            } else {
                stride[j] = sc;
                sc *= dims[j] as usize;
            }
        }
        let mut out = DMatrix::zeros(rows, cols);
        let mut digits = vec![0u64; dims.len()];
        let (mut a, mut c) = (0usize, 0usize);
        for &amp in &self.amplitudes {
            out[(a, c)] = amp;
            for j in (0..dims.len()).rev() {
                let slot = if keep.contains(j) { &mut a } else { &mut c };
                digits[j] += 1;
                if digits[j] < dims[j] {
                    *slot += stride[j];
                    break;
                }
                digits[j] = 0;
                *slot -= (dims[j] as usize - 1) * stride[j];
            }
        }
        out
    }
}

fn dim_usize(d: &num_bigint::BigUint) -> usize {
    use num_traits::ToPrimitive;
    d.to_usize()
        .expect("dimension of a materialised state fits in usize")
}

/// A reduced density matrix `rho_K`.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    /// Largest `|rho[a,b] - conj(rho[b,a])|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                worst = worst.max((self.entries[(a, b)] - self.entries[(b, a)].conj()).norm());
            }
        }
        worst
    }

    /// Full spectrum of this matrix (all `n_K` eigenvalues).
    pub fn spectrum(&self) -> Result<Spectrum> {
        Spectrum::from_raw(hermitian_eigenvalues(self.entries.clone()), self.dim())
    }
}

/// `rho_K[a,b] = sum_c psi[idx(a,c)] conj(psi[idx(b,c)])`, evaluated with an
/// explicit loop.
pub fn partial_trace(state: &PureState, keep: &Selector) -> Result<DensityMatrix> {
    partial_trace_with_cap(state, keep, DEFAULT_SPECTRAL_CAP)
}

pub fn partial_trace_with_cap(
    state: &PureState,
    keep: &Selector,
    cap: usize,
) -> Result<DensityMatrix> {
    let rows = dim_usize(keep.kept_dim());
    if rows > cap {
        return Err(QuantumError::CapExceeded {
            what: "kept subsystem",
            size: rows,
            cap,
        });
    }
    let psi = state.reshape(keep);
    let cols = psi.ncols();
    let mut rho = DMatrix::zeros(rows, rows);
    for a in 0..rows {
        for b in a..rows {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in 0..cols {
                acc += psi[(a, c)] * psi[(b, c)].conj();
            }
            rho[(a, b)] = acc;
            rho[(b, a)] = acc.conj();
        }
    }
    Ok(DensityMatrix { entries: rho })
}

/// Eigenvalues of a Hermitian matrix, unsorted.
pub fn hermitian_eigenvalues(m: DMatrix<Complex64>) -> Vec<f64> {
    match m.nrows() {
        0 => Vec::new(),
        1 => vec![m[(0, 0)].re],
        _ => m.symmetric_eigenvalues().iter().copied().collect(),
    }
}

/// Eigenvalues of a reduced density matrix, in descending order.
///
/// Only the nonzero part is guaranteed to be stored: `values` may be shorter
/// than `dim`, in which case the remaining eigenvalues are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
    dim: usize,
}

impl Spectrum {
    /// A full spectrum from explicit eigenvalues.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let dim = values.len();
        Spectrum::from_raw(values, dim)
    }

    /// Clamps solver output, sorts descending and checks the trace.
    pub fn from_raw(mut values: Vec<f64>, dim: usize) -> Result<Self> {
        for v in &mut values {
            if *v < -CLAMP_TOL || v.is_nan() {
                return Err(QuantumError::NegativeEigenvalue { value: *v });
            }
            *v = v.clamp(0.0, 1.0);
        }
        values.sort_by(|a, b| b.total_cmp(a));
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > 1e-10 {
            return Err(QuantumError::BadTrace { sum });
        }
        Ok(Spectrum { values, dim })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// All `dim` eigenvalues, zero-padded.
    pub fn padded(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.resize(self.dim.max(v.len()), 0.0);
        v
    }

    fn power_sum(&self, q: f64) -> f64 {
        self.values
            .iter()
            .filter(|&&l| l > 0.0)
            .map(|&l| l.powf(q))
            .sum()
    }
}

/// Spectrum of `rho_K`, diagonalizing whichever of `Psi Psi^dag` and
/// `Psi^dag Psi` is smaller.
pub fn spectrum_of(state: &PureState, sel: &Selector) -> Result<Spectrum> {
    spectrum_of_with_cap(state, sel, DEFAULT_SPECTRAL_CAP)
}

pub fn spectrum_of_with_cap(state: &PureState, sel: &Selector, cap: usize) -> Result<Spectrum> {
    let rows = dim_usize(sel.kept_dim());
    let cols = dim_usize(sel.complement_dim());
    let side = rows.min(cols);
    if side > cap {
        return Err(QuantumError::CapExceeded {
            what: "smaller side",
            size: side,
            cap,
        });
    }
    let psi = state.reshape(sel);
    let gram = if rows <= cols {
        &psi * psi.adjoint()
    } else {
        psi.adjoint() * &psi
    };
    Spectrum::from_raw(hermitian_eigenvalues(gram), rows)
}

/// `-sum lambda ln lambda` with `0 ln 0 = 0`.
pub fn von_neumann(spec: &Spectrum) -> f64 {
    -spec
        .values
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| l * l.ln())
        .sum::<f64>()
}

fn check_order(q: f64) -> Result<()> {
    if q.is_nan() || q <= 0.0 || q == 1.0 {
        return Err(QuantumError::BadOrder(q));
    }
    Ok(())
}

/// `(1 - sum lambda^q) / (q - 1)`.
pub fn tsallis(spec: &Spectrum, q: f64) -> Result<f64> {
    check_order(q)?;
    Ok((1.0 - spec.power_sum(q)) / (q - 1.0))
}

/// `ln(sum lambda^q) / (1 - q)`.
pub fn renyi(spec: &Spectrum, q: f64) -> Result<f64> {
    check_order(q)?;
    Ok(spec.power_sum(q).ln() / (1.0 - q))
}

pub fn purity(spec: &Spectrum) -> f64 {
    spec.values.iter().map(|l| l * l).sum()
}

/// `2 (1 - tr rho^2)`.
pub fn tangle(spec: &Spectrum) -> f64 {
    (2.0 * (1.0 - purity(spec))).max(0.0)
}

pub fn concurrence(spec: &Spectrum) -> f64 {
    tangle(spec).sqrt()
}

/// `((sum sqrt(lambda))^2 - 1) / 2`.
pub fn pure_state_negativity(spec: &Spectrum) -> f64 {
    let s: f64 = spec.values.iter().map(|l| l.sqrt()).sum();
    ((s * s - 1.0) / 2.0).max(0.0)
}

/// `S_A + S_B - S_{AB}` for disjoint collections.
pub fn mutual_info(state: &PureState, a: &Selector, b: &Selector) -> Result<f64> {
    mutual_info_with_cap(state, a, b, DEFAULT_SPECTRAL_CAP)
}

pub fn mutual_info_with_cap(
    state: &PureState,
    a: &Selector,
    b: &Selector,
    cap: usize,
) -> Result<f64> {
    if !disjoint(a, b) {
        return Err(QuantumError::Overlap {
            a: a.to_string(),
            b: b.to_string(),
        });
    }
    let ab = state.factors().union(a, b)?;
    let sa = von_neumann(&spectrum_of_with_cap(state, a, cap)?);
    let sb = von_neumann(&spectrum_of_with_cap(state, b, cap)?);
    let sab = von_neumann(&spectrum_of_with_cap(state, &ab, cap)?);
    let value = sa + sb - sab;
    if value < -MI_TOL {
        return Err(QuantumError::NegativeInfo { value });
    }
    Ok(value.max(0.0))
}

/// Per-state operations, for the claims ledger.
pub const OPERATIONS: &[&str] = &[
    "partial_trace",
    "spectrum_of",
    "von_neumann",
    "tsallis",
    "renyi",
    "purity",
    "tangle",
    "concurrence",
    "pure_state_negativity",
    "mutual_info",
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::{sample_haar_state, stream_rng, Caps};
    use proptest::prelude::*;
    use std::f64::consts::LN_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn dims(s: &str) -> FactorList {
        s.parse().unwrap()
    }

    fn bell() -> PureState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(vec![c(h), c(0.0), c(0.0), c(h)], dims("2x2")).unwrap()
    }

    fn seeded(d: &str, seed: u64, index: u64) -> PureState {
        sample_haar_state(&dims(d), &mut stream_rng(seed, index), &Caps::default()).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    fn nonzero(s: &Spectrum) -> Vec<f64> {
        s.values().iter().copied().filter(|&l| l > 1e-12).collect()
    }

    #[test]
    fn state_validation() {
        assert!(matches!(
            PureState::new(vec![c(1.0)], dims("2")),
            Err(QuantumError::LengthMismatch { .. })
        ));
        assert!(matches!(
            PureState::new(vec![c(1.0), c(1.0)], dims("2")),
            Err(QuantumError::NotNormalized { .. })
        ));
        let s = PureState::normalized(vec![c(3.0), c(4.0)], dims("2")).unwrap();
        assert!((s.amplitudes()[0].re - 0.6).abs() < 1e-15);
    }

    #[test]
    fn reshape_is_row_major() {
        let f = dims("2x3x2");
        let amps: Vec<Complex64> = (0..12).map(|i| c(i as f64)).collect();
        let s = PureState {
            amplitudes: amps,
            factors: f.clone(),
        };
        let m = s.reshape(&f.select(&[0, 2]).unwrap());
        // flat = i0*6 + i1*2 + i2; row = i0*2 + i2; col = i1
        for i0 in 0..2 {
            for i1 in 0..3 {
                for i2 in 0..2 {
                    assert_eq!(m[(i0 * 2 + i2, i1)].re, (i0 * 6 + i1 * 2 + i2) as f64);
                }
            }
        }
    }

    #[test]
    fn partial_trace_examples() {
        let f = dims("2x2");
        let prod = PureState::basis(f.clone(), 0).unwrap();
        let rho = partial_trace(&prod, &f.select(&[0]).unwrap()).unwrap();
        assert_eq!(rho.entries()[(0, 0)], c(1.0));
        assert_eq!(rho.entries()[(1, 1)], c(0.0));
        assert_eq!(rho.entries()[(0, 1)], c(0.0));

        let rho = partial_trace(&bell(), &f.select(&[0]).unwrap()).unwrap();
        assert!((rho.entries()[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((rho.entries()[(1, 1)].re - 0.5).abs() < 1e-15);
        assert!(rho.entries()[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn partial_trace_schmidt_on_2x3() {
        let f = dims("2x3");
        let s = seeded("2x3", 11, 0);
        let r1 = partial_trace(&s, &f.select(&[1]).unwrap()).unwrap();
        assert!((r1.trace() - c(1.0)).norm() < 1e-12);
        assert!(r1.hermiticity_defect() < 1e-12);
        let big = r1.spectrum().unwrap();
        let small = partial_trace(&s, &f.select(&[0]).unwrap())
            .unwrap()
            .spectrum()
            .unwrap();
        let mut padded = small.values().to_vec();
        padded.resize(3, 0.0);
        assert!(close(big.values(), &padded, 1e-10));
    }

    #[test]
    fn partial_trace_cap() {
        let f = dims("4x2");
        let s = seeded("4x2", 1, 0);
        let err = partial_trace_with_cap(&s, &f.select(&[0]).unwrap(), 3).unwrap_err();
        assert!(matches!(
            err,
            QuantumError::CapExceeded {
                size: 4,
                cap: 3,
                ..
            }
        ));
        assert!(spectrum_of_with_cap(&s, &f.select(&[0]).unwrap(), 3).is_ok());
        assert!(spectrum_of_with_cap(&s, &f.select(&[0]).unwrap(), 1).is_err());
    }

    #[test]
    fn spectrum_examples() {
        let f = dims("2x2");
        let s = spectrum_of(&bell(), &f.select(&[0]).unwrap()).unwrap();
        assert!(close(s.values(), &[0.5, 0.5], 1e-15));
        let prod = PureState::basis(dims("2x3x2"), 5).unwrap();
        for keep in [&[0usize][..], &[1], &[0, 2], &[1, 2]] {
            let sel = prod.factors().select(keep).unwrap();
            let sp = spectrum_of(&prod, &sel).unwrap();
            assert_eq!(sp.values()[0], 1.0);
            assert!(sp.values()[1..].iter().all(|&l| l == 0.0));
            assert_eq!(sp.padded().len(), dim_usize(sel.kept_dim()));
        }
    }

    #[test]
    fn gram_and_partial_trace_agree() {
        for d in ["2x2x4", "3x4", "4x4x4", "2x3x4"] {
            let f = dims(d);
            for idx in 0..5 {
                let s = seeded(d, 3, idx);
                for mask in 1u32..(1 << f.len()) - 1 {
                    let keep: Vec<usize> = (0..f.len()).filter(|i| mask & (1 << i) != 0).collect();
                    let sel = f.select(&keep).unwrap();
                    let gram = spectrum_of(&s, &sel).unwrap();
                    let full = partial_trace(&s, &sel).unwrap().spectrum().unwrap();
                    assert!(
                        close(&nonzero(&gram), &nonzero(&full), 1e-9),
                        "{d} {keep:?}"
                    );
                    let comp = spectrum_of(&s, &f.complement(&sel)).unwrap();
                    assert!(close(&nonzero(&gram), &nonzero(&comp), 1e-9));
                }
            }
        }
    }

    #[test]
    fn eigen_residuals() {
        let f = dims("4x4x4");
        let s = seeded("4x4x4", 5, 2);
        let rho = partial_trace(&s, &f.select(&[0, 1]).unwrap()).unwrap();
        let eig = rho.entries().clone().symmetric_eigen();
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            let v = eig.eigenvectors.column(k);
            let r = rho.entries() * v - v * Complex64::new(lambda, 0.0);
            assert!(r.norm() <= 1e-8);
        }
    }

    #[test]
    fn schmidt_on_224() {
        let f = dims("2x2x4");
        for idx in 0..20 {
            let s = seeded("2x2x4", 9, idx);
            let a = spectrum_of(&s, &f.select(&[0, 1]).unwrap()).unwrap();
            let b = spectrum_of(&s, &f.select(&[2]).unwrap()).unwrap();
            assert!(close(&nonzero(&a), &nonzero(&b), 1e-9));
        }
    }

    #[test]
    fn lumped_identities_on_224() {
        let f = dims("2x2x4");
        let sel = |k: &[usize]| f.select(k).unwrap();
        for idx in 0..50 {
            let s = seeded("2x2x4", 21, idx);
            let sa = von_neumann(&spectrum_of(&s, &sel(&[0])).unwrap());
            let sc = von_neumann(&spectrum_of(&s, &sel(&[2])).unwrap());
            let i_a_bc = mutual_info(&s, &sel(&[0]), &sel(&[1, 2])).unwrap();
            let i_c_ab = mutual_info(&s, &sel(&[2]), &sel(&[0, 1])).unwrap();
            assert!((i_a_bc - 2.0 * sa).abs() < 1e-9);
            assert!((i_c_ab - 2.0 * sc).abs() < 1e-9);
            assert!(sa <= 2f64.ln() + 1e-9);
        }
    }

    #[test]
    fn von_neumann_examples() {
        assert_eq!(von_neumann(&Spectrum::new(vec![1.0, 0.0]).unwrap()), 0.0);
        let s = von_neumann(&Spectrum::new(vec![0.5, 0.5]).unwrap());
        assert!((s - LN_2).abs() < 1e-15);
        let s = von_neumann(&Spectrum::new(vec![0.5, 0.25, 0.25]).unwrap());
        assert!((s - 1.5 * LN_2).abs() < 1e-15);
    }

    #[test]
    fn order_q_examples() {
        let half = Spectrum::new(vec![0.5, 0.5]).unwrap();
        assert!((tsallis(&half, 2.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((renyi(&half, 2.0).unwrap() - LN_2).abs() < 1e-15);
        let pure = Spectrum::new(vec![1.0, 0.0]).unwrap();
        for q in [0.5, 2.0, 3.0] {
            assert_eq!(tsallis(&pure, q).unwrap(), 0.0);
            assert_eq!(renyi(&pure, q).unwrap(), 0.0);
        }
        for q in [0.0, -1.0, 1.0, f64::NAN] {
            assert!(matches!(tsallis(&half, q), Err(QuantumError::BadOrder(_))));
            assert!(matches!(renyi(&half, q), Err(QuantumError::BadOrder(_))));
        }
    }

    #[test]
    fn purity_tangle_concurrence_negativity() {
        let pure = Spectrum::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(
            (purity(&pure), tangle(&pure), concurrence(&pure)),
            (1.0, 0.0, 0.0)
        );
        assert_eq!(pure_state_negativity(&pure), 0.0);
        let half = Spectrum::new(vec![0.5, 0.5]).unwrap();
        assert!((purity(&half) - 0.5).abs() < 1e-15);
        assert!((tangle(&half) - 1.0).abs() < 1e-15);
        assert!((concurrence(&half) - 1.0).abs() < 1e-15);
        assert!((pure_state_negativity(&half) - 0.5).abs() < 1e-15);
        let three = Spectrum::new(vec![0.5, 0.25, 0.25]).unwrap();
        let expected = ((0.5f64.sqrt() + 1.0).powi(2) - 1.0) / 2.0;
        assert!((pure_state_negativity(&three) - expected).abs() < 1e-15);
    }

    #[test]
    fn mutual_info_examples() {
        let pairs = bell().tensor(&bell()).unwrap();
        let f = pairs.factors().clone();
        let i = mutual_info(&pairs, &f.select(&[0]).unwrap(), &f.select(&[2]).unwrap()).unwrap();
        assert!(i.abs() < 1e-12);
        let f2 = dims("2x2");
        let i = mutual_info(
            &bell(),
            &f2.select(&[0]).unwrap(),
            &f2.select(&[1]).unwrap(),
        )
        .unwrap();
        assert!((i - 2.0 * LN_2).abs() < 1e-12);
        for idx in 0..10 {
            let s = seeded("2x2", 4, idx);
            let sa = von_neumann(&spectrum_of(&s, &f2.select(&[0]).unwrap()).unwrap());
            let i = mutual_info(&s, &f2.select(&[0]).unwrap(), &f2.select(&[1]).unwrap()).unwrap();
            assert!((i - 2.0 * sa).abs() < 1e-9);
        }
        assert!(matches!(
            mutual_info(
                &pairs,
                &f.select(&[0, 1]).unwrap(),
                &f.select(&[1]).unwrap()
            ),
            Err(QuantumError::Overlap { .. })
        ));
    }

    #[test]
    fn clamping() {
        let s = Spectrum::from_raw(vec![1.0 + 1e-11, -1e-11], 2).unwrap();
        assert_eq!(s.values(), &[1.0, 0.0]);
        assert!(matches!(
            Spectrum::from_raw(vec![1.1, -0.1], 2),
            Err(QuantumError::NegativeEigenvalue { .. })
        ));
        assert!(matches!(
            Spectrum::from_raw(vec![0.5, 0.4], 2),
            Err(QuantumError::BadTrace { .. })
        ));
    }

    fn random_spectrum() -> impl Strategy<Value = Spectrum> {
        prop::collection::vec(0.0f64..1.0, 1..12).prop_filter_map("nonzero", |w| {
            let t: f64 = w.iter().sum();
            (t > 1e-3).then(|| Spectrum::new(w.iter().map(|x| x / t).collect()).unwrap())
        })
    }

    proptest! {
        #[test]
        fn measure_identities(s in random_spectrum()) {
            let vn = von_neumann(&s);
            prop_assert!(vn >= -1e-15 && vn <= (s.dim() as f64).ln() + 1e-12);
            prop_assert!((tangle(&s) - 2.0 * tsallis(&s, 2.0).unwrap()).abs() <= 1e-12);
            prop_assert!((tsallis(&s, 1.0001).unwrap() - vn).abs() <= 1e-3);
            prop_assert!((tsallis(&s, 0.9999).unwrap() - vn).abs() <= 1e-3);
            prop_assert!((renyi(&s, 1.0001).unwrap() - vn).abs() <= 1e-3);
            prop_assert!((renyi(&s, 0.9999).unwrap() - vn).abs() <= 1e-3);
            prop_assert!(pure_state_negativity(&s) >= 0.0);
            prop_assert!((concurrence(&s).powi(2) - tangle(&s)).abs() <= 1e-12);
        }
    }
}
