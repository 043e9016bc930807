//! Finite Fourier and convolution algebra on `Z_N` and `Z_N x Z_N`.
//!
//! Normalizations:
//!
//! * [`dft`] is unnormalized, `f^(k) = sum_l f(l) e^{-2 pi i k l / N}`; [`idft`] carries `1/N`.
//! * [`dft2`] is unnormalized; [`idft2`] carries `1/N^2`.
//! * [`sdft`] carries `1/N` and is an involution.
//!
//! All index arithmetic is modulo `N`, with negative indices reduced by
//! Euclidean remainder.

use std::f64::consts::PI;
use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use crate::error::{Error, Result};

/// Reduce an integer index into `0..n`.
#[inline]
pub fn wrap(i: isize, n: usize) -> usize {
    i.rem_euclid(n as isize) as usize
}

/// `e^{2 pi i k / n}`.
#[inline]
pub fn unit_root(k: isize, n: usize) -> Complex64 {
    let k = wrap(k, n) as f64;
    Complex64::from_polar(1.0, 2.0 * PI * k / n as f64)
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// A length-`N` complex vector indexed by `Z_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal(Vec<Complex64>);

impl Signal {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(i) = values.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Signal(values))
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Signal::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> Complex64) -> Self {
        assert!(n >= 1, "signal length must be at least 1");
        Signal((0..n).map(f).collect())
    }

    pub fn zeros(n: usize) -> Self {
        Signal::from_fn(n, |_| Complex64::new(0.0, 0.0))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex64> {
        self.0.iter()
    }

    /// Value at an arbitrary integer index, reduced mod `N`.
    #[inline]
    pub fn at(&self, i: isize) -> Complex64 {
        self.0[wrap(i, self.0.len())]
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Signal {
        Signal(self.0.iter().map(|&z| f(z)).collect())
    }

    pub fn conj(&self) -> Signal {
        self.map(|z| z.conj())
    }

    pub fn scale(&self, s: Complex64) -> Signal {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: f64) -> Signal {
        self.map(|z| z * s)
    }

    /// `t -> f(-t)`.
    pub fn reflect(&self) -> Signal {
        Signal::from_fn(self.len(), |t| self.at(-(t as isize)))
    }

    pub fn mul(&self, other: &Signal) -> Result<Signal> {
        check_len(self.len(), other.len())?;
        Ok(Signal(
            self.0.iter().zip(&other.0).map(|(a, b)| a * b).collect(),
        ))
    }

    pub fn add(&self, other: &Signal) -> Result<Signal> {
        check_len(self.len(), other.len())?;
        Ok(Signal(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn sub(&self, other: &Signal) -> Result<Signal> {
        check_len(self.len(), other.len())?;
        Ok(Signal(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    /// `<f, g> = sum_t f(t) conj(g(t))`.
    pub fn inner(&self, other: &Signal) -> Result<Complex64> {
        check_len(self.len(), other.len())?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a * b.conj()).sum())
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn sum(&self) -> Complex64 {
        self.0.iter().sum()
    }

    /// `max_t |f(t) - g(t)|`.
    pub fn max_abs_diff(&self, other: &Signal) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<usize> for Signal {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Signal {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.0[i]
    }
}

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::LengthMismatch { expected, got });
    }
    Ok(())
}

/// An `N x N` complex array, row index `u`, column index `v`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix2D {
    n: usize,
    data: Vec<Complex64>,
}

impl Matrix2D {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "matrix size must be at least 1");
        Matrix2D {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(n >= 1, "matrix size must be at least 1");
        let mut data = Vec::with_capacity(n * n);
        for u in 0..n {
            for v in 0..n {
                data.push(f(u, v));
            }
        }
        Matrix2D { n, data }
    }

    /// Build from row-major values; validates shape and finiteness.
    pub fn from_rows(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        check_len(n * n, data.len())?;
        if let Some(i) = data.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Matrix2D { n, data })
    }

    pub fn identity(n: usize) -> Self {
        Matrix2D::from_fn(n, |u, v| {
            if u == v {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn at(&self, u: isize, v: isize) -> Complex64 {
        self.data[wrap(u, self.n) * self.n + wrap(v, self.n)]
    }

    pub fn row(&self, u: usize) -> Signal {
        Signal(self.data[u * self.n..(u + 1) * self.n].to_vec())
    }

    pub fn column(&self, v: usize) -> Signal {
        Signal::from_fn(self.n, |u| self[(u, v)])
    }

    pub fn transpose(&self) -> Matrix2D {
        Matrix2D::from_fn(self.n, |u, v| self[(v, u)])
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Matrix2D {
        Matrix2D {
            n: self.n,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Matrix2D {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: f64) -> Matrix2D {
        self.map(|z| z * s)
    }

    fn zip_with(
        &self,
        other: &Matrix2D,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Matrix2D> {
        check_len(self.n, other.n)?;
        Ok(Matrix2D {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// Entrywise product.
    pub fn hadamard(&self, other: &Matrix2D) -> Result<Matrix2D> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn add(&self, other: &Matrix2D) -> Result<Matrix2D> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix2D) -> Result<Matrix2D> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Matrix-vector product `K f`.
    pub fn matvec(&self, f: &Signal) -> Result<Signal> {
        check_len(self.n, f.len())?;
        Ok(Signal::from_fn(self.n, |u| {
            self.data[u * self.n..(u + 1) * self.n]
                .iter()
                .zip(f.iter())
                .map(|(k, x)| k * x)
                .sum()
        }))
    }

    /// Matrix product `self * other`.
    pub fn matmul(&self, other: &Matrix2D) -> Result<Matrix2D> {
        check_len(self.n, other.n)?;
        Ok(Matrix2D::from_nalgebra(
            &(self.to_nalgebra() * other.to_nalgebra()),
        ))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix2D {
        Matrix2D::from_fn(self.n, |u, v| self[(v, u)].conj())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.n, self.n, &self.data)
    }

    pub fn from_nalgebra(m: &DMatrix<Complex64>) -> Matrix2D {
        assert_eq!(m.nrows(), m.ncols(), "matrix must be square");
        Matrix2D::from_fn(m.nrows(), |u, v| m[(u, v)])
    }
}

impl Index<(usize, usize)> for Matrix2D {
    type Output = Complex64;
    fn index(&self, (u, v): (usize, usize)) -> &Complex64 {
        &self.data[u * self.n + v]
    }
}

impl IndexMut<(usize, usize)> for Matrix2D {
    fn index_mut(&mut self, (u, v): (usize, usize)) -> &mut Complex64 {
        &mut self.data[u * self.n + v]
    }
}

/// `||x - y||_F / ||y||_F`, or the absolute error when `y` is zero.
pub fn relative_frobenius_error(x: &Matrix2D, y: &Matrix2D) -> f64 {
    let diff = x.sub(y).expect("matrix sizes must agree").frobenius_norm();
    let reference = y.frobenius_norm();
    if reference > 0.0 {
        diff / reference
    } else {
        diff
    }
}

/// Rectangular lattice `alpha Z_N x beta Z_N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Lattice {
    n: usize,
    alpha: usize,
    beta: usize,
}

impl Lattice {
    pub fn new(n: usize, alpha: usize, beta: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        for d in [alpha, beta] {
            if d == 0 || n % d != 0 {
                return Err(Error::NonDivisor { n, divisor: d });
            }
        }
        Ok(Lattice { n, alpha, beta })
    }

    /// The lattice with `alpha = beta = 1` (no subsampling).
    pub fn full(n: usize) -> Result<Self> {
        Lattice::new(n, 1, 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn beta(&self) -> usize {
        self.beta
    }

    /// Number of time nodes, `A = N / alpha`.
    pub fn a_count(&self) -> usize {
        self.n / self.alpha
    }

    /// Number of frequency nodes, `B = N / beta`.
    pub fn b_count(&self) -> usize {
        self.n / self.beta
    }

    /// `N / (alpha beta)`.
    pub fn redundancy(&self) -> f64 {
        self.n as f64 / (self.alpha * self.beta) as f64
    }

    /// Every lattice whose constants both divide `n`.
    pub fn all_divisor_lattices(n: usize) -> Vec<Lattice> {
        let ds = divisors(n);
        let mut out = Vec::with_capacity(ds.len() * ds.len());
        for &alpha in &ds {
            for &beta in &ds {
                out.push(Lattice { n, alpha, beta });
            }
        }
        out
    }
}

fn fft_in_place(buf: &mut [Complex64], direction: FftDirection) {
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft(buf.len(), direction).process(buf);
}

/// Forward DFT, unnormalized.
pub fn dft(f: &Signal) -> Signal {
    let mut buf = f.0.clone();
    fft_in_place(&mut buf, FftDirection::Forward);
    Signal(buf)
}

/// Inverse DFT with the `1/N` factor.
pub fn idft(f: &Signal) -> Signal {
    let mut buf = f.0.clone();
    fft_in_place(&mut buf, FftDirection::Inverse);
    let s = 1.0 / buf.len() as f64;
    buf.iter_mut().for_each(|z| *z *= s);
    Signal(buf)
}

fn transform_2d(a: &Matrix2D, direction: FftDirection, scale: f64) -> Matrix2D {
    let n = a.n;
    let fft = FftPlanner::<f64>::new().plan_fft(n, direction);
    let mut rows = a.data.clone();
    for row in rows.chunks_mut(n) {
        fft.process(row);
    }
    let mut out = Matrix2D::zeros(n);
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    for v in 0..n {
        for u in 0..n {
            col[u] = rows[u * n + v];
        }
        fft.process(&mut col);
        for u in 0..n {
            out.data[u * n + v] = col[u] * scale;
        }
    }
    out
}

/// Two-dimensional DFT, unnormalized.
pub fn dft2(a: &Matrix2D) -> Matrix2D {
    transform_2d(a, FftDirection::Forward, 1.0)
}

/// Inverse two-dimensional DFT with the `1/N^2` factor.
pub fn idft2(a: &Matrix2D) -> Matrix2D {
    let n = a.n as f64;
    transform_2d(a, FftDirection::Inverse, 1.0 / (n * n))
}

/// Symplectic Fourier transform
/// `F_s a(u, v) = (1/N) sum_{k,l} a(k, l) e^{2 pi i (l u - k v) / N}`,
/// computed as `(1/N) F_2 a(v, -u)`.
pub fn sdft(a: &Matrix2D) -> Matrix2D {
    let n = a.n;
    let f2 = dft2(a);
    let s = 1.0 / n as f64;
    Matrix2D::from_fn(n, |u, v| f2.at(v as isize, -(u as isize)) * s)
}

/// Circular convolution `(f * g)(u) = sum_k f(u - k) g(k)`.
pub fn circ_conv(f: &Signal, g: &Signal) -> Result<Signal> {
    check_len(f.len(), g.len())?;
    let n = f.len();
    Ok(Signal::from_fn(n, |u| {
        (0..n)
            .map(|k| f.at(u as isize - k as isize) * g[k])
            .sum()
    }))
}

/// Two-dimensional circular convolution.
pub fn conv2(a: &Matrix2D, b: &Matrix2D) -> Result<Matrix2D> {
    check_len(a.n, b.n)?;
    let n = a.n;
    Ok(Matrix2D::from_fn(n, |u, v| {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n {
            for l in 0..n {
                acc += a.at(u as isize - k as isize, v as isize - l as isize) * b[(k, l)];
            }
        }
        acc
    }))
}

/// `(f ⊗ g)(u, v) = f(u) g(v)`.
pub fn tensor(f: &Signal, g: &Signal) -> Result<Matrix2D> {
    check_len(f.len(), g.len())?;
    Ok(Matrix2D::from_fn(f.len(), |u, v| f[u] * g[v]))
}

/// Kronecker delta at 0.
pub fn delta(n: usize) -> Signal {
    unit_impulse(n, 0)
}

/// Kronecker delta at `k mod n`.
pub fn unit_impulse(n: usize, k: isize) -> Signal {
    let k = wrap(k, n);
    Signal::from_fn(n, |t| {
        if t == k {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

pub fn ones(n: usize) -> Signal {
    Signal::from_fn(n, |_| Complex64::new(1.0, 0.0))
}

/// Indicator of the subgroup `alpha Z_N`.
pub fn char_subgroup(n: usize, alpha: usize) -> Result<Signal> {
    if n == 0 {
        return Err(Error::Empty);
    }
    if alpha == 0 || n % alpha != 0 {
        return Err(Error::NonDivisor { n, divisor: alpha });
    }
    Ok(Signal::from_fn(n, |t| {
        Complex64::new(if t % alpha == 0 { 1.0 } else { 0.0 }, 0.0)
    }))
}

/// Dirac comb of the lattice, `χ_{αZ_N}(u) χ_{βZ_N}(v)`.
pub fn impulse_train(lat: &Lattice) -> Matrix2D {
    let (alpha, beta) = (lat.alpha, lat.beta);
    Matrix2D::from_fn(lat.n, |u, v| {
        Complex64::new(
            if u % alpha == 0 && v % beta == 0 {
                1.0
            } else {
                0.0
            },
            0.0,
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_matrix, random_signal};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    /// Direct O(N^2) DFT, the oracle for the FFT-backed path.
    fn dft_direct(f: &Signal, sign: f64) -> Signal {
        let n = f.len();
        Signal::from_fn(n, |k| {
            (0..n)
                .map(|l| {
                    f[l] * Complex64::from_polar(
                        1.0,
                        sign * 2.0 * PI * ((k * l) % n) as f64 / n as f64,
                    )
                })
                .sum()
        })
    }

    fn sdft_direct(a: &Matrix2D) -> Matrix2D {
        let n = a.n();
        Matrix2D::from_fn(n, |u, v| {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                for l in 0..n {
                    acc += a[(k, l)] * unit_root((l * u) as isize - (k * v) as isize, n);
                }
            }
            acc / n as f64
        })
    }

    #[test]
    fn dft_of_delta_is_ones() {
        assert!(dft(&delta(7)).max_abs_diff(&ones(7)) < 1e-14);
    }

    #[test]
    fn dft_of_scaled_ones_is_delta() {
        let n = 9;
        let f = ones(n).scale_real(1.0 / n as f64);
        assert!(dft(&f).max_abs_diff(&delta(n)) < 1e-14);
    }

    #[test]
    fn dft_of_even_indicator_n4() {
        let f = Signal::from_real(&[1.0, 0.0, 1.0, 0.0]).unwrap();
        let expected = Signal::from_real(&[2.0, 0.0, 2.0, 0.0]).unwrap();
        assert!(dft(&f).max_abs_diff(&expected) < 1e-14);
        let chi = char_subgroup(4, 2).unwrap();
        assert!(dft(&chi).max_abs_diff(&chi.scale_real(2.0)) < 1e-14);
    }

    #[test]
    fn dft_matches_direct_sum() {
        for n in [1, 2, 5, 12, 31, 48] {
            let f = random_signal(n, n as u64);
            assert!(dft(&f).max_abs_diff(&dft_direct(&f, -1.0)) < 1e-11);
            let inv = dft_direct(&f, 1.0).scale_real(1.0 / n as f64);
            assert!(idft(&f).max_abs_diff(&inv) < 1e-12);
        }
    }

    #[test]
    fn idft_edge_cases() {
        let n = 16;
        assert!(idft(&delta(n)).max_abs_diff(&ones(n).scale_real(1.0 / 16.0)) < 1e-15);
        assert!(idft(&ones(n)).max_abs_diff(&delta(n)) < 1e-14);
        let f = random_signal(n, 3);
        assert!(idft(&dft(&f)).max_abs_diff(&f) < 1e-13);
    }

    #[test]
    fn dft2_of_corner_delta_is_ones() {
        let d = tensor(&delta(6), &delta(6)).unwrap();
        let all = tensor(&ones(6), &ones(6)).unwrap();
        assert!(dft2(&d).sub(&all).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn dft2_is_separable() {
        let a = random_matrix(8, 4);
        let f2 = dft2(&a);
        // rows first, then columns, each with the 1-D transform
        let rows = Matrix2D::from_fn(8, |u, v| dft(&a.row(u))[v]);
        let both = Matrix2D::from_fn(8, |u, v| dft(&rows.column(v))[u]);
        assert!(f2.sub(&both).unwrap().max_abs() < 1e-12);
        assert!(relative_frobenius_error(&idft2(&f2), &a) < 1e-14);
    }

    #[test]
    fn dft2_convolution_theorem() {
        let n = 8;
        let a = random_matrix(n, 10);
        let b = random_matrix(n, 11);
        let lhs = dft2(&a.hadamard(&b).unwrap());
        let rhs = conv2(&dft2(&a), &dft2(&b))
            .unwrap()
            .scale_real(1.0 / (n * n) as f64);
        assert!(relative_frobenius_error(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn poisson_summation_on_comb() {
        let lat = Lattice::new(12, 3, 2).unwrap();
        let (a, b) = (lat.a_count(), lat.b_count());
        let dual = impulse_train(&Lattice::new(12, a, b).unwrap());
        let lhs = dft2(&impulse_train(&lat));
        assert!(lhs.sub(&dual.scale_real((a * b) as f64)).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn sdft_symmetry_property() {
        let n = 12;
        let f = random_signal(n, 21);
        let g = random_signal(n, 22);
        let lhs = sdft_direct(&tensor(&f, &dft(&g)).unwrap());
        let rhs = tensor(&g, &dft(&f)).unwrap();
        assert!(relative_frobenius_error(&lhs, &rhs) < 1e-12);
        assert!(relative_frobenius_error(&sdft(&tensor(&f, &dft(&g)).unwrap()), &rhs) < 1e-12);
    }

    #[test]
    fn sdft_is_involution_and_matches_definition() {
        let a = random_matrix(8, 5);
        assert!(relative_frobenius_error(&sdft(&sdft(&a)), &a) < 1e-13);
        assert!(relative_frobenius_error(&sdft(&a), &sdft_direct(&a)) < 1e-13);
        // transpose form of the F_2 relation
        let via_transpose = Matrix2D::from_fn(8, |u, v| {
            dft2(&a.transpose()).at(-(u as isize), v as isize) / 8.0
        });
        assert!(relative_frobenius_error(&sdft(&a), &via_transpose) < 1e-13);
    }

    #[test]
    fn circular_convolution_basics() {
        let n = 10;
        let f = random_signal(n, 1);
        assert!(circ_conv(&f, &delta(n)).unwrap().max_abs_diff(&f) < 1e-15);
        let expected = ones(n).scale(f.sum());
        assert!(circ_conv(&ones(n), &f).unwrap().max_abs_diff(&expected) < 1e-12);
        assert!(matches!(
            circ_conv(&f, &delta(n + 1)),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn circular_convolution_theorem() {
        let n = 32;
        let f = random_signal(n, 8);
        let g = random_signal(n, 9);
        let lhs = dft(&circ_conv(&f, &g).unwrap());
        let rhs = dft(&f).mul(&dft(&g)).unwrap();
        assert!(lhs.sub(&rhs).unwrap().norm() / rhs.norm() < 1e-12);
    }

    #[test]
    fn conv2_identity_and_comb_self_convolution() {
        let a = random_matrix(6, 2);
        let id = tensor(&delta(6), &delta(6)).unwrap();
        assert!(relative_frobenius_error(&conv2(&a, &id).unwrap(), &a) < 1e-15);

        let lat = Lattice::new(6, 2, 3).unwrap();
        let sha = impulse_train(&lat);
        let expected = sha.scale_real((lat.a_count() * lat.b_count()) as f64);
        assert!(conv2(&sha, &sha).unwrap().sub(&expected).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn tensor_shapes() {
        let n = 5;
        let d = tensor(&delta(n), &delta(n)).unwrap();
        assert_eq!(d[(0, 0)], c(1.0));
        assert!((d.frobenius_norm() - 1.0).abs() < 1e-15);
        let f = random_signal(n, 4);
        let t = tensor(&ones(n), &f).unwrap();
        for u in 0..n {
            assert_eq!(t.row(u), f);
        }
        let h = tensor(&f, &delta(n)).unwrap();
        for u in 0..n {
            for v in 1..n {
                assert_eq!(h[(u, v)], c(0.0));
            }
        }
    }

    #[test]
    fn subgroup_indicators() {
        assert_eq!(
            char_subgroup(6, 2).unwrap(),
            Signal::from_real(&[1.0, 0.0, 1.0, 0.0, 1.0, 0.0]).unwrap()
        );
        assert_eq!(char_subgroup(7, 1).unwrap(), ones(7));
        assert!(matches!(
            char_subgroup(6, 4),
            Err(Error::NonDivisor { n: 6, divisor: 4 })
        ));
    }

    #[test]
    fn impulse_train_cases() {
        let all = impulse_train(&Lattice::new(4, 1, 1).unwrap());
        assert!(all.sub(&tensor(&ones(4), &ones(4)).unwrap()).unwrap().max_abs() == 0.0);
        let corner = impulse_train(&Lattice::new(4, 4, 4).unwrap());
        assert!(corner.sub(&tensor(&delta(4), &delta(4)).unwrap()).unwrap().max_abs() == 0.0);
        let sha = impulse_train(&Lattice::new(6, 2, 3).unwrap());
        let ones_at: Vec<(usize, usize)> = (0..6)
            .flat_map(|u| (0..6).map(move |v| (u, v)))
            .filter(|&(u, v)| sha[(u, v)] == c(1.0))
            .collect();
        assert_eq!(
            ones_at,
            vec![(0, 0), (0, 3), (2, 0), (2, 3), (4, 0), (4, 3)]
        );
    }

    #[test]
    fn lattice_validation() {
        let lat = Lattice::new(12, 3, 4).unwrap();
        assert_eq!((lat.a_count(), lat.b_count()), (4, 3));
        assert!((lat.redundancy() - 1.0).abs() < 1e-15);
        assert!(Lattice::new(12, 5, 1).is_err());
        assert!(Lattice::new(12, 0, 1).is_err());
        assert_eq!(Lattice::all_divisor_lattices(6).len(), 16);
    }

    #[test]
    fn signal_rejects_bad_input() {
        assert!(matches!(Signal::new(vec![]), Err(Error::Empty)));
        assert!(matches!(
            Signal::from_real(&[1.0, f64::NAN]),
            Err(Error::NonFinite(1))
        ));
        assert_eq!(wrap(-1, 5), 4);
        assert_eq!(wrap(-11, 5), 4);
    }
}
