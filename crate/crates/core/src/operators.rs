//! Operator representations: matrix kernels, spreading functions, LTI
//! filters and Gabor multipliers.
//!
//! The spreading function of an operator with kernel `K` is
//! `eta(u, v) = sum_k K(k, k - u) e^{-2 pi i k v / N}`. With this
//! normalization the identity has `eta = N (delta ⊗ delta)` and an LTI filter
//! with impulse response `h` has `eta = N (h ⊗ delta)`; the synthesis
//! `L = (1/N) sum_{k,l} eta(k, l) pi(k, l)` inverts it.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::algebra::{
    check_len, circ_conv, dft, idft, impulse_train, sdft, unit_root, Lattice, Matrix2D, Signal,
};
use crate::error::{Error, Result};
use crate::tf::stft;

/// A linear map on `C^N`, stored as its matrix `K` with `(K f)(u) = sum_v K(u, v) f(v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOp {
    kernel: Matrix2D,
}

impl LinearOp {
    pub fn new(kernel: Matrix2D) -> Self {
        LinearOp { kernel }
    }

    pub fn identity(n: usize) -> Self {
        LinearOp::new(Matrix2D::identity(n))
    }

    pub fn zero(n: usize) -> Self {
        LinearOp::new(Matrix2D::zeros(n))
    }

    /// Matrix of `pi(k, l) = M_l T_k`.
    pub fn tf_shift(n: usize, k: isize, l: isize) -> Self {
        let mut m = Matrix2D::zeros(n);
        for row in 0..n {
            let col = crate::algebra::wrap(row as isize - k, n);
            m[(row, col)] = unit_root(l * row as isize, n);
        }
        LinearOp::new(m)
    }

    pub fn n(&self) -> usize {
        self.kernel.n()
    }

    pub fn kernel(&self) -> &Matrix2D {
        &self.kernel
    }

    pub fn into_kernel(self) -> Matrix2D {
        self.kernel
    }

    pub fn apply(&self, f: &Signal) -> Result<Signal> {
        self.kernel.matvec(f)
    }

    pub fn sub(&self, other: &LinearOp) -> Result<LinearOp> {
        Ok(LinearOp::new(self.kernel.sub(&other.kernel)?))
    }
}

/// Convolution operator `H f = h * f`.
#[derive(Debug, Clone, PartialEq)]
pub struct LtiFilter {
    impulse_response: Signal,
}

impl LtiFilter {
    pub fn new(impulse_response: Signal) -> Self {
        LtiFilter { impulse_response }
    }

    /// Filter whose frequency response is `h_hat`.
    pub fn from_frequency_response(h_hat: &Signal) -> Self {
        LtiFilter::new(idft(h_hat))
    }

    pub fn n(&self) -> usize {
        self.impulse_response.len()
    }

    pub fn impulse_response(&self) -> &Signal {
        &self.impulse_response
    }

    pub fn frequency_response(&self) -> Signal {
        dft(&self.impulse_response)
    }

    /// Circulant matrix `K(u, v) = h(u - v)`.
    pub fn kernel(&self) -> LinearOp {
        let h = &self.impulse_response;
        LinearOp::new(Matrix2D::from_fn(h.len(), |u, v| {
            h.at(u as isize - v as isize)
        }))
    }
}

/// `h * f` by direct circular convolution.
pub fn lti_apply(flt: &LtiFilter, f: &Signal) -> Result<Signal> {
    circ_conv(&flt.impulse_response, f)
}

/// `idft(h_hat . f_hat)`.
pub fn lti_apply_spectral(flt: &LtiFilter, f: &Signal) -> Result<Signal> {
    check_len(flt.n(), f.len())?;
    Ok(idft(&flt.frequency_response().mul(&dft(f))?))
}

/// Gabor multiplier with analysis window `g1`, synthesis window `g2` and
/// mask (lower symbol) `a` on a rectangular lattice. Only mask entries at
/// lattice points influence the operator.
#[derive(Debug, Clone, PartialEq)]
pub struct GaborMultiplier {
    g1: Signal,
    g2: Signal,
    mask: Matrix2D,
    lattice: Lattice,
}

impl GaborMultiplier {
    pub fn new(g1: Signal, g2: Signal, mask: Matrix2D, lattice: Lattice) -> Result<Self> {
        let n = lattice.n();
        check_len(n, g1.len())?;
        check_len(n, g2.len())?;
        check_len(n, mask.n())?;
        Ok(GaborMultiplier {
            g1,
            g2,
            mask,
            lattice,
        })
    }

    pub fn g1(&self) -> &Signal {
        &self.g1
    }

    pub fn g2(&self) -> &Signal {
        &self.g2
    }

    pub fn mask(&self) -> &Matrix2D {
        &self.mask
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn n(&self) -> usize {
        self.lattice.n()
    }
}

/// Spreading coefficients `eta(u, v)`, `u` the time shift and `v` the frequency shift.
#[derive(Debug, Clone, PartialEq)]
pub struct SpreadingFunction {
    eta: Matrix2D,
}

impl SpreadingFunction {
    pub fn new(eta: Matrix2D) -> Self {
        SpreadingFunction { eta }
    }

    pub fn eta(&self) -> &Matrix2D {
        &self.eta
    }

    pub fn n(&self) -> usize {
        self.eta.n()
    }
}

pub fn kernel_to_spreading(op: &LinearOp) -> SpreadingFunction {
    let k = op.kernel();
    let n = k.n();
    let mut eta = Matrix2D::zeros(n);
    for u in 0..n {
        let diag = Signal::from_fn(n, |t| k.at(t as isize, t as isize - u as isize));
        let row = dft(&diag);
        for v in 0..n {
            eta[(u, v)] = row[v];
        }
    }
    SpreadingFunction::new(eta)
}

/// Inverse of [`kernel_to_spreading`]:
/// `K(m, n) = (1/N) sum_v eta(m - n, v) e^{2 pi i m v / N}`.
pub fn spreading_to_kernel(sf: &SpreadingFunction) -> LinearOp {
    let eta = sf.eta();
    let n = eta.n();
    let mut k = Matrix2D::zeros(n);
    for d in 0..n {
        let diag = idft(&eta.row(d));
        for m in 0..n {
            k[(m, crate::algebra::wrap(m as isize - d as isize, n))] = diag[m];
        }
    }
    LinearOp::new(k)
}

/// `(1/N) sum_{k,l} eta(k, l) pi(k, l)`, assembled term by term.
pub fn spreading_synthesis(sf: &SpreadingFunction) -> LinearOp {
    let eta = sf.eta();
    let n = eta.n();
    let scale = 1.0 / n as f64;
    let mut out = Matrix2D::zeros(n);
    for k in 0..n {
        for l in 0..n {
            let c = eta[(k, l)] * scale;
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            for row in 0..n {
                let col = crate::algebra::wrap(row as isize - k as isize, n);
                out[(row, col)] += c * unit_root((l * row) as isize, n);
            }
        }
    }
    LinearOp::new(out)
}

/// Literal lattice sum
/// `sum_{k<A} sum_{l<B} a(alpha k, beta l) V_{g1} f(alpha k, beta l) pi(alpha k, beta l) g2`.
pub fn gm_apply(gm: &GaborMultiplier, f: &Signal) -> Result<Signal> {
    let lat = gm.lattice();
    let n = lat.n();
    check_len(n, f.len())?;
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..lat.a_count() {
        let tk = (lat.alpha() * k) as isize;
        for l in 0..lat.b_count() {
            let fl = (lat.beta() * l) as isize;
            let a = gm.mask().at(tk, fl);
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            // <f, pi(tk, fl) g1>
            let coeff: Complex64 = (0..n)
                .map(|t| {
                    f[t] * (unit_root(fl * t as isize, n) * gm.g1().at(t as isize - tk)).conj()
                })
                .sum();
            let c = a * coeff;
            for (t, o) in out.iter_mut().enumerate() {
                *o += c * unit_root(fl * t as isize, n) * gm.g2().at(t as isize - tk);
            }
        }
    }
    Signal::new(out)
}

/// Matrix of a Gabor multiplier,
/// `K(u, v) = sum_{k,l} a(alpha k, beta l) conj(g1(v - alpha k)) g2(u - alpha k) e^{2 pi i beta l (u - v) / N}`.
///
/// The frequency sum only depends on `(k, u - v)` and is tabulated first.
pub fn gm_kernel(gm: &GaborMultiplier) -> LinearOp {
    let lat = gm.lattice();
    let n = lat.n();
    let (alpha, beta) = (lat.alpha(), lat.beta());
    let a_count = lat.a_count();

    // w[k][d] = sum_l a(alpha k, beta l) e^{2 pi i beta l d / N}
    let w: Vec<Vec<Complex64>> = (0..a_count)
        .map(|k| {
            (0..n)
                .map(|d| {
                    (0..lat.b_count())
                        .map(|l| {
                            gm.mask()[(alpha * k, beta * l)]
                                * unit_root((beta * l * d) as isize, n)
                        })
                        .sum()
                })
                .collect()
        })
        .collect();

    let g1c = gm.g1().conj();
    let g2 = gm.g2();
    let mut kernel = Matrix2D::zeros(n);
    for (k, wk) in w.iter().enumerate() {
        let shift = (alpha * k) as isize;
        if wk.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
            continue;
        }
        for u in 0..n {
            let g2u = g2.at(u as isize - shift);
            for v in 0..n {
                let d = crate::algebra::wrap(u as isize - v as isize, n);
                kernel[(u, v)] += g1c.at(v as isize - shift) * g2u * wk[d];
            }
        }
    }
    LinearOp::new(kernel)
}

/// `A_P(u, v) = sum_{l<alpha} sum_{k<beta} S(u + B k, v - A l)` with `S = sdft(mask)`.
pub fn mask_periodization(mask: &Matrix2D, lat: &Lattice) -> Result<Matrix2D> {
    check_len(lat.n(), mask.n())?;
    let s = sdft(mask);
    let (a, b) = (lat.a_count() as isize, lat.b_count() as isize);
    Ok(Matrix2D::from_fn(lat.n(), |u, v| {
        let mut acc = Complex64::new(0.0, 0.0);
        for l in 0..lat.alpha() as isize {
            for k in 0..lat.beta() as isize {
                acc += s.at(u as isize + b * k, v as isize - a * l);
            }
        }
        acc
    }))
}

/// `alpha beta sdft(mask . Ш)`, the second route to [`mask_periodization`].
pub fn mask_periodization_via_comb(mask: &Matrix2D, lat: &Lattice) -> Result<Matrix2D> {
    let sampled = mask.hadamard(&impulse_train(lat))?;
    Ok(sdft(&sampled).scale_real((lat.alpha() * lat.beta()) as f64))
}

/// True if `ap(u, v) = ap(u + B k, v + A l)` everywhere, up to `tol` (absolute).
pub fn is_lattice_periodic(ap: &Matrix2D, lat: &Lattice, tol: f64) -> bool {
    let (a, b) = (lat.a_count() as isize, lat.b_count() as isize);
    let n = ap.n();
    (0..n).all(|u| {
        (0..n).all(|v| {
            let x = ap[(u, v)];
            (0..lat.beta() as isize).all(|k| {
                (0..lat.alpha() as isize)
                    .all(|l| (ap.at(u as isize + b * k, v as isize + a * l) - x).norm() <= tol)
            })
        })
    })
}

/// Spreading function of a Gabor multiplier from the closed form
/// `(N / (alpha beta)) A_P(u, v) V_{g1} g2 (u, v)`.
pub fn gm_spreading(gm: &GaborMultiplier) -> SpreadingFunction {
    let lat = gm.lattice();
    let ap = mask_periodization(gm.mask(), lat).expect("validated sizes");
    let v = stft(gm.g2(), gm.g1()).expect("validated sizes");
    let eta = ap
        .hadamard(&v)
        .expect("validated sizes")
        .scale_real(lat.redundancy());
    SpreadingFunction::new(eta)
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct OpDistance {
    pub frobenius: f64,
    pub spectral: f64,
}

/// Frobenius and spectral norms of `K_x - K_y`.
pub fn op_distance(x: &LinearOp, y: &LinearOp) -> Result<OpDistance> {
    let d = x.sub(y)?;
    let spectral = singular_values(&d).first().copied().unwrap_or(0.0);
    Ok(OpDistance {
        frobenius: d.kernel().frobenius_norm(),
        spectral,
    })
}

/// All singular values, descending.
pub fn singular_values(op: &LinearOp) -> Vec<f64> {
    let svd = op.kernel().to_nalgebra().svd(false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().cloned().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// The `k` largest singular values, descending.
pub fn singular_spectrum(op: &LinearOp, k: usize) -> Result<Vec<f64>> {
    if k == 0 || k > op.n() {
        return Err(Error::OutOfRange {
            what: "k",
            value: k.to_string(),
            range: format!("1..={}", op.n()),
        });
    }
    let mut s = singular_values(op);
    s.truncate(k);
    Ok(s)
}

/// Largest singular value with its left singular vector.
pub fn leading_singular_pair(op: &LinearOp) -> (f64, Signal) {
    let svd = op.kernel().to_nalgebra().svd(true, false);
    let (idx, sigma) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, &s)| {
            if s > best.1 {
                (i, s)
            } else {
                best
            }
        });
    let u = svd.u.expect("requested left singular vectors");
    let col = u.column(idx);
    (sigma, Signal::from_fn(op.n(), |t| col[t]))
}

/// Largest singular value by power iteration on `K^* K`, started from a
/// deterministic vector. Independent of the SVD path.
pub fn spectral_norm_power(op: &LinearOp, max_iter: usize, tol: f64) -> f64 {
    let k = op.kernel().to_nalgebra();
    let kh = k.adjoint();
    let n = op.n();
    // deterministic start with energy on every coordinate
    let mut x = DVector::from_fn(n, |i, _| Complex64::new(1.0 + (i as f64 * 0.7).sin(), (i as f64 * 1.3).cos()));
    x /= Complex64::new(x.norm(), 0.0);
    let mut sigma_sq = 0.0;
    for _ in 0..max_iter {
        let y = &kh * (&k * &x);
        let norm = y.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let next = x.dotc(&y).re;
        x = y / Complex64::new(norm, 0.0);
        if (next - sigma_sq).abs() <= tol * next.abs() {
            sigma_sq = next;
            break;
        }
        sigma_sq = next;
    }
    sigma_sq.max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{
        delta, ones, relative_frobenius_error, tensor, unit_impulse, wrap,
    };
    use crate::random::{random_matrix, random_signal};
    use crate::tf::{modulate, tf_shift};

    /// Quadruple loop over the printed kernel formula.
    fn gm_kernel_literal(gm: &GaborMultiplier) -> Matrix2D {
        let lat = gm.lattice();
        let n = lat.n();
        Matrix2D::from_fn(n, |u, v| {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..lat.a_count() {
                let tk = (lat.alpha() * k) as isize;
                for l in 0..lat.b_count() {
                    acc += gm.mask()[(lat.alpha() * k, lat.beta() * l)]
                        * gm.g1().at(v as isize - tk).conj()
                        * gm.g2().at(u as isize - tk)
                        * unit_root((lat.beta() * l) as isize * (u as isize - v as isize), n);
                }
            }
            acc
        })
    }

    fn random_gm(lat: Lattice, seed: u64) -> GaborMultiplier {
        let n = lat.n();
        GaborMultiplier::new(
            random_signal(n, seed),
            random_signal(n, seed + 1000),
            random_matrix(n, seed + 2000),
            lat,
        )
        .unwrap()
    }

    #[test]
    fn spreading_of_identity() {
        let n = 8;
        let eta = kernel_to_spreading(&LinearOp::identity(n));
        let expected = tensor(&delta(n), &delta(n)).unwrap().scale_real(n as f64);
        assert!(eta.eta().sub(&expected).unwrap().max_abs() < 1e-13);
    }

    #[test]
    fn spreading_of_tf_shift_is_a_spike() {
        let n = 10;
        let (k0, l0) = (3, 7);
        let eta = kernel_to_spreading(&LinearOp::tf_shift(n, k0, l0));
        let expected = tensor(&unit_impulse(n, k0), &unit_impulse(n, l0))
            .unwrap()
            .scale_real(n as f64);
        assert!(eta.eta().sub(&expected).unwrap().max_abs() < 1e-12);
        // the matrix of pi(k, l) acts as tf_shift
        let f = random_signal(n, 1);
        let applied = LinearOp::tf_shift(n, k0, l0).apply(&f).unwrap();
        assert!(applied.max_abs_diff(&tf_shift(&f, k0, l0)) < 1e-14);
    }

    #[test]
    fn spreading_of_lti_is_first_column() {
        let n = 12;
        let h = random_signal(n, 2);
        let eta = kernel_to_spreading(&LtiFilter::new(h.clone()).kernel());
        let expected = tensor(&h, &delta(n)).unwrap().scale_real(n as f64);
        assert!(relative_frobenius_error(eta.eta(), &expected) < 1e-13);
        for u in 0..n {
            for v in 1..n {
                assert!(eta.eta()[(u, v)].norm() < 1e-12);
            }
        }
    }

    #[test]
    fn spreading_kernel_round_trip() {
        for n in [1, 5, 16, 33] {
            let op = LinearOp::new(random_matrix(n, n as u64));
            let back = spreading_to_kernel(&kernel_to_spreading(&op));
            assert!(relative_frobenius_error(back.kernel(), op.kernel()) < 1e-12);
        }
        let n = 6;
        let id = SpreadingFunction::new(tensor(&delta(n), &delta(n)).unwrap().scale_real(n as f64));
        assert!(spreading_to_kernel(&id).kernel().sub(&Matrix2D::identity(n)).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn spreading_to_kernel_of_lti_is_circulant() {
        let n = 9;
        let h = random_signal(n, 3);
        let sf = SpreadingFunction::new(tensor(&h, &delta(n)).unwrap().scale_real(n as f64));
        let k = spreading_to_kernel(&sf);
        let expected = LtiFilter::new(h).kernel();
        assert!(relative_frobenius_error(k.kernel(), expected.kernel()) < 1e-13);
    }

    #[test]
    fn synthesis_inverts_spreading() {
        for n in [4, 7, 16] {
            let op = LinearOp::new(random_matrix(n, 40 + n as u64));
            let synth = spreading_synthesis(&kernel_to_spreading(&op));
            assert!(relative_frobenius_error(synth.kernel(), op.kernel()) < 1e-12);
        }
    }

    #[test]
    fn lti_three_paths_agree() {
        let n = 24;
        let h = random_signal(n, 5);
        let f = random_signal(n, 6);
        let flt = LtiFilter::new(h);
        let direct = lti_apply(&flt, &f).unwrap();
        let spectral = lti_apply_spectral(&flt, &f).unwrap();
        let matrix = flt.kernel().apply(&f).unwrap();
        assert!(direct.max_abs_diff(&spectral) < 1e-12);
        assert!(direct.max_abs_diff(&matrix) < 1e-12);
        assert_eq!(lti_apply(&LtiFilter::new(delta(n)), &f).unwrap(), f);
    }

    #[test]
    fn ideal_lowpass_kills_out_of_band_tones() {
        let n = 32;
        let r = 5;
        let h_hat = Signal::from_fn(n, |v| {
            let dist = v.min(n - v);
            Complex64::new(if dist <= r { 1.0 } else { 0.0 }, 0.0)
        });
        let flt = LtiFilter::from_frequency_response(&h_hat);
        for l in [r + 1, 10, 16, n - r - 1] {
            let tone = modulate(&ones(n), l as isize);
            assert!(lti_apply(&flt, &tone).unwrap().max_abs() < 1e-12);
        }
        let tone = modulate(&ones(n), 3);
        assert!(lti_apply(&flt, &tone).unwrap().max_abs_diff(&tone) < 1e-12);
    }

    #[test]
    fn gm_apply_matches_kernel() {
        for (n, alpha, beta) in [(6, 2, 3), (8, 1, 1), (12, 4, 2), (12, 3, 6)] {
            let lat = Lattice::new(n, alpha, beta).unwrap();
            let gm = random_gm(lat, n as u64 * 7 + alpha as u64);
            let k = gm_kernel(&gm);
            assert!(relative_frobenius_error(k.kernel(), &gm_kernel_literal(&gm)) < 1e-12);
            let f = random_signal(n, 77);
            let lhs = gm_apply(&gm, &f).unwrap();
            let rhs = k.apply(&f).unwrap();
            assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * rhs.max_abs().max(1.0));
        }
    }

    #[test]
    fn gm_of_degenerate_windows() {
        // g1 = g2 = delta on the full lattice: only k = u = v contributes
        let n = 6;
        let lat = Lattice::full(n).unwrap();
        let mask = tensor(&ones(n), &ones(n)).unwrap();
        let gm = GaborMultiplier::new(delta(n), delta(n), mask, lat).unwrap();
        let k = gm_kernel(&gm);
        let f = random_signal(n, 8);
        assert!(gm_apply(&gm, &f).unwrap().max_abs_diff(&k.apply(&f).unwrap()) < 1e-12);
        // sum_l e^{2 pi i l (u - v) / N} = N delta(u - v)
        assert!(k.kernel().sub(&Matrix2D::identity(n).scale_real(n as f64)).unwrap().max_abs() < 1e-12);

        // all-ones mask with alpha = beta = 1 gives N delta(u - v) sum_k conj(g1(v - k)) g2(u - k)
        let g1 = random_signal(n, 9);
        let g2 = random_signal(n, 10);
        let mask = tensor(&ones(n), &ones(n)).unwrap();
        let k = gm_kernel(&GaborMultiplier::new(g1.clone(), g2.clone(), mask, lat).unwrap());
        let expected = Matrix2D::from_fn(n, |u, v| {
            if u != v {
                return Complex64::new(0.0, 0.0);
            }
            (0..n)
                .map(|j| g1.at(v as isize - j as isize).conj() * g2.at(u as isize - j as isize))
                .sum::<Complex64>()
                * n as f64
        });
        assert!(relative_frobenius_error(k.kernel(), &expected) < 1e-12);
    }

    #[test]
    fn zero_mask_gives_zero_operator() {
        let lat = Lattice::new(8, 2, 2).unwrap();
        let gm = GaborMultiplier::new(random_signal(8, 1), random_signal(8, 2), Matrix2D::zeros(8), lat)
            .unwrap();
        assert_eq!(gm_kernel(&gm).kernel().max_abs(), 0.0);
        assert_eq!(gm_apply(&gm, &random_signal(8, 3)).unwrap().max_abs(), 0.0);
        assert_eq!(gm_spreading(&gm).eta().max_abs(), 0.0);
    }

    #[test]
    fn off_lattice_mask_entries_are_ignored() {
        let lat = Lattice::new(12, 2, 3).unwrap();
        let gm = random_gm(lat, 5);
        let mut mask = gm.mask().clone();
        mask[(1, 1)] += Complex64::new(5.0, -2.0);
        mask[(3, 4)] += Complex64::new(1.0, 1.0);
        let other = GaborMultiplier::new(gm.g1().clone(), gm.g2().clone(), mask, lat).unwrap();
        assert!(relative_frobenius_error(gm_kernel(&other).kernel(), gm_kernel(&gm).kernel()) < 1e-14);
        assert!(relative_frobenius_error(gm_spreading(&other).eta(), gm_spreading(&gm).eta()) < 1e-12);
    }

    #[test]
    fn periodization_two_paths() {
        let n = 12;
        let lat = Lattice::new(n, 2, 3).unwrap();
        let mask = random_matrix(n, 11);
        let ap = mask_periodization(&mask, &lat).unwrap();
        let via_comb = mask_periodization_via_comb(&mask, &lat).unwrap();
        assert!(ap.sub(&via_comb).unwrap().max_abs() < 1e-12 * ap.max_abs());
        assert!(is_lattice_periodic(&ap, &lat, 1e-12 * ap.max_abs()));
        // no extra terms on the full lattice
        let full = Lattice::full(n).unwrap();
        assert!(mask_periodization(&mask, &full).unwrap().sub(&sdft(&mask)).unwrap().max_abs() == 0.0);
    }

    #[test]
    fn gm_spreading_formula_matches_definition() {
        for (n, alpha, beta) in [(6, 2, 3), (8, 2, 4), (12, 3, 2), (12, 1, 1)] {
            let lat = Lattice::new(n, alpha, beta).unwrap();
            let gm = random_gm(lat, 31 + n as u64);
            let formula = gm_spreading(&gm);
            let definition = kernel_to_spreading(&gm_kernel(&gm));
            assert!(relative_frobenius_error(formula.eta(), definition.eta()) < 1e-12);
        }
    }

    #[test]
    fn gm_spreading_of_convolution_mask() {
        // a = (1/N^2) (1 ⊗ dft(w)) on the full lattice: eta(u, v) = (1/N) w(u) V_{g1} g2 (u, v) delta(v)
        let n = 8;
        let lat = Lattice::full(n).unwrap();
        let (g1, g2, w) = (random_signal(n, 1), random_signal(n, 2), random_signal(n, 3));
        let mask = tensor(&ones(n), &dft(&w)).unwrap().scale_real(1.0 / (n * n) as f64);
        let gm = GaborMultiplier::new(g1.clone(), g2.clone(), mask, lat).unwrap();
        let c = crate::tf::window_correlation(&g1, &g2).unwrap();
        let expected = Matrix2D::from_fn(n, |u, v| {
            if v == 0 {
                w[u] * c[u]
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        assert!(relative_frobenius_error(gm_spreading(&gm).eta(), &expected) < 1e-12);
    }

    #[test]
    fn distances() {
        let n = 7;
        let a = LinearOp::new(random_matrix(n, 1));
        let d = op_distance(&a, &a).unwrap();
        assert_eq!((d.frobenius, d.spectral), (0.0, 0.0));
        let d = op_distance(&LinearOp::identity(n), &LinearOp::zero(n)).unwrap();
        assert!((d.frobenius - (n as f64).sqrt()).abs() < 1e-14);
        assert!((d.spectral - 1.0).abs() < 1e-12);
        assert!(op_distance(&a, &LinearOp::identity(n + 1)).is_err());
    }

    #[test]
    fn spectral_norm_two_methods() {
        for seed in 0..5 {
            let x = LinearOp::new(random_matrix(16, seed));
            let y = LinearOp::new(random_matrix(16, seed + 50));
            let d = op_distance(&x, &y).unwrap();
            let power = spectral_norm_power(&x.sub(&y).unwrap(), 20_000, 1e-15);
            assert!((d.spectral - power).abs() <= 1e-8 * d.spectral);
            assert!(d.spectral <= d.frobenius);
        }
    }

    #[test]
    fn singular_spectrum_cases() {
        let n = 6;
        assert!(singular_spectrum(&LinearOp::identity(n), 4)
            .unwrap()
            .iter()
            .all(|s| (s - 1.0).abs() < 1e-12));
        let f = random_signal(n, 1);
        let g = random_signal(n, 2);
        let s = singular_spectrum(&LinearOp::new(tensor(&f, &g).unwrap()), n).unwrap();
        assert!((s[0] - f.norm() * g.norm()).abs() < 1e-12);
        assert!(s[1..].iter().all(|&x| x < 1e-12));
        assert!(s.windows(2).all(|w| w[0] >= w[1]));
        assert!(singular_spectrum(&LinearOp::identity(n), 0).is_err());
        assert!(singular_spectrum(&LinearOp::identity(n), n + 1).is_err());

        // cross-check against the leading pair
        let op = LinearOp::new(random_matrix(n, 3));
        let (sigma, u) = leading_singular_pair(&op);
        assert!((sigma - singular_values(&op)[0]).abs() < 1e-12);
        assert!((u.norm() - 1.0).abs() < 1e-12);
        let _ = wrap(0, 1);
    }
}
