//! Time-frequency primitives on `C^N`: shifts, STFT, spectrograms, Gabor
//! frames and window correlation.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::algebra::{check_len, dft, unit_root, Lattice, Matrix2D, Signal};
use crate::error::{Error, Result};

/// `T_k f(t) = f(t - k)`.
pub fn translate(f: &Signal, k: isize) -> Signal {
    Signal::from_fn(f.len(), |t| f.at(t as isize - k))
}

/// `M_l f(t) = e^{2 pi i l t / N} f(t)`.
pub fn modulate(f: &Signal, l: isize) -> Signal {
    let n = f.len();
    Signal::from_fn(n, |t| unit_root(l * t as isize, n) * f[t])
}

/// `pi(k, l) f = M_l T_k f`.
pub fn tf_shift(f: &Signal, k: isize, l: isize) -> Signal {
    modulate(&translate(f, k), l)
}

/// `V_g f(u, v) = <f, pi(u, v) g>`; row `u` is `dft(f . conj(T_u g))`.
pub fn stft(f: &Signal, g: &Signal) -> Result<Matrix2D> {
    check_len(f.len(), g.len())?;
    let n = f.len();
    let mut out = Matrix2D::zeros(n);
    for u in 0..n {
        let windowed = Signal::from_fn(n, |k| f[k] * g.at(k as isize - u as isize).conj());
        let row = dft(&windowed);
        for v in 0..n {
            out[(u, v)] = row[v];
        }
    }
    Ok(out)
}

/// Squared modulus of the STFT, indexed `(u, v)` like [`stft`].
pub fn spectrogram(f: &Signal, g: &Signal) -> Result<Vec<Vec<f64>>> {
    let v = stft(f, g)?;
    let n = v.n();
    Ok((0..n)
        .map(|u| (0..n).map(|w| v[(u, w)].norm_sqr()).collect())
        .collect())
}

/// `C(u) = sum_t g2(t) conj(g1(t - u)) = V_{g1} g2 (u, 0)`.
pub fn window_correlation(g1: &Signal, g2: &Signal) -> Result<Signal> {
    check_len(g1.len(), g2.len())?;
    let n = g1.len();
    Ok(Signal::from_fn(n, |u| {
        (0..n)
            .map(|t| g2[t] * g1.at(t as isize - u as isize).conj())
            .sum()
    }))
}

/// Periodized Gaussian `g(t) = sum_{|j|<=4} exp(-pi (t + jN)^2 / (width N))`.
pub fn discrete_gaussian(n: usize, width: f64) -> Result<Signal> {
    if n == 0 {
        return Err(Error::Empty);
    }
    if !(width > 0.0 && width.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "gaussian width must be positive, got {width}"
        )));
    }
    let nf = n as f64;
    Ok(Signal::from_fn(n, |t| {
        let v: f64 = (-4..=4)
            .map(|j| {
                let x = t as f64 + j as f64 * nf;
                (-PI * x * x / (width * nf)).exp()
            })
            .sum();
        Complex64::new(v, 0.0)
    }))
}

/// [`discrete_gaussian`] scaled to unit l2 norm.
pub fn discrete_gaussian_normalized(n: usize, width: f64) -> Result<Signal> {
    let g = discrete_gaussian(n, width)?;
    let norm = g.norm();
    Ok(g.scale_real(1.0 / norm))
}

/// Window and lattice of a Gabor system `{pi(alpha k, beta l) g}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaborSystem {
    window: Signal,
    lattice: Lattice,
}

impl GaborSystem {
    pub fn new(window: Signal, lattice: Lattice) -> Result<Self> {
        check_len(lattice.n(), window.len())?;
        if window.max_abs() == 0.0 {
            return Err(Error::InvalidParameter(
                "Gabor window must not vanish identically".into(),
            ));
        }
        Ok(GaborSystem { window, lattice })
    }

    pub fn window(&self) -> &Signal {
        &self.window
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// The atoms `pi(alpha k, beta l) g` in `(k, l)` lexicographic order.
    pub fn atoms(&self) -> Vec<Signal> {
        let lat = &self.lattice;
        let mut out = Vec::with_capacity(lat.a_count() * lat.b_count());
        for k in 0..lat.a_count() {
            for l in 0..lat.b_count() {
                out.push(tf_shift(
                    &self.window,
                    (lat.alpha() * k) as isize,
                    (lat.beta() * l) as isize,
                ));
            }
        }
        out
    }

    /// Frame operator `S f = sum <f, phi> phi` as a dense Hermitian matrix.
    pub fn frame_operator(&self) -> Matrix2D {
        let n = self.lattice.n();
        let atoms = self.atoms();
        let phi = DMatrix::from_fn(n, atoms.len(), |t, j| atoms[j][t]);
        Matrix2D::from_nalgebra(&(&phi * phi.adjoint()))
    }
}

/// Optimal frame bounds `C1 ||f||^2 <= sum |<f, phi>|^2 <= C2 ||f||^2`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
    /// `sqrt(C2 / C1)`; infinite when the system is not a frame.
    pub condition_number: f64,
}

impl FrameBounds {
    pub fn is_frame(&self) -> bool {
        self.lower > 0.0
    }
}

/// Eigenvalues below this fraction of the largest are reported as zero.
const RANK_TOLERANCE: f64 = 1e-12;

/// Extreme eigenvalues of the frame operator.
pub fn frame_bounds(sys: &GaborSystem) -> FrameBounds {
    let s = sys.frame_operator().to_nalgebra();
    let eig = SymmetricEigen::new(s);
    let upper = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let mut lower = eig
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
        .max(0.0);
    let lat = sys.lattice();
    // fewer atoms than dimensions cannot span
    if lat.a_count() * lat.b_count() < lat.n() || lower <= RANK_TOLERANCE * upper {
        lower = 0.0;
    }
    let condition_number = if lower > 0.0 {
        (upper / lower).sqrt()
    } else {
        f64::INFINITY
    };
    FrameBounds {
        lower,
        upper,
        condition_number,
    }
}
