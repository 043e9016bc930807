//! Gaussian closed forms on `R^d` and Riemann-sum quadrature on `R`.
//!
//! Profiles are `t -> c e^{-pi b |t|^2}`; the Fourier transform is
//! `F f(w) = ∫ f(t) e^{-2 pi i w t} dt`. Grid functions sample on
//! `t = -L, -L + Δ, ..., L` and every integral is a plain Riemann sum.

use std::f64::consts::PI;

use num_complex::Complex64;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianProfile {
    pub amplitude: Complex64,
    pub width: f64,
    pub dim: u32,
}

impl GaussianProfile {
    pub fn new(amplitude: Complex64, width: f64, dim: u32) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "width must be positive, got {width}"
            )));
        }
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be at least 1".into()));
        }
        if !(amplitude.re.is_finite() && amplitude.im.is_finite()) {
            return Err(Error::NonFinite(0));
        }
        Ok(GaussianProfile {
            amplitude,
            width,
            dim,
        })
    }

    pub fn real(amplitude: f64, width: f64, dim: u32) -> Result<Self> {
        GaussianProfile::new(Complex64::new(amplitude, 0.0), width, dim)
    }

    /// `2^{d/4} e^{-pi |t|^2}`, unit norm in `L^2(R^d)`.
    pub fn standard(dim: u32) -> Self {
        GaussianProfile {
            amplitude: Complex64::new(2f64.powf(dim as f64 / 4.0), 0.0),
            width: 1.0,
            dim,
        }
    }

    /// Value at a point of squared norm `r2`.
    pub fn eval_sq(&self, r2: f64) -> Complex64 {
        self.amplitude * (-PI * self.width * r2).exp()
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.eval_sq(t * t)
    }

    /// `||f||_q = |c| (q b)^{-d/(2q)}`.
    pub fn lq_norm(&self, q: f64) -> f64 {
        let d = self.dim as f64;
        if q.is_infinite() {
            return self.amplitude.norm();
        }
        self.amplitude.norm() * (q * self.width).powf(-d / (2.0 * q))
    }

    /// Samples on a grid; only defined for `d = 1`.
    pub fn sample(&self, half_width: f64, step: f64) -> Result<GridFunction> {
        if self.dim != 1 {
            return Err(Error::InvalidParameter(format!(
                "grid sampling needs d = 1, got d = {}",
                self.dim
            )));
        }
        GridFunction::from_fn(half_width, step, |t| self.eval(t))
    }
}

fn same_dim(x: &GaussianProfile, y: &GaussianProfile) -> Result<()> {
    if x.dim != y.dim {
        return Err(Error::InvalidParameter(format!(
            "dimension mismatch: {} vs {}",
            x.dim, y.dim
        )));
    }
    Ok(())
}

/// `(c, b) -> (c b^{-d/2}, 1/b)`.
pub fn gauss_fourier(g: &GaussianProfile) -> GaussianProfile {
    let d = g.dim as f64;
    GaussianProfile {
        amplitude: g.amplitude * g.width.powf(-d / 2.0),
        width: 1.0 / g.width,
        dim: g.dim,
    }
}

/// Widths combine as `b1 b2 / (b1 + b2)`, amplitudes pick up `(b1 + b2)^{-d/2}`.
pub fn gauss_convolve(x: &GaussianProfile, y: &GaussianProfile) -> Result<GaussianProfile> {
    same_dim(x, y)?;
    let d = x.dim as f64;
    let s = x.width + y.width;
    Ok(GaussianProfile {
        amplitude: x.amplitude * y.amplitude * s.powf(-d / 2.0),
        width: x.width * y.width / s,
        dim: x.dim,
    })
}

/// Pointwise product.
pub fn gauss_multiply(x: &GaussianProfile, y: &GaussianProfile) -> Result<GaussianProfile> {
    same_dim(x, y)?;
    Ok(GaussianProfile {
        amplitude: x.amplitude * y.amplitude,
        width: x.width + y.width,
        dim: x.dim,
    })
}

/// `g_lambda(t) = e^{-pi lambda |t|^2}`.
pub fn rescaled_gaussian(lambda: f64, dim: u32) -> Result<GaussianProfile> {
    GaussianProfile::real(1.0, lambda, dim)
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "lambda must be positive, got {lambda}"
        )))
    }
}

/// `C(d, r) = e^{-s} s^s Γ(d/2 + 1)^{-1/r}` with `s = d / (2r)`.
pub fn weak_lr_constant(r: f64, dim: u32) -> Result<f64> {
    if !(r >= 1.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("r must be in [1, inf), got {r}")));
    }
    if dim == 0 {
        return Err(Error::InvalidParameter("dimension must be at least 1".into()));
    }
    let d = dim as f64;
    let s = d / (2.0 * r);
    Ok((-s).exp() * s.powf(s) * gamma(d / 2.0 + 1.0).powf(-1.0 / r))
}

/// `||g_lambda||_{L^{r,inf}} = C(d, r) lambda^{-d/(2r)}`.
pub fn weak_lr_norm_gauss(lambda: f64, r: f64, dim: u32) -> Result<f64> {
    check_lambda(lambda)?;
    let c = weak_lr_constant(r, dim)?;
    Ok(c * lambda.powf(-(dim as f64) / (2.0 * r)))
}

/// `T_{m_lambda} g_lambda` for `m_lambda = g_lambda`:
/// `(lambda^2 + 1)^{-d/2} e^{-pi lambda / (lambda^2 + 1) |t|^2}`.
pub fn fourier_multiplier_gauss(lambda: f64, dim: u32) -> Result<GaussianProfile> {
    check_lambda(lambda)?;
    let d = dim as f64;
    let s = lambda * lambda + 1.0;
    GaussianProfile::real(s.powf(-d / 2.0), lambda / s, dim)
}

/// Candidate closed form for the anti-Wick output `A^{g,g}_{1⊗m_lambda} g_lambda`:
/// `c = 2^{d/2} (6λ² + 4λ + 1)^{-d/2}`,
/// `b = 2λ (6λ³ + 10λ² + 9λ + 1) / ((6λ² + 4λ + 1)(2λ + 1)²)`.
///
/// It does not match the operator output; [`antiwick_gauss_exact`] does.
pub fn antiwick_gauss(lambda: f64, dim: u32) -> Result<GaussianProfile> {
    check_lambda(lambda)?;
    let d = dim as f64;
    let l = lambda;
    let q = 6.0 * l * l + 4.0 * l + 1.0;
    let c = 2f64.powf(d / 2.0) * q.powf(-d / 2.0);
    let b = 2.0 * l * (6.0 * l.powi(3) + 10.0 * l * l + 9.0 * l + 1.0)
        / (q * (2.0 * l + 1.0).powi(2));
    GaussianProfile::real(c, b, dim)
}

/// `A^{g,g}_{1⊗m_lambda} g_lambda` with `g` the standard Gaussian:
/// `c = (2 / (2λ² + λ + 2))^{d/2}`, `b = λ(λ + 2) / (2λ² + λ + 2)`.
pub fn antiwick_gauss_exact(lambda: f64, dim: u32) -> Result<GaussianProfile> {
    check_lambda(lambda)?;
    let d = dim as f64;
    let q = 2.0 * lambda * lambda + lambda + 2.0;
    GaussianProfile::real((2.0 / q).powf(d / 2.0), lambda * (lambda + 2.0) / q, dim)
}

/// Exponents of `lambda` as `lambda -> 0` on the two sides of
/// `||T_{m_lambda} g_lambda||_q <= C ||m_lambda||_{L^{r,inf}} ||g_lambda||_p`:
/// `(-d/(2q), -d/(2r) - d/(2p))`. A bound uniform in `lambda` needs `lhs >= rhs`.
pub fn rescaling_exponents(p: f64, q: f64, r: f64, dim: u32) -> (f64, f64) {
    let d = dim as f64;
    let inv = |x: f64| if x.is_infinite() { 0.0 } else { 1.0 / x };
    (-d / 2.0 * inv(q), -d / 2.0 * (inv(r) + inv(p)))
}

/// Samples at `t_i = -L + i Δ`, `i = 0..=2L/Δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    half_width: f64,
    step: f64,
    samples: Vec<Complex64>,
}

fn grid_intervals(half_width: f64, step: f64) -> Result<usize> {
    if !(half_width > 0.0 && step > 0.0 && half_width.is_finite() && step.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "grid needs positive half width and step, got L = {half_width}, step = {step}"
        )));
    }
    let ratio = 2.0 * half_width / step;
    let rounded = ratio.round();
    if (ratio - rounded).abs() > 1e-9 * ratio.max(1.0) || rounded < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "2L / step = {ratio} is not a positive integer"
        )));
    }
    if rounded as usize % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "2L / step = {rounded} must be even so that t = 0 is a grid point"
        )));
    }
    Ok(rounded as usize)
}

impl GridFunction {
    pub fn new(half_width: f64, step: f64, samples: Vec<Complex64>) -> Result<Self> {
        let intervals = grid_intervals(half_width, step)?;
        if samples.len() != intervals + 1 {
            return Err(Error::LengthMismatch {
                expected: intervals + 1,
                got: samples.len(),
            });
        }
        if let Some(i) = samples
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::NonFinite(i));
        }
        Ok(GridFunction {
            half_width,
            step,
            samples,
        })
    }

    pub fn from_fn(half_width: f64, step: f64, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let intervals = grid_intervals(half_width, step)?;
        let samples = (0..=intervals)
            .map(|i| f(-half_width + i as f64 * step))
            .collect();
        GridFunction::new(half_width, step, samples)
    }

    pub fn from_real_fn(half_width: f64, step: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        GridFunction::from_fn(half_width, step, |t| Complex64::new(f(t), 0.0))
    }

    pub fn zeros_like(&self) -> Self {
        self.with_samples(vec![Complex64::new(0.0, 0.0); self.len()])
    }

    fn with_samples(&self, samples: Vec<Complex64>) -> Self {
        GridFunction {
            half_width: self.half_width,
            step: self.step,
            samples,
        }
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Index of `t = 0`.
    pub fn center(&self) -> usize {
        self.len() / 2
    }

    pub fn point(&self, i: usize) -> f64 {
        (i as isize - self.center() as isize) as f64 * self.step
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|i| self.point(i))
    }

    /// Sample at signed offset `j` from the center, zero off the grid.
    pub fn at_offset(&self, j: isize) -> Complex64 {
        let i = self.center() as isize + j;
        if i < 0 || i >= self.len() as isize {
            Complex64::new(0.0, 0.0)
        } else {
            self.samples[i as usize]
        }
    }

    pub fn same_grid(&self, other: &GridFunction) -> Result<()> {
        if self.len() != other.len() || (self.step - other.step).abs() > 1e-12 * self.step {
            return Err(Error::GridMismatch(format!(
                "(L = {}, step = {}) vs (L = {}, step = {})",
                self.half_width, self.step, other.half_width, other.step
            )));
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        self.with_samples(self.samples.iter().map(|&z| f(z)).collect())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    pub fn sub(&self, other: &GridFunction) -> Result<Self> {
        self.same_grid(other)?;
        Ok(self.with_samples(
            self.samples
                .iter()
                .zip(&other.samples)
                .map(|(a, b)| a - b)
                .collect(),
        ))
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `(Δ sum |f|^2)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        (self.step * self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
    }
}

/// `||x - y||_2 / ||y||_2` on a common grid.
pub fn relative_l2_error(x: &GridFunction, y: &GridFunction) -> Result<f64> {
    Ok(x.sub(y)?.l2_norm() / y.l2_norm())
}

/// `sup_a a μ(|f| > a)^{1/r}` over `10^4` geometric thresholds in
/// `[1e-6 max|f|, max|f|]`, with `μ` counted as `Δ · #points`.
pub fn weak_lr_norm_numeric(f: &GridFunction, r: f64) -> Result<f64> {
    if !(r >= 1.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("r must be in [1, inf), got {r}")));
    }
    const THRESHOLDS: usize = 10_000;
    let mut mags: Vec<f64> = f.samples().iter().map(|z| z.norm()).collect();
    mags.sort_by(|a, b| a.total_cmp(b));
    let max = *mags.last().unwrap_or(&0.0);
    if max == 0.0 {
        return Ok(0.0);
    }
    let lo = 1e-6 * max;
    let ratio = (max / lo).ln() / (THRESHOLDS - 1) as f64;
    let mut best: f64 = 0.0;
    for i in 0..THRESHOLDS {
        let a = lo * (ratio * i as f64).exp();
        let above = mags.len() - mags.partition_point(|&m| m <= a);
        let measure = f.step() * above as f64;
        best = best.max(a * measure.powf(1.0 / r));
    }
    Ok(best)
}

fn phase(x: f64) -> Complex64 {
    let (s, c) = (2.0 * PI * x).sin_cos();
    Complex64::new(c, s)
}

/// `F f(w) = Δ sum_y f(y) e^{-2 pi i w y}` at every `w` of `out`'s grid.
fn riemann_transform(f: &GridFunction, out_grid: &GridFunction, sign: f64) -> GridFunction {
    let samples = out_grid
        .points()
        .map(|w| {
            f.points()
                .zip(f.samples())
                .map(|(y, &fy)| fy * phase(sign * w * y))
                .sum::<Complex64>()
                * f.step()
        })
        .collect();
    out_grid.with_samples(samples)
}

/// Riemann-sum Fourier transform onto the same grid.
pub fn fourier_numeric(f: &GridFunction) -> GridFunction {
    riemann_transform(f, f, -1.0)
}

pub fn inverse_fourier_numeric(f: &GridFunction) -> GridFunction {
    riemann_transform(f, f, 1.0)
}

/// `T_m f = F^{-1}(m F f)`.
pub fn fourier_multiplier_numeric(m: &GridFunction, f: &GridFunction) -> Result<GridFunction> {
    m.same_grid(f)?;
    let fhat = riemann_transform(f, m, -1.0);
    let product = m.with_samples(
        m.samples()
            .iter()
            .zip(fhat.samples())
            .map(|(a, b)| a * b)
            .collect(),
    );
    Ok(riemann_transform(&product, f, 1.0))
}

/// `C(j Δ) = Δ sum_z g2(z - j Δ) conj(g1(z))` for integer lags `j`.
fn correlation_at_offset(g1: &GridFunction, g2: &GridFunction, j: isize) -> Complex64 {
    let c = g1.center() as isize;
    g1.samples()
        .iter()
        .enumerate()
        .map(|(i, a)| g2.at_offset(i as isize - c - j) * a.conj())
        .sum::<Complex64>()
        * g1.step()
}

/// `C_{g1,g2}(y) = (I g2 * conj(g1))(y) = ∫ g2(z - y) conj(g1(z)) dz` at the grid points.
pub fn window_correlation_numeric(g1: &GridFunction, g2: &GridFunction) -> Result<GridFunction> {
    g1.same_grid(g2)?;
    let c = g1.center() as isize;
    let samples = (0..g1.len())
        .map(|i| correlation_at_offset(g1, g2, i as isize - c))
        .collect();
    Ok(g1.with_samples(samples))
}

/// `A f(t) = Δ sum_y f(y) corr(y - t) m̌(y - t)` with
/// `m̌(s) = Δ sum_w m(w) e^{-2 pi i w s}`; `corr` is indexed by the lag in steps.
fn lag_kernel_apply(
    m: &GridFunction,
    f: &GridFunction,
    corr: impl Fn(isize) -> Complex64,
) -> GridFunction {
    let n = f.len() as isize;
    let step = f.step();
    // lags (y - t) / step range over -(n-1)..=(n-1)
    let kernel: Vec<Complex64> = (-(n - 1)..n)
        .map(|j| {
            let s = j as f64 * step;
            let mcheck: Complex64 = m
                .points()
                .zip(m.samples())
                .map(|(w, &mw)| mw * phase(-w * s))
                .sum::<Complex64>()
                * m.step();
            corr(j) * mcheck
        })
        .collect();
    let samples = (0..n)
        .map(|t| {
            (0..n)
                .map(|y| f.samples()[y as usize] * kernel[(y - t + n - 1) as usize])
                .sum::<Complex64>()
                * step
        })
        .collect();
    f.with_samples(samples)
}

/// STFT multiplier `A^{g1,g2}_{1⊗m} f` with a time-independent symbol,
/// evaluated as `∫ e^{2 pi i w t} m(w) F(f T_t C_{g1,g2})(w) dw`.
/// The `w`-integral is done once per lag.
pub fn stft_multiplier_numeric(
    m: &GridFunction,
    g1: &GridFunction,
    g2: &GridFunction,
    f: &GridFunction,
) -> Result<GridFunction> {
    m.same_grid(f)?;
    g1.same_grid(f)?;
    g2.same_grid(f)?;
    Ok(lag_kernel_apply(m, f, |j| correlation_at_offset(g1, g2, j)))
}

/// As [`stft_multiplier_numeric`] with a prescribed correlation function of the lag.
pub fn correlation_multiplier_numeric(
    m: &GridFunction,
    f: &GridFunction,
    corr: impl Fn(f64) -> Complex64,
) -> Result<GridFunction> {
    m.same_grid(f)?;
    let step = f.step();
    Ok(lag_kernel_apply(m, f, |j| corr(j as f64 * step)))
}

/// `m2 = m * F^{-1}(C_{g1,g2})`, with `m` taken as zero off its grid.
pub fn smoothed_multiplier(
    m: &GridFunction,
    g1: &GridFunction,
    g2: &GridFunction,
) -> Result<GridFunction> {
    m.same_grid(g1)?;
    g1.same_grid(g2)?;
    let n = m.len() as isize;
    let step = m.step();
    // C on all lags a pair of grid windows can produce
    let corr: Vec<(f64, Complex64)> = (-(n - 1)..n)
        .map(|j| (j as f64 * step, correlation_at_offset(g1, g2, j)))
        .collect();
    let inv_c: Vec<Complex64> = (-(n - 1)..n)
        .map(|j| {
            let eta = j as f64 * step;
            corr.iter()
                .map(|&(s, c)| c * phase(eta * s))
                .sum::<Complex64>()
                * step
        })
        .collect();
    let samples = (0..n)
        .map(|w| {
            (0..n)
                .map(|xi| m.samples()[xi as usize] * inv_c[(w - xi + n - 1) as usize])
                .sum::<Complex64>()
                * step
        })
        .collect();
    Ok(m.with_samples(samples))
}
