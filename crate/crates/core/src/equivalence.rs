//! When is an LTI filter a Gabor multiplier?
//!
//! [`check_representability`] tests the four lattice conditions on the
//! cross-ambiguity `V_{g1} g2` over the support of the impulse response,
//! [`construct_symbol`] builds a mask that reproduces the filter when they
//! hold, and [`gm_to_lti`] goes the other way for lattices without time
//! subsampling.

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{check_len, circ_conv, dft, idft, ones, tensor, Lattice, Matrix2D, Signal};
use crate::error::{Error, Result};
use crate::operators::{gm_kernel, op_distance, GaborMultiplier, LinearOp, LtiFilter};
use crate::tf::{stft, window_correlation};

pub const DEFAULT_SUPPORT_EPS: f64 = 1e-10;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Indices with `|h(u)| > eps_rel * max |h|`.
pub fn support_of(h: &Signal, eps_rel: f64) -> Vec<usize> {
    let max = h.max_abs();
    if max == 0.0 {
        return Vec::new();
    }
    let cut = eps_rel * max;
    h.iter()
        .enumerate()
        .filter(|(_, z)| z.norm() > cut)
        .map(|(u, _)| u)
        .collect()
}

/// One failed equation. `lhs` and `rhs` are `[re, im]`; for conditions 1 to 3
/// `rhs` is zero and the violation is `|lhs|` crossing the tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub condition: u8,
    pub u: usize,
    pub k: usize,
    pub l: usize,
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepresentabilityReport {
    pub representable: bool,
    /// Absolute threshold used for "zero", i.e. `tol * ||g1|| ||g2||`.
    pub tolerance: f64,
    pub violations: Vec<Violation>,
    pub support_h: Vec<usize>,
}

impl RepresentabilityReport {
    pub fn violation_count(&self) -> usize {
        self.violations.len()
    }

    pub fn by_condition(&self, condition: u8) -> impl Iterator<Item = &Violation> {
        self.violations
            .iter()
            .filter(move |v| v.condition == condition)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn validate(h: &Signal, g1: &Signal, g2: &Signal, lat: &Lattice) -> Result<()> {
    check_len(lat.n(), h.len())?;
    check_len(lat.n(), g1.len())?;
    check_len(lat.n(), g2.len())
}

/// Checks, for every `u` in the support of `h`:
///
/// 1. `V(u, 0) != 0`;
/// 2. `V(u + Bk, lA) = 0` for `k < beta`, `0 < l < alpha`;
/// 3. `V(u + Bk, 0) = 0` for `0 < k < beta` with `u + Bk` outside the support;
/// 4. `V(u + Bk, 0) = h(u + Bk) / h(u) V(u, 0)` for `0 < k < beta` with `u + Bk` inside it,
///
/// where `V = V_{g1} g2`. "Zero" means at most `tol ||g1|| ||g2||` in modulus.
pub fn check_representability(
    h: &Signal,
    g1: &Signal,
    g2: &Signal,
    lat: &Lattice,
    tol: f64,
) -> Result<RepresentabilityReport> {
    validate(h, g1, g2, lat)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let n = lat.n();
    let (a, b) = (lat.a_count(), lat.b_count());
    let support = support_of(h, DEFAULT_SUPPORT_EPS);
    let mut in_support = vec![false; n];
    for &u in &support {
        in_support[u] = true;
    }
    let v = stft(g2, g1)?;
    let zero_tol = tol * g1.norm() * g2.norm();
    let zero = Complex64::new(0.0, 0.0);
    let mut violations = Vec::new();

    for &u in &support {
        let base = v[(u, 0)];
        if base.norm() <= zero_tol {
            violations.push(Violation {
                condition: 1,
                u,
                k: 0,
                l: 0,
                lhs: pair(base),
                rhs: pair(zero),
            });
        }
        for k in 0..lat.beta() {
            let x = (u + b * k) % n;
            for l in 1..lat.alpha() {
                let val = v[(x, l * a)];
                if val.norm() > zero_tol {
                    violations.push(Violation {
                        condition: 2,
                        u,
                        k,
                        l,
                        lhs: pair(val),
                        rhs: pair(zero),
                    });
                }
            }
        }
        for k in 1..lat.beta() {
            let x = (u + b * k) % n;
            let val = v[(x, 0)];
            if !in_support[x] {
                if val.norm() > zero_tol {
                    violations.push(Violation {
                        condition: 3,
                        u,
                        k,
                        l: 0,
                        lhs: pair(val),
                        rhs: pair(zero),
                    });
                }
            } else {
                let ratio = h[x] / h[u];
                let expected = ratio * base;
                if (val - expected).norm() > zero_tol * ratio.norm().max(1.0) {
                    violations.push(Violation {
                        condition: 4,
                        u,
                        k,
                        l: 0,
                        lhs: pair(val),
                        rhs: pair(expected),
                    });
                }
            }
        }
    }

    Ok(RepresentabilityReport {
        representable: violations.is_empty(),
        tolerance: zero_tol,
        violations,
        support_h: support,
    })
}

/// Mask together with the auxiliary functions of the construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolConstruction {
    pub mask: Matrix2D,
    /// `V_{g1} g2 (u, 0)` on the support of `h`, 1 elsewhere.
    pub v_function: Signal,
    /// Number of support points in the coset `u + B Z_N`, or 1 if there are none.
    pub c_function: Vec<usize>,
}

/// [`construct_symbol_unchecked`] behind a passing [`check_representability`].
pub fn construct_symbol(
    h: &Signal,
    g1: &Signal,
    g2: &Signal,
    lat: &Lattice,
) -> Result<SymbolConstruction> {
    let report = check_representability(h, g1, g2, lat, DEFAULT_TOLERANCE)?;
    if !report.representable {
        return Err(Error::NotRepresentable(Box::new(report)));
    }
    construct_symbol_unchecked(h, g1, g2, lat)
}

/// `a = (alpha beta / N) (1 ⊗ dft(h / (C V)))`, with `h` set to zero below
/// the support threshold. Produces a mask even when the conditions fail.
pub fn construct_symbol_unchecked(
    h: &Signal,
    g1: &Signal,
    g2: &Signal,
    lat: &Lattice,
) -> Result<SymbolConstruction> {
    validate(h, g1, g2, lat)?;
    let n = lat.n();
    let b = lat.b_count();
    let support = support_of(h, DEFAULT_SUPPORT_EPS);
    let mut in_support = vec![false; n];
    for &u in &support {
        in_support[u] = true;
    }
    let corr = window_correlation(g1, g2)?;

    let c_function: Vec<usize> = (0..n)
        .map(|u| {
            let count = (0..lat.beta())
                .filter(|k| in_support[(u + b * k) % n])
                .count();
            count.max(1)
        })
        .collect();
    let one = Complex64::new(1.0, 0.0);
    let v_function = Signal::from_fn(n, |u| if in_support[u] { corr[u] } else { one });
    let ratio = Signal::from_fn(n, |u| {
        if in_support[u] {
            h[u] / (v_function[u] * c_function[u] as f64)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let scale = (lat.alpha() * lat.beta()) as f64 / n as f64;
    let mask = tensor(&ones(n), &dft(&ratio))?.scale_real(scale);
    Ok(SymbolConstruction {
        mask,
        v_function,
        c_function,
    })
}

/// Mask on the full lattice, `a = (1/N) (1 ⊗ dft(h / C_{g1,g2}))`.
pub fn construct_symbol_full_lattice(h: &Signal, g1: &Signal, g2: &Signal) -> Result<Matrix2D> {
    check_len(h.len(), g1.len())?;
    check_len(h.len(), g2.len())?;
    let n = h.len();
    let corr = window_correlation(g1, g2)?;
    let zero_tol = DEFAULT_TOLERANCE * g1.norm() * g2.norm();
    if let Some((index, z)) = corr.iter().enumerate().find(|(_, z)| z.norm() <= zero_tol) {
        return Err(Error::CorrelationVanishes {
            index,
            magnitude: z.norm(),
        });
    }
    let ratio = Signal::from_fn(n, |u| h[u] / corr[u]);
    Ok(tensor(&ones(n), &dft(&ratio))?.scale_real(1.0 / n as f64))
}

/// Impulse response of the Gabor multiplier with mask `1 ⊗ dft(h)` on a
/// lattice with `alpha = 1`:
/// `h_eff = (N / beta) sum_{k<beta} h(. + Bk) (conj(g1) * g2)(.)`.
/// Requires `g1(-t) = g1(t)`.
pub fn gm_to_lti(g1: &Signal, g2: &Signal, h: &Signal, lat: &Lattice) -> Result<LtiFilter> {
    validate(h, g1, g2, lat)?;
    if lat.alpha() != 1 {
        return Err(Error::TimeSubsampling(lat.alpha()));
    }
    let n = lat.n();
    let sym_tol = SYMMETRY_TOLERANCE * g1.max_abs();
    if let Some(index) = (0..n).find(|&t| (g1.at(-(t as isize)) - g1[t]).norm() > sym_tol) {
        return Err(Error::AsymmetricWindow { index });
    }
    let b = lat.b_count();
    let corr = circ_conv(&g1.conj(), g2)?;
    let scale = n as f64 / lat.beta() as f64;
    Ok(LtiFilter::new(Signal::from_fn(n, |u| {
        let folded: Complex64 = (0..lat.beta()).map(|k| h[(u + b * k) % n]).sum();
        folded * corr[u] * scale
    })))
}

/// Largest deviation of `K` from a circulant matrix, relative to `max |K|`:
/// `max_{u,d} |K(u, u - d) - K(0, -d)| / max |K|`. Zero for the zero matrix.
pub fn diagonal_variation(op: &LinearOp) -> f64 {
    let k = op.kernel();
    let max = k.max_abs();
    if max == 0.0 {
        return 0.0;
    }
    let n = k.n() as isize;
    let mut worst: f64 = 0.0;
    for d in 0..n {
        let reference = k.at(0, -d);
        for u in 0..n {
            worst = worst.max((k.at(u, u - d) - reference).norm());
        }
    }
    worst / max
}

/// Ideal low-pass frequency response `1` on `|v| <= R` (indices mod N), `0` elsewhere.
pub fn lowpass_response(n: usize, r: usize) -> Signal {
    Signal::from_fn(n, |v| {
        let dist = v.min(n - v);
        Complex64::new(if dist <= r { 1.0 } else { 0.0 }, 0.0)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowpassGap {
    /// `max_v |h_hat(v) - h_eff_hat(v)|`.
    pub gap_sup: f64,
    /// Spectral norm of `H - G`.
    pub spectral_distance: f64,
    pub frobenius_distance: f64,
    /// `max |K_G(u, v) - h_eff(u - v)|`, the circulant check of the closed form.
    pub kernel_residual: f64,
}

/// The filter and its naive Gabor-multiplier counterpart with mask `1 ⊗ h_hat`.
pub fn lowpass_pair(r: usize, g1: &Signal, g2: &Signal) -> Result<(LtiFilter, GaborMultiplier)> {
    check_len(g1.len(), g2.len())?;
    let n = g1.len();
    if r == 0 || 2 * r >= n {
        return Err(Error::OutOfRange {
            what: "R",
            value: r.to_string(),
            range: format!("1..{}", n.div_ceil(2)),
        });
    }
    let h_hat = lowpass_response(n, r);
    let lat = Lattice::full(n)?;
    let mask = tensor(&ones(n), &h_hat)?;
    let gm = GaborMultiplier::new(g1.clone(), g2.clone(), mask, lat)?;
    Ok((LtiFilter::new(idft(&h_hat)), gm))
}

/// Compares the ideal low-pass filter with cutoff `R` against the Gabor
/// multiplier that uses its frequency response as mask.
pub fn lowpass_gap(r: usize, g1: &Signal, g2: &Signal) -> Result<LowpassGap> {
    let (flt, gm) = lowpass_pair(r, g1, g2)?;
    let eff = gm_to_lti(g1, g2, flt.impulse_response(), gm.lattice())?;
    let h_hat = flt.frequency_response();
    let eff_hat = eff.frequency_response();
    let gap_sup = h_hat.max_abs_diff(&eff_hat);
    let k_gm = gm_kernel(&gm);
    let kernel_residual = k_gm.kernel().sub(eff.kernel().kernel())?.max_abs();
    let dist = op_distance(&flt.kernel(), &k_gm)?;
    Ok(LowpassGap {
        gap_sup,
        spectral_distance: dist.spectral,
        frobenius_distance: dist.frobenius,
        kernel_residual,
    })
}

fn reciprocal(name: &'static str, x: f64) -> Result<f64> {
    if x.is_nan() || x <= 1.0 {
        return Err(Error::OutOfRange {
            what: name,
            value: x.to_string(),
            range: "(1, inf]".into(),
        });
    }
    Ok(if x.is_infinite() { 0.0 } else { 1.0 / x })
}

/// `1/q <= 1/r + 1/p`, with `inf` allowed for any exponent.
pub fn index_condition(p: f64, q: f64, r: f64) -> Result<bool> {
    let (ip, iq, ir) = (reciprocal("p", p)?, reciprocal("q", q)?, reciprocal("r", r)?);
    Ok(iq <= ir + ip)
}
