use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use gabmul::algebra::{ones, relative_frobenius_error, tensor, Lattice};
use gabmul::equivalence::{
    check_representability, construct_symbol_unchecked, gm_to_lti, lowpass_response, RepresentabilityReport,
};
use gabmul::gauss::{
    antiwick_gauss, antiwick_gauss_exact, fourier_multiplier_gauss, fourier_multiplier_numeric,
    fourier_numeric, gauss_fourier, relative_l2_error, rescaled_gaussian, smoothed_multiplier,
    stft_multiplier_numeric, weak_lr_norm_gauss, weak_lr_norm_numeric, window_correlation_numeric,
    GaussianProfile, GridFunction,
};
use gabmul::io::{self, Representation};
use gabmul::operators::{gm_kernel, leading_singular_pair, singular_spectrum, GaborMultiplier, LtiFilter};
use gabmul::random::random_signal;
use gabmul::tf::{spectrogram, stft};
use gabmul::{Complex64, Signal};
use serde::Serialize;

use crate::CliError;

const SEGMENT: usize = 128;
const TOP: usize = 20;

fn write_with<F>(path: &Path, f: F) -> Result<(), CliError>
where
    F: FnOnce(std::io::BufWriter<std::fs::File>) -> gabmul::Result<()>,
{
    f(io::create(path)?)?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    std::fs::create_dir_all(path.parent().unwrap_or(Path::new(".")))
        .map_err(gabmul::Error::from)?;
    std::fs::write(path, text + "\n").map_err(gabmul::Error::from)?;
    Ok(())
}

pub struct LowpassArgs {
    pub n: usize,
    pub cutoff: usize,
    pub seed: u64,
    pub window: Signal,
    pub out_dir: PathBuf,
}

#[derive(Serialize)]
struct LowpassSummary {
    n: usize,
    cutoff: usize,
    seed: u64,
    spectral_distance: f64,
    frobenius_distance: f64,
    response_gap_sup: f64,
    kernel_residual: f64,
    top_singular_values: Vec<f64>,
}

/// Ideal low-pass filter against the Gabor multiplier with the same response
/// as mask; synthesis window is the analysis window scaled by `1/N`.
pub fn figure_lowpass(args: &LowpassArgs) -> Result<(), CliError> {
    let n = args.n;
    if 2 * args.cutoff >= n {
        return Err(CliError::Usage(format!(
            "cutoff {} must be below N/2 = {}",
            args.cutoff,
            n / 2
        )));
    }
    let g1 = args.window.clone();
    let g2 = g1.scale_real(1.0 / n as f64);
    let h_hat = lowpass_response(n, args.cutoff);
    let flt = LtiFilter::from_frequency_response(&h_hat);
    let lat = Lattice::full(n)?;
    let gm = GaborMultiplier::new(g1.clone(), g2.clone(), tensor(&ones(n), &h_hat)?, lat)?;
    let k_h = flt.kernel();
    let k_g = gm_kernel(&gm);
    let eff = gm_to_lti(&g1, &g2, flt.impulse_response(), &lat)?;

    let f0 = random_signal(n, args.seed);
    let hf = k_h.apply(&f0)?;
    let gf = k_g.apply(&f0)?;
    let diff = k_h.sub(&k_g)?;
    let top = singular_spectrum(&diff, TOP.min(n))?;
    let (_, mut vector) = leading_singular_pair(&diff);
    // fix the phase: largest entry real and positive
    if let Some(peak) = vector.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())) {
        if peak.norm() > 0.0 {
            let rot = peak.conj() / peak.norm();
            vector = vector.scale(rot);
        }
    }
    let segment = Signal::new(vector.iter().take(SEGMENT).copied().collect())?;

    let dir = &args.out_dir;
    write_with(&dir.join("input.csv"), |w| io::write_signal(w, &f0))?;
    write_with(&dir.join("spectrogram_filter.csv"), |w| {
        io::write_spectrogram(w, &spectrogram(&hf, &g1)?)
    })?;
    write_with(&dir.join("spectrogram_multiplier.csv"), |w| {
        io::write_spectrogram(w, &spectrogram(&gf, &g1)?)
    })?;
    write_with(&dir.join("singular_values.csv"), |w| io::write_values(w, &top))?;
    write_with(&dir.join("singular_vector.csv"), |w| io::write_signal(w, &segment))?;
    let eff_hat = eff.frequency_response();
    write_with(&dir.join("frequency_response.csv"), |w| {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["v", "ideal", "effective.re", "effective.im"])
            .map_err(gabmul::Error::from)?;
        for v in 0..n {
            out.write_record([
                v.to_string(),
                h_hat[v].re.to_string(),
                eff_hat[v].re.to_string(),
                eff_hat[v].im.to_string(),
            ])
            .map_err(gabmul::Error::from)?;
        }
        out.flush().map_err(gabmul::Error::from)?;
        Ok(())
    })?;

    let summary = LowpassSummary {
        n,
        cutoff: args.cutoff,
        seed: args.seed,
        spectral_distance: top[0],
        frobenius_distance: diff.kernel().frobenius_norm(),
        response_gap_sup: h_hat.max_abs_diff(&eff_hat),
        kernel_residual: k_g.kernel().sub(eff.kernel().kernel())?.max_abs(),
        top_singular_values: top,
    };
    write_json(&dir.join("summary.json"), &summary)?;
    println!(
        "N = {n}, R = {}: ||H - G|| = {:.6}, ||H - G||_F = {:.6}, max response gap = {:.6}",
        args.cutoff, summary.spectral_distance, summary.frobenius_distance, summary.response_gap_sup
    );
    println!("wrote {}", dir.display());
    Ok(())
}

pub struct ReprArgs {
    pub h: Signal,
    pub g1: Signal,
    pub g2: Signal,
    pub lattice: Lattice,
    pub tol: f64,
}

pub fn repr_check(args: &ReprArgs, output: Option<&Path>) -> Result<bool, CliError> {
    let report = check_representability(&args.h, &args.g1, &args.g2, &args.lattice, args.tol)?;
    emit_report(&report, output)?;
    Ok(report.representable)
}

fn emit_report(report: &RepresentabilityReport, output: Option<&Path>) -> Result<(), CliError> {
    println!("{}", report.to_json());
    if let Some(path) = output {
        write_json(path, report)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ConstructionSummary {
    representable: bool,
    n: usize,
    alpha: usize,
    beta: usize,
    relative_kernel_gap: f64,
    mask_file: String,
}

pub const CONSTRUCT_GAP: f64 = 1e-9;

/// Writes the mask and reports how well the resulting multiplier matches the filter.
pub fn repr_construct(args: &ReprArgs, mask_path: &Path) -> Result<bool, CliError> {
    let report = check_representability(&args.h, &args.g1, &args.g2, &args.lattice, args.tol)?;
    if !report.representable {
        eprintln!("filter is not representable on this lattice; nothing written");
        emit_report(&report, None)?;
        return Ok(false);
    }
    let sc = construct_symbol_unchecked(&args.h, &args.g1, &args.g2, &args.lattice)?;
    write_with(mask_path, |w| io::write_operator(w, Representation::Mask, &sc.mask))?;
    let gm = GaborMultiplier::new(args.g1.clone(), args.g2.clone(), sc.mask, args.lattice)?;
    let gap = relative_frobenius_error(
        gm_kernel(&gm).kernel(),
        LtiFilter::new(args.h.clone()).kernel().kernel(),
    );
    let summary = ConstructionSummary {
        representable: true,
        n: args.lattice.n(),
        alpha: args.lattice.alpha(),
        beta: args.lattice.beta(),
        relative_kernel_gap: gap,
        mask_file: mask_path.display().to_string(),
    };
    println!("{}", serde_json::to_string_pretty(&summary).expect("serializable"));
    Ok(gap <= CONSTRUCT_GAP)
}

struct Row {
    check: &'static str,
    param: String,
    error: f64,
    tolerance: f64,
}

const L: f64 = 8.0;
const STEP: f64 = 1.0 / 64.0;
const FINE_STEP: f64 = 1.0 / 1024.0;

fn bump(w: f64) -> f64 {
    let x = w / 2.0;
    if x.abs() < 1.0 {
        (-1.0 / (1.0 - x * x)).exp()
    } else {
        0.0
    }
}

fn gauss_rows(lambdas: &[f64]) -> gabmul::Result<Vec<Row>> {
    let mut rows = Vec::new();
    let g = GaussianProfile::standard(1).sample(L, STEP)?;

    let corr = window_correlation_numeric(&g, &g)?;
    let expected = GridFunction::from_real_fn(L, STEP, |t| (-PI * t * t / 2.0).exp())?;
    rows.push(Row {
        check: "window correlation",
        param: "standard".into(),
        error: relative_l2_error(&corr, &expected)?,
        tolerance: 1e-8,
    });

    for &lambda in lambdas {
        let p = format!("λ={lambda}");
        let gl_profile = rescaled_gaussian(lambda, 1)?;
        let gl = gl_profile.sample(L, STEP)?;
        rows.push(Row {
            check: "fourier transform",
            param: p.clone(),
            error: relative_l2_error(&fourier_numeric(&gl), &gauss_fourier(&gl_profile).sample(L, STEP)?)?,
            tolerance: 1e-8,
        });
        rows.push(Row {
            check: "fourier multiplier",
            param: p.clone(),
            error: relative_l2_error(
                &fourier_multiplier_numeric(&gl, &gl)?,
                &fourier_multiplier_gauss(lambda, 1)?.sample(L, STEP)?,
            )?,
            tolerance: 1e-8,
        });
        let aw = stft_multiplier_numeric(&gl, &g, &g, &gl)?;
        rows.push(Row {
            check: "anti-wick (6λ²+4λ+1 form)",
            param: p.clone(),
            error: relative_l2_error(&aw, &antiwick_gauss(lambda, 1)?.sample(L, STEP)?)?,
            tolerance: 1e-6,
        });
        rows.push(Row {
            check: "anti-wick (2λ²+λ+2 form)",
            param: p.clone(),
            error: relative_l2_error(&aw, &antiwick_gauss_exact(lambda, 1)?.sample(L, STEP)?)?,
            tolerance: 1e-6,
        });
        let fine = gl_profile.sample(L, FINE_STEP)?;
        for r in [1.0, 2.0, 4.0] {
            let closed = weak_lr_norm_gauss(lambda, r, 1)?;
            rows.push(Row {
                check: "weak L^r norm",
                param: format!("λ={lambda}, r={r}"),
                error: (weak_lr_norm_numeric(&fine, r)? - closed).abs() / closed,
                tolerance: 1e-2,
            });
        }
    }

    let m = GridFunction::from_real_fn(L, STEP, bump)?;
    let f = GridFunction::from_fn(L, STEP, |t| {
        Complex64::new((-PI * (t - 0.5).powi(2)).exp(), 0.5 * (-PI * (t + 1.0).powi(2) / 2.0).exp())
    })?;
    let a = stft_multiplier_numeric(&m, &g, &g, &f)?;
    let t = fourier_multiplier_numeric(&smoothed_multiplier(&m, &g, &g)?, &f)?;
    rows.push(Row {
        check: "smoothing identity",
        param: "bump".into(),
        error: a.sub(&t)?.l2_norm() / f.l2_norm(),
        tolerance: 1e-6,
    });
    Ok(rows)
}

/// Prints the table; true if every row passes.
pub fn gauss_verify(lambdas: &[f64]) -> Result<bool, CliError> {
    if let Some(bad) = lambdas.iter().find(|&&l| !(l > 0.0 && l.is_finite())) {
        return Err(CliError::Usage(format!("lambda must be positive, got {bad}")));
    }
    let rows = gauss_rows(lambdas)?;
    println!("{:<26} {:<16} {:>10} {:>10}  status", "check", "parameters", "error", "tolerance");
    let mut all = true;
    for row in &rows {
        let ok = row.error <= row.tolerance;
        all &= ok;
        println!(
            "{:<26} {:<16} {:>10.2e} {:>10.0e}  {}",
            row.check,
            row.param,
            row.error,
            row.tolerance,
            if ok { "PASS" } else { "FAIL" }
        );
    }
    let failed = rows.iter().filter(|r| r.error > r.tolerance).count();
    println!("{} of {} checks passed", rows.len() - failed, rows.len());
    Ok(all)
}

pub fn spectrogram_cmd(f: &Signal, g: &Signal, output: &Path) -> Result<(), CliError> {
    let v = stft(f, g)?;
    let values = spectrogram(f, g)?;
    write_with(output, |w| io::write_spectrogram(w, &values))?;
    let energy = v.frobenius_norm().powi(2);
    let expected = f.len() as f64 * f.norm_sqr() * g.norm_sqr();
    let rel = if expected > 0.0 {
        (energy - expected).abs() / expected
    } else {
        energy
    };
    println!(
        "energy {energy} vs N ||f||^2 ||g||^2 = {expected} (relative difference {rel:.2e})"
    );
    println!("wrote {}", output.display());
    Ok(())
}

pub fn write_signal_file(s: &Signal, output: &Path) -> Result<(), CliError> {
    write_with(output, |w| io::write_signal(w, s))?;
    println!("wrote {}", output.display());
    Ok(())
}
