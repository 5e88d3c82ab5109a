//! validate → weight → generator → family → gram / eigen / rodrigues /
//! adjoint / completeness / isometry.

use std::collections::BTreeMap;
use std::time::Instant;

use holoherm::gauss_poly::{hamiltonian_apply, hermite_family_with, rodrigues};
use holoherm::integrals::{adjoint_residual, expand_in_family, gram_matrix_with, hphi_norm_sq};
use holoherm::matrix::{c, real, I};
use holoherm::model::{
    self, build_generator, ccr_matrix, compute_weight_data, condition1_margin, generator_equation_residual, random_phases, random_valid_triple,
    spectral_residual, validate_phase_triple,
};
use holoherm::serde_repr::matrix_to_nested;
use holoherm::transform::{isometry_residual_with, transform_many, IsometryMode, QuadSpec, TestFunction};
use holoherm::{ComplexMatrix, Complex64, Exec, GaussPoly, GeneratorData, HermiteFamily, MatrixExt, MultiIndex, PhaseTriple, PolyC, WeightData};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{tolerances, RunConfig, TolProfile, XSpec, SCHEMA};
use crate::report::{Check, VerificationReport};
use crate::CliError;

const BUILD_TOL: f64 = holoherm::ALGEBRAIC_TOL;
/// Below this `min μ_i/λ_i` the generator is reported as ill-conditioned.
const CONDITIONING_WARN: f64 = 1e-2;
const ISOMETRY_MAX_DIM: usize = 2;
const ISOMETRY_MAX_DEGREE: usize = 2;

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub exec: Exec,
    pub profile: TolProfile,
    pub adjoint_pairs: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { exec: Exec::default(), profile: TolProfile::Default, adjoint_pairs: 100 }
    }
}

/// Validated data for one configuration.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub pt: PhaseTriple,
    pub wd: WeightData,
    pub gen: GeneratorData,
}

fn input_stage(stage: &'static str) -> impl Fn(holoherm::Error) -> CliError {
    move |source| CliError::Stage { stage, source, input: true }
}

fn verify_stage(stage: &'static str) -> impl Fn(holoherm::Error) -> CliError {
    move |source| CliError::Stage { stage, source, input: false }
}

struct Timer(BTreeMap<String, f64>);

impl Timer {
    fn run<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.0.insert(stage.to_string(), start.elapsed().as_secs_f64() * 1e3);
        out
    }
}

pub fn prepare_phase(cfg: &RunConfig) -> Result<(PhaseTriple, WeightData), CliError> {
    cfg.check()?;
    let (a, b, cm) = cfg.matrices()?;
    let pt = validate_phase_triple(&a, &b, &cm, BUILD_TOL).map_err(input_stage("validate"))?;
    let mut wd = compute_weight_data(&pt, BUILD_TOL).map_err(input_stage("weight"))?;
    if let Some(u) = cfg.eigenbasis_matrix()? {
        wd = wd.with_eigenbasis(u, BUILD_TOL).map_err(input_stage("weight"))?;
    }
    Ok((pt, wd))
}

pub fn prepare(cfg: &RunConfig) -> Result<Prepared, CliError> {
    let (pt, wd) = prepare_phase(cfg)?;
    let x = cfg.intertwiner()?;
    let gen = build_generator(&wd, cfg.rho_fraction * wd.lambda0, &x, BUILD_TOL).map_err(input_stage("generator"))?;
    Ok(Prepared { pt, wd, gen })
}

fn family_error(fam: &HermiteFamily, f: impl Fn(&MultiIndex, &GaussPoly) -> holoherm::Result<f64>) -> holoherm::Result<f64> {
    fam.members.iter().try_fold(0.0f64, |acc, (a, gp)| Ok(acc.max(f(a, gp)?)))
}

fn random_poly(n: usize, degree: usize, rng: &mut ChaCha8Rng) -> PolyC {
    PolyC::from_terms(
        n,
        MultiIndex::all_up_to(n, degree).into_iter().map(|a| (a, c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))),
    )
}

/// Full verification of one configuration.
pub fn run_verify(cfg: &RunConfig, opts: &Options) -> Result<VerificationReport, CliError> {
    verify_labeled(cfg, opts, "config".to_string())
}

fn verify_labeled(cfg: &RunConfig, opts: &Options, label: String) -> Result<VerificationReport, CliError> {
    let tol = tolerances(opts.profile, &cfg.tolerances);
    let mut timer = Timer(BTreeMap::new());
    let Prepared { pt, wd, gen } = timer.run("construct", || prepare(cfg))?;
    let n = wd.n;
    let rho2 = gen.rho2();
    let mut residuals = BTreeMap::new();
    let mut warnings = Vec::new();

    let ccr = (ccr_matrix(&wd, &gen.q) - ComplexMatrix::identity(n, n).scale(2.0 * rho2)).max_abs();
    residuals.insert("ccr".to_string(), ccr);
    residuals.insert("eq2202".to_string(), generator_equation_residual(&wd, &gen) / wd.phi_zzbar.entry_scale());
    residuals.insert("spectral".to_string(), spectral_residual(&wd, &gen));
    residuals.insert("symmetry_Q".to_string(), gen.q_symmetry_residual / gen.q.entry_scale());
    residuals.insert("symmetry_S".to_string(), gen.s_symmetry_residual / gen.s.entry_scale());
    let margin = condition1_margin(&wd, &gen.q).map_err(verify_stage("condition1"))?;
    residuals.insert("condition1_margin".to_string(), margin);

    let min_ratio = gen.mu.iter().zip(&wd.lambda).map(|(m, l)| m / l).fold(f64::INFINITY, f64::min);
    if min_ratio < CONDITIONING_WARN {
        warnings.push(format!(
            "ill-conditioned generator: min mu_i/lambda_i = {min_ratio:.3e}; S and the creation operators grow like lambda/mu"
        ));
    }

    let exec = opts.exec;
    let fam = timer.run("family", || hermite_family_with(&wd, &gen, cfg.max_degree, exec));

    let gram = timer.run("gram", || gram_matrix_with(&fam, &wd, exec)).map_err(verify_stage("gram"))?;
    let (off, diag) = gram.orthogonality_errors(&fam);
    residuals.insert("gram_max_offdiag".to_string(), off);
    residuals.insert("gram_diag_maxrel".to_string(), diag);

    let eigen = timer
        .run("eigen", || {
            family_error(&fam, |a, psi| {
                let h = hamiltonian_apply(&wd, &gen, psi)?;
                let expected = psi.scale(real((2 * a.degree() + 1) as f64 * rho2));
                Ok(h.max_coeff_distance(&expected)? / psi.poly.max_abs_coeff())
            })
        })
        .map_err(verify_stage("eigen"))?;
    residuals.insert("eigen_max".to_string(), eigen);

    let rod = timer
        .run("rodrigues", || family_error(&fam, |a, psi| rodrigues(&wd, &gen, a)?.relative_distance(psi)))
        .map_err(verify_stage("rodrigues"))?;
    residuals.insert("rodrigues_max".to_string(), rod);

    let adjoint = timer
        .run("adjoint", || -> holoherm::Result<f64> {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let mut worst: f64 = 0.0;
            for _ in 0..opts.adjoint_pairs {
                let f = GaussPoly::new(random_poly(n, rng.random_range(0..=4), &mut rng), gen.q.clone());
                let g = GaussPoly::new(random_poly(n, rng.random_range(0..=4), &mut rng), gen.q.clone());
                let i = rng.random_range(0..n);
                let scale = (hphi_norm_sq(&f, &wd)? * hphi_norm_sq(&g, &wd)?).sqrt();
                worst = worst.max(adjoint_residual(&wd, &gen, &f, &g, i)? / scale);
            }
            Ok(worst)
        })
        .map_err(verify_stage("adjoint"))?;
    residuals.insert("adjoint_max".to_string(), adjoint);

    let complete = timer
        .run("completeness", || -> holoherm::Result<f64> {
            let mut worst: f64 = 0.0;
            for beta in MultiIndex::all_up_to(n, cfg.max_degree) {
                let e = expand_in_family(&fam.ground().mul_monomial(&beta), &fam, &wd)?;
                worst = worst.max(e.residual / e.norm);
            }
            Ok(worst)
        })
        .map_err(verify_stage("completeness"))?;
    residuals.insert("completeness_residual".to_string(), complete);

    if !cfg.quadrature.isometry {
        warnings.push("isometry stage disabled by config".to_string());
    } else if n > ISOMETRY_MAX_DIM {
        warnings.push(format!("isometry stage skipped: quadrature is only run for n <= {ISOMETRY_MAX_DIM}"));
    } else {
        let quad = QuadSpec { nodes: cfg.quadrature.nodes };
        let iso = timer
            .run("isometry", || -> holoherm::Result<f64> {
                let mut worst: f64 = 0.0;
                for alpha in MultiIndex::all_up_to(n, ISOMETRY_MAX_DEGREE) {
                    let r = isometry_residual_with(&pt, &TestFunction::hermite(alpha), &wd, &quad, IsometryMode::Fit, exec)?;
                    worst = worst.max(r.residual);
                }
                Ok(worst)
            })
            .map_err(verify_stage("isometry"))?;
        residuals.insert("isometry".to_string(), iso);
    }

    let mut checks = BTreeMap::new();
    for (name, value) in &residuals {
        let Some(&limit) = tol.get(name) else { continue };
        let check = if name == "condition1_margin" { Check::at_least(*value, rho2 / 2.0 - limit) } else { Check::at_most(*value, limit) };
        checks.insert(name.clone(), check);
    }

    let mut report = VerificationReport {
        schema: SCHEMA.to_string(),
        label,
        n,
        q: matrix_to_nested(&gen.q),
        s: matrix_to_nested(&gen.s),
        rho2,
        mu2: gen.mu.iter().map(|m| m * m).collect(),
        lambda: wd.lambda.clone(),
        max_degree: cfg.max_degree,
        residuals,
        checks,
        pass: false,
        warnings,
        timings_ms: timer.0,
    };
    report.finalize();
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Example {
    /// One-variable space with `Q = S = 1/2`.
    Em,
    /// Two-variable space with `Q = S = K/4`, `K` the swap matrix.
    Ghs,
}

impl Example {
    pub fn name(self) -> &'static str {
        match self {
            Example::Em => "em",
            Example::Ghs => "ghs",
        }
    }

    /// `(ρ², μ_i², Q = S)` in closed form.
    pub fn closed_form(self, s: f64) -> (f64, f64, ComplexMatrix) {
        match self {
            Example::Em => ((1.0 - s) / (1.0 + s), (1.0 - s).powi(3) / (4.0 * s * (1.0 + s)), ComplexMatrix::from_element(1, 1, real(0.5))),
            Example::Ghs => {
                ((1.0 - s) / (2.0 * (1.0 + s)), (1.0 - s).powi(3) / (8.0 * s * (1.0 + s)), model::swap_matrix().scale(0.25))
            }
        }
    }
}

/// Config realizing the example with its canonical eigenbasis `U = iE`,
/// intertwiner and `ρ`.
pub fn example_config(example: Example, s: f64) -> Result<RunConfig, CliError> {
    if !(s > 0.0 && s < 1.0) {
        return Err(CliError::Config { path: "s".into(), message: format!("must satisfy 0<s<1, got {s}") });
    }
    let (a, b, cm) = match example {
        Example::Em => model::em_triple(s, 0.0),
        Example::Ghs => model::ghs_triple(s),
    };
    let n = a.nrows();
    let x = match example {
        Example::Em => XSpec::Phases(vec![0.0]),
        Example::Ghs => XSpec::Matrix(matrix_to_nested(&model::swap_matrix())),
    };
    let mut cfg = RunConfig::for_triple(&a, &b, &cm, 0.5, x);
    let u = ComplexMatrix::identity(n, n).map(|v| v * I);
    cfg.eigenbasis = Some(matrix_to_nested(&u));
    let (_, wd) = prepare_phase(&cfg)?;
    let (rho2, _, _) = example.closed_form(s);
    cfg.rho_fraction = rho2.sqrt() / wd.lambda0;
    Ok(cfg)
}

/// [`run_verify`] on the example plus closed-form checks of `Q, S, ρ², μ²`.
pub fn run_example(example: Example, s: f64, cfg_edit: impl FnOnce(&mut RunConfig), opts: &Options) -> Result<VerificationReport, CliError> {
    let mut cfg = example_config(example, s)?;
    cfg_edit(&mut cfg);
    let mut report = verify_labeled(&cfg, opts, format!("example {} s={s}", example.name()))?;
    let prepared = prepare(&cfg)?;
    let (rho2, mu2, qs) = example.closed_form(s);
    let gen = &prepared.gen;
    let items = [
        ("example_Q", (&gen.q - &qs).max_abs()),
        ("example_S", (&gen.s - &qs).max_abs()),
        ("example_rho2", (gen.rho2() - rho2).abs()),
        ("example_mu2", gen.mu.iter().map(|m| (m * m - mu2).abs()).fold(0.0, f64::max)),
    ];
    let mut worst: f64 = 0.0;
    for (k, v) in items {
        report.residuals.insert(k.to_string(), v);
        worst = worst.max(v);
    }
    report.residuals.insert("example_closed_form".to_string(), worst);
    // μ = sqrt(λ² - ρ²) amplifies input rounding by λ²/μ², which dominates as ρ → λ_0
    let kappa = prepared.wd.lambda.iter().zip(&gen.mu).map(|(l, m)| (l / m).powi(2)).fold(1.0, f64::max);
    report.residuals.insert("example_conditioning".to_string(), kappa);
    let limit = tolerances(opts.profile, &cfg.tolerances)["example_closed_form"] * kappa;
    report.checks.insert("example_closed_form".to_string(), Check::at_most(worst, limit));
    report.finalize();
    Ok(report)
}

/// Seed-pinned random valid configuration with `ρ = 0.5 λ_0` and random phases.
pub fn random_config(n: usize, seed: u64) -> RunConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, b, cm) = random_valid_triple(n, &mut rng);
    let mut cfg = RunConfig::for_triple(&a, &b, &cm, 0.5, XSpec::Phases(random_phases(n, &mut rng)));
    cfg.seed = seed;
    cfg
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationSummary {
    pub valid: bool,
    pub n: usize,
    pub lambda: Vec<f64>,
    pub lambda0: f64,
    pub c_phi: f64,
    pub c_big_phi: f64,
}

pub fn validate_summary(cfg: &RunConfig) -> Result<ValidationSummary, CliError> {
    let (pt, wd) = prepare_phase(cfg)?;
    Ok(ValidationSummary { valid: true, n: pt.n, lambda: wd.lambda.clone(), lambda0: wd.lambda0, c_phi: pt.c_phi, c_big_phi: pt.c_big_phi() })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstructSummary {
    pub n: usize,
    pub rho: f64,
    pub rho2: f64,
    pub lambda: Vec<f64>,
    pub mu2: Vec<f64>,
    pub q: holoherm::serde_repr::NestedMatrix,
    pub s: holoherm::serde_repr::NestedMatrix,
    pub s_plus_q: holoherm::serde_repr::NestedMatrix,
    pub condition1_margin: f64,
}

pub fn construct_summary(cfg: &RunConfig) -> Result<ConstructSummary, CliError> {
    let p = prepare(cfg)?;
    Ok(ConstructSummary {
        n: p.wd.n,
        rho: p.gen.rho,
        rho2: p.gen.rho2(),
        lambda: p.wd.lambda.clone(),
        mu2: p.gen.mu.iter().map(|m| m * m).collect(),
        q: matrix_to_nested(&p.gen.q),
        s: matrix_to_nested(&p.gen.s),
        s_plus_q: matrix_to_nested(&p.gen.sq),
        condition1_margin: condition1_margin(&p.wd, &p.gen.q).map_err(verify_stage("condition1"))?,
    })
}

/// Default evaluation points: a 5x5 grid in the first coordinate, others 0.
pub fn default_points(n: usize) -> Vec<Vec<Complex64>> {
    let mut pts = Vec::new();
    for im in -2..=2 {
        for re in -2..=2 {
            let mut z = vec![real(0.0); n];
            z[0] = c(0.5 * re as f64, 0.5 * im as f64);
            pts.push(z);
        }
    }
    pts
}

/// CSV table `z_k_re, z_k_im, ..., re, im, err` of `T h_α` at the points.
pub fn transform_table(cfg: &RunConfig, alpha: &MultiIndex, points: &[Vec<Complex64>], nodes: usize, exec: Exec) -> Result<String, CliError> {
    let (pt, _) = prepare_phase(cfg)?;
    if alpha.dim() != pt.n {
        return Err(CliError::Config { path: "hermite".into(), message: format!("index needs {} components", pt.n) });
    }
    let u = TestFunction::hermite(alpha.clone());
    let vals = transform_many(&pt, &u, points, &QuadSpec { nodes }, exec).map_err(verify_stage("transform"))?;
    let mut out = String::new();
    let header: Vec<String> = (0..pt.n).flat_map(|k| [format!("z{k}_re"), format!("z{k}_im")]).collect();
    out.push_str(&format!("{},re,im,err\n", header.join(",")));
    for (z, v) in points.iter().zip(vals) {
        let zs: Vec<String> = z.iter().flat_map(|w| [format!("{:.17e}", w.re), format!("{:.17e}", w.im)]).collect();
        out.push_str(&format!("{},{:.17e},{:.17e},{:.3e}\n", zs.join(","), v.value.re, v.value.im, v.error_estimate));
    }
    Ok(out)
}
