#![allow(dead_code)]

use holoherm::matrix::{c, I};
use holoherm::model::{self, build_generator, compute_weight_data, phase_intertwiner, random_phases, random_valid_triple, validate_phase_triple};
use holoherm::{ComplexMatrix, GaussPoly, GeneratorData, MultiIndex, PhaseTriple, PolyC, WeightData};
use num_complex::Complex64;
use rand::Rng;

pub const TOL: f64 = 1e-10;

pub struct Setup {
    pub pt: PhaseTriple,
    pub wd: WeightData,
    pub gen: GeneratorData,
}

pub fn em(s: f64) -> Setup {
    let (a, b, cm) = model::em_triple(s, 0.0);
    let pt = validate_phase_triple(&a, &b, &cm, TOL).unwrap();
    let wd = compute_weight_data(&pt, TOL).unwrap().with_eigenbasis(ComplexMatrix::from_element(1, 1, I), TOL).unwrap();
    let rho = ((1.0 - s) / (1.0 + s)).sqrt();
    let gen = build_generator(&wd, rho, &phase_intertwiner(&[0.0]), TOL).unwrap();
    Setup { pt, wd, gen }
}

pub fn ghs(s: f64) -> Setup {
    let (a, b, cm) = model::ghs_triple(s);
    let pt = validate_phase_triple(&a, &b, &cm, TOL).unwrap();
    let u = ComplexMatrix::identity(2, 2).map(|v| v * I);
    let wd = compute_weight_data(&pt, TOL).unwrap().with_eigenbasis(u, TOL).unwrap();
    let rho = ((1.0 - s) / (2.0 * (1.0 + s))).sqrt();
    let gen = build_generator(&wd, rho, &model::swap_matrix(), TOL).unwrap();
    Setup { pt, wd, gen }
}

/// Random valid triple with `ρ = fraction · λ_0` and random diagonal phases.
pub fn random_setup<R: Rng>(n: usize, fraction: f64, rng: &mut R) -> Setup {
    let (a, b, cm) = random_valid_triple(n, rng);
    let pt = validate_phase_triple(&a, &b, &cm, TOL).unwrap();
    let wd = compute_weight_data(&pt, TOL).unwrap();
    let x = phase_intertwiner(&random_phases(n, rng));
    let gen = build_generator(&wd, fraction * wd.lambda0, &x, TOL).unwrap();
    Setup { pt, wd, gen }
}

pub fn random_poly<R: Rng>(n: usize, degree: usize, rng: &mut R) -> PolyC {
    PolyC::from_terms(
        n,
        MultiIndex::all_up_to(n, degree).into_iter().map(|a| (a, c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))),
    )
}

pub fn random_gauss_poly<R: Rng>(m: &ComplexMatrix, degree: usize, rng: &mut R) -> GaussPoly {
    GaussPoly::new(random_poly(m.nrows(), degree, rng), m.clone())
}

pub fn random_point<R: Rng>(n: usize, rng: &mut R) -> Vec<Complex64> {
    (0..n).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()
}
