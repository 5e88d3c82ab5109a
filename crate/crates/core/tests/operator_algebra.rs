mod common;

use common::{em, ghs, random_gauss_poly, random_setup, Setup};
use holoherm::gauss_poly::{annihilation_ops, apply_chain, creation_ops, hamiltonian_apply, hermite_family, rodrigues};
use holoherm::matrix::real;
use holoherm::{GaussPoly, LinearDiffOp, MultiIndex, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const REL: f64 = 1e-9;

fn setups() -> Vec<Setup> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut v = vec![em(0.5), ghs(0.3)];
    for n in 1..=3 {
        v.push(random_setup(n, 0.5, &mut rng));
    }
    v
}

fn rel(a: &GaussPoly, b: &GaussPoly) -> f64 {
    a.relative_distance(b).unwrap()
}

fn power(op: &LinearDiffOp, i: usize, m: usize) -> Vec<(&LinearDiffOp, usize)> {
    vec![(op, i); m]
}

/// `Π_{k=1}^m (T + 2kρ²)` applied to `gp` where `T = a ∘ b`.
fn shifted_product(a: &LinearDiffOp, b: &LinearDiffOp, i: usize, m: usize, rho2: f64, gp: &GaussPoly) -> Result<GaussPoly> {
    let mut cur = gp.clone();
    for k in 1..=m {
        let t = apply_chain(&[(a, i), (b, i)], &cur)?;
        cur = t.add(&cur.scale(real(2.0 * k as f64 * rho2)))?;
    }
    Ok(cur)
}

#[test]
fn commutators_on_random_gauss_polys() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for s in setups() {
        let lam = annihilation_ops(&s.gen.q);
        let cre = creation_ops(&s.wd, &s.gen);
        let n = s.wd.n;
        for _ in 0..3 {
            let gp = random_gauss_poly(&s.gen.q, 4, &mut rng);
            for i in 0..n {
                for j in 0..n {
                    let aa = apply_chain(&[(&lam, i), (&lam, j)], &gp).unwrap();
                    let aa2 = apply_chain(&[(&lam, j), (&lam, i)], &gp).unwrap();
                    assert!(rel(&aa, &aa2) <= REL);
                    let cc = apply_chain(&[(&cre, i), (&cre, j)], &gp).unwrap();
                    let cc2 = apply_chain(&[(&cre, j), (&cre, i)], &gp).unwrap();
                    assert!(rel(&cc, &cc2) <= REL);
                    let ac = apply_chain(&[(&lam, i), (&cre, j)], &gp).unwrap();
                    let ca = apply_chain(&[(&cre, j), (&lam, i)], &gp).unwrap();
                    let expected = if i == j { gp.scale(real(2.0 * s.gen.rho2())) } else { gp.scale(real(0.0)) };
                    let comm = ac.sub(&ca).unwrap();
                    let scale = ac.poly.max_abs_coeff().max(gp.poly.max_abs_coeff());
                    assert!(comm.max_coeff_distance(&expected).unwrap() <= REL * scale, "[Λ{i},Λ{j}*]");
                }
            }
        }
    }
}

#[test]
fn annihilation_kills_ground_state() {
    for s in setups() {
        let lam = annihilation_ops(&s.gen.q);
        let psi0 = GaussPoly::gaussian(s.gen.q.clone());
        for i in 0..s.wd.n {
            assert!(lam.apply(i, &psi0).unwrap().poly.is_empty());
        }
    }
}

#[test]
fn lemma_identities_up_to_third_power() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for s in setups() {
        let lam = annihilation_ops(&s.gen.q);
        let cre = creation_ops(&s.wd, &s.gen);
        let rho2 = s.gen.rho2();
        for i in 0..s.wd.n {
            let gp = random_gauss_poly(&s.gen.q, 3, &mut rng);
            for m in 1..=3 {
                // Λ (Λ*)^m = (Λ*)^m Λ + 2mρ² (Λ*)^{m-1}
                let mut left = vec![(&lam, i)];
                left.extend(power(&cre, i, m));
                let lhs = apply_chain(&left, &gp).unwrap();
                let mut right = power(&cre, i, m);
                right.push((&lam, i));
                let rhs = apply_chain(&right, &gp)
                    .unwrap()
                    .add(&apply_chain(&power(&cre, i, m - 1), &gp).unwrap().scale(real(2.0 * m as f64 * rho2)))
                    .unwrap();
                assert!(rel(&lhs, &rhs) <= REL, "first identity m={m}");

                // Λ^m (Λ*)^m = Π (Y + 2kρ²),  Y = Λ* Λ
                let mut chain = power(&lam, i, m);
                chain.extend(power(&cre, i, m));
                let lhs = apply_chain(&chain, &gp).unwrap();
                let rhs = shifted_product(&cre, &lam, i, m, rho2, &gp).unwrap();
                assert!(rel(&lhs, &rhs) <= REL, "second identity m={m}");

                // Λ^{m+1} (Λ*)^m = {Π (X + 2kρ²)} Λ,  X = Λ Λ*
                let mut chain = power(&lam, i, m + 1);
                chain.extend(power(&cre, i, m));
                let lhs = apply_chain(&chain, &gp).unwrap();
                let rhs = shifted_product(&lam, &cre, i, m, rho2, &lam.apply(i, &gp).unwrap()).unwrap();
                assert!(rel(&lhs, &rhs) <= REL, "third identity m={m}");
            }
        }
    }
}

#[test]
fn family_members_are_eigenfunctions() {
    for s in setups().into_iter().take(4) {
        let fam = hermite_family(&s.wd, &s.gen, 4);
        for (alpha, psi) in &fam.members {
            let h = hamiltonian_apply(&s.wd, &s.gen, psi).unwrap();
            let expected = psi.scale(real((2 * alpha.degree() + 1) as f64 * s.gen.rho2()));
            assert!(h.max_coeff_distance(&expected).unwrap() <= REL * psi.poly.max_abs_coeff(), "{alpha}");
        }
    }
}

#[test]
fn rodrigues_matches_repeated_creation() {
    for s in setups() {
        let max = if s.wd.n == 3 { 3 } else { 5 };
        let fam = hermite_family(&s.wd, &s.gen, max);
        for (alpha, psi) in &fam.members {
            let r = rodrigues(&s.wd, &s.gen, alpha).unwrap();
            assert!(rel(&r, psi) <= REL, "{alpha}");
        }
    }
}

#[test]
fn family_path_independence_and_degree() {
    for s in setups() {
        let fam = hermite_family(&s.wd, &s.gen, 3);
        let cre = creation_ops(&s.wd, &s.gen);
        for (alpha, psi) in &fam.members {
            assert_eq!(psi.poly.degree(), alpha.degree());
            // reach α through the last nonzero index instead of the first
            if let Some(i) = alpha.components().iter().rposition(|&a| a > 0) {
                let prev = &fam.members[&alpha.minus_unit(i).unwrap()];
                assert!(rel(&cre.apply(i, prev).unwrap(), psi) <= REL, "{alpha}");
            }
        }
        assert!(fam.members.contains_key(&MultiIndex::zero(s.wd.n)));
    }
}
