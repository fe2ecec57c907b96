//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Every tolerance is pinned here; run with `cargo test --test acceptance`
//! (add `-- --nocapture` to see the per-criterion lines).

mod common;

use std::collections::BTreeMap;

use common::{c, exp_series, rand_unitary, real_rank, M64};
use kreinlab::cmatrix::inner;
use kreinlab::cuntz::{build_representation, PCSpec, Word};
use kreinlab::fock::{fp_ghost_ops, fp_relation_report, FockBasis, FockSpec};
use kreinlab::involutions::{
    indefiniteness_witness, lie_membership, pauli_dagger, sigma, PauliIndex, LIE_MEMBERSHIP_TOL,
};
use kreinlab::krein::{double_representation, NormClass, Parity};
use kreinlab::models::{
    classify_spectrum, full_model, gaussian_commutator_defect, pauli_rep, Combo, GridSpec,
    ModelParams, SpectrumClass,
};
use kreinlab::words::{evaluate, multiply, rho_symbolic, NCElement};
use kreinlab::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn verdict(number: usize, description: &str, pass: bool) {
    println!(
        "acceptance {:2}: {}: {}",
        number,
        if pass { "PASS" } else { "FAIL" },
        description
    );
    assert!(
        pass,
        "acceptance criterion {} failed: {}",
        number, description
    );
}

fn params(m_a: f64, m_b: f64, g: Complex64, combo: Combo, cutoff: usize) -> ModelParams<f64> {
    ModelParams::new(m_a, m_b, g, combo, cutoff).unwrap()
}

#[test]
fn acceptance_01_two_level_trichotomy() {
    let mut pass = true;

    // Independent quadratic-formula oracle.
    let oracle = |g_abs: f64| -> (f64, f64, f64) {
        let disc = (2.0f64 - 1.0) * (2.0 - 1.0) - 4.0 * g_abs * g_abs;
        (disc, 1.5, disc.abs().sqrt() / 2.0)
    };

    let r1 = classify_spectrum(&params(2.0, 1.0, c(0.25, 0.0), Combo::ALL[0], 4)).unwrap();
    pass &= r1.classification == SpectrumClass::TwoReal;
    let (_, mid, half) = oracle(0.25);
    pass &= (r1.eigenvalues[0] - c(mid + half, 0.0)).norm() <= 1e-12;
    pass &= (r1.eigenvalues[1] - c(mid - half, 0.0)).norm() <= 1e-12;
    let mut classes: Vec<&str> = r1.krein_norms.iter().map(|n| n.as_str()).collect();
    classes.sort_unstable();
    pass &= classes == ["negative", "positive"];

    let r2 = classify_spectrum(&params(2.0, 1.0, c(0.5, 0.0), Combo::ALL[0], 4)).unwrap();
    pass &= r2.classification == SpectrumClass::OneRealNeutral;
    pass &= (r2.eigenvalues[0] - c(1.5, 0.0)).norm() <= 1e-12;
    pass &= r2.krein_norms == vec![NormClass::Neutral];

    let r3 = classify_spectrum(&params(2.0, 1.0, c(1.0, 0.0), Combo::ALL[0], 4)).unwrap();
    pass &= r3.classification == SpectrumClass::ComplexPair;
    let (_, mid3, half3) = oracle(1.0);
    pass &= (r3.eigenvalues[0] - c(mid3, half3)).norm() <= 1e-12;
    pass &= (r3.eigenvalues[1] - c(mid3, -half3)).norm() <= 1e-12;
    pass &= r3.krein_norms.is_empty();

    verdict(
        1,
        "two-level trichotomy at (2,1), g in {0.25, 0.5, 1.0}, eigenvalues to 1e-12",
        pass,
    );
}

#[test]
fn acceptance_02_all_combos_share_restriction_and_vacuum_norm() {
    let mut pass = true;
    let g = c(0.3, 0.4);
    let expected = M64::from_rows(&[vec![c(2.0, 0.0), -g], vec![g.conj(), c(1.0, 0.0)]]).unwrap();
    for combo in Combo::ALL {
        let model = full_model(&params(2.0, 1.0, g, combo, 4)).unwrap();
        pass &= model.restriction.diff_norm(&expected).unwrap() <= 1e-12;
        let vacuum_check = model
            .report
            .checks
            .iter()
            .find(|ch| ch.name == "model_vacuum_bdag_norm")
            .unwrap();
        // (b' vac | b' vac) = -1 exactly: residual exactly zero.
        pass &= vacuum_check.residual == 0.0;
    }
    verdict(
        2,
        "all four statistics combos at cutoff 4 share the restriction matrix; (b' vac|b' vac) = -1 exactly",
        pass,
    );
}

#[test]
fn acceptance_03_dagger_hermitian_star_nonhermitian() {
    let mut pass = true;
    let model = full_model(&params(
        2.0,
        1.0,
        c(0.5, 0.0),
        Combo::parse("ff").unwrap(),
        4,
    ))
    .unwrap();
    let conj = model
        .eta
        .mul(&model.h.adjoint())
        .unwrap()
        .mul(&model.eta)
        .unwrap();
    pass &= conj.diff_norm(&model.h).unwrap() <= 1e-12;
    pass &= model.star_gap >= 0.1;
    let rewritten = model
        .report
        .checks
        .iter()
        .find(|ch| ch.name == "model_rewritten_form")
        .unwrap();
    pass &= rewritten.residual <= 1e-12;
    verdict(
        3,
        "norm(eta H* eta - H) <= 1e-12 while norm(H* - H) >= 0.1; rewritten involution form matches",
        pass,
    );
}

#[test]
fn acceptance_04_pseudo_cuntz_relation_suites() {
    let mut pass = true;
    let suites = [
        PCSpec::new(1, 1, 6, Word(vec![1])).unwrap(),
        PCSpec::new(2, 0, 6, Word(vec![1, 2])).unwrap(),
        PCSpec::new(0, 2, 6, Word(vec![1, 2])).unwrap(),
    ];
    for spec in &suites {
        let rep = build_representation::<f64>(spec).unwrap();
        let report = rep.relation_residuals().unwrap();
        for check in &report.checks {
            pass &= check.residual <= 1e-12;
        }
    }
    verdict(
        4,
        "C_{1,1}, O_2, C_{0,2} at depth 6: Toeplitz, completeness, chi-metric, covariance <= 1e-12",
        pass,
    );
}

#[test]
fn acceptance_05_fp_ghosts_two_pairs() {
    let ghosts = fp_ghost_ops::<f64>(2).unwrap();
    let mut pass = ghosts.basis.dim() == 16;
    let report = fp_relation_report(&ghosts).unwrap();
    for check in &report.checks {
        pass &= check.residual <= 1e-12;
    }
    verdict(
        5,
        "FP ghosts with 2 pairs (dim 16): pairing, hermiticity, and vanishing anticommutators <= 1e-12",
        pass,
    );
}

#[test]
fn acceptance_06_eta_car_exactness_and_transform() {
    let mut pass = true;
    for d in 1..=3usize {
        for mask in 0..(1u32 << d) {
            let signs: Vec<i8> = (0..d)
                .map(|k| if mask & (1 << k) == 0 { 1 } else { -1 })
                .collect();
            let eta1 = M64::from_diag(&signs.iter().map(|&s| c(s as f64, 0.0)).collect::<Vec<_>>());
            let basis = FockBasis::new(FockSpec::fermi(d, eta1.clone()).unwrap());
            let mut samples: Vec<Vec<Complex64>> = (0..d)
                .map(|k| {
                    let mut v = vec![c(0.0, 0.0); d];
                    v[k] = c(1.0, 0.0);
                    v
                })
                .collect();
            samples.push(
                (0..d)
                    .map(|k| c(0.4 - 0.1 * k as f64, 0.2 + 0.3 * k as f64))
                    .collect(),
            );
            let report = basis.relation_report(&samples).unwrap();
            for check in &report.checks {
                pass &= check.residual <= 1e-12;
            }

            // Prop-4.4-style transform with a seeded random unitary.
            let mut rng = ChaCha8Rng::seed_from_u64(600 + mask as u64 + 16 * d as u64);
            let u = rand_unitary(&mut rng, d);
            let eta_prime = u.mul(&eta1).unwrap().mul(&u.adjoint()).unwrap();
            for f in &samples {
                for g in &samples {
                    let uf = u.adjoint().mul_vec(f).unwrap();
                    let ug = u.adjoint().mul_vec(g).unwrap();
                    let t_ann = basis.ann(&uf).unwrap();
                    let t_cre = basis.eta_cre(&ug).unwrap();
                    let anti = t_ann
                        .mul(&t_cre)
                        .unwrap()
                        .add(&t_cre.mul(&t_ann).unwrap())
                        .unwrap();
                    let rhs = M64::identity(basis.dim())
                        .scale(inner(f, &eta_prime.mul_vec(g).unwrap()).unwrap());
                    pass &= anti.diff_norm(&rhs).unwrap() <= 1e-12;
                }
            }
        }
    }
    verdict(
        6,
        "eta-CAR exact for d <= 3, all sign patterns; t(f) = a(U*f) meets the U eta U* relations <= 1e-12",
        pass,
    );
}

#[test]
fn acceptance_07_weyl_vacuum_law() {
    let mut pass = true;
    let eta1 = M64::from_diag(&[c(-1.0, 0.0)]);
    let basis = FockBasis::new(FockSpec::bose(1, 48, eta1).unwrap());
    let gamma = basis.second_quantization().unwrap();
    for &amp in &[0.25f64, 0.5, 1.0] {
        let f = vec![c(amp, 0.0)];
        let w = basis.weyl_operator(&f, 1e-14).unwrap();
        let got = basis.krein_vacuum_expectation(&w, &gamma).unwrap();
        let want = exp_series(-amp * amp / 4.0);
        pass &= (got - c(want, 0.0)).norm() <= 1e-6;
    }
    verdict(
        7,
        "Weyl vacuum law at cutoff 48: |(vac|W(f) vac) - exp(-|f|^2/4)| <= 1e-6 for |f| in {0.25, 0.5, 1}",
        pass,
    );
}

#[test]
fn acceptance_08_doubling_p12() {
    let spec = PCSpec::new(2, 0, 6, Word(vec![1, 2])).unwrap();
    let rep = build_representation::<f64>(&spec).unwrap();
    let doubled =
        double_representation(&rep.labeled_generators(), &rep.alternating_alpha_images()).unwrap();
    let mut pass = doubled.covariance_residual().unwrap() == 0.0;
    let n = rep.dim();
    pass &= doubled
        .space()
        .fundamental_decomposition()
        .unwrap()
        .signature
        == (n, n);
    let mut parts = BTreeMap::new();
    parts.insert("s1".to_string(), Parity::Even);
    parts.insert("s2".to_string(), Parity::Odd);
    pass &= doubled.grading_residual(&parts).unwrap() <= 1e-12;
    verdict(
        8,
        "doubled P(12) at depth 6: covariance exactly 0, signature (n, n), grading <= 1e-12",
        pass,
    );
}

#[test]
fn acceptance_09_pauli_discretization() {
    let mut pass = true;
    let rep = pauli_rep(&GridSpec::new(401, 10.0).unwrap()).unwrap();
    let exact_names = [
        "pauli_parity_anticommutation",
        "pauli_a_dagger_plus_a_star",
        "pauli_p_dagger",
        "pauli_q_dagger",
    ];
    for name in exact_names {
        let check = rep.report.checks.iter().find(|ch| ch.name == name).unwrap();
        pass &= check.residual <= 1e-13;
    }
    let defect = rep
        .report
        .checks
        .iter()
        .find(|ch| ch.name == "pauli_gaussian_commutator_defect")
        .unwrap()
        .residual;
    pass &= defect <= 1e-2;

    // Halving h at the same half-width: 401 -> 801 points.
    let fine = pauli_rep(&GridSpec::new(801, 10.0).unwrap()).unwrap();
    let fine_defect = fine
        .report
        .checks
        .iter()
        .find(|ch| ch.name == "pauli_gaussian_commutator_defect")
        .unwrap()
        .residual;
    pass &= defect / fine_defect >= 3.0;

    // Cross-check the reported defect against a direct stencil evaluation.
    let phi: Vec<Complex64> = rep
        .grid
        .iter()
        .map(|&q: &f64| c((-q * q / 2.0).exp(), 0.0))
        .collect();
    let recompute = gaussian_commutator_defect(&rep.ops.a, &rep.ops.a_dagger, &phi).unwrap();
    pass &= (recompute - defect).abs() <= 1e-13;

    verdict(
        9,
        "Pauli grid n=401, L=10: exact parity/dagger residuals <= 1e-13, Gaussian defect <= 1e-2, O(h^2)",
        pass,
    );
}

#[test]
fn acceptance_10_symbolic_numeric_oracle() {
    let mut pass = true;
    let signs = [1i8, -1];
    let spec = PCSpec::new(1, 1, 8, Word(vec![1])).unwrap();
    let rep = build_representation::<f64>(&spec).unwrap();
    // Compress so that no intermediate product can reach the depth boundary:
    // three-letter monomials need three spare levels.
    let p = rep.length_projector(spec.depth() - 3);
    let mut rng = ChaCha8Rng::seed_from_u64(1009);
    let lattice = [c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)];
    for _ in 0..100 {
        let word = |rng: &mut ChaCha8Rng, max_len: usize| -> Word {
            let len = rng.gen_range(0..=max_len);
            Word((0..len).map(|_| rng.gen_range(1..=2u8)).collect())
        };
        let (xl, xr) = (word(&mut rng, 3), word(&mut rng, 3));
        let x = NCElement::<f64>::monomial(2, xl, xr, lattice[rng.gen_range(0..4)]).unwrap();
        let (yl, yr) = (word(&mut rng, 3), word(&mut rng, 3));
        let y = NCElement::<f64>::monomial(2, yl, yr, lattice[rng.gen_range(0..4)]).unwrap();

        let normalized = multiply(&x, &y, &signs).unwrap();
        let route_a = evaluate(&normalized, &rep).unwrap();
        let route_b = evaluate(&x, &rep)
            .unwrap()
            .mul(&evaluate(&y, &rep).unwrap())
            .unwrap();
        let defect = p
            .mul(&route_a.sub(&route_b).unwrap())
            .unwrap()
            .mul(&p)
            .unwrap()
            .frobenius_norm();
        pass &= defect <= 1e-10;

        // Symbolic rho multiplicativity, exactly.
        let lhs = multiply(
            &rho_symbolic(&x, &signs).unwrap(),
            &rho_symbolic(&y, &signs).unwrap(),
            &signs,
        )
        .unwrap();
        let rhs = rho_symbolic(&multiply(&x, &y, &signs).unwrap(), &signs).unwrap();
        pass &= lhs == rhs;
    }
    verdict(
        10,
        "100 seeded word products: normalize-then-evaluate vs evaluate-then-multiply <= 1e-10; symbolic rho exact",
        pass,
    );
}

#[test]
fn acceptance_11_involutions_suite() {
    let mut pass = true;

    // I_{1,1}^{dagger_1} I_{1,1} = -I exactly.
    let i1 = PauliIndex::new(1).unwrap();
    let s3 = sigma::<f64>(PauliIndex::new(3).unwrap());
    let product = pauli_dagger(i1, &s3).unwrap().mul(&s3).unwrap();
    pass &= product
        .diff_norm(&M64::identity(2).scale(c(-1.0, 0.0)))
        .unwrap()
        == 0.0;

    for idx in 1..=3u8 {
        let i = PauliIndex::new(idx).unwrap();
        let witness = indefiniteness_witness::<f64>(i).unwrap();
        for lam in witness.sp_y {
            pass &= (lam - c(-1.0, 0.0)).norm() <= 1e-12;
        }
        for lam in witness.sp_x {
            pass &= (lam - c(1.0, 0.0)).norm() <= 1e-12;
        }

        // 100 random members of the displayed parametrization, 100 rejected
        // non-members built by shifting a member off the solution set.
        let mut rng = ChaCha8Rng::seed_from_u64(1100 + idx as u64);
        for _ in 0..100 {
            let member = random_member(idx, &mut rng);
            pass &= lie_membership(i, &member, LIE_MEMBERSHIP_TOL).unwrap();
            let mut shift = rng.gen_range(0.1..1.0);
            if rng.gen_bool(0.5) {
                shift = -shift;
            }
            let outsider = member.add(&M64::identity(2).scale(c(shift, 0.0))).unwrap();
            pass &= !lie_membership(i, &outsider, LIE_MEMBERSHIP_TOL).unwrap();
        }

        // Linear-system oracle: X^{dagger_i} + X = 0 has a 4-real-dimensional
        // solution space.
        let mut columns: Vec<M64> = Vec::new();
        for k in 0..4 {
            let (r, cidx) = (k / 2, k % 2);
            let mut basis_re = M64::zeros(2, 2);
            basis_re.set(r, cidx, c(1.0, 0.0));
            columns.push(basis_re);
            let mut basis_im = M64::zeros(2, 2);
            basis_im.set(r, cidx, c(0.0, 1.0));
            columns.push(basis_im);
        }
        let mut system = Vec::new();
        for eq in 0..8 {
            let (r, cc) = ((eq % 4) / 2, (eq % 4) % 2);
            let mut row = Vec::with_capacity(8);
            for basis in &columns {
                let image = pauli_dagger(i, basis).unwrap().add(basis).unwrap();
                let entry = image.at(r, cc);
                row.push(if eq < 4 { entry.re } else { entry.im });
            }
            system.push(row);
        }
        pass &= 8 - real_rank(system) == 4;
    }

    verdict(
        11,
        "involutions: exact I11 witness, spectra {-1,-1}/{1,1}, 100 members accepted, 100 rejected, dim = 4",
        pass,
    );
}

fn random_member(idx: u8, rng: &mut ChaCha8Rng) -> M64 {
    let a = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let b = rng.gen_range(-1.0..1.0);
    let cc = rng.gen_range(-1.0..1.0);
    match idx {
        1 => M64::from_rows(&[vec![a, c(0.0, b)], vec![c(0.0, cc), -a.conj()]]).unwrap(),
        2 => {
            let t = rng.gen_range(-1.0..1.0);
            let s = rng.gen_range(-1.0..1.0);
            M64::from_rows(&[vec![c(t, s), c(b, 0.0)], vec![c(cc, 0.0), c(-t, s)]]).unwrap()
        }
        _ => {
            let alpha = rng.gen_range(-1.0..1.0);
            let delta = rng.gen_range(-1.0..1.0);
            M64::from_rows(&[vec![c(0.0, alpha), a], vec![a.conj(), c(0.0, delta)]]).unwrap()
        }
    }
}
