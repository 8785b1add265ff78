use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fsifeti::benchmarks::{build_cavity, CavityParams, SolverChoice};
use fsifeti::coupling::{CoupledSystem, CouplingMethod, Subdomain, SubdomainKind};
use fsifeti::error::FsiError;
use fsifeti::linalg::{dot, norm2, relative_difference, ComplexMatrix, LuFactors, SparseMatrix};
use fsifeti::solver::{
    direct_monolithic_solve, factorize_subdomains, projected_bicgstab, solve_iterative, to_dense, FlexibilityOperator,
    Identity, LinearOperator, SolverOptions, DIRECT_SIZE_CAP,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize, shift: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| {
        let v = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if i == j {
            v + shift
        } else {
            v
        }
    })
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

/// Right-preconditioned Bi-CGSTAB exactly as in van der Vorst (1992), with the
/// initial residual as shadow vector.
fn textbook_bicgstab(a: &ComplexMatrix, m: &ComplexMatrix, b: &[Complex64], tol: f64, max_iter: usize) -> (Vec<Complex64>, Vec<f64>) {
    let n = b.len();
    let zero = c(0.0, 0.0);
    let mut x = vec![zero; n];
    let mut r = b.to_vec();
    let r_hat = r.clone();
    let r0 = norm2(&r);
    let (mut rho_prev, mut alpha, mut omega) = (c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0));
    let mut v = vec![zero; n];
    let mut p = vec![zero; n];
    let mut hist = vec![1.0];
    for _ in 0..max_iter {
        let rho = dot(&r_hat, &r);
        let beta = (rho / rho_prev) * (alpha / omega);
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        let p_hat = m.matvec(&p);
        v = a.matvec(&p_hat);
        alpha = rho / dot(&r_hat, &v);
        let s: Vec<Complex64> = (0..n).map(|i| r[i] - alpha * v[i]).collect();
        if norm2(&s) / r0 <= tol {
            for i in 0..n {
                x[i] += alpha * p_hat[i];
            }
            hist.push(norm2(&s) / r0);
            break;
        }
        let s_hat = m.matvec(&s);
        let t = a.matvec(&s_hat);
        omega = dot(&t, &s) / dot(&t, &t);
        for i in 0..n {
            x[i] += alpha * p_hat[i] + omega * s_hat[i];
            r[i] = s[i] - omega * t[i];
        }
        rho_prev = rho;
        hist.push(norm2(&r) / r0);
        if norm2(&r) / r0 <= tol {
            break;
        }
    }
    (x, hist)
}

#[test]
fn bicgstab_matches_textbook_recurrence() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 40;
    let a = random_matrix(&mut rng, n, 6.0);
    let m = ComplexMatrix::from_fn(n, n, |i, j| if i == j { a[(i, i)].inv() } else { c(0.0, 0.0) });
    let b = random_vector(&mut rng, n);
    let zero = vec![c(0.0, 0.0); n];
    for (pc, pc_dense) in [(&m as &dyn LinearOperator, m.clone()), (&Identity(n) as &dyn LinearOperator, ComplexMatrix::identity(n))] {
        let rep = projected_bicgstab(&a, pc, None, &b, &zero, 1e-12, 200).unwrap();
        let (x_ref, h_ref) = textbook_bicgstab(&a, &pc_dense, &b, 1e-12, 200);
        assert!(rep.converged);
        assert_eq!(rep.residual_history.len(), rep.iterations + 1);
        assert!(relative_difference(&rep.lambda, &x_ref) <= 1e-8);
        // Same recurrence: histories agree up to accumulated round-off.
        for (k, (h, r)) in rep.residual_history.iter().zip(&h_ref).enumerate() {
            if *r > 1e-6 {
                assert!((h - r).abs() <= 1e-6 * r, "iteration {k}: {h:e} vs {r:e}");
            }
        }
        let x_direct = LuFactors::factorize(a.clone()).unwrap().solve(&b);
        assert!(relative_difference(&rep.lambda, &x_direct) <= 1e-8);
    }
}

fn sub(name: &str, k: ComplexMatrix, f: Vec<Complex64>, coupling: SparseMatrix) -> Subdomain {
    let mut s = Subdomain::new(name, SubdomainKind::Structure, k, f).unwrap();
    s.coupling = coupling;
    s
}

/// Three random subdomains chained by two interfaces of `m` multipliers each.
fn random_system(seed: u64) -> CoupledSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (n, m) = (8, 3);
    let nm = 2 * m;
    let mut subs = Vec::new();
    for p in 0..3 {
        let mut trip = Vec::new();
        if p > 0 {
            for j in 0..m {
                trip.push((j, m * (p - 1) + j, -1.0));
            }
        }
        if p < 2 {
            for j in 0..m {
                trip.push((n - m + j, m * p + j, 1.0));
            }
        }
        subs.push(sub(
            &format!("s{p}"),
            random_matrix(&mut rng, n, 5.0),
            random_vector(&mut rng, n),
            SparseMatrix::from_triplets(n, nm, trip),
        ));
    }
    CoupledSystem {
        method: CouplingMethod::Mortar,
        subdomains: subs,
        n_multipliers: nm,
        frame: None,
        interface_offsets: vec![0, m],
    }
}

#[test]
fn flexibility_operator_matches_dense_assembly() {
    let sys = random_system(11);
    let flex = FlexibilityOperator::new(&sys, factorize_subdomains(&sys, 1.0).unwrap()).unwrap();
    let nm = sys.n_multipliers;
    let mut dense = ComplexMatrix::zeros(nm, nm);
    let mut rhs = vec![c(0.0, 0.0); nm];
    for s in &sys.subdomains {
        let kinv = LuFactors::factorize(s.stiffness.clone()).unwrap().inverse();
        let cm = s.coupling.to_dense().to_complex();
        let ct = cm.transpose();
        dense = dense.add(&ct.matmul(&kinv).matmul(&cm));
        for (r, v) in rhs.iter_mut().zip(ct.matvec(&kinv.matvec(&s.load))) {
            *r += v;
        }
    }
    let f = to_dense(&flex);
    assert!(f.max_abs_diff(&dense) <= 1e-12 * dense.norm_fro());
    assert!(relative_difference(&flex.rhs(), &rhs) <= 1e-12);
}

#[test]
fn iterative_and_direct_agree_on_random_chain() {
    let sys = random_system(5);
    let d = direct_monolithic_solve(&sys, DIRECT_SIZE_CAP).unwrap();
    let opts = SolverOptions {
        tol: 1e-12,
        ..SolverOptions::default()
    };
    let it = solve_iterative(&sys, 1.0, &opts).unwrap();
    assert!(it.converged);
    assert!(relative_difference(&it.lambda, &d.lambda) <= 1e-8);
    for (a, b) in it.u_per_subdomain.iter().zip(&d.u) {
        assert!(relative_difference(a, b) <= 1e-8);
    }
    assert!(it.gap_residual <= 1e-9);
}

fn one(v: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(1, 1, |_, _| c(v, 0.0))
}

#[test]
fn two_springs_with_mortar_multiplier() {
    // 2 u1 + l = 1, 3 u2 - l = 4, u1 = u2  =>  u = 1, l = -1.
    let sys = CoupledSystem {
        method: CouplingMethod::Mortar,
        subdomains: vec![
            sub("a", one(2.0), vec![c(1.0, 0.0)], SparseMatrix::from_triplets(1, 1, [(0, 0, 1.0)])),
            sub("b", one(3.0), vec![c(4.0, 0.0)], SparseMatrix::from_triplets(1, 1, [(0, 0, -1.0)])),
        ],
        n_multipliers: 1,
        frame: None,
        interface_offsets: vec![0],
    };
    let d = direct_monolithic_solve(&sys, DIRECT_SIZE_CAP).unwrap();
    assert!((d.u[0][0] - 1.0).norm() < 1e-14 && (d.u[1][0] - 1.0).norm() < 1e-14);
    assert!((d.lambda[0] + 1.0).norm() < 1e-14);
    let it = solve_iterative(&sys, 1.0, &SolverOptions::default()).unwrap();
    assert!((it.u_per_subdomain[0][0] - 1.0).norm() < 1e-12);
    assert!((it.lambda[0] + 1.0).norm() < 1e-12);
}

#[test]
fn two_springs_with_localized_multipliers() {
    // 2 u1 + l1 = 1, 3 u2 + l2 = 4, u1 = u2 = uI, l1 + l2 = 0  =>  u = 1, l = (-1, 1).
    let sys = CoupledSystem {
        method: CouplingMethod::Llm,
        subdomains: vec![
            sub("a", one(2.0), vec![c(1.0, 0.0)], SparseMatrix::from_triplets(1, 2, [(0, 0, 1.0)])),
            sub("b", one(3.0), vec![c(4.0, 0.0)], SparseMatrix::from_triplets(1, 2, [(0, 1, 1.0)])),
        ],
        n_multipliers: 2,
        frame: Some(SparseMatrix::from_triplets(2, 1, [(0, 0, 1.0), (1, 0, 1.0)])),
        interface_offsets: vec![0],
    };
    let d = direct_monolithic_solve(&sys, DIRECT_SIZE_CAP).unwrap();
    assert!((d.u_frame[0] - 1.0).norm() < 1e-14);
    assert!((d.lambda[0] + 1.0).norm() < 1e-14 && (d.lambda[1] - 1.0).norm() < 1e-14);
    let it = solve_iterative(&sys, 1.0, &SolverOptions::default()).unwrap();
    assert!(it.converged);
    assert!((it.u_frame.unwrap()[0] - 1.0).norm() < 1e-12);
    assert!(relative_difference(&it.lambda, &d.lambda) < 1e-12);
}

#[test]
fn singular_subdomain_is_a_resonance() {
    let sys = CoupledSystem {
        method: CouplingMethod::Mortar,
        subdomains: vec![
            sub("a", one(0.0), vec![c(1.0, 0.0)], SparseMatrix::from_triplets(1, 1, [(0, 0, 1.0)])),
            sub("b", one(3.0), vec![c(4.0, 0.0)], SparseMatrix::from_triplets(1, 1, [(0, 0, -1.0)])),
        ],
        n_multipliers: 1,
        frame: None,
        interface_offsets: vec![0],
    };
    assert!(matches!(factorize_subdomains(&sys, 2.0), Err(FsiError::Resonance { .. })));
    assert!(matches!(solve_iterative(&sys, 2.0, &SolverOptions::default()), Err(FsiError::Resonance { .. })));
}

#[test]
fn direct_solve_respects_size_cap() {
    let sys = random_system(3);
    assert!(matches!(direct_monolithic_solve(&sys, 10), Err(FsiError::TooLarge { .. })));
}

#[test]
fn preconditioning_and_scaling_on_the_cavity() {
    let model = build_cavity(&CavityParams::new(64, 64, 5.0)).unwrap();
    let scaling = model.scaling(0.3).unwrap();
    assert!(scaling.is_some());
    let with = SolverOptions {
        scaling,
        ..SolverOptions::default()
    };
    let without = SolverOptions {
        precondition: false,
        ..with
    };
    let unscaled = SolverOptions {
        scaling: None,
        ..SolverOptions::default()
    };
    let a = model.solve(SolverChoice::Bicgstab, &with).unwrap();
    let b = model.solve(SolverChoice::Bicgstab, &without).unwrap();
    let s = model.solve(SolverChoice::Bicgstab, &unscaled).unwrap();
    assert!(a.converged && b.converged && s.converged);
    assert!(a.iterations <= b.iterations, "preconditioned {} vs plain {}", a.iterations, b.iterations);
    let d = model.solve(SolverChoice::Direct, &with).unwrap();
    for sol in [&a, &b, &s] {
        let u: Vec<Complex64> = sol.u.concat();
        assert!(relative_difference(&u, &d.u.concat()) <= 1e-6);
    }
}
