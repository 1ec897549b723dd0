use liegrid::basis::canonical_basis;
use liegrid::momentum::{assemble_momentum, block_rep_from_specs, poincare_check, solve_intertwiners, Which};
use liegrid::numkernel::{matrix_exponential, Matrix};
use liegrid::spacetime::{spacetime_generators, Sign};
use liegrid::tensors::compute_tensors;
use liegrid::{Tensors, Tolerance, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tensors(n: usize) -> Tensors {
    compute_tensors(&canonical_basis(n).unwrap(), &Tolerance::default()).unwrap()
}

fn combination(theta: &[f64], a: &[Matrix<f64>], phi: &[f64], b: &[Matrix<f64>]) -> Matrix<f64> {
    let w: Vec<C64> = theta.iter().chain(phi).map(|&x| C64::new(x, 0.0)).collect();
    let mats: Vec<Matrix<f64>> = a.iter().chain(b).cloned().collect();
    Matrix::linear_combination(&w, &mats).unwrap()
}

// U P^mu U^-1 = sum_sigma Lambda_{mu sigma} P^sigma with U = exp(-i X) on the
// block space and Lambda = exp(i X) on spacetime.
#[test]
fn momentum_is_lorentz_covariant() {
    let tol = Tolerance::default();
    let t = tensors(2);
    let g = spacetime_generators(&t);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for eps in Sign::both() {
        let block = block_rep_from_specs(&t, ["F", "A", "sym2(F)", "antisym2(A)"]).unwrap();
        let sol = solve_intertwiners(&block, eps, &t, &tol).unwrap();
        let which = if sol.solspace_dim_plus() > 0 { Which::Plus } else { Which::Minus };
        let m = assemble_momentum(&sol, which, C64::new(1.0, 0.0), &[]).unwrap();
        let minus_i = C64::new(0.0, -1.0);
        let mut worst = 0.0_f64;
        for _ in 0..20 {
            let theta: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let phi: Vec<f64> = (0..3).map(|_| rng.gen_range(-0.5..0.5)).collect();
            let x_block = combination(&theta, &block.j_full, &phi, &block.k_full);
            let x_space = combination(&theta, &g.j, &phi, g.k(eps));
            let u = matrix_exponential(&x_block.scale(minus_i)).unwrap();
            let u_inv = matrix_exponential(&x_block.scale(-minus_i)).unwrap();
            let lambda = matrix_exponential(&x_space.scale(-minus_i)).unwrap();
            for mu in 0..4 {
                let lhs = &(&u * &m.p[mu]) * &u_inv;
                let row: Vec<C64> = (0..4).map(|s| lambda[(mu, s)]).collect();
                let rhs = Matrix::linear_combination(&row, &m.p).unwrap();
                worst = worst.max(lhs.max_abs_diff(&rhs));
            }
        }
        assert!(worst < 1e-9, "eps={eps}: {worst:e}");
    }
}

#[test]
fn su3_both_signs_satisfy_poincare() {
    let tol = Tolerance::default();
    let t = tensors(3);
    for eps in Sign::both() {
        let block = block_rep_from_specs(&t, ["F", "A", "sym2(F)", "antisym2(A)"]).unwrap();
        let sol = solve_intertwiners(&block, eps, &t, &tol).unwrap();
        assert!(sol.solspace_dim_plus() + sol.solspace_dim_minus() > 0);
        for which in [Which::Plus, Which::Minus] {
            let k = sol.block(which).dim();
            if k == 0 {
                continue;
            }
            let coeffs = vec![C64::new(0.5, 0.25); k];
            let m = assemble_momentum(&sol, which, C64::new(1.0, 0.0), &coeffs).unwrap();
            let v = poincare_check(&block, &m.p, &t, eps).unwrap();
            assert!(v.max() < 1e-10, "eps={eps} {which:?}: {v:?}");
        }
    }
}
