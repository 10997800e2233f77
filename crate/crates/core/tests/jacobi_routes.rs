use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sklab_core::jacobi::{
    jacobi_cusp_basis, jacobi_eisenstein, maass_check, sk_lift, vm_coeff, vm_direct_eval,
};

#[test]
fn vm_two_routes_agree() {
    let phi = jacobi_cusp_basis(10, 400).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for m in 1..=6u64 {
        let lifted = vm_coeff(&phi, m).unwrap();
        for _ in 0..20 {
            let v = rng.gen_range(1.0..2.0);
            let tau = Complex64::new(rng.gen_range(-0.5..0.5), v);
            let z = Complex64::new(rng.gen_range(0.0..1.0), rng.gen_range(-0.25..0.25) * v);
            let a = vm_direct_eval(&phi, m, tau, z).unwrap().value;
            let b = lifted.eval(tau, z).value;
            assert!(
                (a - b).norm() <= 1e-6 * b.norm(),
                "m={m} tau={tau} z={z}: {a} vs {b}"
            );
        }
    }
}

#[test]
fn vm_documented_points() {
    let phi = jacobi_cusp_basis(12, 400).unwrap();
    let cases = [
        (
            2u64,
            Complex64::new(0.0, 2.0),
            Complex64::new(0.0, 0.0),
            1e-8,
        ),
        (3, Complex64::new(0.0, 1.5), Complex64::new(0.1, 0.2), 1e-6),
    ];
    for (m, tau, z, tol) in cases {
        let a = vm_direct_eval(&phi, m, tau, z).unwrap().value;
        let b = vm_coeff(&phi, m).unwrap().eval(tau, z).value;
        assert!((a - b).norm() <= tol * b.norm(), "m={m}: {a} vs {b}");
    }
}

#[test]
fn index_one_reduction_is_well_defined() {
    for phi in [
        jacobi_eisenstein(4, 200).unwrap(),
        jacobi_eisenstein(6, 200).unwrap(),
        jacobi_cusp_basis(10, 200).unwrap(),
        jacobi_cusp_basis(12, 200).unwrap(),
    ] {
        for n in 0..=50i64 {
            for r in -30i64..=30 {
                let d = 4 * n - r * r;
                if !(0..=200).contains(&d) {
                    continue;
                }
                assert_eq!(phi.c(n, r).unwrap(), phi.c_disc(d).unwrap());
            }
        }
    }
}

#[test]
fn lifts_satisfy_maass_at_default_precision() {
    for k in [10, 12] {
        let phi = jacobi_cusp_basis(k, 200).unwrap();
        let rep = maass_check(&sk_lift(&phi, 200).unwrap());
        assert!(rep.holds && rep.checked > 300, "{rep:?}");
    }
}
