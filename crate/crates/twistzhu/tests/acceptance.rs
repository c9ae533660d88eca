//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line (visible with `cargo test --test acceptance -- --nocapture`).
//! Every assertion is exact; the only tolerances are the stated runtime
//! budgets.

use std::time::Instant;

use twistzhu::bimod::{Bimodule, BimoduleContext};
use twistzhu::fock::{keys_up_to, Aut, FockVector, Sector, VoaContext};
use twistzhu::intertwine::{adjoint_intertwiner, injectivity_probe, o_i, zero_intertwiner};
use twistzhu::laurent::{
    alternating_collapse_constant, alternating_collapse_quoted_constant,
    check_alternating_collapse, check_binom_vanish, check_bivariate_cancellation,
    check_telescoping_unit,
};
use twistzhu::rat::{FracExp, ModIndex, Rat};
use twistzhu::runner::{
    backend_suite, bimodule_axiom_runner, epimorphism_runner, filtration_runner,
    membership_runner, omega_suite, phi_runner, pi_hom_runner, run_identities, run_verify,
    surjection_suite, two_path_suite, zhu_assoc_suite, RunConfig,
};
use twistzhu::zhu::{ZhuAlgebra, ZhuContext};

fn criterion(name: &str, body: impl FnOnce() + std::panic::UnwindSafe) {
    let result = std::panic::catch_unwind(body);
    match &result {
        Ok(()) => println!("acceptance {name}: pass"),
        Err(_) => println!("acceptance {name}: FAIL"),
    }
    if let Err(e) = result {
        std::panic::resume_unwind(e);
    }
}

fn cfg(aut: &str, n: &str, cutoff: u32) -> RunConfig {
    RunConfig {
        aut: aut.into(),
        n: n.into(),
        cutoff,
        suites: vec![],
        seed: 7,
        threads: 0,
        lmax: 10,
        verify: false,
    }
}

#[test]
fn criterion_1_identity_suite() {
    criterion("1 identity suite", || {
        let t0 = Instant::now();
        for l in 0..=10 {
            assert!(check_telescoping_unit(l), "telescoping unit failed at l={l}");
        }
        for l in 1..=12u32 {
            for k in 1..=l {
                assert!(
                    check_binom_vanish(l, k).is_zero(),
                    "binomial convolution nonzero at l={l}, k={k}"
                );
            }
        }
        for l in 0..=5 {
            assert!(
                check_bivariate_cancellation(l),
                "bivariate cancellation failed at l={l}"
            );
        }
        for l in 0..=8u32 {
            let (c, e) = check_alternating_collapse(l)
                .as_monomial()
                .expect("collapse must be a single monomial");
            assert_eq!(e, FracExp::from_int(-2 * i64::from(l) - 2));
            assert_eq!(c, alternating_collapse_constant(l), "collapse constant at l={l}");
            if l >= 1 {
                assert_ne!(c, alternating_collapse_quoted_constant(l));
            }
        }
        // the discrepancy must be recorded in the report
        let report = run_identities(8);
        assert!(report.all_pass());
        let ids = report.identities.unwrap();
        let note = ids.notes.join(" ");
        assert!(note.contains("C(2l,l)") && note.contains("C(2l+1,l)"));
        let elapsed = t0.elapsed();
        assert!(elapsed.as_secs_f64() < 5.0, "identity suite took {elapsed:?}");
    });
}

#[test]
fn criterion_2_backend() {
    criterion("2 backend", || {
        let t0 = Instant::now();
        // the theta configuration exercises both sectors: oscillator
        // commutators for |m|, |n| <= 7/2, the 1/16 ground-state weight, and
        // the Jacobi consequences at order 6 on the weight <= 2 window
        let out = backend_suite(&cfg("theta", "0", 8)).unwrap();
        assert!(out.pass, "backend failures: {:?}", out.failures);
        let elapsed = t0.elapsed();
        assert!(elapsed.as_secs_f64() < 60.0, "backend suite took {elapsed:?}");
    });
}

#[test]
fn criterion_3_two_path_oracle() {
    criterion("3 two-path oracle", || {
        let out = two_path_suite(&cfg("theta", "1/2", 16)).unwrap();
        assert!(out.pass, "two-path failures: {:?}", out.failures);
        // 125 seeded inputs per product family
        assert!(out.checks >= 5 * 100, "only {} checks ran", out.checks);
    });
}

#[test]
fn criterion_4_zhu_layer() {
    criterion("4 zhu layer", || {
        for (aut, n) in [
            ("id", "0"),
            ("id", "1"),
            ("theta", "0"),
            ("theta", "1/2"),
            ("theta", "1"),
        ] {
            let out = zhu_assoc_suite(&cfg(aut, n, 10)).unwrap();
            assert!(out.pass, "associativity failed at ({aut}, {n}): {:?}", out.failures);
        }
        let out = surjection_suite(&cfg("theta", "1/2", 8)).unwrap();
        assert!(out.pass, "surjection theta 1/2 -> 0 failed");
        let out = surjection_suite(&cfg("id", "1", 8)).unwrap();
        assert!(out.pass, "surjection id 1 -> 0 failed");

        // odd-generator collapse at level zero
        let voa = VoaContext::new(Aut::Theta, 6);
        let alg = ZhuAlgebra::build(
            ZhuContext::new(voa.clone(), ModIndex::new(0, 0, 2).unwrap()).unwrap(),
        )
        .unwrap();
        assert!(alg.reduce(&voa.generator()).unwrap().is_zero());

        // ground-level filter and the zero-mode module structure
        let out = omega_suite(&cfg("theta", "0", 8)).unwrap();
        assert!(out.pass, "omega failures: {:?}", out.failures);
        let out = omega_suite(&cfg("theta", "1/2", 8)).unwrap();
        assert!(out.pass, "omega failures: {:?}", out.failures);
        let out = omega_suite(&cfg("id", "1", 8)).unwrap();
        assert!(out.pass, "omega failures: {:?}", out.failures);
    });
}

#[test]
fn criterion_5_bimodule_layer() {
    criterion("5 bimodule layer", || {
        let t0 = Instant::now();
        for (aut, n) in [("id", "0"), ("theta", "1/2")] {
            let out = bimodule_axiom_runner(&cfg(aut, n, 10)).unwrap();
            assert!(out.pass, "axioms failed at ({aut}, {n}): {:?}", out.failures);
        }
        for (aut, n) in [("theta", "1/2"), ("id", "1")] {
            let out = membership_runner(&cfg(aut, n, 10)).unwrap();
            assert!(out.pass, "membership failed at ({aut}, {n}): {:?}", out.failures);
        }
        let out = epimorphism_runner(&cfg("theta", "1/2", 8)).unwrap();
        assert!(out.pass, "epimorphism theta failed: {:?}", out.failures);
        let out = epimorphism_runner(&cfg("id", "1", 8)).unwrap();
        assert!(out.pass, "epimorphism id failed: {:?}", out.failures);
        for (aut, n) in [("theta", "1/2"), ("id", "1")] {
            let out = phi_runner(&cfg(aut, n, 8)).unwrap();
            assert!(out.pass, "phi failed at ({aut}, {n}): {:?}", out.failures);
        }
        for (aut, n) in [("theta", "1/2"), ("id", "1")] {
            let (out, section) = filtration_runner(&cfg(aut, n, 8)).unwrap();
            assert!(out.pass, "filtration failed at ({aut}, {n}): {:?}", out.failures);
            let dims = section.dims.unwrap();
            assert_eq!(
                dims.a_gn,
                dims.a_g0 + dims.subquotients.iter().sum::<usize>(),
                "additivity failed at ({aut}, {n})"
            );
        }
        let elapsed = t0.elapsed();
        assert!(elapsed.as_secs_f64() < 600.0, "bimodule layer took {elapsed:?}");
    });
}

#[test]
fn criterion_6_intertwiner_layer() {
    criterion("6 intertwiner layer", || {
        for (aut, n) in [("id", "0"), ("theta", "1/2")] {
            let out = pi_hom_runner(&cfg(aut, n, 12)).unwrap();
            assert!(out.pass, "pi-hom failed at ({aut}, {n}): {:?}", out.failures);
        }
        // diagonal component of the conformal vector is the level weight
        let voa = VoaContext::new(Aut::Theta, 12);
        let iw = adjoint_intertwiner(&voa);
        for t2 in 0..=4i64 {
            let t = FracExp::from_doubled(t2);
            let m = o_i(&iw, &voa.omega(), t, t).unwrap();
            let keys = keys_up_to(Sector::Twisted, t2)
                .into_iter()
                .filter(|k| k.depth2() == t2)
                .count();
            assert_eq!(m.dims(), (keys, keys));
            for r in 0..keys {
                for c in 0..keys {
                    let expect = if r == c {
                        Rat::new(t2, 2) + Rat::new(1, 16)
                    } else {
                        Rat::zero()
                    };
                    assert_eq!(*m.entry(r, c), expect, "L(0) matrix at level {t}");
                }
            }
        }
        // probes
        let ctx = BimoduleContext::new(
            ZhuContext::new(voa.clone(), ModIndex::new(0, 1, 2).unwrap()).unwrap(),
        );
        let bim = Bimodule::build(ctx).unwrap();
        assert!(injectivity_probe(&iw, &bim.ctx, 4).unwrap());
        assert!(injectivity_probe(&zero_intertwiner(&voa), &bim.ctx, 4).unwrap());
        let _ = FockVector::vacuum(Sector::Twisted);
    });
}

#[test]
fn criterion_7_determinism() {
    criterion("7 determinism", || {
        let mut base = cfg("theta", "1/2", 8);
        base.suites = vec!["zhu-assoc".into(), "omega".into(), "phi".into()];
        base.seed = 12345;

        let mut one = base.clone();
        one.threads = 1;
        let r1 = run_verify(&one).unwrap();

        let mut eight = base.clone();
        eight.threads = 8;
        let r8 = run_verify(&eight).unwrap();

        assert!(r1.all_pass() && r8.all_pass());
        assert_eq!(
            r1.canonical_json(),
            r8.canonical_json(),
            "reports differ across worker counts"
        );
    });
}
