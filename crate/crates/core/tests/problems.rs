use sharpstep::analysis::{estimate_weak_convexity, Sampler};
use sharpstep::numerics::{dot, Matrix, RngStream};
use sharpstep::problems::{
    instance, make_composite, procrustes_distance, AnalyticInstance, ConvexOracle,
    CovarianceEstimation, CovarianceSpec, Instance, InstanceSpec, PhaseRetrieval,
    PhaseRetrievalSpec, SmoothMap,
};
use sharpstep::solver::Problem;

#[test]
fn weak_convexity_certificate_on_random_instances() {
    let pr = PhaseRetrieval::generate(&PhaseRetrievalSpec::exact(15, 90, 21)).unwrap();
    let cov = CovarianceEstimation::generate(&CovarianceSpec::exact(8, 2, 60, 22)).unwrap();
    let problems: [(&dyn Problem, f64); 2] =
        [(&pr, pr.distance_scale()), (&cov, cov.distance_scale())];
    for (p, scale) in problems {
        let declared = p.declared_rho().unwrap();
        let pairs = Sampler::new(scale, 10_000, 5).pairs(p).unwrap();
        assert_eq!(pairs.len(), 10_000);
        let rho_hat = estimate_weak_convexity(p, &pairs);
        assert!(rho_hat > 0.0, "nonconvex instances show curvature");
        assert!(rho_hat <= declared * (1.0 + 1e-9), "{rho_hat} > {declared}");
    }
}

#[test]
fn corruption_fraction_at_scale() {
    let pr = PhaseRetrieval::generate(&PhaseRetrievalSpec::corrupted(2, 100_000, 8)).unwrap();
    let frac = pr.corrupted_count() as f64 / 100_000.0;
    assert!((frac - 0.1).abs() <= 0.005, "{frac}");
    // corrupted observations are |zeta| draws, nonnegative like the clean ones
    assert!(pr.observations().iter().all(|b| *b >= 0.0));
}

#[test]
fn instance_files_round_trip_through_disk() {
    let dir = tempfile::tempdir().unwrap();
    let specs = [
        InstanceSpec::PhaseRetrieval(PhaseRetrievalSpec::exact(100, 800, 1)),
        InstanceSpec::Covariance(CovarianceSpec::corrupted(12, 3, 80, 3)),
        InstanceSpec::Analytic(AnalyticInstance::Quad1d),
    ];
    let mut rng = RngStream::new(99, 0);
    for (i, spec) in specs.iter().enumerate() {
        let inst = spec.build().unwrap();
        let path = dir.path().join(format!("inst{i}.txt"));
        instance::save(&path, spec, &inst).unwrap();
        let (spec2, inst2) = instance::load(&path).unwrap();
        assert_eq!(&spec2, spec);
        for _ in 0..5 {
            let x = rng.sample_gaussian(inst.dim());
            assert_eq!(inst.value(&x).to_bits(), inst2.value(&x).to_bits());
            let (g1, g2) = (inst.subgradient(&x), inst2.subgradient(&x));
            assert!(g1.iter().zip(&g2).all(|(a, b)| a.to_bits() == b.to_bits()));
        }
    }
}

#[test]
fn odd_pair_count_is_rejected() {
    assert!(CovarianceEstimation::generate(&CovarianceSpec::exact(50, 3, 401, 1)).is_err());
}

#[test]
fn composite_matches_covariance_objective() {
    let cov = CovarianceEstimation::generate(&CovarianceSpec::corrupted(6, 2, 40, 13)).unwrap();
    let (d, r) = (cov.d(), cov.r());
    let a = cov.measurements().clone();
    let b = cov.observations().to_vec();
    let pairs = cov.m() / 2;
    let a_j = a.clone();
    let inner = SmoothMap::new(
        move |x| {
            let xm = Matrix::from_vec(d, r, x.to_vec()).unwrap();
            (0..pairs)
                .map(|j| {
                    let p = xm.t_matvec(a.row(2 * j + 1));
                    let n = xm.t_matvec(a.row(2 * j));
                    dot(&p, &p) - dot(&n, &n) - (b[2 * j + 1] - b[2 * j])
                })
                .collect()
        },
        move |x, v| {
            let xm = Matrix::from_vec(d, r, x.to_vec()).unwrap();
            let mut out = vec![0.0; d * r];
            for (j, vj) in v.iter().enumerate() {
                for (row, sgn) in [(2 * j + 1, 1.0), (2 * j, -1.0)] {
                    let ai = a_j.row(row);
                    let xa = xm.t_matvec(ai);
                    for p in 0..d {
                        for q in 0..r {
                            out[p * r + q] += 2.0 * sgn * vj * ai[p] * xa[q];
                        }
                    }
                }
            }
            out
        },
    );
    let outer = ConvexOracle::new(
        move |u| u.iter().map(|v| v.abs()).sum::<f64>() / pairs as f64,
        move |u| {
            u.iter()
                .map(|v| {
                    let s = if *v > 0.0 {
                        1.0
                    } else if *v < 0.0 {
                        -1.0
                    } else {
                        0.0
                    };
                    s / pairs as f64
                })
                .collect()
        },
    );
    let comp = make_composite(d * r, outer, inner).unwrap();
    let mut rng = RngStream::new(4, 4);
    for _ in 0..20 {
        let x = rng.sample_gaussian(d * r);
        let (v1, v2) = (comp.value(&x), cov.value(&x));
        assert!((v1 - v2).abs() <= 1e-12 * v2.abs().max(1.0), "{v1} vs {v2}");
        let (g1, g2) = (comp.subgradient(&x), cov.subgradient(&x));
        for (p, q) in g1.iter().zip(&g2) {
            assert!((p - q).abs() <= 1e-10 * q.abs().max(1.0));
        }
    }
}

#[test]
fn procrustes_is_invariant_and_symmetric() {
    let mut rng = RngStream::new(17, 3);
    for _ in 0..10 {
        let x = Matrix::from_vec(7, 3, rng.sample_gaussian(21)).unwrap();
        let y = Matrix::from_vec(7, 3, rng.sample_gaussian(21)).unwrap();
        let q = sharpstep::numerics::random_orthogonal(&mut rng, 3);
        let d = procrustes_distance(&x, &y, false).unwrap();
        let dq = procrustes_distance(&x.matmul(&q).unwrap(), &y, false).unwrap();
        let dyx = procrustes_distance(&y, &x, false).unwrap();
        assert!((d - dq).abs() < 1e-10);
        assert!((d - dyx).abs() < 1e-10);
        // never larger than the unaligned distance
        let plain: f64 = x
            .as_slice()
            .iter()
            .zip(y.as_slice())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        assert!(d <= plain + 1e-12);
    }
}

#[test]
fn instance_enum_forwards_the_oracles() {
    let spec = InstanceSpec::PhaseRetrieval(PhaseRetrievalSpec::corrupted(10, 50, 6));
    let inst = spec.build().unwrap();
    assert!(matches!(inst, Instance::PhaseRetrieval(_)));
    assert_eq!(inst.min_value(), None);
    let gt = inst.ground_truth().unwrap();
    assert_eq!(inst.distance(&gt), Some(0.0));
    assert!(inst
        .summary()
        .starts_with("phase-retrieval d=10 m=50 corrupted="));
}
