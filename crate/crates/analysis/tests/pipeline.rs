use junction_analysis::*;
use junction_core::exact_spectra::{vanishing_data_square, Normalization};
use junction_fem::{solve_mixed, BoundarySpec, Domain, MeshParams, MixedSolution, Variant, DEFAULT_TOL};

fn first_dnd_state(eps: f64, h: f64, sign: f64) -> MixedSolution {
    let reference = move |_: usize, p: [f64; 2]| sign * p[0].cos() * (2.0 * p[1]).sin();
    let bc = BoundarySpec::new(Variant::Dnd, eps);
    solve_mixed(Domain::HalfSquare, bc, 1, MeshParams::new(h, 8), DEFAULT_TOL, Some(&reference)).unwrap()
}

fn coarse() -> MeshParams {
    MeshParams::new(0.05, 4)
}

#[test]
fn blowup_matches_the_profile_and_sees_the_sign() {
    let data = vanishing_data_square(1, 2, Normalization::HalfDomain).unwrap();
    let up = blowup_compare(&first_dnd_state(0.05, 0.02, 1.0), 0, 0.05, &data, 2.0, 0.2).unwrap();
    assert!(up <= 0.15, "{up}");
    let down = blowup_compare(&first_dnd_state(0.05, 0.02, -1.0), 0, 0.05, &data, 2.0, 0.2).unwrap();
    assert!((down - 2.0).abs() < 0.1, "{down}");
    let flipped = junction_core::exact_spectra::VanishingData { beta: -data.beta, ..data };
    let anti = blowup_compare(&first_dnd_state(0.05, 0.02, 1.0), 0, 0.05, &flipped, 2.0, 0.2).unwrap();
    assert!((anti - down).abs() < 1e-12);
}

#[test]
fn blowup_error_shrinks_with_epsilon() {
    let data = vanishing_data_square(1, 2, Normalization::HalfDomain).unwrap();
    let errs: Vec<f64> = [(0.2, 0.04), (0.1, 0.02), (0.05, 0.01)]
        .iter()
        .map(|&(eps, h)| blowup_compare(&first_dnd_state(eps, h, 1.0), 0, eps, &data, 2.0, 0.2).unwrap())
        .collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
}

#[test]
fn blowup_rejects_cosine_data() {
    let data = vanishing_data_square(2, 1, Normalization::FullDomain).unwrap();
    let sol = first_dnd_state(0.2, 0.05, 1.0);
    assert!(matches!(blowup_compare(&sol, 0, 0.2, &data, 2.0, 0.2), Err(AnalysisError::Invalid(_))));
}

#[test]
fn sweeps_are_monotone_in_opposite_directions() {
    let eps = [0.15, 0.1, 0.075, 0.05];
    let dnd = sweep(Domain::HalfSquare, Variant::Dnd, &eps, 2, coarse(), DEFAULT_TOL).unwrap();
    assert!(dnd.failures.is_empty());
    assert_eq!(dnd.table.rows().len(), 8);
    let l1: Vec<f64> = dnd.table.column(1).iter().map(|c| c.1).collect();
    assert!(l1.windows(2).all(|w| w[1] > w[0]), "{l1:?}");
    assert!(monotonicity_violations(&dnd.table, Variant::Dnd, DEFAULT_TOL).is_empty());

    let ndn = sweep(Domain::HalfSquare, Variant::Ndn, &eps, 2, coarse(), DEFAULT_TOL).unwrap();
    let m1: Vec<f64> = ndn.table.column(1).iter().map(|c| c.1).collect();
    assert!(m1.windows(2).all(|w| w[1] < w[0]), "{m1:?}");
    assert!(monotonicity_violations(&ndn.table, Variant::Ndn, DEFAULT_TOL).is_empty());
}

#[test]
fn merged_square_spectrum_orders_the_branches() {
    let eps = [0.2, 0.1, 0.0];
    let dnd = sweep(Domain::HalfSquare, Variant::Dnd, &eps, 3, coarse(), DEFAULT_TOL).unwrap().table;
    let ndn = sweep(Domain::HalfSquare, Variant::Ndn, &eps, 3, coarse(), DEFAULT_TOL).unwrap().table;
    let ab = merge_ab(&dnd, &ndn).unwrap();
    assert_eq!(ab.at(0.1).len(), 6);
    let v = ab.column_values(0.1);
    assert!(v[0] > 2.0 && v[0] < 3.5, "{v:?}");
    let (l0, m0) = (dnd.column_values(0.0), ndn.column_values(0.0));
    assert!(v[0] > m0[0] && v[1] < l0[0] && v[2] > m0[1] && v[3] < l0[1], "{v:?}");
    assert!(v.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(merge_ab(&ab, &SweepTable::default()).unwrap(), ab);
}

#[test]
fn sweep_csv_round_trip() {
    let t = sweep(Domain::HalfDisk, Variant::Dnd, &[0.3, 0.2], 2, MeshParams::new(0.1, 2), DEFAULT_TOL).unwrap().table;
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    t.write_csv(std::fs::File::create(&path).unwrap()).unwrap();
    let back = SweepTable::read_csv(std::fs::File::open(&path).unwrap()).unwrap();
    assert_eq!(back, t);
    assert!(back.rows().iter().all(|r| r.residual <= DEFAULT_TOL * r.lambda.max(1.0) && r.n_dof > 0));
}

