use schurdirac::dirac::{
    build_channel, c2_consistency, channel_spectrum, channel_states, hardy_sweep, sommerfeld_energy,
    GridSpec, SpectrumSettings, SweepSettings,
};
use schurdirac::{DiracChannelSpec, GridScheme, RadialGrid, Tolerances};

fn spec(kappa: i32, nu: f64, gamma: f64) -> DiracChannelSpec<f64> {
    DiracChannelSpec::new(kappa, nu, gamma).unwrap()
}

#[test]
fn channels_are_valid_by_construction() {
    for scheme in [GridScheme::Uniform, GridScheme::Logarithmic] {
        for (kappa, nu, gamma) in [(-1, 0.5, 0.5), (1, 0.9, 0.2), (-2, 1.5, 1.0), (3, 0.1, 2.0)] {
            let grid = RadialGrid::build(scheme, 150, 1e-3, 40.0).unwrap();
            let op = build_channel(&spec(kappa, nu, gamma), &grid).unwrap();
            op.validate().unwrap();
            assert_eq!(op.q(), &op.t().transpose());
            assert!(op.to_dense().is_symmetric());
        }
    }
}

#[test]
fn find_c2_matches_inertia_oracle_on_channels() {
    for (kappa, nu) in [(-1, 0.5), (-1, 0.9), (1, 0.7), (-2, 0.3)] {
        let grid = GridSpec::logarithmic(200).build().unwrap();
        let op = build_channel(&spec(kappa, nu, 0.5), &grid).unwrap();
        let c2 = op.find_c2(1e-10).unwrap();
        let oracle = op.inertia_c2_oracle(1000).unwrap();
        assert!((c2 - oracle).abs() <= 1e-8, "kappa={kappa} nu={nu}: {c2} vs {oracle}");
    }
}

#[test]
fn c2_consistency_reports_oracle_for_small_grids() {
    let grid = GridSpec::logarithmic(300).build().unwrap();
    let r = c2_consistency(&spec(-1, 0.5, 0.5), &grid, &Tolerances::default()).unwrap();
    assert!((r.c2_analytic - (1.0 + 0.75f64.sqrt() - 0.5)).abs() < 1e-15);
    assert!(r.diff < 1e-2, "{r:?}");
    assert!((r.inertia_oracle.unwrap() - r.c2_numeric).abs() <= 1e-7);

    let big = GridSpec::logarithmic(600).build().unwrap();
    assert!(c2_consistency(&spec(-1, 0.5, 0.5), &big, &Tolerances::default())
        .unwrap()
        .inertia_oracle
        .is_none());
    assert!(c2_consistency(&spec(-1, 1.05, 0.5), &grid, &Tolerances::default()).is_err());
}

#[test]
fn weak_coupling_approaches_free_gap() {
    let grid = GridSpec::logarithmic(1000).build().unwrap();
    let r = c2_consistency(&spec(-1, 1e-3, 0.5), &grid, &Tolerances::default()).unwrap();
    assert!((r.c2_analytic - 1.5).abs() < 1e-6);
    assert!((r.c2_numeric - 1.5).abs() < 1e-2, "{r:?}");
}

#[test]
fn ground_energy_decreases_with_coupling() {
    let grid = GridSpec::logarithmic(800).build().unwrap();
    let nus: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    let energies: Vec<f64> = nus
        .iter()
        .map(|&nu| channel_spectrum(&spec(-1, nu, 0.5), &grid, 1, 1e-8).unwrap()[0])
        .collect();
    for (w, nu) in energies.windows(2).zip(&nus) {
        assert!(w[1] < w[0], "E1 not decreasing after nu = {nu}: {energies:?}");
    }
    for (e, &nu) in energies.iter().zip(&nus) {
        let exact = sommerfeld_energy(1, -1, nu).unwrap();
        assert!((e - exact).abs() < 2e-2, "nu = {nu}: {e} vs {exact}");
    }
}

#[test]
fn spectra_shift_covariantly_with_gamma() {
    let grid = GridSpec::logarithmic(150).build().unwrap();
    let a = build_channel(&spec(-1, 0.6, 0.5), &grid).unwrap();
    let b = build_channel(&spec(-1, 0.6, 1.3), &grid).unwrap();
    let ea = a.to_dense().symmetric_eigenvalues();
    let eb = b.to_dense().symmetric_eigenvalues();
    let scale = ea.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    for (x, y) in ea.iter().zip(&eb) {
        assert!(((y + 1.3) - (x + 0.5)).abs() <= 1e-12 * scale, "{x} {y}");
    }
}

#[test]
fn bound_states_are_smooth_and_converged() {
    let grid = GridSpec::logarithmic(1000).build().unwrap();
    let s = spec(-1, 0.5, 0.5);
    let states = channel_states(&s, &grid, 2, &SpectrumSettings::default()).unwrap();
    assert_eq!(states.len(), 2);
    for b in &states {
        assert!(b.high_frequency_fraction <= 0.5);
        assert!((b.energy - (b.eigenvalue + 0.5 - 1.0)).abs() < 1e-15);
    }
    assert!((states[0].energy - 0.75f64.sqrt()).abs() < 2e-3);
    assert!((states[1].energy - sommerfeld_energy(2, -1, 0.5).unwrap()).abs() < 2e-3);
}

#[test]
fn sweep_margins_non_increasing_in_nu() {
    let grids = [GridSpec::logarithmic(300), GridSpec::logarithmic(600).with_r_min(1e-6)];
    let nus: Vec<f64> = (1..=12).map(|i| i as f64 / 10.0).collect();
    let settings = SweepSettings {
        with_spectrum: false,
        ..SweepSettings::default()
    };
    let rep = hardy_sweep(-1, &nus, 0.5, &grids, &settings).unwrap();
    for g in &grids {
        let m: Vec<f64> = nus.iter().map(|&nu| rep.row(nu, g.n).unwrap().margin).collect();
        for w in m.windows(2) {
            assert!(w[1] <= w[0], "{m:?}");
        }
    }
    assert!(rep.row(0.5, 300).unwrap().margin >= 0.0);
}

#[test]
fn sweep_is_deterministic() {
    let grids = [GridSpec::logarithmic(200), GridSpec::logarithmic(400)];
    let nus = [0.5, 0.95, 1.1];
    let a = hardy_sweep(-1, &nus, 0.5, &grids, &SweepSettings::default()).unwrap();
    let b = hardy_sweep(-1, &nus, 0.5, &grids, &SweepSettings::default()).unwrap();
    assert_eq!(format!("{a:?}"), format!("{b:?}"));
}

#[test]
fn lowest_states_match_sommerfeld_for_each_kappa() {
    let grid = GridSpec::logarithmic(1500).build().unwrap();
    for kappa in [-2, -1, 1, 2] {
        let s = spec(kappa, 0.6, 0.5);
        let n0 = schurdirac::dirac::lowest_principal(kappa);
        let e = channel_spectrum(&s, &grid, 2, 1e-8).unwrap();
        for (i, got) in e.iter().enumerate() {
            let exact = sommerfeld_energy(n0 + i as u32, kappa, 0.6).unwrap();
            assert!((got - exact).abs() < 2e-3, "kappa = {kappa}, state {i}: {got} vs {exact}");
        }
    }
}
