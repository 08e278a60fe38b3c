//! Temporary empirical probe (removed before finalizing).

use aghetnet::config::{Intensities, SimConfig};
use aghetnet::kpi::TrialSet;
use aghetnet::linkbudget::IcicState;
use aghetnet::optimizer::{optimize_cached, IcicMode, Objective, SearchGrid};

fn desk_config() -> SimConfig {
    let mut c = SimConfig::default();
    c.area.width_m = 5_000.0;
    c.area.height_m = 5_000.0;
    c.intensities_per_km2 = Intensities {
        mbs: 4.0,
        pbs: 12.0,
        gue: 100.0,
        aue: 1.8,
    };
    c.uabs_count = 15;
    c.probe_resolution_m = 200.0;
    c
}

#[test]
#[ignore]
fn probe_timing_and_kpis() {
    let config = desk_config();
    let t0 = std::time::Instant::now();
    let set = TrialSet::build(&config, 1, 10).unwrap();
    eprintln!("build 10 trials: {:?}", t0.elapsed());

    let t1 = std::time::Instant::now();
    let none = set.evaluate(&IcicState::default()).unwrap();
    eprintln!(
        "evaluate 1 state x 10 trials: {:?}; no-ICIC default 5pSE={:.6e} cov={:.4}",
        t1.elapsed(),
        none.fifth_percentile_se,
        none.coverage_probability
    );
    let n_ues = none.per_trial[0].scheduled_ues;
    eprintln!("ues per trial ~ {n_ues}");

    // A few states by hand to see the response surface.
    for (label, state) in [
        (
            "none b=.5 rM=40 rP=-10 rU=0 tau=0/0",
            IcicState {
                rho_mbs_db: 40.0,
                rho_pbs_db: -10.0,
                ..IcicState::default()
            },
        ),
        (
            "none tau=6/6",
            IcicState {
                tau_pbs_db: 6.0,
                tau_uabs_db: 6.0,
                ..IcicState::default()
            },
        ),
        (
            "eicic rM=40 rP=-10 rU=5 tau=0/6",
            IcicState {
                alpha_mbs: 0.0,
                alpha_pbs: 0.0,
                rho_mbs_db: 40.0,
                rho_pbs_db: -10.0,
                rho_uabs_db: 5.0,
                tau_uabs_db: 6.0,
                ..IcicState::default()
            },
        ),
        (
            "eicic rM=40 rP=-10 rU=5 tau=0/0",
            IcicState {
                alpha_mbs: 0.0,
                alpha_pbs: 0.0,
                rho_mbs_db: 40.0,
                rho_pbs_db: -10.0,
                rho_uabs_db: 5.0,
                ..IcicState::default()
            },
        ),
        (
            "feicic a=.5 rM=20 rP=-10 rU=5 tau=0/6",
            IcicState {
                alpha_mbs: 0.5,
                alpha_pbs: 0.5,
                rho_mbs_db: 20.0,
                rho_pbs_db: -10.0,
                rho_uabs_db: 5.0,
                tau_uabs_db: 6.0,
                ..IcicState::default()
            },
        ),
        (
            "feicic a=.25 rM=25 rP=-10 rU=5 tau=3/6 b=.5",
            IcicState {
                alpha_mbs: 0.25,
                alpha_pbs: 0.25,
                rho_mbs_db: 25.0,
                rho_pbs_db: -10.0,
                rho_uabs_db: 5.0,
                tau_pbs_db: 3.0,
                tau_uabs_db: 6.0,
                ..IcicState::default()
            },
        ),
        (
            "feicic a=.75 rM=25 b=.7 rP=-10 rU=5 tau=0/6",
            IcicState {
                alpha_mbs: 0.75,
                alpha_pbs: 0.75,
                beta_mbs: 0.7,
                beta_pbs: 0.7,
                rho_mbs_db: 25.0,
                rho_pbs_db: -10.0,
                rho_uabs_db: 5.0,
                tau_uabs_db: 6.0,
                ..IcicState::default()
            },
        ),
    ] {
        let r = set.evaluate(&state).unwrap();
        eprintln!(
            "{label}: 5pSE={:.6e} cov={:.4}",
            r.fifth_percentile_se, r.coverage_probability
        );
    }
}

#[test]
#[ignore]
fn probe_mode_ordering_small_grid() {
    let config = desk_config();
    let t0 = std::time::Instant::now();
    let set = TrialSet::build(&config, 3, 20).unwrap();
    eprintln!("build 20 trials: {:?}", t0.elapsed());

    let base = SearchGrid {
        alpha_values: vec![1.0],
        beta_values: vec![0.3, 0.5, 0.7],
        rho_mbs_values: vec![20.0, 30.0, 40.0],
        rho_pbs_values: vec![-10.0, 0.0],
        rho_uabs_values: vec![0.0, 5.0],
        tau_pbs_values: vec![0.0, 3.0, 6.0],
        tau_uabs_values: vec![0.0, 3.0, 6.0, 9.0],
        objective: Objective::FivePse,
    };
    for mode in [IcicMode::None, IcicMode::Eicic, IcicMode::Feicic] {
        let grid = base.clone().with_mode(mode).unwrap_or_else(|_| {
            let mut g = base.clone();
            g.alpha_values = match mode {
                IcicMode::None => vec![1.0],
                IcicMode::Eicic => vec![0.0],
                IcicMode::Feicic => vec![0.25, 0.5, 0.75],
            };
            g
        });
        let t1 = std::time::Instant::now();
        let r = optimize_cached(&set, &grid).unwrap();
        eprintln!(
            "{}: states={} best 5pSE={:.6e} (cov at best {:.4}) best state {:?} [{:?}]",
            mode.name(),
            r.evaluated,
            r.best_fifth_percentile_se,
            r.best_coverage_probability,
            r.best_state,
            t1.elapsed()
        );
        let mut g2 = grid.clone();
        g2.objective = Objective::Coverage;
        let r2 = optimize_cached(&set, &g2).unwrap();
        eprintln!(
            "{} coverage-opt: best cov={:.4} state {:?}",
            mode.name(),
            r2.best_coverage_probability,
            r2.best_state
        );
    }
}
