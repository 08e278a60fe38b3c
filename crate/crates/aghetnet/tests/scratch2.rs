//! Temporary diagnosis probe (removed before finalizing).

use aghetnet::config::{Intensities, SimConfig};
use aghetnet::deployment::Tier;
use aghetnet::kpi::{ue_spectral_efficiency, TrialSet};
use aghetnet::linkbudget::IcicState;

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
fn diagnose_population() {
    let config = desk_config();
    let set = TrialSet::build(&config, 3, 1).unwrap();
    let cache = &set.trials[0];

    for (label, state) in [
        ("tau=0/0", IcicState::default()),
        (
            "tau=6/9",
            IcicState {
                tau_pbs_db: 6.0,
                tau_uabs_db: 9.0,
                ..IcicState::default()
            },
        ),
    ] {
        let (assignments, loads) = cache.associate(&state).unwrap();
        let n = assignments.len() as f64;
        let share = |t: Tier| {
            assignments.iter().filter(|a| a.serving_tier == t).count() as f64 / n * 100.0
        };
        let mean_load = |v: &[u32]| {
            v.iter().map(|&x| x as f64).sum::<f64>() / v.len() as f64
        };
        eprintln!(
            "{label}: attach shares mbs={:.1}% pbs={:.1}% uabs={:.1}%",
            share(Tier::Mbs),
            share(Tier::Pbs),
            share(Tier::Uabs)
        );
        eprintln!(
            "  mean per-cell loads: mbs usf={:.2} csf={:.2}; pbs usf={:.2} csf={:.2}; uabs usf={:.2} csf={:.2}",
            mean_load(&loads.mbs_usf),
            mean_load(&loads.mbs_csf),
            mean_load(&loads.pbs_usf),
            mean_load(&loads.pbs_csf),
            mean_load(&loads.uabs_usf),
            mean_load(&loads.uabs_csf)
        );

        // Bottom 5% composition.
        let mut se: Vec<(f64, Tier, aghetnet::association::Subframe, f64)> = assignments
            .iter()
            .map(|a| {
                let v = ue_spectral_efficiency(
                    a,
                    &loads,
                    &state,
                    aghetnet::kpi::UabsDutyNormalization::Half,
                )
                .unwrap();
                let sir = match a.subframe {
                    aghetnet::association::Subframe::Usf => a.sir.usf(a.serving_tier),
                    aghetnet::association::Subframe::Csf => a.sir.csf(a.serving_tier),
                };
                (v, a.serving_tier, a.subframe, 10.0 * sir.log10())
            })
            .collect();
        se.sort_by(|a, b| a.0.total_cmp(&b.0));
        let k = (0.05 * n) as usize;
        let bottom = &se[..k];
        let bt = |t: Tier| bottom.iter().filter(|x| x.1 == t).count();
        eprintln!(
            "  bottom-5% ({} UEs): mbs={} pbs={} uabs={}; 5pSE={:.4e}",
            k,
            bt(Tier::Mbs),
            bt(Tier::Pbs),
            bt(Tier::Uabs),
            se[k.saturating_sub(1)].0
        );
        let med_sir: Vec<f64> = bottom.iter().map(|x| x.3).collect();
        eprintln!(
            "  bottom-5% serving-SIR dB: min={:.1} median={:.1} max={:.1}",
            med_sir.iter().cloned().fold(f64::INFINITY, f64::min),
            med_sir[med_sir.len() / 2],
            med_sir.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        );
    }
}
