//! KPIs and the Monte-Carlo harness.
//!
//! A trial is one layout draw plus one set of fading draws. Everything that
//! does not depend on the ICIC state (positions, received powers from the
//! three cells of interest, aggregate interference) is computed once per
//! trial and cached in a [`TrialCache`]; evaluating an [`IcicState`] against
//! a cache is pure arithmetic. A grid search over states therefore reuses
//! identical random draws (common random numbers), and results are
//! deterministic in (config, seed) regardless of thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::association::{associate_all, CellLoads, Subframe, UeAssignment, UeRef};
use crate::config::SimConfig;
use crate::deployment::{build_layout, NetworkLayout, Tier};
use crate::error::{Error, Result};
use crate::geometry::{Point3, SimArea};
use crate::linkbudget::{
    build_ue_profile, sir_from_profile, IcicState, SirSextet, TxPowers, UeLinkProfile,
};
use crate::channel::{ChannelParams, FadingSamplers};
use crate::rng::{substream, tag};

/// How the UABS duty-cycle weights are normalized. As written, the USF and
/// CSF weights `(b_m + b_p)` and `(2 - (b_m + b_p))` sum to two frames;
/// `Half` scales both by 1/2 so a UABS UE's time share sums to one frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UabsDutyNormalization {
    Half,
    AsWritten,
}

impl Default for UabsDutyNormalization {
    fn default() -> Self {
        UabsDutyNormalization::Half
    }
}

/// Spectral efficiency of one served UE/probe given its serving tier,
/// subframe, SIR sextet and the share count in its cell's subframe.
fn se_value(
    tier: Tier,
    subframe: Subframe,
    sir: &SirSextet,
    share_count: u32,
    state: &IcicState,
    norm: UabsDutyNormalization,
) -> f64 {
    let n = share_count as f64;
    let uabs_scale = match norm {
        UabsDutyNormalization::Half => 0.5,
        UabsDutyNormalization::AsWritten => 1.0,
    };
    let (duty, gamma) = match (tier, subframe) {
        (Tier::Mbs, Subframe::Usf) => (state.beta_mbs, sir.mbs_usf),
        (Tier::Mbs, Subframe::Csf) => (1.0 - state.beta_mbs, sir.mbs_csf),
        (Tier::Pbs, Subframe::Usf) => (state.beta_pbs, sir.pbs_usf),
        (Tier::Pbs, Subframe::Csf) => (1.0 - state.beta_pbs, sir.pbs_csf),
        (Tier::Uabs, Subframe::Usf) => {
            ((state.beta_mbs + state.beta_pbs) * uabs_scale, sir.uabs_usf)
        }
        (Tier::Uabs, Subframe::Csf) => (
            (2.0 - (state.beta_mbs + state.beta_pbs)) * uabs_scale,
            sir.uabs_csf,
        ),
        _ => (0.0, 0.0),
    };
    duty * (1.0 + gamma).log2() / n
}

/// Per-UE spectral efficiency from its assignment and the trial's loads.
pub fn ue_spectral_efficiency(
    assignment: &UeAssignment,
    loads: &CellLoads,
    state: &IcicState,
    norm: UabsDutyNormalization,
) -> Result<f64> {
    let n = loads.count(assignment.serving_tier, assignment.serving_cell, assignment.subframe);
    if n == 0 {
        return Err(Error::Internal(format!(
            "UE assigned to {} cell {} {} with zero load",
            assignment.serving_tier.name(),
            assignment.serving_cell,
            assignment.subframe.name()
        )));
    }
    Ok(se_value(
        assignment.serving_tier,
        assignment.subframe,
        &assignment.sir,
        n,
        state,
        norm,
    ))
}

/// Lower nearest-rank fifth percentile: sorted ascending, element at index
/// `ceil(0.05 n) - 1`.
pub fn fifth_percentile(se: &[f64]) -> Result<f64> {
    if se.is_empty() {
        return Err(Error::Parameter(
            "fifth percentile of an empty vector".into(),
        ));
    }
    let mut v = se.to_vec();
    v.sort_by(f64::total_cmp);
    let rank = (0.05 * v.len() as f64).ceil().max(1.0) as usize;
    Ok(v[rank - 1])
}

/// One trial's KPI outcomes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub fifth_percentile_se: f64,
    pub coverage_probability: f64,
    pub scheduled_ues: usize,
    pub per_ue_se: Vec<f64>,
}

/// Campaign result: per-trial records plus their across-trial means.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KpiReport {
    pub seed: u64,
    pub trials: u32,
    pub threshold_se: f64,
    pub state: IcicState,
    pub fifth_percentile_se: f64,
    pub coverage_probability: f64,
    pub per_trial: Vec<TrialRecord>,
}

/// State-independent snapshot of one trial.
#[derive(Debug, Clone)]
pub struct TrialCache {
    pub trial: u64,
    pub layout: NetworkLayout,
    pub ue_refs: Vec<UeRef>,
    pub ue_profiles: Vec<UeLinkProfile>,
    pub probe_profiles: Vec<UeLinkProfile>,
}

impl TrialCache {
    pub fn build(config: &SimConfig, seed: u64, trial: u64) -> Result<Self> {
        let area = config.sim_area()?;
        let specs = config.tier_specs();
        let channel = config.channel;
        let samplers = FadingSamplers::new(&channel)?;
        let powers = config.tx_powers();
        let mut layout_rng = substream(seed, &[tag::LAYOUT, trial]);
        let layout = build_layout(&specs, &area, &mut layout_rng)?;

        let mut ue_refs = Vec::with_capacity(layout.ue_count());
        for i in 0..layout.gue.len() {
            ue_refs.push(UeRef { tier: Tier::Gue, index: i });
        }
        for i in 0..layout.aue.len() {
            ue_refs.push(UeRef { tier: Tier::Aue, index: i });
        }
        let ue_profiles: Vec<UeLinkProfile> = ue_refs
            .par_iter()
            .enumerate()
            .map(|(global, ue)| {
                let pos = layout.nodes(ue.tier)[ue.index];
                let mut rng = substream(seed, &[tag::FADING_UE, trial, global as u64]);
                build_ue_profile(&pos, ue.tier, &layout, &powers, &channel, &samplers, &mut rng)
            })
            .collect::<Result<_>>()?;

        let probes = probe_positions(&area, config.probe_resolution_m, config.heights_m.gue);
        let probe_profiles: Vec<UeLinkProfile> = probes
            .par_iter()
            .enumerate()
            .map(|(i, pos)| {
                let mut rng = substream(seed, &[tag::FADING_PROBE, trial, i as u64]);
                build_ue_profile(pos, Tier::Gue, &layout, &powers, &channel, &samplers, &mut rng)
            })
            .collect::<Result<_>>()?;

        Ok(Self {
            trial,
            layout,
            ue_refs,
            ue_profiles,
            probe_profiles,
        })
    }

    /// Associates, computes per-UE SE, the trial 5pSE and area coverage for
    /// one ICIC state. Pure arithmetic over the cached profiles.
    pub fn evaluate(
        &self,
        state: &IcicState,
        threshold_se: f64,
        norm: UabsDutyNormalization,
    ) -> Result<TrialRecord> {
        let (assignments, loads) = associate_all(
            &self.ue_refs,
            &self.ue_profiles,
            state,
            self.layout.mbs.len(),
            self.layout.pbs.len(),
            self.layout.uabs.len(),
        )?;
        let mut per_ue_se = Vec::with_capacity(assignments.len());
        for a in &assignments {
            per_ue_se.push(ue_spectral_efficiency(a, &loads, state, norm)?);
        }
        let fifth = fifth_percentile(&per_ue_se)?;
        let coverage = coverage_from_profiles(&self.probe_profiles, state, threshold_se, norm);
        Ok(TrialRecord {
            trial: self.trial,
            fifth_percentile_se: fifth,
            coverage_probability: coverage,
            scheduled_ues: per_ue_se.len(),
            per_ue_se,
        })
    }

    /// Full association output for exports.
    pub fn associate(&self, state: &IcicState) -> Result<(Vec<UeAssignment>, CellLoads)> {
        associate_all(
            &self.ue_refs,
            &self.ue_profiles,
            state,
            self.layout.mbs.len(),
            self.layout.pbs.len(),
            self.layout.uabs.len(),
        )
    }

    /// FNV-1a hash over every cached draw, in deterministic order. Two
    /// caches built from the same (config, seed, trial) hash identically no
    /// matter which ICIC states they are later evaluated at.
    pub fn draw_hash(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |v: f64| {
            for b in v.to_bits().to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x1_0000_0000_01b3);
            }
        };
        for p in self.ue_profiles.iter().chain(self.probe_profiles.iter()) {
            eat(p.r_mbs_mw);
            eat(p.r_pbs_mw);
            eat(p.r_uabs_mw);
            eat(p.i_agg_mw);
        }
        h
    }
}

/// Probe grid at the ground-UE height: even pitch fitted to the area, cell
/// centers.
pub fn probe_positions(area: &SimArea, resolution_m: f64, gue_height_m: f64) -> Vec<Point3> {
    let nx = (area.width_m / resolution_m).round().max(1.0) as usize;
    let ny = (area.height_m / resolution_m).round().max(1.0) as usize;
    let (px, py) = (area.width_m / nx as f64, area.height_m / ny as f64);
    let mut out = Vec::with_capacity(nx * ny);
    for iy in 0..ny {
        for ix in 0..nx {
            out.push(Point3::new(
                (ix as f64 + 0.5) * px,
                (iy as f64 + 0.5) * py,
                gue_height_m,
            ));
        }
    }
    out
}

/// Fraction of probes whose achievable SE exceeds the threshold. Coverage
/// is an area property: each probe measures the rate achievable at its
/// location as the sole occupant of its subframe (share count 1), so the
/// real UE population never perturbs it.
pub fn coverage_from_profiles(
    probe_profiles: &[UeLinkProfile],
    state: &IcicState,
    threshold_se: f64,
    norm: UabsDutyNormalization,
) -> f64 {
    if probe_profiles.is_empty() {
        return 0.0;
    }
    let covered = probe_profiles
        .iter()
        .filter(|profile| probe_se(profile, state, norm) > threshold_se)
        .count();
    covered as f64 / probe_profiles.len() as f64
}

/// Achievable SE at a probe location: association and scheduling follow
/// the same rules as real UEs, with a sole-occupant share.
pub fn probe_se(profile: &UeLinkProfile, state: &IcicState, norm: UabsDutyNormalization) -> f64 {
    let sir = sir_from_profile(profile, state);
    let (tier, _) = crate::association::select_cell(&sir, state);
    let subframe = crate::association::schedule_subframe(tier, &sir, state);
    se_value(tier, subframe, &sir, 1, state, norm)
}

/// Standalone area-coverage evaluation for a given layout.
#[allow(clippy::too_many_arguments)]
pub fn coverage_probability(
    layout: &NetworkLayout,
    area: &SimArea,
    powers: &TxPowers,
    state: &IcicState,
    channel: &ChannelParams,
    threshold_se: f64,
    grid_resolution_m: f64,
    gue_height_m: f64,
    norm: UabsDutyNormalization,
    seed: u64,
) -> Result<f64> {
    if !(grid_resolution_m > 0.0) {
        return Err(Error::Parameter(format!(
            "probe grid resolution must be positive, got {grid_resolution_m}"
        )));
    }
    let samplers = FadingSamplers::new(channel)?;
    let probes = probe_positions(area, grid_resolution_m, gue_height_m);
    let probe_profiles: Vec<UeLinkProfile> = probes
        .par_iter()
        .enumerate()
        .map(|(i, pos)| {
            let mut rng = substream(seed, &[tag::FADING_PROBE, 0, i as u64]);
            build_ue_profile(pos, Tier::Gue, layout, powers, channel, &samplers, &mut rng)
        })
        .collect::<Result<_>>()?;
    Ok(coverage_from_profiles(
        &probe_profiles,
        state,
        threshold_se,
        norm,
    ))
}

/// A set of cached trials sharing one master seed.
#[derive(Debug)]
pub struct TrialSet {
    pub seed: u64,
    pub threshold_se: f64,
    pub norm: UabsDutyNormalization,
    pub trials: Vec<TrialCache>,
}

impl TrialSet {
    /// Builds `trials` caches in parallel; results are indexed by trial so
    /// the outcome is independent of scheduling order.
    pub fn build(config: &SimConfig, seed: u64, trials: u32) -> Result<Self> {
        if trials == 0 {
            return Err(Error::Parameter("trial count must be >= 1".into()));
        }
        let caches: Vec<TrialCache> = (0..trials as u64)
            .into_par_iter()
            .map(|t| TrialCache::build(config, seed, t))
            .collect::<Result<_>>()?;
        Ok(Self {
            seed,
            threshold_se: config.threshold_se,
            norm: config.uabs_duty_normalization,
            trials: caches,
        })
    }

    /// Evaluates one state across all trials; means are folded in trial
    /// order.
    pub fn evaluate(&self, state: &IcicState) -> Result<KpiReport> {
        state.validate()?;
        let records: Vec<TrialRecord> = self
            .trials
            .par_iter()
            .map(|t| t.evaluate(state, self.threshold_se, self.norm))
            .collect::<Result<_>>()?;
        let n = records.len() as f64;
        let fifth = records.iter().map(|r| r.fifth_percentile_se).sum::<f64>() / n;
        let cov = records.iter().map(|r| r.coverage_probability).sum::<f64>() / n;
        Ok(KpiReport {
            seed: self.seed,
            trials: records.len() as u32,
            threshold_se: self.threshold_se,
            state: *state,
            fifth_percentile_se: fifth,
            coverage_probability: cov,
            per_trial: records,
        })
    }

    /// KPI pair (5pSE, coverage) without materializing per-UE vectors.
    pub fn evaluate_kpis(&self, state: &IcicState) -> Result<(f64, f64)> {
        let report = self.evaluate(state)?;
        Ok((report.fifth_percentile_se, report.coverage_probability))
    }

    pub fn draw_hash(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for t in &self.trials {
            let th = t.draw_hash();
            for b in th.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x1_0000_0000_01b3);
            }
        }
        h
    }
}

/// Runs a single trial: one layout and fading draw, association, SE vector,
/// per-trial 5pSE and coverage. Deterministic in (config, state, seed).
pub fn run_trial(config: &SimConfig, state: &IcicState, seed: u64) -> Result<KpiReport> {
    let set = TrialSet::build(config, seed, 1)?;
    set.evaluate(state)
}

/// Runs `trials` independent trials under the config's seed and returns the
/// aggregated report.
pub fn run_campaign(config: &SimConfig, state: &IcicState, trials: u32) -> Result<KpiReport> {
    let seed = config.require_seed()?;
    let set = TrialSet::build(config, seed, trials)?;
    set.evaluate(state)
}
