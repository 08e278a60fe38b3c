//! Cell selection with range-expansion bias and the USF/CSF scheduling
//! split.
//!
//! Selection: a UE camps on the tier whose USF SIR (dB), plus the CRE bias
//! for small cells, is largest; exact ties resolve MBS > PBS > UABS.
//!
//! Scheduling: the thresholds partition each tier's UEs between full-power
//! USF and reduced-power CSF, with the roles the threshold ranges imply.
//! The MBS moves its *cell-center* UEs (SIR at or above `rho_mbs`) into the
//! reduced-power subframes, which frees USF capacity for its edge UEs while
//! the power cut protects small-cell victims. PBS and UABS shelter their
//! *cell-edge* UEs (SIR below `rho_pbs` / `rho_uabs`) in the coordinated
//! subframes, where macro interference is reduced. A UE designated to a
//! subframe its own cell transmits nothing in (a blanked CSF under almost
//! blank subframes, alpha = 0) is scheduled in USF instead; blank subframes
//! carry no grants.

use serde::{Deserialize, Serialize};

use crate::deployment::Tier;
use crate::error::{Error, Result};
use crate::linkbudget::{sir_from_profile, IcicState, SirSextet, UeLinkProfile};

/// Subframe classes: uncoordinated (full power) and coordinated (reduced).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Subframe {
    Usf,
    Csf,
}

impl Subframe {
    pub fn name(&self) -> &'static str {
        match self {
            Subframe::Usf => "usf",
            Subframe::Csf => "csf",
        }
    }
}

/// Identifies a UE by tier and index within its tier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UeRef {
    pub tier: Tier,
    pub index: usize,
}

/// Final association of one UE.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UeAssignment {
    pub ue: UeRef,
    pub serving_tier: Tier,
    /// Node index of the serving cell within its tier.
    pub serving_cell: usize,
    pub subframe: Subframe,
    pub sir: SirSextet,
    /// Selection metric of the winning tier after CRE bias, dB.
    pub biased_metric_db: f64,
}

/// Per-cell scheduled-UE counts, per tier and subframe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellLoads {
    pub mbs_usf: Vec<u32>,
    pub mbs_csf: Vec<u32>,
    pub pbs_usf: Vec<u32>,
    pub pbs_csf: Vec<u32>,
    pub uabs_usf: Vec<u32>,
    pub uabs_csf: Vec<u32>,
}

impl CellLoads {
    pub fn new(n_mbs: usize, n_pbs: usize, n_uabs: usize) -> Self {
        Self {
            mbs_usf: vec![0; n_mbs],
            mbs_csf: vec![0; n_mbs],
            pbs_usf: vec![0; n_pbs],
            pbs_csf: vec![0; n_pbs],
            uabs_usf: vec![0; n_uabs],
            uabs_csf: vec![0; n_uabs],
        }
    }

    pub fn count(&self, tier: Tier, cell: usize, subframe: Subframe) -> u32 {
        match (tier, subframe) {
            (Tier::Mbs, Subframe::Usf) => self.mbs_usf[cell],
            (Tier::Mbs, Subframe::Csf) => self.mbs_csf[cell],
            (Tier::Pbs, Subframe::Usf) => self.pbs_usf[cell],
            (Tier::Pbs, Subframe::Csf) => self.pbs_csf[cell],
            (Tier::Uabs, Subframe::Usf) => self.uabs_usf[cell],
            (Tier::Uabs, Subframe::Csf) => self.uabs_csf[cell],
            _ => 0,
        }
    }

    fn add(&mut self, tier: Tier, cell: usize, subframe: Subframe) {
        match (tier, subframe) {
            (Tier::Mbs, Subframe::Usf) => self.mbs_usf[cell] += 1,
            (Tier::Mbs, Subframe::Csf) => self.mbs_csf[cell] += 1,
            (Tier::Pbs, Subframe::Usf) => self.pbs_usf[cell] += 1,
            (Tier::Pbs, Subframe::Csf) => self.pbs_csf[cell] += 1,
            (Tier::Uabs, Subframe::Usf) => self.uabs_usf[cell] += 1,
            (Tier::Uabs, Subframe::Csf) => self.uabs_csf[cell] += 1,
            _ => {}
        }
    }

    pub fn total(&self) -> u64 {
        [
            &self.mbs_usf,
            &self.mbs_csf,
            &self.pbs_usf,
            &self.pbs_csf,
            &self.uabs_usf,
            &self.uabs_csf,
        ]
        .iter()
        .flat_map(|v| v.iter())
        .map(|&c| c as u64)
        .sum()
    }

    pub fn usf_total(&self) -> u64 {
        [&self.mbs_usf, &self.pbs_usf, &self.uabs_usf]
            .iter()
            .flat_map(|v| v.iter())
            .map(|&c| c as u64)
            .sum()
    }

    pub fn csf_total(&self) -> u64 {
        self.total() - self.usf_total()
    }
}

fn to_db(linear: f64) -> f64 {
    if linear > 0.0 {
        10.0 * linear.log10()
    } else {
        f64::NEG_INFINITY
    }
}

/// Picks the serving tier by the biased USF SIR metric. Returns the tier
/// and the winning biased metric in dB; exact ties keep MBS over PBS over
/// UABS.
pub fn select_cell(sir: &SirSextet, state: &IcicState) -> (Tier, f64) {
    let mbs = to_db(sir.mbs_usf);
    let pbs = to_db(sir.pbs_usf) + state.tau_pbs_db;
    let uabs = to_db(sir.uabs_usf) + state.tau_uabs_db;
    let mut best = (Tier::Mbs, mbs);
    if pbs > best.1 {
        best = (Tier::Pbs, pbs);
    }
    if uabs > best.1 {
        best = (Tier::Uabs, uabs);
    }
    best
}

/// USF/CSF decision for an already-selected UE (see module docs for the
/// per-tier threshold roles and the blank-subframe fallback).
pub fn schedule_subframe(serving_tier: Tier, sir: &SirSextet, state: &IcicState) -> Subframe {
    match serving_tier {
        Tier::Mbs => {
            if to_db(sir.mbs_usf) >= state.rho_mbs_db && state.alpha_mbs > 0.0 {
                Subframe::Csf
            } else {
                Subframe::Usf
            }
        }
        Tier::Pbs => {
            if to_db(sir.pbs_usf) < state.rho_pbs_db && state.alpha_pbs > 0.0 {
                Subframe::Csf
            } else {
                Subframe::Usf
            }
        }
        Tier::Uabs => {
            if to_db(sir.uabs_usf) < state.rho_uabs_db {
                Subframe::Csf
            } else {
                Subframe::Usf
            }
        }
        _ => Subframe::Usf,
    }
}

/// Associates every UE whose link profile is given: sextet, tier selection,
/// subframe, and the per-cell load tally.
pub fn associate_all(
    ue_refs: &[UeRef],
    profiles: &[UeLinkProfile],
    state: &IcicState,
    n_mbs: usize,
    n_pbs: usize,
    n_uabs: usize,
) -> Result<(Vec<UeAssignment>, CellLoads)> {
    if ue_refs.len() != profiles.len() {
        return Err(Error::Internal(format!(
            "{} UE refs but {} profiles",
            ue_refs.len(),
            profiles.len()
        )));
    }
    let mut loads = CellLoads::new(n_mbs, n_pbs, n_uabs);
    let mut assignments = Vec::with_capacity(profiles.len());
    for (ue, profile) in ue_refs.iter().zip(profiles) {
        let sir = sir_from_profile(profile, state);
        let (serving_tier, biased_metric_db) = select_cell(&sir, state);
        let serving_cell = match serving_tier {
            Tier::Mbs => profile.moi,
            Tier::Pbs => profile.poi,
            _ => profile.uoi,
        };
        let subframe = schedule_subframe(serving_tier, &sir, state);
        loads.add(serving_tier, serving_cell, subframe);
        assignments.push(UeAssignment {
            ue: *ue,
            serving_tier,
            serving_cell,
            subframe,
            sir,
            biased_metric_db,
        });
    }
    Ok((assignments, loads))
}
