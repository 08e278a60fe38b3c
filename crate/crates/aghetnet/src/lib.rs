//! System-level Monte-Carlo simulator for a three-tier air/ground
//! LTE-Advanced HetNet.
//!
//! Macro, pico and UAV base stations serve ground and aerial UEs over
//! distinct path-loss classes (Okumura-Hata, UMa-AV, elevation-sigmoid
//! air-to-ground) with Nakagami-m fading and a 3GPP element pattern. Cell
//! selection applies range-expansion bias; Rel-10/11 interference
//! coordination splits radio frames into full-power and reduced-power
//! subframes. The simulator scores network states by fifth-percentile
//! spectral efficiency and area coverage probability, and a brute-force
//! grid search with common random numbers finds the best ICIC/CRE
//! configuration.
//!
//! Determinism contract: every result is a pure function of (config,
//! seed), independent of thread count and evaluation order.

pub mod association;
pub mod channel;
pub mod config;
pub mod deployment;
pub mod error;
pub mod export;
pub mod geometry;
pub mod kpi;
pub mod linkbudget;
pub mod optimizer;
pub mod rng;

pub use association::{associate_all, schedule_subframe, select_cell, CellLoads, Subframe, UeAssignment, UeRef};
pub use channel::{
    antenna_gain, nakagami_power_gain, path_loss_cdf, pl_ata, pl_atg, pl_gtg, AntennaParams,
    AtaLosMode, ChannelParams, EmpiricalCdf, LinkClass, PathLossCdfs,
};
pub use config::{load_config, parse_config, SimConfig};
pub use deployment::{build_layout, hex_grid, sample_ppp, NetworkLayout, Placement, Tier, TierSpec};
pub use error::{Error, Result};
pub use geometry::{LinkGeometry, Point3, SimArea};
pub use kpi::{
    coverage_probability, fifth_percentile, run_campaign, run_trial, ue_spectral_efficiency,
    KpiReport, TrialCache, TrialRecord, TrialSet, UabsDutyNormalization,
};
pub use linkbudget::{
    aggregate_interference, nearest_cells, received_power, sir_sextet, IcicState, LinkBudget,
    SirSextet, TxPowers, UeLinkProfile,
};
pub use optimizer::{
    enumerate_states, optimize, optimize_cached, surface_cached, IcicMode, Objective, SearchGrid,
    SearchResult, SurfacePoint, TraceEntry,
};
