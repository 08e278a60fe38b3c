//! Propagation models for the three link classes, Nakagami-m fading, and
//! the 3D antenna element pattern.
//!
//! Link classes:
//! - GTG (terrestrial BS to ground UE): urban Okumura-Hata.
//! - ATA (any BS to aerial UE): UMa-AV LOS probability and path-loss rows
//!   for aerial UE heights, averaged over the LOS/NLOS probabilities (a
//!   per-draw Bernoulli LOS mode is available for sensitivity studies).
//! - ATG (UABS to ground UE): elevation-angle LOS sigmoid with free-space
//!   style distance terms plus per-branch excess loss.
//!
//! All model constants live in [`ChannelParams`] so alternates can be
//! configured without code changes.

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::deployment::{NetworkLayout, Tier};
use crate::error::{Error, Result};
use crate::geometry::{LinkGeometry, MIN_LINK_DISTANCE_M};

const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// 3GPP-style element pattern parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AntennaParams {
    pub g_max_dbi: f64,
    pub theta_3db_deg: f64,
    pub phi_3db_deg: f64,
    pub sla_v_db: f64,
    pub a_max_db: f64,
    /// Electrical downtilt of terrestrial elements (MBS, PBS).
    pub downtilt_deg: f64,
    /// UABS elements point at the nadir; their vertical offset is taken
    /// against the downward axis, with this additional tilt (default 0).
    pub uabs_downtilt_deg: f64,
}

impl Default for AntennaParams {
    fn default() -> Self {
        Self {
            g_max_dbi: 8.0,
            theta_3db_deg: 65.0,
            phi_3db_deg: 65.0,
            sla_v_db: 30.0,
            a_max_db: 30.0,
            downtilt_deg: 6.0,
            uabs_downtilt_deg: 0.0,
        }
    }
}

/// How the ATA link resolves its LOS/NLOS mixture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AtaLosMode {
    /// Probability-weighted dB average (default).
    Expected,
    /// Draw the LOS state per link.
    Bernoulli,
}

/// All propagation constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ChannelParams {
    pub carrier_mhz: f64,
    /// Nakagami shape on LOS-dominated link classes (ATA, ATG).
    pub m_los: f64,
    /// Nakagami shape on NLOS-dominated links (GTG); 1 = Rayleigh.
    pub m_nlos: f64,
    /// ATG LOS-probability sigmoid environment constants.
    pub atg_los_a: f64,
    pub atg_los_b: f64,
    pub atg_pl_exponent_los: f64,
    pub atg_pl_exponent_nlos: f64,
    pub atg_excess_los_db: f64,
    pub atg_excess_nlos_db: f64,
    /// Extra clutter losses on the ATA branches. These shift every link to
    /// an aerial UE by the same amounts, which leaves AUE SIRs untouched in
    /// the expected-LOS mode (all of an AUE's links are ATA-class).
    pub ata_excess_los_db: f64,
    pub ata_excess_nlos_db: f64,
    pub ata_los_mode: AtaLosMode,
    pub antenna: AntennaParams,
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self {
            carrier_mhz: 763.0,
            m_los: 3.0,
            m_nlos: 1.0,
            atg_los_a: 4.88,
            atg_los_b: 0.429,
            atg_pl_exponent_los: 2.0,
            atg_pl_exponent_nlos: 2.5,
            atg_excess_los_db: 0.1,
            atg_excess_nlos_db: 21.0,
            ata_excess_los_db: 0.0,
            ata_excess_nlos_db: 52.0,
            ata_los_mode: AtaLosMode::Expected,
            antenna: AntennaParams::default(),
        }
    }
}

impl ChannelParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.carrier_mhz > 0.0) {
            return Err(Error::Parameter("carrier frequency must be positive".into()));
        }
        if self.m_los < 1.0 {
            return Err(Error::Parameter(format!(
                "m_los must be >= 1, got {}",
                self.m_los
            )));
        }
        if self.m_nlos < 0.5 {
            return Err(Error::Parameter(format!(
                "m_nlos must be >= 0.5, got {}",
                self.m_nlos
            )));
        }
        if !(150.0..=1500.0).contains(&self.carrier_mhz) {
            log::warn!(
                "carrier {} MHz is outside the 150-1500 MHz Hata validity range",
                self.carrier_mhz
            );
        }
        Ok(())
    }
}

/// Urban Okumura-Hata loss (large-city mobile correction) for the
/// ground-to-ground link. Horizontal distance below 1 m is clamped.
pub fn pl_gtg(
    geom: &LinkGeometry,
    params: &ChannelParams,
    bs_height_m: f64,
    ue_height_m: f64,
) -> Result<f64> {
    if geom.d2_m <= 0.0 {
        return Err(Error::DegenerateDistance(
            "GTG link with zero horizontal distance".into(),
        ));
    }
    let f = params.carrier_mhz;
    let d_km = geom.d2_m.max(MIN_LINK_DISTANCE_M) / 1000.0;
    let a_hm = if f >= 300.0 {
        3.2 * (11.75 * ue_height_m).log10().powi(2) - 4.97
    } else {
        8.29 * (1.54 * ue_height_m).log10().powi(2) - 1.1
    };
    Ok(69.55 + 26.16 * f.log10() - 13.82 * bs_height_m.log10() - a_hm
        + (44.9 - 6.55 * bs_height_m.log10()) * d_km.log10())
}

/// UMa-AV LOS probability for an aerial UE at `ue_height_m`.
pub fn uma_av_p_los(d2_m: f64, ue_height_m: f64) -> f64 {
    let h = ue_height_m.max(22.5);
    if h > 100.0 {
        return 1.0;
    }
    let d1 = (460.0 * h.log10() - 700.0).max(18.0);
    let p1 = 4300.0 * h.log10() - 3800.0;
    if d2_m <= d1 {
        1.0
    } else {
        d1 / d2_m + (-d2_m / p1).exp() * (1.0 - d1 / d2_m)
    }
}

/// UMa-AV LOS path loss row (aerial UE heights).
pub fn uma_av_pl_los(d3_m: f64, carrier_mhz: f64) -> f64 {
    let f_ghz = carrier_mhz / 1000.0;
    28.0 + 22.0 * d3_m.log10() + 20.0 * f_ghz.log10()
}

/// UMa-AV NLOS path loss row (aerial UE heights).
pub fn uma_av_pl_nlos(d3_m: f64, ue_height_m: f64, carrier_mhz: f64) -> f64 {
    let f_ghz = carrier_mhz / 1000.0;
    let h = ue_height_m.max(22.5);
    -17.5 + (46.0 - 7.0 * h.log10()) * d3_m.log10()
        + 20.0 * (40.0 * std::f64::consts::PI * f_ghz / 3.0).log10()
}

/// Any-to-air path loss at the default aerial-UE height (22.5 m). In
/// `Expected` mode the LOS/NLOS branches are averaged with the UMa-AV LOS
/// probability; in `Bernoulli` mode the LOS state is drawn per call.
pub fn pl_ata(geom: &LinkGeometry, params: &ChannelParams, rng: &mut impl Rng) -> Result<f64> {
    pl_ata_at_height(geom, params, 22.5, rng)
}

/// Any-to-air path loss with an explicit aerial-UE height.
pub fn pl_ata_at_height(
    geom: &LinkGeometry,
    params: &ChannelParams,
    ue_height_m: f64,
    rng: &mut impl Rng,
) -> Result<f64> {
    let d3 = geom.d3_m.max(MIN_LINK_DISTANCE_M);
    let p_los = uma_av_p_los(geom.d2_m, ue_height_m);
    let los = uma_av_pl_los(d3, params.carrier_mhz) + params.ata_excess_los_db;
    let nlos =
        uma_av_pl_nlos(d3, ue_height_m, params.carrier_mhz) + params.ata_excess_nlos_db;
    Ok(match params.ata_los_mode {
        AtaLosMode::Expected => p_los * los + (1.0 - p_los) * nlos,
        AtaLosMode::Bernoulli => {
            if rng.gen::<f64>() < p_los {
                los
            } else {
                nlos
            }
        }
    })
}

/// ATG LOS probability: elevation-angle sigmoid `1/(1 + a*exp(-b*(theta-a)))`.
pub fn atg_p_los(elevation_deg: f64, params: &ChannelParams) -> f64 {
    let (a, b) = (params.atg_los_a, params.atg_los_b);
    1.0 / (1.0 + a * (-b * (elevation_deg - a)).exp())
}

fn atg_branch(d3_m: f64, exponent: f64, excess_db: f64, carrier_mhz: f64) -> f64 {
    let f_hz = carrier_mhz * 1e6;
    let ref_1m = 20.0 * (4.0 * std::f64::consts::PI * f_hz / SPEED_OF_LIGHT_M_S).log10();
    ref_1m + 10.0 * exponent * d3_m.log10() + excess_db
}

/// Air-to-ground path loss: expected loss over the elevation-angle LOS
/// probability, each branch a free-space style term plus excess loss.
pub fn pl_atg(geom: &LinkGeometry, params: &ChannelParams) -> Result<f64> {
    if geom.elevation_deg <= 0.0 {
        return Err(Error::UndefinedElevation(format!(
            "ATG link needs elevation in (0, 90], got {}",
            geom.elevation_deg
        )));
    }
    let d3 = geom.d3_m.max(MIN_LINK_DISTANCE_M);
    let p = atg_p_los(geom.elevation_deg, params);
    let los = atg_branch(d3, params.atg_pl_exponent_los, params.atg_excess_los_db, params.carrier_mhz);
    let nlos = atg_branch(
        d3,
        params.atg_pl_exponent_nlos,
        params.atg_excess_nlos_db,
        params.carrier_mhz,
    );
    Ok(p * los + (1.0 - p) * nlos)
}

/// Draws a Nakagami-m fading power gain: H ~ Gamma(shape = m, scale = 1/m),
/// so E[H] = 1. m = 1 is Rayleigh power (exponential), m >> 1 is no fading.
pub fn nakagami_power_gain(m: f64, rng: &mut impl Rng) -> Result<f64> {
    if m < 0.5 {
        return Err(Error::Parameter(format!(
            "Nakagami shape must be >= 0.5, got {m}"
        )));
    }
    let gamma = Gamma::new(m, 1.0 / m)
        .map_err(|e| Error::Parameter(format!("invalid Gamma({m}, {}): {e}", 1.0 / m)))?;
    Ok(gamma.sample(rng))
}

/// Pre-built fading samplers so the hot path does not re-derive the
/// Marsaglia-Tsang constants per draw.
#[derive(Debug, Clone, Copy)]
pub struct FadingSamplers {
    los: Gamma<f64>,
    nlos: Gamma<f64>,
}

impl FadingSamplers {
    pub fn new(params: &ChannelParams) -> Result<Self> {
        params.validate()?;
        let mk = |m: f64| {
            Gamma::new(m, 1.0 / m)
                .map_err(|e| Error::Parameter(format!("invalid Gamma shape {m}: {e}")))
        };
        Ok(Self {
            los: mk(params.m_los)?,
            nlos: mk(params.m_nlos)?,
        })
    }

    /// Fading draw for a link class: LOS-shaped on ATA/ATG, NLOS on GTG.
    pub fn draw(&self, class: LinkClass, rng: &mut impl Rng) -> f64 {
        match class {
            LinkClass::Gtg => self.nlos.sample(rng),
            LinkClass::Ata | LinkClass::Atg => self.los.sample(rng),
        }
    }
}

/// 3GPP element pattern.
///
/// `elevation_deg` is the vertical angle already expressed in the element's
/// tilt frame (terrestrial: depression from the horizon; UABS: offset from
/// the nadir), compared against `downtilt_deg`.
pub fn antenna_gain(azimuth_deg: f64, elevation_deg: f64, params: &AntennaParams) -> f64 {
    let a_v = -(12.0 * ((elevation_deg - params.downtilt_deg) / params.theta_3db_deg).powi(2))
        .min(params.sla_v_db);
    let a_h = -(12.0 * (azimuth_deg / params.phi_3db_deg).powi(2)).min(params.a_max_db);
    params.g_max_dbi - (-(a_v + a_h)).min(params.a_max_db)
}

/// Which path-loss model a (BS tier, UE tier) pairing uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkClass {
    Gtg,
    Ata,
    Atg,
}

impl LinkClass {
    pub fn classify(bs_tier: Tier, ue_tier: Tier) -> Result<LinkClass> {
        match (bs_tier, ue_tier) {
            (Tier::Mbs | Tier::Pbs, Tier::Gue) => Ok(LinkClass::Gtg),
            (Tier::Mbs | Tier::Pbs | Tier::Uabs, Tier::Aue) => Ok(LinkClass::Ata),
            (Tier::Uabs, Tier::Gue) => Ok(LinkClass::Atg),
            (bs, ue) => Err(Error::Classification(format!(
                "no path-loss model for BS tier {} serving UE tier {}",
                bs.name(),
                ue.name()
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            LinkClass::Gtg => "gtg",
            LinkClass::Ata => "ata",
            LinkClass::Atg => "atg",
        }
    }
}

/// Path loss for a classified link (no antenna, no fading).
pub fn path_loss_db(
    class: LinkClass,
    geom: &LinkGeometry,
    params: &ChannelParams,
    bs_height_m: f64,
    ue_height_m: f64,
    rng: &mut impl Rng,
) -> Result<f64> {
    match class {
        LinkClass::Gtg => pl_gtg(geom, params, bs_height_m, ue_height_m),
        LinkClass::Ata => pl_ata_at_height(geom, params, ue_height_m, rng),
        LinkClass::Atg => pl_atg(geom, params),
    }
}

/// An empirical CDF over one link class.
#[derive(Debug, Clone, Default)]
pub struct EmpiricalCdf {
    /// Sorted ascending.
    values: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn from_samples(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| a.total_cmp(b));
        Self { values }
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn min(&self) -> Option<f64> {
        self.values.first().copied()
    }

    pub fn max(&self) -> Option<f64> {
        self.values.last().copied()
    }

    /// CDF evaluated at `x`: fraction of samples <= x.
    pub fn at(&self, x: f64) -> f64 {
        if self.values.is_empty() {
            return 0.0;
        }
        let k = self.values.partition_point(|&v| v <= x);
        k as f64 / self.values.len() as f64
    }

    /// At most `max_points` (value, cdf) pairs, always keeping the extremes.
    pub fn sampled_points(&self, max_points: usize) -> Vec<(f64, f64)> {
        let n = self.values.len();
        if n == 0 || max_points == 0 {
            return Vec::new();
        }
        let step = (n as f64 / max_points as f64).max(1.0);
        let mut out = Vec::new();
        let mut i = 0f64;
        while (i as usize) < n {
            let idx = i as usize;
            out.push((self.values[idx], (idx + 1) as f64 / n as f64));
            i += step;
        }
        if out.last().map(|&(v, _)| v) != Some(self.values[n - 1]) {
            out.push((self.values[n - 1], 1.0));
        }
        out
    }
}

/// Per-class path-loss CDFs over all BS-UE pairs of a layout.
#[derive(Debug, Clone, Default)]
pub struct PathLossCdfs {
    pub gtg: EmpiricalCdf,
    pub ata: EmpiricalCdf,
    pub atg: EmpiricalCdf,
}

impl PathLossCdfs {
    pub fn class(&self, class: LinkClass) -> &EmpiricalCdf {
        match class {
            LinkClass::Gtg => &self.gtg,
            LinkClass::Ata => &self.ata,
            LinkClass::Atg => &self.atg,
        }
    }
}

/// Computes the empirical path-loss CDFs for the three link classes over
/// every BS-UE pair in the layout. Empty endpoint tiers leave that class
/// empty (with a warning).
pub fn path_loss_cdf(
    layout: &NetworkLayout,
    params: &ChannelParams,
    rng: &mut impl Rng,
) -> Result<PathLossCdfs> {
    use rayon::prelude::*;

    params.validate()?;
    let mut out = PathLossCdfs::default();
    let classes: [(LinkClass, Vec<Tier>, Tier); 3] = [
        (LinkClass::Gtg, vec![Tier::Mbs, Tier::Pbs], Tier::Gue),
        (LinkClass::Ata, vec![Tier::Mbs, Tier::Pbs, Tier::Uabs], Tier::Aue),
        (LinkClass::Atg, vec![Tier::Uabs], Tier::Gue),
    ];
    // The Bernoulli ATA mode draws per link; fold a stream token per class
    // so the draw sequence is reproducible.
    let class_seed: u64 = rng.gen();
    for (class, bs_tiers, ue_tier) in classes {
        let ues = layout.nodes(ue_tier);
        let bs_count: usize = bs_tiers.iter().map(|&t| layout.nodes(t).len()).sum();
        if ues.is_empty() || bs_count == 0 {
            log::warn!(
                "path_loss_cdf: no {} pairs (empty tier), emitting empty CDF",
                class.name()
            );
            continue;
        }
        let samples: Vec<f64> = ues
            .par_iter()
            .enumerate()
            .map(|(ue_idx, ue)| {
                let mut link_rng =
                    crate::rng::substream(class_seed, &[crate::rng::tag::PLCDF, ue_idx as u64]);
                let mut vals = Vec::with_capacity(bs_count);
                for &bt in &bs_tiers {
                    for bs in layout.nodes(bt) {
                        let geom = LinkGeometry::between(bs, ue);
                        let pl = path_loss_db(class, &geom, params, bs.z, ue.z, &mut link_rng)
                            .unwrap_or(f64::NAN);
                        if pl.is_finite() {
                            vals.push(pl);
                        }
                    }
                }
                vals
            })
            .flatten()
            .collect();
        let cdf = EmpiricalCdf::from_samples(samples);
        match class {
            LinkClass::Gtg => out.gtg = cdf,
            LinkClass::Ata => out.ata = cdf,
            LinkClass::Atg => out.atg = cdf,
        }
    }
    Ok(out)
}
