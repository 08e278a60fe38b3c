//! Received powers and the six-way SIR evaluation.
//!
//! Every UE sees three candidate servers (nearest MBS, PBS and UABS); all
//! remaining base stations form the aggregate interference term at full,
//! uncoordinated power. The six SIR expressions pair each tier's USF with
//! the power-reduced CSF forms, reusing the same received-power draws, so a
//! UE's fading realization is shared between the USF and CSF views of a
//! link within a trial.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{
    antenna_gain, path_loss_db, ChannelParams, FadingSamplers, LinkClass,
};
use crate::deployment::{NetworkLayout, Tier};
use crate::error::{Error, Result};
use crate::geometry::{LinkGeometry, Point3};

/// Floor applied to SIR denominators; reachable when the reduction factors
/// zero out every interference term and no residual interferers exist.
pub const SIR_FLOOR_MW: f64 = 1e-30;

/// Downlink transmit powers per base-station tier, dBm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TxPowers {
    pub mbs_dbm: f64,
    pub pbs_dbm: f64,
    pub uabs_dbm: f64,
}

impl Default for TxPowers {
    fn default() -> Self {
        Self {
            mbs_dbm: 46.0,
            pbs_dbm: 30.0,
            uabs_dbm: 26.0,
        }
    }
}

impl TxPowers {
    pub fn dbm(&self, tier: Tier) -> f64 {
        match tier {
            Tier::Mbs => self.mbs_dbm,
            Tier::Pbs => self.pbs_dbm,
            Tier::Uabs => self.uabs_dbm,
            _ => f64::NEG_INFINITY,
        }
    }
}

/// One evaluated BS-to-UE link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub rx_power_mw: f64,
    pub pl_db: f64,
    pub antenna_db: f64,
    /// Linear Nakagami power gain drawn for this link.
    pub fading: f64,
    pub geometry: LinkGeometry,
    pub bs_index: usize,
    pub bs_tier: Tier,
}

/// rx(mW) = tx(mW) * 10^(antenna/10) * H / 10^(pl/10).
pub fn compose_rx_mw(tx_dbm: f64, antenna_db: f64, pl_db: f64, fading: f64) -> f64 {
    10f64.powf((tx_dbm + antenna_db - pl_db) / 10.0) * fading
}

/// Element gain toward the UE. The beam is azimuth-steered at the evaluated
/// UE; terrestrial elements measure the vertical angle as depression from
/// the horizon, UABS elements as the offset from the nadir.
pub fn element_gain_db(
    bs_tier: Tier,
    geom: &LinkGeometry,
    params: &ChannelParams,
) -> f64 {
    match bs_tier {
        Tier::Uabs => {
            let mut ap = params.antenna;
            ap.downtilt_deg = params.antenna.uabs_downtilt_deg;
            antenna_gain(geom.azimuth_deg, geom.depression_deg - 90.0, &ap)
        }
        _ => antenna_gain(geom.azimuth_deg, geom.depression_deg, &params.antenna),
    }
}

/// Received power from one BS at one UE, with the fading gain supplied by
/// the caller.
pub fn received_power_with_fading(
    bs: &Point3,
    bs_tier: Tier,
    bs_index: usize,
    ue: &Point3,
    ue_tier: Tier,
    tx_power_dbm: f64,
    channel: &ChannelParams,
    fading: f64,
    rng: &mut impl Rng,
) -> Result<LinkBudget> {
    let class = LinkClass::classify(bs_tier, ue_tier)?;
    let geom = LinkGeometry::between(bs, ue);
    let pl_db = path_loss_db(class, &geom, channel, bs.z, ue.z, rng)?;
    let antenna_db = element_gain_db(bs_tier, &geom, channel);
    Ok(LinkBudget {
        rx_power_mw: compose_rx_mw(tx_power_dbm, antenna_db, pl_db, fading),
        pl_db,
        antenna_db,
        fading,
        geometry: geom,
        bs_index,
        bs_tier,
    })
}

/// Received power with a fresh Nakagami draw for the link's class.
#[allow(clippy::too_many_arguments)]
pub fn received_power(
    bs: &Point3,
    bs_tier: Tier,
    bs_index: usize,
    ue: &Point3,
    ue_tier: Tier,
    tx_power_dbm: f64,
    channel: &ChannelParams,
    samplers: &FadingSamplers,
    rng: &mut impl Rng,
) -> Result<LinkBudget> {
    let class = LinkClass::classify(bs_tier, ue_tier)?;
    let fading = samplers.draw(class, rng);
    received_power_with_fading(
        bs, bs_tier, bs_index, ue, ue_tier, tx_power_dbm, channel, fading, rng,
    )
}

/// Indices of the nearest MBS, PBS and UABS by 3D distance. Ties keep the
/// lowest node index.
pub fn nearest_cells(ue: &Point3, layout: &NetworkLayout) -> Result<(usize, usize, usize)> {
    let nearest = |nodes: &[Point3], name: &'static str| -> Result<usize> {
        if nodes.is_empty() {
            return Err(Error::TierMissing(name));
        }
        let mut best = 0usize;
        let mut best_d = f64::INFINITY;
        for (i, p) in nodes.iter().enumerate() {
            let d = p.distance_3d(ue);
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        Ok(best)
    };
    Ok((
        nearest(&layout.mbs, "mbs")?,
        nearest(&layout.pbs, "pbs")?,
        nearest(&layout.uabs, "uabs")?,
    ))
}

/// State-independent link summary for one UE (or coverage probe): received
/// powers from the three cells of interest plus the full-power aggregate
/// interference from everything else. Computing these once per trial is
/// what makes a grid search over ICIC states cheap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UeLinkProfile {
    pub moi: usize,
    pub poi: usize,
    pub uoi: usize,
    pub r_mbs_mw: f64,
    pub r_pbs_mw: f64,
    pub r_uabs_mw: f64,
    pub i_agg_mw: f64,
}

/// Sum of received powers from every BS except the three nearest, all at
/// full power with independent fading.
#[allow(clippy::too_many_arguments)]
pub fn aggregate_interference(
    ue: &Point3,
    ue_tier: Tier,
    layout: &NetworkLayout,
    moi: usize,
    poi: usize,
    uoi: usize,
    powers: &TxPowers,
    channel: &ChannelParams,
    samplers: &FadingSamplers,
    rng: &mut impl Rng,
) -> Result<f64> {
    let mut sum = 0.0;
    for (tier, skip) in [(Tier::Mbs, moi), (Tier::Pbs, poi), (Tier::Uabs, uoi)] {
        for (i, bs) in layout.nodes(tier).iter().enumerate() {
            if i == skip {
                continue;
            }
            sum += received_power(
                bs,
                tier,
                i,
                ue,
                ue_tier,
                powers.dbm(tier),
                channel,
                samplers,
                rng,
            )?
            .rx_power_mw;
        }
    }
    Ok(sum)
}

/// Builds the per-UE link profile. Links are evaluated in a fixed tier and
/// index order so the draw sequence is a pure function of the stream.
pub fn build_ue_profile(
    ue: &Point3,
    ue_tier: Tier,
    layout: &NetworkLayout,
    powers: &TxPowers,
    channel: &ChannelParams,
    samplers: &FadingSamplers,
    rng: &mut impl Rng,
) -> Result<UeLinkProfile> {
    let (moi, poi, uoi) = nearest_cells(ue, layout)?;
    let mut profile = UeLinkProfile {
        moi,
        poi,
        uoi,
        r_mbs_mw: 0.0,
        r_pbs_mw: 0.0,
        r_uabs_mw: 0.0,
        i_agg_mw: 0.0,
    };
    for (tier, of_interest) in [(Tier::Mbs, moi), (Tier::Pbs, poi), (Tier::Uabs, uoi)] {
        for (i, bs) in layout.nodes(tier).iter().enumerate() {
            let rx = received_power(
                bs,
                tier,
                i,
                ue,
                ue_tier,
                powers.dbm(tier),
                channel,
                samplers,
                rng,
            )?
            .rx_power_mw;
            if i == of_interest {
                match tier {
                    Tier::Mbs => profile.r_mbs_mw = rx,
                    Tier::Pbs => profile.r_pbs_mw = rx,
                    Tier::Uabs => profile.r_uabs_mw = rx,
                    _ => unreachable!(),
                }
            } else {
                profile.i_agg_mw += rx;
            }
        }
    }
    Ok(profile)
}

/// One optimizer search point: the ICIC scalars applied uniformly to all
/// cells of each tier. UABS placement is carried by the layout (the grid is
/// fixed; only the height scenario moves it).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IcicState {
    /// CSF power reduction at MBS / PBS, in [0, 1]. 1 = no ICIC, 0 = almost
    /// blank subframes (eICIC), otherwise reduced power (FeICIC).
    pub alpha_mbs: f64,
    pub alpha_pbs: f64,
    /// USF duty cycles, in [0, 1].
    pub beta_mbs: f64,
    pub beta_pbs: f64,
    /// Scheduling thresholds, dB.
    pub rho_mbs_db: f64,
    pub rho_pbs_db: f64,
    pub rho_uabs_db: f64,
    /// Cell range expansion biases, dB.
    pub tau_pbs_db: f64,
    pub tau_uabs_db: f64,
}

impl Default for IcicState {
    fn default() -> Self {
        Self {
            alpha_mbs: 1.0,
            alpha_pbs: 1.0,
            beta_mbs: 0.5,
            beta_pbs: 0.5,
            rho_mbs_db: 30.0,
            rho_pbs_db: 0.0,
            rho_uabs_db: 0.0,
            tau_pbs_db: 0.0,
            tau_uabs_db: 0.0,
        }
    }
}

impl IcicState {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("alpha_mbs", self.alpha_mbs),
            ("alpha_pbs", self.alpha_pbs),
            ("beta_mbs", self.beta_mbs),
            ("beta_pbs", self.beta_pbs),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Config(format!("{name} must be in [0, 1], got {v}")));
            }
        }
        for (name, v) in [("tau_pbs_db", self.tau_pbs_db), ("tau_uabs_db", self.tau_uabs_db)] {
            if v < 0.0 {
                return Err(Error::Config(format!("{name} must be >= 0 dB, got {v}")));
            }
        }
        Ok(())
    }
}

/// The six SIR values (linear) seen by one UE.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SirSextet {
    pub mbs_usf: f64,
    pub mbs_csf: f64,
    pub pbs_usf: f64,
    pub pbs_csf: f64,
    pub uabs_usf: f64,
    pub uabs_csf: f64,
}

impl SirSextet {
    pub fn usf(&self, tier: Tier) -> f64 {
        match tier {
            Tier::Mbs => self.mbs_usf,
            Tier::Pbs => self.pbs_usf,
            Tier::Uabs => self.uabs_usf,
            _ => 0.0,
        }
    }

    pub fn csf(&self, tier: Tier) -> f64 {
        match tier {
            Tier::Mbs => self.mbs_csf,
            Tier::Pbs => self.pbs_csf,
            Tier::Uabs => self.uabs_csf,
            _ => 0.0,
        }
    }
}

/// The six SIR expressions from the cached profile.
///
/// With `R_m`, `R_p`, `R_u` the powers from the three cells of interest and
/// `I` the aggregate interference:
///
/// ```text
/// mbs_usf  = R_m / (R_p + R_u + I)
/// mbs_csf  = a_m R_m / (a_p R_p + R_u + I)
/// pbs_usf  = R_p / (R_m + R_u + I)
/// pbs_csf  = a_p R_p / (a_m R_m + R_u + I)
/// uabs_usf = R_u / (R_m + R_p + I)
/// uabs_csf = R_u / (a_m R_m + a_p R_p + I)
/// ```
pub fn sir_from_profile(profile: &UeLinkProfile, state: &IcicState) -> SirSextet {
    let (r_m, r_p, r_u, i) = (
        profile.r_mbs_mw,
        profile.r_pbs_mw,
        profile.r_uabs_mw,
        profile.i_agg_mw,
    );
    let (a_m, a_p) = (state.alpha_mbs, state.alpha_pbs);
    let div = |num: f64, den: f64| num / den.max(SIR_FLOOR_MW);
    SirSextet {
        mbs_usf: div(r_m, r_p + r_u + i),
        mbs_csf: div(a_m * r_m, a_p * r_p + r_u + i),
        pbs_usf: div(r_p, r_m + r_u + i),
        pbs_csf: div(a_p * r_p, a_m * r_m + r_u + i),
        uabs_usf: div(r_u, r_m + r_p + i),
        uabs_csf: div(r_u, a_m * r_m + a_p * r_p + i),
    }
}

/// Full sextet evaluation for one UE against a layout (profile built on the
/// fly; the Monte-Carlo pipeline caches profiles instead).
#[allow(clippy::too_many_arguments)]
pub fn sir_sextet(
    ue: &Point3,
    ue_tier: Tier,
    layout: &NetworkLayout,
    powers: &TxPowers,
    state: &IcicState,
    channel: &ChannelParams,
    samplers: &FadingSamplers,
    rng: &mut impl Rng,
) -> Result<SirSextet> {
    let profile = build_ue_profile(ue, ue_tier, layout, powers, channel, samplers, rng)?;
    Ok(sir_from_profile(&profile, state))
}
