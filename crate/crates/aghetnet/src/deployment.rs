//! Spatial layout generation.
//!
//! MBS, PBS, GUE and AUE positions come from independent 2D Poisson point
//! processes (draw a Poisson count, place uniformly); UABS positions form a
//! deterministic offset-row hexagonal-packing lattice, so they are identical
//! across seeds and only the tier height changes between scenarios.

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point3, SimArea};

/// Node tiers. The first three transmit; the last two are user equipment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Mbs,
    Pbs,
    Uabs,
    Gue,
    Aue,
}

impl Tier {
    pub const ALL: [Tier; 5] = [Tier::Mbs, Tier::Pbs, Tier::Uabs, Tier::Gue, Tier::Aue];

    pub fn name(&self) -> &'static str {
        match self {
            Tier::Mbs => "mbs",
            Tier::Pbs => "pbs",
            Tier::Uabs => "uabs",
            Tier::Gue => "gue",
            Tier::Aue => "aue",
        }
    }

    pub fn is_base_station(&self) -> bool {
        matches!(self, Tier::Mbs | Tier::Pbs | Tier::Uabs)
    }
}

/// How one tier is placed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Placement {
    /// Poisson point process with the given intensity (nodes per km^2).
    Ppp { intensity_per_km2: f64 },
    /// Fixed hexagonal grid with exactly `count` nodes.
    HexGrid { count: usize },
}

/// Placement, transmit power and height for one tier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TierSpec {
    pub tier: Tier,
    pub placement: Placement,
    /// Transmit power in dBm; `None` for UE tiers (downlink only).
    pub tx_power_dbm: Option<f64>,
    pub height_m: f64,
}

impl TierSpec {
    fn validate(&self) -> Result<()> {
        if !(self.height_m > 0.0) {
            return Err(Error::Parameter(format!(
                "{} height must be positive, got {} m",
                self.tier.name(),
                self.height_m
            )));
        }
        match self.placement {
            Placement::Ppp { intensity_per_km2 } if intensity_per_km2 < 0.0 => {
                Err(Error::Parameter(format!(
                    "{} intensity must be non-negative, got {intensity_per_km2} per km^2",
                    self.tier.name()
                )))
            }
            _ => Ok(()),
        }
    }
}

/// Positions of every node, grouped by tier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkLayout {
    pub mbs: Vec<Point3>,
    pub pbs: Vec<Point3>,
    pub uabs: Vec<Point3>,
    pub gue: Vec<Point3>,
    pub aue: Vec<Point3>,
}

impl NetworkLayout {
    pub fn nodes(&self, tier: Tier) -> &[Point3] {
        match tier {
            Tier::Mbs => &self.mbs,
            Tier::Pbs => &self.pbs,
            Tier::Uabs => &self.uabs,
            Tier::Gue => &self.gue,
            Tier::Aue => &self.aue,
        }
    }

    pub fn ue_count(&self) -> usize {
        self.gue.len() + self.aue.len()
    }
}

/// Samples a 2D PPP: Poisson-distributed count with mean
/// `intensity * area_km2`, points uniform over the area, all at `height_m`.
pub fn sample_ppp(
    area: &SimArea,
    intensity_per_km2: f64,
    height_m: f64,
    rng: &mut impl Rng,
) -> Result<Vec<Point3>> {
    if intensity_per_km2 < 0.0 {
        return Err(Error::Parameter(format!(
            "PPP intensity must be non-negative, got {intensity_per_km2}"
        )));
    }
    let mean = intensity_per_km2 * area.area_km2();
    if mean == 0.0 {
        return Ok(Vec::new());
    }
    let count = Poisson::new(mean)
        .map_err(|e| Error::Parameter(format!("invalid Poisson mean {mean}: {e}")))?
        .sample(rng) as usize;
    let mut points = Vec::with_capacity(count);
    for _ in 0..count {
        let x = rng.gen::<f64>() * area.width_m;
        let y = rng.gen::<f64>() * area.height_m;
        points.push(Point3::new(x, y, height_m));
    }
    Ok(points)
}

/// Chooses the rows x columns factorization of `count` whose column/row
/// ratio is closest (in log scale) to the area aspect ratio. Ties prefer
/// more columns than rows.
fn grid_factorization(count: usize, aspect: f64) -> (usize, usize) {
    let target = aspect.ln();
    let mut best = (1usize, count);
    let mut best_err = f64::INFINITY;
    for rows in 1..=count {
        if count % rows != 0 {
            continue;
        }
        let cols = count / rows;
        let err = ((cols as f64 / rows as f64).ln() - target).abs();
        if err < best_err - 1e-12 || (err < best_err + 1e-12 && cols >= rows && best.1 < best.0) {
            best = (rows, cols);
            best_err = err;
        }
    }
    best
}

/// Deterministic offset-row (hexagonal-packing) lattice with exactly
/// `count` points, centered cells, odd rows shifted by half the column
/// pitch. Seed-independent by construction.
pub fn hex_grid(area: &SimArea, count: usize, height_m: f64) -> Result<Vec<Point3>> {
    if count == 0 {
        return Err(Error::Parameter("hex grid count must be >= 1".into()));
    }
    let (rows, cols) = grid_factorization(count, area.width_m / area.height_m);
    let pitch_x = area.width_m / cols as f64;
    let pitch_y = area.height_m / rows as f64;
    if pitch_x < 1.0 || pitch_y < 1.0 {
        return Err(Error::Parameter(format!(
            "hex grid of {count} nodes cannot be placed in {} x {} m at positive spacing",
            area.width_m, area.height_m
        )));
    }
    let mut points = Vec::with_capacity(count);
    for row in 0..rows {
        let offset = if row % 2 == 1 { pitch_x / 2.0 } else { 0.0 };
        for col in 0..cols {
            points.push(Point3::new(
                (col as f64 + 0.5) * pitch_x + offset,
                (row as f64 + 0.5) * pitch_y,
                height_m,
            ));
        }
    }
    Ok(points)
}

/// Builds the full layout from tier specs. PPP tiers draw from independent
/// substreams of `rng` in a fixed tier order; the UABS tier is the grid.
pub fn build_layout(
    specs: &[TierSpec],
    area: &SimArea,
    rng: &mut impl Rng,
) -> Result<NetworkLayout> {
    for tier in Tier::ALL {
        let n = specs.iter().filter(|s| s.tier == tier).count();
        if n != 1 {
            return Err(Error::Config(format!(
                "tier {} must appear exactly once in the specs, found {n}",
                tier.name()
            )));
        }
    }
    let mut layout = NetworkLayout {
        mbs: Vec::new(),
        pbs: Vec::new(),
        uabs: Vec::new(),
        gue: Vec::new(),
        aue: Vec::new(),
    };
    // Fixed order so the draw sequence does not depend on spec ordering.
    for tier in Tier::ALL {
        let spec = specs.iter().find(|s| s.tier == tier).unwrap();
        spec.validate()?;
        let nodes = match spec.placement {
            Placement::Ppp { intensity_per_km2 } => {
                sample_ppp(area, intensity_per_km2, spec.height_m, rng)?
            }
            Placement::HexGrid { count } => hex_grid(area, count, spec.height_m)?,
        };
        match tier {
            Tier::Mbs => layout.mbs = nodes,
            Tier::Pbs => layout.pbs = nodes,
            Tier::Uabs => layout.uabs = nodes,
            Tier::Gue => layout.gue = nodes,
            Tier::Aue => layout.aue = nodes,
        }
    }
    Ok(layout)
}
