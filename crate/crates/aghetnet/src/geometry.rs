//! Positions, the simulation area, and per-link geometry.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Links shorter than this are clamped before entering a path-loss model;
/// a PPP can place a UE arbitrarily close to a base station.
pub const MIN_LINK_DISTANCE_M: f64 = 1.0;

/// A 3D position in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// Horizontal (ground-projected) distance.
    pub fn distance_2d(&self, other: &Point3) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn distance_3d(&self, other: &Point3) -> f64 {
        let d2 = self.distance_2d(other);
        d2.hypot(self.z - other.z)
    }
}

/// Rectangular simulation area, origin at (0, 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimArea {
    pub width_m: f64,
    pub height_m: f64,
}

impl SimArea {
    pub fn new(width_m: f64, height_m: f64) -> Result<Self> {
        if !(width_m > 0.0) || !(height_m > 0.0) {
            return Err(Error::Parameter(format!(
                "simulation area must have positive sides, got {width_m} x {height_m} m"
            )));
        }
        Ok(Self { width_m, height_m })
    }

    pub fn area_km2(&self) -> f64 {
        self.width_m * self.height_m / 1e6
    }

    pub fn contains(&self, p: &Point3) -> bool {
        p.x >= 0.0 && p.x <= self.width_m && p.y >= 0.0 && p.y <= self.height_m
    }
}

/// Geometry of one BS-to-UE link.
///
/// `elevation_deg` is the magnitude of the angle between the horizontal
/// plane and the BS-UE ray; by alternate angles it is the same at either
/// end, which is the convention the air-to-ground LOS sigmoid expects.
/// `depression_deg` is signed: positive when the UE sits below the BS
/// (the usual case for terrestrial cells), negative for a UE above the BS.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkGeometry {
    pub d2_m: f64,
    pub d3_m: f64,
    pub elevation_deg: f64,
    pub depression_deg: f64,
    /// Azimuth offset from the BS boresight. The element beam is steered
    /// toward the evaluated UE, so pipeline links use 0.
    pub azimuth_deg: f64,
}

impl LinkGeometry {
    /// Geometry between a BS and a UE position.
    pub fn between(bs: &Point3, ue: &Point3) -> Self {
        let d2 = bs.distance_2d(ue);
        let dz = bs.z - ue.z;
        let d3 = d2.hypot(dz);
        let depression = dz.atan2(d2).to_degrees();
        Self {
            d2_m: d2,
            d3_m: d3,
            elevation_deg: depression.abs(),
            depression_deg: depression,
            azimuth_deg: 0.0,
        }
    }
}
