//! Planar coordinates and the equirectangular projection used to turn GPS
//! degrees into local meters.
//!
//! The projection is anchored at a per-dataset origin (typically the centroid
//! of the GPS traces). For the areas this pipeline targets (a few km across)
//! the distortion is sub-meter, and the inverse recovers degrees to better
//! than 1e-9.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mean Earth radius in meters.
pub const EARTH_RADIUS_M: f64 = 6_371_000.0;

/// A WGS-84 coordinate pair in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    pub lat_deg: f64,
    pub lon_deg: f64,
}

impl GeoPoint {
    pub fn new(lat_deg: f64, lon_deg: f64) -> Self {
        Self { lat_deg, lon_deg }
    }

    fn validate(&self) -> Result<()> {
        if !self.lat_deg.is_finite() || self.lat_deg.abs() > 90.0 {
            return Err(Error::InvalidInput(format!(
                "latitude {} out of [-90, 90]",
                self.lat_deg
            )));
        }
        if !self.lon_deg.is_finite() || self.lon_deg.abs() > 180.0 {
            return Err(Error::InvalidInput(format!(
                "longitude {} out of [-180, 180]",
                self.lon_deg
            )));
        }
        Ok(())
    }
}

/// A location in meters east (`x`) and north (`y`) of the projection origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarPoint {
    pub x: f64,
    pub y: f64,
}

impl PlanarPoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &PlanarPoint) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2)).sqrt()
    }
}

/// Project a geographic point to local planar meters around `origin`.
///
/// `x = R * (lon - lon0) * cos(lat0) * pi/180`, `y = R * (lat - lat0) * pi/180`
/// with `R` the mean Earth radius. Valid for extents well under 50 km.
pub fn project_to_local(p: GeoPoint, origin: GeoPoint) -> Result<PlanarPoint> {
    p.validate()?;
    origin.validate()?;
    let x = EARTH_RADIUS_M * (p.lon_deg - origin.lon_deg).to_radians() * origin.lat_deg.to_radians().cos();
    let y = EARTH_RADIUS_M * (p.lat_deg - origin.lat_deg).to_radians();
    Ok(PlanarPoint::new(x, y))
}

/// Inverse of [`project_to_local`]: planar meters back to degrees.
pub fn local_to_geo(p: PlanarPoint, origin: GeoPoint) -> Result<GeoPoint> {
    origin.validate()?;
    let cos_lat0 = origin.lat_deg.to_radians().cos();
    if cos_lat0.abs() < 1e-12 {
        return Err(Error::InvalidInput(
            "projection origin at a pole is not supported".into(),
        ));
    }
    let lat = origin.lat_deg + (p.y / EARTH_RADIUS_M).to_degrees();
    let lon = origin.lon_deg + (p.x / (EARTH_RADIUS_M * cos_lat0)).to_degrees();
    Ok(GeoPoint::new(lat, lon))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_at_origin() {
        let o = GeoPoint::new(31.2, 29.9);
        let p = project_to_local(o, o).unwrap();
        assert_eq!(p.x, 0.0);
        assert_eq!(p.y, 0.0);
    }

    #[test]
    fn one_millidegree_north_is_111m() {
        // R * 0.001 * pi/180 = 111.19492664455874 m
        let o = GeoPoint::new(0.0, 0.0);
        let p = project_to_local(GeoPoint::new(0.001, 0.0), o).unwrap();
        assert!((p.y - 111.19).abs() < 0.01, "y = {}", p.y);
        assert!(p.x.abs() < 1e-9);
    }

    #[test]
    fn one_millidegree_east_is_111m_at_equator() {
        let o = GeoPoint::new(0.0, 0.0);
        let p = project_to_local(GeoPoint::new(0.0, 0.001), o).unwrap();
        assert!((p.x - 111.19).abs() < 0.01, "x = {}", p.x);
        assert!(p.y.abs() < 1e-9);
    }

    #[test]
    fn rejects_out_of_range_coordinates() {
        let o = GeoPoint::new(0.0, 0.0);
        assert!(project_to_local(GeoPoint::new(91.0, 0.0), o).is_err());
        assert!(project_to_local(GeoPoint::new(0.0, 181.0), o).is_err());
        assert!(project_to_local(GeoPoint::new(f64::NAN, 0.0), o).is_err());
    }

    proptest! {
        // Round trip within 1e-9 degrees for points within ~50 km of the origin.
        #[test]
        fn round_trip_within_50km(
            lat0 in -60.0f64..60.0,
            lon0 in -179.0f64..179.0,
            dx in -25_000.0f64..25_000.0,
            dy in -25_000.0f64..25_000.0,
        ) {
            let origin = GeoPoint::new(lat0, lon0);
            let geo = local_to_geo(PlanarPoint::new(dx, dy), origin).unwrap();
            let back = project_to_local(geo, origin).unwrap();
            let geo2 = local_to_geo(back, origin).unwrap();
            prop_assert!((geo.lat_deg - geo2.lat_deg).abs() < 1e-9);
            prop_assert!((geo.lon_deg - geo2.lon_deg).abs() < 1e-9);
        }
    }
}
