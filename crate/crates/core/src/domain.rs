//! Core data types shared by the whole pipeline: provider measurement
//! records, GPS fixes, the tower registry, and feature-vector construction.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geo::PlanarPoint;

/// Opaque event tag attached to a provider record. The pipeline never
/// branches on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EventType(pub String);

/// One tower as seen in a provider record: id, radio network controller,
/// and the RSS measured on the control channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TowerObservation {
    pub tower_id: String,
    pub rnc: String,
    /// Received signal strength in dBm (negative in realistic data).
    pub rss_dbm: f64,
}

impl TowerObservation {
    pub fn new(tower_id: impl Into<String>, rnc: impl Into<String>, rss_dbm: f64) -> Self {
        Self {
            tower_id: tower_id.into(),
            rnc: rnc.into(),
            rss_dbm,
        }
    }
}

/// One event-based cellular measurement tuple recorded by the provider.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProviderRecord {
    pub event_type: EventType,
    /// Milliseconds since epoch, GMT.
    pub timestamp_ms: i64,
    pub phone_id: String,
    /// The most probable towers the phone is connected or may connect to.
    pub active_cells: Vec<TowerObservation>,
    /// Additional towers heard but not in the active set.
    pub neighbor_cells: Vec<TowerObservation>,
}

impl ProviderRecord {
    /// Check the documented invariants: non-empty active set, disjoint
    /// active/neighbor tower ids, non-negative timestamp, finite RSS.
    pub fn validate(&self) -> Result<()> {
        if self.active_cells.is_empty() {
            return Err(Error::InvalidInput(format!(
                "record for {} at {} has no active cells",
                self.phone_id, self.timestamp_ms
            )));
        }
        if self.timestamp_ms < 0 {
            return Err(Error::InvalidInput(format!(
                "record for {} has negative timestamp {}",
                self.phone_id, self.timestamp_ms
            )));
        }
        for obs in self.active_cells.iter().chain(&self.neighbor_cells) {
            if obs.tower_id.is_empty() {
                return Err(Error::InvalidInput("empty tower id".into()));
            }
            if !obs.rss_dbm.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "non-finite RSS for tower {}",
                    obs.tower_id
                )));
            }
        }
        Ok(())
    }
}

/// A ground-truth GPS sample from the trace collector, timestamp in GMT.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GpsFix {
    pub phone_id: String,
    /// Milliseconds since epoch, GMT (after clock-offset conversion).
    pub timestamp_ms: i64,
    pub lat_deg: f64,
    pub lon_deg: f64,
}

/// Ordered set of the `M` towers covering the area of interest; maps tower
/// ids to feature indices `0..M-1`. Serializes as the bare id list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "Vec<String>", try_from = "Vec<String>")]
pub struct TowerRegistry {
    ids: Vec<String>,
    index: HashMap<String, usize>,
}

impl From<TowerRegistry> for Vec<String> {
    fn from(r: TowerRegistry) -> Self {
        r.ids
    }
}

impl TryFrom<Vec<String>> for TowerRegistry {
    type Error = Error;

    fn try_from(ids: Vec<String>) -> Result<Self> {
        Self::from_ids(ids)
    }
}

impl TowerRegistry {
    /// Build from an ordered id list, dropping duplicates after their first
    /// occurrence.
    pub fn from_ids<I, S>(ids: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out = Self {
            ids: Vec::new(),
            index: HashMap::new(),
        };
        for id in ids {
            let id = id.into();
            if id.is_empty() {
                return Err(Error::InvalidInput("empty tower id in registry".into()));
            }
            out.insert(id);
        }
        if out.ids.is_empty() {
            return Err(Error::InvalidInput("registry must contain at least one tower".into()));
        }
        Ok(out)
    }

    /// Collect every tower id heard across `records`, in first-seen order
    /// (active cells before neighbors within a record).
    pub fn from_records<'a, I>(records: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a ProviderRecord>,
    {
        let mut out = Self {
            ids: Vec::new(),
            index: HashMap::new(),
        };
        for rec in records {
            for obs in rec.active_cells.iter().chain(&rec.neighbor_cells) {
                out.insert(obs.tower_id.clone());
            }
        }
        if out.ids.is_empty() {
            return Err(Error::InvalidInput("no towers heard in any record".into()));
        }
        Ok(out)
    }

    fn insert(&mut self, id: String) {
        if !self.index.contains_key(&id) {
            self.index.insert(id.clone(), self.ids.len());
            self.ids.push(id);
        }
    }

    /// Number of towers `M`.
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn index_of(&self, tower_id: &str) -> Option<usize> {
        self.index.get(tower_id).copied()
    }

    pub fn id_at(&self, index: usize) -> &str {
        &self.ids[index]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    /// Keep only the towers whose registry index is flagged in `keep`
    /// (preserving order). Used by the tower-density experiments.
    pub fn subset(&self, keep: &[bool]) -> Result<Self> {
        if keep.len() != self.ids.len() {
            return Err(Error::LengthMismatch {
                context: "registry subset mask",
                left: keep.len(),
                right: self.ids.len(),
            });
        }
        Self::from_ids(
            self.ids
                .iter()
                .zip(keep)
                .filter(|(_, &k)| k)
                .map(|(id, _)| id.clone()),
        )
    }

}

/// The model input for one scan: `M` RSS values plus `M` active-cell bits.
/// Unheard towers hold zero in both halves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    /// Raw RSS in dBm per registry slot; 0.0 marks an unheard tower.
    pub rss: Vec<f64>,
    /// 1.0 if the tower is in the active set, else 0.0.
    pub active: Vec<f64>,
}

impl FeatureVector {
    pub fn zeros(m: usize) -> Self {
        Self {
            rss: vec![0.0; m],
            active: vec![0.0; m],
        }
    }

    /// Number of towers `M` this vector covers.
    pub fn num_towers(&self) -> usize {
        self.rss.len()
    }

    /// Concatenate into the flat `2M` layout the network consumes:
    /// RSS block first, active bits second.
    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(2 * self.rss.len());
        out.extend_from_slice(&self.rss);
        out.extend_from_slice(&self.active);
        out
    }

    /// True when no registered tower was heard at all.
    pub fn is_blank(&self) -> bool {
        self.rss.iter().all(|&v| v == 0.0) && self.active.iter().all(|&v| v == 0.0)
    }
}

/// Counters reported by [`build_feature_vector`]; never an error.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FeatureBuildStats {
    /// Towers present in the record but absent from the registry.
    pub skipped: usize,
    /// Towers listed both as active and neighbor in one record.
    pub conflicts: usize,
}

/// Place a record's observations into registry slots.
///
/// Active cells set `rss` and bit 1; neighbor cells set `rss` with bit 0;
/// every unheard tower stays zero in both halves. A tower present in both
/// lists keeps its active entry (the stronger claim) and bumps the conflict
/// counter.
pub fn build_feature_vector(
    record: &ProviderRecord,
    registry: &TowerRegistry,
) -> (FeatureVector, FeatureBuildStats) {
    let mut fv = FeatureVector::zeros(registry.len());
    let mut stats = FeatureBuildStats::default();
    for obs in &record.active_cells {
        match registry.index_of(&obs.tower_id) {
            Some(j) => {
                fv.rss[j] = obs.rss_dbm;
                fv.active[j] = 1.0;
            }
            None => stats.skipped += 1,
        }
    }
    for obs in &record.neighbor_cells {
        match registry.index_of(&obs.tower_id) {
            Some(j) => {
                if fv.active[j] == 1.0 {
                    stats.conflicts += 1;
                } else {
                    fv.rss[j] = obs.rss_dbm;
                }
            }
            None => stats.skipped += 1,
        }
    }
    (fv, stats)
}

/// Where a labeled sample came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleSource {
    /// Joined to a GPS fix by the synchronizer.
    Synchronized,
    /// Synthesized by the spatial augmenter.
    Augmented,
}

/// A feature vector with its planar ground-truth location.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledSample {
    pub features: FeatureVector,
    pub location: PlanarPoint,
    pub source: SampleSource,
}

/// RSS normalization bounds. The model maps heard RSS to `[0, 1]` via
/// `(rss - min) / (max - min)` (clamped); unheard towers stay at 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RssBounds {
    pub min_dbm: f64,
    pub max_dbm: f64,
}

impl Default for RssBounds {
    fn default() -> Self {
        Self {
            min_dbm: -113.0,
            max_dbm: -40.0,
        }
    }
}

impl RssBounds {
    pub fn span(&self) -> f64 {
        self.max_dbm - self.min_dbm
    }

    /// Normalize one heard RSS value into `[0, 1]`.
    pub fn normalize(&self, rss_dbm: f64) -> f64 {
        ((rss_dbm - self.min_dbm) / self.span()).clamp(0.0, 1.0)
    }

    pub fn denormalize(&self, v: f64) -> f64 {
        self.min_dbm + v * self.span()
    }
}

/// Normalize a feature vector into the flat `2M` network input.
///
/// The raw-zero sentinel for unheard towers maps to 0 after normalization.
/// When `use_active_bits` is false the bit half is masked to zero (the
/// "RSS only" fingerprint models).
pub fn normalize_features(fv: &FeatureVector, bounds: RssBounds, use_active_bits: bool) -> Vec<f64> {
    let m = fv.num_towers();
    let mut out = vec![0.0; 2 * m];
    for j in 0..m {
        if fv.rss[j] != 0.0 {
            out[j] = bounds.normalize(fv.rss[j]);
        }
        if use_active_bits {
            out[m + j] = fv.active[j];
        }
    }
    out
}
