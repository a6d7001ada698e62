//! Scene data model, validation and the JSON scene file format.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `sum(p) == 1` for interaction distributions.
pub const SIMPLEX_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Left,
    Right,
    Unknown,
}

impl Orientation {
    pub fn mirrored(self) -> Self {
        match self {
            Orientation::Left => Orientation::Right,
            Orientation::Right => Orientation::Left,
            Orientation::Unknown => Orientation::Unknown,
        }
    }
}

/// Axis-aligned box in pixel coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundingBox {
    pub x_min: f64,
    pub y_min: f64,
    pub x_max: f64,
    pub y_max: f64,
}

impl BoundingBox {
    pub fn new(x_min: f64, y_min: f64, x_max: f64, y_max: f64) -> Self {
        Self {
            x_min,
            y_min,
            x_max,
            y_max,
        }
    }

    pub fn center(&self) -> (f64, f64) {
        (
            (self.x_min + self.x_max) / 2.0,
            (self.y_min + self.y_max) / 2.0,
        )
    }

    fn is_well_formed(&self) -> bool {
        [self.x_min, self.y_min, self.x_max, self.y_max]
            .iter()
            .all(|v| v.is_finite())
            && self.x_min < self.x_max
            && self.y_min < self.y_max
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PedestrianObservation {
    pub id: String,
    /// One box per observed frame, oldest first.
    pub boxes: Vec<BoundingBox>,
    pub orientation: Orientation,
    /// Supplied crossing probability.
    pub unary_prob: f64,
}

/// Unordered pair of pedestrian ids, stored with the smaller id first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairKey(String, String);

impl PairKey {
    pub fn new(a: impl Into<String>, b: impl Into<String>) -> Self {
        let (a, b) = (a.into(), b.into());
        if a <= b {
            PairKey(a, b)
        } else {
            PairKey(b, a)
        }
    }

    pub fn first(&self) -> &str {
        &self.0
    }

    pub fn second(&self) -> &str {
        &self.1
    }
}

impl fmt::Display for PairKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

/// One observation window: tracked pedestrians plus every probability the
/// upstream models supplied for them.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Scene {
    pub pedestrians: Vec<PedestrianObservation>,
    /// Ego-vehicle speed per frame in m/s. Metadata only; no potential uses it.
    pub ego_speed: Option<Vec<f64>>,
    pub pp_probs: BTreeMap<PairKey, [f64; 3]>,
    pub pe_probs: BTreeMap<String, f64>,
    pub ground_truth: Option<BTreeMap<String, u8>>,
}

impl Scene {
    pub fn len(&self) -> usize {
        self.pedestrians.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pedestrians.is_empty()
    }

    pub fn pair_probs(&self, a: &str, b: &str) -> Option<&[f64; 3]> {
        self.pp_probs.get(&PairKey::new(a, b))
    }

    pub fn pedestrian(&self, id: &str) -> Option<&PedestrianObservation> {
        self.pedestrians.iter().find(|p| p.id == id)
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum Violation {
    #[error("scene has no pedestrians")]
    NoPedestrians,
    #[error("pedestrian id {0} appears more than once")]
    DuplicateId(String),
    #[error("pedestrian {0} has no bounding boxes")]
    EmptyBoxes(String),
    #[error("pedestrian {id} frame {frame}: box is degenerate or non-finite")]
    DegenerateBox { id: String, frame: usize },
    #[error("pedestrian {id} has {found} boxes, expected {expected}")]
    SequenceLength {
        id: String,
        expected: usize,
        found: usize,
    },
    #[error("pedestrian {id}: unary probability {value} outside [0, 1]")]
    UnaryOutOfRange { id: String, value: f64 },
    #[error("ego speed has {found} samples, expected {expected}")]
    EgoSpeedLength { expected: usize, found: usize },
    #[error("pair {pair}: {probs:?} is not a probability distribution")]
    NotSimplex { pair: PairKey, probs: [f64; 3] },
    #[error("pair {0} joins a pedestrian to itself")]
    SelfPair(PairKey),
    #[error("pedestrian {id}: environment probability {value} outside [0, 1]")]
    EnvOutOfRange { id: String, value: f64 },
    #[error("{field} references unknown pedestrian {id}")]
    DanglingReference { field: &'static str, id: String },
    #[error("pedestrian {id}: ground-truth label {value} is not 0 or 1")]
    BadGroundTruth { id: String, value: u8 },
}

/// Every invariant violation found in a scene. Empty means valid.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("no violations");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

fn in_unit_interval(p: f64) -> bool {
    (0.0..=1.0).contains(&p)
}

pub(crate) fn is_simplex(probs: &[f64; 3]) -> bool {
    probs.iter().all(|p| p.is_finite() && *p >= 0.0)
        && (probs.iter().sum::<f64>() - 1.0).abs() <= SIMPLEX_TOLERANCE
}

pub fn validate_scene(scene: &Scene) -> ValidationReport {
    let mut violations = Vec::new();

    if scene.pedestrians.is_empty() {
        violations.push(Violation::NoPedestrians);
    }

    let mut ids = BTreeSet::new();
    for ped in &scene.pedestrians {
        if !ids.insert(ped.id.as_str()) {
            violations.push(Violation::DuplicateId(ped.id.clone()));
        }
    }

    let frames = scene.pedestrians.first().map(|p| p.boxes.len());
    for ped in &scene.pedestrians {
        if ped.boxes.is_empty() {
            violations.push(Violation::EmptyBoxes(ped.id.clone()));
        } else if let Some(expected) = frames.filter(|&l| l != ped.boxes.len()) {
            violations.push(Violation::SequenceLength {
                id: ped.id.clone(),
                expected,
                found: ped.boxes.len(),
            });
        }
        for (frame, b) in ped.boxes.iter().enumerate() {
            if !b.is_well_formed() {
                violations.push(Violation::DegenerateBox {
                    id: ped.id.clone(),
                    frame,
                });
            }
        }
        if !in_unit_interval(ped.unary_prob) {
            violations.push(Violation::UnaryOutOfRange {
                id: ped.id.clone(),
                value: ped.unary_prob,
            });
        }
    }

    if let (Some(speed), Some(expected)) = (&scene.ego_speed, frames) {
        if speed.len() != expected {
            violations.push(Violation::EgoSpeedLength {
                expected,
                found: speed.len(),
            });
        }
    }

    let check_ref = |field: &'static str, id: &str, out: &mut Vec<Violation>| {
        if !ids.contains(id) {
            out.push(Violation::DanglingReference {
                field,
                id: id.to_string(),
            });
        }
    };

    for (pair, probs) in &scene.pp_probs {
        if pair.first() == pair.second() {
            violations.push(Violation::SelfPair(pair.clone()));
        }
        if !is_simplex(probs) {
            violations.push(Violation::NotSimplex {
                pair: pair.clone(),
                probs: *probs,
            });
        }
        check_ref("pp_probs", pair.first(), &mut violations);
        if pair.second() != pair.first() {
            check_ref("pp_probs", pair.second(), &mut violations);
        }
    }

    for (id, &value) in &scene.pe_probs {
        if !in_unit_interval(value) {
            violations.push(Violation::EnvOutOfRange {
                id: id.clone(),
                value,
            });
        }
        check_ref("pe_probs", id, &mut violations);
    }

    if let Some(gt) = &scene.ground_truth {
        for (id, &value) in gt {
            if value > 1 {
                violations.push(Violation::BadGroundTruth {
                    id: id.clone(),
                    value,
                });
            }
            check_ref("ground_truth", id, &mut violations);
        }
    }

    ValidationReport { violations }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum OrientationRecord {
    Left,
    Right,
    Unknown,
}

#[derive(Debug, Serialize, Deserialize)]
struct PedestrianRecord {
    id: String,
    boxes: Vec<[f64; 4]>,
    #[serde(default)]
    orientation: Option<OrientationRecord>,
    unary_prob: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct PairRecord {
    a: String,
    b: String,
    probs: [f64; 3],
}

#[derive(Debug, Serialize, Deserialize)]
struct SceneRecord {
    pedestrians: Vec<PedestrianRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ego_speed: Option<Vec<f64>>,
    pp_probs: Vec<PairRecord>,
    pe_probs: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ground_truth: Option<BTreeMap<String, u8>>,
}

impl From<&Scene> for SceneRecord {
    fn from(scene: &Scene) -> Self {
        SceneRecord {
            pedestrians: scene
                .pedestrians
                .iter()
                .map(|p| PedestrianRecord {
                    id: p.id.clone(),
                    boxes: p
                        .boxes
                        .iter()
                        .map(|b| [b.x_min, b.y_min, b.x_max, b.y_max])
                        .collect(),
                    orientation: match p.orientation {
                        Orientation::Left => Some(OrientationRecord::Left),
                        Orientation::Right => Some(OrientationRecord::Right),
                        Orientation::Unknown => None,
                    },
                    unary_prob: p.unary_prob,
                })
                .collect(),
            ego_speed: scene.ego_speed.clone(),
            pp_probs: scene
                .pp_probs
                .iter()
                .map(|(k, v)| PairRecord {
                    a: k.first().to_string(),
                    b: k.second().to_string(),
                    probs: *v,
                })
                .collect(),
            pe_probs: scene.pe_probs.clone(),
            ground_truth: scene.ground_truth.clone(),
        }
    }
}

impl TryFrom<SceneRecord> for Scene {
    type Error = Error;

    fn try_from(record: SceneRecord) -> Result<Self> {
        let mut pp_probs = BTreeMap::new();
        for pair in record.pp_probs {
            let key = PairKey::new(pair.a, pair.b);
            if pp_probs.insert(key.clone(), pair.probs).is_some() {
                return Err(Error::Parse(format!("pair {key} listed more than once")));
            }
        }
        Ok(Scene {
            pedestrians: record
                .pedestrians
                .into_iter()
                .map(|p| PedestrianObservation {
                    id: p.id,
                    boxes: p
                        .boxes
                        .into_iter()
                        .map(|[x0, y0, x1, y1]| BoundingBox::new(x0, y0, x1, y1))
                        .collect(),
                    orientation: match p.orientation {
                        Some(OrientationRecord::Left) => Orientation::Left,
                        Some(OrientationRecord::Right) => Orientation::Right,
                        Some(OrientationRecord::Unknown) | None => Orientation::Unknown,
                    },
                    unary_prob: p.unary_prob,
                })
                .collect(),
            ego_speed: record.ego_speed,
            pp_probs,
            pe_probs: record.pe_probs,
            ground_truth: record.ground_truth,
        })
    }
}

/// Parses and validates a scene document.
pub fn scene_from_json(text: &str) -> Result<Scene> {
    let record: SceneRecord = serde_json::from_str(text).map_err(|e| {
        let msg = e.to_string();
        if msg.starts_with("missing field") {
            Error::MissingField(msg)
        } else {
            Error::Parse(msg)
        }
    })?;
    let scene = Scene::try_from(record)?;
    let report = validate_scene(&scene);
    if !report.is_valid() {
        return Err(Error::Validation(report));
    }
    Ok(scene)
}

pub fn scene_to_json(scene: &Scene) -> String {
    serde_json::to_string_pretty(&SceneRecord::from(scene)).expect("scene records always serialize")
}

pub fn load_scene(path: impl AsRef<Path>) -> Result<Scene> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    scene_from_json(&text)
}

pub fn save_scene(scene: &Scene, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut text = scene_to_json(scene);
    text.push('\n');
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Named weight regimes. The `*-infer` presets are used at inference time, the
/// `*-train` presets when scoring ground truth.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightPreset {
    JaadInfer,
    PieInfer,
    JaadTrain,
    PieTrain,
}

impl WeightPreset {
    pub const ALL: [WeightPreset; 4] = [
        WeightPreset::JaadInfer,
        WeightPreset::PieInfer,
        WeightPreset::JaadTrain,
        WeightPreset::PieTrain,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WeightPreset::JaadInfer => "jaad-infer",
            WeightPreset::PieInfer => "pie-infer",
            WeightPreset::JaadTrain => "jaad-train",
            WeightPreset::PieTrain => "pie-train",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }
}

/// Weights of the base energy (`alpha`, `beta`, `gamma`) and of the
/// inference-time consistency penalties (`lambda1`, `lambda2`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyWeights {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub lambda1: f64,
    pub lambda2: f64,
}

impl Default for EnergyWeights {
    fn default() -> Self {
        Self::preset(WeightPreset::JaadInfer)
    }
}

impl EnergyWeights {
    pub const DEFAULT_LAMBDA1: f64 = 0.5;
    pub const DEFAULT_LAMBDA2: f64 = 0.3;

    pub fn new(alpha: f64, beta: f64, gamma: f64, lambda1: f64, lambda2: f64) -> Result<Self> {
        let w = Self {
            alpha,
            beta,
            gamma,
            lambda1,
            lambda2,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn preset(preset: WeightPreset) -> Self {
        let (alpha, beta, gamma) = match preset {
            WeightPreset::JaadInfer => (5.3, 0.7, 2.5),
            WeightPreset::PieInfer => (2.5, 1.6, 1.2),
            WeightPreset::JaadTrain => (5.0, 0.5, 2.5),
            WeightPreset::PieTrain => (2.0, 1.5, 1.0),
        };
        Self {
            alpha,
            beta,
            gamma,
            lambda1: Self::DEFAULT_LAMBDA1,
            lambda2: Self::DEFAULT_LAMBDA2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.alpha, self.beta, self.gamma, self.lambda1, self.lambda2];
        if all.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::Config(format!(
                "energy weights must be finite and non-negative, got {self:?}"
            )));
        }
        if self.alpha <= 0.0 {
            return Err(Error::Config("alpha must be strictly positive".into()));
        }
        Ok(())
    }

    /// All five weights multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            alpha: self.alpha * c,
            beta: self.beta * c,
            gamma: self.gamma * c,
            lambda1: self.lambda1 * c,
            lambda2: self.lambda2 * c,
        }
    }
}

/// Binary intention per pedestrian, aligned with the scene's pedestrian order.
/// 1 = crossing, 0 = not crossing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelConfiguration(Vec<u8>);

impl LabelConfiguration {
    pub fn new(labels: Vec<u8>) -> Result<Self> {
        if let Some(bad) = labels.iter().find(|&&y| y > 1) {
            return Err(Error::Config(format!("label {bad} is not 0 or 1")));
        }
        Ok(Self(labels))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    /// The `index`-th configuration in lexicographic order over `{0,1}^n`
    /// (pedestrian 0 is the most significant position).
    pub fn from_index(n: usize, index: u64) -> Self {
        Self(
            (0..n)
                .map(|i| ((index >> (n - 1 - i)) & 1) as u8)
                .collect(),
        )
    }

    pub fn index(&self) -> u64 {
        self.0.iter().fold(0, |acc, &y| (acc << 1) | y as u64)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] ^= 1;
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.0.iter().copied()
    }
}

impl fmt::Display for LabelConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, y) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{y}")?;
        }
        f.write_str(")")
    }
}
