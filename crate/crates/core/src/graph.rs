//! Pedestrian–environment graph construction.
//!
//! Pedestrians are split into a left-facing and a right-facing cluster. Inside
//! a cluster two pedestrians are linked when their distance is below
//! `delta_d`; the two clusters are joined by a single edge between their
//! closest members. If any pedestrian's orientation is unknown the whole
//! scene falls back to plain thresholding. The environment node is linked to
//! every pedestrian.

use crate::error::{Error, Result};
use crate::scene::{Orientation, PedestrianObservation, Scene};

/// Which frame's box centers define the pedestrian distance.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DistanceFrame {
    #[default]
    LastFrame,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GraphConfig {
    /// Distance threshold in pixels.
    pub delta_d: f64,
    pub distance_frame: DistanceFrame,
}

impl Default for GraphConfig {
    fn default() -> Self {
        Self {
            delta_d: 50.0,
            distance_frame: DistanceFrame::LastFrame,
        }
    }
}

impl GraphConfig {
    pub fn with_delta_d(delta_d: f64) -> Result<Self> {
        if !(delta_d.is_finite() && delta_d > 0.0) {
            return Err(Error::Config(format!("delta_d must be positive, got {delta_d}")));
        }
        Ok(Self {
            delta_d,
            ..Self::default()
        })
    }
}

/// The shared, label-free environment node.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnvironmentNode;

#[derive(Clone, Debug, PartialEq)]
pub struct SceneGraph {
    /// Pedestrian ids in scene order; label vectors index into this.
    pub ped_nodes: Vec<String>,
    pub env_node: EnvironmentNode,
    /// Pedestrian–pedestrian edges as `(i, j)` node indices with `i < j`, sorted.
    pub pp_edges: Vec<(usize, usize)>,
    /// Pedestrian endpoints of pedestrian–environment edges.
    pub pe_edges: Vec<usize>,
}

impl SceneGraph {
    pub fn len(&self) -> usize {
        self.ped_nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ped_nodes.is_empty()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        let key = (i.min(j), i.max(j));
        self.pp_edges.binary_search(&key).is_ok()
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.pp_edges
            .iter()
            .map(|&(i, j)| (self.ped_nodes[i].as_str(), self.ped_nodes[j].as_str()))
    }
}

pub fn pedestrian_center(obs: &PedestrianObservation, frame_index: usize) -> Result<(f64, f64)> {
    obs.boxes
        .get(frame_index)
        .map(|b| b.center())
        .ok_or(Error::FrameOutOfRange {
            index: frame_index,
            len: obs.boxes.len(),
        })
}

/// Euclidean distance between the two pedestrians' box centers.
pub fn pairwise_distance(
    a: &PedestrianObservation,
    b: &PedestrianObservation,
    cfg: &GraphConfig,
) -> Result<f64> {
    if a.boxes.len() != b.boxes.len() {
        return Err(Error::SequenceLengthMismatch(a.boxes.len(), b.boxes.len()));
    }
    let frame = match cfg.distance_frame {
        DistanceFrame::LastFrame => a.boxes.len().checked_sub(1).ok_or(Error::FrameOutOfRange {
            index: 0,
            len: 0,
        })?,
    };
    let (ax, ay) = pedestrian_center(a, frame)?;
    let (bx, by) = pedestrian_center(b, frame)?;
    Ok((ax - bx).hypot(ay - by))
}

/// Distance, sorted id pair and node indices of a cross-cluster pair.
type CrossCandidate<'a> = (f64, (&'a str, &'a str), (usize, usize));

/// Links same-orientation pedestrians closer than `delta_d` and joins the two
/// orientation clusters through their closest pair. If any orientation is
/// unknown, every pair closer than `delta_d` is linked instead.
pub fn build_graph(scene: &Scene, cfg: &GraphConfig) -> Result<SceneGraph> {
    let peds = &scene.pedestrians;
    let n = peds.len();

    let mut dist = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = pairwise_distance(&peds[i], &peds[j], cfg)?;
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }

    let clustered = peds.iter().all(|p| p.orientation != Orientation::Unknown);
    let mut pp_edges = Vec::new();

    for i in 0..n {
        for j in i + 1..n {
            let same_side = !clustered || peds[i].orientation == peds[j].orientation;
            if same_side && dist[i][j] < cfg.delta_d {
                pp_edges.push((i, j));
            }
        }
    }

    if clustered {
        // Closest cross-cluster pair, ties broken on the sorted id pair.
        let mut best: Option<CrossCandidate<'_>> = None;
        for i in 0..n {
            for j in i + 1..n {
                if peds[i].orientation == peds[j].orientation {
                    continue;
                }
                let (a, b) = (peds[i].id.as_str(), peds[j].id.as_str());
                let ids = if a <= b { (a, b) } else { (b, a) };
                let candidate = (dist[i][j], ids, (i, j));
                let better = match &best {
                    None => true,
                    Some((d, best_ids, _)) => {
                        candidate.0 < *d || (candidate.0 == *d && ids < *best_ids)
                    }
                };
                if better {
                    best = Some(candidate);
                }
            }
        }
        if let Some((_, _, edge)) = best {
            pp_edges.push(edge);
        }
    }

    pp_edges.sort_unstable();
    pp_edges.dedup();

    Ok(SceneGraph {
        ped_nodes: peds.iter().map(|p| p.id.clone()).collect(),
        env_node: EnvironmentNode,
        pp_edges,
        pe_edges: (0..n).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::BoundingBox;

    fn at(id: &str, cx: f64, cy: f64, orientation: Orientation) -> PedestrianObservation {
        PedestrianObservation {
            id: id.into(),
            boxes: vec![
                BoundingBox::new(0.0, 0.0, 1.0, 1.0),
                BoundingBox::new(cx - 10.0, cy - 20.0, cx + 10.0, cy + 20.0),
            ],
            orientation,
            unary_prob: 0.5,
        }
    }

    fn scene(peds: Vec<PedestrianObservation>) -> Scene {
        Scene {
            pedestrians: peds,
            ..Default::default()
        }
    }

    #[test]
    fn centers() {
        let mut p = at("a", 0.0, 0.0, Orientation::Left);
        p.boxes = vec![BoundingBox::new(0.0, 0.0, 10.0, 20.0)];
        assert_eq!(pedestrian_center(&p, 0).unwrap(), (5.0, 10.0));
        p.boxes = vec![BoundingBox::new(100.0, 50.0, 140.0, 150.0)];
        assert_eq!(pedestrian_center(&p, 0).unwrap(), (120.0, 100.0));
        assert!(matches!(
            pedestrian_center(&p, 1),
            Err(Error::FrameOutOfRange { index: 1, len: 1 })
        ));
    }

    #[test]
    fn distances() {
        let cfg = GraphConfig::default();
        let a = at("a", 0.0, 0.0, Orientation::Left);
        let b = at("b", 3.0, 4.0, Orientation::Left);
        assert_eq!(pairwise_distance(&a, &b, &cfg).unwrap(), 5.0);
        assert_eq!(pairwise_distance(&a, &a, &cfg).unwrap(), 0.0);
        let c = at("c", 10.0, 0.0, Orientation::Left);
        let d = at("d", 70.0, 0.0, Orientation::Left);
        assert_eq!(pairwise_distance(&c, &d, &cfg).unwrap(), 60.0);
        assert_eq!(pairwise_distance(&d, &c, &cfg).unwrap(), 60.0);

        let mut short = at("e", 0.0, 0.0, Orientation::Left);
        short.boxes.pop();
        assert!(matches!(
            pairwise_distance(&a, &short, &cfg),
            Err(Error::SequenceLengthMismatch(2, 1))
        ));
    }

    #[test]
    fn same_cluster_pair_within_threshold() {
        let s = scene(vec![
            at("a", 100.0, 100.0, Orientation::Left),
            at("b", 130.0, 100.0, Orientation::Left),
        ]);
        let g = build_graph(&s, &GraphConfig::default()).unwrap();
        assert_eq!(g.pp_edges, vec![(0, 1)]);
        assert_eq!(g.pe_edges, vec![0, 1]);
    }

    #[test]
    fn single_pedestrian() {
        let s = scene(vec![at("a", 100.0, 100.0, Orientation::Right)]);
        let g = build_graph(&s, &GraphConfig::default()).unwrap();
        assert!(g.pp_edges.is_empty());
        assert_eq!(g.pe_edges, vec![0]);
    }

    #[test]
    fn far_clusters_still_get_one_link() {
        let s = scene(vec![
            at("l1", 0.0, 0.0, Orientation::Left),
            at("l2", 200.0, 0.0, Orientation::Left),
            at("r1", 500.0, 0.0, Orientation::Right),
        ]);
        let g = build_graph(&s, &GraphConfig::default()).unwrap();
        assert_eq!(g.pp_edges, vec![(1, 2)]);
    }

    #[test]
    fn cross_cluster_tie_uses_id_order() {
        let s = scene(vec![
            at("z", 0.0, 0.0, Orientation::Left),
            at("m", 200.0, 0.0, Orientation::Right),
            at("b", 400.0, 0.0, Orientation::Left),
        ]);
        let g = build_graph(&s, &GraphConfig::default()).unwrap();
        // (b, m) sorts before (m, z)
        assert_eq!(g.pp_edges, vec![(1, 2)]);
    }

    #[test]
    fn unknown_orientation_switches_whole_scene_to_threshold_mode() {
        let s = scene(vec![
            at("a", 0.0, 0.0, Orientation::Left),
            at("b", 30.0, 0.0, Orientation::Right),
            at("c", 400.0, 0.0, Orientation::Unknown),
        ]);
        let g = build_graph(&s, &GraphConfig::default()).unwrap();
        assert_eq!(g.pp_edges, vec![(0, 1)]);
    }

    #[test]
    fn one_empty_cluster_means_no_link() {
        let s = scene(vec![
            at("a", 0.0, 0.0, Orientation::Right),
            at("b", 300.0, 0.0, Orientation::Right),
        ]);
        let g = build_graph(&s, &GraphConfig::default()).unwrap();
        assert!(g.pp_edges.is_empty());
    }

    #[test]
    fn threshold_is_strict() {
        let s = scene(vec![
            at("a", 0.0, 0.0, Orientation::Unknown),
            at("b", 50.0, 0.0, Orientation::Unknown),
        ]);
        assert!(build_graph(&s, &GraphConfig::default())
            .unwrap()
            .pp_edges
            .is_empty());
        assert!(GraphConfig::with_delta_d(0.0).is_err());
    }
}
