//! JSON interchange formats.
//!
//! Polygons are `{"vertices": [[x, y], ...]}`, graphs `{"n", "edges"}`,
//! realizer inputs `{"n", "chords"}`, decompositions `{"root", "bags"}` and
//! independent sets `{"alpha", "witness"}`. Floats are written with
//! shortest round-trip formatting, so reading back is exact.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::decomposition::{Bag, TreeDecomposition};
use crate::error::{Error, Result};
use crate::geometry::{validate_convex_polygon, ConvexPolygon, IntersectionMode, Point, Tolerance};
use crate::graph::IntersectionGraph;
use crate::medial_axis::MedialAxis;
use crate::mis::MisResult;
use crate::realizer::{parse_outerplanar, OuterplanarInput};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonJson {
    pub vertices: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<IntersectionMode>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChordsJson {
    pub n: usize,
    pub chords: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub root: usize,
    pub bags: Vec<Bag>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MisJson {
    pub alpha: usize,
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisVertexJson {
    pub id: usize,
    pub center: [f64; 2],
    pub radius: f64,
    pub tangent_sides: Vec<usize>,
    pub leaf: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MedialAxisJson {
    pub vertices: Vec<AxisVertexJson>,
    /// `[a, b, side, side]`: an edge between vertices `a` and `b` on the
    /// bisector of the two sides.
    pub edges: Vec<[usize; 4]>,
}

fn parse<T: DeserializeOwned>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

impl From<&ConvexPolygon> for PolygonJson {
    fn from(p: &ConvexPolygon) -> Self {
        PolygonJson {
            vertices: p.vertices().iter().map(|v| [v.x, v.y]).collect(),
        }
    }
}

impl PolygonJson {
    pub fn to_polygon(&self, tol: Tolerance) -> Result<ConvexPolygon> {
        let pts: Vec<Point> = self.vertices.iter().map(|&[x, y]| Point::new(x, y)).collect();
        validate_convex_polygon(&pts, tol)
    }
}

pub fn polygon_to_json(p: &ConvexPolygon) -> String {
    to_json(&PolygonJson::from(p))
}

/// Parses and validates a polygon; clockwise input is reoriented.
pub fn polygon_from_json(s: &str, tol: Tolerance) -> Result<ConvexPolygon> {
    parse::<PolygonJson>(s)?.to_polygon(tol)
}

impl From<&IntersectionGraph> for GraphJson {
    fn from(g: &IntersectionGraph) -> Self {
        GraphJson {
            n: g.n(),
            edges: g.edges().iter().map(|&(a, b)| [a, b]).collect(),
            mode: Some(g.mode()),
        }
    }
}

impl GraphJson {
    pub fn to_graph(&self) -> Result<IntersectionGraph> {
        if let Some(e) = self.edges.iter().find(|e| e[0] >= self.n || e[1] >= self.n) {
            return Err(Error::Format(format!("edge {e:?} out of range 0..{}", self.n)));
        }
        Ok(IntersectionGraph::new(
            self.n,
            self.edges.iter().map(|e| (e[0], e[1])),
            self.mode.unwrap_or_default(),
        ))
    }
}

pub fn graph_to_json(g: &IntersectionGraph) -> String {
    to_json(&GraphJson::from(g))
}

pub fn graph_from_json(s: &str) -> Result<IntersectionGraph> {
    parse::<GraphJson>(s)?.to_graph()
}

pub fn outerplanar_from_json(s: &str) -> Result<OuterplanarInput> {
    let c: ChordsJson = parse(s)?;
    let chords: Vec<(usize, usize)> = c.chords.iter().map(|e| (e[0], e[1])).collect();
    parse_outerplanar(c.n, &chords)
}

pub fn outerplanar_to_json(g: &OuterplanarInput) -> String {
    to_json(&ChordsJson {
        n: g.n(),
        chords: g.chords().iter().map(|&(a, b)| [a, b]).collect(),
    })
}

pub fn decomposition_to_json(td: &TreeDecomposition) -> String {
    to_json(&DecompositionJson {
        root: td.root(),
        bags: td.bags().to_vec(),
    })
}

pub fn decomposition_from_json(s: &str) -> Result<TreeDecomposition> {
    let d: DecompositionJson = parse(s)?;
    let td = TreeDecomposition::from_bags(d.bags)?;
    if td.root() != d.root {
        return Err(Error::Format(format!(
            "root {} is not the parentless bag {}",
            d.root,
            td.root()
        )));
    }
    Ok(td)
}

pub fn mis_to_json(m: &MisResult) -> String {
    to_json(&MisJson {
        alpha: m.size,
        witness: m.witness.clone(),
    })
}

pub fn mis_from_json(s: &str) -> Result<MisResult> {
    let m: MisJson = parse(s)?;
    if m.alpha != m.witness.len() {
        return Err(Error::Format(format!(
            "alpha {} but witness has {} entries",
            m.alpha,
            m.witness.len()
        )));
    }
    Ok(MisResult {
        size: m.alpha,
        witness: m.witness,
    })
}

impl From<&MedialAxis> for MedialAxisJson {
    fn from(a: &MedialAxis) -> Self {
        let vertices = a
            .vertices()
            .iter()
            .enumerate()
            .map(|(id, v)| AxisVertexJson {
                id,
                center: [v.center.x, v.center.y],
                radius: v.inradius,
                tangent_sides: v.tangent_sides.clone(),
                leaf: a.is_leaf(id),
            })
            .collect();
        let edges = a.edges().iter().map(|e| [e.a, e.b, e.sides.0, e.sides.1]).collect();
        MedialAxisJson { vertices, edges }
    }
}

pub fn medial_axis_to_json(a: &MedialAxis) -> String {
    to_json(&MedialAxisJson::from(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::random_convex_polygon;
    use crate::decomposition::build_tree_decomposition;
    use crate::graph::graph_bruteforce;
    use crate::medial_axis::compute_medial_axis;

    #[test]
    fn polygon_round_trip_is_exact() {
        let tol = Tolerance::default();
        for seed in 0..20 {
            let p = random_convex_polygon(37, seed).unwrap();
            let back = polygon_from_json(&polygon_to_json(&p), tol).unwrap();
            assert_eq!(p, back);
        }
    }

    #[test]
    fn graph_decomposition_and_mis_round_trip() {
        let tol = Tolerance::default();
        let p = random_convex_polygon(25, 3).unwrap();
        let g = graph_bruteforce(&p, IntersectionMode::Open, tol);
        assert_eq!(graph_from_json(&graph_to_json(&g)).unwrap(), g);
        let td = build_tree_decomposition(&p, &compute_medial_axis(&p, tol), tol).unwrap();
        assert_eq!(decomposition_from_json(&decomposition_to_json(&td)).unwrap(), td);
        let m = MisResult {
            size: 2,
            witness: vec![0, 5],
        };
        assert_eq!(mis_from_json(&mis_to_json(&m)).unwrap(), m);
    }

    #[test]
    fn documented_shapes() {
        let p = polygon_from_json(r#"{"vertices": [[0,0],[1,0],[0,1]]}"#, Tolerance::default()).unwrap();
        assert_eq!(p.n(), 3);
        let g = graph_from_json(r#"{"n": 3, "edges": [[0,1],[1,2]]}"#).unwrap();
        assert_eq!(g.mode(), IntersectionMode::Closed);
        let td = decomposition_from_json(r#"{"root": 0, "bags": [{"id":0,"sides":[0,1,2],"parent":null}]}"#).unwrap();
        assert_eq!(td.len(), 1);
        let m = mis_to_json(&MisResult {
            size: 1,
            witness: vec![2],
        });
        assert!(m.contains("\"alpha\": 1"));
        let o = outerplanar_from_json(r#"{"n": 6, "chords": [[0,2],[0,4]]}"#).unwrap();
        assert_eq!(o.chords(), &[(0, 2), (0, 4)]);
    }

    #[test]
    fn malformed_inputs() {
        let tol = Tolerance::default();
        assert!(matches!(polygon_from_json("{", tol), Err(Error::Format(_))));
        assert!(matches!(
            polygon_from_json(r#"{"vertices": [[0,0],[1,0]]}"#, tol),
            Err(Error::TooFewVertices(2))
        ));
        assert!(matches!(
            graph_from_json(r#"{"n": 2, "edges": [[0,5]]}"#),
            Err(Error::Format(_))
        ));
        assert!(matches!(
            mis_from_json(r#"{"alpha": 2, "witness": [1]}"#),
            Err(Error::Format(_))
        ));
        assert!(matches!(
            decomposition_from_json(r#"{"root": 1, "bags": [{"id":0,"sides":[0],"parent":null}]}"#),
            Err(Error::Format(_))
        ));
    }
}
