use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::simplicial::SimplicialComplex;
use super::stratified::{build_stratified, FrontierPair, StratifiedComplex};
use crate::error::{Error, Result};
use crate::linalg::FGAbelianGroup;

/// JSON form of a stratified complex. `simplices` may list facets only;
/// filtration levels must list face-closed sets of simplices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceInput {
    pub vertices: usize,
    pub simplices: Vec<Vec<usize>>,
    #[serde(default)]
    pub filtration: BTreeMap<String, Vec<Vec<usize>>>,
    #[serde(default)]
    pub coefficients: BTreeMap<String, FGAbelianGroup>,
}

/// Canonical output: the input schema plus validation certificates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceOutput {
    pub vertices: usize,
    pub simplices: Vec<Vec<usize>>,
    pub filtration: BTreeMap<String, Vec<Vec<usize>>>,
    pub coefficients: BTreeMap<String, FGAbelianGroup>,
    pub f_vector: Vec<usize>,
    pub strata: BTreeMap<String, usize>,
    pub frontier: Vec<FrontierPair>,
    pub metadata: BTreeMap<String, String>,
}

fn bad(pointer: impl Into<String>, message: impl Into<String>) -> Error {
    Error::BadInput { pointer: pointer.into(), message: message.into() }
}

fn parse_level(key: &str, section: &str) -> Result<usize> {
    key.parse().map_err(|_| bad(format!("/{section}/{key}"), "level keys must be nonnegative integers"))
}

/// Parses JSON, reporting schema violations with a JSON pointer.
pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let pointer: String = e
            .path()
            .iter()
            .filter_map(|seg| match seg {
                serde_path_to_error::Segment::Seq { index } => Some(format!("/{index}")),
                serde_path_to_error::Segment::Map { key } => Some(format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
                serde_path_to_error::Segment::Enum { variant } => Some(format!("/{variant}")),
                serde_path_to_error::Segment::Unknown => None,
            })
            .collect();
        bad(pointer, e.into_inner().to_string())
    })
}

pub fn parse_space(json: &str) -> Result<StratifiedComplex> {
    let input: SpaceInput = parse_json(json)?;
    from_input(&input)
}

pub fn from_input(input: &SpaceInput) -> Result<StratifiedComplex> {
    for (i, s) in input.simplices.iter().enumerate() {
        if s.is_empty() {
            return Err(bad(format!("/simplices/{i}"), "empty simplex"));
        }
        if let Some(v) = s.iter().find(|v| **v >= input.vertices) {
            return Err(bad(format!("/simplices/{i}"), format!("vertex {v} out of range")));
        }
    }
    let complex = SimplicialComplex::from_facets(input.vertices, &input.simplices)?;
    let mut filtration = BTreeMap::new();
    for (key, list) in &input.filtration {
        let p = parse_level(key, "filtration")?;
        let mut set = BTreeSet::new();
        for (i, s) in list.iter().enumerate() {
            let mut s = s.clone();
            s.sort_unstable();
            let idx = complex.index_of(&s).ok_or_else(|| bad(format!("/filtration/{key}/{i}"), format!("{s:?} is not a simplex")))?;
            set.insert(idx);
        }
        filtration.insert(p, set);
    }
    let mut coefficients = BTreeMap::new();
    for (key, g) in &input.coefficients {
        let p = parse_level(key, "coefficients")?;
        if g.torsion.iter().any(|d| *d < 2) {
            return Err(bad(format!("/coefficients/{key}/torsion"), "torsion orders must be at least 2"));
        }
        coefficients.insert(p, FGAbelianGroup::new(g.free_rank, &g.torsion));
    }
    build_stratified(complex, &filtration, &coefficients)
}

pub fn to_output(s: &StratifiedComplex) -> SpaceOutput {
    let cx = s.complex();
    let filtration =
        s.levels().iter().map(|p| (p.to_string(), s.skeleton(*p).into_iter().map(|i| cx.simplex(i).to_vec()).collect())).collect();
    SpaceOutput {
        vertices: cx.vertex_count(),
        simplices: cx.simplices().to_vec(),
        filtration,
        coefficients: s.coefficients().iter().map(|(p, g)| (p.to_string(), g.clone())).collect(),
        f_vector: cx.f_vector(),
        strata: s.stratum_levels().into_iter().map(|p| (p.to_string(), s.stratum(p).len())).collect(),
        frontier: s.frontier_certificate().to_vec(),
        metadata: s.metadata.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_cone() {
        let json = r#"{"vertices":4,"simplices":[[0,1,3],[1,2,3],[0,2,3]],
            "filtration":{"0":[[3]],"2":[[0,1,3],[1,2,3],[0,2,3],[0,1],[1,2],[0,2],[0,3],[1,3],[2,3],[0],[1],[2],[3]]}}"#;
        let s = parse_space(json).unwrap();
        assert_eq!(s.stratum_levels(), vec![0, 2]);
        let out = to_output(&s);
        assert_eq!(out.f_vector, vec![4, 6, 3]);
        let again = SpaceInput {
            vertices: out.vertices,
            simplices: out.simplices.clone(),
            filtration: out.filtration.clone(),
            coefficients: out.coefficients.clone(),
        };
        assert_eq!(from_input(&again).unwrap(), s);
    }

    #[test]
    fn pointer_on_bad_vertex() {
        let r = parse_space(r#"{"vertices":2,"simplices":[[0,5]]}"#);
        assert!(matches!(r, Err(Error::BadInput { pointer, .. }) if pointer == "/simplices/0"));
    }
}
