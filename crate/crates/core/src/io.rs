//! Mesh files: tetrahedra, edge lengths keyed `"min-max"`, optional orbit labeling.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::complex::QuotientLabeling;
use crate::suite::{GeneratedTriangulation, SmoothReference};
use crate::{CurvatureOptions, EdgeLengthMetric, Error, Result, SimplicialComplex3};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LabelingFile {
    pub vertex_orbit: Vec<usize>,
    pub edge_orbit: BTreeMap<String, usize>,
    #[serde(default)]
    pub deck: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshFile {
    pub vertices: usize,
    pub tets: Vec<[usize; 4]>,
    pub lengths: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labeling: Option<LabelingFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Smooth values per vertex and edge orbit, when the mesh samples a known metric.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<SmoothReference>,
    /// Dual scheme and edge-volume method the mesh was generated for.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<CurvatureOptions>,
}

pub fn edge_key(a: usize, b: usize) -> String {
    format!("{}-{}", a.min(b), a.max(b))
}

pub fn parse_edge_key(key: &str) -> Result<(usize, usize)> {
    let bad = || Error::Invalid(format!("edge key {key:?} is not \"i-j\" with i < j"));
    let (a, b) = key.split_once('-').ok_or_else(bad)?;
    let (a, b): (usize, usize) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
    if a >= b {
        return Err(bad());
    }
    Ok((a, b))
}

impl From<&QuotientLabeling> for LabelingFile {
    fn from(l: &QuotientLabeling) -> Self {
        LabelingFile {
            vertex_orbit: l.vertex_orbit.clone(),
            edge_orbit: l.edge_orbit.iter().map(|(&(a, b), &o)| (edge_key(a, b), o)).collect(),
            deck: l.deck.clone(),
        }
    }
}

impl TryFrom<&LabelingFile> for QuotientLabeling {
    type Error = Error;

    fn try_from(l: &LabelingFile) -> Result<Self> {
        let edge_orbit = l
            .edge_orbit
            .iter()
            .map(|(k, &o)| parse_edge_key(k).map(|p| (p, o)))
            .collect::<Result<_>>()?;
        Ok(QuotientLabeling { vertex_orbit: l.vertex_orbit.clone(), edge_orbit, deck: l.deck.clone() })
    }
}

/// A mesh read back from a file.
#[derive(Clone, Debug)]
pub struct LoadedMesh {
    pub complex: SimplicialComplex3,
    pub metric: EdgeLengthMetric,
    pub labeling: Option<QuotientLabeling>,
    pub name: Option<String>,
    pub reference: Option<SmoothReference>,
    pub options: Option<CurvatureOptions>,
}

impl MeshFile {
    pub fn new(c: &SimplicialComplex3, m: &EdgeLengthMetric, labeling: Option<&QuotientLabeling>) -> Self {
        MeshFile {
            vertices: c.n_vertices(),
            tets: c.tets().to_vec(),
            lengths: c.edges().iter().zip(m.lengths()).map(|(&[a, b], &l)| (edge_key(a, b), l)).collect(),
            labeling: labeling.map(LabelingFile::from),
            name: None,
            reference: None,
            options: None,
        }
    }

    pub fn from_generated(g: &GeneratedTriangulation) -> Self {
        MeshFile {
            name: Some(g.name.clone()),
            reference: Some(g.reference.clone()),
            options: Some(g.options),
            ..MeshFile::new(&g.complex, &g.metric, g.labeling.as_ref())
        }
    }

    /// Rebuilds and validates the complex and its metric.
    pub fn load(&self) -> Result<LoadedMesh> {
        let labeling = self.labeling.as_ref().map(QuotientLabeling::try_from).transpose()?;
        let complex = SimplicialComplex3::new(self.tets.clone(), labeling.as_ref())?;
        if complex.n_vertices() != self.vertices {
            return Err(Error::Invalid(format!(
                "mesh declares {} vertices but its tetrahedra use {}",
                self.vertices,
                complex.n_vertices()
            )));
        }
        for key in self.lengths.keys() {
            let (a, b) = parse_edge_key(key)?;
            if complex.edge_id(a, b).is_none() {
                return Err(Error::Invalid(format!("length given for {key}, which is not an edge")));
            }
        }
        let lengths = complex
            .edges()
            .iter()
            .map(|&[a, b]| {
                let key = edge_key(a, b);
                self.lengths.get(&key).copied().ok_or_else(|| Error::Invalid(format!("no length for edge {key}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let metric = EdgeLengthMetric::new(&complex, lengths)?;
        Ok(LoadedMesh {
            complex,
            metric,
            labeling,
            name: self.name.clone(),
            reference: self.reference.clone(),
            options: self.options,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }
}
