//! Files written by the command line tool: graph6 plus JSON sidecar, JSON
//! reports and run manifests.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::CliError;
use crate::constructions::UnitalKind;
use crate::gf::{Elem, Field};
use crate::graphcore::{decode_graph6, encode_graph6, Graph, SrgParams};
use crate::projgeom::Space;
use crate::switching::SwitchingConfig;

pub const SIDECAR_SCHEMA: &str = "hermsrg.graph.v1";
pub const MANIFEST_SCHEMA: &str = "hermsrg.manifest.v1";

/// GF(q^2) as `GF(p)[x] / (modulus)`. Elements are addressed by table
/// index: 0 is zero and `k` is `x^(k-1)`; `codes[k]` is the base-`p`
/// encoding of that polynomial (constant term lowest).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldInfo {
    pub p: u32,
    pub degree: u32,
    /// low coefficients `c_0..c_{m-1}` of the monic modulus
    pub modulus: Vec<u32>,
    pub codes: Vec<u32>,
}

impl FieldInfo {
    pub fn of(f: &Field) -> FieldInfo {
        FieldInfo {
            p: f.characteristic(),
            degree: f.degree(),
            modulus: f.modulus().to_vec(),
            codes: f.elements().map(|x| f.code(x)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwitchInfo {
    pub config: SwitchingConfig,
    /// sizes of A, A1, A2, D
    pub sizes: BTreeMap<String, usize>,
    /// a triangle `u, u1, u2` whose common neighbourhood changes value under
    /// the switch, as vertex indices
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triple: Option<[usize; 3]>,
}

/// Metadata the graph6 file cannot carry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sidecar {
    pub schema: String,
    pub kind: String,
    pub n: usize,
    pub q: u32,
    pub vertices: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<SrgParams>,
    pub field: FieldInfo,
    /// projective coordinates of each vertex, as field table indices
    pub vertex_points: Vec<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unital: Option<UnitalKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub switching: Option<SwitchInfo>,
}

impl Sidecar {
    pub fn new(kind: &str, space: &Space, g: &Graph) -> Sidecar {
        let vertex_points = match g.labels() {
            Some(labels) => labels.iter().map(|&p| space.point(p as usize).iter().map(|e: &Elem| e.0).collect()).collect(),
            None => Vec::new(),
        };
        Sidecar {
            schema: SIDECAR_SCHEMA.into(),
            kind: kind.into(),
            n: space.n(),
            q: space.q(),
            vertices: g.n(),
            params: None,
            field: FieldInfo::of(space.field()),
            vertex_points,
            unital: None,
            switching: None,
        }
    }
}

/// `<graph>.json` next to `<graph>.g6`.
pub fn sidecar_path(graph: &Path) -> PathBuf {
    graph.with_extension("json")
}

pub fn read_graph(path: &Path) -> Result<Graph, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Load(format!("{}: {e}", path.display())))?;
    decode_graph6(&bytes).map_err(|e| CliError::Load(format!("{}: {e}", path.display())))
}

pub fn read_sidecar(graph: &Path) -> Option<Sidecar> {
    let text = fs::read_to_string(sidecar_path(graph)).ok()?;
    serde_json::from_str(&text).ok()
}

pub fn write_graph(path: &Path, g: &Graph) -> Result<(), CliError> {
    let mut bytes = encode_graph6(g);
    bytes.push(b'\n');
    write_bytes(path, &bytes)
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    write_bytes(path, to_json(value).as_bytes())
}

pub fn to_json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn sha256_file(path: &Path) -> Result<String, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputHash {
    pub path: PathBuf,
    pub sha256: String,
}

/// Everything needed to re-run a command and check its outputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema: String,
    pub tool: String,
    pub version: String,
    /// arguments after the program name
    pub command: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub geometry: serde_json::Value,
    pub outputs: Vec<OutputHash>,
    pub timings_ms: BTreeMap<String, u64>,
    pub exit_code: i32,
}

/// `<first output>.manifest.json`.
pub fn manifest_path(first_output: &Path) -> PathBuf {
    let mut s = first_output.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}
