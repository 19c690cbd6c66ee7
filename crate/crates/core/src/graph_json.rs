//! JSON form of voltage graphs:
//!
//! ```json
//! {"p": 3,
//!  "vertices": [{"name": "v", "ramification": "unramified"},
//!               {"name": "w", "ramification": 0}],
//!  "edges": [{"id": "e1", "from": "v", "to": "v", "voltage": 2}]}
//! ```
//!
//! Voltages beyond 64 bits are written as decimal strings. Unknown keys are
//! rejected. Derived graphs are written in the same shape without voltages or
//! ramification.

use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graphs::{DerivedGraph, MultiGraph, Ramification, VoltageGraph};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub p: u64,
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<EdgeDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ramification: Option<RamificationDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub id: String,
    pub from: String,
    pub to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub voltage: Option<VoltageDoc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RamificationDoc(pub Ramification);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoltageDoc(pub BigInt);

impl Serialize for RamificationDoc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0 {
            Ramification::Unramified => s.serialize_str("unramified"),
            Ramification::Depth(d) => s.serialize_u32(d),
        }
    }
}

impl<'de> Deserialize<'de> for RamificationDoc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = RamificationDoc;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("\"unramified\" or a nonnegative integer depth")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
                if v == "unramified" {
                    Ok(RamificationDoc(Ramification::Unramified))
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Self::Value, E> {
                u32::try_from(v)
                    .map(|d| RamificationDoc(Ramification::Depth(d)))
                    .map_err(|_| E::invalid_value(de::Unexpected::Unsigned(v), &self))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Self::Value, E> {
                match u64::try_from(v) {
                    Ok(u) => self.visit_u64(u),
                    Err(_) => Err(E::invalid_value(de::Unexpected::Signed(v), &self)),
                }
            }
        }
        d.deserialize_any(V)
    }
}

impl Serialize for VoltageDoc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for VoltageDoc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = VoltageDoc;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal integer string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Self::Value, E> {
                Ok(VoltageDoc(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Self::Value, E> {
                Ok(VoltageDoc(v.into()))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
                v.trim()
                    .parse()
                    .map(VoltageDoc)
                    .map_err(|_| E::invalid_value(de::Unexpected::Str(v), &self))
            }
        }
        d.deserialize_any(V)
    }
}

impl GraphDoc {
    pub fn parse(text: &str) -> Result<GraphDoc> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("graph documents serialize");
        s.push('\n');
        s
    }

    /// Topology only; voltages and ramification are ignored.
    pub fn to_multigraph(&self) -> Result<MultiGraph> {
        let names: Vec<&str> = self.vertices.iter().map(|v| v.name.as_str()).collect();
        let edges: Vec<(&str, &str, &str)> =
            self.edges.iter().map(|e| (e.id.as_str(), e.from.as_str(), e.to.as_str())).collect();
        MultiGraph::new(&names, &edges)
    }

    pub fn to_voltage_graph(&self) -> Result<VoltageGraph> {
        let graph = self.to_multigraph()?;
        let mut voltages = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            let v = e.voltage.as_ref().ok_or_else(|| Error::Schema(format!("edge {:?} has no voltage", e.id)))?;
            voltages.push(v.0.clone());
        }
        let mut ramification = Vec::with_capacity(self.vertices.len());
        for v in &self.vertices {
            let r = v
                .ramification
                .ok_or_else(|| Error::Schema(format!("vertex {:?} has no ramification", v.name)))?;
            ramification.push(r.0);
        }
        VoltageGraph::new(graph, self.p, voltages, ramification)
    }

    pub fn from_voltage_graph(vg: &VoltageGraph) -> GraphDoc {
        let g = vg.graph();
        GraphDoc {
            p: vg.p(),
            vertices: g
                .vertices()
                .iter()
                .zip(vg.ramification())
                .map(|(name, r)| VertexDoc { name: name.clone(), ramification: Some(RamificationDoc(*r)) })
                .collect(),
            edges: g
                .edges()
                .iter()
                .zip(vg.voltages())
                .map(|(e, a)| EdgeDoc {
                    id: e.id.clone(),
                    from: g.vertices()[e.from].clone(),
                    to: g.vertices()[e.to].clone(),
                    voltage: Some(VoltageDoc(a.clone())),
                })
                .collect(),
        }
    }

    pub fn from_derived_graph(d: &DerivedGraph, p: u64) -> GraphDoc {
        let g = &d.graph;
        GraphDoc {
            p,
            vertices: g.vertices().iter().map(|name| VertexDoc { name: name.clone(), ramification: None }).collect(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeDoc {
                    id: e.id.clone(),
                    from: g.vertices()[e.from].clone(),
                    to: g.vertices()[e.to].clone(),
                    voltage: None,
                })
                .collect(),
        }
    }
}

pub fn parse_voltage_graph(text: &str) -> Result<VoltageGraph> {
    GraphDoc::parse(text)?.to_voltage_graph()
}

pub fn render_voltage_graph(vg: &VoltageGraph) -> String {
    GraphDoc::from_voltage_graph(vg).render()
}

pub fn load_voltage_graph(path: &Path) -> Result<VoltageGraph> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_voltage_graph(&text).map_err(|e| match e {
        Error::Schema(msg) => Error::Schema(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn save_voltage_graph(vg: &VoltageGraph, path: &Path) -> Result<()> {
    std::fs::write(path, render_voltage_graph(vg)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
