//! Multigraphs in Serre's formalism, voltage assignments with ramification
//! data, and the derived graphs `X_n` of a (possibly ramified) Z_p-tower.
//!
//! A geometric edge stores one dart `e` with `s(e) = from`, `t(e) = to`; its
//! reverse `ē` is implicit, so the dart involution is fixed-point free by
//! construction.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::arith::is_prime;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub from: usize,
    pub to: usize,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.from == self.to
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

impl MultiGraph {
    /// Build from vertex names and `(id, from, to)` triples naming vertices.
    pub fn new<V: AsRef<str>, E: AsRef<str>>(vertices: &[V], edges: &[(E, E, E)]) -> Result<Self> {
        let vertices: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        let mut seen = HashSet::new();
        for v in &vertices {
            if !seen.insert(v.as_str()) {
                return Err(Error::Schema(format!("duplicate vertex name {v:?}")));
            }
        }
        let lookup = |name: &str, id: &str| {
            vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::Schema(format!("edge {id:?} references unknown vertex {name:?}")))
        };
        let mut ids = HashSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for (id, from, to) in edges {
            let id = id.as_ref();
            if !ids.insert(id.to_string()) {
                return Err(Error::Schema(format!("duplicate edge id {id:?}")));
            }
            out.push(Edge { id: id.to_string(), from: lookup(from.as_ref(), id)?, to: lookup(to.as_ref(), id)? });
        }
        Ok(MultiGraph { vertices, edges: out })
    }

    /// Trusted constructor for internally generated graphs.
    pub(crate) fn from_parts(vertices: Vec<String>, edges: Vec<Edge>) -> Self {
        debug_assert!(edges.iter().all(|e| e.from < vertices.len() && e.to < vertices.len()));
        MultiGraph { vertices, edges }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    /// Number of darts starting at `v` (a loop contributes two).
    pub fn dart_degree(&self, v: usize) -> usize {
        self.edges.iter().map(|e| (e.from == v) as usize + (e.to == v) as usize).sum()
    }

    /// Number of connected components.
    pub fn component_count(&self) -> usize {
        let mut dsu = Dsu::new(self.vertices.len());
        for e in &self.edges {
            dsu.union(e.from, e.to);
        }
        dsu.components
    }
}

struct Dsu {
    parent: Vec<usize>,
    components: usize,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect(), components: n }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
            self.components -= 1;
        }
    }
}

/// `I_v ⊂ Γ`: trivial, or `Γ^{p^d}` (so `[Γ : I_v] = p^d`; depth 0 is `I_v = Γ`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ramification {
    Unramified,
    Depth(u32),
}

impl Ramification {
    pub const TOTAL: Ramification = Ramification::Depth(0);

    pub fn is_ramified(self) -> bool {
        matches!(self, Ramification::Depth(_))
    }
}

impl fmt::Display for Ramification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ramification::Unramified => f.write_str("unramified"),
            Ramification::Depth(d) => write!(f, "{d}"),
        }
    }
}

/// A multigraph with a prime `p`, an exponent `a` per geometric edge
/// (`α(e) = γ^a`, `α(ē) = γ^{-a}`) and a ramification datum per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoltageGraph {
    graph: MultiGraph,
    p: u64,
    voltages: Vec<BigInt>,
    ramification: Vec<Ramification>,
}

impl VoltageGraph {
    pub fn new(
        graph: MultiGraph,
        p: u64,
        voltages: Vec<BigInt>,
        ramification: Vec<Ramification>,
    ) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Schema(format!("p = {p} is not prime")));
        }
        if voltages.len() != graph.edge_count() {
            return Err(Error::Schema("every edge needs exactly one voltage".into()));
        }
        if ramification.len() != graph.vertex_count() {
            return Err(Error::Schema("every vertex needs exactly one ramification datum".into()));
        }
        Ok(VoltageGraph { graph, p, voltages, ramification })
    }

    /// Single unramified vertex `v` with one loop per voltage.
    pub fn bouquet<V: Into<BigInt> + Clone>(p: u64, loops: &[V]) -> Result<Self> {
        let ids: Vec<String> = (1..=loops.len()).map(|i| format!("e{i}")).collect();
        let edges: Vec<(&str, &str, &str)> = ids.iter().map(|id| (id.as_str(), "v", "v")).collect();
        let graph = MultiGraph::new(&["v"], &edges)?;
        let voltages = loops.iter().map(|a| a.clone().into()).collect();
        VoltageGraph::new(graph, p, voltages, vec![Ramification::Unramified])
    }

    /// Unramified `v` carrying the loops, totally ramified `w`, and
    /// `connecting` edges `v → w` of voltage 0.
    pub fn two_vertex_ramified<V: Into<BigInt> + Clone>(
        p: u64,
        loops: &[V],
        connecting: usize,
    ) -> Result<Self> {
        let mut ids: Vec<(String, &str, &str)> =
            (1..=loops.len()).map(|i| (format!("e{i}"), "v", "v")).collect();
        ids.extend((1..=connecting).map(|i| (format!("c{i}"), "v", "w")));
        let edges: Vec<(&str, &str, &str)> = ids.iter().map(|(id, a, b)| (id.as_str(), *a, *b)).collect();
        let graph = MultiGraph::new(&["v", "w"], &edges)?;
        let mut voltages: Vec<BigInt> = loops.iter().map(|a| a.clone().into()).collect();
        voltages.extend(std::iter::repeat(BigInt::zero()).take(connecting));
        VoltageGraph::new(graph, p, voltages, vec![Ramification::Unramified, Ramification::TOTAL])
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn voltages(&self) -> &[BigInt] {
        &self.voltages
    }

    pub fn voltage(&self, edge: usize) -> &BigInt {
        &self.voltages[edge]
    }

    pub fn ramification(&self) -> &[Ramification] {
        &self.ramification
    }

    pub fn is_unramified(&self) -> bool {
        self.ramification.iter().all(|r| !r.is_ramified())
    }

    pub fn is_bouquet(&self) -> bool {
        self.graph.vertex_count() == 1
    }

    /// Size of the fiber over `v` at level `n`: `p^{min(n, d_v)}`, or `p^n`
    /// when `v` is unramified.
    pub fn fiber_size(&self, v: usize, n: u32) -> Result<u64> {
        let e = match self.ramification[v] {
            Ramification::Unramified => n,
            Ramification::Depth(d) => d.min(n),
        };
        checked_pow(self.p, e)
    }
}

fn checked_pow(p: u64, e: u32) -> Result<u64> {
    p.checked_pow(e).ok_or_else(|| Error::Overflow(format!("{p}^{e} exceeds 64 bits")))
}

/// The level-`n` graph of the tower, with every vertex and edge labelled by
/// its base object and residue class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedGraph {
    pub level: u32,
    pub graph: MultiGraph,
    /// `(base vertex, residue)` per derived vertex.
    pub vertex_labels: Vec<(usize, u64)>,
    /// `(base edge, class mod p^n)` per derived edge.
    pub edge_labels: Vec<(usize, u64)>,
}

impl DerivedGraph {
    /// The covering map `X_n → X_m` for `m ≤ n`, as `(vertex map, edge map)`
    /// into the vertex/edge indices of `lower`.
    pub fn projection_to(&self, lower: &DerivedGraph, vg: &VoltageGraph) -> Result<(Vec<usize>, Vec<usize>)> {
        if lower.level > self.level {
            return Err(Error::InvalidParameter("projection must go down the tower".into()));
        }
        let offsets = fiber_offsets(vg, lower.level)?;
        let q = checked_pow(vg.p(), lower.level)?;
        let vmap = self
            .vertex_labels
            .iter()
            .map(|&(v, r)| Ok(offsets[v] + (r % vg.fiber_size(v, lower.level)?) as usize))
            .collect::<Result<Vec<_>>>()?;
        let base_edges = vg.graph().edge_count();
        let emap = self
            .edge_labels
            .iter()
            .map(|&(e, c)| e * q as usize + (c % q) as usize)
            .collect::<Vec<_>>();
        debug_assert!(emap.iter().all(|&i| i < base_edges * q as usize));
        Ok((vmap, emap))
    }
}

fn fiber_offsets(vg: &VoltageGraph, n: u32) -> Result<Vec<usize>> {
    let mut offsets = Vec::with_capacity(vg.graph().vertex_count() + 1);
    let mut acc = 0usize;
    for v in 0..vg.graph().vertex_count() {
        offsets.push(acc);
        acc += vg.fiber_size(v, n)? as usize;
    }
    offsets.push(acc);
    Ok(offsets)
}

/// Level-`n` derived graph. Vertex `(r, v)` is named `v@r` and edge `(c, e)`
/// is named `e@c`, with `s((c, e)) = (c mod |fiber(s)|, s)` and
/// `t((c, e)) = (c + a(e) mod |fiber(t)|, t)`. Level 0 is the base graph.
pub fn derived_graph(vg: &VoltageGraph, n: u32) -> Result<DerivedGraph> {
    let base = vg.graph();
    if n == 0 {
        return Ok(DerivedGraph {
            level: 0,
            graph: base.clone(),
            vertex_labels: (0..base.vertex_count()).map(|v| (v, 0)).collect(),
            edge_labels: (0..base.edge_count()).map(|e| (e, 0)).collect(),
        });
    }
    let q = checked_pow(vg.p(), n)?;
    let offsets = fiber_offsets(vg, n)?;
    let fibers: Vec<u64> =
        (0..base.vertex_count()).map(|v| vg.fiber_size(v, n)).collect::<Result<_>>()?;

    let mut names = Vec::with_capacity(offsets[base.vertex_count()]);
    let mut vertex_labels = Vec::with_capacity(names.capacity());
    for (v, name) in base.vertices().iter().enumerate() {
        for r in 0..fibers[v] {
            names.push(format!("{name}@{r}"));
            vertex_labels.push((v, r));
        }
    }

    let q_big = BigInt::from(q);
    let mut edges = Vec::with_capacity(base.edge_count() * q as usize);
    let mut edge_labels = Vec::with_capacity(edges.capacity());
    for (ei, e) in base.edges().iter().enumerate() {
        let shift = vg.voltage(ei).mod_floor(&q_big).to_u64().expect("reduced voltage fits");
        let (fs, ft) = (fibers[e.from], fibers[e.to]);
        for c in 0..q {
            let head = ((c as u128 + shift as u128) % q as u128) as u64;
            edges.push(Edge {
                id: format!("{}@{c}", e.id),
                from: offsets[e.from] + (c % fs) as usize,
                to: offsets[e.to] + (head % ft) as usize,
            });
            edge_labels.push((ei, c));
        }
    }
    Ok(DerivedGraph {
        level: n,
        graph: MultiGraph::from_parts(names, edges),
        vertex_labels,
        edge_labels,
    })
}

pub fn is_connected(g: &MultiGraph) -> Result<bool> {
    if g.vertex_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok(g.component_count() == 1)
}

/// How a tower-connectivity answer was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConnectivityMethod {
    /// Proven for every level by a structural criterion.
    Shortcut,
    /// Checked level by level up to the requested bound.
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TowerConnectivity {
    pub connected: bool,
    pub first_failure: Option<u32>,
    pub method: ConnectivityMethod,
}

/// Whether `X_0, ..., X_up_to` are all connected.
///
/// Shortcuts: an unramified bouquet is connected at every level iff some
/// voltage is prime to `p`; a connected base with a totally ramified vertex is
/// connected at every level. Otherwise each level is checked directly.
pub fn tower_is_connected(vg: &VoltageGraph, up_to: u32) -> Result<TowerConnectivity> {
    let failed = |level, method| TowerConnectivity { connected: false, first_failure: Some(level), method };
    let ok = |method| TowerConnectivity { connected: true, first_failure: None, method };
    if !is_connected(vg.graph())? {
        return Ok(failed(0, ConnectivityMethod::Shortcut));
    }
    if vg.is_bouquet() && vg.is_unramified() {
        let p = BigInt::from(vg.p());
        if vg.voltages().iter().any(|a| !(a % &p).is_zero()) {
            return Ok(ok(ConnectivityMethod::Shortcut));
        }
        return Ok(if up_to >= 1 { failed(1, ConnectivityMethod::Shortcut) } else { ok(ConnectivityMethod::Shortcut) });
    }
    if vg.ramification().contains(&Ramification::TOTAL) {
        return Ok(ok(ConnectivityMethod::Shortcut));
    }
    tower_is_connected_exhaustive(vg, up_to)
}

/// Level-by-level check with no structural shortcuts.
pub fn tower_is_connected_exhaustive(vg: &VoltageGraph, up_to: u32) -> Result<TowerConnectivity> {
    for n in 0..=up_to {
        if !is_connected(&derived_graph(vg, n)?.graph)? {
            return Ok(TowerConnectivity {
                connected: false,
                first_failure: Some(n),
                method: ConnectivityMethod::Exhaustive,
            });
        }
    }
    Ok(TowerConnectivity { connected: true, first_failure: None, method: ConnectivityMethod::Exhaustive })
}
