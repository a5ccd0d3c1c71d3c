//! Ribbon-graph (rotation system) representation of Moyal Feynman graphs.
//!
//! A graph is given by its vertices as cyclic sequences of half-edge ids
//! (the star-product vertex is 4-valent and only cyclically invariant, so
//! the order matters), a perfect matching of the non-external half-edges
//! into internal lines, and a set of external legs. Faces are traced with
//! the standard walk: cross the edge to the partner half-edge, then advance
//! to the next half-edge in the cyclic vertex order. External legs are
//! capped by an auxiliary one-valent completion each, which here amounts to
//! the walk passing straight through the leg; any face meeting a leg is
//! broken. The genus follows from the Euler relation `2 - 2g = n - L + F`,
//! and Definition-style classes are assigned from `(g, B)`: planar regular
//! (`g = 0`, at most one broken face), planar irregular (`g = 0`,
//! `B >= 2`), nonplanar (`g > 0`).

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};

pub type HalfEdgeId = u32;

/// Half-edge combinatorial map with external legs.
#[derive(Debug, Clone, PartialEq)]
pub struct RibbonGraph {
    vertices: Vec<[HalfEdgeId; 4]>,
    internal_edges: Vec<(HalfEdgeId, HalfEdgeId)>,
    external_legs: Vec<HalfEdgeId>,
    /// partner[h] for internal half-edges, h itself for external legs
    partner: BTreeMap<HalfEdgeId, HalfEdgeId>,
    /// (vertex index, position in cycle)
    location: BTreeMap<HalfEdgeId, (usize, usize)>,
}

impl RibbonGraph {
    /// Build and validate a graph. Every half-edge must appear exactly once
    /// across the vertex cycles, the matching must pair distinct non-external
    /// half-edges perfectly, and the graph must be connected.
    pub fn new(
        vertices: Vec<[HalfEdgeId; 4]>,
        internal_edges: Vec<(HalfEdgeId, HalfEdgeId)>,
        external_legs: Vec<HalfEdgeId>,
    ) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Graph("graph needs at least one vertex".into()));
        }
        let mut location = BTreeMap::new();
        for (vi, cycle) in vertices.iter().enumerate() {
            for (pos, &h) in cycle.iter().enumerate() {
                if location.insert(h, (vi, pos)).is_some() {
                    return Err(Error::Graph(format!(
                        "half-edge {h} appears more than once in the vertex cycles"
                    )));
                }
            }
        }
        let mut partner = BTreeMap::new();
        for &(h1, h2) in &internal_edges {
            if h1 == h2 {
                return Err(Error::Graph(format!(
                    "edge pairs half-edge {h1} with itself"
                )));
            }
            for h in [h1, h2] {
                if !location.contains_key(&h) {
                    return Err(Error::Graph(format!(
                        "edge endpoint {h} is not a half-edge of any vertex"
                    )));
                }
            }
            if partner.insert(h1, h2).is_some() || partner.insert(h2, h1).is_some() {
                return Err(Error::Graph(format!(
                    "half-edge {h1} or {h2} is matched twice"
                )));
            }
        }
        for &h in &external_legs {
            if !location.contains_key(&h) {
                return Err(Error::Graph(format!(
                    "external leg {h} is not a half-edge of any vertex"
                )));
            }
            if partner.contains_key(&h) {
                return Err(Error::Graph(format!(
                    "external leg {h} also appears in the internal matching"
                )));
            }
            if partner.insert(h, h).is_some() {
                return Err(Error::Graph(format!("external leg {h} listed twice")));
            }
        }
        for &h in location.keys() {
            if !partner.contains_key(&h) {
                return Err(Error::Graph(format!(
                    "half-edge {h} is dangling: neither matched nor external"
                )));
            }
        }

        let graph = RibbonGraph {
            vertices,
            internal_edges,
            external_legs,
            partner,
            location,
        };
        graph.check_connected()?;
        Ok(graph)
    }

    fn check_connected(&self) -> Result<()> {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &h in &self.vertices[v] {
                let p = self.partner[&h];
                if p != h {
                    let (w, _) = self.location[&p];
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        if seen.iter().all(|&s| s) {
            Ok(())
        } else {
            Err(Error::Graph("graph is disconnected".into()))
        }
    }

    /// Vertex count n.
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Internal line count L; always `2n - N/2` for 4-valent vertices.
    pub fn line_count(&self) -> usize {
        self.internal_edges.len()
    }

    /// External leg count N.
    pub fn external_count(&self) -> usize {
        self.external_legs.len()
    }

    pub fn vertices(&self) -> &[[HalfEdgeId; 4]] {
        &self.vertices
    }

    pub fn internal_edges(&self) -> &[(HalfEdgeId, HalfEdgeId)] {
        &self.internal_edges
    }

    pub fn external_legs(&self) -> &[HalfEdgeId] {
        &self.external_legs
    }

    fn is_external(&self, h: HalfEdgeId) -> bool {
        self.partner[&h] == h
    }

    /// Next half-edge of the face walk through `h`.
    fn face_next(&self, h: HalfEdgeId) -> HalfEdgeId {
        let crossed = self.partner[&h];
        let (v, pos) = self.location[&crossed];
        self.vertices[v][(pos + 1) % 4]
    }

    /// Trace all faces of the (externally capped) ribbon structure.
    pub fn trace_faces(&self) -> Faces {
        let mut visited: BTreeMap<HalfEdgeId, bool> =
            self.location.keys().map(|&h| (h, false)).collect();
        let mut cycles = Vec::new();
        let mut broken = Vec::new();
        for cycle in &self.vertices {
            for &start in cycle {
                if visited[&start] {
                    continue;
                }
                let mut face = Vec::new();
                let mut is_broken = false;
                let mut h = start;
                loop {
                    visited.insert(h, true);
                    face.push(h);
                    if self.is_external(h) {
                        is_broken = true;
                    }
                    h = self.face_next(h);
                    if h == start {
                        break;
                    }
                }
                cycles.push(face);
                broken.push(is_broken);
            }
        }
        Faces { cycles, broken }
    }

    /// Genus, face counts and Definition-style class.
    pub fn classify(&self) -> Result<GraphClass> {
        let faces = self.trace_faces();
        let n = self.vertex_count() as i64;
        let l = self.line_count() as i64;
        let f = faces.count() as i64;
        let euler = n - l + f;
        if euler % 2 != 0 || euler > 2 {
            return Err(Error::Graph(format!(
                "Euler count n - L + F = {euler} is not an even integer <= 2"
            )));
        }
        let genus = ((2 - euler) / 2) as u32;
        let b = faces.broken_count();
        let kind = if genus > 0 {
            GraphKind::NonPlanar
        } else if b >= 2 {
            GraphKind::PlanarIrregular
        } else {
            // vacuum graphs (B = 0) count as regular
            GraphKind::PlanarRegular
        };
        Ok(GraphClass {
            genus,
            faces: faces.count(),
            broken_faces: b,
            kind,
        })
    }
}

/// Faces of the ribbon structure; `broken[i]` marks faces meeting at least
/// one external leg.
#[derive(Debug, Clone)]
pub struct Faces {
    pub cycles: Vec<Vec<HalfEdgeId>>,
    pub broken: Vec<bool>,
}

impl Faces {
    pub fn count(&self) -> usize {
        self.cycles.len()
    }

    pub fn broken_count(&self) -> usize {
        self.broken.iter().filter(|&&b| b).count()
    }
}

/// Classification per the planar/nonplanar, regular/irregular split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    PlanarRegular,
    PlanarIrregular,
    NonPlanar,
}

impl std::fmt::Display for GraphKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GraphKind::PlanarRegular => "planar_regular",
            GraphKind::PlanarIrregular => "planar_irregular",
            GraphKind::NonPlanar => "nonplanar",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GraphClass {
    pub genus: u32,
    pub faces: usize,
    pub broken_faces: usize,
    pub kind: GraphKind,
}

/// Superficial power-counting verdict for a planar graph with one
/// noncommutative-correction insertion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PowerCountVerdict {
    /// Loop number b (= F - 1 for planar graphs).
    pub loops: u32,
    /// Internal lines L = 2b - 2 + N/2.
    pub lines: u32,
    /// Commutative superficial degree 4b - 2L.
    pub degree: i64,
    /// Degree with one correction inserted: four more powers downstairs.
    pub nc_degree: i64,
    /// Negation of the divergence condition `b >= L/2 + 1`; true whenever
    /// N > 0, at any loop order.
    pub nc_convergent: bool,
}

/// Power counting from the loop number and external leg count alone.
/// `n_external` must be even (phi^4 graphs).
pub fn planar_power_count(loops: u32, n_external: u32) -> Result<PowerCountVerdict> {
    if loops == 0 {
        return Err(Error::Domain("loop number must be >= 1".into()));
    }
    if n_external % 2 != 0 {
        return Err(Error::Domain(format!(
            "external leg count must be even, got {n_external}"
        )));
    }
    let b = i64::from(loops);
    let n = i64::from(n_external);
    let lines = 2 * b - 2 + n / 2;
    if lines < 1 {
        return Err(Error::Domain(format!(
            "degenerate graph: L = {lines} for b = {b}, N = {n}"
        )));
    }
    let degree = 4 * b - 2 * lines;
    // b >= L/2 + 1  <=>  2b >= L + 2, in exact integer arithmetic
    let divergent_with_correction = 2 * b >= lines + 2;
    Ok(PowerCountVerdict {
        loops,
        lines: lines as u32,
        degree,
        nc_degree: degree - 4,
        nc_convergent: !divergent_with_correction,
    })
}

/// Power counting for a classified planar graph; rejects nonplanar input
/// (the argument rests on b = F - 1) and cross-checks the line count
/// against `L = 2n - N/2`.
pub fn power_count(
    class: &GraphClass,
    n_vertices: usize,
    n_external: usize,
) -> Result<PowerCountVerdict> {
    if class.kind == GraphKind::NonPlanar {
        return Err(Error::Domain(
            "power counting requires a planar graph (b = F - 1)".into(),
        ));
    }
    if class.faces == 0 {
        return Err(Error::Graph("graph has no faces".into()));
    }
    let b = (class.faces - 1) as u32;
    let verdict = planar_power_count(b, n_external as u32)?;
    let l_from_vertices = 2 * n_vertices as i64 - n_external as i64 / 2;
    if l_from_vertices != i64::from(verdict.lines) {
        return Err(Error::Graph(format!(
            "inconsistent counts: L = 2n - N/2 = {l_from_vertices} but \
             2b - 2 + N/2 = {}",
            verdict.lines
        )));
    }
    Ok(verdict)
}

/// A one-loop graph with its Wick combinatorial factor.
#[derive(Debug, Clone)]
pub struct BuiltinGraph {
    pub name: &'static str,
    pub combinatorial_factor: u32,
    pub graph: RibbonGraph,
}

/// The four one-loop graphs driving the flow: the two regular tadpoles, the
/// irregular tadpole and the bubble.
#[derive(Debug, Clone)]
pub struct BuiltinSet {
    pub t1: BuiltinGraph,
    pub t2: BuiltinGraph,
    pub t3: BuiltinGraph,
    pub bubble: BuiltinGraph,
}

impl BuiltinSet {
    pub fn all(&self) -> [&BuiltinGraph; 4] {
        [&self.t1, &self.t2, &self.t3, &self.bubble]
    }

    /// Case-insensitive lookup by name.
    pub fn by_name(&self, name: &str) -> Option<&BuiltinGraph> {
        match name.to_ascii_lowercase().as_str() {
            "t1" => Some(&self.t1),
            "t2" => Some(&self.t2),
            "t3" => Some(&self.t3),
            "bubble" => Some(&self.bubble),
            _ => None,
        }
    }
}

/// The tadpoles contract one pair of the cyclic vertex (1 2 3 4): adjacent
/// pairs give the two planar regular tadpoles, the opposite pair gives the
/// planar irregular one. The bubble joins two vertices by two parallel
/// lines with all four remaining legs on one face. Each tadpole carries
/// combinatorial factor 4; the bubble carries 4*4*4.
pub fn builtin_graphs() -> BuiltinSet {
    let tadpole = |edge: (HalfEdgeId, HalfEdgeId), legs: [HalfEdgeId; 2]| {
        RibbonGraph::new(vec![[1, 2, 3, 4]], vec![edge], legs.to_vec())
            .expect("builtin tadpole is well-formed")
    };
    let bubble = RibbonGraph::new(
        vec![[1, 2, 3, 4], [5, 6, 7, 8]],
        vec![(1, 6), (2, 5)],
        vec![3, 4, 7, 8],
    )
    .expect("builtin bubble is well-formed");
    BuiltinSet {
        t1: BuiltinGraph {
            name: "T1",
            combinatorial_factor: 4,
            graph: tadpole((1, 2), [3, 4]),
        },
        t2: BuiltinGraph {
            name: "T2",
            combinatorial_factor: 4,
            graph: tadpole((2, 3), [4, 1]),
        },
        t3: BuiltinGraph {
            name: "T3",
            combinatorial_factor: 4,
            graph: tadpole((1, 3), [2, 4]),
        },
        bubble: BuiltinGraph {
            name: "bubble",
            combinatorial_factor: 4 * 4 * 4,
            graph: bubble,
        },
    }
}

/// One vertex, both half-edge pairs self-contracted crosswise: the minimal
/// genus-one map (n = 1, L = 2, F = 1).
pub fn crossed_vacuum_tadpole() -> RibbonGraph {
    RibbonGraph::new(vec![[1, 2, 3, 4]], vec![(1, 3), (2, 4)], vec![])
        .expect("crossed vacuum tadpole is well-formed")
}

/// Parse the text format: one line per item,
/// `v <id>: h1 h2 h3 h4` (cyclic order), `e: hA hB`, `x: h`.
/// Blank lines and `#` comments are skipped.
pub fn parse_graph(text: &str) -> Result<RibbonGraph> {
    let mut vertices = Vec::new();
    let mut vertex_ids = Vec::new();
    let mut edges = Vec::new();
    let mut legs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |message: String| Error::GraphParse { line, message };
        let (head, rest) = content
            .split_once(':')
            .ok_or_else(|| err("expected `v <id>:`, `e:` or `x:`".into()))?;
        let ids: Vec<HalfEdgeId> = rest
            .split_whitespace()
            .map(|tok| {
                tok.parse::<HalfEdgeId>()
                    .map_err(|_| err(format!("invalid half-edge id `{tok}`")))
            })
            .collect::<Result<_>>()?;
        let head = head.trim();
        if let Some(vid) = head.strip_prefix('v') {
            let vid = vid.trim();
            let vid: u32 = vid
                .parse()
                .map_err(|_| err(format!("invalid vertex id `{vid}`")))?;
            if vertex_ids.contains(&vid) {
                return Err(err(format!("duplicate vertex id {vid}")));
            }
            if ids.len() != 4 {
                return Err(err(format!(
                    "vertex must list exactly 4 half-edges, got {}",
                    ids.len()
                )));
            }
            vertex_ids.push(vid);
            vertices.push([ids[0], ids[1], ids[2], ids[3]]);
        } else if head == "e" {
            if ids.len() != 2 {
                return Err(err(format!(
                    "edge must list exactly 2 half-edges, got {}",
                    ids.len()
                )));
            }
            edges.push((ids[0], ids[1]));
        } else if head == "x" {
            if ids.len() != 1 {
                return Err(err(format!(
                    "external leg must list exactly 1 half-edge, got {}",
                    ids.len()
                )));
            }
            legs.push(ids[0]);
        } else {
            return Err(err(format!("unknown line kind `{head}`")));
        }
    }
    RibbonGraph::new(vertices, edges, legs)
}

/// Serialize a graph in the text format accepted by [`parse_graph`].
pub fn format_graph(graph: &RibbonGraph) -> String {
    let mut out = String::new();
    for (vi, cycle) in graph.vertices().iter().enumerate() {
        out.push_str(&format!(
            "v {vi}: {} {} {} {}\n",
            cycle[0], cycle[1], cycle[2], cycle[3]
        ));
    }
    for &(h1, h2) in graph.internal_edges() {
        out.push_str(&format!("e: {h1} {h2}\n"));
    }
    for &h in graph.external_legs() {
        out.push_str(&format!("x: {h}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_tadpole_counts() {
        let set = builtin_graphs();
        for g in [&set.t1, &set.t2, &set.t3] {
            assert_eq!(g.graph.vertex_count(), 1);
            assert_eq!(g.graph.line_count(), 1);
            assert_eq!(g.graph.external_count(), 2);
            assert_eq!(g.combinatorial_factor, 4);
        }
        assert_eq!(set.bubble.graph.vertex_count(), 2);
        assert_eq!(set.bubble.graph.line_count(), 2);
        assert_eq!(set.bubble.graph.external_count(), 4);
        assert_eq!(set.bubble.combinatorial_factor, 64);
        // L = 2n - N/2 for every builtin
        for g in set.all() {
            assert_eq!(
                g.graph.line_count(),
                2 * g.graph.vertex_count() - g.graph.external_count() / 2
            );
        }
    }

    #[test]
    fn builtin_classification_golden_set() {
        let set = builtin_graphs();
        let t1 = set.t1.graph.classify().unwrap();
        assert_eq!((t1.genus, t1.broken_faces, t1.kind), (0, 1, GraphKind::PlanarRegular));
        let t2 = set.t2.graph.classify().unwrap();
        assert_eq!((t2.genus, t2.broken_faces, t2.kind), (0, 1, GraphKind::PlanarRegular));
        let t3 = set.t3.graph.classify().unwrap();
        assert_eq!((t3.genus, t3.broken_faces, t3.kind), (0, 2, GraphKind::PlanarIrregular));
        let bubble = set.bubble.graph.classify().unwrap();
        assert_eq!(
            (bubble.genus, bubble.broken_faces, bubble.kind),
            (0, 1, GraphKind::PlanarRegular)
        );
    }

    #[test]
    fn crossed_vacuum_tadpole_is_genus_one() {
        let g = crossed_vacuum_tadpole();
        let class = g.classify().unwrap();
        assert_eq!(class.faces, 1);
        assert_eq!(class.genus, 1);
        assert_eq!(class.kind, GraphKind::NonPlanar);
    }

    #[test]
    fn planar_double_tadpole_hand_trace() {
        // adjacent self-pairings: F = 3, g = 0
        let g = RibbonGraph::new(vec![[1, 2, 3, 4]], vec![(1, 2), (3, 4)], vec![]).unwrap();
        let faces = g.trace_faces();
        assert_eq!(faces.count(), 3);
        let class = g.classify().unwrap();
        assert_eq!(class.genus, 0);
        assert_eq!(class.broken_faces, 0);
    }

    #[test]
    fn rotation_of_vertex_cycle_preserves_class() {
        let set = builtin_graphs();
        for g in set.all() {
            let base = g.graph.classify().unwrap();
            for rot in 1..4 {
                let rotated: Vec<[HalfEdgeId; 4]> = g
                    .graph
                    .vertices()
                    .iter()
                    .map(|c| {
                        let mut r = *c;
                        r.rotate_left(rot);
                        r
                    })
                    .collect();
                let rg = RibbonGraph::new(
                    rotated,
                    g.graph.internal_edges().to_vec(),
                    g.graph.external_legs().to_vec(),
                )
                .unwrap();
                let class = rg.classify().unwrap();
                assert_eq!(class, base, "{} rotated by {rot}", g.name);
            }
        }
    }

    #[test]
    fn face_walk_visits_every_half_edge_once() {
        let set = builtin_graphs();
        for g in set.all() {
            let faces = g.graph.trace_faces();
            let mut all: Vec<HalfEdgeId> = faces.cycles.iter().flatten().copied().collect();
            all.sort_unstable();
            let mut expected: Vec<HalfEdgeId> =
                g.graph.vertices().iter().flatten().copied().collect();
            expected.sort_unstable();
            assert_eq!(all, expected, "{}", g.name);
        }
    }

    #[test]
    fn power_count_tadpole_and_bubble() {
        let v = planar_power_count(1, 2).unwrap();
        assert_eq!((v.lines, v.degree, v.nc_degree), (1, 2, -2));
        assert!(v.nc_convergent);

        let v = planar_power_count(1, 4).unwrap();
        assert_eq!((v.lines, v.degree, v.nc_degree), (2, 0, -4));
        assert!(v.nc_convergent);
    }

    #[test]
    fn power_count_sweep_never_divergent() {
        for b in 1..=50 {
            for n in (2..=20).step_by(2) {
                let v = planar_power_count(b, n).unwrap();
                assert!(v.nc_convergent, "b={b}, N={n}");
            }
        }
    }

    #[test]
    fn vacuum_graphs_saturate_the_condition() {
        // N = 0: b >= L/2 + 1 holds with equality, so not convergent
        let v = planar_power_count(3, 0).unwrap();
        assert!(!v.nc_convergent);
    }

    #[test]
    fn power_count_rejects_nonplanar() {
        let class = crossed_vacuum_tadpole().classify().unwrap();
        assert!(power_count(&class, 1, 0).is_err());
    }

    #[test]
    fn power_count_from_classified_builtins() {
        let set = builtin_graphs();
        let class = set.bubble.graph.classify().unwrap();
        let v = power_count(&class, 2, 4).unwrap();
        assert_eq!(v.loops, 1);
        assert_eq!(v.lines, 2);
    }

    #[test]
    fn structural_errors_are_caught() {
        // dangling half-edge
        let err = RibbonGraph::new(vec![[1, 2, 3, 4]], vec![(1, 2)], vec![3]).unwrap_err();
        assert!(err.to_string().contains("dangling"), "{err}");
        // duplicate half-edge
        assert!(RibbonGraph::new(vec![[1, 2, 3, 3]], vec![(1, 2)], vec![3, 4]).is_err());
        // self-paired edge
        assert!(RibbonGraph::new(vec![[1, 2, 3, 4]], vec![(1, 1)], vec![2, 3]).is_err());
        // disconnected
        let err = RibbonGraph::new(
            vec![[1, 2, 3, 4], [5, 6, 7, 8]],
            vec![(1, 2), (5, 6)],
            vec![3, 4, 7, 8],
        )
        .unwrap_err();
        assert!(err.to_string().contains("disconnected"), "{err}");
    }

    #[test]
    fn parse_and_format_round_trip() {
        let set = builtin_graphs();
        for g in set.all() {
            let text = format_graph(&g.graph);
            let parsed = parse_graph(&text).unwrap();
            assert_eq!(parsed, g.graph, "{}", g.name);
        }
    }

    #[test]
    fn parse_reports_line_numbers() {
        let text = "v 0: 1 2 3 4\ne: 1 2\nx: 3\n";
        // 4 is dangling -> structural error (no line)
        assert!(parse_graph(text).is_err());

        let text = "v 0: 1 2 3 4\nbogus: 1 2\n";
        match parse_graph(text).unwrap_err() {
            Error::GraphParse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other}"),
        }

        let text = "v 0: 1 2 3\n";
        match parse_graph(text).unwrap_err() {
            Error::GraphParse { line, message } => {
                assert_eq!(line, 1);
                assert!(message.contains("4 half-edges"));
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn parse_accepts_comments_and_blanks() {
        let text = "# irregular tadpole\n\nv 0: 1 2 3 4  # cyclic\ne: 1 3\nx: 2\nx: 4\n";
        let g = parse_graph(text).unwrap();
        let class = g.classify().unwrap();
        assert_eq!(class.kind, GraphKind::PlanarIrregular);
        assert_eq!(class.broken_faces, 2);
    }
}
