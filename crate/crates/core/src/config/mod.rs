//! Brauer configurations as tuples of angles, a permutation given by its
//! vertex cycles, a partition into polygons and a multiplicity per vertex.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

mod iso;
mod parse;
mod random;

pub use iso::{are_isomorphic, AngleBijection};
pub use parse::{parse_configuration, parse_document};
pub use random::{random_configuration, RandomSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AngleId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PolygonId(pub usize);

/// One `vertex` statement: the cyclic ordering of angles around a vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexCycle {
    pub id: String,
    pub multiplicity: i64,
    pub cycle: Vec<String>,
}

/// One `polygon` statement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Polygon {
    pub id: String,
    pub angles: Vec<String>,
}

/// The statements of a `.bcf` document, in file order, not yet validated.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConfigurationData {
    pub vertices: Vec<VertexCycle>,
    pub polygons: Vec<Polygon>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Empty,
    DuplicateVertex { vertex: String },
    DuplicatePolygon { polygon: String },
    EmptyCycle { vertex: String },
    NonPositiveMultiplicity { vertex: String, multiplicity: i64 },
    DuplicateAngleInCycles { angle: String },
    DuplicateAngleInPolygons { angle: String },
    AngleWithoutPolygon { angle: String },
    AngleWithoutVertex { angle: String },
    PolygonTooSmall { polygon: String, size: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "configuration has no vertices or no polygons"),
            Violation::DuplicateVertex { vertex } => write!(f, "vertex id `{vertex}` declared twice"),
            Violation::DuplicatePolygon { polygon } => {
                write!(f, "polygon id `{polygon}` declared twice")
            }
            Violation::EmptyCycle { vertex } => write!(f, "vertex `{vertex}` has an empty cycle"),
            Violation::NonPositiveMultiplicity { vertex, multiplicity } => write!(
                f,
                "vertex `{vertex}` has multiplicity {multiplicity}; multiplicities must be >= 1"
            ),
            Violation::DuplicateAngleInCycles { angle } => write!(
                f,
                "angle `{angle}` appears more than once in vertex cycles (sigma must be a permutation)"
            ),
            Violation::DuplicateAngleInPolygons { angle } => write!(
                f,
                "angle `{angle}` appears in more than one polygon slot (polygons must partition the angles)"
            ),
            Violation::AngleWithoutPolygon { angle } => {
                write!(f, "angle `{angle}` lies on a vertex but in no polygon")
            }
            Violation::AngleWithoutVertex { angle } => write!(
                f,
                "angle `{angle}` lies in a polygon but in no vertex cycle (sigma must be total)"
            ),
            Violation::PolygonTooSmall { polygon, size } => write!(
                f,
                "polygon `{polygon}` has {size} angle(s); every polygon needs at least two"
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
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
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "- {v}")?;
        }
        Ok(())
    }
}

impl ConfigurationData {
    /// Lists every violated invariant; an empty report means the data
    /// describes a Brauer configuration.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.vertices.is_empty() || self.polygons.is_empty() {
            violations.push(Violation::Empty);
        }

        let mut seen = HashSet::new();
        for v in &self.vertices {
            if !seen.insert(v.id.as_str()) {
                violations.push(Violation::DuplicateVertex {
                    vertex: v.id.clone(),
                });
            }
        }
        let mut seen = HashSet::new();
        for p in &self.polygons {
            if !seen.insert(p.id.as_str()) {
                violations.push(Violation::DuplicatePolygon {
                    polygon: p.id.clone(),
                });
            }
        }

        let mut on_vertex: Vec<&str> = Vec::new();
        let mut on_vertex_set = HashSet::new();
        for v in &self.vertices {
            if v.cycle.is_empty() {
                violations.push(Violation::EmptyCycle {
                    vertex: v.id.clone(),
                });
            }
            if v.multiplicity < 1 {
                violations.push(Violation::NonPositiveMultiplicity {
                    vertex: v.id.clone(),
                    multiplicity: v.multiplicity,
                });
            }
            for a in &v.cycle {
                if on_vertex_set.insert(a.as_str()) {
                    on_vertex.push(a);
                } else {
                    violations.push(Violation::DuplicateAngleInCycles { angle: a.clone() });
                }
            }
        }

        let mut in_polygon: Vec<&str> = Vec::new();
        let mut in_polygon_set = HashSet::new();
        for p in &self.polygons {
            if p.angles.len() < 2 {
                violations.push(Violation::PolygonTooSmall {
                    polygon: p.id.clone(),
                    size: p.angles.len(),
                });
            }
            for a in &p.angles {
                if in_polygon_set.insert(a.as_str()) {
                    in_polygon.push(a);
                } else {
                    violations.push(Violation::DuplicateAngleInPolygons { angle: a.clone() });
                }
            }
        }

        for a in &on_vertex {
            if !in_polygon_set.contains(a) {
                violations.push(Violation::AngleWithoutPolygon {
                    angle: a.to_string(),
                });
            }
        }
        for a in &in_polygon {
            if !on_vertex_set.contains(a) {
                violations.push(Violation::AngleWithoutVertex {
                    angle: a.to_string(),
                });
            }
        }

        ValidationReport { violations }
    }

    pub fn to_bcf(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            out.push_str(&format!(
                "vertex {} multiplicity {} cycle {}\n",
                v.id,
                v.multiplicity,
                v.cycle.join(" ")
            ));
        }
        for p in &self.polygons {
            out.push_str(&format!("polygon {} {}\n", p.id, p.angles.join(" ")));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VertexClass {
    /// Valency and multiplicity both one.
    Truncated,
    ExternalNotTruncated,
    Ordinary,
}

impl fmt::Display for VertexClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VertexClass::Truncated => "truncated",
            VertexClass::ExternalNotTruncated => "external-not-truncated",
            VertexClass::Ordinary => "ordinary",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PolygonClass {
    pub size: usize,
    pub is_edge: bool,
    pub is_self_folded: bool,
}

/// A validated Brauer configuration.
///
/// Angles are numbered in order of first appearance in the vertex cycles;
/// vertices and polygons keep their file order.
#[derive(Clone, Debug)]
pub struct BrauerConfiguration {
    data: ConfigurationData,
    angle_names: Vec<String>,
    angle_index: HashMap<String, AngleId>,
    vertex_index: HashMap<String, VertexId>,
    polygon_index: HashMap<String, PolygonId>,
    sigma: Vec<AngleId>,
    sigma_inv: Vec<AngleId>,
    vertex_of: Vec<VertexId>,
    polygon_of: Vec<PolygonId>,
    cycles: Vec<Vec<AngleId>>,
    polygons: Vec<Vec<AngleId>>,
    multiplicities: Vec<usize>,
}

impl PartialEq for BrauerConfiguration {
    fn eq(&self, other: &Self) -> bool {
        self.data == other.data
    }
}

impl Eq for BrauerConfiguration {}

impl fmt::Display for BrauerConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.data.to_bcf())
    }
}

impl TryFrom<ConfigurationData> for BrauerConfiguration {
    type Error = Error;

    fn try_from(data: ConfigurationData) -> Result<Self> {
        Self::from_data(data)
    }
}

impl BrauerConfiguration {
    pub fn from_data(data: ConfigurationData) -> Result<Self> {
        let report = data.validate();
        if !report.is_valid() {
            return Err(Error::Invalid(report));
        }

        let mut angle_names = Vec::new();
        let mut angle_index = HashMap::new();
        let mut vertex_of = Vec::new();
        let mut cycles = Vec::with_capacity(data.vertices.len());
        let mut multiplicities = Vec::with_capacity(data.vertices.len());
        for (vi, v) in data.vertices.iter().enumerate() {
            let mut cycle = Vec::with_capacity(v.cycle.len());
            for name in &v.cycle {
                let id = AngleId(angle_names.len());
                angle_names.push(name.clone());
                angle_index.insert(name.clone(), id);
                vertex_of.push(VertexId(vi));
                cycle.push(id);
            }
            cycles.push(cycle);
            multiplicities.push(v.multiplicity as usize);
        }

        let n = angle_names.len();
        let mut sigma = vec![AngleId(0); n];
        let mut sigma_inv = vec![AngleId(0); n];
        for cycle in &cycles {
            for (i, &a) in cycle.iter().enumerate() {
                let b = cycle[(i + 1) % cycle.len()];
                sigma[a.0] = b;
                sigma_inv[b.0] = a;
            }
        }

        let mut polygon_of = vec![PolygonId(0); n];
        let mut polygons = Vec::with_capacity(data.polygons.len());
        for (pi, p) in data.polygons.iter().enumerate() {
            let angles: Vec<AngleId> = p.angles.iter().map(|a| angle_index[a]).collect();
            for a in &angles {
                polygon_of[a.0] = PolygonId(pi);
            }
            polygons.push(angles);
        }

        let vertex_index = data
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.clone(), VertexId(i)))
            .collect();
        let polygon_index = data
            .polygons
            .iter()
            .enumerate()
            .map(|(i, p)| (p.id.clone(), PolygonId(i)))
            .collect();

        Ok(Self {
            data,
            angle_names,
            angle_index,
            vertex_index,
            polygon_index,
            sigma,
            sigma_inv,
            vertex_of,
            polygon_of,
            cycles,
            polygons,
            multiplicities,
        })
    }

    pub fn data(&self) -> &ConfigurationData {
        &self.data
    }

    pub fn to_bcf(&self) -> String {
        self.data.to_bcf()
    }

    pub fn num_angles(&self) -> usize {
        self.angle_names.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.cycles.len()
    }

    pub fn num_polygons(&self) -> usize {
        self.polygons.len()
    }

    pub fn angles(&self) -> impl Iterator<Item = AngleId> + '_ {
        (0..self.num_angles()).map(AngleId)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.num_vertices()).map(VertexId)
    }

    pub fn polygons(&self) -> impl Iterator<Item = PolygonId> + '_ {
        (0..self.num_polygons()).map(PolygonId)
    }

    pub fn angle(&self, name: &str) -> Result<AngleId> {
        self.angle_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownAngle(name.to_string()))
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId> {
        self.vertex_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn polygon(&self, name: &str) -> Result<PolygonId> {
        self.polygon_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownPolygon(name.to_string()))
    }

    pub fn angle_name(&self, a: AngleId) -> &str {
        &self.angle_names[a.0]
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.data.vertices[v.0].id
    }

    pub fn polygon_name(&self, p: PolygonId) -> &str {
        &self.data.polygons[p.0].id
    }

    pub fn sigma(&self, a: AngleId) -> AngleId {
        self.sigma[a.0]
    }

    pub fn sigma_inv(&self, a: AngleId) -> AngleId {
        self.sigma_inv[a.0]
    }

    /// `sigma^k(a)` for any integer `k`.
    pub fn sigma_pow(&self, a: AngleId, k: isize) -> AngleId {
        let cycle = &self.cycles[self.vertex_of[a.0].0];
        let len = cycle.len() as isize;
        let pos = self.position(a) as isize;
        cycle[(pos + k).rem_euclid(len) as usize]
    }

    /// Position of `a` in its vertex cycle as listed.
    pub fn position(&self, a: AngleId) -> usize {
        // angles are numbered cycle by cycle
        a.0 - self.cycles[self.vertex_of[a.0].0][0].0
    }

    pub fn vertex_of(&self, a: AngleId) -> VertexId {
        self.vertex_of[a.0]
    }

    pub fn polygon_of(&self, a: AngleId) -> PolygonId {
        self.polygon_of[a.0]
    }

    pub fn cycle(&self, v: VertexId) -> &[AngleId] {
        &self.cycles[v.0]
    }

    pub fn polygon_angles(&self, p: PolygonId) -> &[AngleId] {
        &self.polygons[p.0]
    }

    pub fn multiplicity(&self, v: VertexId) -> usize {
        self.multiplicities[v.0]
    }

    pub fn valency(&self, v: VertexId) -> usize {
        self.cycles[v.0].len()
    }

    /// Number of angles of `p` lying on `v`.
    pub fn occurrences(&self, v: VertexId, p: PolygonId) -> usize {
        self.polygons[p.0]
            .iter()
            .filter(|&&a| self.vertex_of[a.0] == v)
            .count()
    }

    /// Length `m(v) * val(v)` of the maximal cycle power at angle `a`.
    pub fn full_cycle_length(&self, a: AngleId) -> usize {
        let v = self.vertex_of(a);
        self.multiplicity(v) * self.valency(v)
    }

    pub fn classify_vertex(&self, v: VertexId) -> VertexClass {
        match (self.valency(v), self.multiplicity(v)) {
            (1, 1) => VertexClass::Truncated,
            (1, _) => VertexClass::ExternalNotTruncated,
            _ => VertexClass::Ordinary,
        }
    }

    pub fn classify_polygon(&self, p: PolygonId) -> PolygonClass {
        let size = self.polygons[p.0].len();
        let mut seen = HashSet::new();
        let is_self_folded = self.polygons[p.0]
            .iter()
            .any(|a| !seen.insert(self.vertex_of[a.0]));
        PolygonClass {
            size,
            is_edge: size == 2,
            is_self_folded,
        }
    }

    pub fn is_edge(&self, p: PolygonId) -> bool {
        self.polygons[p.0].len() == 2
    }

    /// The other angle of the edge containing `a`.
    pub fn bar(&self, a: AngleId) -> Result<AngleId> {
        let p = self.polygon_of(a);
        let angles = &self.polygons[p.0];
        if angles.len() != 2 {
            return Err(Error::NotAnEdge {
                angle: self.angle_name(a).to_string(),
                polygon: self.polygon_name(p).to_string(),
                size: angles.len(),
            });
        }
        Ok(if angles[0] == a { angles[1] } else { angles[0] })
    }

    /// Angle of `p` with the lexicographically smallest id; anchors the
    /// socle class of the projective at `p`.
    pub fn socle_representative(&self, p: PolygonId) -> AngleId {
        *self.polygons[p.0]
            .iter()
            .min_by(|a, b| self.angle_name(**a).cmp(self.angle_name(**b)))
            .expect("polygons are nonempty")
    }

    /// `s^{-1}(v)` contained in the polygon `p`.
    pub fn vertex_inside(&self, v: VertexId, p: PolygonId) -> bool {
        self.cycles[v.0].iter().all(|a| self.polygon_of[a.0] == p)
    }

    /// Same angles, polygons and multiplicities with every cycle traversed
    /// backwards from its anchor.
    pub fn reverse(&self) -> Self {
        let mut data = self.data.clone();
        for v in &mut data.vertices {
            if v.cycle.len() > 2 {
                v.cycle[1..].reverse();
            }
        }
        Self::from_data(data).expect("reversal preserves validity")
    }

    pub fn polygon_sizes(&self) -> BTreeSet<usize> {
        self.polygons.iter().map(Vec::len).collect()
    }

    pub fn is_brauer_graph(&self) -> bool {
        self.polygons.iter().all(|p| p.len() == 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX27: &str = include_str!("../../data/ex2_7.bcf");

    fn ex27() -> BrauerConfiguration {
        parse_configuration(EX27).unwrap()
    }

    #[test]
    fn valency_and_occurrences() {
        let c = ex27();
        assert_eq!(c.num_angles(), 19);
        assert_eq!(c.valency(c.vertex("w1").unwrap()), 6);
        assert_eq!(c.valency(c.vertex("w4").unwrap()), 1);
        let occ = |v: &str, p: &str| c.occurrences(c.vertex(v).unwrap(), c.polygon(p).unwrap());
        assert_eq!(occ("w1", "U4"), 2);
        assert_eq!(occ("w6", "U1"), 0);
        assert_eq!(occ("w3", "U1"), 3);
        assert!(matches!(c.vertex("w9"), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn vertex_and_polygon_classes() {
        let c = ex27();
        assert_eq!(c.classify_vertex(c.vertex("w6").unwrap()), VertexClass::Truncated);
        assert_eq!(
            c.classify_vertex(c.vertex("w4").unwrap()),
            VertexClass::ExternalNotTruncated
        );
        assert_eq!(c.classify_vertex(c.vertex("w1").unwrap()), VertexClass::Ordinary);

        let u4 = c.classify_polygon(c.polygon("U4").unwrap());
        assert_eq!((u4.size, u4.is_edge, u4.is_self_folded), (2, true, true));
        let u2 = c.classify_polygon(c.polygon("U2").unwrap());
        assert_eq!((u2.size, u2.is_edge, u2.is_self_folded), (2, true, false));
        let u1 = c.classify_polygon(c.polygon("U1").unwrap());
        assert_eq!((u1.size, u1.is_edge, u1.is_self_folded), (7, false, true));
        let folded: Vec<_> = c
            .polygons()
            .filter(|&p| c.classify_polygon(p).is_self_folded)
            .map(|p| c.polygon_name(p))
            .collect();
        assert_eq!(folded, ["U1", "U4", "U5"]);
    }

    #[test]
    fn bar_is_an_involution_on_edges() {
        let c = ex27();
        let d = c.angle("d").unwrap();
        assert_eq!(c.angle_name(c.bar(d).unwrap()), "d~");
        let g = c.angle("g").unwrap();
        assert_eq!(c.bar(c.bar(g).unwrap()).unwrap(), g);
        assert!(matches!(
            c.bar(c.angle("a1").unwrap()),
            Err(Error::NotAnEdge { size: 7, .. })
        ));
    }

    #[test]
    fn reverse_keeps_anchor() {
        let c = ex27();
        let r = c.reverse();
        let w2 = r.vertex("w2").unwrap();
        let names: Vec<_> = r.cycle(w2).iter().map(|&a| r.angle_name(a)).collect();
        assert_eq!(names, ["a2", "c~", "b"]);
        assert_eq!(r.reverse(), c);
    }

    #[test]
    fn sigma_powers_wrap() {
        let c = ex27();
        let a4 = c.angle("a4").unwrap();
        assert_eq!(c.angle_name(c.sigma_pow(a4, -2)), "b~");
        assert_eq!(c.angle_name(c.sigma_pow(a4, 3)), "a3");
        assert_eq!(c.sigma_inv(c.sigma(a4)), a4);
        assert_eq!(c.position(a4), 1);
    }

    #[test]
    fn socle_representative_is_smallest_id() {
        let c = ex27();
        let u4 = c.polygon("U4").unwrap();
        assert_eq!(c.angle_name(c.socle_representative(u4)), "d");
    }

    #[test]
    fn validation_reports_every_violation() {
        let data = ConfigurationData {
            vertices: vec![
                VertexCycle {
                    id: "v".into(),
                    multiplicity: 0,
                    cycle: vec!["a".into(), "b".into()],
                },
                VertexCycle {
                    id: "v".into(),
                    multiplicity: 1,
                    cycle: vec!["a".into()],
                },
            ],
            polygons: vec![
                Polygon {
                    id: "P".into(),
                    angles: vec!["a".into()],
                },
                Polygon {
                    id: "Q".into(),
                    angles: vec!["c".into(), "c".into()],
                },
            ],
        };
        let report = data.validate();
        let v = &report.violations;
        assert!(v.contains(&Violation::DuplicateVertex { vertex: "v".into() }));
        assert!(v.contains(&Violation::NonPositiveMultiplicity {
            vertex: "v".into(),
            multiplicity: 0
        }));
        assert!(v.contains(&Violation::DuplicateAngleInCycles { angle: "a".into() }));
        assert!(v.contains(&Violation::DuplicateAngleInPolygons { angle: "c".into() }));
        assert!(v.contains(&Violation::AngleWithoutPolygon { angle: "b".into() }));
        assert!(v.contains(&Violation::AngleWithoutVertex { angle: "c".into() }));
        assert!(v.contains(&Violation::PolygonTooSmall {
            polygon: "P".into(),
            size: 1
        }));
    }

    #[test]
    fn one_angle_polygon_cites_size_rule() {
        let data = parse_document("vertex v multiplicity 1 cycle a\npolygon P a\n").unwrap();
        let report = data.validate();
        assert_eq!(report.violations.len(), 1);
        assert!(report.to_string().contains("at least two"));
    }

    #[test]
    fn missing_cycle_angle_cites_totality() {
        let data =
            parse_document("vertex v multiplicity 1 cycle a\npolygon P a b\n").unwrap();
        let report = data.validate();
        assert_eq!(
            report.violations,
            [Violation::AngleWithoutVertex { angle: "b".into() }]
        );
        assert!(report.to_string().contains("sigma must be total"));
    }
}
