//! The bound quiver presentation of a Brauer configuration algebra and its
//! canonical path bases.
//!
//! Paths are read left to right: the walk starting with arrow `h` of length
//! `l` is `h sigma(h) ... sigma^{l-1}(h)`, running from polygon `[h]` to
//! `[sigma^l(h)]`. A path from `W` to `U` induces a map `P_U -> P_W`, and
//! composing induced maps is concatenating paths in the same order.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::config::{AngleId, BrauerConfiguration, PolygonId};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CanonicalPath {
    Identity(PolygonId),
    /// `C_h^r C_{h,f}` with `length = r * val(s(h)) + t`.
    Walk { start: AngleId, length: usize },
}

impl CanonicalPath {
    pub fn source(&self, cfg: &BrauerConfiguration) -> PolygonId {
        match *self {
            CanonicalPath::Identity(p) => p,
            CanonicalPath::Walk { start, .. } => cfg.polygon_of(start),
        }
    }

    pub fn target(&self, cfg: &BrauerConfiguration) -> PolygonId {
        match *self {
            CanonicalPath::Identity(p) => p,
            CanonicalPath::Walk { start, length } => {
                cfg.polygon_of(cfg.sigma_pow(start, length as isize))
            }
        }
    }

    pub fn len(&self) -> usize {
        match *self {
            CanonicalPath::Identity(_) => 0,
            CanonicalPath::Walk { length, .. } => length,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, CanonicalPath::Identity(_))
    }

    pub fn arrows(&self, cfg: &BrauerConfiguration) -> Vec<AngleId> {
        match *self {
            CanonicalPath::Identity(_) => Vec::new(),
            CanonicalPath::Walk { start, length } => {
                (0..length as isize).map(|k| cfg.sigma_pow(start, k)).collect()
            }
        }
    }

    /// `(r, t)` with `length = r * val + t` and `1 <= t <= val`.
    pub fn power_and_steps(&self, cfg: &BrauerConfiguration) -> Option<(usize, usize)> {
        match *self {
            CanonicalPath::Identity(_) => None,
            CanonicalPath::Walk { start, length } => {
                let val = cfg.valency(cfg.vertex_of(start));
                Some(((length - 1) / val, (length - 1) % val + 1))
            }
        }
    }

    pub fn is_full_cycle(&self, cfg: &BrauerConfiguration) -> bool {
        match *self {
            CanonicalPath::Identity(_) => false,
            CanonicalPath::Walk { start, length } => length == cfg.full_cycle_length(start),
        }
    }

    pub fn display(&self, cfg: &BrauerConfiguration) -> String {
        match *self {
            CanonicalPath::Identity(p) => format!("e_{}", cfg.polygon_name(p)),
            CanonicalPath::Walk { .. } => self
                .arrows(cfg)
                .iter()
                .map(|&a| cfg.angle_name(a))
                .collect::<Vec<_>>()
                .join("·"),
        }
    }
}

/// Replaces a full cycle power by the socle representative of its polygon.
pub fn normalize(cfg: &BrauerConfiguration, path: CanonicalPath) -> CanonicalPath {
    if path.is_full_cycle(cfg) {
        let rep = cfg.socle_representative(path.source(cfg));
        CanonicalPath::Walk {
            start: rep,
            length: cfg.full_cycle_length(rep),
        }
    } else {
        path
    }
}

/// The walk of the given length from `h`, or `None` if it is zero in the
/// algebra (longer than the maximal cycle power).
pub fn walk(cfg: &BrauerConfiguration, h: AngleId, length: usize) -> Option<CanonicalPath> {
    if length == 0 {
        return Some(CanonicalPath::Identity(cfg.polygon_of(h)));
    }
    (length <= cfg.full_cycle_length(h)).then(|| normalize(cfg, CanonicalPath::Walk { start: h, length }))
}

/// `C_{h, sigma^t(h)}`.
pub fn special_path(cfg: &BrauerConfiguration, h: AngleId, t: usize) -> Result<CanonicalPath> {
    let val = cfg.valency(cfg.vertex_of(h));
    if t == 0 || t > val {
        return Err(Error::StepOutOfRange {
            angle: cfg.angle_name(h).to_string(),
            steps: t,
            valency: val,
        });
    }
    Ok(CanonicalPath::Walk {
        start: h,
        length: t,
    })
}

/// The product `p q` (first `p`, then `q`) in the algebra, `None` if zero.
pub fn multiply(
    cfg: &BrauerConfiguration,
    p: CanonicalPath,
    q: CanonicalPath,
) -> Result<Option<CanonicalPath>> {
    if p.target(cfg) != q.source(cfg) {
        return Err(Error::NotComposable {
            left: p.display(cfg),
            left_end: cfg.polygon_name(p.target(cfg)).to_string(),
            right: q.display(cfg),
            right_start: cfg.polygon_name(q.source(cfg)).to_string(),
        });
    }
    Ok(match (p, q) {
        (CanonicalPath::Identity(_), _) => Some(normalize(cfg, q)),
        (_, CanonicalPath::Identity(_)) => Some(normalize(cfg, p)),
        (
            CanonicalPath::Walk { start: h, length: l1 },
            CanonicalPath::Walk { start: g, length: l2 },
        ) => {
            if g != cfg.sigma_pow(h, l1 as isize) {
                None
            } else {
                walk(cfg, h, l1 + l2)
            }
        }
    })
}

/// Canonical basis of `Hom(P_u, P_w)`: paths from `w` to `u`, with the
/// identity appended and full cycles merged into one socle class when
/// `u == w`.
pub fn hom_basis(cfg: &BrauerConfiguration, u: PolygonId, w: PolygonId) -> Vec<CanonicalPath> {
    let mut basis = Vec::new();
    let socle = (u == w).then(|| cfg.socle_representative(w));
    for v in cfg.vertices() {
        for &h in cfg.cycle(v) {
            if cfg.polygon_of(h) != w {
                continue;
            }
            let full = cfg.full_cycle_length(h);
            for length in 1..=full {
                if cfg.polygon_of(cfg.sigma_pow(h, length as isize)) != u {
                    continue;
                }
                if length == full && socle.is_some_and(|rep| rep != h) {
                    continue;
                }
                basis.push(CanonicalPath::Walk { start: h, length });
            }
        }
    }
    if u == w {
        basis.push(CanonicalPath::Identity(u));
    }
    basis
}

/// Closed-form `dim Hom(P_u, P_w)`.
pub fn hom_dim(cfg: &BrauerConfiguration, u: PolygonId, w: PolygonId) -> usize {
    let sum: usize = cfg
        .vertices()
        .map(|v| cfg.multiplicity(v) * cfg.occurrences(v, u) * cfg.occurrences(v, w))
        .sum();
    if u == w {
        2 + sum - cfg.polygon_angles(u).len()
    } else {
        sum
    }
}

/// Entry `[u][w]` is `dim Hom(P_u, P_w)`; rows and columns follow polygon
/// file order.
pub fn cartan_matrix(cfg: &BrauerConfiguration) -> Vec<Vec<usize>> {
    cfg.polygons()
        .map(|u| cfg.polygons().map(|w| hom_dim(cfg, u, w)).collect())
        .collect()
}

pub fn total_dimension(cfg: &BrauerConfiguration) -> usize {
    cartan_matrix(cfg).iter().flatten().sum()
}

/// Canonical bases of all `Hom(P_u, P_w)` with coordinate lookup.
#[derive(Clone, Debug)]
pub struct BasisTable {
    bases: Vec<Vec<Vec<CanonicalPath>>>,
    index: Vec<Vec<HashMap<CanonicalPath, usize>>>,
}

impl BasisTable {
    pub fn new(cfg: &BrauerConfiguration) -> Self {
        let bases: Vec<Vec<Vec<CanonicalPath>>> = cfg
            .polygons()
            .map(|u| cfg.polygons().map(|w| hom_basis(cfg, u, w)).collect())
            .collect();
        let index = bases
            .iter()
            .map(|row| {
                row.iter()
                    .map(|b| b.iter().enumerate().map(|(i, &p)| (p, i)).collect())
                    .collect()
            })
            .collect();
        Self { bases, index }
    }

    pub fn basis(&self, u: PolygonId, w: PolygonId) -> &[CanonicalPath] {
        &self.bases[u.0][w.0]
    }

    pub fn dim(&self, u: PolygonId, w: PolygonId) -> usize {
        self.bases[u.0][w.0].len()
    }

    /// Coordinate of a normalized path in the basis of `Hom(P_u, P_w)`.
    pub fn index_of(&self, u: PolygonId, w: PolygonId, path: &CanonicalPath) -> Option<usize> {
        self.index[u.0][w.0].get(path).copied()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub angle: AngleId,
    pub from: PolygonId,
    pub to: PolygonId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuiverPresentation {
    pub nodes: Vec<PolygonId>,
    pub arrows: Vec<Arrow>,
    /// Pairs of full cycle powers at two angles of the same polygon.
    pub bc1_relations: Vec<(CanonicalPath, CanonicalPath)>,
    /// Composable arrow pairs that vanish.
    pub bc2_relations: Vec<(AngleId, AngleId)>,
}

/// Whether the arrow pair `a b` occurs inside some maximal cycle power.
pub fn is_subpath_of_cycle(cfg: &BrauerConfiguration, a: AngleId, b: AngleId) -> bool {
    b == cfg.sigma(a) && cfg.full_cycle_length(a) >= 2
}

pub fn quiver(cfg: &BrauerConfiguration) -> QuiverPresentation {
    let nodes = cfg.polygons().collect();
    let arrows = cfg
        .angles()
        .map(|h| Arrow {
            angle: h,
            from: cfg.polygon_of(h),
            to: cfg.polygon_of(cfg.sigma(h)),
        })
        .collect();
    let mut bc1_relations = Vec::new();
    for p in cfg.polygons() {
        let angles = cfg.polygon_angles(p);
        for (i, &h) in angles.iter().enumerate() {
            for &f in &angles[i + 1..] {
                let cyc = |x: AngleId| CanonicalPath::Walk {
                    start: x,
                    length: cfg.full_cycle_length(x),
                };
                bc1_relations.push((cyc(h), cyc(f)));
            }
        }
    }
    let mut bc2_relations = Vec::new();
    for a in cfg.angles() {
        let mid = cfg.polygon_of(cfg.sigma(a));
        for &b in cfg.polygon_angles(mid) {
            if !is_subpath_of_cycle(cfg, a, b) {
                bc2_relations.push((a, b));
            }
        }
    }
    QuiverPresentation {
        nodes,
        arrows,
        bc1_relations,
        bc2_relations,
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

impl QuiverPresentation {
    pub fn to_dot(&self, cfg: &BrauerConfiguration) -> String {
        let mut out = String::from("digraph Q {\n");
        for &p in &self.nodes {
            let name = dot_escape(cfg.polygon_name(p));
            let _ = writeln!(out, "  \"{name}\" [label=\"{name}\"];");
        }
        for a in &self.arrows {
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{}\"];",
                dot_escape(cfg.polygon_name(a.from)),
                dot_escape(cfg.polygon_name(a.to)),
                dot_escape(cfg.angle_name(a.angle))
            );
        }
        out.push_str("}\n");
        out
    }

    pub fn relations_text(&self, cfg: &BrauerConfiguration) -> String {
        let mut out = String::new();
        out.push_str("# BC1\n");
        for (l, r) in &self.bc1_relations {
            let _ = writeln!(out, "{} = {}", l.display(cfg), r.display(cfg));
        }
        out.push_str("# BC2\n");
        for &(a, b) in &self.bc2_relations {
            let _ = writeln!(out, "{}·{} = 0", cfg.angle_name(a), cfg.angle_name(b));
        }
        out
    }
}
