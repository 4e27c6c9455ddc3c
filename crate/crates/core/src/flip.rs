//! Condition (E), the five-way angle decomposition at a polygon, and left
//! and right flips.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::config::{
    are_isomorphic, AngleId, BrauerConfiguration, ConfigurationData, PolygonId, VertexCycle,
    VertexId,
};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Left,
    Right,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Left => "left",
            Direction::Right => "right",
        })
    }
}

impl std::str::FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "left" => Ok(Direction::Left),
            "right" => Ok(Direction::Right),
            _ => Err(format!("direction must be `left` or `right`, got `{s}`")),
        }
    }
}

/// An angle `e` of the polygon whose neighbour lies in a polygon that is
/// neither an edge nor the polygon itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub angle: AngleId,
    pub offending: PolygonId,
}

pub fn condition_e_witness(
    cfg: &BrauerConfiguration,
    v: PolygonId,
    direction: Direction,
) -> Option<Witness> {
    cfg.polygon_angles(v).iter().find_map(|&e| {
        let nb = match direction {
            Direction::Left => cfg.sigma_inv(e),
            Direction::Right => cfg.sigma(e),
        };
        let q = cfg.polygon_of(nb);
        (q != v && !cfg.is_edge(q)).then_some(Witness {
            angle: e,
            offending: q,
        })
    })
}

pub fn satisfies_condition_e(cfg: &BrauerConfiguration, v: PolygonId, direction: Direction) -> bool {
    condition_e_witness(cfg, v, direction).is_none()
}

fn condition_e_error(cfg: &BrauerConfiguration, v: PolygonId, direction: Direction, w: Witness) -> Error {
    Error::ConditionE {
        polygon: cfg.polygon_name(v).to_string(),
        direction: direction.to_string(),
        angle: cfg.angle_name(w.angle).to_string(),
        offending: cfg.polygon_name(w.offending).to_string(),
    }
}

/// The decomposition `H = H1 ⊔ ... ⊔ H5` at a polygon satisfying the left
/// condition (E). Angle lists are in canonical order: vertices in file
/// order, cycle order within a vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlipDecomposition {
    pub polygon: PolygonId,
    pub h1: Vec<AngleId>,
    pub h2: Vec<AngleId>,
    pub h3: Vec<AngleId>,
    pub h4: Vec<AngleId>,
    pub h5: Vec<AngleId>,
    /// `p(f)`, defined off `H1`.
    pub p: Vec<Option<AngleId>>,
    /// `n(f)`, defined off `H1`.
    pub n: Vec<Option<AngleId>>,
    /// `x_f`, defined on `H4`.
    pub x: Vec<Option<AngleId>>,
}

impl FlipDecomposition {
    /// Which of the five sets contains `h` (1-based).
    pub fn row(&self, h: AngleId) -> usize {
        [&self.h1, &self.h2, &self.h3, &self.h4, &self.h5]
            .iter()
            .position(|s| s.contains(&h))
            .map(|i| i + 1)
            .expect("the five sets cover every angle")
    }

    /// `H2 ⊔ H3` in canonical order: the index set of the degree 0 summands
    /// of the mutation complex.
    pub fn h23(&self) -> Vec<AngleId> {
        let mut out: Vec<AngleId> = self.h2.iter().chain(&self.h3).copied().collect();
        out.sort_unstable();
        out
    }

    pub fn p_of(&self, f: AngleId) -> AngleId {
        self.p[f.0].expect("p is defined off H1")
    }

    pub fn n_of(&self, f: AngleId) -> AngleId {
        self.n[f.0].expect("n is defined off H1")
    }

    pub fn x_of(&self, f: AngleId) -> AngleId {
        self.x[f.0].expect("x is defined on H4")
    }

    /// Key/value dump with angle names.
    pub fn to_text(&self, cfg: &BrauerConfiguration) -> String {
        let names = |s: &[AngleId]| {
            s.iter()
                .map(|&a| cfg.angle_name(a))
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut out = format!("polygon={}\n", cfg.polygon_name(self.polygon));
        for (k, s) in [
            ("H1", &self.h1),
            ("H2", &self.h2),
            ("H3", &self.h3),
            ("H4", &self.h4),
            ("H5", &self.h5),
        ] {
            out.push_str(&format!("{k}={}\n", names(s)));
        }
        let pairs = |m: &[Option<AngleId>]| {
            cfg.angles()
                .filter_map(|a| m[a.0].map(|b| format!("{}:{}", cfg.angle_name(a), cfg.angle_name(b))))
                .collect::<Vec<_>>()
                .join(",")
        };
        out.push_str(&format!("p={}\n", pairs(&self.p)));
        out.push_str(&format!("n={}\n", pairs(&self.n)));
        out.push_str(&format!("x={}\n", pairs(&self.x)));
        out
    }
}

pub fn angle_decomposition(cfg: &BrauerConfiguration, v: PolygonId) -> Result<FlipDecomposition> {
    if let Some(w) = condition_e_witness(cfg, v, Direction::Left) {
        return Err(condition_e_error(cfg, v, Direction::Left, w));
    }
    let in_v = |a: AngleId| cfg.polygon_of(a) == v;
    let n_angles = cfg.num_angles();
    let (mut h1, mut h2, mut h3, mut h4, mut h5) = (vec![], vec![], vec![], vec![], vec![]);
    let mut p = vec![None; n_angles];
    let mut n = vec![None; n_angles];
    let mut x = vec![None; n_angles];

    for a in cfg.angles() {
        let whole = cfg.vertex_inside(cfg.vertex_of(a), v);
        if in_v(a) && whole {
            h1.push(a);
            continue;
        }
        // the vertex leaves V, so both walks terminate within one turn
        let mut c = 1;
        while in_v(cfg.sigma_pow(a, -c)) {
            c += 1;
        }
        let mut d = 1;
        while in_v(cfg.sigma_pow(a, d)) {
            d += 1;
        }
        p[a.0] = Some(cfg.sigma_pow(a, -c));
        n[a.0] = Some(cfg.sigma_pow(a, d));
        if in_v(a) {
            if in_v(cfg.sigma(a)) {
                h2.push(a);
            } else {
                h3.push(a);
            }
        }
    }

    let mut by_target: HashMap<AngleId, AngleId> = HashMap::new();
    for &e in cfg.polygon_angles(v) {
        let prev = cfg.sigma_inv(e);
        if !in_v(prev) {
            by_target.insert(cfg.bar(prev)?, e);
        }
    }
    for f in cfg.angles().filter(|&f| !in_v(f)) {
        match by_target.get(&n[f.0].expect("defined off V")) {
            Some(&e) => {
                x[f.0] = Some(e);
                h4.push(f);
            }
            None => h5.push(f),
        }
    }

    Ok(FlipDecomposition {
        polygon: v,
        h1,
        h2,
        h3,
        h4,
        h5,
        p,
        n,
        x,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipResult {
    pub config: BrauerConfiguration,
    /// `gamma[v']` is the vertex of the input corresponding to vertex `v'`
    /// of the output.
    pub gamma: Vec<VertexId>,
}

impl FlipResult {
    pub fn gamma_names(&self, original: &BrauerConfiguration) -> Vec<(String, String)> {
        self.config
            .vertices()
            .map(|v| {
                (
                    self.config.vertex_name(v).to_string(),
                    original.vertex_name(self.gamma[v.0]).to_string(),
                )
            })
            .collect()
    }
}

/// `sigma'` and the vertex `gamma(s'(h))` for every angle.
pub fn flipped_sigma(
    cfg: &BrauerConfiguration,
    dec: &FlipDecomposition,
) -> Result<(Vec<AngleId>, Vec<VertexId>)> {
    let mut sigma = vec![AngleId(0); cfg.num_angles()];
    let mut gamma = vec![VertexId(0); cfg.num_angles()];
    for h in cfg.angles() {
        let (next, vertex) = match dec.row(h) {
            1 => (cfg.sigma(h), cfg.vertex_of(h)),
            2 => (cfg.sigma(h), cfg.vertex_of(cfg.bar(dec.p_of(h))?)),
            3 => {
                let b = cfg.bar(dec.p_of(h))?;
                (b, cfg.vertex_of(b))
            }
            4 => (dec.x_of(h), cfg.vertex_of(h)),
            _ => (dec.n_of(h), cfg.vertex_of(h)),
        };
        sigma[h.0] = next;
        gamma[h.0] = vertex;
    }
    Ok((sigma, gamma))
}

fn left_flip(cfg: &BrauerConfiguration, v: PolygonId) -> Result<FlipResult> {
    let dec = angle_decomposition(cfg, v)?;
    let identity = || FlipResult {
        config: cfg.clone(),
        gamma: cfg.vertices().collect(),
    };
    if dec.h2.is_empty() && dec.h3.is_empty() {
        return Ok(identity());
    }
    let (sigma, gamma) = flipped_sigma(cfg, &dec)?;

    let mut seen = vec![false; cfg.num_angles()];
    let mut new_cycles: Vec<Option<Vec<AngleId>>> = vec![None; cfg.num_vertices()];
    for start in cfg.angles() {
        if seen[start.0] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut h = start;
        while !seen[h.0] {
            seen[h.0] = true;
            cycle.push(h);
            h = sigma[h.0];
        }
        if h != start {
            return Err(Error::Internal("flipped sigma is not a permutation".into()));
        }
        let w = gamma[start.0];
        if cycle.iter().any(|a| gamma[a.0] != w) {
            return Err(Error::Internal(format!(
                "vertex correspondence is not constant on the new cycle through `{}`",
                cfg.angle_name(start)
            )));
        }
        if new_cycles[w.0].replace(cycle).is_some() {
            return Err(Error::Internal(format!(
                "two new cycles correspond to vertex `{}`",
                cfg.vertex_name(w)
            )));
        }
    }

    let mut vertices = Vec::with_capacity(cfg.num_vertices());
    for w in cfg.vertices() {
        let cycle = new_cycles[w.0].take().ok_or_else(|| {
            Error::Internal(format!("no new cycle corresponds to `{}`", cfg.vertex_name(w)))
        })?;
        let anchor = (0..cycle.len())
            .min_by_key(|&i| cfg.angle_name(cycle[i]))
            .expect("cycles are nonempty");
        vertices.push(VertexCycle {
            id: cfg.vertex_name(w).to_string(),
            multiplicity: cfg.multiplicity(w) as i64,
            cycle: (0..cycle.len())
                .map(|k| cfg.angle_name(cycle[(anchor + k) % cycle.len()]).to_string())
                .collect(),
        });
    }
    let data = ConfigurationData {
        vertices,
        polygons: cfg.data().polygons.clone(),
    };
    Ok(FlipResult {
        config: BrauerConfiguration::from_data(data)?,
        gamma: cfg.vertices().collect(),
    })
}

/// Left flip, or right flip computed as reverse, left flip, reverse.
pub fn flip(cfg: &BrauerConfiguration, v: PolygonId, direction: Direction) -> Result<FlipResult> {
    if let Some(w) = condition_e_witness(cfg, v, direction) {
        return Err(condition_e_error(cfg, v, direction, w));
    }
    match direction {
        Direction::Left => left_flip(cfg, v),
        Direction::Right => {
            let r = left_flip(&cfg.reverse(), v)?;
            Ok(FlipResult {
                config: r.config.reverse(),
                gamma: r.gamma,
            })
        }
    }
}

/// Applies the steps left to right. Polygon ids are stable under flips.
pub fn flip_sequence(
    cfg: &BrauerConfiguration,
    steps: &[(PolygonId, Direction)],
) -> Result<BrauerConfiguration> {
    let mut current = cfg.clone();
    for (index, &(v, d)) in steps.iter().enumerate() {
        current = flip(&current, v, d)
            .map_err(|e| Error::FlipStep {
                index,
                source: Box::new(e),
            })?
            .config;
    }
    Ok(current)
}

/// Smallest `k <= max` with the `k`-fold flip isomorphic to the input.
pub fn flip_period(
    cfg: &BrauerConfiguration,
    v: PolygonId,
    direction: Direction,
    max: usize,
) -> Result<Option<usize>> {
    let mut current = cfg.clone();
    for k in 1..=max {
        current = flip(&current, v, direction)?.config;
        if are_isomorphic(cfg, &current).is_some() {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{parse_configuration, random_configuration, RandomSpec};

    fn load(text: &str) -> BrauerConfiguration {
        parse_configuration(text).unwrap()
    }

    fn ex27() -> BrauerConfiguration {
        load(include_str!("../data/ex2_7.bcf"))
    }

    fn d4() -> BrauerConfiguration {
        load(include_str!("../data/ex2_12_d4.bcf"))
    }

    fn names(c: &BrauerConfiguration, s: &[AngleId]) -> Vec<String> {
        let mut v: Vec<String> = s.iter().map(|&a| c.angle_name(a).to_string()).collect();
        v.sort();
        v
    }

    #[test]
    fn condition_e_examples() {
        let c = ex27();
        let u1 = c.polygon("U1").unwrap();
        assert!(satisfies_condition_e(&c, u1, Direction::Left));
        let k = load(include_str!("../data/two_3gons.bcf"));
        for p in ["U", "V"] {
            let w = condition_e_witness(&k, k.polygon(p).unwrap(), Direction::Left).unwrap();
            assert_ne!(k.polygon_name(w.offending), p);
        }
        let d = d4();
        assert!(satisfies_condition_e(&d, d.polygon("V1").unwrap(), Direction::Left));
        for p in ["V2", "V3", "V4"] {
            let w = condition_e_witness(&d, d.polygon(p).unwrap(), Direction::Left).unwrap();
            assert_eq!(d.polygon_name(w.offending), "V1");
        }
    }

    #[test]
    fn decomposition_of_example() {
        let c = ex27();
        let dec = angle_decomposition(&c, c.polygon("U1").unwrap()).unwrap();
        assert_eq!(names(&c, &dec.h1), ["a6"]);
        assert_eq!(names(&c, &dec.h2), ["a3", "a4"]);
        assert_eq!(names(&c, &dec.h3), ["a1", "a2", "a5", "a7"]);
        assert_eq!(names(&c, &dec.h4), ["c~", "d", "e~", "g~"]);
        assert_eq!(names(&c, &dec.h5), ["b", "b~", "c", "d~", "e", "f", "f~", "g"]);
        let a = |n: &str| c.angle(n).unwrap();
        assert_eq!(dec.x_of(a("c~")), a("a3"));
        assert_eq!(dec.x_of(a("d")), a("a2"));
        assert_eq!(dec.x_of(a("e~")), a("a1"));
        assert_eq!(dec.x_of(a("g~")), a("a7"));
        assert_eq!(dec.p_of(a("a4")), a("b~"));
        let text = dec.to_text(&c);
        assert!(text.contains("H1=a6\n"));
        assert!(text.contains("a4:b~"));
    }

    #[test]
    fn left_flip_of_example_matches_golden_file() {
        let c = ex27();
        let r = flip(&c, c.polygon("U1").unwrap(), Direction::Left).unwrap();
        let golden = load(include_str!("../data/ex2_7_flipped.bcf"));
        assert_eq!(r.config, golden);
        assert_eq!(r.config.multiplicity(r.config.vertex("w4").unwrap()), 2);
    }

    #[test]
    fn whole_component_flip_is_identity() {
        let c = load(include_str!("../data/kx2.bcf"));
        let r = flip(&c, c.polygon("E").unwrap(), Direction::Left).unwrap();
        assert_eq!(r.config, c);
    }

    #[test]
    fn d4_flip_is_isomorphic_to_original() {
        let c = d4();
        let r = flip(&c, c.polygon("V1").unwrap(), Direction::Left).unwrap();
        assert!(are_isomorphic(&c, &r.config).is_some());
    }

    #[test]
    fn refusal_carries_witness() {
        let c = d4();
        let err = flip(&c, c.polygon("V2").unwrap(), Direction::Left).unwrap_err();
        assert!(matches!(err, Error::ConditionE { ref offending, .. } if offending == "V1"));
        let err = flip_sequence(
            &c,
            &[
                (c.polygon("V1").unwrap(), Direction::Left),
                (c.polygon("V2").unwrap(), Direction::Left),
            ],
        )
        .unwrap_err();
        assert!(matches!(err, Error::FlipStep { index: 1, .. }));
    }

    #[test]
    fn empty_sequence_is_identity() {
        let c = ex27();
        assert_eq!(flip_sequence(&c, &[]).unwrap(), c);
    }

    #[test]
    fn left_then_right_on_example() {
        let c = ex27();
        let u1 = c.polygon("U1").unwrap();
        let back = flip_sequence(&c, &[(u1, Direction::Left), (u1, Direction::Right)]).unwrap();
        assert!(are_isomorphic(&c, &back).is_some());
    }

    #[test]
    fn d4_period() {
        let c = d4();
        let period = flip_period(&c, c.polygon("V1").unwrap(), Direction::Left, 12).unwrap();
        assert_eq!(period, Some(1));
    }

    #[test]
    fn flips_preserve_structure_on_random_configurations() {
        for seed in 0..300u64 {
            let c = random_configuration(&RandomSpec::new(2 + (seed % 23) as usize, seed)).unwrap();
            for v in c.polygons() {
                for dir in [Direction::Left, Direction::Right] {
                    let Ok(r) = flip(&c, v, dir) else {
                        assert!(!satisfies_condition_e(&c, v, dir));
                        continue;
                    };
                    let d = &r.config;
                    assert_eq!(d.num_angles(), c.num_angles());
                    assert_eq!(d.num_vertices(), c.num_vertices());
                    assert_eq!(d.data().polygons, c.data().polygons);
                    let mut m1: Vec<_> = c.vertices().map(|x| c.multiplicity(x)).collect();
                    let mut m2: Vec<_> = d.vertices().map(|x| d.multiplicity(x)).collect();
                    m1.sort();
                    m2.sort();
                    assert_eq!(m1, m2);
                }
                if satisfies_condition_e(&c, v, Direction::Left) {
                    let dec = angle_decomposition(&c, v).unwrap();
                    let total = dec.h1.len() + dec.h2.len() + dec.h3.len() + dec.h4.len() + dec.h5.len();
                    assert_eq!(total, c.num_angles());
                    for h in c.angles() {
                        let hits = [&dec.h1, &dec.h2, &dec.h3, &dec.h4, &dec.h5]
                            .iter()
                            .filter(|s| s.contains(&h))
                            .count();
                        assert_eq!(hits, 1);
                    }
                }
            }
        }
    }

    #[test]
    fn brauer_graphs_satisfy_condition_e_everywhere() {
        for seed in 0..100u64 {
            let spec = RandomSpec {
                n_angles: 2 * (1 + (seed % 10) as usize),
                min_polygon: 2,
                max_polygon: 2,
                max_multiplicity: 3,
                seed,
            };
            let c = random_configuration(&spec).unwrap();
            for v in c.polygons() {
                assert!(satisfies_condition_e(&c, v, Direction::Left));
                assert!(flip(&c, v, Direction::Left).is_ok());
            }
        }
    }
}
