//! Isomorphism search between configurations by backtracking over angle
//! assignments. Whole vertex cycles are assigned at once, so only the anchor
//! image of each cycle is ever guessed.

use std::collections::HashMap;

use super::{AngleId, BrauerConfiguration, PolygonId};

/// An angle bijection `beta` with `beta . sigma1 = sigma2 . beta` carrying
/// polygons onto polygons and preserving multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AngleBijection {
    pub images: Vec<AngleId>,
}

impl AngleBijection {
    pub fn apply(&self, a: AngleId) -> AngleId {
        self.images[a.0]
    }

    /// Pairs of angle names, in the angle order of the source.
    pub fn named_pairs(
        &self,
        from: &BrauerConfiguration,
        to: &BrauerConfiguration,
    ) -> Vec<(String, String)> {
        from.angles()
            .map(|a| {
                (
                    from.angle_name(a).to_string(),
                    to.angle_name(self.apply(a)).to_string(),
                )
            })
            .collect()
    }

    /// Re-checks every defining property by direct application.
    pub fn verify(&self, from: &BrauerConfiguration, to: &BrauerConfiguration) -> bool {
        let n = from.num_angles();
        if n != to.num_angles() || self.images.len() != n {
            return false;
        }
        let mut hit = vec![false; n];
        for a in from.angles() {
            let b = self.apply(a);
            if b.0 >= n || std::mem::replace(&mut hit[b.0], true) {
                return false;
            }
            if self.apply(from.sigma(a)) != to.sigma(b) {
                return false;
            }
            if from.multiplicity(from.vertex_of(a)) != to.multiplicity(to.vertex_of(b)) {
                return false;
            }
        }
        // polygons to polygons: the image of each polygon lies in one polygon
        // of the same size
        from.polygons().all(|p| {
            let angles = from.polygon_angles(p);
            let q = to.polygon_of(self.apply(angles[0]));
            to.polygon_angles(q).len() == angles.len()
                && angles.iter().all(|&a| to.polygon_of(self.apply(a)) == q)
        })
    }
}

type Signature = (usize, Vec<usize>);

fn signatures(cfg: &BrauerConfiguration) -> Vec<Signature> {
    cfg.angles()
        .map(|a| {
            let v = cfg.vertex_of(a);
            let sizes = (0..cfg.valency(v) as isize)
                .map(|k| cfg.polygon_angles(cfg.polygon_of(cfg.sigma_pow(a, k))).len())
                .collect();
            (cfg.multiplicity(v), sizes)
        })
        .collect()
}

struct Search<'a> {
    c1: &'a BrauerConfiguration,
    c2: &'a BrauerConfiguration,
    sig1: Vec<Signature>,
    sig2: Vec<Signature>,
    map: Vec<Option<AngleId>>,
    used: Vec<bool>,
    poly_map: Vec<Option<PolygonId>>,
    poly_used: Vec<bool>,
}

impl Search<'_> {
    fn next_angle(&self) -> Option<AngleId> {
        let unmapped = || self.c1.angles().filter(|a| self.map[a.0].is_none());
        unmapped()
            .find(|&a| self.poly_map[self.c1.polygon_of(a).0].is_some())
            .or_else(|| unmapped().next())
    }

    /// Maps the cycle through `a` onto the cycle through `b`, anchor to
    /// anchor. Returns the polygons newly mapped, or `None` on conflict (in
    /// which case nothing is left assigned).
    fn assign_cycle(&mut self, a: AngleId, b: AngleId) -> Option<Vec<PolygonId>> {
        let len = self.c1.valency(self.c1.vertex_of(a));
        let mut new_polys = Vec::new();
        let mut assigned = Vec::new();
        let mut ok = true;
        for k in 0..len as isize {
            let x = self.c1.sigma_pow(a, k);
            let y = self.c2.sigma_pow(b, k);
            if self.map[x.0].is_some() || self.used[y.0] {
                ok = false;
                break;
            }
            let px = self.c1.polygon_of(x);
            let py = self.c2.polygon_of(y);
            match self.poly_map[px.0] {
                Some(q) if q != py => {
                    ok = false;
                    break;
                }
                Some(_) => {}
                None => {
                    if self.poly_used[py.0] {
                        ok = false;
                        break;
                    }
                    self.poly_map[px.0] = Some(py);
                    self.poly_used[py.0] = true;
                    new_polys.push(px);
                }
            }
            self.map[x.0] = Some(y);
            self.used[y.0] = true;
            assigned.push((x, y));
        }
        if ok {
            return Some(new_polys);
        }
        self.undo(&assigned, &new_polys);
        None
    }

    fn undo(&mut self, assigned: &[(AngleId, AngleId)], polys: &[PolygonId]) {
        for &(x, y) in assigned {
            self.map[x.0] = None;
            self.used[y.0] = false;
        }
        for &p in polys {
            if let Some(q) = self.poly_map[p.0].take() {
                self.poly_used[q.0] = false;
            }
        }
    }

    fn run(&mut self) -> bool {
        let Some(a) = self.next_angle() else {
            return true;
        };
        let target_poly = self.poly_map[self.c1.polygon_of(a).0];
        let candidates: Vec<AngleId> = self
            .c2
            .angles()
            .filter(|&b| {
                !self.used[b.0]
                    && self.sig1[a.0] == self.sig2[b.0]
                    && match target_poly {
                        Some(q) => self.c2.polygon_of(b) == q,
                        None => !self.poly_used[self.c2.polygon_of(b).0],
                    }
            })
            .collect();
        for b in candidates {
            if let Some(polys) = self.assign_cycle(a, b) {
                if self.run() {
                    return true;
                }
                let len = self.c1.valency(self.c1.vertex_of(a)) as isize;
                let assigned: Vec<_> = (0..len)
                    .map(|k| (self.c1.sigma_pow(a, k), self.c2.sigma_pow(b, k)))
                    .collect();
                self.undo(&assigned, &polys);
            }
        }
        false
    }
}

fn multiset<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort();
    v
}

/// Searches for an isomorphism `c1 -> c2`.
pub fn are_isomorphic(c1: &BrauerConfiguration, c2: &BrauerConfiguration) -> Option<AngleBijection> {
    if c1.num_angles() != c2.num_angles()
        || c1.num_vertices() != c2.num_vertices()
        || c1.num_polygons() != c2.num_polygons()
    {
        return None;
    }
    let sig1 = signatures(c1);
    let sig2 = signatures(c2);
    if multiset(sig1.clone()) != multiset(sig2.clone()) {
        return None;
    }
    let poly_sizes = |c: &BrauerConfiguration| {
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for p in c.polygons() {
            *counts.entry(c.polygon_angles(p).len()).or_default() += 1;
        }
        multiset(counts.into_iter().collect::<Vec<_>>())
    };
    if poly_sizes(c1) != poly_sizes(c2) {
        return None;
    }

    let mut search = Search {
        c1,
        c2,
        sig1,
        sig2,
        map: vec![None; c1.num_angles()],
        used: vec![false; c2.num_angles()],
        poly_map: vec![None; c1.num_polygons()],
        poly_used: vec![false; c2.num_polygons()],
    };
    if !search.run() {
        return None;
    }
    let bijection = AngleBijection {
        images: search.map.into_iter().map(|b| b.expect("complete")).collect(),
    };
    debug_assert!(bijection.verify(c1, c2));
    Some(bijection)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_configuration;

    const EX27: &str = include_str!("../../data/ex2_7.bcf");

    fn rename(text: &str) -> String {
        text.lines()
            .map(|line| {
                line.split_whitespace()
                    .enumerate()
                    .map(|(i, tok)| match tok {
                        "vertex" | "polygon" | "multiplicity" | "cycle" => tok.to_string(),
                        _ if line.starts_with("vertex") && i == 3 => tok.to_string(),
                        _ => format!("z_{tok}"),
                    })
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .filter(|l| !l.starts_with("z_#"))
            .collect::<Vec<_>>()
            .join("\n")
    }

    #[test]
    fn identity_is_found() {
        let c = parse_configuration(EX27).unwrap();
        let b = are_isomorphic(&c, &c).unwrap();
        assert!(b.verify(&c, &c));
    }

    #[test]
    fn renamed_copy_is_found() {
        let c = parse_configuration(EX27).unwrap();
        let d = parse_configuration(&rename(EX27)).unwrap();
        let b = are_isomorphic(&c, &d).unwrap();
        assert!(b.verify(&c, &d));
        let pairs = b.named_pairs(&c, &d);
        assert!(pairs.contains(&("a6".to_string(), "z_a6".to_string())));
        assert!(pairs.iter().all(|(_, y)| y.starts_with("z_")));
    }

    #[test]
    fn multiplicity_mismatch_is_detected() {
        let c = parse_configuration(EX27).unwrap();
        let d = parse_configuration(&EX27.replace("w4 multiplicity 2", "w4 multiplicity 3"))
            .unwrap();
        assert!(are_isomorphic(&c, &d).is_none());
    }

    #[test]
    fn orientation_matters_for_long_cycles() {
        let text = "vertex v multiplicity 1 cycle a b c\n\
                    vertex w multiplicity 1 cycle a~\n\
                    vertex x multiplicity 1 cycle b~ d\n\
                    vertex z multiplicity 1 cycle d~\n\
                    vertex y multiplicity 1 cycle c1 c2\n\
                    polygon A a a~\npolygon B b b~\npolygon D d d~\npolygon C c c1 c2\n";
        let c = parse_configuration(text).unwrap();
        let r = c.reverse();
        assert!(are_isomorphic(&c, &r).is_none());
    }
}
