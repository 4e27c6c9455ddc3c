use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BrauerConfiguration, ConfigurationData, Polygon, VertexCycle};
use crate::error::{Error, Result};

/// Parameters of the seeded configuration generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomSpec {
    pub n_angles: usize,
    pub min_polygon: usize,
    pub max_polygon: usize,
    pub max_multiplicity: usize,
    pub seed: u64,
}

impl RandomSpec {
    pub fn new(n_angles: usize, seed: u64) -> Self {
        Self {
            n_angles,
            min_polygon: 2,
            max_polygon: 4,
            max_multiplicity: 2,
            seed,
        }
    }
}

/// Whether `n` splits into parts with sizes in `min..=max`.
fn splittable(n: usize, min: usize, max: usize) -> bool {
    n == 0 || (1..=n / min).any(|k| k * min <= n && n <= k * max)
}

/// Partition into polygons, then a uniform permutation for the vertex
/// cycles, then uniform multiplicities. Angles are named `h0, h1, ...`.
pub fn random_configuration(spec: &RandomSpec) -> Result<BrauerConfiguration> {
    let RandomSpec {
        n_angles: n,
        min_polygon: lo,
        max_polygon: hi,
        max_multiplicity,
        seed,
    } = *spec;
    if n < 2 {
        return Err(Error::Infeasible(format!("need at least 2 angles, got {n}")));
    }
    if lo < 2 || hi < lo {
        return Err(Error::Infeasible(format!(
            "polygon sizes {lo}..={hi} must satisfy 2 <= min <= max"
        )));
    }
    if max_multiplicity < 1 {
        return Err(Error::Infeasible("multiplicity bound must be >= 1".into()));
    }
    if !splittable(n, lo, hi) {
        return Err(Error::Infeasible(format!(
            "{n} angles cannot be split into polygons of sizes {lo}..={hi}"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<String> = (0..n).map(|i| format!("h{i}")).collect();

    let mut sizes = Vec::new();
    let mut remaining = n;
    while remaining > 0 {
        let choices: Vec<usize> = (lo..=hi.min(remaining))
            .filter(|&s| splittable(remaining - s, lo, hi))
            .collect();
        let s = *choices.choose(&mut rng).expect("feasibility was checked");
        sizes.push(s);
        remaining -= s;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut polygons = Vec::new();
    let mut start = 0;
    for (i, s) in sizes.into_iter().enumerate() {
        let mut members = order[start..start + s].to_vec();
        members.sort_unstable();
        polygons.push(Polygon {
            id: format!("P{i}"),
            angles: members.iter().map(|&a| names[a].clone()).collect(),
        });
        start += s;
    }

    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut seen = vec![false; n];
    let mut vertices = Vec::new();
    for a in 0..n {
        if seen[a] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = a;
        while !seen[x] {
            seen[x] = true;
            cycle.push(names[x].clone());
            x = perm[x];
        }
        vertices.push(VertexCycle {
            id: format!("v{}", vertices.len()),
            multiplicity: rng.gen_range(1..=max_multiplicity) as i64,
            cycle,
        });
    }

    BrauerConfiguration::from_data(ConfigurationData { vertices, polygons })
}
