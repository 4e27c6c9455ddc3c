//! The two-term mutation complex at a polygon and dimension identities
//! evaluated through the Euler form.

use serde::Serialize;

use crate::algebra::{cartan_matrix, hom_dim, special_path, CanonicalPath};
use crate::config::{AngleId, BrauerConfiguration, PolygonId, VertexId};
use crate::error::Result;
use crate::flip::{angle_decomposition, flip, Direction};
use crate::report::VerificationReport;

/// A complex `neg -> zero` of direct sums of indecomposable projectives in
/// degrees -1 and 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoTermComplex {
    pub neg: Vec<PolygonId>,
    pub zero: Vec<PolygonId>,
    /// Entry `[i][j]` is an integer combination of paths from `zero[i]` to
    /// `neg[j]`, i.e. a map `P_{neg[j]} -> P_{zero[i]}`.
    pub differential: Vec<Vec<Vec<(i64, CanonicalPath)>>>,
}

impl TwoTermComplex {
    /// `P_u` concentrated in degree 0.
    pub fn stalk(u: PolygonId) -> Self {
        Self {
            neg: Vec::new(),
            zero: vec![u],
            differential: vec![Vec::new()],
        }
    }

    pub fn is_stalk(&self) -> bool {
        self.neg.is_empty()
    }

    pub fn describe(&self, cfg: &BrauerConfiguration) -> String {
        let sum = |s: &[PolygonId]| {
            if s.is_empty() {
                "0".to_string()
            } else {
                s.iter()
                    .map(|&p| format!("P_{}", cfg.polygon_name(p)))
                    .collect::<Vec<_>>()
                    .join(" + ")
            }
        };
        let mut out = format!("degree -1: {}\ndegree  0: {}\n", sum(&self.neg), sum(&self.zero));
        for (i, row) in self.differential.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                if entry.is_empty() {
                    continue;
                }
                let terms: Vec<String> = entry
                    .iter()
                    .map(|(c, p)| match c {
                        1 => p.display(cfg),
                        -1 => format!("-{}", p.display(cfg)),
                        _ => format!("{c}*{}", p.display(cfg)),
                    })
                    .collect();
                out.push_str(&format!("d[{i}][{j}] = {}\n", terms.join(" + ")));
            }
        }
        out
    }
}

/// `T_V` together with the rest of the tilting complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MutationComplex {
    pub polygon: PolygonId,
    pub complex: TwoTermComplex,
    /// The angle `e` indexing each degree 0 summand `P_[p(e)]`.
    pub summand_angles: Vec<AngleId>,
    /// `p(e)` for each summand angle.
    pub predecessors: Vec<AngleId>,
    /// Multiplicity of `P_U` in degree 0, per polygon.
    pub chi: Vec<usize>,
}

impl MutationComplex {
    /// The summands `T_U` of `T = T_V + sum_{U != V} P_U`, in polygon order.
    pub fn summands(&self, cfg: &BrauerConfiguration) -> Vec<TwoTermComplex> {
        cfg.polygons()
            .map(|u| {
                if u == self.polygon {
                    self.complex.clone()
                } else {
                    TwoTermComplex::stalk(u)
                }
            })
            .collect()
    }
}

/// Angles `e` of `v` whose vertex is not contained in `v`, with `p(e)` and
/// the step count from `p(e)` to `e`.
fn outside_predecessors(cfg: &BrauerConfiguration, v: PolygonId) -> Vec<(AngleId, AngleId, usize)> {
    let in_v = |a: AngleId| cfg.polygon_of(a) == v;
    cfg.angles()
        .filter(|&e| in_v(e) && !cfg.vertex_inside(cfg.vertex_of(e), v))
        .map(|e| {
            let mut c = 1;
            while in_v(cfg.sigma_pow(e, -(c as isize))) {
                c += 1;
            }
            (e, cfg.sigma_pow(e, -(c as isize)), c)
        })
        .collect()
}

/// Does not require condition (E).
pub fn mutation_complex(cfg: &BrauerConfiguration, v: PolygonId) -> Result<MutationComplex> {
    let preds = outside_predecessors(cfg, v);
    let mut chi = vec![0; cfg.num_polygons()];
    let mut zero = Vec::with_capacity(preds.len());
    let mut differential = Vec::with_capacity(preds.len());
    for &(_, p, c) in &preds {
        let u = cfg.polygon_of(p);
        chi[u.0] += 1;
        zero.push(u);
        differential.push(vec![vec![(1, special_path(cfg, p, c)?)]]);
    }
    Ok(MutationComplex {
        polygon: v,
        complex: TwoTermComplex {
            neg: vec![v],
            zero,
            differential,
        },
        summand_angles: preds.iter().map(|t| t.0).collect(),
        predecessors: preds.iter().map(|t| t.1).collect(),
        chi,
    })
}

/// `#{e in H2 ⊔ H3 : s(bar(p(e))) = w}`.
pub fn occ_prime(cfg: &BrauerConfiguration, v: PolygonId, w: VertexId) -> Result<usize> {
    let dec = angle_decomposition(cfg, v)?;
    let mut count = 0;
    for e in dec.h23() {
        if cfg.vertex_of(cfg.bar(dec.p_of(e))?) == w {
            count += 1;
        }
    }
    Ok(count)
}

pub fn verify_occ_lemma(cfg: &BrauerConfiguration, v: PolygonId) -> Result<VerificationReport> {
    let m = mutation_complex(cfg, v)?;
    let mut report = VerificationReport::new(format!(
        "occurrence identity at {}",
        cfg.polygon_name(v)
    ));
    for w in cfg.vertices() {
        if cfg.vertex_inside(w, v) {
            continue;
        }
        let lhs: usize = cfg
            .polygons()
            .map(|u| m.chi[u.0] * cfg.occurrences(w, u))
            .sum();
        let occ = cfg.occurrences(w, v);
        let occ2 = occ_prime(cfg, v, w)?;
        report.assert(
            format!("sum chi(U) occ({0},U) = occ({0},V) + occ'({0},V)", cfg.vertex_name(w)),
            lhs.to_string(),
            format!("{} = {occ} + {occ2}", occ + occ2),
            lhs == occ + occ2,
        );
    }
    Ok(report)
}

fn sum_dim(cfg: &BrauerConfiguration, a: &[PolygonId], b: &[PolygonId]) -> i64 {
    a.iter()
        .flat_map(|&x| b.iter().map(move |&y| hom_dim(cfg, x, y) as i64))
        .sum()
}

/// `(T0,U0) - (T-1,U0) - (T0,U-1) + (T-1,U-1)`.
pub fn two_term_hom_dim(cfg: &BrauerConfiguration, t: &TwoTermComplex, u: &TwoTermComplex) -> i64 {
    sum_dim(cfg, &t.zero, &u.zero) - sum_dim(cfg, &t.neg, &u.zero) - sum_dim(cfg, &t.zero, &u.neg)
        + sum_dim(cfg, &t.neg, &u.neg)
}

/// Euler-form grid of `End(T)`, indexed by polygons.
pub fn endomorphism_grid(cfg: &BrauerConfiguration, m: &MutationComplex) -> Vec<Vec<i64>> {
    let summands = m.summands(cfg);
    summands
        .iter()
        .map(|t| summands.iter().map(|u| two_term_hom_dim(cfg, t, u)).collect())
        .collect()
}

pub fn verify_dim_equalities(cfg: &BrauerConfiguration, v: PolygonId) -> Result<VerificationReport> {
    let flipped = flip(cfg, v, Direction::Left)?.config;
    let m = mutation_complex(cfg, v)?;
    let grid = endomorphism_grid(cfg, &m);
    let cartan: Vec<Vec<i64>> = cartan_matrix(&flipped)
        .into_iter()
        .map(|row| row.into_iter().map(|x| x as i64).collect())
        .collect();
    let others: Vec<PolygonId> = cfg.polygons().filter(|&u| u != v).collect();
    let block = |g: &[Vec<i64>], rows: &[PolygonId], cols: &[PolygonId]| -> i64 {
        rows.iter()
            .flat_map(|r| cols.iter().map(move |c| g[r.0][c.0]))
            .sum()
    };
    let vv = [v];

    let mut report = VerificationReport::new(format!(
        "dimension identities at {}",
        cfg.polygon_name(v)
    ));
    report.compare("(1) (T_V,T_V) = (P'_V,P'_V)", grid[v.0][v.0], cartan[v.0][v.0]);
    report.compare(
        "(2) (T_V,X) = (P'_V,Y)",
        block(&grid, &vv, &others),
        block(&cartan, &vv, &others),
    );
    report.compare(
        "(3) (X,T_V) = (Y,P'_V)",
        block(&grid, &others, &vv),
        block(&cartan, &others, &vv),
    );
    report.compare(
        "(4) (X,X) = (Y,Y)",
        block(&grid, &others, &others),
        block(&cartan, &others, &others),
    );
    let mismatches: Vec<String> = cfg
        .polygons()
        .flat_map(|a| cfg.polygons().map(move |b| (a, b)))
        .filter(|(a, b)| grid[a.0][b.0] != cartan[a.0][b.0])
        .map(|(a, b)| format!("({},{})", cfg.polygon_name(a), cfg.polygon_name(b)))
        .collect();
    let total = |g: &[Vec<i64>]| g.iter().flatten().sum::<i64>();
    report.assert(
        "grid End(T) = Cartan of flip",
        format!("total {}", total(&grid)),
        format!("total {}", total(&cartan)),
        mismatches.is_empty(),
    );
    if !mismatches.is_empty() {
        report.note(format!("differs at {}", mismatches.join(" ")));
    }
    Ok(report)
}
