//! Seeded corpus of random configurations and the per-configuration
//! invariant suite run over it.

use serde::Serialize;

use crate::algebra::cartan_matrix;
use crate::config::{are_isomorphic, parse_configuration, random_configuration, BrauerConfiguration, PolygonId, RandomSpec};
use crate::error::Result;
use crate::flip::{flip, satisfies_condition_e, Direction};
use crate::mutation::{mutation_complex, two_term_hom_dim, verify_dim_equalities};
use crate::oracle::{brute_force_cartan, hom_chain_dim, verify_phi, verify_pretilting};

pub const MAX_ANGLES: usize = 24;

/// Member `index` of the corpus for `seed`. Every fourth member is a Brauer
/// graph (all polygons are edges).
pub fn corpus_spec(seed: u64, index: u64) -> RandomSpec {
    let mix = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    let mut spec = RandomSpec::new(2 + (index as usize * 7 + (mix >> 40) as usize) % (MAX_ANGLES - 1), mix);
    if index % 4 == 3 {
        spec.max_polygon = 2;
        spec.n_angles += spec.n_angles % 2;
    }
    spec
}

pub fn corpus_configuration(seed: u64, index: u64) -> Result<BrauerConfiguration> {
    random_configuration(&corpus_spec(seed, index))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Invariant {
    RoundTrip,
    CartanEnumeration,
    BrauerGraphCondition,
    DimIdentities,
    OracleEuler,
    Pretilting,
    Involution,
    PhiIsomorphism,
}

impl Invariant {
    pub const ALL: [Invariant; 8] = [
        Invariant::RoundTrip,
        Invariant::CartanEnumeration,
        Invariant::BrauerGraphCondition,
        Invariant::DimIdentities,
        Invariant::OracleEuler,
        Invariant::Pretilting,
        Invariant::Involution,
        Invariant::PhiIsomorphism,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Invariant::RoundTrip => "parse(print(cfg)) = cfg",
            Invariant::CartanEnumeration => "cartan = enumeration",
            Invariant::BrauerGraphCondition => "(E) on Brauer graphs",
            Invariant::DimIdentities => "dim End(T) = Cartan of flip",
            Invariant::OracleEuler => "homotopy dims = Euler form",
            Invariant::Pretilting => "Hom(T,T[+-1]) = 0",
            Invariant::Involution => "right(left(cfg)) ~ cfg",
            Invariant::PhiIsomorphism => "phi is an isomorphism",
        }
    }
}

/// One evaluated instance of an invariant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub invariant: Invariant,
    pub polygon: Option<String>,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    /// Skip the prime-field check, the most expensive invariant.
    pub phi: bool,
}

impl Default for Options {
    fn default() -> Self {
        Self { phi: true }
    }
}

pub fn involution_holds(cfg: &BrauerConfiguration, v: PolygonId) -> Result<bool> {
    let left = flip(cfg, v, Direction::Left)?.config;
    Ok(match flip(&left, v, Direction::Right) {
        Ok(back) => are_isomorphic(cfg, &back.config).is_some(),
        Err(_) => false,
    })
}

/// Runs every invariant on one configuration.
pub fn check_configuration(cfg: &BrauerConfiguration, options: Options) -> Result<Vec<Outcome>> {
    let mut out = Vec::new();
    let mut push = |invariant, polygon: Option<PolygonId>, pass| {
        out.push(Outcome {
            invariant,
            polygon: polygon.map(|p| cfg.polygon_name(p).to_string()),
            pass,
        })
    };
    push(
        Invariant::RoundTrip,
        None,
        parse_configuration(&cfg.to_bcf()).map(|c| c.data() == cfg.data()).unwrap_or(false),
    );
    push(Invariant::CartanEnumeration, None, brute_force_cartan(cfg) == cartan_matrix(cfg));
    for v in cfg.polygons() {
        push(Invariant::Pretilting, Some(v), verify_pretilting(cfg, v)?.passed());
        if cfg.is_brauer_graph() {
            push(
                Invariant::BrauerGraphCondition,
                Some(v),
                satisfies_condition_e(cfg, v, Direction::Left) && satisfies_condition_e(cfg, v, Direction::Right),
            );
        }
        if !satisfies_condition_e(cfg, v, Direction::Left) {
            continue;
        }
        push(Invariant::DimIdentities, Some(v), verify_dim_equalities(cfg, v)?.passed());
        let t = mutation_complex(cfg, v)?.complex;
        push(
            Invariant::OracleEuler,
            Some(v),
            hom_chain_dim(cfg, &t, &t, 0)? as i64 == two_term_hom_dim(cfg, &t, &t),
        );
        push(Invariant::Involution, Some(v), involution_holds(cfg, v)?);
        if options.phi {
            let pass = verify_phi(cfg, v, None).map(|r| r.passed()).unwrap_or(false);
            push(Invariant::PhiIsomorphism, Some(v), pass);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_deterministic_and_bounded() {
        for i in 0..50 {
            let a = corpus_configuration(7, i).unwrap();
            assert_eq!(a, corpus_configuration(7, i).unwrap());
            assert!(a.num_angles() <= MAX_ANGLES);
            if i % 4 == 3 {
                assert!(a.is_brauer_graph());
            }
        }
        assert_ne!(corpus_configuration(1, 5).unwrap(), corpus_configuration(2, 5).unwrap());
    }

    #[test]
    fn small_members_pass_everything() {
        for i in 0..12 {
            let c = corpus_configuration(0, i).unwrap();
            for o in check_configuration(&c, Options::default()).unwrap() {
                assert!(o.pass, "member {i}: {:?}", o);
            }
        }
    }
}
