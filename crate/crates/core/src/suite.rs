//! Law suites over generated instance pools.
//!
//! Every suite is a deterministic function of the config: pools are
//! enumerated in canonical order, sampled checks draw from a seeded
//! generator, and results are emitted in suite order.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Limit, Result};
use crate::heyting::enumerate::enumerate_algebras;
use crate::heyting::instances::{chain3, diamond, pentagon_spec, two_element};
use crate::heyting::{ElemSet, HeytingAlgebra, EXHAUSTIVE_FRAME_LIMIT};
use crate::report::{CheckResult, Report};
use crate::sheaf::convert::{presheaf_to_tset_arc, quasi_presheaf, tset_to_presheaf};
use crate::sheaf::enumerate::enumerate_sheaves;
use crate::sheaf::matching::sheaf_witness;
use crate::sheaf::presheaf::{isomorphic, Presheaf};
use crate::sheaf::sheafify::sheafify_arc;
use crate::site::{sieves_at, Topology};
use crate::topos::exposition::exposition_counterexample;
use crate::topos::sheaves::{
    check_topos_axioms, classifier_witness, doubled_point, omega, omega_witness, sg_check, Pool,
};
use crate::tset::enumerate::{enumerate_tsets, TSetFilter};
use crate::tset::relation::isomorphic as tsets_isomorphic;
use crate::tset::TSet;

/// Suite names in report order.
pub const SUITES: [&str; 8] = ["heyting", "site", "tset", "sheaf", "omega", "topos", "sg", "exposition"];

/// Frame-law subsets drawn per algebra above the exhaustive bound.
pub const FRAME_SAMPLES: usize = 10_000;

/// Total section count of the canonical sheaf pools.
pub const CANONICAL_POOL_TOTAL: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub max_algebra_size: usize,
    pub max_carrier_size: usize,
    pub enumeration_guard: u64,
    pub seed: u64,
    pub checks: Vec<String>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            max_algebra_size: 5,
            max_carrier_size: 4,
            enumeration_guard: 1_000_000,
            seed: 0x7E5E7,
            checks: SUITES.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_algebra_size == 0 || self.max_carrier_size == 0 || self.enumeration_guard == 0 {
            return Err(Error::Input("size bounds and the enumeration guard must be positive".into()));
        }
        if let Some(bad) = self.checks.iter().find(|c| !SUITES.contains(&c.as_str())) {
            return Err(Error::Input(format!("unknown suite `{bad}`; known suites: {}", SUITES.join(", "))));
        }
        Ok(())
    }

    pub fn limit(&self) -> Limit {
        Limit(self.enumeration_guard)
    }

    fn runs(&self, suite: &str) -> bool {
        self.checks.iter().any(|c| c == suite)
    }
}

/// Labelled structures to run the suites on.
#[derive(Clone, Debug)]
pub struct InstancePool {
    /// Every complete Heyting algebra with `2..=max_algebra_size` elements.
    pub algebras: Vec<(String, Arc<HeytingAlgebra>)>,
    /// Hand-built instances checked by name.
    pub named: Vec<(String, Arc<HeytingAlgebra>)>,
    /// Separated T-sets satisfying the postulate, over every algebra.
    pub complete: Vec<(String, Arc<TSet>)>,
    /// Every T-set, including non-separated ones and ones with unreal atoms.
    pub quasi: Vec<(String, Arc<TSet>)>,
}

pub fn generate_instance_pool(config: &SuiteConfig) -> Result<InstancePool> {
    config.validate()?;
    let limit = config.limit();
    let mut algebras = Vec::new();
    let mut complete = Vec::new();
    let mut quasi = Vec::new();
    let mut by_size = std::collections::BTreeMap::new();
    for h in enumerate_algebras(config.max_algebra_size)? {
        let i = by_size.entry(h.size()).or_insert(0usize);
        let name = format!("H{}.{}", h.size(), *i);
        *i += 1;
        for (k, t) in enumerate_tsets(&h, config.max_carrier_size, TSetFilter::COMPLETE, limit)?
            .into_iter()
            .enumerate()
        {
            complete.push((format!("{name}/T{k}"), t));
        }
        for (k, t) in enumerate_tsets(&h, config.max_carrier_size, TSetFilter::ANY, limit)?
            .into_iter()
            .enumerate()
        {
            quasi.push((format!("{name}/Q{k}"), t));
        }
        algebras.push((name, h));
    }
    let named = vec![
        ("two_element".to_string(), two_element()),
        ("chain3".to_string(), chain3()),
        ("diamond".to_string(), diamond()),
    ];
    Ok(InstancePool {
        algebras,
        named,
        complete,
        quasi,
    })
}

/// All sheaves with at most [`CANONICAL_POOL_TOTAL`] sections, named by
/// their shape.
pub fn canonical_pool(j: &Topology, limit: Limit) -> Result<Pool> {
    Ok(enumerate_sheaves(j, CANONICAL_POOL_TOTAL, limit)?
        .into_iter()
        .enumerate()
        .map(|(i, p)| (format!("S{i}[{}]", p.shape()), p))
        .collect())
}

fn first<T>(it: impl IntoIterator<Item = T>, f: impl Fn(T) -> Option<String>) -> Option<String> {
    it.into_iter().find_map(f)
}

fn heyting_laws(name: &str, h: &HeytingAlgebra, rng: &mut ChaCha8Rng) -> Vec<CheckResult> {
    let els: Vec<_> = h.elements().collect();
    let mut out = Vec::new();
    let adj = first(&els, |&p| {
        first(&els, |&q| {
            first(&els, |&t| {
                (h.leq(h.meet(p, t), q) != h.leq(t, h.implies(p, q))).then(|| {
                    format!("p={} q={} t={}", h.name(p), h.name(q), h.name(t))
                })
            })
        })
    });
    out.push(CheckResult::from_witness("heyting.adjunction", name, adj));
    let order = first(&els, |&p| {
        first(&els, |&q| {
            ((h.meet(p, q) == p) != h.leq(p, q)).then(|| format!("p={} q={}", h.name(p), h.name(q)))
        })
    });
    out.push(CheckResult::from_witness("heyting.meet_order", name, order));
    let neg = first(&els, |&p| {
        (h.meet(p, h.negate(p)) != h.bottom() || !h.leq(p, h.negate(h.negate(p)))).then(|| format!("p={}", h.name(p)))
    });
    out.push(CheckResult::from_witness("heyting.negation", name, neg));
    let all = h.all();
    let mono = first(all.subsets(), |s| {
        first(all.difference(s).subsets(), |extra| {
            let t = s.union(extra);
            (!h.leq(h.envelope(s), h.envelope(t))).then(|| format!("{:?} vs {:?}", h.names_of(s), h.names_of(t)))
        })
    });
    out.push(CheckResult::from_witness("heyting.envelope_monotone", name, mono));
    let frame = |s: ElemSet| {
        first(&els, |&b| {
            let lhs = h.meet(h.envelope(s), b);
            let rhs = h.envelope_of(s.iter().map(|a| h.meet(a, b)));
            (lhs != rhs).then(|| format!("A={:?} b={}", h.names_of(s), h.name(b)))
        })
    };
    let (instance, witness) = if h.size() <= EXHAUSTIVE_FRAME_LIMIT {
        (format!("{name} exhaustive"), first(all.subsets(), frame))
    } else {
        let subsets: Vec<ElemSet> = (0..FRAME_SAMPLES)
            .map(|_| ElemSet::from_bits(rng.random::<u64>() & all.bits()))
            .collect();
        (format!("{name} sampled({FRAME_SAMPLES})"), first(subsets, frame))
    };
    out.push(CheckResult::from_witness("heyting.frame", instance, witness));
    out
}

pub fn heyting_suite(pool: &InstancePool, seed: u64) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (name, h) in pool.algebras.iter().chain(&pool.named) {
        out.extend(heyting_laws(name, h, &mut rng));
    }
    for (name, want) in [("two_element", true), ("chain3", false), ("diamond", true)] {
        let h = &pool.named.iter().find(|(n, _)| n == name).expect("named instance").1;
        let got = h.is_boolean();
        out.push(CheckResult::from_witness(
            "heyting.boolean",
            name,
            (got != want).then(|| format!("is_boolean = {got}")),
        ));
    }
    let c = &pool.named[1].1;
    let p = c.elem("p").expect("chain3 has p");
    let nn = c.negate(c.negate(p));
    out.push(CheckResult::from_witness(
        "heyting.double_negation",
        "chain3",
        (nn != c.top()).then(|| format!("~~p = {}", c.name(nn))),
    ));
    out.push(CheckResult::from_witness(
        "heyting.pentagon_rejected",
        "pentagon",
        HeytingAlgebra::build(&pentagon_spec()).is_ok().then(|| "pentagon was accepted".to_string()),
    ));
    out
}

pub fn site_suite(pool: &InstancePool, limit: Limit) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for (name, h) in &pool.algebras {
        let j = Topology::territory(h);
        out.push(CheckResult::from_witness(
            "site.territory_topology",
            name.clone(),
            j.validate().err().map(|e| e.to_string()),
        ));
        let closed = first(h.elements(), |p| {
            let brute: Vec<ElemSet> = sieves_at(h, p)
                .into_iter()
                .filter(|s| j.is_closed(s))
                .map(|s| s.members)
                .collect();
            let mut want: Vec<ElemSet> = h.down(p).iter().map(|s| h.down(s)).collect();
            want.sort();
            let mut got = brute;
            got.sort();
            (got != want).then(|| format!("at {}", h.name(p)))
        });
        out.push(CheckResult::from_witness("site.closed_sieves", name.clone(), closed));
    }
    let _ = limit;
    Ok(out)
}

pub fn three_way_witness(t: &TSet) -> Result<Option<String>> {
    let h = t.algebra();
    for a in 0..t.len() {
        for b in 0..t.len() {
            let (ea, eb) = (t.existence(a), t.existence(b));
            let restricted = t.indiscernible(a, t.localise(b, ea)?);
            let compat = t.compatible(a, b) && h.leq(ea, eb);
            let identity = ea == t.id(a, b);
            if restricted != compat || compat != identity {
                return Ok(Some(format!(
                    "a={} b={}: restriction {restricted}, compatibility {compat}, identity {identity}",
                    t.name(a),
                    t.name(b)
                )));
            }
        }
    }
    Ok(None)
}

pub fn tset_suite(pool: &InstancePool, limit: Limit) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for (name, t) in &pool.complete {
        let report = t.validate(true);
        let mut w = report.violations.first().map(ToString::to_string);
        if w.is_none() {
            let post = t.postulate(limit)?;
            w = (!post.holds()).then(|| format!("{} unreal atoms", post.unreal.len()));
        }
        out.push(CheckResult::from_witness("tset.complete", name.clone(), w));
        out.push(CheckResult::from_witness("tset.three_way", name.clone(), three_way_witness(t)?));
        let h = t.algebra();
        let mut loc = None;
        'outer: for x in 0..t.len() {
            for p in h.elements() {
                let y = t.localise(x, p)?;
                let e = h.meet(t.existence(x), p);
                if t.existence(y) != e || t.id(x, y) != e || !t.is_localisation_of(y, x, p) {
                    loc = Some(format!("{} at {}", t.name(x), h.name(p)));
                    break 'outer;
                }
            }
        }
        out.push(CheckResult::from_witness("tset.localisation", name.clone(), loc));
        let completed = Arc::new(t.completion(limit)?);
        out.push(CheckResult::from_witness(
            "tset.completion_fixed",
            name.clone(),
            (!tsets_isomorphic(t, &completed)?).then(|| "completion is not isomorphic".to_string()),
        ));
    }
    // the postulate is re-checked where the atom search fits the guard
    for (name, t) in &pool.quasi {
        let completed = t.completion(limit)?;
        let space = crate::error::pow_saturating(t.algebra().size(), completed.len());
        if space > u128::from(limit.0) {
            continue;
        }
        let ok = completed.validate(true).is_valid() && completed.satisfies_postulate(limit)?;
        out.push(CheckResult::from_witness(
            "tset.completion_complete",
            name.clone(),
            (!ok).then(|| "completion is not complete".to_string()),
        ));
    }
    Ok(out)
}

pub fn sheaf_suite(pool: &InstancePool, limit: Limit) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for (name, t) in &pool.complete {
        let j = Topology::territory(t.algebra());
        let p = Arc::new(tset_to_presheaf(t)?.presheaf);
        let w = sheaf_witness(&p, &j).map(|w| w.describe(&p));
        let ok = w.is_none();
        out.push(CheckResult::from_witness("sheaf.tset_is_sheaf", name.clone(), w));
        if ok {
            let back = presheaf_to_tset_arc(&p)?;
            out.push(CheckResult::from_witness(
                "sheaf.round_trip",
                name.clone(),
                (!tsets_isomorphic(t, &back)?).then(|| "T-set does not come back".to_string()),
            ));
        }
    }
    for (name, t) in &pool.quasi {
        out.push(CheckResult::from_witness("sheaf.sheafify_oracle", name.clone(), sheafify_witness(t, limit)?));
    }
    Ok(out)
}

/// `sheafify(quasi_presheaf(T))` against the presheaf of the completion.
pub fn sheafify_witness(t: &TSet, limit: Limit) -> Result<Option<String>> {
    let j = Topology::territory(t.algebra());
    let q = Arc::new(quasi_presheaf(t)?);
    let s = sheafify_arc(&q, &j, limit)?;
    let c = Arc::new(tset_to_presheaf(&t.completion(limit)?)?.presheaf);
    Ok((!isomorphic(&s, &c)?).then(|| format!("sheafified {} vs completion {}", s.shape(), c.shape())))
}

fn sheaf_pools(limit: Limit) -> Result<Vec<(String, Topology, Pool)>> {
    [("two_element", two_element()), ("chain3", chain3()), ("diamond", diamond())]
        .into_iter()
        .map(|(n, h)| {
            let j = Topology::territory(&h);
            let pool = canonical_pool(&j, limit)?;
            Ok((n.to_string(), j, pool))
        })
        .collect()
}

fn prefixed(prefix: &str, rs: Vec<CheckResult>) -> Vec<CheckResult> {
    rs.into_iter()
        .map(|mut r| {
            r.instance = format!("{prefix}: {}", r.instance);
            r
        })
        .collect()
}

pub fn omega_suite(limit: Limit) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for (name, j, pool) in sheaf_pools(limit)? {
        let om = omega(&j);
        out.push(CheckResult::from_witness("omega.closed_sieves", name.clone(), omega_witness(&om, &j)));
        for (pn, p) in &pool {
            out.push(CheckResult::from_witness(
                "omega.classifier",
                format!("{name}: {pn}"),
                classifier_witness(&om, &j, p, limit)?,
            ));
        }
    }
    Ok(out)
}

pub fn topos_suite(limit: Limit) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for (name, j, pool) in sheaf_pools(limit)? {
        if name == "diamond" {
            continue;
        }
        out.extend(prefixed(&name, check_topos_axioms(&j, &pool, limit)?));
    }
    Ok(out)
}

pub fn sg_suite(limit: Limit) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for (name, j, mut pool) in sheaf_pools(limit)? {
        pool.push(("Omega".into(), omega(&j).object));
        out.extend(prefixed(&name, sg_check(&j, &pool, limit)?));
    }
    let h = diamond();
    let j = Topology::territory(&h);
    let objs: Pool = vec![
        ("1".into(), Arc::new(Presheaf::terminal(&h))),
        ("P".into(), doubled_point(&h)?),
    ];
    let failures: Vec<String> = sg_check(&j, &objs, limit)?
        .into_iter()
        .filter(|r| !r.passed())
        .map(|r| r.instance)
        .collect();
    out.push(CheckResult::from_witness(
        "sg.doubled_point_fails",
        "diamond",
        failures.is_empty().then(|| "separation held on the doubled point".to_string()),
    ));
    Ok(out)
}

pub fn exposition_suite(limit: Limit) -> Result<Vec<CheckResult>> {
    let r = exposition_counterexample(&two_element(), 2, limit)?;
    Ok(vec![
        CheckResult::from_witness(
            "exposition.refuted",
            format!("|X|=2 mediating maps: {}", r.mediating_maps),
            (!r.universality_refuted()).then(|| "mediation was unique".to_string()),
        ),
        CheckResult::from_witness(
            "exposition.graph_universal",
            format!("|X|=2 graph mediations: {:?}", r.graph_mediations_all),
            (!r.graph_universal()).then(|| "graph mediation is not unique".to_string()),
        ),
    ])
}

/// Runs the configured suites in [`SUITES`] order.
pub fn run_laws(config: &SuiteConfig) -> Result<Report<SuiteConfig>> {
    let pool = generate_instance_pool(config)?;
    let limit = config.limit();
    let mut results = Vec::new();
    for suite in SUITES {
        if !config.runs(suite) {
            continue;
        }
        results.extend(match suite {
            "heyting" => heyting_suite(&pool, config.seed),
            "site" => site_suite(&pool, limit)?,
            "tset" => tset_suite(&pool, limit)?,
            "sheaf" => sheaf_suite(&pool, limit)?,
            "omega" => omega_suite(limit)?,
            "topos" => topos_suite(limit)?,
            "sg" => sg_suite(limit)?,
            "exposition" => exposition_suite(limit)?,
            _ => unreachable!("suite names are validated"),
        });
    }
    Ok(Report::new(config.clone(), results))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(SuiteConfig::default().validate().is_ok());
        let bad = SuiteConfig {
            checks: vec!["heyting".into(), "bogus".into()],
            ..SuiteConfig::default()
        };
        assert!(matches!(bad.validate(), Err(Error::Input(_))));
        let zero = SuiteConfig {
            enumeration_guard: 0,
            ..SuiteConfig::default()
        };
        assert!(zero.validate().is_err());
        let parsed: std::result::Result<SuiteConfig, _> = serde_json::from_str(r#"{"seed": 1, "extra": 2}"#);
        assert!(parsed.is_err());
    }

    #[test]
    fn pool_algebra_counts() {
        let small = |n| SuiteConfig {
            max_algebra_size: n,
            max_carrier_size: 1,
            ..SuiteConfig::default()
        };
        assert_eq!(generate_instance_pool(&small(2)).unwrap().algebras.len(), 1);
        let three = generate_instance_pool(&small(3)).unwrap();
        assert_eq!(three.algebras.len(), 2);
        assert_eq!(*three.algebras[1].1, *chain3());
    }

    #[test]
    fn small_laws_pass_and_repeat() {
        let config = SuiteConfig {
            max_algebra_size: 3,
            max_carrier_size: 2,
            checks: vec!["heyting".into(), "site".into(), "tset".into(), "sheaf".into()],
            ..SuiteConfig::default()
        };
        let a = run_laws(&config).unwrap();
        let failed: Vec<_> = a.results.iter().filter(|r| !r.passed()).collect();
        assert!(failed.is_empty(), "{failed:?}");
        assert_eq!(a.to_json(), run_laws(&config).unwrap().to_json());
    }
}
