use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};
use tsets::heyting::instances::two_element;
use tsets::heyting::{FrameCheck, HeytingAlgebra};
use tsets::io::{self, Kind};
use tsets::report::{CheckResult, Report};
use tsets::sheaf::convert::tset_to_presheaf;
use tsets::sheaf::matching::{separation_witness, sheaf_witness};
use tsets::sheaf::presheaf::Presheaf;
use tsets::sheaf::sheafify::sheafify as sheafify_presheaf;
use tsets::site::{sieves_at, Topology};
use tsets::suite::{run_laws, SuiteConfig};
use tsets::topos::exposition::exposition_counterexample;
use tsets::topos::sheaves::{omega as omega_of, omega_witness, sieve_label};
use tsets::tset::{TSet, TSetViolation};
use tsets::{Error, Limit, Result};

use crate::Format;

pub struct Outcome {
    pub ok: bool,
    json: Value,
    text: String,
}

impl Outcome {
    /// Report with `extra` merged into the top-level object and `notes`
    /// appended to the text form.
    fn new(config: Value, results: Vec<CheckResult>, notes: Vec<String>, extra: Value) -> Outcome {
        let report = Report::new(config, results);
        let mut text = report.to_text();
        for n in &notes {
            text.push_str(n);
            text.push('\n');
        }
        let mut json = serde_json::to_value(&report).expect("reports serialize");
        if !notes.is_empty() {
            json["summary"] = json!(notes);
        }
        if let Value::Object(m) = extra {
            json.as_object_mut().expect("object").extend(m);
        }
        Outcome {
            ok: report.all_passed(),
            json,
            text,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => serde_json::to_string_pretty(&self.json).expect("json") + "\n",
        }
    }
}

fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Input(_)
            | Error::Io(_)
            | Error::Json(_)
            | Error::InvalidSpec(_)
            | Error::UnknownElement(_)
            | Error::TooLarge(_)
            | Error::InvalidTSet(_)
            | Error::AlgebraMismatch
            | Error::SizeGuard { .. }
    )
}

fn read(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn base(path: &Path) -> &Path {
    path.parent().unwrap_or(Path::new("."))
}

fn expect_kind(path: &Path, want: &[Kind]) -> Result<(Value, Kind)> {
    let v = read(path)?;
    let kind = io::detect(&v)?;
    if !want.contains(&kind) {
        return Err(Error::Input(format!("{} is a {kind} file", path.display())));
    }
    Ok((v, kind))
}

fn load_algebra(path: &Path) -> Result<Arc<HeytingAlgebra>> {
    let (v, _) = expect_kind(path, &[Kind::Algebra])?;
    Ok(Arc::new(io::parse_algebra(&v)?))
}

fn first_violation(t: &TSet, pick: impl Fn(&TSetViolation) -> bool) -> Option<String> {
    t.validate(true).violations.iter().find(|v| pick(v)).map(ToString::to_string)
}

pub fn validate(path: &Path) -> Result<Outcome> {
    let v = read(path)?;
    let kind = io::detect(&v)?;
    let label = path.display().to_string();
    let config = json!({"command": "validate", "file": label, "kind": kind.to_string()});
    let mut results = Vec::new();
    let mut notes = Vec::new();
    match kind {
        Kind::Algebra => match io::parse_algebra(&v) {
            Ok(h) => {
                let mode = match h.frame_check() {
                    FrameCheck::Exhaustive { subsets } => format!("exhaustive over {subsets} subsets"),
                    FrameCheck::Sampled { seed, subsets } => format!("sampled {subsets} subsets, seed {seed}"),
                };
                results.push(CheckResult::pass("algebra.heyting", label));
                notes.push(format!(
                    "complete Heyting algebra, {} ({} elements; frame law {mode})",
                    if h.is_boolean() { "Boolean" } else { "non-Boolean" },
                    h.size()
                ));
            }
            Err(e) if is_input_error(&e) => return Err(e),
            Err(e) => {
                results.push(CheckResult::fail("algebra.heyting", label, e.to_string()));
                notes.push("not a complete Heyting algebra".into());
            }
        },
        Kind::TSet => {
            let t = io::parse_tset(&v, base(path))?;
            let sym = first_violation(&t, |v| matches!(v, TSetViolation::Asymmetric { .. }));
            let trans = first_violation(&t, |v| matches!(v, TSetViolation::Intransitive { .. }));
            let quasi = sym.is_none() && trans.is_none();
            results.push(CheckResult::from_witness("tset.symmetric", label.clone(), sym));
            results.push(CheckResult::from_witness("tset.transitive", label.clone(), trans));
            let sep = first_violation(&t, |v| matches!(v, TSetViolation::Indiscernible { .. }));
            results.push(CheckResult::from_witness("tset.separated", label.clone(), sep));
            if quasi {
                let post = t.postulate(Limit::default())?;
                results.push(CheckResult::from_witness(
                    "tset.postulate",
                    label,
                    (!post.holds()).then(|| format!("{} of {} atoms are not real", post.unreal.len(), post.atoms)),
                ));
            }
            notes.push(format!("T-set with {} elements over {} algebra elements", t.len(), t.algebra().size()));
        }
        Kind::Relation => {
            let r = io::parse_relation(&v, base(path))?;
            let witness = match r.validate() {
                Ok(rep) => rep.violations.first().map(ToString::to_string),
                Err(e) if is_input_error(&e) => return Err(e),
                Err(e) => Some(e.to_string()),
            };
            results.push(CheckResult::from_witness("relation.valid", label, witness));
        }
        Kind::Presheaf => match io::parse_presheaf(&v, base(path)) {
            Ok(p) => {
                let j = Topology::territory(p.algebra());
                results.push(CheckResult::pass("presheaf.functorial", label.clone()));
                results.push(CheckResult::from_witness(
                    "presheaf.separated",
                    label.clone(),
                    separation_witness(&p, &j).map(|w| w.describe(&p)),
                ));
                results.push(CheckResult::from_witness(
                    "presheaf.sheaf",
                    label,
                    sheaf_witness(&p, &j).map(|w| w.describe(&p)),
                ));
                notes.push(format!("presheaf {}", p.shape()));
            }
            Err(e) if is_input_error(&e) => return Err(e),
            Err(e) => results.push(CheckResult::fail("presheaf.functorial", label, e.to_string())),
        },
    }
    Ok(Outcome::new(config, results, notes, json!({})))
}

fn atom_label(t: &TSet, values: &[tsets::heyting::Elem]) -> String {
    let h = t.algebra();
    let parts: Vec<String> = values
        .iter()
        .enumerate()
        .map(|(x, &v)| format!("{}:{}", t.name(x), h.name(v)))
        .collect();
    format!("({})", parts.join(","))
}

pub fn atoms(path: &Path) -> Result<Outcome> {
    let (v, _) = expect_kind(path, &[Kind::TSet])?;
    let t = io::parse_tset(&v, base(path))?;
    let label = path.display().to_string();
    let config = json!({"command": "atoms", "file": label});
    if !t.is_quasi_tset() {
        let w = t.validate(false).violations[0].to_string();
        return Ok(Outcome::new(config, vec![CheckResult::fail("tset.valid", label, w)], vec![], json!({})));
    }
    let mut results = Vec::new();
    let mut listed = Vec::new();
    let all = t.atoms(Limit::default())?;
    for a in &all {
        let w = t.real_witnesses(a)?;
        let names: Vec<&str> = w.iter().map(|&x| t.name(x)).collect();
        let instance = if names.is_empty() {
            atom_label(&t, a.values())
        } else {
            format!("{} = Id({}, -)", atom_label(&t, a.values()), names.join(" | "))
        };
        results.push(CheckResult::from_witness(
            "atom.real",
            instance.clone(),
            names.is_empty().then(|| "no element realises this atom".to_string()),
        ));
        listed.push(json!({"atom": atom_label(&t, a.values()), "witnesses": names}));
    }
    let unreal = results.iter().filter(|r| !r.passed()).count();
    results.push(CheckResult::from_witness(
        "tset.postulate",
        label,
        (unreal > 0).then(|| format!("{unreal} of {} atoms are not real", all.len())),
    ));
    let verdict = if unreal == 0 { "holds" } else { "fails" };
    Ok(Outcome::new(
        config,
        results,
        vec![format!("{} atoms; postulate of materialism {verdict}", all.len())],
        json!({"atoms": listed}),
    ))
}

pub fn sheafify(path: &Path, output: Option<&Path>) -> Result<Outcome> {
    let (v, kind) = expect_kind(path, &[Kind::TSet, Kind::Presheaf])?;
    let label = path.display().to_string();
    let limit = Limit::default();
    let (structure, result, note) = match kind {
        Kind::TSet => {
            let t = io::parse_tset(&v, base(path))?;
            if !t.is_quasi_tset() {
                return Err(Error::Input(format!("{label}: {}", t.validate(false).violations[0])));
            }
            let c = t.completion(limit)?;
            let p = tset_to_presheaf(&c)?.presheaf;
            let j = Topology::territory(c.algebra());
            let w = sheaf_witness(&p, &j).map(|w| w.describe(&p));
            (
                io::tset_to_json(&c),
                CheckResult::from_witness("sheafify.complete", label, w),
                format!("completion has {} elements (from {})", c.len(), t.len()),
            )
        }
        _ => {
            let p = io::parse_presheaf(&v, base(path))?;
            let j = Topology::territory(p.algebra());
            let s: Presheaf = sheafify_presheaf(&p, &j, limit)?;
            let w = sheaf_witness(&s, &j).map(|w| w.describe(&s));
            (
                io::presheaf_to_json(&s),
                CheckResult::from_witness("sheafify.sheaf", label, w),
                format!("sheafification {} (from {})", s.shape(), p.shape()),
            )
        }
    };
    let pretty = serde_json::to_string_pretty(&structure)? + "\n";
    let mut notes = vec![note];
    let extra = match output {
        Some(out) => {
            std::fs::write(out, &pretty).map_err(|e| Error::Input(format!("cannot write {}: {e}", out.display())))?;
            notes.push(format!("written to {}", out.display()));
            json!({})
        }
        None => {
            notes.push(pretty.trim_end().to_string());
            json!({"structure": structure})
        }
    };
    Ok(Outcome::new(json!({"command": "sheafify", "file": path.display().to_string()}), vec![result], notes, extra))
}

fn selected(h: &HeytingAlgebra, element: Option<&str>) -> Result<Vec<tsets::heyting::Elem>> {
    match element {
        Some(name) => Ok(vec![h.elem(name)?]),
        None => Ok(h.elements().collect()),
    }
}

pub fn omega(path: &Path, element: Option<&str>) -> Result<Outcome> {
    let h = load_algebra(path)?;
    let j = Topology::territory(&h);
    let om = omega_of(&j);
    let label = path.display().to_string();
    let mut notes = Vec::new();
    let mut table = serde_json::Map::new();
    for p in selected(&h, element)? {
        let sieves: Vec<Value> = (0..om.object.count(p))
            .map(|i| {
                let s = om.sieve(p, i);
                json!({"label": sieve_label(&h, &s), "members": h.names_of(s.members)})
            })
            .collect();
        let cells: Vec<String> = (0..om.object.count(p))
            .map(|i| {
                let s = om.sieve(p, i);
                format!("{}={{{}}}", sieve_label(&h, &s), h.names_of(s.members).join(","))
            })
            .collect();
        notes.push(format!("Omega({}): {}", h.name(p), cells.join(" ")));
        table.insert(h.name(p).to_string(), Value::Array(sieves));
    }
    let restrict = io::presheaf_to_json(&om.object)["restrict"].clone();
    let results = vec![CheckResult::from_witness("omega.closed_sieves", label.clone(), omega_witness(&om, &j))];
    Ok(Outcome::new(
        json!({"command": "omega", "file": label, "element": element}),
        results,
        notes,
        json!({"closed_sieves": table, "restrict": restrict}),
    ))
}

pub fn sieves(path: &Path, element: Option<&str>) -> Result<Outcome> {
    let h = load_algebra(path)?;
    let j = Topology::territory(&h);
    let label = path.display().to_string();
    let mut notes = Vec::new();
    let mut rows = Vec::new();
    for p in selected(&h, element)? {
        for s in sieves_at(&h, p) {
            let (covering, closed) = (j.covers(&s), j.is_closed(&s));
            notes.push(format!(
                "{} {{{}}}{}{}",
                h.name(p),
                h.names_of(s.members).join(","),
                if covering { " covering" } else { "" },
                if closed { " closed" } else { "" }
            ));
            rows.push(json!({"at": h.name(p), "members": h.names_of(s.members), "covering": covering, "closed": closed}));
        }
    }
    let results = vec![CheckResult::from_witness(
        "site.territory_topology",
        label.clone(),
        j.validate().err().map(|e| e.to_string()),
    )];
    Ok(Outcome::new(
        json!({"command": "sieves", "file": label, "element": element}),
        results,
        notes,
        json!({"sieves": rows}),
    ))
}

pub fn laws(config: Option<&Path>) -> Result<Outcome> {
    let config: SuiteConfig = match config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?
        }
        None => SuiteConfig::default(),
    };
    let report = run_laws(&config)?;
    let json = serde_json::to_value(&report)?;
    Ok(Outcome {
        ok: report.all_passed(),
        text: report.to_text(),
        json,
    })
}

pub fn exposition(points: usize) -> Result<Outcome> {
    let r = exposition_counterexample(&two_element(), points, Limit::default())?;
    let results = vec![
        CheckResult::from_witness(
            "exposition.refuted",
            format!("|X|={points} mediating maps: {}", r.mediating_maps),
            (!r.universality_refuted()).then(|| "mediation into the exposing object is unique".to_string()),
        ),
        CheckResult::from_witness(
            "exposition.graph_universal",
            format!("|X|={points} graph mediations: {:?}", r.graph_mediations_all),
            (!r.graph_universal()).then(|| "mediation into the graph is not unique".to_string()),
        ),
    ];
    let mut notes = vec![format!(
        "mediating maps: {}{}; {}; {}",
        r.mediating_maps,
        if r.universality_refuted() { " >= 2" } else { "" },
        if r.universality_refuted() {
            "universality of the exposing object refuted"
        } else {
            "exposing object not refuted at this size"
        },
        if r.graph_universal() {
            "graph universality holds"
        } else {
            "graph universality fails"
        }
    )];
    for (i, m) in r.maps.iter().enumerate() {
        let pairs: Vec<String> = m.iter().map(|(a, b)| format!("{a}->{b}")).collect();
        notes.push(format!("map {}: {}", i + 1, pairs.join(" ")));
    }
    Ok(Outcome::new(
        json!({"command": "counterexample exposition", "points": points}),
        results,
        notes,
        json!({"exposition": r}),
    ))
}
