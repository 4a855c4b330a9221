//! JSON file formats for algebras, T-sets, relations and presheaves.
//!
//! ```text
//! algebra   {"elements": [..], "covers": [[lo, hi], ..]}
//! tset      {"algebra": A, "elements": [..], "id": [[..], ..]}
//! relation  {"source": T, "target": T, "map": {"x": "u", ..}}
//! presheaf  {"algebra": A, "sections": {"p": [..]}, "restrict": {"p>q": {"s": "t"}}}
//! ```
//!
//! `A` and `T` are either inline objects or paths, resolved against the
//! directory of the enclosing file. Restrictions are given along covers only.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::heyting::{HeytingAlgebra, PosetSpec};
use crate::sheaf::presheaf::{cover_pairs, Presheaf};
use crate::tset::relation::TRelation;
use crate::tset::TSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Algebra,
    TSet,
    Relation,
    Presheaf,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Algebra => "algebra",
            Kind::TSet => "tset",
            Kind::Relation => "relation",
            Kind::Presheaf => "presheaf",
        })
    }
}

const SHAPES: [(Kind, &[&str]); 4] = [
    (Kind::Algebra, &["elements", "covers"]),
    (Kind::TSet, &["algebra", "elements", "id"]),
    (Kind::Relation, &["source", "target", "map"]),
    (Kind::Presheaf, &["algebra", "sections", "restrict"]),
];

#[derive(Clone, Debug)]
pub enum Structure {
    Algebra(Arc<HeytingAlgebra>),
    TSet(Arc<TSet>),
    Relation(TRelation),
    Presheaf(Arc<Presheaf>),
}

impl Structure {
    pub fn kind(&self) -> Kind {
        match self {
            Structure::Algebra(_) => Kind::Algebra,
            Structure::TSet(_) => Kind::TSet,
            Structure::Relation(_) => Kind::Relation,
            Structure::Presheaf(_) => Kind::Presheaf,
        }
    }
}

/// The unique kind whose required keys are all present and whose key set
/// accounts for every key of the object.
pub fn detect(v: &Value) -> Result<Kind> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Input("expected a JSON object".into()))?;
    let matches: Vec<Kind> = SHAPES
        .iter()
        .filter(|(_, keys)| keys.iter().all(|k| obj.contains_key(*k)) && obj.keys().all(|k| keys.contains(&k.as_str())))
        .map(|(k, _)| *k)
        .collect();
    match matches.as_slice() {
        [k] => Ok(*k),
        [] => Err(Error::Input(format!(
            "cannot tell the kind of structure from keys {:?}",
            obj.keys().collect::<Vec<_>>()
        ))),
        many => Err(Error::Input(format!("ambiguous structure: matches {many:?}"))),
    }
}

fn base_of(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

/// Reads and parses a file of any kind.
pub fn load(path: impl AsRef<Path>) -> Result<Structure> {
    let path = path.as_ref();
    parse(&read_json(path)?, &base_of(path))
}

pub fn parse(v: &Value, base: &Path) -> Result<Structure> {
    Ok(match detect(v)? {
        Kind::Algebra => Structure::Algebra(Arc::new(parse_algebra(v)?)),
        Kind::TSet => Structure::TSet(Arc::new(parse_tset(v, base)?)),
        Kind::Relation => Structure::Relation(parse_relation(v, base)?),
        Kind::Presheaf => Structure::Presheaf(Arc::new(parse_presheaf(v, base)?)),
    })
}

/// An inline value, or a string naming a file relative to `base`.
fn resolve(v: &Value, base: &Path) -> Result<(Value, PathBuf)> {
    match v {
        Value::String(p) => {
            let path = base.join(p);
            Ok((read_json(&path)?, base_of(&path)))
        }
        Value::Object(_) => Ok((v.clone(), base.to_path_buf())),
        _ => Err(Error::Input("expected an object or a file path".into())),
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Input(format!("missing key `{key}`")))
}

fn strings(v: &Value, what: &str) -> Result<Vec<String>> {
    serde_json::from_value(v.clone()).map_err(|e| Error::Input(format!("{what}: {e}")))
}

pub fn parse_algebra(v: &Value) -> Result<HeytingAlgebra> {
    let spec: PosetSpec = serde_json::from_value(v.clone()).map_err(|e| Error::Input(format!("algebra: {e}")))?;
    HeytingAlgebra::build(&spec)
}

fn algebra_field(v: &Value, base: &Path) -> Result<Arc<HeytingAlgebra>> {
    let (a, _) = resolve(field(v, "algebra")?, base)?;
    Ok(Arc::new(parse_algebra(&a)?))
}

pub fn parse_tset(v: &Value, base: &Path) -> Result<TSet> {
    let h = algebra_field(v, base)?;
    let names = strings(field(v, "elements")?, "elements")?;
    let rows: Vec<Vec<String>> =
        serde_json::from_value(field(v, "id")?.clone()).map_err(|e| Error::Input(format!("id: {e}")))?;
    let table = rows
        .iter()
        .map(|row| row.iter().map(|e| h.elem(e)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    TSet::new(h, names, table)
}

fn tset_field(v: &Value, key: &str, base: &Path) -> Result<Arc<TSet>> {
    let (t, b) = resolve(field(v, key)?, base)?;
    Ok(Arc::new(parse_tset(&t, &b)?))
}

pub fn parse_relation(v: &Value, base: &Path) -> Result<TRelation> {
    let source = tset_field(v, "source", base)?;
    let target = tset_field(v, "target", base)?;
    let pairs: BTreeMap<String, String> =
        serde_json::from_value(field(v, "map")?.clone()).map_err(|e| Error::Input(format!("map: {e}")))?;
    let lookup = |t: &TSet, n: &str| {
        t.index_of(n)
            .ok_or_else(|| Error::Input(format!("unknown T-set element `{n}`")))
    };
    let mut map = vec![None; source.len()];
    for (x, y) in &pairs {
        map[lookup(&source, x)?] = Some(lookup(&target, y)?);
    }
    let map = map
        .into_iter()
        .enumerate()
        .map(|(i, m)| m.ok_or_else(|| Error::Input(format!("no image for `{}`", source.name(i)))))
        .collect::<Result<Vec<_>>>()?;
    TRelation::new(source, target, map)
}

pub fn parse_presheaf(v: &Value, base: &Path) -> Result<Presheaf> {
    let h = algebra_field(v, base)?;
    let given: BTreeMap<String, Vec<String>> =
        serde_json::from_value(field(v, "sections")?.clone()).map_err(|e| Error::Input(format!("sections: {e}")))?;
    let mut sections = vec![Vec::new(); h.size()];
    for (p, list) in given {
        sections[h.elem(&p)?.index()] = list;
    }
    let restrict: BTreeMap<String, BTreeMap<String, String>> =
        serde_json::from_value(field(v, "restrict")?.clone()).map_err(|e| Error::Input(format!("restrict: {e}")))?;
    let mut covers = BTreeMap::new();
    for (key, map) in &restrict {
        let (p, q) = key
            .split_once('>')
            .ok_or_else(|| Error::Input(format!("restriction key `{key}` is not of the form p>q")))?;
        let (p, q) = (h.elem(p.trim())?, h.elem(q.trim())?);
        let find = |e: crate::heyting::Elem, s: &str| {
            sections[e.index()]
                .iter()
                .position(|t| t == s)
                .ok_or_else(|| Error::Input(format!("unknown section `{s}` at {}", h.name(e))))
        };
        let mut m = vec![None; sections[p.index()].len()];
        for (s, t) in map {
            m[find(p, s)?] = Some(find(q, t)?);
        }
        let m = m
            .into_iter()
            .enumerate()
            .map(|(i, x)| {
                x.ok_or_else(|| Error::Input(format!("{key}: no restriction for `{}`", sections[p.index()][i])))
            })
            .collect::<Result<Vec<_>>>()?;
        covers.insert((p, q), m);
    }
    for (p, q) in cover_pairs(&h) {
        if let Entry::Vacant(slot) = covers.entry((p, q)) {
            if !sections[p.index()].is_empty() {
                return Err(Error::Input(format!("missing restriction {}>{}", h.name(p), h.name(q))));
            }
            slot.insert(Vec::new());
        }
    }
    Presheaf::from_covers(h, sections, &covers)
}

pub fn algebra_to_json(h: &HeytingAlgebra) -> Value {
    let spec = h.to_spec();
    json!({"elements": spec.elements, "covers": spec.covers})
}

pub fn tset_to_json(t: &TSet) -> Value {
    let h = t.algebra();
    let id: Vec<Vec<&str>> = (0..t.len())
        .map(|x| (0..t.len()).map(|y| h.name(t.id(x, y))).collect())
        .collect();
    json!({"algebra": algebra_to_json(h), "elements": t.names(), "id": id})
}

pub fn presheaf_to_json(p: &Presheaf) -> Value {
    let h = p.algebra();
    let mut sections = Map::new();
    for e in h.elements() {
        sections.insert(h.name(e).to_string(), json!(p.sections(e)));
    }
    let mut restrict = Map::new();
    for (a, b) in cover_pairs(h) {
        let m: Map<String, Value> = (0..p.count(a))
            .map(|x| (p.sections(a)[x].clone(), json!(p.sections(b)[p.restrict(a, b, x)])))
            .collect();
        restrict.insert(format!("{}>{}", h.name(a), h.name(b)), Value::Object(m));
    }
    json!({"algebra": algebra_to_json(h), "sections": sections, "restrict": restrict})
}

pub fn to_json(s: &Structure) -> Value {
    match s {
        Structure::Algebra(h) => algebra_to_json(h),
        Structure::TSet(t) => tset_to_json(t),
        Structure::Presheaf(p) => presheaf_to_json(p),
        Structure::Relation(r) => {
            let map: Map<String, Value> = (0..r.source.len())
                .map(|x| (r.source.name(x).to_string(), json!(r.target.name(r.apply(x)))))
                .collect();
            json!({"source": tset_to_json(&r.source), "target": tset_to_json(&r.target), "map": map})
        }
    }
}
