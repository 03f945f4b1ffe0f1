//! JSON file formats: monoids, indexed relations, actions, extensions.
//! Saving is canonical (fixed key order, two-space indent, trailing
//! newline), so a load/save round trip is byte-stable.

use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::action::CandidateAction;
use crate::error::{Error, Result};
use crate::extension::ExtensionPresentation;
use crate::fixtures;
use crate::indexed::IndexedEqRel;
use crate::monoid::{Elem, FiniteMonoid, MonoidMap};
use crate::partition;

/// Resolves monoid names appearing inside relation, action and extension
/// files.
pub trait MonoidSource {
    fn resolve(&self, name: &str) -> Result<FiniteMonoid>;
}

/// The in-repo catalog alone.
pub struct Catalog;

impl MonoidSource for Catalog {
    fn resolve(&self, name: &str) -> Result<FiniteMonoid> {
        fixtures::by_name(name).ok_or_else(|| Error::UnknownMonoid(name.into()))
    }
}

/// Catalog names first, then `<dir>/<name>.json`.
pub struct FileCatalog {
    pub dir: PathBuf,
}

impl MonoidSource for FileCatalog {
    fn resolve(&self, name: &str) -> Result<FiniteMonoid> {
        if let Some(m) = fixtures::by_name(name) {
            return Ok(m);
        }
        let path = self.dir.join(format!("{name}.json"));
        if path.exists() {
            return read_monoid_file(&path);
        }
        Err(Error::UnknownMonoid(name.into()))
    }
}

fn pretty(value: &Value) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("value serializes");
    out.push('\n');
    out
}

fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Io(format!("invalid JSON: {e}")))
}

fn field<'v>(value: &'v Value, key: &str) -> Result<&'v Value> {
    value
        .get(key)
        .ok_or_else(|| Error::Io(format!("missing field '{key}'")))
}

fn as_str(value: &Value, key: &str) -> Result<String> {
    field(value, key)?
        .as_str()
        .map(str::to_string)
        .ok_or_else(|| Error::Io(format!("field '{key}' must be a string")))
}

fn as_usize(value: &Value) -> Result<usize> {
    value
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| Error::Io("expected a non-negative integer".into()))
}

fn as_index_vec(value: &Value) -> Result<Vec<Elem>> {
    value
        .as_array()
        .ok_or_else(|| Error::Io("expected an array".into()))?
        .iter()
        .map(as_usize)
        .collect()
}

fn as_index_table(value: &Value) -> Result<Vec<Vec<Elem>>> {
    value
        .as_array()
        .ok_or_else(|| Error::Io("expected an array of arrays".into()))?
        .iter()
        .map(as_index_vec)
        .collect()
}

// ---------------------------------------------------------------------
// Monoid files: {"name", "elements", "identity", "table"}.

pub fn save_monoid_json(m: &FiniteMonoid) -> String {
    pretty(&json!({
        "name": m.name,
        "elements": m.elements,
        "identity": m.identity,
        "table": m.table,
    }))
}

pub fn load_monoid_json(text: &str) -> Result<FiniteMonoid> {
    let v = parse(text)?;
    let name = as_str(&v, "name")?;
    let elements: Vec<String> = field(&v, "elements")?
        .as_array()
        .ok_or_else(|| Error::Io("field 'elements' must be an array".into()))?
        .iter()
        .map(|e| {
            e.as_str()
                .map(str::to_string)
                .ok_or_else(|| Error::Io("element names must be strings".into()))
        })
        .collect::<Result<_>>()?;
    let identity = as_usize(field(&v, "identity")?)?;
    let table = as_index_table(field(&v, "table")?)?;
    FiniteMonoid::new(name, elements, identity, table)
}

pub fn read_monoid_file(path: &Path) -> Result<FiniteMonoid> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    load_monoid_json(&text)
}

pub fn write_monoid_file(path: &Path, m: &FiniteMonoid) -> Result<()> {
    std::fs::write(path, save_monoid_json(m))
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

// ---------------------------------------------------------------------
// Relation files: {"H", "N", "classes": {h-label: [class ids]}}.

pub fn save_relation_json(rel: &IndexedEqRel) -> String {
    let mut classes = Map::new();
    for h in rel.h.elems() {
        classes.insert(
            rel.h.label(h).to_string(),
            Value::Array(rel.partitions[h].iter().map(|&c| json!(c)).collect()),
        );
    }
    pretty(&json!({
        "H": rel.h.name,
        "N": rel.n.name,
        "classes": classes,
    }))
}

pub fn load_relation_json(text: &str, source: &dyn MonoidSource) -> Result<IndexedEqRel> {
    let v = parse(text)?;
    let h = source.resolve(&as_str(&v, "H")?)?;
    let n = source.resolve(&as_str(&v, "N")?)?;
    let classes = field(&v, "classes")?
        .as_object()
        .ok_or_else(|| Error::Io("field 'classes' must be an object".into()))?;
    let mut partitions = Vec::with_capacity(h.size());
    for idx in h.elems() {
        let label = h.label(idx);
        let ids = classes
            .get(label)
            .ok_or_else(|| Error::Io(format!("missing classes for '{label}'")))?;
        let ids = as_index_vec(ids)?;
        if ids.len() != n.size() {
            return Err(Error::DimensionMismatch(format!(
                "classes for '{label}' must list {} entries",
                n.size()
            )));
        }
        partitions.push(partition::canonicalize(&ids));
    }
    IndexedEqRel::new(h, n, partitions)
}

// ---------------------------------------------------------------------
// Action files: {"H", "N", "table"} with rows indexed by H.

pub fn save_action_json(alpha: &CandidateAction) -> String {
    pretty(&json!({
        "H": alpha.h.name,
        "N": alpha.n.name,
        "table": alpha.table,
    }))
}

pub fn load_action_json(text: &str, source: &dyn MonoidSource) -> Result<CandidateAction> {
    let v = parse(text)?;
    let h = source.resolve(&as_str(&v, "H")?)?;
    let n = source.resolve(&as_str(&v, "N")?)?;
    let table = as_index_table(field(&v, "table")?)?;
    CandidateAction::new(h, n, table)
}

// ---------------------------------------------------------------------
// Extension files: {"N", "G", "H", "k", "e", "s"}.

pub fn save_extension_json(ext: &ExtensionPresentation) -> String {
    pretty(&json!({
        "N": ext.n.name,
        "G": ext.g.name,
        "H": ext.h.name,
        "k": ext.kernel_map.image,
        "e": ext.projection.image,
        "s": ext.section,
    }))
}

pub fn load_extension_json(text: &str, source: &dyn MonoidSource) -> Result<ExtensionPresentation> {
    let v = parse(text)?;
    let n = source.resolve(&as_str(&v, "N")?)?;
    let g = source.resolve(&as_str(&v, "G")?)?;
    let h = source.resolve(&as_str(&v, "H")?)?;
    let k = MonoidMap::new(n, g.clone(), as_index_vec(field(&v, "k")?)?)?;
    let e = MonoidMap::new(g, h, as_index_vec(field(&v, "e")?)?)?;
    let ext = ExtensionPresentation::new(k, e)?;
    match field(&v, "s")? {
        Value::Null => Ok(ext),
        s => ext.with_section(as_index_vec(s)?),
    }
}

pub fn read_extension_file(
    path: &Path,
    source: &dyn MonoidSource,
) -> Result<ExtensionPresentation> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    load_extension_json(&text, source)
}

pub fn write_extension_file(path: &Path, ext: &ExtensionPresentation) -> Result<()> {
    std::fs::write(path, save_extension_json(ext))
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::CompatiblePair;
    use crate::extension::presentation_of_twisted;
    use crate::indexed;
    use crate::monoid::abelian_group_witness;
    use crate::product::twisted_product;

    #[test]
    fn monoid_round_trip_is_byte_stable() {
        for name in fixtures::CATALOG {
            let m = fixtures::by_name(name).unwrap();
            let text = save_monoid_json(&m);
            let back = load_monoid_json(&text).unwrap();
            assert_eq!(back, m);
            assert_eq!(save_monoid_json(&back), text);
        }
    }

    #[test]
    fn relation_round_trip() {
        let all = indexed::enumerate_admissible(&fixtures::two(), &fixtures::z(2)).unwrap();
        for rel in &all {
            let text = save_relation_json(rel);
            let back = load_relation_json(&text, &Catalog).unwrap();
            assert_eq!(&back, rel);
            assert_eq!(save_relation_json(&back), text);
        }
    }

    #[test]
    fn action_round_trip() {
        let alpha = CandidateAction::new(
            fixtures::two(),
            fixtures::z(2),
            vec![vec![0, 1], vec![0, 0]],
        )
        .unwrap();
        let text = save_action_json(&alpha);
        let back = load_action_json(&text, &Catalog).unwrap();
        assert_eq!(back, alpha);
    }

    #[test]
    fn extension_round_trip_through_a_directory_source() {
        let dir = tempfile::tempdir().unwrap();
        let w = abelian_group_witness(&fixtures::z(2)).unwrap();
        let pair = CompatiblePair::new(
            IndexedEqRel::fine(fixtures::z(2), fixtures::z(2)),
            CandidateAction::identity_action(fixtures::z(2), fixtures::z(2)),
        )
        .unwrap();
        let wsd = twisted_product(&w, &pair, &[vec![0, 0], vec![0, 1]]).unwrap();
        let ext = presentation_of_twisted(&wsd).unwrap();

        // G is not a catalog monoid; ship it next to the extension file.
        write_monoid_file(&dir.path().join(format!("{}.json", ext.g.name)), &ext.g).unwrap();
        let path = dir.path().join("ext.json");
        write_extension_file(&path, &ext).unwrap();
        let source = FileCatalog {
            dir: dir.path().to_path_buf(),
        };
        let back = read_extension_file(&path, &source).unwrap();
        assert_eq!(back, ext);
    }

    #[test]
    fn unknown_names_are_refused() {
        assert!(matches!(
            Catalog.resolve("nope"),
            Err(Error::UnknownMonoid(_))
        ));
    }
}
