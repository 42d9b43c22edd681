//! The linked catalog: every record with exact-match edges to its set-mates.

use crate::ingest::write_records;
use crate::model::{Catalog, Entity, SetRegistry};

/// Records sorted by id; each carries the ids of the other members of its
/// synonym set in `exact_match`.
pub fn linked_entities(catalog: &Catalog, registry: &SetRegistry) -> Vec<Entity> {
    let groups = registry.groups();
    let mut out: Vec<Entity> = catalog.entities().to_vec();
    for members in groups.values() {
        for &m in members {
            let e = &mut out[m.0];
            e.exact_match.extend(members.iter().filter(|o| **o != m).map(|o| catalog.get(*o).id.clone()));
        }
    }
    out.sort_by(|a, b| a.id.cmp(&b.id));
    out
}

pub fn emit_linked_catalog(catalog: &Catalog, registry: &SetRegistry) -> String {
    let mut buf = Vec::new();
    write_records(&mut buf, &linked_entities(catalog, registry)).expect("in-memory write");
    String::from_utf8(buf).expect("records are utf-8")
}
