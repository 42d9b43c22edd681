//! One row per synonym set with its meronymy parents.

use std::collections::BTreeSet;
use std::io::Read;

use serde::{Deserialize, Serialize};

use super::PublishedSets;
use crate::model::Catalog;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacilityRow {
    pub slug: String,
    pub label: String,
    /// Parent slugs, space-separated in the file.
    #[serde(with = "space_separated")]
    pub parents: Vec<String>,
    pub deprecated: bool,
}

mod space_separated {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[String], s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.join(" "))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<String>, D::Error> {
        let text = String::deserialize(d)?;
        Ok(text.split_whitespace().map(str::to_owned).collect())
    }
}

/// Rows sorted by slug. `part_of` edges are lifted to sets; a set is
/// deprecated when all of its members are.
pub fn facility_rows(catalog: &Catalog, published: &PublishedSets) -> Vec<FacilityRow> {
    let mut rows: Vec<FacilityRow> = published
        .sets
        .iter()
        .enumerate()
        .map(|(i, set)| {
            let parents: BTreeSet<String> = set
                .members
                .iter()
                .flat_map(|m| catalog.get(*m).part_of.iter())
                .filter_map(|p| catalog.lookup(p))
                .filter(|p| published.set_index(*p) != i)
                .map(|p| published.slug_of(p).to_owned())
                .collect();
            FacilityRow {
                slug: published.slugs[i].clone(),
                label: set.pref_label.clone(),
                parents: parents.into_iter().collect(),
                deprecated: set.members.iter().all(|m| catalog.get(*m).deprecated),
            }
        })
        .collect();
    rows.sort_by(|a, b| a.slug.cmp(&b.slug));
    rows
}

pub fn emit_ivoa_csv(catalog: &Catalog, published: &PublishedSets) -> String {
    write_rows(&facility_rows(catalog, published))
}

pub fn write_rows(rows: &[FacilityRow]) -> String {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    writer
        .write_record(["slug", "label", "parents", "deprecated"])
        .expect("in-memory write");
    for row in rows {
        writer.serialize(row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("csv writes utf-8")
}

pub fn read_ivoa_csv<R: Read>(reader: R) -> Result<Vec<FacilityRow>, csv::Error> {
    csv::Reader::from_reader(reader).deserialize().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Entity, SetRegistry, SourcePriority};

    #[test]
    fn child_row_points_to_parent() {
        let mut c = Catalog::from_entities([
            Entity::new("pds:voyager".parse().unwrap(), "Voyager"),
            Entity::new("pds:voyager-1".parse().unwrap(), "Voyager 1").with_part_of("pds:voyager".parse().unwrap()),
            Entity::new("pds:old".parse().unwrap(), "Old, \"quoted\" name"),
        ])
        .unwrap();
        c.get_mut(crate::EntityRef(2)).deprecated = true;
        let r = SetRegistry::new(&c);
        let published = PublishedSets::new(&c, &r, &SourcePriority::default());
        let csv = emit_ivoa_csv(&c, &published);
        assert_eq!(
            csv,
            "slug,label,parents,deprecated\nold-quoted-name,\"Old, \"\"quoted\"\" name\",,true\nvoyager,Voyager,,false\nvoyager-1,Voyager 1,voyager,false\n"
        );
        assert_eq!(read_ivoa_csv(csv.as_bytes()).unwrap(), facility_rows(&c, &published));
    }

    #[test]
    fn empty_catalog_is_header_only() {
        let c = Catalog::new();
        let published = PublishedSets::new(&c, &SetRegistry::new(&c), &SourcePriority::default());
        assert_eq!(emit_ivoa_csv(&c, &published), "slug,label,parents,deprecated\n");
    }
}
