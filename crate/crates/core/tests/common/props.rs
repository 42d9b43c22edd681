//! Property suites shared by the integration tests and the acceptance
//! harness. Each runner returns the first minimized failure as text.

use std::fmt::Debug;

use chrono::{DateTime, NaiveDateTime};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use facmatch::emit::ivoa_csv::{facility_rows, read_ivoa_csv, write_rows};
use facmatch::emit::linked::linked_entities;
use facmatch::emit::{emit_resolver_json, PublishedSets, ResolverDictionary};
use facmatch::ingest::{read_records, write_records};
use facmatch::matcher::{evaluate_criterion, Criterion, Decision, Side};
use facmatch::model::{
    elect_pref_label, Aperture, Catalog, Entity, EntityId, EntityRef, FacilityClass, IdScheme, SetRegistry, SourceId,
    SourcePriority,
};
use facmatch::profile::EntityProfile;
use facmatch::strategy::{FilterToken, Step, TypeFilter};
use facmatch::{Strategy as MappingStrategy, StrategyLine};

pub const CASES: u32 = 512;

const LABELS: &[&str] = &[
    "Voyager 1",
    "Voyager 2",
    "La Silla Observatory",
    "ESO 3.6m Telescope",
    "Observatorio del Teide",
    "Teide Observatory",
    "Hubble Space Telescope",
    "HST",
    "COSMOS 1221",
    "Mauna Kea",
    "Spitzer",
    "Cassini",
];
const NOTATIONS: &[&str] = &["12058", "1980-090A", "ESO:1.52m", "250", "309", "-31"];
const IDS: &[&str] = &["-31", "-32", "1977-084A", "1980-090A", "250", "309"];
const BANDS: &[&str] = &["optical", "infrared", "radio", "uv"];

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

fn check<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String>
where
    S::Value: Debug,
{
    runner(cases).run(&strategy, test).map_err(|e| e.to_string())
}

fn class() -> impl Strategy<Value = FacilityClass> {
    prop::sample::select(vec![
        FacilityClass::Telescope,
        FacilityClass::Observatory,
        FacilityClass::Spacecraft,
        FacilityClass::AirbornePlatform,
        FacilityClass::Investigation,
        FacilityClass::Unknown,
    ])
}

fn year() -> impl Strategy<Value = Option<i32>> {
    prop::option::of(prop::sample::select(vec![1969, 1977, 1980, 1990, 2003]))
}

/// Coordinates that are sometimes a few km apart, so the distance
/// criterion sees both outcomes.
fn coordinates() -> impl Strategy<Value = Option<(f64, f64)>> {
    prop::option::of(prop_oneof![
        (-89.9f64..89.9, -180.0f64..179.9),
        (-0.05f64..0.05, -0.05f64..0.05).prop_map(|(a, b)| (-29.2552 + a, -70.7395 + b)),
    ])
}

fn timestamp() -> impl Strategy<Value = Option<NaiveDateTime>> {
    prop::option::of((0i64..2_000_000_000, 0u32..1_000_000).prop_map(|(s, us)| {
        DateTime::from_timestamp(s, us * 1000).expect("in range").naive_utc()
    }))
}

pub fn entity(source: &'static str, slug: String) -> impl Strategy<Value = Entity> {
    let labels = (
        prop::sample::select(LABELS),
        prop::collection::btree_set(prop::sample::select(LABELS), 0..3),
        prop::collection::btree_set(prop::sample::select(NOTATIONS), 0..2),
        class(),
        prop::collection::btree_map(prop::sample::select(IdScheme::ALL.to_vec()), prop::sample::select(IDS), 0..3),
    );
    let physical = (
        coordinates(),
        prop::option::of(prop::sample::select(vec![1.5, 1.52, 2.2, 3.6, 8.2])),
        year(),
        year(),
        year(),
    );
    let other = (
        prop::collection::btree_set(prop::sample::select(BANDS), 0..3),
        prop::option::of("[a-z ]{1,20}"),
        timestamp(),
        any::<bool>(),
        prop::option::of(0.0f64..=1.0),
        prop::option::of(-100.0f64..5000.0),
    );
    (labels, physical, other).prop_map(move |(l, p, o)| {
        let mut e = Entity::new(EntityId::new(SourceId::new(source).unwrap(), slug.clone()), l.0);
        for alt in l.1 {
            e.add_alt_label(alt.to_owned());
        }
        e.notations = l.2.into_iter().map(str::to_owned).collect();
        e.class = l.3;
        e.external_ids = l.4.into_iter().map(|(k, v)| (k, v.to_owned())).collect();
        if let Some((lat, lon)) = p.0 {
            e = e.with_coordinates(lat, lon);
        }
        e.aperture = p.1.map(Aperture::from_meters);
        (e.launch_year, e.start_year, e.end_year) = (p.2, p.3, p.4);
        e.wavebands = o.0.into_iter().map(str::to_owned).collect();
        e.description = o.1.map(|d| d.trim().to_owned()).filter(|d| !d.is_empty());
        e.modified = o.2;
        e.deprecated = o.3;
        e.type_confidence = o.4;
        e.altitude = o.5;
        e
    })
}

fn eval(c: Criterion, a: &Entity, b: &Entity) -> Decision {
    let (pa, pb) = (EntityProfile::of(a), EntityProfile::of(b));
    evaluate_criterion(c, Side { entity: a, profile: &pa }, Side { entity: b, profile: &pb })
}

pub fn criterion_symmetry(cases: u32) -> Result<(), String> {
    let pair = (entity("aas", "a".into()), entity("pds", "b".into()));
    check(cases, pair, |(a, b)| {
        for c in Criterion::ALL {
            prop_assert_eq!(eval(c, &a, &b), eval(c, &b, &a), "{}", c);
        }
        Ok(())
    })
}

/// Clears one optional field; `which` ranges over 0..10.
fn drop_field(e: &mut Entity, which: usize) {
    match which {
        0 => e.alt_labels.clear(),
        1 => e.notations.clear(),
        2 => (e.latitude, e.longitude) = (None, None),
        3 => e.aperture = None,
        4 => e.launch_year = None,
        5 => e.start_year = None,
        6 => e.end_year = None,
        7 => e.class = FacilityClass::Unknown,
        8 => {
            e.external_ids.pop_first();
        }
        _ => e.external_ids.clear(),
    }
}

pub fn missing_data_monotonicity(cases: u32) -> Result<(), String> {
    let input = (entity("aas", "a".into()), entity("pds", "b".into()), 0usize..10, any::<bool>());
    check(cases, input, |(a, b, which, left)| {
        let (mut a2, mut b2) = (a.clone(), b.clone());
        drop_field(if left { &mut a2 } else { &mut b2 }, which);
        for c in Criterion::ALL {
            let (before, after) = (eval(c, &a, &b), eval(c, &a2, &b2));
            prop_assert!(
                after == before || after == Decision::Neutral,
                "{}: {:?} became {:?} after dropping field {}",
                c,
                before,
                after,
                which
            );
        }
        Ok(())
    })
}

fn plain_catalog(n: usize) -> Catalog {
    Catalog::from_entities((0..n).map(|i| {
        Entity::new(EntityId::new(SourceId::new("wikidata").unwrap(), format!("e{i:02}")), format!("E {i}"))
    }))
    .unwrap()
}

/// Component ids by repeated relabeling.
fn naive_components(n: usize, merges: &[(usize, usize)]) -> Vec<usize> {
    let mut comp: Vec<usize> = (0..n).collect();
    for &(a, b) in merges {
        let (from, to) = (comp[a].max(comp[b]), comp[a].min(comp[b]));
        for c in comp.iter_mut() {
            if *c == from {
                *c = to;
            }
        }
    }
    comp
}

fn merges() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1usize..24).prop_flat_map(|n| (Just(n), prop::collection::vec((0..n, 0..n), 0..40)))
}

pub fn union_find_laws(cases: u32) -> Result<(), String> {
    check(cases, merges(), |(n, ops)| {
        let catalog = plain_catalog(n);
        let mut forward = SetRegistry::new(&catalog);
        let mut backward = SetRegistry::new(&catalog);
        for &(a, b) in &ops {
            forward.merge(EntityRef(a), EntityRef(b));
        }
        for &(a, b) in ops.iter().rev() {
            backward.merge(EntityRef(b), EntityRef(a));
        }
        let oracle = naive_components(n, &ops);
        let mut covered = 0;
        for i in 0..n {
            let x = EntityRef(i);
            prop_assert_eq!(forward.find(forward.find(x)), forward.find(x));
            prop_assert!(forward.same_set(x, x));
            prop_assert!(forward.members(x).contains(&x));
            // the root is the smallest id in the set
            prop_assert_eq!(forward.find(x), EntityRef(oracle[i]));
            prop_assert_eq!(backward.find(x), forward.find(x));
            for j in 0..n {
                let y = EntityRef(j);
                prop_assert_eq!(forward.same_set(x, y), oracle[i] == oracle[j]);
                prop_assert_eq!(forward.same_set(x, y), forward.same_set(y, x));
            }
        }
        for members in forward.groups().values() {
            covered += members.len();
        }
        prop_assert_eq!(covered, n);
        Ok(())
    })
}

fn member_specs() -> impl Strategy<Value = (Vec<(usize, &'static str)>, Vec<usize>, Vec<usize>)> {
    prop::collection::vec((0usize..8, prop::sample::select(LABELS)), 1..8).prop_flat_map(|specs| {
        let n = specs.len();
        (
            Just(specs),
            Just((0..8).collect::<Vec<_>>()).prop_shuffle(),
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
        )
    })
}

pub fn pref_label_order_independence(cases: u32) -> Result<(), String> {
    check(cases, member_specs(), |(specs, priority_perm, insertion)| {
        let defaults = SourceId::defaults();
        let priority = SourcePriority::new(priority_perm.iter().map(|&i| defaults[i].clone()).collect()).unwrap();
        let entities: Vec<Entity> = specs
            .iter()
            .enumerate()
            .map(|(i, (s, label))| Entity::new(EntityId::new(defaults[*s].clone(), format!("m{i}")), *label))
            .collect();
        let shuffled: Vec<Entity> = insertion.iter().map(|&i| entities[i].clone()).collect();
        let direct = elect_pref_label(entities.iter(), &priority);
        prop_assert_eq!(&elect_pref_label(shuffled.iter(), &priority), &direct);

        // the same holds through a registry built in another order
        let catalog = Catalog::from_entities(shuffled).unwrap();
        let mut registry = SetRegistry::new(&catalog);
        for i in 1..catalog.len() {
            registry.merge(EntityRef(i), EntityRef(0));
        }
        let sets = registry.synonym_sets(&catalog, &priority);
        prop_assert_eq!(sets.len(), 1);
        let (label, source) = direct.unwrap();
        prop_assert_eq!(&sets[0].pref_label, &label);
        prop_assert_eq!(&sets[0].pref_source, &source);
        Ok(())
    })
}

fn catalog_strategy() -> impl Strategy<Value = Vec<Entity>> {
    let sources = ["aas", "pds", "wikidata"];
    prop::collection::vec((0usize..3).prop_flat_map(move |s| entity(sources[s], String::new())), 1..8).prop_map(
        |mut es| {
            for (i, e) in es.iter_mut().enumerate() {
                e.id = EntityId::new(e.source().clone(), format!("r{i}"));
            }
            es
        },
    )
}

fn records_text(entities: &[Entity]) -> String {
    let mut buf = Vec::new();
    write_records(&mut buf, entities).unwrap();
    String::from_utf8(buf).unwrap()
}

/// Record serialization, the linked catalog, the resolver dictionary and
/// the meronymy CSV all reach a fixed point after one round trip.
pub fn round_trip_fixed_points(cases: u32) -> Result<(), String> {
    let input = (catalog_strategy(), prop::collection::vec((0usize..8, 0usize..8), 0..6));
    check(cases, input, |(entities, ops)| {
        let text = records_text(&entities);
        let back = read_records(text.as_bytes(), None).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(&back, &entities);
        prop_assert_eq!(records_text(&back), text);

        let catalog = Catalog::from_entities(entities).unwrap();
        let mut registry = SetRegistry::new(&catalog);
        for (a, b) in ops {
            registry.merge(EntityRef(a % catalog.len()), EntityRef(b % catalog.len()));
        }
        let linked = linked_entities(&catalog, &registry);
        let linked_text = records_text(&linked);
        let reread = read_records(linked_text.as_bytes(), None).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(&reread, &linked);

        let priority = SourcePriority::new(SourceId::defaults()).unwrap();
        let published = PublishedSets::new(&catalog, &registry, &priority);
        let (dictionary, _) = emit_resolver_json(&catalog, &published);
        let json = dictionary.to_json();
        let parsed = ResolverDictionary::from_json(&json).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(&parsed, &dictionary);
        prop_assert_eq!(parsed.to_json(), json);

        let rows = facility_rows(&catalog, &published);
        let csv = write_rows(&rows);
        let reread = read_ivoa_csv(csv.as_bytes()).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(&reread, &rows);
        prop_assert_eq!(write_rows(&reread), csv);
        Ok(())
    })
}

fn strategy_line() -> impl Strategy<Value = StrategyLine> {
    let step = prop::sample::select(Step::registry());
    let token = prop_oneof![
        Just(FilterToken::All),
        class().prop_filter("known", |c| c.is_known()).prop_map(FilterToken::Include),
        class().prop_filter("known", |c| c.is_known()).prop_map(FilterToken::Exclude),
    ];
    (
        0usize..8,
        0usize..8,
        prop::option::of(prop::collection::vec(token, 1..3)),
        prop::collection::vec(step, 1..7),
    )
        .prop_map(|(a, b, filter, steps)| {
            let defaults = SourceId::defaults();
            StrategyLine {
                source_a: defaults[a].clone(),
                source_b: defaults[b].clone(),
                type_filter: filter.map(TypeFilter::new),
                steps,
                line_no: 0,
            }
        })
}

pub fn strategy_round_trip(cases: u32) -> Result<(), String> {
    check(cases, prop::collection::vec(strategy_line(), 1..6), |lines| {
        let strategy = MappingStrategy { lines };
        let text = strategy.render();
        let parsed = MappingStrategy::parse(&text).map_err(|e| TestCaseError::fail(format!("{e}: {text}")))?;
        prop_assert_eq!(&parsed, &strategy);
        prop_assert_eq!(parsed.render(), text);
        Ok(())
    })
}

/// Every property suite by name.
pub fn all() -> Vec<(&'static str, fn(u32) -> Result<(), String>)> {
    vec![
        ("criterion symmetry", criterion_symmetry as fn(u32) -> Result<(), String>),
        ("missing-data monotonicity", missing_data_monotonicity),
        ("union-find equivalence laws", union_find_laws),
        ("pref-label order independence", pref_label_order_independence),
        ("ingest/emit round-trip fixed points", round_trip_fixed_points),
        ("strategy render/parse fixed point", strategy_round_trip),
    ]
}
