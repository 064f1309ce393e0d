use std::collections::{BTreeMap, HashSet};

use fmol_core::{catalog, catalog_list, instantiate, Curve, Error, UnitKind};

#[test]
fn more_than_a_hundred_entries_with_named_families() {
    let list = catalog_list();
    assert!(list.len() >= 100, "{} entries", list.len());
    let has = |kind: UnitKind, name: &str| list.iter().any(|d| d.kind == kind && d.base_algorithm == name);
    for name in ["sine", "square", "sample player"] {
        assert!(has(UnitKind::Generator, name), "missing generator {name}");
        assert!(list.iter().any(|d| d.name == name), "missing unit named {name}");
    }
    for name in ["filter", "reverb", "resonator"] {
        assert!(has(UnitKind::Processor, name), "missing processor {name}");
    }
}

#[test]
fn ids_sorted_unique_and_variations_unique() {
    let list = catalog_list();
    assert!(list.windows(2).all(|w| w[0].unit_id < w[1].unit_id));
    let pairs: HashSet<_> = list.iter().map(|d| (d.base_algorithm, d.variation)).collect();
    assert_eq!(pairs.len(), list.len());
    let names: HashSet<_> = list.iter().map(|d| d.name.as_str()).collect();
    assert_eq!(names.len(), list.len());
}

#[test]
fn schemas_are_well_formed() {
    for d in catalog_list() {
        assert!(d.arity() >= 1, "{}", d.name);
        if d.kind == UnitKind::Generator {
            assert_eq!(d.param_schema.last().unwrap().name, "pan", "{}", d.name);
            assert!(d.frequency_index().is_some(), "{}", d.name);
        }
        for p in &d.param_schema {
            assert!((0.0..=1.0).contains(&p.default), "{}.{}", d.name, p.name);
            assert!(p.min < p.max);
            if p.curve == Curve::Exponential {
                assert!(p.min > 0.0);
            }
        }
    }
}

#[test]
fn one_bypass_per_processor_family() {
    let mut bypasses: BTreeMap<&str, usize> = BTreeMap::new();
    for d in catalog_list().iter().filter(|d| d.kind == UnitKind::Processor) {
        *bypasses.entry(d.base_algorithm).or_default() += usize::from(d.bypass);
    }
    assert!(bypasses.len() >= 8);
    for (family, count) in bypasses {
        assert_eq!(count, 1, "family {family}");
    }
    assert!(catalog_list()
        .iter()
        .filter(|d| d.kind == UnitKind::Generator)
        .all(|d| !d.bypass));
}

#[test]
fn unknown_ids_fail() {
    assert_eq!(catalog().get(99).unwrap_err(), Error::UnknownUnit(99));
    assert!(instantiate(100_000, 44100, 0).is_err());
}

#[test]
fn ids_are_stable() {
    // Persisted scorefiles depend on these never moving.
    let expect = [(0, "sine"), (1, "square"), (2, "square bl"), (100, "bypass"), (101, "lowpass 12")];
    for (id, name) in expect {
        assert_eq!(catalog().get(id).unwrap().name, name);
    }
    assert_eq!(catalog().by_name("sample player").map(|d| d.kind), Some(UnitKind::Generator));
}

#[test]
fn frequency_mappings_strictly_increase() {
    for d in catalog_list() {
        for p in d.param_schema.iter().filter(|p| p.frequency_like) {
            let mut prev = f32::NEG_INFINITY;
            for i in 0..=1000 {
                let v = p.to_physical(i as f32 / 1000.0);
                assert!(v > prev, "{}.{} at {i}", d.name, p.name);
                prev = v;
            }
            assert!((p.to_physical(0.0) - p.min).abs() < 1e-3);
            assert!((p.to_physical(1.0) - p.max).abs() / p.max < 1e-5);
        }
    }
}
