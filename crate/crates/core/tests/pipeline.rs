use std::collections::{HashMap, HashSet};

use gsdf_core::blockgen::{gs_psd_bound, psd_filter, psd_tolerance};
use gsdf_core::catalog::{catalog, catalog_entry};
use gsdf_core::equivalence::{
    apply_transform, are_equivalent, canonical_form, classify, small_canonical_form,
};
use gsdf_core::family::{format_records, parse_records};
use gsdf_core::search::{search, SearchOptions};
use gsdf_core::verify::{certify, check_best_matrices, gs_array_of, is_skew_hadamard};
use gsdf_core::{CyclicSubset, FamilyRecord, SymmetryType, Transform, TypedFamily};

#[test]
fn catalog_representatives_are_pairwise_inequivalent() {
    let entries = catalog();
    let mut groups: HashMap<(u32, SymmetryType), Vec<usize>> = HashMap::new();
    for (i, e) in entries.iter().enumerate() {
        groups.entry((e.v(), e.symmetry_type)).or_default().push(i);
    }
    for (key, idx) in groups {
        let fams: Vec<_> = idx.iter().map(|&i| entries[i].family.clone()).collect();
        let classes = classify(&fams);
        assert_eq!(classes.len(), fams.len(), "{key:?}");
    }
    let a = catalog_entry("33-kkss-a").unwrap().family;
    let b = catalog_entry("33-kkss-b").unwrap().family;
    assert_ne!(canonical_form(&a), canonical_form(&b));
    assert!(!are_equivalent(&a, &b).unwrap());
}

#[test]
fn catalog_blocks_pass_the_spectral_bound() {
    for e in catalog() {
        let v = e.v();
        for b in &e.family.blocks {
            assert!(psd_filter(b, gs_psd_bound(v), psd_tolerance(v)), "{}", e.label);
        }
    }
}

#[test]
fn catalog_round_trips_through_the_text_format() {
    let recs: Vec<FamilyRecord> = catalog()
        .into_iter()
        .map(|e| FamilyRecord {
            label: Some(e.label),
            family: e.family,
        })
        .collect();
    let text = format_records(&recs);
    assert_eq!(parse_records(&text, "round trip").unwrap(), recs);
}

#[test]
fn best_matrices_of_order_43() {
    let f = catalog_entry("43-kkks-a").unwrap().family;
    let c = certify(&f);
    assert!(c.passed());
    assert_eq!(c.difference.lambda(), Some(35));
    assert!(check_best_matrices(&f).unwrap());
    let h = gs_array_of(&f).matrix;
    assert_eq!(h.order(), 172);
    assert!(is_skew_hadamard(&h));
}

/// Some block has a skew or symmetric translate other than itself.
fn has_typed_translate(f: &TypedFamily) -> bool {
    f.blocks.iter().any(|b| {
        (1..b.v()).any(|g| {
            let t = b.translate(g);
            t != *b && (t.is_skew() || t.is_symmetric())
        })
    })
}

/// Without typed translates, a class only mixes sign changes of the skew
/// blocks modulo dilation: at most 2 small classes for kkss, 4 for kkks.
#[test]
fn small_classes_per_full_class_are_bounded() {
    let mut exceptions = Vec::new();
    for v in (3..=21).step_by(2) {
        for (ty, bound) in [(SymmetryType::Kkss, 2), (SymmetryType::Kkks, 4)] {
            let r = search(v, ty, SearchOptions::default()).unwrap();
            for o in &r.outcomes {
                let mut per_class: HashMap<_, (HashSet<_>, bool)> = HashMap::new();
                for f in &o.families {
                    let e = per_class.entry(canonical_form(f)).or_default();
                    e.0.insert(small_canonical_form(f));
                    e.1 |= has_typed_translate(f);
                }
                assert_eq!(per_class.len(), o.classes.len());
                let small: usize = per_class.values().map(|s| s.0.len()).sum();
                assert_eq!(small, o.small_classes.len(), "v={v} {ty}");
                for (smalls, translates) in per_class.values() {
                    if smalls.len() > bound {
                        assert!(translates, "v={v} {ty}: {} small classes", smalls.len());
                        exceptions.push((v, ty));
                    }
                }
            }
        }
    }
    assert!(exceptions.contains(&(9, SymmetryType::Kkss)));
}

/// A skew block of Z_9 whose translate by 3 is again skew joins four small
/// classes into one full class.
#[test]
fn translation_links_small_classes_at_order_9() {
    let x = CyclicSubset::new(9, &[1, 3, 4, 7]).unwrap();
    assert!(x.is_skew() && !x.is_periodic());
    let y = x.translate(3);
    assert_eq!(y, CyclicSubset::new(9, &[1, 4, 6, 7]).unwrap());
    assert!(y.is_skew());
    assert!(y != x && y != x.negate());

    let r = search(9, SymmetryType::Kkss, SearchOptions::default()).unwrap();
    assert_eq!(r.class_count(), 1);
    assert_eq!(r.small_class_count(), 4);
    let a = TypedFamily::from_blocks([
        CyclicSubset::new(9, &[1, 2, 3, 5]).unwrap(),
        x,
        CyclicSubset::new(9, &[0, 4, 5]).unwrap(),
        CyclicSubset::new(9, &[1, 8]).unwrap(),
    ])
    .unwrap();
    let b = apply_transform(&a, Transform::Translate { block: 1, g: 3 }).unwrap();
    assert!(certify(&b).passed());
    assert!(are_equivalent(&a, &b).unwrap());
    assert_ne!(small_canonical_form(&a), small_canonical_form(&b));
}

#[test]
fn search_results_are_difference_families() {
    for ty in SymmetryType::ALL {
        let r = search(13, ty, SearchOptions::default()).unwrap();
        for f in r.families() {
            assert_eq!(certify(&f).difference.lambda(), Some(f.params.lambda));
        }
    }
}
