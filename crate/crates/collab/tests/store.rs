mod common;

use std::collections::HashSet;
use std::sync::Arc;

use common::minimal_piece;
use fmol_collab::{Store, StoreError, Submission};
use fmol_core::catalog;
use fmol_core::score::{parse, serialize};

fn submission(n: u64, author: &str) -> Submission {
    Submission {
        title: format!("t{n}"),
        author: author.into(),
        parent_id: None,
        body: minimal_piece(n),
    }
}

#[test]
fn first_piece_gets_id_one_and_canonical_body() {
    let dir = tempfile::tempdir().unwrap();
    let store = Store::open(dir.path()).unwrap();
    let sloppy = minimal_piece(3).replace("SR 44100", "# comment\nSR   44100");
    let rec = store
        .submit(Submission {
            body: sloppy.clone(),
            ..submission(3, "ana")
        })
        .unwrap();
    assert_eq!(rec.summary.id, 1);
    assert_eq!(rec.body, serialize(&parse(&sloppy, catalog()).unwrap()));
    assert_eq!(store.get(1).unwrap(), rec);
}

#[test]
fn garbage_is_rejected_with_a_line() {
    let dir = tempfile::tempdir().unwrap();
    let store = Store::open(dir.path()).unwrap();
    let err = store
        .submit(Submission {
            body: "garbage".into(),
            ..submission(0, "x")
        })
        .unwrap_err();
    match err {
        StoreError::Parse(p) => assert_eq!(p.line, 1),
        other => panic!("{other}"),
    }
    assert!(store.is_empty());
}

#[test]
fn duplicates_get_new_ids_and_same_hash() {
    let dir = tempfile::tempdir().unwrap();
    let store = Store::open(dir.path()).unwrap();
    let a = store.submit(submission(5, "x")).unwrap();
    let b = store.submit(submission(5, "x")).unwrap();
    assert_ne!(a.summary.id, b.summary.id);
    assert_eq!(a.summary.body_hash, b.summary.body_hash);
    assert_eq!(a.summary.body_hash.len(), 64);
}

#[test]
fn listing_and_lookup() {
    let dir = tempfile::tempdir().unwrap();
    let store = Store::open(dir.path()).unwrap();
    let page = store.list(0, 50, None).unwrap();
    assert_eq!((page.total, page.items.len()), (0, 0));
    assert!(matches!(store.get(0), Err(StoreError::NotFound(0))));
    for n in 0..3 {
        store.submit(submission(n, if n == 1 { "bo" } else { "al" })).unwrap();
    }
    let page = store.list(1, 1, None).unwrap();
    assert_eq!(page.total, 3);
    assert_eq!(page.items.iter().map(|p| p.id).collect::<Vec<_>>(), vec![2]);
    let page = store.list(0, 10, Some("al")).unwrap();
    assert_eq!((page.total, page.items.len()), (2, 2));
    assert!(store.list(10, 10, None).unwrap().items.is_empty());
    assert!(matches!(store.list(0, 501, None), Err(StoreError::PageTooLarge(501))));
}

#[test]
fn lineage_requires_existing_parent() {
    let dir = tempfile::tempdir().unwrap();
    let store = Store::open(dir.path()).unwrap();
    let root = store.submit(submission(1, "a")).unwrap();
    let child = store
        .submit(Submission {
            parent_id: Some(root.summary.id),
            ..submission(2, "b")
        })
        .unwrap();
    let got = store.get(child.summary.id).unwrap();
    assert_eq!(got.summary.parent_id, Some(root.summary.id));
    assert!(store.get(got.summary.parent_id.unwrap()).is_ok());
    let err = store
        .submit(Submission {
            parent_id: Some(99),
            ..submission(3, "c")
        })
        .unwrap_err();
    assert!(matches!(err, StoreError::UnknownParent(99)));
}

#[test]
fn oversize_fields_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let store = Store::open(dir.path()).unwrap();
    let big_body = minimal_piece(1) + &"#".repeat(256 * 1024);
    for s in [
        Submission {
            body: big_body,
            ..submission(1, "a")
        },
        Submission {
            title: "x".repeat(257),
            ..submission(1, "a")
        },
        Submission {
            author: "é".repeat(129),
            ..submission(1, "a")
        },
    ] {
        assert!(matches!(store.submit(s), Err(StoreError::TooLarge { .. })));
    }
    assert!(store
        .submit(Submission {
            title: "x".repeat(256),
            ..submission(1, "a")
        })
        .is_ok());
}

#[test]
fn store_survives_restart_and_never_reuses_ids() {
    let dir = tempfile::tempdir().unwrap();
    let (page, records) = {
        let store = Store::open(dir.path()).unwrap();
        for n in 0..20 {
            store.submit(submission(n, "a")).unwrap();
        }
        let page = store.list(0, 500, None).unwrap();
        let records: Vec<_> = (1..=20).map(|id| store.get(id).unwrap()).collect();
        (page, records)
    };
    let store = Store::open(dir.path()).unwrap();
    assert_eq!(store.list(0, 500, None).unwrap(), page);
    for r in &records {
        assert_eq!(&store.get(r.summary.id).unwrap(), r);
    }
    let next = store.submit(submission(100, "a")).unwrap();
    assert_eq!(next.summary.id, 21);
}

#[test]
fn concurrent_submitters_lose_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let store = Arc::new(Store::open(dir.path()).unwrap());
    let threads: Vec<_> = (0..8)
        .map(|t| {
            let store = store.clone();
            std::thread::spawn(move || {
                (0..25)
                    .map(|i| store.submit(submission(t * 100 + i, &format!("w{t}"))).unwrap().summary.id)
                    .collect::<Vec<_>>()
            })
        })
        .collect();
    let ids: Vec<u64> = threads.into_iter().flat_map(|h| h.join().unwrap()).collect();
    let unique: HashSet<_> = ids.iter().collect();
    assert_eq!(unique.len(), 200);
    assert_eq!(store.len(), 200);
    let listed: Vec<u64> = store.list(0, 500, None).unwrap().items.iter().map(|p| p.id).collect();
    assert_eq!(listed, (1..=200).collect::<Vec<_>>());
    drop(store);
    assert_eq!(Store::open(dir.path()).unwrap().len(), 200);
}
