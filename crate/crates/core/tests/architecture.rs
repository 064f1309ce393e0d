mod common;

use common::SR;
use fmol_core::catalog::{BYPASS_ID, SINE_ID};
use fmol_core::patch::{LFOS, PROCESSORS, TRACKS};
use fmol_core::{catalog, make_engine, score, Error, LfoShape, Patch, Slot, TrackConfig, UnitKind};

#[test]
fn engine_has_six_tracks_of_four_units() {
    let engine = make_engine(Patch::default_patch(catalog()), SR).unwrap();
    assert_eq!(TRACKS, 6);
    assert_eq!(PROCESSORS, 3);
    assert_eq!(engine.unit_count(), 24);
    for t in 0..TRACKS {
        assert_eq!(engine.unit_state(t, Slot::Gen).descriptor().kind, UnitKind::Generator);
        for slot in [Slot::P0, Slot::P1, Slot::P2] {
            assert_eq!(engine.unit_state(t, slot).descriptor().kind, UnitKind::Processor);
        }
        for slot in Slot::ALL {
            assert_eq!(engine.patch().unit(t, slot).lfos.len(), 4);
        }
    }
    assert_eq!(LFOS, 4);
}

#[test]
fn five_lfo_shapes() {
    let names: Vec<&str> = LfoShape::ALL.iter().map(|s| s.as_str()).collect();
    assert_eq!(names, ["sine", "square", "triangle", "saw", "random"]);
}

#[test]
fn track_counts_other_than_six_are_rejected() {
    let track = TrackConfig::with_generator(catalog(), SINE_ID).unwrap();
    for n in [0, 1, 5, 7, 12] {
        assert_eq!(Patch::new(vec![track.clone(); n], SR).unwrap_err(), Error::TrackCount(n));
    }
    assert!(Patch::new(vec![track; 6], SR).is_ok());
}

#[test]
fn seven_track_scorefile_is_rejected() {
    let mut text = String::from("FMOLSCORE 1\nSR 44100\nSEED 0\nDUR 100\n");
    for t in 0..7 {
        text += &format!("TRACK {} GEN 0 0.5 0.5 0.5 0.5 PROC 100 0 PROC 100 0 PROC 100 0\n", t.min(5));
    }
    let err = score::parse(&text, catalog()).unwrap_err();
    assert!(err.message.contains("six tracks"), "{err}");
}

#[test]
fn slots_enforce_unit_kinds() {
    let mut patch = Patch::default_patch(catalog());
    patch.unit_mut(0, Slot::Gen).unit_id = BYPASS_ID;
    patch.unit_mut(0, Slot::Gen).params = vec![0.0];
    assert!(matches!(make_engine(patch, SR), Err(Error::UnitKind { .. })));

    let mut patch = Patch::default_patch(catalog());
    *patch.unit_mut(2, Slot::P1) = fmol_core::UnitConfig::new(catalog(), SINE_ID).unwrap();
    assert!(matches!(make_engine(patch, SR), Err(Error::UnitKind { .. })));
}
