//! Workloads shared by the benchmarks and the acceptance run.

use fmol_core::catalog::{GEN_AMP, GEN_RELEASE};
use fmol_core::patch::TRACKS;
use fmol_core::score::Scorefile;
use fmol_core::{catalog, ControlEvent, LfoConfig, LfoShape, ParamAddress, Patch, Slot, TrackConfig, UnitConfig};

/// Generator and processors per track, all of them doing real work.
const CHAINS: [(u32, [u32; 3]); TRACKS] = [
    (42, [102, 134, 121]), // supersaw 7 -> lowpass 24 -> cathedral -> pingpong
    (31, [113, 143, 132]), // fm 11 -> chord fifth -> tanh -> hall
    (35, [118, 126, 106]), // pluck harp -> seventh chord -> cascade delay -> bandpass 24
    (39, [155, 150, 135]), // additive bell -> formant i -> asymmetric -> plate
    (11, [157, 137, 127]), // pink noise -> formant u -> ring sine -> cluster delay
    (2, [108, 145, 133]),  // square bl -> peak -> foldback -> large hall
];

fn unit(id: u32, lfo_target: usize) -> UnitConfig {
    let mut u = UnitConfig::new(catalog(), id).expect("catalog id");
    for (j, lfo) in u.lfos.iter_mut().enumerate() {
        *lfo = LfoConfig {
            rate: 0.01 + 0.02 * j as f32,
            depth: 0.1,
            shape: LfoShape::ALL[j % LfoShape::ALL.len()],
            target: Some((lfo_target + j) % u.params.len()),
        };
    }
    u
}

/// Six tracks of 1 generator + 3 processors with no bypass anywhere and
/// every LFO running.
pub fn busy_patch() -> Patch {
    let tracks = CHAINS
        .iter()
        .map(|&(gen, procs)| {
            let mut generator = unit(gen, 0);
            generator.params[GEN_AMP] = 0.6;
            generator.params[GEN_RELEASE] = 1.0;
            TrackConfig {
                generator,
                processors: procs.map(|p| unit(p, 0)),
                gain: 0.4,
            }
        })
        .collect();
    Patch::new(tracks, 44100).expect("valid patch")
}

/// `busy_patch` as a score that retriggers every generator each second.
pub fn busy_score(duration_ms: u64) -> Scorefile {
    let mut score = Scorefile::new(catalog(), 44100, 7, duration_ms);
    score.patch = busy_patch();
    score.meta.title = "busy".into();
    for t in (0..duration_ms).step_by(1000) {
        for track in 0..TRACKS {
            score
                .events
                .push(ControlEvent::trigger(t + track as u64 * 50, ParamAddress::param(track, Slot::Gen, 0)));
        }
    }
    score.events.sort_by_key(|e| e.time_ms);
    score
}

#[cfg(test)]
mod tests {
    use fmol_core::{catalog::BYPASS_ID, render_score, score};

    use super::*;

    #[test]
    fn every_unit_is_active() {
        let patch = busy_patch();
        patch.validate(catalog()).unwrap();
        for t in patch.tracks() {
            for p in &t.processors {
                assert!(!catalog().get(p.unit_id).unwrap().bypass && p.unit_id != BYPASS_ID);
            }
        }
    }

    #[test]
    fn busy_score_is_valid_and_loud() {
        let s = busy_score(500);
        let text = score::serialize(&s);
        assert_eq!(score::parse(&text, catalog()).unwrap(), s);
        let audio = render_score(&s).unwrap();
        assert!(audio.left.iter().any(|x| x.abs() > 0.05));
    }
}
