//! Registry of generator and processor algorithms.
//!
//! Every entry is a `(base_algorithm, variation)` pair with a stable numeric
//! id. Ids are append-only: persisted scorefiles refer to units by id, so an
//! existing id must never be renumbered or repurposed. Generators occupy ids
//! from 0, processors from 100.

use std::sync::LazyLock;

use serde::Serialize;

use crate::buffer::StereoBuffer;
use crate::error::{Error, Result};
use crate::param::{ParamRamp, ParamSpec};
use crate::units::{self, *};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitKind {
    Generator,
    Processor,
}

impl UnitKind {
    pub fn as_str(self) -> &'static str {
        match self {
            UnitKind::Generator => "generator",
            UnitKind::Processor => "processor",
        }
    }
}

/// What to build when a descriptor is instantiated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Algorithm {
    Sine,
    Square,
    Pulse(f64),
    Saw { rising: bool },
    Triangle,
    Noise(NoiseColor),
    Sampler(PlayMode),
    Fm(f64),
    Pluck(PluckVoice),
    Additive(Registration),
    Supersaw(usize),
    Bypass,
    Filter(FilterMode, usize),
    Resonator(ResonatorShape),
    Delay(TapLayout),
    Reverb(RoomSize),
    Ring(CarrierShape),
    Shaper(ShaperCurve),
    Formant(Vowel),
}

#[derive(Debug, Clone, Serialize)]
pub struct UnitDescriptor {
    pub unit_id: u32,
    pub kind: UnitKind,
    pub name: String,
    pub base_algorithm: &'static str,
    pub variation: u8,
    /// The identity variation of a processor family.
    pub bypass: bool,
    pub param_schema: Vec<ParamSpec>,
    #[serde(skip)]
    pub(crate) algorithm: Algorithm,
}

impl UnitDescriptor {
    pub fn arity(&self) -> usize {
        self.param_schema.len()
    }

    pub fn default_params(&self) -> Vec<f32> {
        self.param_schema.iter().map(|p| p.default).collect()
    }

    /// Index of the pan parameter (generators only).
    pub fn pan_index(&self) -> Option<usize> {
        (self.kind == UnitKind::Generator).then(|| self.arity() - 1)
    }

    /// First frequency-like parameter, the pitch target of plucks and arpeggios.
    pub fn frequency_index(&self) -> Option<usize> {
        self.param_schema.iter().position(|p| p.frequency_like)
    }

    /// Index of the amplitude parameter (generators only).
    pub fn amplitude_index(&self) -> Option<usize> {
        (self.kind == UnitKind::Generator).then_some(GEN_AMP)
    }

    /// Maps normalized values through the schema into constant physical ramps.
    pub fn physical(&self, normalized: &[f32]) -> Vec<ParamRamp> {
        self.param_schema
            .iter()
            .zip(normalized)
            .map(|(spec, &x)| ParamRamp::constant(spec.to_physical(x)))
            .collect()
    }
}

/// Generator parameter positions shared by every generator family.
pub const GEN_FREQ: usize = 0;
pub const GEN_AMP: usize = 1;
pub const GEN_RELEASE: usize = 2;

pub const BYPASS_ID: u32 = 100;
pub const SINE_ID: u32 = 0;
pub const SQUARE_ID: u32 = 1;
pub const FIRST_PROCESSOR_ID: u32 = 100;

/// The immutable unit registry.
#[derive(Debug)]
pub struct Catalog {
    units: Vec<UnitDescriptor>,
}

static CATALOG: LazyLock<Catalog> = LazyLock::new(build);

/// The process-wide catalog.
pub fn catalog() -> &'static Catalog {
    &CATALOG
}

/// Every descriptor, sorted by id.
pub fn catalog_list() -> &'static [UnitDescriptor] {
    &CATALOG.units
}

impl Catalog {
    pub fn get(&self, unit_id: u32) -> Result<&UnitDescriptor> {
        self.units
            .binary_search_by_key(&unit_id, |d| d.unit_id)
            .map(|i| &self.units[i])
            .map_err(|_| Error::UnknownUnit(unit_id))
    }

    pub fn iter(&self) -> impl Iterator<Item = &UnitDescriptor> {
        self.units.iter()
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    pub fn by_name(&self, name: &str) -> Option<&UnitDescriptor> {
        self.units.iter().find(|d| d.name == name)
    }
}

/// Running instance of a catalog unit.
pub struct UnitState {
    descriptor: &'static UnitDescriptor,
    dsp: Box<dyn Dsp>,
    armed: bool,
}

impl std::fmt::Debug for UnitState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("UnitState")
            .field("unit_id", &self.descriptor.unit_id)
            .field("name", &self.descriptor.name)
            .field("armed", &self.armed)
            .finish()
    }
}

/// Creates a freshly reset unit. Output is a pure function of
/// `(unit_id, sample_rate, seed)` and the inputs it is fed.
pub fn instantiate(unit_id: u32, sample_rate: u32, seed: u64) -> Result<UnitState> {
    let descriptor = catalog().get(unit_id)?;
    Ok(UnitState {
        descriptor,
        dsp: build_dsp(descriptor.algorithm, sample_rate, seed),
        armed: false,
    })
}

impl UnitState {
    pub fn descriptor(&self) -> &'static UnitDescriptor {
        self.descriptor
    }

    /// Arms the excitation; it fires at the start of the next block.
    pub fn trigger(&mut self) {
        self.armed = true;
    }

    pub fn is_armed(&self) -> bool {
        self.armed
    }

    pub fn reset(&mut self) {
        self.dsp.reset();
        self.armed = false;
    }

    /// Renders one block. `params` are physical values, one ramp per schema entry.
    pub fn process(&mut self, input: Option<&StereoBuffer>, params: &[ParamRamp], out: &mut StereoBuffer) {
        debug_assert_eq!(params.len(), self.descriptor.arity());
        if std::mem::take(&mut self.armed) {
            self.dsp.trigger();
        }
        self.dsp.process(input, params, out);
    }

    /// Convenience wrapper taking constant normalized parameters.
    pub fn process_normalized(&mut self, input: Option<&StereoBuffer>, normalized: &[f32], out: &mut StereoBuffer) {
        let params = self.descriptor.physical(normalized);
        self.process(input, &params, out);
    }
}

fn build_dsp(algorithm: Algorithm, sr: u32, seed: u64) -> Box<dyn Dsp> {
    match algorithm {
        Algorithm::Sine => Box::new(Generator::new(Sine::new(sr), sr)),
        Algorithm::Square => Box::new(Generator::new(NaiveSquare::new(sr), sr)),
        Algorithm::Pulse(w) => Box::new(Generator::new(PolyBlepPulse::new(sr, w), sr)),
        Algorithm::Saw { rising } => Box::new(Generator::new(PolyBlepSaw::new(sr, rising), sr)),
        Algorithm::Triangle => Box::new(Generator::new(Triangle::new(sr), sr)),
        Algorithm::Noise(c) => Box::new(Generator::new(Noise::new(sr, c, seed), sr)),
        Algorithm::Sampler(m) => Box::new(Generator::new(SamplePlayer::new(sr, bundled_tone(), m), sr)),
        Algorithm::Fm(ratio) => Box::new(Generator::new(TwoOpFm::new(sr, ratio), sr)),
        Algorithm::Pluck(v) => Box::new(Generator::new(Pluck::new(sr, v, seed), sr)),
        Algorithm::Additive(r) => Box::new(Generator::new(Additive::new(sr, r), sr)),
        Algorithm::Supersaw(n) => Box::new(Generator::new(Supersaw::new(sr, n), sr)),
        Algorithm::Bypass => Box::new(units::Bypass),
        Algorithm::Filter(mode, stages) => Box::new(StateVariable::new(sr, mode, stages)),
        Algorithm::Resonator(shape) => Box::new(Resonator::new(sr, shape)),
        Algorithm::Delay(layout) => Box::new(MultiTapDelay::new(sr, layout)),
        Algorithm::Reverb(size) => Box::new(Reverb::new(sr, size)),
        Algorithm::Ring(shape) => Box::new(RingMod::new(sr, shape)),
        Algorithm::Shaper(curve) => Box::new(Shaper::new(curve)),
        Algorithm::Formant(vowel) => Box::new(Formant::new(sr, vowel)),
    }
}

fn gen_schema(pitch: ParamSpec, extra: &[ParamSpec]) -> Vec<ParamSpec> {
    let mut schema = vec![
        pitch,
        ParamSpec::linear("amp", 0.0, 1.0, 0.5),
        ParamSpec::exponential("release", 0.01, 20.0, 1.0),
    ];
    schema.extend_from_slice(extra);
    schema.push(ParamSpec::linear("pan", 0.0, 1.0, 0.5));
    schema
}

fn freq() -> ParamSpec {
    ParamSpec::frequency("freq", 20.0, 8000.0, 0.5)
}

struct Builder {
    units: Vec<UnitDescriptor>,
    next_id: u32,
}

impl Builder {
    fn family(
        &mut self,
        kind: UnitKind,
        base: &'static str,
        schema: Vec<ParamSpec>,
        variations: Vec<(String, Algorithm)>,
    ) {
        for (variation, (name, algorithm)) in variations.into_iter().enumerate() {
            self.push(kind, base, variation as u8, name, schema.clone(), algorithm);
        }
    }

    /// A processor family followed by its identity variation.
    fn processor_family(&mut self, base: &'static str, schema: Vec<ParamSpec>, variations: Vec<(String, Algorithm)>) {
        let count = variations.len();
        self.family(UnitKind::Processor, base, schema.clone(), variations);
        self.push(
            UnitKind::Processor,
            base,
            count as u8,
            format!("{base} bypass"),
            schema,
            Algorithm::Bypass,
        );
    }

    fn push(
        &mut self,
        kind: UnitKind,
        base: &'static str,
        variation: u8,
        name: String,
        param_schema: Vec<ParamSpec>,
        algorithm: Algorithm,
    ) {
        self.units.push(UnitDescriptor {
            unit_id: self.next_id,
            kind,
            name,
            base_algorithm: base,
            variation,
            bypass: algorithm == Algorithm::Bypass,
            param_schema,
            algorithm,
        });
        self.next_id += 1;
    }
}

fn named<T: Copy>(items: &[(&str, T)], f: impl Fn(T) -> Algorithm) -> Vec<(String, Algorithm)> {
    items.iter().map(|&(n, v)| (n.to_string(), f(v))).collect()
}

fn build() -> Catalog {
    use UnitKind::Generator as G;
    let mut b = Builder {
        units: Vec::new(),
        next_id: 0,
    };
    let plain = gen_schema(freq(), &[]);

    b.family(G, "sine", plain.clone(), vec![("sine".into(), Algorithm::Sine)]);
    b.family(
        G,
        "square",
        plain.clone(),
        vec![("square".into(), Algorithm::Square), ("square bl".into(), Algorithm::Pulse(0.5))],
    );
    b.family(
        G,
        "pulse",
        plain.clone(),
        named(
            &[("pulse 33", 1.0 / 3.0), ("pulse 25", 0.25), ("pulse 12", 0.125), ("pulse 6", 0.0625)],
            Algorithm::Pulse,
        ),
    );
    b.family(
        G,
        "saw",
        plain.clone(),
        named(&[("saw up", true), ("saw down", false)], |rising| Algorithm::Saw { rising }),
    );
    b.family(G, "triangle", plain.clone(), vec![("triangle".into(), Algorithm::Triangle)]);
    b.family(
        G,
        "noise",
        gen_schema(ParamSpec::frequency("tone", 20.0, 20000.0, 1.0), &[]),
        named(
            &[
                ("white noise", NoiseColor::White),
                ("pink noise", NoiseColor::Pink),
                ("brown noise", NoiseColor::Brown),
                ("sample hold noise", NoiseColor::SampleHold),
            ],
            Algorithm::Noise,
        ),
    );
    b.family(
        G,
        "sample player",
        gen_schema(freq(), &[ParamSpec::linear("start", 0.0, 1.0, 0.0)]),
        named(
            &[
                ("sample player", PlayMode::Loop),
                ("sample player pingpong", PlayMode::PingPong),
                ("sample player oneshot", PlayMode::OneShot),
                ("sample player reverse", PlayMode::Reverse),
            ],
            Algorithm::Sampler,
        ),
    );
    let ratios = [0.5, 1.0, 1.414, 2.0, 2.5, 3.0, 3.5, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 11.0];
    b.family(
        G,
        "fm",
        gen_schema(freq(), &[ParamSpec::linear("index", 0.0, 8.0, 0.25)]),
        ratios.iter().map(|&r| (format!("fm {r}"), Algorithm::Fm(r))).collect(),
    );
    b.family(
        G,
        "pluck",
        gen_schema(freq(), &[ParamSpec::linear("brightness", 0.0, 1.0, 0.5)]),
        named(
            &[
                ("pluck nylon", PluckVoice::Nylon),
                ("pluck steel", PluckVoice::Steel),
                ("pluck muted", PluckVoice::Muted),
                ("pluck harp", PluckVoice::Harp),
            ],
            Algorithm::Pluck,
        ),
    );
    b.family(
        G,
        "additive",
        gen_schema(freq(), &[ParamSpec::linear("brightness", 0.0, 1.0, 1.0)]),
        named(
            &[
                ("additive flute", Registration::Flute),
                ("additive principal", Registration::Principal),
                ("additive clarinet", Registration::Clarinet),
                ("additive bell", Registration::Bell),
            ],
            Algorithm::Additive,
        ),
    );
    b.family(
        G,
        "supersaw",
        gen_schema(freq(), &[ParamSpec::linear("detune", 0.0, 1.0, 0.3)]),
        named(&[("supersaw 3", 3), ("supersaw 5", 5), ("supersaw 7", 7)], Algorithm::Supersaw),
    );

    b.next_id = FIRST_PROCESSOR_ID;
    b.family(
        UnitKind::Processor,
        "bypass",
        vec![ParamSpec::linear("unused", 0.0, 1.0, 0.0)],
        vec![("bypass".into(), Algorithm::Bypass)],
    );
    b.processor_family(
        "filter",
        vec![
            ParamSpec::frequency("cutoff", 20.0, 20000.0, 0.6),
            ParamSpec::linear("resonance", 0.0, 1.0, 0.1),
        ],
        named(
            &[
                ("lowpass 12", (FilterMode::Lowpass, 1)),
                ("lowpass 24", (FilterMode::Lowpass, 2)),
                ("highpass 12", (FilterMode::Highpass, 1)),
                ("highpass 24", (FilterMode::Highpass, 2)),
                ("bandpass 12", (FilterMode::Bandpass, 1)),
                ("bandpass 24", (FilterMode::Bandpass, 2)),
                ("notch", (FilterMode::Notch, 1)),
                ("peak", (FilterMode::Peak, 1)),
                ("allpass", (FilterMode::Allpass, 1)),
            ],
            |(m, s)| Algorithm::Filter(m, s),
        ),
    );
    b.processor_family(
        "resonator",
        vec![
            ParamSpec::frequency("freq", 20.0, 8000.0, 0.5),
            ParamSpec::exponential("decay", 0.05, 5.0, 0.5),
            ParamSpec::linear("damping", 0.0, 1.0, 0.2),
            ParamSpec::linear("mix", 0.0, 1.0, 0.5),
        ],
        named(
            &[
                ("comb", ResonatorShape::Comb),
                ("comb inverted", ResonatorShape::Inverted),
                ("chord fifth", ResonatorShape::Chord(CHORD_FIFTH)),
                ("chord octave", ResonatorShape::Chord(CHORD_OCTAVE)),
                ("chord major", ResonatorShape::Chord(CHORD_MAJOR)),
                ("chord minor", ResonatorShape::Chord(CHORD_MINOR)),
                ("chord sus4", ResonatorShape::Chord(CHORD_SUS4)),
                ("chord seventh", ResonatorShape::Chord(CHORD_SEVENTH)),
            ],
            Algorithm::Resonator,
        ),
    );
    b.processor_family(
        "delay",
        vec![
            ParamSpec::exponential("time", 0.01, 1.5, 0.6),
            ParamSpec::linear("feedback", 0.0, 0.9, 0.4),
            ParamSpec::linear("mix", 0.0, 1.0, 0.35),
        ],
        named(
            &[
                ("delay single", SINGLE),
                ("delay pingpong", PING_PONG),
                ("delay triplet", TRIPLET),
                ("delay four tap", FOUR_TAP),
                ("delay dotted", DOTTED),
                ("delay golden", GOLDEN),
                ("delay cascade", CASCADE),
                ("delay cluster", CLUSTER),
            ],
            Algorithm::Delay,
        ),
    );
    let room = |comb_scale, allpass_scale| RoomSize {
        comb_scale,
        allpass_scale,
    };
    b.processor_family(
        "reverb",
        vec![
            ParamSpec::linear("decay", 0.0, 1.0, 0.5),
            ParamSpec::linear("damping", 0.0, 1.0, 0.5),
            ParamSpec::linear("mix", 0.0, 1.0, 0.3),
        ],
        named(
            &[
                ("reverb small", room(0.5, 0.5)),
                ("reverb room", room(0.75, 0.75)),
                ("reverb chamber", room(1.0, 1.0)),
                ("reverb hall", room(1.3, 1.0)),
                ("reverb large hall", room(1.6, 1.2)),
                ("reverb cathedral", room(2.0, 1.5)),
                ("reverb plate", room(0.6, 0.3)),
            ],
            Algorithm::Reverb,
        ),
    );
    b.processor_family(
        "ring",
        vec![
            ParamSpec::frequency("freq", 20.0, 8000.0, 0.3),
            ParamSpec::linear("mix", 0.0, 1.0, 1.0),
        ],
        named(
            &[
                ("ring sine", CarrierShape::Sine),
                ("ring square", CarrierShape::Square),
                ("ring triangle", CarrierShape::Triangle),
                ("ring saw", CarrierShape::Saw),
                ("ring am", CarrierShape::Am),
            ],
            Algorithm::Ring,
        ),
    );
    b.processor_family(
        "shaper",
        vec![
            ParamSpec::exponential("drive", 1.0, 40.0, 0.3),
            ParamSpec::linear("mix", 0.0, 1.0, 1.0),
        ],
        named(
            &[
                ("shaper tanh", ShaperCurve::Tanh),
                ("shaper hard clip", ShaperCurve::HardClip),
                ("shaper foldback", ShaperCurve::Foldback),
                ("shaper bitcrush", ShaperCurve::Bitcrush),
                ("shaper cubic", ShaperCurve::Cubic),
                ("shaper full rectify", ShaperCurve::FullRectify),
                ("shaper half rectify", ShaperCurve::HalfRectify),
                ("shaper asymmetric", ShaperCurve::Asymmetric),
                ("shaper sine fold", ShaperCurve::SineFold),
            ],
            Algorithm::Shaper,
        ),
    );
    b.processor_family(
        "formant",
        vec![
            ParamSpec::exponential("shift", 0.5, 2.0, 0.5),
            ParamSpec::linear("resonance", 0.0, 1.0, 0.3),
            ParamSpec::linear("mix", 0.0, 1.0, 1.0),
        ],
        named(
            &[
                ("formant a", Vowel::A),
                ("formant e", Vowel::E),
                ("formant i", Vowel::I),
                ("formant o", Vowel::O),
                ("formant u", Vowel::U),
            ],
            Algorithm::Formant,
        ),
    );
    Catalog { units: b.units }
}
