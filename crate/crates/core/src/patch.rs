//! Instrument configuration: six tracks, each a generator feeding three
//! serial processors, every unit carrying four LFOs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::catalog::{Catalog, UnitKind, BYPASS_ID, SINE_ID};
use crate::error::{Error, Result};

pub const TRACKS: usize = 6;
pub const PROCESSORS: usize = 3;
pub const SLOTS: usize = 1 + PROCESSORS;
pub const LFOS: usize = 4;
/// Upper bound of the LFO rate range.
pub const MAX_LFO_HZ: f32 = 20.0;
pub const SAMPLE_RATES: [u32; 3] = [22050, 44100, 48000];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Slot {
    #[serde(rename = "g")]
    Gen,
    #[serde(rename = "p0")]
    P0,
    #[serde(rename = "p1")]
    P1,
    #[serde(rename = "p2")]
    P2,
}

impl Slot {
    pub const ALL: [Slot; SLOTS] = [Slot::Gen, Slot::P0, Slot::P1, Slot::P2];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Slot> {
        Self::ALL.get(i).copied()
    }

    pub fn processor(i: usize) -> Option<Slot> {
        Self::ALL.get(i + 1).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Slot::Gen => "g",
            Slot::P0 => "p0",
            Slot::P1 => "p1",
            Slot::P2 => "p2",
        }
    }

    pub fn kind(self) -> UnitKind {
        match self {
            Slot::Gen => UnitKind::Generator,
            _ => UnitKind::Processor,
        }
    }
}

impl FromStr for Slot {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|slot| slot.as_str() == s)
            .ok_or_else(|| Error::Address(format!("unknown slot `{s}`")))
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LfoShape {
    Sine,
    Square,
    Triangle,
    Saw,
    Random,
}

impl LfoShape {
    pub const ALL: [LfoShape; 5] = [
        LfoShape::Sine,
        LfoShape::Square,
        LfoShape::Triangle,
        LfoShape::Saw,
        LfoShape::Random,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LfoShape::Sine => "sine",
            LfoShape::Square => "square",
            LfoShape::Triangle => "triangle",
            LfoShape::Saw => "saw",
            LfoShape::Random => "random",
        }
    }

    /// Shapes are spaced evenly over `[0, 1]`: sine 0, square 0.25, ... random 1.
    pub fn to_normalized(self) -> f32 {
        self as usize as f32 / 4.0
    }

    pub fn from_normalized(v: f32) -> LfoShape {
        Self::ALL[((v.clamp(0.0, 1.0) * 4.0).round() as usize).min(4)]
    }
}

impl FromStr for LfoShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|shape| shape.as_str() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown LFO shape `{s}`")))
    }
}

impl fmt::Display for LfoShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LfoConfig {
    /// Rate as a fraction of [`MAX_LFO_HZ`].
    pub rate: f32,
    pub depth: f32,
    pub shape: LfoShape,
    /// Parameter index of the owning unit, or `None` when off.
    pub target: Option<usize>,
}

impl Default for LfoConfig {
    fn default() -> Self {
        Self {
            rate: 0.0,
            depth: 0.0,
            shape: LfoShape::Sine,
            target: None,
        }
    }
}

impl LfoConfig {
    pub fn rate_hz(&self) -> f32 {
        self.rate * MAX_LFO_HZ
    }

    pub fn is_default(&self) -> bool {
        *self == Self::default()
    }

    /// Normalized encoding of a target for an `arity`-parameter unit:
    /// off is 0, parameter `k` is `(k + 1) / arity`.
    pub fn target_to_normalized(target: Option<usize>, arity: usize) -> f32 {
        match target {
            None => 0.0,
            Some(k) => (k + 1) as f32 / arity as f32,
        }
    }

    pub fn target_from_normalized(v: f32, arity: usize) -> Option<usize> {
        let r = (v.clamp(0.0, 1.0) * arity as f32).round() as usize;
        (r > 0).then(|| (r - 1).min(arity - 1))
    }

    pub fn field_normalized(&self, field: LfoField, arity: usize) -> f32 {
        match field {
            LfoField::Rate => self.rate,
            LfoField::Depth => self.depth,
            LfoField::Shape => self.shape.to_normalized(),
            LfoField::Target => Self::target_to_normalized(self.target, arity),
        }
    }

    pub fn set_field(&mut self, field: LfoField, v: f32, arity: usize) {
        match field {
            LfoField::Rate => self.rate = v,
            LfoField::Depth => self.depth = v,
            LfoField::Shape => self.shape = LfoShape::from_normalized(v),
            LfoField::Target => self.target = Self::target_from_normalized(v, arity),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitConfig {
    pub unit_id: u32,
    /// Normalized base values, one per schema entry.
    pub params: Vec<f32>,
    pub lfos: [LfoConfig; LFOS],
}

impl UnitConfig {
    /// A unit with its catalog defaults and all LFOs off.
    pub fn new(catalog: &Catalog, unit_id: u32) -> Result<Self> {
        let desc = catalog.get(unit_id)?;
        Ok(Self {
            unit_id,
            params: desc.default_params(),
            lfos: [LfoConfig::default(); LFOS],
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackConfig {
    pub generator: UnitConfig,
    pub processors: [UnitConfig; PROCESSORS],
    pub gain: f32,
}

pub const DEFAULT_TRACK_GAIN: f32 = 0.5;

impl TrackConfig {
    /// Generator `unit_id` followed by three bypass processors.
    pub fn with_generator(catalog: &Catalog, unit_id: u32) -> Result<Self> {
        let bypass = UnitConfig::new(catalog, BYPASS_ID)?;
        Ok(Self {
            generator: UnitConfig::new(catalog, unit_id)?,
            processors: [bypass.clone(), bypass.clone(), bypass],
            gain: DEFAULT_TRACK_GAIN,
        })
    }

    pub fn unit(&self, slot: Slot) -> &UnitConfig {
        match slot {
            Slot::Gen => &self.generator,
            Slot::P0 => &self.processors[0],
            Slot::P1 => &self.processors[1],
            Slot::P2 => &self.processors[2],
        }
    }

    pub fn unit_mut(&mut self, slot: Slot) -> &mut UnitConfig {
        match slot {
            Slot::Gen => &mut self.generator,
            Slot::P0 => &mut self.processors[0],
            Slot::P1 => &mut self.processors[1],
            Slot::P2 => &mut self.processors[2],
        }
    }
}

/// Six-track instrument configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Patch {
    tracks: Vec<TrackConfig>,
    pub sample_rate_hint: u32,
}

impl Patch {
    pub fn new(tracks: Vec<TrackConfig>, sample_rate_hint: u32) -> Result<Self> {
        if tracks.len() != TRACKS {
            return Err(Error::TrackCount(tracks.len()));
        }
        if sample_rate_hint == 0 {
            return Err(Error::SampleRate(0));
        }
        Ok(Self {
            tracks,
            sample_rate_hint,
        })
    }

    /// Sine generators through bypass processors on every track.
    pub fn default_patch(catalog: &Catalog) -> Self {
        let track = TrackConfig::with_generator(catalog, SINE_ID).expect("catalog has sine and bypass");
        Self {
            tracks: vec![track; TRACKS],
            sample_rate_hint: 44100,
        }
    }

    pub fn tracks(&self) -> &[TrackConfig] {
        &self.tracks
    }

    pub fn track(&self, i: usize) -> &TrackConfig {
        &self.tracks[i]
    }

    pub fn track_mut(&mut self, i: usize) -> &mut TrackConfig {
        &mut self.tracks[i]
    }

    pub fn unit(&self, track: usize, slot: Slot) -> &UnitConfig {
        self.tracks[track].unit(slot)
    }

    pub fn unit_mut(&mut self, track: usize, slot: Slot) -> &mut UnitConfig {
        self.tracks[track].unit_mut(slot)
    }

    /// Checks every structural and catalog invariant.
    pub fn validate(&self, catalog: &Catalog) -> Result<()> {
        if self.tracks.len() != TRACKS {
            return Err(Error::TrackCount(self.tracks.len()));
        }
        for (t, track) in self.tracks.iter().enumerate() {
            check_unit_range(&format!("t{t}.gain"), track.gain)?;
            for slot in Slot::ALL {
                let unit = track.unit(slot);
                let location = format!("t{t}.{slot}");
                let desc = catalog.get(unit.unit_id)?;
                if desc.kind != slot.kind() {
                    return Err(Error::UnitKind {
                        location,
                        unit_id: unit.unit_id,
                        expected: slot.kind().as_str(),
                        found: desc.kind.as_str(),
                    });
                }
                if unit.params.len() != desc.arity() {
                    return Err(Error::Schema {
                        location,
                        unit_id: unit.unit_id,
                        name: desc.name.clone(),
                        expected: desc.arity(),
                        found: unit.params.len(),
                    });
                }
                for (k, &p) in unit.params.iter().enumerate() {
                    check_unit_range(&format!("{location}.param{k}"), p)?;
                }
                for (j, lfo) in unit.lfos.iter().enumerate() {
                    check_unit_range(&format!("{location}.lfo{j}.rate"), lfo.rate)?;
                    check_unit_range(&format!("{location}.lfo{j}.depth"), lfo.depth)?;
                    if let Some(k) = lfo.target {
                        if k >= desc.arity() {
                            return Err(Error::Address(format!(
                                "{location}.lfo{j}.target: parameter {k} out of range for {} ({} params)",
                                desc.name,
                                desc.arity()
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks that `address` names something in this patch.
    pub fn resolve(&self, address: &ParamAddress, catalog: &Catalog) -> Result<()> {
        if address.track >= TRACKS {
            return Err(Error::Address(format!("{address}: track out of range")));
        }
        let unit = self.unit(address.track, address.slot);
        let arity = catalog.get(unit.unit_id)?.arity();
        match address.item {
            AddressItem::Param(k) if k >= arity => Err(Error::Address(format!(
                "{address}: unit {} has {arity} params",
                unit.unit_id
            ))),
            AddressItem::Lfo(j, _) if j >= LFOS => Err(Error::Address(format!("{address}: LFO index out of range"))),
            _ => Ok(()),
        }
    }

    /// Checks that `event` could be applied: its address resolves, its kind
    /// matches the addressed item and its value is in range.
    pub fn check_event(&self, event: &ControlEvent, catalog: &Catalog) -> Result<()> {
        self.resolve(&event.address, catalog)?;
        let address = &event.address;
        match (event.kind, address.item) {
            (EventKind::Trigger, _) if address.slot != Slot::Gen => {
                Err(Error::Address(format!("{address}: triggers address a generator")))
            }
            (EventKind::Trigger, _) => Ok(()),
            (EventKind::Set, AddressItem::Param(_)) | (EventKind::LfoSet, AddressItem::Lfo(..)) => {
                check_unit_range(&address.to_string(), event.value)
            }
            (EventKind::Set, _) => Err(Error::Address(format!("{address}: set needs a param address"))),
            (EventKind::LfoSet, _) => Err(Error::Address(format!("{address}: lfo_set needs an LFO address"))),
        }
    }

    /// Validates `event` and, for `set`/`lfo_set`, writes its value as the new base.
    pub fn apply_event(&mut self, event: &ControlEvent, catalog: &Catalog) -> Result<()> {
        self.check_event(event, catalog)?;
        let address = &event.address;
        match (event.kind, address.item) {
            (EventKind::Set, AddressItem::Param(k)) => {
                self.unit_mut(address.track, address.slot).params[k] = event.value;
            }
            (EventKind::LfoSet, AddressItem::Lfo(j, field)) => {
                let unit = self.unit_mut(address.track, address.slot);
                let arity = unit.params.len();
                unit.lfos[j].set_field(field, event.value, arity);
            }
            _ => {}
        }
        Ok(())
    }
}

pub(crate) fn check_unit_range(what: &str, value: f32) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Range {
            what: what.to_string(),
            value,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LfoField {
    Rate,
    Depth,
    Shape,
    Target,
}

impl LfoField {
    pub const ALL: [LfoField; 4] = [LfoField::Rate, LfoField::Depth, LfoField::Shape, LfoField::Target];

    pub fn as_str(self) -> &'static str {
        match self {
            LfoField::Rate => "rate",
            LfoField::Depth => "depth",
            LfoField::Shape => "shape",
            LfoField::Target => "target",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AddressItem {
    Param(usize),
    Lfo(usize, LfoField),
}

/// Textual form: `t{track}.{g|p0|p1|p2}.param{k}` or
/// `t{track}.{g|p0|p1|p2}.lfo{j}.{rate|depth|shape|target}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ParamAddress {
    pub track: usize,
    pub slot: Slot,
    pub item: AddressItem,
}

impl ParamAddress {
    pub fn param(track: usize, slot: Slot, k: usize) -> Self {
        Self {
            track,
            slot,
            item: AddressItem::Param(k),
        }
    }

    pub fn lfo(track: usize, slot: Slot, j: usize, field: LfoField) -> Self {
        Self {
            track,
            slot,
            item: AddressItem::Lfo(j, field),
        }
    }
}

impl fmt::Display for ParamAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}.{}.", self.track, self.slot)?;
        match self.item {
            AddressItem::Param(k) => write!(f, "param{k}"),
            AddressItem::Lfo(j, field) => write!(f, "lfo{j}.{}", field.as_str()),
        }
    }
}

/// Decimal without sign or redundant leading zeros.
fn canonical_index(s: &str) -> Option<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) || (s.len() > 1 && s.starts_with('0')) || s.len() > 9 {
        return None;
    }
    s.parse().ok()
}

impl FromStr for ParamAddress {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Address(format!("`{s}` is not an address"));
        let mut parts = s.split('.');
        let track = parts
            .next()
            .and_then(|p| p.strip_prefix('t'))
            .and_then(canonical_index)
            .ok_or_else(bad)?;
        if track >= TRACKS {
            return Err(Error::Address(format!("`{s}`: track {track} out of range 0..{}", TRACKS - 1)));
        }
        let slot: Slot = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let item_text = parts.next().ok_or_else(bad)?;
        let item = if let Some(k) = item_text.strip_prefix("param") {
            AddressItem::Param(canonical_index(k).ok_or_else(bad)?)
        } else if let Some(j) = item_text.strip_prefix("lfo") {
            let j = canonical_index(j).ok_or_else(bad)?;
            if j >= LFOS {
                return Err(Error::Address(format!("`{s}`: LFO {j} out of range 0..{}", LFOS - 1)));
            }
            let field = parts.next().ok_or_else(bad)?;
            let field = LfoField::ALL
                .into_iter()
                .find(|f| f.as_str() == field)
                .ok_or_else(bad)?;
            AddressItem::Lfo(j, field)
        } else {
            return Err(bad());
        };
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(ParamAddress { track, slot, item })
    }
}

impl Serialize for ParamAddress {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ParamAddress {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Set,
    Trigger,
    LfoSet,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::Set => "set",
            EventKind::Trigger => "trigger",
            EventKind::LfoSet => "lfo_set",
        }
    }
}

impl FromStr for EventKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "set" => Ok(EventKind::Set),
            "trigger" => Ok(EventKind::Trigger),
            "lfo_set" => Ok(EventKind::LfoSet),
            _ => Err(Error::Invalid(format!("unknown event kind `{s}`"))),
        }
    }
}

/// Timestamped, addressed change. `value` is unused (zero) for triggers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlEvent {
    pub time_ms: u64,
    pub address: ParamAddress,
    pub kind: EventKind,
    #[serde(default)]
    pub value: f32,
}

impl ControlEvent {
    pub fn set(time_ms: u64, address: ParamAddress, value: f32) -> Self {
        Self {
            time_ms,
            address,
            kind: EventKind::Set,
            value,
        }
    }

    pub fn trigger(time_ms: u64, address: ParamAddress) -> Self {
        Self {
            time_ms,
            address,
            kind: EventKind::Trigger,
            value: 0.0,
        }
    }

    pub fn lfo_set(time_ms: u64, address: ParamAddress, value: f32) -> Self {
        Self {
            time_ms,
            address,
            kind: EventKind::LfoSet,
            value,
        }
    }

    pub fn at(mut self, time_ms: u64) -> Self {
        self.time_ms = time_ms;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;
    use proptest::prelude::*;

    #[test]
    fn five_or_seven_tracks_are_rejected() {
        let track = TrackConfig::with_generator(catalog(), SINE_ID).unwrap();
        assert_eq!(Patch::new(vec![track.clone(); 5], 44100), Err(Error::TrackCount(5)));
        assert_eq!(Patch::new(vec![track.clone(); 7], 44100), Err(Error::TrackCount(7)));
        assert!(Patch::new(vec![track; 6], 44100).is_ok());
    }

    #[test]
    fn address_examples() {
        let a: ParamAddress = "t2.p1.lfo3.depth".parse().unwrap();
        assert_eq!(a, ParamAddress::lfo(2, Slot::P1, 3, LfoField::Depth));
        assert!("t6.g.param0".parse::<ParamAddress>().is_err());
        assert!("t0.g.lfo4.rate".parse::<ParamAddress>().is_err());
        assert!("t01.g.param0".parse::<ParamAddress>().is_err());
        assert!("t0.x.param0".parse::<ParamAddress>().is_err());
        assert!("t0.g.param0.extra".parse::<ParamAddress>().is_err());
    }

    #[test]
    fn set_then_read_base() {
        let mut patch = Patch::default_patch(catalog());
        let ev = ControlEvent::set(0, "t0.g.param0".parse().unwrap(), 0.5);
        patch.apply_event(&ev, catalog()).unwrap();
        assert_eq!(patch.unit(0, Slot::Gen).params[0], 0.5);
    }

    #[test]
    fn out_of_range_values_and_params() {
        let mut patch = Patch::default_patch(catalog());
        let ev = ControlEvent::set(0, "t0.g.param0".parse().unwrap(), 1.5);
        assert!(matches!(patch.apply_event(&ev, catalog()), Err(Error::Range { .. })));
        let ev = ControlEvent::set(0, "t0.g.param0".parse().unwrap(), f32::NAN);
        assert!(matches!(patch.apply_event(&ev, catalog()), Err(Error::Range { .. })));
        let ev = ControlEvent::set(0, "t0.g.param9".parse().unwrap(), 0.5);
        assert!(matches!(patch.apply_event(&ev, catalog()), Err(Error::Address(_))));
        let ev = ControlEvent::trigger(0, "t0.p0.param0".parse().unwrap());
        assert!(matches!(patch.apply_event(&ev, catalog()), Err(Error::Address(_))));
    }

    #[test]
    fn lfo_field_encodings_are_stable() {
        for shape in LfoShape::ALL {
            assert_eq!(LfoShape::from_normalized(shape.to_normalized()), shape);
        }
        for arity in 1..=6 {
            for target in std::iter::once(None).chain((0..arity).map(Some)) {
                let v = LfoConfig::target_to_normalized(target, arity);
                assert_eq!(LfoConfig::target_from_normalized(v, arity), target);
            }
        }
    }

    fn address_strategy() -> impl Strategy<Value = ParamAddress> {
        let item = prop_oneof![
            (0usize..1000).prop_map(AddressItem::Param),
            (0usize..LFOS, 0usize..4).prop_map(|(j, f)| AddressItem::Lfo(j, LfoField::ALL[f])),
        ];
        (0usize..TRACKS, 0usize..SLOTS, item).prop_map(|(track, s, item)| ParamAddress {
            track,
            slot: Slot::ALL[s],
            item,
        })
    }

    proptest! {
        #[test]
        fn address_text_round_trips(addr in address_strategy()) {
            let text = addr.to_string();
            prop_assert_eq!(text.parse::<ParamAddress>().unwrap(), addr);
        }

        #[test]
        fn address_parse_never_panics(s in "\\PC{0,24}") {
            let _ = s.parse::<ParamAddress>();
        }
    }
}
