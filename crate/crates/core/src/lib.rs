pub mod buffer;
pub mod catalog;
pub mod engine;
pub mod error;
pub mod gesture;
pub mod lfo;
pub mod param;
pub mod patch;
pub mod score;
pub mod scope;
pub mod units;

pub use buffer::StereoBuffer;
pub use catalog::{catalog, catalog_list, instantiate, Catalog, UnitDescriptor, UnitKind, UnitState};
pub use engine::{make_engine, Engine, EngineOptions};
pub use error::{Error, Result};
pub use gesture::{
    arpeggio_events, loop_events, loop_record, snapshot_restore, snapshot_take, ArpeggioConfig, GestureLoop, LoopMode,
    Snapshot,
};
pub use lfo::{lfo_value, modulated_param};
pub use param::{Curve, ParamRamp, ParamSpec};
pub use patch::{
    AddressItem, ControlEvent, EventKind, LfoConfig, LfoField, LfoShape, ParamAddress, Patch, Slot, TrackConfig,
    UnitConfig,
};
pub use score::{parse, render_score, schedule, serialize, ParseError, ScoreLoop, Scorefile};
pub use scope::{scope_decimate, ScopeFrame, SCOPE_POINTS};
