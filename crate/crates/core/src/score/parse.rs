//! Two passes: lines become statements (syntax), statements become a
//! validated [`Scorefile`] (semantics). Both report the offending line.

use std::fmt;

use thiserror::Error;

use super::{Meta, ScoreLoop, Scorefile, FORMAT_VERSION, MAGIC, MAX_DURATION_MS};
use crate::catalog::Catalog;
use crate::error::Error;
use crate::gesture::{GestureLoop, LoopMode};
use crate::patch::{
    check_unit_range, ControlEvent, EventKind, LfoConfig, LfoShape, ParamAddress, Patch, Slot, TrackConfig,
    UnitConfig, LFOS, MAX_LFO_HZ, PROCESSORS, SAMPLE_RATES, TRACKS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    Semantic,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParseErrorKind::Syntax => "syntax",
            ParseErrorKind::Semantic => "semantic",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind} error: {message}")]
pub struct ParseError {
    /// 1-based.
    pub line: usize,
    pub kind: ParseErrorKind,
    pub message: String,
}

impl ParseError {
    fn syntax(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            kind: ParseErrorKind::Syntax,
            message: message.into(),
        }
    }

    fn semantic(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            kind: ParseErrorKind::Semantic,
            message: message.into(),
        }
    }
}

type PResult<T> = Result<T, ParseError>;

struct UnitText {
    unit_id: u32,
    params: Vec<f32>,
}

enum Stmt {
    Sr(u32),
    Seed(u64),
    Dur(u64),
    Meta(String, String),
    Track {
        index: usize,
        gain: Option<f32>,
        generator: UnitText,
        processors: Vec<UnitText>,
    },
    Lfo {
        track: usize,
        slot: Slot,
        j: usize,
        rate: f32,
        depth: f32,
        shape: LfoShape,
        target: Option<usize>,
    },
    Event(ControlEvent),
    Loop {
        mode: LoopMode,
        length_ms: u64,
        from_ms: u64,
        to_ms: u64,
        scope: Option<ParamAddress>,
        body: Vec<(usize, ControlEvent)>,
    },
}

/// `hz / 20` rounded to f32; `None` outside `[0, 20]`.
pub(super) fn rate_from_hz(text: &str) -> Option<f32> {
    let hz: f64 = text.parse().ok()?;
    (0.0..=MAX_LFO_HZ as f64).contains(&hz).then(|| (hz / MAX_LFO_HZ as f64) as f32 + 0.0)
}

struct Cursor<'a> {
    line: usize,
    tokens: std::iter::Peekable<std::str::SplitAsciiWhitespace<'a>>,
}

impl<'a> Cursor<'a> {
    fn new(line: usize, text: &'a str) -> Self {
        Self {
            line,
            tokens: text.split_ascii_whitespace().peekable(),
        }
    }

    fn next(&mut self, what: &str) -> PResult<&'a str> {
        self.tokens
            .next()
            .ok_or_else(|| ParseError::syntax(self.line, format!("missing {what}")))
    }

    fn keyword(&mut self, word: &str) -> PResult<()> {
        let tok = self.next(word)?;
        if tok == word {
            Ok(())
        } else {
            Err(ParseError::syntax(self.line, format!("expected `{word}`, found `{tok}`")))
        }
    }

    fn number<T: std::str::FromStr>(&mut self, what: &str) -> PResult<T> {
        let tok = self.next(what)?;
        tok.parse()
            .map_err(|_| ParseError::syntax(self.line, format!("{what}: `{tok}` is not a valid number")))
    }

    /// Normalized float; `-0` becomes `0` so equal values print alike.
    fn value(&mut self, what: &str) -> PResult<f32> {
        Ok(self.number::<f32>(what)? + 0.0)
    }

    fn peek_is_value(&mut self) -> bool {
        self.tokens
            .peek()
            .is_some_and(|t| t.bytes().next().is_some_and(|b| !b.is_ascii_uppercase()))
    }

    fn end(&mut self) -> PResult<()> {
        match self.tokens.next() {
            None => Ok(()),
            Some(tok) => Err(ParseError::syntax(self.line, format!("unexpected `{tok}`"))),
        }
    }

    fn address(&mut self) -> PResult<ParamAddress> {
        let tok = self.next("address")?;
        tok.parse().map_err(|e: Error| ParseError::syntax(self.line, e.to_string()))
    }
}

fn unit_text(cur: &mut Cursor) -> PResult<UnitText> {
    let unit_id = cur.number("unit id")?;
    let mut params = Vec::new();
    while cur.peek_is_value() {
        params.push(cur.value("parameter")?);
    }
    Ok(UnitText { unit_id, params })
}

fn event_stmt(cur: &mut Cursor) -> PResult<ControlEvent> {
    cur.keyword("EV")?;
    let time_ms = cur.number("event time")?;
    let address = cur.address()?;
    let kind_text = cur.next("event kind")?;
    let kind: EventKind = kind_text
        .parse()
        .map_err(|_| ParseError::syntax(cur.line, format!("unknown event kind `{kind_text}`")))?;
    let value = match kind {
        EventKind::Trigger => 0.0,
        _ => cur.value("event value")?,
    };
    cur.end()?;
    Ok(ControlEvent {
        time_ms,
        address,
        kind,
        value,
    })
}

fn header(line: usize, text: &str) -> PResult<()> {
    let mut cur = Cursor::new(line, text);
    let magic = cur.next("header")?;
    if magic != MAGIC {
        return Err(ParseError::syntax(line, format!("expected `{MAGIC} <version>` header")));
    }
    let version = cur.next("version")?;
    let major = version.split_once('.').map_or(version, |(m, _)| m);
    let major: u32 = major
        .parse()
        .map_err(|_| ParseError::syntax(line, format!("version `{version}` is not a number")))?;
    cur.end()?;
    if major != FORMAT_VERSION {
        return Err(ParseError::semantic(
            line,
            format!("unsupported format version {major} (this reader handles {FORMAT_VERSION})"),
        ));
    }
    Ok(())
}

fn statement(line: usize, text: &str) -> PResult<Stmt> {
    let mut cur = Cursor::new(line, text);
    let word = cur.next("statement")?;
    let stmt = match word {
        "SR" => Stmt::Sr(cur.number("sample rate")?),
        "SEED" => Stmt::Seed(cur.number("seed")?),
        "DUR" => Stmt::Dur(cur.number("duration")?),
        "META" => {
            let rest = text.trim_start().strip_prefix("META").unwrap_or_default().trim_start();
            let (key, value) = rest
                .split_once(|c: char| c.is_ascii_whitespace())
                .ok_or_else(|| ParseError::syntax(line, "META needs a key and a quoted value"))?;
            let value: String = serde_json::from_str(value.trim())
                .map_err(|e| ParseError::syntax(line, format!("META value must be a quoted string: {e}")))?;
            return Ok(Stmt::Meta(key.to_string(), value));
        }
        "TRACK" => {
            let index = cur.number("track index")?;
            let mut gain = None;
            if cur.tokens.peek() == Some(&"GAIN") {
                cur.keyword("GAIN")?;
                gain = Some(cur.value("gain")?);
            }
            cur.keyword("GEN")?;
            let generator = unit_text(&mut cur)?;
            let mut processors = Vec::new();
            while cur.tokens.peek().is_some() {
                cur.keyword("PROC")?;
                processors.push(unit_text(&mut cur)?);
            }
            Stmt::Track {
                index,
                gain,
                generator,
                processors,
            }
        }
        "LFO" => {
            let track = cur.number("track index")?;
            let slot_text = cur.next("slot")?;
            let slot: Slot = slot_text
                .parse()
                .map_err(|_| ParseError::syntax(line, format!("unknown slot `{slot_text}`")))?;
            let j = cur.number("LFO index")?;
            let rate_text = cur.next("rate")?;
            let rate = rate_from_hz(rate_text).ok_or_else(|| {
                ParseError::syntax(line, format!("LFO rate `{rate_text}` must be a number of Hz in [0, {MAX_LFO_HZ}]"))
            })?;
            let depth = cur.value("depth")?;
            let shape_text = cur.next("shape")?;
            let shape: LfoShape = shape_text.parse().map_err(|e: Error| ParseError::syntax(line, e.to_string()))?;
            let target = match cur.next("target")? {
                "off" => None,
                tok => Some(tok.parse().map_err(|_| {
                    ParseError::syntax(line, format!("LFO target `{tok}` must be `off` or a parameter index"))
                })?),
            };
            Stmt::Lfo {
                track,
                slot,
                j,
                rate,
                depth,
                shape,
                target,
            }
        }
        "EV" => {
            let mut cur = Cursor::new(line, text);
            return event_stmt(&mut cur).map(Stmt::Event);
        }
        "LOOP" | "SEQ" => {
            let mode = if word == "LOOP" { LoopMode::Cycle } else { LoopMode::Once };
            let length_ms = cur.number("loop length")?;
            let from_ms = cur.number("loop start")?;
            let to_ms = cur.number("loop end")?;
            let scope = if cur.tokens.peek().is_some() {
                Some(cur.address()?)
            } else {
                None
            };
            Stmt::Loop {
                mode,
                length_ms,
                from_ms,
                to_ms,
                scope,
                body: Vec::new(),
            }
        }
        other => return Err(ParseError::syntax(line, format!("unknown statement `{other}`"))),
    };
    cur.end()?;
    Ok(stmt)
}

/// Syntax pass. The header has already been checked.
fn statements(lines: &[(usize, &str)]) -> PResult<Vec<(usize, Stmt)>> {
    let mut out: Vec<(usize, Stmt)> = Vec::new();
    for &(line, text) in lines {
        let indented = text.starts_with([' ', '\t']);
        if indented {
            let event = event_stmt(&mut Cursor::new(line, text))?;
            match out.last_mut() {
                Some((_, Stmt::Loop { body, .. })) => body.push((line, event)),
                _ => return Err(ParseError::syntax(line, "indented EV outside a LOOP or SEQ block")),
            }
        } else {
            out.push((line, statement(line, text)?));
        }
    }
    Ok(out)
}

fn unit_config(line: usize, t: usize, slot: Slot, text: &UnitText, catalog: &Catalog) -> PResult<UnitConfig> {
    let semantic = |e: Error| ParseError::semantic(line, e.to_string());
    let desc = catalog.get(text.unit_id).map_err(semantic)?;
    let location = format!("t{t}.{slot}");
    if desc.kind != slot.kind() {
        return Err(semantic(Error::UnitKind {
            location,
            unit_id: text.unit_id,
            expected: slot.kind().as_str(),
            found: desc.kind.as_str(),
        }));
    }
    if text.params.len() != desc.arity() {
        return Err(semantic(Error::Schema {
            location,
            unit_id: text.unit_id,
            name: desc.name.clone(),
            expected: desc.arity(),
            found: text.params.len(),
        }));
    }
    for (k, &p) in text.params.iter().enumerate() {
        check_unit_range(&format!("{location}.param{k}"), p).map_err(semantic)?;
    }
    Ok(UnitConfig {
        unit_id: text.unit_id,
        params: text.params.clone(),
        lfos: [LfoConfig::default(); LFOS],
    })
}

fn set_once<T>(slot: &mut Option<(usize, T)>, line: usize, value: T, name: &str) -> PResult<()> {
    if let Some((first, _)) = slot {
        return Err(ParseError::semantic(line, format!("duplicate {name} (first given on line {first})")));
    }
    *slot = Some((line, value));
    Ok(())
}

/// Parses and fully validates a scorefile against `catalog`.
pub fn parse(text: &str, catalog: &Catalog) -> PResult<Scorefile> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end()))
        .filter(|(_, l)| !l.trim_start().is_empty() && !l.trim_start().starts_with('#'));
    let (header_line, header_text) = lines
        .next()
        .ok_or_else(|| ParseError::syntax(1, format!("empty file, expected `{MAGIC} <version>` header")))?;
    if header_text.starts_with([' ', '\t']) {
        return Err(ParseError::syntax(header_line, format!("expected `{MAGIC} <version>` header")));
    }
    header(header_line, header_text)?;
    let rest: Vec<(usize, &str)> = lines.collect();
    let last_line = rest.last().map_or(header_line, |(l, _)| *l);
    let stmts = statements(&rest)?;

    let mut sr = None;
    let mut seed = None;
    let mut dur = None;
    let mut meta = Meta::default();
    let mut meta_seen: Vec<(&str, usize)> = Vec::new();
    let mut tracks: Vec<Option<TrackConfig>> = vec![None; TRACKS];
    let mut track_count = 0usize;
    for (line, stmt) in &stmts {
        let line = *line;
        match stmt {
            Stmt::Sr(v) => set_once(&mut sr, line, *v, "SR")?,
            Stmt::Seed(v) => set_once(&mut seed, line, *v, "SEED")?,
            Stmt::Dur(v) => set_once(&mut dur, line, *v, "DUR")?,
            Stmt::Meta(key, value) => {
                let field = match key.as_str() {
                    "title" => &mut meta.title,
                    "author" => &mut meta.author,
                    _ => return Err(ParseError::semantic(line, format!("unknown META key `{key}`"))),
                };
                if let Some((_, first)) = meta_seen.iter().find(|(k, _)| k == key) {
                    return Err(ParseError::semantic(line, format!("duplicate META {key} (first given on line {first})")));
                }
                meta_seen.push((if key == "title" { "title" } else { "author" }, line));
                *field = value.clone();
            }
            Stmt::Track {
                index,
                gain,
                generator,
                processors,
            } => {
                track_count += 1;
                if track_count > TRACKS || *index >= TRACKS {
                    return Err(ParseError::semantic(
                        line,
                        format!("a score has exactly six tracks, numbered 0 to {}", TRACKS - 1),
                    ));
                }
                if tracks[*index].is_some() {
                    return Err(ParseError::semantic(line, format!("track {index} is defined twice")));
                }
                if processors.len() != PROCESSORS {
                    return Err(ParseError::semantic(line, Error::ProcessorCount(processors.len()).to_string()));
                }
                let gain = gain.unwrap_or(crate::patch::DEFAULT_TRACK_GAIN);
                check_unit_range(&format!("t{index}.gain"), gain)
                    .map_err(|e| ParseError::semantic(line, e.to_string()))?;
                let t = *index;
                let procs = [
                    unit_config(line, t, Slot::P0, &processors[0], catalog)?,
                    unit_config(line, t, Slot::P1, &processors[1], catalog)?,
                    unit_config(line, t, Slot::P2, &processors[2], catalog)?,
                ];
                tracks[t] = Some(TrackConfig {
                    generator: unit_config(line, t, Slot::Gen, generator, catalog)?,
                    processors: procs,
                    gain,
                });
            }
            _ => {}
        }
    }

    let (_, sample_rate) = sr.ok_or_else(|| ParseError::semantic(header_line, "missing SR line"))?;
    if let Some((line, v)) = sr {
        if !SAMPLE_RATES.contains(&v) {
            return Err(ParseError::semantic(line, Error::SampleRate(v).to_string()));
        }
    }
    let (_, seed) = seed.ok_or_else(|| ParseError::semantic(header_line, "missing SEED line"))?;
    let (dur_line, duration_ms) = dur.ok_or_else(|| ParseError::semantic(header_line, "missing DUR line"))?;
    if duration_ms == 0 || duration_ms > MAX_DURATION_MS {
        return Err(ParseError::semantic(
            dur_line,
            format!("duration must be between 1 and {MAX_DURATION_MS} ms"),
        ));
    }
    if track_count != TRACKS {
        return Err(ParseError::semantic(
            last_line,
            format!("a score has exactly six tracks, found {track_count} TRACK lines"),
        ));
    }
    let tracks: Vec<TrackConfig> = tracks.into_iter().flatten().collect();
    let mut patch = Patch::new(tracks, sample_rate).map_err(|e| ParseError::semantic(last_line, e.to_string()))?;

    let mut lfo_seen = std::collections::HashMap::new();
    let mut events = Vec::new();
    let mut loops = Vec::new();
    for (line, stmt) in &stmts {
        let line = *line;
        match stmt {
            Stmt::Lfo {
                track,
                slot,
                j,
                rate,
                depth,
                shape,
                target,
            } => {
                if *track >= TRACKS || *j >= LFOS {
                    return Err(ParseError::semantic(
                        line,
                        format!("LFO {track} {slot} {j}: tracks are 0..5 and LFOs 0..3"),
                    ));
                }
                if let Some(first) = lfo_seen.insert((*track, *slot, *j), line) {
                    return Err(ParseError::semantic(
                        line,
                        format!("LFO {track} {slot} {j} is configured twice (first on line {first})"),
                    ));
                }
                check_unit_range("LFO depth", *depth).map_err(|e| ParseError::semantic(line, e.to_string()))?;
                let unit = patch.unit_mut(*track, *slot);
                if let Some(k) = target {
                    if *k >= unit.params.len() {
                        return Err(ParseError::semantic(
                            line,
                            format!(
                                "LFO target {k} out of range: unit {} has {} params",
                                unit.unit_id,
                                unit.params.len()
                            ),
                        ));
                    }
                }
                unit.lfos[*j] = LfoConfig {
                    rate: *rate,
                    depth: *depth,
                    shape: *shape,
                    target: *target,
                };
            }
            Stmt::Event(ev) => {
                check_event(line, ev, &patch, catalog, duration_ms, "DUR")?;
                if events.last().is_some_and(|prev: &ControlEvent| prev.time_ms > ev.time_ms) {
                    return Err(ParseError::semantic(line, "events must be in time order"));
                }
                events.push(*ev);
            }
            _ => {}
        }
    }

    for (line, stmt) in &stmts {
        let line = *line;
        if let Stmt::Loop {
            mode,
            length_ms,
            from_ms,
            to_ms,
            scope,
            body,
        } = stmt
        {
            if *length_ms == 0 {
                return Err(ParseError::semantic(line, "loop length must be positive"));
            }
            if from_ms >= to_ms || *to_ms > duration_ms {
                return Err(ParseError::semantic(
                    line,
                    format!("loop window [{from_ms}, {to_ms}) must be non-empty and end by DUR {duration_ms}"),
                ));
            }
            if let Some(scope) = scope {
                patch
                    .resolve(scope, catalog)
                    .map_err(|e| ParseError::semantic(line, e.to_string()))?;
            }
            let mut evs: Vec<ControlEvent> = Vec::with_capacity(body.len());
            for (ev_line, ev) in body {
                check_event(*ev_line, ev, &patch, catalog, *length_ms, "the loop length")?;
                if scope.is_some_and(|s| s != ev.address) {
                    return Err(ParseError::semantic(*ev_line, format!("event outside loop scope {}", scope.unwrap())));
                }
                if evs.last().is_some_and(|prev| prev.time_ms > ev.time_ms) {
                    return Err(ParseError::semantic(*ev_line, "loop events must be in time order"));
                }
                evs.push(*ev);
            }
            loops.push(ScoreLoop {
                gesture: GestureLoop {
                    events: evs,
                    length_ms: *length_ms,
                    scope: *scope,
                    mode: *mode,
                },
                from_ms: *from_ms,
                to_ms: *to_ms,
            });
        }
    }

    Ok(Scorefile {
        version: FORMAT_VERSION,
        sample_rate,
        seed,
        duration_ms,
        patch,
        events,
        loops,
        meta,
    })
}

fn check_event(
    line: usize,
    ev: &ControlEvent,
    patch: &Patch,
    catalog: &Catalog,
    limit_ms: u64,
    limit_name: &str,
) -> PResult<()> {
    if ev.time_ms >= limit_ms {
        return Err(ParseError::semantic(
            line,
            format!("event at {} ms is not before {limit_name} ({limit_ms} ms)", ev.time_ms),
        ));
    }
    patch
        .check_event(ev, catalog)
        .map_err(|e| ParseError::semantic(line, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;
    use crate::score::serialize;
    use proptest::prelude::*;

    fn minimal() -> String {
        let mut s = String::from("FMOLSCORE 1\nSR 44100\nSEED 1\nDUR 1000\n");
        for t in 0..6 {
            s += &format!("TRACK {t} GEN 0 0.5 0.5 0.5 0.5 PROC 100 0.5 PROC 100 0.5 PROC 100 0.5\n");
        }
        s
    }

    fn err(text: &str) -> ParseError {
        parse(text, catalog()).unwrap_err()
    }

    #[test]
    fn minimal_file() {
        let score = parse(&minimal(), catalog()).unwrap();
        assert!(score.events.is_empty());
        assert!(score.loops.is_empty());
        assert_eq!(score.duration_ms, 1000);
        assert_eq!(score.patch.track(3).gain, 0.5);
    }

    #[test]
    fn seventh_track_cites_six_tracks() {
        let text = minimal() + "TRACK 5 GEN 0 0.5 0.5 0.5 0.5 PROC 100 0.5 PROC 100 0.5 PROC 100 0.5\n";
        let e = err(&text);
        assert_eq!(e.kind, ParseErrorKind::Semantic);
        assert_eq!(e.line, 11);
        assert!(e.message.contains("six tracks"), "{e}");
        let text = minimal().replace("TRACK 5", "TRACK 6");
        assert!(err(&text).message.contains("six tracks"));
    }

    #[test]
    fn missing_track_cites_six_tracks() {
        let text: String = minimal().lines().take(9).map(|l| format!("{l}\n")).collect();
        assert!(err(&text).message.contains("six tracks"));
    }

    #[test]
    fn errors_carry_lines_and_kinds() {
        let cases = [
            (minimal() + "EV 0 t0.g.param0 set\n", 11, ParseErrorKind::Syntax),
            (minimal() + "EV 0 t0.g.param9 set 0.1\n", 11, ParseErrorKind::Semantic),
            (minimal() + "EV 0 t0.g.param0 set 1.5\n", 11, ParseErrorKind::Semantic),
            (minimal() + "EV 2000 t0.g.param0 set 0.5\n", 11, ParseErrorKind::Semantic),
            (minimal() + "EV 5 t0.g.param0 set 0.5\nEV 4 t0.g.param0 set 0.5\n", 12, ParseErrorKind::Semantic),
            (minimal() + "EV 5 t0.p0.param0 trigger\n", 11, ParseErrorKind::Semantic),
            (minimal() + "BOGUS\n", 11, ParseErrorKind::Syntax),
            (minimal() + "  EV 0 t0.g.param0 set 0.5\n", 11, ParseErrorKind::Syntax),
            (minimal() + "LOOP 100 500 400\n", 11, ParseErrorKind::Semantic),
            (minimal() + "LOOP 100 0 400\n  EV 100 t0.g.param0 set 0.5\n", 12, ParseErrorKind::Semantic),
            (minimal() + "LFO 0 g 0 30 0.5 sine 0\n", 11, ParseErrorKind::Syntax),
            (minimal() + "LFO 0 g 0 3 0.5 sine 9\n", 11, ParseErrorKind::Semantic),
            (minimal() + "SR 48000\n", 11, ParseErrorKind::Semantic),
            (minimal().replace("GEN 0", "GEN 100"), 5, ParseErrorKind::Semantic),
            (minimal().replace("GEN 0", "GEN 4242"), 5, ParseErrorKind::Semantic),
            (minimal().replace("GEN 0 0.5 0.5 0.5 0.5", "GEN 0 0.5 0.5 0.5"), 5, ParseErrorKind::Semantic),
            (minimal().replace("SR 44100", "SR 8000"), 2, ParseErrorKind::Semantic),
            (minimal().replace("DUR 1000", "DUR 0"), 4, ParseErrorKind::Semantic),
            (minimal().replace("FMOLSCORE 1", "FMOLSCORE 2"), 1, ParseErrorKind::Semantic),
            (minimal().replace("FMOLSCORE 1", "FMOL 1"), 1, ParseErrorKind::Syntax),
        ];
        for (text, line, kind) in cases {
            let e = err(&text);
            assert_eq!((e.line, e.kind), (line, kind), "{e}");
        }
    }

    #[test]
    fn comments_blank_lines_and_minor_versions() {
        let text = format!("# a piece\n\n{}\n  # indented comment\n", minimal().replace("FMOLSCORE 1", "FMOLSCORE 1.3"));
        let score = parse(&text, catalog()).unwrap();
        assert_eq!(score.version, 1);
    }

    #[test]
    fn loops_and_meta_parse() {
        let text = minimal()
            + "META title \"A \\\"quoted\\\" title\"\n"
            + "EV 0 t1.g.param0 trigger\n"
            + "LOOP 500 100 900 t2.g.param0\n  EV 0 t2.g.param0 set 0.25\n  EV 250 t2.g.param0 trigger\n"
            + "SEQ 300 0 1000\n  EV 10 t3.p0.lfo1.depth lfo_set 0.5\n";
        let score = parse(&text, catalog()).unwrap();
        assert_eq!(score.meta.title, "A \"quoted\" title");
        assert_eq!(score.loops.len(), 2);
        assert_eq!(score.loops[0].gesture.events.len(), 2);
        assert_eq!(score.loops[1].gesture.mode, LoopMode::Once);
        let again = parse(&serialize(&score), catalog()).unwrap();
        assert_eq!(again, score);
    }

    #[test]
    fn scope_mismatch_is_rejected() {
        let text = minimal() + "LOOP 500 0 900 t2.g.param0\n  EV 0 t2.g.param1 set 0.25\n";
        assert_eq!(err(&text).line, 12);
    }

    #[test]
    fn negative_zero_is_canonical() {
        let text = minimal() + "EV 0 t0.g.param0 set -0\n";
        let score = parse(&text, catalog()).unwrap();
        assert!(serialize(&score).contains("set 0\n"));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn arbitrary_text_never_panics(text in "\\PC{0,400}") {
            let _ = parse(&text, catalog());
        }

        #[test]
        fn mutated_scores_never_panic(cut in 0usize..2000, insert in "[ -~\n]{0,20}") {
            let base = minimal() + "LFO 0 g 0 3 0.5 sine 0\nEV 0 t0.g.param0 set 0.5\nLOOP 100 0 900\n  EV 50 t0.g.param0 trigger\n";
            let cut = cut.min(base.len());
            let text = format!("{}{}{}", &base[..cut], insert, &base[cut..]);
            let _ = parse(&text, catalog());
        }
    }
}
