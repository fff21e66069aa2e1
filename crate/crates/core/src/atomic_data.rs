//! Per-state atomic parameters and the parameter file format.
//!
//! A [`ParameterSet`] is loaded once, validated, and then only read. The file
//! format is TOML; the schema is documented at the top of
//! `data/rb85_reference.toml`, which ships with the crate and is available
//! through [`ParameterSet::reference`].

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interaction::{ChannelError, InteractionChannel};

const REFERENCE_TOML: &str = include_str!("../data/rb85_reference.toml");
const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ParamError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported schema_version {0} (expected {SCHEMA_VERSION})")]
    Schema(u32),
    #[error("{context}: field `{field}` is not finite")]
    NonFinite { context: String, field: &'static str },
    #[error("{context}: {message}")]
    Invalid { context: String, message: String },
    #[error("duplicate state {0}")]
    DuplicateState(StateKey),
    #[error("duplicate channel label `{0}`")]
    DuplicateChannel(String),
    #[error("channel `{channel}` references missing state {key}")]
    DanglingReference { channel: String, key: StateKey },
    #[error("channel `{channel}`: {source}")]
    Channel {
        channel: String,
        #[source]
        source: ChannelError,
    },
    #[error("no state matches `{0}`")]
    UnknownState(String),
    #[error("`{0}` matches more than one state; give J and |mJ| explicitly")]
    AmbiguousState(String),
    #[error("no channel labelled `{0}`")]
    UnknownChannel(String),
}

/// Orbital angular momentum label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum OrbitalL {
    S,
    P,
    D,
    F,
    G,
}

impl OrbitalL {
    pub fn value(self) -> u32 {
        match self {
            OrbitalL::S => 0,
            OrbitalL::P => 1,
            OrbitalL::D => 2,
            OrbitalL::F => 3,
            OrbitalL::G => 4,
        }
    }

    fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'S' => Some(OrbitalL::S),
            'P' => Some(OrbitalL::P),
            'D' => Some(OrbitalL::D),
            'F' => Some(OrbitalL::F),
            'G' => Some(OrbitalL::G),
            _ => None,
        }
    }
}

impl fmt::Display for OrbitalL {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

/// A non-negative half-integer stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(u32);

impl HalfInt {
    pub const fn from_twice(twice: u32) -> Self {
        HalfInt(twice)
    }

    pub fn twice(self) -> u32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn from_f64(v: f64) -> Option<Self> {
        let twice = 2.0 * v;
        if v.is_finite() && v >= 0.0 && twice.fract() == 0.0 && twice <= u32::MAX as f64 {
            Some(HalfInt(twice as u32))
        } else {
            None
        }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.value())
    }
}

impl<'de> Deserialize<'de> for HalfInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = f64::deserialize(d)?;
        HalfInt::from_f64(v)
            .ok_or_else(|| serde::de::Error::custom(format!("{v} is not a non-negative half-integer")))
    }
}

/// Identity of a Rydberg state: (n, L, J, |mJ|).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StateKey {
    pub n: u32,
    #[serde(rename = "L")]
    pub l: OrbitalL,
    #[serde(rename = "J")]
    pub j: HalfInt,
    #[serde(rename = "abs_mJ")]
    pub abs_mj: HalfInt,
}

impl StateKey {
    pub fn new(n: u32, l: OrbitalL, j: f64, abs_mj: f64) -> Result<Self, ParamError> {
        let context = format!("state n={n} L={l} J={j} |mJ|={abs_mj}");
        let bad = |message: &str| ParamError::Invalid {
            context: context.clone(),
            message: message.to_string(),
        };
        let j = HalfInt::from_f64(j).ok_or_else(|| bad("J is not a half-integer"))?;
        let abs_mj = HalfInt::from_f64(abs_mj).ok_or_else(|| bad("|mJ| is not a half-integer"))?;
        let key = StateKey { n, l, j, abs_mj };
        key.validate().map_err(|m| bad(&m))?;
        Ok(key)
    }

    fn validate(&self) -> Result<(), String> {
        if self.n < 1 {
            return Err("n must be >= 1".into());
        }
        if self.l.value() >= self.n {
            return Err(format!("L = {} not allowed for n = {}", self.l, self.n));
        }
        // alkali states: J = L +- 1/2
        let two_l = 2 * self.l.value();
        let two_j = self.j.twice();
        if !(two_j == two_l + 1 || (two_l >= 1 && two_j == two_l - 1)) {
            return Err(format!("J = {} incompatible with L = {}", self.j, self.l));
        }
        if self.abs_mj.twice() % 2 != 1 || self.abs_mj > self.j {
            return Err(format!("|mJ| = {} invalid for J = {}", self.abs_mj, self.j));
        }
        Ok(())
    }
}

impl fmt::Display for StateKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{} |mJ|={}", self.n, self.l, self.j, self.abs_mj)
    }
}

/// Loose state selector parsed from strings like `37P`, `38S1/2` or `37P3/2:1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StateSelector {
    pub n: u32,
    pub l: OrbitalL,
    pub j: Option<HalfInt>,
    pub abs_mj: Option<HalfInt>,
}

impl StateSelector {
    pub fn matches(&self, key: &StateKey) -> bool {
        key.n == self.n
            && key.l == self.l
            && self.j.is_none_or(|j| j == key.j)
            && self.abs_mj.is_none_or(|m| m == key.abs_mj)
    }
}

fn parse_half(s: &str) -> Option<HalfInt> {
    match s.split_once('/') {
        Some((num, "2")) => num.parse::<u32>().ok().map(HalfInt::from_twice),
        Some(_) => None,
        None => s.parse::<u32>().ok().map(|v| HalfInt::from_twice(2 * v)),
    }
}

impl FromStr for StateSelector {
    type Err = ParamError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || ParamError::UnknownState(s.to_string());
        let (head, mj) = match s.split_once(':') {
            Some((h, m)) => (h, Some(parse_half(m.trim()).ok_or_else(unknown)?)),
            None => (s, None),
        };
        let head = head.trim();
        let pos = head.find(|c: char| !c.is_ascii_digit()).ok_or_else(unknown)?;
        let n: u32 = head[..pos].parse().map_err(|_| unknown())?;
        let mut rest = head[pos..].chars();
        let l = rest.next().and_then(OrbitalL::from_char).ok_or_else(unknown)?;
        let j_str = rest.as_str();
        let j = if j_str.is_empty() {
            None
        } else {
            Some(parse_half(j_str).ok_or_else(unknown)?)
        };
        Ok(StateSelector { n, l, j, abs_mj: mj })
    }
}

/// A Rydberg level with its scalar Stark response.
///
/// `E(F) = energy0 - alpha * F^2 / 2` with `energy0` in MHz (E/h) relative to
/// the channel reference and `alpha` in MHz/(V/cm)^2.
#[derive(Debug, Clone, PartialEq)]
pub struct RydbergState {
    pub key: StateKey,
    pub energy0: f64,
    pub alpha: f64,
    pub provenance: String,
}

impl RydbergState {
    pub fn new(key: StateKey, energy0: f64, alpha: f64) -> Result<Self, ParamError> {
        let context = format!("state {key}");
        if !energy0.is_finite() {
            return Err(ParamError::NonFinite { context, field: "energy0_MHz" });
        }
        if !alpha.is_finite() {
            return Err(ParamError::NonFinite { context, field: "alpha_MHz_per_Vcm2" });
        }
        Ok(RydbergState {
            key,
            energy0,
            alpha,
            provenance: String::new(),
        })
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    /// Energy in a static field `field` (V/cm), in MHz.
    pub fn stark_energy(&self, field: f64) -> f64 {
        self.energy0 - 0.5 * self.alpha * field * field
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    n: u32,
    #[serde(rename = "L")]
    l: OrbitalL,
    #[serde(rename = "J")]
    j: f64,
    #[serde(rename = "abs_mJ")]
    abs_mj: f64,
    #[serde(rename = "energy0_MHz")]
    energy0: f64,
    #[serde(rename = "alpha_MHz_per_Vcm2")]
    alpha: f64,
    provenance: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChannel {
    label: String,
    initial: [StateKey; 2],
    #[serde(rename = "final")]
    final_pair: [StateKey; 2],
    #[serde(rename = "delta0_MHz")]
    delta0: f64,
    #[serde(rename = "C3_MHz_um3")]
    c3: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pp_above: Option<bool>,
    provenance: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    schema_version: u32,
    #[serde(default)]
    state: Vec<RawState>,
    #[serde(default)]
    channel: Vec<RawChannel>,
}

/// Validated, immutable collection of states and channels.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParameterSet {
    states: BTreeMap<StateKey, RydbergState>,
    channels: BTreeMap<String, InteractionChannel>,
}

/// Reads and validates a parameter file.
pub fn load_parameters(path: impl AsRef<Path>) -> Result<ParameterSet, ParamError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ParamError::Io {
        path: path.display().to_string(),
        source,
    })?;
    ParameterSet::from_toml_str(&text)
}

impl ParameterSet {
    /// The 85Rb parameters shipped with the crate.
    pub fn reference() -> Self {
        Self::from_toml_str(REFERENCE_TOML).expect("bundled reference parameters are valid")
    }

    pub fn reference_toml() -> &'static str {
        REFERENCE_TOML
    }

    pub fn from_toml_str(text: &str) -> Result<Self, ParamError> {
        let raw: RawFile = toml::from_str(text).map_err(|e| ParamError::Parse(e.to_string()))?;
        if raw.schema_version != SCHEMA_VERSION {
            return Err(ParamError::Schema(raw.schema_version));
        }

        let mut states = BTreeMap::new();
        for (idx, rs) in raw.state.into_iter().enumerate() {
            let key = StateKey::new(rs.n, rs.l, rs.j, rs.abs_mj).map_err(|e| match e {
                ParamError::Invalid { context, message } => ParamError::Invalid {
                    context: format!("state[{idx}] ({context})"),
                    message,
                },
                other => other,
            })?;
            let state = RydbergState::new(key, rs.energy0, rs.alpha)
                .map_err(|e| match e {
                    ParamError::NonFinite { context, field } => ParamError::NonFinite {
                        context: format!("state[{idx}] ({context})"),
                        field,
                    },
                    other => other,
                })?
                .with_provenance(rs.provenance);
            if states.insert(key, state).is_some() {
                return Err(ParamError::DuplicateState(key));
            }
        }

        let mut channels = BTreeMap::new();
        for rc in raw.channel {
            let label = rc.label.clone();
            let lookup = |key: &StateKey| {
                states.get(key).cloned().ok_or_else(|| ParamError::DanglingReference {
                    channel: label.clone(),
                    key: *key,
                })
            };
            let initial = [lookup(&rc.initial[0])?, lookup(&rc.initial[1])?];
            let final_pair = [lookup(&rc.final_pair[0])?, lookup(&rc.final_pair[1])?];
            let mut channel = InteractionChannel::new(&rc.label, initial, final_pair, rc.delta0, rc.c3)
                .map_err(|source| ParamError::Channel {
                    channel: label.clone(),
                    source,
                })?
                .with_provenance(rc.provenance);
            channel.pp_above_override = rc.pp_above;
            if channels.insert(label.clone(), channel).is_some() {
                return Err(ParamError::DuplicateChannel(label));
            }
        }

        Ok(ParameterSet { states, channels })
    }

    pub fn to_toml_string(&self) -> String {
        let raw = RawFile {
            schema_version: SCHEMA_VERSION,
            state: self
                .states
                .values()
                .map(|s| RawState {
                    n: s.key.n,
                    l: s.key.l,
                    j: s.key.j.value(),
                    abs_mj: s.key.abs_mj.value(),
                    energy0: s.energy0,
                    alpha: s.alpha,
                    provenance: s.provenance.clone(),
                })
                .collect(),
            channel: self
                .channels
                .values()
                .map(|c| RawChannel {
                    label: c.label.clone(),
                    initial: [c.initial[0].key, c.initial[1].key],
                    final_pair: [c.final_pair[0].key, c.final_pair[1].key],
                    delta0: c.delta0,
                    c3: c.c3,
                    pp_above: c.pp_above_override,
                    provenance: c.provenance.clone(),
                })
                .collect(),
        };
        toml::to_string(&raw).expect("parameter set serializes")
    }

    pub fn states(&self) -> impl Iterator<Item = &RydbergState> {
        self.states.values()
    }

    pub fn channels(&self) -> impl Iterator<Item = &InteractionChannel> {
        self.channels.values()
    }

    pub fn state(&self, key: &StateKey) -> Option<&RydbergState> {
        self.states.get(key)
    }

    pub fn channel(&self, label: &str) -> Result<&InteractionChannel, ParamError> {
        self.channels
            .get(label)
            .ok_or_else(|| ParamError::UnknownChannel(label.to_string()))
    }

    /// Looks a state up by a selector string such as `37P`, `38S1/2` or `37P3/2:1/2`.
    pub fn find_state(&self, selector: &str) -> Result<&RydbergState, ParamError> {
        let sel: StateSelector = selector.parse()?;
        let mut hits = self.states.values().filter(|s| sel.matches(&s.key));
        match (hits.next(), hits.next()) {
            (Some(s), None) => Ok(s),
            (None, _) => Err(ParamError::UnknownState(selector.to_string())),
            (Some(_), Some(_)) => Err(ParamError::AmbiguousState(selector.to_string())),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty() && self.channels.is_empty()
    }
}
