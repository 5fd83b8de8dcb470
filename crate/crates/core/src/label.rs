//! Outcome labels.
//!
//! Labels are a closed enumeration with a stable string form (used on the
//! command line and in CSV files) and a stable integer code:
//!
//! | label            | string    | code       |
//! |------------------|-----------|------------|
//! | `Up`             | `up`      | 0          |
//! | `Down`           | `down`    | 1          |
//! | `Chi(i)`         | `chi{i}`  | 2 + i      |
//! | `ChiAny`         | `chi`     | 4          |
//! | `Tilde(i)`       | `t{i}`    | 10 + i     |
//! | `ChiUp(i)`       | `chi{i}u` | 20 + i     |
//! | `ChiUpAny`       | `chiu`    | 29         |
//! | `ChiDown(i)`     | `chi{i}d` | 30 + i     |
//! | `ChiDownAny`     | `chid`    | 39         |
//! | `Custom(n)`      | `o{n}`    | 1000 + n   |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Up,
    Down,
    Chi(u8),
    /// Coarse label for every `Chi(i)`.
    ChiAny,
    /// Product eigenstate `|ii⟩` of a qutrit basis.
    Tilde(u8),
    ChiUp(u8),
    ChiUpAny,
    ChiDown(u8),
    ChiDownAny,
    Custom(u16),
}

impl Label {
    pub fn code(self) -> u32 {
        match self {
            Label::Up => 0,
            Label::Down => 1,
            Label::Chi(i) => 2 + i as u32,
            Label::ChiAny => 4,
            Label::Tilde(i) => 10 + i as u32,
            Label::ChiUp(i) => 20 + i as u32,
            Label::ChiUpAny => 29,
            Label::ChiDown(i) => 30 + i as u32,
            Label::ChiDownAny => 39,
            Label::Custom(n) => 1000 + n as u32,
        }
    }

    pub fn from_code(code: u32) -> Option<Self> {
        Some(match code {
            0 => Label::Up,
            1 => Label::Down,
            2 | 3 => Label::Chi((code - 2) as u8),
            4 => Label::ChiAny,
            10..=12 => Label::Tilde((code - 10) as u8),
            20..=22 => Label::ChiUp((code - 20) as u8),
            29 => Label::ChiUpAny,
            30..=32 => Label::ChiDown((code - 30) as u8),
            39 => Label::ChiDownAny,
            1000..=66535 => Label::Custom((code - 1000) as u16),
            _ => return None,
        })
    }

    /// True for every label of the χ family (fine or coarse).
    pub fn is_chi(self) -> bool {
        matches!(
            self,
            Label::Chi(_)
                | Label::ChiAny
                | Label::ChiUp(_)
                | Label::ChiUpAny
                | Label::ChiDown(_)
                | Label::ChiDownAny
        )
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Up => write!(f, "up"),
            Label::Down => write!(f, "down"),
            Label::Chi(i) => write!(f, "chi{i}"),
            Label::ChiAny => write!(f, "chi"),
            Label::Tilde(i) => write!(f, "t{i}"),
            Label::ChiUp(i) => write!(f, "chi{i}u"),
            Label::ChiUpAny => write!(f, "chiu"),
            Label::ChiDown(i) => write!(f, "chi{i}d"),
            Label::ChiDownAny => write!(f, "chid"),
            Label::Custom(n) => write!(f, "o{n}"),
        }
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("unknown label `{s}`"));
        let digit = |t: &str, max: u8| -> Result<u8, Error> {
            t.parse::<u8>().ok().filter(|i| *i < max).ok_or_else(bad)
        };
        match s {
            "up" => return Ok(Label::Up),
            "down" => return Ok(Label::Down),
            "chi" => return Ok(Label::ChiAny),
            "chiu" => return Ok(Label::ChiUpAny),
            "chid" => return Ok(Label::ChiDownAny),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("chi") {
            if let Some(i) = rest.strip_suffix('u') {
                return Ok(Label::ChiUp(digit(i, 3)?));
            }
            if let Some(i) = rest.strip_suffix('d') {
                return Ok(Label::ChiDown(digit(i, 3)?));
            }
            return Ok(Label::Chi(digit(rest, 2)?));
        }
        if let Some(i) = s.strip_prefix('t') {
            return Ok(Label::Tilde(digit(i, 3)?));
        }
        if let Some(n) = s.strip_prefix('o') {
            return n.parse().map(Label::Custom).map_err(|_| bad());
        }
        Err(bad())
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
