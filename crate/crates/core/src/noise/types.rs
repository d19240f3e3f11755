use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::superop::ChannelId;

/// Ordered pair of counted channels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pair {
    pub i: ChannelId,
    pub j: ChannelId,
}

impl Pair {
    pub const EE: Pair = Pair {
        i: ChannelId::E,
        j: ChannelId::E,
    };
    pub const BB: Pair = Pair {
        i: ChannelId::B,
        j: ChannelId::B,
    };
    pub const EB: Pair = Pair {
        i: ChannelId::E,
        j: ChannelId::B,
    };

    pub fn new(i: ChannelId, j: ChannelId) -> Self {
        Pair { i, j }
    }

    pub fn is_diagonal(&self) -> bool {
        self.i == self.j
    }

    /// Accepts `ee`, `bb`, `eb`, `be` and `e,b` forms.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (a, b) = match s {
            "ee" => ("e", "e"),
            "bb" => ("b", "b"),
            "eb" => ("e", "b"),
            "be" => ("b", "e"),
            _ => s
                .split_once(',')
                .ok_or_else(|| Error::InvalidInput(format!("unknown channel pair '{s}'")))?,
        };
        Ok(Pair::new(ChannelId::parse(a.trim())?, ChannelId::parse(b.trim())?))
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.i.as_str().len() == 1 && self.j.as_str().len() == 1 {
            write!(f, "{}{}", self.i, self.j)
        } else {
            write!(f, "{},{}", self.i, self.j)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    Raw,
    /// `S / 2 I_i`, diagonal pairs only.
    Fano,
}

impl Normalization {
    pub fn as_str(&self) -> &'static str {
        match self {
            Normalization::Raw => "raw",
            Normalization::Fano => "fano",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "raw" => Ok(Normalization::Raw),
            "fano" => Ok(Normalization::Fano),
            other => Err(Error::InvalidInput(format!("unknown normalization '{other}'"))),
        }
    }

    /// Fano for diagonal pairs, raw otherwise.
    pub fn default_for(pair: Pair) -> Self {
        if pair.is_diagonal() {
            Normalization::Fano
        } else {
            Normalization::Raw
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Resolvent,
    Eigen,
    Macdonald,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Resolvent => "resolvent",
            Method::Eigen => "eigen",
            Method::Macdonald => "macdonald",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "resolvent" => Ok(Method::Resolvent),
            "eigen" => Ok(Method::Eigen),
            "macdonald" => Ok(Method::Macdonald),
            other => Err(Error::InvalidInput(format!("unknown method '{other}'"))),
        }
    }
}

/// Symmetrized noise of one pair on a frequency grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoiseSpectrum {
    pub pair: Pair,
    pub omegas: Vec<f64>,
    pub values: Vec<f64>,
    pub normalization: Normalization,
    pub method: Method,
}

/// Largest generator dimension accepted by the dense routes.
pub const DENSE_LIMIT: usize = 1600;

pub(crate) fn check_dense(len: usize, route: &str) -> Result<()> {
    if len > DENSE_LIMIT {
        return Err(Error::MethodUnavailable(format!(
            "{route} needs a dense generator; dimension {len} exceeds {DENSE_LIMIT}, lower the Fock cutoff"
        )));
    }
    Ok(())
}

/// Currents below this are treated as zero when normalizing.
pub const VANISHING_CURRENT: f64 = 1e-15;

/// Applies the requested normalization to a raw value.
pub fn normalize(raw: f64, pair: Pair, norm: Normalization, current_i: f64) -> Result<f64> {
    match norm {
        Normalization::Raw => Ok(raw),
        Normalization::Fano => {
            if !pair.is_diagonal() {
                return Err(Error::InvalidInput(format!(
                    "fano normalization is defined for diagonal pairs only, got {pair}"
                )));
            }
            if current_i.abs() < VANISHING_CURRENT || !current_i.is_finite() {
                return Err(Error::Numerical(format!(
                    "fano normalization of {pair} with vanishing current {current_i:e}"
                )));
            }
            Ok(raw / (2.0 * current_i))
        }
    }
}
