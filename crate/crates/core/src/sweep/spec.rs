use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::noise::{Normalization, Pair};
use crate::superop::ChannelId;

/// Sweepable parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisParam {
    /// Noise frequency.
    Omega,
    G,
    Delta,
    Epsilon,
    #[serde(rename = "T")]
    Temperature,
}

impl AxisParam {
    pub fn as_str(&self) -> &'static str {
        match self {
            AxisParam::Omega => "omega",
            AxisParam::G => "g",
            AxisParam::Delta => "delta",
            AxisParam::Epsilon => "epsilon",
            AxisParam::Temperature => "T",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "omega" => Ok(AxisParam::Omega),
            "g" => Ok(AxisParam::G),
            "delta" => Ok(AxisParam::Delta),
            "epsilon" => Ok(AxisParam::Epsilon),
            "T" | "temperature" => Ok(AxisParam::Temperature),
            other => Err(Error::InvalidInput(format!(
                "unknown axis '{other}' (expected omega, g, delta, epsilon or T)"
            ))),
        }
    }

    /// Writes the value into `p`; a no-op for `Omega`.
    pub fn apply(&self, p: &mut ModelParams, v: f64) {
        match self {
            AxisParam::Omega => {}
            AxisParam::G => p.g = v,
            AxisParam::Delta => p.delta = v,
            AxisParam::Epsilon => p.epsilon = v,
            AxisParam::Temperature => p.temperature = v,
        }
    }
}

impl fmt::Display for AxisParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisValues {
    /// `count` evenly spaced points including both ends.
    Range {
        start: f64,
        stop: f64,
        count: usize,
    },
    List(Vec<f64>),
}

impl AxisValues {
    pub fn values(&self) -> Vec<f64> {
        match self {
            AxisValues::Range { start, stop, count } => {
                let n = *count;
                (0..n)
                    .map(|k| {
                        if k + 1 == n {
                            *stop
                        } else {
                            start + (stop - start) * k as f64 / (n - 1) as f64
                        }
                    })
                    .collect()
            }
            AxisValues::List(v) => v.clone(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            AxisValues::Range { count, .. } => *count,
            AxisValues::List(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub param: AxisParam,
    pub values: AxisValues,
}

impl AxisSpec {
    pub fn range(param: AxisParam, start: f64, stop: f64, count: usize) -> Self {
        AxisSpec {
            param,
            values: AxisValues::Range { start, stop, count },
        }
    }

    pub fn list(param: AxisParam, values: &[f64]) -> Self {
        AxisSpec {
            param,
            values: AxisValues::List(values.to_vec()),
        }
    }
}

/// Observable recorded at each grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quantity {
    /// Noise at the grid frequency, or at zero without an `omega` axis.
    Noise {
        pair: Pair,
        normalization: Normalization,
    },
    Current(ChannelId),
    FanoQ,
    QuadMin,
}

impl Quantity {
    pub const S_EE: Quantity = Quantity::Noise {
        pair: Pair::EE,
        normalization: Normalization::Fano,
    };
    pub const S_BB: Quantity = Quantity::Noise {
        pair: Pair::BB,
        normalization: Normalization::Fano,
    };
    pub const S_EB: Quantity = Quantity::Noise {
        pair: Pair::EB,
        normalization: Normalization::Raw,
    };

    /// `S_ee`, `S_bb` (Fano-normalized), `S_eb` (raw), `I_e`, `I_b`, `F_Q`,
    /// `quad_min`; a `:raw` or `:fano` suffix overrides the noise normalization.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, norm) = match s.split_once(':') {
            Some((n, m)) => (n, Some(Normalization::parse(m)?)),
            None => (s, None),
        };
        let noise = |pair: Pair| Quantity::Noise {
            pair,
            normalization: norm.unwrap_or(Normalization::default_for(pair)),
        };
        let q = match name {
            "S_ee" => noise(Pair::EE),
            "S_bb" => noise(Pair::BB),
            "S_eb" => noise(Pair::EB),
            "I_e" => Quantity::Current(ChannelId::E),
            "I_b" => Quantity::Current(ChannelId::B),
            "F_Q" => Quantity::FanoQ,
            "quad_min" => Quantity::QuadMin,
            other => return Err(Error::InvalidInput(format!("unknown quantity '{other}'"))),
        };
        if norm.is_some() && !matches!(q, Quantity::Noise { .. }) {
            return Err(Error::InvalidInput(format!(
                "normalization suffix on non-noise quantity '{s}'"
            )));
        }
        if let Quantity::Noise {
            pair,
            normalization: Normalization::Fano,
        } = q
        {
            if !pair.is_diagonal() {
                return Err(Error::InvalidInput(format!(
                    "'{s}': fano normalization needs a diagonal pair"
                )));
            }
        }
        Ok(q)
    }

    pub fn name(&self) -> String {
        match self {
            Quantity::Noise { pair, normalization } => {
                let base = format!("S_{pair}");
                if *normalization == Normalization::default_for(*pair) {
                    base
                } else {
                    format!("{base}:{}", normalization.as_str())
                }
            }
            Quantity::Current(id) => format!("I_{id}"),
            Quantity::FanoQ => "F_Q".into(),
            Quantity::QuadMin => "quad_min".into(),
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Fock-cutoff policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FockPolicy {
    /// Skip the convergence ladder and use this cutoff.
    pub fixed: Option<usize>,
    pub cap: usize,
}

impl Default for FockPolicy {
    fn default() -> Self {
        FockPolicy { fixed: None, cap: 45 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub base: ModelParams,
    /// One or two axes; the last varies fastest.
    pub axes: Vec<AxisSpec>,
    pub quantities: Vec<Quantity>,
    pub preset: Option<String>,
    pub fock: FockPolicy,
    /// Abort on the first failing point instead of recording a gap.
    pub fail_fast: bool,
}

impl SweepSpec {
    pub fn new(base: ModelParams, axes: Vec<AxisSpec>, quantities: Vec<Quantity>) -> Self {
        SweepSpec {
            base,
            axes,
            quantities,
            preset: None,
            fock: FockPolicy::default(),
            fail_fast: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::InvalidInput(format!(
                "a sweep needs one or two axes, got {}",
                self.axes.len()
            )));
        }
        if self.axes.len() == 2 && self.axes[0].param == self.axes[1].param {
            return Err(Error::InvalidInput(format!(
                "axis parameters must be distinct, both are '{}'",
                self.axes[0].param
            )));
        }
        for a in &self.axes {
            if a.values.len() < 2 {
                return Err(Error::InvalidInput(format!(
                    "axis '{}': counts ≥ 2 required, got {}",
                    a.param,
                    a.values.len()
                )));
            }
            if a.values.values().iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput(format!("axis '{}' has non-finite values", a.param)));
            }
            if a.param == AxisParam::Temperature && a.values.values().iter().any(|&v| v < 0.0) {
                return Err(Error::InvalidInput("temperature axis must be >= 0".into()));
            }
        }
        if self.quantities.is_empty() {
            return Err(Error::InvalidInput("a sweep needs at least one quantity".into()));
        }
        if self.fock.cap < 1 || self.fock.fixed == Some(0) {
            return Err(Error::InvalidInput("Fock cutoff must be >= 1".into()));
        }
        Ok(())
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.values.len()).collect()
    }

    pub fn omega_axis(&self) -> Option<usize> {
        self.axes.iter().position(|a| a.param == AxisParam::Omega)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_hits_both_ends() {
        let v = AxisValues::Range {
            start: 0.2,
            stop: 1.8,
            count: 161,
        }
        .values();
        assert_eq!(v.len(), 161);
        assert_eq!(v[0], 0.2);
        assert_eq!(v[160], 1.8);
        assert!((v[80] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn quantity_names_round_trip() {
        for s in ["S_ee", "S_bb", "S_eb", "S_ee:raw", "I_e", "I_b", "F_Q", "quad_min"] {
            assert_eq!(Quantity::parse(s).unwrap().name(), s);
        }
        assert!(Quantity::parse("S_eb:fano").is_err());
        assert!(Quantity::parse("I_e:raw").is_err());
    }

    #[test]
    fn validation() {
        let mut s = SweepSpec::new(
            ModelParams::default(),
            vec![AxisSpec::range(AxisParam::G, 0.0, 0.4, 1)],
            vec![Quantity::S_EE],
        );
        assert!(s.validate().unwrap_err().to_string().contains("counts ≥ 2"));
        s.axes = vec![
            AxisSpec::range(AxisParam::G, 0.0, 0.4, 3),
            AxisSpec::list(AxisParam::G, &[0.1, 0.2]),
        ];
        assert!(s.validate().is_err());
    }
}
