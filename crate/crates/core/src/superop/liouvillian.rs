use std::fmt;
use std::sync::{Arc, OnceLock};

use ndarray::Array2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::layout::{Layout, SectorKind};
use super::spectrum::LiouvillianSpectrum;
use crate::error::{Error, Result};
use crate::linalg::{dagger, hermiticity_defect, CsrMatrix};
use crate::model::{build_operators, HilbertSpace, ModelParams, OperatorMatrix};

/// Labeled completely positive gain terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ChannelId {
    /// Left-lead injection `Gamma_L s_L^dag rho s_L`.
    #[serde(rename = "in")]
    In,
    /// Right-lead emission `Gamma_R s_R rho s_R^dag`.
    #[serde(rename = "e")]
    E,
    /// Phonon loss to the bath `gamma_b (1 + nbar) a rho a^dag`.
    #[serde(rename = "b")]
    B,
    /// Thermal phonon absorption `gamma_b nbar a^dag rho a`.
    #[serde(rename = "b_abs")]
    BAbs,
}

impl ChannelId {
    pub const ALL: [ChannelId; 4] = [ChannelId::In, ChannelId::E, ChannelId::B, ChannelId::BAbs];

    pub fn as_str(&self) -> &'static str {
        match self {
            ChannelId::In => "in",
            ChannelId::E => "e",
            ChannelId::B => "b",
            ChannelId::BAbs => "b_abs",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "in" => Ok(ChannelId::In),
            "e" => Ok(ChannelId::E),
            "b" => Ok(ChannelId::B),
            "b_abs" => Ok(ChannelId::BAbs),
            _ => Err(Error::InvalidInput(format!("unknown channel '{s}'"))),
        }
    }

    /// Whether the channel carries a counting field by default.
    pub fn counted(&self) -> bool {
        matches!(self, ChannelId::E | ChannelId::B)
    }
}

impl fmt::Display for ChannelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct JumpChannel {
    pub id: ChannelId,
    pub matrix: CsrMatrix,
    pub counted: bool,
}

/// One Lindblad term `rate (X rho X^dag - {X^dag X, rho}/2)`.
///
/// When `channel` is set the sandwich part goes to that channel and the
/// anticommutator stays in the base generator.
#[derive(Debug, Clone)]
pub struct Dissipator {
    pub op: OperatorMatrix,
    pub rate: f64,
    pub channel: Option<ChannelId>,
}

/// Generator on vectorized density matrices, split as `total = base + sum channels`.
#[derive(Debug)]
pub struct Superoperator {
    pub layout: Arc<Layout>,
    pub base: CsrMatrix,
    pub channels: Vec<JumpChannel>,
    pub total: CsrMatrix,
    /// Set when built from the transport model; enables charge-sector reduction.
    pub space: Option<HilbertSpace>,
    spectrum: OnceLock<Result<LiouvillianSpectrum>>,
}

impl Clone for Superoperator {
    fn clone(&self) -> Self {
        Superoperator {
            layout: self.layout.clone(),
            base: self.base.clone(),
            channels: self.channels.clone(),
            total: self.total.clone(),
            space: self.space,
            spectrum: OnceLock::new(),
        }
    }
}

fn nonzeros(a: &Array2<C64>) -> Vec<(usize, usize, C64)> {
    a.indexed_iter()
        .filter(|(_, v)| v.norm() != 0.0)
        .map(|((i, j), &v)| (i, j, v))
        .collect()
}

/// `rho -> A rho` in column-stacked coordinates.
fn push_left(t: &mut Vec<(usize, usize, C64)>, a: &Array2<C64>, scale: C64) {
    let d = a.nrows();
    for (i, k, v) in nonzeros(a) {
        for j in 0..d {
            t.push((i + j * d, k + j * d, scale * v));
        }
    }
}

/// `rho -> rho B`.
fn push_right(t: &mut Vec<(usize, usize, C64)>, b: &Array2<C64>, scale: C64) {
    let d = b.nrows();
    for (k, j, v) in nonzeros(b) {
        for i in 0..d {
            t.push((i + j * d, i + k * d, scale * v));
        }
    }
}

/// `rho -> X rho Y`.
fn push_sandwich(t: &mut Vec<(usize, usize, C64)>, x: &Array2<C64>, y: &Array2<C64>, scale: C64) {
    let d = x.nrows();
    let ynz = nonzeros(y);
    for (i, k, xv) in nonzeros(x) {
        for &(l, j, yv) in &ynz {
            t.push((i + j * d, k + l * d, scale * xv * yv));
        }
    }
}

impl Superoperator {
    /// Lindblad generator `-i[H, rho] + sum_k D_k[rho]` in column-stacked coordinates.
    pub fn lindblad(h: &OperatorMatrix, dissipators: &[Dissipator]) -> Result<Self> {
        let d = h.nrows();
        if h.ncols() != d {
            return Err(Error::InvalidInput("Hamiltonian must be square".into()));
        }
        let defect = hermiticity_defect(h);
        if defect > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "Hamiltonian is not Hermitian (defect {defect:.3e})"
            )));
        }
        let mut base = Vec::new();
        push_left(&mut base, h, C64::new(0.0, -1.0));
        push_right(&mut base, h, C64::new(0.0, 1.0));
        let mut channels: Vec<JumpChannel> = Vec::new();
        for dis in dissipators {
            if dis.rate < 0.0 || !dis.rate.is_finite() {
                return Err(Error::InvalidInput(format!("dissipator rate {} invalid", dis.rate)));
            }
            let x_dag = dagger(&dis.op);
            let xdx = x_dag.dot(&dis.op);
            let half = C64::new(-0.5 * dis.rate, 0.0);
            push_left(&mut base, &xdx, half);
            push_right(&mut base, &xdx, half);
            let mut gain = Vec::new();
            push_sandwich(&mut gain, &dis.op, &x_dag, C64::new(dis.rate, 0.0));
            match dis.channel {
                Some(id) => {
                    let m = CsrMatrix::from_triplets(d * d, d * d, gain);
                    if let Some(c) = channels.iter_mut().find(|c| c.id == id) {
                        c.matrix = c.matrix.add(&m);
                    } else {
                        channels.push(JumpChannel {
                            id,
                            matrix: m,
                            counted: id.counted(),
                        });
                    }
                }
                None => base.extend(gain),
            }
        }
        let base = CsrMatrix::from_triplets(d * d, d * d, base);
        Ok(Self::assemble(Arc::new(Layout::full(d)), base, channels, None))
    }

    fn assemble(layout: Arc<Layout>, base: CsrMatrix, channels: Vec<JumpChannel>, space: Option<HilbertSpace>) -> Self {
        let mut total = base.clone();
        for c in &channels {
            total = total.add(&c.matrix);
        }
        Superoperator {
            layout,
            base,
            channels,
            total,
            space,
            spectrum: OnceLock::new(),
        }
    }

    pub fn dim_rho(&self) -> usize {
        self.layout.dim_rho
    }

    /// Number of reduced coordinates.
    pub fn len(&self) -> usize {
        self.total.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn channel(&self, id: ChannelId) -> Result<&JumpChannel> {
        self.channels
            .iter()
            .find(|c| c.id == id)
            .ok_or_else(|| Error::InvalidInput(format!("generator has no channel '{id}'")))
    }

    /// Generator reduced to one invariant charge sector of the transport space.
    pub fn restrict(&self, kind: SectorKind) -> Result<Superoperator> {
        let space = self
            .space
            .ok_or_else(|| Error::InvalidInput("sector reduction needs a transport-model generator".into()))?;
        if self.layout.kind != SectorKind::Full {
            return Err(Error::InvalidInput("generator is already reduced".into()));
        }
        let layout = Layout::transport_sector(&space, kind);
        let leak = self.total.leakage(&layout.map);
        if leak > 0.0 {
            return Err(Error::Numerical(format!(
                "sector {kind:?} is not invariant (leakage {leak:.3e})"
            )));
        }
        let base = self.base.restrict(&layout.map);
        let channels = self
            .channels
            .iter()
            .map(|c| JumpChannel {
                id: c.id,
                matrix: c.matrix.restrict(&layout.map),
                counted: c.counted,
            })
            .collect();
        Ok(Self::assemble(Arc::new(layout), base, channels, Some(space)))
    }

    /// Eigendecomposition, computed on first use.
    pub fn spectrum(&self) -> Result<&LiouvillianSpectrum> {
        self.spectrum
            .get_or_init(|| LiouvillianSpectrum::compute(self))
            .as_ref()
            .map_err(|e| e.clone())
    }

    /// `max |1^T L|` over columns.
    pub fn trace_defect(&self) -> f64 {
        self.total
            .vec_mul(self.layout.trace_weights())
            .iter()
            .fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        self.total.mul_vec(v)
    }
}

/// Bose occupation `1 / (e^{omega_b / T} - 1)`, exactly zero at T = 0.
pub fn thermal_occupation(omega_b: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    1.0 / (omega_b / temperature).exp_m1()
}

/// Transport generator: coherent dynamics, lead tunneling and the thermal resonator bath.
///
/// The bath is written in Lindblad form with emission weight `gamma_b (1 + nbar)`
/// and absorption weight `gamma_b nbar`.
pub fn build_liouvillian(h: &OperatorMatrix, params: &ModelParams, space: &HilbertSpace) -> Result<Superoperator> {
    params.validate()?;
    if h.nrows() != space.dim() {
        return Err(Error::InvalidInput(format!(
            "Hamiltonian dimension {} does not match space dimension {}",
            h.nrows(),
            space.dim()
        )));
    }
    let ops = build_operators(space);
    let nbar = thermal_occupation(params.omega_b, params.temperature);
    let dissipators = [
        Dissipator {
            op: dagger(&ops.s_l),
            rate: params.gamma_l,
            channel: Some(ChannelId::In),
        },
        Dissipator {
            op: ops.s_r.clone(),
            rate: params.gamma_r,
            channel: Some(ChannelId::E),
        },
        Dissipator {
            op: ops.a.clone(),
            rate: params.gamma_b * (1.0 + nbar),
            channel: Some(ChannelId::B),
        },
        Dissipator {
            op: ops.a_dag.clone(),
            rate: params.gamma_b * nbar,
            channel: Some(ChannelId::BAbs),
        },
    ];
    let mut l = Superoperator::lindblad(h, &dissipators)?;
    l.space = Some(*space);
    Ok(l)
}

/// `M(s) = base + sum_i s_i L_i`, with channels absent from `s` held at 1.
pub fn counting_liouvillian(l: &Superoperator, s: &[(ChannelId, f64)]) -> Result<CsrMatrix> {
    for (id, _) in s {
        let c = l.channel(*id)?;
        if !c.counted {
            return Err(Error::InvalidInput(format!("channel '{id}' is not counted")));
        }
    }
    let mut m = l.base.clone();
    for c in &l.channels {
        match s.iter().find(|(id, _)| *id == c.id) {
            Some(&(_, v)) if v != 1.0 => m = m.add(&c.matrix.scale(C64::new(v, 0.0))),
            _ => m = m.add(&c.matrix),
        }
    }
    Ok(m)
}
