use crate::error::{Error, Result};
use crate::model::ModelParams;

use super::spec::{AxisParam, AxisSpec, Quantity, SweepSpec};

pub const PRESET_NAMES: [&str; 10] = [
    "fig2", "fig3", "fig4a", "fig4b", "fig5a", "fig5b", "fig5c", "fig6a", "fig6b", "fig6c",
];

/// Reference values and fixed lists per preset.
pub const MANIFEST: &str = include_str!("../../presets/manifest.json");

fn symmetric() -> ModelParams {
    ModelParams {
        epsilon: 0.0,
        delta: 0.5,
        g: 0.0,
        omega_b: 1.0,
        gamma_l: 0.01,
        gamma_r: 0.01,
        gamma_b: 0.05,
        temperature: 0.0,
        n_fock: 6,
    }
}

fn asymmetric() -> ModelParams {
    ModelParams {
        epsilon: 0.0,
        delta: 0.1,
        g: 0.0,
        omega_b: 1.0,
        gamma_l: 0.1,
        gamma_r: 0.001,
        gamma_b: 0.01,
        temperature: 0.0,
        n_fock: 6,
    }
}

fn omega_axis() -> AxisSpec {
    AxisSpec::range(AxisParam::Omega, 0.2, 1.8, 161)
}

fn epsilon_axis() -> AxisSpec {
    AxisSpec::range(AxisParam::Epsilon, -2.0, 2.0, 81)
}

fn fig6_axes() -> Vec<AxisSpec> {
    vec![
        AxisSpec::list(AxisParam::Temperature, &[0.0, 0.5, 1.0]),
        AxisSpec::range(AxisParam::G, 0.0, 0.5, 26),
    ]
}

/// Sweep specification of a named preset.
pub fn preset(name: &str) -> Result<SweepSpec> {
    let (base, axes, quantities) = match name {
        "fig2" => (
            symmetric(),
            vec![AxisSpec::range(AxisParam::G, 0.0, 0.4, 9), omega_axis()],
            vec![Quantity::S_EE],
        ),
        "fig3" => (
            ModelParams { g: 0.4, ..symmetric() },
            vec![AxisSpec::list(AxisParam::Temperature, &[0.0, 0.5, 1.0]), omega_axis()],
            vec![Quantity::S_EE],
        ),
        "fig4a" | "fig4b" => (
            ModelParams {
                g: if name == "fig4a" { 0.1 } else { 0.4 },
                ..symmetric()
            },
            vec![AxisSpec::range(AxisParam::Delta, 0.3, 0.7, 21), omega_axis()],
            vec![Quantity::S_EE],
        ),
        "fig5a" => (
            ModelParams {
                g: 0.0008,
                ..asymmetric()
            },
            vec![
                AxisSpec::list(AxisParam::Temperature, &[0.0, 0.5, 1.0, 1.5, 2.0]),
                epsilon_axis(),
            ],
            vec![Quantity::S_EE],
        ),
        "fig5b" | "fig5c" => (
            asymmetric(),
            vec![AxisSpec::list(AxisParam::G, &[0.0, 0.1, 0.2, 0.4]), epsilon_axis()],
            vec![if name == "fig5b" {
                Quantity::S_EE
            } else {
                Quantity::S_EB
            }],
        ),
        "fig6a" => (symmetric(), fig6_axes(), vec![Quantity::S_BB]),
        "fig6b" => (symmetric(), fig6_axes(), vec![Quantity::FanoQ, Quantity::QuadMin]),
        "fig6c" => (symmetric(), fig6_axes(), vec![Quantity::S_EB]),
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown preset '{other}' (known: {})",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    let mut spec = SweepSpec::new(base, axes, quantities);
    spec.preset = Some(name.to_string());
    Ok(spec)
}
