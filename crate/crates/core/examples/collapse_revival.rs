//! Left-dot occupation for a resonator prepared in a superposition of number states:
//! closed form next to exact rotating-wave evolution.

use transport_noise::model::{coherent_weights, p_left_analytic, p_left_unitary, ModelParams};

fn main() -> transport_noise::Result<()> {
    let p = ModelParams {
        g: 0.2,
        delta: 0.5,
        ..ModelParams::default()
    };
    let c = coherent_weights(2.0, 12);
    let times: Vec<f64> = (0..=40).map(|k| 2.5 * k as f64).collect();
    let closed = p_left_analytic(&c, &p, &times)?;
    let exact = p_left_unitary(&c, &p, &times, 20)?;
    println!("    t   closed form   exact");
    for k in 0..times.len() {
        println!("{:5.1} {:13.5} {:7.5}", times[k], closed.p_left[k], exact.p_left[k]);
    }
    Ok(())
}
