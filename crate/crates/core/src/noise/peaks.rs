use serde::Serialize;

use super::types::NoiseSpectrum;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    pub omega: f64,
    pub height: f64,
    /// Grid index of the sampled maximum.
    pub index: usize,
}

/// Vertex of the parabola through three points.
fn parabola_vertex(x: [f64; 3], y: [f64; 3]) -> Option<(f64, f64)> {
    let d1 = (y[1] - y[0]) / (x[1] - x[0]);
    let d2 = (y[2] - y[1]) / (x[2] - x[1]);
    let a = (d2 - d1) / (x[2] - x[0]);
    if !(a < 0.0) {
        return None;
    }
    let b = d1 - a * (x[0] + x[1]);
    let xv = -b / (2.0 * a);
    if xv < x[0] || xv > x[2] {
        return None;
    }
    let yv = y[0] + d1 * (xv - x[0]) + a * (xv - x[0]) * (xv - x[1]);
    Some((xv, yv))
}

/// Interior local maxima, refined by a three-point parabola.
pub fn find_peaks_in(omegas: &[f64], values: &[f64]) -> Vec<Peak> {
    let n = omegas.len().min(values.len());
    let mut out = Vec::new();
    if n < 3 {
        return out;
    }
    for k in 1..n - 1 {
        let (l, c, r) = (values[k - 1], values[k], values[k + 1]);
        if !(c > l && c >= r) || !c.is_finite() || !l.is_finite() || !r.is_finite() {
            continue;
        }
        let x = [omegas[k - 1], omegas[k], omegas[k + 1]];
        let (omega, height) = parabola_vertex(x, [l, c, r]).unwrap_or((x[1], c));
        out.push(Peak {
            omega,
            height: height.max(c),
            index: k,
        });
    }
    out
}

pub fn find_peaks(s: &NoiseSpectrum) -> Vec<Peak> {
    find_peaks_in(&s.omegas, &s.values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refines_parabola_exactly() {
        let xs: Vec<f64> = (0..21).map(|k| k as f64 * 0.1).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - (x - 1.234) * (x - 1.234)).collect();
        let p = find_peaks_in(&xs, &ys);
        assert_eq!(p.len(), 1);
        assert!((p[0].omega - 1.234).abs() < 1e-12);
        assert!((p[0].height - 3.0).abs() < 1e-12);
    }

    #[test]
    fn nonuniform_grid() {
        let xs = [0.0, 0.3, 0.5, 1.1, 1.4];
        let ys: Vec<f64> = xs.iter().map(|x| -(x - 0.45f64).powi(2)).collect();
        let p = find_peaks_in(&xs, &ys);
        assert_eq!(p.len(), 1);
        assert!((p[0].omega - 0.45).abs() < 1e-12);
    }

    #[test]
    fn monotone_has_none() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        assert!(find_peaks_in(&xs, &[1.0, 2.0, 3.0, 4.0]).is_empty());
    }
}
