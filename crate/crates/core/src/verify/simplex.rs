//! Nelder–Mead downhill simplex.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimplexOptions {
    pub max_iterations: usize,
    /// Stop once every vertex lies within this ∞-norm distance of the best.
    pub diameter_tol: f64,
    /// Edge length of the initial axis-aligned simplex.
    pub initial_step: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self { max_iterations: 2000, diameter_tol: 1e-9, initial_step: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

pub fn minimize<F>(mut f: F, x0: &[f64], opts: &SimplexOptions) -> SimplexResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64]| {
        evaluations += 1;
        f(x)
    };

    let mut vertices: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    vertices.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += opts.initial_step;
        vertices.push(v);
    }
    let mut values: Vec<f64> = vertices.iter().map(|v| eval(v)).collect();

    let mut iterations = 0;
    let mut converged = false;
    let mut order: Vec<usize> = (0..=n).collect();
    while iterations < opts.max_iterations {
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let (best, worst, second) = (order[0], order[n], order[n - 1]);

        let diameter = vertices
            .iter()
            .map(|v| v.iter().zip(&vertices[best]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if diameter < opts.diameter_tol {
            converged = true;
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for &idx in &order[..n] {
            for (c, x) in centroid.iter_mut().zip(&vertices[idx]) {
                *c += x;
            }
        }
        centroid.iter_mut().for_each(|c| *c /= n as f64);

        let along =
            |t: f64| -> Vec<f64> { centroid.iter().zip(&vertices[worst]).map(|(c, w)| c + t * (c - w)).collect() };

        let reflected = along(REFLECT);
        let fr = eval(&reflected);
        if fr < values[best] {
            let expanded = along(REFLECT * EXPAND);
            let fe = eval(&expanded);
            if fe < fr {
                vertices[worst] = expanded;
                values[worst] = fe;
            } else {
                vertices[worst] = reflected;
                values[worst] = fr;
            }
            continue;
        }
        if fr < values[second] {
            vertices[worst] = reflected;
            values[worst] = fr;
            continue;
        }
        let (candidate, threshold) =
            if fr < values[worst] { (along(REFLECT * CONTRACT), fr) } else { (along(-CONTRACT), values[worst]) };
        let fc = eval(&candidate);
        if fc < threshold {
            vertices[worst] = candidate;
            values[worst] = fc;
            continue;
        }
        let anchor = vertices[best].clone();
        for &idx in &order[1..] {
            let v: Vec<f64> = anchor.iter().zip(&vertices[idx]).map(|(a, x)| a + SHRINK * (x - a)).collect();
            values[idx] = eval(&v);
            vertices[idx] = v;
        }
    }

    let best = (0..=n).min_by(|&a, &b| values[a].total_cmp(&values[b])).expect("non-empty simplex");
    SimplexResult { x: vertices[best].clone(), value: values[best], iterations, evaluations, converged }
}
