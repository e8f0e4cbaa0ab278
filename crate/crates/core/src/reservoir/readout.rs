use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{dot, max_eigenvalue_psd, Lu, Matrix};
use crate::{Error, Result};

/// Linear readout `ŷ = x·w + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReadoutWeights {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub ridge_lambda: f64,
}

impl ReadoutWeights {
    pub fn output(&self, x: &[f64]) -> f64 {
        dot(&self.weights, x) + self.bias
    }

    pub fn weight_norm(&self) -> f64 {
        crate::linalg::norm(&self.weights)
    }
}

fn check_problem(states: &Matrix, targets: &[f64], lambda: f64) -> Result<()> {
    if states.rows() == 0 || states.cols() == 0 {
        return Err(Error::invalid("state matrix is empty"));
    }
    if states.rows() != targets.len() {
        return Err(Error::DimensionMismatch { expected: states.rows(), found: targets.len() });
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::invalid("ridge lambda must be finite and non-negative"));
    }
    if states.as_slice().iter().chain(targets).any(|v| !v.is_finite()) {
        return Err(Error::invalid("states and targets must be finite"));
    }
    Ok(())
}

/// `‖Xw + b − y‖² + λ‖w‖²`.
pub fn objective(states: &Matrix, targets: &[f64], readout: &ReadoutWeights, lambda: f64) -> f64 {
    let mut loss = 0.0;
    for (r, y) in targets.iter().enumerate() {
        let e = readout.output(states.row(r)) - y;
        loss += e * e;
    }
    loss + lambda * dot(&readout.weights, &readout.weights)
}

/// Gradient of [`objective`] with respect to `(w, b)`.
pub fn objective_gradient(
    states: &Matrix,
    targets: &[f64],
    readout: &ReadoutWeights,
    lambda: f64,
) -> (Vec<f64>, f64) {
    let residuals: Vec<f64> =
        targets.iter().enumerate().map(|(r, y)| readout.output(states.row(r)) - y).collect();
    let mut gw = states.tr_mul_vec(&residuals);
    for (g, w) in gw.iter_mut().zip(&readout.weights) {
        *g = 2.0 * *g + 2.0 * lambda * w;
    }
    (gw, 2.0 * residuals.iter().sum::<f64>())
}

/// Closed-form ridge readout with an unpenalized bias.
///
/// Centering the columns removes the bias from the normal equations:
/// `(XcᵀXc + λI)·w = Xcᵀ(y − ȳ)`, then `b = ȳ − x̄·w`.
pub fn train_ridge(states: &Matrix, targets: &[f64], lambda: f64) -> Result<ReadoutWeights> {
    check_problem(states, targets, lambda)?;
    let (n, d) = (states.rows(), states.cols());
    let mut means = vec![0.0; d];
    for r in 0..n {
        for (m, x) in means.iter_mut().zip(states.row(r)) {
            *m += x;
        }
    }
    means.iter_mut().for_each(|m| *m /= n as f64);
    let y_mean = targets.iter().sum::<f64>() / n as f64;

    let mut centered = states.clone();
    for r in 0..n {
        for (x, m) in centered.row_mut(r).iter_mut().zip(&means) {
            *x -= m;
        }
    }
    let mut a = centered.gram();
    for i in 0..d {
        a[(i, i)] += lambda;
    }
    let yc: Vec<f64> = targets.iter().map(|y| y - y_mean).collect();
    let rhs = centered.tr_mul_vec(&yc);
    let lu = Lu::factor(&a).map_err(|_| Error::IllConditioned)?;
    let weights = lu.solve(&rhs);
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::IllConditioned);
    }
    let bias = y_mean - dot(&means, &weights);
    Ok(ReadoutWeights { weights, bias, ridge_lambda: lambda })
}

/// Largest eigenvalue of the objective's Hessian; gradient descent is
/// stable for learning rates below `2 / curvature`.
pub fn gd_objective_curvature(states: &Matrix, lambda: f64) -> f64 {
    let (n, d) = (states.rows(), states.cols());
    let gram = states.gram();
    let col_sums = states.tr_mul_vec(&vec![1.0; n]);
    let mut h = Matrix::zeros(d + 1, d + 1);
    for i in 0..d {
        for j in 0..d {
            h[(i, j)] = 2.0 * gram[(i, j)];
        }
        h[(i, i)] += 2.0 * lambda;
        h[(i, d)] = 2.0 * col_sums[i];
        h[(d, i)] = 2.0 * col_sums[i];
    }
    h[(d, d)] = 2.0 * n as f64;
    max_eigenvalue_psd(&h, 500)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GdFit {
    pub readout: ReadoutWeights,
    /// Objective after each epoch.
    pub objective_history: Vec<f64>,
    pub initial_objective: f64,
}

/// Full-batch gradient descent on the ridge objective, starting from small
/// seeded random weights and zero bias.
pub fn train_gd(
    states: &Matrix,
    targets: &[f64],
    lambda: f64,
    learning_rate: f64,
    epochs: usize,
    seed: u64,
) -> Result<GdFit> {
    check_problem(states, targets, lambda)?;
    if !(learning_rate > 0.0 && learning_rate.is_finite()) {
        return Err(Error::invalid("learning rate must be positive"));
    }
    if epochs == 0 {
        return Err(Error::invalid("at least one epoch is required"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut readout = ReadoutWeights {
        weights: (0..states.cols()).map(|_| rng.gen_range(-0.01..0.01)).collect(),
        bias: 0.0,
        ridge_lambda: lambda,
    };
    let start = objective(states, targets, &readout, lambda);
    let mut history = Vec::with_capacity(epochs);
    for epoch in 0..epochs {
        let (gw, gb) = objective_gradient(states, targets, &readout, lambda);
        for (w, g) in readout.weights.iter_mut().zip(&gw) {
            *w -= learning_rate * g;
        }
        readout.bias -= learning_rate * gb;
        let obj = objective(states, targets, &readout, lambda);
        if !obj.is_finite() || obj > 10.0 * start.max(f64::MIN_POSITIVE) {
            return Err(Error::Diverged { epoch, objective: obj, start });
        }
        history.push(obj);
    }
    Ok(GdFit { readout, objective_history: history, initial_objective: start })
}

pub fn predict(readout: &ReadoutWeights, states: &Matrix) -> Result<Vec<f64>> {
    if states.cols() != readout.weights.len() {
        return Err(Error::DimensionMismatch { expected: readout.weights.len(), found: states.cols() });
    }
    Ok((0..states.rows()).map(|r| readout.output(states.row(r))).collect())
}

/// One ridge readout per class trained on ±1 targets; decisions take the
/// argmax output.
#[derive(Debug, Clone, PartialEq)]
pub struct OneVsRest {
    pub readouts: Vec<ReadoutWeights>,
}

impl OneVsRest {
    pub fn train(states: &Matrix, labels: &[usize], classes: usize, lambda: f64) -> Result<Self> {
        if labels.iter().any(|&l| l >= classes) {
            return Err(Error::invalid("label outside the declared class set"));
        }
        let readouts = (0..classes)
            .map(|c| {
                let t: Vec<f64> = labels.iter().map(|&l| if l == c { 1.0 } else { -1.0 }).collect();
                train_ridge(states, &t, lambda)
            })
            .collect::<Result<_>>()?;
        Ok(Self { readouts })
    }

    pub fn decide(&self, x: &[f64]) -> usize {
        let mut best = (0, f64::NEG_INFINITY);
        for (c, r) in self.readouts.iter().enumerate() {
            let y = r.output(x);
            if y > best.1 {
                best = (c, y);
            }
        }
        best.0
    }

    pub fn classify(&self, states: &Matrix) -> Result<Vec<usize>> {
        let d = self.readouts.first().map_or(0, |r| r.weights.len());
        if states.cols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: states.cols() });
        }
        Ok((0..states.rows()).map(|r| self.decide(states.row(r))).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> (Matrix, Vec<f64>) {
        (Matrix::from_rows(&[vec![1.0], vec![2.0]]), vec![1.0, 2.0])
    }

    #[test]
    fn ridge_solves_toy_problem_exactly() {
        let (x, y) = toy();
        let r = train_ridge(&x, &y, 0.0).unwrap();
        assert!((r.weights[0] - 1.0).abs() < 1e-12);
        assert!(r.bias.abs() < 1e-12);
        let pred = predict(&r, &x).unwrap();
        assert!(pred.iter().zip(&y).all(|(p, t)| (p - t).abs() < 1e-12));
    }

    #[test]
    fn huge_lambda_shrinks_weights_to_zero() {
        let x = Matrix::from_rows(&[vec![1.0, 0.5], vec![2.0, -1.0], vec![0.0, 3.0], vec![-1.0, 1.0]]);
        let y = [1.0, 4.0, -2.0, 0.5];
        let r = train_ridge(&x, &y, 1e9).unwrap();
        assert!(r.weight_norm() < 1e-6);
        assert!((r.bias - 0.875).abs() < 1e-5);
    }

    #[test]
    fn collinear_states_without_penalty_are_ill_conditioned() {
        let x = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0], vec![3.0, 6.0]]);
        let y = [1.0, 2.0, 3.0];
        assert_eq!(train_ridge(&x, &y, 0.0), Err(Error::IllConditioned));
        assert!(train_ridge(&x, &y, 1e-3).is_ok());
    }

    #[test]
    fn gd_matches_closed_form_on_toy() {
        let (x, y) = toy();
        let fit = train_gd(&x, &y, 0.0, 0.1, 500, 1).unwrap();
        assert!((fit.readout.weights[0] - 1.0).abs() < 1e-3);
    }

    #[test]
    fn gd_with_zero_targets_goes_to_zero() {
        let x = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]);
        let fit = train_gd(&x, &[0.0; 3], 0.0, 0.05, 2000, 9).unwrap();
        assert!(fit.readout.weight_norm() < 1e-9);
        assert!(fit.readout.bias.abs() < 1e-9);
    }

    #[test]
    fn gd_objective_is_monotone_at_safe_rate() {
        let x = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, -1.0], vec![0.5, 0.5], vec![2.0, 2.0]]);
        let y = [1.0, -2.0, 0.3, 4.0];
        let lr = 1.0 / (2.0 * gd_objective_curvature(&x, 0.1));
        let fit = train_gd(&x, &y, 0.1, lr, 300, 4).unwrap();
        let mut prev = fit.initial_objective;
        for &o in &fit.objective_history {
            assert!(o <= prev + 1e-12 * prev.abs());
            prev = o;
        }
    }

    #[test]
    fn gd_reports_divergence() {
        let (x, y) = toy();
        assert!(matches!(train_gd(&x, &y, 0.0, 10.0, 100, 0), Err(Error::Diverged { .. })));
    }

    #[test]
    fn predict_checks_dimensions() {
        let r = ReadoutWeights { weights: vec![0.0, 0.0], bias: 3.0, ridge_lambda: 0.0 };
        let x = Matrix::from_rows(&[vec![1.0, 2.0], vec![5.0, -1.0]]);
        assert_eq!(predict(&r, &x).unwrap(), vec![3.0, 3.0]);
        assert!(predict(&r, &Matrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn one_vs_rest_interpolates_separable_classes() {
        let x = Matrix::from_rows(&[
            vec![0.0, 0.0],
            vec![0.1, 0.0],
            vec![5.0, 0.0],
            vec![5.1, 0.2],
            vec![0.0, 5.0],
            vec![0.2, 5.1],
        ]);
        let labels = [0, 0, 1, 1, 2, 2];
        let ovr = OneVsRest::train(&x, &labels, 3, 0.0).unwrap();
        assert_eq!(ovr.classify(&x).unwrap(), labels.to_vec());
    }
}
