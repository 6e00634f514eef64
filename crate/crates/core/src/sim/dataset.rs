//! Synthetic convex tasks standing in for a real training set.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{GcError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    /// Two Gaussian clouds, labels in {0, 1}, cross-entropy loss.
    Logistic,
    /// Linear model plus Gaussian noise, half squared error.
    LeastSquares,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DatasetSpec {
    /// Training points d.
    pub points: usize,
    /// Feature dimension p.
    pub dim: usize,
    /// Logistic: label flip probability. Least squares: noise std.
    pub noise: f64,
    pub task: Task,
    pub test_points: usize,
    /// Distance between the two class means (logistic only).
    pub separation: f64,
    pub seed: u64,
}

impl Default for DatasetSpec {
    fn default() -> Self {
        DatasetSpec { points: 2000, dim: 10, noise: 0.05, task: Task::Logistic, test_points: 1000, separation: 2.0, seed: 7 }
    }
}

#[derive(Clone, Debug)]
pub struct Dataset {
    pub task: Task,
    pub dim: usize,
    pub train_x: Vec<Vec<f64>>,
    pub train_y: Vec<f64>,
    pub test_x: Vec<Vec<f64>>,
    pub test_y: Vec<f64>,
}

impl Dataset {
    pub fn generate(spec: &DatasetSpec) -> Result<Self> {
        if spec.points == 0 || spec.dim == 0 {
            return Err(GcError::Config("dataset needs points > 0 and dim > 0".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let p = spec.dim;
        let gauss = |rng: &mut ChaCha8Rng| -> f64 { StandardNormal.sample(rng) };
        let (train_x, train_y, test_x, test_y) = match spec.task {
            Task::Logistic => {
                let mean: Vec<f64> = (0..p).map(|_| gauss(&mut rng)).collect();
                let norm = mean.iter().map(|v| v * v).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
                let mean: Vec<f64> = mean.iter().map(|v| v / norm * spec.separation / 2.0).collect();
                let mut draw = |count: usize| {
                    let mut xs = Vec::with_capacity(count);
                    let mut ys = Vec::with_capacity(count);
                    for i in 0..count {
                        let label = (i % 2) as f64;
                        let sign = 2.0 * label - 1.0;
                        xs.push(mean.iter().map(|m| sign * m + gauss(&mut rng)).collect::<Vec<_>>());
                        let flip = rng.random::<f64>() < spec.noise;
                        ys.push(if flip { 1.0 - label } else { label });
                    }
                    (xs, ys)
                };
                let (a, b) = draw(spec.points);
                let (c, d) = draw(spec.test_points);
                (a, b, c, d)
            }
            Task::LeastSquares => {
                let truth: Vec<f64> = (0..p).map(|_| gauss(&mut rng)).collect();
                let mut draw = |count: usize| {
                    let xs: Vec<Vec<f64>> = (0..count).map(|_| (0..p).map(|_| gauss(&mut rng)).collect()).collect();
                    let ys = xs.iter().map(|x| dot(x, &truth) + spec.noise * gauss(&mut rng)).collect();
                    (xs, ys)
                };
                let (a, b) = draw(spec.points);
                let (c, d) = draw(spec.test_points);
                (a, b, c, d)
            }
        };
        Ok(Dataset { task: spec.task, dim: p, train_x, train_y, test_x, test_y })
    }

    pub fn len(&self) -> usize {
        self.train_x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.train_x.is_empty()
    }

    fn point_loss(&self, x: &[f64], y: f64, beta: &[f64]) -> f64 {
        let z = dot(x, beta);
        match self.task {
            // log(1 + e^z) − y z, written to avoid overflow
            Task::Logistic => z.max(0.0) + (-z.abs()).exp().ln_1p() - y * z,
            Task::LeastSquares => 0.5 * (z - y) * (z - y),
        }
    }

    /// d loss / d z at one point.
    fn residual(&self, x: &[f64], y: f64, beta: &[f64]) -> f64 {
        let z = dot(x, beta);
        match self.task {
            Task::Logistic => sigmoid(z) - y,
            Task::LeastSquares => z - y,
        }
    }

    /// Training objective: mean point loss over all d points.
    pub fn loss(&self, beta: &[f64]) -> f64 {
        let total: f64 = self.train_x.iter().zip(&self.train_y).map(|(x, &y)| self.point_loss(x, y, beta)).sum();
        total / self.len() as f64
    }

    pub fn test_loss(&self, beta: &[f64]) -> f64 {
        let total: f64 = self.test_x.iter().zip(&self.test_y).map(|(x, &y)| self.point_loss(x, y, beta)).sum();
        total / self.test_x.len().max(1) as f64
    }

    /// Held-out classification accuracy; `None` for least squares.
    pub fn accuracy(&self, beta: &[f64]) -> Option<f64> {
        if self.task != Task::Logistic || self.test_x.is_empty() {
            return None;
        }
        let hits = self.test_x.iter().zip(&self.test_y).filter(|(x, &y)| (dot(x, beta) > 0.0) == (y == 1.0)).count();
        Some(hits as f64 / self.test_x.len() as f64)
    }

    /// Partial gradient of partition j out of k equal contiguous slices,
    /// scaled by 1/d so the k partial gradients add up to the gradient of
    /// `loss`.
    pub fn partial_gradient(&self, j: usize, k: usize, beta: &[f64]) -> Vec<f64> {
        let size = self.len() / k;
        let mut g = vec![0.0; self.dim];
        for i in j * size..(j + 1) * size {
            let res = self.residual(&self.train_x[i], self.train_y[i], beta);
            for (gv, xv) in g.iter_mut().zip(&self.train_x[i]) {
                *gv += res * xv;
            }
        }
        let d = self.len() as f64;
        g.iter_mut().for_each(|v| *v /= d);
        g
    }

    /// Smoothness constant of `loss`: the top eigenvalue of XᵀX/d (times 1/4
    /// for the logistic loss), by power iteration.
    pub fn smoothness(&self) -> f64 {
        let p = self.dim;
        let mut v = vec![1.0 / (p as f64).sqrt(); p];
        let mut lambda = 0.0;
        for _ in 0..200 {
            let mut w = vec![0.0; p];
            for x in &self.train_x {
                let c = dot(x, &v);
                for (wv, xv) in w.iter_mut().zip(x) {
                    *wv += c * xv;
                }
            }
            w.iter_mut().for_each(|a| *a /= self.len() as f64);
            let norm = w.iter().map(|a| a * a).sum::<f64>().sqrt();
            if norm == 0.0 {
                return 0.0;
            }
            let next: Vec<f64> = w.iter().map(|a| a / norm).collect();
            let converged = (norm - lambda).abs() <= 1e-12 * norm;
            lambda = norm;
            v = next;
            if converged {
                break;
            }
        }
        match self.task {
            Task::Logistic => lambda / 4.0,
            Task::LeastSquares => lambda,
        }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}
