use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Step-size control settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    /// Largest allowed step; `None` leaves it unbounded.
    pub h_max: Option<f64>,
    pub max_steps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { rtol: 1e-10, atol: 1e-12, h_max: None, max_steps: 10_000_000 }
    }
}

/// Counters accumulated by the integrator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Difference between the fifth- and fourth-order weights.
const E: [f64; 7] =
    [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];

/// Dormand–Prince 5(4) with FSAL and output clipped to a prescribed grid.
#[derive(Clone, Debug)]
pub struct DormandPrince {
    pub tolerances: Tolerances,
    pub stats: StepStats,
}

/// What the step hook did to the state.
pub(crate) enum Hook {
    Unchanged,
    Modified,
}

impl DormandPrince {
    pub fn new(tolerances: Tolerances) -> Self {
        DormandPrince { tolerances, stats: StepStats::default() }
    }

    fn error_norm(&self, y: &[f64], ynew: &[f64], err: &[f64]) -> f64 {
        let tol = &self.tolerances;
        y.iter()
            .zip(ynew)
            .zip(err)
            .map(|((a, b), e)| e.abs() / (tol.atol + tol.rtol * a.abs().max(b.abs())))
            .fold(0.0, f64::max)
    }

    fn initial_step<F>(&mut self, f: &F, t: f64, y: &[f64], f0: &[f64]) -> f64
    where
        F: Fn(f64, &[f64], &mut [f64]),
    {
        let tol = &self.tolerances;
        let sc = |v: f64| tol.atol + tol.rtol * v.abs();
        let d0 = y.iter().map(|v| (v / sc(*v)).powi(2)).sum::<f64>().sqrt();
        let d1 = f0.iter().zip(y).map(|(d, v)| (d / sc(*v)).powi(2)).sum::<f64>().sqrt();
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let y1: Vec<f64> = y.iter().zip(f0).map(|(v, d)| v + h0 * d).collect();
        let mut f1 = vec![0.0; y.len()];
        f(t + h0, &y1, &mut f1);
        self.stats.evaluations += 1;
        let d2 = f1.iter().zip(f0).zip(y).map(|((a, b), v)| ((a - b) / sc(*v)).powi(2)).sum::<f64>().sqrt() / h0;
        let h1 = if d1.max(d2) <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / d1.max(d2)).powf(0.2) };
        (100.0 * h0).min(h1)
    }

    /// Integrates from `t_out[0]` through every later time in `t_out`.
    ///
    /// `after_step` sees the state after each accepted step together with the
    /// accepted-step count; `at_sample` is called at each output time. Both may
    /// modify the state.
    pub(crate) fn solve<F, S, O>(
        &mut self,
        f: F,
        y0: &[f64],
        t_out: &[f64],
        mut after_step: S,
        mut at_sample: O,
    ) -> Result<()>
    where
        F: Fn(f64, &[f64], &mut [f64]),
        S: FnMut(&mut [f64], usize) -> Hook,
        O: FnMut(f64, &mut [f64]),
    {
        let n = y0.len();
        let Some(&t0) = t_out.first() else { return Ok(()) };
        let mut t = t0;
        let mut y = y0.to_vec();
        at_sample(t, &mut y);
        let mut k: Vec<Vec<f64>> = vec![vec![0.0; n]; 7];
        f(t, &y, &mut k[0]);
        self.stats.evaluations += 1;
        let t_end = *t_out.last().unwrap();
        if t_end <= t0 {
            return Ok(());
        }
        let mut h = self.initial_step(&f, t, &y, &k[0]);
        if let Some(hm) = self.tolerances.h_max {
            h = h.min(hm);
        }
        let mut ystage = vec![0.0; n];
        let mut ynew = vec![0.0; n];
        let mut err = vec![0.0; n];
        let mut next = 1;
        let mut steps = 0usize;
        let mut last_rejected = false;
        while next < t_out.len() {
            let target = t_out[next];
            let h_min = 16.0 * f64::EPSILON * t.abs().max(1.0);
            if h < h_min {
                return Err(Error::StepUnderflow { t, h });
            }
            steps += 1;
            if steps > self.tolerances.max_steps {
                return Err(Error::StepUnderflow { t, h });
            }
            let hits = t + h >= target - h_min;
            let step = if hits { target - t } else { h };
            for s in 1..7 {
                for i in 0..n {
                    let mut acc = y[i];
                    for (j, kj) in k.iter().enumerate().take(s) {
                        acc += step * A[s][j] * kj[i];
                    }
                    ystage[i] = acc;
                }
                let (_, rest) = k.split_at_mut(s);
                f(t + C[s] * step, &ystage, &mut rest[0]);
                self.stats.evaluations += 1;
            }
            ynew.copy_from_slice(&ystage);
            for i in 0..n {
                err[i] = step * (0..7).map(|s| E[s] * k[s][i]).sum::<f64>();
            }
            let en = self.error_norm(&y, &ynew, &err);
            if !en.is_finite() {
                h *= 0.2;
                self.stats.rejected += 1;
                last_rejected = true;
                continue;
            }
            let mut factor = if en == 0.0 { 5.0 } else { 0.9 * en.powf(-0.2) };
            factor = factor.clamp(0.2, 5.0);
            if en > 1.0 {
                self.stats.rejected += 1;
                h = step * factor.min(1.0);
                last_rejected = true;
                continue;
            }
            if last_rejected {
                factor = factor.min(1.0);
            }
            last_rejected = false;
            self.stats.accepted += 1;
            t = if hits { target } else { t + step };
            y.copy_from_slice(&ynew);
            let fsal = k.pop().unwrap();
            k.insert(0, fsal);
            let mut dirty = matches!(after_step(&mut y, self.stats.accepted), Hook::Modified);
            if hits {
                at_sample(t, &mut y);
                dirty = true;
                next += 1;
            }
            if dirty {
                f(t, &y, &mut k[0]);
                self.stats.evaluations += 1;
            }
            if !hits || step >= h {
                h = step * factor;
            }
            if let Some(hm) = self.tolerances.h_max {
                h = h.min(hm);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let mut dp = DormandPrince::new(Tolerances::default());
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 * 0.5).collect();
        let mut out = Vec::new();
        dp.solve(|_, y, dy| dy[0] = -y[0], &[1.0], &grid, |_, _| Hook::Unchanged, |t, y| out.push((t, y[0]))).unwrap();
        assert_eq!(out.len(), grid.len());
        for (t, y) in out {
            assert!((y - (-t).exp()).abs() < 1e-9);
        }
    }
}
