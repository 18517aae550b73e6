use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use super::ode::Hook;
use super::{
    conserved_quantities, euclidean_right_integrals, frame_generator, vector_field, ConservedRecord, ConservedScales,
    Curvature, DormandPrince, GroupElement, ModelParams, MomentumState, StepStats, Tolerances,
};
use crate::{Error, Result};

/// Integration settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegrateOptions {
    pub tolerances: Tolerances,
    /// Spacing of the uniform output grid.
    pub sample_dt: f64,
    /// Frames are re-projected onto the group every this many accepted steps.
    pub project_every: usize,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        IntegrateOptions { tolerances: Tolerances::default(), sample_dt: 0.01, project_every: 100 }
    }
}

/// Sampled solution with per-sample conserved quantities.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Trajectory {
    pub params: ModelParams,
    pub times: Vec<f64>,
    pub states: Vec<MomentumState>,
    pub frames: Option<Vec<GroupElement>>,
    pub conserved: Vec<ConservedRecord>,
    pub stats: StepStats,
}

/// Largest drift of each recorded quantity relative to its term scale.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DriftSummary {
    pub drifts: BTreeMap<String, f64>,
}

impl DriftSummary {
    pub fn max(&self) -> f64 {
        self.drifts.values().copied().fold(0.0, f64::max)
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.drifts.get(name).copied()
    }
}

fn uniform_grid(t0: f64, t1: f64, dt: f64) -> Vec<f64> {
    let n = ((t1 - t0) / dt - 1e-9).ceil().max(0.0) as usize;
    let mut out: Vec<f64> = (0..n).map(|i| t0 + i as f64 * dt).collect();
    out.push(t1);
    out
}

/// Integrates the momentum equations over `t_span`, and `dg/dt = g dH_p` as
/// well when an initial frame is supplied.
pub fn integrate(
    p0: &MomentumState,
    params: &ModelParams,
    t_span: (f64, f64),
    opts: &IntegrateOptions,
    g0: Option<&GroupElement>,
) -> Result<Trajectory> {
    let (t0, t1) = t_span;
    if !(t1.is_finite() && t0.is_finite() && t1 >= t0) {
        return Err(Error::InvalidParams(format!("bad time span {t_span:?}")));
    }
    if !(opts.sample_dt > 0.0) {
        return Err(Error::InvalidParams("sample_dt must be positive".into()));
    }
    if !p0.is_finite() {
        return Err(Error::InvalidParams("non-finite initial state".into()));
    }
    if let Some(g) = g0 {
        if g.k != params.k {
            return Err(Error::Curvature { expected: "frame with the model curvature", got: g.k.value() });
        }
    }
    let with_frame = g0.is_some();
    let k = params.k;
    let dim = if with_frame { 22 } else { 6 };
    let mut y0 = vec![0.0; dim];
    y0[..6].copy_from_slice(&p0.to_array());
    if let Some(g) = g0 {
        let mut g = *g;
        g.project();
        y0[6..].copy_from_slice(g.g.as_slice());
    }
    let params_c = *params;
    let rhs = move |_t: f64, y: &[f64], dy: &mut [f64]| {
        let p = MomentumState::from_slice(y);
        dy[..6].copy_from_slice(&vector_field(&p, &params_c).to_array());
        if y.len() == 22 {
            let g = Matrix4::from_column_slice(&y[6..]);
            dy[6..].copy_from_slice(frame_generator(&g, &p, &params_c).as_slice());
        }
    };
    let project = |y: &mut [f64]| {
        let mut g = GroupElement { g: Matrix4::from_column_slice(&y[6..]), k };
        g.project();
        y[6..].copy_from_slice(g.g.as_slice());
        g
    };
    let grid = uniform_grid(t0, t1, opts.sample_dt);
    let mut times = Vec::with_capacity(grid.len());
    let mut states = Vec::with_capacity(grid.len());
    let mut frames = Vec::new();
    let mut conserved = Vec::with_capacity(grid.len());
    let mut dp = DormandPrince::new(opts.tolerances);
    let every = opts.project_every.max(1);
    dp.solve(
        rhs,
        &y0,
        &grid,
        |y, accepted| {
            if with_frame && accepted % every == 0 {
                project(y);
                Hook::Modified
            } else {
                Hook::Unchanged
            }
        },
        |t, y| {
            let p = MomentumState::from_slice(y);
            let mut rec = conserved_quantities(&p, params);
            if with_frame {
                let g = project(y);
                if k == Curvature::Flat {
                    rec.f = euclidean_right_integrals(&p, &g).ok();
                }
                frames.push(g);
            }
            times.push(t);
            states.push(p);
            conserved.push(rec);
        },
    )?;
    Ok(Trajectory { params: *params, times, states, frames: with_frame.then_some(frames), conserved, stats: dp.stats })
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Elastic-curve points `g(t) e1`, when frames were integrated.
    pub fn elastic_curve(&self) -> Option<Vec<[f64; 4]>> {
        self.frames.as_ref().map(|fs| {
            fs.iter()
                .map(|g| {
                    let x = g.elastic_point();
                    [x[0], x[1], x[2], x[3]]
                })
                .collect()
        })
    }

    /// Largest group-constraint defect over the recorded frames.
    pub fn max_frame_defect(&self) -> Option<f64> {
        self.frames.as_ref().map(|fs| fs.iter().map(|g| g.constraint_defect()).fold(0.0, f64::max))
    }

    /// `max_t |Q(t) − Q(t0)| / s_Q` for each recorded quantity, with `s_Q` the
    /// largest term scale of `Q` along the trajectory.
    pub fn drift(&self) -> DriftSummary {
        let mut out = DriftSummary::default();
        let Some(first) = self.conserved.first() else { return out };
        let scales =
            self.states.iter().map(|p| ConservedScales::at(p, &self.params)).reduce(ConservedScales::max).unwrap();
        let rel = |d: f64, s: f64| if s > 0.0 { d / s } else { d };
        let mut put = |name: &str, d: f64| {
            let e = out.drifts.entry(name.to_string()).or_insert(0.0);
            *e = e.max(d);
        };
        for rec in &self.conserved {
            put("H", rel((rec.h - first.h).abs(), scales.h));
            put("K2", rel((rec.k2 - first.k2).abs(), scales.k2));
            put("K3", rel((rec.k3 - first.k3).abs(), scales.k3));
            if let (Some(a), Some(b)) = (rec.k4sq, first.k4sq) {
                put("K4sq", rel((a - b).abs(), scales.k4sq));
            }
            if let (Some(a), Some(b)) = (rec.f, first.f) {
                for i in 0..3 {
                    put(&format!("F{}", i + 1), rel((a[i] - b[i]).abs(), scales.f));
                }
            }
            if let (Some((c, a)), Some((_, b))) = (rec.case_integral, first.case_integral) {
                put(c.name(), rel((a - b).abs(), scales.case_integral));
            }
        }
        out
    }

    /// CSV with columns `t,h1,h2,h3,H1,H2,H3`, the frame entries `g00..g33`
    /// when present, then the conserved quantities.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,h1,h2,h3,H1,H2,H3");
        if self.frames.is_some() {
            for i in 0..4 {
                for j in 0..4 {
                    write!(s, ",g{i}{j}").unwrap();
                }
            }
        }
        s.push_str(",H,K2,K3");
        let first = self.conserved.first();
        if first.is_some_and(|r| r.k4sq.is_some()) {
            s.push_str(",K4sq");
        }
        if first.is_some_and(|r| r.f.is_some()) {
            s.push_str(",F1,F2,F3");
        }
        if let Some((c, _)) = first.and_then(|r| r.case_integral) {
            write!(s, ",{}", c.name()).unwrap();
        }
        s.push('\n');
        for (i, t) in self.times.iter().enumerate() {
            write!(s, "{t:.16e}").unwrap();
            for v in self.states[i].to_array() {
                write!(s, ",{v:.16e}").unwrap();
            }
            if let Some(fs) = &self.frames {
                for r in 0..4 {
                    for c in 0..4 {
                        write!(s, ",{:.16e}", fs[i].g[(r, c)]).unwrap();
                    }
                }
            }
            let rec = &self.conserved[i];
            write!(s, ",{:.16e},{:.16e},{:.16e}", rec.h, rec.k2, rec.k3).unwrap();
            if let Some(v) = rec.k4sq {
                write!(s, ",{v:.16e}").unwrap();
            }
            if let Some(f) = rec.f {
                write!(s, ",{:.16e},{:.16e},{:.16e}", f[0], f[1], f[2]).unwrap();
            }
            if let Some((_, v)) = rec.case_integral {
                write!(s, ",{v:.16e}").unwrap();
            }
            s.push('\n');
        }
        s
    }
}
