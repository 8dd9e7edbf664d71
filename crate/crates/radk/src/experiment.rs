//! Experiment registry: every two-sided equivalence certification is a named
//! batch job with a JSON-configurable definition, deterministic for a given
//! seed, producing an [`EquivalenceReport`] with per-(sample, t) rows and
//! ratio envelopes.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::concave::FnDomain;
use crate::interp::{self, Couple, Subject};
use crate::norms::{self, LatticeParam};
use crate::rademacher::{self, step_from_law};
use crate::{kfunc, ConcaveFn, Domain, Error, Result, Sequence, StepFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentId {
    Khintchine,
    Identity3,
    Theorem1,
    Holmstedt9,
    Montgomery,
    Example1,
    Example2,
    Remark2,
    Realizer,
    Reiteration18,
    Indices,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 11] = [
        ExperimentId::Khintchine,
        ExperimentId::Identity3,
        ExperimentId::Theorem1,
        ExperimentId::Holmstedt9,
        ExperimentId::Montgomery,
        ExperimentId::Example1,
        ExperimentId::Example2,
        ExperimentId::Remark2,
        ExperimentId::Realizer,
        ExperimentId::Reiteration18,
        ExperimentId::Indices,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentId::Khintchine => "khintchine",
            ExperimentId::Identity3 => "identity3",
            ExperimentId::Theorem1 => "theorem1",
            ExperimentId::Holmstedt9 => "holmstedt9",
            ExperimentId::Montgomery => "montgomery",
            ExperimentId::Example1 => "example1",
            ExperimentId::Example2 => "example2",
            ExperimentId::Remark2 => "remark2",
            ExperimentId::Realizer => "realizer",
            ExperimentId::Reiteration18 => "reiteration18",
            ExperimentId::Indices => "indices",
        }
    }
}

impl std::str::FromStr for ExperimentId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::Config {
                field: "experiment_id",
                message: format!("unknown experiment `{s}`"),
            })
    }
}

impl std::fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientFamily {
    /// i.i.d. standard normal coefficients.
    RandomGaussian,
    /// Gaussian draws with each coordinate zeroed with probability 3/4.
    RandomSparse,
    /// `a_k = 1/k`.
    Harmonic,
    /// An explicit coefficient list.
    Explicit(Vec<f64>),
}

impl CoefficientFamily {
    pub fn is_random(&self) -> bool {
        matches!(self, Self::RandomGaussian | Self::RandomSparse)
    }
}

/// A log-spaced t-grid specification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TGridSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl TGridSpec {
    pub fn build(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.min];
        }
        kfunc::KCurve::log_grid(self.min, self.max, self.points)
    }
}

fn default_t_grid() -> TGridSpec {
    TGridSpec {
        min: 2f64.powi(-4),
        max: 2f64.powi(6),
        points: 33,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment_id: ExperimentId,
    #[serde(default = "default_family")]
    pub coefficient_family: CoefficientFamily,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_t_grid")]
    pub t_grid: TGridSpec,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

fn default_family() -> CoefficientFamily {
    CoefficientFamily::RandomGaussian
}
fn default_n() -> usize {
    8
}
fn default_samples() -> usize {
    50
}

impl ExperimentConfig {
    /// Per-experiment defaults; a bare `{"experiment_id": …}` config runs.
    pub fn default_for(id: ExperimentId) -> Self {
        let mut cfg = Self {
            experiment_id: id,
            coefficient_family: default_family(),
            n: default_n(),
            t_grid: default_t_grid(),
            samples: default_samples(),
            seed: Some(0),
            tolerances: BTreeMap::new(),
            params: BTreeMap::new(),
        };
        match id {
            ExperimentId::Khintchine => {
                cfg.n = 10;
                cfg.samples = 100;
                cfg.params.insert("p".into(), 2.0);
            }
            ExperimentId::Identity3 => {
                cfg.n = 10;
                cfg.samples = 100;
            }
            ExperimentId::Theorem1 => {
                cfg.n = 8;
                cfg.samples = 66;
            }
            ExperimentId::Holmstedt9 => {
                cfg.n = 16;
                cfg.samples = 200;
            }
            ExperimentId::Montgomery => {
                cfg.n = 10;
                cfg.samples = 100;
                cfg.t_grid = TGridSpec {
                    min: 0.1,
                    max: 4.0,
                    points: 25,
                };
                cfg.params.insert("search_cap".into(), 16.0);
            }
            ExperimentId::Example1 => {
                cfg.n = 16;
                cfg.samples = 500;
            }
            ExperimentId::Example2 => {
                cfg.n = 10;
                cfg.samples = 200;
                cfg.params.insert("p".into(), 1.5);
            }
            ExperimentId::Remark2 => {
                cfg.coefficient_family = CoefficientFamily::Harmonic;
                cfg.n = 4096;
                cfg.samples = 1;
                cfg.params.insert("q".into(), 4.0);
                cfg.params.insert("mc_samples".into(), 262_144.0);
            }
            ExperimentId::Realizer => {
                cfg.n = 256;
                cfg.samples = 1;
                cfg.t_grid = TGridSpec {
                    min: 1.0,
                    max: 16.0,
                    points: 33,
                };
            }
            ExperimentId::Reiteration18 => {
                cfg.n = 10;
                cfg.samples = 100;
                cfg.t_grid = TGridSpec {
                    min: 1.0,
                    max: 64.0,
                    points: 25,
                };
                cfg.params.insert("support".into(), 8.0);
            }
            ExperimentId::Indices => {
                cfg.samples = 2;
                cfg.t_grid = TGridSpec {
                    min: 2f64.powi(-30),
                    max: 2f64.powi(-10),
                    points: 21,
                };
            }
        }
        cfg
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn from_json_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn tolerance(&self, key: &str, default: f64) -> f64 {
        self.tolerances.get(key).copied().unwrap_or(default)
    }

    pub fn param(&self, key: &str, default: f64) -> f64 {
        self.params.get(key).copied().unwrap_or(default)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::Config {
                field: "n",
                message: format!("must be ≥ 1, got {}", self.n),
            });
        }
        if self.samples < 1 {
            return Err(Error::Config {
                field: "samples",
                message: "must be ≥ 1".into(),
            });
        }
        let g = &self.t_grid;
        if g.points < 1 || !(g.min > 0.0) || !(g.max >= g.min) || !g.max.is_finite() {
            return Err(Error::Config {
                field: "t_grid",
                message: format!("need 0 < min ≤ max and points ≥ 1, got {g:?}"),
            });
        }
        if self.coefficient_family.is_random() && self.seed.is_none() {
            return Err(Error::Config {
                field: "seed",
                message: "required for randomized coefficient families".into(),
            });
        }
        if let CoefficientFamily::Explicit(v) = &self.coefficient_family {
            if v.is_empty() || v.iter().any(|c| !c.is_finite()) {
                return Err(Error::Config {
                    field: "coefficient_family",
                    message: "explicit list must be nonempty and finite".into(),
                });
            }
            if v.len() != self.n {
                return Err(Error::Config {
                    field: "n",
                    message: format!("n = {} but explicit list has {} entries", self.n, v.len()),
                });
            }
        }
        match self.experiment_id {
            ExperimentId::Khintchine => {
                let p = self.param("p", 2.0);
                if p < 1.0 {
                    return Err(Error::Config {
                        field: "params.p",
                        message: "need p ≥ 1".into(),
                    });
                }
            }
            ExperimentId::Example2 => {
                let p = self.param("p", 1.5);
                if !(1.0 < p && p < 2.0) {
                    return Err(Error::Config {
                        field: "params.p",
                        message: "need 1 < p < 2".into(),
                    });
                }
            }
            ExperimentId::Remark2 => {
                if self.param("q", 4.0) < 1.0 {
                    return Err(Error::Config {
                        field: "params.q",
                        message: "need q ≥ 1".into(),
                    });
                }
            }
            ExperimentId::Realizer
                if self.n < 8 => {
                    return Err(Error::Config {
                        field: "n",
                        message: "realizer needs n ≥ 8".into(),
                    });
                }
            _ => {}
        }
        Ok(())
    }
}

/// One evaluated `(t, sample)` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub t: f64,
    pub sample_index: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

/// An extremal cell together with the coefficients that produced it (empty
/// for function-valued subjects; regenerate via [`reevaluate`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub sample_index: usize,
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub input: Vec<f64>,
}

/// The bound the pass verdict was taken against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub ratio_lo: Option<f64>,
    pub ratio_hi: Option<f64>,
    pub max_over_min: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub experiment_id: ExperimentId,
    /// Full configuration, including truncation metadata (n, family,
    /// samples, seed).
    pub config: ExperimentConfig,
    /// The grid actually used (remark2 probes the single point t = √n).
    pub t_grid: Vec<f64>,
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub witness_min: Witness,
    pub witness_max: Witness,
    pub bounds: Bounds,
    pub notes: Vec<String>,
    pub rows: Vec<Row>,
    pub pass: bool,
}

/// Deterministic coefficients for `(config, sample_index)`.
pub fn coefficients_for(cfg: &ExperimentConfig, sample_index: usize) -> Sequence {
    match &cfg.coefficient_family {
        CoefficientFamily::Explicit(v) => Sequence::new(v.clone()).expect("validated"),
        CoefficientFamily::Harmonic => Sequence::harmonic(cfg.n),
        CoefficientFamily::RandomGaussian => {
            let mut rng = sample_rng(cfg, sample_index);
            let coeffs: Vec<f64> = (0..cfg.n).map(|_| rng.sample(StandardNormal)).collect();
            Sequence::new(coeffs).expect("gaussian draws are finite")
        }
        CoefficientFamily::RandomSparse => {
            let mut rng = sample_rng(cfg, sample_index);
            let mut coeffs: Vec<f64> = (0..cfg.n)
                .map(|_| {
                    let g: f64 = rng.sample(StandardNormal);
                    if rng.gen::<f64>() < 0.75 {
                        0.0
                    } else {
                        g
                    }
                })
                .collect();
            if coeffs.iter().all(|&c| c == 0.0) {
                coeffs[0] = rng.sample(StandardNormal);
                if coeffs[0] == 0.0 {
                    coeffs[0] = 1.0;
                }
            }
            Sequence::new(coeffs).expect("gaussian draws are finite")
        }
    }
}

fn sample_rng(cfg: &ExperimentConfig, sample_index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.unwrap_or(0));
    rng.set_stream(sample_index as u64);
    rng
}

/// Random compactly supported nonnegative step function on the half line
/// (reiteration subjects).
fn random_half_line_step(cfg: &ExperimentConfig, sample_index: usize) -> StepFunction {
    let mut rng = sample_rng(cfg, sample_index);
    let support = cfg.param("support", 8.0);
    let pieces = cfg.n.max(2);
    let mut ends: Vec<f64> = (0..pieces)
        .map(|_| rng.gen_range(0.05..support))
        .collect();
    ends.push(support);
    ends.sort_unstable_by(f64::total_cmp);
    ends.dedup();
    let values: Vec<f64> = (0..ends.len())
        .map(|_| {
            let g: f64 = rng.sample(StandardNormal);
            g.abs() + 0.05
        })
        .collect();
    StepFunction::new(Domain::HalfLine, ends, values).expect("generated endpoints are increasing")
}

fn realizer_target() -> ConcaveFn {
    ConcaveFn::new(FnDomain::HalfLine, true, true, |t| t.min(t.sqrt()))
}

/// Per-sample evaluation over the grid. Returns the rows and any
/// degraded-mode notes.
fn sample_rows(cfg: &ExperimentConfig, idx: usize, grid: &[f64]) -> Result<(Vec<Row>, Vec<String>)> {
    let mut notes = Vec::new();
    let mut rows = Vec::with_capacity(grid.len());
    let mut push = |t: f64, lhs: f64, rhs: f64| -> Result<()> {
        if !(lhs.is_finite() && rhs.is_finite()) || rhs <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "degenerate cell at t = {t}: lhs = {lhs}, rhs = {rhs}"
            )));
        }
        rows.push(Row {
            t,
            sample_index: idx,
            lhs,
            rhs,
            ratio: lhs / rhs,
        });
        Ok(())
    };
    match cfg.experiment_id {
        ExperimentId::Khintchine => {
            let a = coefficients_for(cfg, idx);
            let p = cfg.param("p", 2.0);
            let step = law_step(cfg, &a, &mut notes)?;
            let lhs = norms::lp_norm(&step, p);
            let rhs = norms::seq_lp_norm(&a, 2.0);
            for &t in grid {
                push(t, lhs, rhs)?;
            }
        }
        ExperimentId::Identity3 => {
            let a = coefficients_for(cfg, idx);
            let sum = rademacher::synthesize_exact(&a)?;
            // Both sides come off the same exact integer lattice, so equal
            // integers round to equal floats and the ratio is exactly 1.
            let lhs = sum.exact_law().ess_sup();
            let rhs = sum.exact_law().l1_norm();
            for &t in grid {
                push(t, lhs, rhs)?;
            }
        }
        ExperimentId::Theorem1 => {
            let a = coefficients_for(cfg, idx);
            let step = law_step(cfg, &a, &mut notes)?;
            for &t in grid {
                push(t, kfunc::k_linf_g(&step, t), kfunc::k_l1_l2_seq(&a, t))?;
            }
        }
        ExperimentId::Holmstedt9 => {
            let a = coefficients_for(cfg, idx);
            for &t in grid {
                push(t, rademacher::holmstedt_phi(&a, t), kfunc::k_l1_l2_seq(&a, t))?;
            }
        }
        ExperimentId::Montgomery => {
            let a = coefficients_for(cfg, idx);
            let cap = cfg.param("search_cap", 16.0);
            let rep = rademacher::montgomery_smith_min_a(&a, grid, cap)?;
            let lhs = if rep.minimal_a.is_finite() {
                rep.minimal_a
            } else {
                notes.push(format!(
                    "sample {idx}: search cap {cap} exhausted (witness t = {})",
                    rep.witness.0
                ));
                cap
            };
            for &t in grid {
                push(t, lhs, 1.0)?;
            }
        }
        ExperimentId::Example1 => {
            let a = coefficients_for(cfg, idx);
            let v = interp::kmethod_norm(
                &Subject::Seq(a.clone()),
                Couple::SeqL1L2,
                &LatticeParam::example1(),
            )?;
            let rhs = norms::seq_l1log_norm(&a);
            for &t in grid {
                push(t, v.value, rhs)?;
            }
        }
        ExperimentId::Example2 => {
            let a = coefficients_for(cfg, idx);
            let p = cfg.param("p", 1.5);
            let step = law_step(cfg, &a, &mut notes)?;
            let phi = ConcaveFn::lorentz_log_weight(p);
            let lhs = norms::lorentz_norm(&step, &phi, p);
            let rhs = norms::seq_lp_norm(&a, p);
            for &t in grid {
                push(t, lhs, rhs)?;
            }
        }
        ExperimentId::Remark2 => {
            let a = coefficients_for(cfg, idx);
            let q = cfg.param("q", 4.0);
            let step = law_step(cfg, &a, &mut notes)?;
            for &t in grid {
                push(t, kfunc::k_linf_lq(&step, t, q), kfunc::k_l1_l2_seq(&a, t))?;
            }
        }
        ExperimentId::Realizer => {
            let f = realizer_target();
            let a = interp::realize_kfunctional(&f, cfg.n)?;
            for &t in grid {
                push(t, kfunc::k_l1_l2_seq(&a, t), f.eval(t))?;
            }
        }
        ExperimentId::Reiteration18 => {
            let x = random_half_line_step(cfg, idx);
            let averaged = x.rearranged().unit_averages()?;
            for &t in grid {
                push(
                    t,
                    kfunc::k_l1_l2_seq(&averaged, t),
                    kfunc::k_l1_l2_fun(&x, t),
                )?;
            }
        }
        ExperimentId::Indices => {
            let (f, expected) = index_subject(idx);
            for &t in grid {
                let m = interp::dilation_function(&f, t, 256);
                let local = m.log2() / t.log2();
                push(t, local, expected)?;
            }
        }
    }
    Ok((rows, notes))
}

fn index_subject(idx: usize) -> (ConcaveFn, f64) {
    if idx.is_multiple_of(2) {
        (ConcaveFn::power(FnDomain::HalfLine, 0.5), 0.5)
    } else {
        (ConcaveFn::phi1_unit(), 1.0)
    }
}

/// The law rearrangement `|Ta|*`: exact when `n` is inside the convolution
/// cap, Monte Carlo with a degraded-mode note otherwise.
fn law_step(cfg: &ExperimentConfig, a: &Sequence, notes: &mut Vec<String>) -> Result<StepFunction> {
    if a.len() <= rademacher::EXACT_CAP {
        Ok(rademacher::synthesize_exact(a)?.as_step)
    } else {
        let mc = cfg.param("mc_samples", 262_144.0) as usize;
        notes.push(format!(
            "exact cap exceeded at n = {}; empirical law from {} Monte Carlo samples",
            a.len(),
            mc
        ));
        let law = rademacher::sample_monte_carlo(a, mc, cfg.seed.unwrap_or(0));
        Ok(step_from_law(&law))
    }
}

/// Runs a configured experiment. Deterministic for the given seed; samples
/// evaluate in parallel when enabled, aggregation is an ordered reduction.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<EquivalenceReport> {
    cfg.validate()?;
    let grid = effective_grid(cfg);
    let per_sample = crate::par::map_range(cfg.samples, |idx| sample_rows(cfg, idx, &grid));
    let mut rows = Vec::with_capacity(cfg.samples * grid.len());
    let mut notes = Vec::new();
    for r in per_sample {
        let (mut rs, mut ns) = r?;
        rows.append(&mut rs);
        notes.append(&mut ns);
    }
    if rows.is_empty() {
        return Err(Error::InvalidArgument("experiment produced no rows".into()));
    }
    let extreme = |cmp: &dyn Fn(&Row, &Row) -> bool| -> Row {
        let mut best = rows[0].clone();
        for r in &rows[1..] {
            if cmp(r, &best) {
                best = r.clone();
            }
        }
        best
    };
    let min_row = extreme(&|a, b| a.ratio < b.ratio);
    let max_row = extreme(&|a, b| a.ratio > b.ratio);
    let witness = |r: &Row| -> Witness {
        let input = match cfg.experiment_id {
            ExperimentId::Reiteration18 | ExperimentId::Indices => Vec::new(),
            _ => coefficients_for(cfg, r.sample_index).into_coeffs(),
        };
        Witness {
            sample_index: r.sample_index,
            t: r.t,
            lhs: r.lhs,
            rhs: r.rhs,
            ratio: r.ratio,
            input,
        }
    };
    let ratio_min = min_row.ratio;
    let ratio_max = max_row.ratio;
    let (bounds, pass) = verdict(cfg, ratio_min, ratio_max)?;
    Ok(EquivalenceReport {
        experiment_id: cfg.experiment_id,
        config: cfg.clone(),
        t_grid: grid,
        ratio_min,
        ratio_max,
        witness_min: witness(&min_row),
        witness_max: witness(&max_row),
        bounds,
        notes,
        rows,
        pass,
    })
}

/// remark2 probes the single point `t = √n`; everything else uses the
/// configured grid.
fn effective_grid(cfg: &ExperimentConfig) -> Vec<f64> {
    match cfg.experiment_id {
        ExperimentId::Remark2 => vec![(cfg.n as f64).sqrt()],
        _ => cfg.t_grid.build(),
    }
}

fn verdict(cfg: &ExperimentConfig, ratio_min: f64, ratio_max: f64) -> Result<(Bounds, bool)> {
    let within = |b: &Bounds| -> bool {
        b.ratio_lo.is_none_or(|lo| ratio_min >= lo)
            && b.ratio_hi.is_none_or(|hi| ratio_max <= hi)
            && b.max_over_min.is_none_or(|m| ratio_max / ratio_min <= m)
    };
    let bounds = match cfg.experiment_id {
        ExperimentId::Khintchine => {
            let p = cfg.param("p", 2.0);
            if (p - 2.0).abs() < 1e-12 {
                let tol = cfg.tolerance("p2_tol", 1e-12);
                Bounds {
                    ratio_lo: Some(1.0 - tol),
                    ratio_hi: Some(1.0 + tol),
                    max_over_min: None,
                }
            } else {
                Bounds {
                    ratio_lo: Some(cfg.tolerance("ratio_lo", 0.5)),
                    ratio_hi: Some(cfg.tolerance("ratio_hi", 1.5)),
                    max_over_min: None,
                }
            }
        }
        ExperimentId::Identity3 => {
            let tol = cfg.tolerance("identity_tol", 0.0);
            Bounds {
                ratio_lo: Some(1.0 - tol),
                ratio_hi: Some(1.0 + tol),
                max_over_min: None,
            }
        }
        ExperimentId::Theorem1 => Bounds {
            ratio_lo: None,
            ratio_hi: None,
            max_over_min: Some(cfg.tolerance("max_over_min", 100.0)),
        },
        ExperimentId::Holmstedt9 => Bounds {
            ratio_lo: Some(1.0 - cfg.tolerance("lower_slack", 1e-9)),
            ratio_hi: Some(cfg.tolerance("max_ratio", 8.0)),
            max_over_min: None,
        },
        ExperimentId::Montgomery => Bounds {
            ratio_lo: Some(1.0),
            ratio_hi: Some(cfg.tolerance("a_cap", 10.0)),
            max_over_min: None,
        },
        ExperimentId::Example1 => Bounds {
            ratio_lo: None,
            ratio_hi: Some(cfg.tolerance("max_ratio", 14.0)),
            max_over_min: None,
        },
        ExperimentId::Example2 => Bounds {
            ratio_lo: None,
            ratio_hi: None,
            max_over_min: Some(cfg.tolerance("max_over_min", 50.0)),
        },
        // Divergence across truncations is assessed by comparing reports at
        // different n; a single run only vouches for well-defined ratios.
        ExperimentId::Remark2 => Bounds {
            ratio_lo: Some(0.0),
            ratio_hi: None,
            max_over_min: None,
        },
        ExperimentId::Realizer => Bounds {
            ratio_lo: None,
            ratio_hi: None,
            max_over_min: Some(cfg.tolerance("max_over_min", 10.0)),
        },
        ExperimentId::Reiteration18 => Bounds {
            ratio_lo: None,
            ratio_hi: None,
            max_over_min: Some(cfg.tolerance("max_over_min", 16.0)),
        },
        ExperimentId::Indices => {
            let tol = cfg.tolerance("index_tol", 0.05);
            // The verdict for indices comes from the extrapolated limits, not
            // the raw per-t exponents.
            let mut ok = true;
            for idx in 0..cfg.samples.min(2) {
                let (f, expected) = index_subject(idx);
                let d = interp::dilation_indices(&f);
                ok &= (d.gamma - expected).abs() <= tol;
                if f.domain() == FnDomain::HalfLine {
                    ok &= (d.delta - expected).abs() <= tol;
                }
            }
            return Ok((
                Bounds {
                    ratio_lo: Some(1.0 - 4.0 * tol),
                    ratio_hi: Some(1.0 + 4.0 * tol),
                    max_over_min: None,
                },
                ok,
            ));
        }
    };
    let pass = within(&bounds);
    Ok((bounds, pass))
}

/// Recomputes the `(lhs, rhs)` pair for one `(sample, t)` cell — witness
/// self-consistency relies on the deterministic regeneration of inputs.
pub fn reevaluate(cfg: &ExperimentConfig, sample_index: usize, t: f64) -> Result<(f64, f64)> {
    let grid = effective_grid(cfg);
    let (rows, _) = sample_rows(cfg, sample_index, &grid)?;
    rows.iter()
        .find(|r| r.t == t)
        .map(|r| (r.lhs, r.rhs))
        .ok_or_else(|| Error::InvalidArgument(format!("t = {t} not on the grid")))
}
