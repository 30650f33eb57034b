use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::geometry::{AnchorConfig, CoordVariant};
use crate::graph::{check_planarity, generate_random_udg, Rect};
use crate::planarizer::{build_gtilde_prime, sample_connected_pairs};
use crate::routing::{Router, RouterConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n: usize,
    pub r_values: Vec<f64>,
    pub trials_per_r: usize,
    pub region: Rect,
    pub anchors: AnchorConfig,
    pub route_samples_per_trial: usize,
    pub seed: u64,
    pub coordinate_variant: CoordVariant,
}

/// `0.11, 0.125, ..., 0.215, 0.225`.
pub fn default_r_values() -> Vec<f64> {
    let mut v: Vec<f64> = (0..8).map(|i| 0.11 + 0.015 * f64::from(i)).collect();
    v.push(0.225);
    v
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n: 300,
            r_values: default_r_values(),
            trials_per_r: 1000,
            region: Rect::UNIT,
            anchors: AnchorConfig::unit_square_default(),
            route_samples_per_trial: 30,
            seed: 1,
            coordinate_variant: CoordVariant::TriangleHeight,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: &str| Err(HarnessError::InvalidConfig(m.to_owned()));
        if self.r_values.is_empty() {
            return bad("r_values is empty");
        }
        if self.r_values.iter().any(|&r| !(r.is_finite() && r > 0.0)) {
            return bad("every radius must be positive");
        }
        if self.trials_per_r == 0 {
            return bad("trials_per_r must be at least 1");
        }
        if self.coordinate_variant == CoordVariant::TriangleHeight && !self.anchors.equilateral {
            return bad("height coordinates need equilateral anchors");
        }
        if !self.region.corners().iter().all(|&c| self.anchors.strictly_contains(c)) {
            return bad("region is not strictly inside the anchor triangle");
        }
        Ok(())
    }
}

/// Aggregates for one radius. Stretch and rate fields are `None` when no
/// route contributed to them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub r: f64,
    pub avg_degree_udg: f64,
    pub avg_virtual_edges: f64,
    pub avg_zigzag_stretch: Option<f64>,
    pub avg_greedy_stretch: Option<f64>,
    pub zigzag_success_rate: Option<f64>,
    pub greedy_success_rate: Option<f64>,
    pub avg_ids_broadcast: f64,
    pub planarity_violations: usize,
    pub trials: usize,
    pub route_samples_per_trial: usize,
    pub routes_attempted: usize,
    pub aborted_trials: usize,
}

/// Outcome of one random deployment.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrialResult {
    pub avg_degree: f64,
    pub virtual_edges: usize,
    pub ids_broadcast: usize,
    pub crossings: usize,
    pub aborted: bool,
    pub routes: usize,
    pub zigzag_delivered: usize,
    pub greedy_delivered: usize,
    pub zigzag_stretch_sum: f64,
    pub greedy_stretch_sum: f64,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Sub-seed for trial `trial` of radius index `r_index`.
pub fn trial_seed(seed: u64, r_index: usize, trial: usize) -> u64 {
    splitmix(splitmix(splitmix(seed) ^ r_index as u64) ^ trial as u64)
}

pub fn run_trial(cfg: &ExperimentConfig, r: f64, r_index: usize, trial: usize) -> Result<TrialResult, HarnessError> {
    let seed = trial_seed(cfg.seed, r_index, trial);
    let g = generate_random_udg(cfg.n, r, cfg.region, cfg.anchors, cfg.coordinate_variant, seed)?;
    let mut res = TrialResult { avg_degree: g.average_degree(), ..TrialResult::default() };
    let (overlay, ledger) = match build_gtilde_prime(&g) {
        Ok(built) => built,
        Err(_) => {
            res.aborted = true;
            return Ok(res);
        }
    };
    res.virtual_edges = overlay.virtual_count();
    res.ids_broadcast = ledger.ids_broadcast;
    res.crossings = check_planarity(&g, overlay.edges())?.len();

    let router = Router::new(&overlay, RouterConfig::for_graph(&g)).expect("hop limit is positive");
    for (s, t) in sample_connected_pairs(&g, cfg.route_samples_per_trial, splitmix(seed)) {
        res.routes += 1;
        let direct = g.dist(s, t)?;
        let zz = router.zigzag(s, t).expect("endpoints come from the graph");
        if zz.delivered() {
            res.zigzag_delivered += 1;
            res.zigzag_stretch_sum += zz.euclid_length / direct;
        }
        let gr = router.greedy(s, t).expect("endpoints come from the graph");
        if gr.delivered() {
            res.greedy_delivered += 1;
            res.greedy_stretch_sum += gr.euclid_length / direct;
        }
    }
    Ok(res)
}

fn ratio(num: f64, den: usize) -> Option<f64> {
    (den > 0).then(|| num / den as f64)
}

/// One record per radius, in `r_values` order. Trials run in parallel; the
/// fold over their results runs in trial order, so output depends only on
/// the config.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>, HarnessError> {
    cfg.validate()?;
    cfg.r_values
        .iter()
        .enumerate()
        .map(|(ri, &r)| {
            let trials = (0..cfg.trials_per_r).into_par_iter().map(|t| run_trial(cfg, r, ri, t)).collect::<Result<Vec<_>, _>>()?;
            Ok(aggregate(cfg, r, &trials))
        })
        .collect()
}

fn aggregate(cfg: &ExperimentConfig, r: f64, trials: &[TrialResult]) -> ExperimentRecord {
    let n = trials.len();
    let ok: Vec<&TrialResult> = trials.iter().filter(|t| !t.aborted).collect();
    let sum = |f: fn(&TrialResult) -> f64| ok.iter().map(|t| f(t)).sum::<f64>();
    let routes: usize = ok.iter().map(|t| t.routes).sum();
    let zz: usize = ok.iter().map(|t| t.zigzag_delivered).sum();
    let gr: usize = ok.iter().map(|t| t.greedy_delivered).sum();
    ExperimentRecord {
        r,
        avg_degree_udg: trials.iter().map(|t| t.avg_degree).sum::<f64>() / n as f64,
        avg_virtual_edges: ratio(sum(|t| t.virtual_edges as f64), ok.len()).unwrap_or(0.0),
        avg_zigzag_stretch: ratio(sum(|t| t.zigzag_stretch_sum), zz),
        avg_greedy_stretch: ratio(sum(|t| t.greedy_stretch_sum), gr),
        zigzag_success_rate: ratio(zz as f64, routes),
        greedy_success_rate: ratio(gr as f64, routes),
        avg_ids_broadcast: ratio(sum(|t| t.ids_broadcast as f64), ok.len()).unwrap_or(0.0),
        planarity_violations: ok.iter().map(|t| t.crossings).sum(),
        trials: n,
        route_samples_per_trial: cfg.route_samples_per_trial,
        routes_attempted: routes,
        aborted_trials: n - ok.len(),
    }
}
