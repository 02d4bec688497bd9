//! Power / type I error simulation for forward selection on blocked OofA
//! designs, and the five-drug case study.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::contrasts::contrast_table;
use crate::design::{all_permutations, BlockOofaDesign};
use crate::error::{Error, Result};
use crate::stats::{forward_select, model_matrix, ModelMatrix, ModelOrder, INTERCEPT};
use crate::DEFAULT_SEED;

/// Mean response of the case study.
pub const CASE_STUDY_MODEL: [(&str, f64); 7] = [
    (INTERCEPT, 23.13),
    ("Z1^l", 0.26),
    ("Z2^l", -3.19),
    ("Z5^l", 1.3),
    ("Z2^q", -3.21),
    ("Z1^lZ5^l", 1.05),
    ("Z2^lZ5^l", 1.82),
];

/// Batch effects of the case study.
pub const CASE_STUDY_BATCH: [(&str, f64); 2] = [("B^l", -4.08), ("B^q", 1.2)];

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub design: BlockOofaDesign,
    /// Number of active position effects.
    pub p: usize,
    pub reps: usize,
    pub alpha: f64,
    pub sigma: f64,
    pub seed: u64,
}

impl SimConfig {
    /// 1000 reps, α = 0.05, σ = 1 and the default seed.
    pub fn new(design: BlockOofaDesign, p: usize) -> Self {
        Self { design, p, reps: 1000, alpha: 0.05, sigma: 1.0, seed: DEFAULT_SEED }
    }

    pub fn validate(&self) -> Result<()> {
        let n_pos = position_term_count(self.design.m());
        let bad = |msg: String| Err(Error::ConfigInvalid(msg));
        if self.p > n_pos {
            return bad(format!("p = {} exceeds the {n_pos} position terms", self.p));
        }
        if self.p == 0 && self.design.k() < 2 {
            return bad("no active effects: p = 0 and the design has a single block".into());
        }
        if self.reps == 0 {
            return bad("reps must be at least 1".into());
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha = {} is not in (0, 1)", self.alpha));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return bad(format!("sigma = {} must be positive", self.sigma));
        }
        if !self.design.validate().is_empty() {
            return bad("design failed validation".into());
        }
        Ok(())
    }
}

/// Linear, quadratic and linear-by-linear terms for `m` components.
fn position_term_count(m: usize) -> usize {
    let quad = if m >= 3 { m } else { 0 };
    m + quad + m * (m - 1) / 2
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RepOutcome {
    pub pw: f64,
    pub ty1: f64,
    pub true_positives: usize,
    pub false_positives: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub p: usize,
    pub reps: usize,
    pub alpha: f64,
    pub sigma: f64,
    pub seed: u64,
    /// Mean power over reps.
    pub pw: f64,
    /// Mean type I error rate over reps.
    pub ty1: f64,
    /// Active effects per rep: block contrasts plus `p`.
    pub n_act: usize,
    /// Inactive position terms per rep.
    pub n_inact: usize,
    pub per_rep: Vec<RepOutcome>,
}

impl SimulationReport {
    pub fn to_csv(&self) -> String {
        format!(
            "p,reps,alpha,sigma,seed,n_act,n_inact,PW,TY1\n{},{},{},{},{},{},{},{},{}\n",
            self.p, self.reps, self.alpha, self.sigma, self.seed, self.n_act, self.n_inact, self.pw, self.ty1
        )
    }

    pub fn per_rep_csv(&self) -> String {
        let mut out = String::from("rep,pw,ty1,true_positives,false_positives\n");
        for (i, r) in self.per_rep.iter().enumerate() {
            out.push_str(&format!("{},{},{},{},{}\n", i + 1, r.pw, r.ty1, r.true_positives, r.false_positives));
        }
        out
    }
}

fn effect_size(rng: &mut ChaCha8Rng, sigma: f64) -> f64 {
    let mag = rng.random_range(2.0..4.0) * sigma;
    if rng.random_bool(0.5) {
        mag
    } else {
        -mag
    }
}

fn one_rep(x: &ModelMatrix, blocks: &[usize], positions: &[usize], cfg: &SimConfig, rep: usize) -> Result<RepOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ rep as u64);
    let mut beta = vec![0.0; x.n_cols()];
    let mut active = vec![false; x.n_cols()];
    for i in sample(&mut rng, positions.len(), cfg.p) {
        let j = positions[i];
        active[j] = true;
        beta[j] = effect_size(&mut rng, cfg.sigma);
    }
    for &j in blocks {
        active[j] = true;
        beta[j] = effect_size(&mut rng, cfg.sigma);
    }
    let mut y = x.predict(&beta);
    for v in &mut y {
        let e: f64 = rng.sample(StandardNormal);
        *v += cfg.sigma * e;
    }
    let fit = forward_select(x, &y, cfg.alpha)?;
    let (mut tp, mut fp) = (0, 0);
    for label in &fit.selected {
        let j = x.index_of(label).expect("selected label comes from the model matrix");
        if active[j] {
            tp += 1;
        } else if !blocks.contains(&j) {
            fp += 1;
        }
    }
    let n_act = blocks.len() + cfg.p;
    let n_inact = positions.len() - cfg.p;
    Ok(RepOutcome {
        pw: tp as f64 / n_act as f64,
        ty1: if n_inact == 0 { 0.0 } else { fp as f64 / n_inact as f64 },
        true_positives: tp,
        false_positives: fp,
    })
}

/// Runs `cfg.reps` independent replications. Rep `r` draws from its own
/// stream seeded with `seed ^ r`, so results do not depend on the thread
/// count.
///
/// Each rep picks `p` active terms from the second-order position terms,
/// activates every block contrast, draws effects from `±U[2σ, 4σ]` and
/// errors from `N(0, σ²)`, then runs forward selection at `alpha`.
pub fn simulate(cfg: &SimConfig) -> Result<SimulationReport> {
    cfg.validate()?;
    let x = model_matrix(&cfg.design, ModelOrder::SecondOrder)?;
    let (blocks, positions): (Vec<usize>, Vec<usize>) = (1..x.n_cols()).partition(|&j| x.labels()[j].starts_with("B^"));
    let per_rep =
        (0..cfg.reps).into_par_iter().map(|r| one_rep(&x, &blocks, &positions, cfg, r)).collect::<Result<Vec<_>>>()?;
    let mean = |f: fn(&RepOutcome) -> f64| per_rep.iter().map(f).sum::<f64>() / cfg.reps as f64;
    Ok(SimulationReport {
        p: cfg.p,
        reps: cfg.reps,
        alpha: cfg.alpha,
        sigma: cfg.sigma,
        seed: cfg.seed,
        pw: mean(|r| r.pw),
        ty1: mean(|r| r.ty1),
        n_act: blocks.len() + cfg.p,
        n_inact: positions.len() - cfg.p,
        per_rep,
    })
}

/// Responses `y = Xβ + ε` with `β` given by the two effect maps (keyed by
/// model-matrix labels) and `ε ~ N(0, σ²)`. `sigma = 0` gives the mean.
pub fn case_study_responses<S: AsRef<str>>(
    design: &BlockOofaDesign,
    model: &[(S, f64)],
    block_effects: &[(S, f64)],
    sigma: f64,
    seed: u64,
) -> Result<Vec<f64>> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::ConfigInvalid(format!("sigma = {sigma} must be non-negative")));
    }
    let x = model_matrix(design, ModelOrder::SecondOrder)?;
    let mut y = vec![0.0; x.n_rows()];
    for (label, b) in model.iter().chain(block_effects) {
        let label = label.as_ref();
        let col = x.column(label).ok_or_else(|| Error::UnknownLabel(label.into()))?;
        y.iter_mut().zip(col).for_each(|(v, c)| *v += b * c);
    }
    if sigma > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for v in &mut y {
            let e: f64 = rng.sample(StandardNormal);
            *v += sigma * e;
        }
    }
    Ok(y)
}

#[derive(Debug, Clone, Copy)]
enum Term {
    Linear(usize),
    Quadratic(usize),
    Interaction(usize, usize),
}

fn parse_component(s: &str, m: usize) -> Option<usize> {
    let j: usize = s.strip_prefix('Z')?.parse().ok()?;
    (1..=m).contains(&j).then_some(j - 1)
}

fn parse_term(label: &str, m: usize) -> Option<Term> {
    if let Some(rest) = label.strip_suffix("^q") {
        return parse_component(rest, m).map(Term::Quadratic);
    }
    let body = label.strip_suffix("^l")?;
    match body.split_once("^lZ") {
        Some((a, b)) => {
            let i = parse_component(a, m)?;
            let j = parse_component(&format!("Z{b}"), m)?;
            (i < j).then_some(Term::Interaction(i, j))
        }
        None => parse_component(body, m).map(Term::Linear),
    }
}

/// Every sequence with its predicted response, best first. Block terms are
/// held at zero. Sequences are position vectors: entry `j` is the position
/// of component `j + 1`.
pub fn rank_sequences<S: AsRef<str>>(effects: &[(S, f64)], m: usize) -> Result<Vec<(Vec<u8>, f64)>> {
    if m > 9 {
        return Err(Error::SizeLimit(m));
    }
    let table = contrast_table(m)?;
    let mut terms = Vec::new();
    let mut intercept = 0.0;
    for (label, b) in effects {
        let label = label.as_ref();
        if label == INTERCEPT {
            intercept += b;
            continue;
        }
        if label.starts_with("B^") {
            continue;
        }
        let term = parse_term(label, m).ok_or_else(|| Error::UnknownLabel(label.into()))?;
        if matches!(term, Term::Quadratic(_)) && m < 3 {
            return Err(Error::UnknownLabel(label.into()));
        }
        terms.push((term, *b));
    }
    let mut ranked: Vec<(Vec<u8>, f64)> = all_permutations(m)
        .into_iter()
        .map(|z| {
            let lin = |j: usize| table.value(1, z[j] as usize);
            let value = intercept
                + terms
                    .iter()
                    .map(|&(t, b)| {
                        b * match t {
                            Term::Linear(j) => lin(j),
                            Term::Quadratic(j) => table.value(2, z[j] as usize),
                            Term::Interaction(i, j) => lin(i) * lin(j),
                        }
                    })
                    .sum::<f64>();
            (z, value)
        })
        .collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(ranked)
}

/// All sequences whose predicted response is within `1e-9` of the maximum,
/// as position vectors in lexicographic order.
pub fn argmax_sequences<S: AsRef<str>>(effects: &[(S, f64)], m: usize) -> Result<Vec<Vec<u8>>> {
    let ranked = rank_sequences(effects, m)?;
    let best = ranked[0].1;
    let tol = 1e-9 * best.abs().max(1.0);
    let mut out: Vec<Vec<u8>> = ranked.into_iter().take_while(|(_, v)| best - v <= tol).map(|(z, _)| z).collect();
    out.sort();
    Ok(out)
}

/// Components (1-based) in the order they are added, from a position vector.
pub fn component_order(z: &[u8]) -> Vec<usize> {
    let mut order = vec![0; z.len()];
    for (j, &pos) in z.iter().enumerate() {
        order[pos as usize - 1] = j + 1;
    }
    order
}

/// `"4,3,2,1,5"` style rendering of a position vector.
pub fn format_sequence(z: &[u8]) -> String {
    z.iter().map(u8::to_string).collect::<Vec<_>>().join(",")
}
