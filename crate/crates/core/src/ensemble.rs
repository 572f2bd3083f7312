//! Monte Carlo experiments over the random codes `C beta` and `hat C beta`.
//!
//! Only `beta` is drawn: `alpha C beta = C beta` for any unit `alpha` since `C`
//! is a left ideal, so sampling `alpha` as well changes nothing.

use std::collections::BTreeMap;
use std::fmt::{self, Write};
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dihedral::{
    code_c, code_hat_c, ell_c, right_translate_code, sample_unit, DecompositionCache,
    DihedralDecomposition, DihedralElem,
};
use crate::error::{Error, Result};
use crate::gf::{make_field, FieldSpec};
use crate::lincode::{
    duality_flags, min_weight, scan_weights, weight_threshold, DualityFlags, LinearCode, MinWeight,
};
use crate::ntheory::{self, AdmissibleN, BoundEstimate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CodeKind {
    /// `C`, dimension `n - 1`.
    #[serde(rename = "C")]
    C,
    /// `hat C`, dimension `n`.
    #[serde(rename = "hatC")]
    HatC,
}

impl FromStr for CodeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "C" | "c" => Ok(CodeKind::C),
            "hatC" | "hatc" | "hat-c" => Ok(CodeKind::HatC),
            _ => Err(Error::Parse(format!("unknown code kind '{s}' (C or hatC)"))),
        }
    }
}

impl fmt::Display for CodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CodeKind::C => "C",
            CodeKind::HatC => "hatC",
        })
    }
}

/// Base code of the given kind.
pub fn base_code(decomp: &DihedralDecomposition, kind: CodeKind) -> Result<LinearCode> {
    match kind {
        CodeKind::C => code_c(decomp),
        CodeKind::HatC => code_hat_c(decomp),
    }
}

/// The duality statement that holds for every translate in a regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// Characteristic 2, `hat C beta`.
    SelfDual,
    /// Characteristic 2, `C beta`, a subcode of the self-dual `hat C beta`.
    SelfOrthogonal,
    /// Odd characteristic, odd `ord_n(q)`, `C beta`.
    MaximalSelfOrthogonal,
    /// Odd characteristic, `-1` a power of `q` mod `n`, `hat C beta`.
    Lcd,
    /// Nothing is claimed.
    Unconstrained,
}

impl Regime {
    pub fn of(n: u64, field: &FieldSpec, kind: CodeKind) -> Result<Regime> {
        let q = field.q() as u64;
        if field.p() == 2 {
            return Ok(match kind {
                CodeKind::HatC => Regime::SelfDual,
                CodeKind::C => Regime::SelfOrthogonal,
            });
        }
        let ord_odd = ntheory::ord_mod(q, n)? % 2 == 1;
        Ok(match kind {
            CodeKind::C if ord_odd => Regime::MaximalSelfOrthogonal,
            CodeKind::HatC if ntheory::minus_one_in_powers(q, n)? => Regime::Lcd,
            _ => Regime::Unconstrained,
        })
    }

    /// Checks `flags` for a code of dimension `dim` and length `2n`.
    pub fn audit(
        &self,
        flags: &DualityFlags,
        dim: usize,
        n: usize,
    ) -> std::result::Result<(), String> {
        let ok = match self {
            Regime::SelfDual => flags.self_dual && dim == n,
            Regime::SelfOrthogonal => flags.self_orthogonal,
            Regime::MaximalSelfOrthogonal => {
                flags.maximal_self_orthogonal == Some(true) && dim == n - 1
            }
            Regime::Lcd => flags.lcd && dim == n,
            Regime::Unconstrained => true,
        };
        if ok {
            Ok(())
        } else {
            Err(format!("expected {self:?} with dim {dim}, got {flags:?}"))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub n: u64,
    pub p: u64,
    pub e: u32,
    pub kind: CodeKind,
    pub delta: f64,
    pub trials: usize,
    pub seed: u64,
    /// Exhaustive weight scans only for codes with at most this many words.
    pub min_weight_budget: u64,
}

impl EnsembleConfig {
    pub fn q(&self) -> u64 {
        self.p.pow(self.e)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::DomainError("trials must be at least 1".into()));
        }
        let q = self.q() as f64;
        if !(self.delta > 0.0 && self.delta < 1.0 - 1.0 / q) {
            return Err(Error::DomainError(format!(
                "delta = {} outside (0, 1 - 1/q)",
                self.delta
            )));
        }
        Ok(())
    }
}

/// SplitMix64 output for `index` under `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub index: usize,
    pub beta_seed: u64,
    pub dim: usize,
    pub min_weight: MinWeight,
    /// `Delta <= delta`. Decided by an actual codeword, so an inexact
    /// weight can only under-report hits.
    pub delta_hit: bool,
    /// Nonzero codewords of relative weight at most `delta`, when enumerable.
    pub x_count: Option<u64>,
    pub flags: DualityFlags,
    /// `dim(FG c) / 2` for the minimum-weight word found.
    pub min_word_ell: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleReport {
    pub config: EnsembleConfig,
    pub regime: Regime,
    pub lambda: u64,
    pub margin: f64,
    pub theoretical_bound: BoundEstimate<f64>,
    pub per_trial: Vec<TrialResult>,
    /// Fraction of trials with `Delta <= delta`.
    pub empirical_pr_le_delta: f64,
    pub exact_trials: usize,
    /// Trials by their `x_count`, over trials where it is known.
    pub x_count_distribution: BTreeMap<u64, usize>,
}

pub const CSV_HEADER: &str = "trial,beta_seed,dim,min_weight,exact,delta_hit,x_count,hull_dim,self_orthogonal,self_dual,lcd,maximal_self_orthogonal,min_word_ell";

impl EnsembleReport {
    /// One row per trial under [`CSV_HEADER`]. Unknown values are empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{CSV_HEADER}").unwrap();
        for t in &self.per_trial {
            let opt = |x: Option<String>| x.unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                t.index,
                t.beta_seed,
                t.dim,
                t.min_weight.weight(),
                t.min_weight.is_exact(),
                t.delta_hit,
                opt(t.x_count.map(|x| x.to_string())),
                t.flags.hull_dim,
                t.flags.self_orthogonal,
                t.flags.self_dual,
                t.flags.lcd,
                opt(t.flags.maximal_self_orthogonal.map(|x| x.to_string())),
                t.min_word_ell,
            )
            .unwrap();
        }
        out
    }
}

fn run_trial(
    decomp: &DihedralDecomposition,
    base: &LinearCode,
    cfg: &EnsembleConfig,
    regime: Regime,
    index: usize,
) -> Result<TrialResult> {
    let beta_seed = derive_seed(cfg.seed, index as u64);
    let beta = sample_unit(decomp, beta_seed);
    let code = right_translate_code(base, &beta, decomp)?;
    let flags = duality_flags(&code);
    regime.audit(&flags, code.dim(), decomp.n).map_err(|m| {
        Error::AuditFailure(format!(
            "n = {}, q = {}, trial {index} (beta seed {beta_seed}): {m}",
            cfg.n,
            cfg.q()
        ))
    })?;
    let threshold = weight_threshold(code.length(), cfg.delta);
    let budget = cfg.min_weight_budget as u128;
    let (mw, x_count) = match scan_weights(&code, budget) {
        Ok(scan) => {
            let weight = scan.min_weight().expect("translate of a nonzero code");
            let x = scan.count_at_most(threshold) - 1;
            let witness = scan.witness.expect("witness recorded with the minimum");
            (MinWeight::Exact { weight, witness }, Some(x))
        }
        Err(Error::BudgetExceeded(_)) => (min_weight(&code, budget)?, None),
        Err(e) => return Err(e),
    };
    let min_word_ell = ell_c(decomp, &DihedralElem::from_flat(mw.witness()));
    Ok(TrialResult {
        index,
        beta_seed,
        dim: code.dim(),
        delta_hit: mw.weight() <= threshold,
        min_weight: mw,
        x_count,
        flags,
        min_word_ell,
    })
}

/// Duality audit of `trials` translates, without weight computations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualityAudit {
    pub n: u64,
    pub q: u64,
    pub kind: CodeKind,
    pub regime: Regime,
    pub trials: usize,
    pub seed: u64,
    /// Trials whose translate satisfies the regime's statement.
    pub passed: usize,
    pub dims: Vec<usize>,
    pub flags: Vec<DualityFlags>,
}

impl DualityAudit {
    pub fn all_passed(&self) -> bool {
        self.passed == self.trials
    }
}

/// Translates `base beta_i` for `trials` seeded units, each checked against
/// the regime. Failures are counted, not raised.
pub fn audit_duality(
    decomp: &DihedralDecomposition,
    kind: CodeKind,
    trials: usize,
    seed: u64,
) -> Result<DualityAudit> {
    let n = decomp.n as u64;
    let regime = Regime::of(n, &decomp.field, kind)?;
    let base = base_code(decomp, kind)?;
    let results = (0..trials)
        .into_par_iter()
        .map(|i| {
            let beta = sample_unit(decomp, derive_seed(seed, i as u64));
            let code = right_translate_code(&base, &beta, decomp)?;
            let flags = duality_flags(&code);
            let ok = regime.audit(&flags, code.dim(), decomp.n).is_ok();
            Ok((code.dim(), flags, ok))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DualityAudit {
        n,
        q: decomp.field.q() as u64,
        kind,
        regime,
        trials,
        seed,
        passed: results.iter().filter(|r| r.2).count(),
        dims: results.iter().map(|r| r.0).collect(),
        flags: results.iter().map(|r| r.1).collect(),
    })
}

pub fn run_ensemble(cfg: &EnsembleConfig) -> Result<EnsembleReport> {
    run_ensemble_with(cfg, &DecompositionCache::new())
}

pub fn run_ensemble_with(
    cfg: &EnsembleConfig,
    cache: &DecompositionCache,
) -> Result<EnsembleReport> {
    cfg.validate()?;
    let field = make_field(cfg.p, cfg.e)?;
    let decomp = cache.get(cfg.n, &field)?;
    run_on(&decomp, &field, cfg)
}

fn run_on(
    decomp: &Arc<DihedralDecomposition>,
    field: &Arc<FieldSpec>,
    cfg: &EnsembleConfig,
) -> Result<EnsembleReport> {
    let q = cfg.q();
    let regime = Regime::of(cfg.n, field, cfg.kind)?;
    let base = base_code(decomp, cfg.kind)?;
    let per_trial = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial(decomp, &base, cfg, regime, i))
        .collect::<Result<Vec<_>>>()?;
    let lambda = decomp.lambda;
    let margin = ntheory::margin_from_lambda(cfg.n, q, lambda, cfg.delta)?;
    let theoretical_bound = match cfg.kind {
        CodeKind::C => ntheory::bound_rate_half_minus_from(q, lambda, margin),
        CodeKind::HatC => ntheory::bound_rate_half_from(q, lambda, margin),
    };
    let hits = per_trial.iter().filter(|t| t.delta_hit).count();
    let mut x_count_distribution = BTreeMap::new();
    for t in &per_trial {
        if let Some(x) = t.x_count {
            *x_count_distribution.entry(x).or_insert(0) += 1;
        }
    }
    Ok(EnsembleReport {
        config: cfg.clone(),
        regime,
        lambda,
        margin,
        theoretical_bound,
        empirical_pr_le_delta: hits as f64 / per_trial.len() as f64,
        exact_trials: per_trial.iter().filter(|t| t.min_weight.is_exact()).count(),
        per_trial,
        x_count_distribution,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendRow {
    pub n: u64,
    pub lambda: u64,
    pub margin: f64,
    /// Fraction of trials with `Delta > delta`.
    pub empirical_pr_gt_delta: f64,
    pub bound: f64,
    pub bound_log_q: f64,
    pub vacuous: bool,
    pub exact_trials: usize,
    pub trials: usize,
}

pub const TREND_CSV_HEADER: &str =
    "n,lambda,margin,empirical_pr_gt_delta,bound,bound_log_q,vacuous,exact_trials,trials";

pub fn trend_to_csv(rows: &[TrendRow]) -> String {
    let mut out = String::new();
    writeln!(out, "{TREND_CSV_HEADER}").unwrap();
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.n,
            r.lambda,
            r.margin,
            r.empirical_pr_gt_delta,
            r.bound,
            r.bound_log_q,
            r.vacuous,
            r.exact_trials,
            r.trials
        )
        .unwrap();
    }
    out
}

/// One ensemble per length in `sequence`, all with the same field, kind and
/// `delta`. The seed for length `n` is derived from `seed` and `n`.
#[allow(clippy::too_many_arguments)]
pub fn trend_experiment(
    kind: CodeKind,
    p: u64,
    e: u32,
    delta: f64,
    sequence: &[AdmissibleN],
    trials_per_n: usize,
    seed: u64,
    min_weight_budget: u64,
) -> Result<Vec<TrendRow>> {
    let cache = DecompositionCache::new();
    sequence
        .iter()
        .map(|a| {
            let cfg = EnsembleConfig {
                n: a.n,
                p,
                e,
                kind,
                delta,
                trials: trials_per_n,
                seed: derive_seed(seed, a.n),
                min_weight_budget,
            };
            let rep = run_ensemble_with(&cfg, &cache)?;
            Ok(TrendRow {
                n: a.n,
                lambda: rep.lambda,
                margin: rep.margin,
                empirical_pr_gt_delta: 1.0 - rep.empirical_pr_le_delta,
                bound: rep.theoretical_bound.value,
                bound_log_q: rep.theoretical_bound.log_q,
                vacuous: rep.theoretical_bound.vacuous,
                exact_trials: rep.exact_trials,
                trials: trials_per_n,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: u64, p: u64, kind: CodeKind, trials: usize) -> EnsembleConfig {
        EnsembleConfig {
            n,
            p,
            e: 1,
            kind,
            delta: 0.2,
            trials,
            seed: 42,
            min_weight_budget: 1 << 20,
        }
    }

    #[test]
    fn char2_hat_c_all_self_dual() {
        let r = run_ensemble(&cfg(7, 2, CodeKind::HatC, 20)).unwrap();
        assert_eq!(r.regime, Regime::SelfDual);
        assert!(r.per_trial.iter().all(|t| t.flags.self_dual));
        assert!((0.0..=1.0).contains(&r.empirical_pr_le_delta));
    }

    #[test]
    fn gf3_n5_hat_c_lcd() {
        let r = run_ensemble(&cfg(5, 3, CodeKind::HatC, 20)).unwrap();
        assert_eq!(r.regime, Regime::Lcd);
        assert!(r.per_trial.iter().all(|t| t.flags.lcd && t.dim == 5));
    }

    #[test]
    fn x_count_agrees_with_min_weight() {
        let r = run_ensemble(&cfg(7, 2, CodeKind::C, 10)).unwrap();
        for t in &r.per_trial {
            assert_eq!(t.delta_hit, t.x_count.unwrap() >= 1);
        }
    }

    #[test]
    fn rejects_bad_config() {
        let mut c = cfg(7, 2, CodeKind::C, 0);
        assert!(matches!(c.validate(), Err(Error::DomainError(_))));
        c.trials = 1;
        c.delta = 0.5;
        assert!(matches!(c.validate(), Err(Error::DomainError(_))));
    }

    #[test]
    fn derived_seeds_differ() {
        let s: std::collections::HashSet<u64> = (0..1000).map(|i| derive_seed(7, i)).collect();
        assert_eq!(s.len(), 1000);
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("hatC".parse::<CodeKind>().unwrap(), CodeKind::HatC);
        assert_eq!(CodeKind::C.to_string(), "C");
        assert!("D".parse::<CodeKind>().is_err());
    }
}
