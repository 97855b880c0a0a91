//! Word-length bound estimates and counting experiments.
//!
//! The caret count M of the reduced grid diagram sandwiches the word
//! length: log2(M) below, M*log2(M) above, up to the quasi-isometry
//! constants (reported with unit constants; the true constants are
//! unknown).  The experiments check the refinement-size bound
//! M + 1 <= (c+1)^dim and the factorial count of elements per grid.

use itertools::Itertools;

use crate::element::Element;
use crate::error::{Error, Result};
use crate::grid::canon;
use crate::pattern::product_pattern;
use crate::tree::CoordTree;

/// Diagram-based word length bounds with unit constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthBounds {
    /// Caret count of the reduced grid diagram.
    pub caret_count: usize,
    /// log2(M); 0 when M <= 1.
    pub lower: f64,
    /// M * log2(M); 0 when M <= 1.
    pub upper: f64,
    /// max coordinate-tree caret count, reported without any assertion
    /// (it does not bound word length).
    pub max_coord_carets: usize,
}

/// Bounds of one element, from its canonical form.
pub fn length_bounds(f: &Element) -> LengthBounds {
    let rgd = canon(f);
    let m = rgd.caret_count();
    let max_coord_carets = rgd.leaf_counts().iter().map(|&l| l - 1).max().unwrap_or(0);
    LengthBounds {
        caret_count: m,
        lower: log2_int(m),
        upper: m as f64 * log2_int(m),
        max_coord_carets,
    }
}

fn log2_int(m: usize) -> f64 {
    if m <= 1 {
        0.0
    } else {
        (m as f64).log2()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: u64,
    /// Caret count of the random input diagram.
    pub input_carets: usize,
    pub caret_count: usize,
    pub lower: f64,
    pub upper: f64,
    pub bound_holds: bool,
}

/// Deterministic, seed-reproducible experiment run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub seed: u64,
    pub trials: u64,
    pub dim: usize,
    pub caret_budget: usize,
    pub records: Vec<TrialRecord>,
    pub violations: u64,
    pub max_caret_count: usize,
    /// Largest observed (M+1) / (c+1)^dim.
    pub max_ratio: f64,
}

impl ExperimentReport {
    /// Recompute the aggregates from the records; must be a no-op.
    pub fn recompute_aggregates(&self) -> (u64, usize, f64) {
        let violations = self.records.iter().filter(|r| !r.bound_holds).count() as u64;
        let max_caret_count = self
            .records
            .iter()
            .map(|r| r.caret_count)
            .max()
            .unwrap_or(0);
        let max_ratio = self
            .records
            .iter()
            .map(|r| ratio(r.caret_count, r.input_carets, self.dim))
            .fold(0.0f64, f64::max);
        (violations, max_caret_count, max_ratio)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "seed {} trials {} dim {} budget {}\n",
            self.seed, self.trials, self.dim, self.caret_budget
        ));
        for r in &self.records {
            out.push_str(&format!(
                "trial {} c {} M {} lower {:.6} upper {:.6} {}\n",
                r.trial,
                r.input_carets,
                r.caret_count,
                r.lower,
                r.upper,
                if r.bound_holds { "ok" } else { "VIOLATION" }
            ));
        }
        out.push_str(&format!(
            "violations {} max_M {} max_ratio {:.6}\n",
            self.violations, self.max_caret_count, self.max_ratio
        ));
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("trial,c,M,lower,upper,verdict\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{:.6},{:.6},{}\n",
                r.trial,
                r.input_carets,
                r.caret_count,
                r.lower,
                r.upper,
                if r.bound_holds { "ok" } else { "violation" }
            ));
        }
        out
    }
}

fn ratio(m: usize, c: usize, dim: usize) -> f64 {
    (m as f64 + 1.0) / ((c as f64 + 1.0).powi(dim as i32))
}

/// For each random element built from a `caret_budget`-caret diagram,
/// check M + 1 <= (c+1)^dim.  Trials derive their own sub-seed from
/// (seed, trial), so reports are reproducible record for record.
pub fn refinement_bound_suite(
    seed: u64,
    trials: u64,
    dim: usize,
    caret_budget: usize,
) -> ExperimentReport {
    let mut records = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let sub_seed = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(trial);
        let f = Element::random(sub_seed, dim, caret_budget);
        let b = length_bounds(&f);
        let c = caret_budget;
        let bound_holds = b.caret_count + 1 <= (c + 1).pow(dim as u32);
        records.push(TrialRecord {
            trial,
            input_carets: c,
            caret_count: b.caret_count,
            lower: b.lower,
            upper: b.upper,
            bound_holds,
        });
    }
    let mut report = ExperimentReport {
        seed,
        trials,
        dim,
        caret_budget,
        records,
        violations: 0,
        max_caret_count: 0,
        max_ratio: 0.0,
    };
    let (violations, max_m, max_ratio) = report.recompute_aggregates();
    report.violations = violations;
    report.max_caret_count = max_m;
    report.max_ratio = max_ratio;
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PermutationCount {
    pub cells: usize,
    /// cells! — the counting lower bound.
    pub expected: u64,
    /// Distinct canonical forms over all cell permutations.
    pub observed: u64,
}

/// Enumerate every permutation of the cells of the given grid, build the
/// element (grid -> same grid, matched by the permutation), and count
/// distinct canonical forms.  Distinct permutations give distinct
/// elements, so `observed` equals `cells!`.
pub fn permutation_count_experiment(parts: &[CoordTree], cap: usize) -> Result<PermutationCount> {
    let (_, _, cells) = product_pattern(parts);
    let n = cells.len();
    if n > cap {
        return Err(Error::CapExceeded(n, cap));
    }
    let expected: u64 = (1..=n as u64).product();
    let mut seen = std::collections::HashSet::new();
    for perm in (0..n).permutations(n) {
        let pairs: Vec<_> = (0..n)
            .map(|k| (cells[k].clone(), cells[perm[k]].clone()))
            .collect();
        let f = Element::new(pairs)?;
        seen.insert(canon(&f));
    }
    Ok(PermutationCount {
        cells: n,
        expected,
        observed: seen.len() as u64,
    })
}
