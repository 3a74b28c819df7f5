//! End-to-end checks of the rigid solvable families, and the partition sweep.

use std::time::Instant;

use serde::Serialize;

use crate::algebra::{AlgebraError, LeibnizAlgebra};
use crate::cohomology::{
    is_cohomologically_rigid, is_complete, verify_prop111, CohomologyConfig, CohomologyError,
};
use crate::constructions::{
    build_l_general, build_l_particular, build_n_c, build_r_c, build_r_general, build_r_particular,
    enumerate_partitions, partition_count, CharSeqSpec, ConstructionError, LFamilyParams,
};
use crate::derivations::particular::{Regime, TwoBlock};
use crate::derivations::{
    characteristic_sequence, derivation_space, DerivationError, NilConfig, DEFAULT_CHARSEQ_SAMPLES,
};
use crate::linalg::{LinalgError, SubspaceBasis};
use crate::rational::Rational;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    pub cohomology: CohomologyConfig,
    pub timings: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: DEFAULT_SEED,
            trials: crate::derivations::DEFAULT_NIL_TRIALS,
            cohomology: CohomologyConfig::default(),
            timings: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub params: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn any_failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }
}

/// A step error; guard errors turn into skips, everything else into failures.
enum StepError {
    Guard(String),
    Other(String),
}

impl From<CohomologyError> for StepError {
    fn from(e: CohomologyError) -> Self {
        match e {
            CohomologyError::TooLarge { .. } | CohomologyError::DegreeTooHigh { .. } => StepError::Guard(e.to_string()),
            other => StepError::Other(other.to_string()),
        }
    }
}

macro_rules! other_error {
    ($($t:ty),*) => {$(
        impl From<$t> for StepError {
            fn from(e: $t) -> Self {
                StepError::Other(e.to_string())
            }
        }
    )*};
}

other_error!(ConstructionError, AlgebraError, LinalgError, DerivationError);

/// Outcome of one step before timing is attached.
type Step = Result<(bool, String), StepError>;

struct Runner<'a> {
    cfg: &'a SuiteConfig,
    checks: Vec<Check>,
}

impl Runner<'_> {
    fn run(&mut self, name: &str, step: impl FnOnce() -> Step) {
        let start = Instant::now();
        let (status, detail) = match step() {
            Ok((true, d)) => (Status::Pass, d),
            Ok((false, d)) => (Status::Fail, d),
            Err(StepError::Guard(e)) => (Status::Skipped, e),
            Err(StepError::Other(e)) => (Status::Fail, format!("error: {e}")),
        };
        let elapsed_ms = self.cfg.timings.then(|| start.elapsed().as_millis() as u64);
        self.checks.push(Check { name: name.to_string(), status, detail, elapsed_ms });
    }
}

/// Every assignment of `{0, 1, -1, 2}` to the `2k` parameter slots, thinned
/// to at most `limit` evenly spaced instances.
pub fn l_general_instances(spec: &CharSeqSpec, limit: usize) -> Vec<LFamilyParams> {
    const VALUES: [i64; 4] = [0, 1, -1, 2];
    let k = spec.k();
    let slots = 2 * k;
    let total = 4usize.pow(slots as u32);
    let take = limit.min(total).max(1);
    (0..take)
        .map(|i| {
            let mut code = i * total / take;
            let mut vals = Vec::with_capacity(slots);
            for _ in 0..slots {
                vals.push(Rational::from(VALUES[code % 4]));
                code /= 4;
            }
            let betas = vals.split_off(k);
            LFamilyParams::new(spec.clone(), vals, betas).expect("k alphas and k betas")
        })
        .collect()
}

fn identity_detail(items: &[(String, LeibnizAlgebra)]) -> (bool, String) {
    let bad: Vec<&str> = items.iter().filter(|(_, a)| !a.check_identity().passed()).map(|(n, _)| n.as_str()).collect();
    if bad.is_empty() {
        (true, format!("{} algebras satisfy the Leibniz identity", items.len()))
    } else {
        (false, format!("identity fails for {}", bad.join(", ")))
    }
}

/// `Ann_r(R) = span{h}` and `Center(R) = 0`.
fn annihilator_step(r: &LeibnizAlgebra) -> Step {
    let h = r.label_index("h").expect("R has h");
    let span_h = SubspaceBasis::from_vectors(r.dim(), &[crate::algebra::unit(r.dim(), h)])?;
    let ann = r.right_annihilator();
    let center = r.center();
    Ok((
        ann == span_h && center.is_zero(),
        format!("dim Ann_r = {}, equals span{{h}}: {}, dim Center = {}", ann.dim(), ann == span_h, center.dim()),
    ))
}

/// `R / span{h}` has the same structure constants as the Lie quotient.
fn quotient_step(r: &LeibnizAlgebra, rc: &LeibnizAlgebra) -> Step {
    let h = r.label_index("h").expect("R has h");
    let span_h = SubspaceBasis::from_vectors(r.dim(), &[crate::algebra::unit(r.dim(), h)])?;
    let q = r.quotient_by_ideal(&span_h)?;
    let same = q.algebra.same_table(rc);
    Ok((same, format!("quotient dim {}, matches the Lie quotient table: {same}", q.algebra.dim())))
}

fn completeness_step(r: &LeibnizAlgebra, cfg: &CohomologyConfig) -> Step {
    let c = is_complete(r, cfg)?;
    Ok((c.complete, format!("dim Center = {}, dim HL^1 = {}", c.center_dim, c.hl1.dim_hl)))
}

fn rigidity_step(r: &LeibnizAlgebra, cfg: &CohomologyConfig) -> Step {
    let rig = is_cohomologically_rigid(r, cfg)?;
    Ok((
        rig.rigid,
        format!("dim ZL^2 = {}, dim BL^2 = {}, dim HL^2 = {}", rig.hl2.dim_zl, rig.hl2.dim_bl, rig.hl2.dim_hl),
    ))
}

/// The four parameter regimes used for the nil-independence count.
pub fn regime_instances(n1: usize, n2: usize) -> Vec<(&'static str, TwoBlock)> {
    vec![
        ("f1-square", TwoBlock::new(n1, n2, 1, 1, 1, 1)),
        ("e2-square", TwoBlock::new(n1, n2, 1, 0, 1, 1)),
        ("f1-mixed", TwoBlock::new(n1, n2, 0, 0, 0, 1)),
        ("all-zero", TwoBlock::new(n1, n2, 0, 0, 0, 0)),
    ]
}

/// Per-regime outcome of the four-direction nil-independence check.
#[derive(Clone, Debug, Serialize)]
pub struct RegimeOutcome {
    pub regime: &'static str,
    pub missing: Vec<&'static str>,
    pub independent: Option<bool>,
    pub sampled: usize,
    pub non_nilpotent: usize,
}

impl RegimeOutcome {
    pub fn passed(&self) -> bool {
        self.missing.is_empty() && self.independent == Some(true) && self.non_nilpotent == 0
    }
}

pub fn nil_independence(tb: &TwoBlock, regime: &'static str, cfg: &SuiteConfig) -> Result<RegimeOutcome, ConstructionError> {
    let der = derivation_space(&tb.build()?);
    let dirs = tb.designated_directions(&der);
    let missing = dirs.iter().filter(|d| d.matrix.is_none()).map(|d| d.name).collect();
    let nil = NilConfig { trials: cfg.trials, seed: cfg.seed, ..NilConfig::default() };
    let independent = tb.directions_verdict(&dirs, &nil).map(|v| v.is_independent());
    let check = tb.check_if_direction(&der, 20, cfg.seed);
    Ok(RegimeOutcome { regime, missing, independent, sampled: check.sampled, non_nilpotent: check.non_nilpotent })
}

/// Shape checks on a derivation basis: the five restrictions, the forced
/// zeros when `n1 > n2`, and the `h` coefficient of `d(h)`.
pub fn derivation_shape(tb: &TwoBlock) -> Result<(bool, String), ConstructionError> {
    let der = derivation_space(&tb.build()?);
    let mut bad = Vec::new();
    for (idx, m) in der.basis().iter().enumerate() {
        let r = tb.roles(m);
        if !tb.restriction_residuals(&r).iter().all(Rational::is_zero) {
            bad.push(format!("basis {idx}: restriction residual"));
        }
        if !tb.forced_zero_violations(m).is_empty() {
            bad.push(format!("basis {idx}: forced zero"));
        }
        if r.h_scale != tb.h_scale_formula(&r) {
            bad.push(format!("basis {idx}: d(h) coefficient"));
        }
        if tb.regime() != Regime::BothMixed && Some(&r.h_scale) != tb.h_scale_by_regime(&r).as_ref() {
            bad.push(format!("basis {idx}: regime formula for d(h)"));
        }
    }
    let detail = if bad.is_empty() {
        format!("dim Der = {}, all basis derivations have the predicted shape", der.dim())
    } else {
        format!("dim Der = {}; {}", der.dim(), bad.join("; "))
    };
    Ok((bad.is_empty(), detail))
}

pub fn run_particular(n1: usize, n2: usize, cfg: &SuiteConfig) -> Result<SuiteReport, ConstructionError> {
    let r = build_r_particular(n1, n2)?;
    let spec = CharSeqSpec::new(vec![n1, n2])?;
    let rc = build_r_c(&spec)?;
    let mut run = Runner { cfg, checks: Vec::new() };

    run.run("builder-identity", || {
        let mut items = vec![(format!("R({n1},{n2})"), r.clone())];
        for code in 0..256usize {
            let v: Vec<i64> = (0..4).map(|s| [0, 1, -1, 2][(code >> (2 * s)) & 3]).collect();
            let l = build_l_particular(n1, n2, v[0], v[1], v[2], v[3])?;
            items.push((format!("L({n1},{n2};{v:?})"), l));
        }
        Ok(identity_detail(&items))
    });
    run.run("derivation-shape", || {
        let mut out = Vec::new();
        let mut ok = true;
        for (name, tb) in regime_instances(n1, n2).into_iter().chain([("generic", TwoBlock::new(n1, n2, 2, -1, 3, 1))]) {
            let (pass, detail) = derivation_shape(&tb)?;
            ok &= pass;
            out.push(format!("{name}: {detail}"));
        }
        Ok((ok, out.join(" | ")))
    });
    run.run("nil-independence", || {
        let mut ok = true;
        let mut out = Vec::new();
        for (name, tb) in regime_instances(n1, n2) {
            let o = nil_independence(&tb, name, cfg)?;
            ok &= o.passed();
            out.push(format!(
                "{name}: missing [{}], independent {:?}, {}/{} sampled non-nilpotent",
                o.missing.join(","),
                o.independent,
                o.non_nilpotent,
                o.sampled
            ));
        }
        Ok((ok, out.join(" | ")))
    });
    run.run("annihilator-center", || annihilator_step(&r));
    run.run("quotient", || quotient_step(&r, &rc));
    run.run("completeness", || completeness_step(&r, &cfg.cohomology));
    run.run("rigidity", || rigidity_step(&r, &cfg.cohomology));
    run.run("cocycle-list", || {
        let p = verify_prop111(n1, n2, &cfg.cohomology)?;
        let failing: Vec<&str> = p.items.iter().filter(|i| !i.passed()).map(|i| i.name.as_str()).collect();
        let skipped: Vec<&str> = p.items.iter().filter(|i| !i.evaluated).map(|i| i.name.as_str()).collect();
        Ok((
            p.all_passed,
            format!(
                "{} evaluated, not evaluated [{}], failing [{}], dim ZL^2 = {}, dim BL^2 = {}, span with quotient cocycles {}",
                p.evaluated_count(),
                skipped.join(","),
                failing.join(","),
                p.dim_zl2,
                p.dim_bl2,
                p.combined_rank
            ),
        ))
    });
    Ok(SuiteReport { suite: "particular".into(), params: format!("n1={n1}, n2={n2}"), checks: run.checks })
}

pub fn run_general(spec: &CharSeqSpec, cfg: &SuiteConfig) -> Result<SuiteReport, ConstructionError> {
    let r = build_r_general(spec)?;
    let nc = build_n_c(spec)?;
    let rc = build_r_c(spec)?;
    let ls: Vec<LeibnizAlgebra> =
        l_general_instances(spec, 64).iter().map(build_l_general).collect::<Result<_, _>>()?;
    let mut run = Runner { cfg, checks: Vec::new() };

    run.run("builder-identity", || {
        let mut items = vec![("n_c".to_string(), nc.clone()), ("r_c".to_string(), rc.clone()), ("R".to_string(), r.clone())];
        items.extend(ls.iter().enumerate().map(|(i, l)| (format!("L#{i}"), l.clone())));
        let (ok, detail) = identity_detail(&items);
        let lie = nc.is_lie() && rc.is_lie();
        Ok((ok && lie, format!("{detail}; n_c and r_c are Lie: {lie}")))
    });
    run.run("solvable-iff-derived-nilpotent", || {
        let mut all: Vec<&LeibnizAlgebra> = vec![&nc, &rc, &r];
        all.extend(ls.iter());
        let mut bad = 0;
        for a in &all {
            let l2 = a.subalgebra(&a.derived_algebra())?;
            if a.is_solvable() != l2.is_nilpotent() {
                bad += 1;
            }
        }
        Ok((bad == 0, format!("{} algebras, {bad} counterexamples", all.len())))
    });
    run.run("characteristic-sequence", || {
        let cs = characteristic_sequence(&nc, DEFAULT_CHARSEQ_SAMPLES, cfg.seed)?;
        let mut expected = spec.parts().to_vec();
        expected.push(1);
        Ok((cs.parts == expected, format!("C(n_c) = {:?}, expected {:?}", cs.parts, expected)))
    });
    run.run("annihilator-center", || annihilator_step(&r));
    run.run("quotient", || quotient_step(&r, &rc));
    run.run("completeness", || completeness_step(&r, &cfg.cohomology));
    run.run("rigidity", || rigidity_step(&r, &cfg.cohomology));
    Ok(SuiteReport { suite: "general".into(), params: format!("seq={spec}"), checks: run.checks })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionCount {
    pub n: usize,
    pub p: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub seq: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hl1: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hl2: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub nmax: usize,
    pub counts: Vec<PartitionCount>,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    /// Rows that were computed and have nonzero `HL^1` or `HL^2`.
    pub fn nonvanishing(&self) -> Vec<&SweepRow> {
        self.rows.iter().filter(|r| r.hl1.is_some_and(|d| d > 0) || r.hl2.is_some_and(|d| d > 0)).collect()
    }

    pub fn any_skipped(&self) -> bool {
        self.rows.iter().any(|r| r.skipped.is_some())
    }
}

/// For each partition of each `n <= nmax`, builds the solvable extension
/// and computes `HL^1` and `HL^2` where the size guard allows.
pub fn sweep(nmax: usize, cfg: &CohomologyConfig) -> Result<SweepReport, ConstructionError> {
    if nmax == 0 {
        return Err(ConstructionError::InvalidSpec("nmax must be at least 1".into()));
    }
    let mut counts = Vec::new();
    let mut rows = Vec::new();
    for n in 1..=nmax {
        counts.push(PartitionCount { n, p: partition_count(n)?.to_string() });
        for spec in enumerate_partitions(n)?.into_iter().rev() {
            let seq = spec.to_string();
            let r = match build_r_general(&spec) {
                Ok(r) => r,
                Err(e) => {
                    rows.push(SweepRow { n, seq, dim: None, hl1: None, hl2: None, skipped: Some(e.to_string()) });
                    continue;
                }
            };
            let dim = Some(r.dim());
            let outcome = is_complete(&r, cfg).and_then(|c| Ok((c.hl1.dim_hl, is_cohomologically_rigid(&r, cfg)?)));
            rows.push(match outcome {
                Ok((hl1, rig)) => SweepRow { n, seq, dim, hl1: Some(hl1), hl2: Some(rig.hl2.dim_hl), skipped: None },
                Err(e) => SweepRow { n, seq, dim, hl1: None, hl2: None, skipped: Some(e.to_string()) },
            });
        }
    }
    Ok(SweepReport { nmax, counts, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_are_distinct_and_bounded() {
        let spec = CharSeqSpec::new(vec![2, 1]).unwrap();
        let all = l_general_instances(&spec, 1000);
        assert_eq!(all.len(), 256);
        let some = l_general_instances(&spec, 20);
        assert_eq!(some.len(), 20);
        assert!(some.windows(2).all(|w| w[0] != w[1]));
    }

    #[test]
    fn general_suite_passes_small() {
        let spec = CharSeqSpec::new(vec![2, 1]).unwrap();
        let rep = run_general(&spec, &SuiteConfig::default()).unwrap();
        assert!(rep.passed(), "{rep:#?}");
        assert!(rep.checks.iter().all(|c| c.elapsed_ms.is_none()));
    }

    #[test]
    fn sweep_small() {
        let rep = sweep(3, &CohomologyConfig::default()).unwrap();
        assert_eq!(rep.counts.iter().map(|c| c.p.as_str()).collect::<Vec<_>>(), ["1", "2", "3"]);
        assert!(rep.nonvanishing().is_empty());
        // (1), (1,1), (1,1,1) have a first block of length 1
        assert_eq!(rep.rows.iter().filter(|r| r.skipped.is_some()).count(), 3);
        assert!(sweep(0, &CohomologyConfig::default()).is_err());
    }

    #[test]
    fn guard_marks_skips() {
        let cfg = SuiteConfig { cohomology: CohomologyConfig { max_degree: 3, max_cells: 1000 }, ..SuiteConfig::default() };
        let rep = run_general(&CharSeqSpec::new(vec![2]).unwrap(), &cfg).unwrap();
        let rig = rep.checks.iter().find(|c| c.name == "rigidity").unwrap();
        assert_eq!(rig.status, Status::Skipped);
        assert!(!rep.any_failed());
    }
}
