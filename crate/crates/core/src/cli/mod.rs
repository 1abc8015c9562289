//! Batch jobs behind the `walgebra` binary.
//!
//! A job is a [`JobConfig`] (read from a JSON file, then overridden by flags)
//! resolved into a [`Job`]. Every command renders deterministic text and says
//! whether its self-checks passed.

use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::diffpoly::DiffPoly;
use crate::error::{Error, Result};
use crate::hierarchy::{check_cyclic_element, principal_default_s, run_hierarchy};
use crate::lie::{
    build_polarization, build_sl_n, triple_from_partition, LagrangianChoice, LieAlgebra, RatRepr, Sl2Triple,
    SlodowyFrame,
};
use crate::linalg::{is_zero_vec, Vector};
use crate::pva::PvaStructure;
use crate::rational::{fmt_rat, frac, parse_rat};
use crate::walgebra::{
    affine_w_structure, generator_labels, FiniteBracketTable, FiniteReduction, ReductionRealization,
};

/// `"sl:N"`, `{"sl": N}` or `{"file": path}` in job files.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase", try_from = "AlgebraRepr")]
pub enum AlgebraSpec {
    Sl(usize),
    File(PathBuf),
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase")]
enum TaggedAlgebra {
    Sl(usize),
    File(PathBuf),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AlgebraRepr {
    Text(String),
    Tagged(TaggedAlgebra),
}

impl TryFrom<AlgebraRepr> for AlgebraSpec {
    type Error = Error;

    fn try_from(r: AlgebraRepr) -> Result<Self> {
        match r {
            AlgebraRepr::Text(s) => AlgebraSpec::parse(&s),
            AlgebraRepr::Tagged(TaggedAlgebra::Sl(n)) => Ok(AlgebraSpec::Sl(n)),
            AlgebraRepr::Tagged(TaggedAlgebra::File(p)) => Ok(AlgebraSpec::File(p)),
        }
    }
}

impl AlgebraSpec {
    /// `sl:N`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected sl:N, got {s:?}"));
        let (kind, n) = s.split_once(':').ok_or_else(bad)?;
        if kind.trim() != "sl" {
            return Err(bad());
        }
        Ok(AlgebraSpec::Sl(n.trim().parse().map_err(|_| bad())?))
    }
}

/// `"default"` or explicit coordinates in the algebra basis.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum SSpec {
    Named(String),
    Coords(Vec<RatRepr>),
}

impl Default for SSpec {
    fn default() -> Self {
        SSpec::Named("default".into())
    }
}

impl SSpec {
    /// `default` or a comma-separated list of rationals.
    pub fn parse(s: &str) -> Result<Self> {
        if s.trim() == "default" {
            return Ok(SSpec::default());
        }
        s.split(',')
            .map(|t| parse_rat(t).map(|q| RatRepr::Text(fmt_rat(&q))))
            .collect::<Result<Vec<_>>>()
            .map(SSpec::Coords)
    }
}

/// An explicit sl2-triple, for algebras without partitions.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TripleSpec {
    pub e: Vec<RatRepr>,
    pub x: Vec<RatRepr>,
    pub f: Vec<RatRepr>,
}

#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Latex,
}

#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Lagrangian {
    #[default]
    Greedy,
    Reversed,
}

impl From<Lagrangian> for LagrangianChoice {
    fn from(l: Lagrangian) -> Self {
        match l {
            Lagrangian::Greedy => LagrangianChoice::Greedy,
            Lagrangian::Reversed => LagrangianChoice::GreedyReversed,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct JobConfig {
    pub algebra: Option<AlgebraSpec>,
    /// Defaults to the principal partition `[n]`.
    pub partition: Option<Vec<usize>>,
    pub triple: Option<TripleSpec>,
    pub s: SSpec,
    pub lagrangian: Lagrangian,
    /// Number of conserved densities for `hierarchy`.
    pub depth: usize,
    /// Polynomial degree of the random samples in `verify`.
    pub degree: u32,
    /// Number of random samples in `verify`.
    pub samples: usize,
    pub seed: u64,
    pub format: Format,
}

impl Default for JobConfig {
    fn default() -> Self {
        JobConfig {
            algebra: None,
            partition: None,
            triple: None,
            s: SSpec::default(),
            lagrangian: Lagrangian::default(),
            depth: 3,
            degree: 3,
            samples: 10,
            seed: 0,
            format: Format::default(),
        }
    }
}

impl JobConfig {
    pub fn load(path: &std::path::Path) -> Result<Self> {
        JobConfig::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn rats(v: &[RatRepr]) -> Result<Vector> {
    v.iter().map(RatRepr::to_rat).collect()
}

/// A resolved job: algebra, nilpotent, Slodowy frame and `s`.
#[derive(Clone, Debug)]
pub struct Job {
    pub config: JobConfig,
    pub frame: SlodowyFrame,
    pub s: Vector,
}

impl Job {
    pub fn new(config: JobConfig) -> Result<Self> {
        let alg = match &config.algebra {
            Some(AlgebraSpec::Sl(n)) => build_sl_n(*n)?,
            Some(AlgebraSpec::File(p)) => LieAlgebra::load(p)?,
            None => return Err(Error::Parse("no algebra given".into())),
        };
        let triple = match (&config.triple, &config.partition) {
            (Some(_), Some(_)) => return Err(Error::Parse("give either a partition or a triple, not both".into())),
            (Some(t), None) => Sl2Triple::new(&alg, rats(&t.e)?, rats(&t.x)?, rats(&t.f)?)?,
            (None, Some(p)) => triple_from_partition(&alg, p)?,
            (None, None) => {
                let n = alg
                    .matrix_size()
                    .ok_or_else(|| Error::Parse("a structure-constants algebra needs a triple".into()))?;
                triple_from_partition(&alg, &[n])?
            }
        };
        let frame = SlodowyFrame::build(&alg, &triple)?;
        let s = match &config.s {
            SSpec::Named(name) if name == "default" => {
                let principal = config.partition.as_ref().is_none_or(|p| p.len() == 1)
                    && config.triple.is_none()
                    && !triple.is_zero();
                match principal.then(|| principal_default_s(&alg)).flatten() {
                    Some(s) => s,
                    None => alg.zero(),
                }
            }
            SSpec::Named(name) => return Err(Error::Parse(format!("unknown s {name:?}"))),
            SSpec::Coords(c) => {
                let s = rats(c)?;
                if s.len() != alg.dim() {
                    return Err(Error::Shape(format!(
                        "s has {} coordinates, dim g = {}",
                        s.len(),
                        alg.dim()
                    )));
                }
                s
            }
        };
        if !s.iter().all(num_traits::Zero::is_zero) && frame.grading.degree_of(&s).is_none() {
            return Err(Error::Grading(alg.describe(&s)));
        }
        let pol = build_polarization(&frame, config.lagrangian.into())?;
        if pol.n_basis.iter().any(|n| !is_zero_vec(&alg.bracket(&s, n))) {
            return Err(Error::Domain(format!(
                "s = {} does not commute with n",
                alg.describe(&s)
            )));
        }
        Ok(Job { config, frame, s })
    }

    fn choice(&self) -> LagrangianChoice {
        self.config.lagrangian.into()
    }

    pub fn realization(&self) -> Result<ReductionRealization> {
        ReductionRealization::new(&self.frame, &self.s, self.choice())
    }

    pub fn w_structure(&self) -> PvaStructure {
        affine_w_structure(&self.frame, &self.s)
    }
}

/// Rendered output of one command and whether its checks passed.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub text: String,
    pub verified: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, verified: true }
    }
}

fn render(format: Format, value: &Value, latex: impl FnOnce() -> String) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
            s.push('\n');
            s
        }
        Format::Latex => latex() + "\n",
    }
}

pub fn cmd_info(job: &Job) -> Result<Outcome> {
    let frame = &job.frame;
    let alg = &frame.alg;
    let pol = build_polarization(frame, job.choice())?;
    let describe = |vs: &[Vector]| -> Vec<String> { vs.iter().map(|v| alg.describe(v)).collect() };
    let grading: Vec<Value> = frame
        .grading
        .degrees2
        .iter()
        .zip(&frame.grading.bases)
        .map(|(d, b)| json!({"degree": fmt_rat(&frac(*d, 2)), "dim": b.len()}))
        .collect();
    let value = json!({
        "dim": alg.dim(),
        "basis": alg.labels(),
        "e": alg.describe(&frame.triple.e),
        "x": alg.describe(&frame.triple.x),
        "f": alg.describe(&frame.triple.f),
        "f_is_zero": frame.triple.is_zero(),
        "grading": grading,
        "g_f": describe(&frame.qf),
        "g_e": describe(&frame.qe),
        "delta": frame.delta2.iter().map(|d| fmt_rat(&frac(*d, 2))).collect::<Vec<_>>(),
        "omega_rank": pol.omega_rank(),
        "lagrangian": job.config.lagrangian,
        "ell": describe(&pol.ell),
        "n_dim": pol.n_dim(),
        "p_dim": pol.p_dim(),
        "s": alg.describe(&job.s),
    });
    let latex = || {
        let grading = frame
            .grading
            .degrees2
            .iter()
            .zip(&frame.grading.bases)
            .map(|(d, b)| format!("\\mathfrak g_{{{}}}: {}", fmt_rat(&frac(*d, 2)), b.len()))
            .collect::<Vec<_>>()
            .join(",\\ ");
        [
            format!("\\dim\\mathfrak g &= {}", alg.dim()),
            format!("\\dim\\mathfrak g^f &= {}", frame.qf.len()),
            format!("\\dim\\mathfrak n &= {}", pol.n_dim()),
            format!("\\operatorname{{rank}}\\omega &= {}", pol.omega_rank()),
            format!("&{grading}"),
        ]
        .join(" \\\\\n")
    };
    let latex = || format!("\\begin{{aligned}}\n{}\n\\end{{aligned}}", latex());
    Ok(Outcome::ok(render(job.config.format, &value, latex)))
}

fn elements(job: &Job) -> Value {
    let alg = &job.frame.alg;
    let labels = generator_labels(&job.frame);
    labels
        .into_iter()
        .zip(&job.frame.qf)
        .map(|(l, q)| (l, Value::String(alg.describe(q))))
        .collect::<serde_json::Map<_, _>>()
        .into()
}

pub fn cmd_finite_bracket(job: &Job) -> Result<Outcome> {
    let table = FiniteBracketTable::build(&job.frame);
    let value = json!({"elements": elements(job), "table": table.to_json()});
    Ok(Outcome::ok(render(job.config.format, &value, || table.to_latex())))
}

pub fn cmd_affine_bracket(job: &Job) -> Result<Outcome> {
    let w = job.w_structure();
    let value = json!({"elements": elements(job), "s": job.frame.alg.describe(&job.s), "table": w.to_json()});
    Ok(Outcome::ok(render(job.config.format, &value, || w.to_latex())))
}

pub fn cmd_hierarchy(job: &Job) -> Result<Outcome> {
    if !check_cyclic_element(&job.frame, &job.s)? {
        return Err(Error::Domain(format!(
            "f + s is not semisimple or s does not commute with n (s = {})",
            job.frame.alg.describe(&job.s)
        )));
    }
    let real = job.realization()?;
    let report = run_hierarchy(&real, &job.w_structure(), job.config.depth, None)?;
    let mut value = report.to_json();
    value["elements"] = elements(job);
    value["passed"] = json!(report.passed());
    value["failures"] = json!(report.lenard_magri.failures());
    Ok(Outcome {
        text: render(job.config.format, &value, || report.to_latex()),
        verified: report.passed(),
    })
}

/// Axioms of the W-algebra on seeded random samples, the closed formula
/// against the reduction, and the finite bracket against its reduction.
pub fn cmd_verify(job: &Job) -> Result<Outcome> {
    let cfg = &job.config;
    let frame = &job.frame;
    let w = job.w_structure();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let samples: Vec<DiffPoly> = (0..cfg.samples)
        .map(|_| DiffPoly::random(&mut rng, w.n_gens, cfg.degree, 3, 3))
        .collect();
    let axioms = w.verify_axioms(&samples)?;
    let reduced = job.realization()?.w_structure()?;
    let affine_matches = reduced.table == w.table;

    let table = FiniteBracketTable::build(frame);
    let red = FiniteReduction::new(frame, job.choice())?;
    let k = frame.rank();
    let finite_matches = (0..k).all(|i| {
        (0..k).all(|j| {
            let (a, b) = (DiffPoly::gen(i), DiffPoly::gen(j));
            table.bracket(&a, &b).is_ok_and(|t| t == red.bracket(&a, &b))
        })
    });
    let finite_skew = table.is_skew();
    let finite_jacobi = table.satisfies_jacobi()?;
    let verified = axioms.passed() && affine_matches && finite_matches && finite_skew && finite_jacobi;
    let value = json!({
        "seed": cfg.seed,
        "samples": cfg.samples,
        "axiom_checks": axioms.checks,
        "axiom_failures": axioms.failures,
        "affine_formula_matches_reduction": affine_matches,
        "finite_formula_matches_reduction": finite_matches,
        "finite_skew": finite_skew,
        "finite_jacobi": finite_jacobi,
        "passed": verified,
    });
    let latex = || {
        let mark = |b: bool| if b { "\\checkmark" } else { "\\times" };
        format!(
            "\\begin{{aligned}}\n\\text{{axioms}} &: {} \\\\\n\\text{{affine}} &: {} \\\\\n\\text{{finite}} &: {}\n\\end{{aligned}}",
            mark(axioms.passed()),
            mark(affine_matches),
            mark(finite_matches && finite_skew && finite_jacobi)
        )
    };
    Ok(Outcome {
        text: render(cfg.format, &value, latex),
        verified,
    })
}

/// A command by its CLI name.
pub fn command(name: &str) -> Option<fn(&Job) -> Result<Outcome>> {
    Some(match name {
        "info" => cmd_info,
        "finite-bracket" => cmd_finite_bracket,
        "affine-bracket" => cmd_affine_bracket,
        "hierarchy" => cmd_hierarchy,
        "verify" => cmd_verify,
        _ => return None,
    })
}

/// Exit status for a library error: everything the user can fix is a
/// configuration error (2); broken internal invariants count as failed
/// verification (1).
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Internal(_) => 1,
        _ => 2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(n: usize, partition: &[usize]) -> Job {
        Job::new(JobConfig {
            algebra: Some(AlgebraSpec::Sl(n)),
            partition: Some(partition.to_vec()),
            ..JobConfig::default()
        })
        .unwrap()
    }

    #[test]
    fn parses_flags() {
        assert_eq!(AlgebraSpec::parse("sl:3").unwrap(), AlgebraSpec::Sl(3));
        assert!(AlgebraSpec::parse("so:3").is_err());
        assert_eq!(SSpec::parse("default").unwrap(), SSpec::default());
        assert_eq!(
            SSpec::parse("1, -1/2").unwrap(),
            SSpec::Coords(vec![RatRepr::Text("1".into()), RatRepr::Text("-1/2".into())])
        );
    }

    #[test]
    fn config_json_roundtrip() {
        let cfg: JobConfig = serde_json::from_str(
            r#"{"algebra": {"sl": 3}, "partition": [2, 1], "s": [0, 0, 1, 0, 0, 0, 0, 0], "depth": 2}"#,
        )
        .unwrap();
        assert_eq!(cfg.algebra, Some(AlgebraSpec::Sl(3)));
        assert_eq!(cfg.depth, 2);
        assert!(serde_json::from_str::<JobConfig>(r#"{"algebra": {"sl": 3}, "bogus": 1}"#).is_err());
    }

    #[test]
    fn default_s_is_principal_only() {
        let j = job(3, &[3]);
        assert_eq!(j.frame.alg.describe(&j.s), "E13");
        let j = job(3, &[2, 1]);
        assert!(j.s.iter().all(num_traits::Zero::is_zero));
    }

    #[test]
    fn inconsistent_configs_are_rejected() {
        let bad = |cfg: JobConfig| Job::new(cfg).unwrap_err();
        let base = JobConfig {
            algebra: Some(AlgebraSpec::Sl(3)),
            ..JobConfig::default()
        };
        assert!(matches!(
            bad(JobConfig {
                partition: Some(vec![2, 2]),
                ..base.clone()
            }),
            Error::Shape(_)
        ));
        // H1 + E12 mixes degrees 0 and 1
        let s = SSpec::parse("1,0,0,1,0,0,0,0").unwrap();
        assert!(matches!(bad(JobConfig { s, ..base.clone() }), Error::Grading(_)));
        assert!(matches!(bad(JobConfig::default()), Error::Parse(_)));
    }

    #[test]
    fn info_reports_dimensions() {
        let out = cmd_info(&job(3, &[2, 1])).unwrap();
        let v: Value = serde_json::from_str(&out.text).unwrap();
        assert_eq!(v["g_f"].as_array().unwrap().len(), 4);
        assert_eq!(v["n_dim"], 2);
        let v: Value = serde_json::from_str(&cmd_info(&job(2, &[2])).unwrap().text).unwrap();
        let degrees: Vec<&str> = v["grading"]
            .as_array()
            .unwrap()
            .iter()
            .map(|g| g["degree"].as_str().unwrap())
            .collect();
        assert_eq!(degrees, ["-1", "0", "1"]);
        let v: Value = serde_json::from_str(&cmd_info(&job(2, &[1, 1])).unwrap().text).unwrap();
        assert_eq!(v["f_is_zero"], true);
        assert_eq!(v["n_dim"], 0);
    }

    #[test]
    fn hierarchy_needs_a_cyclic_element() {
        let err = cmd_hierarchy(&job(3, &[2, 1])).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
        assert_eq!(exit_code(&err), 2);
    }

    #[test]
    fn depth_zero_has_no_flows() {
        let mut j = job(2, &[2]);
        j.config.depth = 0;
        let out = cmd_hierarchy(&j).unwrap();
        assert!(out.verified);
        let v: Value = serde_json::from_str(&out.text).unwrap();
        assert!(v["hierarchy"].as_array().unwrap().is_empty());
    }
}
