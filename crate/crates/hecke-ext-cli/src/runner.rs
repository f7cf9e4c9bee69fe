//! Executes a parsed scenario: builds the datum and the modules, runs the
//! tasks in declaration order, and renders the results both as a human table
//! and as machine-readable records (one line per task, exact `p/q` scalars,
//! no timing data, so two runs of the same scenario are byte-identical).

use crate::scenario::{DualOp, Recipe, Scenario, TaskKind};
use hecke_ext::algebra::{self, w_character, HModule};
use hecke_ext::constructions::{self, ConstructError};
use hecke_ext::homology::{self, HomologyError};
use hecke_ext::rootsys::{elliptic_classes, HeckeContext};
use hecke_ext::scalar::{self, Scalar};
use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("datum: {0}")]
    Datum(String),
    #[error("building module `{label}`: {msg}")]
    Module { label: String, msg: String },
    #[error("task `{id}`: {msg}")]
    Task { id: String, msg: String },
}

/// One executed task: ordered output fields, a verdict for check-type tasks,
/// and the wall time (reported in the table only).
#[derive(Debug, Clone)]
pub struct ReportRecord {
    pub task_id: String,
    pub kind: String,
    pub fields: Vec<(String, String)>,
    pub pass: Option<bool>,
    pub wall: Duration,
}

fn fmt_usizes(v: &[usize]) -> String {
    let items: Vec<String> = v.iter().map(|d| d.to_string()).collect();
    format!("[{}]", items.join(","))
}

fn fmt_scalars(v: &[Scalar]) -> String {
    let items: Vec<String> = v.iter().map(scalar::render).collect();
    format!("[{}]", items.join(","))
}

fn fmt_orbit(cc: &constructions::CentralCharacter) -> String {
    let items: Vec<String> = cc
        .orbit
        .iter()
        .map(|w| {
            let coords: Vec<String> = w.iter().map(scalar::render).collect();
            format!("({})", coords.join(","))
        })
        .collect();
    format!("[{}]", items.join(";"))
}

/// Check-style homology failures become `pass=false` records; anything else
/// aborts the run.
fn homology_failure_reason(err: &HomologyError) -> Option<String> {
    match err {
        HomologyError::Algebra(_) | HomologyError::Construct(_) => None,
        other => Some(other.to_string()),
    }
}

fn build_modules(
    ctx: &Arc<HeckeContext>,
    scenario: &Scenario,
) -> Result<HashMap<String, HModule>, RunError> {
    let mut built: HashMap<String, HModule> = HashMap::new();
    let mut pending: Vec<&(String, Recipe)> = scenario.modules.iter().collect();
    while !pending.is_empty() {
        let mut progressed = false;
        let mut next_round = Vec::new();
        for item in pending {
            let (label, recipe) = item;
            if let Some(dep) = recipe.dependency() {
                if !built.contains_key(dep) {
                    next_round.push(item);
                    continue;
                }
            }
            let module = build_one(ctx, label, recipe, &built)
                .map_err(|msg| RunError::Module { label: label.clone(), msg })?;
            built.insert(label.clone(), module.relabel(label.clone()));
            progressed = true;
        }
        if !progressed && !next_round.is_empty() {
            let label = next_round[0].0.clone();
            return Err(RunError::Module { label, msg: "unresolvable dependency".into() });
        }
        pending = next_round;
    }
    Ok(built)
}

fn build_one(
    ctx: &Arc<HeckeContext>,
    label: &str,
    recipe: &Recipe,
    built: &HashMap<String, HModule>,
) -> Result<HModule, String> {
    let to_msg = |e: ConstructError| e.to_string();
    match recipe {
        Recipe::OneDim { signs } => constructions::one_dim_module(ctx, signs).map_err(to_msg),
        Recipe::PrincipalSeries { gamma } => {
            if gamma.len() == 1 && ctx.dim() > 1 {
                let g: Vec<Scalar> = vec![gamma[0].clone(); ctx.dim()];
                constructions::principal_series(ctx, &g).map_err(to_msg)
            } else if gamma.len() == ctx.dim() {
                constructions::principal_series(ctx, gamma).map_err(to_msg)
            } else {
                Err(format!(
                    "gamma needs {} coordinates (or a single broadcast value), got {}",
                    ctx.dim(),
                    gamma.len()
                ))
            }
        }
        Recipe::ParabolicInduction { of, subset } => {
            let base = built.get(of).expect("dependency built first");
            let restricted = constructions::restrict_to_parabolic(base, subset).map_err(to_msg)?;
            constructions::parabolic_induction(ctx, subset, &restricted).map_err(to_msg)
        }
        Recipe::Dual { of, op } => {
            let base = built.get(of).expect("dependency built first");
            let out = match op {
                DualOp::Star => algebra::dual_star(base),
                DualOp::Bullet => algebra::dual_bullet(base),
                DualOp::Iota => algebra::iota(base),
                DualOp::Theta => algebra::theta(base),
                DualOp::DD => algebra::dd(base),
            };
            let _ = label;
            out.validated().map_err(|e| e.to_string())
        }
    }
}

/// Executes all tasks of a scenario, in declaration order.
pub fn run_scenario(scenario: &Scenario) -> Result<Vec<ReportRecord>, RunError> {
    let ctx = HeckeContext::build(
        &scenario.datum.type_label,
        &scenario.datum.k,
        scenario.datum.extra_ambient,
    )
    .map_err(|e| RunError::Datum(e.to_string()))?;
    let modules = build_modules(&ctx, scenario)?;
    let get = |label: &str| modules.get(label).expect("labels validated at parse time");

    let mut records = Vec::with_capacity(scenario.tasks.len());
    for (id, task) in &scenario.tasks {
        let start = Instant::now();
        let mut fields: Vec<(String, String)> = Vec::new();
        let mut pass: Option<bool> = None;
        let task_err = |msg: String| RunError::Task { id: id.clone(), msg };
        match task {
            TaskKind::ExtDims { x, y } => {
                let (mx, my) = (get(x), get(y));
                fields.push(("x".into(), x.clone()));
                fields.push(("y".into(), y.clone()));
                match homology::build_complex(mx, my) {
                    Ok(complex) => {
                        let terms: Vec<usize> =
                            (0..=complex.n).map(|i| complex.term_dim(i)).collect();
                        fields.push(("terms".into(), fmt_usizes(&terms)));
                        fields.push(("ext".into(), fmt_usizes(&complex.ext_profile().dims)));
                    }
                    Err(e) => return Err(task_err(e.to_string())),
                }
            }
            TaskKind::DualityCheck { x, y } => {
                let (mx, my) = (get(x), get(y));
                fields.push(("x".into(), x.clone()));
                fields.push(("y".into(), y.clone()));
                match homology::duality_check(mx, my) {
                    Ok(report) => {
                        fields.push(("ext".into(), fmt_usizes(&report.profile.dims)));
                        fields.push(("dual_ext".into(), fmt_usizes(&report.dual_profile.dims)));
                        let ranks: Vec<usize> = report.pairing.iter().map(|p| p.rank()).collect();
                        fields.push(("pairing_ranks".into(), fmt_usizes(&ranks)));
                        pass = Some(true);
                    }
                    Err(e) => match homology_failure_reason(&e) {
                        Some(reason) => {
                            fields.push(("reason".into(), reason.replace(' ', "_")));
                            pass = Some(false);
                        }
                        None => return Err(task_err(e.to_string())),
                    },
                }
            }
            TaskKind::EpCheck { x, y } => {
                let (mx, my) = (get(x), get(y));
                fields.push(("x".into(), x.clone()));
                fields.push(("y".into(), y.clone()));
                match homology::pairing_summary(mx, my) {
                    Ok(summary) => {
                        fields.push(("ext".into(), fmt_usizes(&summary.ext.dims)));
                        fields.push(("ep".into(), scalar::render(&summary.euler_poincare)));
                        fields.push(("elliptic".into(), scalar::render(&summary.elliptic)));
                        pass = Some(summary.euler_poincare == summary.elliptic);
                    }
                    Err(e) => match homology_failure_reason(&e) {
                        Some(reason) => {
                            fields.push(("reason".into(), reason.replace(' ', "_")));
                            pass = Some(false);
                        }
                        None => return Err(task_err(e.to_string())),
                    },
                }
            }
            TaskKind::AubertCheck { module } => {
                let m = get(module);
                fields.push(("module".into(), module.clone()));
                let aubert =
                    homology::aubert_virtual_character(m).map_err(|e| task_err(e.to_string()))?;
                let chi = w_character(m).map_err(|e| task_err(e.to_string()))?;
                let expected = chi.pointwise_mul(&algebra::sgn_character(&ctx.weyl));
                fields.push(("aubert".into(), fmt_scalars(&aubert.values)));
                fields.push(("sgn_twist".into(), fmt_scalars(&expected.values)));
                pass = Some(aubert == expected);
            }
            TaskKind::IndresCheck { module } => {
                let m = get(module);
                fields.push(("module".into(), module.clone()));
                match homology::indres_complex(m) {
                    Ok(report) => {
                        fields.push(("stage_dims".into(), fmt_usizes(&report.stage_dims)));
                        fields.push(("kernel_dim".into(), report.kernel_dim.to_string()));
                        fields.push(("kernel_is_dD".into(), report.kernel_is_dd.to_string()));
                        pass = Some(
                            report.composition_zero
                                && report.exact
                                && report.kernel_is_dd
                                && report.chi_spans_kernel,
                        );
                    }
                    Err(e) => match homology_failure_reason(&e) {
                        Some(reason) => {
                            fields.push(("reason".into(), reason.replace(' ', "_")));
                            pass = Some(false);
                        }
                        None => return Err(task_err(e.to_string())),
                    },
                }
            }
            TaskKind::Classify { module } => {
                let m = get(module);
                fields.push(("module".into(), module.clone()));
                let tempered =
                    constructions::is_tempered(m).map_err(|e| task_err(e.to_string()))?;
                let ds =
                    constructions::is_discrete_series(m).map_err(|e| task_err(e.to_string()))?;
                fields.push(("tempered".into(), tempered.to_string()));
                fields.push(("discrete_series".into(), ds.to_string()));
                match constructions::central_character(m) {
                    Ok(cc) => fields.push(("central_character".into(), fmt_orbit(&cc))),
                    Err(ConstructError::MultipleOrbits(count)) => {
                        fields.push(("central_character".into(), format!("multiple({count})")))
                    }
                    Err(e) => return Err(task_err(e.to_string())),
                }
            }
            TaskKind::EllipticCount => {
                let classes = elliptic_classes(&ctx.weyl);
                fields.push(("count".into(), classes.len().to_string()));
                fields.push(("classes".into(), fmt_usizes(&classes)));
            }
        }
        records.push(ReportRecord {
            task_id: id.clone(),
            kind: task.kind_name().to_string(),
            fields,
            pass,
            wall: start.elapsed(),
        });
    }
    Ok(records)
}

/// Machine-readable rendering: one self-describing line per record, no
/// timing, exact scalars. Byte-identical across runs of the same scenario.
pub fn records_text(records: &[ReportRecord]) -> String {
    let mut out = String::new();
    for r in records {
        let _ = write!(out, "task={} kind={}", r.task_id, r.kind);
        for (k, v) in &r.fields {
            let _ = write!(out, " {k}={v}");
        }
        if let Some(p) = r.pass {
            let _ = write!(out, " pass={p}");
        }
        out.push('\n');
    }
    out
}

/// Human-facing table derived from the same records (plus wall time).
pub fn table_text(records: &[ReportRecord]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<14} {:<14} {:<5} {:>9}  details", "task", "kind", "pass", "ms");
    for r in records {
        let pass = match r.pass {
            Some(true) => "ok",
            Some(false) => "FAIL",
            None => "-",
        };
        let details: Vec<String> = r.fields.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(
            out,
            "{:<14} {:<14} {:<5} {:>9.3}  {}",
            r.task_id,
            r.kind,
            pass,
            r.wall.as_secs_f64() * 1e3,
            details.join(" ")
        );
    }
    out
}

/// True when every check-type record passed.
pub fn all_checks_pass(records: &[ReportRecord]) -> bool {
    records.iter().all(|r| r.pass != Some(false))
}
