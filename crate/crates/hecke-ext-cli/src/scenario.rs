//! Declarative scenario files: a root datum, a list of module recipes, and a
//! list of tasks, in a line-oriented `key = value` format under bracketed
//! section headers.
//!
//! ```text
//! [datum]
//! type = B2
//! k = 1,2
//!
//! [module.St]
//! kind = one_dim
//! signs = -
//!
//! [module.M3]
//! kind = principal_series
//! gamma = 3,3
//!
//! [task.e1]
//! kind = ext_dims
//! x = St
//! y = M3
//! ```
//!
//! Recipes may reference earlier or later labels (`of = ...`); the reference
//! graph must be acyclic and every referenced label must exist. There is no
//! expression language: the composable operations are exactly the four
//! constructions and the five duals.

use hecke_ext::scalar::{self, Scalar};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("unresolved label `{label}` referenced by `{referrer}`")]
    UnresolvedLabel { label: String, referrer: String },
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("module recipes contain a reference cycle involving `{0}`")]
    Cycle(String),
}

#[derive(Debug, Clone)]
pub struct DatumSpec {
    pub type_label: String,
    pub k: Vec<Scalar>,
    pub extra_ambient: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualOp {
    Star,
    Bullet,
    Iota,
    Theta,
    DD,
}

impl DualOp {
    pub fn name(self) -> &'static str {
        match self {
            DualOp::Star => "star",
            DualOp::Bullet => "bullet",
            DualOp::Iota => "iota",
            DualOp::Theta => "theta",
            DualOp::DD => "dD",
        }
    }
}

#[derive(Debug, Clone)]
pub enum Recipe {
    OneDim { signs: Vec<i32> },
    PrincipalSeries { gamma: Vec<Scalar> },
    /// `Ind_J Res_J` applied to another module
    ParabolicInduction { of: String, subset: Vec<usize> },
    Dual { of: String, op: DualOp },
}

impl Recipe {
    pub fn dependency(&self) -> Option<&str> {
        match self {
            Recipe::ParabolicInduction { of, .. } | Recipe::Dual { of, .. } => Some(of),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub enum TaskKind {
    ExtDims { x: String, y: String },
    DualityCheck { x: String, y: String },
    EpCheck { x: String, y: String },
    AubertCheck { module: String },
    IndresCheck { module: String },
    Classify { module: String },
    EllipticCount,
}

impl TaskKind {
    pub fn references(&self) -> Vec<&str> {
        match self {
            TaskKind::ExtDims { x, y }
            | TaskKind::DualityCheck { x, y }
            | TaskKind::EpCheck { x, y } => vec![x, y],
            TaskKind::AubertCheck { module }
            | TaskKind::IndresCheck { module }
            | TaskKind::Classify { module } => vec![module],
            TaskKind::EllipticCount => vec![],
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            TaskKind::ExtDims { .. } => "ext_dims",
            TaskKind::DualityCheck { .. } => "duality_check",
            TaskKind::EpCheck { .. } => "ep_check",
            TaskKind::AubertCheck { .. } => "aubert_check",
            TaskKind::IndresCheck { .. } => "indres_check",
            TaskKind::Classify { .. } => "classify",
            TaskKind::EllipticCount => "elliptic_count",
        }
    }

    /// Whether the task asserts something (and so participates in the exit
    /// code) or merely reports values.
    pub fn is_check(&self) -> bool {
        matches!(
            self,
            TaskKind::DualityCheck { .. }
                | TaskKind::EpCheck { .. }
                | TaskKind::AubertCheck { .. }
                | TaskKind::IndresCheck { .. }
        )
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub datum: DatumSpec,
    /// recipes in declaration order
    pub modules: Vec<(String, Recipe)>,
    /// tasks in declaration order
    pub tasks: Vec<(String, TaskKind)>,
}

struct Section {
    line: usize,
    name: String,
    entries: Vec<(usize, usize, String, String)>, // line, value column, key, value
}

fn split_sections(text: &str) -> Result<Vec<Section>, ScenarioError> {
    let mut sections: Vec<Section> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(stripped) = line.strip_prefix('[') {
            let Some(name) = stripped.strip_suffix(']') else {
                return Err(ScenarioError::Parse {
                    line: lineno,
                    col: raw.find('[').unwrap_or(0) + 1,
                    msg: "unterminated section header".into(),
                });
            };
            sections.push(Section { line: lineno, name: name.trim().to_string(), entries: vec![] });
            continue;
        }
        let Some(eq) = raw.find('=') else {
            return Err(ScenarioError::Parse {
                line: lineno,
                col: 1,
                msg: format!("expected `key = value`, got `{line}`"),
            });
        };
        let key = raw[..eq].trim().to_string();
        let value = raw[eq + 1..].trim().to_string();
        let Some(section) = sections.last_mut() else {
            return Err(ScenarioError::Parse {
                line: lineno,
                col: 1,
                msg: "entry outside any section".into(),
            });
        };
        section.entries.push((lineno, eq + 2, key, value));
    }
    Ok(sections)
}

struct Fields<'a> {
    section: &'a Section,
}

impl<'a> Fields<'a> {
    fn get(&self, key: &str) -> Result<(usize, usize, &'a str), ScenarioError> {
        self.section
            .entries
            .iter()
            .find(|(_, _, k, _)| k == key)
            .map(|(l, c, _, v)| (*l, *c, v.as_str()))
            .ok_or_else(|| ScenarioError::Parse {
                line: self.section.line,
                col: 1,
                msg: format!("section [{}] is missing key `{key}`", self.section.name),
            })
    }

    fn get_opt(&self, key: &str) -> Option<(usize, usize, &'a str)> {
        self.section
            .entries
            .iter()
            .find(|(_, _, k, _)| k == key)
            .map(|(l, c, _, v)| (*l, *c, v.as_str()))
    }
}

fn parse_scalars(text: &str, line: usize, col: usize) -> Result<Vec<Scalar>, ScenarioError> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|tok| {
            scalar::parse(tok).ok_or(ScenarioError::Parse {
                line,
                col,
                msg: format!("bad scalar `{tok}`"),
            })
        })
        .collect()
}

fn parse_signs(text: &str, line: usize, col: usize) -> Result<Vec<i32>, ScenarioError> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|tok| match tok {
            "+" | "+1" | "1" => Ok(1),
            "-" | "-1" => Ok(-1),
            _ => Err(ScenarioError::Parse { line, col, msg: format!("bad sign `{tok}`") }),
        })
        .collect()
}

fn parse_subset(text: &str, line: usize, col: usize) -> Result<Vec<usize>, ScenarioError> {
    if text == "empty" {
        return Ok(vec![]);
    }
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| ScenarioError::Parse {
                line,
                col,
                msg: format!("bad simple-root index `{tok}`"),
            })
        })
        .collect()
}

/// Parses and validates a scenario document: structure, recipe parameters,
/// label resolution, and acyclicity of the recipe references.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let sections = split_sections(text)?;
    let mut datum: Option<DatumSpec> = None;
    let mut modules: Vec<(String, Recipe)> = Vec::new();
    let mut tasks: Vec<(String, TaskKind)> = Vec::new();

    for section in &sections {
        let fields = Fields { section };
        if section.name == "datum" {
            let (_, _, type_label) = fields.get("type")?;
            let (kl, kc, ktext) = fields.get("k")?;
            let k = parse_scalars(ktext, kl, kc)?;
            let extra_ambient = match fields.get_opt("extra_ambient") {
                None => 0,
                Some((l, c, v)) => v.parse().map_err(|_| ScenarioError::Parse {
                    line: l,
                    col: c,
                    msg: format!("bad extra_ambient `{v}`"),
                })?,
            };
            datum = Some(DatumSpec { type_label: type_label.to_string(), k, extra_ambient });
        } else if let Some(label) = section.name.strip_prefix("module.") {
            let label = label.to_string();
            if modules.iter().any(|(l, _)| l == &label) {
                return Err(ScenarioError::DuplicateLabel(label));
            }
            let (kl, kc, kind) = fields.get("kind")?;
            let recipe = match kind {
                "one_dim" => {
                    let (l, c, v) = fields.get("signs")?;
                    Recipe::OneDim { signs: parse_signs(v, l, c)? }
                }
                "principal_series" => {
                    let (l, c, v) = fields.get("gamma")?;
                    Recipe::PrincipalSeries { gamma: parse_scalars(v, l, c)? }
                }
                "parabolic_induction" => {
                    let (_, _, of) = fields.get("of")?;
                    let (l, c, v) = fields.get("subset")?;
                    Recipe::ParabolicInduction {
                        of: of.to_string(),
                        subset: parse_subset(v, l, c)?,
                    }
                }
                "dual" => {
                    let (_, _, of) = fields.get("of")?;
                    let (l, c, v) = fields.get("op")?;
                    let op = match v {
                        "star" => DualOp::Star,
                        "bullet" => DualOp::Bullet,
                        "iota" => DualOp::Iota,
                        "theta" => DualOp::Theta,
                        "dD" => DualOp::DD,
                        _ => {
                            return Err(ScenarioError::Parse {
                                line: l,
                                col: c,
                                msg: format!("unknown dual op `{v}`"),
                            })
                        }
                    };
                    Recipe::Dual { of: of.to_string(), op }
                }
                _ => {
                    return Err(ScenarioError::Parse {
                        line: kl,
                        col: kc,
                        msg: format!("unknown module kind `{kind}`"),
                    })
                }
            };
            modules.push((label, recipe));
        } else if let Some(id) = section.name.strip_prefix("task.") {
            let id = id.to_string();
            if tasks.iter().any(|(l, _)| l == &id) {
                return Err(ScenarioError::DuplicateLabel(id));
            }
            let (kl, kc, kind) = fields.get("kind")?;
            let get_label = |key: &str| -> Result<String, ScenarioError> {
                Ok(fields.get(key)?.2.to_string())
            };
            let task = match kind {
                "ext_dims" => TaskKind::ExtDims { x: get_label("x")?, y: get_label("y")? },
                "duality_check" => {
                    TaskKind::DualityCheck { x: get_label("x")?, y: get_label("y")? }
                }
                "ep_check" => TaskKind::EpCheck { x: get_label("x")?, y: get_label("y")? },
                "aubert_check" => TaskKind::AubertCheck { module: get_label("module")? },
                "indres_check" => TaskKind::IndresCheck { module: get_label("module")? },
                "classify" => TaskKind::Classify { module: get_label("module")? },
                "elliptic_count" => TaskKind::EllipticCount,
                _ => {
                    return Err(ScenarioError::Parse {
                        line: kl,
                        col: kc,
                        msg: format!("unknown task kind `{kind}`"),
                    })
                }
            };
            tasks.push((id, task));
        } else {
            return Err(ScenarioError::Parse {
                line: section.line,
                col: 1,
                msg: format!("unknown section [{}]", section.name),
            });
        }
    }

    let Some(datum) = datum else {
        return Err(ScenarioError::Parse { line: 0, col: 0, msg: "missing [datum] section".into() });
    };

    // label resolution
    for (label, recipe) in &modules {
        if let Some(dep) = recipe.dependency() {
            if !modules.iter().any(|(l, _)| l == dep) {
                return Err(ScenarioError::UnresolvedLabel {
                    label: dep.to_string(),
                    referrer: format!("module.{label}"),
                });
            }
        }
    }
    for (id, task) in &tasks {
        for dep in task.references() {
            if !modules.iter().any(|(l, _)| l == dep) {
                return Err(ScenarioError::UnresolvedLabel {
                    label: dep.to_string(),
                    referrer: format!("task.{id}"),
                });
            }
        }
    }

    // acyclicity of recipe references
    for (label, _) in &modules {
        let mut seen = vec![label.as_str()];
        let mut current = label.as_str();
        loop {
            let recipe = &modules.iter().find(|(l, _)| l == current).unwrap().1;
            match recipe.dependency() {
                None => break,
                Some(dep) => {
                    if seen.contains(&dep) {
                        return Err(ScenarioError::Cycle(dep.to_string()));
                    }
                    seen.push(dep);
                    current = dep;
                }
            }
        }
    }

    Ok(Scenario { datum, modules, tasks })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
[datum]
type = A1
k = 1

[module.St]
kind = one_dim
signs = -

[module.triv]
kind = one_dim
signs = +

[task.e]
kind = ext_dims
x = St
y = triv
";

    #[test]
    fn minimal_scenario_parses() {
        let s = parse_scenario(MINIMAL).unwrap();
        assert_eq!(s.datum.type_label, "A1");
        assert_eq!(s.modules.len(), 2);
        assert_eq!(s.tasks.len(), 1);
    }

    #[test]
    fn unresolved_label_is_an_error() {
        let bad = MINIMAL.replace("y = triv", "y = X9");
        match parse_scenario(&bad) {
            Err(ScenarioError::UnresolvedLabel { label, referrer }) => {
                assert_eq!(label, "X9");
                assert_eq!(referrer, "task.e");
            }
            other => panic!("expected unresolved label, got {other:?}"),
        }
    }

    #[test]
    fn parse_error_carries_line_and_column() {
        let bad = MINIMAL.replace("signs = -", "signs = ?");
        match parse_scenario(&bad) {
            Err(ScenarioError::Parse { line, col, .. }) => {
                assert_eq!(line, 7);
                assert!(col > 1);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn cycles_are_detected() {
        let text = "\
[datum]
type = A1
k = 1

[module.a]
kind = dual
of = b
op = iota

[module.b]
kind = dual
of = a
op = iota
";
        assert!(matches!(parse_scenario(text), Err(ScenarioError::Cycle(_))));
    }

    #[test]
    fn forward_references_are_fine() {
        let text = "\
[datum]
type = A1
k = 1

[module.dSt]
kind = dual
of = St
op = dD

[module.St]
kind = one_dim
signs = -
";
        assert!(parse_scenario(text).is_ok());
    }
}
