//! Finite-dimensional modules for the graded affine Hecke algebra of a root
//! datum, given by exact matrices for the generators.
//!
//! A module stores one matrix per simple reflection (the action of `t_s`) and
//! one matrix per ambient basis vector (the action of `v`). Validation checks
//! the three defining relation families:
//!
//! 1. the reflection matrices satisfy the pairwise order relations of the
//!    Coxeter presentation, so `w -> t_w` is a representation of `W`;
//! 2. the vector matrices commute pairwise (the polynomial part is
//!    commutative);
//! 3. the cross relation
//!    `t_s v - s(v) t_s = k_s <v, alpha_s^vee>` holds for every simple
//!    reflection and every basis vector.
//!
//! On top of the raw data the module knows its tilde operators
//! `v - (1/2) sum_{beta > 0} k_beta <v, beta^vee> t_{s_beta}`,
//! which satisfy the commutation rule `t_w vtilde = (w(v))tilde t_w` and are
//! the building blocks of the Ext-complex differentials, and the duals and
//! twists `*`, `bullet`, `iota`, `theta` and their composite `D`.

use crate::linalg::{Mat, SpanBuilder};
use crate::rootsys::{HeckeContext, RootDatum};
use crate::scalar::{self, Scalar};
use num_traits::Zero;
use once_cell::sync::OnceCell;
use std::fmt::Write as _;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("modules live over different root data ({0} vs {1})")]
    ContextMismatch(String, String),
    #[error("module `{label}` fails validation: {first_failure}")]
    InvalidModule { label: String, first_failure: String },
    #[error("trace of `{label}` is not constant on conjugacy class {class}")]
    ClassConstancy { label: String, class: usize },
    #[error("isomorphism test inconclusive: hom space of dimension {hom_dim} exceeds the deterministic sweep budget")]
    IsomorphismInconclusive { hom_dim: usize },
    #[error("module parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Which family of defining relations a validation entry refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationFamily {
    WRelations,
    VCommutativity,
    CrossRelation,
}

impl std::fmt::Display for RelationFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RelationFamily::WRelations => write!(f, "W-relations"),
            RelationFamily::VCommutativity => write!(f, "V-commutativity"),
            RelationFamily::CrossRelation => write!(f, "cross relation"),
        }
    }
}

/// Outcome of checking one relation family.
#[derive(Debug, Clone)]
pub struct RelationCheck {
    pub family: RelationFamily,
    pub ok: bool,
    /// Description of the first violating instance, when `!ok`.
    pub first_violation: Option<String>,
}

/// Validation report: one entry per relation family.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub entries: Vec<RelationCheck>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.ok)
    }

    pub fn failing_families(&self) -> Vec<RelationFamily> {
        self.entries.iter().filter(|e| !e.ok).map(|e| e.family).collect()
    }

    pub fn first_failure(&self) -> Option<String> {
        self.entries.iter().find(|e| !e.ok).map(|e| {
            format!("{}: {}", e.family, e.first_violation.as_deref().unwrap_or("violated"))
        })
    }
}

/// A finite-dimensional module with exact generator matrices.
#[derive(Clone)]
pub struct HModule {
    ctx: Arc<HeckeContext>,
    pub label: String,
    dim: usize,
    gen_w: Vec<Mat>,
    gen_v: Vec<Mat>,
    w_action: OnceCell<Vec<Mat>>,
    tilde: OnceCell<Vec<Mat>>,
}

impl std::fmt::Debug for HModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "HModule({}, dim {}, over {})", self.label, self.dim, self.ctx.datum.type_label)
    }
}

impl HModule {
    /// Wraps raw matrices without validating the relations; use
    /// [`validate_module`] or [`HModule::validated`] afterwards.
    pub fn from_parts(
        ctx: Arc<HeckeContext>,
        label: impl Into<String>,
        gen_w: Vec<Mat>,
        gen_v: Vec<Mat>,
    ) -> Self {
        let rank = ctx.rank();
        let n = ctx.dim();
        assert_eq!(gen_w.len(), rank, "one matrix per simple reflection");
        assert_eq!(gen_v.len(), n, "one matrix per ambient basis vector");
        let dim = gen_v.first().map_or_else(|| gen_w[0].nrows(), Mat::nrows);
        for m in gen_w.iter().chain(&gen_v) {
            assert!(
                m.is_square() && m.nrows() == dim,
                "generator matrices must be square of equal size"
            );
        }
        HModule {
            ctx,
            label: label.into(),
            dim,
            gen_w,
            gen_v,
            w_action: OnceCell::new(),
            tilde: OnceCell::new(),
        }
    }

    /// Validates and returns the module, or the first failing relation.
    pub fn validated(self) -> Result<Self, AlgebraError> {
        let report = validate_module(&self);
        if report.all_pass() {
            Ok(self)
        } else {
            Err(AlgebraError::InvalidModule {
                label: self.label.clone(),
                first_failure: report.first_failure().unwrap(),
            })
        }
    }

    pub fn context(&self) -> &Arc<HeckeContext> {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gen_w(&self, s: usize) -> &Mat {
        &self.gen_w[s]
    }

    pub fn gen_v(&self, i: usize) -> &Mat {
        &self.gen_v[i]
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Action of `t_w` for every group element, computed once along reduced
    /// words (well-defined on validated modules).
    pub fn all_w(&self) -> &Vec<Mat> {
        self.w_action.get_or_init(|| {
            let weyl = &self.ctx.weyl;
            let mut out: Vec<Mat> = Vec::with_capacity(weyl.order());
            out.push(Mat::identity(self.dim));
            for idx in 1..weyl.order() {
                let word = &weyl.elements[idx].word;
                let s = *word.last().unwrap();
                let parent = weyl.multiply(idx, weyl.simple_reflection(s));
                debug_assert!(weyl.elements[parent].length < weyl.elements[idx].length);
                let m = &out[parent] * &self.gen_w[s];
                out.push(m);
            }
            out
        })
    }

    /// Matrix of `t_w`.
    pub fn act_w(&self, w: usize) -> &Mat {
        &self.all_w()[w]
    }

    /// Matrix of the (commuting) action of a vector with the given coordinates.
    pub fn act_v(&self, coords: &[Scalar]) -> Mat {
        assert_eq!(coords.len(), self.ctx.dim());
        let mut out = Mat::zeros(self.dim, self.dim);
        for (c, g) in coords.iter().zip(&self.gen_v) {
            if !c.is_zero() {
                out = &out + &g.scale(c);
            }
        }
        out
    }

    /// Matrix of the tilde element of a vector:
    /// `v - (1/2) sum_{beta > 0} k_beta <v, beta^vee> t_{s_beta}`.
    pub fn tilde_matrix(&self, coords: &[Scalar]) -> Mat {
        let mut out = self.act_v(coords);
        let datum = &self.ctx.datum;
        let half = scalar::half();
        for (p, pos) in datum.positive_roots.iter().enumerate() {
            let c = RootDatum::pair(&pos.coroot, coords);
            if c.is_zero() {
                continue;
            }
            let coeff = -(&half * &(datum.k_of_positive(p) * &c));
            let refl = self.ctx.weyl.pos_root_reflection[p];
            out = &out + &self.act_w(refl).scale(&coeff);
        }
        out
    }

    /// Tilde matrices of the ambient basis vectors, cached.
    pub fn tilde_basis(&self) -> &Vec<Mat> {
        self.tilde.get_or_init(|| {
            (0..self.ctx.dim())
                .map(|i| {
                    let coords: Vec<Scalar> = (0..self.ctx.dim())
                        .map(|j| if i == j { scalar::int(1) } else { Scalar::zero() })
                        .collect();
                    self.tilde_matrix(&coords)
                })
                .collect()
        })
    }

    /// Exact equality of the generator matrices (same context, same data).
    pub fn same_matrices(&self, other: &HModule) -> bool {
        self.ctx.datum == other.ctx.datum && self.gen_w == other.gen_w && self.gen_v == other.gen_v
    }
}

/// Checks the three defining relation families; failures are report entries,
/// never panics.
pub fn validate_module(m: &HModule) -> ValidationReport {
    let ctx = &m.ctx;
    let rank = ctx.rank();
    let n = ctx.dim();
    let id = Mat::identity(m.dim);

    // W-relations: pairwise order relations of the Coxeter presentation.
    let mut w_check =
        RelationCheck { family: RelationFamily::WRelations, ok: true, first_violation: None };
    'outer: for i in 0..rank {
        for j in i..rank {
            let si = ctx.weyl.simple_reflection(i);
            let sj = ctx.weyl.simple_reflection(j);
            let prod = ctx.weyl.multiply(si, sj);
            // order of s_i s_j in W
            let mut ord = 1usize;
            let mut acc = prod;
            while acc != 0 {
                acc = ctx.weyl.multiply(acc, prod);
                ord += 1;
            }
            let mm = &m.gen_w[i] * &m.gen_w[j];
            let mut pow = Mat::identity(m.dim);
            for _ in 0..ord {
                pow = &pow * &mm;
            }
            if pow != id {
                w_check.ok = false;
                w_check.first_violation =
                    Some(format!("(t_{{s{i}}} t_{{s{j}}})^{ord} != 1 on `{}`", m.label));
                break 'outer;
            }
        }
    }

    let mut v_check =
        RelationCheck { family: RelationFamily::VCommutativity, ok: true, first_violation: None };
    'v_outer: for i in 0..n {
        for j in i + 1..n {
            if &m.gen_v[i] * &m.gen_v[j] != &m.gen_v[j] * &m.gen_v[i] {
                v_check.ok = false;
                v_check.first_violation = Some(format!("[v_{i}, v_{j}] != 0 on `{}`", m.label));
                break 'v_outer;
            }
        }
    }

    let mut x_check =
        RelationCheck { family: RelationFamily::CrossRelation, ok: true, first_violation: None };
    'x_outer: for a in 0..rank {
        let refl = ctx.datum.simple_reflection_matrix(a);
        for i in 0..n {
            // t_s v - s(v) t_s = k_a <v, alpha_a^vee>
            let sv = refl.col_vec(i);
            let lhs = &(&m.gen_w[a] * &m.gen_v[i]) - &(&m.act_v(&sv) * &m.gen_w[a]);
            let c = ctx.datum.k_of_simple(a) * &ctx.datum.simple_coroots[a][i];
            let rhs = id.scale(&c);
            if lhs != rhs {
                x_check.ok = false;
                x_check.first_violation = Some(format!(
                    "t_{{s{a}}} v_{i} - s{a}(v_{i}) t_{{s{a}}} != k <v_{i}, a{a}^vee> on `{}`",
                    m.label
                ));
                break 'x_outer;
            }
        }
    }

    ValidationReport { entries: vec![w_check, v_check, x_check] }
}

// ---------------------------------------------------------------------------
// class functions and characters

/// An exact-valued function on the conjugacy classes of `W`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassFunction {
    pub values: Vec<Scalar>,
}

impl ClassFunction {
    pub fn value_at_element(&self, weyl: &crate::rootsys::WeylGroup, w: usize) -> &Scalar {
        &self.values[weyl.class_of[w]]
    }

    pub fn pointwise_mul(&self, other: &ClassFunction) -> ClassFunction {
        ClassFunction {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        }
    }

    pub fn add(&self, other: &ClassFunction) -> ClassFunction {
        ClassFunction {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> ClassFunction {
        ClassFunction { values: self.values.iter().map(|a| a * c).collect() }
    }

    pub fn zero(num_classes: usize) -> ClassFunction {
        ClassFunction { values: vec![Scalar::zero(); num_classes] }
    }
}

/// The sign character of `W` as a class function.
pub fn sgn_character(weyl: &crate::rootsys::WeylGroup) -> ClassFunction {
    ClassFunction {
        values: weyl.classes.iter().map(|c| scalar::int(weyl.elements[c[0]].sign as i64)).collect(),
    }
}

/// Restriction of a module to `W`, as a class function of traces. Errors if
/// the trace fails to be constant on a class, which signals an invalid module.
pub fn w_character(m: &HModule) -> Result<ClassFunction, AlgebraError> {
    let weyl = &m.ctx.weyl;
    let mut values = Vec::with_capacity(weyl.classes.len());
    for (cid, members) in weyl.classes.iter().enumerate() {
        let tr = m.act_w(members[0]).trace();
        if members.len() > 1 {
            let tr2 = m.act_w(members[1]).trace();
            if tr != tr2 {
                return Err(AlgebraError::ClassConstancy { label: m.label.clone(), class: cid });
            }
        }
        values.push(tr);
    }
    Ok(ClassFunction { values })
}

// ---------------------------------------------------------------------------
// duals and twists

pub(crate) fn check_same_context(x: &HModule, y: &HModule) -> Result<(), AlgebraError> {
    if x.ctx.datum == y.ctx.datum {
        Ok(())
    } else {
        Err(AlgebraError::ContextMismatch(
            x.ctx.datum.type_label.clone(),
            y.ctx.datum.type_label.clone(),
        ))
    }
}

/// Coordinates of `theta(e_i) = -w_0(e_i)`.
pub(crate) fn theta_basis_vector(ctx: &HeckeContext, i: usize) -> Vec<Scalar> {
    let w0 = &ctx.weyl.elements[ctx.weyl.longest].matrix;
    w0.col_vec(i).iter().map(|c| -c).collect()
}

/// Dual module for the anti-involution fixing `t_s` and sending
/// `v` to `t_{w_0} theta(v) t_{w_0}^{-1}`; realized on the dual basis with
/// transposed matrices.
pub fn dual_star(m: &HModule) -> HModule {
    let ctx = m.ctx.clone();
    let w0 = ctx.weyl.longest;
    let a = m.act_w(w0).clone();
    let a_inv = m.act_w(ctx.weyl.inverse(w0)).clone();
    let gen_w = m.gen_w.iter().map(Mat::transpose).collect();
    let gen_v = (0..ctx.dim())
        .map(|i| {
            let tv = m.act_v(&theta_basis_vector(&ctx, i));
            (&(&a * &tv) * &a_inv).transpose()
        })
        .collect();
    HModule::from_parts(ctx, format!("star({})", m.label), gen_w, gen_v)
}

/// Dual module for the anti-involution fixing both `t_s` and `v`; plain
/// transposes on the dual basis.
pub fn dual_bullet(m: &HModule) -> HModule {
    let gen_w = m.gen_w.iter().map(Mat::transpose).collect();
    let gen_v = m.gen_v.iter().map(Mat::transpose).collect();
    HModule::from_parts(m.ctx.clone(), format!("bullet({})", m.label), gen_w, gen_v)
}

/// Twist by the involution `v -> -v`, `t_w -> sgn(w) t_w`.
pub fn iota(m: &HModule) -> HModule {
    let gen_w = m.gen_w.iter().map(|g| -g).collect();
    let gen_v = m.gen_v.iter().map(|g| -g).collect();
    HModule::from_parts(m.ctx.clone(), format!("iota({})", m.label), gen_w, gen_v)
}

/// Twist by the automorphism `v -> -w_0(v)`, `t_w -> t_{w_0 w w_0^{-1}}`.
pub fn theta(m: &HModule) -> HModule {
    let ctx = m.ctx.clone();
    let w0 = ctx.weyl.longest;
    let gen_w = (0..ctx.rank())
        .map(|s| {
            let si = ctx.weyl.simple_reflection(s);
            let conj = ctx.weyl.multiply(ctx.weyl.multiply(w0, si), ctx.weyl.inverse(w0));
            m.act_w(conj).clone()
        })
        .collect();
    let gen_v = (0..ctx.dim()).map(|i| m.act_v(&theta_basis_vector(&ctx, i))).collect();
    HModule::from_parts(ctx, format!("theta({})", m.label), gen_w, gen_v)
}

/// The composite dual `D(X) = star(iota(bullet(X)))`; isomorphic to
/// `iota(theta(X))`, and the partner of `X` in the top-degree Ext pairing.
pub fn dd(m: &HModule) -> HModule {
    dual_star(&iota(&dual_bullet(m))).relabel(format!("D({})", m.label))
}

// ---------------------------------------------------------------------------
// intertwiners and isomorphism

/// Basis of the space of module maps `X -> Y`, as matrices acting on column
/// coordinates. Deterministic ordering.
pub fn hom_space(x: &HModule, y: &HModule) -> Result<Vec<Mat>, AlgebraError> {
    check_same_context(x, y)?;
    let dx = x.dim();
    let dy = y.dim();
    let gens: Vec<(&Mat, &Mat)> =
        x.gen_w.iter().zip(&y.gen_w).chain(x.gen_v.iter().zip(&y.gen_v)).collect();
    // unknown M (dy x dx), flattened row-major: constraint rho_Y(g) M - M rho_X(g) = 0
    let unknowns = dy * dx;
    let mut sys = Mat::zeros(unknowns * gens.len(), unknowns);
    for (g, (gx, gy)) in gens.iter().enumerate() {
        for r in 0..dy {
            for c in 0..dx {
                let row = g * unknowns + r * dx + c;
                // coefficient of M[a][c] in (gy * M)[r][c]
                for a in 0..dy {
                    if !gy[(r, a)].is_zero() {
                        sys[(row, a * dx + c)] += &gy[(r, a)];
                    }
                }
                // coefficient of M[r][b] in (M * gx)[r][c]
                for b in 0..dx {
                    if !gx[(b, c)].is_zero() {
                        sys[(row, r * dx + b)] -= &gx[(b, c)];
                    }
                }
            }
        }
    }
    let kernel = sys.kernel_basis();
    Ok(kernel.into_iter().map(|v| Mat::from_fn(dy, dx, |r, c| v[r * dx + c].clone())).collect())
}

const ISO_SWEEP_BUDGET: usize = 200_000;

/// Decides whether `X` and `Y` are isomorphic as modules.
///
/// The hom space is computed exactly; a candidate combination is invertible
/// iff its determinant is nonzero. `det(sum c_i M_i)` has degree at most
/// `dim` in each `c_i`, so if it vanishes on the whole grid `{0..dim}^k` it
/// vanishes identically and no invertible combination exists; the sweep is a
/// complete decision procedure up to the fixed grid budget.
pub fn is_isomorphic(x: &HModule, y: &HModule) -> Result<bool, AlgebraError> {
    check_same_context(x, y)?;
    if x.dim() != y.dim() {
        return Ok(false);
    }
    if x.same_matrices(y) {
        return Ok(true);
    }
    let homs = hom_space(x, y)?;
    if homs.is_empty() {
        return Ok(false);
    }
    for h in &homs {
        if !h.det().is_zero() {
            return Ok(true);
        }
    }
    if homs.len() == 1 {
        return Ok(false);
    }
    let k = homs.len();
    let d = x.dim();
    let grid = d + 1;
    let total = grid.checked_pow(k as u32).filter(|&t| t <= ISO_SWEEP_BUDGET);
    let Some(total) = total else {
        return Err(AlgebraError::IsomorphismInconclusive { hom_dim: k });
    };
    for idx in 0..total {
        let mut rem = idx;
        let mut cand = Mat::zeros(d, d);
        for h in &homs {
            let c = scalar::int((rem % grid) as i64);
            rem /= grid;
            if !c.is_zero() {
                cand = &cand + &h.scale(&c);
            }
        }
        if !cand.det().is_zero() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Dimension of the space of module maps; a quick Schur-style probe.
pub fn hom_dim(x: &HModule, y: &HModule) -> Result<usize, AlgebraError> {
    Ok(hom_space(x, y)?.len())
}

/// Restricts a module to an invariant subspace given by a basis (coordinate
/// vectors). Errors if the subspace is not invariant under the generators.
pub fn submodule_on_basis(
    m: &HModule,
    basis: &[Vec<Scalar>],
    label: impl Into<String>,
) -> Result<HModule, AlgebraError> {
    let dim = basis.len();
    let mut span = SpanBuilder::new(m.dim());
    for b in basis {
        assert!(span.insert(b), "subspace basis must be independent");
    }
    let restrict = |g: &Mat| -> Result<Mat, AlgebraError> {
        let mut out = Mat::zeros(dim, dim);
        for (j, b) in basis.iter().enumerate() {
            let img = g.apply(b);
            let coords = span.express(&img).ok_or_else(|| AlgebraError::InvalidModule {
                label: "submodule".into(),
                first_failure: "subspace is not invariant under the generators".into(),
            })?;
            for i in 0..dim {
                out[(i, j)] = coords[i].clone();
            }
        }
        Ok(out)
    };
    let gen_w = m.gen_w.iter().map(&restrict).collect::<Result<Vec<_>, _>>()?;
    let gen_v = m.gen_v.iter().map(&restrict).collect::<Result<Vec<_>, _>>()?;
    Ok(HModule::from_parts(m.ctx.clone(), label, gen_w, gen_v))
}

// ---------------------------------------------------------------------------
// serialization

/// Structured text for a module, with the root datum inlined. `p/q` scalars
/// throughout; round-trips bit-exactly.
pub fn module_to_text(m: &HModule) -> String {
    let mut out = crate::rootsys::datum_to_text(&m.ctx.datum);
    let _ = writeln!(out, "[module]");
    let _ = writeln!(out, "label = {}", m.label);
    let _ = writeln!(out, "dim = {}", m.dim);
    for (s, g) in m.gen_w.iter().enumerate() {
        let _ = writeln!(out, "gen_w{} = {}", s, render_matrix(g));
    }
    for (i, g) in m.gen_v.iter().enumerate() {
        let _ = writeln!(out, "gen_v{} = {}", i, render_matrix(g));
    }
    out
}

fn render_matrix(m: &Mat) -> String {
    let mut entries = Vec::with_capacity(m.nrows() * m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            entries.push(scalar::render(&m[(i, j)]));
        }
    }
    entries.join(" ")
}

fn parse_matrix(text: &str, dim: usize, line: usize) -> Result<Mat, AlgebraError> {
    let entries: Vec<Scalar> = text
        .split_whitespace()
        .map(|tok| {
            scalar::parse(tok).ok_or(AlgebraError::Parse { line, msg: format!("bad scalar `{tok}`") })
        })
        .collect::<Result<_, _>>()?;
    if entries.len() != dim * dim {
        return Err(AlgebraError::Parse {
            line,
            msg: format!("expected {} entries, got {}", dim * dim, entries.len()),
        });
    }
    Ok(Mat::from_fn(dim, dim, |i, j| entries[i * dim + j].clone()))
}

/// Parses the output of [`module_to_text`]. When `ctx` is supplied the
/// document may reference the datum by label (`datum = <type>`); otherwise an
/// inline `[datum]` section is required. The result is validated.
pub fn module_from_text(
    text: &str,
    ctx: Option<Arc<HeckeContext>>,
) -> Result<HModule, AlgebraError> {
    let fields = crate::rootsys::parse_kv_section(text, "module")
        .map_err(|e| AlgebraError::Parse { line: 0, msg: e.to_string() })?;
    let get = |key: &str| -> Result<&(usize, String), AlgebraError> {
        fields
            .get(key)
            .ok_or_else(|| AlgebraError::Parse { line: 0, msg: format!("missing key `{key}`") })
    };
    let ctx = if text.lines().any(|l| l.trim() == "[datum]") {
        let datum = crate::rootsys::datum_from_text(text)
            .map_err(|e| AlgebraError::Parse { line: 0, msg: e.to_string() })?;
        HeckeContext::new(datum).map_err(|e| AlgebraError::Parse { line: 0, msg: e.to_string() })?
    } else {
        let (line, label) = get("datum")?;
        let ctx = ctx.ok_or(AlgebraError::Parse {
            line: *line,
            msg: "no inline [datum] and no context supplied".into(),
        })?;
        if &ctx.datum.type_label != label {
            return Err(AlgebraError::Parse {
                line: *line,
                msg: format!("datum label `{label}` does not match `{}`", ctx.datum.type_label),
            });
        }
        ctx
    };
    let (dline, dtext) = get("dim")?;
    let dim: usize = dtext
        .parse()
        .map_err(|_| AlgebraError::Parse { line: *dline, msg: format!("bad dim `{dtext}`") })?;
    let label = get("label")?.1.clone();
    let mut gen_w = Vec::with_capacity(ctx.rank());
    for s in 0..ctx.rank() {
        let (line, text) = get(&format!("gen_w{s}"))?;
        gen_w.push(parse_matrix(text, dim, *line)?);
    }
    let mut gen_v = Vec::with_capacity(ctx.dim());
    for i in 0..ctx.dim() {
        let (line, text) = get(&format!("gen_v{i}"))?;
        gen_v.push(parse_matrix(text, dim, *line)?);
    }
    HModule::from_parts(ctx, label, gen_w, gen_v).validated()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{one_dim_module, principal_series, steinberg, trivial_module};
    use crate::scalar::int;

    fn a1() -> Arc<HeckeContext> {
        HeckeContext::build("A1", &[int(1)], 0).unwrap()
    }

    fn a2() -> Arc<HeckeContext> {
        HeckeContext::build("A2", &[int(1)], 0).unwrap()
    }

    #[test]
    fn steinberg_a1_validates_and_corruption_fails() {
        let ctx = a1();
        let st = steinberg(&ctx).unwrap();
        assert!(validate_module(&st).all_pass());

        // flip the sign of the vector action: cross relation must fail
        let bad = HModule::from_parts(
            ctx.clone(),
            "corrupt",
            vec![Mat::from_int_rows(&[&[-1]])],
            vec![Mat::from_int_rows(&[&[1]])],
        );
        let report = validate_module(&bad);
        assert!(!report.all_pass());
        assert_eq!(report.failing_families(), vec![RelationFamily::CrossRelation]);
    }

    #[test]
    fn braid_violation_is_reported_as_w_relations() {
        let ctx = a2();
        // t_{s0} = +1, t_{s1} = -1 cannot satisfy (s0 s1)^3 = 1
        let bad = HModule::from_parts(
            ctx,
            "braid-broken",
            vec![Mat::from_int_rows(&[&[1]]), Mat::from_int_rows(&[&[-1]])],
            vec![Mat::from_int_rows(&[&[1]]), Mat::from_int_rows(&[&[-1]])],
        );
        let report = validate_module(&bad);
        assert!(report.failing_families().contains(&RelationFamily::WRelations));
    }

    #[test]
    fn noncommuting_vector_action_is_reported() {
        let d2 = crate::rootsys::build_root_datum("A1", &[int(1)], 1).unwrap();
        let ctx2 = HeckeContext::new(d2).unwrap();
        let bad = HModule::from_parts(
            ctx2,
            "noncommuting",
            vec![Mat::from_int_rows(&[&[0, 1], &[1, 0]])],
            vec![Mat::from_int_rows(&[&[0, 1], &[0, 0]]), Mat::from_int_rows(&[&[0, 0], &[1, 0]])],
        );
        let report = validate_module(&bad);
        assert!(report.failing_families().contains(&RelationFamily::VCommutativity));
    }

    #[test]
    fn act_w_on_principal_series_matches_hand_computation() {
        let ctx = a1();
        let m = principal_series(&ctx, &[int(3)]).unwrap();
        assert_eq!(m.act_w(0), &Mat::identity(2));
        assert_eq!(m.act_w(1), &Mat::from_int_rows(&[&[0, 1], &[1, 0]]));
        assert_eq!(m.act_v(&[int(1)]), Mat::from_int_rows(&[&[3, 2], &[0, -3]]));
        assert_eq!(m.tilde_matrix(&[int(1)]), Mat::from_int_rows(&[&[3, 1], &[-1, -3]]));
    }

    #[test]
    fn tilde_vanishes_on_one_dimensional_modules_of_a1() {
        let ctx = a1();
        for m in [trivial_module(&ctx).unwrap(), steinberg(&ctx).unwrap()] {
            assert!(m.tilde_matrix(&[int(1)]).is_zero());
        }
    }

    #[test]
    fn tilde_commutation_rule_holds_on_battery_modules() {
        for ctx in [a1(), a2()] {
            let mods = [
                trivial_module(&ctx).unwrap(),
                steinberg(&ctx).unwrap(),
                principal_series(&ctx, &vec![int(3); ctx.dim()]).unwrap(),
            ];
            for m in &mods {
                for w in 0..ctx.weyl.order() {
                    for i in 0..ctx.dim() {
                        let e_i: Vec<Scalar> = (0..ctx.dim())
                            .map(|j| if i == j { int(1) } else { Scalar::zero() })
                            .collect();
                        let wv = ctx.weyl.elements[w].matrix.apply(&e_i);
                        // t_w vtilde = (w v)tilde t_w
                        let lhs = m.act_w(w) * &m.tilde_matrix(&e_i);
                        let rhs = &m.tilde_matrix(&wv) * m.act_w(w);
                        assert_eq!(lhs, rhs, "{} on {}", m.label, ctx.datum.type_label);
                    }
                }
            }
        }
    }

    #[test]
    fn duals_and_twists_are_involutive() {
        let ctx = a2();
        let m = principal_series(&ctx, &[int(3), int(3)]).unwrap();
        assert!(dual_star(&dual_star(&m)).same_matrices(&m));
        assert!(dual_bullet(&dual_bullet(&m)).same_matrices(&m));
        assert!(iota(&iota(&m)).same_matrices(&m));
        assert!(theta(&theta(&m)).same_matrices(&m));
    }

    #[test]
    fn star_and_bullet_transpose_tilde_with_the_right_signs() {
        let ctx = a2();
        let m = principal_series(&ctx, &[int(3), int(3)]).unwrap();
        let star = dual_star(&m).validated().unwrap();
        let bullet = dual_bullet(&m).validated().unwrap();
        let the = theta(&m).validated().unwrap();
        for i in 0..ctx.dim() {
            let t = &m.tilde_basis()[i];
            assert_eq!(star.tilde_basis()[i], -&t.transpose());
            assert_eq!(bullet.tilde_basis()[i], t.transpose());
            // theta(vtilde) = (theta v)tilde
            let tv = theta_basis_vector(&ctx, i);
            assert_eq!(the.tilde_basis()[i], m.tilde_matrix(&tv));
        }
        // iota(vtilde) = -vtilde
        let io = iota(&m).validated().unwrap();
        for i in 0..ctx.dim() {
            assert_eq!(io.tilde_basis()[i], -&m.tilde_basis()[i]);
        }
    }

    #[test]
    fn hom_spaces_on_a1() {
        let ctx = a1();
        let st = steinberg(&ctx).unwrap();
        let triv = trivial_module(&ctx).unwrap();
        let m = principal_series(&ctx, &[int(3)]).unwrap();
        assert_eq!(hom_dim(&st, &st).unwrap(), 1);
        assert_eq!(hom_dim(&triv, &st).unwrap(), 0);
        assert_eq!(hom_dim(&m, &m).unwrap(), 1);
    }

    #[test]
    fn isomorphism_checks() {
        let ctx = a1();
        let st = steinberg(&ctx).unwrap();
        let triv = trivial_module(&ctx).unwrap();
        assert!(is_isomorphic(&st, &st).unwrap());
        assert!(!is_isomorphic(&triv, &st).unwrap());
        assert!(is_isomorphic(&iota(&triv), &st).unwrap());
        // D(triv) ~ St, D(St) ~ triv on A1
        assert!(is_isomorphic(&dd(&triv), &st).unwrap());
        assert!(is_isomorphic(&dd(&st), &triv).unwrap());
    }

    #[test]
    fn dd_agrees_with_iota_theta() {
        for ctx in [a1(), a2()] {
            for m in [
                trivial_module(&ctx).unwrap(),
                steinberg(&ctx).unwrap(),
                principal_series(&ctx, &vec![int(3); ctx.dim()]).unwrap(),
            ] {
                let d = dd(&m).validated().unwrap();
                assert_eq!(d.dim(), m.dim());
                assert!(is_isomorphic(&d, &iota(&theta(&m))).unwrap(), "{}", m.label);
            }
        }
    }

    #[test]
    fn characters_of_small_modules() {
        let ctx = a2();
        let triv = trivial_module(&ctx).unwrap();
        let st = steinberg(&ctx).unwrap();
        let m = principal_series(&ctx, &[int(0), int(0)]).unwrap();
        assert_eq!(w_character(&triv).unwrap().values, vec![int(1); 3]);
        assert_eq!(w_character(&st).unwrap(), sgn_character(&ctx.weyl));
        // regular character: |W| at the identity class, 0 elsewhere
        let reg = w_character(&m).unwrap();
        for (cid, members) in ctx.weyl.classes.iter().enumerate() {
            let expect = if members == &vec![0] { int(6) } else { int(0) };
            assert_eq!(reg.values[cid], expect);
        }
        // theta preserves characters, iota twists by sign
        let m3 = principal_series(&ctx, &[int(3), int(3)]).unwrap();
        assert_eq!(w_character(&theta(&m3)).unwrap(), w_character(&m3).unwrap());
        assert_eq!(
            w_character(&iota(&m3)).unwrap(),
            w_character(&m3).unwrap().pointwise_mul(&sgn_character(&ctx.weyl))
        );
    }

    #[test]
    fn one_dim_existence_condition() {
        let ctx = a2();
        // mixed signs on one orbit cannot extend to a character of W(A2)
        assert!(one_dim_module(&ctx, &[1, -1]).is_err());
    }

    #[test]
    fn module_text_round_trip() {
        let ctx = a1();
        let m = principal_series(&ctx, &[int(3)]).unwrap();
        let text = module_to_text(&m);
        let back = module_from_text(&text, None).unwrap();
        assert!(m.same_matrices(&back));
        assert_eq!(module_to_text(&back), text);
        // reference-by-label path
        let mut by_label =
            String::from("[module]\nlabel = St\ndim = 1\ndatum = A1\ngen_w0 = -1/1\ngen_v0 = -1/1\n");
        let st = module_from_text(&by_label, Some(ctx.clone())).unwrap();
        assert!(st.same_matrices(&steinberg(&ctx).unwrap()));
        by_label = by_label.replace("datum = A1", "datum = A2");
        assert!(module_from_text(&by_label, Some(ctx)).is_err());
    }
}
