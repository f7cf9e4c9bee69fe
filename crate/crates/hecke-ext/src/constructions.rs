//! Concrete module constructions: one-dimensional characters, principal
//! series, parabolic induction and restriction; plus the weight-space
//! analysis (joint generalized eigenvalues of the commuting vector action)
//! that feeds central characters and the tempered/discrete-series tests.
//!
//! The vector action on induced bases is assembled twice, through two
//! independent rewriting routes:
//!
//! - the tilde route, using `v = vtilde + (1/2) sum k_beta <v, beta^vee>
//!   t_{s_beta}` and the commutation rule `vtilde t_u = t_u (u^{-1} v)tilde`;
//! - the raw route, pushing `v` through the reduced word of `t_u` one cross
//!   relation at a time.
//!
//! Constructors assert that the two routes agree, which pins down every sign
//! in the correction terms.

use crate::algebra::{AlgebraError, HModule};
use crate::linalg::Mat;
use crate::poly::{self, SplitError};
use crate::rootsys::{HeckeContext, RootDatum, RootSysError};
use crate::scalar::{self, Scalar};
use num_traits::Zero;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("sign pattern is not constant on W-orbits of simple roots, so it does not extend to a character of W")]
    NotACharacter,
    #[error("a plain weight character needs a root-free datum; this one has rank {0}")]
    RankNotZero(usize),
    #[error("module is over `{got}` but the parabolic subdatum is `{expected}`")]
    SubdatumMismatch { expected: String, got: String },
    #[error("weight computation failed: {0}")]
    Spectrum(#[from] SplitError),
    #[error("module has no single central character; weights fall into {0} distinct W-orbits")]
    MultipleOrbits(usize),
    #[error("tempered/discrete-series test requires the roots to span the ambient space")]
    SpanRequired,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    RootSys(#[from] RootSysError),
}

/// A weight: the covector `gamma`, stored by its values on the ambient basis.
pub type Weight = Vec<Scalar>;

/// The W-orbit of a weight, stored sorted; this is how central characters
/// are compared.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralCharacter {
    pub orbit: Vec<Weight>,
}

impl CentralCharacter {
    /// Orbit of a single weight.
    pub fn of_weight(ctx: &HeckeContext, gamma: &Weight) -> CentralCharacter {
        let mut orbit: Vec<Weight> =
            (0..ctx.weyl.order()).map(|w| ctx.weyl.act_on_weight(w, gamma)).collect();
        orbit.sort();
        orbit.dedup();
        CentralCharacter { orbit }
    }

    pub fn contains(&self, gamma: &Weight) -> bool {
        self.orbit.binary_search(gamma).is_ok()
    }
}

// ---------------------------------------------------------------------------
// one-dimensional modules

/// One-dimensional module from a sign pattern on the simple roots. The
/// pattern must be constant on W-orbits of simple roots (equivalently, it
/// extends to a character of W); the vector action is then forced by the
/// cross relation: `gamma(alpha) = eps(alpha) k_alpha`, zero off the span of
/// the roots.
pub fn one_dim_module(ctx: &Arc<HeckeContext>, signs: &[i32]) -> Result<HModule, ConstructError> {
    let rank = ctx.rank();
    let signs: Vec<i32> = match signs.len() {
        1 => vec![signs[0]; rank],
        l if l == rank => signs.to_vec(),
        _ => return Err(ConstructError::NotACharacter),
    };
    assert!(signs.iter().all(|s| *s == 1 || *s == -1), "signs must be +1 or -1");
    for i in 0..rank {
        for j in i + 1..rank {
            if ctx.datum.orbit_of_simple[i] == ctx.datum.orbit_of_simple[j]
                && signs[i] != signs[j]
            {
                return Err(ConstructError::NotACharacter);
            }
        }
    }
    let gen_w: Vec<Mat> =
        signs.iter().map(|&s| Mat::from_int_rows(&[&[s as i64]])).collect();
    // gamma(alpha_i) = eps_i k_i; in the standard realization each simple root
    // is a coordinate vector, so gamma is zero on the other coordinates.
    let mut gamma = vec![Scalar::zero(); ctx.dim()];
    for (i, root) in ctx.datum.simple_roots.iter().enumerate() {
        let coord = root
            .iter()
            .position(|c| !c.is_zero())
            .expect("simple root is a coordinate vector in this realization");
        debug_assert!(root.iter().enumerate().all(|(j, c)| j == coord || c.is_zero()));
        gamma[coord] = ctx.datum.k_of_simple(i) * scalar::int(signs[i] as i64) / &root[coord];
    }
    let gen_v: Vec<Mat> = gamma.iter().map(|g| {
        let mut m = Mat::zeros(1, 1);
        m[(0, 0)] = g.clone();
        m
    }).collect();
    let label = if signs.iter().all(|&s| s == 1) {
        "triv".to_string()
    } else if signs.iter().all(|&s| s == -1) {
        "St".to_string()
    } else {
        let pat: Vec<String> =
            signs.iter().map(|&s| if s > 0 { "+".into() } else { "-".to_string() }).collect();
        format!("chi({})", pat.join(""))
    };
    Ok(HModule::from_parts(ctx.clone(), label, gen_w, gen_v).validated()?)
}

/// The trivial module: all `t_s` act by `+1`.
pub fn trivial_module(ctx: &Arc<HeckeContext>) -> Result<HModule, ConstructError> {
    one_dim_module(ctx, &[1])
}

/// The Steinberg module: all `t_s` act by `-1`.
pub fn steinberg(ctx: &Arc<HeckeContext>) -> Result<HModule, ConstructError> {
    one_dim_module(ctx, &[-1])
}

/// One-dimensional module with an arbitrary weight over a root-free datum
/// (the polynomial part alone). Used as the induction seed that rebuilds a
/// principal series from the empty parabolic.
pub fn sv_character(ctx: &Arc<HeckeContext>, gamma: &Weight) -> Result<HModule, ConstructError> {
    if ctx.rank() != 0 {
        return Err(ConstructError::RankNotZero(ctx.rank()));
    }
    assert_eq!(gamma.len(), ctx.dim());
    let gen_v: Vec<Mat> = gamma
        .iter()
        .map(|g| {
            let mut m = Mat::zeros(1, 1);
            m[(0, 0)] = g.clone();
            m
        })
        .collect();
    Ok(HModule::from_parts(ctx.clone(), "C_gamma", vec![], gen_v).validated()?)
}

// ---------------------------------------------------------------------------
// principal series

/// Principal series `M(gamma)` on the basis `t_w (x) 1`, `w` in enumeration
/// order. `t_s` acts by left multiplication in the group; the vector action
/// comes from the tilde route and is cross-checked against the raw
/// cross-relation rewrite.
pub fn principal_series(
    ctx: &Arc<HeckeContext>,
    gamma: &[Scalar],
) -> Result<HModule, ConstructError> {
    assert_eq!(gamma.len(), ctx.dim());
    let weyl = &ctx.weyl;
    let datum = &ctx.datum;
    let order = weyl.order();
    let gen_w: Vec<Mat> = (0..ctx.rank())
        .map(|s| {
            let mut m = Mat::zeros(order, order);
            for w in 0..order {
                let sw = weyl.multiply(weyl.simple_reflection(s), w);
                m[(sw, w)] = scalar::int(1);
            }
            m
        })
        .collect();

    let half = scalar::half();
    let mut gen_v = Vec::with_capacity(ctx.dim());
    for i in 0..ctx.dim() {
        let e_i: Vec<Scalar> =
            (0..ctx.dim()).map(|j| if i == j { scalar::int(1) } else { Scalar::zero() }).collect();
        let mut m = Mat::zeros(order, order);
        for w in 0..order {
            let winv_v = weyl.elements[weyl.inverse(w)].matrix.apply(&e_i);
            // diagonal part gamma(w^{-1} v)
            m[(w, w)] += RootDatum::pair(gamma, &winv_v);
            for (p, pos) in datum.positive_roots.iter().enumerate() {
                let k = datum.k_of_positive(p);
                let refl = weyl.pos_root_reflection[p];
                // - (1/2) k <w^{-1} v, beta^vee> at t_{w s_beta}
                let c1 = RootDatum::pair(&pos.coroot, &winv_v);
                if !c1.is_zero() {
                    let row = weyl.multiply(w, refl);
                    m[(row, w)] -= &half * &(k * &c1);
                }
                // + (1/2) k <v, beta^vee> at t_{s_beta w}
                let c2 = &pos.coroot[i];
                if !c2.is_zero() {
                    let row = weyl.multiply(refl, w);
                    m[(row, w)] += &half * &(k * c2);
                }
            }
        }
        // independent route: iterated cross-relation rewrite
        debug_assert_eq!(m, principal_series_v_raw(ctx, gamma, i));
        gen_v.push(m);
    }
    let label = format!(
        "M({})",
        gamma.iter().map(scalar::render_short).collect::<Vec<_>>().join(",")
    );
    Ok(HModule::from_parts(ctx.clone(), label, gen_w, gen_v).validated()?)
}

/// Raw cross-relation route for the vector action on a principal series:
/// pushes `v` through the reduced word of each basis element, one relation
/// at a time. Exposed for tests; `principal_series` asserts agreement.
pub fn principal_series_v_raw(ctx: &Arc<HeckeContext>, gamma: &[Scalar], i: usize) -> Mat {
    let weyl = &ctx.weyl;
    let order = weyl.order();
    let e_i: Vec<Scalar> =
        (0..ctx.dim()).map(|j| if i == j { scalar::int(1) } else { Scalar::zero() }).collect();
    let mut m = Mat::zeros(order, order);
    for w in 0..order {
        let word = weyl.elements[w].word.clone();
        for (target, coeff) in push_v_through_word(ctx, &e_i, &word) {
            match target {
                PushTarget::Group(g) => m[(g, w)] += coeff,
                PushTarget::GroupTimesVector(g, v) => {
                    m[(g, w)] += coeff * RootDatum::pair(gamma, &v)
                }
            }
        }
    }
    m
}

enum PushTarget {
    /// a plain group-algebra term `t_g`
    Group(usize),
    /// `t_g v` with `v` ready to hit the module
    GroupTimesVector(usize, Vec<Scalar>),
}

/// Normal form of `v * t_{s_{a_1}} ... t_{s_{a_l}}` using only
/// `v t_s = t_s s(v) + k_s <v, alpha_s^vee>`.
fn push_v_through_word(
    ctx: &HeckeContext,
    v: &[Scalar],
    word: &[usize],
) -> Vec<(PushTarget, Scalar)> {
    let weyl = &ctx.weyl;
    let mut out = Vec::new();
    // stack of (prefix group element, current vector, remaining word, coefficient)
    let mut stack = vec![(0usize, v.to_vec(), word, scalar::int(1))];
    while let Some((prefix, vec, rest, coeff)) = stack.pop() {
        match rest.split_first() {
            None => out.push((PushTarget::GroupTimesVector(prefix, vec), coeff)),
            Some((&s, tail)) => {
                let refl = ctx.datum.simple_reflection_matrix(s);
                let sv = refl.apply(&vec);
                let new_prefix = weyl.multiply(prefix, weyl.simple_reflection(s));
                stack.push((new_prefix, sv, tail, coeff.clone()));
                let c = ctx.datum.k_of_simple(s)
                    * RootDatum::pair(&ctx.datum.simple_coroots[s], &vec);
                if !c.is_zero() {
                    // constant term: t_prefix * t_{tail}
                    let mut g = prefix;
                    for &t in tail {
                        g = weyl.multiply(g, weyl.simple_reflection(t));
                    }
                    out.push((PushTarget::Group(g), coeff * c));
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// parabolic induction and restriction

/// Restriction to the parabolic subalgebra of `subset`: same matrices, the
/// root datum shrinks to the roots in the span of the chosen simple roots
/// (the ambient space and the full vector action stay).
pub fn restrict_to_parabolic(
    x: &HModule,
    subset: &[usize],
) -> Result<HModule, ConstructError> {
    let sub = x.context().parabolic_subcontext(subset)?;
    let gen_w: Vec<Mat> = {
        let mut sorted = subset.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        sorted.iter().map(|&s| x.gen_w(s).clone()).collect()
    };
    let gen_v: Vec<Mat> = (0..x.context().dim()).map(|i| x.gen_v(i).clone()).collect();
    let label = format!("Res[{}]({})", subset_string(subset), x.label);
    Ok(HModule::from_parts(sub, label, gen_w, gen_v).validated()?)
}

fn subset_string(subset: &[usize]) -> String {
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    sorted.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
}

/// Parabolic induction `H (x)_{H_J} X_J` on the basis `t_u (x) x_b` with `u`
/// running over the minimal coset representatives. The module `x_j` must
/// live over the parabolic subdatum of `subset`.
pub fn parabolic_induction(
    parent: &Arc<HeckeContext>,
    subset: &[usize],
    x_j: &HModule,
) -> Result<HModule, ConstructError> {
    let sub = parent.parabolic_subcontext(subset)?;
    if x_j.context().datum != sub.datum {
        return Err(ConstructError::SubdatumMismatch {
            expected: sub.datum.type_label.clone(),
            got: x_j.context().datum.type_label.clone(),
        });
    }
    let weyl = &parent.weyl;
    let datum = &parent.datum;
    let pdata = weyl.parabolic_data(subset)?;
    let reps = &pdata.min_reps;
    let dx = x_j.dim();
    let dim = reps.len() * dx;
    let flat = |p: usize, b: usize| p * dx + b;
    // action of a W_J element (given as a parent index) on X_J
    let sub_act = |parent_idx: usize| -> &Mat {
        let m = &weyl.elements[parent_idx].matrix;
        let sub_idx = x_j
            .context()
            .weyl
            .index_of_matrix(m)
            .expect("factorization lands in the subgroup");
        x_j.act_w(sub_idx)
    };

    let mut gen_w = Vec::with_capacity(parent.rank());
    for s in 0..parent.rank() {
        let mut m = Mat::zeros(dim, dim);
        for (p, &u) in reps.iter().enumerate() {
            let su = weyl.multiply(weyl.simple_reflection(s), u);
            let (p2, wj) = pdata.factor[su];
            let a = sub_act(wj);
            for b in 0..dx {
                for b2 in 0..dx {
                    if !a[(b2, b)].is_zero() {
                        m[(flat(p2, b2), flat(p, b))] += &a[(b2, b)];
                    }
                }
            }
        }
        gen_w.push(m);
    }

    // which parent positive roots lie in the subsystem
    let sub_roots: Vec<&Vec<Scalar>> = sub.datum.positive_roots.iter().map(|p| &p.root).collect();
    let in_sub: Vec<bool> =
        datum.positive_roots.iter().map(|p| sub_roots.contains(&&p.root)).collect();

    let half = scalar::half();
    let mut gen_v = Vec::with_capacity(parent.dim());
    for i in 0..parent.dim() {
        let e_i: Vec<Scalar> = (0..parent.dim())
            .map(|j| if i == j { scalar::int(1) } else { Scalar::zero() })
            .collect();
        let mut m = Mat::zeros(dim, dim);
        for (p, &u) in reps.iter().enumerate() {
            let uinv_v = weyl.elements[weyl.inverse(u)].matrix.apply(&e_i);
            // t_u (x) (u^{-1} v)tilde_{H_J} . x
            let tj = x_j.tilde_matrix(&uinv_v);
            for b in 0..dx {
                for b2 in 0..dx {
                    if !tj[(b2, b)].is_zero() {
                        m[(flat(p, b2), flat(p, b))] += &tj[(b2, b)];
                    }
                }
            }
            for (pr, pos) in datum.positive_roots.iter().enumerate() {
                let k = datum.k_of_positive(pr);
                let refl = weyl.pos_root_reflection[pr];
                // - (1/2) k <u^{-1} v, beta^vee> t_{u s_beta} (x) x for beta outside R_J
                if !in_sub[pr] {
                    let c1 = RootDatum::pair(&pos.coroot, &uinv_v);
                    if !c1.is_zero() {
                        let g = weyl.multiply(u, refl);
                        let (p2, wj) = pdata.factor[g];
                        let a = sub_act(wj);
                        let coeff = -(&half * &(k * &c1));
                        for b in 0..dx {
                            for b2 in 0..dx {
                                if !a[(b2, b)].is_zero() {
                                    m[(flat(p2, b2), flat(p, b))] += &coeff * &a[(b2, b)];
                                }
                            }
                        }
                    }
                }
                // + (1/2) k <v, beta^vee> t_{s_beta u} (x) x over all beta > 0
                let c2 = &pos.coroot[i];
                if !c2.is_zero() {
                    let g = weyl.multiply(refl, u);
                    let (p2, wj) = pdata.factor[g];
                    let a = sub_act(wj);
                    let coeff = &half * &(k * c2);
                    for b in 0..dx {
                        for b2 in 0..dx {
                            if !a[(b2, b)].is_zero() {
                                m[(flat(p2, b2), flat(p, b))] += &coeff * &a[(b2, b)];
                            }
                        }
                    }
                }
            }
        }
        debug_assert_eq!(m, induced_v_raw(parent, subset, x_j, i));
        gen_v.push(m);
    }
    let label = format!("Ind[{}]({})", subset_string(subset), x_j.label);
    Ok(HModule::from_parts(parent.clone(), label, gen_w, gen_v).validated()?)
}

/// Raw cross-relation route for the vector action on an induced module.
pub fn induced_v_raw(
    parent: &Arc<HeckeContext>,
    subset: &[usize],
    x_j: &HModule,
    i: usize,
) -> Mat {
    let weyl = &parent.weyl;
    let pdata = weyl.parabolic_data(subset).expect("subset validated by caller");
    let reps = &pdata.min_reps;
    let dx = x_j.dim();
    let dim = reps.len() * dx;
    let flat = |p: usize, b: usize| p * dx + b;
    let sub_act = |parent_idx: usize| -> &Mat {
        let m = &weyl.elements[parent_idx].matrix;
        x_j.act_w(x_j.context().weyl.index_of_matrix(m).expect("subgroup element"))
    };
    let e_i: Vec<Scalar> = (0..parent.dim())
        .map(|j| if i == j { scalar::int(1) } else { Scalar::zero() })
        .collect();
    let mut m = Mat::zeros(dim, dim);
    for (p, &u) in reps.iter().enumerate() {
        let word = weyl.elements[u].word.clone();
        for (target, coeff) in push_v_through_word(parent, &e_i, &word) {
            let (g, v_part): (usize, Option<Vec<Scalar>>) = match target {
                PushTarget::Group(g) => (g, None),
                PushTarget::GroupTimesVector(g, v) => (g, Some(v)),
            };
            let (p2, wj) = pdata.factor[g];
            // t_g (x) x = t_{u'} t_{w_J} (x) x; a trailing vector acts on X_J first
            let a = sub_act(wj).clone();
            let block = match v_part {
                None => a,
                Some(v) => &a * &x_j.act_v(&v),
            };
            for b in 0..dx {
                for b2 in 0..dx {
                    if !block[(b2, b)].is_zero() {
                        m[(flat(p2, b2), flat(p, b))] += &coeff * &block[(b2, b)];
                    }
                }
            }
        }
    }
    m
}

// ---------------------------------------------------------------------------
// weights and classification

/// Multiset of weights: joint generalized eigenvalues of the commuting
/// vector action, with multiplicities summing to `dim X`. Errors when a
/// characteristic polynomial fails to split over the rationals.
pub fn weights(x: &HModule) -> Result<Vec<Weight>, ConstructError> {
    let n = x.context().dim();
    let full: Vec<Vec<Scalar>> = (0..x.dim())
        .map(|j| {
            (0..x.dim())
                .map(|i| if i == j { scalar::int(1) } else { Scalar::zero() })
                .collect()
        })
        .collect();
    let mut leaves: Vec<(Vec<Scalar>, Vec<Vec<Scalar>>)> = vec![(Vec::new(), full)];
    for op in 0..n {
        let g = x.gen_v(op);
        let mut next = Vec::new();
        for (trail, basis) in leaves {
            let bmat = basis_matrix(&basis);
            let gb = g * &bmat;
            let restricted = bmat
                .solve_matrix(&gb)
                .expect("joint generalized eigenspaces are invariant under the commuting action");
            let charpoly = restricted.charpoly();
            for (lambda, _mult) in poly::rational_roots(&charpoly)? {
                // generalized eigenspace: ker (A - lambda)^dim
                let mut shifted = restricted.clone();
                for d in 0..restricted.nrows() {
                    shifted[(d, d)] -= &lambda;
                }
                let mut power = Mat::identity(restricted.nrows());
                for _ in 0..restricted.nrows() {
                    power = &power * &shifted;
                }
                let kernel = power.kernel_basis();
                let sub_basis: Vec<Vec<Scalar>> =
                    kernel.iter().map(|v| bmat.apply(v)).collect();
                let mut new_trail = trail.clone();
                new_trail.push(lambda);
                next.push((new_trail, sub_basis));
            }
        }
        leaves = next;
    }
    let mut out = Vec::new();
    for (trail, basis) in leaves {
        for _ in 0..basis.len() {
            out.push(trail.clone());
        }
    }
    debug_assert_eq!(out.len(), x.dim(), "multiplicities must sum to dim X");
    out.sort();
    Ok(out)
}

fn basis_matrix(cols: &[Vec<Scalar>]) -> Mat {
    let rows = cols[0].len();
    Mat::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
}

/// The single W-orbit containing the weights of `x`. If the weights fall
/// into several orbits (legal for decomposable modules) this is reported as
/// `MultipleOrbits`.
pub fn central_character(x: &HModule) -> Result<CentralCharacter, ConstructError> {
    let (first, extra) = central_character_orbits(x)?;
    if extra == 0 {
        Ok(first)
    } else {
        Err(ConstructError::MultipleOrbits(extra + 1))
    }
}

/// The orbit of the first weight plus the count of additional orbits.
fn central_character_orbits(x: &HModule) -> Result<(CentralCharacter, usize), ConstructError> {
    let ws = weights(x)?;
    let ctx = x.context();
    let mut orbits: Vec<CentralCharacter> = Vec::new();
    for w in &ws {
        if !orbits.iter().any(|o| o.contains(w)) {
            orbits.push(CentralCharacter::of_weight(ctx, w));
        }
    }
    let extra = orbits.len() - 1;
    Ok((orbits.swap_remove(0), extra))
}

/// Expansion coefficients of each weight in the simple-coroot basis,
/// i.e. solve `gamma = sum_j a_j alpha_j^vee`. Requires the roots to span.
fn coroot_coefficients(x: &HModule) -> Result<Vec<Vec<Scalar>>, ConstructError> {
    let ctx = x.context();
    if !ctx.datum.spans_ambient() {
        return Err(ConstructError::SpanRequired);
    }
    let n = ctx.dim();
    let a = Mat::from_fn(n, n, |i, j| ctx.datum.simple_coroots[j][i].clone());
    let mut out = Vec::new();
    for gamma in weights(x)? {
        let coeffs = a.solve(&gamma).expect("simple coroots form a basis when R spans V");
        out.push(coeffs);
    }
    Ok(out)
}

/// Tempered test: every weight expands in the simple coroots with all
/// coefficients `<= 0`.
pub fn is_tempered(x: &HModule) -> Result<bool, ConstructError> {
    Ok(coroot_coefficients(x)?
        .iter()
        .all(|coeffs| coeffs.iter().all(|a| a <= &Scalar::zero())))
}

/// Discrete-series test: every weight expands with all coefficients `< 0`.
pub fn is_discrete_series(x: &HModule) -> Result<bool, ConstructError> {
    Ok(coroot_coefficients(x)?
        .iter()
        .all(|coeffs| coeffs.iter().all(|a| a < &Scalar::zero())))
}
