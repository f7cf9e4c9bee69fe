//! Ext-groups through an explicit equivariant complex, and everything built
//! on top of them: the duality pairing on homology, Euler-Poincare and
//! elliptic pairings, the alternating induction-restriction character, and
//! the Ind-Res resolution with its exactness certificate.
//!
//! For modules `X`, `Y` over the same datum with `n = dim V`, the complex has
//! terms `Hom_W(X (x) wedge^i V, Y)` for `i = 0..n` and differential
//!
//! ```text
//! d(eta)(x (x) v_1 ^ ... ^ v_{i+1})
//!   = sum_j (-1)^{j+1} vtilde_j . eta(x (x) ... vhat_j ...)
//!   - sum_j (-1)^{j+1} eta(vtilde_j . x (x) ... vhat_j ...)
//! ```
//!
//! whose degree-`i` homology has the dimension of `Ext^i(X, Y)`. The basis of
//! each term is extracted from the averaging projector `(1/|W|) sum_w w.(-)`,
//! and its size is cross-checked against the intertwiner count computed from
//! characters alone.
//!
//! Sign conventions: the ambient basis `e_1..e_n` is fixed once; bases of
//! `wedge^i V` are strictly increasing index tuples in lexicographic order,
//! and every sign in the wedge pairings and the duality machinery is the
//! determinant of the assembled `n`-tuple against that fixed order.

use crate::algebra::{
    self, check_same_context, dual_bullet, dual_star, iota, w_character, AlgebraError,
    ClassFunction, HModule,
};
use crate::constructions::{self, ConstructError};
use crate::linalg::{Mat, SpanBuilder};
use crate::rootsys::WeylGroup;
use crate::scalar::{self, Scalar};
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HomologyError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error("term {degree} of the complex for ({x}, {y}) has dimension {got}, but the character count predicts {expected}")]
    TermDimMismatch { x: String, y: String, degree: usize, expected: usize, got: usize },
    #[error("d o d != 0 at degree {degree}; the differential signs are inconsistent")]
    NotAComplex { degree: usize },
    #[error("differential image left the equivariant span at degree {degree}")]
    ExpressFailed { degree: usize },
    #[error("the v-form and tilde-form differentials disagree at degree {degree}")]
    DifferentialMismatch { degree: usize },
    #[error("duality pairing on homology is rank-deficient at degree {degree}: rank {rank} < dimension {expected}")]
    RankDeficient { degree: usize, expected: usize, rank: usize },
    #[error("homology dimensions of the dual pair disagree at degree {degree}: {left} vs {right}")]
    DualDimMismatch { degree: usize, left: usize, right: usize },
    #[error("tensor-picture differential does not match the Hom-picture differential at degree {degree}")]
    PsiTransportMismatch { degree: usize },
}

// ---------------------------------------------------------------------------
// wedge combinatorics

/// Basis bookkeeping for `wedge^i V`: strictly increasing index tuples in
/// lexicographic order.
#[derive(Debug, Clone)]
pub struct WedgeBasis {
    pub n: usize,
    pub i: usize,
    pub subsets: Vec<Vec<usize>>,
}

impl WedgeBasis {
    pub fn new(n: usize, i: usize) -> Self {
        let mut subsets = Vec::new();
        let mut current = Vec::new();
        fn rec(start: usize, n: usize, left: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if left == 0 {
                out.push(current.clone());
                return;
            }
            for v in start..n {
                if n - v < left {
                    break;
                }
                current.push(v);
                rec(v + 1, n, left - 1, current, out);
                current.pop();
            }
        }
        rec(0, n, i, &mut current, &mut subsets);
        WedgeBasis { n, i, subsets }
    }

    pub fn count(&self) -> usize {
        self.subsets.len()
    }

    pub fn index_of(&self, subset: &[usize]) -> usize {
        self.subsets.binary_search_by(|s| s.as_slice().cmp(subset)).expect("subset in basis")
    }

    /// Complement of `subset`, ascending.
    pub fn complement(&self, subset: &[usize]) -> Vec<usize> {
        (0..self.n).filter(|v| !subset.contains(v)).collect()
    }
}

/// `det(e_K ^ e_{K^c})` for ascending `K`: the sign of the shuffle
/// permutation `(K, K^c)` of `0..n`.
pub fn complement_sign(k: &[usize], n: usize) -> i32 {
    let comp: Vec<usize> = (0..n).filter(|v| !k.contains(v)).collect();
    let mut inversions = 0usize;
    for a in k {
        for b in &comp {
            if a > b {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Matrix of `wedge^i M` in the lexicographic subset bases: entry
/// `(K, L) = det M[K, L]`.
pub fn wedge_power(m: &Mat, wb: &WedgeBasis) -> Mat {
    Mat::from_fn(wb.count(), wb.count(), |ki, li| m.minor(&wb.subsets[ki], &wb.subsets[li]))
}

/// The pairing matrices `<,>_{wedge^i V}: wedge^i V x wedge^{n-i} V -> Q`,
/// one per degree, in the lexicographic bases. Each matrix is a signed
/// permutation (nonzero exactly on complementary pairs), hence nondegenerate.
#[derive(Debug)]
pub struct WedgePairing {
    pub per_degree: Vec<Mat>,
}

impl WedgePairing {
    pub fn new(n: usize) -> Self {
        let mut per_degree = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let wi = WedgeBasis::new(n, i);
            let wni = WedgeBasis::new(n, n - i);
            let m = Mat::from_fn(wi.count(), wni.count(), |ki, li| {
                let k = &wi.subsets[ki];
                let l = &wni.subsets[li];
                if wi.complement(k) == *l {
                    scalar::int(complement_sign(k, n) as i64)
                } else {
                    Scalar::zero()
                }
            });
            per_degree.push(m);
        }
        WedgePairing { per_degree }
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.per_degree.iter().all(|m| m.is_square() && !m.det().is_zero() || {
            // non-square never occurs: C(n,i) = C(n,n-i)
            false
        })
    }
}

// ---------------------------------------------------------------------------
// the Hom-complex

/// Dimensions of the homology of the complex: entry `i` is `dim Ext^i(X, Y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtProfile {
    pub dims: Vec<usize>,
}

impl ExtProfile {
    pub fn euler_characteristic(&self) -> Scalar {
        let mut acc = Scalar::zero();
        for (i, d) in self.dims.iter().enumerate() {
            let term = scalar::int(*d as i64);
            if i % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|d| *d == 0)
    }
}

/// The equivariant complex computing `Ext(X, Y)`: per-degree bases of
/// `Hom_W(X (x) wedge^i V, Y)` (each element a `dim Y x (dim X * C(n,i))`
/// matrix over the fixed bases) and the differential in coordinates.
pub struct HomComplex {
    pub x_label: String,
    pub y_label: String,
    pub n: usize,
    pub wedge: Vec<WedgeBasis>,
    /// `term_bases[i]` is the chosen basis of the degree-`i` term.
    pub term_bases: Vec<Vec<Mat>>,
    /// `diff[i]`: coordinate matrix of the differential from degree `i` to
    /// degree `i+1`; the last entry is the zero map out of the top degree.
    pub diff: Vec<Mat>,
}

fn flatten(m: &Mat) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(m.nrows() * m.ncols());
    for r in 0..m.nrows() {
        out.extend(m.row(r).iter().cloned());
    }
    out
}

/// Intertwiner count `dim Hom_W(X (x) wedge^i V, Y)` from characters alone.
fn equivariant_dim_by_characters(
    weyl: &WeylGroup,
    chi_x: &ClassFunction,
    chi_y: &ClassFunction,
    i: usize,
) -> usize {
    let n = weyl.elements[0].matrix.nrows();
    let wb = WedgeBasis::new(n, i);
    let mut acc = Scalar::zero();
    for (cid, members) in weyl.classes.iter().enumerate() {
        let rep = members[0];
        let wedge_trace = wedge_power(&weyl.elements[rep].matrix, &wb).trace();
        let size = scalar::int(members.len() as i64);
        let inv_class = weyl.class_inverse[cid];
        acc += size * &chi_x.values[cid] * wedge_trace * &chi_y.values[inv_class];
    }
    let dim = acc / scalar::int(weyl.order() as i64);
    assert!(scalar::is_integer(&dim) && dim >= Scalar::zero(), "character inner product must be a nonnegative integer");
    let digits = dim.numer().to_string();
    digits.parse().expect("small dimension")
}

/// Applies the degree-`i` differential to one equivariant map, using either
/// the tilde operators or the plain vector action.
fn apply_differential(
    x: &HModule,
    y: &HModule,
    wb_i: &WedgeBasis,
    wb_next: &WedgeBasis,
    eta: &Mat,
    use_tilde: bool,
) -> Mat {
    let dx = x.dim();
    let dy = y.dim();
    let ci = wb_i.count();
    let tx: Vec<Mat> = if use_tilde {
        x.tilde_basis().clone()
    } else {
        (0..x.context().dim()).map(|j| x.gen_v(j).clone()).collect()
    };
    let ty: Vec<Mat> = if use_tilde {
        y.tilde_basis().clone()
    } else {
        (0..y.context().dim()).map(|j| y.gen_v(j).clone()).collect()
    };
    let mut out = Mat::zeros(dy, dx * wb_next.count());
    for (lidx, l) in wb_next.subsets.iter().enumerate() {
        for (j, &v) in l.iter().enumerate() {
            let sign_pos = j % 2 == 0; // (-1)^{j+1} with 1-based j
            let reduced: Vec<usize> = l.iter().copied().filter(|&u| u != v).collect();
            let kidx = wb_i.index_of(&reduced);
            for a in 0..dx {
                // first sum: ty[v] . eta(x_a (x) e_reduced)
                for b in 0..dy {
                    let mut acc = Scalar::zero();
                    for b2 in 0..dy {
                        let t = &ty[v][(b, b2)];
                        if !t.is_zero() {
                            let e = &eta[(b2, a * ci + kidx)];
                            if !e.is_zero() {
                                acc += t * e;
                            }
                        }
                    }
                    // second sum: eta(tx[v] . x_a (x) e_reduced)
                    for a2 in 0..dx {
                        let t = &tx[v][(a2, a)];
                        if !t.is_zero() {
                            let e = &eta[(b, a2 * ci + kidx)];
                            if !e.is_zero() {
                                acc -= t * e;
                            }
                        }
                    }
                    if !acc.is_zero() {
                        let target = a * wb_next.count() + lidx;
                        if sign_pos {
                            out[(b, target)] += acc;
                        } else {
                            out[(b, target)] -= acc;
                        }
                    }
                }
            }
        }
    }
    out
}

/// Builds the whole complex for a pair of validated modules over one datum.
///
/// The equivariant basis of each term is the image of the averaging
/// projector, extracted by column reduction in a fixed order; the projector
/// image dimension is checked against the character count.
pub fn build_complex(x: &HModule, y: &HModule) -> Result<HomComplex, HomologyError> {
    check_same_context(x, y)?;
    let ctx = x.context();
    let weyl = &ctx.weyl;
    let n = ctx.dim();
    let dx = x.dim();
    let dy = y.dim();
    let order = weyl.order();
    let inv_order = scalar::int(order as i64).recip();
    let chi_x = w_character(x)?;
    let chi_y = w_character(y)?;

    let mut term_bases = Vec::with_capacity(n + 1);
    let mut spans = Vec::with_capacity(n + 1);
    let mut wedges = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let wb = WedgeBasis::new(n, i);
        let c = wb.count();
        let predicted = equivariant_dim_by_characters(weyl, &chi_x, &chi_y, i);
        // per-element data for the projector
        let x_inv: Vec<&Mat> = (0..order).map(|w| x.act_w(weyl.inverse(w))).collect();
        let wedge_inv: Vec<Mat> =
            (0..order).map(|w| wedge_power(&weyl.elements[weyl.inverse(w)].matrix, &wb)).collect();
        let mut basis: Vec<Mat> = Vec::with_capacity(predicted);
        let mut span = SpanBuilder::new(dy * dx * c);
        for a0 in 0..dx {
            for k0 in 0..c {
                // rows of rho_X(w^{-1}) (x) wedge(w^{-1}) at (a0, k0), per w
                let rows: Vec<Vec<(usize, Scalar)>> = (0..order)
                    .map(|w| {
                        let mut row = Vec::new();
                        for a in 0..dx {
                            let xa = &x_inv[w][(a0, a)];
                            if xa.is_zero() {
                                continue;
                            }
                            for k in 0..c {
                                let wk = &wedge_inv[w][(k0, k)];
                                if !wk.is_zero() {
                                    row.push((a * c + k, xa * wk));
                                }
                            }
                        }
                        row
                    })
                    .collect();
                for b0 in 0..dy {
                    let mut projected = Mat::zeros(dy, dx * c);
                    for w in 0..order {
                        let ycol = y.act_w(w);
                        for b in 0..dy {
                            let coeff = &ycol[(b, b0)];
                            if coeff.is_zero() {
                                continue;
                            }
                            for (col, val) in &rows[w] {
                                projected[(b, *col)] += coeff * val;
                            }
                        }
                    }
                    projected = projected.scale(&inv_order);
                    if span.insert(&flatten(&projected)) {
                        basis.push(projected);
                    }
                }
            }
        }
        if basis.len() != predicted {
            return Err(HomologyError::TermDimMismatch {
                x: x.label.clone(),
                y: y.label.clone(),
                degree: i,
                expected: predicted,
                got: basis.len(),
            });
        }
        term_bases.push(basis);
        spans.push(span);
        wedges.push(wb);
    }

    // differentials in coordinates
    let mut diff = Vec::with_capacity(n + 1);
    for i in 0..n {
        let rows = term_bases[i + 1].len();
        let cols = term_bases[i].len();
        let mut d = Mat::zeros(rows, cols);
        for (r, eta) in term_bases[i].iter().enumerate() {
            let image = apply_differential(x, y, &wedges[i], &wedges[i + 1], eta, true);
            let coords = spans[i + 1]
                .express(&flatten(&image))
                .ok_or(HomologyError::ExpressFailed { degree: i })?;
            for q in 0..rows {
                d[(q, r)] = coords[q].clone();
            }
        }
        diff.push(d);
    }
    diff.push(Mat::zeros(0, term_bases[n].len()));

    // complex axiom
    for i in 0..n {
        if !(&diff[i + 1] * &diff[i]).is_zero() {
            return Err(HomologyError::NotAComplex { degree: i });
        }
    }

    Ok(HomComplex {
        x_label: x.label.clone(),
        y_label: y.label.clone(),
        n,
        wedge: wedges,
        term_bases,
        diff,
    })
}

impl HomComplex {
    pub fn term_dim(&self, i: usize) -> usize {
        self.term_bases[i].len()
    }

    /// Homology dimensions: `dim ker D_i - rank D_{i-1}` per degree.
    pub fn ext_profile(&self) -> ExtProfile {
        let mut dims = Vec::with_capacity(self.n + 1);
        for i in 0..=self.n {
            let rank_out = self.diff[i].rank();
            let rank_in = if i == 0 { 0 } else { self.diff[i - 1].rank() };
            dims.push(self.term_dim(i) - rank_out - rank_in);
        }
        ExtProfile { dims }
    }

    /// Representatives of a homology basis at degree `i`: kernel vectors of
    /// the outgoing differential extending a column basis of the incoming
    /// image, chosen by deterministic pivot order.
    pub fn homology_reps(&self, i: usize) -> Vec<Vec<Scalar>> {
        let dim = self.term_dim(i);
        let mut span = SpanBuilder::new(dim);
        if i > 0 {
            let d_in = &self.diff[i - 1];
            for c in 0..d_in.ncols() {
                span.insert(&d_in.col_vec(c));
            }
        }
        let mut reps = Vec::new();
        for v in self.diff[i].kernel_basis() {
            if span.insert(&v) {
                reps.push(v);
            }
        }
        reps
    }
}

/// Rebuilds every differential with the plain vector action in place of the
/// tilde operators and checks exact agreement on the equivariant bases. The
/// two forms differ on non-equivariant maps, so this pins the sign
/// conventions of the whole construction.
pub fn dual_differential_crosscheck(
    x: &HModule,
    y: &HModule,
    complex: &HomComplex,
) -> Result<bool, HomologyError> {
    for i in 0..complex.n {
        for eta in &complex.term_bases[i] {
            let tilde = apply_differential(x, y, &complex.wedge[i], &complex.wedge[i + 1], eta, true);
            let raw = apply_differential(x, y, &complex.wedge[i], &complex.wedge[i + 1], eta, false);
            if tilde != raw {
                return Err(HomologyError::DifferentialMismatch { degree: i });
            }
        }
    }
    Ok(true)
}

/// Dimensions of `Ext^i(X, Y)` for `i = 0..n`.
pub fn ext_dims(x: &HModule, y: &HModule) -> Result<ExtProfile, HomologyError> {
    Ok(build_complex(x, y)?.ext_profile())
}

/// Alternating sum of the Ext dimensions.
pub fn euler_poincare(x: &HModule, y: &HModule) -> Result<Scalar, HomologyError> {
    Ok(ext_dims(x, y)?.euler_characteristic())
}

// ---------------------------------------------------------------------------
// elliptic pairing and the alternating induction character

/// `(1/|W|) sum_w chi1(w) chi2(w) det_V(1 - w)`, computed classwise. Over
/// the rational base field the conjugation in the second slot is trivial.
pub fn elliptic_pairing(weyl: &WeylGroup, chi1: &ClassFunction, chi2: &ClassFunction) -> Scalar {
    let mut acc = Scalar::zero();
    for (cid, members) in weyl.classes.iter().enumerate() {
        let det = weyl.elements[members[0]].matrix.det_one_minus();
        if det.is_zero() {
            continue;
        }
        acc += scalar::int(members.len() as i64) * &chi1.values[cid] * &chi2.values[cid] * det;
    }
    acc / scalar::int(weyl.order() as i64)
}

/// Character of `W` induced from the restriction of `chi` to the parabolic
/// subgroup `W_J` (given by its subset mask data).
fn induced_character(weyl: &WeylGroup, mask: usize, chi: &ClassFunction) -> ClassFunction {
    let sub = &weyl.parabolic[mask];
    let sub_order = scalar::int(sub.elements.len() as i64);
    let mut values = Vec::with_capacity(weyl.classes.len());
    for members in &weyl.classes {
        let w = members[0];
        let mut acc = Scalar::zero();
        for g in 0..weyl.order() {
            let conj = weyl.multiply(weyl.multiply(weyl.inverse(g), w), g);
            if sub.member[conj] {
                acc += chi.value_at_element(weyl, conj);
            }
        }
        values.push(acc / &sub_order);
    }
    ClassFunction { values }
}

/// The alternating sum over all subsets `J` of the characters induced from
/// the parabolic restrictions:
/// `sum_J (-1)^{|J|} Ind_{W_J}^W Res_{W_J} chi_X`.
/// On irreducibles this is the character of `D(X)`, i.e. `sgn * chi_X`.
pub fn aubert_virtual_character(x: &HModule) -> Result<ClassFunction, HomologyError> {
    let weyl = &x.context().weyl;
    let chi = w_character(x)?;
    let rank = x.context().rank();
    let mut acc = ClassFunction::zero(weyl.classes.len());
    for mask in 0usize..(1 << rank) {
        let ind = induced_character(weyl, mask, &chi);
        if mask.count_ones() % 2 == 0 {
            acc = acc.add(&ind);
        } else {
            acc = acc.add(&ind.scale(&scalar::int(-1)));
        }
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// duality pairing

/// Everything the duality machinery certifies for one pair `(X, Y)`:
/// matched homology dimensions in complementary degrees, the chain-level
/// adjointness identity, the transport between the Hom-picture and the
/// tensor picture, and full-rank pairings on homology.
pub struct DualityReport {
    pub profile: ExtProfile,
    pub dual_profile: ExtProfile,
    /// pairing matrix on homology representatives per degree `i`
    pub pairing: Vec<Mat>,
}

struct TensorSide {
    complex: HomComplex,
    /// converted term bases: tensor coordinates per degree
    tensor_bases: Vec<Vec<Vec<Scalar>>>,
    /// tensor-picture differential per degree, in the converted coordinates
    tensor_diff: Vec<Mat>,
}

/// Tensor coordinates of one equivariant map at degree `j`: index
/// `(a, b, K)` with `K` of size `n - j`, flattened as `(a*dy + b)*C + kidx`.
fn to_tensor_coords(eta: &Mat, wb_j: &WedgeBasis, wb_comp: &WedgeBasis, dx: usize, dy: usize) -> Vec<Scalar> {
    let n = wb_j.n;
    let cj = wb_j.count();
    let cc = wb_comp.count();
    let mut out = vec![Scalar::zero(); dx * dy * cc];
    for a in 0..dx {
        for b in 0..dy {
            for (kidx, k) in wb_comp.subsets.iter().enumerate() {
                let comp = wb_comp.complement(k);
                let kc_idx = wb_j.index_of(&comp);
                let sign = complement_sign(k, n);
                let v = &eta[(b, a * cj + kc_idx)];
                if !v.is_zero() {
                    let signed = if sign > 0 { v.clone() } else { -v.clone() };
                    out[(a * dy + b) * cc + kidx] = signed;
                }
            }
        }
    }
    out
}

/// The tensor-picture differential applied to one coordinate vector at
/// degree `j` (indices `K` of size `n-j`), for the `*`-type complex: both
/// correction terms enter with `+`.
fn tensor_differential_apply(
    side_first: &HModule,
    side_second: &HModule,
    wb_from: &WedgeBasis,
    wb_to: &WedgeBasis,
    v: &[Scalar],
) -> Vec<Scalar> {
    let dx = side_first.dim();
    let dy = side_second.dim();
    let cf = wb_from.count();
    let ct = wb_to.count();
    let tf = side_first.tilde_basis();
    let ts = side_second.tilde_basis();
    let mut out = vec![Scalar::zero(); dx * dy * ct];
    for a in 0..dx {
        for b in 0..dy {
            for (kidx, k) in wb_from.subsets.iter().enumerate() {
                let coeff = &v[(a * dy + b) * cf + kidx];
                if coeff.is_zero() {
                    continue;
                }
                for (p, &ev) in k.iter().enumerate() {
                    let reduced: Vec<usize> = k.iter().copied().filter(|&u| u != ev).collect();
                    let tidx = wb_to.index_of(&reduced);
                    let sign_pos = p % 2 == 0; // (-1)^{p+1}, 1-based
                    // f (x) vtilde.y (x) phi'
                    for b2 in 0..dy {
                        let t = &ts[ev][(b2, b)];
                        if !t.is_zero() {
                            let delta = coeff * t;
                            let slot = (a * dy + b2) * ct + tidx;
                            if sign_pos {
                                out[slot] += delta;
                            } else {
                                out[slot] -= delta;
                            }
                        }
                    }
                    // vtilde.f (x) y (x) phi'
                    for a2 in 0..dx {
                        let t = &tf[ev][(a2, a)];
                        if !t.is_zero() {
                            let delta = coeff * t;
                            let slot = (a2 * dy + b) * ct + tidx;
                            if sign_pos {
                                out[slot] += delta;
                            } else {
                                out[slot] -= delta;
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn build_tensor_side(u: &HModule, v: &HModule) -> Result<TensorSide, HomologyError> {
    let complex = build_complex(u, v)?;
    let first = dual_star(u);
    let second = v.clone();
    let n = complex.n;
    let dx = u.dim();
    let dy = v.dim();
    let mut tensor_bases = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let wb_comp = WedgeBasis::new(n, n - j);
        let converted: Vec<Vec<Scalar>> = complex.term_bases[j]
            .iter()
            .map(|eta| to_tensor_coords(eta, &complex.wedge[j], &wb_comp, dx, dy))
            .collect();
        tensor_bases.push(converted);
    }
    // tensor differential in the converted coordinates, with the transport
    // sign (-1)^{n-j+1} against the Hom-picture differential verified
    let mut tensor_diff = Vec::with_capacity(n + 1);
    for j in 0..n {
        let wb_from = WedgeBasis::new(n, n - j);
        let wb_to = WedgeBasis::new(n, n - j - 1);
        let mut span = SpanBuilder::new(dx * dy * wb_to.count());
        for t in &tensor_bases[j + 1] {
            let fresh = span.insert(t);
            debug_assert!(fresh, "converted basis stays independent");
        }
        let rows = tensor_bases[j + 1].len();
        let cols = tensor_bases[j].len();
        let mut d = Mat::zeros(rows, cols);
        for (r, tv) in tensor_bases[j].iter().enumerate() {
            let image = tensor_differential_apply(&first, &second, &wb_from, &wb_to, tv);
            let coords =
                span.express(&image).ok_or(HomologyError::ExpressFailed { degree: j })?;
            for q in 0..rows {
                d[(q, r)] = coords[q].clone();
            }
        }
        // transport check: Psi o Dbar = (-1)^{n-j+1} d o Psi
        let sign = if (n - j + 1) % 2 == 0 { scalar::int(1) } else { scalar::int(-1) };
        if d != complex.diff[j].scale(&sign) {
            return Err(HomologyError::PsiTransportMismatch { degree: j });
        }
        tensor_diff.push(d);
    }
    tensor_diff.push(Mat::zeros(0, tensor_bases[n].len()));
    Ok(TensorSide { complex, tensor_bases, tensor_diff })
}

/// Chain-level pairing of tensor coordinate vectors: degree `j` of the first
/// complex against degree `n-j` of the second. Both sides share the index
/// layout `(a, b, K)`; the pairing contracts `a` with `a`, `b` with `b`, and
/// `K` against its complement with the shuffle sign.
fn tensor_pairing(
    v1: &[Scalar],
    wb1: &WedgeBasis,
    v2: &[Scalar],
    wb2: &WedgeBasis,
    dx: usize,
    dy: usize,
) -> Scalar {
    let n = wb1.n;
    let c1 = wb1.count();
    let c2 = wb2.count();
    let mut acc = Scalar::zero();
    for (kidx, k) in wb1.subsets.iter().enumerate() {
        let comp = wb1.complement(k);
        let comp_idx = wb2.index_of(&comp);
        let sign = complement_sign(k, n);
        for a in 0..dx {
            for b in 0..dy {
                let x1 = &v1[(a * dy + b) * c1 + kidx];
                if x1.is_zero() {
                    continue;
                }
                let x2 = &v2[(a * dy + b) * c2 + comp_idx];
                if x2.is_zero() {
                    continue;
                }
                if sign > 0 {
                    acc += x1 * x2;
                } else {
                    acc -= x1 * x2;
                }
            }
        }
    }
    acc
}

/// Runs the full duality machinery for `(X, Y)`:
///
/// 1. builds the complex of `(X, Y)` and of the dual pair
///    `(star(X), bullet(iota(Y)))`;
/// 2. checks the homology dimensions match in complementary degrees;
/// 3. checks the chain-level adjointness
///    `<D1 w1, w2> = (-1)^{n-i} <w1, D2 w2>` as an exact matrix identity;
/// 4. restricts the product pairing to homology representatives and checks
///    it has full rank in every degree.
pub fn duality_check(x: &HModule, y: &HModule) -> Result<DualityReport, HomologyError> {
    let side1 = build_tensor_side(x, y)?;
    let dual_x = dual_star(x);
    let dual_y = dual_bullet(&iota(y));
    let side2 = build_tensor_side(&dual_x, &dual_y)?;
    let n = side1.complex.n;
    let dx = x.dim();
    let dy = y.dim();

    let profile = side1.complex.ext_profile();
    let dual_profile = side2.complex.ext_profile();
    for i in 0..=n {
        if profile.dims[i] != dual_profile.dims[n - i] {
            return Err(HomologyError::DualDimMismatch {
                degree: i,
                left: profile.dims[i],
                right: dual_profile.dims[n - i],
            });
        }
    }

    // chain-level pairing matrices P[j]: term_j(side1) x term_{n-j}(side2)
    let mut chain_pairing = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let wb1 = WedgeBasis::new(n, n - j);
        let wb2 = WedgeBasis::new(n, j);
        let rows = side1.tensor_bases[j].len();
        let cols = side2.tensor_bases[n - j].len();
        let p = Mat::from_fn(rows, cols, |r, s| {
            tensor_pairing(
                &side1.tensor_bases[j][r],
                &wb1,
                &side2.tensor_bases[n - j][s],
                &wb2,
                dx,
                dy,
            )
        });
        chain_pairing.push(p);
    }

    // adjointness: (D1_j)^T P_{j+1} = (-1)^{n-j} P_j D2_{n-j-1}
    for j in 0..n {
        let lhs = &side1.tensor_diff[j].transpose() * &chain_pairing[j + 1];
        let rhs_raw = &chain_pairing[j] * &side2.tensor_diff[n - j - 1];
        let sign = if (n - j) % 2 == 0 { scalar::int(1) } else { scalar::int(-1) };
        if lhs != rhs_raw.scale(&sign) {
            return Err(HomologyError::PsiTransportMismatch { degree: j });
        }
    }

    // pairing on homology representatives, full rank required
    let mut pairing = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let reps1 = side1.complex.homology_reps(i);
        let reps2 = side2.complex.homology_reps(n - i);
        debug_assert_eq!(reps1.len(), profile.dims[i]);
        let q = Mat::from_fn(reps1.len(), reps2.len(), |r, s| {
            let mut acc = Scalar::zero();
            for (qi, c1) in reps1[r].iter().enumerate() {
                if c1.is_zero() {
                    continue;
                }
                for (ti, c2) in reps2[s].iter().enumerate() {
                    if c2.is_zero() {
                        continue;
                    }
                    acc += c1 * c2 * &chain_pairing[i][(qi, ti)];
                }
            }
            acc
        });
        let rank = q.rank();
        if rank != profile.dims[i] {
            return Err(HomologyError::RankDeficient {
                degree: i,
                expected: profile.dims[i],
                rank,
            });
        }
        pairing.push(q);
    }

    Ok(DualityReport { profile, dual_profile, pairing })
}

/// The pairing matrix on homology at a single degree; errors if it is not
/// full rank. Convenience wrapper over [`duality_check`].
pub fn duality_pairing(x: &HModule, y: &HModule, i: usize) -> Result<Mat, HomologyError> {
    let mut report = duality_check(x, y)?;
    Ok(report.pairing.swap_remove(i))
}

// ---------------------------------------------------------------------------
// Ext symmetry checks

/// One dimension-level symmetry: two Ext profiles that must agree
/// (the second possibly reversed).
pub struct SymmetryEntry {
    pub name: String,
    pub left: ExtProfile,
    pub right: ExtProfile,
    pub holds: bool,
}

/// Dimension-level verification of the dual-pair symmetries:
/// `Ext^i(X, star Y) = Ext^i(Y, star X)`, the same for `bullet`,
/// `Ext^i(X, theta Y) = Ext^i(theta X, Y)`, `Ext^i(X, iota Y) =
/// Ext^i(iota X, Y)`, and the complementary-degree variant
/// `Ext^i(X, Y) = Ext^{n-i}(bullet X, star(iota Y))`.
pub fn ext_symmetry_checks(x: &HModule, y: &HModule) -> Result<Vec<SymmetryEntry>, HomologyError> {
    let mut out = Vec::new();
    let mut push = |name: &str, left: ExtProfile, right: ExtProfile, reversed: bool| {
        let mut rd = right.dims.clone();
        if reversed {
            rd.reverse();
        }
        let holds = left.dims == rd;
        out.push(SymmetryEntry { name: name.to_string(), left, right, holds });
    };
    push(
        "Ext(X, star Y) = Ext(Y, star X)",
        ext_dims(x, &dual_star(y))?,
        ext_dims(y, &dual_star(x))?,
        false,
    );
    push(
        "Ext(X, bullet Y) = Ext(Y, bullet X)",
        ext_dims(x, &dual_bullet(y))?,
        ext_dims(y, &dual_bullet(x))?,
        false,
    );
    push(
        "Ext(X, theta Y) = Ext(theta X, Y)",
        ext_dims(x, &algebra::theta(y))?,
        ext_dims(&algebra::theta(x), y)?,
        false,
    );
    push(
        "Ext(X, iota Y) = Ext(iota X, Y)",
        ext_dims(x, &iota(y))?,
        ext_dims(&iota(x), y)?,
        false,
    );
    push(
        "Ext^i(X, Y) = Ext^{n-i}(bullet X, star(iota Y))",
        ext_dims(x, y)?,
        ext_dims(&dual_bullet(x), &dual_star(&iota(y)))?,
        true,
    );
    Ok(out)
}

// ---------------------------------------------------------------------------
// Ind-Res resolution

/// Exactness certificate for the resolution
/// `0 -> ker -> C_0 -> C_1 -> ... -> C_m = X -> 0` built from the parabolic
/// induction-restriction functors with simplicial boundary signs.
pub struct IndResReport {
    pub stage_dims: Vec<usize>,
    /// `pi_{i+1} o pi_i = 0` for all `i`
    pub composition_zero: bool,
    /// exactness at `C_i` for `i = 1..m-1` plus surjectivity onto `C_m`
    pub exact: bool,
    pub kernel_dim: usize,
    /// `ker pi_0` is isomorphic to `D(X)`
    pub kernel_is_dd: bool,
    /// the alternating-sum embedding of `X` into `C_0` spans `ker pi_0`
    pub chi_spans_kernel: bool,
}

/// Builds the Ind-Res resolution of `x` and certifies its exactness, the
/// identification of `ker pi_0` with `D(X)`, and the explicit alternating
/// embedding `x -> sum_w (-1)^{l(w)} t_w (x) t_w^{-1} x`.
pub fn indres_complex(x: &HModule) -> Result<IndResReport, HomologyError> {
    let ctx = x.context().clone();
    let weyl = &ctx.weyl;
    let rank = ctx.rank();
    let dx = x.dim();
    let m = rank;

    // stage r holds the ordered list of subsets of size r (by ascending mask)
    let stage_subsets: Vec<Vec<usize>> = (0..=m)
        .map(|r| (0usize..(1 << rank)).filter(|mask| mask.count_ones() as usize == r).collect())
        .collect();
    let block_dim = |mask: usize| weyl.parabolic[mask].min_reps.len() * dx;
    let stage_dims: Vec<usize> =
        stage_subsets.iter().map(|masks| masks.iter().map(|&m| block_dim(m)).sum()).collect();

    // pi_r : C_r -> C_{r+1}
    let mut maps = Vec::with_capacity(m);
    for r in 0..m {
        let mut mat = Mat::zeros(stage_dims[r + 1], stage_dims[r]);
        let mut col_offset = 0usize;
        for &mask in &stage_subsets[r] {
            let src = &weyl.parabolic[mask];
            for (tpos, &tmask) in stage_subsets[r + 1].iter().enumerate() {
                if mask & tmask != mask {
                    continue;
                }
                let added = tmask & !mask;
                debug_assert_eq!(added.count_ones(), 1);
                let beta = added.trailing_zeros() as usize;
                // position of beta in the ascending complement of mask, 1-based
                let pos = (0..rank)
                    .filter(|s| mask & (1 << s) == 0)
                    .position(|s| s == beta)
                    .unwrap()
                    + 1;
                let sign = if pos % 2 == 1 { scalar::int(1) } else { scalar::int(-1) };
                let row_offset: usize =
                    stage_subsets[r + 1][..tpos].iter().map(|&m| block_dim(m)).sum();
                let dst = &weyl.parabolic[tmask];
                for (p, &u) in src.min_reps.iter().enumerate() {
                    let (p2, wj) = dst.factor[u];
                    let a = x.act_w(wj);
                    for b in 0..dx {
                        for b2 in 0..dx {
                            if !a[(b2, b)].is_zero() {
                                mat[(row_offset + p2 * dx + b2, col_offset + p * dx + b)] +=
                                    &sign * &a[(b2, b)];
                            }
                        }
                    }
                }
            }
            col_offset += block_dim(mask);
        }
        maps.push(mat);
    }

    let composition_zero = (0..m.saturating_sub(1)).all(|r| (&maps[r + 1] * &maps[r]).is_zero());

    // exactness by rank bookkeeping
    let mut exact = true;
    for r in 1..m {
        let rank_in = maps[r - 1].rank();
        let ker = stage_dims[r] - maps[r].rank();
        if rank_in != ker {
            exact = false;
        }
    }
    if m >= 1 {
        // surjectivity onto C_m = X
        if maps[m - 1].rank() != stage_dims[m] {
            exact = false;
        }
    }

    // kernel of pi_0 as a module, via the induced module on C_0
    let (kernel_dim, kernel_is_dd, chi_spans_kernel) = if m == 0 {
        (0, true, true)
    } else {
        let res0 = constructions::restrict_to_parabolic(x, &[])?;
        let c0 = constructions::parabolic_induction(&ctx, &[], &res0)?;
        debug_assert_eq!(c0.dim(), stage_dims[0]);
        let kernel = maps[0].kernel_basis();
        let kdim = kernel.len();
        let kmod = algebra::submodule_on_basis(&c0, &kernel, format!("ker pi0({})", x.label))?
            .validated()?;
        let dd = algebra::dd(x);
        let is_dd = algebra::is_isomorphic(&kmod, &dd)?;
        // chi(x_b) = sum_w (-1)^{l(w)} t_w (x) t_{w^{-1}} x_b, coordinates in
        // the basis {t_w (x) x_b} of C_0 (empty-subset reps are all of W in
        // enumeration order)
        let mut kernel_span = SpanBuilder::new(stage_dims[0]);
        for v in &kernel {
            kernel_span.insert(v);
        }
        let mut chi_ok = true;
        let mut chi_span = SpanBuilder::new(stage_dims[0]);
        for b in 0..dx {
            let mut vec = vec![Scalar::zero(); stage_dims[0]];
            for w in 0..weyl.order() {
                let a = x.act_w(weyl.inverse(w));
                let sign = weyl.elements[w].sign;
                for b2 in 0..dx {
                    if !a[(b2, b)].is_zero() {
                        let val = if sign > 0 { a[(b2, b)].clone() } else { -a[(b2, b)].clone() };
                        vec[w * dx + b2] = val;
                    }
                }
            }
            if !kernel_span.contains(&vec) {
                chi_ok = false;
            }
            chi_span.insert(&vec);
        }
        let chi_spans = chi_ok && chi_span.rank() == kdim;
        (kdim, is_dd, chi_spans)
    };

    Ok(IndResReport {
        stage_dims,
        composition_zero,
        exact,
        kernel_dim,
        kernel_is_dd,
        chi_spans_kernel,
    })
}

// ---------------------------------------------------------------------------

/// Shared helper: the wedge-power traces `tr(wedge^i w)` needed by callers
/// computing intertwiner counts by hand.
pub fn wedge_character(weyl: &WeylGroup, i: usize) -> ClassFunction {
    let n = weyl.elements[0].matrix.nrows();
    let wb = WedgeBasis::new(n, i);
    ClassFunction {
        values: weyl
            .classes
            .iter()
            .map(|members| wedge_power(&weyl.elements[members[0]].matrix, &wb).trace())
            .collect(),
    }
}

/// Convenience bundle used by front-ends: the Ext profile together with the
/// Euler-Poincare number and the elliptic pairing of the restrictions.
pub struct PairingSummary {
    pub ext: ExtProfile,
    pub euler_poincare: Scalar,
    pub elliptic: Scalar,
}

pub fn pairing_summary(x: &HModule, y: &HModule) -> Result<PairingSummary, HomologyError> {
    let ext = ext_dims(x, y)?;
    let ep = ext.euler_characteristic();
    let weyl = &x.context().weyl;
    let elliptic = elliptic_pairing(weyl, &w_character(x)?, &w_character(y)?);
    Ok(PairingSummary { ext, euler_poincare: ep, elliptic })
}

pub use crate::rootsys::elliptic_classes;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{principal_series, steinberg, trivial_module};
    use crate::rootsys::HeckeContext;
    use crate::scalar::int;
    use std::sync::Arc;

    fn ctx(label: &str) -> Arc<HeckeContext> {
        let rank = match label {
            "A1" => 1,
            _ => 2,
        };
        HeckeContext::build(label, &vec![int(1); rank], 0).unwrap()
    }

    #[test]
    fn wedge_basics() {
        let wb = WedgeBasis::new(3, 2);
        assert_eq!(wb.subsets, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(complement_sign(&[0, 1], 3), 1);
        assert_eq!(complement_sign(&[0, 2], 3), -1);
        assert_eq!(complement_sign(&[1, 2], 3), 1);
        let wp = WedgePairing::new(3);
        assert!(wp.is_nondegenerate());
    }

    #[test]
    fn steinberg_self_ext_on_a1() {
        let c = ctx("A1");
        let st = steinberg(&c).unwrap();
        let complex = build_complex(&st, &st).unwrap();
        assert_eq!(complex.term_dim(0), 1);
        assert_eq!(complex.term_dim(1), 0);
        assert_eq!(complex.ext_profile().dims, vec![1, 0]);
    }

    #[test]
    fn trivial_to_steinberg_on_a1() {
        let c = ctx("A1");
        let st = steinberg(&c).unwrap();
        let triv = trivial_module(&c).unwrap();
        assert_eq!(ext_dims(&triv, &st).unwrap().dims, vec![0, 1]);
        assert_eq!(ext_dims(&st, &triv).unwrap().dims, vec![0, 1]);
    }

    #[test]
    fn principal_series_self_ext_on_a1() {
        let c = ctx("A1");
        let m = principal_series(&c, &[int(3)]).unwrap();
        let complex = build_complex(&m, &m).unwrap();
        assert_eq!(complex.term_dim(0), 2);
        assert_eq!(complex.term_dim(1), 2);
        assert_eq!(complex.ext_profile().dims, vec![1, 1]);
        assert!(dual_differential_crosscheck(&m, &m, &complex).unwrap());
    }

    #[test]
    fn koszul_profile_on_a2() {
        let c = ctx("A2");
        let m = principal_series(&c, &[int(3), int(3)]).unwrap();
        assert_eq!(ext_dims(&m, &m).unwrap().dims, vec![1, 2, 1]);
    }

    #[test]
    fn crosscheck_on_battery_pairs() {
        let c = ctx("A2");
        let st = steinberg(&c).unwrap();
        let triv = trivial_module(&c).unwrap();
        let complex = build_complex(&triv, &st).unwrap();
        assert!(dual_differential_crosscheck(&triv, &st, &complex).unwrap());
    }

    #[test]
    fn duality_on_a1_pairs() {
        let c = ctx("A1");
        let st = steinberg(&c).unwrap();
        let triv = trivial_module(&c).unwrap();
        let m = principal_series(&c, &[int(3)]).unwrap();
        for (x, y) in [(&st, &st), (&triv, &st), (&m, &m), (&triv, &m)] {
            let report = duality_check(x, y).unwrap();
            for (i, p) in report.pairing.iter().enumerate() {
                assert_eq!(p.rank(), report.profile.dims[i]);
            }
        }
    }

    #[test]
    fn euler_poincare_equals_elliptic() {
        let c = ctx("A1");
        let st = steinberg(&c).unwrap();
        let triv = trivial_module(&c).unwrap();
        let m = principal_series(&c, &[int(3)]).unwrap();
        let weyl = &c.weyl;
        for (x, y, expect) in
            [(&st, &st, int(1)), (&triv, &st, int(-1)), (&m, &m, int(0)), (&triv, &triv, int(1))]
        {
            let s = pairing_summary(x, y).unwrap();
            assert_eq!(s.euler_poincare, expect);
            assert_eq!(s.elliptic, expect);
            let direct =
                elliptic_pairing(weyl, &w_character(x).unwrap(), &w_character(y).unwrap());
            assert_eq!(direct, expect);
        }
    }

    #[test]
    fn aubert_character_is_sign_twist() {
        for label in ["A1", "A2"] {
            let c = ctx(label);
            for x in [trivial_module(&c).unwrap(), steinberg(&c).unwrap()] {
                let aubert = aubert_virtual_character(&x).unwrap();
                let expect =
                    w_character(&x).unwrap().pointwise_mul(&algebra::sgn_character(&c.weyl));
                assert_eq!(aubert, expect, "{label} {}", x.label);
            }
        }
    }

    #[test]
    fn indres_resolution_on_a1_and_a2() {
        for label in ["A1", "A2"] {
            let c = ctx(label);
            for x in [steinberg(&c).unwrap(), trivial_module(&c).unwrap()] {
                let report = indres_complex(&x).unwrap();
                assert!(report.composition_zero, "{label}");
                assert!(report.exact, "{label}");
                assert_eq!(report.kernel_dim, x.dim(), "{label}");
                assert!(report.kernel_is_dd, "{label}");
                assert!(report.chi_spans_kernel, "{label}");
            }
        }
        // A1 Steinberg: stages have dimensions 2 and 1
        let c = ctx("A1");
        let st = steinberg(&c).unwrap();
        let report = indres_complex(&st).unwrap();
        assert_eq!(report.stage_dims, vec![2, 1]);
    }

    #[test]
    fn symmetry_checks_on_a1() {
        let c = ctx("A1");
        let st = steinberg(&c).unwrap();
        let triv = trivial_module(&c).unwrap();
        for entry in ext_symmetry_checks(&triv, &st).unwrap() {
            assert!(entry.holds, "{}", entry.name);
        }
    }

    #[test]
    fn distinct_central_characters_kill_ext() {
        let c = ctx("A1");
        let m3 = principal_series(&c, &[int(3)]).unwrap();
        let m0 = principal_series(&c, &[int(0)]).unwrap();
        let st = steinberg(&c).unwrap();
        assert!(ext_dims(&m3, &m0).unwrap().is_zero());
        assert!(ext_dims(&st, &m3).unwrap().is_zero());
    }
}
