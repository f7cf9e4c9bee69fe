//! Root data and Weyl groups for the supported small-rank types.
//!
//! A root datum is realized concretely: the ambient space is `Q^n`, the
//! simple roots are the first basis vectors, and the simple coroots are the
//! rows of the (integer) Cartan pairing matrix. Positive roots are obtained by
//! orbit closure under the simple reflections. The Weyl group is enumerated
//! exhaustively as a set of exact matrices; lengths come from the
//! breadth-first search, so the stored word of every element is reduced.
//!
//! Elements are canonicalized by their matrix. Reduced words are kept for
//! building products of generator matrices elsewhere, but two elements are
//! the same if and only if their matrices agree.

use crate::linalg::Mat;
use crate::scalar::{self, Scalar};
use num_traits::Zero;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RootSysError {
    #[error("unsupported root system type `{0}`")]
    UnknownType(String),
    #[error("type {label} takes {expected} parameter(s), one per simple-root orbit (or one per simple root); got {got}")]
    ParameterCount { label: String, expected: usize, got: usize },
    #[error("parameter values must be constant on W-orbits of simple roots; roots {i} and {j} share an orbit but were given different values")]
    OrbitConstancy { i: usize, j: usize },
    #[error("Weyl group enumeration exceeded the cap of {cap} elements; the root datum is malformed")]
    OrderCap { cap: usize },
    #[error("invalid simple-root index {index}; rank is {rank}")]
    InvalidSubset { index: usize, rank: usize },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A positive root together with its coroot and the id of its W-orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositiveRoot {
    pub root: Vec<Scalar>,
    pub coroot: Vec<Scalar>,
    pub orbit: usize,
}

/// Root datum: simple roots and coroots in a fixed rational realization,
/// the full set of positive roots, and the orbit-constant parameter function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDatum {
    pub type_label: String,
    pub ambient_dim: usize,
    pub simple_roots: Vec<Vec<Scalar>>,
    pub simple_coroots: Vec<Vec<Scalar>>,
    /// `cartan[i][j]` is the pairing of simple root `j` against simple coroot `i`.
    pub cartan: Vec<Vec<i64>>,
    pub positive_roots: Vec<PositiveRoot>,
    /// Orbit id of each simple root.
    pub orbit_of_simple: Vec<usize>,
    pub num_orbits: usize,
    /// Parameter value per orbit id.
    pub parameters: Vec<Scalar>,
}

impl RootDatum {
    pub fn rank(&self) -> usize {
        self.simple_roots.len()
    }

    /// True when the roots span the whole ambient space.
    pub fn spans_ambient(&self) -> bool {
        self.rank() == self.ambient_dim
    }

    /// Parameter value attached to a simple root.
    pub fn k_of_simple(&self, i: usize) -> &Scalar {
        &self.parameters[self.orbit_of_simple[i]]
    }

    /// Parameter value attached to a positive root.
    pub fn k_of_positive(&self, p: usize) -> &Scalar {
        &self.parameters[self.positive_roots[p].orbit]
    }

    /// Pairing of a vector against a covector.
    pub fn pair(covector: &[Scalar], vector: &[Scalar]) -> Scalar {
        covector.iter().zip(vector).map(|(a, b)| a * b).sum()
    }

    /// Matrix of the reflection through `root` (with the given coroot):
    /// `v -> v - <v, coroot> root`.
    pub fn reflection_matrix(&self, root: &[Scalar], coroot: &[Scalar]) -> Mat {
        let n = self.ambient_dim;
        Mat::from_fn(n, n, |i, j| {
            let mut v = -(&root[i] * &coroot[j]);
            if i == j {
                v += scalar::int(1);
            }
            v
        })
    }

    /// Matrix of the simple reflection `s_i`.
    pub fn simple_reflection_matrix(&self, i: usize) -> Mat {
        self.reflection_matrix(&self.simple_roots[i], &self.simple_coroots[i])
    }
}

fn cartan_of_type(label: &str) -> Result<Vec<Vec<i64>>, RootSysError> {
    let rows: &[&[i64]] = match label {
        "A1" => &[&[2]],
        "A2" | "I2(3)" => &[&[2, -1], &[-1, 2]],
        // first root long, second short
        "B2" | "I2(4)" => &[&[2, -1], &[-2, 2]],
        // first root short, second long
        "G2" | "I2(6)" => &[&[2, -3], &[-1, 2]],
        "A3" => &[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]],
        // third root short
        "B3" => &[&[2, -1, 0], &[-1, 2, -1], &[0, -2, 2]],
        "I2(5)" | "H3" => {
            // These need sqrt(5) in the Cartan pairing, which leaves the
            // rational base field.
            return Err(RootSysError::UnknownType(format!("{label} (irrational Cartan pairing)")));
        }
        _ => return Err(RootSysError::UnknownType(label.to_string())),
    };
    Ok(rows.iter().map(|r| r.to_vec()).collect())
}

/// Builds a validated root datum for a supported type label.
///
/// `parameters` may list one value per simple-root orbit or one per simple
/// root (the latter is checked for orbit constancy). `extra_ambient` pads the
/// realization with coordinates on which all roots vanish, so the roots no
/// longer span the ambient space.
pub fn build_root_datum(
    type_label: &str,
    parameters: &[Scalar],
    extra_ambient: usize,
) -> Result<RootDatum, RootSysError> {
    let cartan = cartan_of_type(type_label)?;
    let rank = cartan.len();
    let n = rank + extra_ambient;

    let simple_roots: Vec<Vec<Scalar>> = (0..rank)
        .map(|i| (0..n).map(|j| if i == j { scalar::int(1) } else { Scalar::zero() }).collect())
        .collect();
    let simple_coroots: Vec<Vec<Scalar>> = (0..rank)
        .map(|i| {
            (0..n)
                .map(|j| if j < rank { scalar::int(cartan[i][j]) } else { Scalar::zero() })
                .collect()
        })
        .collect();

    let (positive_roots, orbit_of_simple, num_orbits) =
        close_roots(&simple_roots, &simple_coroots, &cartan);

    // sanity: <alpha, alpha^vee> = 2 on every enumerated pair
    for p in &positive_roots {
        debug_assert_eq!(RootDatum::pair(&p.coroot, &p.root), scalar::int(2));
    }

    let params = normalize_parameters(type_label, parameters, &orbit_of_simple, num_orbits)?;

    Ok(RootDatum {
        type_label: type_label.to_string(),
        ambient_dim: n,
        simple_roots,
        simple_coroots,
        cartan,
        positive_roots,
        orbit_of_simple,
        num_orbits,
        parameters: params,
    })
}

fn normalize_parameters(
    label: &str,
    parameters: &[Scalar],
    orbit_of_simple: &[usize],
    num_orbits: usize,
) -> Result<Vec<Scalar>, RootSysError> {
    let rank = orbit_of_simple.len();
    if parameters.len() == num_orbits {
        return Ok(parameters.to_vec());
    }
    if parameters.len() == rank {
        // per-simple-root values: check orbit constancy, then compress
        for i in 0..rank {
            for j in i + 1..rank {
                if orbit_of_simple[i] == orbit_of_simple[j] && parameters[i] != parameters[j] {
                    return Err(RootSysError::OrbitConstancy { i, j });
                }
            }
        }
        let mut per_orbit = vec![Scalar::zero(); num_orbits];
        for i in 0..rank {
            per_orbit[orbit_of_simple[i]] = parameters[i].clone();
        }
        return Ok(per_orbit);
    }
    Err(RootSysError::ParameterCount {
        label: label.to_string(),
        expected: num_orbits,
        got: parameters.len(),
    })
}

/// Orbit closure of the simple roots under the simple reflections. Returns
/// the positive roots (each with coroot and W-orbit id) and the orbit
/// assignment of the simple roots.
fn close_roots(
    simple_roots: &[Vec<Scalar>],
    simple_coroots: &[Vec<Scalar>],
    cartan: &[Vec<i64>],
) -> (Vec<PositiveRoot>, Vec<usize>, usize) {
    let rank = simple_roots.len();
    let mut roots: Vec<(Vec<Scalar>, Vec<Scalar>)> =
        simple_roots.iter().cloned().zip(simple_coroots.iter().cloned()).collect();
    let mut seen: HashMap<Vec<Scalar>, usize> = HashMap::new();
    for (i, (r, _)) in roots.iter().enumerate() {
        seen.insert(r.clone(), i);
    }
    let mut edges: Vec<Vec<usize>> = Vec::new(); // edges[v][s] = s_i(v)
    let mut head = 0;
    while head < roots.len() {
        let (root, coroot) = roots[head].clone();
        let mut out = Vec::with_capacity(rank);
        for s in 0..rank {
            // s_s(root) = root - <root, alpha_s^vee> alpha_s
            let c = RootDatum::pair(&simple_coroots[s], &root);
            let new_root: Vec<Scalar> =
                root.iter().zip(&simple_roots[s]).map(|(r, a)| r - &(&c * a)).collect();
            // s_s(coroot) = coroot - coroot(alpha_s) alpha_s^vee
            let c2 = RootDatum::pair(&coroot, &simple_roots[s]);
            let new_coroot: Vec<Scalar> =
                coroot.iter().zip(&simple_coroots[s]).map(|(r, a)| r - &(&c2 * a)).collect();
            let idx = *seen.entry(new_root.clone()).or_insert_with(|| {
                roots.push((new_root, new_coroot));
                roots.len() - 1
            });
            out.push(idx);
        }
        edges.push(out);
        head += 1;
        let _ = cartan;
    }

    // W-orbits of the full root set
    let mut orbit = vec![usize::MAX; roots.len()];
    let mut next_orbit = 0;
    for i in 0..rank {
        if orbit[i] != usize::MAX {
            continue;
        }
        let mut stack = vec![i];
        orbit[i] = next_orbit;
        while let Some(v) = stack.pop() {
            for &u in &edges[v] {
                if orbit[u] == usize::MAX {
                    orbit[u] = next_orbit;
                    stack.push(u);
                }
            }
        }
        next_orbit += 1;
    }
    debug_assert!(orbit.iter().all(|&o| o != usize::MAX), "an orbit misses all simple roots");

    let orbit_of_simple: Vec<usize> = (0..rank).map(|i| orbit[i]).collect();
    let mut positive: Vec<PositiveRoot> = roots
        .iter()
        .enumerate()
        .filter(|(_, (r, _))| r.iter().all(|c| *c >= Scalar::zero()))
        .map(|(i, (r, c))| PositiveRoot { root: r.clone(), coroot: c.clone(), orbit: orbit[i] })
        .collect();
    // deterministic order: by coordinates
    positive.sort_by(|a, b| a.root.cmp(&b.root));
    (positive, orbit_of_simple, next_orbit)
}

/// One Weyl group element: exact matrix, a reduced word, length and sign.
#[derive(Debug, Clone)]
pub struct WeylGroupElement {
    pub matrix: Mat,
    pub word: Vec<usize>,
    pub length: usize,
    pub sign: i32,
}

/// Fully enumerated Weyl group with multiplication/inversion tables,
/// conjugacy classes, the longest element, and parabolic data for every
/// subset of the simple roots.
#[derive(Debug)]
pub struct WeylGroup {
    pub rank: usize,
    pub elements: Vec<WeylGroupElement>,
    index: HashMap<Mat, usize>,
    mult: Vec<Vec<usize>>,
    inv: Vec<usize>,
    pub class_of: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
    pub class_inverse: Vec<usize>,
    pub longest: usize,
    pub parabolic: Vec<ParabolicData>,
    /// For each positive root of the datum, the group index of its reflection.
    pub pos_root_reflection: Vec<usize>,
}

/// Data for one standard parabolic subgroup `W_J`.
#[derive(Debug)]
pub struct ParabolicData {
    pub mask: u32,
    pub elements: Vec<usize>,
    pub member: Vec<bool>,
    /// Minimal coset representatives, ordered by (length, word lex).
    pub min_reps: Vec<usize>,
    pub longest_in_j: usize,
    /// For each group element `w`, the factorization `w = u * w_J` as
    /// (position of `u` in `min_reps`, group index of `w_J`).
    pub factor: Vec<(usize, usize)>,
}

pub const DEFAULT_ORDER_CAP: usize = 10_000;

/// Enumerates the full Weyl group of a root datum by breadth-first closure
/// of the generator matrices.
pub fn enumerate_weyl_group(datum: &RootDatum) -> Result<WeylGroup, RootSysError> {
    enumerate_weyl_group_capped(datum, DEFAULT_ORDER_CAP)
}

pub fn enumerate_weyl_group_capped(
    datum: &RootDatum,
    cap: usize,
) -> Result<WeylGroup, RootSysError> {
    let rank = datum.rank();
    let n = datum.ambient_dim;
    let gens: Vec<Mat> = (0..rank).map(|i| datum.simple_reflection_matrix(i)).collect();

    let mut elements = vec![WeylGroupElement {
        matrix: Mat::identity(n),
        word: Vec::new(),
        length: 0,
        sign: 1,
    }];
    let mut index: HashMap<Mat, usize> = HashMap::new();
    index.insert(elements[0].matrix.clone(), 0);
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &w in &frontier {
            for (s, g) in gens.iter().enumerate() {
                let m = &elements[w].matrix * g;
                if index.contains_key(&m) {
                    continue;
                }
                if elements.len() >= cap {
                    return Err(RootSysError::OrderCap { cap });
                }
                let mut word = elements[w].word.clone();
                word.push(s);
                let length = word.len();
                let sign = if length % 2 == 0 { 1 } else { -1 };
                index.insert(m.clone(), elements.len());
                elements.push(WeylGroupElement { matrix: m, word, length, sign });
                next.push(elements.len() - 1);
            }
        }
        frontier = next;
    }

    let order = elements.len();
    let mut mult = vec![vec![0usize; order]; order];
    for i in 0..order {
        for j in 0..order {
            let m = &elements[i].matrix * &elements[j].matrix;
            mult[i][j] = index[&m];
        }
    }
    let mut inv = vec![0usize; order];
    for i in 0..order {
        inv[i] = (0..order).find(|&j| mult[i][j] == 0).expect("group is closed");
    }

    // conjugacy classes by brute-force conjugation
    let mut class_of = vec![usize::MAX; order];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for e in 0..order {
        if class_of[e] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut members: Vec<usize> =
            (0..order).map(|g| mult[mult[g][e]][inv[g]]).collect();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            class_of[m] = id;
        }
        classes.push(members);
    }
    let class_inverse: Vec<usize> = classes.iter().map(|c| class_of[inv[c[0]]]).collect();

    let max_len = elements.iter().map(|e| e.length).max().unwrap();
    let longest_candidates: Vec<usize> =
        (0..order).filter(|&i| elements[i].length == max_len).collect();
    debug_assert_eq!(longest_candidates.len(), 1, "longest element must be unique");
    let longest = longest_candidates[0];

    // parabolic data for every subset of the simple roots
    let mut parabolic = Vec::with_capacity(1 << rank);
    for mask in 0u32..(1 << rank) {
        let mut member = vec![false; order];
        member[0] = true;
        let mut elems = vec![0usize];
        let mut stack = vec![0usize];
        while let Some(w) = stack.pop() {
            for s in 0..rank {
                if mask & (1 << s) == 0 {
                    continue;
                }
                let sw = mult[w][index[&gens[s]]];
                if !member[sw] {
                    member[sw] = true;
                    elems.push(sw);
                    stack.push(sw);
                }
            }
        }
        elems.sort_unstable();
        let longest_in_j =
            *elems.iter().max_by_key(|&&w| elements[w].length).expect("subgroup nonempty");
        // minimal representative of each coset w W_J = smallest element index
        // (element order is (length, word lex), so this is the minimal-length one)
        let mut rep_of = vec![usize::MAX; order];
        for w in 0..order {
            rep_of[w] = elems.iter().map(|&x| mult[w][x]).min().unwrap();
        }
        let mut min_reps: Vec<usize> = rep_of.clone();
        min_reps.sort_unstable();
        min_reps.dedup();
        let rep_pos: HashMap<usize, usize> =
            min_reps.iter().enumerate().map(|(p, &r)| (r, p)).collect();
        let mut factor = vec![(0usize, 0usize); order];
        for w in 0..order {
            let u = rep_of[w];
            let x = mult[inv[u]][w];
            debug_assert!(member[x]);
            debug_assert_eq!(elements[w].length, elements[u].length + elements[x].length);
            factor[w] = (rep_pos[&u], x);
        }
        parabolic.push(ParabolicData {
            mask,
            elements: elems,
            member,
            min_reps,
            longest_in_j,
            factor,
        });
    }

    let pos_root_reflection = datum
        .positive_roots
        .iter()
        .map(|p| index[&datum.reflection_matrix(&p.root, &p.coroot)])
        .collect();

    Ok(WeylGroup {
        rank,
        elements,
        index,
        mult,
        inv,
        class_of,
        classes,
        class_inverse,
        longest,
        parabolic,
        pos_root_reflection,
    })
}

impl WeylGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn multiply(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn index_of_matrix(&self, m: &Mat) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn simple_reflection(&self, s: usize) -> usize {
        // generators appear right after the identity in BFS order
        1 + s
    }

    /// The weight `w . gamma = gamma o w^{-1}` for a covector `gamma`.
    pub fn act_on_weight(&self, w: usize, gamma: &[Scalar]) -> Vec<Scalar> {
        self.elements[self.inv[w]].matrix.apply_left(gamma)
    }

    pub fn parabolic_data(&self, subset: &[usize]) -> Result<&ParabolicData, RootSysError> {
        Ok(&self.parabolic[self.subset_mask(subset)? as usize])
    }

    pub fn subset_mask(&self, subset: &[usize]) -> Result<u32, RootSysError> {
        let mut mask = 0u32;
        for &s in subset {
            if s >= self.rank {
                return Err(RootSysError::InvalidSubset { index: s, rank: self.rank });
            }
            mask |= 1 << s;
        }
        Ok(mask)
    }
}

/// Conjugacy classes whose elements have no fixed vectors in the ambient
/// space, i.e. `det_V(1 - w)` is nonzero.
pub fn elliptic_classes(weyl: &WeylGroup) -> Vec<usize> {
    weyl.classes
        .iter()
        .enumerate()
        .filter(|(_, members)| !weyl.elements[members[0]].matrix.det_one_minus().is_zero())
        .map(|(id, _)| id)
        .collect()
}

/// Minimal-length coset representatives for `W / W_J`, ordered by
/// (length, word lex).
pub fn minimal_coset_reps(weyl: &WeylGroup, subset: &[usize]) -> Result<Vec<usize>, RootSysError> {
    Ok(weyl.parabolic_data(subset)?.min_reps.clone())
}

/// A root datum together with its enumerated Weyl group. All module-level
/// computations share one of these, immutably.
#[derive(Debug)]
pub struct HeckeContext {
    pub datum: RootDatum,
    pub weyl: WeylGroup,
}

impl HeckeContext {
    pub fn new(datum: RootDatum) -> Result<Arc<Self>, RootSysError> {
        let weyl = enumerate_weyl_group(&datum)?;
        Ok(Arc::new(HeckeContext { datum, weyl }))
    }

    pub fn build(
        type_label: &str,
        parameters: &[Scalar],
        extra_ambient: usize,
    ) -> Result<Arc<Self>, RootSysError> {
        Self::new(build_root_datum(type_label, parameters, extra_ambient)?)
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    pub fn dim(&self) -> usize {
        self.datum.ambient_dim
    }

    /// The parabolic subdatum generated by the simple roots in `subset`,
    /// living in the same ambient space, with parameters inherited from the
    /// parent orbits.
    pub fn parabolic_subcontext(&self, subset: &[usize]) -> Result<Arc<Self>, RootSysError> {
        let mut subset: Vec<usize> = subset.to_vec();
        subset.sort_unstable();
        subset.dedup();
        for &s in &subset {
            if s >= self.rank() {
                return Err(RootSysError::InvalidSubset { index: s, rank: self.rank() });
            }
        }
        let simple_roots: Vec<Vec<Scalar>> =
            subset.iter().map(|&s| self.datum.simple_roots[s].clone()).collect();
        let simple_coroots: Vec<Vec<Scalar>> =
            subset.iter().map(|&s| self.datum.simple_coroots[s].clone()).collect();
        let cartan: Vec<Vec<i64>> = subset
            .iter()
            .map(|&i| subset.iter().map(|&j| self.datum.cartan[i][j]).collect())
            .collect();
        let (positive_roots, orbit_of_simple, num_orbits) =
            close_roots(&simple_roots, &simple_coroots, &cartan);
        let mut parameters = vec![Scalar::zero(); num_orbits];
        for (pos, &s) in subset.iter().enumerate() {
            parameters[orbit_of_simple[pos]] = self.datum.k_of_simple(s).clone();
        }
        let label = format!(
            "{}[J={}]",
            self.datum.type_label,
            subset.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
        );
        let datum = RootDatum {
            type_label: label,
            ambient_dim: self.datum.ambient_dim,
            simple_roots,
            simple_coroots,
            cartan,
            positive_roots,
            orbit_of_simple,
            num_orbits,
            parameters,
        };
        Self::new(datum)
    }
}

// ---------------------------------------------------------------------------
// serialization

/// Renders a root datum as a structured text document. Scalars are `p/q`,
/// so the round-trip through `datum_from_text` is bit-exact.
pub fn datum_to_text(d: &RootDatum) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "[datum]");
    let _ = writeln!(out, "type = {}", d.type_label);
    let _ = writeln!(out, "ambient_dim = {}", d.ambient_dim);
    let rows: Vec<String> = d
        .simple_roots
        .iter()
        .map(|r| r.iter().map(scalar::render).collect::<Vec<_>>().join(" "))
        .collect();
    let _ = writeln!(out, "simple_roots = {}", rows.join(" ; "));
    let rows: Vec<String> = d
        .cartan
        .iter()
        .map(|r| r.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(" "))
        .collect();
    let _ = writeln!(out, "cartan = {}", rows.join(" ; "));
    let params: Vec<String> = d.parameters.iter().map(scalar::render).collect();
    let _ = writeln!(out, "parameters = {}", params.join(" "));
    out
}

/// Parses the output of [`datum_to_text`]. The datum is rebuilt from the type
/// label and parameters and then checked against the serialized realization,
/// so a tampered file cannot smuggle in an inconsistent datum.
pub fn datum_from_text(text: &str) -> Result<RootDatum, RootSysError> {
    let fields = parse_kv_section(text, "datum")?;
    let get = |key: &str| -> Result<&(usize, String), RootSysError> {
        fields.get(key).ok_or_else(|| RootSysError::Parse {
            line: 0,
            msg: format!("missing key `{key}` in [datum] section"),
        })
    };
    let type_label = &get("type")?.1;
    let (line, ambient) = get("ambient_dim")?;
    let ambient_dim: usize = ambient.parse().map_err(|_| RootSysError::Parse {
        line: *line,
        msg: format!("bad ambient_dim `{ambient}`"),
    })?;
    let (pline, ptext) = get("parameters")?;
    let mut parameters = Vec::new();
    for tok in ptext.split_whitespace() {
        parameters.push(scalar::parse(tok).ok_or_else(|| RootSysError::Parse {
            line: *pline,
            msg: format!("bad scalar `{tok}`"),
        })?);
    }
    let datum = build_root_datum(type_label, &parameters, ambient_dim.saturating_sub({
        let probe = cartan_of_type(type_label)?;
        probe.len()
    }))?;
    if datum.ambient_dim != ambient_dim {
        return Err(RootSysError::Parse {
            line: *line,
            msg: format!("ambient_dim {ambient_dim} is smaller than the rank of {type_label}"),
        });
    }
    // verify the serialized realization matches the canonical one
    let (rline, rtext) = get("simple_roots")?;
    let listed = parse_scalar_rows(rtext, *rline)?;
    if listed != datum.simple_roots {
        return Err(RootSysError::Parse {
            line: *rline,
            msg: "simple_roots do not match the canonical realization of this type".into(),
        });
    }
    let (cline, ctext) = get("cartan")?;
    let listed_cartan: Vec<Vec<i64>> = ctext
        .split(';')
        .map(|row| {
            row.split_whitespace()
                .map(|tok| {
                    tok.parse::<i64>().map_err(|_| RootSysError::Parse {
                        line: *cline,
                        msg: format!("bad integer `{tok}` in cartan"),
                    })
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    if listed_cartan != datum.cartan {
        return Err(RootSysError::Parse {
            line: *cline,
            msg: "cartan matrix does not match this type".into(),
        });
    }
    Ok(datum)
}

fn parse_scalar_rows(text: &str, line: usize) -> Result<Vec<Vec<Scalar>>, RootSysError> {
    text.split(';')
        .map(|row| {
            row.split_whitespace()
                .map(|tok| {
                    scalar::parse(tok).ok_or_else(|| RootSysError::Parse {
                        line,
                        msg: format!("bad scalar `{tok}`"),
                    })
                })
                .collect()
        })
        .collect()
}

/// Parses a single `[section]` of `key = value` lines; returns a map from
/// key to (line number, value).
pub fn parse_kv_section(
    text: &str,
    section: &str,
) -> Result<HashMap<String, (usize, String)>, RootSysError> {
    let mut fields = HashMap::new();
    let mut in_section = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.starts_with('[') {
            in_section = line == format!("[{section}]");
            continue;
        }
        if !in_section {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(RootSysError::Parse {
                line: lineno + 1,
                msg: format!("expected `key = value`, got `{line}`"),
            });
        };
        fields.insert(key.trim().to_string(), (lineno + 1, value.trim().to_string()));
    }
    if fields.is_empty() {
        return Err(RootSysError::Parse { line: 0, msg: format!("missing [{section}] section") });
    }
    Ok(fields)
}
