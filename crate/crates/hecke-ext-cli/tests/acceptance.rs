//! Acceptance battery: one test per criterion, each printing a PASS line.
//!
//! The battery covers the root data A1, A2, B2 (equal and unequal
//! parameters) and G2, the modules triv, St, M(3...), M(0) and their dual
//! composites, and runs entirely in exact rational arithmetic: every
//! comparison below is exact equality, there are no tolerances.

use hecke_ext::algebra::{
    dd, dual_bullet, dual_star, iota, is_isomorphic, sgn_character, theta, validate_module,
    w_character, HModule, RelationFamily,
};
use hecke_ext::constructions::{
    central_character, is_discrete_series, is_tempered, principal_series, steinberg,
    trivial_module,
};
use hecke_ext::homology::{
    aubert_virtual_character, build_complex, dual_differential_crosscheck, duality_check,
    elliptic_pairing, ext_dims, indres_complex, pairing_summary, WedgeBasis,
};
use hecke_ext::linalg::Mat;
use hecke_ext::rootsys::{elliptic_classes, HeckeContext};
use hecke_ext::scalar::{int, Scalar};
use std::sync::Arc;

struct Battery {
    name: &'static str,
    ctx: Arc<HeckeContext>,
    triv: HModule,
    st: HModule,
    m3: HModule,
    m0: HModule,
}

impl Battery {
    fn base(&self) -> [&HModule; 4] {
        [&self.triv, &self.st, &self.m3, &self.m0]
    }

    fn irreducibles(&self) -> [&HModule; 3] {
        [&self.triv, &self.st, &self.m3]
    }

    fn composites(&self) -> Vec<HModule> {
        let mut out = Vec::new();
        for m in self.base() {
            out.push(iota(m));
            out.push(theta(m));
            out.push(dual_star(m));
            out.push(dual_bullet(m));
            out.push(dd(m));
        }
        out
    }
}

fn battery(name: &'static str, k: &[i64]) -> Battery {
    let params: Vec<Scalar> = k.iter().map(|&v| int(v)).collect();
    let label = if name.starts_with("B2") { "B2" } else { name };
    let ctx = HeckeContext::build(label, &params, 0).unwrap();
    let triv = trivial_module(&ctx).unwrap();
    let st = steinberg(&ctx).unwrap();
    let m3 = principal_series(&ctx, &vec![int(3); ctx.dim()]).unwrap();
    let m0 = principal_series(&ctx, &vec![int(0); ctx.dim()]).unwrap();
    Battery { name, ctx, triv, st, m3, m0 }
}

fn batteries() -> Vec<Battery> {
    vec![
        battery("A1", &[1]),
        battery("A2", &[1, 1]),
        battery("B2", &[1, 1]),
        battery("B2u", &[1, 2]),
        battery("G2", &[1, 1]),
    ]
}

fn equal_parameter_batteries() -> Vec<Battery> {
    batteries().into_iter().filter(|b| b.name != "B2u").collect()
}

fn binomials(n: usize) -> Vec<usize> {
    let mut row = vec![1usize];
    for _ in 0..n {
        let mut next = vec![1];
        for w in row.windows(2) {
            next.push(w[0] + w[1]);
        }
        next.push(1);
        row = next;
    }
    row
}

#[test]
fn criterion_01_relation_suite() {
    for b in batteries() {
        for m in b.base() {
            assert!(validate_module(m).all_pass(), "{}: {} must validate", b.name, m.label);
        }
        for m in b.composites() {
            assert!(validate_module(&m).all_pass(), "{}: {} must validate", b.name, m.label);
        }
    }

    // deliberate corruptions, each failing with the correct family named
    let a1 = HeckeContext::build("A1", &[int(1)], 0).unwrap();
    let cross_broken = HModule::from_parts(
        a1,
        "cross-broken",
        vec![Mat::from_int_rows(&[&[-1]])],
        vec![Mat::from_int_rows(&[&[1]])],
    );
    assert_eq!(
        validate_module(&cross_broken).failing_families(),
        vec![RelationFamily::CrossRelation]
    );

    let a2 = HeckeContext::build("A2", &[int(1)], 0).unwrap();
    let braid_broken = HModule::from_parts(
        a2,
        "braid-broken",
        vec![Mat::from_int_rows(&[&[1]]), Mat::from_int_rows(&[&[-1]])],
        vec![Mat::from_int_rows(&[&[1]]), Mat::from_int_rows(&[&[-1]])],
    );
    assert!(validate_module(&braid_broken)
        .failing_families()
        .contains(&RelationFamily::WRelations));

    let padded = HeckeContext::build("A1", &[int(1)], 1).unwrap();
    let noncommuting = HModule::from_parts(
        padded,
        "noncommuting",
        vec![Mat::from_int_rows(&[&[0, 1], &[1, 0]])],
        vec![Mat::from_int_rows(&[&[0, 1], &[0, 0]]), Mat::from_int_rows(&[&[0, 0], &[1, 0]])],
    );
    assert!(validate_module(&noncommuting)
        .failing_families()
        .contains(&RelationFamily::VCommutativity));

    println!("[criterion 1] relation suite: PASS");
}

#[test]
fn criterion_02_complex_axioms() {
    for b in batteries() {
        for x in b.base() {
            for y in b.base() {
                // build_complex verifies D o D = 0 and the character count
                let complex = build_complex(x, y)
                    .unwrap_or_else(|e| panic!("{}: ({}, {}): {e}", b.name, x.label, y.label));
                // exact equality of the v-form and tilde-form differentials
                dual_differential_crosscheck(x, y, &complex)
                    .unwrap_or_else(|e| panic!("{}: ({}, {}): {e}", b.name, x.label, y.label));
            }
        }
        // a sample of composite pairs
        let pairs = [(iota(&b.st), dual_bullet(&b.m0)), (dd(&b.triv), theta(&b.m3))];
        for (x, y) in &pairs {
            let complex = build_complex(x, y).unwrap();
            dual_differential_crosscheck(x, y, &complex).unwrap();
        }
    }
    println!("[criterion 2] complex axioms (d^2 = 0, v-form = tilde-form): PASS");
}

/// Independent oracle: the plain polynomial-ring complex computing
/// `Ext_{S(V)}(C_gamma, Res M)`, with terms `Hom(wedge^i V, M)` and
/// differential `sum_j (-1)^{j+1} (rho(e_j) - gamma(e_j))`. No Weyl group,
/// no equivariance, no tilde operators anywhere.
fn sv_koszul_dims(m: &HModule, gamma: &[Scalar]) -> Vec<usize> {
    let n = m.context().dim();
    let d = m.dim();
    let ops: Vec<Mat> = (0..n)
        .map(|i| {
            let mut op = m.gen_v(i).clone();
            for r in 0..d {
                op[(r, r)] -= &gamma[i];
            }
            op
        })
        .collect();
    let mut ranks = Vec::new();
    let mut term_dims = Vec::new();
    for i in 0..n {
        let wb_from = WedgeBasis::new(n, i);
        let wb_to = WedgeBasis::new(n, i + 1);
        term_dims.push(wb_from.count() * d);
        let mut mat = Mat::zeros(wb_to.count() * d, wb_from.count() * d);
        for (lidx, l) in wb_to.subsets.iter().enumerate() {
            for (j, &v) in l.iter().enumerate() {
                let reduced: Vec<usize> = l.iter().copied().filter(|&u| u != v).collect();
                let kidx = wb_from.index_of(&reduced);
                for r in 0..d {
                    for c in 0..d {
                        let val = &ops[v][(r, c)];
                        if val != &int(0) {
                            let signed = if j % 2 == 0 { val.clone() } else { -val.clone() };
                            mat[(lidx * d + r, kidx * d + c)] += signed;
                        }
                    }
                }
            }
        }
        ranks.push(mat.rank());
    }
    term_dims.push(WedgeBasis::new(n, n).count() * d);
    (0..=n)
        .map(|i| {
            let out = if i < n { ranks[i] } else { 0 };
            let inc = if i > 0 { ranks[i - 1] } else { 0 };
            term_dims[i] - out - inc
        })
        .collect()
}

#[test]
fn criterion_03_ext_values() {
    // Ext(St, St) = [1, 0, ..., 0] in all four equal-parameter types
    for b in equal_parameter_batteries() {
        let dims = ext_dims(&b.st, &b.st).unwrap().dims;
        let mut expected = vec![0; b.ctx.dim() + 1];
        expected[0] = 1;
        assert_eq!(dims, expected, "{}", b.name);
    }

    // Ext(triv, St) on A1 = [0, 1]
    let a1 = battery("A1", &[1]);
    assert_eq!(ext_dims(&a1.triv, &a1.st).unwrap().dims, vec![0, 1]);

    // Ext(M(gamma), M(gamma)) = binomial row, against the polynomial-ring
    // Koszul oracle, on A1 and A2
    for b in [battery("A1", &[1]), battery("A2", &[1, 1])] {
        let n = b.ctx.dim();
        let gamma = vec![int(3); n];
        let oracle = sv_koszul_dims(&b.m3, &gamma);
        let ours = ext_dims(&b.m3, &b.m3).unwrap().dims;
        assert_eq!(oracle, binomials(n), "{}: oracle must give the binomial row", b.name);
        assert_eq!(ours, oracle, "{}: complex must match the oracle", b.name);
    }
    println!("[criterion 3] exact Ext values (Thm-style vanishing and Koszul row): PASS");
}

#[test]
fn criterion_04_duality() {
    for b in batteries() {
        let n = b.ctx.dim();
        for x in b.base() {
            for y in b.base() {
                // duality_check verifies, exactly:
                // - dim Ext^i(X, Y) = dim Ext^{n-i}(star X, bullet(iota Y)),
                // - the chain-level adjointness identity,
                // - full rank of the homology pairing in every degree.
                duality_check(x, y)
                    .unwrap_or_else(|e| panic!("{}: ({}, {}): {e}", b.name, x.label, y.label));
            }
        }
        // top-degree duality partner: Ext^n(X, Y) is one-dimensional exactly
        // when X ~ D(Y), for irreducible battery modules
        for x in b.irreducibles() {
            for y in b.irreducibles() {
                let matching = is_isomorphic(x, &dd(y)).unwrap();
                let top = ext_dims(x, y).unwrap().dims[n];
                assert_eq!(
                    top,
                    usize::from(matching),
                    "{}: Ext^n({}, {})",
                    b.name,
                    x.label,
                    y.label
                );
            }
        }
    }
    println!("[criterion 4] duality (dimension symmetry, adjointness, nondegenerate pairing, top-degree partner): PASS");
}

#[test]
fn criterion_05_euler_poincare() {
    for b in batteries() {
        for x in b.base() {
            for y in b.base() {
                let s = pairing_summary(x, y)
                    .unwrap_or_else(|e| panic!("{}: ({}, {}): {e}", b.name, x.label, y.label));
                assert_eq!(
                    s.euler_poincare, s.elliptic,
                    "{}: EP({}, {}) vs elliptic",
                    b.name, x.label, y.label
                );
            }
            // principal series pair to zero against everything
            for m in [&b.m3, &b.m0] {
                let s = pairing_summary(m, x).unwrap();
                assert_eq!(s.euler_poincare, int(0), "{}: EP({}, {})", b.name, m.label, x.label);
            }
        }
    }
    println!("[criterion 5] Euler-Poincare = elliptic pairing, EP(M(gamma), -) = 0: PASS");
}

#[test]
fn criterion_06_indres_and_aubert() {
    for b in [battery("A1", &[1]), battery("A2", &[1, 1])] {
        for x in [&b.st, &b.triv] {
            let report = indres_complex(x).unwrap();
            assert!(report.composition_zero, "{}: pi o pi = 0 for {}", b.name, x.label);
            assert!(report.exact, "{}: exactness for {}", b.name, x.label);
            assert!(report.kernel_is_dd, "{}: ker pi_0 = D({})", b.name, x.label);
            assert!(report.chi_spans_kernel, "{}: alternating embedding spans the kernel", b.name);
        }
    }
    for b in batteries() {
        let sgn = sgn_character(&b.ctx.weyl);
        for m in b.base() {
            let aubert = aubert_virtual_character(m).unwrap();
            let expected = w_character(m).unwrap().pointwise_mul(&sgn);
            assert_eq!(aubert, expected, "{}: {}", b.name, m.label);
        }
        for m in b.composites() {
            let aubert = aubert_virtual_character(&m).unwrap();
            let expected = w_character(&m).unwrap().pointwise_mul(&sgn);
            assert_eq!(aubert, expected, "{}: {}", b.name, m.label);
        }
    }
    println!("[criterion 6] Ind-Res resolution exact, kernel = D(X), alternating character = sgn twist: PASS");
}

#[test]
fn criterion_07_classification() {
    for b in equal_parameter_batteries() {
        assert!(is_discrete_series(&b.st).unwrap(), "{}: St is a discrete series", b.name);
        assert!(!is_tempered(&b.triv).unwrap(), "{}: trivial is not tempered", b.name);
        assert!(is_tempered(&b.m0).unwrap(), "{}: M(0) is tempered", b.name);
        assert!(!is_discrete_series(&b.m0).unwrap(), "{}: M(0) is not a discrete series", b.name);
    }
    let expected_counts = [("A1", 1usize), ("A2", 1), ("B2", 2), ("G2", 3)];
    for (label, count) in expected_counts {
        let b = equal_parameter_batteries()
            .into_iter()
            .find(|b| b.name == label)
            .unwrap();
        let classes = elliptic_classes(&b.ctx.weyl);
        assert_eq!(classes.len(), count, "{label}: elliptic class count");
        // bound report: discrete series found in the battery vs the bound
        let ds_found = b
            .irreducibles()
            .iter()
            .filter(|m| is_discrete_series(m).unwrap())
            .count();
        assert!(ds_found <= count, "{label}: discrete-series bound");
        println!(
            "[criterion 7] {label}: elliptic classes = {count}, discrete series found = {ds_found} (bound respected)"
        );
    }
    println!("[criterion 7] classification (St discrete, triv not tempered, M(0) boundary): PASS");
}

#[test]
fn criterion_08_self_duality() {
    for b in batteries() {
        assert!(is_isomorphic(&b.st, &dual_star(&b.st)).unwrap(), "{}: St = star St", b.name);
        assert!(is_isomorphic(&b.st, &dual_bullet(&b.st)).unwrap(), "{}: St = bullet St", b.name);
        assert!(is_isomorphic(&b.st, &theta(&b.st)).unwrap(), "{}: St = theta St", b.name);
        let cc = central_character(&b.st).unwrap();
        let cc_theta = central_character(&theta(&b.st)).unwrap();
        assert_eq!(cc, cc_theta, "{}: central character of St is theta-stable", b.name);
    }
    println!("[criterion 8] Steinberg self-duality and theta-stable central character: PASS");
}

#[test]
fn criterion_09_vanishing_sanity() {
    for b in batteries() {
        let n = b.ctx.dim();
        // pairs with distinct central characters have identically zero Ext
        let pairs = [(&b.m3, &b.m0), (&b.m3, &b.triv), (&b.m0, &b.st)];
        for (x, y) in pairs {
            let cx = central_character(x).unwrap();
            let cy = central_character(y).unwrap();
            assert_ne!(cx, cy, "{}: ({}, {}) must have distinct central characters", b.name, x.label, y.label);
            let profile = ext_dims(x, y).unwrap();
            assert!(profile.is_zero(), "{}: Ext({}, {}) = 0", b.name, x.label, y.label);
            let rev = ext_dims(y, x).unwrap();
            assert!(rev.is_zero(), "{}: Ext({}, {}) = 0", b.name, y.label, x.label);
        }
        // no Ext above the ambient dimension: the complex stops at degree n
        // because wedge^{n+1} V = 0
        assert_eq!(WedgeBasis::new(n, n + 1).count(), 0);
        for x in b.base() {
            assert_eq!(ext_dims(x, &b.st).unwrap().dims.len(), n + 1);
        }
    }
    println!("[criterion 9] vanishing sanity (distinct central characters, global dimension): PASS");
}

#[test]
fn criterion_10_determinism() {
    let dir = format!("{}/scenarios", env!("CARGO_MANIFEST_DIR"));
    let files =
        ["battery_a1.scn", "battery_a2.scn", "battery_b2.scn", "battery_b2_unequal.scn", "battery_g2.scn"];
    let run_all = || {
        let mut out = String::new();
        for f in &files {
            let text = std::fs::read_to_string(format!("{dir}/{f}")).unwrap();
            let scenario = hecke_ext_cli::parse_scenario(&text).unwrap();
            let records = hecke_ext_cli::run_scenario(&scenario).unwrap();
            assert!(
                hecke_ext_cli::runner::all_checks_pass(&records),
                "{f}: all scenario checks must pass"
            );
            out.push_str(&hecke_ext_cli::records_text(&records));
        }
        out
    };
    let first = run_all();
    let second = run_all();
    assert!(!first.is_empty());
    assert_eq!(first, second, "machine-readable reports must be byte-identical across runs");
    println!("[criterion 10] determinism (byte-identical battery reports, all checks green): PASS");
}

#[test]
fn elliptic_pairing_value_spot_checks() {
    // hand-computed values on A1
    let b = battery("A1", &[1]);
    let weyl = &b.ctx.weyl;
    let sgn = sgn_character(weyl);
    let triv_chi = w_character(&b.triv).unwrap();
    assert_eq!(elliptic_pairing(weyl, &sgn, &sgn), int(1));
    assert_eq!(elliptic_pairing(weyl, &triv_chi, &sgn), int(-1));
    let reg = w_character(&b.m3).unwrap();
    assert_eq!(elliptic_pairing(weyl, &reg, &triv_chi), int(0));
}
