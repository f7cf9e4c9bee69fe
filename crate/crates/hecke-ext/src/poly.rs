//! Univariate polynomials over the rational scalars, just enough for exact
//! spectral work: characteristic polynomials come in, rational eigenvalues
//! with multiplicities come out. A polynomial that fails to split over the
//! rationals is reported as an error rather than approximated.

use crate::scalar::{self, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Coefficients by ascending degree; invariant: no trailing zero (unless zero poly).
pub type Poly = Vec<Scalar>;

#[derive(Debug, Error)]
pub enum SplitError {
    #[error("spectrum does not split over the rationals; non-linear factor remains: {0}")]
    NonSplit(String),
    #[error("integer factorization exceeded the trial-division bound while listing candidate roots of {0}")]
    FactorBound(String),
}

pub fn trim(mut p: Poly) -> Poly {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub fn degree(p: &Poly) -> usize {
    p.len().saturating_sub(1)
}

pub fn eval(p: &Poly, x: &Scalar) -> Scalar {
    let mut acc = Scalar::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn derivative(p: &Poly) -> Poly {
    if p.len() <= 1 {
        return vec![Scalar::zero()];
    }
    trim((1..p.len()).map(|i| &p[i] * scalar::int(i as i64)).collect())
}

fn make_monic(p: &Poly) -> Poly {
    let lead = p.last().unwrap();
    if lead.is_zero() || lead.is_one() {
        return p.clone();
    }
    p.iter().map(|c| c / lead).collect()
}

/// Remainder of `a` divided by (nonzero) `b`.
fn rem(a: &Poly, b: &Poly) -> Poly {
    let db = degree(b);
    if db == 0 {
        // a nonzero constant divides everything
        return vec![Scalar::zero()];
    }
    let mut r = trim(a.clone());
    let lead = b.last().unwrap();
    while degree(&r) >= db && !r.iter().all(Zero::is_zero) {
        let shift = degree(&r) - db;
        let q = r.last().unwrap() / lead;
        for i in 0..=db {
            let delta = &q * &b[i];
            r[shift + i] -= delta;
        }
        r = trim(r);
    }
    if r.iter().all(Zero::is_zero) {
        return vec![Scalar::zero()];
    }
    trim(r)
}

/// Monic gcd over the rationals.
fn gcd_poly(a: &Poly, b: &Poly) -> Poly {
    let mut x = trim(a.clone());
    let mut y = trim(b.clone());
    while !(y.len() == 1 && y[0].is_zero()) {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    make_monic(&x)
}

/// Square-free part `p / gcd(p, p')`, monic.
pub fn square_free_part(p: &Poly) -> Poly {
    let g = gcd_poly(p, &derivative(p));
    if degree(&g) == 0 {
        return make_monic(p);
    }
    let (q, r) = div_exact(p, &g);
    debug_assert!(r.iter().all(Zero::is_zero));
    make_monic(&q)
}

/// Quotient and remainder of polynomial division.
fn div_exact(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let mut r = trim(a.clone());
    let db = degree(b);
    let lead = b.last().unwrap();
    let da = degree(&r);
    if da < db {
        return (vec![Scalar::zero()], r);
    }
    let mut q = vec![Scalar::zero(); da - db + 1];
    while degree(&r) >= db && !(r.len() == 1 && r[0].is_zero()) {
        let shift = degree(&r) - db;
        let c = r.last().unwrap() / lead;
        q[shift] = c.clone();
        for i in 0..=db {
            let delta = &c * &b[i];
            r[shift + i] -= delta;
        }
        r = trim(r);
        if r.iter().all(Zero::is_zero) {
            r = vec![Scalar::zero()];
            break;
        }
    }
    (trim(q), r)
}

fn render_poly(p: &Poly) -> String {
    let terms: Vec<String> =
        p.iter().enumerate().map(|(i, c)| format!("{}*x^{}", scalar::render_short(c), i)).collect();
    terms.join(" + ")
}

const TRIAL_BOUND: u64 = 1 << 20;

/// Divisors of `|n|` (n nonzero) via trial division; `None` when the
/// remaining cofactor cannot be certified prime within the bound.
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let mut m = n.abs();
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let push = |p: BigInt, primes: &mut Vec<(BigInt, u32)>| {
        if let Some(last) = primes.last_mut() {
            if last.0 == p {
                last.1 += 1;
                return;
            }
        }
        primes.push((p, 1));
    };
    let mut d: u64 = 2;
    while BigInt::from(d) * BigInt::from(d) <= m && d <= TRIAL_BOUND {
        while (&m % d).is_zero() {
            m /= d;
            push(BigInt::from(d), &mut primes);
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        // no factor below the bound, so m is prime iff m <= bound^2
        if m > BigInt::from(TRIAL_BOUND) * BigInt::from(TRIAL_BOUND) {
            return None;
        }
        push(m, &mut primes);
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs.dedup();
    Some(divs)
}

/// All rational roots of `p` with multiplicities. Errors unless the roots
/// found account for the full degree, i.e. `p` splits into linear factors
/// over the rationals.
pub fn rational_roots(p: &Poly) -> Result<Vec<(Scalar, usize)>, SplitError> {
    let mut p = trim(p.clone());
    assert!(p.iter().any(|c| !c.is_zero()), "zero polynomial has no spectrum");
    let mut roots: Vec<(Scalar, usize)> = Vec::new();

    // roots at zero
    let zero_mult = p.iter().take_while(|c| c.is_zero()).count();
    if zero_mult > 0 {
        roots.push((Scalar::zero(), zero_mult));
        p = p.split_off(zero_mult);
    }
    if degree(&p) == 0 {
        return Ok(roots);
    }

    let s = square_free_part(&p);
    // scale to integer coefficients
    let denom_lcm = s.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = s.iter().map(|c| (c * Scalar::from_integer(denom_lcm.clone())).numer().clone()).collect();
    let a0 = ints.first().unwrap().clone();
    let al = ints.last().unwrap().clone();
    debug_assert!(!a0.is_zero() && !al.is_zero());
    let (num_divs, den_divs) = match (divisors(&a0), divisors(&al)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(SplitError::FactorBound(render_poly(&p))),
    };

    let mut candidates: Vec<Scalar> = Vec::new();
    for num in &num_divs {
        for den in &den_divs {
            let r = Scalar::new(num.clone(), den.clone());
            candidates.push(r.clone());
            candidates.push(-r);
        }
    }
    candidates.sort();
    candidates.dedup();

    let mut found = 0usize;
    for c in candidates {
        if eval(&s, &c).is_zero() {
            // multiplicity in the original p by repeated exact division
            let lin = vec![-c.clone(), Scalar::one()];
            let mut mult = 0;
            loop {
                let (q, r) = div_exact(&p, &lin);
                if r.iter().all(Zero::is_zero) {
                    mult += 1;
                    p = q;
                } else {
                    break;
                }
            }
            debug_assert!(mult >= 1);
            roots.push((c, mult));
            found += mult;
        }
    }
    let _ = found;
    if degree(&p) > 0 {
        return Err(SplitError::NonSplit(render_poly(&p)));
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    #[test]
    fn roots_of_split_polynomial() {
        // (x - 3)(x + 3)(x - 1/2)^2 = x^4 - x^3 - 35/4 x^2 + 9x - 9/4
        let p = vec![frac(-9, 4), int(9), frac(-35, 4), int(-1), int(1)];
        let roots = rational_roots(&p).unwrap();
        assert_eq!(roots, vec![(int(-3), 1), (frac(1, 2), 2), (int(3), 1)]);
    }

    #[test]
    fn roots_with_zero_eigenvalue() {
        // x^2 (x - 2)
        let p = vec![int(0), int(0), int(-2), int(1)];
        assert_eq!(rational_roots(&p).unwrap(), vec![(int(0), 2), (int(2), 1)]);
    }

    #[test]
    fn irrational_spectrum_is_an_error() {
        // x^2 - 2
        let p = vec![int(-2), int(0), int(1)];
        assert!(matches!(rational_roots(&p), Err(SplitError::NonSplit(_))));
    }

    #[test]
    fn square_free_strips_multiplicity() {
        // (x-1)^3 -> x - 1
        let p = vec![int(-1), int(3), int(-3), int(1)];
        assert_eq!(square_free_part(&p), vec![int(-1), int(1)]);
    }
}
