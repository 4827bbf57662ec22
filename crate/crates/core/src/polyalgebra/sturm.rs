use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::unipoly::UniPoly;
use crate::error::{Error, Result};

/// Real-root summary of a univariate polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RootCount {
    pub distinct_real: usize,
    pub all_roots_real: bool,
}

/// Positive primitive multiple of `p` with integer coefficients.
fn primitive_ints(p: &UniPoly) -> Vec<BigInt> {
    p.primitive().coeffs().iter().map(|c| c.numer().clone()).collect()
}

fn trim(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

/// Divides out the content, keeping every sign.
fn normalize(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let content = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !content.is_zero() && !content.is_one() {
        v.iter_mut().for_each(|c| *c /= &content);
    }
    v
}

/// A positive multiple of `a mod b`, computed without fractions.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lc = &b[db];
    let lc_abs = lc.abs();
    let mut r = a.to_vec();
    while r.len() > db {
        let dr = r.len() - 1;
        let f = if lc.is_negative() { -&r[dr] } else { r[dr].clone() };
        r.iter_mut().for_each(|c| *c *= &lc_abs);
        for (j, bj) in b.iter().enumerate() {
            r[dr - db + j] -= &f * bj;
        }
        trim(&mut r);
    }
    r
}

/// `p, p', -rem(p, p'), ...` down to the last nonzero remainder. Every
/// element is replaced by its positive primitive multiple, which bounds
/// coefficient growth without changing any sign.
pub fn sturm_sequence(p: &UniPoly) -> Vec<UniPoly> {
    let to_poly = |v: &[BigInt]| UniPoly::new(v.iter().cloned().map(BigRational::from_integer).collect());
    let mut seq = vec![primitive_ints(p)];
    let d = primitive_ints(&p.derivative());
    if !d.is_empty() {
        seq.push(d);
        loop {
            let n = seq.len();
            let r = pseudo_rem(&seq[n - 2], &seq[n - 1]);
            if r.is_empty() {
                break;
            }
            seq.push(normalize(r.into_iter().map(|c| -c).collect()));
        }
    }
    seq.iter().map(|v| to_poly(v)).collect()
}

fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut count = 0;
    let mut prev = 0;
    for s in signs.filter(|&s| s != 0) {
        if prev != 0 && s != prev {
            count += 1;
        }
        prev = s;
    }
    count
}

fn count_from_sequence(seq: &[UniPoly]) -> usize {
    let at_neg = variations(seq.iter().map(|q| q.sign_at_infinity(false)));
    let at_pos = variations(seq.iter().map(|q| q.sign_at_infinity(true)));
    at_neg - at_pos
}

/// Number of distinct real roots, from sign variations at `-∞` and `+∞`.
pub fn count_distinct_real(p: &UniPoly) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(count_from_sequence(&sturm_sequence(p)))
}

/// Counts distinct real roots of `p` and decides whether every complex root
/// is real, i.e. whether the squarefree part `p / gcd(p, p')` has as many
/// distinct real roots as its degree.
///
/// The last element of the Sturm sequence is `gcd(p, p')` up to a constant.
/// When it is not constant, the squarefree part gets its own sequence and
/// the two counts must agree.
pub fn sturm_real_roots(p: &UniPoly) -> Result<RootCount> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let seq = sturm_sequence(p);
    let distinct_real = count_from_sequence(&seq);
    let g = seq.last().expect("non-empty sequence");
    if g.degree().unwrap_or(0) == 0 {
        return Ok(RootCount {
            distinct_real,
            all_roots_real: distinct_real == p.degree().unwrap_or(0),
        });
    }
    let (sqf, r) = p.div_rem(g);
    if !r.is_zero() {
        return Err(Error::Invariant(format!("last Sturm element {g} does not divide {p}")));
    }
    let sqf_real = count_distinct_real(&sqf)?;
    if sqf_real != distinct_real {
        return Err(Error::Invariant(format!(
            "Sturm counts disagree: {distinct_real} distinct real roots for {p} but {sqf_real} for its squarefree part {sqf}"
        )));
    }
    Ok(RootCount {
        distinct_real,
        all_roots_real: sqf_real == sqf.degree().unwrap_or(0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let no_real = sturm_real_roots(&UniPoly::from_ints(&[1, 0, 1])).unwrap();
        assert_eq!(no_real, RootCount { distinct_real: 0, all_roots_real: false });
        let two = sturm_real_roots(&UniPoly::from_ints(&[2, -3, 1])).unwrap();
        assert_eq!(two, RootCount { distinct_real: 2, all_roots_real: true });
        let double = sturm_real_roots(&UniPoly::from_ints(&[1, -2, 1])).unwrap();
        assert_eq!(double, RootCount { distinct_real: 1, all_roots_real: true });
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert_eq!(sturm_real_roots(&UniPoly::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn constants_and_mixed_roots() {
        let c = sturm_real_roots(&UniPoly::from_ints(&[-3])).unwrap();
        assert_eq!(c, RootCount { distinct_real: 0, all_roots_real: true });
        // (t² + 1)(t - 2)³
        let p = &UniPoly::from_ints(&[1, 0, 1]) * &UniPoly::from_ints(&[-8, 12, -6, 1]);
        let c = sturm_real_roots(&p).unwrap();
        assert_eq!(c, RootCount { distinct_real: 1, all_roots_real: false });
    }
}
