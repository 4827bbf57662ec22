//! Symbolic expansion of the sum-of-squares identities behind the Newton-type
//! gaps. Each `expand_*` returns `(lhs, rhs)` in canonical form; `verify_*`
//! compares them.

use std::sync::Arc;

use num_rational::BigRational;
use serde::Serialize;

use super::multipoly::{variables, MultiPoly};
use super::binom_q;
use crate::error::{Error, Result};
use crate::symcore::elementary_symmetric;

/// Default largest `k` expanded symbolically for the `k n² gap` identity.
pub const EQ32_MAX_K: i64 = 6;
/// Default largest `k` expanded symbolically for the shifted-gap identity.
pub const EQ33_MAX_K: i64 = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymbolicCheck {
    pub verified: bool,
    pub lhs_terms: usize,
    pub rhs_terms: usize,
}

impl SymbolicCheck {
    fn compare(lhs: &MultiPoly, rhs: &MultiPoly) -> Self {
        SymbolicCheck {
            verified: lhs == rhs,
            lhs_terms: lhs.num_terms(),
            rhs_terms: rhs.num_terms(),
        }
    }
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// `E_0, ..., E_n` of `items` as polynomials; callers index with [`mean`].
fn means(vars: &Arc<[String]>, items: &[MultiPoly]) -> Vec<MultiPoly> {
    let n = items.len();
    elementary_symmetric(items, MultiPoly::zero(vars), MultiPoly::one(vars))
        .into_iter()
        .enumerate()
        .map(|(k, s)| s.scale(&binom_q(n, k).recip()))
        .collect()
}

fn mean(e: &[MultiPoly], k: i64) -> MultiPoly {
    match usize::try_from(k).ok().and_then(|k| e.get(k)) {
        Some(p) => p.clone(),
        None => MultiPoly::zero(e[0].vars_arc()),
    }
}

fn z_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("z{i}")).collect()
}

fn gap(e: &[MultiPoly], op: impl Fn(&[MultiPoly], i64) -> MultiPoly, k: i64) -> MultiPoly {
    let s_k = op(e, k);
    &(&s_k * &s_k) - &(&op(e, k - 1) * &op(e, k + 1))
}

/// Both sides of `576 (S_3² - S_2 S_4)` for the two-shift operator on four
/// variables, against six squared symmetric brackets (weight 3) plus three
/// `(α-β)²` cross terms (weight 2). Variables: `z1..z4, alpha, beta`.
pub fn expand_lemma21() -> (MultiPoly, MultiPoly) {
    let mut names = z_names(4);
    names.extend(["alpha".to_string(), "beta".to_string()]);
    let vars = variables(&names);
    let z: Vec<MultiPoly> = (0..4).map(|i| MultiPoly::var(&vars, i)).collect();
    let alpha = MultiPoly::var(&vars, 4);
    let beta = MultiPoly::var(&vars, 5);
    let e = means(&vars, &z);

    let sum = &alpha + &beta;
    let prod = &alpha * &beta;
    let op = |e: &[MultiPoly], k: i64| &(&mean(e, k) + &(&sum * &mean(e, k - 1))) + &(&prod * &mean(e, k - 2));
    let lhs = gap(&e, op, 3).scale(&int(576));

    let mut squares = MultiPoly::zero(&vars);
    for i in 0..4 {
        for j in i + 1..4 {
            let rest: Vec<usize> = (0..4).filter(|&l| l != i && l != j).collect();
            let (p, q) = (rest[0], rest[1]);
            let diff = &z[i] - &z[j];
            let bracket = &(&(&z[p] + &alpha) * &(&z[q] + &beta)) + &(&(&z[q] + &alpha) * &(&z[p] + &beta));
            squares = &squares + &(&diff * &bracket).pow(2);
        }
    }
    let shift_gap = &alpha - &beta;
    let mut cross = MultiPoly::zero(&vars);
    for (a, b, c, d) in [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)] {
        let t = &(&(&z[a] - &z[b]) * &(&z[c] - &z[d])) * &shift_gap;
        cross = &cross + &t.pow(2);
    }
    let rhs = &squares.scale(&int(3)) + &cross.scale(&int(2));
    (lhs, rhs)
}

pub fn verify_lemma21() -> bool {
    let (l, r) = expand_lemma21();
    l == r
}

/// `Σ_{i<j} (z_i - z_j)² ∏_{l≠i,j} w_l²` where `w` are the shifted variables.
fn pairwise_square_sum(vars: &Arc<[String]>, z: &[MultiPoly], w: &[MultiPoly]) -> MultiPoly {
    let n = z.len();
    let mut out = MultiPoly::zero(vars);
    for i in 0..n {
        for j in i + 1..n {
            let mut term = (&z[i] - &z[j]).pow(2);
            for (l, wl) in w.iter().enumerate() {
                if l != i && l != j {
                    term = &term * &wl.pow(2);
                }
            }
            out = &out + &term;
        }
    }
    out
}

/// Binomial operator `Σ_{i=0..s} C(s,i) α^i E_{k-i}` with symbolic `α`.
fn binomial_op(alpha: &MultiPoly, s: usize) -> impl Fn(&[MultiPoly], i64) -> MultiPoly + '_ {
    move |e: &[MultiPoly], k: i64| {
        let mut acc = MultiPoly::zero(alpha.vars_arc());
        for i in 0..=s {
            let w = alpha.pow(i as u32).scale(&binom_q(s, i));
            acc = &acc + &(&w * &mean(e, k - i as i64));
        }
        acc
    }
}

/// Both sides of `100 (S_{4;3}² - S_{3;3} S_{5;3})` on five variables against
/// `Σ_{i<j} (z_i - z_j)² ∏_{l≠i,j} (z_l + α)²`. Variables: `z1..z5, alpha`.
pub fn expand_sos_n5() -> (MultiPoly, MultiPoly) {
    let mut names = z_names(5);
    names.push("alpha".into());
    let vars = variables(&names);
    let z: Vec<MultiPoly> = (0..5).map(|i| MultiPoly::var(&vars, i)).collect();
    let alpha = MultiPoly::var(&vars, 5);
    let e = means(&vars, &z);
    let lhs = gap(&e, binomial_op(&alpha, 3), 4).scale(&int(100));
    let shifted: Vec<MultiPoly> = z.iter().map(|zi| zi + &alpha).collect();
    let rhs = pairwise_square_sum(&vars, &z, &shifted);
    (lhs, rhs)
}

pub fn verify_sos_n5() -> bool {
    let (l, r) = expand_sos_n5();
    l == r
}

fn check_k(k: i64, min: i64, max: i64) -> Result<()> {
    if k < min {
        return Err(Error::index("k", k, format!("k >= {min}")));
    }
    if k > max {
        return Err(Error::index(
            "k",
            k,
            format!("k <= {max} for symbolic expansion; use identity_sample beyond"),
        ));
    }
    Ok(())
}

/// Both sides of `k n² (E_k² - E_{k-1} E_{k+1}) = Σ_{i<j} (z_i - z_j)² ∏_{l≠i,j} z_l²`
/// with `n = k + 1`.
pub fn expand_eq32(k: i64) -> Result<(MultiPoly, MultiPoly)> {
    check_k(k, 1, i64::MAX)?;
    let n = (k + 1) as usize;
    let vars = variables(&z_names(n));
    let z: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::var(&vars, i)).collect();
    let e = means(&vars, &z);
    let lhs = gap(&e, mean, k).scale(&int(k * (n * n) as i64));
    let rhs = pairwise_square_sum(&vars, &z, &z);
    Ok((lhs, rhs))
}

pub fn verify_eq32_bounded(k: i64, max_k: i64) -> Result<SymbolicCheck> {
    check_k(k, 1, max_k)?;
    let (l, r) = expand_eq32(k)?;
    Ok(SymbolicCheck::compare(&l, &r))
}

pub fn verify_eq32(k: i64) -> Result<bool> {
    Ok(verify_eq32_bounded(k, EQ32_MAX_K)?.verified)
}

/// Both sides of `S_{k;s}² - S_{k-1;s} S_{k+1;s} = (E_k² - E_{k-1} E_{k+1})(z + αe)`
/// with `n = k + 1` and `s = k - 1`. Variables: `z1..zn, alpha`.
pub fn expand_eq33(k: i64) -> Result<(MultiPoly, MultiPoly)> {
    check_k(k, 2, i64::MAX)?;
    let n = (k + 1) as usize;
    let mut names = z_names(n);
    names.push("alpha".into());
    let vars = variables(&names);
    let z: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::var(&vars, i)).collect();
    let alpha = MultiPoly::var(&vars, n);
    let e = means(&vars, &z);
    let lhs = gap(&e, binomial_op(&alpha, (k - 1) as usize), k);
    let shifted: Vec<MultiPoly> = z.iter().map(|zi| zi + &alpha).collect();
    let e_shift = means(&vars, &shifted);
    let rhs = gap(&e_shift, mean, k);
    Ok((lhs, rhs))
}

pub fn verify_eq33_bounded(k: i64, max_k: i64) -> Result<SymbolicCheck> {
    check_k(k, 2, max_k)?;
    let (l, r) = expand_eq33(k)?;
    Ok(SymbolicCheck::compare(&l, &r))
}

pub fn verify_eq33(k: i64) -> Result<bool> {
    Ok(verify_eq33_bounded(k, EQ33_MAX_K)?.verified)
}
