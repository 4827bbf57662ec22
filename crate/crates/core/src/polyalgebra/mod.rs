//! Polynomial algebra: dense univariate polynomials with Sturm counting,
//! the derivative reductions of `P(t) = ∏ (t - x_i)`, sparse multivariate
//! polynomials, and exact checks of the sum-of-squares identities.

mod identities;
mod multipoly;
mod sampling;
mod sturm;
mod unipoly;

use num_rational::BigRational;
use num_traits::Zero;

pub use identities::{
    expand_eq32, expand_eq33, expand_lemma21, expand_sos_n5, verify_eq32, verify_eq32_bounded, verify_eq33,
    verify_eq33_bounded, verify_lemma21, verify_sos_n5, SymbolicCheck, EQ32_MAX_K, EQ33_MAX_K,
};
pub use multipoly::{mp_add, mp_mul, mp_pow, mp_sub, variables, Exponents, MultiPoly};
pub use sampling::{identity_sample, identity_sample_outcome, sample_identity, IdentityId, SampleOutcome, SAMPLE_DEN_MAX, SAMPLE_NUM_MAX};
pub use sturm::{count_distinct_real, sturm_real_roots, sturm_sequence, RootCount};
pub use unipoly::UniPoly;

use crate::error::{Error, Result};
use crate::symcore::{binomial, sigma_all, Scalar, SigmaTable, SymPoint};

fn exact_means(x: &SymPoint, what: &'static str) -> Result<SigmaTable> {
    x.require_exact(what)?;
    Ok(sigma_all(x))
}

fn rational(s: Scalar) -> BigRational {
    match s {
        Scalar::Exact(r) => r,
        Scalar::Float(_) => unreachable!("exact mode checked by caller"),
    }
}

fn binom_q(n: usize, k: usize) -> BigRational {
    BigRational::from_integer(binomial(n as u64, k as i64).into())
}

/// `P(t) = ∏ (t - x_i) = Σ_j (-1)^j σ_j t^{n-j}`.
pub fn poly_from_roots(x: &SymPoint) -> Result<UniPoly> {
    let t = exact_means(x, "poly_from_roots")?;
    let n = t.n;
    let mut coeffs = vec![BigRational::zero(); n + 1];
    for j in 0..=n {
        let s = rational(t.sigma(j as i64));
        coeffs[n - j] = if j % 2 == 0 { s } else { -s };
    }
    Ok(UniPoly::new(coeffs))
}

/// The quartic `E_{k-3} t⁴ - 4E_{k-2} t³ + 6E_{k-1} t² - 4E_k t + E_{k+1}`
/// (homogeneous form at `s = 1`), obtained from `P` by differentiating
/// `n-1-k` times in `t` and `k-3` times in `s`. Requires `3 <= k <= n-1`.
pub fn quartic_reduction(x: &SymPoint, k: i64) -> Result<UniPoly> {
    let n = x.len() as i64;
    if k < 3 || k > n - 1 {
        return Err(Error::index("k", k, format!("3 <= k <= n - 1 = {}", n - 1)));
    }
    let t = exact_means(x, "quartic_reduction")?;
    let weights = [1, -4, 6, -4, 1];
    let coeffs = (0..5)
        .map(|i| {
            // ascending power i carries E_{k+1-i}
            rational(t.e(k + 1 - i as i64)) * BigRational::from_integer(weights[i].into())
        })
        .collect();
    Ok(UniPoly::new(coeffs))
}

/// `Σ_{j=0..k+1} (-1)^j C(k+1, j) E_j t^{k+1-j}`, the `(n-1-k)`-th `t`-derivative
/// of `P` up to a positive constant. Requires `1 <= k <= n-1`.
pub fn truncation_reduction(x: &SymPoint, k: i64) -> Result<UniPoly> {
    let n = x.len() as i64;
    if k < 1 || k > n - 1 {
        return Err(Error::index("k", k, format!("1 <= k <= n - 1 = {}", n - 1)));
    }
    let t = exact_means(x, "truncation_reduction")?;
    let m = (k + 1) as usize;
    let mut coeffs = vec![BigRational::zero(); m + 1];
    for j in 0..=m {
        let c = rational(t.e(j as i64)) * binom_q(m, j);
        coeffs[m - j] = if j % 2 == 0 { c } else { -c };
    }
    Ok(UniPoly::new(coeffs))
}

/// Adds `eps` to the zero entries of `y`, which must all come first.
pub fn epsilon_perturb(y: &SymPoint, eps: &Scalar) -> Result<SymPoint> {
    y.ensure_mode(eps)?;
    if eps.signum() <= 0 {
        return Err(Error::Precondition(format!("eps must be positive, got {eps}")));
    }
    let zeros = y.iter().take_while(|v| v.is_zero()).count();
    if y.iter().skip(zeros).any(Scalar::is_zero) {
        return Err(Error::Precondition(
            "zero entries must come first (sort y before perturbing)".into(),
        ));
    }
    SymPoint::new(
        y.iter()
            .enumerate()
            .map(|(i, v)| if i < zeros { v + eps } else { v.clone() })
            .collect(),
    )
}
