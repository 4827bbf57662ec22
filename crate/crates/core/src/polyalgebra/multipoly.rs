use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Exponents = Vec<u32>;

/// Sparse multivariate polynomial over ℚ.
///
/// Terms live in a hash map from exponent vectors to nonzero coefficients,
/// so two polynomials over the same variables are equal iff their maps are.
/// Ordered output (display, serialization) uses graded-lex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Arc<[String]>,
    terms: HashMap<Exponents, BigRational>,
}

/// Variable list shared by every polynomial in one computation.
pub fn variables<S: AsRef<str>>(names: &[S]) -> Arc<[String]> {
    names.iter().map(|s| s.as_ref().to_string()).collect()
}

impl MultiPoly {
    pub fn zero(vars: &Arc<[String]>) -> Self {
        MultiPoly {
            vars: vars.clone(),
            terms: HashMap::new(),
        }
    }

    pub fn constant(vars: &Arc<[String]>, c: BigRational) -> Self {
        let mut p = MultiPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars.len()], c);
        }
        p
    }

    pub fn one(vars: &Arc<[String]>) -> Self {
        MultiPoly::constant(vars, BigRational::one())
    }

    pub fn from_int(vars: &Arc<[String]>, c: i64) -> Self {
        MultiPoly::constant(vars, BigRational::from_integer(c.into()))
    }

    /// The `index`-th variable. Panics if out of range.
    pub fn var(vars: &Arc<[String]>, index: usize) -> Self {
        assert!(index < vars.len(), "variable index {index} out of range");
        let mut exps = vec![0; vars.len()];
        exps[index] = 1;
        let mut p = MultiPoly::zero(vars);
        p.terms.insert(exps, BigRational::one());
        p
    }

    /// Builds from `(exponents, coefficient)` pairs, merging duplicates.
    pub fn from_terms(
        vars: &Arc<[String]>,
        terms: impl IntoIterator<Item = (Exponents, BigRational)>,
    ) -> Result<Self> {
        let mut p = MultiPoly::zero(vars);
        for (e, c) in terms {
            if e.len() != vars.len() {
                return Err(Error::Precondition(format!(
                    "exponent vector {e:?} does not match {} variables",
                    vars.len()
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub(crate) fn vars_arc(&self) -> &Arc<[String]> {
        &self.vars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u32]) -> BigRational {
        self.terms.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn add_term(&mut self, exps: Exponents, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::hash_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    fn same_vars(&self, other: &MultiPoly) -> Result<()> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(Error::VariableMismatch(self.vars.to_vec(), other.vars.to_vec()))
        }
    }

    fn assert_same_vars(&self, other: &MultiPoly) {
        if let Err(e) = self.same_vars(other) {
            panic!("{e}");
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return MultiPoly::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = MultiPoly::one(&self.vars);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Evaluates at `point`, one value per variable.
    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational> {
        if point.len() != self.vars.len() {
            return Err(Error::Precondition(format!(
                "point has {} coordinates for {} variables",
                point.len(),
                self.vars.len()
            )));
        }
        Ok(self.terms.iter().fold(BigRational::zero(), |acc, (e, c)| {
            let mono = e
                .iter()
                .zip(point)
                .filter(|(&k, _)| k > 0)
                .fold(BigRational::one(), |m, (&k, v)| m * num_traits::pow(v.clone(), k as usize));
            acc + c * mono
        }))
    }

    /// Terms in graded-lex order: higher total degree first, ties broken by
    /// comparing exponent vectors lexicographically, larger first.
    pub fn sorted_terms(&self) -> Vec<(&Exponents, &BigRational)> {
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        terms
    }
}

pub fn mp_add(a: &MultiPoly, b: &MultiPoly) -> Result<MultiPoly> {
    a.same_vars(b)?;
    Ok(a + b)
}

pub fn mp_sub(a: &MultiPoly, b: &MultiPoly) -> Result<MultiPoly> {
    a.same_vars(b)?;
    Ok(a - b)
}

pub fn mp_mul(a: &MultiPoly, b: &MultiPoly) -> Result<MultiPoly> {
    a.same_vars(b)?;
    Ok(a * b)
}

pub fn mp_pow(a: &MultiPoly, exp: u32) -> MultiPoly {
    a.pow(exp)
}

// The operator impls panic on mismatched variable lists; the mp_* functions
// above are the checked entry points.

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.assert_same_vars(rhs);
        let (big, small) = if self.terms.len() >= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (e, c) in &small.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.assert_same_vars(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.assert_same_vars(rhs);
        let mut out = MultiPoly::zero(&self.vars);
        out.terms.reserve(self.terms.len() * rhs.terms.len() / 2 + 1);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: &'a MultiPoly) -> MultiPoly { (&self).$m(rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let mono: Vec<String> = e
                .iter()
                .zip(self.vars.iter())
                .filter(|(&k, _)| k > 0)
                .map(|(&k, v)| if k == 1 { v.clone() } else { format!("{v}^{k}") })
                .collect();
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{mag}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct TermOut<'a> {
    exponents: &'a [u32],
    coefficient: String,
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self.sorted_terms();
        let mut seq = serializer.serialize_seq(Some(terms.len()))?;
        for (e, c) in terms {
            seq.serialize_element(&TermOut {
                exponents: e,
                coefficient: c.to_string(),
            })?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> (Arc<[String]>, MultiPoly, MultiPoly) {
        let v = variables(&["z1", "z2"]);
        let a = MultiPoly::var(&v, 0);
        let b = MultiPoly::var(&v, 1);
        (v, a, b)
    }

    #[test]
    fn difference_of_squares() {
        let (_, z1, z2) = xy();
        let p = mp_mul(&(&z1 + &z2), &(&z1 - &z2)).unwrap();
        assert_eq!(p, &z1.pow(2) - &z2.pow(2));
        assert_eq!(p.to_string(), "z1^2 - z2^2");
    }

    #[test]
    fn zero_is_additive_identity() {
        let (v, z1, z2) = xy();
        let p = &z1 * &z2 + MultiPoly::from_int(&v, 3);
        assert_eq!(mp_add(&p, &MultiPoly::zero(&v)).unwrap(), p);
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn binomial_square() {
        let v = variables(&["z1", "alpha"]);
        let z = MultiPoly::var(&v, 0);
        let a = MultiPoly::var(&v, 1);
        let sq = mp_pow(&(&z + &a), 2);
        assert_eq!(sq, &(&z * &z) + &(&(&a * &z).scale(&BigRational::from_integer(2.into())) + &(&a * &a)));
        assert_eq!(sq.to_string(), "z1^2 + 2*z1*alpha + alpha^2");
    }

    #[test]
    fn mismatched_variables_rejected() {
        let (_, z1, _) = xy();
        let w = MultiPoly::var(&variables(&["w"]), 0);
        assert!(matches!(mp_add(&z1, &w), Err(Error::VariableMismatch(..))));
        assert!(matches!(mp_mul(&z1, &w), Err(Error::VariableMismatch(..))));
        assert!(matches!(mp_sub(&z1, &w), Err(Error::VariableMismatch(..))));
    }

    #[test]
    fn evaluation_and_serialization() {
        let (_, z1, z2) = xy();
        let p = &z1.pow(2) - &z2.scale(&BigRational::new(1.into(), 2.into()));
        let v = p.eval(&[BigRational::from_integer(3.into()), BigRational::from_integer(4.into())]).unwrap();
        assert_eq!(v, BigRational::from_integer(7.into()));
        assert_eq!(
            serde_json::to_string(&p).unwrap(),
            r#"[{"exponents":[2,0],"coefficient":"1"},{"exponents":[0,1],"coefficient":"-1/2"}]"#
        );
    }
}
