//! The scalars `∫ (x−i)^a (x+i)^b dx` pairing coefficient monomials with paths.

use serde::{Deserialize, Serialize};

use crate::exact::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Endpoints {
    /// From `0` to `i`.
    #[serde(rename = "0i")]
    ZeroToI,
    /// From `−i` to `i`.
    #[serde(rename = "mii")]
    MinusIToI,
}

impl Endpoints {
    pub fn bounds(self) -> (Scalar, Scalar) {
        match self {
            Endpoints::ZeroToI => (Scalar::zero(), Scalar::i()),
            Endpoints::MinusIToI => (-Scalar::i(), Scalar::i()),
        }
    }
}

impl std::str::FromStr for Endpoints {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "0i" => Ok(Endpoints::ZeroToI),
            "mii" => Ok(Endpoints::MinusIToI),
            other => Err(format!("unknown endpoints {other:?}, expected 0i or mii")),
        }
    }
}

/// Coefficients (constant term first) of `(x + c)^k`.
fn binomial_power(c: &Scalar, k: u32) -> Vec<Scalar> {
    let mut poly = vec![Scalar::one()];
    for _ in 0..k {
        let mut next = vec![Scalar::zero(); poly.len() + 1];
        for (j, a) in poly.iter().enumerate() {
            next[j + 1] += a;
            next[j] += &(a * c);
        }
        poly = next;
    }
    poly
}

fn poly_mul(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += &(x * y);
        }
    }
    out
}

fn eval(poly: &[Scalar], x: &Scalar) -> Scalar {
    poly.iter().rev().fold(Scalar::zero(), |acc, c| &(&acc * x) + c)
}

/// Exact value of `∫ (x−i)^a (x+i)^b dx` between the given endpoints.
pub fn integral_pairing(a: u32, b: u32, ends: Endpoints) -> Scalar {
    let i = Scalar::i();
    let integrand = poly_mul(&binomial_power(&-&i, a), &binomial_power(&i, b));
    let mut anti = vec![Scalar::zero()];
    for (k, c) in integrand.iter().enumerate() {
        anti.push(c * &Scalar::ratio(1, k as i64 + 1));
    }
    let (from, to) = ends.bounds();
    &eval(&anti, &to) - &eval(&anti, &from)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    #[test]
    fn small_values() {
        assert_eq!(integral_pairing(0, 0, Endpoints::MinusIToI), s("2*i"));
        assert_eq!(integral_pairing(1, 0, Endpoints::MinusIToI), s("2"));
        assert_eq!(integral_pairing(0, 1, Endpoints::MinusIToI), s("-2"));
        assert_eq!(integral_pairing(1, 1, Endpoints::MinusIToI), s("4/3*i"));
        assert_eq!(integral_pairing(0, 0, Endpoints::ZeroToI), s("i"));
    }
}
