//! Graded dimensions of finite sub-Hopf algebras of `A_p` and the
//! presentations `K_0 = Z[q]/(dim_q A)` they give.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::arith::{factor_quotient, q_quotient, IntPolynomial, Prime};
use crate::error::{Error, Result};
use crate::linalg::EchelonBasis;
use crate::steenrod::{adem_normalize, Grading, SteenrodElement, SteenrodWord};

/// A finite profile: `r_k` with `ξ_k^{p^{r_k}} = 0` in the dual quotient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubHopfProfile {
    prime: Prime,
    exponents: Vec<u32>,
    grading: Grading,
}

impl SubHopfProfile {
    /// Validates that for all `0 < j < m`, `r_m ≥ r_{m-j} - j` or `r_m ≥ r_j`,
    /// with `r_k = 0` beyond the given sequence.
    pub fn new(prime: Prime, exponents: Vec<u32>, grading: Grading) -> Result<Self> {
        let r = |k: usize| -> i64 { exponents.get(k - 1).copied().unwrap_or(0) as i64 };
        let len = exponents.len();
        for m in 2..=2 * len {
            for j in 1..m {
                if !(r(m) >= r(m - j) - j as i64 || r(m) >= r(j)) {
                    return Err(Error::Domain(format!(
                        "profile {exponents:?} fails the sub-Hopf condition at m = {m}, j = {j}"
                    )));
                }
            }
        }
        Ok(SubHopfProfile { prime, exponents, grading })
    }

    /// The profile of `A(n)`, generated by `P^{p^j}` for `j < n`:
    /// `r = (n, n-1, ..., 1)`.
    pub fn a_n(prime: Prime, n: u32, grading: Grading) -> Self {
        Self::new(prime, (1..=n).rev().collect(), grading).expect("A(n) profiles are valid")
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    /// `|ξ_k|` under the profile's grading.
    pub fn xi_degree(&self, k: u32) -> u64 {
        xi_degree(k, self.prime, self.grading)
    }

    /// `(p^{r_k} |ξ_k|, |ξ_k|)` for each factor with `r_k > 0`.
    fn factor_exponents(&self) -> Result<Vec<(u32, u32)>> {
        let mut out = Vec::new();
        for (i, &r) in self.exponents.iter().enumerate() {
            if r == 0 {
                continue;
            }
            let deg = self.xi_degree(i as u32 + 1);
            let top = (self.prime.get() as u64)
                .checked_pow(r)
                .and_then(|n| n.checked_mul(deg))
                .filter(|&t| t <= u32::MAX as u64)
                .ok_or_else(|| Error::Domain("profile degree overflows".into()))?;
            out.push((top as u32, deg as u32));
        }
        Ok(out)
    }
}

pub fn xi_degree(k: u32, prime: Prime, grading: Grading) -> u64 {
    grading.xi_degree(k, prime)
}

/// `Π_k (1 - q^{p^{r_k} |ξ_k|}) / (1 - q^{|ξ_k|})`.
pub fn graded_dimension(profile: &SubHopfProfile) -> Result<IntPolynomial> {
    let mut acc = IntPolynomial::one();
    for (top, deg) in profile.factor_exponents()? {
        acc = &acc * &q_quotient(top, deg)?;
    }
    Ok(acc)
}

/// `Z[q]/(relation)` with the relation split into cyclotomic factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct K0Presentation {
    pub relation: IntPolynomial,
    /// Indices `d` of the factors `Φ_d`, with repetition, in increasing order.
    pub cyclotomic_factors: Vec<u32>,
}

impl fmt::Display for K0Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z[q]/<{}>", self.relation)
    }
}

pub fn k0_presentation(profile: &SubHopfProfile) -> Result<K0Presentation> {
    let relation = graded_dimension(profile)?;
    let mut factors = Vec::new();
    for (top, deg) in profile.factor_exponents()? {
        for (d, mult) in factor_quotient(top, deg)? {
            factors.extend(std::iter::repeat_n(d, mult as usize));
        }
    }
    factors.sort_unstable();
    Ok(K0Presentation { relation, cyclotomic_factors: factors })
}

/// Per-degree dimensions of `A(n)` found by closing `{1}` under left
/// multiplication by the generators `P^{p^j}`, `j < n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnBasis {
    pub dims: BTreeMap<u64, usize>,
    /// Whether a band of width the largest generator degree above the top
    /// nonzero degree fits below the cap, which certifies closure.
    pub complete: bool,
}

impl AnBasis {
    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    /// The dimensions as a polynomial in `q`.
    pub fn to_polynomial(&self) -> IntPolynomial {
        self.dims
            .iter()
            .fold(IntPolynomial::zero(), |acc, (&d, &c)| &acc + &IntPolynomial::monomial(c as i64, d as u32))
    }
}

pub fn enumerate_an_basis(n: u32, prime: Prime, degree_cap: u64, grading: Grading) -> AnBasis {
    let generators: Vec<SteenrodElement> = (0..n)
        .map(|j| SteenrodElement::power(prime, prime.get().pow(j)))
        .collect();
    let max_gen = (0..n)
        .map(|j| grading.power_degree(prime.get().pow(j), prime))
        .max()
        .unwrap_or(0);
    let mut spaces: BTreeMap<u64, EchelonBasis<SteenrodWord>> = BTreeMap::new();
    let one = SteenrodElement::one(prime);
    spaces.entry(0).or_insert_with(|| EchelonBasis::new(prime)).insert(to_vector(&one));
    let mut queue = vec![one];
    while let Some(v) = queue.pop() {
        for g in &generators {
            let product = adem_normalize(&g.mul(&v)).with_grading(grading);
            let Some(deg) = product.degree() else { continue };
            if deg > degree_cap {
                continue;
            }
            let space = spaces.entry(deg).or_insert_with(|| EchelonBasis::new(prime));
            if space.insert(to_vector(&product)) {
                queue.push(product);
            }
        }
    }
    let dims: BTreeMap<u64, usize> = spaces
        .into_iter()
        .filter(|(_, s)| s.dim() > 0)
        .map(|(d, s)| (d, s.dim()))
        .collect();
    let top = dims.keys().next_back().copied().unwrap_or(0);
    AnBasis { dims, complete: top + max_gen <= degree_cap }
}

fn to_vector(e: &SteenrodElement) -> BTreeMap<SteenrodWord, u32> {
    e.terms().map(|(w, c)| (w.clone(), c.value())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(v: u32) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn xi_degree_examples() {
        assert_eq!(xi_degree(1, pr(2), Grading::Topological), 2);
        assert_eq!(xi_degree(2, pr(3), Grading::Topological), 16);
        assert_eq!(xi_degree(2, pr(3), Grading::Compressed), 8);
    }

    #[test]
    fn graded_dimension_examples() {
        let a1 = SubHopfProfile::a_n(pr(2), 1, Grading::Topological);
        assert_eq!(graded_dimension(&a1).unwrap(), IntPolynomial::from_coeffs([1, 0, 1]));
        let a1 = SubHopfProfile::a_n(pr(3), 1, Grading::Topological);
        assert_eq!(graded_dimension(&a1).unwrap().to_string(), "1+q^4+q^8");
        let empty = SubHopfProfile::new(pr(3), vec![], Grading::Topological).unwrap();
        assert_eq!(graded_dimension(&empty).unwrap(), IntPolynomial::one());
    }

    #[test]
    fn presentation_examples() {
        let a1 = SubHopfProfile::a_n(pr(2), 1, Grading::Topological);
        let k0 = k0_presentation(&a1).unwrap();
        assert_eq!(k0.cyclotomic_factors, vec![4]);
        assert_eq!(k0.to_string(), "Z[q]/<1+q^2>");
        let a1 = SubHopfProfile::a_n(pr(3), 1, Grading::Topological);
        assert_eq!(k0_presentation(&a1).unwrap().cyclotomic_factors, vec![3, 6, 12]);
        let trivial = SubHopfProfile::new(pr(2), vec![0], Grading::Topological).unwrap();
        let k0 = k0_presentation(&trivial).unwrap();
        assert_eq!(k0.relation, IntPolynomial::one());
        assert!(k0.cyclotomic_factors.is_empty());
    }

    #[test]
    fn profile_validation() {
        for p in [2, 3, 5] {
            for n in 0..4 {
                SubHopfProfile::a_n(pr(p), n, Grading::Topological);
            }
        }
        assert!(SubHopfProfile::new(pr(2), vec![1, 3], Grading::Topological).is_err());
        assert!(SubHopfProfile::new(pr(2), vec![2, 0], Grading::Topological).is_err());
        assert!(SubHopfProfile::new(pr(2), vec![0, 1], Grading::Topological).is_ok());
        assert!(SubHopfProfile::new(pr(2), vec![1, 1], Grading::Topological).is_ok());
        assert!(SubHopfProfile::new(pr(2), vec![2, 1], Grading::Topological).is_ok());
    }

    #[test]
    fn enumeration_examples() {
        let b = enumerate_an_basis(1, pr(2), 20, Grading::Topological);
        assert_eq!(b.dims, BTreeMap::from([(0, 1), (2, 1)]));
        assert!(b.complete);
        let b = enumerate_an_basis(1, pr(3), 20, Grading::Topological);
        assert_eq!(b.dims, BTreeMap::from([(0, 1), (4, 1), (8, 1)]));
        let b = enumerate_an_basis(0, pr(3), 20, Grading::Topological);
        assert_eq!(b.dims, BTreeMap::from([(0, 1)]));
        let b = enumerate_an_basis(2, pr(2), 40, Grading::Topological);
        assert_eq!(b.total_dim(), 8);
        let b = enumerate_an_basis(1, pr(3), 6, Grading::Topological);
        assert!(!b.complete);
    }
}
