//! Polynomials in bosonic creation and annihilation operators.
//!
//! A monomial's factors are stored left to right as written; when applied to
//! a state the rightmost factor acts first.

use std::fmt;
use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::mode::ModeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ladder {
    Create,
    Annihilate,
}

impl Ladder {
    pub fn adjoint(self) -> Ladder {
        match self {
            Ladder::Create => Ladder::Annihilate,
            Ladder::Annihilate => Ladder::Create,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LadderOp {
    pub mode: ModeId,
    pub kind: Ladder,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coeff: Complex64,
    pub factors: Vec<LadderOp>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OperatorPolynomial {
    terms: Vec<Monomial>,
}

impl OperatorPolynomial {
    pub fn zero() -> Self {
        OperatorPolynomial { terms: Vec::new() }
    }

    pub fn identity() -> Self {
        Self::scalar(Complex64::new(1.0, 0.0))
    }

    pub fn scalar(coeff: Complex64) -> Self {
        OperatorPolynomial {
            terms: vec![Monomial {
                coeff,
                factors: Vec::new(),
            }],
        }
    }

    pub fn ladder(mode: ModeId, kind: Ladder) -> Self {
        OperatorPolynomial {
            terms: vec![Monomial {
                coeff: Complex64::new(1.0, 0.0),
                factors: vec![LadderOp { mode, kind }],
            }],
        }
    }

    pub fn create(mode: ModeId) -> Self {
        Self::ladder(mode, Ladder::Create)
    }

    pub fn annihilate(mode: ModeId) -> Self {
        Self::ladder(mode, Ladder::Annihilate)
    }

    /// a† a on one mode.
    pub fn number(mode: ModeId) -> Self {
        Self::create(mode) * Self::annihilate(mode)
    }

    pub fn from_terms(terms: Vec<Monomial>) -> Self {
        OperatorPolynomial { terms }
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        OperatorPolynomial {
            terms: self
                .terms
                .iter()
                .map(|t| Monomial {
                    coeff: t.coeff * c,
                    factors: t.factors.clone(),
                })
                .collect(),
        }
    }

    /// Fully distributed product, factor order preserved.
    pub fn product(&self, rhs: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for l in &self.terms {
            for r in &rhs.terms {
                let mut factors = Vec::with_capacity(l.factors.len() + r.factors.len());
                factors.extend_from_slice(&l.factors);
                factors.extend_from_slice(&r.factors);
                terms.push(Monomial {
                    coeff: l.coeff * r.coeff,
                    factors,
                });
            }
        }
        OperatorPolynomial { terms }
    }

    pub fn sum(&self, rhs: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().cloned());
        OperatorPolynomial { terms }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::identity(), |acc, _| acc.product(self))
    }

    /// Hermitian adjoint: reversed factor order, flipped ladders, conjugated coefficients.
    pub fn adjoint(&self) -> Self {
        OperatorPolynomial {
            terms: self
                .terms
                .iter()
                .map(|t| Monomial {
                    coeff: t.coeff.conj(),
                    factors: t
                        .factors
                        .iter()
                        .rev()
                        .map(|f| LadderOp {
                            mode: f.mode,
                            kind: f.kind.adjoint(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    /// Distinct modes referenced by any factor, in first-seen order.
    pub fn modes(&self) -> Vec<ModeId> {
        let mut out: Vec<ModeId> = Vec::new();
        for f in self.terms.iter().flat_map(|t| t.factors.iter()) {
            if !out.contains(&f.mode) {
                out.push(f.mode);
            }
        }
        out
    }
}

impl Mul for OperatorPolynomial {
    type Output = OperatorPolynomial;
    fn mul(self, rhs: Self) -> Self::Output {
        self.product(&rhs)
    }
}

impl Mul<&OperatorPolynomial> for &OperatorPolynomial {
    type Output = OperatorPolynomial;
    fn mul(self, rhs: &OperatorPolynomial) -> Self::Output {
        self.product(rhs)
    }
}

impl Add for OperatorPolynomial {
    type Output = OperatorPolynomial;
    fn add(self, rhs: Self) -> Self::Output {
        self.sum(&rhs)
    }
}

impl Add<&OperatorPolynomial> for &OperatorPolynomial {
    type Output = OperatorPolynomial;
    fn add(self, rhs: &OperatorPolynomial) -> Self::Output {
        self.sum(rhs)
    }
}

impl fmt::Display for OperatorPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})", t.coeff)?;
            for op in &t.factors {
                let dag = if op.kind == Ladder::Create { "^+" } else { "" };
                write!(f, " {}{dag}", op.mode)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mode::Branch;

    fn mode() -> ModeId {
        ModeId::minkowski(Branch::I, 0, 0.5).unwrap()
    }

    #[test]
    fn product_preserves_factor_order() {
        let m = mode();
        let p = OperatorPolynomial::create(m) * OperatorPolynomial::annihilate(m);
        assert_eq!(p.terms().len(), 1);
        assert_eq!(p.terms()[0].factors[0].kind, Ladder::Create);
        assert_eq!(p.terms()[0].factors[1].kind, Ladder::Annihilate);
    }

    #[test]
    fn pow_distributes() {
        let m = mode();
        let n = m.partner();
        let sum = OperatorPolynomial::create(m) + OperatorPolynomial::annihilate(n);
        assert_eq!(sum.pow(3).terms().len(), 8);
        assert_eq!(sum.pow(0), OperatorPolynomial::identity());
    }

    #[test]
    fn adjoint_reverses() {
        let m = mode();
        let n = m.partner();
        let p = (OperatorPolynomial::create(m) * OperatorPolynomial::annihilate(n))
            .scale(Complex64::new(0.0, 2.0));
        let a = p.adjoint();
        let t = &a.terms()[0];
        assert_eq!(t.coeff, Complex64::new(0.0, -2.0));
        assert_eq!(
            t.factors[0],
            LadderOp {
                mode: n,
                kind: Ladder::Create
            }
        );
        assert_eq!(
            t.factors[1],
            LadderOp {
                mode: m,
                kind: Ladder::Annihilate
            }
        );
        assert_eq!(a.adjoint(), p);
    }
}
