//! Exact arithmetic in prime fields `F_q`.
//!
//! Everything else in the crate works over a [`FieldSpec`], a validated
//! prime modulus with `2 <= q < 2^16`. Elements are residues in `[0, q)`
//! carrying their spec, so cross-field operations are caught rather than
//! silently mixed. Products are computed in `u32` before reduction; with
//! `q < 2^16` no intermediate can overflow.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} does not fit below 2^16")]
    OutOfRange(u64),
    #[error("operands from different fields: F_{0} and F_{1}")]
    FieldMismatch(u16, u16),
    #[error("attempted to invert zero in F_{0}")]
    DivisionByZero(u16),
}

/// A validated prime modulus `q` with `2 <= q < 2^16`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSpec {
    q: u16,
}

impl FieldSpec {
    /// Validate `q` as a field modulus.
    pub fn new(q: u64) -> Result<Self, FieldError> {
        if q >= 1 << 16 {
            return Err(FieldError::OutOfRange(q));
        }
        if !is_prime(q) {
            return Err(FieldError::NotPrime(q));
        }
        Ok(FieldSpec { q: q as u16 })
    }

    pub fn modulus(self) -> u16 {
        self.q
    }

    /// The residue of `value` mod `q`.
    pub fn element(self, value: u64) -> FieldElement {
        FieldElement {
            value: (value % u64::from(self.q)) as u16,
            spec: self,
        }
    }

    pub fn zero(self) -> FieldElement {
        FieldElement { value: 0, spec: self }
    }

    pub fn one(self) -> FieldElement {
        FieldElement { value: 1, spec: self }
    }

    /// All field elements in ascending residue order.
    pub fn elements(self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(move |v| FieldElement { value: v, spec: self })
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// A residue in `[0, q)` tied to its field.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    value: u16,
    spec: FieldSpec,
}

impl FieldElement {
    pub fn value(self) -> u16 {
        self.value
    }

    pub fn spec(self) -> FieldSpec {
        self.spec
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn q32(self) -> u32 {
        u32::from(self.spec.q)
    }

    fn same_spec(self, other: FieldElement) -> Result<(), FieldError> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch(self.spec.q, other.spec.q))
        }
    }

    /// Checked addition; fails with `FieldMismatch` across fields.
    pub fn try_add(self, rhs: FieldElement) -> Result<FieldElement, FieldError> {
        self.same_spec(rhs)?;
        let v = (u32::from(self.value) + u32::from(rhs.value)) % self.q32();
        Ok(FieldElement { value: v as u16, spec: self.spec })
    }

    /// Checked subtraction.
    pub fn try_sub(self, rhs: FieldElement) -> Result<FieldElement, FieldError> {
        self.same_spec(rhs)?;
        let v = (u32::from(self.value) + self.q32() - u32::from(rhs.value)) % self.q32();
        Ok(FieldElement { value: v as u16, spec: self.spec })
    }

    /// Checked multiplication.
    pub fn try_mul(self, rhs: FieldElement) -> Result<FieldElement, FieldError> {
        self.same_spec(rhs)?;
        let v = (u32::from(self.value) * u32::from(rhs.value)) % self.q32();
        Ok(FieldElement { value: v as u16, spec: self.spec })
    }

    /// Multiplicative inverse; zero has none.
    pub fn inv(self) -> Result<FieldElement, FieldError> {
        if self.value == 0 {
            return Err(FieldError::DivisionByZero(self.spec.q));
        }
        // q is prime, so a^(q-2) * a = a^(q-1) = 1.
        Ok(self.pow(u64::from(self.spec.q) - 2))
    }

    /// Repeated product by square-and-multiply.
    ///
    /// `pow(a, 0) = 1` for every `a`, including zero: tag and label
    /// polynomials keep their constant term when evaluated at `s = 0`.
    pub fn pow(self, mut e: u64) -> FieldElement {
        let mut base = self;
        let mut acc = self.spec.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        self.try_add(rhs).expect("field mismatch in +")
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        self.try_sub(rhs).expect("field mismatch in -")
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        self.try_mul(rhs).expect("field mismatch in *")
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            value: (self.spec.q - self.value) % self.spec.q,
            spec: self.spec,
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> FieldSpec {
        FieldSpec::new(q).unwrap()
    }

    #[test]
    fn modulus_validation() {
        assert_eq!(f(5).modulus(), 5);
        assert_eq!(f(2).modulus(), 2);
        assert_eq!(FieldSpec::new(6), Err(FieldError::NotPrime(6)));
        assert_eq!(FieldSpec::new(0), Err(FieldError::NotPrime(0)));
        assert_eq!(FieldSpec::new(1), Err(FieldError::NotPrime(1)));
        assert_eq!(FieldSpec::new(1 << 16), Err(FieldError::OutOfRange(1 << 16)));
        // largest prime below 2^16
        assert_eq!(f(65521).modulus(), 65521);
    }

    #[test]
    fn arithmetic_examples() {
        let f5 = f(5);
        assert_eq!(f5.element(3) + f5.element(4), f5.element(2));
        assert_eq!(f5.element(2) * f5.element(3), f5.element(1));
        assert_eq!(-f5.element(0), f5.element(0));
        assert_eq!(f5.element(1) - f5.element(3), f5.element(3));
    }

    #[test]
    fn inverse_examples() {
        let f5 = f(5);
        assert_eq!(f5.element(2).inv().unwrap(), f5.element(3));
        assert_eq!(f5.element(1).inv().unwrap(), f5.element(1));
        assert_eq!(f5.element(4).inv().unwrap(), f5.element(4));
        assert_eq!(f5.element(0).inv(), Err(FieldError::DivisionByZero(5)));
        let f2 = f(2);
        assert_eq!(f2.element(1).inv().unwrap(), f2.element(1));
    }

    #[test]
    fn pow_examples() {
        let f5 = f(5);
        assert_eq!(f5.element(2).pow(3), f5.element(3));
        assert_eq!(f5.element(0).pow(0), f5.element(1));
        assert_eq!(f5.element(4).pow(2), f5.element(1));
    }

    #[test]
    fn mismatched_fields_rejected() {
        let a = f(5).element(1);
        let b = f(7).element(1);
        assert_eq!(a.try_add(b), Err(FieldError::FieldMismatch(5, 7)));
        assert_eq!(a.try_mul(b), Err(FieldError::FieldMismatch(5, 7)));
    }

    // The ring laws are exhaustively checkable at these sizes; no need to
    // sample.
    #[test]
    fn field_laws_exhaustive() {
        for q in [2u64, 3, 5, 7] {
            let spec = f(q);
            for a in spec.elements() {
                for b in spec.elements() {
                    assert_eq!(a + b, b + a);
                    assert_eq!(a * b, b * a);
                    assert_eq!(a - b, a + (-b));
                    for c in spec.elements() {
                        assert_eq!((a + b) + c, a + (b + c));
                        assert_eq!((a * b) * c, a * (b * c));
                        assert_eq!(a * (b + c), a * b + a * c);
                    }
                }
            }
        }
    }

    #[test]
    fn inverses_and_fermat_exhaustive() {
        for q in [2u64, 3, 5, 7, 11] {
            let spec = f(q);
            for a in spec.elements() {
                if a.is_zero() {
                    continue;
                }
                let inv = a.inv().unwrap();
                assert_eq!(a * inv, spec.one());
                assert_eq!(inv.inv().unwrap(), a);
                assert_eq!(a.pow(q - 1), spec.one());
            }
        }
    }
}
