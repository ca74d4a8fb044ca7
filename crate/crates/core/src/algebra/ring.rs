use std::fmt;

use super::int::Int;
use super::AlgebraError;

/// Arithmetic context: the integers, or the integers modulo `m >= 2`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Ring {
    modulus: Option<Int>,
}

impl Ring {
    pub fn integers() -> Ring {
        Ring { modulus: None }
    }

    pub fn modular(m: Int) -> Result<Ring, AlgebraError> {
        if m < Int::from(2i64) {
            return Err(AlgebraError::BadModulus(m.to_string()));
        }
        Ok(Ring { modulus: Some(m) })
    }

    pub fn with_modulus(m: Option<Int>) -> Result<Ring, AlgebraError> {
        match m {
            Some(m) => Ring::modular(m),
            None => Ok(Ring::integers()),
        }
    }

    pub fn modulus(&self) -> Option<&Int> {
        self.modulus.as_ref()
    }

    #[inline]
    pub fn reduce(&self, v: Int) -> Int {
        match &self.modulus {
            None => v,
            Some(m) => v.rem_euclid(m),
        }
    }

    #[inline]
    pub fn add(&self, a: &Int, b: &Int) -> Int {
        self.reduce(a.add(b))
    }

    #[inline]
    pub fn sub(&self, a: &Int, b: &Int) -> Int {
        self.reduce(a.sub(b))
    }

    #[inline]
    pub fn mul(&self, a: &Int, b: &Int) -> Int {
        self.reduce(a.mul(b))
    }

    /// `acc += a * b` on coefficient slices, truncated to `acc.len()` terms.
    pub fn poly_mul_acc(&self, acc: &mut [Int], a: &[Int], b: &[Int]) {
        let cap = acc.len();
        for (i, ai) in a.iter().enumerate().take(cap) {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate().take(cap - i) {
                if bj.is_zero() {
                    continue;
                }
                acc[i + j] = self.add(&acc[i + j], &ai.mul(bj));
            }
        }
    }
}

/// Minimal commutative-ring surface needed by the set-function transforms.
pub trait RingElement: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn is_zero(&self) -> bool;
}

/// An exact integer, or a residue when the ring carries a modulus.
#[derive(Clone, PartialEq, Eq)]
pub struct RingValue {
    value: Int,
    ring: Ring,
}

impl RingValue {
    pub fn new(value: impl Into<Int>, ring: &Ring) -> RingValue {
        RingValue { value: ring.reduce(value.into()), ring: ring.clone() }
    }

    pub fn int(value: i64) -> RingValue {
        RingValue::new(value, &Ring::integers())
    }

    pub fn value(&self) -> &Int {
        &self.value
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// The same value viewed in another ring.
    pub fn reduced(&self, ring: &Ring) -> RingValue {
        RingValue::new(self.value.clone(), ring)
    }
}

impl fmt::Debug for RingValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ring.modulus() {
            None => write!(f, "{}", self.value),
            Some(m) => write!(f, "{} (mod {})", self.value, m),
        }
    }
}

impl RingElement for RingValue {
    fn zero_like(&self) -> Self {
        RingValue::new(Int::ZERO, &self.ring)
    }

    fn one_like(&self) -> Self {
        RingValue::new(Int::ONE, &self.ring)
    }

    fn add(&self, other: &Self) -> Self {
        RingValue { value: self.ring.add(&self.value, &other.value), ring: self.ring.clone() }
    }

    fn sub(&self, other: &Self) -> Self {
        RingValue { value: self.ring.sub(&self.value, &other.value), ring: self.ring.clone() }
    }

    fn mul(&self, other: &Self) -> Self {
        RingValue { value: self.ring.mul(&self.value, &other.value), ring: self.ring.clone() }
    }

    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

/// Polynomial in one marker variable, truncated above degree `cap`.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyValue {
    coeffs: Vec<Int>,
    ring: Ring,
}

impl PolyValue {
    pub fn zero(cap: usize, ring: &Ring) -> PolyValue {
        PolyValue { coeffs: vec![Int::ZERO; cap + 1], ring: ring.clone() }
    }

    /// Builds from coefficients (constant term first); terms above `cap` are dropped.
    pub fn from_coeffs(coeffs: &[Int], cap: usize, ring: &Ring) -> PolyValue {
        let mut p = PolyValue::zero(cap, ring);
        for (slot, c) in p.coeffs.iter_mut().zip(coeffs) {
            *slot = ring.reduce(c.clone());
        }
        p
    }

    pub fn monomial(coeff: impl Into<Int>, degree: usize, cap: usize, ring: &Ring) -> PolyValue {
        let mut p = PolyValue::zero(cap, ring);
        if degree <= cap {
            p.coeffs[degree] = ring.reduce(coeff.into());
        }
        p
    }

    pub fn cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }
}

impl fmt::Debug for PolyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

impl RingElement for PolyValue {
    fn zero_like(&self) -> Self {
        PolyValue::zero(self.cap(), &self.ring)
    }

    fn one_like(&self) -> Self {
        PolyValue::monomial(1i64, 0, self.cap(), &self.ring)
    }

    fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.cap(), other.cap());
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| self.ring.add(a, b)).collect();
        PolyValue { coeffs, ring: self.ring.clone() }
    }

    fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.cap(), other.cap());
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| self.ring.sub(a, b)).collect();
        PolyValue { coeffs, ring: self.ring.clone() }
    }

    fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.cap(), other.cap());
        let mut out = self.zero_like();
        self.ring.poly_mul_acc(&mut out.coeffs, &self.coeffs, &other.coeffs);
        out
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Int::is_zero)
    }
}
