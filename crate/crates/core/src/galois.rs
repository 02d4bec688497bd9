//! Finite fields GF(m) for prime m and the prime powers 4, 8 and 9.
//!
//! Elements are identified by an index `0..m`. For a prime field the index is
//! the residue itself. For an extension field GF(p^e) the index encodes the
//! coefficient vector of the polynomial representative in base `p`, with the
//! constant term as the least significant digit. Under that encoding index 0
//! is the additive identity, index 1 is the multiplicative identity and index
//! `p` is the generator `x`.
//!
//! ```
//! use oofa::galois::GaloisField;
//!
//! let gf4 = GaloisField::new(4).unwrap();
//! // x * x = x + 1 under the modulus x^2 + x + 1
//! assert_eq!(gf4.mul(2, 2), 3);
//! ```

use crate::error::{Error, Result};

/// Irreducible moduli for the supported extension fields, as coefficient
/// lists from the constant term upward (the leading 1 is included).
const MODULI: [(usize, usize, &[usize]); 3] = [
    // x^2 + x + 1
    (4, 2, &[1, 1, 1]),
    // x^3 + x + 1
    (8, 2, &[1, 1, 0, 1]),
    // x^2 + 1
    (9, 3, &[1, 0, 1]),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisField {
    order: usize,
    characteristic: usize,
    degree: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
}

pub(crate) fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl GaloisField {
    pub fn new(order: usize) -> Result<Self> {
        if is_prime(order) {
            let add = table(order, |a, b| (a + b) % order);
            let mul = table(order, |a, b| (a * b) % order);
            return Ok(Self { order, characteristic: order, degree: 1, add, mul });
        }
        let &(_, p, modulus) = MODULI.iter().find(|(q, _, _)| *q == order).ok_or(Error::UnsupportedOrder(order))?;
        let degree = modulus.len() - 1;
        let add = table(order, |a, b| {
            let (da, db) = (digits(a, p, degree), digits(b, p, degree));
            let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            undigits(&sum, p)
        });
        let mul = table(order, |a, b| {
            let prod = poly_mul_mod(&digits(a, p, degree), &digits(b, p, degree), modulus, p);
            undigits(&prod, p)
        });
        Ok(Self { order, characteristic: p, degree, add, mul })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn characteristic(&self) -> usize {
        self.characteristic
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.order + b]
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    /// Coefficient vector of element `a`, constant term first.
    pub fn coefficients(&self, a: usize) -> Vec<usize> {
        digits(a, self.characteristic, self.degree)
    }

    pub fn neg(&self, a: usize) -> usize {
        (0..self.order).find(|&b| self.add(a, b) == 0).expect("additive inverse exists in a field")
    }

    pub fn inv(&self, a: usize) -> Option<usize> {
        (1..self.order).find(|&b| self.mul(a, b) == 1)
    }
}

fn table(q: usize, f: impl Fn(usize, usize) -> usize) -> Vec<usize> {
    let mut t = Vec::with_capacity(q * q);
    for a in 0..q {
        for b in 0..q {
            t.push(f(a, b));
        }
    }
    t
}

fn digits(mut a: usize, p: usize, len: usize) -> Vec<usize> {
    let mut d = vec![0; len];
    for slot in d.iter_mut() {
        *slot = a % p;
        a /= p;
    }
    d
}

fn undigits(d: &[usize], p: usize) -> usize {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

fn poly_mul_mod(a: &[usize], b: &[usize], modulus: &[usize], p: usize) -> Vec<usize> {
    let deg = modulus.len() - 1;
    let mut prod = vec![0; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    // reduce from the top; modulus is monic
    for top in (deg..prod.len()).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        for (i, &mcoef) in modulus.iter().enumerate() {
            let idx = top - deg + i;
            prod[idx] = (prod[idx] + p * p - c * mcoef % p) % p;
        }
    }
    prod.truncate(deg);
    prod
}
