use crate::error::{GrandError, Result};

/// GF(2^m) through exp/log tables over a primitive polynomial.
#[derive(Debug, Clone)]
pub struct GaloisField {
    m: u32,
    primitive_poly: u32,
    exp: Vec<u16>,
    log: Vec<u16>,
}

impl GaloisField {
    /// `primitive_poly` includes the leading coefficient, e.g. `0x89` for
    /// x^7 + x^3 + 1.
    pub fn new(primitive_poly: u32) -> Result<Self> {
        if primitive_poly < 4 {
            return Err(GrandError::Config(format!(
                "primitive polynomial {primitive_poly:#x} has degree < 2"
            )));
        }
        let m = 31 - primitive_poly.leading_zeros();
        if m > 15 {
            return Err(GrandError::Config(format!(
                "field degree {m} too large"
            )));
        }
        let order = (1usize << m) - 1;
        let mut exp = vec![0u16; 2 * order];
        let mut log = vec![0u16; order + 1];
        let mut x = 1u32;
        for i in 0..order {
            if i > 0 && x == 1 {
                return Err(GrandError::Config(format!(
                    "{primitive_poly:#x} is not primitive: alpha has order {i}"
                )));
            }
            exp[i] = x as u16;
            log[x as usize] = i as u16;
            x <<= 1;
            if x >> m & 1 == 1 {
                x ^= primitive_poly;
            }
        }
        if x != 1 {
            return Err(GrandError::Config(format!(
                "{primitive_poly:#x} is not irreducible"
            )));
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        Ok(Self {
            m,
            primitive_poly,
            exp,
            log,
        })
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn primitive_poly(&self) -> u32 {
        self.primitive_poly
    }

    /// Number of nonzero elements.
    pub fn order(&self) -> usize {
        (1 << self.m) - 1
    }

    /// alpha^e for any exponent.
    pub fn alpha_pow(&self, e: usize) -> u16 {
        self.exp[e % self.order()]
    }

    pub fn log(&self, x: u16) -> Option<usize> {
        (x != 0).then(|| self.log[x as usize] as usize)
    }

    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
        }
    }

    /// Minimal polynomial of alpha^i over GF(2) as a bit mask (bit d = coefficient of x^d).
    pub fn minimal_polynomial(&self, i: usize) -> u64 {
        let order = self.order();
        let mut coset = vec![i % order];
        loop {
            let next = coset.last().unwrap() * 2 % order;
            if next == coset[0] {
                break;
            }
            coset.push(next);
        }
        // Product of (x + alpha^c); coefficients land in GF(2).
        let mut poly: Vec<u16> = vec![1];
        for &c in &coset {
            let root = self.alpha_pow(c);
            let mut next = vec![0u16; poly.len() + 1];
            for (d, &coef) in poly.iter().enumerate() {
                next[d + 1] ^= coef;
                next[d] ^= self.mul(coef, root);
            }
            poly = next;
        }
        poly.iter().enumerate().fold(0u64, |acc, (d, &c)| {
            debug_assert!(c <= 1);
            acc | (c as u64) << d
        })
    }
}
