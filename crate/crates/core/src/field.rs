//! Small finite fields GF(p^m) with table-driven arithmetic.
//!
//! Element `i` is the polynomial whose coefficients over GF(p) are the base-p
//! digits of `i`, constant term least significant. So `0` is zero, `1` is one,
//! and in characteristic 2 addition is XOR of the encodings.

use thiserror::Error;

/// Largest field order the tables are built for.
pub const MAX_ORDER: usize = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(usize),
    #[error("{0} is not a prime power")]
    NotPrimePower(usize),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{m} exceeds the limit {MAX_ORDER}")]
    Capacity { p: usize, m: u32 },
    #[error("element {0} is not in a field of order {1}")]
    OutOfRange(usize, usize),
    #[error("zero has no multiplicative inverse")]
    InverseOfZero,
}

pub fn is_prime(n: usize) -> bool {
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

/// Splits `q` as `p^m` with `p` prime, if possible.
pub fn prime_power(q: usize) -> Option<(usize, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut rest, mut m) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

/// GF(p^m) with the smallest-encoding monic irreducible modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteField {
    p: usize,
    m: u32,
    q: usize,
    modulus: Vec<usize>,
    exp: Vec<usize>,
    log: Vec<usize>,
    neg: Vec<usize>,
}

impl FiniteField {
    pub fn new(p: usize, m: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u128).pow(m);
        if q > MAX_ORDER as u128 {
            return Err(FieldError::Capacity { p, m });
        }
        let q = q as usize;
        let modulus = smallest_irreducible(p, m as usize);
        let mut field = FiniteField {
            p,
            m,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            neg: Vec::new(),
        };
        field.build_tables();
        Ok(field)
    }

    /// The field of order `q`, which must be a prime power.
    pub fn with_order(q: usize) -> Result<Self, FieldError> {
        let (p, m) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Self::new(p, m)
    }

    fn build_tables(&mut self) {
        let q = self.q;
        self.neg = (0..q)
            .map(|a| {
                let digits = self.digits(a);
                self.encode(digits.iter().map(|&c| (self.p - c) % self.p))
            })
            .collect();
        // Smallest element of multiplicative order q - 1.
        let generator = (1..q)
            .find(|&g| {
                let mut x = g;
                for step in 1..q - 1 {
                    if x == 1 {
                        return step == q - 1;
                    }
                    x = self.mul_slow(x, g);
                }
                x == 1
            })
            .expect("multiplicative group of a finite field is cyclic");
        self.exp = Vec::with_capacity(q - 1);
        self.log = vec![0; q];
        let mut x = 1;
        for e in 0..q - 1 {
            self.exp.push(x);
            self.log[x] = e;
            x = self.mul_slow(x, generator);
        }
    }

    fn encode(&self, digits: impl DoubleEndedIterator<Item = usize>) -> usize {
        digits.rev().fold(0, |acc, d| acc * self.p + d)
    }

    /// Base-p coefficient digits of element `a`, constant term first.
    pub fn digits(&self, mut a: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.m as usize);
        for _ in 0..self.m {
            out.push(a % self.p);
            a /= self.p;
        }
        out
    }

    fn mul_slow(&self, a: usize, b: usize) -> usize {
        let prod = poly_mul(&self.digits(a), &self.digits(b), self.p);
        let rem = poly_rem(&prod, &self.modulus, self.p);
        let mut digits = rem;
        digits.resize(self.m as usize, 0);
        self.encode(digits.into_iter())
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> usize {
        self.q
    }

    /// Modulus coefficients, constant term first; monic of length `m + 1`.
    pub fn modulus(&self) -> &[usize] {
        &self.modulus
    }

    /// Integer encoding of the modulus (base-p digits including the leading 1).
    pub fn modulus_encoding(&self) -> usize {
        self.encode(self.modulus.iter().copied())
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.q
    }

    pub fn check(&self, a: usize) -> Result<usize, FieldError> {
        if a < self.q {
            Ok(a)
        } else {
            Err(FieldError::OutOfRange(a, self.q))
        }
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        if self.p == 2 {
            return a ^ b;
        }
        if self.m == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.m {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg[b])
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        if a == 0 || b == 0 {
            return 0;
        }
        let e = self.log[a] + self.log[b];
        self.exp[e % (self.q - 1)]
    }

    pub fn inv(&self, a: usize) -> Result<usize, FieldError> {
        if a == 0 {
            return Err(FieldError::InverseOfZero);
        }
        let order = self.q - 1;
        Ok(self.exp[(order - self.log[a]) % order])
    }

    pub fn pow(&self, a: usize, e: u64) -> usize {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = (self.q - 1) as u64;
        let idx = (self.log[a] as u64 * (e % order)) % order;
        self.exp[idx as usize]
    }

    /// Nonzero squares, sorted by element id.
    pub fn squares(&self) -> Vec<usize> {
        let mut seen = vec![false; self.q];
        for a in 1..self.q {
            seen[self.mul(a, a)] = true;
        }
        (1..self.q).filter(|&x| seen[x]).collect()
    }

    /// Membership mask for nonzero squares, indexed by element id.
    pub fn square_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.q];
        for s in self.squares() {
            mask[s] = true;
        }
        mask
    }
}

fn trim(mut poly: Vec<usize>) -> Vec<usize> {
    while poly.len() > 1 && *poly.last().unwrap() == 0 {
        poly.pop();
    }
    poly
}

fn poly_mul(a: &[usize], b: &[usize], p: usize) -> Vec<usize> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem(a: &[usize], m: &[usize], p: usize) -> Vec<usize> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm && r.len() > 1 {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p - lead) * c) % p;
            }
        }
        r.pop();
    }
    if r.is_empty() {
        r.push(0);
    }
    trim(r)
}

/// Monic polynomial of degree `deg` whose low coefficients are the base-p
/// digits of `low`.
fn monic_from_low(low: usize, deg: usize, p: usize) -> Vec<usize> {
    let mut coeffs = Vec::with_capacity(deg + 1);
    let mut x = low;
    for _ in 0..deg {
        coeffs.push(x % p);
        x /= p;
    }
    coeffs.push(1);
    coeffs
}

/// Irreducibility by trial division against every monic polynomial of degree
/// at most `deg / 2`.
fn is_irreducible(poly: &[usize], p: usize) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        for low in 0..p.pow(d as u32) {
            let divisor = monic_from_low(low, d, p);
            if poly_rem(poly, &divisor, p) == [0] {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: usize, m: usize) -> Vec<usize> {
    (0..p.pow(m as u32))
        .map(|low| monic_from_low(low, m, p))
        .find(|poly| is_irreducible(poly, p))
        .expect("irreducible polynomials exist in every degree")
}
