//! Explicit finite fields F_q, q = p^r, with dense exp/log and trace tables.
//!
//! Elements are encoded by index: the coefficient vector of the residue
//! polynomial packed in base p, so index 0 is the zero element and indices
//! below p are the prime subfield. One canonical modulus and generator per
//! (p, r) keeps every downstream result reproducible bit-for-bit.

use crate::error::{DtError, Result};

/// Largest supported field size; keeps all tables dense.
pub const MAX_Q: u64 = 1 << 20;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn idx(self) -> u64 {
        self.0 as u64
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

pub struct FieldCtx {
    pub p: u64,
    pub r: u32,
    pub q: u64,
    /// Non-leading coefficients of the monic irreducible modulus, ascending
    /// degree; empty when r = 1.
    pub modulus: Vec<u64>,
    pub generator: FieldElement,
    exp_table: Vec<u32>,
    log_table: Vec<u32>,
    trace_table: Vec<u32>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2;
    while i * i <= n {
        if n % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut t = 2;
    while t * t <= n {
        if n % t == 0 {
            out.push(t);
            while n % t == 0 {
                n /= t;
            }
        }
        t += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Polynomial arithmetic over F_p used only during field construction.
mod fp_poly {
    /// Coefficients ascending; invariant: no trailing zeros except [] = 0.
    pub fn norm(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn mul_mod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut res = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                res[i + j] = (res[i + j] + x * y) % p;
            }
        }
        reduce(&mut res, modulus, p);
        norm(res)
    }

    /// modulus holds the full monic coefficient vector, leading 1 included.
    fn reduce(res: &mut Vec<u64>, modulus: &[u64], p: u64) {
        let deg = modulus.len() - 1;
        let mut i = res.len();
        while i > deg {
            i -= 1;
            let c = res[i];
            if c != 0 {
                res[i] = 0;
                for j in 0..deg {
                    let sub = c * modulus[j] % p;
                    res[i - deg + j] = (res[i - deg + j] + p - sub) % p;
                }
            }
        }
    }

    pub fn pow_x(mut e: u64, modulus: &[u64], p: u64) -> Vec<u64> {
        let mut base = vec![0, 1];
        let mut result = vec![1];
        while e > 0 {
            if e & 1 == 1 {
                result = mul_mod(&result, &base, modulus, p);
            }
            base = mul_mod(&base, &base, modulus, p);
            e >>= 1;
        }
        result
    }

    pub fn gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
        a = norm(a);
        b = norm(b);
        while !b.is_empty() {
            let inv = mod_inv(*b.last().unwrap(), p);
            while a.len() >= b.len() && !a.is_empty() {
                let c = *a.last().unwrap() * inv % p;
                let off = a.len() - b.len();
                for j in 0..b.len() {
                    let sub = c * b[j] % p;
                    a[off + j] = (a[off + j] + p - sub) % p;
                }
                a = norm(a);
            }
            std::mem::swap(&mut a, &mut b);
        }
        a
    }

    pub fn mod_inv(a: u64, p: u64) -> u64 {
        // Fermat; p prime, a != 0 mod p.
        mod_pow(a % p, p - 2, p)
    }

    pub fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
        let mut acc = 1u64;
        b %= m;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % m;
            }
            b = b * b % m;
            e >>= 1;
        }
        acc
    }

    /// Rabin irreducibility test for a monic polynomial of degree r over F_p.
    pub fn irreducible(modulus: &[u64], p: u64, r: u32) -> bool {
        let q: u64 = p.pow(r);
        let sub_one = |mut v: Vec<u64>| -> Vec<u64> {
            while v.len() < 2 {
                v.push(0);
            }
            v[1] = (v[1] + p - 1) % p;
            norm(v)
        };
        if !sub_one(pow_x(q, modulus, p)).is_empty() {
            return false;
        }
        for t in super::prime_factors(r as u64) {
            let e = p.pow(r / t as u32);
            let diff = sub_one(pow_x(e, modulus, p));
            if gcd(modulus.to_vec(), diff, p).len() > 1 {
                return false;
            }
        }
        true
    }
}

impl FieldCtx {
    /// Builds F_{p^r} with the canonical modulus (smallest packed coefficient
    /// index that is irreducible) and the smallest-index generator.
    pub fn new(p: u64, r: u32) -> Result<FieldCtx> {
        if !is_prime(p) {
            return Err(DtError::NotPrime(p));
        }
        if r < 1 {
            return Err(DtError::BadDegree);
        }
        let q = p.checked_pow(r).filter(|&q| q <= MAX_Q).ok_or_else(|| {
            DtError::FieldTooLarge(p.saturating_pow(r))
        })?;

        let modulus = if r == 1 {
            Vec::new()
        } else {
            Self::find_modulus(p, r)?
        };

        let mut ctx = FieldCtx {
            p,
            r,
            q,
            modulus,
            generator: FieldElement::ZERO,
            exp_table: Vec::new(),
            log_table: Vec::new(),
            trace_table: Vec::new(),
        };
        ctx.build_tables()?;
        Ok(ctx)
    }

    fn find_modulus(p: u64, r: u32) -> Result<Vec<u64>> {
        let bound = p.pow(r);
        for idx in 0..bound {
            let mut coeffs = Vec::with_capacity(r as usize + 1);
            let mut t = idx;
            for _ in 0..r {
                coeffs.push(t % p);
                t /= p;
            }
            coeffs.push(1);
            if fp_poly::irreducible(&coeffs, p, r) {
                coeffs.pop();
                return Ok(coeffs);
            }
        }
        Err(DtError::Domain(format!(
            "no irreducible polynomial of degree {r} over F_{p} (bug)"
        )))
    }

    fn idx_to_poly(&self, idx: u64) -> Vec<u64> {
        let mut c = Vec::with_capacity(self.r as usize);
        let mut t = idx;
        for _ in 0..self.r {
            c.push(t % self.p);
            t /= self.p;
        }
        fp_poly::norm(c)
    }

    fn poly_to_idx(&self, poly: &[u64]) -> u64 {
        let mut v = 0u64;
        for &c in poly.iter().rev() {
            v = v * self.p + c;
        }
        v
    }

    /// Multiplication straight from the residue-polynomial representation;
    /// used only to bootstrap the exp/log tables.
    fn mul_raw(&self, x: u64, y: u64) -> u64 {
        if x == 0 || y == 0 {
            return 0;
        }
        if self.r == 1 {
            return x * y % self.p;
        }
        let mut modulus = self.modulus.clone();
        modulus.push(1);
        let prod = fp_poly::mul_mod(
            &self.idx_to_poly(x),
            &self.idx_to_poly(y),
            &modulus,
            self.p,
        );
        self.poly_to_idx(&prod)
    }

    fn pow_raw(&self, x: u64, mut e: u64) -> u64 {
        let mut base = x;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        acc
    }

    fn build_tables(&mut self) -> Result<()> {
        let q = self.q;
        let factors = prime_factors(q - 1);
        let generator = (1..q)
            .find(|&g| factors.iter().all(|&f| self.pow_raw(g, (q - 1) / f) != 1))
            .ok_or_else(|| DtError::Domain("no generator found (bug)".into()))?;
        self.generator = FieldElement(generator as u32);

        self.exp_table = vec![0; (q - 1) as usize];
        self.log_table = vec![u32::MAX; q as usize];
        let mut cur = 1u64;
        for j in 0..(q - 1) {
            self.exp_table[j as usize] = cur as u32;
            if self.log_table[cur as usize] != u32::MAX {
                return Err(DtError::Domain("generator order too small (bug)".into()));
            }
            self.log_table[cur as usize] = j as u32;
            cur = self.mul_raw(cur, generator);
        }
        if cur != 1 {
            return Err(DtError::Domain("generator order mismatch (bug)".into()));
        }

        // Tr(x) = sum of x^{p^i}; for r = 1 this is x itself.
        self.trace_table = vec![0; q as usize];
        for x in 1..q {
            let mut acc = 0u64;
            let mut frob = x;
            for _ in 0..self.r {
                acc = self.add_raw(acc, frob);
                frob = self.pow_raw(frob, self.p);
            }
            debug_assert!(acc < self.p, "trace landed outside the prime subfield");
            self.trace_table[x as usize] = acc as u32;
        }
        Ok(())
    }

    fn add_raw(&self, x: u64, y: u64) -> u64 {
        if self.r == 1 {
            return (x + y) % self.p;
        }
        let mut res = 0u64;
        let mut mult = 1u64;
        let (mut a, mut b) = (x, y);
        for _ in 0..self.r {
            res += (a % self.p + b % self.p) % self.p * mult;
            a /= self.p;
            b /= self.p;
            mult *= self.p;
        }
        res
    }

    pub fn element(&self, idx: u64) -> Result<FieldElement> {
        if idx < self.q {
            Ok(FieldElement(idx as u32))
        } else {
            Err(DtError::BadElement { idx, q: self.q })
        }
    }

    /// Integer reduced into the prime subfield.
    pub fn from_int(&self, v: u64) -> FieldElement {
        FieldElement((v % self.p) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(|i| FieldElement(i as u32))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> {
        (1..self.q).map(|i| FieldElement(i as u32))
    }

    #[inline]
    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        FieldElement(self.add_raw(x.idx(), y.idx()) as u32)
    }

    #[inline]
    pub fn neg(&self, x: FieldElement) -> FieldElement {
        if self.r == 1 {
            return FieldElement(((self.p - x.idx()) % self.p) as u32);
        }
        let mut res = 0u64;
        let mut mult = 1u64;
        let mut a = x.idx();
        for _ in 0..self.r {
            res += (self.p - a % self.p) % self.p * mult;
            a /= self.p;
            mult *= self.p;
        }
        FieldElement(res as u32)
    }

    #[inline]
    pub fn sub(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        if x.is_zero() || y.is_zero() {
            return FieldElement::ZERO;
        }
        let lx = self.log_table[x.0 as usize] as u64;
        let ly = self.log_table[y.0 as usize] as u64;
        FieldElement(self.exp_table[((lx + ly) % (self.q - 1)) as usize])
    }

    pub fn inv(&self, x: FieldElement) -> Result<FieldElement> {
        if x.is_zero() {
            return Err(DtError::ZeroArgument);
        }
        let lx = self.log_table[x.0 as usize] as u64;
        Ok(FieldElement(
            self.exp_table[((self.q - 1 - lx) % (self.q - 1)) as usize],
        ))
    }

    /// x^e with the convention 0^0 = 1.
    pub fn pow(&self, x: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if x.is_zero() {
            return FieldElement::ZERO;
        }
        let lx = self.log_table[x.0 as usize] as u64;
        let le = (lx % (self.q - 1)) * (e % (self.q - 1)) % (self.q - 1);
        FieldElement(self.exp_table[le as usize])
    }

    pub fn discrete_log(&self, x: FieldElement) -> Result<u64> {
        if x.is_zero() {
            return Err(DtError::ZeroArgument);
        }
        Ok(self.log_table[x.0 as usize] as u64)
    }

    pub fn exp(&self, j: u64) -> FieldElement {
        FieldElement(self.exp_table[(j % (self.q - 1)) as usize])
    }

    /// Membership in S_d = {x^d : x in F_q^*}; 0 is never a member (callers
    /// needing S_d ∪ {0} test zero separately).
    pub fn is_dth_power(&self, x: FieldElement, d: u64) -> Result<bool> {
        if d == 0 || (self.q - 1) % d != 0 {
            return Err(DtError::BadSubgroupOrder { d, qm1: self.q - 1 });
        }
        if x.is_zero() {
            return Ok(false);
        }
        Ok(self.log_table[x.0 as usize] as u64 % d == 0)
    }

    /// Absolute trace into [0, p).
    #[inline]
    pub fn trace(&self, x: FieldElement) -> u64 {
        self.trace_table[x.0 as usize] as u64
    }

    /// Elements of the subfield F_{p^s} (s | r), zero included.
    pub fn subfield_elements(&self, s: u32) -> Result<Vec<FieldElement>> {
        if s == 0 || self.r % s != 0 {
            return Err(DtError::Domain(format!(
                "{s} does not divide extension degree {}",
                self.r
            )));
        }
        let sub_q = self.p.pow(s);
        let out: Vec<FieldElement> = self
            .elements()
            .filter(|&x| self.pow(x, sub_q) == x)
            .collect();
        debug_assert_eq!(out.len() as u64, sub_q);
        Ok(out)
    }

    /// Membership bitset over element indices for S_d, optionally with 0.
    pub fn dth_power_set(&self, d: u64, include_zero: bool) -> Result<crate::bitset::BitSet> {
        if d == 0 || (self.q - 1) % d != 0 {
            return Err(DtError::BadSubgroupOrder { d, qm1: self.q - 1 });
        }
        let mut s = crate::bitset::BitSet::new(self.q as usize);
        let mut j = 0;
        while j < self.q - 1 {
            s.insert(self.exp_table[j as usize] as usize);
            j += d;
        }
        if include_zero {
            s.insert(0);
        }
        Ok(s)
    }
}
