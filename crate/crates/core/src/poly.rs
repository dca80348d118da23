//! Dense polynomials over an explicit F_q: schoolbook arithmetic,
//! hyper-derivatives (Hasse derivatives), and complete factorization at desk
//! scale (degree <= 8).

use crate::error::{DtError, Result};
use crate::field::{FieldCtx, FieldElement};

/// Factorization is complete only up to this degree: a reducible polynomial
/// of degree <= 8 always has an irreducible factor of degree <= 4, which the
/// trial-division sweep covers.
pub const FACTOR_DEGREE_CAP: usize = 8;

/// Coefficients ascending; the zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyFq {
    pub coeffs: Vec<FieldElement>,
}

/// C(a, b) mod p by Lucas' theorem.
pub fn binom_mod_p(mut a: u64, mut b: u64, p: u64) -> u64 {
    let mut result = 1u64;
    while a > 0 || b > 0 {
        let (ad, bd) = (a % p, b % p);
        if bd > ad {
            return 0;
        }
        // C(ad, bd) mod p with ad, bd < p
        let mut num = 1u64;
        let mut den = 1u64;
        for i in 0..bd {
            num = num * ((ad - i) % p) % p;
            den = den * ((i + 1) % p) % p;
        }
        let den_inv = mod_pow(den, p - 2, p);
        result = result * num % p * den_inv % p;
        a /= p;
        b /= p;
    }
    result
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
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

impl PolyFq {
    pub fn zero() -> PolyFq {
        PolyFq { coeffs: Vec::new() }
    }

    pub fn constant(c: FieldElement) -> PolyFq {
        PolyFq::from_coeffs(vec![c])
    }

    /// a*x + c
    pub fn linear(a: FieldElement, c: FieldElement) -> PolyFq {
        PolyFq::from_coeffs(vec![c, a])
    }

    pub fn from_coeffs(mut coeffs: Vec<FieldElement>) -> PolyFq {
        while coeffs.last() == Some(&FieldElement::ZERO) {
            coeffs.pop();
        }
        PolyFq { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, j: usize) -> FieldElement {
        self.coeffs.get(j).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&FieldElement::ONE)
    }

    pub fn add(&self, ctx: &FieldCtx, other: &PolyFq) -> PolyFq {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| ctx.add(self.coeff(i), other.coeff(i)))
            .collect();
        PolyFq::from_coeffs(coeffs)
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &PolyFq) -> PolyFq {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| ctx.sub(self.coeff(i), other.coeff(i)))
            .collect();
        PolyFq::from_coeffs(coeffs)
    }

    pub fn scale(&self, ctx: &FieldCtx, c: FieldElement) -> PolyFq {
        PolyFq::from_coeffs(self.coeffs.iter().map(|&x| ctx.mul(x, c)).collect())
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &PolyFq) -> PolyFq {
        if self.is_zero() || other.is_zero() {
            return PolyFq::zero();
        }
        let mut coeffs =
            vec![FieldElement::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = ctx.add(coeffs[i + j], ctx.mul(x, y));
            }
        }
        PolyFq::from_coeffs(coeffs)
    }

    pub fn pow(&self, ctx: &FieldCtx, mut e: u64) -> PolyFq {
        let mut base = self.clone();
        let mut acc = PolyFq::constant(FieldElement::ONE);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(ctx, &base);
            }
            base = base.mul(ctx, &base);
            e >>= 1;
        }
        acc
    }

    pub fn eval(&self, ctx: &FieldCtx, x: FieldElement) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = ctx.add(ctx.mul(acc, x), c);
        }
        acc
    }

    /// (quotient, remainder) with divisor nonzero.
    pub fn div_rem(&self, ctx: &FieldCtx, divisor: &PolyFq) -> Result<(PolyFq, PolyFq)> {
        if divisor.is_zero() {
            return Err(DtError::ZeroArgument);
        }
        let dd = divisor.degree().unwrap();
        let lead_inv = ctx.inv(*divisor.coeffs.last().unwrap())?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![FieldElement::ZERO; self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let c = ctx.mul(*rem.last().unwrap(), lead_inv);
            let off = rem.len() - 1 - dd;
            if !c.is_zero() {
                quot[off] = c;
                for j in 0..=dd {
                    let sub = ctx.mul(c, divisor.coeff(j));
                    rem[off + j] = ctx.sub(rem[off + j], sub);
                }
            }
            rem.pop();
        }
        Ok((PolyFq::from_coeffs(quot), PolyFq::from_coeffs(rem)))
    }

    pub fn divides(&self, ctx: &FieldCtx, candidate: &PolyFq) -> bool {
        match self.div_rem(ctx, candidate) {
            Ok((_, rem)) => rem.is_zero(),
            Err(_) => false,
        }
    }

    /// n-th hyper-derivative: coefficient j - n of the result is
    /// C(j, n)·coeff_j, binomials taken mod p.
    pub fn hyper_derivative(&self, ctx: &FieldCtx, n: usize) -> PolyFq {
        if n == 0 {
            return self.clone();
        }
        if self.coeffs.len() <= n {
            return PolyFq::zero();
        }
        let coeffs = (n..self.coeffs.len())
            .map(|j| {
                let b = binom_mod_p(j as u64, n as u64, ctx.p);
                ctx.mul(self.coeffs[j], ctx.from_int(b))
            })
            .collect();
        PolyFq::from_coeffs(coeffs)
    }

    /// (a·x + c)^e expanded by binomial coefficients (Lucas mod p); avoids
    /// repeated polynomial squaring for the large exponents the auxiliary
    /// polynomials need.
    pub fn linear_power(
        ctx: &FieldCtx,
        a: FieldElement,
        c: FieldElement,
        e: u64,
    ) -> PolyFq {
        let mut coeffs = Vec::with_capacity(e as usize + 1);
        let mut a_pow = FieldElement::ONE;
        for j in 0..=e {
            let b = ctx.from_int(binom_mod_p(e, j, ctx.p));
            let c_pow = ctx.pow(c, e - j);
            coeffs.push(ctx.mul(ctx.mul(b, a_pow), c_pow));
            a_pow = ctx.mul(a_pow, a);
        }
        PolyFq::from_coeffs(coeffs)
    }

    /// Complete factorization into monic irreducible factors with
    /// multiplicities, valid for degree <= FACTOR_DEGREE_CAP. Root extraction
    /// handles the linear factors; trial division by monic polynomials of
    /// degree 2..=4 (packed-index order) finds the rest — at each stage any
    /// surviving divisor of that degree is irreducible.
    pub fn factor(&self, ctx: &FieldCtx) -> Result<Vec<(PolyFq, u32)>> {
        let deg = self
            .degree()
            .ok_or_else(|| DtError::Domain("cannot factor the zero polynomial".into()))?;
        if deg > FACTOR_DEGREE_CAP {
            return Err(DtError::DegreeCap {
                deg,
                cap: FACTOR_DEGREE_CAP,
            });
        }
        let lead_inv = ctx.inv(*self.coeffs.last().unwrap())?;
        let mut work = self.scale(ctx, lead_inv);
        let mut factors: Vec<(PolyFq, u32)> = Vec::new();

        for root in ctx.elements() {
            let mut mult = 0u32;
            let lin = PolyFq::linear(FieldElement::ONE, ctx.neg(root));
            while work.degree().map_or(false, |d| d >= 1)
                && work.eval(ctx, root).is_zero()
            {
                work = work.div_rem(ctx, &lin)?.0;
                mult += 1;
            }
            if mult > 0 {
                factors.push((lin, mult));
            }
        }

        for e in 2..=4usize {
            'grow: while work.degree().map_or(false, |d| d >= 2 * e) {
                let bound = ctx.q.pow(e as u32);
                for idx in 0..bound {
                    let mut coeffs: Vec<FieldElement> = Vec::with_capacity(e + 1);
                    let mut t = idx;
                    for _ in 0..e {
                        coeffs.push(FieldElement((t % ctx.q) as u32));
                        t /= ctx.q;
                    }
                    coeffs.push(FieldElement::ONE);
                    let cand = PolyFq::from_coeffs(coeffs);
                    if work.divides(ctx, &cand) {
                        let mut mult = 0u32;
                        while work.divides(ctx, &cand) {
                            work = work.div_rem(ctx, &cand)?.0;
                            mult += 1;
                        }
                        factors.push((cand, mult));
                        continue 'grow;
                    }
                }
                break;
            }
        }

        if work.degree().map_or(false, |d| d >= 1) {
            factors.push((work, 1));
        }
        debug_assert_eq!(
            factors
                .iter()
                .map(|(f, m)| f.degree().unwrap() as u32 * m)
                .sum::<u32>() as usize,
            deg
        );
        Ok(factors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f13() -> FieldCtx {
        FieldCtx::new(13, 1).unwrap()
    }

    #[test]
    fn lucas_binomials() {
        // Cross-check against direct C(m+n, n) mod p for small p.
        for p in [2u64, 3, 5, 7] {
            for m in 0..=60u64 {
                for n in 0..=60u64 {
                    let mut direct = 1u128;
                    // C(m+n, n) exactly, then reduce (fits: C(120,60) < 2^117)
                    for i in 0..n {
                        direct = direct * (m + n - i) as u128 / (i + 1) as u128;
                    }
                    assert_eq!(
                        binom_mod_p(m + n, n, p),
                        (direct % p as u128) as u64,
                        "C({},{}) mod {}",
                        m + n,
                        n,
                        p
                    );
                }
            }
        }
    }

    #[test]
    fn div_rem_reconstructs() {
        let ctx = f13();
        let a = PolyFq::from_coeffs(vec![
            FieldElement(3),
            FieldElement(0),
            FieldElement(7),
            FieldElement(1),
            FieldElement(5),
        ]);
        let b = PolyFq::from_coeffs(vec![FieldElement(2), FieldElement(1), FieldElement(4)]);
        let (q, r) = a.div_rem(&ctx, &b).unwrap();
        let back = q.mul(&ctx, &b).add(&ctx, &r);
        assert_eq!(back, a);
        assert!(r.degree().unwrap_or(0) < b.degree().unwrap());
    }

    #[test]
    fn hasse_of_linear_power() {
        // E^(n)((ax+c)^d) = a^n C(d,n) (ax+c)^{d-n} over F_7, a=3, c=2, d=5, n=2.
        let ctx = FieldCtx::new(7, 1).unwrap();
        let (a, c) = (FieldElement(3), FieldElement(2));
        let f = PolyFq::linear(a, c).pow(&ctx, 5);
        let lhs = f.hyper_derivative(&ctx, 2);
        let scalar = ctx.mul(ctx.pow(a, 2), ctx.from_int(binom_mod_p(5, 2, 7)));
        let rhs = PolyFq::linear(a, c).pow(&ctx, 3).scale(&ctx, scalar);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn linear_power_matches_repeated_squaring() {
        let ctx = f13();
        for (a, c, e) in [(3u32, 2u32, 17u64), (5, 0, 6), (1, 12, 25), (7, 7, 1)] {
            let fast = PolyFq::linear_power(&ctx, FieldElement(a), FieldElement(c), e);
            let slow = PolyFq::linear(FieldElement(a), FieldElement(c)).pow(&ctx, e);
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn hyper_derivative_order_zero_is_identity() {
        let ctx = f13();
        let f = PolyFq::from_coeffs(vec![FieldElement(1), FieldElement(9), FieldElement(4)]);
        assert_eq!(f.hyper_derivative(&ctx, 0), f);
    }

    #[test]
    fn factor_small() {
        let ctx = f13();
        // x(x+1)(x+1) = x^3 + 2x^2 + x
        let f = PolyFq::from_coeffs(vec![
            FieldElement(0),
            FieldElement(1),
            FieldElement(2),
            FieldElement(1),
        ]);
        let factors = f.factor(&ctx).unwrap();
        let mut mults: Vec<(u64, u32)> = factors
            .iter()
            .map(|(p, m)| (p.coeff(0).idx(), *m))
            .collect();
        mults.sort();
        assert_eq!(mults, vec![(0, 1), (1, 2)]);

        // x^2 + 1 over F_13 splits (5^2 = -1); over F_7 it is irreducible.
        let f7 = FieldCtx::new(7, 1).unwrap();
        let g = PolyFq::from_coeffs(vec![FieldElement(1), FieldElement(0), FieldElement(1)]);
        let fac7 = g.factor(&f7).unwrap();
        assert_eq!(fac7.len(), 1);
        assert_eq!(fac7[0].0.degree(), Some(2));
        assert_eq!(fac7[0].1, 1);
    }

    #[test]
    fn factor_degree_cap() {
        let ctx = f13();
        let f = PolyFq::linear(FieldElement(1), FieldElement(1)).pow(&ctx, 9);
        assert!(matches!(
            f.factor(&ctx),
            Err(DtError::DegreeCap { deg: 9, cap: 8 })
        ));
    }

    proptest! {
        #[test]
        fn leibniz_rule(fa in proptest::collection::vec(0u32..13, 1..6),
                        fb in proptest::collection::vec(0u32..13, 1..6),
                        n in 0usize..5) {
            let ctx = f13();
            let f = PolyFq::from_coeffs(fa.into_iter().map(FieldElement).collect());
            let g = PolyFq::from_coeffs(fb.into_iter().map(FieldElement).collect());
            let lhs = f.mul(&ctx, &g).hyper_derivative(&ctx, n);
            let mut rhs = PolyFq::zero();
            for k in 0..=n {
                let term = f
                    .hyper_derivative(&ctx, k)
                    .mul(&ctx, &g.hyper_derivative(&ctx, n - k));
                rhs = rhs.add(&ctx, &term);
            }
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn mul_then_factor_roundtrip(r1 in 0u32..13, r2 in 0u32..13, r3 in 0u32..13) {
            let ctx = f13();
            let f = PolyFq::linear(FieldElement::ONE, FieldElement(r1))
                .mul(&ctx, &PolyFq::linear(FieldElement::ONE, FieldElement(r2)))
                .mul(&ctx, &PolyFq::linear(FieldElement::ONE, FieldElement(r3)));
            let factors = f.factor(&ctx).unwrap();
            let mut back = PolyFq::constant(FieldElement::ONE);
            for (p, m) in &factors {
                back = back.mul(&ctx, &p.pow(&ctx, *m as u64));
            }
            prop_assert_eq!(back, f);
        }
    }

    #[test]
    fn multiplicity_soundness() {
        // If E^(k) f vanishes at c for k < m then (x - c)^m divides f.
        let ctx = f13();
        let mut s = 0xC0FFEEu64;
        let mut next = move || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            s
        };
        for _ in 0..100 {
            let c = FieldElement((next() % 13) as u32);
            let m = (next() % 4 + 1) as usize;
            let extra = PolyFq::from_coeffs(
                (0..=(next() % 4) as usize)
                    .map(|_| FieldElement((next() % 13) as u32))
                    .collect(),
            );
            let extra = if extra.is_zero() {
                PolyFq::constant(FieldElement::ONE)
            } else {
                extra
            };
            let f = PolyFq::linear(FieldElement::ONE, ctx.neg(c))
                .pow(&ctx, m as u64)
                .mul(&ctx, &extra);
            for k in 0..m {
                assert!(f.hyper_derivative(&ctx, k).eval(&ctx, c).is_zero());
            }
            let divisor = PolyFq::linear(FieldElement::ONE, ctx.neg(c)).pow(&ctx, m as u64);
            assert!(f.divides(&ctx, &divisor));
        }
    }
}
