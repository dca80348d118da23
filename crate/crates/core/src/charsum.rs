//! Multiplicative characters of F_q^*, Gauss sums, and numeric checks of the
//! character-sum identities and bounds the tuple estimates rest on. The
//! statements are character-independent, so callers usually sweep every
//! order-d character (all coprime twists).

use crate::error::{DtError, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::poly::PolyFq;
use num_complex::Complex64;
use num_integer::Integer;
use std::f64::consts::TAU;

/// A multiplicative character of order d: χ(g^j) = e^{2πi·m·j/d}, χ(0) = 0.
/// The trivial character is d = 1, m = 0.
pub struct Character<'a> {
    pub ctx: &'a FieldCtx,
    pub d: u64,
    pub twist: u64,
    roots: Vec<Complex64>,
}

impl<'a> Character<'a> {
    pub fn new(ctx: &'a FieldCtx, d: u64, twist: u64) -> Result<Character<'a>> {
        if d == 0 || (ctx.q - 1) % d != 0 {
            return Err(DtError::BadSubgroupOrder { d, qm1: ctx.q - 1 });
        }
        let ok = if d == 1 {
            twist == 0
        } else {
            twist >= 1 && twist < d && twist.gcd(&d) == 1
        };
        if !ok {
            return Err(DtError::BadTwist { m: twist, d });
        }
        let roots = (0..d)
            .map(|j| Complex64::from_polar(1.0, TAU * j as f64 / d as f64))
            .collect();
        Ok(Character { ctx, d, twist, roots })
    }

    /// All characters of exact order d (every coprime twist).
    pub fn all_of_order(ctx: &'a FieldCtx, d: u64) -> Result<Vec<Character<'a>>> {
        if d == 1 {
            return Ok(vec![Character::new(ctx, 1, 0)?]);
        }
        (1..d)
            .filter(|m| m.gcd(&d) == 1)
            .map(|m| Character::new(ctx, d, m))
            .collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.d == 1
    }

    /// Exponent j with χ(x) = e^{2πi j / d}, for x nonzero.
    #[inline]
    pub fn exponent(&self, x: FieldElement) -> Result<u64> {
        Ok(self.twist * self.ctx.discrete_log(x)? % self.d)
    }

    pub fn value(&self, x: FieldElement) -> Complex64 {
        if x.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        self.roots[self.exponent(x).unwrap() as usize]
    }

    fn e_p(&self, residue: u64) -> Complex64 {
        Complex64::from_polar(1.0, TAU * residue as f64 / self.ctx.p as f64)
    }

    /// Additive character e_p(Tr(x)).
    pub fn additive(&self, x: FieldElement) -> Complex64 {
        self.e_p(self.ctx.trace(x))
    }

    /// G(χ) = Σ_c χ(c) e_p(Tr(c)).
    pub fn gauss_sum(&self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.ctx.nonzero_elements() {
            acc += self.value(c) * self.additive(c);
        }
        acc
    }
}

#[derive(Clone, Copy, Debug)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub abs_error: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct BoundCheck {
    pub sum_abs: f64,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct CountingCheck {
    pub n: u64,
    pub deviation: f64,
    pub bound: f64,
    pub holds: bool,
}

/// |χ̄(a) - G(χ)^{-1} Σ_c χ(c) e_p(Tr(ac))| for a non-trivial χ.
pub fn char_inversion_error(chi: &Character, a: FieldElement) -> f64 {
    let g = chi.gauss_sum();
    let mut sum = Complex64::new(0.0, 0.0);
    for c in chi.ctx.nonzero_elements() {
        sum += chi.value(c) * chi.additive(chi.ctx.mul(a, c));
    }
    let lhs = chi.value(a).conj();
    (lhs - sum / g).norm()
}

/// Σ_{c≠0} |Σ_{a∈A} χ(a) e_p(Tr(ac))|² against q|A| − |Σ_{a∈A} χ(a)|².
pub fn twist_identity(chi: &Character, a_set: &[FieldElement]) -> Result<IdentityCheck> {
    check_nonzero_set(a_set)?;
    let ctx = chi.ctx;
    let mut lhs = 0.0;
    for c in ctx.nonzero_elements() {
        let mut inner = Complex64::new(0.0, 0.0);
        for &a in a_set {
            inner += chi.value(a) * chi.additive(ctx.mul(a, c));
        }
        lhs += inner.norm_sqr();
    }
    let mut plain = Complex64::new(0.0, 0.0);
    for &a in a_set {
        plain += chi.value(a);
    }
    let rhs = ctx.q as f64 * a_set.len() as f64 - plain.norm_sqr();
    Ok(IdentityCheck {
        lhs,
        rhs,
        abs_error: (lhs - rhs).abs(),
    })
}

/// |Σ_{a,b} χ(ab+λ)| ≤ √(q|A||B|)·(1 − max(|A|,|B|)/q)^{1/2}.
pub fn symmetric_bound(
    chi: &Character,
    a_set: &[FieldElement],
    b_set: &[FieldElement],
    lambda: FieldElement,
) -> Result<BoundCheck> {
    if lambda.is_zero() {
        return Err(DtError::ZeroShift);
    }
    check_nonzero_set(a_set)?;
    check_nonzero_set(b_set)?;
    let ctx = chi.ctx;
    let mut sum = Complex64::new(0.0, 0.0);
    for &a in a_set {
        for &b in b_set {
            sum += chi.value(ctx.add(ctx.mul(a, b), lambda));
        }
    }
    let q = ctx.q as f64;
    let (na, nb) = (a_set.len() as f64, b_set.len() as f64);
    let bound = (q * na * nb).sqrt() * (1.0 - na.max(nb) / q).sqrt();
    let sum_abs = sum.norm();
    Ok(BoundCheck {
        sum_abs,
        bound,
        holds: sum_abs <= bound + crate::TOL_EXACT_IDENTITY,
    })
}

/// Counts x with χ(x + a_i) = ζ_d^{e_i} for all i and checks the Weil-type
/// bound |N − q/d^k| ≤ (k−1−k/d+1/d^k)√q + k/d. Targets are given as root
/// exponents so the comparison is exact.
pub fn counting_solutions(
    chi: &Character,
    shifts: &[FieldElement],
    target_exponents: &[u64],
) -> Result<CountingCheck> {
    if shifts.len() != target_exponents.len() {
        return Err(DtError::BadSet("shifts and targets differ in length".into()));
    }
    for (i, a) in shifts.iter().enumerate() {
        if shifts[i + 1..].contains(a) {
            return Err(DtError::BadSet(format!("repeated shift {}", a.idx())));
        }
    }
    let ctx = chi.ctx;
    let k = shifts.len();
    let mut n = 0u64;
    'outer: for x in ctx.elements() {
        for (i, &a) in shifts.iter().enumerate() {
            let y = ctx.add(x, a);
            if y.is_zero() || chi.exponent(y)? != target_exponents[i] % chi.d {
                continue 'outer;
            }
        }
        n += 1;
    }
    let q = ctx.q as f64;
    let d = chi.d as f64;
    let kf = k as f64;
    let expected = q / d.powi(k as i32);
    let deviation = (n as f64 - expected).abs();
    let bound = (kf - 1.0 - kf / d + d.powi(-(k as i32))) * q.sqrt() + kf / d;
    Ok(CountingCheck {
        n,
        deviation,
        bound,
        holds: deviation <= bound + crate::TOL_MAGNITUDE_REL,
    })
}

/// |Σ_x χ(a·g(x))| ≤ (n−1)√q for monic g that is not a d-th power of a
/// polynomial; n = distinct roots of g in its splitting field, read off the
/// complete factorization (irreducible factors over F_q are separable).
pub fn weil_bound(chi: &Character, g: &PolyFq, a: FieldElement) -> Result<BoundCheck> {
    if a.is_zero() {
        return Err(DtError::ZeroArgument);
    }
    let deg = g
        .degree()
        .filter(|&d| d >= 1)
        .ok_or_else(|| DtError::Domain("g must have positive degree".into()))?;
    if !g.is_monic() {
        return Err(DtError::Domain("g must be monic".into()));
    }
    let _ = deg;
    let factors = g.factor(chi.ctx)?;
    if factors.iter().all(|(_, m)| *m as u64 % chi.d == 0) {
        return Err(DtError::PerfectPower { d: chi.d });
    }
    let n_roots: usize = factors.iter().map(|(f, _)| f.degree().unwrap()).sum();

    let ctx = chi.ctx;
    let mut sum = Complex64::new(0.0, 0.0);
    for x in ctx.elements() {
        sum += chi.value(ctx.mul(a, g.eval(ctx, x)));
    }
    let bound = (n_roots as f64 - 1.0) * (ctx.q as f64).sqrt();
    let sum_abs = sum.norm();
    Ok(BoundCheck {
        sum_abs,
        bound,
        holds: sum_abs <= bound + crate::TOL_EXACT_IDENTITY,
    })
}

fn check_nonzero_set(set: &[FieldElement]) -> Result<()> {
    if set.iter().any(|x| x.is_zero()) {
        return Err(DtError::BadSet("set contains 0".into()));
    }
    for (i, a) in set.iter().enumerate() {
        if set[i + 1..].contains(a) {
            return Err(DtError::BadSet(format!("repeated element {}", a.idx())));
        }
    }
    Ok(())
}
