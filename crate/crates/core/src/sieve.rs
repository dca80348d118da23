//! Larger-sieve constants: the residue-class optimum η_k (greedy prefix scan
//! with an exact tie guard), its closed-form upper bound μ_k, the table
//! quantities ν_k and m_k, the primorial ladder recurrences, and a numeric
//! Gallagher larger-sieve evaluator.

use crate::error::{DtError, Result};
use num_bigint::BigInt;
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::BTreeMap;

pub const K_CAP: u64 = 2_000_000;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn factorize(mut k: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= k {
        if k % p == 0 {
            let mut a = 0;
            while k % p == 0 {
                k /= p;
                a += 1;
            }
            out.push((p, a));
        }
        p += 1;
    }
    if k > 1 {
        out.push((k, 1));
    }
    out
}

pub fn euler_phi(k: u64) -> u64 {
    factorize(k)
        .into_iter()
        .fold(k, |acc, (p, _)| acc / p * (p - 1))
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, a) in factorize(n) {
        let prev = out.clone();
        let mut pe = 1;
        for _ in 0..a {
            pe *= p;
            out.extend(prev.iter().map(|d| d * pe));
        }
    }
    out.sort();
    out
}

/// T_I² written exactly as Σ coeff·√m over squarefree m (m = 1 carries the
/// rational part). Built from per-gcd counts using the factorization of k.
pub type ExactTSquared = BTreeMap<u64, i128>;

fn t_squared_exact(counts: &BTreeMap<u64, u64>, k_factors: &[(u64, u32)]) -> ExactTSquared {
    // exponent vector of each divisor appearing in counts
    let expo = |mut d: u64| -> Vec<u32> {
        k_factors
            .iter()
            .map(|&(p, _)| {
                let mut e = 0;
                while d % p == 0 {
                    d /= p;
                    e += 1;
                }
                e
            })
            .collect()
    };
    let items: Vec<(u64, Vec<u32>)> = counts
        .iter()
        .map(|(&d, &c)| (c, expo(d)))
        .collect();
    let mut out: ExactTSquared = BTreeMap::new();
    for (i, (c1, e1)) in items.iter().enumerate() {
        for (j, (c2, e2)) in items.iter().enumerate().skip(i) {
            let mut square_part = 1u64;
            let mut free_part = 1u64;
            for (fi, &(p, _)) in k_factors.iter().enumerate() {
                let e = e1[fi] + e2[fi];
                square_part *= p.pow(e / 2);
                if e % 2 == 1 {
                    free_part *= p;
                }
            }
            // diagonal terms appear once, cross terms twice
            let factor: i128 = if i == j { 1 } else { 2 };
            *out.entry(free_part).or_insert(0) +=
                factor * *c1 as i128 * *c2 as i128 * square_part as i128;
        }
    }
    out
}

/// Sign of Σ coeff·√m by interval arithmetic with widening precision; the
/// terms are linearly independent over Q, so a nonzero combination always
/// separates.
fn exact_sign(expr: &ExactTSquared) -> Ordering {
    if expr.values().all(|&v| v == 0) {
        return Ordering::Equal;
    }
    let mut prec_bits = 32u32;
    loop {
        let scale = BigInt::from(1u8) << prec_bits;
        let scale_sq = &scale * &scale;
        let mut lo = BigInt::from(0);
        let mut hi = BigInt::from(0);
        for (&m, &z) in expr {
            if z == 0 {
                continue;
            }
            let root_lo = (BigInt::from(m) * &scale_sq).sqrt();
            let root_hi = &root_lo + 1;
            let zb = BigInt::from(z);
            if z > 0 {
                lo += &zb * &root_lo;
                hi += &zb * &root_hi;
            } else {
                lo += &zb * &root_hi;
                hi += &zb * &root_lo;
            }
        }
        if lo > BigInt::from(0) {
            return Ordering::Greater;
        }
        if hi < BigInt::from(0) {
            return Ordering::Less;
        }
        prec_bits *= 2;
        assert!(prec_bits <= 4096, "sign separation failed (bug)");
    }
}

/// Compares r_a / T_a² with r_b / T_b² exactly (T² > 0 on both sides).
fn compare_xi_exact(
    r_a: u64,
    t_a: &ExactTSquared,
    r_b: u64,
    t_b: &ExactTSquared,
) -> Ordering {
    let mut diff: ExactTSquared = BTreeMap::new();
    for (&m, &z) in t_b {
        *diff.entry(m).or_insert(0) += r_a as i128 * z;
    }
    for (&m, &z) in t_a {
        *diff.entry(m).or_insert(0) -= r_b as i128 * z;
    }
    exact_sign(&diff)
}

#[derive(Clone, Debug, Serialize)]
pub struct EtaExact {
    /// |I*|, the optimal prefix length.
    pub size: u64,
    /// T*² as an exact integer combination keyed by squarefree radicand.
    pub t_squared: BTreeMap<u64, i128>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SieveRecord {
    pub k: u64,
    pub candidate_count: usize,
    pub eta: f64,
    pub eta_exact: EtaExact,
    pub best_prefix_len: usize,
    pub mu: f64,
    pub nu: f64,
    pub phi_k: u64,
}

/// The admissible residue classes are {i : gcd(i,k) = 1, gcd(i−1,k) > 1};
/// sorted by gcd(i−1,k) descending, the length-r prefix maximizes T over all
/// r-subsets, so scanning prefixes attains the true minimum of |I|/T_I².
fn candidate_gcds(k: u64) -> Vec<u64> {
    let mut gcds: Vec<u64> = (1..=k)
        .filter(|&i| gcd(i, k) == 1)
        .map(|i| gcd(i.wrapping_sub(1), k))
        .map(|g| if g == 0 { k } else { g }) // gcd(0, k) = k for i = 1
        .filter(|&g| g > 1)
        .collect();
    gcds.sort_unstable_by(|a, b| b.cmp(a));
    gcds
}

pub fn eta_k(k: u64) -> Result<SieveRecord> {
    if k < 2 {
        return Err(DtError::BadK(k));
    }
    if k > K_CAP {
        return Err(DtError::BadK(k));
    }
    let k_factors = factorize(k);
    let gcds = candidate_gcds(k);
    let candidate_count = gcds.len();

    let mut t_float = 0.0f64;
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    let mut best_xi = f64::INFINITY;
    let mut best_r = 0u64;
    let mut best_counts: BTreeMap<u64, u64> = BTreeMap::new();
    for (i, &g) in gcds.iter().enumerate() {
        let r = (i + 1) as u64;
        t_float += (g as f64).sqrt();
        *counts.entry(g).or_insert(0) += 1;
        let xi = r as f64 / (t_float * t_float);
        if xi < best_xi * (1.0 - 1e-12) {
            best_xi = xi;
            best_r = r;
            best_counts = counts.clone();
        } else if xi <= best_xi * (1.0 + 1e-12) && best_r > 0 {
            // borderline in doubles: settle exactly, keeping the earlier
            // prefix on ties
            let cur = t_squared_exact(&counts, &k_factors);
            let best = t_squared_exact(&best_counts, &k_factors);
            if compare_xi_exact(r, &cur, best_r, &best) == Ordering::Less {
                best_xi = xi;
                best_r = r;
                best_counts = counts.clone();
            }
        }
    }
    if best_r == 0 {
        return Err(DtError::Domain(format!("empty candidate set for k = {k} (bug)")));
    }

    let t_squared = t_squared_exact(&best_counts, &k_factors);
    let phi_k = euler_phi(k);
    let mu = mu_k(k)?;
    let eta = best_xi;
    let nu = nu_from(k, eta, phi_k);
    Ok(SieveRecord {
        k,
        candidate_count,
        eta,
        eta_exact: EtaExact {
            size: best_r,
            t_squared,
        },
        best_prefix_len: best_r as usize,
        mu,
        nu,
        phi_k,
    })
}

/// μ_k = R_k · min β(p^α) over maximal prime powers p^α || k.
pub fn mu_k(k: u64) -> Result<f64> {
    if k < 2 {
        return Err(DtError::BadK(k));
    }
    let mut r_k = 1.0f64;
    let mut beta_min = f64::INFINITY;
    for (p, a) in factorize(k) {
        let pf = p as f64;
        let af = a as f64;
        let top = pf.powf(af) - pf.powf(af - 1.0) - pf.powf((af - 1.0) / 2.0)
            + pf.powf(af - 0.5);
        r_k *= (pf - 1.0) * pf.powf(af - 1.0) / (top * top);
        let bot = -pf.powf((af - 1.0) / 2.0) + pf.powf(af - 1.0) + pf.powf(af - 0.5);
        let beta = top * top / ((pf - 1.0) * bot * bot);
        beta_min = beta_min.min(beta);
    }
    Ok(r_k * beta_min)
}

fn nu_from(k: u64, eta: f64, phi_k: u64) -> f64 {
    let base = 6.0 * eta * phi_k as f64;
    if k % 2 == 0 {
        base.min(4.0 * eta * phi_k as f64 + 0.6071)
    } else {
        base
    }
}

pub fn nu_k(k: u64) -> Result<f64> {
    let rec = eta_k(k)?;
    Ok(rec.nu)
}

/// ν_k for every k in [2, k_max], parallel, ordered by k.
pub fn nu_table(k_max: u64) -> Result<Vec<(u64, f64)>> {
    use rayon::prelude::*;
    (2..=k_max)
        .into_par_iter()
        .map(|k| nu_k(k).map(|v| (k, v)))
        .collect()
}

/// Change points of the running minimum m_k = min{ν_i : 2 ≤ i ≤ k}.
pub fn m_k_change_points(k_max: u64) -> Result<Vec<(u64, f64)>> {
    let nus = nu_table(k_max)?;
    let mut out = Vec::new();
    let mut m = f64::INFINITY;
    for (k, nu) in nus {
        if nu < m {
            m = nu;
            out.push((k, m));
        }
    }
    Ok(out)
}

/// Brute-force reference: minimum of |I|/T_I² over all nonempty subsets of
/// the candidate set, independent of the sorted-prefix argument. Subsets are
/// walked one by one up to 2^24; past that, subsets sharing the same count
/// per gcd value (identical ξ) are enumerated once through count vectors.
/// Oracle use only (k ≤ 60).
pub fn eta_exhaustive_oracle(k: u64) -> Result<f64> {
    if !(2..=60).contains(&k) {
        return Err(DtError::BadK(k));
    }
    let gcds = candidate_gcds(k);
    let n = gcds.len();
    let mut best = f64::INFINITY;
    if n <= 24 {
        let roots: Vec<f64> = gcds.iter().map(|&g| (g as f64).sqrt()).collect();
        fn rec(i: usize, count: u32, t: f64, roots: &[f64], best: &mut f64) {
            if i == roots.len() {
                if count > 0 {
                    *best = best.min(count as f64 / (t * t));
                }
                return;
            }
            rec(i + 1, count, t, roots, best);
            rec(i + 1, count + 1, t + roots[i], roots, best);
        }
        rec(0, 0, 0.0, &roots, &mut best);
    } else {
        let mut values: Vec<(f64, u64)> = Vec::new();
        for &g in &gcds {
            match values.iter_mut().find(|(root, _)| *root == (g as f64).sqrt()) {
                Some((_, c)) => *c += 1,
                None => values.push(((g as f64).sqrt(), 1)),
            }
        }
        fn rec(i: usize, count: u64, t: f64, values: &[(f64, u64)], best: &mut f64) {
            if i == values.len() {
                if count > 0 {
                    *best = best.min(count as f64 / (t * t));
                }
                return;
            }
            let (root, avail) = values[i];
            for take in 0..=avail {
                rec(i + 1, count + take, t + root * take as f64, values, best);
            }
        }
        rec(0, 0, 0.0, &values, &mut best);
    }
    Ok(best)
}

#[derive(Clone, Debug, Serialize)]
pub struct LadderState {
    pub ell: usize,
    pub prime: u64,
    pub primorial: u64,
    pub i_size: u64,
    pub t_ell: f64,
}

/// |I_{ℓ+1}| = |I_ℓ|(p_{ℓ+1} − 1) and T_{ℓ+1} = T_ℓ(p_{ℓ+1} − 2 + √p_{ℓ+1})
/// with T_1 = √2; also returns the bound product Π (p−1)²/(p−2+√p)² which
/// dominates η_{P_ℓ}·φ(P_ℓ).
pub fn ladder(ell_max: usize) -> Result<(Vec<LadderState>, f64)> {
    if ell_max == 0 || ell_max > 15 {
        return Err(DtError::CapExceeded("ladder supports 1..=15 levels".into()));
    }
    let mut states = Vec::with_capacity(ell_max);
    let mut prime = 2u64;
    let mut primorial = 2u64;
    let mut i_size = 1u64;
    let mut t_ell = 2.0f64.sqrt();
    states.push(LadderState {
        ell: 1,
        prime,
        primorial,
        i_size,
        t_ell,
    });
    let next_prime = |p: u64| {
        let mut c = p + 1;
        while !crate::field::is_prime(c) {
            c += 1;
        }
        c
    };
    for ell in 2..=ell_max {
        prime = next_prime(prime);
        primorial = primorial
            .checked_mul(prime)
            .ok_or_else(|| DtError::CapExceeded("primorial overflow".into()))?;
        i_size *= prime - 1;
        t_ell *= prime as f64 - 2.0 + (prime as f64).sqrt();
        states.push(LadderState {
            ell,
            prime,
            primorial,
            i_size,
            t_ell,
        });
    }
    let bound_product: f64 = states
        .iter()
        .map(|s| {
            let p = s.prime as f64;
            ((p - 1.0) / (p - 2.0 + p.sqrt())).powi(2)
        })
        .product();
    Ok((states, bound_product))
}

/// Direct construction of I_ℓ (usable while P_ℓ ≤ 2·10⁶): returns
/// (|I_ℓ|, T_ℓ) computed from the set itself.
pub fn ladder_direct(ell: usize) -> Result<(u64, f64)> {
    let (states, _) = ladder(ell)?;
    let primorial = states[ell - 1].primorial;
    if primorial > K_CAP {
        return Err(DtError::CapExceeded(format!(
            "P_{ell} = {primorial} above the direct-construction cap"
        )));
    }
    let mut set: Vec<u64> = vec![1];
    let mut p_cur = 2u64;
    let mut primorial_cur = 2u64;
    for state in states.iter().skip(1) {
        let p_next = state.prime;
        let mut next = Vec::with_capacity(set.len() * (p_next as usize - 1));
        for &i in &set {
            for j in 0..p_next {
                let x = i + j * primorial_cur;
                if x % p_next != 0 {
                    next.push(x);
                }
            }
        }
        set = next;
        p_cur = p_next;
        primorial_cur *= p_next;
    }
    let _ = p_cur;
    let t: f64 = set
        .iter()
        .map(|&y| (gcd(y - 1, primorial) as f64).sqrt())
        .sum();
    Ok((set.len() as u64, t))
}

#[derive(Clone, Debug, Serialize)]
pub struct GallagherBound {
    pub bound: f64,
    pub valid: bool,
    pub numerator: f64,
    pub denominator: f64,
    pub holds: bool,
}

/// |A| ≤ (Σ_{p≤Q} log p − log N) / (Σ_{p≤Q} log p/|A_p| − log N) whenever the
/// denominator is positive; |A_p| is the number of residues A occupies mod p.
pub fn gallagher_bound(a: &[u64], primes: &[u64], q_cut: u64, n_ceiling: u64) -> Result<GallagherBound> {
    if a.is_empty() {
        return Err(DtError::BadSet("empty integer set".into()));
    }
    if a.iter().any(|&x| x == 0 || x > n_ceiling) {
        return Err(DtError::BadSet("set not inside [1, N]".into()));
    }
    if q_cut > n_ceiling {
        return Err(DtError::CapExceeded("Q must be <= N".into()));
    }
    let log_n = (n_ceiling as f64).ln();
    let mut numerator = -log_n;
    let mut denominator = -log_n;
    for &p in primes.iter().filter(|&&p| p <= q_cut) {
        let mut residues: Vec<u64> = a.iter().map(|&x| x % p).collect();
        residues.sort_unstable();
        residues.dedup();
        let ap = residues.len() as f64;
        let lp = (p as f64).ln();
        numerator += lp;
        denominator += lp / ap;
    }
    let valid = denominator > 0.0;
    let bound = if valid { numerator / denominator } else { f64::INFINITY };
    Ok(GallagherBound {
        bound,
        valid,
        numerator,
        denominator,
        holds: !valid || a.len() as f64 <= bound + 1e-9,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub k: u64,
    pub phi_k: u64,
    pub eta_k: f64,
    pub mu_k: f64,
    pub nu_k: f64,
    pub m_k: f64,
    pub three_phi_k: u64,
}

/// Rows k_min..=k_max with the running minimum m_k seeded from k = 2, so the
/// column is well-defined for any window.
pub fn table_rows(k_min: u64, k_max: u64) -> Result<Vec<TableRow>> {
    use rayon::prelude::*;
    if k_min < 2 || k_min > k_max || k_max > K_CAP {
        return Err(DtError::BadK(k_max));
    }
    let records: Vec<SieveRecord> = (2..=k_max)
        .into_par_iter()
        .map(eta_k)
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    let mut m = f64::INFINITY;
    for rec in records {
        m = m.min(rec.nu);
        if rec.k >= k_min {
            rows.push(TableRow {
                k: rec.k,
                phi_k: rec.phi_k,
                eta_k: rec.eta,
                mu_k: rec.mu,
                nu_k: rec.nu,
                m_k: m,
                three_phi_k: 3 * rec.phi_k,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_helpers() {
        assert_eq!(gcd(0, 12), 12);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(factorize(720), vec![(2, 4), (3, 2), (5, 1)]);
    }

    #[test]
    fn eta_prime_is_one_over_p() {
        for p in [2u64, 3, 5, 97, 101] {
            let rec = eta_k(p).unwrap();
            assert_eq!(rec.candidate_count, 1);
            assert!((rec.eta - 1.0 / p as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn eta_4_closed_form() {
        let rec = eta_k(4).unwrap();
        let expected = 2.0 / (2.0 + 2f64.sqrt()).powi(2);
        assert!((rec.eta - expected).abs() < 1e-15);
        assert_eq!(rec.best_prefix_len, 2);
        assert_eq!(rec.candidate_count, 2);
        // exact form: T² = (2 + √2)² = 6 + 4√2
        assert_eq!(rec.eta_exact.t_squared.get(&1), Some(&6));
        assert_eq!(rec.eta_exact.t_squared.get(&2), Some(&4));
    }

    #[test]
    fn eta_upper_bounds() {
        for k in 2..=400u64 {
            let rec = eta_k(k).unwrap();
            assert!(rec.eta <= 1.0 / k as f64 + 1e-12, "eta_{k} > 1/k");
            assert!(rec.eta <= rec.mu + 1e-12, "eta_{k} > mu_{k}");
        }
    }

    #[test]
    fn eta_rejects_out_of_range() {
        assert!(eta_k(1).is_err());
        assert!(eta_k(K_CAP + 1).is_err());
    }

    #[test]
    fn exhaustive_oracle_agrees() {
        for k in 2..=60u64 {
            let greedy = eta_k(k).unwrap().eta;
            let brute = eta_exhaustive_oracle(k).unwrap();
            assert!(
                (greedy - brute).abs() <= 1e-12 * brute.max(1.0),
                "k={k}: greedy={greedy} brute={brute}"
            );
        }
    }

    #[test]
    fn prefix_optimality_per_cardinality() {
        // For sorted-descending data the prefix sum of square roots is the
        // maximum over subsets of each size.
        let gcds = candidate_gcds(60);
        for r in 1..=gcds.len() {
            let prefix: f64 = gcds[..r].iter().map(|&g| (g as f64).sqrt()).sum();
            let mut alt: Vec<f64> = gcds.iter().map(|&g| (g as f64).sqrt()).collect();
            alt.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let max_r: f64 = alt[..r].iter().sum();
            assert!((prefix - max_r).abs() < 1e-12);
        }
    }

    #[test]
    fn mu_closed_forms() {
        // μ_p = 1/p algebraically.
        for p in (2u64..10_000).filter(|&p| crate::field::is_prime(p)) {
            assert!((mu_k(p).unwrap() * p as f64 - 1.0).abs() < 1e-12, "p={p}");
        }
        // β(2²) = 1 makes μ_4 = R_4 = η_4.
        let mu4 = mu_k(4).unwrap();
        assert!((mu4 - 2.0 / (2.0 + 2f64.sqrt()).powi(2)).abs() < 1e-12);
    }

    #[test]
    fn nu_values_match_table() {
        // ν_2 = 2.6071, ν_3 = 4.0, ν_12 = 1.1033 (4 decimals).
        let n2 = nu_k(2).unwrap();
        assert!((n2 - 2.6071).abs() < 1.0001e-4);
        let n3 = nu_k(3).unwrap();
        assert!((n3 - 4.0).abs() < 1e-9);
        let n12 = nu_k(12).unwrap();
        assert!((n12 - 1.1033).abs() < 1.0001e-4);
        let n1001 = nu_k(1001).unwrap();
        assert!((n1001 - 1.2540).abs() < 1.0001e-4);
    }

    #[test]
    fn m_k_change_points_prefix() {
        let pts = m_k_change_points(60).unwrap();
        let ks: Vec<u64> = pts.iter().map(|&(k, _)| k).collect();
        assert_eq!(ks, vec![2, 4, 6, 12, 24, 36, 48, 60]);
    }

    fn bound_product_upto(ell: usize) -> f64 {
        let (states, _) = ladder(ell).unwrap();
        states
            .iter()
            .map(|s| {
                let p = s.prime as f64;
                ((p - 1.0) / (p - 2.0 + p.sqrt())).powi(2)
            })
            .product()
    }

    #[test]
    fn ladder_recurrence_and_direct() {
        let (states, bound) = ladder(5).unwrap();
        assert!((states[0].t_ell - 2f64.sqrt()).abs() < 1e-15);
        // T_2 = √2(1 + √3)
        let t2 = 2f64.sqrt() * (1.0 + 3f64.sqrt());
        assert!((states[1].t_ell - t2).abs() < 1e-12);
        assert_eq!(states[2].i_size, 8, "|I_3| = 1·2·4");
        assert_eq!(states[2].primorial, 30);
        for ell in 1..=5usize {
            let (n_direct, t_direct) = ladder_direct(ell).unwrap();
            assert_eq!(n_direct, states[ell - 1].i_size);
            let rel = (t_direct - states[ell - 1].t_ell).abs() / states[ell - 1].t_ell;
            assert!(rel < 1e-9, "ell={ell}");
        }
        // |I_ℓ|·φ(P_ℓ)/T_ℓ² equals the bound product identically, and
        // η_{P_ℓ}·φ(P_ℓ) sits below it.
        for s in &states {
            let lhs = s.i_size as f64 * euler_phi(s.primorial) as f64 / (s.t_ell * s.t_ell);
            assert!((lhs - bound_product_upto(s.ell)).abs() <= 1e-12 * lhs);
        }
        let p5 = states[4].primorial;
        let eta = eta_k(p5).unwrap().eta;
        assert!(eta * euler_phi(p5) as f64 <= bound + 1e-12);
    }

    #[test]
    fn gallagher_singleton() {
        let primes: Vec<u64> = (2..=100).filter(|&x| crate::field::is_prime(x)).collect();
        let g = gallagher_bound(&[1], &primes, 100, 100).unwrap();
        assert!(g.valid);
        assert!(g.bound >= 1.0 - 1e-12);
        assert!(g.holds);
    }

    #[test]
    fn gallagher_squares() {
        let squares: Vec<u64> = (1u64..=100).map(|x| x * x).collect();
        // Primes ≡ 1 (mod 4) alone leave the denominator negative here;
        // the invalid case must come back flagged, not asserted.
        let primes_1mod4: Vec<u64> = (2..=1000)
            .filter(|&x| crate::field::is_prime(x) && x % 4 == 1)
            .collect();
        let g = gallagher_bound(&squares, &primes_1mod4, 1000, 10_000).unwrap();
        assert!(!g.valid && g.holds && g.bound.is_infinite());
        // With all primes the bound is finite and dominates |A|.
        let primes: Vec<u64> = (2..=1000).filter(|&x| crate::field::is_prime(x)).collect();
        let g = gallagher_bound(&squares, &primes, 1000, 10_000).unwrap();
        assert!(g.valid && g.holds);
        assert!(g.bound >= squares.len() as f64);
    }

    #[test]
    fn gallagher_input_checks() {
        assert!(gallagher_bound(&[], &[2, 3], 10, 100).is_err());
        assert!(gallagher_bound(&[5], &[2, 3], 200, 100).is_err());
        assert!(gallagher_bound(&[0], &[2, 3], 10, 100).is_err());
    }

    #[test]
    fn table_rows_shape() {
        let rows = table_rows(2, 30).unwrap();
        assert_eq!(rows.len(), 29);
        assert_eq!(rows[0].k, 2);
        assert_eq!(rows[0].three_phi_k, 3);
        // m_k is non-increasing.
        for w in rows.windows(2) {
            assert!(w[1].m_k <= w[0].m_k + 1e-15);
        }
        // window start respects the global running minimum
        let windowed = table_rows(25, 30).unwrap();
        let full = &rows[23..];
        for (a, b) in windowed.iter().zip(full) {
            assert_eq!(a.k, b.k);
            assert!((a.m_k - b.m_k).abs() < 1e-15);
        }
    }
}
