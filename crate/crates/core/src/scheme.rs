//! Exact parameter calculators for the projective-geometry coded caching
//! scheme, its D2D adaptation, closed-form baselines for numerical
//! comparison, and the asymptotic bound report.
//!
//! Every quantity is computed with arbitrary-precision integers and exact
//! rationals; floating point appears only in display helpers and in the
//! log-domain bound checks where the quantities compared are irrational.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::gf::is_prime_power;
use crate::projective::{gaussian_binomial, theta};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParamError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}

/// Scheme parameters (q, k, m, t) with the feasibility constraints
/// q a prime power, m >= 1, t >= 1, m + t + 2 <= k.
pub fn validate_params(q: u64, k: u32, m: u32, t: u32) -> Result<(), ParamError> {
    if !is_prime_power(q) {
        return Err(ParamError::InvalidParameters(format!(
            "q = {q} is not a prime power"
        )));
    }
    if m < 1 || t < 1 {
        return Err(ParamError::InvalidParameters(format!(
            "m and t must be positive, got m = {m}, t = {t}"
        )));
    }
    if m + t + 2 > k {
        return Err(ParamError::InvalidParameters(format!(
            "need m + t + 2 <= k, got {} > {k}",
            m + t + 2
        )));
    }
    Ok(())
}

/// Exact parameter bundle for the broadcast scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeParams {
    pub q: u64,
    pub k: u32,
    pub m: u32,
    pub t: u32,
    /// K: number of users.
    pub users: BigUint,
    /// F: subpacketization.
    pub subpacketization: BigUint,
    /// D: subfiles of each file a user does not cache.
    pub user_clique: BigUint,
    /// c: users missing each subfile.
    pub subfile_clique: BigUint,
    /// Z = F - D: stars per PDA column.
    pub stars_per_column: BigUint,
    /// S = KD/d: number of coded transmissions.
    pub transmissions: BigUint,
    /// M/N.
    pub cache_fraction: BigRational,
    /// R = c/d.
    pub rate: BigRational,
    /// Global caching gain, equal to the transmission clique size d.
    pub gain: u64,
}

fn factorial(n: u64) -> BigUint {
    (1..=n).map(BigUint::from).fold(BigUint::one(), |a, b| a * b)
}

fn exact_div(num: BigUint, den: &BigUint) -> BigUint {
    debug_assert!((&num % den).is_zero());
    num / den
}

/// Evaluates the closed forms for (K, F, D, c, Z, S, M/N, R, gain).
pub fn scheme_params(q: u64, k: u32, m: u32, t: u32) -> Result<SchemeParams, ParamError> {
    validate_params(q, k, m, t)?;
    let big_q = BigUint::from(q);

    // K = (q/2) [k-t+1 choose 1]_q [k-t choose 1]_q
    let users = exact_div(
        &big_q * theta(k - t + 1, q) * theta(k - t, q),
        &BigUint::from(2u32),
    );

    // F = [k-t+1 choose m+1]_q * prod_{i=0}^{m} (q^{m+1} - q^i) / ((m+1)! (q-1)^{m+1})
    let mut ext_prod = BigUint::one();
    for i in 0..=m {
        ext_prod *= big_q.pow(m + 1) - big_q.pow(i);
    }
    let f_den = factorial(m as u64 + 1) * (&big_q - BigUint::one()).pow(m + 1);
    let subpacketization = exact_div(
        gaussian_binomial(k - t + 1, m + 1, q).unwrap() * &ext_prod,
        &f_den,
    );

    // D = |C_X| = q^{(m+1)(m+4)/2} prod_{i=1}^{m+1} [k-t-i choose 1]_q / (m+1)!
    let mut d_num = big_q.pow((m + 1) * (m + 4) / 2);
    for i in 1..=m + 1 {
        d_num *= theta(k - t - i, q);
    }
    let user_clique = exact_div(d_num, &factorial(m as u64 + 1));

    // c = |C_Y| = (q^{2m+3}/2) [k-m-t choose 1]_q [k-m-t-1 choose 1]_q
    let subfile_clique = exact_div(
        big_q.pow(2 * m + 3) * theta(k - m - t, q) * theta(k - m - t - 1, q),
        &BigUint::from(2u32),
    );

    // Double counting of the line-graph vertices.
    assert_eq!(
        &users * &user_clique,
        &subpacketization * &subfile_clique,
        "K*D must equal F*c"
    );

    let gain = (m as u64 + 2) * (m as u64 + 3) / 2;
    let transmissions = exact_div(&users * &user_clique, &BigUint::from(gain));
    let stars_per_column = &subpacketization - &user_clique;

    let cache_fraction = BigRational::new(
        BigInt::from(&users - &subfile_clique),
        BigInt::from(users.clone()),
    );
    let rate = BigRational::new(
        BigInt::from(subfile_clique.clone()),
        BigInt::from(gain),
    );

    // gain = K (1 - M/N) / R exactly.
    let one = BigRational::one();
    let k_rat = BigRational::from(BigInt::from(users.clone()));
    assert_eq!(
        &k_rat * (&one - &cache_fraction) / &rate,
        BigRational::from(BigInt::from(gain))
    );

    Ok(SchemeParams {
        q,
        k,
        m,
        t,
        users,
        subpacketization,
        user_clique,
        subfile_clique,
        stars_per_column,
        transmissions,
        cache_fraction,
        rate,
        gain,
    })
}

/// Exact parameter bundle for the D2D adaptation.
#[derive(Debug, Clone, PartialEq)]
pub struct D2dParams {
    pub q: u64,
    pub k: u32,
    pub m: u32,
    pub t: u32,
    pub users: BigUint,
    /// F_D = (g - 1) F.
    pub subpacketization: BigUint,
    pub cache_fraction: BigRational,
    /// R_D = (g/(g-1)) S/F.
    pub rate: BigRational,
    /// Regularity of the underlying PDA.
    pub regularity: u64,
}

pub fn d2d_params(q: u64, k: u32, m: u32, t: u32) -> Result<D2dParams, ParamError> {
    let base = scheme_params(q, k, m, t)?;
    let g = base.gain;
    let subpacketization = &base.subpacketization * BigUint::from(g - 1);

    // F_D = (m+1)(m+4)/2 * F, which equals (g-1)F.
    assert_eq!(
        BigUint::from((m as u64 + 1) * (m as u64 + 4) / 2),
        BigUint::from(g - 1)
    );

    // R_D = g/(g-1) * S/F = c/(g-1).
    let rate = BigRational::new(
        BigInt::from(base.subfile_clique.clone()),
        BigInt::from(g - 1),
    );
    let s_over_f = BigRational::new(
        BigInt::from(base.transmissions.clone()),
        BigInt::from(base.subpacketization.clone()),
    );
    let g_rat = BigRational::from(BigInt::from(g));
    let gm1 = BigRational::from(BigInt::from(g - 1));
    assert_eq!(rate, &g_rat / &gm1 * s_over_f);

    Ok(D2dParams {
        q,
        k,
        m,
        t,
        users: base.users,
        subpacketization,
        cache_fraction: base.cache_fraction,
        rate,
        regularity: g,
    })
}

/// A value that is either exactly known or only known through its magnitude.
#[derive(Debug, Clone, PartialEq)]
pub enum Magnitude {
    Exact(BigUint),
    Log10(f64),
}

impl Magnitude {
    pub fn log10(&self) -> f64 {
        match self {
            Magnitude::Exact(v) => biguint_log2(v) * std::f64::consts::LOG10_2,
            Magnitude::Log10(l) => *l,
        }
    }

    /// Display form matching the comparison-table convention: exact when it
    /// fits, otherwise 10^ceil(log10), "inf" above 10^307.
    pub fn display(&self) -> String {
        match self {
            Magnitude::Exact(v) if v.bits() <= 40 => v.to_string(),
            _ => {
                let l = self.log10();
                if l > 307.0 {
                    "inf".to_string()
                } else {
                    format!("10^{}", l.ceil() as i64)
                }
            }
        }
    }
}

/// log2 of a positive big integer, accurate to roughly f64 precision.
pub fn biguint_log2(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 53 {
        return v.to_f64().unwrap().log2();
    }
    let shifted = v >> (bits - 53);
    shifted.to_f64().unwrap().log2() + (bits - 53) as f64
}

/// Baseline scheme selectors, with the arguments each closed form takes.
#[derive(Debug, Clone, PartialEq)]
pub enum BaselineKind {
    /// PDA scheme with K = q'(m'+1), U = 1 - 1/q', F = q'^m'.
    PartitionPda { q_prime: u64, m_prime: u64 },
    /// The original clique-cover scheme: F = C(K, KM/N).
    MaN { users: u64, cache_num: u64, cache_den: u64 },
    /// Hypercube D2D scheme parametrized by y1 = sqrt(K).
    HypercubeD2d { y1: f64 },
    /// D2D grouping scheme: F = y2 C(K, y2) with y2 = floor(KM/N).
    MaND2d { users: u64, cache_num: u64, cache_den: u64 },
}

/// One comparison-table column for a baseline scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub scheme: String,
    pub users: u64,
    /// U = 1 - M/N.
    pub uncached_fraction: f64,
    pub subpacketization: Magnitude,
    /// Global caching gain (broadcast baselines) or delivery rate (D2D ones).
    pub figure: f64,
}

fn binomial(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut out = BigUint::one();
    for i in 0..r {
        out = out * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    out
}

pub fn baseline_params(kind: &BaselineKind) -> Result<ComparisonRow, ParamError> {
    match kind {
        BaselineKind::PartitionPda { q_prime, m_prime } => {
            if *q_prime < 2 || *m_prime < 1 {
                return Err(ParamError::InvalidParameters(
                    "need q' >= 2 and m' >= 1".into(),
                ));
            }
            let users = q_prime * (m_prime + 1);
            // gain = K U / (q'-1) = m' + 1 exactly.
            Ok(ComparisonRow {
                scheme: "partition-pda".into(),
                users,
                uncached_fraction: 1.0 - 1.0 / *q_prime as f64,
                subpacketization: Magnitude::Exact(
                    BigUint::from(*q_prime).pow(*m_prime as u32),
                ),
                figure: (m_prime + 1) as f64,
            })
        }
        BaselineKind::MaN {
            users,
            cache_num,
            cache_den,
        } => {
            if *cache_den == 0 || cache_num > cache_den {
                return Err(ParamError::InvalidParameters(
                    "cache fraction must lie in [0, 1]".into(),
                ));
            }
            if users * cache_num % cache_den != 0 {
                return Err(ParamError::InvalidParameters(format!(
                    "KM/N = {users}*{cache_num}/{cache_den} is not an integer"
                )));
            }
            let km_n = users * cache_num / cache_den;
            let gain = 1 + km_n;
            Ok(ComparisonRow {
                scheme: "man".into(),
                users: *users,
                uncached_fraction: 1.0 - *cache_num as f64 / *cache_den as f64,
                subpacketization: Magnitude::Exact(binomial(*users, km_n)),
                figure: gain as f64,
            })
        }
        BaselineKind::HypercubeD2d { y1 } => {
            if *y1 <= 1.0 {
                return Err(ParamError::InvalidParameters("need y1 > 1".into()));
            }
            Ok(ComparisonRow {
                scheme: "hypercube-d2d".into(),
                users: (y1 * y1).round() as u64,
                uncached_fraction: 1.0 - 1.0 / y1,
                subpacketization: Magnitude::Log10(y1 * y1.log10()),
                figure: *y1,
            })
        }
        BaselineKind::MaND2d {
            users,
            cache_num,
            cache_den,
        } => {
            if *cache_num == 0 || cache_num > cache_den {
                return Err(ParamError::InvalidParameters(
                    "cache fraction must lie in (0, 1]".into(),
                ));
            }
            let y2 = users * cache_num / cache_den;
            let rate = *cache_den as f64 / *cache_num as f64 - 1.0;
            Ok(ComparisonRow {
                scheme: "man-d2d".into(),
                users: *users,
                uncached_fraction: 1.0 - *cache_num as f64 / *cache_den as f64,
                subpacketization: Magnitude::Exact(BigUint::from(y2) * binomial(*users, y2)),
                figure: rate,
            })
        }
    }
}

/// Bound and asymptotics report for one parameter point.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub q: u64,
    pub k: u32,
    pub m: u32,
    pub t: u32,
    /// alpha = k - m - t >= 2.
    pub alpha: u32,
    pub cache_fraction: BigRational,
    /// 2 / q^(alpha-1).
    pub cache_bound: BigRational,
    pub cache_ok: bool,
    /// (1/2) log_q 2K - 1 <= k - t <= (1/2) log_q 2K, checked exactly as
    /// q^{2(k-t)} <= 2K <= q^{2(k-t+1)}.
    pub eq4_ok: bool,
    /// The squared sandwich on (k-t)^2.
    pub eq5_ok: bool,
    pub log_q_2k: f64,
    pub f_log_q: f64,
    pub envelope_log_q: f64,
    pub envelope_ok: bool,
    /// R (log_q 2K)^2 / K: bounded evidence for R = Theta(K / (log_q K)^2).
    pub rate_ratio: f64,
}

pub fn bound_report(q: u64, k: u32, m: u32, t: u32) -> Result<BoundReport, ParamError> {
    let p = scheme_params(q, k, m, t)?;
    let alpha = k - m - t;
    let cache_bound = BigRational::new(BigInt::from(2), BigInt::from(q).pow(alpha - 1));
    let cache_ok = p.cache_fraction <= cache_bound;

    let two_k = BigUint::from(2u32) * &p.users;
    let big_q = BigUint::from(q);
    let eq4_ok = big_q.pow(2 * (k - t)) <= two_k && two_k <= big_q.pow(2 * (k - t + 1));

    let log_q = (q as f64).ln();
    let l = biguint_log2(&two_k) * std::f64::consts::LN_2 / log_q;
    let kt2 = ((k - t) as f64).powi(2);
    let eps = 1e-9;
    let eq5_ok =
        l * l / 4.0 - l + 1.0 <= kt2 + eps && kt2 <= l * l / 4.0 + eps;

    // F <= q^L q^{L^2/4 - (alpha/2)L - alpha - 1} / floor(L/2 - alpha)!.
    let f_log_q = biguint_log2(&p.subpacketization) * std::f64::consts::LN_2 / log_q;
    let floor_arg = (l / 2.0 - alpha as f64).floor().max(0.0) as u64;
    let fact_log_q = (1..=floor_arg).map(|i| (i as f64).ln() / log_q).sum::<f64>();
    let envelope_log_q =
        l + l * l / 4.0 - alpha as f64 / 2.0 * l - alpha as f64 - 1.0 - fact_log_q;
    let envelope_ok = f_log_q <= envelope_log_q + eps;

    let r = rational_to_f64(&p.rate);
    let k_f = p.users.to_f64().unwrap();
    let rate_ratio = r * l * l / k_f;

    Ok(BoundReport {
        q,
        k,
        m,
        t,
        alpha,
        cache_fraction: p.cache_fraction.clone(),
        cache_bound,
        cache_ok,
        eq4_ok,
        eq5_ok,
        log_q_2k: l,
        f_log_q,
        envelope_log_q,
        envelope_ok,
        rate_ratio,
    })
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    let num = r.numer();
    let den = r.denom();
    if num.bits() <= 53 && den.bits() <= 53 {
        return num.to_f64().unwrap() / den.to_f64().unwrap();
    }
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    let nl = biguint_log2(&num.abs().to_biguint().unwrap());
    let dl = biguint_log2(&den.abs().to_biguint().unwrap());
    sign * (nl - dl).exp2()
}

pub fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl SchemeParams {
    pub fn to_json(&self) -> Value {
        json!({
            "q": self.q, "k": self.k, "m": self.m, "t": self.t,
            "users": self.users.to_string(),
            "subpacketization": self.subpacketization.to_string(),
            "user_clique": self.user_clique.to_string(),
            "subfile_clique": self.subfile_clique.to_string(),
            "stars_per_column": self.stars_per_column.to_string(),
            "transmissions": self.transmissions.to_string(),
            "cache_fraction": rational_string(&self.cache_fraction),
            "cache_fraction_approx": rational_to_f64(&self.cache_fraction),
            "uncached_fraction_approx": 1.0 - rational_to_f64(&self.cache_fraction),
            "rate": rational_string(&self.rate),
            "rate_approx": rational_to_f64(&self.rate),
            "gain": self.gain,
            "subpacketization_log10_ceil":
                Magnitude::Exact(self.subpacketization.clone()).log10().ceil() as i64,
        })
    }
}

impl D2dParams {
    pub fn to_json(&self) -> Value {
        json!({
            "q": self.q, "k": self.k, "m": self.m, "t": self.t,
            "users": self.users.to_string(),
            "subpacketization": self.subpacketization.to_string(),
            "cache_fraction": rational_string(&self.cache_fraction),
            "cache_fraction_approx": rational_to_f64(&self.cache_fraction),
            "rate": rational_string(&self.rate),
            "rate_approx": rational_to_f64(&self.rate),
            "regularity": self.regularity,
        })
    }
}

impl ComparisonRow {
    pub fn to_json(&self) -> Value {
        json!({
            "scheme": self.scheme,
            "users": self.users,
            "uncached_fraction": self.uncached_fraction,
            "subpacketization": self.subpacketization.display(),
            "subpacketization_log10": self.subpacketization.log10(),
            "figure": self.figure,
        })
    }
}

impl BoundReport {
    pub fn all_ok(&self) -> bool {
        self.cache_ok && self.eq4_ok && self.eq5_ok && self.envelope_ok
    }

    pub fn to_json(&self) -> Value {
        json!({
            "q": self.q, "k": self.k, "m": self.m, "t": self.t,
            "alpha": self.alpha,
            "cache_fraction": rational_string(&self.cache_fraction),
            "cache_bound": rational_string(&self.cache_bound),
            "cache_ok": self.cache_ok,
            "eq4_ok": self.eq4_ok,
            "eq5_ok": self.eq5_ok,
            "log_q_2k": self.log_q_2k,
            "f_log_q": self.f_log_q,
            "envelope_log_q": self.envelope_log_q,
            "envelope_ok": self.envelope_ok,
            "rate_ratio": self.rate_ratio,
        })
    }
}

/// A row of the broadcast comparison table: our scheme, the quoted prior
/// line-graph scheme, and the PDA baseline.
#[derive(Debug, Clone)]
pub struct Table1Row {
    pub ours: SchemeParams,
    /// Quoted (not recomputed) parameters of the prior line-graph scheme:
    /// (users, uncached fraction, subpacketization display, gain).
    pub prior_linegraph: (u64, f64, &'static str, f64),
    pub pda_baseline: ComparisonRow,
}

/// A row of the D2D comparison table.
#[derive(Debug, Clone)]
pub struct Table2Row {
    pub ours: SchemeParams,
    pub ours_d2d: D2dParams,
    pub hypercube: ComparisonRow,
    pub man_d2d: ComparisonRow,
}

/// (q, k, m, t) points for the broadcast comparison table, largest first.
pub const TABLE1_POINTS: [(u64, u32, u32, u32); 5] =
    [(2, 7, 1, 1), (2, 7, 3, 1), (3, 4, 1, 1), (2, 5, 1, 1), (2, 4, 1, 1)];

/// PDA-baseline arguments (q', m') chosen to track the rows above.
pub const TABLE1_PDA_ARGS: [(u64, u64); 5] =
    [(14, 571), (3, 2666), (3, 259), (4, 116), (2, 51)];

/// Quoted columns of the prior line-graph scheme for the rows above.
pub const TABLE1_PRIOR: [(u64, f64, &str, f64); 5] = [
    (8191, 0.94, "10^29", 10.0),
    (8191, 0.75, "10^35", 12.0),
    (781, 0.80, "10^10", 5.0),
    (511, 0.75, "10^15", 8.0),
    (127, 0.50, "10^9", 7.0),
];

/// (q, k, m, t) points for the D2D comparison table, largest first.
pub const TABLE2_POINTS: [(u64, u32, u32, u32); 6] = [
    (2, 7, 1, 1),
    (3, 5, 1, 1),
    (2, 6, 1, 1),
    (3, 4, 1, 1),
    (2, 5, 1, 1),
    (2, 4, 1, 1),
];

pub fn table1() -> Vec<Table1Row> {
    TABLE1_POINTS
        .iter()
        .zip(TABLE1_PDA_ARGS.iter())
        .zip(TABLE1_PRIOR.iter())
        .map(|((&(q, k, m, t), &(qp, mp)), &prior)| Table1Row {
            ours: scheme_params(q, k, m, t).unwrap(),
            prior_linegraph: prior,
            pda_baseline: baseline_params(&BaselineKind::PartitionPda {
                q_prime: qp,
                m_prime: mp,
            })
            .unwrap(),
        })
        .collect()
}

pub fn table2() -> Vec<Table2Row> {
    TABLE2_POINTS
        .iter()
        .map(|&(q, k, m, t)| {
            let ours = scheme_params(q, k, m, t).unwrap();
            let ours_d2d = d2d_params(q, k, m, t).unwrap();
            let users = ours.users.to_u64().unwrap();
            let hypercube = baseline_params(&BaselineKind::HypercubeD2d {
                y1: (users as f64).sqrt(),
            })
            .unwrap();
            let mn = &ours.cache_fraction;
            let man_d2d = baseline_params(&BaselineKind::MaND2d {
                users,
                cache_num: mn.numer().to_u64().unwrap(),
                cache_den: mn.denom().to_u64().unwrap(),
            })
            .unwrap();
            Table2Row {
                ours,
                ours_d2d,
                hypercube,
                man_d2d,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn closed_forms_small_instance() {
        let p = scheme_params(2, 4, 1, 1).unwrap();
        assert_eq!(p.users, big(105));
        assert_eq!(p.subpacketization, big(105));
        assert_eq!(p.user_clique, big(48));
        assert_eq!(p.subfile_clique, big(48));
        assert_eq!(p.stars_per_column, big(57));
        assert_eq!(p.transmissions, big(840));
        assert_eq!(p.gain, 6);
        assert_eq!(p.rate, BigRational::new(BigInt::from(8), BigInt::one()));
        assert_eq!(
            p.cache_fraction,
            BigRational::new(BigInt::from(57), BigInt::from(105))
        );
    }

    #[test]
    fn closed_forms_second_instance() {
        let p = scheme_params(2, 5, 1, 1).unwrap();
        assert_eq!(p.users, big(465));
        assert_eq!(p.subpacketization, big(465));
        assert_eq!(p.subfile_clique, big(336));
        assert_eq!(p.gain, 6);
        assert_eq!(p.transmissions, big(26040));
    }

    #[test]
    fn invalid_parameters() {
        assert!(scheme_params(6, 5, 1, 1).is_err());
        assert!(scheme_params(2, 4, 1, 2).is_err());
        assert!(scheme_params(2, 4, 0, 1).is_err());
    }

    #[test]
    fn d2d_values() {
        let p = d2d_params(2, 4, 1, 1).unwrap();
        assert_eq!(p.users, big(105));
        assert_eq!(p.subpacketization, big(525));
        assert_eq!(p.rate, BigRational::new(BigInt::from(48), BigInt::from(5)));
        assert_eq!(rational_to_f64(&p.rate), 9.6);

        let p = d2d_params(2, 5, 1, 1).unwrap();
        assert_eq!(p.subpacketization, big(2325));
        assert_eq!(
            p.rate,
            BigRational::new(BigInt::from(336), BigInt::from(5))
        );
    }

    #[test]
    fn baseline_man() {
        let row = baseline_params(&BaselineKind::MaN {
            users: 4,
            cache_num: 1,
            cache_den: 2,
        })
        .unwrap();
        assert_eq!(row.subpacketization, Magnitude::Exact(big(6)));
        assert_eq!(row.figure, 3.0); // gain 1 + KM/N
        assert!(baseline_params(&BaselineKind::MaN {
            users: 4,
            cache_num: 1,
            cache_den: 3,
        })
        .is_err());
    }

    #[test]
    fn baseline_partition_pda_tracks_last_table_row() {
        let row = baseline_params(&BaselineKind::PartitionPda {
            q_prime: 2,
            m_prime: 51,
        })
        .unwrap();
        assert_eq!(row.users, 104);
        assert_eq!(row.uncached_fraction, 0.5);
        assert_eq!(row.figure, 52.0);
        assert_eq!(row.subpacketization, Magnitude::Exact(big(1) << 51));
    }

    #[test]
    fn bound_report_small() {
        let r = bound_report(2, 4, 1, 1).unwrap();
        assert_eq!(r.alpha, 2);
        assert!(r.cache_ok && r.eq4_ok && r.eq5_ok && r.envelope_ok);
        // M/N = 57/105 <= 2/2 = 1.
        assert_eq!(r.cache_bound, BigRational::from(BigInt::one()));
    }

    #[test]
    fn gain_independent_of_q_k_t() {
        for (q, k, t) in [(2u64, 6u32, 1u32), (3, 7, 2), (4, 8, 1)] {
            for m in 1..=(k - t - 2) {
                let p = scheme_params(q, k, m, t).unwrap();
                assert_eq!(p.gain, (m as u64 + 2) * (m as u64 + 3) / 2);
            }
        }
    }

    #[test]
    fn rate_ratio_band_alpha2_grid() {
        for k in 4..=12u32 {
            let r = bound_report(2, k, k - 3, 1).unwrap();
            assert!(
                r.rate_ratio >= 1.0 && r.rate_ratio <= 8.0,
                "k={k}: ratio {}",
                r.rate_ratio
            );
        }
    }

    #[test]
    fn table_rows_match_published_values() {
        let t1 = table1();
        let k1: Vec<u64> = t1
            .iter()
            .map(|r| r.ours.users.to_u64().unwrap())
            .collect();
        assert_eq!(k1, [8001, 8001, 780, 465, 105]);
        let k3: Vec<u64> = t1.iter().map(|r| r.pda_baseline.users).collect();
        assert_eq!(k3, [8008, 8001, 780, 468, 104]);

        let t2 = table2();
        let kd: Vec<u64> = t2
            .iter()
            .map(|r| r.ours.users.to_u64().unwrap())
            .collect();
        assert_eq!(kd, [8001, 7260, 1953, 780, 465, 105]);
        let fd: Vec<u64> = t2
            .iter()
            .map(|r| r.ours_d2d.subpacketization.to_u64().unwrap())
            .collect();
        assert_eq!(fd, [40005, 36300, 9765, 3900, 2325, 525]);
        let rd: Vec<f64> = t2
            .iter()
            .map(|r| rational_to_f64(&r.ours_d2d.rate))
            .collect();
        assert_eq!(rd, [1488.0, 1263.6, 336.0, 97.2, 67.2, 9.6]);
    }
}
