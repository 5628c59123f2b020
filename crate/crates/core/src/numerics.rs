//! Foundational sequences: harmonic numbers, even-index Bernoulli numbers,
//! even zeta values by two independent routes, and the truncated
//! cotangent expansion.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::accuracy::Accuracy;
use crate::error::{Error, Result};

/// Largest `m` accepted by [`bernoulli_even`], i.e. `B_128`.
pub const MAX_BERNOULLI_HALF_INDEX: u32 = 64;

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        s.extend(iter);
        s
    }
}

/// `H_n = 1 + 1/2 + ... + 1/n`, summed in ascending `k`.
pub fn harmonic(n: u32) -> Result<f64> {
    if n < 1 {
        return Err(Error::domain(format!("n must satisfy n >= 1 (got {n})")));
    }
    Ok((1..=n)
        .map(|k| 1.0 / f64::from(k))
        .collect::<CompensatedSum>()
        .value())
}

fn bernoulli_table() -> &'static [BigRational] {
    static TABLE: OnceLock<Vec<BigRational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let top = 2 * MAX_BERNOULLI_HALF_INDEX as usize;
        // Row k of Pascal's triangle is carried along to get C(k+1, j).
        let mut b: Vec<BigRational> = Vec::with_capacity(top + 1);
        b.push(BigRational::one());
        let mut binom: Vec<BigInt> = vec![BigInt::one(), BigInt::one()];
        for k in 1..=top {
            // binom holds C(k, .); advance to C(k+1, .)
            let mut next = Vec::with_capacity(k + 2);
            next.push(BigInt::one());
            for j in 1..=k {
                next.push(&binom[j - 1] + &binom[j]);
            }
            next.push(BigInt::one());
            binom = next;

            let mut acc = BigRational::zero();
            for (j, bj) in b.iter().enumerate() {
                if !bj.is_zero() {
                    acc += bj * BigRational::from_integer(binom[j].clone());
                }
            }
            let bk = -acc / BigRational::from_integer(BigInt::from(k + 1));
            b.push(bk);
        }
        b
    })
}

/// Exact `B_{2m}` from the convolution recurrence `sum_{j<=k} C(k+1, j) B_j = 0`.
pub fn bernoulli_even(m: u32) -> Result<BigRational> {
    if m > MAX_BERNOULLI_HALF_INDEX {
        return Err(Error::BernoulliRange {
            index: 2 * m,
            max: 2 * MAX_BERNOULLI_HALF_INDEX,
        });
    }
    Ok(bernoulli_table()[2 * m as usize].clone())
}

fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("rational in f64 range")
}

/// Unevaluated sum `hi + lo` carrying about 106 bits.
#[derive(Debug, Clone, Copy)]
struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl DoubleDouble {
    fn mul(self, other: DoubleDouble) -> DoubleDouble {
        let p = self.hi * other.hi;
        let e = self.hi.mul_add(other.hi, -p) + (self.hi * other.lo + self.lo * other.hi);
        let hi = p + e;
        DoubleDouble {
            hi,
            lo: e - (hi - p),
        }
    }

    fn powi(self, mut k: u32) -> DoubleDouble {
        let mut base = self;
        let mut acc = DoubleDouble { hi: 1.0, lo: 0.0 };
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            k >>= 1;
        }
        acc
    }

    /// Nearest double-double to an exact rational.
    fn from_ratio(r: &BigRational) -> DoubleDouble {
        let hi = ratio_to_f64(r);
        let rest = r - BigRational::from_float(hi).expect("finite");
        DoubleDouble {
            hi,
            lo: ratio_to_f64(&rest),
        }
    }
}

/// `2 pi` as a double-double.
const TWO_PI_DD: DoubleDouble = DoubleDouble {
    hi: std::f64::consts::TAU,
    lo: 2.4492935982947064e-16,
};

/// `zeta(2m) = (-1)^(m+1) (2 pi)^(2m) B_(2m) / (2 (2m)!)`.
///
/// The rational factor `|B_2m| / (2 (2m)!)` is formed exactly and the power of
/// `2 pi` in double-double, so the result is within about one ulp.
pub fn zeta_even_bernoulli(m: u32) -> Result<f64> {
    if m < 1 {
        return Err(Error::domain(format!("m must satisfy m >= 1 (got {m})")));
    }
    let b = bernoulli_even(m)?;
    let q = b.abs() / BigRational::from_integer(BigInt::from(2) * factorial(2 * m));
    let z = DoubleDouble::from_ratio(&q).mul(TWO_PI_DD.powi(2 * m));
    Ok(z.hi + z.lo)
}

/// Cached `zeta(2m)` for `m = 1..=64` via the Bernoulli route, and
/// `1 + 2^(-2m) + 3^(-2m)` beyond, where further terms are below one ulp.
pub(crate) fn zeta_even_cached(m: u32) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        (1..=MAX_BERNOULLI_HALF_INDEX)
            .map(|m| zeta_even_bernoulli(m).expect("index within table"))
            .collect()
    });
    match m {
        0 => panic!("zeta(0) is not an even zeta value of this family"),
        m if m <= MAX_BERNOULLI_HALF_INDEX => table[m as usize - 1],
        m => {
            let e = -2 * m as i32;
            1.0 + (2.0f64.powi(e) + 3.0f64.powi(e))
        }
    }
}

/// Largest truncation point [`zeta_even_direct`] is willing to sum to.
const MAX_DIRECT_TERMS: f64 = 1e9;

/// `zeta(2m)` by direct summation to `K` plus the integral tail
/// `K^(1-2m) / (2m-1)`, where `K` is the least integer with
/// `K^(-2m) < series_abs_tol`.
pub fn zeta_even_direct(m: u32, acc: &Accuracy) -> Result<f64> {
    if m < 1 {
        return Err(Error::domain(format!("m must satisfy m >= 1 (got {m})")));
    }
    let s = 2 * m as i32;
    let bound = acc.series_abs_tol.powf(-1.0 / f64::from(s));
    if !(bound < MAX_DIRECT_TERMS) {
        return Err(Error::domain(format!(
            "series tolerance {:e} needs more than {MAX_DIRECT_TERMS:e} terms at m = {m}",
            acc.series_abs_tol
        )));
    }
    let mut k_max = bound.floor() as u64 + 1;
    while (k_max as f64).powi(-s) >= acc.series_abs_tol {
        k_max += 1;
    }
    let kf = k_max as f64;
    let mut sum = CompensatedSum::new();
    sum.add(kf.powi(1 - s) / f64::from(s - 1));
    // smallest terms first
    for k in (1..=k_max).rev() {
        sum.add((k as f64).powi(-s));
    }
    Ok(sum.value())
}

/// Coefficient `(-1)^m 2^(2m) B_(2m) / (2m)!` of the cotangent expansion.
fn cot_coefficient(m: u32) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        (1..=MAX_BERNOULLI_HALF_INDEX)
            .map(|m| {
                let b = bernoulli_even(m).expect("index within table");
                let pow2 = BigInt::one() << (2 * m as usize);
                let mut c = b * BigRational::from_integer(pow2)
                    / BigRational::from_integer(factorial(2 * m));
                if m % 2 == 1 {
                    c = -c;
                }
                ratio_to_f64(&c)
            })
            .collect()
    });
    table[m as usize - 1]
}

/// `pi cot(pi z)` from the Bernoulli expansion truncated after `m = terms`:
/// `1/z + sum_{m=1..M} (-1)^m 2^(2m) B_(2m) pi^(2m) z^(2m-1) / (2m)!`.
///
/// For `|z| <= 1/2` the truncation error is at most twice the first omitted term.
pub fn cot_partial(z: f64, terms: u32) -> Result<f64> {
    if !(z != 0.0 && z.abs() < 1.0) {
        return Err(Error::domain(format!(
            "z must satisfy 0 < |z| < 1 (got {z})"
        )));
    }
    if terms < 1 {
        return Err(Error::domain("number of terms must be >= 1"));
    }
    if terms > MAX_BERNOULLI_HALF_INDEX {
        return Err(Error::BernoulliRange {
            index: 2 * terms,
            max: 2 * MAX_BERNOULLI_HALF_INDEX,
        });
    }
    let mut sum = CompensatedSum::new();
    for m in (1..=terms).rev() {
        let e = 2 * m as i32;
        sum.add(cot_coefficient(m) * PI.powi(e) * z.powi(e - 1));
    }
    sum.add(1.0 / z);
    Ok(sum.value())
}
