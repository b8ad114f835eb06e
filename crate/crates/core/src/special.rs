//! Bose functions (real polylogarithms) `g_n(z) = Σ_{k≥1} z^k / k^n` on `z ∈ [0, 1]`.
//!
//! Two evaluation routes are used:
//!
//! * `z ≤ 1/2`: the defining power series, which converges at least as fast
//!   as `2^{-k}`.
//! * `z > 1/2`: the expansion about `z = 1` in powers of `x = -ln z`,
//!
//!   ```text
//!   g_s(e^{-x}) = Γ(1-s) x^{s-1} + Σ_{k≥0} ζ(s-k) (-x)^k / k!          (s ∉ ℕ)
//!   g_n(e^{-x}) = (-x)^{n-1}/(n-1)! [H_{n-1} - ln x]
//!                 + Σ_{k≠n-1} ζ(n-k) (-x)^k / k!                       (n ∈ ℕ)
//!   ```
//!
//!   which converges for `x < 2π`; for `x ≤ ln 2` thirty terms reach full
//!   double precision.
//!
//! The thermal-cloud integrands need `g_{3/2}` and `g_{5/2}` at a fugacity
//! given as an exponent, so [`bose_32_52`] takes `x` directly and skips the
//! `exp`/`ln` round trip.

use std::f64::consts::{LN_2, PI};
use std::sync::OnceLock;

use thiserror::Error;

/// ζ(3/2) = g_{3/2}(1).
pub const ZETA_3_2: f64 = 2.612_375_348_685_488;
/// ζ(5/2) = g_{5/2}(1).
pub const ZETA_5_2: f64 = 1.341_487_257_250_917;
/// ζ(3) = g_3(1).
pub const ZETA_3: f64 = 1.202_056_903_159_594_3;
/// ζ(4) = g_4(1) = π⁴/90.
pub const ZETA_4: f64 = 1.082_323_233_711_138_2;

const SERIES_TERMS: usize = 64;
const EXPANSION_TERMS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum PolylogError {
    #[error("unsupported Bose function order {0}")]
    UnsupportedOrder(f64),
    #[error("g_{order}(z) is undefined at z = {z}")]
    OutOfDomain { order: f64, z: f64 },
}

/// Orders of the Bose function supported by this module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoseOrder {
    Half,
    One,
    ThreeHalves,
    FiveHalves,
    Three,
    Four,
}

impl BoseOrder {
    pub const ALL: [BoseOrder; 6] = [
        BoseOrder::Half,
        BoseOrder::One,
        BoseOrder::ThreeHalves,
        BoseOrder::FiveHalves,
        BoseOrder::Three,
        BoseOrder::Four,
    ];

    pub fn value(self) -> f64 {
        match self {
            BoseOrder::Half => 0.5,
            BoseOrder::One => 1.0,
            BoseOrder::ThreeHalves => 1.5,
            BoseOrder::FiveHalves => 2.5,
            BoseOrder::Three => 3.0,
            BoseOrder::Four => 4.0,
        }
    }

    pub fn from_value(order: f64) -> Option<Self> {
        Self::ALL.into_iter().find(|o| o.value() == order)
    }

    fn index(self) -> usize {
        self as usize
    }

    /// Integer orders carry a logarithm in the expansion about `z = 1`.
    fn integer(self) -> Option<u32> {
        match self {
            BoseOrder::One => Some(1),
            BoseOrder::Three => Some(3),
            BoseOrder::Four => Some(4),
            _ => None,
        }
    }

    /// `g_n(z)` for `z ∈ [0, 1]`.
    pub fn eval(self, z: f64) -> Result<f64, PolylogError> {
        let order = self.value();
        if !(0.0..=1.0).contains(&z) || (z == 1.0 && order <= 1.0) {
            return Err(PolylogError::OutOfDomain { order, z });
        }
        if z == 0.0 {
            return Ok(0.0);
        }
        if z <= 0.5 {
            return Ok(self.series(z));
        }
        Ok(self.expansion(-z.ln()))
    }

    /// `g_n(e^{-x})` for `x ≥ 0`. Returns `+∞` at `x = 0` for orders ≤ 1.
    pub fn eval_exp(self, x: f64) -> f64 {
        debug_assert!(x >= 0.0);
        if x < LN_2 {
            if x == 0.0 && self.value() <= 1.0 {
                return f64::INFINITY;
            }
            self.expansion(x)
        } else {
            self.series((-x).exp())
        }
    }

    fn series(self, z: f64) -> f64 {
        if self == BoseOrder::One {
            return -(-z).ln_1p();
        }
        let weights = &tables().series[self.index()];
        let mut sum = 0.0;
        let mut power = z;
        for &w in weights {
            let term = power * w;
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
            power *= z;
        }
        sum
    }

    fn expansion(self, x: f64) -> f64 {
        if self == BoseOrder::One {
            return -(-(-x).exp_m1()).ln();
        }
        let coeffs = &tables().expansion[self.index()];
        let regular = coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
        let singular = match self.integer() {
            Some(n) => {
                if x == 0.0 {
                    0.0
                } else {
                    let k = (n - 1) as i32;
                    let harmonic: f64 = (1..n).map(|j| 1.0 / j as f64).sum();
                    (-x).powi(k) / factorial(n - 1) * (harmonic - x.ln())
                }
            }
            None => {
                let s = self.value();
                gamma_half_integer(1.0 - s) * x.powf(s - 1.0)
            }
        };
        singular + regular
    }
}

/// `g_n(z) = Σ_{k≥1} z^k / k^n` for `n ∈ {1/2, 1, 3/2, 5/2, 3, 4}` and `z ∈ [0, 1]`.
pub fn polylog(order: f64, z: f64) -> Result<f64, PolylogError> {
    BoseOrder::from_value(order).ok_or(PolylogError::UnsupportedOrder(order))?.eval(z)
}

/// `(g_{3/2}(e^{-x}), g_{5/2}(e^{-x}))` for `x ≥ 0`.
#[inline]
pub fn bose_32_52(x: f64) -> (f64, f64) {
    let t = tables();
    if x < LN_2 {
        let c32 = &t.expansion[BoseOrder::ThreeHalves.index()];
        let c52 = &t.expansion[BoseOrder::FiveHalves.index()];
        let mut r32 = 0.0;
        let mut r52 = 0.0;
        for k in (0..EXPANSION_TERMS).rev() {
            r32 = r32 * x + c32[k];
            r52 = r52 * x + c52[k];
        }
        let sqrt_pi = PI.sqrt();
        let root = x.sqrt();
        // Γ(-1/2) = -2√π, Γ(-3/2) = 4√π/3
        let g32 = r32 - 2.0 * sqrt_pi * root;
        let g52 = r52 + 4.0 / 3.0 * sqrt_pi * root * x;
        (g32, g52)
    } else {
        let z = (-x).exp();
        let w32 = &t.series[BoseOrder::ThreeHalves.index()];
        let w52 = &t.series[BoseOrder::FiveHalves.index()];
        let mut g32 = 0.0;
        let mut g52 = 0.0;
        let mut power = z;
        for k in 0..SERIES_TERMS {
            let t32 = power * w32[k];
            g32 += t32;
            g52 += power * w52[k];
            if t32 < 1e-17 * g32 {
                break;
            }
            power *= z;
        }
        (g32, g52)
    }
}

/// Riemann zeta function for real `s ≠ 1`.
///
/// Euler–Maclaurin summation for `s > 0`, reflection formula for `s < 0`.
/// Only half-integer and integer arguments are supported for `s < 0`, which
/// is all the Bose-function expansions need.
pub fn zeta(s: f64) -> f64 {
    if s == 1.0 {
        return f64::INFINITY;
    }
    if s == 0.0 {
        return -0.5;
    }
    if s < 0.0 {
        if s.fract() == 0.0 && (s as i64) % 2 == 0 {
            return 0.0;
        }
        let reflected = 1.0 - s;
        return 2f64.powf(s)
            * PI.powf(s - 1.0)
            * (0.5 * PI * s).sin()
            * gamma_half_integer(reflected)
            * zeta(reflected);
    }
    euler_maclaurin_zeta(s)
}

fn euler_maclaurin_zeta(s: f64) -> f64 {
    // B_2 .. B_20
    const BERNOULLI: [f64; 10] = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
        -3617.0 / 510.0,
        43867.0 / 798.0,
        -174611.0 / 330.0,
    ];
    const CUT: usize = 20;
    let n = CUT as f64;
    let mut sum: f64 = (1..CUT).map(|k| (k as f64).powf(-s)).sum();
    sum += n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    // rising = s (s+1) ... (s+2j-2), fact = (2j)!
    let mut rising = s;
    let mut fact = 2.0;
    let mut power = n.powf(-s - 1.0);
    for (j, b) in BERNOULLI.iter().enumerate() {
        if j > 0 {
            let m = (2 * j) as f64;
            rising *= (s + m - 1.0) * (s + m);
            fact *= (m + 1.0) * (m + 2.0);
            power /= n * n;
        }
        sum += b / fact * rising * power;
    }
    sum
}

/// Γ(x) for `x` an integer or half-integer, excluding the poles.
fn gamma_half_integer(x: f64) -> f64 {
    debug_assert!((2.0 * x).fract() == 0.0);
    let half = x.fract() != 0.0;
    let (mut value, mut at) = if half { (PI.sqrt(), 0.5) } else { (1.0, 1.0) };
    while at < x {
        value *= at;
        at += 1.0;
    }
    while at > x {
        at -= 1.0;
        value /= at;
    }
    value
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

struct Tables {
    series: [[f64; SERIES_TERMS]; 6],
    expansion: [[f64; EXPANSION_TERMS]; 6],
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let mut series = [[0.0; SERIES_TERMS]; 6];
        let mut expansion = [[0.0; EXPANSION_TERMS]; 6];
        for order in BoseOrder::ALL {
            let s = order.value();
            for (k, w) in series[order.index()].iter_mut().enumerate() {
                *w = ((k + 1) as f64).powf(-s);
            }
            let log_slot = order.integer().map(|n| (n - 1) as usize);
            let mut fact = 1.0;
            for (k, c) in expansion[order.index()].iter_mut().enumerate() {
                if k > 0 {
                    fact *= k as f64;
                }
                if Some(k) == log_slot {
                    continue;
                }
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                *c = sign * zeta(s - k as f64) / fact;
            }
        }
        Tables { series, expansion }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Direct summation with an Euler–Maclaurin tail, independent of both
    /// evaluation routes above.
    fn brute_polylog(s: f64, z: f64) -> f64 {
        let terms = 200_000usize;
        let mut sum = 0.0;
        for k in (1..=terms).rev() {
            sum += z.powi(k as i32) / (k as f64).powf(s);
        }
        if z == 1.0 {
            let n = terms as f64;
            // Σ_{k>n} k^{-s} ≈ n^{1-s}/(s-1) - n^{-s}/2 + s n^{-s-1}/12
            sum += n.powf(1.0 - s) / (s - 1.0) - 0.5 * n.powf(-s) + s / 12.0 * n.powf(-s - 1.0);
        }
        sum
    }

    #[test]
    fn zeta_known_values() {
        assert_relative_eq!(zeta(1.5), ZETA_3_2, max_relative = 1e-14);
        assert_relative_eq!(zeta(2.5), ZETA_5_2, max_relative = 1e-14);
        assert_relative_eq!(zeta(3.0), ZETA_3, max_relative = 1e-14);
        assert_relative_eq!(zeta(4.0), PI.powi(4) / 90.0, max_relative = 1e-14);
        assert_relative_eq!(zeta(2.0), PI * PI / 6.0, max_relative = 1e-14);
        assert_relative_eq!(zeta(0.5), -1.460_354_508_809_586_8, max_relative = 1e-13);
        assert_relative_eq!(zeta(-0.5), -0.207_886_224_977_354_57, max_relative = 1e-13);
        assert_relative_eq!(zeta(-1.5), -0.025_485_201_889_833_036, max_relative = 1e-13);
        assert_relative_eq!(zeta(-3.5), 0.004_441_011_335_479_432, max_relative = 1e-12);
        assert_relative_eq!(zeta(-1.0), -1.0 / 12.0, max_relative = 1e-13);
        assert_eq!(zeta(-2.0), 0.0);
    }

    #[test]
    fn g3_at_one_is_zeta_3() {
        let g3 = polylog(3.0, 1.0).unwrap();
        assert!((g3 - 1.202).abs() < 1e-3);
    }

    #[test]
    fn zero_fugacity_gives_zero() {
        for order in BoseOrder::ALL {
            assert_eq!(order.eval(0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn g1_is_log() {
        assert_relative_eq!(polylog(1.0, 0.5).unwrap(), LN_2, max_relative = 1e-14);
        let direct: f64 = (1..=1_000_000).rev().map(|k| 0.5f64.powi(k) / k as f64).sum();
        assert_relative_eq!(direct, LN_2, max_relative = 1e-14);
    }

    #[test]
    fn zeta_three_halves_from_tail_oracle() {
        let oracle = brute_polylog(1.5, 1.0);
        assert_relative_eq!(oracle, 2.612_38, max_relative = 2e-6);
        assert_relative_eq!(polylog(1.5, 1.0).unwrap(), oracle, max_relative = 1e-11);
    }

    #[test]
    fn matches_direct_summation_on_both_routes() {
        // z ≤ 0.9 keeps the brute series converged to < 1e-15 within 200k terms
        for order in BoseOrder::ALL {
            for z in [0.05, 0.3, 0.5, 0.500_001, 0.7, 0.9, 0.99] {
                let got = order.eval(z).unwrap();
                let want = brute_polylog(order.value(), z);
                assert_relative_eq!(got, want, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn reference_values() {
        // frozen from an arbitrary-precision evaluation
        let cases = [
            (1.5, 0.9, 1.614_438_528_566_339_7),
            (1.5, 0.99, 2.271_660_077_007_999),
            (2.5, 0.99, 1.317_539_425_958_727_7),
            (0.5, 0.99, 16.221_830_753_428_103),
            (3.0, 0.99, 1.185_832_933_645_036_9),
            (4.0, 0.99, 1.070_324_146_165_229),
            (2.5, 1.0, ZETA_5_2),
            (4.0, 1.0, ZETA_4),
        ];
        for (s, z, want) in cases {
            assert_relative_eq!(polylog(s, z).unwrap(), want, max_relative = 1e-12);
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(polylog(1.5, 1.1), Err(PolylogError::OutOfDomain { .. })));
        assert!(matches!(polylog(1.5, -0.1), Err(PolylogError::OutOfDomain { .. })));
        assert!(matches!(polylog(1.0, 1.0), Err(PolylogError::OutOfDomain { .. })));
        assert!(matches!(polylog(0.5, 1.0), Err(PolylogError::OutOfDomain { .. })));
        assert!(matches!(polylog(2.0, 0.5), Err(PolylogError::UnsupportedOrder(_))));
        assert!(polylog(1.5, f64::NAN).is_err());
    }

    #[test]
    fn fast_pair_agrees_with_general_route() {
        for x in [0.0, 1e-12, 1e-6, 0.01, 0.3, 0.69, 0.7, 1.0, 5.0, 40.0] {
            let (g32, g52) = bose_32_52(x);
            assert_relative_eq!(g32, BoseOrder::ThreeHalves.eval_exp(x), max_relative = 1e-14);
            assert_relative_eq!(g52, BoseOrder::FiveHalves.eval_exp(x), max_relative = 1e-14);
            if x > 1e-3 {
                // below this, forming z = e^{-x} loses digits of x itself
                let z = (-x).exp();
                assert_relative_eq!(g32, BoseOrder::ThreeHalves.eval(z).unwrap(), max_relative = 1e-12);
                assert_relative_eq!(g52, BoseOrder::FiveHalves.eval(z).unwrap(), max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn continuous_across_route_switch() {
        for order in BoseOrder::ALL {
            let below = order.eval(0.5).unwrap();
            let above = order.eval(0.5 + 1e-15).unwrap();
            assert_relative_eq!(below, above, max_relative = 1e-13);
        }
    }

    #[test]
    fn small_argument_limit() {
        for order in BoseOrder::ALL {
            let z = 1e-8;
            assert_relative_eq!(order.eval(z).unwrap() / z, 1.0, max_relative = 1e-7);
        }
    }

    #[test]
    fn derivative_identity() {
        // z g_n'(z) = g_{n-1}(z)
        let pairs = [
            (BoseOrder::ThreeHalves, BoseOrder::Half),
            (BoseOrder::FiveHalves, BoseOrder::ThreeHalves),
            (BoseOrder::Four, BoseOrder::Three),
        ];
        for (upper, lower) in pairs {
            for z in [0.1, 0.5, 0.9] {
                let h = 1e-5 * z;
                let d = (upper.eval(z + h).unwrap() - upper.eval(z - h).unwrap()) / (2.0 * h);
                assert_relative_eq!(z * d, lower.eval(z).unwrap(), max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn ordering_of_three_and_five_halves() {
        for i in 1..=100 {
            let z = i as f64 / 100.0;
            let g32 = BoseOrder::ThreeHalves.eval(z).unwrap();
            let g52 = BoseOrder::FiveHalves.eval(z).unwrap();
            assert!(g52 < g32, "z = {z}");
        }
    }

    #[test]
    fn strictly_increasing() {
        for order in BoseOrder::ALL {
            let mut last = 0.0;
            for i in 1..1000 {
                let v = order.eval(i as f64 / 1000.0).unwrap();
                assert!(v > last);
                last = v;
            }
        }
    }
}
