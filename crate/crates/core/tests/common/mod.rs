//! Independent reference implementations for the integration tests.
//!
//! Nothing here calls into the crate's numerics: Bose functions, Thomas–Fermi
//! profile and quadrature are all written out again from first principles.

#![allow(dead_code)]

use std::f64::consts::PI;

pub const HBAR: f64 = 1.054_571_817e-34;
pub const K_B: f64 = 1.380_649e-23;
pub const HE_MASS: f64 = 4.002_602 * 1.660_539_066_60e-27;
pub const HE_A: f64 = 16e-9;

const ZETA_HALF: f64 = -1.460_354_508_809_586_8;

/// `ζ(s)` for `s > 1` by Euler–Maclaurin summation.
fn zeta_gt1(s: f64) -> f64 {
    let n = 40.0_f64;
    let head: f64 = (1..40).map(|j| (j as f64).powf(-s)).sum();
    head + n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s) + s * n.powf(-s - 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * n.powf(-s - 3.0) / 720.0
        + s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * n.powf(-s - 5.0) / 30240.0
}

/// `Γ(x)` for positive half-integers.
fn gamma_half(x: f64) -> f64 {
    let mut g = PI.sqrt();
    let mut y = 0.5;
    while y < x - 0.25 {
        g *= y;
        y += 1.0;
    }
    g
}

/// `ζ(s)` for half-integer `s`.
fn zeta_half_integer(s: f64) -> f64 {
    if s > 1.0 {
        zeta_gt1(s)
    } else if (s - 0.5).abs() < 1e-12 {
        ZETA_HALF
    } else {
        // Riemann reflection.
        2f64.powf(s) * PI.powf(s - 1.0) * (0.5 * PI * s).sin() * gamma_half(1.0 - s) * zeta_gt1(1.0 - s)
    }
}

/// `g_n(e^{-a})` for `n ∈ {3/2, 5/2}`.
pub struct Bose {
    n: f64,
    leading: f64,
    coeffs: Vec<f64>,
}

impl Bose {
    pub fn new(n: f64) -> Self {
        // Γ(1-n) from Γ(2-n)/(1-n) etc.
        let leading = if (n - 1.5).abs() < 1e-12 { -2.0 * PI.sqrt() } else { 4.0 * PI.sqrt() / 3.0 };
        let mut coeffs = Vec::new();
        let mut factorial = 1.0;
        for k in 0..40 {
            if k > 0 {
                factorial *= k as f64;
            }
            coeffs.push(zeta_half_integer(n - k as f64) / factorial);
        }
        Self { n, leading, coeffs }
    }

    pub fn eval(&self, a: f64) -> f64 {
        assert!(a >= 0.0);
        if a > 1.0 {
            let z = (-a).exp();
            let (mut sum, mut zk) = (0.0, 1.0);
            for k in 1..200 {
                zk *= z;
                let term = zk / (k as f64).powf(self.n);
                sum += term;
                if term < 1e-18 * sum {
                    break;
                }
            }
            sum
        } else {
            let mut sum = self.leading * a.powf(self.n - 1.0);
            let mut p = 1.0;
            for c in &self.coeffs {
                sum += c * p;
                p *= -a;
            }
            sum
        }
    }
}

/// Gauss–Legendre rule on `[0, 1]` by Golub–Welsch-free Newton iteration.
pub fn gl01(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (0.5 * (1.0 - x), 1.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// Composite rule on `[a, b]` with endpoints smoothed by `t ↦ 3t² - 2t³`.
fn segment_nodes(a: f64, b: f64, panels: usize, rule: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(panels * rule.len());
    if b <= a {
        return out;
    }
    let h = 1.0 / panels as f64;
    for p in 0..panels {
        for &(x, w) in rule {
            let t = (p as f64 + x) * h;
            let s = t * t * (3.0 - 2.0 * t);
            let ds = 6.0 * t * (1.0 - t);
            out.push((a + (b - a) * s, (b - a) * ds * w * h));
        }
    }
    out
}

fn breaks(lo: f64, mid: Option<f64>, hi: f64, panels: usize, rule: &[(f64, f64)]) -> Vec<(f64, f64)> {
    match mid {
        Some(m) if m > lo && m < hi => {
            let mut v = segment_nodes(lo, m, panels, rule);
            v.extend(segment_nodes(m, hi, panels, rule));
            v
        }
        _ => segment_nodes(lo, hi, panels, rule),
    }
}

/// Cartesian product quadrature of `f` over the ellipsoid with semi-axes
/// `outer`, with breakpoints on the inner ellipsoid `inner`. Uses octant
/// symmetry, so `f` must be even in every coordinate.
pub fn ellipsoid_integral<const M: usize>(
    f: impl Fn([f64; 3]) -> [f64; M],
    inner: [f64; 3],
    outer: [f64; 3],
    panels: usize,
    order: usize,
) -> [f64; M] {
    let rule = gl01(order);
    let frac = |x: f64, y: f64, axes: [f64; 3]| 1.0 - (x / axes[0]).powi(2) - (y / axes[1]).powi(2);
    let mut total = [0.0; M];
    let inner_x = (inner[0] > 0.0).then_some(inner[0]);
    for (x, wx) in breaks(0.0, inner_x, outer[0], panels, &rule) {
        let y_out = outer[1] * frac(x, 0.0, outer).max(0.0).sqrt();
        let y_in = (x < inner[0]).then(|| inner[1] * frac(x, 0.0, inner).max(0.0).sqrt());
        for (y, wy) in breaks(0.0, y_in, y_out, panels, &rule) {
            let z_out = outer[2] * frac(x, y, outer).max(0.0).sqrt();
            let f_in = frac(x, y, inner);
            let z_in = (inner[0] > 0.0 && f_in > 0.0).then(|| inner[2] * f_in.sqrt());
            for (z, wz) in breaks(0.0, z_in, z_out, panels, &rule) {
                let v = f([x, y, z]);
                let w = 8.0 * wx * wy * wz;
                for i in 0..M {
                    total[i] += w * v[i];
                }
            }
        }
    }
    total
}

/// Thomas–Fermi condensate with a Hartree–Fock thermal cloud, in SI units.
pub struct Reference {
    pub omega: [f64; 3],
    pub mass: f64,
    pub a: f64,
    pub n_c: f64,
    pub temperature: f64,
    pub mu: f64,
    pub u0: f64,
    g32: Bose,
    g52: Bose,
}

/// Local `(V, n_C, n_T, e_T)`.
#[derive(Debug, Clone, Copy)]
pub struct Local {
    pub v: f64,
    pub n_c: f64,
    pub n_t: f64,
    pub e_t: f64,
}

impl Reference {
    pub fn new(hz: [f64; 3], n_c: f64, temperature: f64) -> Self {
        Self::with_species(hz, HE_MASS, HE_A, n_c, temperature)
    }

    pub fn with_species(hz: [f64; 3], mass: f64, a: f64, n_c: f64, temperature: f64) -> Self {
        let omega = hz.map(|f| 2.0 * PI * f);
        let w_bar = (omega[0] * omega[1] * omega[2]).cbrt();
        let a_ho = (HBAR / (mass * w_bar)).sqrt();
        let mu = 0.5 * HBAR * w_bar * (15.0 * n_c * a / a_ho).powf(0.4);
        let u0 = 4.0 * PI * HBAR * HBAR * a / mass;
        Self { omega, mass, a, n_c, temperature, mu, u0, g32: Bose::new(1.5), g52: Bose::new(2.5) }
    }

    pub fn potential(&self, r: [f64; 3]) -> f64 {
        0.5 * self.mass * (0..3).map(|i| (self.omega[i] * r[i]).powi(2)).sum::<f64>()
    }

    pub fn local(&self, r: [f64; 3]) -> Local {
        let v = self.potential(r);
        let kt = K_B * self.temperature;
        let n_c = ((self.mu - v) / self.u0).max(0.0);
        let v_eff = v + 2.0 * self.u0 * n_c;
        let a = (v_eff - self.mu) / kt;
        let lambda = (2.0 * PI * HBAR * HBAR / (self.mass * kt)).sqrt();
        let g32 = self.g32.eval(a);
        let n_t = g32 / lambda.powi(3);
        let e_t = (1.5 * kt * self.g52.eval(a) + v_eff * g32) / lambda.powi(3);
        Local { v, n_c, n_t, e_t }
    }

    fn axes(&self, energy: f64) -> [f64; 3] {
        self.omega.map(|w| (2.0 * energy.max(0.0) / self.mass).sqrt() / w)
    }

    /// `∫f(local)` over the trap, cut where the cloud's excess energy reaches `cut_kt · kT`.
    pub fn integrate<const M: usize>(
        &self,
        f: impl Fn(&Local) -> [f64; M],
        cut_kt: f64,
        panels: usize,
        order: usize,
    ) -> [f64; M] {
        let inner = self.axes(self.mu);
        let outer = self.axes(self.mu + cut_kt * K_B * self.temperature);
        ellipsoid_integral(|r| f(&self.local(r)), inner, outer, panels, order)
    }

    /// `(N_T, E_T)`.
    pub fn cloud_totals(&self, panels: usize, order: usize) -> [f64; 2] {
        self.integrate(|l| [l.n_t, l.e_t], 60.0, panels, order)
    }

    /// Number and energy loss integrals in the crate's component order.
    pub fn loss_integrals(&self, panels: usize, order: usize) -> ([f64; 7], [f64; 5]) {
        let q = self.integrate(
            |l| {
                let (c, t, e) = (l.n_c, l.n_t, l.e_t);
                [
                    c * c,
                    c * t,
                    t * t,
                    c * c * c,
                    c * c * t,
                    c * t * t,
                    t * t * t,
                    c * e,
                    t * e,
                    c * c * e,
                    c * t * e,
                    t * t * e,
                ]
            },
            60.0,
            panels,
            order,
        );
        let mut number = [0.0; 7];
        let mut energy = [0.0; 5];
        number.copy_from_slice(&q[..7]);
        energy.copy_from_slice(&q[7..]);
        (number, energy)
    }
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
