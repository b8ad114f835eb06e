//! Globally adaptive Gauss–Kronrod (G10/K21) quadrature for vector-valued
//! integrands, with support for square-root kinks at known breakpoints.
//!
//! A kink at `c` means the integrand behaves like `A + B·|u - c|^{1/2} + …`
//! or `A + B·|u - c| + …` next to `c`. Segments touching a kink are mapped
//! with `u = c ± s²`, which turns both behaviours into polynomials in `s`,
//! so Gauss–Kronrod converges geometrically on every panel.

use thiserror::Error;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_2,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_73,
    0.054_755_896_574_352,
    0.075_039_674_810_919_95,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_85,
    0.134_709_217_311_473_33,
    0.142_775_938_577_060_08,
    0.147_739_104_901_338_49,
    0.149_445_554_002_916_9,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_36,
    0.295_524_224_714_752_87,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    /// Requested relative accuracy per component.
    pub rel_tol: f64,
    /// Hard cap on the number of panels before giving up.
    pub max_panels: usize,
    /// Initial panels per segment.
    pub min_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { rel_tol: 1e-8, max_panels: 2000, min_panels: 4 }
    }
}

impl QuadOptions {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self { rel_tol, ..Self::default() }
    }
}

/// Integral values with per-component error estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<const N: usize> {
    pub value: [f64; N],
    pub error: [f64; N],
    pub panels: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("quadrature did not converge after {panels} panels; worst subinterval [{lo:e}, {hi:e}] with error estimate {estimate:e}")]
pub struct QuadratureError {
    pub lo: f64,
    pub hi: f64,
    pub estimate: f64,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy)]
enum Map {
    Identity,
    /// `u = c + s²`
    FromLeft(f64),
    /// `u = c - s²`
    FromRight(f64),
}

impl Map {
    #[inline]
    fn apply(self, s: f64) -> (f64, f64) {
        match self {
            Map::Identity => (s, 1.0),
            Map::FromLeft(c) => (c + s * s, 2.0 * s),
            Map::FromRight(c) => (c - s * s, 2.0 * s),
        }
    }
}

#[derive(Debug, Clone)]
struct Panel<const N: usize> {
    map: Map,
    lo: f64,
    hi: f64,
    value: [f64; N],
    abs: [f64; N],
    error: [f64; N],
}

/// Integrate `f` over `[a, b]`.
pub fn integrate<const N: usize, F>(f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<Quadrature<N>, QuadratureError>
where
    F: Fn(f64) -> [f64; N],
{
    integrate_kinked(f, a, b, &[], opts)
}

/// Integrate `f` over `[lower, upper]`, splitting at `kinks` and removing the
/// square-root behaviour on both sides of each kink.
pub fn integrate_kinked<const N: usize, F>(
    f: F,
    lower: f64,
    upper: f64,
    kinks: &[f64],
    opts: &QuadOptions,
) -> Result<Quadrature<N>, QuadratureError>
where
    F: Fn(f64) -> [f64; N],
{
    let mut points: Vec<(f64, bool)> = vec![(lower, false), (upper, false)];
    for &k in kinks {
        if k > lower && k < upper {
            points.push((k, true));
        } else if k == lower {
            points[0].1 = true;
        } else if k == upper {
            points[1].1 = true;
        }
    }
    points.sort_by(|p, q| p.0.total_cmp(&q.0));
    points.dedup_by(|p, q| {
        let same = p.0 == q.0;
        if same {
            q.1 |= p.1;
        }
        same
    });

    let mut segments = Vec::new();
    for pair in points.windows(2) {
        let ((a, left), (b, right)) = (pair[0], pair[1]);
        if b <= a {
            continue;
        }
        match (left, right) {
            (false, false) => segments.push((Map::Identity, a, b)),
            (true, false) => segments.push((Map::FromLeft(a), 0.0, (b - a).sqrt())),
            (false, true) => segments.push((Map::FromRight(b), 0.0, (b - a).sqrt())),
            (true, true) => {
                let mid = 0.5 * (a + b);
                let half = (mid - a).sqrt();
                segments.push((Map::FromLeft(a), 0.0, half));
                segments.push((Map::FromRight(b), 0.0, half));
            }
        }
    }
    adaptive(&f, &segments, opts)
}

fn adaptive<const N: usize, F>(
    f: &F,
    segments: &[(Map, f64, f64)],
    opts: &QuadOptions,
) -> Result<Quadrature<N>, QuadratureError>
where
    F: Fn(f64) -> [f64; N],
{
    let per = opts.min_panels.max(1);
    let mut panels: Vec<Panel<N>> = Vec::with_capacity(segments.len() * per * 2);
    for &(map, lo, hi) in segments {
        let width = (hi - lo) / per as f64;
        for i in 0..per {
            let a = lo + width * i as f64;
            let b = if i + 1 == per { hi } else { a + width };
            panels.push(kronrod(f, map, a, b));
        }
    }

    loop {
        let mut total = [0.0; N];
        let mut abs = [0.0; N];
        let mut err = [0.0; N];
        for p in &panels {
            for i in 0..N {
                total[i] += p.value[i];
                abs[i] += p.abs[i];
                err[i] += p.error[i];
            }
        }
        let converged = (0..N).all(|i| err[i] <= opts.rel_tol * abs[i]);
        if converged || panels.is_empty() {
            panels.sort_by(|p, q| p.map_order().total_cmp(&q.map_order()));
            let mut value = [0.0; N];
            for p in &panels {
                for (v, x) in value.iter_mut().zip(&p.value) {
                    *v += x;
                }
            }
            return Ok(Quadrature { value, error: err, panels: panels.len() });
        }

        let score =
            |p: &Panel<N>| (0..N).map(|i| if abs[i] > 0.0 { p.error[i] / abs[i] } else { 0.0 }).fold(0.0, f64::max);
        let (worst, _) = panels.iter().enumerate().map(|(j, p)| (j, score(p))).fold((0, -1.0), |best, cur| {
            if cur.1 > best.1 {
                cur
            } else {
                best
            }
        });

        if panels.len() >= opts.max_panels {
            let p = &panels[worst];
            let (u_lo, _) = p.map.apply(p.lo);
            let (u_hi, _) = p.map.apply(p.hi);
            return Err(QuadratureError {
                lo: u_lo.min(u_hi),
                hi: u_lo.max(u_hi),
                estimate: p.error.iter().cloned().fold(0.0, f64::max),
                panels: panels.len(),
            });
        }
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.lo + p.hi);
        panels.push(kronrod(f, p.map, p.lo, mid));
        panels.push(kronrod(f, p.map, mid, p.hi));
    }
}

impl<const N: usize> Panel<N> {
    /// Sort key giving a fixed summation order independent of refinement history.
    fn map_order(&self) -> f64 {
        let (u, _) = self.map.apply(0.5 * (self.lo + self.hi));
        u
    }
}

fn kronrod<const N: usize, F>(f: &F, map: Map, lo: f64, hi: f64) -> Panel<N>
where
    F: Fn(f64) -> [f64; N],
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let eval = |s: f64| {
        let (u, jac) = map.apply(s);
        let mut v = f(u);
        for x in v.iter_mut() {
            *x *= jac;
        }
        v
    };

    let mut fv = [[0.0; N]; 21];
    fv[20] = eval(center);
    for j in 0..10 {
        let dx = half * XGK[j];
        fv[2 * j] = eval(center - dx);
        fv[2 * j + 1] = eval(center + dx);
    }

    let mut kron = [0.0; N];
    let mut gauss = [0.0; N];
    let mut res_abs = [0.0; N];
    for i in 0..N {
        let fc = fv[20][i];
        kron[i] = WGK[10] * fc;
        res_abs[i] = WGK[10] * fc.abs();
        for j in 0..10 {
            let (a, b) = (fv[2 * j][i], fv[2 * j + 1][i]);
            kron[i] += WGK[j] * (a + b);
            res_abs[i] += WGK[j] * (a.abs() + b.abs());
            if j % 2 == 1 {
                gauss[i] += WG[j / 2] * (a + b);
            }
        }
    }

    let mut error = [0.0; N];
    let mut value = [0.0; N];
    let mut abs = [0.0; N];
    for i in 0..N {
        let mean = 0.5 * kron[i];
        let mut res_asc = WGK[10] * (fv[20][i] - mean).abs();
        for j in 0..10 {
            res_asc += WGK[j] * ((fv[2 * j][i] - mean).abs() + (fv[2 * j + 1][i] - mean).abs());
        }
        res_asc *= half.abs();
        let ra = res_abs[i] * half.abs();
        let mut e = ((kron[i] - gauss[i]) * half).abs();
        if res_asc != 0.0 && e != 0.0 {
            e = res_asc * (200.0 * e / res_asc).powf(1.5).min(1.0);
        }
        if ra > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
            e = e.max(50.0 * f64::EPSILON * ra);
        }
        value[i] = kron[i] * half;
        abs[i] = ra;
        error[i] = e;
    }
    Panel { map, lo, hi, value, abs, error }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            let prev = if n == 0 { 0.0 } else { p0 };
            dp = n as f64 * (x * p - prev) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        rule.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    rule.reverse();
    rule
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomials_are_exact() {
        for k in 0..=20 {
            let r = integrate(|x| [x.powi(k)], 0.0, 1.0, &QuadOptions::default()).unwrap();
            assert_relative_eq!(r.value[0], 1.0 / (k as f64 + 1.0), max_relative = 1e-14);
        }
    }

    #[test]
    fn vector_components_are_independent() {
        let r = integrate(|x| [x.sin(), x.exp(), 0.0], 0.0, 2.0, &QuadOptions::default()).unwrap();
        assert_relative_eq!(r.value[0], 1.0 - 2f64.cos(), max_relative = 1e-12);
        assert_relative_eq!(r.value[1], 2f64.exp() - 1.0, max_relative = 1e-12);
        assert_eq!(r.value[2], 0.0);
    }

    #[test]
    fn sqrt_kink_is_removed() {
        // ∫_0^2 sqrt|u-1| du = 4/3
        let opts = QuadOptions { min_panels: 1, ..QuadOptions::default() };
        let r = integrate_kinked(|u| [(u - 1.0f64).abs().sqrt()], 0.0, 2.0, &[1.0], &opts).unwrap();
        assert_relative_eq!(r.value[0], 4.0 / 3.0, max_relative = 1e-14);
        // two panels only: the substitution makes it a polynomial
        assert_eq!(r.panels, 2);
    }

    #[test]
    fn kinks_at_endpoints() {
        let opts = QuadOptions::default();
        let r = integrate_kinked(|u| [u.sqrt()], 0.0, 4.0, &[0.0], &opts).unwrap();
        assert_relative_eq!(r.value[0], 16.0 / 3.0, max_relative = 1e-13);
        let r = integrate_kinked(|u| [(4.0 - u).sqrt()], 0.0, 4.0, &[4.0], &opts).unwrap();
        assert_relative_eq!(r.value[0], 16.0 / 3.0, max_relative = 1e-13);
    }

    #[test]
    fn adjacent_kinks_split_segment() {
        let f = |u: f64| [(u - 1.0f64).abs().sqrt() + (u - 2.0f64).abs().sqrt()];
        let r = integrate_kinked(f, 0.0, 3.0, &[2.0, 1.0, 7.0], &QuadOptions::default()).unwrap();
        let one = 2.0 / 3.0 * (1.0 + 8f64.sqrt());
        assert_relative_eq!(r.value[0], 2.0 * one, max_relative = 1e-13);
    }

    #[test]
    fn adaptive_refinement_handles_peaks() {
        let r = integrate(|x| [1.0 / (1e-4 + x * x)], -1.0, 1.0, &QuadOptions::with_rel_tol(1e-10)).unwrap();
        let exact = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert_relative_eq!(r.value[0], exact, max_relative = 1e-9);
        assert!(r.panels > 8);
    }

    #[test]
    fn reports_failure_with_worst_interval() {
        let opts = QuadOptions { max_panels: 10, ..QuadOptions::default() };
        let err = integrate(|x| [1.0 / x.abs().sqrt().max(1e-300)], -1.0, 1.0, &opts).unwrap_err();
        assert!(err.lo <= 0.0 && err.hi >= 0.0, "{err}");
        assert!(err.estimate > 0.0);
    }

    #[test]
    fn gauss_legendre_rule() {
        for n in [1, 2, 5, 16, 32] {
            let rule = gauss_legendre(n);
            assert_eq!(rule.len(), n);
            assert!(rule.windows(2).all(|w| w[0].0 < w[1].0));
            for k in 0..2 * n {
                let sum: f64 = rule.iter().map(|(x, w)| w * x.powi(k as i32)).sum();
                let exact = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
                assert!((sum - exact).abs() < 1e-14, "n={n} k={k}: {sum}");
            }
        }
    }

    #[test]
    fn empty_interval() {
        let r = integrate(|_| [1.0], 1.0, 1.0, &QuadOptions::default()).unwrap();
        assert_eq!(r.value[0], 0.0);
    }
}
