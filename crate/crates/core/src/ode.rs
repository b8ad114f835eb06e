//! Dormand–Prince 5(4) integrator with continuous (dense) output and
//! terminal events located by bisection on the interpolant.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions<const N: usize> {
    pub rtol: f64,
    pub atol: [f64; N],
    /// First trial step; chosen automatically when `None`.
    pub h_init: Option<f64>,
    /// Steps shorter than this abort the integration.
    pub h_min: f64,
    pub max_steps: usize,
}

impl<const N: usize> OdeOptions<N> {
    pub fn new(rtol: f64, atol: [f64; N]) -> Self {
        Self { rtol, atol, h_init: None, h_min: 1e-12, max_steps: 200_000 }
    }
}

/// Why the integration stopped.
#[derive(Debug, Clone, PartialEq)]
pub enum Status<E> {
    Completed,
    /// Event `index` changed sign from positive to non-positive.
    Event {
        index: usize,
    },
    /// The right-hand side (or an event function) failed and no smaller step helped.
    Failed(E),
    StepUnderflow {
        t: f64,
        h: f64,
    },
    MaxSteps {
        t: f64,
    },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone)]
pub struct Solution<const N: usize, E> {
    /// `(t, y)` at every requested output time reached, followed by the
    /// event point when an event stopped the run.
    pub samples: Vec<(f64, [f64; N])>,
    pub status: Status<E>,
    /// Last state reached.
    pub end: (f64, [f64; N]),
    pub stats: Stats,
}

/// Event function `g(t, y)`.
pub type EventFn<'a, const N: usize, E> = Box<dyn Fn(f64, &[f64; N]) -> Result<f64, E> + 'a>;

/// Terminal event: integration stops where `g` crosses from `> 0` to `≤ 0`.
pub struct Event<'a, const N: usize, E> {
    pub g: EventFn<'a, N, E>,
    /// Width of the final bisection bracket, in units of `t`.
    pub tol: f64,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Fourth-order continuous extension over one accepted step.
#[derive(Debug, Clone, Copy)]
pub struct DenseStep<const N: usize> {
    t0: f64,
    h: f64,
    r: [[f64; N]; 5],
}

impl<const N: usize> DenseStep<N> {
    pub fn eval(&self, t: f64) -> [f64; N] {
        let theta = (t - self.t0) / self.h;
        let theta1 = 1.0 - theta;
        let mut y = [0.0; N];
        for i in 0..N {
            let r = &self.r;
            y[i] = r[0][i] + theta * (r[1][i] + theta1 * (r[2][i] + theta * (r[3][i] + theta1 * r[4][i])));
        }
        y
    }
}

fn combine<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for i in 0..N {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        out[i] += h * acc;
    }
    out
}

fn error_norm<const N: usize>(diff: &[f64; N], scale: &[f64; N]) -> f64 {
    let sum: f64 = (0..N).map(|i| (diff[i] / scale[i]).powi(2)).sum();
    (sum / N as f64).sqrt()
}

fn scale<const N: usize>(opts: &OdeOptions<N>, a: &[f64; N], b: &[f64; N]) -> [f64; N] {
    let mut s = [0.0; N];
    for i in 0..N {
        s[i] = opts.atol[i] + opts.rtol * a[i].abs().max(b[i].abs());
    }
    s
}

/// Integrate `y' = rhs(t, y)` from `t0` to `t_end`, sampling the dense
/// output at each time in `grid` (ascending, within `[t0, t_end]`).
pub fn dopri5<const N: usize, E, F>(
    mut rhs: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    grid: &[f64],
    events: &[Event<'_, N, E>],
    opts: &OdeOptions<N>,
) -> Solution<N, E>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N], E>,
{
    let mut stats = Stats::default();
    let mut samples = Vec::with_capacity(grid.len() + 1);
    let mut next_sample = 0;
    while next_sample < grid.len() && grid[next_sample] < t0 {
        next_sample += 1;
    }
    while next_sample < grid.len() && grid[next_sample] == t0 {
        samples.push((t0, y0));
        next_sample += 1;
    }

    let finish = |samples, status, t, y, stats| Solution { samples, status, end: (t, y), stats };

    let mut g_prev = Vec::with_capacity(events.len());
    for ev in events {
        match (ev.g)(t0, &y0) {
            Ok(v) => g_prev.push(v),
            Err(e) => return finish(samples, Status::Failed(e), t0, y0, stats),
        }
    }

    let mut t = t0;
    let mut y = y0;
    let mut k1 = match rhs(t, &y) {
        Ok(k) => k,
        Err(e) => return finish(samples, Status::Failed(e), t, y, stats),
    };
    stats.evaluations += 1;

    let span = t_end - t0;
    if span <= 0.0 {
        return finish(samples, Status::Completed, t, y, stats);
    }

    let mut h = match opts.h_init {
        Some(h) => h,
        None => match initial_step(&mut rhs, t, &y, &k1, opts) {
            Ok(h) => {
                stats.evaluations += 1;
                h
            }
            Err(e) => return finish(samples, Status::Failed(e), t, y, stats),
        },
    }
    .min(span);

    let mut last_failure: Option<E> = None;
    let mut after_reject = false;

    loop {
        if stats.accepted + stats.rejected >= opts.max_steps {
            return finish(samples, Status::MaxSteps { t }, t, y, stats);
        }
        if h < opts.h_min {
            let status = match last_failure.take() {
                Some(e) => Status::Failed(e),
                None => Status::StepUnderflow { t, h },
            };
            return finish(samples, status, t, y, stats);
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }

        let attempt = (|| -> Result<_, E> {
            let y2 = combine(&y, h, &[(A21, &k1)]);
            let k2 = rhs(t + C2 * h, &y2)?;
            let y3 = combine(&y, h, &[(A31, &k1), (A32, &k2)]);
            let k3 = rhs(t + C3 * h, &y3)?;
            let y4 = combine(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]);
            let k4 = rhs(t + C4 * h, &y4)?;
            let y5 = combine(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]);
            let k5 = rhs(t + C5 * h, &y5)?;
            let y6 = combine(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]);
            let k6 = rhs(t + h, &y6)?;
            let y7 = combine(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
            let k7 = rhs(t + h, &y7)?;
            Ok((k3, k4, k5, k6, y7, k7))
        })();

        let (k3, k4, k5, k6, y_new, k7) = match attempt {
            Ok(v) => v,
            Err(e) => {
                stats.rejected += 1;
                stats.evaluations += 6;
                last_failure = Some(e);
                h *= 0.25;
                after_reject = true;
                continue;
            }
        };
        stats.evaluations += 6;

        let err_vec = combine(&[0.0; N], h, &[(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)]);
        let err = error_norm(&err_vec, &scale(opts, &y, &y_new));
        if !err.is_finite() || err > 1.0 {
            stats.rejected += 1;
            let fac = if err.is_finite() { (0.9 * err.powf(-0.2)).max(0.2) } else { 0.2 };
            h *= fac;
            after_reject = true;
            continue;
        }

        stats.accepted += 1;
        last_failure = None;
        let dense = {
            let mut r = [[0.0; N]; 5];
            for i in 0..N {
                let ydiff = y_new[i] - y[i];
                let bspl = h * k1[i] - ydiff;
                r[0][i] = y[i];
                r[1][i] = ydiff;
                r[2][i] = bspl;
                r[3][i] = ydiff - h * k7[i] - bspl;
                r[4][i] = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
            }
            DenseStep { t0: t, h, r }
        };
        let t_new = if last { t_end } else { t + h };

        // events
        let mut fired: Option<(usize, f64)> = None;
        for (index, ev) in events.iter().enumerate() {
            let g_new = match (ev.g)(t_new, &y_new) {
                Ok(v) => v,
                Err(e) => return finish(samples, Status::Failed(e), t, y, stats),
            };
            if g_prev[index] > 0.0 && g_new <= 0.0 {
                let (mut lo, mut hi) = (t, t_new);
                while hi - lo > ev.tol {
                    let mid = 0.5 * (lo + hi);
                    let g_mid = match (ev.g)(mid, &dense.eval(mid)) {
                        Ok(v) => v,
                        Err(e) => return finish(samples, Status::Failed(e), t, y, stats),
                    };
                    if g_mid > 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                if fired.is_none_or(|(_, te)| hi < te) {
                    fired = Some((index, hi));
                }
            }
            g_prev[index] = g_new;
        }

        let stop_at = fired.map_or(t_new, |(_, te)| te);
        while next_sample < grid.len() && grid[next_sample] <= stop_at {
            let tg = grid[next_sample];
            let yg = if tg == t_new { y_new } else { dense.eval(tg) };
            samples.push((tg, yg));
            next_sample += 1;
        }

        if let Some((index, te)) = fired {
            let ye = dense.eval(te);
            if samples.last().is_none_or(|s| s.0 < te) {
                samples.push((te, ye));
            }
            return finish(samples, Status::Event { index }, te, ye, stats);
        }

        t = t_new;
        y = y_new;
        k1 = k7;
        if last {
            return finish(samples, Status::Completed, t, y, stats);
        }

        let mut fac = (0.9 * err.max(1e-10).powf(-0.2)).clamp(0.2, 5.0);
        if after_reject {
            fac = fac.min(1.0);
            after_reject = false;
        }
        h *= fac;
    }
}

fn initial_step<const N: usize, E, F>(
    rhs: &mut F,
    t: f64,
    y: &[f64; N],
    f0: &[f64; N],
    opts: &OdeOptions<N>,
) -> Result<f64, E>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N], E>,
{
    let sc = scale(opts, y, y);
    let d0 = error_norm(y, &sc);
    let d1 = error_norm(f0, &sc);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let y1 = combine(y, h0, &[(1.0, f0)]);
    let f1 = rhs(t + h0, &y1)?;
    let mut diff = [0.0; N];
    for i in 0..N {
        diff[i] = f1[i] - f0[i];
    }
    let d2 = error_norm(&diff, &sc) / h0;
    let dmax = d1.max(d2);
    let h1 = if dmax <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / dmax).powf(0.2) };
    Ok((100.0 * h0).min(h1))
}
