//! Adaptive Gauss–Kronrod (7/15) quadrature for vector-valued integrands.

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<const N: usize> {
    pub value: [f64; N],
    /// Estimated absolute error (max-norm over components).
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel<const N: usize> {
    lo: f64,
    hi: f64,
    value: [f64; N],
    error: f64,
}

fn max_norm<const N: usize>(v: &[f64; N]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

fn kronrod<const N: usize, F>(f: &mut F, lo: f64, hi: f64) -> Panel<N>
where
    F: FnMut(f64) -> [f64; N],
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut k = [0.0; N];
    let mut g = [0.0; N];
    for (i, (&x, &w)) in XGK.iter().zip(WGK.iter()).enumerate() {
        let pts: &[f64] = if x == 0.0 { &[0.0] } else { &[-1.0, 1.0] };
        for &sign in pts {
            let fx = f(center + sign * half * x);
            for c in 0..N {
                k[c] += w * fx[c];
                if i % 2 == 1 {
                    g[c] += WG[i / 2] * fx[c];
                }
            }
        }
    }
    let mut err = [0.0; N];
    for c in 0..N {
        k[c] *= half;
        g[c] *= half;
        err[c] = k[c] - g[c];
    }
    Panel {
        lo,
        hi,
        value: k,
        error: max_norm(&err),
    }
}

/// Integrates `f` over consecutive panels delimited by `breaks` until the
/// estimated error is below `max(abs_tol, rel_tol·|I|)` or `max_panels` is hit.
pub fn integrate<const N: usize, F>(
    mut f: F,
    breaks: &[f64],
    rel_tol: f64,
    abs_tol: f64,
    max_panels: usize,
) -> Quadrature<N>
where
    F: FnMut(f64) -> [f64; N],
{
    assert!(breaks.len() >= 2, "need at least one interval");
    let mut panels: Vec<Panel<N>> = breaks
        .windows(2)
        .map(|w| kronrod(&mut f, w[0], w[1]))
        .collect();
    let mut evaluations = 15 * panels.len();

    loop {
        let mut total = [0.0; N];
        let mut error = 0.0;
        for p in &panels {
            for (t, v) in total.iter_mut().zip(p.value) {
                *t += v;
            }
            error += p.error;
        }
        let tol = abs_tol.max(rel_tol * max_norm(&total));
        if error <= tol || panels.len() >= max_panels {
            return Quadrature {
                value: total,
                error,
                evaluations,
            };
        }
        let (worst, _) =
            panels
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |(bi, be), (i, p)| {
                    if p.error > be {
                        (i, p.error)
                    } else {
                        (bi, be)
                    }
                });
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.lo + p.hi);
        panels.push(kronrod(&mut f, p.lo, mid));
        panels.push(kronrod(&mut f, mid, p.hi));
        evaluations += 30;
    }
}

pub fn integrate_scalar<F>(mut f: F, lo: f64, hi: f64, rel_tol: f64, abs_tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let q = integrate(|x| [f(x)], &[lo, hi], rel_tol, abs_tol, 10_000);
    (q.value[0], q.error)
}
