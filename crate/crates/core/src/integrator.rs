//! Explicit Runge–Kutta steppers for autonomous systems y' = f(y).

pub type State<const N: usize> = [f64; N];

#[inline]
fn axpy<const N: usize>(y: &State<N>, terms: &[(f64, &State<N>)], h: f64) -> State<N> {
    let mut out = *y;
    for (coef, k) in terms {
        if *coef == 0.0 {
            continue;
        }
        for i in 0..N {
            out[i] += h * coef * k[i];
        }
    }
    out
}

/// Classical fourth-order step.
pub fn rk4_step<const N: usize, E, F>(f: &mut F, y: &State<N>, h: f64) -> Result<State<N>, E>
where
    F: FnMut(&State<N>) -> Result<State<N>, E>,
{
    let k1 = f(y)?;
    let k2 = f(&axpy(y, &[(0.5, &k1)], h))?;
    let k3 = f(&axpy(y, &[(0.5, &k2)], h))?;
    let k4 = f(&axpy(y, &[(1.0, &k3)], h))?;
    Ok(axpy(
        y,
        &[
            (1.0 / 6.0, &k1),
            (1.0 / 3.0, &k2),
            (1.0 / 3.0, &k3),
            (1.0 / 6.0, &k4),
        ],
        h,
    ))
}

/// Dormand–Prince 5(4) step. Returns the fifth-order solution and the
/// embedded error estimate (y5 − y4).
pub fn dopri5_step<const N: usize, E, F>(
    f: &mut F,
    y: &State<N>,
    h: f64,
) -> Result<(State<N>, State<N>), E>
where
    F: FnMut(&State<N>) -> Result<State<N>, E>,
{
    let k1 = f(y)?;
    let k2 = f(&axpy(y, &[(1.0 / 5.0, &k1)], h))?;
    let k3 = f(&axpy(y, &[(3.0 / 40.0, &k1), (9.0 / 40.0, &k2)], h))?;
    let k4 = f(&axpy(
        y,
        &[(44.0 / 45.0, &k1), (-56.0 / 15.0, &k2), (32.0 / 9.0, &k3)],
        h,
    ))?;
    let k5 = f(&axpy(
        y,
        &[
            (19372.0 / 6561.0, &k1),
            (-25360.0 / 2187.0, &k2),
            (64448.0 / 6561.0, &k3),
            (-212.0 / 729.0, &k4),
        ],
        h,
    ))?;
    let k6 = f(&axpy(
        y,
        &[
            (9017.0 / 3168.0, &k1),
            (-355.0 / 33.0, &k2),
            (46732.0 / 5247.0, &k3),
            (49.0 / 176.0, &k4),
            (-5103.0 / 18656.0, &k5),
        ],
        h,
    ))?;
    let y5 = axpy(
        y,
        &[
            (35.0 / 384.0, &k1),
            (500.0 / 1113.0, &k3),
            (125.0 / 192.0, &k4),
            (-2187.0 / 6784.0, &k5),
            (11.0 / 84.0, &k6),
        ],
        h,
    );
    let k7 = f(&y5)?;
    let mut err = [0.0; N];
    for i in 0..N {
        err[i] = h
            * (71.0 / 57600.0 * k1[i] - 71.0 / 16695.0 * k3[i] + 71.0 / 1920.0 * k4[i]
                - 17253.0 / 339200.0 * k5[i]
                + 22.0 / 525.0 * k6[i]
                - 1.0 / 40.0 * k7[i]);
    }
    Ok((y5, err))
}
