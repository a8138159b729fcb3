use super::{IntegratorConfig, Method, RayState, Trajectory};
use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::integrator::{dopri5_step, rk4_step, State};
use crate::physics::{excess_and_gradient, IndexModel, MagneticDipole, NeutronStar, Vec3};

/// Largest step as a fraction of the current distance to the star centre.
const MAX_STEP_FRACTION: f64 = 0.2;

fn check_exterior(star: &NeutronStar, point: &Vec3) -> Result<()> {
    if point.norm() <= star.radius {
        return Err(Error::Domain(format!(
            "point at r = {:.6e} m lies inside the star (radius {:.6e} m)",
            point.norm(),
            star.radius
        )));
    }
    Ok(())
}

/// ∇n at `point`, with the star rotated to `phase`.
pub fn index_gradient(
    star: &NeutronStar,
    phase: f64,
    model: &IndexModel,
    constants: &PhysicalConstants,
    point: &Vec3,
    k_hat: &Vec3,
) -> Result<Vec3> {
    check_exterior(star, point)?;
    let dipole = star.dipole_at(phase);
    Ok(excess_and_gradient(
        &dipole,
        point,
        k_hat,
        model.projection,
        model.coupling(constants),
    )?
    .1)
}

/// Central-difference gradient with step 1e-4·ρ₀.
pub fn index_gradient_fd(
    star: &NeutronStar,
    phase: f64,
    model: &IndexModel,
    constants: &PhysicalConstants,
    point: &Vec3,
    k_hat: &Vec3,
) -> Result<Vec3> {
    check_exterior(star, point)?;
    let dipole = star.dipole_at(phase);
    let a = model.coupling(constants);
    let h = 1e-4 * star.radius;
    let mut g = Vec3::zeros();
    for j in 0..3 {
        let mut e = Vec3::zeros();
        e[j] = h;
        let hi = excess_and_gradient(&dipole, &(point + e), k_hat, model.projection, a)?.0;
        let lo = excess_and_gradient(&dipole, &(point - e), k_hat, model.projection, a)?.0;
        g[j] = (hi - lo) / (2.0 * h);
    }
    Ok(g)
}

struct RaySystem<'a> {
    dipole: &'a MagneticDipole,
    model: IndexModel,
    coupling: f64,
}

impl RaySystem<'_> {
    /// State is (r, p) with p = n·t̂; r' = t̂, p' = ∇n.
    fn derivative(&self, y: &State<6>) -> Result<State<6>> {
        let r = Vec3::new(y[0], y[1], y[2]);
        let p = Vec3::new(y[3], y[4], y[5]);
        let t = p / p.norm();
        let (_, grad) =
            excess_and_gradient(self.dipole, &r, &t, self.model.projection, self.coupling)?;
        Ok([t.x, t.y, t.z, grad.x, grad.y, grad.z])
    }

    /// Restores |p| = n(r) along the current direction.
    fn renormalize(&self, y: &mut State<6>) -> Result<Vec3> {
        let r = Vec3::new(y[0], y[1], y[2]);
        let p = Vec3::new(y[3], y[4], y[5]);
        let t = p / p.norm();
        let (excess, _) =
            excess_and_gradient(self.dipole, &r, &t, self.model.projection, self.coupling)?;
        let p = t * (1.0 + excess);
        y[3] = p.x;
        y[4] = p.y;
        y[5] = p.z;
        Ok(t)
    }
}

fn sample(y: &State<6>, s: f64) -> RayState {
    let p = Vec3::new(y[3], y[4], y[5]);
    RayState {
        position: Vec3::new(y[0], y[1], y[2]),
        direction: p / p.norm(),
        path_length: s,
    }
}

/// Integrates a ray through the magnetic index field of `star` rotated to `phase`.
///
/// The domain is |r·k̂₀| ≤ kρ, with k̂₀ the initial direction and ρ the impact
/// parameter of the initial line. A ray that enters the star is returned with
/// `absorbed = true`.
pub fn trace_ray(
    initial: &RayState,
    star: &NeutronStar,
    phase: f64,
    model: &IndexModel,
    constants: &PhysicalConstants,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    check_exterior(star, &initial.position)?;
    let d0 = crate::physics::unit(initial.direction, "initial direction")?;
    let impact = initial.position.cross(&d0).norm();
    let halfspan = cfg.domain_halfspan_factor * impact.max(star.radius);

    let dipole = star.dipole_at(phase);
    let coupling = model.coupling(constants);
    let system = RaySystem {
        dipole: &dipole,
        model: *model,
        coupling,
    };

    // Characteristic scales for the error norm: ρ for positions and the largest
    // index excess near closest approach for the transverse momentum.
    let closest = initial.position - d0 * initial.position.dot(&d0);
    let mut p_scale = 0.0_f64;
    for i in -6..=6 {
        let point = closest + d0 * (0.5 * i as f64 * impact.max(star.radius));
        if point.norm() > star.radius {
            let b = dipole.field(&point)?;
            p_scale = p_scale.max(coupling * b.norm_squared());
        }
    }
    let p_scale = p_scale.max(f64::MIN_POSITIVE);
    let l_scale = impact.max(star.radius);

    let mut y: State<6> = [
        initial.position.x,
        initial.position.y,
        initial.position.z,
        d0.x,
        d0.y,
        d0.z,
    ];
    system.renormalize(&mut y)?;
    let mut s = initial.path_length;
    let mut samples = vec![sample(&y, s)];
    let mut f = |y: &State<6>| system.derivative(y);
    let mut h = cfg.step;
    let mut absorbed = false;
    let mut steps = 0usize;

    loop {
        let r = Vec3::new(y[0], y[1], y[2]);
        let along = r.dot(&d0);
        let dir = Vec3::new(y[3], y[4], y[5]);
        if steps > 0 && along.abs() >= halfspan && along * dir.dot(&d0) > 0.0 {
            break;
        }
        if steps >= cfg.max_steps {
            return Err(Error::Truncated {
                steps,
                progress: along + halfspan,
                target: 2.0 * halfspan,
            });
        }
        steps += 1;

        let cap = MAX_STEP_FRACTION * r.norm();
        match cfg.method {
            Method::Rk4Fixed => {
                let step = cfg.step;
                y = rk4_step(&mut f, &y, step)?;
                s += step;
            }
            Method::Rk45Adaptive => loop {
                let step = h.min(cap);
                let (trial, err) = dopri5_step(&mut f, &y, step)?;
                let mut norm = 0.0_f64;
                for i in 0..6 {
                    let scale = if i < 3 { l_scale } else { p_scale };
                    let sc = cfg.abs_tol * scale + cfg.rel_tol * y[i].abs().max(trial[i].abs());
                    if err[i] != 0.0 {
                        norm = norm.max(err[i].abs() / sc);
                    }
                }
                let factor = if norm == 0.0 {
                    5.0
                } else {
                    (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0)
                };
                if norm <= 1.0 {
                    y = trial;
                    s += step;
                    h = step * factor;
                    break;
                }
                h = step * factor;
            },
        }

        if Vec3::new(y[0], y[1], y[2]).norm() <= star.radius {
            absorbed = true;
            samples.push(sample(&y, s));
            break;
        }
        system.renormalize(&mut y)?;
        samples.push(sample(&y, s));
    }

    let final_direction = samples.last().expect("at least one sample").direction;
    Ok(Trajectory {
        samples,
        initial_direction: d0,
        final_direction,
        absorbed,
    })
}

/// Angle between initial and final direction, in [0, π].
///
/// Computed as atan2(|a×b|, a·b), which stays accurate for deflections far below
/// the 1e-8 rad where arccos(a·b) loses all precision.
pub fn deflection_from_trajectory(traj: &Trajectory) -> Result<f64> {
    if traj.absorbed {
        return Err(Error::Absorbed);
    }
    let a = traj.initial_direction;
    let b = traj.final_direction;
    Ok(a.cross(&b).norm().atan2(a.dot(&b)))
}

/// Bundles the constants, index model and integrator settings used for tracing.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Tracer {
    pub constants: PhysicalConstants,
    pub model: IndexModel,
    pub cfg: IntegratorConfig,
}

impl Tracer {
    pub fn new(constants: PhysicalConstants, model: IndexModel, cfg: IntegratorConfig) -> Self {
        Self {
            constants,
            model,
            cfg,
        }
    }

    /// Trajectory of the reference ray (+z, impact ρ on +x).
    pub fn trace_impact(&self, star: &NeutronStar, phase: f64, rho: f64) -> Result<Trajectory> {
        let initial = RayState::incoming(rho, self.cfg.domain_halfspan_factor);
        trace_ray(
            &initial,
            star,
            phase,
            &self.model,
            &self.constants,
            &self.cfg,
        )
    }

    /// Magnetic deflection of the reference ray.
    pub fn magnetic_deflection(&self, star: &NeutronStar, phase: f64, rho: f64) -> Result<f64> {
        deflection_from_trajectory(&self.trace_impact(star, phase, rho)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physics::{FieldProjection, Polarization};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn traj(a: Vec3, b: Vec3) -> Trajectory {
        Trajectory {
            samples: vec![],
            initial_direction: a,
            final_direction: b,
            absorbed: false,
        }
    }

    #[test]
    fn deflection_angle_extremes() {
        assert_eq!(
            deflection_from_trajectory(&traj(Vec3::z(), Vec3::z())).unwrap(),
            0.0
        );
        assert!(
            (deflection_from_trajectory(&traj(Vec3::z(), -Vec3::z())).unwrap() - PI).abs() < 1e-15
        );
        assert!(
            (deflection_from_trajectory(&traj(Vec3::z(), Vec3::x())).unwrap() - FRAC_PI_2).abs()
                < 1e-15
        );
        let mut t = traj(Vec3::z(), Vec3::z());
        t.absorbed = true;
        assert_eq!(deflection_from_trajectory(&t), Err(Error::Absorbed));
    }

    #[test]
    fn zero_field_gradient_vanishes() {
        let star = NeutronStar::typical().with_surface_field(0.0).unwrap();
        let g = index_gradient(
            &star,
            0.0,
            &IndexModel::default(),
            &PhysicalConstants::default(),
            &Vec3::new(3e4, 1e3, -2e4),
            &Vec3::z(),
        )
        .unwrap();
        assert_eq!(g, Vec3::zeros());
    }

    #[test]
    fn gradient_points_inward_on_transverse_axis() {
        // Perpendicular-to-propagation dipole so that B⊥ ≠ 0 on the x axis.
        let star = NeutronStar::typical().with_dipole_axis(Vec3::y()).unwrap();
        let g = index_gradient(
            &star,
            0.0,
            &IndexModel::default(),
            &PhysicalConstants::default(),
            &Vec3::new(3e4, 0.0, 0.0),
            &Vec3::z(),
        )
        .unwrap();
        assert!(g.x < 0.0);
        assert!(g.y.abs() <= 1e-12 * g.x.abs());
    }

    #[test]
    fn inside_star_is_domain_error() {
        let star = NeutronStar::typical();
        let model = IndexModel::new(Polarization::Parallel, FieldProjection::TotalBSquared);
        let r = index_gradient(
            &star,
            0.0,
            &model,
            &PhysicalConstants::default(),
            &Vec3::new(5e3, 0.0, 0.0),
            &Vec3::z(),
        );
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn absorbed_ray_is_flagged() {
        let tracer = Tracer::default();
        let star = NeutronStar::typical();
        let t = tracer.trace_impact(&star, 0.0, 0.5 * star.radius).unwrap();
        assert!(t.absorbed);
        assert_eq!(deflection_from_trajectory(&t), Err(Error::Absorbed));
    }

    #[test]
    fn truncation_is_reported() {
        let mut tracer = Tracer::default();
        tracer.cfg.max_steps = 5;
        let err = tracer
            .trace_impact(&NeutronStar::typical(), 0.0, 5e4)
            .unwrap_err();
        assert!(matches!(err, Error::Truncated { steps: 5, .. }));
    }
}
