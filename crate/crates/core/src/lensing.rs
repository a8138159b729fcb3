//! Thin-lens imaging by a magnetized point mass.
//!
//! Image-plane impact parameters ρ map to source-plane offsets through
//! β(ρ) = ρ − D·θ(ρ), with θ the gravitational term plus the magnetic-vacuum
//! term C/ρ⁶. Positive ρ lies on the source side of the lens, negative ρ on the
//! opposite side. Offsets are linear distances in the lens plane.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{invalid, Error, Result};
use crate::physics::{FieldConvention, FieldProjection, NeutronStar, Vec3};
use crate::ray_tracer::BornKernel;

/// Number of log-spaced probe points used to bracket image roots.
pub const PROBE_POINTS: usize = 512;

/// Relative bisection tolerance for image positions.
pub const ROOT_REL_TOL: f64 = 1e-12;

/// Below this relative size of the magnetic term, flux ratios use first-order
/// perturbation theory instead of two independent image solves.
const LINEAR_RESPONSE_LIMIT: f64 = 1e-6;

/// Coefficient C (rad m⁶) of the magnetic bending θ_m(ρ) = C/ρ⁶.
///
/// `impact_dir` points from the lens to the closest-approach point and
/// `propagation` along the ray; the star's dipole axis at `phase` is expressed
/// in that frame. With [`FieldConvention::PaperEq2`] the aligned-dipole value is
/// 5πaB₀²ρ₀⁶ and other orientations scale with the straight-path kernel.
/// The other conventions use the kernel magnitude with the corresponding
/// dipole normalization.
pub fn magnetic_coefficient(
    star: &NeutronStar,
    phase: f64,
    a: f64,
    projection: FieldProjection,
    impact_dir: &Vec3,
    propagation: &Vec3,
) -> f64 {
    if star.surface_field == 0.0 || a == 0.0 {
        return 0.0;
    }
    let d = star.dipole_axis_at(phase);
    let y = propagation.cross(impact_dir);
    let local = Vec3::new(d.dot(impact_dir), d.dot(&y), d.dot(propagation));
    let kernel = BornKernel::for_projection(projection);
    let strength = kernel.strength(&local);
    let b0 = star.surface_field;
    let r3 = star.radius.powi(3);
    match star.field_convention {
        FieldConvention::PaperEq2 => {
            5.0 * PI * a * b0 * b0 * r3 * r3 * strength / kernel.aligned_strength()
        }
        FieldConvention::Equatorial => a * (b0 * r3).powi(2) * strength,
        FieldConvention::Polar => a * (0.5 * b0 * r3).powi(2) * strength,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LensConfiguration {
    pub lens: NeutronStar,
    /// Observer → lens distance (m).
    pub d_l: f64,
    /// Observer → source distance (m).
    pub d_s: f64,
    pub a_coupling: f64,
    pub projection: FieldProjection,
    pub constants: PhysicalConstants,
}

impl LensConfiguration {
    pub fn new(lens: NeutronStar, d_l: f64, d_s: f64, a_coupling: f64) -> Result<Self> {
        let cfg = Self {
            lens,
            d_l,
            d_s,
            a_coupling,
            projection: FieldProjection::default(),
            constants: PhysicalConstants::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Lens placed so that D_L(D_S − D_L)/D_S equals `d_eff`, with D_L = `d_l`.
    pub fn with_effective_distance(
        lens: NeutronStar,
        d_l: f64,
        d_eff: f64,
        a_coupling: f64,
    ) -> Result<Self> {
        if !(d_eff > 0.0 && d_eff < d_l) {
            return Err(invalid("d_eff", "must lie in (0, D_L)"));
        }
        let d_s = d_l * d_l / (d_l - d_eff);
        Self::new(lens, d_l, d_s, a_coupling)
    }

    pub fn validate(&self) -> Result<()> {
        self.lens.validate()?;
        if !(self.d_l > 0.0 && self.d_s > self.d_l && self.d_s.is_finite()) {
            return Err(Error::Domain(format!(
                "lens distances must satisfy 0 < D_L < D_S (got D_L = {}, D_S = {})",
                self.d_l, self.d_s
            )));
        }
        if !(self.a_coupling >= 0.0) {
            return Err(invalid("a_coupling", "must be non-negative"));
        }
        Ok(())
    }

    /// D = D_L(D_S − D_L)/D_S.
    pub fn effective_distance(&self) -> f64 {
        self.d_l * (self.d_s - self.d_l) / self.d_s
    }

    pub fn einstein_radius(&self) -> f64 {
        (self.constants.four_gm_over_c2(self.lens.mass) * self.effective_distance()).sqrt()
    }

    /// Lens mapping with the line of sight along +z and the source side along +x.
    pub fn mapping(&self, spin_phase: f64) -> LensMapping {
        LensMapping::for_geometry(
            &self.lens,
            spin_phase,
            self.a_coupling,
            self.projection,
            &self.constants,
            self.effective_distance(),
            &Vec3::x(),
            &Vec3::z(),
        )
    }
}

/// R_E = √(4GM·D/c²) for D = D_L(D_S − D_L)/D_S.
pub fn einstein_radius(
    mass: f64,
    d_l: f64,
    d_s: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    if !(d_l > 0.0 && d_s > d_l) {
        return Err(Error::Domain(format!(
            "lens distances must satisfy 0 < D_L < D_S (got D_L = {d_l}, D_S = {d_s})"
        )));
    }
    Ok((constants.four_gm_over_c2(mass) * d_l * (d_s - d_l) / d_s).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceOffset {
    /// Transverse lens–line-of-sight distance (m).
    pub rho_s: f64,
    /// ρ_S / R_E.
    pub u: f64,
}

impl SourceOffset {
    pub fn from_rho(rho_s: f64, einstein_radius: f64) -> Self {
        Self {
            rho_s,
            u: rho_s / einstein_radius,
        }
    }

    pub fn from_u(u: f64, einstein_radius: f64) -> Self {
        Self {
            rho_s: u * einstein_radius,
            u,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImageSolution {
    /// Signed image-plane impact parameter (m).
    pub image_impact: f64,
    pub magnification: f64,
    pub parity: i8,
}

pub fn total_magnification(images: &[ImageSolution]) -> f64 {
    images.iter().map(|i| i.magnification).sum()
}

/// Axisymmetric lens mapping β(ρ) = ρ − R_E²/ρ − D·C_±/ρ⁶ (odd in ρ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LensMapping {
    pub einstein_radius: f64,
    pub d_eff: f64,
    /// Magnetic coefficients C (rad m⁶) on the source side and the far side.
    pub magnetic: [f64; 2],
    /// Images with |ρ| below this radius are absorbed by the star.
    pub radius: f64,
}

/// Outcome of comparing total and gravity-only magnification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxRatio {
    /// ln(A_total / A_gravity_only); −∞ when every image is absorbed.
    pub ln_ratio: f64,
    /// Impact parameter of the brightest surviving image.
    pub primary_impact: Option<f64>,
    pub absorbed: bool,
}

fn side(rho: f64) -> usize {
    if rho >= 0.0 {
        0
    } else {
        1
    }
}

impl LensMapping {
    #[allow(clippy::too_many_arguments)]
    pub fn for_geometry(
        star: &NeutronStar,
        spin_phase: f64,
        a: f64,
        projection: FieldProjection,
        constants: &PhysicalConstants,
        d_eff: f64,
        impact_dir: &Vec3,
        propagation: &Vec3,
    ) -> Self {
        let pos = magnetic_coefficient(star, spin_phase, a, projection, impact_dir, propagation);
        let neg = magnetic_coefficient(star, spin_phase, a, projection, &-impact_dir, propagation);
        Self {
            einstein_radius: (constants.four_gm_over_c2(star.mass) * d_eff).sqrt(),
            d_eff,
            magnetic: [pos, neg],
            radius: star.radius,
        }
    }

    pub fn gravity_only(&self) -> Self {
        Self {
            magnetic: [0.0, 0.0],
            ..*self
        }
    }

    /// Magnetic bending angle at signed impact ρ.
    pub fn magnetic_angle(&self, rho: f64) -> f64 {
        self.magnetic[side(rho)] / rho.powi(6)
    }

    /// Source-plane offset for image-plane impact ρ.
    pub fn beta(&self, rho: f64) -> f64 {
        let re2 = self.einstein_radius * self.einstein_radius;
        rho - re2 / rho - rho.signum() * self.d_eff * self.magnetic_angle(rho)
    }

    pub fn dbeta(&self, rho: f64) -> f64 {
        let re2 = self.einstein_radius * self.einstein_radius;
        let a = rho.abs();
        1.0 + re2 / (rho * rho) + 6.0 * self.d_eff * self.magnetic[side(rho)] / a.powi(7)
    }

    fn image_at(&self, rho: f64, rho_s: f64) -> ImageSolution {
        let inv = rho_s * self.dbeta(rho) / rho;
        let magnification = if inv == 0.0 {
            f64::INFINITY
        } else {
            1.0 / inv.abs()
        };
        let parity = if rho_s == 0.0 {
            rho.signum() as i8
        } else if inv > 0.0 {
            1
        } else {
            -1
        };
        ImageSolution {
            image_impact: rho,
            magnification,
            parity,
        }
    }

    /// All images outside the star for source offset `rho_s ≥ 0`.
    pub fn images(&self, rho_s: f64) -> Vec<ImageSolution> {
        let lo = self.radius;
        let hi = 1e3 * self.einstein_radius.max(rho_s).max(self.radius);
        let (la, lb) = (lo.ln(), hi.ln());
        let probes: Vec<f64> = (0..PROBE_POINTS)
            .map(|i| (la + (lb - la) * i as f64 / (PROBE_POINTS - 1) as f64).exp())
            .collect();
        let mut out = Vec::new();
        for sign in [1.0, -1.0] {
            // Root of β(sign·x) − ρ_S for x in [ρ₀, hi].
            let g = |x: f64| self.beta(sign * x) - rho_s;
            let mut prev = (probes[0], g(probes[0]));
            if prev.1 == 0.0 {
                out.push(self.image_at(sign * prev.0, rho_s));
            }
            for &x in &probes[1..] {
                let gx = g(x);
                if gx == 0.0 {
                    out.push(self.image_at(sign * x, rho_s));
                } else if prev.1 != 0.0 && (prev.1 < 0.0) != (gx < 0.0) {
                    let root = refine_root(&g, prev.0, x, prev.1);
                    out.push(self.image_at(sign * root, rho_s));
                }
                prev = (x, gx);
            }
        }
        out.sort_by(|a, b| b.image_impact.total_cmp(&a.image_impact));
        out
    }

    /// Point-lens image positions (ρ₊, ρ₋) for the gravity-only mapping.
    fn point_lens_images(&self, rho_s: f64) -> (f64, f64) {
        let re = self.einstein_radius;
        let disc = (rho_s * rho_s + 4.0 * re * re).sqrt();
        let plus = 0.5 * (rho_s + disc);
        // ρ₋ = −R_E²/ρ₊ without cancellation.
        let minus = if plus > 0.0 { -re * re / plus } else { 0.0 };
        (plus, minus)
    }

    /// ln(A_total/A_gravity) at source offset `rho_s`, images inside the star dropped.
    pub fn flux_ratio(&self, rho_s: f64) -> FluxRatio {
        let rho_s = rho_s
            .max(1e-9 * self.einstein_radius)
            .max(f64::MIN_POSITIVE);
        let visible = self.visible_point_images(rho_s);
        let re2 = self.einstein_radius * self.einstein_radius;
        let coupling = visible
            .iter()
            .map(|&r| {
                let a = r.abs();
                let eps = self.d_eff * self.magnetic[side(r)] / a.powi(6);
                (eps / (a + re2 / a)).max(6.0 * eps / a / (1.0 + re2 / (a * a)))
            })
            .fold(0.0_f64, f64::max);

        if coupling < LINEAR_RESPONSE_LIMIT {
            self.flux_ratio_linear(rho_s)
        } else {
            self.flux_ratio_full(rho_s)
        }
    }

    fn visible_point_images(&self, rho_s: f64) -> Vec<f64> {
        let (plus, minus) = self.point_lens_images(rho_s);
        [plus, minus]
            .into_iter()
            .filter(|r| r.abs() >= self.radius)
            .collect()
    }

    /// First-order perturbation of the point-lens images in the magnetic term.
    pub fn flux_ratio_linear(&self, rho_s: f64) -> FluxRatio {
        let rho_s = rho_s
            .max(1e-9 * self.einstein_radius)
            .max(f64::MIN_POSITIVE);
        let visible = self.visible_point_images(rho_s);
        let re2 = self.einstein_radius * self.einstein_radius;
        if visible.is_empty() {
            return FluxRatio {
                ln_ratio: f64::NEG_INFINITY,
                primary_impact: None,
                absorbed: true,
            };
        }
        let mut total = 0.0;
        let mut delta = 0.0;
        for &r in &visible {
            let eps = self.d_eff * self.magnetic[side(r)];
            let a = r.abs();
            let bp = 1.0 + re2 / (r * r);
            let h = r.signum() / a.powi(6);
            let drho = h / bp;
            let dbp = -2.0 * re2 / (r * r * r) * drho + 6.0 / a.powi(7);
            let mu = r / (rho_s * bp);
            let dmu = (drho * bp - r * dbp) / (rho_s * bp * bp);
            total += mu.abs();
            delta += mu.signum() * dmu * eps;
        }
        FluxRatio {
            ln_ratio: (delta / total).ln_1p(),
            primary_impact: Some(visible[0]),
            absorbed: false,
        }
    }

    /// Independent image solves with and without the magnetic term.
    pub fn flux_ratio_full(&self, rho_s: f64) -> FluxRatio {
        let rho_s = rho_s
            .max(1e-9 * self.einstein_radius)
            .max(f64::MIN_POSITIVE);
        let visible = self.visible_point_images(rho_s);
        let with_field = self.images(rho_s);
        let a_tot = total_magnification(&with_field);
        let a_grav: f64 = visible
            .iter()
            .map(|&r| self.gravity_only().image_at(r, rho_s).magnification)
            .sum();
        let primary = with_field
            .iter()
            .max_by(|a, b| a.magnification.total_cmp(&b.magnification))
            .map(|i| i.image_impact);
        if a_tot == 0.0 || a_grav == 0.0 {
            return FluxRatio {
                ln_ratio: if a_tot == 0.0 { f64::NEG_INFINITY } else { 0.0 },
                primary_impact: primary,
                absorbed: a_tot == 0.0,
            };
        }
        FluxRatio {
            ln_ratio: a_tot.ln() - a_grav.ln(),
            primary_impact: primary,
            absorbed: false,
        }
    }
}

/// Bisection to [`ROOT_REL_TOL`] followed by guarded Newton polishing.
fn refine_root<G: Fn(f64) -> f64>(g: &G, mut lo: f64, mut hi: f64, mut glo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= ROOT_REL_TOL * mid {
            break;
        }
        let gm = g(mid);
        if gm == 0.0 {
            return mid;
        }
        if (gm < 0.0) == (glo < 0.0) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..3 {
        let h = 1e-7 * x;
        let d = (g(x + h) - g(x - h)) / (2.0 * h);
        let next = x - g(x) / d;
        if !(next.is_finite() && next >= lo && next <= hi) {
            break;
        }
        x = next;
    }
    x
}

/// Source offset for image impact `image_impact` (signed) at rotational phase `spin_phase`.
pub fn reduced_deflection(
    config: &LensConfiguration,
    image_impact: f64,
    spin_phase: f64,
) -> Result<f64> {
    if image_impact.abs() < config.lens.radius {
        return Err(Error::Absorbed);
    }
    Ok(config.mapping(spin_phase).beta(image_impact))
}

/// Images for `source`; empty when nothing survives outside the star.
pub fn solve_images(
    config: &LensConfiguration,
    source: &SourceOffset,
    spin_phase: f64,
) -> Result<Vec<ImageSolution>> {
    if !(source.rho_s >= 0.0) {
        return Err(invalid("rho_S", "must be non-negative"));
    }
    Ok(config.mapping(spin_phase).images(source.rho_s))
}

/// A(u) = (u² + 2)/(u√(u² + 4)).
pub fn point_lens_magnification(u: f64) -> Result<f64> {
    if !(u > 0.0) {
        return Err(Error::Domain(format!(
            "point-lens magnification diverges at u = {u}"
        )));
    }
    if u > 1e6 {
        // 1 + 2/u⁴ to leading order; avoids catastrophic rounding.
        return Ok(1.0 + 2.0 / u.powi(4));
    }
    Ok((u * u + 2.0) / (u * (u * u + 4.0).sqrt()))
}

/// Smallest B₀ for which the magnetic bending at ρ = R_E reaches
/// `target_fraction` of the gravitational bending there.
pub fn field_threshold_for_effect(config: &LensConfiguration, target_fraction: f64) -> Result<f64> {
    if !(target_fraction > 0.0 && target_fraction < 1.0) {
        return Err(invalid("target_fraction", "must lie in (0, 1)"));
    }
    config.validate()?;
    let re = config.einstein_radius();
    if !(re > config.lens.radius) {
        return Err(Error::Bracket(format!(
            "Einstein radius {re:.3e} m is inside the star; the ratio at R_E is undefined"
        )));
    }
    let theta_g = config.constants.four_gm_over_c2(config.lens.mass) / re;
    let ratio = |b0: f64| -> Result<f64> {
        let star = config.lens.with_surface_field(b0)?;
        let c = magnetic_coefficient(
            &star,
            0.0,
            config.a_coupling,
            config.projection,
            &Vec3::x(),
            &Vec3::z(),
        );
        Ok(c / re.powi(6) / theta_g)
    };

    let mut lo = 1.0_f64;
    let mut tries = 0;
    while ratio(lo)? >= target_fraction {
        lo *= 1e-3;
        tries += 1;
        if tries > 100 {
            return Err(Error::Bracket("threshold lies below 1e-300 T".into()));
        }
    }
    let mut hi = 1e20_f64;
    tries = 0;
    while ratio(hi)? < target_fraction {
        hi *= 1e3;
        tries += 1;
        if tries > 90 || !hi.is_finite() {
            return Err(Error::Bracket(format!(
                "no field up to {hi:.1e} T reaches fraction {target_fraction} (coupling a = {})",
                config.a_coupling
            )));
        }
    }
    while hi / lo - 1.0 > 1e-13 {
        let mid = (lo * hi).sqrt();
        if ratio(mid)? < target_fraction {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{KILOPARSEC, SOLAR_MASS};

    fn sun_lens(b0: f64) -> LensConfiguration {
        let star = NeutronStar::new(SOLAR_MASS, 1e4, b0).unwrap();
        LensConfiguration::with_effective_distance(star, 2.0 * KILOPARSEC, KILOPARSEC, 5e-24)
            .unwrap()
    }

    #[test]
    fn einstein_radius_values() {
        let k = PhysicalConstants::default();
        let cfg = sun_lens(0.0);
        assert!((cfg.effective_distance() / KILOPARSEC - 1.0).abs() < 1e-12);
        let re = cfg.einstein_radius();
        let direct = (4.0 * k.g * SOLAR_MASS / (k.c * k.c) * 3.086e19).sqrt();
        assert!((re / direct - 1.0).abs() < 1e-4);
        assert!((re / 4.27e11 - 1.0).abs() < 5e-3);
        let r1 = einstein_radius(SOLAR_MASS, 1e19, 2e19, &k).unwrap();
        let r4 = einstein_radius(4.0 * SOLAR_MASS, 1e19, 2e19, &k).unwrap();
        assert!((r4 / r1 - 2.0).abs() < 1e-12);
        let near = einstein_radius(SOLAR_MASS, 1e19, 1e19 * (1.0 + 1e-12), &k).unwrap();
        assert!(near < 1e-5 * r1);
        assert!(einstein_radius(SOLAR_MASS, 2e19, 1e19, &k).is_err());
        assert!(LensConfiguration::new(NeutronStar::typical(), 1e19, 1e19, 5e-24).is_err());
    }

    #[test]
    fn point_lens_mapping_and_ring() {
        let cfg = sun_lens(0.0);
        let re = cfg.einstein_radius();
        assert!(reduced_deflection(&cfg, re, 0.0).unwrap().abs() < 1e-12 * re);
        let rho = 2.7 * re;
        let beta = reduced_deflection(&cfg, rho, 0.0).unwrap();
        assert!((beta - (rho - re * re / rho)).abs() < 1e-12 * re);
        assert_eq!(reduced_deflection(&cfg, 10.0, 0.0), Err(Error::Absorbed));
    }

    #[test]
    fn magnetic_term_shift() {
        let cfg = sun_lens(1e12);
        let grav = sun_lens(0.0);
        let rho = 2e4;
        let shift = reduced_deflection(&grav, rho, 0.0).unwrap()
            - reduced_deflection(&cfg, rho, 0.0).unwrap();
        let expect = 5.0 * PI * 5e-24 * 1e24 * 1e24 / rho.powi(6) * cfg.effective_distance();
        assert!((shift / expect - 1.0).abs() < 1e-9, "{shift} vs {expect}");
    }

    #[test]
    fn aligned_ring_and_golden_images() {
        let cfg = sun_lens(0.0);
        let re = cfg.einstein_radius();
        let ring = solve_images(&cfg, &SourceOffset::from_u(0.0, re), 0.0).unwrap();
        assert_eq!(ring.len(), 2);
        for img in &ring {
            assert!((img.image_impact.abs() / re - 1.0).abs() < 1e-10);
            assert!(img.magnification.is_infinite());
        }
        let imgs = solve_images(&cfg, &SourceOffset::from_u(1.0, re), 0.0).unwrap();
        assert_eq!(imgs.len(), 2);
        let phi = 0.5 * (1.0 + 5f64.sqrt());
        assert!((imgs[0].image_impact / (phi * re) - 1.0).abs() < 1e-9);
        assert!((imgs[1].image_impact / ((1.0 - phi) * re) - 1.0).abs() < 1e-9);
        assert_eq!((imgs[0].parity, imgs[1].parity), (1, -1));
    }

    #[test]
    fn weak_lensing_limit() {
        let cfg = sun_lens(0.0);
        let re = cfg.einstein_radius();
        let imgs = solve_images(&cfg, &SourceOffset::from_u(100.0, re), 0.0).unwrap();
        let main = imgs
            .iter()
            .max_by(|a, b| a.magnification.total_cmp(&b.magnification))
            .unwrap();
        assert!((main.image_impact / (100.0 * re) - 1.0).abs() < 1e-3);
        assert!((main.magnification - 1.0).abs() < 1e-3);
    }

    #[test]
    fn closed_form_magnification() {
        assert!((point_lens_magnification(1.0).unwrap() - 3.0 / 5f64.sqrt()).abs() < 1e-15);
        assert!((point_lens_magnification(1e8).unwrap() - 1.0).abs() < 1e-15);
        assert!(point_lens_magnification(0.0).is_err());
    }

    #[test]
    fn threshold_closed_form() {
        let cfg = sun_lens(0.0);
        let b = field_threshold_for_effect(&cfg, 0.05).unwrap();
        let re = cfg.einstein_radius();
        let theta_g = cfg.constants.four_gm_over_c2(SOLAR_MASS) / re;
        let exact = (0.05 * theta_g * re.powi(6) / (5.0 * PI * 5e-24 * 1e24)).sqrt();
        assert!((b / exact - 1.0).abs() < 1e-10);
        assert!(field_threshold_for_effect(&cfg, 1e-12).unwrap() < b);
        assert!(field_threshold_for_effect(&cfg, 0.0).is_err());
        assert!(field_threshold_for_effect(&cfg, 1.0).is_err());
    }

    #[test]
    fn zero_coupling_never_brackets() {
        let mut cfg = sun_lens(0.0);
        cfg.a_coupling = 0.0;
        assert!(matches!(
            field_threshold_for_effect(&cfg, 0.05),
            Err(Error::Bracket(_))
        ));
    }

    #[test]
    fn linear_response_matches_full_solve() {
        // Binary-like geometry with a field large enough that both routes resolve the effect.
        let k = PhysicalConstants::default();
        let star = NeutronStar::new(1.4 * SOLAR_MASS, 1e4, 3e14).unwrap();
        let d_eff = 9e8;
        let map = LensMapping::for_geometry(
            &star,
            0.0,
            5e-24,
            FieldProjection::TransverseBSquared,
            &k,
            d_eff,
            &Vec3::x(),
            &Vec3::z(),
        );
        let rho_s = 1.2 * map.einstein_radius;
        let linear = map.flux_ratio_linear(rho_s).ln_ratio;
        let full = map.flux_ratio_full(rho_s).ln_ratio;
        assert!(linear.abs() > 1e-12);
        assert!(
            (linear / full - 1.0).abs() < 1e-3,
            "linear {linear:e} full {full:e}"
        );
    }

    #[test]
    fn zero_field_ratio_is_exactly_one() {
        let k = PhysicalConstants::default();
        let star = NeutronStar::new(1.4 * SOLAR_MASS, 1e4, 0.0).unwrap();
        let map = LensMapping::for_geometry(
            &star,
            0.0,
            5e-24,
            FieldProjection::TransverseBSquared,
            &k,
            9e8,
            &Vec3::x(),
            &Vec3::z(),
        );
        for f in [0.0, 0.3, 1.0, 7.0] {
            assert_eq!(map.flux_ratio(f * map.einstein_radius).ln_ratio, 0.0);
        }
    }
}
