//! Independent spectral cross-check: discretize `-d^2/dx^2 + V(x)` with
//! three-point central differences and Dirichlet walls, extract the lowest
//! eigenvalues of the symmetric tridiagonal matrix by Sturm bisection, and
//! compare against the algebraic ladder spectra.
//!
//! The scheme is second order; halving the step cuts the eigenvalue error
//! by about four. Adding a constant to the potential shifts every
//! eigenvalue by exactly that constant on the same grid, which is the
//! backbone of the shape-invariance checks at the differential level.

use serde::{Deserialize, Serialize};

use crate::cyclic::{cs_potential, CsPotentialModel};
use crate::error::{Error, Result};
use crate::translational::{potential_value, PotentialFamily, PotentialModel};

/// Uniform grid of m interior points with Dirichlet boundaries at both
/// ends; the spacing is (x_max - x_min)/(m + 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub x_min: f64,
    pub x_max: f64,
    pub m: usize,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, m: usize) -> Result<Self> {
        if !(x_min < x_max) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::InvalidGrid {
                what: format!("need x_min < x_max, got [{x_min}, {x_max}]"),
            });
        }
        if m < 200 {
            return Err(Error::InvalidGrid {
                what: format!("need at least 200 interior points, got {m}"),
            });
        }
        Ok(Self { x_min, x_max, m })
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.m + 1) as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let h = self.spacing();
        (1..=self.m).map(move |i| self.x_min + i as f64 * h)
    }

    /// The grid with half the spacing on the same interval
    /// (m -> 2m + 1 doubles the resolution exactly).
    pub fn refined(&self) -> Self {
        Self {
            x_min: self.x_min,
            x_max: self.x_max,
            m: 2 * self.m + 1,
        }
    }
}

/// Symmetric tridiagonal discretization of `-d^2/dx^2 + V`: diagonal
/// `2/h^2 + V(x_i)`, off-diagonal `-1/h^2`.
#[derive(Debug, Clone)]
pub struct FdOperator {
    pub diagonal: Vec<f64>,
    pub off_diagonal: f64,
}

impl FdOperator {
    pub fn from_potential(grid: &Grid1D, potential: impl Fn(f64) -> f64) -> Result<Self> {
        let h = grid.spacing();
        let kin = 1.0 / (h * h);
        let diagonal: Vec<f64> = grid.points().map(|x| 2.0 * kin + potential(x)).collect();
        if diagonal.iter().any(|d| !d.is_finite()) {
            return Err(Error::InvalidGrid {
                what: "potential evaluates non-finite on the grid".into(),
            });
        }
        Ok(Self {
            diagonal,
            off_diagonal: -kin,
        })
    }

    /// Eigenvalues of the operator strictly below `lambda` (Sturm count via
    /// the LDL^T pivot signs).
    pub fn count_below(&self, lambda: f64) -> usize {
        let e2 = self.off_diagonal * self.off_diagonal;
        let mut count = 0;
        let mut q = self.diagonal[0] - lambda;
        if q < 0.0 {
            count += 1;
        }
        for &d in &self.diagonal[1..] {
            let safe = if q.abs() < 1e-300 {
                if q >= 0.0 {
                    1e-300
                } else {
                    -1e-300
                }
            } else {
                q
            };
            q = (d - lambda) - e2 / safe;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `count` smallest eigenvalues, ascending, by bisection on the
    /// Sturm count inside the Gershgorin interval.
    pub fn lowest_eigenvalues(&self, count: usize) -> Vec<f64> {
        let radius = 2.0 * self.off_diagonal.abs();
        let lo = self
            .diagonal
            .iter()
            .fold(f64::MAX, |acc, &d| acc.min(d - radius))
            - 1.0;
        let hi = self
            .diagonal
            .iter()
            .fold(f64::MIN, |acc, &d| acc.max(d + radius))
            + 1.0;
        (0..count)
            .map(|j| {
                let mut a = lo;
                let mut b = hi;
                for _ in 0..200 {
                    let mid = 0.5 * (a + b);
                    if (b - a) < 2.0 * f64::EPSILON * mid.abs().max(1.0) {
                        break;
                    }
                    if self.count_below(mid) <= j {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                0.5 * (a + b)
            })
            .collect()
    }
}

/// The `count` smallest eigenvalues of `-d^2/dx^2 + V` on the grid. Only
/// well-resolved low states are trusted: `count` may not exceed m/10.
pub fn fd_eigenvalues(
    grid: &Grid1D,
    potential: impl Fn(f64) -> f64,
    count: usize,
) -> Result<Vec<f64>> {
    if count > grid.m / 10 {
        return Err(Error::CountTooLarge {
            count,
            max: grid.m / 10,
        });
    }
    Ok(FdOperator::from_potential(grid, potential)?.lowest_eigenvalues(count))
}

/// Eigenvalues of an externally sampled potential. The samples must form a
/// uniform grid; the operator is built directly on it, with Dirichlet walls
/// half a step outside the first and last samples.
pub fn fd_eigenvalues_sampled(samples: &[(f64, f64)], count: usize) -> Result<Vec<f64>> {
    if samples.len() < 200 {
        return Err(Error::InvalidGrid {
            what: format!("need at least 200 samples, got {}", samples.len()),
        });
    }
    let h = samples[1].0 - samples[0].0;
    for pair in samples.windows(2) {
        let step = pair[1].0 - pair[0].0;
        if (step - h).abs() > 1e-9 * h.abs().max(1.0) {
            return Err(Error::InvalidGrid {
                what: "potential samples are not uniformly spaced".into(),
            });
        }
    }
    if count > samples.len() / 10 {
        return Err(Error::CountTooLarge {
            count,
            max: samples.len() / 10,
        });
    }
    let kin = 1.0 / (h * h);
    let diagonal: Vec<f64> = samples.iter().map(|&(_, v)| 2.0 * kin + v).collect();
    if diagonal.iter().any(|d| !d.is_finite()) {
        return Err(Error::InvalidGrid {
            what: "sampled potential contains non-finite values".into(),
        });
    }
    let op = FdOperator {
        diagonal,
        off_diagonal: -kin,
    };
    Ok(op.lowest_eigenvalues(count))
}

/// How finite-difference eigenvalues are matched to the algebraic
/// reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CalibrationMode {
    /// Compare level by level directly.
    Identity,
    /// Fit scale and offset from the two lowest levels, then compare the
    /// rest (used where the normalization convention is not pinned).
    Affine,
}

/// Fitted affine calibration between differential and algebraic spectra.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub scale: f64,
    pub offset: f64,
}

/// A potential family routed to the cross-check engine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CrossCheckFamily {
    /// A hierarchy member of one of the linear-gap families.
    Translational {
        family: PotentialFamily,
        k: usize,
        s: usize,
    },
    /// The k = 2 constant-gap pair on the half line.
    CalogeroSutherland { f0: f64, f1: f64, sector: usize },
}

impl CrossCheckFamily {
    pub fn name(&self) -> String {
        match self {
            Self::Translational { family, k, s } => format!("{}[k={k},s={s}]", family.name()),
            Self::CalogeroSutherland { sector, .. } => {
                format!("calogero-sutherland[sector={sector}]")
            }
        }
    }

    /// Grid matched to the family domain.
    pub fn default_grid(&self) -> Grid1D {
        match self {
            Self::Translational { family, .. } => match family {
                PotentialFamily::HarmonicOscillator => Grid1D {
                    x_min: -8.0,
                    x_max: 8.0,
                    m: 2000,
                },
                PotentialFamily::PoschlTeller { .. } => Grid1D {
                    x_min: 0.0,
                    x_max: std::f64::consts::PI,
                    m: 3000,
                },
                PotentialFamily::Morse { .. } => Grid1D {
                    x_min: -3.0,
                    x_max: 9.0,
                    m: 3000,
                },
            },
            Self::CalogeroSutherland { .. } => Grid1D {
                x_min: 1e-4,
                x_max: 20.0,
                m: 4000,
            },
        }
    }

    /// The calibration the family needs: affine for the oscillator (whose
    /// normalization convention is fitted, not assumed), identity
    /// elsewhere.
    pub fn default_mode(&self) -> CalibrationMode {
        match self {
            Self::Translational {
                family: PotentialFamily::HarmonicOscillator,
                ..
            } => CalibrationMode::Affine,
            _ => CalibrationMode::Identity,
        }
    }

    fn potential(&self) -> Result<Box<dyn Fn(f64) -> f64>> {
        match self {
            Self::Translational { family, k, s } => {
                let model = PotentialModel::new(*family, *k, *s)?;
                Ok(Box::new(move |x| {
                    potential_value(&model, x).unwrap_or(f64::NAN)
                }))
            }
            Self::CalogeroSutherland { f0, f1, sector } => {
                let model = CsPotentialModel::new(*f0, *f1, *sector)?;
                Ok(Box::new(move |x| cs_potential(&model, x).unwrap_or(f64::NAN)))
            }
        }
    }

    /// Shape-invariance constant separating this hierarchy member from the
    /// reparametrized base member.
    fn si_constant(&self) -> f64 {
        match self {
            Self::Translational { family, k, s } => {
                let p = family.linear_params();
                let (kf, sf) = (*k as f64, *s as f64);
                0.5 * (kf - 1.0) * sf * (sf * p.a - p.a + 2.0 * p.b)
            }
            Self::CalogeroSutherland { f0, sector, .. } => {
                if *sector == 1 {
                    *f0
                } else {
                    0.0
                }
            }
        }
    }

    /// Algebraic reference spectrum (`count` levels) and the number of
    /// genuinely bound levels when the family terminates.
    fn reference(&self, count: usize) -> (Vec<f64>, Option<usize>) {
        let c = self.si_constant();
        match self {
            Self::Translational { family, s, .. } => match family {
                PotentialFamily::HarmonicOscillator => {
                    ((0..count).map(|n| n as f64).collect(), None)
                }
                PotentialFamily::PoschlTeller { u, v } => {
                    let base = u + v + 2.0 * *s as f64;
                    (
                        (0..count)
                            .map(|n| {
                                let nf = n as f64;
                                nf * (nf + base) + c
                            })
                            .collect(),
                        None,
                    )
                }
                PotentialFamily::Morse { l } => {
                    let l_eff = *l as i64 - *s as i64;
                    let bound = (l_eff.max(-1) + 1) as usize;
                    let two_l = 2.0 * l_eff as f64;
                    (
                        (0..count.min(bound))
                            .map(|n| {
                                let nf = n as f64;
                                nf * (two_l + 2.0 - nf) + c
                            })
                            .collect(),
                        Some(bound),
                    )
                }
            },
            Self::CalogeroSutherland { f0, f1, sector } => {
                // Dirichlet tower of the base member, shifted by the
                // sector's shape-invariance constant
                let start = if *sector == 1 { *f1 } else { *f0 };
                (
                    (0..count)
                        .map(|n| n as f64 * (f0 + f1) + start + c)
                        .collect(),
                    None,
                )
            }
        }
    }
}

/// Outcome of one finite-difference versus algebraic-spectrum comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CrossCheckResult {
    pub family: String,
    pub fd_eigenvalues: Vec<f64>,
    pub reference: Vec<f64>,
    pub calibration: Option<Calibration>,
    pub per_level_error: Vec<f64>,
    pub max_error: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Solve the family's potential on the grid and compare the low spectrum
/// against the algebraic reference.
///
/// Identity mode compares level by level; affine mode fits scale and
/// offset on the two lowest levels and asserts the levels from 2 up. For a
/// terminating (Morse-type) family only the bound levels are compared and
/// box artifacts above the dissociation threshold are dropped.
pub fn crosscheck_family(
    family: &CrossCheckFamily,
    grid: &Grid1D,
    count: usize,
    mode: CalibrationMode,
    tol: f64,
) -> Result<CrossCheckResult> {
    let potential = family.potential()?;
    let (reference, bound) = family.reference(count);

    let fd = match bound {
        None => fd_eigenvalues(grid, &potential, count)?,
        Some(bound_levels) => {
            // fetch a few extra levels, then drop box artifacts above the
            // dissociation threshold (asymptotic potential minus a margin)
            let trusted = count.min(bound_levels);
            let raw = fd_eigenvalues(grid, &potential, trusted + 2)?;
            let threshold = match family {
                CrossCheckFamily::Translational {
                    family: PotentialFamily::Morse { l },
                    s,
                    ..
                } => {
                    let l_eff = *l as f64 - *s as f64;
                    (l_eff + 1.0) * (l_eff + 1.0) + family.si_constant() - 0.5
                }
                _ => f64::MAX,
            };
            raw.into_iter()
                .filter(|&e| e < threshold)
                .take(trusted)
                .collect()
        }
    };

    let levels = fd.len().min(reference.len());
    let (calibration, skip) = match mode {
        CalibrationMode::Identity => (None, 0),
        CalibrationMode::Affine => {
            if levels < 3 {
                return Err(Error::CountTooLarge {
                    count: levels,
                    max: 3,
                });
            }
            let scale = (fd[1] - fd[0]) / (reference[1] - reference[0]);
            let offset = fd[0] - scale * reference[0];
            (Some(Calibration { scale, offset }), 2)
        }
    };

    let per_level_error: Vec<f64> = (0..levels)
        .map(|n| match calibration {
            Some(cal) => (fd[n] - (cal.scale * reference[n] + cal.offset)).abs(),
            None => (fd[n] - reference[n]).abs(),
        })
        .collect();
    let max_error = per_level_error
        .iter()
        .skip(skip)
        .fold(0.0f64, |a, &b| a.max(b));

    Ok(CrossCheckResult {
        family: family.name(),
        fd_eigenvalues: fd,
        reference,
        calibration,
        per_level_error,
        max_error,
        tol,
        pass: max_error <= tol,
    })
}

/// Shape-invariance at the differential level: for each s, the finite-
/// difference spectra of the hierarchy member and of the reparametrized
/// base member differ level by level by exactly the shape-invariance
/// constant (the two potentials differ by that constant pointwise, so the
/// residual is pure discretization-independent roundoff). Returns one
/// residual per sector index.
pub fn shape_shift_check(
    family: &PotentialFamily,
    k: usize,
    grid: &Grid1D,
    count: usize,
) -> Result<Vec<f64>> {
    let p = family.linear_params();
    let kf = k as f64;
    let mut residuals = Vec::with_capacity(k);
    for s in 0..k {
        let sf = s as f64;
        let constant = 0.5 * (kf - 1.0) * sf * (sf * p.a - p.a + 2.0 * p.b);
        let member = PotentialModel::new(*family, k, s)?;
        let shifted_family = match family {
            PotentialFamily::HarmonicOscillator => *family,
            PotentialFamily::PoschlTeller { u, v } => PotentialFamily::PoschlTeller {
                u: u + sf,
                v: v + sf,
            },
            PotentialFamily::Morse { .. } => *family,
        };
        let lhs = fd_eigenvalues(grid, |x| potential_value(&member, x).unwrap_or(f64::NAN), count)?;
        let rhs = match family {
            PotentialFamily::Morse { l } => {
                let l_eff = *l as f64 - sf;
                fd_eigenvalues(
                    grid,
                    |x| {
                        (-2.0 * x).exp() - (2.0 * l_eff + 3.0) * (-x).exp()
                            + (l_eff + 1.0) * (l_eff + 1.0)
                    },
                    count,
                )?
            }
            _ => {
                let base = PotentialModel::new(shifted_family, k, 0)?;
                fd_eigenvalues(grid, |x| potential_value(&base, x).unwrap_or(f64::NAN), count)?
            }
        };
        let residual = lhs
            .iter()
            .zip(&rhs)
            .map(|(a, b)| (a - b - constant).abs())
            .fold(0.0f64, f64::max);
        residuals.push(residual);
    }
    Ok(residuals)
}

/// The k = 2 Calogero-Sutherland differential shape shift: the spectrum of
/// V_1 at `{f0, f1}` minus the spectrum of V_0 at the swapped gaps is f0 on
/// every level.
pub fn cs_shift_check(f0: f64, f1: f64, grid: &Grid1D, count: usize) -> Result<f64> {
    let v1 = CsPotentialModel::new(f0, f1, 1)?;
    let v0_swapped = CsPotentialModel::new(f1, f0, 0)?;
    let lhs = fd_eigenvalues(grid, |x| cs_potential(&v1, x).unwrap_or(f64::NAN), count)?;
    let rhs = fd_eigenvalues(
        grid,
        |x| cs_potential(&v0_swapped, x).unwrap_or(f64::NAN),
        count,
    )?;
    Ok(lhs
        .iter()
        .zip(&rhs)
        .map(|(a, b)| (a - b - f0).abs())
        .fold(0.0f64, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(Grid1D::new(1.0, -1.0, 500).is_err());
        assert!(Grid1D::new(-1.0, 1.0, 100).is_err());
        let g = Grid1D::new(0.0, 1.0, 499).unwrap();
        assert!((g.spacing() - 0.002).abs() < 1e-15);
    }

    #[test]
    fn harmonic_spectrum_is_odd_integers() {
        let grid = Grid1D::new(-8.0, 8.0, 2000).unwrap();
        let eigs = fd_eigenvalues(&grid, |x| x * x, 4).unwrap();
        for (n, e) in eigs.iter().enumerate() {
            let exact = 2.0 * n as f64 + 1.0;
            assert!((e - exact).abs() < 2e-3, "level {n}: {e} vs {exact}");
        }
    }

    #[test]
    fn particle_in_a_box() {
        let grid = Grid1D::new(0.0, std::f64::consts::PI, 300).unwrap();
        let eigs = fd_eigenvalues(&grid, |_| 0.0, 2).unwrap();
        assert!((eigs[0] - 1.0).abs() < 1e-2);
        assert!((eigs[1] - 4.0).abs() < 1e-2);
    }

    #[test]
    fn count_request_is_bounded_by_resolution() {
        let grid = Grid1D::new(-1.0, 1.0, 300).unwrap();
        assert!(matches!(
            fd_eigenvalues(&grid, |_| 0.0, 31),
            Err(Error::CountTooLarge { .. })
        ));
    }

    #[test]
    fn constant_shift_is_exact() {
        // moderate resolution keeps the kinetic diagonal small enough that
        // the shift survives at 1e-12 in absolute terms
        let grid = Grid1D::new(-10.0, 10.0, 250).unwrap();
        let c = 3.7;
        let base = fd_eigenvalues(&grid, |x| (x - 1.0).powi(2), 5).unwrap();
        let shifted = fd_eigenvalues(&grid, |x| (x - 1.0).powi(2) + c, 5).unwrap();
        for (a, b) in base.iter().zip(&shifted) {
            assert!((b - a - c).abs() <= 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn second_order_convergence_on_the_oscillator() {
        let coarse = Grid1D::new(-8.0, 8.0, 500).unwrap();
        let fine = coarse.refined();
        let e_coarse = fd_eigenvalues(&coarse, |x| x * x, 1).unwrap()[0];
        let e_fine = fd_eigenvalues(&fine, |x| x * x, 1).unwrap()[0];
        let ratio = (e_coarse - 1.0).abs() / (e_fine - 1.0).abs();
        assert!((3.5..=4.5).contains(&ratio), "convergence ratio {ratio}");
    }

    #[test]
    fn sampled_potential_matches_direct_solve() {
        let grid = Grid1D::new(-6.0, 6.0, 600).unwrap();
        let direct = fd_eigenvalues(&grid, |x| x * x, 3).unwrap();
        let samples: Vec<(f64, f64)> = grid.points().map(|x| (x, x * x)).collect();
        let sampled = fd_eigenvalues_sampled(&samples, 3).unwrap();
        for (a, b) in direct.iter().zip(&sampled) {
            assert!((a - b).abs() <= 1e-12);
        }
        let mut jagged = samples.clone();
        jagged[10].0 += 0.01;
        assert!(fd_eigenvalues_sampled(&jagged, 3).is_err());
    }

    #[test]
    fn morse_crosscheck_identity_mode() {
        let family = CrossCheckFamily::Translational {
            family: PotentialFamily::Morse { l: 2 },
            k: 2,
            s: 0,
        };
        let result = crosscheck_family(&family, &family.default_grid(), 3,
            family.default_mode(), 5e-3).unwrap();
        assert!(result.pass, "{result:?}");
        // n (6 - n): 0, 5, 8
        assert!((result.fd_eigenvalues[1] - 5.0).abs() < 5e-3);
        assert!((result.fd_eigenvalues[2] - 8.0).abs() < 5e-3);
    }

    #[test]
    fn poschl_teller_crosscheck_identity_mode() {
        let family = CrossCheckFamily::Translational {
            family: PotentialFamily::poschl_teller(2.0, 2.0).unwrap(),
            k: 2,
            s: 0,
        };
        let result = crosscheck_family(&family, &family.default_grid(), 4,
            family.default_mode(), 5e-3).unwrap();
        assert!(result.pass, "{result:?}");
        // n (n + 4): 0, 5, 12, 21
        assert!((result.fd_eigenvalues[3] - 21.0).abs() < 5e-3);
    }

    #[test]
    fn harmonic_crosscheck_affine_mode() {
        let family = CrossCheckFamily::Translational {
            family: PotentialFamily::HarmonicOscillator,
            k: 2,
            s: 0,
        };
        let result = crosscheck_family(&family, &family.default_grid(), 7,
            family.default_mode(), 5e-3).unwrap();
        assert!(result.pass, "{result:?}");
        let cal = result.calibration.unwrap();
        assert!((cal.scale - 2.0).abs() < 5e-3);
        assert!((cal.offset - 1.0).abs() < 5e-3);
    }

    #[test]
    fn calogero_sutherland_dirichlet_tower() {
        let family = CrossCheckFamily::CalogeroSutherland {
            f0: 3.0,
            f1: 1.0,
            sector: 0,
        };
        let result = crosscheck_family(&family, &family.default_grid(), 3,
            family.default_mode(), 2e-2).unwrap();
        // n (f0 + f1) + f0: 3, 7, 11
        assert!(result.pass, "{result:?}");
        assert!((result.fd_eigenvalues[0] - 3.0).abs() < 2e-2);
        assert!((result.fd_eigenvalues[2] - 11.0).abs() < 2e-2);
    }

    #[test]
    fn shape_shift_is_a_constant_at_the_differential_level() {
        let grid = Grid1D::new(-8.0, 8.0, 800).unwrap();
        let residuals =
            shape_shift_check(&PotentialFamily::HarmonicOscillator, 3, &grid, 4).unwrap();
        for (s, r) in residuals.iter().enumerate() {
            assert!(*r <= 1e-8, "s={s}: {r}");
        }
    }

    #[test]
    fn cs_shift_constant_is_f0() {
        let grid = Grid1D::new(1e-4, 20.0, 2000).unwrap();
        let residual = cs_shift_check(3.0, 1.0, &grid, 3).unwrap();
        assert!(residual <= 1e-8, "{residual}");
    }
}
