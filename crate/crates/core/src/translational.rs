//! The linear-gap specialization `f(n) = a n + b`: closed-form spectra and
//! their classification, the hierarchy shift identity linking the sector
//! Hamiltonians, the explicit harmonic / Poschl-Teller / Morse potential
//! hierarchies, the translational shape-invariance condition, and the
//! generic shape-invariance energy accumulator.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::susy::sector_symbol;
use crate::StructureSpec;

/// Linear gap parameters. Admissible cases: `a = 0, b > 0` (infinite
/// evenly-gapped spectrum), `a > 0, b >= 0` (infinite), `a < 0, b >= 0`
/// (finite). `a > 0, b = 0` is admissible but carries a vanishing first
/// gap, which reports should flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearParams {
    pub a: f64,
    pub b: f64,
}

impl LinearParams {
    pub fn new(a: f64, b: f64) -> Self {
        Self { a, b }
    }

    pub fn admissible(&self) -> bool {
        (self.a == 0.0 && self.b > 0.0)
            || (self.a > 0.0 && self.b >= 0.0)
            || (self.a < 0.0 && self.b >= 0.0)
    }

    /// The first gap f(0) = b vanishes; accepted but worth surfacing.
    pub fn degenerate_first_gap(&self) -> bool {
        self.a > 0.0 && self.b == 0.0
    }

    pub fn spec(&self) -> StructureSpec {
        StructureSpec::Linear {
            a: self.a,
            b: self.b,
        }
    }
}

/// `F(n, a, b) = (1/2) a n (n-1) + b n`, the eigenvalue of X+X- at level n.
pub fn linear_f(n: usize, p: LinearParams) -> f64 {
    let n = n as f64;
    0.5 * p.a * n * (n - 1.0) + p.b * n
}

/// Whether the ladder spectrum terminates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectrumClass {
    Infinite,
    /// Levels run 0..=cutoff with cutoff = floor(-b/a).
    Finite { cutoff: usize },
}

/// Classify the spectrum of X+X- for linear gaps. Negative slope gives a
/// finite ladder cut at floor(-b/a); an exactly integral -b/a is rejected
/// because the top gap would vanish.
pub fn classify_spectrum(p: LinearParams) -> Result<SpectrumClass> {
    if !p.admissible() {
        return Err(Error::InadmissibleLinear { a: p.a, b: p.b });
    }
    if p.a >= 0.0 {
        return Ok(SpectrumClass::Infinite);
    }
    let ratio = -p.b / p.a;
    if ratio == ratio.floor() {
        return Err(Error::DegenerateCutoff {
            a: p.a,
            b: p.b,
            ratio,
        });
    }
    Ok(SpectrumClass::Finite {
        cutoff: ratio.floor() as usize,
    })
}

/// Hierarchy shift identity: as diagonal operators,
/// `H_{k-s}(N, a, b) = H_0(N, a, b + s a) + (1/2)(k-1) s (s a - a + 2 b)`
/// for every s in 0..k. Returns the maximum discrepancy over levels
/// 0..=n_max.
pub fn sector_shift_check(k: usize, p: LinearParams, n_max: usize) -> f64 {
    let spec = p.spec();
    let mut worst = 0.0f64;
    for s in 0..k {
        let shifted = LinearParams::new(p.a, p.b + s as f64 * p.a).spec();
        let constant = 0.5 * (k - 1) as f64 * s as f64 * (s as f64 * p.a - p.a + 2.0 * p.b);
        for n in 0..=n_max {
            let lhs = sector_symbol(&spec, k, k - s, n);
            let rhs = sector_symbol(&shifted, k, k, n) + constant;
            worst = worst.max((lhs - rhs).abs());
        }
    }
    worst
}

/// The three explicit solvable families realizing the linear cases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PotentialFamily {
    /// a = 0, b = 1.
    HarmonicOscillator,
    /// a = 2, b = u + v + 1, with u > 1 and v > 1; domain (0, pi).
    PoschlTeller { u: f64, v: f64 },
    /// a = -2, b = 2l + 1.
    Morse { l: u32 },
}

impl PotentialFamily {
    pub fn poschl_teller(u: f64, v: f64) -> Result<Self> {
        if u <= 1.0 || v <= 1.0 {
            return Err(Error::InvalidParameter {
                what: format!("Poschl-Teller needs u > 1 and v > 1, got u = {u}, v = {v}"),
            });
        }
        Ok(Self::PoschlTeller { u, v })
    }

    /// The linear gap parameters this family realizes.
    pub fn linear_params(&self) -> LinearParams {
        match self {
            Self::HarmonicOscillator => LinearParams::new(0.0, 1.0),
            Self::PoschlTeller { u, v } => LinearParams::new(2.0, u + v + 1.0),
            Self::Morse { l } => LinearParams::new(-2.0, 2.0 * *l as f64 + 1.0),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::HarmonicOscillator => "harmonic-oscillator",
            Self::PoschlTeller { .. } => "poschl-teller",
            Self::Morse { .. } => "morse",
        }
    }

    /// Default pointwise sample grid clear of the domain singularities.
    pub fn default_grid(&self) -> Vec<f64> {
        let (lo, hi) = match self {
            Self::HarmonicOscillator => (-4.0, 4.0),
            Self::PoschlTeller { .. } => (0.1 * PI, 0.9 * PI),
            Self::Morse { .. } => (-2.0, 6.0),
        };
        (0..41).map(|i| lo + (hi - lo) * i as f64 / 40.0).collect()
    }
}

/// One member of a potential hierarchy: the picked family at sector index
/// s (in 0..k) of the order-k construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialModel {
    pub family: PotentialFamily,
    pub k: usize,
    pub s: usize,
}

impl PotentialModel {
    pub fn new(family: PotentialFamily, k: usize, s: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidOrder { k });
        }
        if s >= k {
            return Err(Error::InvalidParameter {
                what: format!("sector s = {s} out of range for k = {k}"),
            });
        }
        Ok(Self { family, k, s })
    }
}

fn ho_hierarchy(k: f64, s: f64, x: f64) -> f64 {
    x * x + 0.5 * (k - 1.0) * (2.0 * s - k + 2.0)
}

fn pt_hierarchy(k: f64, s: f64, u: f64, v: f64, x: f64) -> f64 {
    let half = x / 2.0;
    let sin2 = half.sin().powi(2);
    let cos2 = half.cos().powi(2);
    0.25 * ((u + s + 1.0 - k / 2.0) * (u + s - k / 2.0) / sin2
        + (v + s + 1.0 - k / 2.0) * (v + s - k / 2.0) / cos2)
        - 0.25 * (u + v + 2.0 * s + 2.0 - k).powi(2)
        + (k - 1.0) * (k - 2.0) * (2.0 * k - 3.0 * u - 3.0 * v - 3.0) / 6.0
        + (k - 1.0) * s * (s - k + u + v + 2.0)
}

fn morse_hierarchy(k: f64, s: f64, l: f64, x: f64) -> f64 {
    (-2.0 * x).exp() - (2.0 * l + k + 1.0 - 2.0 * s) * (-x).exp()
        + 0.25 * (2.0 * l + k - 2.0 * s).powi(2)
        - (k - 1.0) * (k - 2.0) * (2.0 * k + 6.0 * l + 3.0) / 6.0
        + (k - 1.0) * s * (k - s + 2.0 * l)
}

fn family_value(family: &PotentialFamily, k: f64, s: f64, x: f64) -> Result<f64> {
    match family {
        PotentialFamily::HarmonicOscillator => Ok(ho_hierarchy(k, s, x)),
        PotentialFamily::PoschlTeller { u, v } => {
            if x <= 0.0 || x >= PI {
                return Err(Error::PotentialDomain {
                    family: "poschl-teller",
                    x,
                });
            }
            Ok(pt_hierarchy(k, s, *u, *v, x))
        }
        PotentialFamily::Morse { l } => Ok(morse_hierarchy(k, s, *l as f64, x)),
    }
}

/// Evaluate the hierarchy potential V_{k-s}(x) of the model's family.
pub fn potential_value(model: &PotentialModel, x: f64) -> Result<f64> {
    family_value(&model.family, model.k as f64, model.s as f64, x)
}

/// Sampled (x, V) pairs for export toward the finite-difference engine or
/// external plotting.
pub fn sample_potential(model: &PotentialModel, xs: &[f64]) -> Result<Vec<(f64, f64)>> {
    xs.iter()
        .map(|&x| potential_value(model, x).map(|v| (x, v)))
        .collect()
}

/// Translational shape invariance of the potentials:
/// `V_{k-s}(x, a, b) = V_0(x, a, b + s a) + (1/2)(k-1) s (s a - a + 2 b)`
/// pointwise over the sample grid, for every s in 0..k. The b-shift
/// realizes as (u, v) -> (u+s, v+s) for Poschl-Teller (b = u + v + 1,
/// a = 2) and as l -> l - s for Morse. Returns the max residual.
pub fn verify_translational_si(family: &PotentialFamily, k: usize, xs: &[f64]) -> Result<f64> {
    let p = family.linear_params();
    let kf = k as f64;
    let mut worst = 0.0f64;
    for s in 0..k {
        let sf = s as f64;
        let constant = 0.5 * (kf - 1.0) * sf * (sf * p.a - p.a + 2.0 * p.b);
        for &x in xs {
            let lhs = family_value(family, kf, sf, x)?;
            let rhs = match family {
                PotentialFamily::HarmonicOscillator => ho_hierarchy(kf, 0.0, x),
                PotentialFamily::PoschlTeller { u, v } => {
                    pt_hierarchy(kf, 0.0, u + sf, v + sf, x)
                }
                // the Morse shift b + s a lowers l by s, possibly below zero
                PotentialFamily::Morse { l } => morse_hierarchy(kf, 0.0, *l as f64 - sf, x),
            };
            worst = worst.max((lhs - (rhs + constant)).abs());
        }
    }
    Ok(worst)
}

/// A shape-invariance parameter flow: the reparametrization h and the
/// level constant R it accumulates.
pub struct ShapeFlow<P> {
    reparam: Box<dyn Fn(&P) -> P>,
    level_constant: Box<dyn Fn(&P) -> f64>,
}

impl<P: Clone> ShapeFlow<P> {
    pub fn new(
        reparam: impl Fn(&P) -> P + 'static,
        level_constant: impl Fn(&P) -> f64 + 'static,
    ) -> Self {
        Self {
            reparam: Box::new(reparam),
            level_constant: Box::new(level_constant),
        }
    }

    pub fn reparametrize(&self, p: &P) -> P {
        (self.reparam)(p)
    }

    pub fn level_constant(&self, p: &P) -> f64 {
        (self.level_constant)(p)
    }
}

/// Accumulated shape-invariance energy `E_n = sum_{l=0..n-1} R(h^(l)(a_0))`
/// with E_0 = 0.
pub fn si_energies<P: Clone>(flow: &ShapeFlow<P>, a0: &P, n: usize) -> f64 {
    let mut params = a0.clone();
    let mut acc = 0.0;
    for _ in 0..n {
        acc += flow.level_constant(&params);
        params = flow.reparametrize(&params);
    }
    acc
}

/// The translational flow `h: b -> b + a` with `R = b`; accumulating it
/// reproduces the closed-form linear spectrum.
pub fn translational_flow() -> ShapeFlow<LinearParams> {
    ShapeFlow::new(
        |p: &LinearParams| LinearParams::new(p.a, p.b + p.a),
        |p: &LinearParams| p.b,
    )
}
