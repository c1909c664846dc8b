//! Truncated matrix representations of the generalized Weyl-Heisenberg
//! algebra W_k and verification of its defining relations.
//!
//! The algebra is spanned by ladder operators X+, X-, the number operator N,
//! and a grading (Klein) operator K with K^k = 1. Its defining commutator is
//! grade-resolved, `[X-, X+] = sum_s f_s(N) P_s`, where the P_s project onto
//! the Z_k grade sectors. A member of the family is selected by the gap
//! functions f_s; the ladder matrix elements are square roots of the
//! structure function F obtained by accumulating the gaps level by level.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::report::RelationReport;

/// Truncated Z_k-graded Fock basis `{|n, s>}` with `n` in `0..=n_max` and
/// `s` in `0..k`, ordered lexicographically in `(n, s)` so every matrix
/// built on it is reproducible bit for bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedSpace {
    k: usize,
    n_max: usize,
}

impl GradedSpace {
    /// Rejects k < 2 (order-k supersymmetry undefined) and n_max < 2k
    /// (no interior would survive the truncation guard).
    pub fn new(k: usize, n_max: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidOrder { k });
        }
        if n_max < 2 * k {
            return Err(Error::TruncationTooSmall { k, n_max });
        }
        Ok(Self { k, n_max })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.k * (self.n_max + 1)
    }

    /// Flat index of `|n, s>` under the lexicographic (n, s) ordering.
    pub fn index(&self, n: usize, s: usize) -> usize {
        debug_assert!(n <= self.n_max && s < self.k);
        n * self.k + s
    }

    /// Inverse of `index`: the `(n, s)` label of a basis position.
    pub fn label(&self, idx: usize) -> (usize, usize) {
        (idx / self.k, idx % self.k)
    }

    /// Basis labels in storage order.
    pub fn basis(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.dim()).map(|i| self.label(i))
    }

    /// Exact diagonal indicator of grade `s`.
    pub fn grade_indicator(&self, s: usize) -> CMatrix {
        let entries: Vec<f64> = self
            .basis()
            .map(|(_, g)| if g == s % self.k { 1.0 } else { 0.0 })
            .collect();
        linalg::diag_real(&entries)
    }

    /// Diagonal indicator of levels `n <= top`.
    pub fn level_cap(&self, top: usize) -> CMatrix {
        let entries: Vec<f64> = self
            .basis()
            .map(|(n, _)| if n <= top { 1.0 } else { 0.0 })
            .collect();
        linalg::diag_real(&entries)
    }
}

/// Diagonal indicator of levels `n <= n_max - guard`, used to restrict
/// identity checks away from the truncated top of the ladder.
pub fn interior_projector(space: &GradedSpace, guard: usize) -> CMatrix {
    if guard > space.n_max() {
        return CMatrix::zeros(space.dim(), space.dim());
    }
    space.level_cap(space.n_max() - guard)
}

/// The gap family `{f_s}` selecting a member of W_k.
///
/// `Linear` gaps `f(n) = a n + b` are grade-independent; `Cyclic` gaps are
/// level-independent; `Tabulated` carries explicit values keyed by
/// `(grade, level)` (absent entries read as zero).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum StructureSpec {
    Linear { a: f64, b: f64 },
    Cyclic { f: Vec<f64> },
    Tabulated { table: BTreeMap<(usize, i64), f64> },
}

impl StructureSpec {
    /// Gap value f_s(n); the grade index is taken mod k and the level
    /// argument may be negative (it appears shifted in the sector
    /// Hamiltonians).
    pub fn gap(&self, k: usize, s: usize, n: i64) -> f64 {
        match self {
            StructureSpec::Linear { a, b } => a * n as f64 + b,
            StructureSpec::Cyclic { f } => f[s % k],
            StructureSpec::Tabulated { table } => {
                table.get(&(s % k, n)).copied().unwrap_or(0.0)
            }
        }
    }

    /// Whether the gaps stay strictly positive on levels `0..=n_top`.
    pub fn strictly_positive(&self, k: usize, n_top: usize) -> bool {
        match self {
            StructureSpec::Cyclic { f } => f.iter().all(|&x| x > 0.0),
            _ => (0..k).all(|s| (0..=n_top as i64).all(|n| self.gap(k, s, n) > 0.0)),
        }
    }

    /// Admissibility on the retained levels: every gap that feeds a radical
    /// is positive up to `n_top` (or up to the natural cutoff when the
    /// linear slope is negative).
    pub fn admissible(&self, k: usize, n_top: usize) -> bool {
        match self {
            StructureSpec::Linear { a, b } => {
                if *a < 0.0 {
                    // finite case: positivity only demanded below the cutoff
                    *b >= 0.0
                } else {
                    // boundary value a n + b = 0 at an interior level is
                    // treated as inadmissible rather than guessed around
                    (0..=n_top as i64).all(|n| a * n as f64 + b > 0.0)
                }
            }
            _ => self.strictly_positive(k, n_top),
        }
    }
}

/// Structure function F_s(n) accumulated from `F(0) = 0` along the raising
/// chain: each raise from level m at grade g contributes the gap f_g(m), so
/// `F_s(n) = sum_{m=0..n-1} f_{(s-n+m) mod k}(m)`.
///
/// The sum runs in ascending level order, which makes consecutive values
/// share their partial sums: `F_{s+1}(n+1)` accumulates exactly the same
/// prefix as `F_s(n)` before adding the final gap, so the recurrence holds
/// to one rounding.
pub fn structure_f(spec: &StructureSpec, k: usize, s: usize, n: usize) -> f64 {
    let mut acc = 0.0;
    for m in 0..n {
        let grade = (s as i64 - n as i64 + m as i64).rem_euclid(k as i64) as usize;
        acc += spec.gap(k, grade, m as i64);
    }
    acc
}

/// Dense matrices realizing X+, X-, N, K on a truncated graded space.
///
/// X- is the exact conjugate transpose of X+; N and K are diagonal with
/// entries n and q^s; all X+ entries are real and non-negative. The ladder
/// is cut at `active_top`: either the truncation level n_max or, for a
/// negative linear slope, the last level the structure function reaches
/// before turning negative (when it hits zero exactly the cut is exact and
/// every algebra relation survives at the boundary).
#[derive(Debug, Clone)]
pub struct AlgebraRep {
    pub space: GradedSpace,
    pub spec: StructureSpec,
    pub xplus: CMatrix,
    pub xminus: CMatrix,
    pub nop: CMatrix,
    pub kop: CMatrix,
    /// Primitive k-th root of unity exp(2 pi i / k).
    pub q: Complex64,
    /// Conjugate root exp(-2 pi i / k).
    pub p: Complex64,
    /// Highest level carrying ladder action.
    pub active_top: usize,
    /// True when the ladder closed on an exact zero of F (no truncation
    /// artifact at `active_top`).
    pub exact_top: bool,
}

/// Primitive k-th root of unity.
pub fn root_of_unity(k: usize, t: i64) -> Complex64 {
    // arguments reduced mod k before exponentiation to keep phases clean
    let r = t.rem_euclid(k as i64) as f64;
    Complex64::from_polar(1.0, TAU * r / k as f64)
}

/// Build the matrices of the representation on `space` for the member of
/// W_k selected by `spec`.
pub fn build_rep(space: &GradedSpace, spec: &StructureSpec) -> Result<AlgebraRep> {
    let (k, n_max, dim) = (space.k(), space.n_max(), space.dim());
    if let StructureSpec::Cyclic { f } = spec {
        if f.len() != k {
            return Err(Error::GapArity {
                expected: k,
                got: f.len(),
            });
        }
    }

    let negative_slope = matches!(spec, StructureSpec::Linear { a, .. } if *a < 0.0);

    let mut xplus = CMatrix::zeros(dim, dim);
    let mut active_top = 0usize;
    let mut exact_top = n_max == 0;
    'levels: for n in 0..n_max {
        // F is grade-resolved; probe every grade before committing the level
        let mut values = Vec::with_capacity(k);
        for s in 0..k {
            let v = structure_f(spec, k, (s + 1) % k, n + 1);
            if v < 0.0 {
                if negative_slope {
                    // natural termination of a finite (Morse-type) ladder;
                    // levels above stay as zero padding
                    exact_top = false;
                    break 'levels;
                }
                return Err(Error::NegativeStructureFunction {
                    s: (s + 1) % k,
                    n: n + 1,
                    value: v,
                });
            }
            values.push(v);
        }
        if negative_slope && values.iter().all(|&v| v == 0.0) {
            // the chain closed on an exact zero: relations hold at the cut
            exact_top = true;
            break 'levels;
        }
        for (s, &v) in values.iter().enumerate() {
            let row = space.index(n + 1, (s + 1) % k);
            let col = space.index(n, s);
            xplus[(row, col)] = Complex64::new(v.sqrt(), 0.0);
        }
        active_top = n + 1;
        if n + 1 == n_max {
            exact_top = false; // plain truncation at the top of the space
        }
    }

    let xminus = xplus.adjoint();
    let nop = linalg::diag_real(&space.basis().map(|(n, _)| n as f64).collect::<Vec<_>>());
    let q = root_of_unity(k, 1);
    let p = root_of_unity(k, -1);
    let kop = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        dim,
        space.basis().map(|(_, s)| root_of_unity(k, s as i64)),
    ));

    Ok(AlgebraRep {
        space: *space,
        spec: spec.clone(),
        xplus,
        xminus,
        nop,
        kop,
        q,
        p,
        active_top,
        exact_top,
    })
}

impl AlgebraRep {
    pub fn k(&self) -> usize {
        self.space.k()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Highest level on which identity checks may be asserted for a given
    /// guard. An exact ladder cut needs no guard of its own; the n_max
    /// truncation always does.
    pub fn interior_top(&self, guard: usize) -> Option<usize> {
        let truncated = self.space.n_max().checked_sub(guard)?;
        if self.exact_top {
            Some(truncated.min(self.active_top))
        } else if self.active_top < self.space.n_max() {
            self.active_top.checked_sub(guard).map(|t| t.min(truncated))
        } else {
            Some(truncated)
        }
    }

    /// Interior projector consistent with both the truncation and any
    /// natural ladder cut.
    pub fn interior(&self, guard: usize) -> CMatrix {
        match self.interior_top(guard) {
            Some(top) => self.space.level_cap(top),
            None => CMatrix::zeros(self.dim(), self.dim()),
        }
    }

    /// Gap function as a diagonal operator, `sum_s f_s(N) P_s`.
    pub fn gap_diagonal(&self) -> CMatrix {
        let entries: Vec<f64> = self
            .space
            .basis()
            .map(|(n, s)| self.spec.gap(self.k(), s, n as i64))
            .collect();
        linalg::diag_real(&entries)
    }
}

/// Grade projectors built from powers of the Klein operator,
/// `P_s = (1/k) sum_t p^{st} K^t`. Each coincides with the direct diagonal
/// indicator of grade s up to phase dust.
pub fn projectors(rep: &AlgebraRep) -> Vec<CMatrix> {
    let k = rep.k();
    let dim = rep.dim();
    let mut powers = Vec::with_capacity(k);
    let mut acc = linalg::identity(dim);
    for _ in 0..k {
        powers.push(acc.clone());
        acc = &acc * &rep.kop;
    }
    (0..k)
        .map(|s| {
            let mut sum = CMatrix::zeros(dim, dim);
            for (t, kt) in powers.iter().enumerate() {
                sum += kt * root_of_unity(k, -((s * t) as i64));
            }
            sum / Complex64::new(k as f64, 0.0)
        })
        .collect()
}

/// Verify the defining relations of W_k on the interior subspace.
///
/// All residuals are maximum entry moduli of `P (relation) P` with P the
/// interior projector for the given guard; construction-exact identities
/// (adjointness, K unitarity, projector algebra) are asserted at 1e-12
/// regardless of `tol`.
pub fn verify_wk_relations(rep: &AlgebraRep, guard: usize, tol: f64) -> RelationReport {
    assert!(guard >= rep.k(), "guard must be at least k");
    let k = rep.k();
    let dim = rep.dim();
    let id = linalg::identity(dim);
    let p_int = rep.interior(guard);
    let top = rep.interior_top(guard).unwrap_or(0);
    let mut report = RelationReport::new(top, guard);
    let exact_tol = 1e-12;

    // X- is the conjugate transpose of X+ by construction
    report.push(
        "adjoint_pair",
        linalg::max_abs(&(&rep.xminus - rep.xplus.adjoint())),
        0.0,
    );

    // [X-, X+] = sum_s f_s(N) P_s
    let comm = linalg::commutator(&rep.xminus, &rep.xplus) - rep.gap_diagonal();
    report.push(
        "commutator_gap",
        linalg::max_abs(&linalg::sandwich(&p_int, &comm)),
        tol,
    );

    // [N, X+-] = +-X+-
    let n_plus = linalg::commutator(&rep.nop, &rep.xplus) - &rep.xplus;
    report.push(
        "number_raises",
        linalg::max_abs(&linalg::sandwich(&p_int, &n_plus)),
        tol,
    );
    let n_minus = linalg::commutator(&rep.nop, &rep.xminus) + &rep.xminus;
    report.push(
        "number_lowers",
        linalg::max_abs(&linalg::sandwich(&p_int, &n_minus)),
        tol,
    );

    // K X+ = q X+ K and K X- = p X- K
    let kx_plus = &rep.kop * &rep.xplus - &rep.xplus * &rep.kop * rep.q;
    report.push(
        "klein_twist_plus",
        linalg::max_abs(&linalg::sandwich(&p_int, &kx_plus)),
        tol,
    );
    let kx_minus = &rep.kop * &rep.xminus - &rep.xminus * &rep.kop * rep.p;
    report.push(
        "klein_twist_minus",
        linalg::max_abs(&linalg::sandwich(&p_int, &kx_minus)),
        tol,
    );

    // [K, N] = 0, K unitary, K^k = 1
    report.push(
        "klein_number_commute",
        linalg::max_abs(&linalg::commutator(&rep.kop, &rep.nop)),
        exact_tol,
    );
    report.push(
        "klein_unitary",
        linalg::max_abs(&(&rep.kop * rep.kop.adjoint() - &id)),
        exact_tol,
    );
    let mut kk = id.clone();
    for _ in 0..k {
        kk = &kk * &rep.kop;
    }
    report.push("klein_order_k", linalg::max_abs(&(&kk - &id)), exact_tol);

    // projector algebra and intertwining with the ladder
    let projs = projectors(rep);
    let mut proj_vs_indicator = 0.0f64;
    let mut idempotent = 0.0f64;
    let mut intertwine = 0.0f64;
    let mut sum = CMatrix::zeros(dim, dim);
    for (s, pi) in projs.iter().enumerate() {
        sum += pi;
        proj_vs_indicator =
            proj_vs_indicator.max(linalg::max_abs(&(pi - rep.space.grade_indicator(s))));
        for (t, pt) in projs.iter().enumerate() {
            let prod = pi * pt;
            let expected = if s == t { pi.clone() } else { CMatrix::zeros(dim, dim) };
            idempotent = idempotent.max(linalg::max_abs(&(prod - expected)));
        }
        let prev = rep.space.grade_indicator((s + k - 1) % k);
        let ind = rep.space.grade_indicator(s);
        intertwine = intertwine.max(linalg::max_abs(&(&ind * &rep.xplus - &rep.xplus * &prev)));
        intertwine = intertwine.max(linalg::max_abs(&(&rep.xminus * &ind - &prev * &rep.xminus)));
    }
    report.push("projector_sum", linalg::max_abs(&(sum - &id)), exact_tol);
    report.push("projector_orthogonal", idempotent, exact_tol);
    report.push("projector_vs_grade", proj_vs_indicator, exact_tol);
    report.push("projector_intertwine", intertwine, exact_tol);

    report
}

/// Seeded strictly positive gap vector for reproducible cyclic sweeps.
pub fn seeded_positive_gaps(k: usize, seed: u64) -> Vec<f64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..k).map(|_| rng.random_range(0.5..3.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn linear(a: f64, b: f64) -> StructureSpec {
        StructureSpec::Linear { a, b }
    }

    #[test]
    fn space_dimensions() {
        assert_eq!(GradedSpace::new(3, 9).unwrap().dim(), 30);
        assert_eq!(GradedSpace::new(2, 4).unwrap().dim(), 10);
    }

    #[test]
    fn space_rejects_bad_order_and_truncation() {
        assert!(matches!(
            GradedSpace::new(1, 9),
            Err(Error::InvalidOrder { k: 1 })
        ));
        assert!(matches!(
            GradedSpace::new(3, 5),
            Err(Error::TruncationTooSmall { .. })
        ));
    }

    #[test]
    fn basis_order_is_lexicographic() {
        let space = GradedSpace::new(3, 6).unwrap();
        let labels: Vec<_> = space.basis().take(5).collect();
        assert_eq!(labels, vec![(0, 0), (0, 1), (0, 2), (1, 0), (1, 1)]);
        assert_eq!(space.index(2, 1), 7);
        assert_eq!(space.label(7), (2, 1));
    }

    #[test]
    fn structure_f_accumulates_the_recurrence() {
        // f(0) = 3, f(1) = 5 accumulate to 8 at n = 2
        let spec = linear(2.0, 3.0);
        for s in 0..3 {
            assert_abs_diff_eq!(structure_f(&spec, 3, s, 2), 8.0);
            assert_eq!(structure_f(&spec, 3, s, 0), 0.0);
        }
        // harmonic gap: F(n) = n
        let spec = linear(0.0, 1.0);
        assert_abs_diff_eq!(structure_f(&spec, 2, 0, 5), 5.0);
    }

    #[test]
    fn structure_f_satisfies_the_gap_recurrence() {
        let specs = vec![
            linear(2.0, 5.0),
            StructureSpec::Cyclic {
                f: vec![2.0, 3.0, 5.0],
            },
        ];
        for spec in &specs {
            let k = 3;
            for s in 0..k {
                for n in 0..12usize {
                    let lhs = structure_f(spec, k, (s + 1) % k, n + 1) - structure_f(spec, k, s, n);
                    assert_abs_diff_eq!(lhs, spec.gap(k, s, n as i64), epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn rep_entries_match_the_radical_rule() {
        let space = GradedSpace::new(2, 6).unwrap();
        let rep = build_rep(&space, &linear(0.0, 1.0)).unwrap();
        // <1,1| X+ |0,0> = sqrt(F(1)) = 1
        assert_abs_diff_eq!(rep.xplus[(space.index(1, 1), space.index(0, 0))].re, 1.0);
        // top level annihilated
        let top_col = space.index(6, 0);
        assert!(rep.xplus.column(top_col).iter().all(|z| z.norm() == 0.0));
        // every entry real non-negative
        assert!(rep.xplus.iter().all(|z| z.im == 0.0 && z.re >= 0.0));
    }

    #[test]
    fn morse_type_ladder_terminates_exactly() {
        // a = -2, b = 5 closes on F(6) = 0: levels 0..=5 active
        let space = GradedSpace::new(2, 12).unwrap();
        let rep = build_rep(&space, &linear(-2.0, 5.0)).unwrap();
        assert_eq!(rep.active_top, 5);
        assert!(rep.exact_top);
        // <3, s+1| X+ |2, s> = sqrt(F(3)) = 3
        assert_abs_diff_eq!(rep.xplus[(space.index(3, 1), space.index(2, 0))].re, 3.0);
        // nothing raises above the cut
        for s in 0..2 {
            let col = space.index(5, s);
            assert!(rep.xplus.column(col).iter().all(|z| z.norm() == 0.0));
        }
    }

    #[test]
    fn negative_structure_function_is_reported() {
        let space = GradedSpace::new(2, 8).unwrap();
        // a tabulated family with a negative gap drives F below zero
        let mut table = BTreeMap::new();
        for s in 0..2usize {
            for n in 0..8i64 {
                table.insert((s, n), if n == 2 { -4.0 } else { 1.0 });
            }
        }
        let err = build_rep(&space, &StructureSpec::Tabulated { table }).unwrap_err();
        assert!(matches!(err, Error::NegativeStructureFunction { .. }));
    }

    #[test]
    fn projectors_sum_and_select() {
        let space = GradedSpace::new(2, 6).unwrap();
        let rep = build_rep(&space, &linear(0.0, 1.0)).unwrap();
        let projs = projectors(&rep);
        // two-term case: P_0 = (1 + K)/2 selects even grade
        let expected = (linalg::identity(rep.dim()) + &rep.kop) / Complex64::new(2.0, 0.0);
        assert!(linalg::max_abs(&(&projs[0] - expected)) < 1e-15);
        let sum = &projs[0] + &projs[1];
        assert!(linalg::max_abs(&(sum - linalg::identity(rep.dim()))) < 1e-12);
    }

    #[test]
    fn interior_projector_ranks() {
        let space = GradedSpace::new(3, 9).unwrap();
        let id = interior_projector(&space, 0);
        assert!(linalg::max_abs(&(&id - linalg::identity(space.dim()))) == 0.0);
        let zero = interior_projector(&space, 10);
        assert_eq!(linalg::max_abs(&zero), 0.0);
        let p = interior_projector(&space, 3);
        let rank: f64 = p.diagonal().iter().map(|z| z.re).sum();
        assert_eq!(rank, 21.0);
    }

    #[test]
    fn wk_relations_hold_for_representative_specs() {
        let cases: Vec<(usize, StructureSpec)> = vec![
            (2, linear(0.0, 1.0)),
            (3, linear(2.0, 5.0)),
            (3, linear(-2.0, 5.0)),
            (
                3,
                StructureSpec::Cyclic {
                    f: vec![2.0, 3.0, 5.0],
                },
            ),
            (4, StructureSpec::Cyclic { f: seeded_positive_gaps(4, 11) }),
        ];
        for (k, spec) in cases {
            let space = GradedSpace::new(k, 15).unwrap();
            let rep = build_rep(&space, &spec).unwrap();
            let report = verify_wk_relations(&rep, k, 1e-10);
            assert!(report.all_pass(), "failed for k={k} spec={spec:?}: {report:?}");
        }
    }

    #[test]
    fn tabulated_random_nonnegative_passes() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let k = 3;
        let n_max = 12;
        let mut table = BTreeMap::new();
        for s in 0..k {
            for n in 0..=n_max as i64 {
                table.insert((s, n), rng.random_range(0.0..2.0));
            }
        }
        let space = GradedSpace::new(k, n_max).unwrap();
        let rep = build_rep(&space, &StructureSpec::Tabulated { table }).unwrap();
        let report = verify_wk_relations(&rep, k, 1e-10);
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn corrupted_ladder_fails_verification() {
        let space = GradedSpace::new(3, 9).unwrap();
        let mut rep = build_rep(&space, &linear(0.0, 1.0)).unwrap();
        let (r, c) = (space.index(2, 1), space.index(1, 0));
        rep.xplus[(r, c)] += Complex64::new(0.1, 0.0);
        rep.xminus = rep.xplus.adjoint();
        let report = verify_wk_relations(&rep, 3, 1e-10);
        assert!(!report.all_pass());
        assert!(report.residual_of("commutator_gap") >= 0.1);
    }

    #[test]
    fn seeded_gaps_are_reproducible_and_positive() {
        let a = seeded_positive_gaps(4, 7);
        let b = seeded_positive_gaps(4, 7);
        assert_eq!(a, b);
        assert!(a.iter().all(|&x| x > 0.0));
        assert_ne!(a, seeded_positive_gaps(4, 8));
    }
}
