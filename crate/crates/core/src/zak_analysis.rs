//! Zak-transform analysis of Gabor systems: admissible intermediate
//! subgroups `Γ^⊥ ≤ H ≤ Λ`, the family `g_ij = T_{λ_i} E_{γ_j} g`, the
//! multiplier `m = Σ_ij |Z_H g_ij|²` that diagonalizes the frame operator,
//! and completeness / minimality through nonvanishing of `Z_H g`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{GaborError, Result};
use crate::gabor::{check_admissible, Convention, FrameBounds, FrameReport, GaborSystem};
use crate::group::{
    all_subgroups, annihilator, quotient_invariant_factors, relative_transversal,
    FiniteAbelianGroup, Subgroup,
};
use crate::linalg::RANK_TOL;
use crate::transforms::{inverse_zak, modulate, translate, zak, Window, ZakArray};

/// Relative threshold below which a Zak value counts as a zero.
pub const ZAK_ZERO_TOL: f64 = 1e-12;

/// Tolerance on `|‖g‖ − 1|` in the orthonormal-basis test.
pub const UNIT_NORM_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibleH {
    pub h: Subgroup,
    pub hperp: Subgroup,
    /// Representatives `λ_i` of `Λ/H`.
    pub lambda_transversal: Vec<usize>,
    /// Representatives `γ_j` of `Γ/H^⊥`.
    pub gamma_transversal: Vec<usize>,
}

impl AdmissibleH {
    pub fn new(lambda: &Subgroup, gamma: &Subgroup, h: &Subgroup) -> Result<Self> {
        let g = lambda.parent();
        check_admissible(g, lambda, gamma, h)?;
        let hperp = annihilator(g, h)?;
        Ok(Self {
            lambda_transversal: relative_transversal(lambda, h)?,
            gamma_transversal: relative_transversal(gamma, &hperp)?,
            h: h.clone(),
            hperp,
        })
    }

    pub fn index_counts(&self) -> (usize, usize) {
        (self.lambda_transversal.len(), self.gamma_transversal.len())
    }
}

/// All `H` with `H ≤ Λ` and `H^⊥ ≤ Γ`, ordered by `|H|`.
pub fn admissible_h(
    g: &FiniteAbelianGroup,
    lambda: &Subgroup,
    gamma: &Subgroup,
) -> Result<Vec<AdmissibleH>> {
    if lambda.parent() != g || gamma.parent() != &g.dual() {
        return Err(GaborError::Domain("Λ and Γ must live in G and Ĝ".into()));
    }
    let gamma_perp = annihilator(&g.dual(), gamma)?;
    if !gamma_perp.is_subgroup_of(lambda) {
        return Ok(Vec::new());
    }
    all_subgroups(g)?
        .into_iter()
        .filter(|h| h.is_subgroup_of(lambda))
        .filter_map(|h| match annihilator(g, &h) {
            Ok(hp) if hp.is_subgroup_of(gamma) => Some(AdmissibleH::new(lambda, gamma, &h)),
            Ok(_) => None,
            Err(e) => Some(Err(e)),
        })
        .collect()
}

/// An element of `Γ^⊥` outside `Λ`, if any.
pub fn containment_witness(
    g: &FiniteAbelianGroup,
    lambda: &Subgroup,
    gamma: &Subgroup,
) -> Result<Option<usize>> {
    let gamma_perp = annihilator(&g.dual(), gamma)?;
    Ok(gamma_perp
        .elements()
        .iter()
        .copied()
        .find(|&x| !lambda.contains(x)))
}

/// `N | R | L` and `M | L/R`: the admissibility test for
/// `Λ = ⟨N⟩`, `Γ = ⟨M⟩`, `H = ⟨R⟩` in `Z_L`.
pub fn divisor_condition(l: u64, n: u64, m: u64, r: u64) -> Result<bool> {
    for (name, d) in [("N", n), ("M", m), ("R", r)] {
        if d == 0 || l == 0 || !l.is_multiple_of(d) {
            return Err(GaborError::Domain(format!("{name} = {d} does not divide L = {l}")));
        }
    }
    Ok(r.is_multiple_of(n) && l.is_multiple_of(r) && (l / r).is_multiple_of(m))
}

fn same_setting(sys: &GaborSystem, adm: &AdmissibleH) -> Result<()> {
    if adm.h.parent() != sys.group() {
        return Err(GaborError::Domain("admissible subgroup lives in another group".into()));
    }
    check_admissible(sys.group(), sys.lambda(), sys.gamma(), &adm.h)?;
    Ok(())
}

/// `g_ij = T_{λ_i} E_{γ_j} g`, row-major over the two transversals.
pub fn gij_family(sys: &GaborSystem, adm: &AdmissibleH) -> Result<Vec<Window>> {
    same_setting(sys, adm)?;
    let mut out = Vec::with_capacity(adm.lambda_transversal.len() * adm.gamma_transversal.len());
    for &li in &adm.lambda_transversal {
        for &gj in &adm.gamma_transversal {
            out.push(translate(&modulate(sys.window(), gj), li));
        }
    }
    Ok(out)
}

/// The multiplier `m(ẋ, ξ̇)` on the fundamental domain `G/H × Ĝ/H^⊥`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenvalueFunction {
    pub n_rows: usize,
    pub n_cols: usize,
    /// Row-major, rows indexed by the section of `G/H`.
    pub values: Vec<f64>,
    pub min: f64,
    pub max: f64,
}

impl EigenvalueFunction {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n_cols + j]
    }

    pub fn sorted(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_by(|a, b| a.total_cmp(b));
        v
    }
}

fn require_zak_chain(sys: &GaborSystem, adm: &AdmissibleH) -> Result<()> {
    match sys.convention() {
        Convention::ZakChain(h) if *h == adm.h => Ok(()),
        Convention::ZakChain(h) => Err(GaborError::Precondition(format!(
            "system uses the zak-chain convention for H = {h}, not for {}",
            adm.h
        ))),
        other => Err(GaborError::Precondition(format!(
            "the eigenvalue function needs the zak-chain convention, system uses {}",
            other.name()
        ))),
    }
}

pub fn eigenvalue_function(sys: &GaborSystem, adm: &AdmissibleH) -> Result<EigenvalueFunction> {
    require_zak_chain(sys, adm)?;
    let family = gij_family(sys, adm)?;
    let mut acc: Option<Vec<f64>> = None;
    let (mut n_rows, mut n_cols) = (0, 0);
    for gij in &family {
        let z = zak(gij, &adm.h)?;
        n_rows = z.n_rows();
        n_cols = z.n_cols();
        let acc = acc.get_or_insert_with(|| vec![0.0; z.data().len()]);
        for (a, v) in acc.iter_mut().zip(z.data()) {
            *a += v.norm_sqr();
        }
    }
    let values = acc.unwrap_or_default();
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(0.0, f64::max);
    Ok(EigenvalueFunction {
        n_rows,
        n_cols,
        values,
        min,
        max,
    })
}

/// Frame report read off the multiplier: `A = min m`, `B = max m`; Parseval
/// iff `|m − 1| ≤ tol` everywhere; ONB iff Parseval and `‖g‖ = 1` to within
/// [`UNIT_NORM_TOL`].
pub fn zak_frame_bounds(sys: &GaborSystem, adm: &AdmissibleH, tol: f64) -> Result<FrameReport> {
    let m = eigenvalue_function(sys, adm)?;
    let bounds = FrameBounds {
        lower: m.min.max(0.0),
        upper: m.max,
    };
    let parseval_distance = m.values.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
    // S is unitarily equivalent to multiplication by m, so rank S = #{m ≠ 0};
    // singular values of the synthesis operator are √m.
    let rank = m
        .values
        .iter()
        .filter(|&&v| v.sqrt() > RANK_TOL * m.max.sqrt())
        .count();
    let n = sys.group().order();
    let is_complete = m.max > 0.0 && rank == n;
    let is_minimal = m.max > 0.0 && rank == sys.atom_count();
    let mut report = FrameReport::from_parts(
        bounds,
        parseval_distance,
        is_complete,
        is_minimal,
        false,
        tol,
    );
    report.is_onb = report.is_parseval && (sys.window().norm() - 1.0).abs() <= UNIT_NORM_TOL;
    Ok(report)
}

#[derive(Clone, Debug)]
pub struct CompletenessReport {
    pub complete: bool,
    pub minimal: bool,
    pub min_abs_zak: f64,
    pub max_abs_zak: f64,
    /// `h` with `Z_H h = 1/conj(Z_H g)`, present when `Z_H g` never vanishes.
    pub dual_window: Option<Window>,
    /// `⟨E_γT_λ g, E_γ'T_λ' h⟩ = pairing_norm·δ_{λλ'}δ_{γγ'}`; equals the
    /// squared norm `|H^⊥|` of a character `E_{λ,γ}` in `L²(M_H)`.
    pub pairing_norm: f64,
}

/// Completeness and minimality of `{E_γT_λ g}_{λ∈H, γ∈H^⊥}`.
///
/// On a finite group the system has exactly `|G|` atoms, so both properties
/// hold iff `Z_H g` has no zero on the fundamental domain (relative
/// threshold `zero_tol`).
pub fn zak_complete_minimal(g: &Window, h: &Subgroup, zero_tol: f64) -> Result<CompletenessReport> {
    let z = zak(g, h)?;
    let max_abs_zak = z.max_abs();
    let min_abs_zak = z.min_abs();
    let complete = max_abs_zak > 0.0 && min_abs_zak > zero_tol * max_abs_zak;
    let dual_window = if complete {
        Some(dual_from_zak(&z)?)
    } else {
        None
    };
    Ok(CompletenessReport {
        complete,
        minimal: complete,
        min_abs_zak,
        max_abs_zak,
        dual_window,
        pairing_norm: z.annihilator().order() as f64,
    })
}

fn dual_from_zak(z: &ZakArray) -> Result<Window> {
    let recip: Vec<Complex64> = z.data().iter().map(|v| Complex64::new(1.0, 0.0) / v.conj()).collect();
    inverse_zak(&ZakArray::from_data(z.subgroup(), recip)?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuotientIso {
    pub factors_left: Vec<usize>,
    pub factors_right: Vec<usize>,
    pub isomorphic: bool,
}

/// Invariant factors of `Λ/H` and of `H^⊥/Λ^⊥`.
pub fn quotient_iso_check(
    g: &FiniteAbelianGroup,
    lambda: &Subgroup,
    h: &Subgroup,
) -> Result<QuotientIso> {
    if !h.is_subgroup_of(lambda) || lambda.parent() != g {
        return Err(GaborError::Domain(format!("need H ≤ Λ ≤ G, got H = {h}, Λ = {lambda}")));
    }
    let factors_left = quotient_invariant_factors(g, h, lambda)?;
    let hperp = annihilator(g, h)?;
    let lperp = annihilator(g, lambda)?;
    let factors_right = quotient_invariant_factors(&g.dual(), &lperp, &hperp)?;
    Ok(QuotientIso {
        isomorphic: factors_left == factors_right,
        factors_left,
        factors_right,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gabor::DEFAULT_TOL;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn z(factors: &[i64]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(factors).unwrap()
    }

    fn sub(g: &FiniteAbelianGroup, gens: &[usize]) -> Subgroup {
        Subgroup::generated_by(g, gens).unwrap()
    }

    fn z4_full(window: Window) -> (GaborSystem, AdmissibleH) {
        let g = window.group().clone();
        let h = sub(&g, &[2]);
        let sys = GaborSystem::new(
            window,
            Subgroup::full(&g),
            Subgroup::full(&g),
            Convention::ZakChain(h.clone()),
        )
        .unwrap();
        let adm = AdmissibleH::new(sys.lambda(), sys.gamma(), &h).unwrap();
        (sys, adm)
    }

    #[test]
    fn admissible_h_examples() {
        let g = z(&[12]);
        let found = admissible_h(&g, &sub(&g, &[2]), &sub(&g, &[3])).unwrap();
        let hs: Vec<&[usize]> = found.iter().map(|a| a.h.elements()).collect();
        assert_eq!(hs, vec![&[0, 4, 8][..], &[0, 2, 4, 6, 8, 10][..]]);
        for a in &found {
            assert_eq!(a.lambda_transversal.len(), 6 / a.h.order());
            assert_eq!(a.gamma_transversal.len(), 4 * a.h.order() / 12);
        }

        let all = admissible_h(&g, &Subgroup::full(&g), &Subgroup::full(&g)).unwrap();
        assert_eq!(all.len(), 6);

        assert!(admissible_h(&g, &sub(&g, &[3]), &sub(&g, &[3])).unwrap().is_empty());
        assert_eq!(
            containment_witness(&g, &sub(&g, &[3]), &sub(&g, &[3])).unwrap(),
            Some(4)
        );
    }

    #[test]
    fn divisor_condition_examples() {
        assert!(divisor_condition(12, 2, 3, 4).unwrap());
        assert!(!divisor_condition(12, 2, 3, 6).unwrap());
        for l in 1..=20 {
            assert!(divisor_condition(l, 1, 1, 1).unwrap());
        }
        assert!(matches!(divisor_condition(12, 5, 1, 1), Err(GaborError::Domain(_))));
    }

    #[test]
    fn gij_family_examples() {
        let g = z(&[4]);
        let (sys, adm) = z4_full(Window::delta(&g, 0));
        let fam = gij_family(&sys, &adm).unwrap();
        assert_eq!(adm.lambda_transversal, vec![0, 1]);
        assert_eq!(adm.gamma_transversal, vec![0, 1]);
        let expect = [
            Window::delta(&g, 0),
            Window::delta(&g, 0),
            Window::delta(&g, 1),
            Window::delta(&g, 1),
        ];
        for (a, b) in fam.iter().zip(&expect) {
            assert!(a.max_abs_diff(b) < 1e-15);
        }

        // Λ = H, Γ = H^⊥: a single window, g itself.
        let h = sub(&g, &[2]);
        let hp = annihilator(&g, &h).unwrap();
        let w = Window::from_real(&g, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let sys = GaborSystem::new(w.clone(), h.clone(), hp, Convention::ZakChain(h.clone())).unwrap();
        let adm = AdmissibleH::new(sys.lambda(), sys.gamma(), &h).unwrap();
        assert_eq!(gij_family(&sys, &adm).unwrap(), vec![w]);

        let (sys, adm) = z4_full(Window::zeros(&g));
        assert!(gij_family(&sys, &adm).unwrap().iter().all(Window::is_zero));
    }

    #[test]
    fn eigenvalue_function_examples() {
        let g = z(&[4]);
        let (sys, adm) = z4_full(Window::delta(&g, 0));
        let m = eigenvalue_function(&sys, &adm).unwrap();
        assert_eq!(m.values.len(), 4);
        assert!(m.values.iter().all(|&v| (v - 2.0).abs() < 1e-14));

        let g2 = z(&[2]);
        let h = Subgroup::full(&g2);
        let sys = GaborSystem::new(
            Window::delta(&g2, 0),
            Subgroup::full(&g2),
            Subgroup::full(&g2),
            Convention::ZakChain(h.clone()),
        )
        .unwrap();
        let adm = AdmissibleH::new(sys.lambda(), sys.gamma(), &h).unwrap();
        let m = eigenvalue_function(&sys, &adm).unwrap();
        assert!(m.values.iter().all(|&v| (v - 2.0).abs() < 1e-14));

        let (sys, adm) = z4_full(Window::zeros(&g));
        assert!(eigenvalue_function(&sys, &adm).unwrap().values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn eigenvalue_function_rejects_other_conventions() {
        let g = z(&[4]);
        let (sys, adm) = z4_full(Window::delta(&g, 0));
        let plancherel = sys.with_convention(Convention::Plancherel).unwrap();
        assert!(matches!(
            eigenvalue_function(&plancherel, &adm),
            Err(GaborError::Precondition(_))
        ));
        let other = sys.with_convention(Convention::ZakChain(Subgroup::full(&g))).unwrap();
        assert!(matches!(eigenvalue_function(&other, &adm), Err(GaborError::Precondition(_))));
    }

    #[test]
    fn zak_frame_bounds_examples() {
        let g = z(&[4]);
        let (sys, adm) = z4_full(Window::delta(&g, 0));
        let r = zak_frame_bounds(&sys, &adm, DEFAULT_TOL).unwrap();
        assert!((r.lower_bound - 2.0).abs() < 1e-14 && (r.upper_bound - 2.0).abs() < 1e-14);
        assert!(r.is_frame && r.is_tight && !r.is_parseval);

        let (sys, adm) = z4_full(Window::delta(&g, 0).scaled(c(std::f64::consts::FRAC_1_SQRT_2, 0.0)));
        let r = zak_frame_bounds(&sys, &adm, DEFAULT_TOL).unwrap();
        assert!(r.is_parseval && !r.is_onb);

        let (sys, adm) = z4_full(Window::zeros(&g));
        let r = zak_frame_bounds(&sys, &adm, DEFAULT_TOL).unwrap();
        assert!(!r.is_frame && r.lower_bound == 0.0);
    }

    #[test]
    fn zak_complete_minimal_examples() {
        let g = z(&[2]);
        let triv = Subgroup::trivial(&g);
        let r = zak_complete_minimal(&Window::from_real(&g, &[1.0, 1.0]).unwrap(), &triv, ZAK_ZERO_TOL)
            .unwrap();
        assert!(r.complete && r.minimal && r.dual_window.is_some());

        let r = zak_complete_minimal(&Window::delta(&g, 0), &triv, ZAK_ZERO_TOL).unwrap();
        assert!(!r.complete && !r.minimal && r.dual_window.is_none());

        let r = zak_complete_minimal(&Window::zeros(&g), &triv, ZAK_ZERO_TOL).unwrap();
        assert!(!r.complete && !r.minimal && r.dual_window.is_none());
    }

    #[test]
    fn dual_window_is_biorthogonal() {
        let g = z(&[6]);
        let h = sub(&g, &[3]);
        let w = Window::new(&g, (0..6).map(|k| c(1.0 + k as f64, 0.5 - k as f64 * 0.2)).collect()).unwrap();
        let r = zak_complete_minimal(&w, &h, ZAK_ZERO_TOL).unwrap();
        assert!(r.complete);
        let dual = r.dual_window.unwrap();
        let hp = annihilator(&g, &h).unwrap();
        for &l in h.elements() {
            for &gm in hp.elements() {
                let a = modulate(&translate(&w, l), gm);
                for &l2 in h.elements() {
                    for &gm2 in hp.elements() {
                        let b = modulate(&translate(&dual, l2), gm2);
                        let expect = if l == l2 && gm == gm2 { r.pairing_norm } else { 0.0 };
                        assert!((a.inner(&b) - c(expect, 0.0)).norm() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn quotient_iso_examples() {
        let g = z(&[12]);
        let q = quotient_iso_check(&g, &sub(&g, &[2]), &sub(&g, &[4])).unwrap();
        assert_eq!((q.factors_left.clone(), q.factors_right.clone()), (vec![2], vec![2]));
        assert!(q.isomorphic);
        let l = sub(&g, &[3]);
        let q = quotient_iso_check(&g, &l, &l).unwrap();
        assert!(q.factors_left.is_empty() && q.factors_right.is_empty() && q.isomorphic);
        let g = z(&[2, 2]);
        let q = quotient_iso_check(&g, &Subgroup::full(&g), &Subgroup::trivial(&g)).unwrap();
        assert_eq!(q.factors_left, vec![2, 2]);
        assert_eq!(q.factors_right, vec![2, 2]);
        let g = z(&[12]);
        assert!(quotient_iso_check(&g, &sub(&g, &[4]), &sub(&g, &[2])).is_err());
    }
}
