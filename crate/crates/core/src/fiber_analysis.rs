//! Fiberization of translation-invariant systems and of Gabor systems.
//!
//! A system `{T_h g_p}_{h∈H, p}` with weights `w_p` is a frame with bounds
//! `A, B` iff, for every `ω` in a section of `Ĝ/H^⊥`, the fiber vectors
//! `√(w_p·w_{H^⊥})·{ĝ_p(ω+α)}_{α∈H^⊥}` form a frame of `ℓ²(H^⊥)` with the
//! same bounds. Here `w_{H^⊥} = |H|/|G|`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{GaborError, Result};
use crate::gabor::{frame_bounds, FrameBounds, GaborSystem};
use crate::group::{annihilator, relative_transversal, transversal, FiniteAbelianGroup, Subgroup};
use crate::linalg::{hermitian_eigenvalues, CMatrix};
use crate::transforms::{fiber_at, fourier, modulate, translate, zak, Window};
use crate::zak_analysis::AdmissibleH;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiberBounds {
    pub omega: usize,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiberFrameReport {
    pub per_omega: Vec<FiberBounds>,
    pub global: FrameBounds,
}

impl FiberFrameReport {
    fn from_fibers(per_omega: Vec<FiberBounds>) -> Self {
        let lower = per_omega.iter().map(|f| f.lower).fold(f64::INFINITY, f64::min);
        let upper = per_omega.iter().map(|f| f.upper).fold(0.0, f64::max);
        Self {
            global: FrameBounds {
                lower: if lower.is_finite() { lower.max(0.0) } else { 0.0 },
                upper,
            },
            per_omega,
        }
    }
}

fn extreme_eigenvalues(columns: &CMatrix) -> Result<(f64, f64)> {
    let eigs = hermitian_eigenvalues(&(columns * columns.adjoint()))?;
    Ok((
        eigs.first().copied().unwrap_or(0.0).max(0.0),
        eigs.last().copied().unwrap_or(0.0).max(0.0),
    ))
}

fn columns_matrix(rows: usize, cols: &[Vec<Complex64>]) -> CMatrix {
    DMatrix::from_fn(rows, cols.len(), |i, j| cols[j][i])
}

/// Bounds of `{T_h g_p}_{h∈H, p}` with generator weights `w_p`, fiber by fiber.
pub fn ti_fiber_bounds(
    g: &FiniteAbelianGroup,
    h: &Subgroup,
    generators: &[(Window, f64)],
) -> Result<FiberFrameReport> {
    if generators.is_empty() {
        return Err(GaborError::Domain("at least one generator is required".into()));
    }
    if h.parent() != g {
        return Err(GaborError::Domain(format!("H lives in {}, not in {g}", h.parent())));
    }
    for (w, weight) in generators {
        if w.group() != g {
            return Err(GaborError::Shape(format!("generator on {} but G = {g}", w.group())));
        }
        if !(weight.is_finite() && *weight > 0.0) {
            return Err(GaborError::Domain(format!("generator weight {weight} must be finite and positive")));
        }
    }
    let hperp = annihilator(g, h)?;
    let w_hperp = h.order() as f64 / g.order() as f64;
    let spectra: Vec<(Window, f64)> = generators
        .iter()
        .map(|(w, p)| (fourier(w), (p * w_hperp).sqrt()))
        .collect();
    let mut per_omega = Vec::new();
    for &omega in transversal(&g.dual(), &hperp)?.reps() {
        let cols: Vec<Vec<Complex64>> = spectra
            .iter()
            .map(|(s, c)| fiber_at(s, &hperp, omega).into_iter().map(|v| v * *c).collect())
            .collect();
        let (lower, upper) = extreme_eigenvalues(&columns_matrix(hperp.order(), &cols))?;
        per_omega.push(FiberBounds { omega, lower, upper });
    }
    Ok(FiberFrameReport::from_fibers(per_omega))
}

/// How the Gabor generators enter each fiber.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reading {
    /// Only the unmodulated `Φ_ku`, one column per `(k, u)`.
    Printed,
    /// All `χ_μ·Φ_ku` for `μ ∈ Λ^⊥`.
    Modulated,
}

/// Translation generators of a Gabor system over `H`: `E_μ T_k E_u g` for
/// `μ ∈ Λ^⊥`, `k` in a section of `Λ/H`, `u` in a section of `Γ/Λ^⊥`
/// (note `Λ^⊥ ≤ H^⊥ ≤ Γ`).
struct GaborGenerators {
    lambda_perp: Subgroup,
    /// `g_ku = T_k E_u g`.
    base: Vec<Window>,
}

fn gabor_generators(sys: &GaborSystem, adm: &AdmissibleH) -> Result<GaborGenerators> {
    let g = sys.group();
    if adm.h.parent() != g || !adm.h.is_subgroup_of(sys.lambda()) || !adm.hperp.is_subgroup_of(sys.gamma()) {
        return Err(GaborError::Precondition(format!(
            "H = {} is not admissible for this system",
            adm.h
        )));
    }
    let lambda_perp = annihilator(g, sys.lambda())?;
    let ks = relative_transversal(sys.lambda(), &adm.h)?;
    let us = relative_transversal(sys.gamma(), &lambda_perp)?;
    let mut base = Vec::with_capacity(ks.len() * us.len());
    for &k in &ks {
        for &u in &us {
            base.push(translate(&modulate(sys.window(), u), k));
        }
    }
    Ok(GaborGenerators { lambda_perp, base })
}

/// Fiber bounds of a Gabor system through the representation of the
/// fibers on `ℓ²(G/H)`: `Φ(t) = |H^⊥|^{-1/2}·Σ_{α∈H^⊥} ĝ(ω+α)·χ_α(t)`.
pub fn gabor_fiber_bounds(sys: &GaborSystem, adm: &AdmissibleH, reading: Reading) -> Result<FiberFrameReport> {
    let g = sys.group();
    let gens = gabor_generators(sys, adm)?;
    let hperp = &adm.hperp;
    let ts = transversal(g, &adm.h)?.reps().to_vec();
    let w_hperp = adm.h.order() as f64 / g.order() as f64;
    let c = (sys.w_lambda() * sys.w_gamma() * w_hperp).sqrt();
    let norm = 1.0 / (hperp.order() as f64).sqrt();
    let spectra: Vec<Window> = gens.base.iter().map(fourier).collect();
    let mus: &[usize] = match reading {
        Reading::Printed => &[0],
        Reading::Modulated => gens.lambda_perp.elements(),
    };

    let mut per_omega = Vec::new();
    for &omega in transversal(&g.dual(), hperp)?.reps() {
        let mut cols = Vec::with_capacity(spectra.len() * mus.len());
        for s in &spectra {
            let v = fiber_at(s, hperp, omega);
            let phi: Vec<Complex64> = ts
                .iter()
                .map(|&t| {
                    hperp
                        .elements()
                        .iter()
                        .zip(&v)
                        .map(|(&a, va)| va * g.character(t, a))
                        .sum::<Complex64>()
                        * norm
                })
                .collect();
            for &mu in mus {
                cols.push(
                    ts.iter()
                        .zip(&phi)
                        .map(|(&t, p)| p * g.character(t, mu) * c)
                        .collect(),
                );
            }
        }
        let (lower, upper) = extreme_eigenvalues(&columns_matrix(ts.len(), &cols))?;
        per_omega.push(FiberBounds { omega, lower, upper });
    }
    Ok(FiberFrameReport::from_fibers(per_omega))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualZakReport {
    /// Extreme eigenvalues of the frame operator.
    pub direct: FrameBounds,
    /// From the fibers `{ĝ(α−γ+y)}_{y∈Λ^⊥}`, one column per `γ ∈ Γ`.
    pub fiber: FrameBounds,
    /// From `w·Σ_k |Z_{Λ^⊥} ĝ(α+k, x)|²`, `k` over a section of `Γ/Λ^⊥`.
    pub zak: FrameBounds,
    /// Largest gap between the sorted fiber spectrum and the sorted Zak
    /// values, over all `α`.
    pub spectral_deviation: f64,
}

/// Fiber and dual-Zak descriptions of a Gabor system with `Γ^⊥ ≤ Λ`.
pub fn cor43_check(sys: &GaborSystem) -> Result<DualZakReport> {
    let g = sys.group();
    let gamma_perp = annihilator(&g.dual(), sys.gamma())?;
    if !gamma_perp.is_subgroup_of(sys.lambda()) {
        return Err(GaborError::Precondition(format!(
            "Γ^⊥ = {gamma_perp} is not contained in Λ = {}",
            sys.lambda()
        )));
    }
    let lambda_perp = annihilator(g, sys.lambda())?;
    let w = sys.w_lambda() * sys.w_gamma() * sys.lambda().order() as f64 / g.order() as f64;
    let spectrum = fourier(sys.window());
    let dual = g.dual();
    let ks = relative_transversal(sys.gamma(), &lambda_perp)?;
    let z = zak(&spectrum, &lambda_perp)?;
    let xs = z.cols().reps().to_vec();

    let mut fiber = (f64::INFINITY, 0.0_f64);
    let mut zb = (f64::INFINITY, 0.0_f64);
    let mut spectral_deviation: f64 = 0.0;
    for &alpha in transversal(&dual, &lambda_perp)?.reps() {
        let cols: Vec<Vec<Complex64>> = sys
            .gamma()
            .elements()
            .iter()
            .map(|&gm| {
                lambda_perp
                    .elements()
                    .iter()
                    .map(|&y| spectrum.values()[dual.add(dual.sub(alpha, gm), y)] * w.sqrt())
                    .collect()
            })
            .collect();
        let m = columns_matrix(lambda_perp.order(), &cols);
        let mut eigs = hermitian_eigenvalues(&(&m * m.adjoint()))?;
        eigs.iter_mut().for_each(|e| *e = e.max(0.0));
        fiber.0 = fiber.0.min(eigs[0]);
        fiber.1 = fiber.1.max(eigs[eigs.len() - 1]);

        let mut vals: Vec<f64> = xs
            .iter()
            .map(|&x| {
                w * ks
                    .iter()
                    .map(|&k| z.eval(dual.add(alpha, k), x).norm_sqr())
                    .sum::<f64>()
            })
            .collect();
        vals.sort_by(|a, b| a.total_cmp(b));
        zb.0 = zb.0.min(vals[0]);
        zb.1 = zb.1.max(vals[vals.len() - 1]);
        for (a, b) in eigs.iter().zip(&vals) {
            spectral_deviation = spectral_deviation.max((a - b).abs());
        }
    }
    Ok(DualZakReport {
        direct: frame_bounds(sys)?,
        fiber: FrameBounds { lower: fiber.0, upper: fiber.1 },
        zak: FrameBounds { lower: zb.0, upper: zb.1 },
        spectral_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gabor::Convention;
    use crate::zak_analysis::admissible_h;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sub(g: &FiniteAbelianGroup, gens: &[usize]) -> Subgroup {
        Subgroup::generated_by(g, gens).unwrap()
    }

    fn sample(g: &FiniteAbelianGroup) -> Window {
        Window::new(
            g,
            (0..g.order())
                .map(|k| c((k as f64 * 0.7).sin() + 0.3, (k as f64 * 1.3).cos()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn ti_fibers_of_full_translates() {
        // {T_h g}_{h∈Z4}, g = δ0: S = I.
        let g = FiniteAbelianGroup::cyclic(4);
        let r = ti_fiber_bounds(&g, &Subgroup::full(&g), &[(Window::delta(&g, 0), 1.0)]).unwrap();
        assert_eq!(r.per_omega.len(), 4);
        assert!((r.global.lower - 1.0).abs() < 1e-14 && (r.global.upper - 1.0).abs() < 1e-14);
        assert!(matches!(ti_fiber_bounds(&g, &Subgroup::full(&g), &[]), Err(GaborError::Domain(_))));
    }

    #[test]
    fn ti_fibers_with_trivial_h() {
        // H = {0}: a single fiber, the frame operator of the generators.
        let g = FiniteAbelianGroup::cyclic(3);
        let gens = [(Window::delta(&g, 0), 2.0), (Window::delta(&g, 1), 0.5)];
        let r = ti_fiber_bounds(&g, &Subgroup::trivial(&g), &gens).unwrap();
        assert_eq!(r.per_omega.len(), 1);
        assert!(r.global.lower.abs() < 1e-14);
        assert!((r.global.upper - 2.0).abs() < 1e-13);

        let z2 = FiniteAbelianGroup::cyclic(2);
        let r = ti_fiber_bounds(&z2, &Subgroup::trivial(&z2), &[(Window::delta(&z2, 0), 1.0)]).unwrap();
        assert!(r.global.lower.abs() < 1e-15 && (r.global.upper - 1.0).abs() < 1e-14);
        assert!(ti_fiber_bounds(&z2, &Subgroup::full(&z2), &[(Window::delta(&z2, 0), 0.0)]).is_err());
    }

    #[test]
    fn ti_fibers_of_constant_window() {
        let g = FiniteAbelianGroup::cyclic(2);
        let r = ti_fiber_bounds(&g, &Subgroup::full(&g), &[(Window::from_real(&g, &[1.0, 1.0]).unwrap(), 1.0)]).unwrap();
        let per: Vec<(usize, f64, f64)> = r.per_omega.iter().map(|f| (f.omega, f.lower, f.upper)).collect();
        assert_eq!(per.len(), 2);
        assert!((per[0].1 - 4.0).abs() < 1e-14 && per[1].2.abs() < 1e-14);
        assert!(r.global.lower.abs() < 1e-14 && (r.global.upper - 4.0).abs() < 1e-14);
    }

    #[test]
    fn readings_on_z2_delta() {
        let g = FiniteAbelianGroup::cyclic(2);
        let h = Subgroup::full(&g);
        let sys = GaborSystem::new(Window::delta(&g, 0), h.clone(), h.clone(), Convention::ZakChain(h.clone())).unwrap();
        let adm = AdmissibleH::new(sys.lambda(), sys.gamma(), &h).unwrap();
        let r = gabor_fiber_bounds(&sys, &adm, Reading::Modulated).unwrap();
        assert!((r.global.lower - 2.0).abs() < 1e-14 && (r.global.upper - 2.0).abs() < 1e-14);

        let zero = sys.with_window(Window::zeros(&g)).unwrap();
        for reading in [Reading::Printed, Reading::Modulated] {
            let r = gabor_fiber_bounds(&zero, &adm, reading).unwrap();
            assert_eq!((r.global.lower, r.global.upper), (0.0, 0.0));
        }
    }

    #[test]
    fn dual_routes_small_cases() {
        let g = FiniteAbelianGroup::cyclic(4);
        let full = Subgroup::full(&g);
        let sys = GaborSystem::new(Window::delta(&g, 0), full.clone(), full.clone(), Convention::Plancherel).unwrap();
        let r = cor43_check(&sys).unwrap();
        for b in [r.direct, r.fiber, r.zak] {
            assert!((b.lower - 1.0).abs() < 1e-14 && (b.upper - 1.0).abs() < 1e-14);
        }
        let r = cor43_check(&sys.with_window(Window::zeros(&g)).unwrap()).unwrap();
        for b in [r.direct, r.fiber, r.zak] {
            assert_eq!((b.lower, b.upper), (0.0, 0.0));
        }
    }

    #[test]
    fn modulated_reading_matches_direct() {
        let g = FiniteAbelianGroup::cyclic(12);
        let lambda = sub(&g, &[2]);
        let gamma = sub(&g, &[3]);
        for adm in admissible_h(&g, &lambda, &gamma).unwrap() {
            let sys = GaborSystem::new(sample(&g), lambda.clone(), gamma.clone(), Convention::Plancherel).unwrap();
            let direct = frame_bounds(&sys).unwrap();
            let r = gabor_fiber_bounds(&sys, &adm, Reading::Modulated).unwrap();
            assert!((r.global.lower - direct.lower).abs() < 1e-10 * direct.upper);
            assert!((r.global.upper - direct.upper).abs() < 1e-10 * direct.upper);
        }
    }

    #[test]
    fn dual_routes_agree_with_direct() {
        let g = FiniteAbelianGroup::new(&[4, 6]).unwrap();
        let lambda = sub(&g, &[g.index_reduced(&[2, 0]).unwrap(), g.index_reduced(&[0, 1]).unwrap()]);
        let gamma = Subgroup::full(&g);
        let sys = GaborSystem::new(sample(&g), lambda, gamma, Convention::Plancherel).unwrap();
        let r = cor43_check(&sys).unwrap();
        for b in [r.fiber, r.zak] {
            assert!((b.lower - r.direct.lower).abs() < 1e-10 * r.direct.upper);
            assert!((b.upper - r.direct.upper).abs() < 1e-10 * r.direct.upper);
        }
        assert!(r.spectral_deviation < 1e-10 * r.direct.upper);
    }

    #[test]
    fn dual_routes_require_containment() {
        let g = FiniteAbelianGroup::cyclic(12);
        let sys = GaborSystem::new(sample(&g), sub(&g, &[3]), sub(&g, &[3]), Convention::Plancherel).unwrap();
        assert!(matches!(cor43_check(&sys), Err(GaborError::Precondition(_))));
    }
}
