//! Gabor systems `{E_γ T_λ g}_{λ∈Λ, γ∈Γ}`, their frame operators, optimal
//! frame bounds and classification.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{GaborError, Result};
use crate::group::{annihilator, FiniteAbelianGroup, Subgroup};
use crate::linalg::{
    distance_to_identity, hermitian_eigenvalues, numerical_rank, singular_values, CMatrix,
    RANK_TOL,
};
use crate::transforms::{modulate, translate, Window};

pub const DEFAULT_TOL: f64 = 1e-10;

/// How the per-point weights on `Λ` and `Γ` are fixed.
#[derive(Clone, Debug, PartialEq)]
pub enum Convention {
    /// Counting measure on `Λ`, `1/|Γ|` per point of `Γ`.
    Plancherel,
    /// Counting measure on `Λ`, `1/|H^⊥|` per point of `Γ`; requires
    /// `H ≤ Λ` and `H^⊥ ≤ Γ`.
    ZakChain(Subgroup),
    /// Explicit weights.
    Custom { w_lambda: f64, w_gamma: f64 },
}

impl Convention {
    pub fn name(&self) -> &'static str {
        match self {
            Convention::Plancherel => "plancherel",
            Convention::ZakChain(_) => "zak-chain",
            Convention::Custom { .. } => "custom",
        }
    }
}

#[derive(Clone, Debug)]
pub struct GaborSystem {
    window: Window,
    lambda: Subgroup,
    gamma: Subgroup,
    convention: Convention,
    w_lambda: f64,
    w_gamma: f64,
}

impl GaborSystem {
    pub fn new(
        window: Window,
        lambda: Subgroup,
        gamma: Subgroup,
        convention: Convention,
    ) -> Result<Self> {
        let g = window.group().clone();
        if lambda.parent() != &g {
            return Err(GaborError::Domain(format!(
                "translation subgroup lives in {} but the window is on {g}",
                lambda.parent()
            )));
        }
        if gamma.parent() != &g.dual() {
            return Err(GaborError::Domain(format!(
                "modulation subgroup lives in {} but the dual group is {g}",
                gamma.parent()
            )));
        }
        let (w_lambda, w_gamma) = match &convention {
            Convention::Plancherel => (1.0, 1.0 / gamma.order() as f64),
            Convention::ZakChain(h) => {
                check_admissible(&g, &lambda, &gamma, h)?;
                (1.0, h.order() as f64 / g.order() as f64)
            }
            Convention::Custom { w_lambda, w_gamma } => {
                if !(*w_lambda > 0.0 && *w_gamma > 0.0) || !w_lambda.is_finite() || !w_gamma.is_finite() {
                    return Err(GaborError::Domain(
                        "custom weights must be positive and finite".into(),
                    ));
                }
                (*w_lambda, *w_gamma)
            }
        };
        Ok(Self {
            window,
            lambda,
            gamma,
            convention,
            w_lambda,
            w_gamma,
        })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        self.window.group()
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn lambda(&self) -> &Subgroup {
        &self.lambda
    }

    pub fn gamma(&self) -> &Subgroup {
        &self.gamma
    }

    pub fn convention(&self) -> &Convention {
        &self.convention
    }

    pub fn w_lambda(&self) -> f64 {
        self.w_lambda
    }

    pub fn w_gamma(&self) -> f64 {
        self.w_gamma
    }

    pub fn atom_count(&self) -> usize {
        self.lambda.order() * self.gamma.order()
    }

    /// Same window and subgroups under another convention.
    pub fn with_convention(&self, convention: Convention) -> Result<Self> {
        Self::new(
            self.window.clone(),
            self.lambda.clone(),
            self.gamma.clone(),
            convention,
        )
    }

    pub fn with_window(&self, window: Window) -> Result<Self> {
        Self::new(
            window,
            self.lambda.clone(),
            self.gamma.clone(),
            self.convention.clone(),
        )
    }

    /// `E_γ T_λ g`.
    pub fn atom(&self, lambda: usize, gamma: usize) -> Result<Window> {
        if !self.lambda.contains(lambda) {
            return Err(GaborError::Domain(format!(
                "{} is not in the translation subgroup",
                self.group().element(lambda)
            )));
        }
        if !self.gamma.contains(gamma) {
            return Err(GaborError::Domain(format!(
                "{} is not in the modulation subgroup",
                self.group().element(gamma)
            )));
        }
        Ok(modulate(&translate(&self.window, lambda), gamma))
    }

    /// Weighted synthesis matrix: column `(λ, γ)` (row-major over `Λ × Γ`)
    /// is `√(w_Λ w_Γ)·E_γ T_λ g`.
    pub fn synthesis_matrix(&self) -> CMatrix {
        let g = self.group();
        let n = g.order();
        let scale = (self.w_lambda * self.w_gamma).sqrt();
        let mut t = CMatrix::zeros(n, self.atom_count());
        let mut col = 0;
        for &lam in self.lambda.elements() {
            let shifted = translate(&self.window, lam);
            for &gam in self.gamma.elements() {
                for x in g.elements() {
                    t[(x, col)] = g.character(x, gam) * shifted.values()[x] * scale;
                }
                col += 1;
            }
        }
        t
    }
}

/// `H ≤ Λ` and `H^⊥ ≤ Γ`.
pub(crate) fn check_admissible(
    g: &FiniteAbelianGroup,
    lambda: &Subgroup,
    gamma: &Subgroup,
    h: &Subgroup,
) -> Result<()> {
    if h.parent() != g || !h.is_subgroup_of(lambda) {
        return Err(GaborError::Precondition(format!(
            "H = {h} is not contained in Λ = {lambda}"
        )));
    }
    let hperp = annihilator(g, h)?;
    if !hperp.is_subgroup_of(gamma) {
        return Err(GaborError::Precondition(format!(
            "H^⊥ = {hperp} is not contained in Γ = {gamma}"
        )));
    }
    Ok(())
}

pub fn gabor_atom(sys: &GaborSystem, lambda: usize, gamma: usize) -> Result<Window> {
    sys.atom(lambda, gamma)
}

/// `S = Σ_{λ,γ} w_Λ w_Γ (E_γT_λg)(E_γT_λg)^*`, assembled as `T·T^*`.
pub fn frame_operator(sys: &GaborSystem) -> CMatrix {
    let t = sys.synthesis_matrix();
    &t * t.adjoint()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

fn bounds_from_eigenvalues(eigs: &[f64]) -> Result<FrameBounds> {
    let (Some(&lo), Some(&hi)) = (eigs.first(), eigs.last()) else {
        return Ok(FrameBounds { lower: 0.0, upper: 0.0 });
    };
    let scale = hi.abs().max(1.0);
    if lo < -1e-8 * scale {
        return Err(GaborError::Numeric(format!(
            "frame operator has a negative eigenvalue {lo:.3e} (largest {hi:.3e})"
        )));
    }
    Ok(FrameBounds {
        lower: lo.max(0.0),
        upper: hi.max(0.0),
    })
}

/// Optimal bounds: extreme eigenvalues of the frame operator.
pub fn frame_bounds(sys: &GaborSystem) -> Result<FrameBounds> {
    bounds_from_eigenvalues(&hermitian_eigenvalues(&frame_operator(sys))?)
}

/// Sorted spectrum of the frame operator.
pub fn frame_spectrum(sys: &GaborSystem) -> Result<Vec<f64>> {
    hermitian_eigenvalues(&frame_operator(sys))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrameReport {
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub is_frame: bool,
    pub is_tight: bool,
    pub is_parseval: bool,
    pub is_complete: bool,
    pub is_minimal: bool,
    pub is_onb: bool,
    /// `B/A`; infinite when `A = 0`.
    pub condition_number: f64,
}

impl FrameReport {
    pub(crate) fn from_parts(
        bounds: FrameBounds,
        parseval_distance: f64,
        is_complete: bool,
        is_minimal: bool,
        is_onb: bool,
        tol: f64,
    ) -> Self {
        let is_frame = bounds.lower > tol;
        Self {
            lower_bound: bounds.lower,
            upper_bound: bounds.upper,
            is_frame,
            is_tight: is_frame && bounds.upper - bounds.lower <= tol * bounds.upper,
            is_parseval: is_frame && parseval_distance <= tol,
            is_complete,
            is_minimal,
            is_onb,
            condition_number: if bounds.lower > 0.0 {
                bounds.upper / bounds.lower
            } else {
                f64::INFINITY
            },
        }
    }
}

/// Frame, tightness and Parseval flags from the spectrum of `S`;
/// completeness and minimality from the numerical rank of the synthesis
/// matrix; ONB from the Gram matrix of the weighted atoms.
pub fn classify(sys: &GaborSystem, tol: f64) -> Result<FrameReport> {
    let t = sys.synthesis_matrix();
    let s = &t * t.adjoint();
    let eigs = hermitian_eigenvalues(&s)?;
    let bounds = bounds_from_eigenvalues(&eigs)?;
    let rank = numerical_rank(&singular_values(&t), RANK_TOL);
    let n = sys.group().order();
    let is_complete = rank == n;
    let is_minimal = rank == sys.atom_count();
    let gram = t.adjoint() * &t;
    let gram_defect = (0..gram.nrows())
        .flat_map(|i| (0..gram.ncols()).map(move |j| (i, j)))
        .map(|(i, j)| {
            let target = if i == j { 1.0 } else { 0.0 };
            (gram[(i, j)] - Complex64::new(target, 0.0)).norm()
        })
        .fold(0.0, f64::max);
    let is_onb = is_complete && gram_defect <= tol;
    Ok(FrameReport::from_parts(
        bounds,
        distance_to_identity(&eigs),
        is_complete,
        is_minimal,
        is_onb,
        tol,
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SufficientCondition {
    pub applies: bool,
    pub disjoint_supports: bool,
    /// `w_Γ·|Γ|·min_x Σ_λ w_Λ |g(x−λ)|²`.
    pub lower: f64,
    /// `w_Γ·|Γ|·max_x Σ_λ w_Λ |g(x−λ)|²`.
    pub upper: f64,
    /// The factor `w_Γ·|Γ|` (1 under the Plancherel convention).
    pub normalization: f64,
}

/// Support-disjointness criterion: if `supp g ∩ supp T_α g = ∅` for every
/// nonzero `α ∈ Γ^⊥` then `S` is the multiplication operator by
/// `w_Γ|Γ|·Σ_λ w_Λ|g(x−λ)|²`, whose extremes are the returned bounds.
pub fn sufficient_condition(sys: &GaborSystem, tol: f64) -> Result<SufficientCondition> {
    let g = sys.group();
    let gamma_perp = annihilator(g, sys.gamma())?;
    let vals = sys.window().values();
    let gmax = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let in_support = |x: usize| vals[x].norm() > tol * gmax;
    let disjoint_supports = gmax > 0.0
        && gamma_perp
            .elements()
            .iter()
            .filter(|&&a| a != 0)
            .all(|&a| g.elements().all(|x| !(in_support(x) && in_support(g.sub(x, a)))));
    let normalization = sys.w_gamma() * sys.gamma().order() as f64;
    let periodization: Vec<f64> = g
        .elements()
        .map(|x| {
            sys.lambda()
                .elements()
                .iter()
                .map(|&l| sys.w_lambda() * vals[g.sub(x, l)].norm_sqr())
                .sum::<f64>()
        })
        .collect();
    let lower = normalization * periodization.iter().copied().fold(f64::INFINITY, f64::min);
    let upper = normalization * periodization.iter().copied().fold(0.0, f64::max);
    Ok(SufficientCondition {
        applies: disjoint_supports && lower > tol,
        disjoint_supports,
        lower,
        upper,
        normalization,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodizationCheck {
    pub lhs: f64,
    pub rhs: Complex64,
}

/// Both sides of
/// `(1/|Γ|) Σ_{γ∈Γ} |⟨f, E_γT_λg⟩|² = Σ_x Σ_{α∈Γ^⊥} f(x) conj(f(x−α)) conj(T_λg(x)) T_λg(x−α)`
/// with counting measure on `G` and `Γ^⊥`.
pub fn lemma22_check(sys: &GaborSystem, f: &Window, lambda: usize) -> Result<PeriodizationCheck> {
    let g = sys.group();
    if f.group() != g {
        return Err(GaborError::Domain("f must live on the same group as the window".into()));
    }
    if lambda >= g.order() {
        return Err(GaborError::Domain(format!("translation index {lambda} is out of range")));
    }
    let shifted = translate(sys.window(), lambda);
    let lhs = sys
        .gamma()
        .elements()
        .iter()
        .map(|&gam| f.inner(&modulate(&shifted, gam)).norm_sqr())
        .sum::<f64>()
        / sys.gamma().order() as f64;
    let gamma_perp = annihilator(g, sys.gamma())?;
    let fv = f.values();
    let tv = shifted.values();
    let mut rhs = Complex64::new(0.0, 0.0);
    for x in g.elements() {
        for &a in gamma_perp.elements() {
            let y = g.sub(x, a);
            rhs += fv[x] * fv[y].conj() * tv[x].conj() * tv[y];
        }
    }
    Ok(PeriodizationCheck { lhs, rhs })
}
