//! Brute-force references. Nothing here reuses the matrix assembly,
//! character tables or transforms of the primary modules; elements are
//! handled through their residue coordinates and characters through
//! floating-point `exp(2πi·Σ x_j ξ_j / L_j)`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{GaborError, Result};
use crate::gabor::FrameBounds;
use crate::group::{FiniteAbelianGroup, Subgroup};
use crate::transforms::Window;

/// Rank threshold relative to the largest pivot or singular value.
pub const ORACLE_RANK_TOL: f64 = 1e-10;

fn coords(g: &FiniteAbelianGroup, mut idx: usize) -> Vec<usize> {
    let mut out = vec![0; g.factors().len()];
    for (slot, &l) in out.iter_mut().zip(g.factors()).rev() {
        *slot = idx % l;
        idx /= l;
    }
    out
}

fn index(g: &FiniteAbelianGroup, c: &[usize]) -> usize {
    c.iter()
        .zip(g.factors())
        .fold(0, |acc, (&x, &l)| acc * l + x % l)
}

fn plus(g: &FiniteAbelianGroup, a: usize, b: usize) -> usize {
    let (ca, cb) = (coords(g, a), coords(g, b));
    let sum: Vec<usize> = ca.iter().zip(&cb).map(|(x, y)| x + y).collect();
    index(g, &sum)
}

fn minus(g: &FiniteAbelianGroup, a: usize, b: usize) -> usize {
    let (ca, cb) = (coords(g, a), coords(g, b));
    let diff: Vec<usize> = ca
        .iter()
        .zip(&cb)
        .zip(g.factors())
        .map(|((x, y), l)| x + l - y)
        .collect();
    index(g, &diff)
}

/// `χ_ξ(x)` by floating-point trigonometry.
pub fn naive_character(g: &FiniteAbelianGroup, x: usize, xi: usize) -> Complex64 {
    let (cx, cxi) = (coords(g, x), coords(g, xi));
    let turns: f64 = cx
        .iter()
        .zip(&cxi)
        .zip(g.factors())
        .map(|((a, b), l)| (a * b % l) as f64 / *l as f64)
        .sum();
    Complex64::from_polar(1.0, 2.0 * PI * turns)
}

/// `Σ_{h∈H} f(x+h)·χ_ξ(h)`, summed literally.
pub fn naive_zak(f: &Window, h: &Subgroup, x: usize, xi: usize) -> Complex64 {
    let g = f.group();
    h.elements()
        .iter()
        .map(|&e| f.values()[plus(g, x, e)] * naive_character(g, e, xi))
        .sum()
}

/// `f̂(ξ) = Σ_x f(x)·conj χ_ξ(x)`.
pub fn naive_fourier(f: &Window) -> Vec<Complex64> {
    let g = f.group();
    (0..g.order())
        .map(|xi| {
            (0..g.order())
                .map(|x| f.values()[x] * naive_character(g, x, xi).conj())
                .sum()
        })
        .collect()
}

/// `E_γ T_λ g`, i.e. `x ↦ χ_γ(x)·g(x−λ)`.
pub fn naive_atom(g: &Window, lambda: usize, gamma: usize) -> Window {
    let grp = g.group();
    let values = (0..grp.order())
        .map(|x| naive_character(grp, x, gamma) * g.values()[minus(grp, x, lambda)])
        .collect();
    Window::new(grp, values).expect("atom has the window's length")
}

/// All atoms of a Gabor system with the weight `w_Λ·w_Γ` attached.
pub fn naive_gabor_atoms(
    g: &Window,
    lambda: &Subgroup,
    gamma: &Subgroup,
    w_lambda: f64,
    w_gamma: f64,
) -> Vec<(Window, f64)> {
    let mut out = Vec::with_capacity(lambda.order() * gamma.order());
    for &l in lambda.elements() {
        for &gm in gamma.elements() {
            out.push((naive_atom(g, l, gm), w_lambda * w_gamma));
        }
    }
    out
}

/// All translates `T_h g_p`, `h ∈ H`, keeping the generator weights.
pub fn naive_translates(h: &Subgroup, generators: &[(Window, f64)]) -> Vec<(Window, f64)> {
    let mut out = Vec::new();
    for (w, p) in generators {
        for &e in h.elements() {
            out.push((naive_atom(w, e, 0), *p));
        }
    }
    out
}

fn weighted_synthesis(atoms: &[(Window, f64)]) -> Result<DMatrix<Complex64>> {
    let Some((first, _)) = atoms.first() else {
        return Err(GaborError::Domain("atom list is empty".into()));
    };
    let n = first.len();
    if atoms.iter().any(|(a, _)| a.len() != n) {
        return Err(GaborError::Shape("atoms have different lengths".into()));
    }
    let mut m = DMatrix::zeros(n, atoms.len());
    for (j, (a, w)) in atoms.iter().enumerate() {
        let s = w.sqrt();
        for (i, v) in a.values().iter().enumerate() {
            m[(i, j)] = v * s;
        }
    }
    Ok(m)
}

/// Extreme squared singular values of the weighted synthesis matrix;
/// `A = 0` when there are fewer atoms than dimensions.
pub fn brute_frame_bounds(atoms: &[(Window, f64)]) -> Result<FrameBounds> {
    let m = weighted_synthesis(atoms)?;
    let rows = m.nrows();
    let sv = m.svd(false, false).singular_values;
    let upper = sv.iter().fold(0.0_f64, |a, &s| a.max(s * s));
    let lower = if atoms.len() < rows {
        0.0
    } else {
        sv.iter().fold(f64::INFINITY, |a, &s| a.min(s * s))
    };
    Ok(FrameBounds { lower, upper })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GramClass {
    pub complete: bool,
    pub minimal: bool,
    pub onb: bool,
}

/// Rank from a column-pivoted QR of the weighted synthesis matrix; ONB from
/// the Gram matrix.
pub fn gram_classify(atoms: &[(Window, f64)]) -> Result<GramClass> {
    let m = weighted_synthesis(atoms)?;
    let (rows, cols) = m.shape();
    let r = m.clone().col_piv_qr().r();
    let diag: Vec<f64> = (0..rows.min(cols)).map(|i| r[(i, i)].norm()).collect();
    let top = diag.first().copied().unwrap_or(0.0);
    let rank = if top == 0.0 {
        0
    } else {
        diag.iter().filter(|&&d| d > ORACLE_RANK_TOL * top).count()
    };
    let gram = m.adjoint() * &m;
    let mut gram_defect: f64 = 0.0;
    for i in 0..cols {
        for j in 0..cols {
            let target = if i == j { 1.0 } else { 0.0 };
            gram_defect = gram_defect.max((gram[(i, j)] - target).norm());
        }
    }
    Ok(GramClass {
        complete: rank == rows,
        minimal: rank == cols,
        onb: rank == rows && gram_defect <= ORACLE_RANK_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn naive_zak_examples() {
        let g = FiniteAbelianGroup::cyclic(4);
        let h = Subgroup::generated_by(&g, &[2]).unwrap();
        let d0 = Window::delta(&g, 0);
        assert!((naive_zak(&d0, &h, 2, 1) - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        assert_eq!(naive_zak(&d0, &h, 1, 3), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn brute_bounds_examples() {
        let g = FiniteAbelianGroup::cyclic(2);
        let onb = [(Window::delta(&g, 0), 1.0), (Window::delta(&g, 1), 1.0)];
        let b = brute_frame_bounds(&onb).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-15 && (b.upper - 1.0).abs() < 1e-15);
        let b = brute_frame_bounds(&onb[..1]).unwrap();
        assert_eq!(b.lower, 0.0);
        assert!((b.upper - 1.0).abs() < 1e-15);
        assert!(matches!(brute_frame_bounds(&[]), Err(GaborError::Domain(_))));
    }

    #[test]
    fn gram_classify_examples() {
        let g = FiniteAbelianGroup::cyclic(3);
        let basis: Vec<(Window, f64)> = (0..3).map(|k| (Window::delta(&g, k), 1.0)).collect();
        assert_eq!(
            gram_classify(&basis).unwrap(),
            GramClass { complete: true, minimal: true, onb: true }
        );
        let mut redundant = basis.clone();
        redundant.push(basis[1].clone());
        assert_eq!(
            gram_classify(&redundant).unwrap(),
            GramClass { complete: true, minimal: false, onb: false }
        );
    }

    #[test]
    fn coordinates_round_trip() {
        let g = FiniteAbelianGroup::new(&[2, 3, 4]).unwrap();
        for i in 0..g.order() {
            assert_eq!(index(&g, &coords(&g, i)), i);
            assert_eq!(minus(&g, plus(&g, i, 7), 7), i);
        }
    }
}
