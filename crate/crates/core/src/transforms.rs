//! Fourier transform, Zak transform and fiberization on finite abelian groups.
//!
//! Conventions: `f̂(ξ) = Σ_x f(x)·conj(χ_ξ(x))` and
//! `Z_H f(x, ξ) = Σ_{h∈H} f(x+h)·χ_ξ(h)` (no conjugate in the Zak kernel).
//! All sums are direct; the groups handled here are small.

use num_complex::Complex64;

use crate::error::{GaborError, Result};
use crate::group::{
    annihilator, transversal, weil_chain, FiniteAbelianGroup, MeasureChain, Subgroup,
    Transversal,
};

/// A complex function on a group, in canonical element order.
#[derive(Clone, Debug, PartialEq)]
pub struct Window {
    group: FiniteAbelianGroup,
    values: Vec<Complex64>,
}

impl Window {
    pub fn new(group: &FiniteAbelianGroup, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(GaborError::Shape(format!(
                "window has {} values but {} has order {}",
                values.len(),
                group,
                group.order()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(GaborError::Domain("window values must be finite".into()));
        }
        Ok(Self {
            group: group.clone(),
            values,
        })
    }

    pub fn zeros(group: &FiniteAbelianGroup) -> Self {
        Self {
            group: group.clone(),
            values: vec![Complex64::new(0.0, 0.0); group.order()],
        }
    }

    pub fn delta(group: &FiniteAbelianGroup, at: usize) -> Self {
        let mut w = Self::zeros(group);
        w.values[at] = Complex64::new(1.0, 0.0);
        w
    }

    pub fn constant(group: &FiniteAbelianGroup, value: Complex64) -> Self {
        Self {
            group: group.clone(),
            values: vec![value; group.order()],
        }
    }

    pub fn from_real(group: &FiniteAbelianGroup, values: &[f64]) -> Result<Self> {
        Self::new(group, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Squared norm with counting measure.
    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            group: self.group.clone(),
            values: self.values.iter().map(|&v| v * c).collect(),
        }
    }

    /// `⟨self, other⟩ = Σ self(x)·conj(other(x))`.
    pub fn inner(&self, other: &Window) -> Complex64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    pub fn max_abs_diff(&self, other: &Window) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == Complex64::new(0.0, 0.0))
    }
}

/// `T_λ f(x) = f(x − λ)`.
pub fn translate(f: &Window, lambda: usize) -> Window {
    let g = f.group();
    let values = g.elements().map(|x| f.values[g.sub(x, lambda)]).collect();
    Window {
        group: g.clone(),
        values,
    }
}

/// `E_γ f(x) = χ_γ(x)·f(x)`.
pub fn modulate(f: &Window, gamma: usize) -> Window {
    let g = f.group();
    let values = g
        .elements()
        .map(|x| g.character(x, gamma) * f.values[x])
        .collect();
    Window {
        group: g.clone(),
        values,
    }
}

pub fn fourier(f: &Window) -> Window {
    let g = f.group();
    let values = g
        .elements()
        .map(|xi| {
            g.elements()
                .map(|x| f.values[x] * g.character(x, xi).conj())
                .sum()
        })
        .collect();
    Window {
        group: g.dual(),
        values,
    }
}

pub fn inverse_fourier(spectrum: &Window) -> Window {
    let g = spectrum.group();
    let n = g.order() as f64;
    let values = g
        .elements()
        .map(|x| {
            g.elements()
                .map(|xi| spectrum.values[xi] * g.character(x, xi))
                .sum::<Complex64>()
                / n
        })
        .collect();
    Window {
        group: g.dual(),
        values,
    }
}

/// Zak transform values on the fundamental domain `G/H × Ĝ/H^⊥`.
#[derive(Clone, Debug)]
pub struct ZakArray {
    group: FiniteAbelianGroup,
    subgroup: Subgroup,
    hperp: Subgroup,
    rows: Transversal,
    cols: Transversal,
    data: Vec<Complex64>,
    chain: MeasureChain,
}

impl ZakArray {
    /// Wraps raw fundamental-domain values (row-major, rows = `G/H`).
    pub fn from_data(h: &Subgroup, data: Vec<Complex64>) -> Result<Self> {
        let g = h.parent().clone();
        let hperp = annihilator(&g, h)?;
        let rows = transversal(&g, h)?;
        let cols = transversal(&g.dual(), &hperp)?;
        if data.len() != rows.len() * cols.len() {
            return Err(GaborError::Shape(format!(
                "Zak data has {} entries, expected {} x {}",
                data.len(),
                rows.len(),
                cols.len()
            )));
        }
        let chain = weil_chain(&g, h)?;
        Ok(Self {
            group: g,
            subgroup: h.clone(),
            hperp,
            rows,
            cols,
            data,
            chain,
        })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn annihilator(&self) -> &Subgroup {
        &self.hperp
    }

    pub fn rows(&self) -> &Transversal {
        &self.rows
    }

    pub fn cols(&self) -> &Transversal {
        &self.cols
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn chain(&self) -> &MeasureChain {
        &self.chain
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols.len() + j]
    }

    /// Quasi-periodic evaluation anywhere on `G × Ĝ`.
    ///
    /// With `x = t + h` (`t` the stored row representative, `h ∈ H`) and `ξ`
    /// in the coset of the stored column `s`,
    /// `Z(x, ξ) = conj(χ_ξ(h))·Z(t, s)`.
    pub fn eval(&self, x: usize, xi: usize) -> Complex64 {
        let g = &self.group;
        let i = self.rows.coset_index(x);
        let j = self.cols.coset_index(xi);
        let h = g.sub(x, self.rows.reps()[i]);
        g.character(h, xi).conj() * self.get(i, j)
    }

    /// Squared norm in `L²(M_H)` under the measure chain.
    pub fn norm_sqr(&self) -> f64 {
        let w = self.chain.w_g_mod_h * self.chain.w_ghat_mod_hperp;
        w * self.data.iter().map(|v| v.norm_sqr()).sum::<f64>()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn min_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min)
    }
}

pub fn zak(f: &Window, h: &Subgroup) -> Result<ZakArray> {
    let g = f.group();
    if h.parent() != g {
        return Err(GaborError::Domain(format!(
            "subgroup lives in {} but the window is on {g}",
            h.parent()
        )));
    }
    let hperp = annihilator(g, h)?;
    let rows = transversal(g, h)?;
    let cols = transversal(&g.dual(), &hperp)?;
    let chain = weil_chain(g, h)?;
    let mut data = Vec::with_capacity(rows.len() * cols.len());
    for &t in rows.reps() {
        for &s in cols.reps() {
            let z: Complex64 = h
                .elements()
                .iter()
                .map(|&y| f.values[g.add(t, y)] * g.character(y, s))
                .sum();
            data.push(z * chain.w_h);
        }
    }
    Ok(ZakArray {
        group: g.clone(),
        subgroup: h.clone(),
        hperp,
        rows,
        cols,
        data,
        chain,
    })
}

/// `Z_H f(x, ξ)` summed from the definition at every `(x, ξ) ∈ G × Ĝ`,
/// row-major in `x`. No fundamental-domain reduction is used.
pub fn zak_table(f: &Window, h: &Subgroup) -> Result<Vec<Complex64>> {
    let g = f.group();
    if h.parent() != g {
        return Err(GaborError::Domain(format!(
            "subgroup lives in {} but the window is on {g}",
            h.parent()
        )));
    }
    let n = g.order();
    let mut out = Vec::with_capacity(n * n);
    for x in 0..n {
        for xi in 0..n {
            out.push(
                h.elements()
                    .iter()
                    .map(|&y| f.values[g.add(x, y)] * g.character(y, xi))
                    .sum(),
            );
        }
    }
    Ok(out)
}

pub fn zak_eval(z: &ZakArray, x: usize, xi: usize) -> Complex64 {
    z.eval(x, xi)
}

/// `f(x) = (w_{Ĝ/H^⊥} / w_H)·Σ_j Z(x, s_j)`, with `Z(x, ·)` obtained by
/// quasi-periodicity for `x` off the stored rows.
pub fn inverse_zak(z: &ZakArray) -> Result<Window> {
    let g = &z.group;
    if z.rows.len() * z.cols.len() != g.order() || z.data.len() != g.order() {
        return Err(GaborError::Shape(format!(
            "Zak array {} x {} does not match group order {}",
            z.rows.len(),
            z.cols.len(),
            g.order()
        )));
    }
    let scale = z.chain.w_ghat_mod_hperp / z.chain.w_h;
    let values = g
        .elements()
        .map(|x| {
            z.cols
                .reps()
                .iter()
                .map(|&s| z.eval(x, s))
                .sum::<Complex64>()
                * scale
        })
        .collect();
    Ok(Window {
        group: g.clone(),
        values,
    })
}

/// Fibers `{f̂(ω+α)}_{α∈H^⊥}` over the section `Ω` of `H^⊥` in `Ĝ`.
#[derive(Clone, Debug)]
pub struct FiberMap {
    group: FiberGroups,
    omega: Vec<usize>,
    fibers: Vec<Vec<Complex64>>,
}

#[derive(Clone, Debug)]
struct FiberGroups {
    group: FiniteAbelianGroup,
    subgroup: Subgroup,
    hperp: Subgroup,
}

impl FiberMap {
    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group.group
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.group.subgroup
    }

    pub fn annihilator(&self) -> &Subgroup {
        &self.group.hperp
    }

    pub fn omega(&self) -> &[usize] {
        &self.omega
    }

    pub fn fibers(&self) -> &[Vec<Complex64>] {
        &self.fibers
    }

    /// `Σ_ω w_Ĝ·‖fiber(ω)‖²`, which equals `‖f‖²`.
    pub fn norm_sqr(&self) -> f64 {
        let w = 1.0 / self.group.group.order() as f64;
        w * self
            .fibers
            .iter()
            .flatten()
            .map(|v| v.norm_sqr())
            .sum::<f64>()
    }
}

/// Fiber of an already transformed spectrum at `omega`.
pub(crate) fn fiber_at(spectrum: &Window, hperp: &Subgroup, omega: usize) -> Vec<Complex64> {
    let g = spectrum.group();
    hperp
        .elements()
        .iter()
        .map(|&a| spectrum.values[g.add(omega, a)])
        .collect()
}

pub fn fiberize(f: &Window, h: &Subgroup) -> Result<FiberMap> {
    let g = f.group();
    if h.parent() != g {
        return Err(GaborError::Domain(format!(
            "subgroup lives in {} but the window is on {g}",
            h.parent()
        )));
    }
    let hperp = annihilator(g, h)?;
    let omega = transversal(&g.dual(), &hperp)?.reps().to_vec();
    let spectrum = fourier(f);
    let fibers = omega
        .iter()
        .map(|&w| fiber_at(&spectrum, &hperp, w))
        .collect();
    Ok(FiberMap {
        group: FiberGroups {
            group: g.clone(),
            subgroup: h.clone(),
            hperp,
        },
        omega,
        fibers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn z(factors: &[i64]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(factors).unwrap()
    }

    #[test]
    fn window_rejects_bad_input() {
        let g = z(&[4]);
        assert!(matches!(
            Window::new(&g, vec![c(1.0, 0.0); 3]),
            Err(GaborError::Shape(_))
        ));
        assert!(Window::new(&g, vec![c(f64::NAN, 0.0); 4]).is_err());
    }

    #[test]
    fn fourier_examples() {
        let g = z(&[4]);
        let fh = fourier(&Window::delta(&g, 0));
        assert!(fh.values().iter().all(|&v| v == c(1.0, 0.0)));
        let g2 = z(&[2]);
        let fh = fourier(&Window::from_real(&g2, &[1.0, 1.0]).unwrap());
        assert_eq!(fh.values(), &[c(2.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn inverse_fourier_examples() {
        let g = z(&[4]);
        let f = inverse_fourier(&Window::constant(&g, c(1.0, 0.0)));
        assert!(f.max_abs_diff(&Window::delta(&g, 0)) < 1e-15);
        let f = inverse_fourier(&Window::delta(&g, 0));
        assert!(f.values().iter().all(|v| (v - c(0.25, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn zak_delta_on_z4() {
        let g = z(&[4]);
        let h = Subgroup::generated_by(&g, &[2]).unwrap();
        let za = zak(&Window::delta(&g, 0), &h).unwrap();
        assert_eq!(za.n_rows(), 2);
        assert_eq!(za.n_cols(), 2);
        for j in 0..2 {
            assert_eq!(za.get(0, j), c(1.0, 0.0));
            assert_eq!(za.get(1, j), c(0.0, 0.0));
        }
        assert_eq!(zak_eval(&za, 2, 0), c(1.0, 0.0));
        assert_eq!(zak_eval(&za, 2, 1), c(-1.0, 0.0));
        assert_eq!(zak_eval(&za, 0, 1), za.get(0, 1));
    }

    #[test]
    fn zak_full_and_trivial_subgroups() {
        let g = z(&[6]);
        let za = zak(&Window::constant(&g, c(1.0, 0.0)), &Subgroup::full(&g)).unwrap();
        assert_eq!(za.n_rows(), 1);
        for j in 0..za.n_cols() {
            let xi = za.cols().reps()[j];
            let expect = if xi == 0 { 6.0 } else { 0.0 };
            assert!((za.get(0, j) - c(expect, 0.0)).norm() < 1e-12);
        }
        let f = Window::new(&g, (0..6).map(|k| c(k as f64, -1.0)).collect()).unwrap();
        let za = zak(&f, &Subgroup::trivial(&g)).unwrap();
        assert_eq!(za.n_cols(), 1);
        for x in g.elements() {
            for xi in g.elements() {
                assert_eq!(za.eval(x, xi), f.values()[x]);
            }
        }
    }

    #[test]
    fn inverse_zak_examples() {
        let g = z(&[4]);
        let h = Subgroup::generated_by(&g, &[2]).unwrap();
        let d = Window::delta(&g, 0);
        let back = inverse_zak(&zak(&d, &h).unwrap()).unwrap();
        assert!(back.max_abs_diff(&d) < 1e-15);
        let f = Window::new(&g, vec![c(1.0, 2.0), c(-1.0, 0.5), c(0.0, 3.0), c(2.0, 2.0)]).unwrap();
        let back = inverse_zak(&zak(&f, &Subgroup::trivial(&g)).unwrap()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn zak_from_data_checks_shape() {
        let g = z(&[4]);
        let h = Subgroup::generated_by(&g, &[2]).unwrap();
        assert!(matches!(
            ZakArray::from_data(&h, vec![c(0.0, 0.0); 3]),
            Err(GaborError::Shape(_))
        ));
    }

    #[test]
    fn fiberize_examples() {
        let g = z(&[4]);
        let h = Subgroup::generated_by(&g, &[2]).unwrap();
        let fm = fiberize(&Window::delta(&g, 0), &h).unwrap();
        assert_eq!(fm.omega(), &[0, 1]);
        for fiber in fm.fibers() {
            assert_eq!(fiber, &vec![c(1.0, 0.0), c(1.0, 0.0)]);
        }
        let f = Window::new(&g, vec![c(1.0, 2.0), c(-1.0, 0.5), c(0.0, 3.0), c(2.0, 2.0)]).unwrap();
        let fm = fiberize(&f, &Subgroup::full(&g)).unwrap();
        assert_eq!(fm.omega(), &[0, 1, 2, 3]);
        let fh = fourier(&f);
        for (k, fiber) in fm.fibers().iter().enumerate() {
            assert_eq!(fiber, &vec![fh.values()[k]]);
        }
        assert!((fm.norm_sqr() - f.norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn translation_and_modulation_intertwine_with_fourier() {
        let g = z(&[2, 3]);
        let f = Window::new(&g, (0..6).map(|k| c(k as f64 * 0.3, 1.0 - k as f64)).collect()).unwrap();
        for a in g.elements() {
            // F T_a = E_{-a} F
            let lhs = fourier(&translate(&f, a));
            let rhs = modulate(&fourier(&f), g.neg(a));
            assert!(lhs.max_abs_diff(&rhs) < 1e-12);
            // F E_a = T_a F
            let lhs = fourier(&modulate(&f, a));
            let rhs = translate(&fourier(&f), a);
            assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }
    }
}
