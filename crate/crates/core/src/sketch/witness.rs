use crate::error::{Error, Result};
use crate::linalg::{norm2, svd, DenseMatrix};

use super::bounds::gap_ratio;
use super::symmetry::RANK_TOL;
use super::SketchInstance;

/// Two members `F(I ± E)` of the ambiguity set, `EX = 0`.
#[derive(Debug, Clone)]
pub struct ExtremalPair {
    pub b_plus: DenseMatrix,
    pub b_minus: DenseMatrix,
    /// `‖E‖₂`.
    pub eta: f64,
    /// Unit vector of `range(X)^⊥` spanning the rows of `E`.
    pub z: alloc::vec::Vec<f64>,
}

impl ExtremalPair {
    /// `‖B₊ − B₋‖₂ = 2 σ_min(F) η` by construction.
    pub fn separation(&self) -> Result<f64> {
        Ok(svd(&self.b_plus.sub(&self.b_minus)?)?.sigma_max())
    }
}

/// Builds `B± = F(I ± E)` with `E = η · v_min zᵀ`.
///
/// `v_min` is the right singular vector of `F` for its smallest nonzero
/// singular value, `z` the first canonical vector whose projection onto
/// `range(X)^⊥` has norm at least `1e-8` (normalized), and
/// `η = (σ_min/σ_max)(θ_ε − θ_δ)/(π/2 + θ_ε − θ_δ)`. Then `‖FE‖₂ = σ_min η`
/// and the pair is exactly `2σ_min²/σ_max · (…)` apart. With `ε = δ` the
/// pair degenerates to `(F, F)`.
pub fn construct_extremal_pair(inst: &SketchInstance) -> Result<ExtremalPair> {
    let (n, s) = (inst.n(), inst.s());
    if s >= n {
        return Err(Error::NoComplement { n, s });
    }
    let f = inst.f();
    let t = svd(f)?;
    let r = t.rank(RANK_TOL);
    if r == 0 {
        return Err(Error::ZeroMatrix);
    }
    let (smin, smax) = (t.s[r - 1], t.s[0]);
    let eta = (smin / smax) * gap_ratio(inst.epsilon(), inst.delta())?;
    let z = complement_direction(inst.x()).ok_or(Error::NoComplement { n, s })?;
    if eta == 0.0 {
        return Ok(ExtremalPair {
            b_plus: f.clone(),
            b_minus: f.clone(),
            eta,
            z,
        });
    }
    // F E = η (F v_min) zᵀ = η σ_min u_min zᵀ
    let fv = f.mul_vec(&t.v.col(r - 1));
    let fe = DenseMatrix::from_fn(n, n, |i, j| eta * fv[i] * z[j]);
    Ok(ExtremalPair {
        b_plus: f.add(&fe)?,
        b_minus: f.sub(&fe)?,
        eta,
        z,
    })
}

fn complement_direction(x: &DenseMatrix) -> Option<alloc::vec::Vec<f64>> {
    let n = x.rows();
    (0..n).find_map(|i| {
        // e_i − X Xᵀ e_i
        let coeffs = x.row(i).to_vec();
        let mut p = x.mul_vec(&coeffs);
        for v in p.iter_mut() {
            *v = -*v;
        }
        p[i] += 1.0;
        let norm = norm2(&p);
        (norm >= 1e-8).then(|| p.iter().map(|v| v / norm).collect())
    })
}
