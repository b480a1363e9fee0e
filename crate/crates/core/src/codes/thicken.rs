use crate::codes::causal::Thickening;
use crate::codes::css::CssCode;
use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, BinaryVector};

/// Location of a thickened-code qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QubitSite {
    /// Base qubit `q` on the sheet of classical bit `bit`.
    Sheet { bit: usize, q: usize },
    /// Intermediate qubit for base X-check `x` on classical check `check`.
    Intermediate { check: usize, x: usize },
}

/// Index maps of a thickened code.
///
/// With `c` classical bits and `r` classical checks:
/// sheet qubit `(b, q)` is `q*c + b`; intermediate qubit `(j, x)` is `n*c + x*r + j`;
/// sheet X-check `(b, x)` is `x*c + b`; sheet Z-check `(b, z)` is `z*c + b`;
/// intermediate Z-check `(j, q)` is `mz*c + q*r + j`; metacheck `(j, z)` is `z*r + j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThickenedLayout {
    pub n: usize,
    pub mx: usize,
    pub mz: usize,
    pub bits: usize,
    pub checks: usize,
}

impl ThickenedLayout {
    pub fn n_total(&self) -> usize {
        self.n * self.bits + self.mx * self.checks
    }

    pub fn x_checks(&self) -> usize {
        self.mx * self.bits
    }

    pub fn z_checks(&self) -> usize {
        self.mz * self.bits + self.n * self.checks
    }

    pub fn metachecks(&self) -> usize {
        self.mz * self.checks
    }

    #[inline]
    pub fn sheet_qubit(&self, bit: usize, q: usize) -> usize {
        q * self.bits + bit
    }

    #[inline]
    pub fn inter_qubit(&self, check: usize, x: usize) -> usize {
        self.n * self.bits + x * self.checks + check
    }

    #[inline]
    pub fn sheet_x_check(&self, bit: usize, x: usize) -> usize {
        x * self.bits + bit
    }

    #[inline]
    pub fn sheet_z_check(&self, bit: usize, z: usize) -> usize {
        z * self.bits + bit
    }

    #[inline]
    pub fn inter_z_check(&self, check: usize, q: usize) -> usize {
        self.mz * self.bits + q * self.checks + check
    }

    #[inline]
    pub fn metacheck(&self, check: usize, z: usize) -> usize {
        z * self.checks + check
    }

    pub fn site(&self, idx: usize) -> QubitSite {
        let split = self.n * self.bits;
        if idx < split {
            QubitSite::Sheet {
                bit: idx % self.bits,
                q: idx / self.bits,
            }
        } else {
            let i = idx - split;
            QubitSite::Intermediate {
                check: i % self.checks,
                x: i / self.checks,
            }
        }
    }

    /// Restriction of a thickened-code vector to the sheet of `bit`.
    pub fn sheet_part(&self, v: &BinaryVector, bit: usize) -> BinaryVector {
        let mut out = BinaryVector::zeros(self.n);
        for q in 0..self.n {
            if v.get(self.sheet_qubit(bit, q)) {
                out.set(q, true);
            }
        }
        out
    }

    /// Restriction to the intermediate qubits of classical check `check`.
    pub fn inter_part(&self, v: &BinaryVector, check: usize) -> BinaryVector {
        let mut out = BinaryVector::zeros(self.mx);
        for x in 0..self.mx {
            if v.get(self.inter_qubit(check, x)) {
                out.set(x, true);
            }
        }
        out
    }

    /// Embeds a base-code vector on the sheet of `bit`.
    pub fn embed_sheet(&self, v: &BinaryVector, bit: usize) -> BinaryVector {
        let mut out = BinaryVector::zeros(self.n_total());
        for q in v.iter_support() {
            out.set(self.sheet_qubit(bit, q), true);
        }
        out
    }
}

/// A thickened code with its layout, base code and thickening data.
#[derive(Clone, Debug)]
pub struct ThickenedCode {
    pub code: CssCode,
    pub layout: ThickenedLayout,
    pub base: CssCode,
    pub thickening: Thickening,
}

impl ThickenedCode {
    /// Thickness one: no metachecks, so stage 1 cannot repair syndrome errors.
    pub fn is_nft(&self) -> bool {
        self.layout.checks == 0
    }

    pub fn mz(&self) -> &BinaryMatrix {
        self.code.mz().expect("thickened codes carry metachecks")
    }

    /// Qubits outside every endpoint sheet: the measured bulk.
    pub fn bulk_qubits(&self) -> Vec<usize> {
        let l = &self.layout;
        (0..l.n_total())
            .filter(|&i| match l.site(i) {
                QubitSite::Sheet { bit, .. } => !self.thickening.causal.is_endpoint(bit),
                QubitSite::Intermediate { .. } => true,
            })
            .collect()
    }
}

/// Thickens `base` by the classical code of `thickening`.
///
/// `H̃_X = (H_X ⊗ I | I ⊗ h^T)`, `H̃_Z = ((H_Z ⊗ I | 0); (I ⊗ h | H_X^T ⊗ I))`,
/// `M̃_Z = (I ⊗ h | H_Z ⊗ I)`. The base code must carry logicals; the result gets
/// product-form logicals.
pub fn thicken(base: &CssCode, thickening: &Thickening) -> Result<ThickenedCode> {
    let h = thickening.code.h();
    let (r, c) = h.shape();
    let hx = base.hx();
    let hz = base.hz();
    let (mx, n) = hx.shape();
    let mz = hz.rows();
    let t = BinaryMatrix::tensor_product;
    let id = BinaryMatrix::identity;

    let hx_t = BinaryMatrix::block_compose_sized(
        &[vec![Some(&t(hx, &id(c))?), Some(&t(&id(mx), &h.transpose())?)]],
        &[mx * c],
        &[n * c, mx * r],
    )?;
    let hz_t = BinaryMatrix::block_compose_sized(
        &[
            vec![Some(&t(hz, &id(c))?), None],
            vec![Some(&t(&id(n), h)?), Some(&t(&hx.transpose(), &id(r))?)],
        ],
        &[mz * c, n * r],
        &[n * c, mx * r],
    )?;
    let mz_t = BinaryMatrix::block_compose_sized(
        &[vec![Some(&t(&id(mz), h)?), Some(&t(hz, &id(r))?)]],
        &[mz * r],
        &[mz * c, n * r],
    )?;
    let layout = ThickenedLayout {
        n,
        mx,
        mz,
        bits: c,
        checks: r,
    };
    let code = CssCode::new(hx_t, hz_t)?.with_mz(mz_t)?;

    let expected_k = base.k() * thickening.code.k()
        + (mx - base.rank_x()) * thickening.code.k_transpose();
    if code.k() != expected_k {
        return Err(Error::Construction(format!(
            "thickened k = {} but the product formula gives {expected_k}",
            code.k()
        )));
    }
    let mut out = ThickenedCode {
        code,
        layout,
        base: base.clone(),
        thickening: thickening.clone(),
    };
    if let (Some(lx), Some(lz)) = (base.lx(), base.lz()) {
        let (lx_t, lz_t) = kunneth_logicals(&out, lx, lz)?;
        out.code = out.code.with_logicals(lx_t, lz_t)?;
    }
    Ok(out)
}

/// Product logicals: `L̃_Z = L_Z ⊗ e_endpoint` and `L̃_X = L_X ⊗ g`, one pair per
/// endpoint, where `g` is the classical codeword that is one on that endpoint only.
pub fn kunneth_logicals(
    thick: &ThickenedCode,
    base_lx: &BinaryMatrix,
    base_lz: &BinaryMatrix,
) -> Result<(BinaryMatrix, BinaryMatrix)> {
    let l = &thick.layout;
    let causal = &thick.thickening.causal;
    let gs = thick.thickening.endpoint_codewords();
    if thick.thickening.code.k() != causal.endpoints.len() {
        return Err(Error::Construction(
            "endpoint count differs from the classical dimension".into(),
        ));
    }
    let mut lx = Vec::new();
    let mut lz = Vec::new();
    for (e, g) in causal.endpoints.iter().zip(&gs) {
        for i in 0..base_lx.rows() {
            let mut v = BinaryVector::zeros(l.n_total());
            for q in base_lx.row(i) {
                for b in g.iter_support() {
                    v.set(l.sheet_qubit(b, *q), true);
                }
            }
            lx.push(v);
            let mut w = BinaryVector::zeros(l.n_total());
            for q in base_lz.row(i) {
                w.set(l.sheet_qubit(*e, *q), true);
            }
            lz.push(w);
        }
    }
    let lx = BinaryMatrix::from_vectors(l.n_total(), &lx)?;
    let lz = BinaryMatrix::from_vectors(l.n_total(), &lz)?;
    if !thick.code.hz().matmul(&lx.transpose())?.is_zero()
        || !thick.code.hx().matmul(&lz.transpose())?.is_zero()
    {
        return Err(Error::Construction("product logicals fail to commute with checks".into()));
    }
    Ok((lx, lz))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::classical::repetition_code;
    use crate::codes::hgp::{hgp_logicals, hypergraph_product};

    fn surface13() -> CssCode {
        let r = repetition_code(3).unwrap();
        let hgp = hypergraph_product(&r, &r).unwrap();
        let (lx, lz) = hgp_logicals(&hgp).unwrap();
        hgp.code.with_logicals(lx, lz).unwrap()
    }

    #[test]
    fn rep3_thickening_shapes() {
        let t = thicken(&surface13(), &Thickening::repetition(3).unwrap()).unwrap();
        assert_eq!(t.code.n(), 51);
        assert_eq!(t.code.hz().shape(), (44, 51));
        assert_eq!(t.code.hx().shape(), (18, 51));
        assert_eq!(t.mz().shape(), (12, 44));
        assert_eq!(t.code.k(), 1);
        assert_eq!(t.bulk_qubits().len(), 51 - 13);
    }

    #[test]
    fn rep1_is_identity() {
        let base = surface13();
        let t = thicken(&base, &Thickening::repetition(1).unwrap()).unwrap();
        assert!(t.is_nft());
        assert_eq!(t.code.hx(), base.hx());
        assert_eq!(t.code.hz(), base.hz());
        assert_eq!(t.mz().rows(), 0);
    }

    #[test]
    fn star_thickening_logicals() {
        let t = thicken(&surface13(), &Thickening::star(3, 2).unwrap()).unwrap();
        assert_eq!(t.code.k(), 2);
        let lz = t.code.lz().unwrap();
        let lx = t.code.lx().unwrap();
        assert_eq!(lz.matmul(&lx.transpose()).unwrap(), BinaryMatrix::identity(2));
    }

    #[test]
    fn site_round_trip() {
        let t = thicken(&surface13(), &Thickening::repetition(3).unwrap()).unwrap();
        let l = &t.layout;
        for i in 0..l.n_total() {
            let back = match l.site(i) {
                QubitSite::Sheet { bit, q } => l.sheet_qubit(bit, q),
                QubitSite::Intermediate { check, x } => l.inter_qubit(check, x),
            };
            assert_eq!(back, i);
        }
    }
}
