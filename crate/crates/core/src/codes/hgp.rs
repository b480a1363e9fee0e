use crate::codes::classical::ClassicalCode;
use crate::codes::css::{pair_against, CssCode};
use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, BinaryVector};

/// A hypergraph product code together with its input codes.
///
/// Qubit `(a, b)` of the left block has index `a * n2 + b`; qubit `(i, j)` of the
/// right block has index `n1 * n2 + i * m2 + j`. X-check `(i, b)` is `i * n2 + b`
/// and Z-check `(a, j)` is `a * m2 + j`.
#[derive(Clone, Debug)]
pub struct HgpCode {
    pub code: CssCode,
    pub c1: ClassicalCode,
    pub c2: ClassicalCode,
}

impl HgpCode {
    pub fn n(&self) -> usize {
        self.code.n()
    }

    pub fn k(&self) -> usize {
        self.code.k()
    }

    /// `k1 k2 + k1^T k2^T`.
    pub fn k_formula(&self) -> usize {
        self.c1.k() * self.c2.k() + self.c1.k_transpose() * self.c2.k_transpose()
    }
}

/// `H_X = (H1 ⊗ I_n2 | I_m1 ⊗ H2^T)`, `H_Z = (I_n1 ⊗ H2 | H1^T ⊗ I_m2)`.
pub fn hypergraph_product(c1: &ClassicalCode, c2: &ClassicalCode) -> Result<HgpCode> {
    let (h1, h2) = (c1.h(), c2.h());
    let (m1, n1) = h1.shape();
    let (m2, n2) = h2.shape();
    let hx = BinaryMatrix::hstack(
        &BinaryMatrix::tensor_product(h1, &BinaryMatrix::identity(n2))?,
        &BinaryMatrix::tensor_product(&BinaryMatrix::identity(m1), &h2.transpose())?,
    )?;
    let hz = BinaryMatrix::hstack(
        &BinaryMatrix::tensor_product(&BinaryMatrix::identity(n1), h2)?,
        &BinaryMatrix::tensor_product(&h1.transpose(), &BinaryMatrix::identity(m2))?,
    )?;
    let code = CssCode::new(hx, hz)?;
    let hgp = HgpCode {
        code,
        c1: c1.clone(),
        c2: c2.clone(),
    };
    if hgp.k() != hgp.k_formula() {
        return Err(Error::Construction(format!(
            "rank gives k = {}, product formula gives {}",
            hgp.k(),
            hgp.k_formula()
        )));
    }
    Ok(hgp)
}

/// Product-form logical bases built from classical kernels and cokernels, then paired.
///
/// These are much lighter than generic kernel vectors of the quantum checks.
pub fn hgp_logicals(hgp: &HgpCode) -> Result<(BinaryMatrix, BinaryMatrix)> {
    let (h1, h2) = (hgp.c1.h(), hgp.c2.h());
    let (m1, n1) = h1.shape();
    let (m2, n2) = h2.shape();
    let n = hgp.n();
    // X type: e_a ⊗ ker H2 on the left, coker H1 ⊗ e_j on the right.
    // Z type: ker H1 ⊗ e_b on the left, e_i ⊗ coker H2 on the right.
    // The unit vectors complete the relevant row space.
    let ker1 = h1.kernel_basis();
    let ker2 = h2.kernel_basis();
    let coker1 = h1.transpose().kernel_basis();
    let coker2 = h2.transpose().kernel_basis();
    let comp_h1 = complement_unit_vectors(h1, n1);
    let comp_h2 = complement_unit_vectors(h2, n2);
    let comp_h1t = complement_unit_vectors(&h1.transpose(), m1);
    let comp_h2t = complement_unit_vectors(&h2.transpose(), m2);
    let offset = n1 * n2;

    let mut lx = Vec::new();
    let mut lz = Vec::new();
    for &a in &comp_h1 {
        for b in 0..ker2.rows() {
            lx.push(outer_left_rev(a, &ker2.row_vector(b), n2, n));
        }
    }
    for i in 0..coker1.rows() {
        for &j in &comp_h2t {
            lx.push(outer_right(&coker1.row_vector(i), j, m2, offset, n));
        }
    }
    for a in 0..ker1.rows() {
        for &b in &comp_h2 {
            lz.push(outer_left(&ker1.row_vector(a), b, n2, n));
        }
    }
    for &i in &comp_h1t {
        for j in 0..coker2.rows() {
            lz.push(outer_right_rev(i, &coker2.row_vector(j), m2, offset, n));
        }
    }
    let lx = BinaryMatrix::from_vectors(n, &lx)?;
    let lz = BinaryMatrix::from_vectors(n, &lz)?;
    if lx.rows() != hgp.k() || lz.rows() != hgp.k() {
        return Err(Error::Construction("product logical count disagrees with k".into()));
    }
    let lz = pair_against(&lx, &lz)?;
    Ok((lx, lz))
}

/// Unit vectors `e_j` completing `rowspace(a)` to the full space, chosen greedily in index order.
fn complement_unit_vectors(a: &BinaryMatrix, len: usize) -> Vec<usize> {
    let mut span = crate::gf2::RowSpace::from_matrix(a);
    let mut out = Vec::new();
    for j in 0..len {
        let mut e = BinaryVector::zeros(len);
        e.set(j, true);
        if span.insert(&e) {
            out.push(j);
        }
    }
    out
}

fn outer_left(x: &BinaryVector, b: usize, n2: usize, n: usize) -> BinaryVector {
    let mut v = BinaryVector::zeros(n);
    for a in x.iter_support() {
        v.set(a * n2 + b, true);
    }
    v
}

fn outer_left_rev(a: usize, y: &BinaryVector, n2: usize, n: usize) -> BinaryVector {
    let mut v = BinaryVector::zeros(n);
    for b in y.iter_support() {
        v.set(a * n2 + b, true);
    }
    v
}

fn outer_right(x: &BinaryVector, j: usize, m2: usize, offset: usize, n: usize) -> BinaryVector {
    let mut v = BinaryVector::zeros(n);
    for i in x.iter_support() {
        v.set(offset + i * m2 + j, true);
    }
    v
}

fn outer_right_rev(i: usize, y: &BinaryVector, m2: usize, offset: usize, n: usize) -> BinaryVector {
    let mut v = BinaryVector::zeros(n);
    for j in y.iter_support() {
        v.set(offset + i * m2 + j, true);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::classical::repetition_code;

    #[test]
    fn surface_13() {
        let r = repetition_code(3).unwrap();
        let hgp = hypergraph_product(&r, &r).unwrap();
        assert_eq!((hgp.n(), hgp.k()), (13, 1));
        assert_eq!(hgp.code.hx().shape(), (6, 13));
        assert_eq!(hgp.code.hz().shape(), (6, 13));
        let (lx, lz) = hgp_logicals(&hgp).unwrap();
        assert_eq!(lx.row_weight(0), 3);
        assert_eq!(lz.row_weight(0), 3);
        let code = hgp.code.clone().with_logicals(lx, lz).unwrap();
        assert_eq!(code.k(), 1);
    }
}
