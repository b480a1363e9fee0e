use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, BinaryVector, RowSpace, Solver};

/// Which Pauli type a check matrix, error or logical refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    X,
    Z,
}

impl Pauli {
    pub fn other(self) -> Pauli {
        match self {
            Pauli::X => Pauli::Z,
            Pauli::Z => Pauli::X,
        }
    }
}

/// A CSS code with optional metachecks and logical bases.
///
/// Rows of `hx` are X-type checks (they detect Z errors); rows of `hz` are Z-type checks.
#[derive(Clone, Debug)]
pub struct CssCode {
    hx: BinaryMatrix,
    hz: BinaryMatrix,
    mx: Option<BinaryMatrix>,
    mz: Option<BinaryMatrix>,
    lx: Option<BinaryMatrix>,
    lz: Option<BinaryMatrix>,
    rank_x: usize,
    rank_z: usize,
}

impl CssCode {
    pub fn new(hx: BinaryMatrix, hz: BinaryMatrix) -> Result<Self> {
        if hx.cols() != hz.cols() {
            return Err(Error::DimensionMismatch {
                op: "css code",
                left_rows: hx.rows(),
                left_cols: hx.cols(),
                right_rows: hz.rows(),
                right_cols: hz.cols(),
            });
        }
        if !hx.matmul(&hz.transpose())?.is_zero() {
            return Err(Error::Construction("H_X H_Z^T is nonzero".into()));
        }
        let rank_x = hx.rank();
        let rank_z = hz.rank();
        Ok(Self {
            hx,
            hz,
            mx: None,
            mz: None,
            lx: None,
            lz: None,
            rank_x,
            rank_z,
        })
    }

    pub fn n(&self) -> usize {
        self.hx.cols()
    }

    pub fn k(&self) -> usize {
        self.n() - self.rank_x - self.rank_z
    }

    pub fn hx(&self) -> &BinaryMatrix {
        &self.hx
    }

    pub fn hz(&self) -> &BinaryMatrix {
        &self.hz
    }

    pub fn h(&self, p: Pauli) -> &BinaryMatrix {
        match p {
            Pauli::X => &self.hx,
            Pauli::Z => &self.hz,
        }
    }

    pub fn rank_x(&self) -> usize {
        self.rank_x
    }

    pub fn rank_z(&self) -> usize {
        self.rank_z
    }

    pub fn mx(&self) -> Option<&BinaryMatrix> {
        self.mx.as_ref()
    }

    pub fn mz(&self) -> Option<&BinaryMatrix> {
        self.mz.as_ref()
    }

    pub fn lx(&self) -> Option<&BinaryMatrix> {
        self.lx.as_ref()
    }

    pub fn lz(&self) -> Option<&BinaryMatrix> {
        self.lz.as_ref()
    }

    pub fn logical(&self, p: Pauli) -> Option<&BinaryMatrix> {
        match p {
            Pauli::X => self.lx.as_ref(),
            Pauli::Z => self.lz.as_ref(),
        }
    }

    pub fn with_mz(mut self, mz: BinaryMatrix) -> Result<Self> {
        if !mz.matmul(&self.hz)?.is_zero() {
            return Err(Error::Construction("M_Z H_Z is nonzero".into()));
        }
        self.mz = Some(mz);
        Ok(self)
    }

    pub fn with_mx(mut self, mx: BinaryMatrix) -> Result<Self> {
        if !mx.matmul(&self.hx)?.is_zero() {
            return Err(Error::Construction("M_X H_X is nonzero".into()));
        }
        self.mx = Some(mx);
        Ok(self)
    }

    /// Attaches logical bases after checking commutation, independence and pairing.
    pub fn with_logicals(mut self, lx: BinaryMatrix, lz: BinaryMatrix) -> Result<Self> {
        validate_logicals(&self, &lx, &lz)?;
        self.lx = Some(lx);
        self.lz = Some(lz);
        Ok(self)
    }

    /// Computes and attaches a paired logical basis.
    pub fn with_computed_logicals(self) -> Result<Self> {
        let (lx, lz) = logical_basis(&self)?;
        self.with_logicals(lx, lz)
    }

    /// The code with X and Z roles exchanged (metachecks and logicals follow).
    pub fn dual(&self) -> CssCode {
        CssCode {
            hx: self.hz.clone(),
            hz: self.hx.clone(),
            mx: self.mz.clone(),
            mz: self.mx.clone(),
            lx: self.lz.clone(),
            lz: self.lx.clone(),
            rank_x: self.rank_z,
            rank_z: self.rank_x,
        }
    }

    /// Whether an X-type support `v` commutes with all Z checks and is not an X stabilizer.
    pub fn is_nontrivial_logical(&self, p: Pauli, v: &BinaryVector) -> bool {
        let (checks, stabs) = match p {
            Pauli::X => (&self.hz, &self.hx),
            Pauli::Z => (&self.hx, &self.hz),
        };
        checks.mul_vec(v).is_zero() && !RowSpace::from_matrix(stabs).contains(v)
    }
}

fn validate_logicals(code: &CssCode, lx: &BinaryMatrix, lz: &BinaryMatrix) -> Result<()> {
    let k = code.k();
    if lx.rows() != k || lz.rows() != k || lx.cols() != code.n() || lz.cols() != code.n() {
        return Err(Error::Construction(format!(
            "logical bases have shapes {:?} and {:?}, expected {k}x{}",
            lx.shape(),
            lz.shape(),
            code.n()
        )));
    }
    if !code.hz.matmul(&lx.transpose())?.is_zero() {
        return Err(Error::Construction("L_X does not commute with H_Z".into()));
    }
    if !code.hx.matmul(&lz.transpose())?.is_zero() {
        return Err(Error::Construction("L_Z does not commute with H_X".into()));
    }
    let pairing = lz.matmul(&lx.transpose())?;
    if pairing != BinaryMatrix::identity(k) {
        return Err(Error::Construction("L_Z L_X^T is not the identity".into()));
    }
    Ok(())
}

/// Kernel vectors of `checks` independent modulo `rowspace(stabs)`.
fn homology_representatives(checks: &BinaryMatrix, stabs: &BinaryMatrix, k: usize) -> Vec<BinaryVector> {
    let kernel = checks.kernel_basis();
    let mut span = RowSpace::from_matrix(stabs);
    let mut reps = Vec::with_capacity(k);
    for r in 0..kernel.rows() {
        if reps.len() == k {
            break;
        }
        let v = kernel.row_vector(r);
        if span.insert(&v) {
            reps.push(v);
        }
    }
    reps
}

/// Logical bases `(L_X, L_Z)` with `L_Z L_X^T = I`.
///
/// `L_X` spans `ker H_Z / rowspace H_X`; `L_Z` spans `ker H_X / rowspace H_Z`.
pub fn logical_basis(code: &CssCode) -> Result<(BinaryMatrix, BinaryMatrix)> {
    let k = code.k();
    let n = code.n();
    let lx_rows = homology_representatives(&code.hz, &code.hx, k);
    let lz_rows = homology_representatives(&code.hx, &code.hz, k);
    if lx_rows.len() != k || lz_rows.len() != k {
        return Err(Error::Construction("homology dimension disagrees with k".into()));
    }
    let lx = BinaryMatrix::from_vectors(n, &lx_rows)?;
    let lz = BinaryMatrix::from_vectors(n, &lz_rows)?;
    let lz = pair_against(&lx, &lz)?;
    Ok((lx, lz))
}

/// Rebases `lz` so that `lz' lx^T = I`.
pub(crate) fn pair_against(lx: &BinaryMatrix, lz: &BinaryMatrix) -> Result<BinaryMatrix> {
    // P = L_X L_Z^T, L_Z' = (P^{-1})^T L_Z.
    let p = lx.matmul(&lz.transpose())?;
    let inv = inverse(&p)?;
    inv.transpose().matmul(lz)
}

pub(crate) fn inverse(p: &BinaryMatrix) -> Result<BinaryMatrix> {
    let k = p.rows();
    if p.cols() != k {
        return Err(Error::InvalidParameter("inverse of a non-square matrix".into()));
    }
    let solver = Solver::new(p);
    if solver.rank() != k {
        return Err(Error::Construction("logical pairing matrix is singular".into()));
    }
    let cols: Vec<BinaryVector> = (0..k)
        .map(|j| {
            let mut e = BinaryVector::zeros(k);
            e.set(j, true);
            solver.solve(&e).expect("full rank")
        })
        .collect();
    Ok(BinaryMatrix::from_vectors(k, &cols)?.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn steane() -> CssCode {
        let h = BinaryMatrix::from_bitstrings(&["1010101", "0110011", "0001111"]).unwrap();
        CssCode::new(h.clone(), h).unwrap()
    }

    #[test]
    fn steane_logicals_pair() {
        let code = steane().with_computed_logicals().unwrap();
        assert_eq!(code.k(), 1);
        let lx = code.lx().unwrap();
        let lz = code.lz().unwrap();
        assert!(lz.matmul(&lx.transpose()).unwrap() == BinaryMatrix::identity(1));
        assert!(code.is_nontrivial_logical(Pauli::X, &lx.row_vector(0)));
        assert!(!code.is_nontrivial_logical(Pauli::X, &code.hx().row_vector(0)));
    }

    #[test]
    fn rejects_anticommuting_checks() {
        let hx = BinaryMatrix::from_bitstrings(&["10"]).unwrap();
        let hz = BinaryMatrix::from_bitstrings(&["11"]).unwrap();
        assert!(matches!(CssCode::new(hx, hz), Err(Error::Construction(_))));
    }

    #[test]
    fn zero_dimension_code() {
        let hx = BinaryMatrix::from_bitstrings(&["10"]).unwrap();
        let hz = BinaryMatrix::from_bitstrings(&["01"]).unwrap();
        let code = CssCode::new(hx, hz).unwrap().with_computed_logicals().unwrap();
        assert_eq!(code.k(), 0);
        assert_eq!(code.lx().unwrap().rows(), 0);
    }

    #[test]
    fn inverse_small() {
        let p = BinaryMatrix::from_bitstrings(&["11", "01"]).unwrap();
        let inv = inverse(&p).unwrap();
        assert_eq!(p.matmul(&inv).unwrap(), BinaryMatrix::identity(2));
    }
}
