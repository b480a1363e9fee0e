use rand::Rng;

use crate::codes::thicken::ThickenedCode;
use crate::decoders::{ShadowDecoder, SingleShotDecoder};
use crate::error::{Error, Result};
use crate::gf2::BinaryVector;

/// Random element of the Z stabilizer group: a uniform combination of rows of `H̃_Z`.
pub fn sample_intrinsic_error<R: Rng + ?Sized>(thick: &ThickenedCode, rng: &mut R) -> BinaryVector {
    let hz = thick.code.hz();
    let mut v = BinaryVector::zeros(hz.cols());
    for r in 0..hz.rows() {
        if rng.gen::<bool>() {
            for &c in hz.row(r) {
                v.flip(c);
            }
        }
    }
    v
}

/// Bulk X outcomes regrouped by classical bit and check.
///
/// `m[b]` holds the sheet outcomes of bit `b` (length `n`), `s[b]` the X-syndrome
/// of that sheet computed from outcomes alone (length `m_X`), and `inter[j]` the
/// outcomes of the intermediate qubits of classical check `j`. Endpoint entries of
/// `m` and `s` are zero and unused.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheetView {
    pub m: Vec<BinaryVector>,
    pub s: Vec<BinaryVector>,
    pub inter: Vec<BinaryVector>,
}

/// Regroups outcomes on the thickened qubits; endpoint-sheet entries are ignored.
pub fn reconstruct_sheet_views(thick: &ThickenedCode, outcomes: &BinaryVector) -> Result<SheetView> {
    let l = &thick.layout;
    if outcomes.len() != l.n_total() {
        return Err(Error::LengthMismatch {
            op: "sheet views",
            expected: l.n_total(),
            got: outcomes.len(),
        });
    }
    let causal = &thick.thickening.causal;
    let h = thick.thickening.code.h();
    let hx = thick.base.hx();
    let inter: Vec<BinaryVector> = (0..l.checks).map(|j| l.inter_part(outcomes, j)).collect();
    let mut m = Vec::with_capacity(l.bits);
    let mut s = Vec::with_capacity(l.bits);
    for b in 0..l.bits {
        if causal.is_endpoint(b) {
            m.push(BinaryVector::zeros(l.n));
            s.push(BinaryVector::zeros(l.mx));
            continue;
        }
        let u = l.sheet_part(outcomes, b);
        let mut syn = hx.mul_vec(&u);
        for &j in h.col(b) {
            syn ^= &inter[j];
        }
        m.push(u);
        s.push(syn);
    }
    Ok(SheetView { m, s, inter })
}

/// One step of the sheet-by-sheet collapse: returns `(ẑ, ŝ)` for a noisy sheet syndrome.
pub trait SheetDecoder {
    fn step(&mut self, syndrome: &BinaryVector) -> Result<(BinaryVector, BinaryVector)>;
}

impl SheetDecoder for SingleShotDecoder {
    fn step(&mut self, syndrome: &BinaryVector) -> Result<(BinaryVector, BinaryVector)> {
        let r = self.decode(syndrome)?;
        Ok((r.data_correction, r.syndrome_error))
    }
}

impl SheetDecoder for ShadowDecoder {
    fn step(&mut self, syndrome: &BinaryVector) -> Result<(BinaryVector, BinaryVector)> {
        let (repair, corr) = self.decode(syndrome)?;
        Ok((corr, repair))
    }
}

/// Trusts the outcomes: no correction, no repair.
#[derive(Clone, Copy, Debug)]
pub struct TrustOutcomes {
    pub n: usize,
    pub m: usize,
}

impl SheetDecoder for TrustOutcomes {
    fn step(&mut self, _syndrome: &BinaryVector) -> Result<(BinaryVector, BinaryVector)> {
        Ok((BinaryVector::zeros(self.n), BinaryVector::zeros(self.m)))
    }
}

#[derive(Clone, Debug)]
pub struct CollapseStep {
    pub bit: usize,
    pub syndrome: BinaryVector,
    pub z_hat: BinaryVector,
    pub s_hat: BinaryVector,
}

/// Z corrections for each endpoint sheet, in the order of the causal endpoints.
#[derive(Clone, Debug)]
pub struct Collapse {
    pub endpoints: Vec<(usize, BinaryVector)>,
    pub steps: Vec<CollapseStep>,
}

impl Collapse {
    /// The correction for the single endpoint of a repetition thickening.
    pub fn single(&self) -> &BinaryVector {
        &self.endpoints[0].1
    }
}

/// Sequential collapse along the causal graph.
///
/// Each bulk bit in causal order decodes its sheet syndrome plus the repair carried
/// in, then pushes its accumulated correction, its outcomes and `ẑ` to every other
/// bit of its outgoing classical check, together with `ŝ`. For the repetition code
/// this is the chain `τ = 1, …, ℓ-1`; at the centre of a star the state is copied
/// onto each outgoing branch.
pub fn collapse<D: SheetDecoder>(thick: &ThickenedCode, view: &SheetView, decoder: &mut D) -> Result<Collapse> {
    let l = &thick.layout;
    let causal = &thick.thickening.causal;
    let h = thick.thickening.code.h();
    let mut z_in = vec![BinaryVector::zeros(l.n); l.bits];
    let mut s_in = vec![BinaryVector::zeros(l.mx); l.bits];
    let mut steps = Vec::with_capacity(causal.order.len());
    for &b in &causal.order {
        let mut syndrome = view.s[b].clone();
        syndrome ^= &s_in[b];
        let (z_hat, s_hat) = decoder.step(&syndrome)?;
        if z_hat.len() != l.n || s_hat.len() != l.mx {
            return Err(Error::LengthMismatch {
                op: "sheet decoder output",
                expected: l.n + l.mx,
                got: z_hat.len() + s_hat.len(),
            });
        }
        let mut push = std::mem::replace(&mut z_in[b], BinaryVector::zeros(l.n));
        push ^= &view.m[b];
        push ^= &z_hat;
        let j = causal.outgoing[b].ok_or_else(|| Error::Construction(format!("bulk bit {b} has no outgoing check")))?;
        for &target in h.row(j) {
            if target != b {
                z_in[target] ^= &push;
                s_in[target] ^= &s_hat;
            }
        }
        steps.push(CollapseStep {
            bit: b,
            syndrome,
            z_hat,
            s_hat,
        });
    }
    let endpoints = causal.endpoints.iter().map(|&e| (e, z_in[e].clone())).collect();
    Ok(Collapse { endpoints, steps })
}

/// Repetition-thickening collapse; returns the boundary correction `z`.
pub fn algorithm1_collapse<D: SheetDecoder>(
    thick: &ThickenedCode,
    view: &SheetView,
    decoder: &mut D,
) -> Result<(BinaryVector, Collapse)> {
    if thick.thickening.causal.endpoints.len() != 1 {
        return Err(Error::InvalidParameter("chain collapse needs a single endpoint".into()));
    }
    let c = collapse(thick, view, decoder)?;
    Ok((c.single().clone(), c))
}

/// Star-thickening collapse; one correction per kept endpoint.
pub fn algorithm1_star<D: SheetDecoder>(thick: &ThickenedCode, view: &SheetView, decoder: &mut D) -> Result<Collapse> {
    collapse(thick, view, decoder)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::causal::Thickening;
    use crate::codes::classical::repetition_code;
    use crate::codes::hgp::{hgp_logicals, hypergraph_product};
    use crate::codes::thicken::thicken;
    use crate::gf2::RowSpace;
    use crate::protocol::rng::{trial_rng, Stream};

    fn thick(t: Thickening) -> ThickenedCode {
        let r3 = repetition_code(3).unwrap();
        let hgp = hypergraph_product(&r3, &r3).unwrap();
        let (lx, lz) = hgp_logicals(&hgp).unwrap();
        thicken(&hgp.code.with_logicals(lx, lz).unwrap(), &t).unwrap()
    }

    fn noiseless_residuals(t: &ThickenedCode, o: &BinaryVector) -> Vec<BinaryVector> {
        let view = reconstruct_sheet_views(t, o).unwrap();
        assert!(view.s.iter().all(|s| s.is_zero()));
        let l = &t.layout;
        let mut dec = TrustOutcomes { n: l.n, m: l.mx };
        let c = collapse(t, &view, &mut dec).unwrap();
        c.endpoints
            .iter()
            .map(|(e, z)| {
                let mut r = l.sheet_part(o, *e);
                r ^= z;
                r
            })
            .collect()
    }

    #[test]
    fn sheet_check_is_trivial() {
        let t = thick(Thickening::repetition(4).unwrap());
        let l = &t.layout;
        let stab = RowSpace::from_matrix(t.base.hz());
        for b in 0..l.bits {
            let o = t.code.hz().row_vector(l.sheet_z_check(b, 2));
            for r in noiseless_residuals(&t, &o) {
                assert!(stab.contains(&r), "bit {b}");
            }
        }
    }

    #[test]
    fn intermediate_check_pairs_cancel() {
        let t = thick(Thickening::repetition(4).unwrap());
        let l = &t.layout;
        for j in 0..l.checks {
            for q in 0..l.n {
                let o = t.code.hz().row_vector(l.inter_z_check(j, q));
                for r in noiseless_residuals(&t, &o) {
                    assert!(r.is_zero(), "check ({j}, {q})");
                }
            }
        }
    }

    #[test]
    fn random_stabilizers_collapse_to_stabilizers() {
        for th in [Thickening::repetition(5).unwrap(), Thickening::star(3, 2).unwrap()] {
            let t = thick(th);
            let stab = RowSpace::from_matrix(t.base.hz());
            for trial in 0..20 {
                let o = sample_intrinsic_error(&t, &mut trial_rng(3, 0, trial, Stream::Intrinsic));
                assert!(t.code.hx().mul_vec(&o).is_zero());
                for r in noiseless_residuals(&t, &o) {
                    assert!(stab.contains(&r));
                }
            }
        }
    }

    #[test]
    fn views_reject_bad_length() {
        let t = thick(Thickening::repetition(2).unwrap());
        assert!(reconstruct_sheet_views(&t, &BinaryVector::zeros(3)).is_err());
    }
}
