use crate::codes::classical::{repetition_code, star_code, ClassicalCode};
use crate::error::{Error, Result};
use crate::gf2::BinaryVector;

/// Thickening codes with a tree-shaped Tanner graph and a fixed push direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ThickeningKind {
    Repetition { ell: usize },
    Star { z: usize, branch_len: usize },
}

impl ThickeningKind {
    pub fn descriptor(&self) -> String {
        match *self {
            ThickeningKind::Repetition { ell } => format!("rep:{ell}"),
            ThickeningKind::Star { z, branch_len } => format!("star:{z},{branch_len}"),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("unrecognised thickening {s:?}"));
        let (family, args) = s.split_once(':').ok_or_else(bad)?;
        let nums = args
            .split(',')
            .map(|x| x.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        match (family, nums.as_slice()) {
            ("rep", [ell]) => Ok(ThickeningKind::Repetition { ell: *ell }),
            ("star", [z, b]) => Ok(ThickeningKind::Star { z: *z, branch_len: *b }),
            _ => Err(bad()),
        }
    }
}

/// Push schedule on the classical Tanner graph.
///
/// Every measured bit forwards its accumulated correction through `outgoing[bit]`
/// to all other bits of that check. Endpoints host the unmeasured sheets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CausalGraph {
    pub start: usize,
    pub endpoints: Vec<usize>,
    /// Measured bits in push order, starting with `start`.
    pub order: Vec<usize>,
    pub incoming: Vec<Option<usize>>,
    pub outgoing: Vec<Option<usize>>,
}

impl CausalGraph {
    pub fn is_endpoint(&self, bit: usize) -> bool {
        self.endpoints.contains(&bit)
    }

    /// Walks bits from `bit` back to the start along incoming arrows.
    pub fn path_from_start(&self, bit: usize, code: &ClassicalCode) -> Vec<usize> {
        let mut path = vec![bit];
        let mut cur = bit;
        while let Some(c) = self.incoming[cur] {
            let prev = code
                .h()
                .row(c)
                .iter()
                .copied()
                .find(|&b| self.outgoing[b] == Some(c))
                .expect("incoming check has a sender");
            path.push(prev);
            cur = prev;
        }
        path.reverse();
        path
    }
}

/// A classical code used to thicken a CSS code, with its causal orientation.
#[derive(Clone, Debug)]
pub struct Thickening {
    pub kind: ThickeningKind,
    pub code: ClassicalCode,
    pub causal: CausalGraph,
}

impl Thickening {
    pub fn new(kind: ThickeningKind) -> Result<Self> {
        match kind {
            ThickeningKind::Repetition { ell } => Self::repetition(ell),
            ThickeningKind::Star { z, branch_len } => Self::star(z, branch_len),
        }
    }

    /// Bit 0 is the kept boundary; pushing starts at bit `ell - 1`.
    pub fn repetition(ell: usize) -> Result<Self> {
        let code = repetition_code(ell)?;
        let incoming = (0..ell)
            .map(|b| if b + 1 < ell { Some(b) } else { None })
            .collect();
        let outgoing = (0..ell)
            .map(|b| if b >= 1 { Some(b - 1) } else { None })
            .collect();
        let causal = CausalGraph {
            start: ell - 1,
            endpoints: vec![0],
            order: (1..ell).rev().collect(),
            incoming,
            outgoing,
        };
        Ok(Self {
            kind: ThickeningKind::Repetition { ell },
            code,
            causal,
        })
    }

    /// Branch 0 is incoming and starts at its outer bit; the outer bits of the
    /// other branches are the kept endpoints.
    pub fn star(z: usize, branch_len: usize) -> Result<Self> {
        let code = star_code(z, branch_len)?;
        let n = z * branch_len;
        let bit = |b: usize, i: usize| b * branch_len + i;
        let chain = |b: usize, i: usize| b * (branch_len - 1) + i;
        let central = z * (branch_len - 1);
        let mut incoming = vec![None; n];
        let mut outgoing = vec![None; n];
        let mut order = Vec::new();
        for i in 0..branch_len {
            order.push(bit(0, i));
            if i + 1 < branch_len {
                outgoing[bit(0, i)] = Some(chain(0, i));
                incoming[bit(0, i + 1)] = Some(chain(0, i));
            } else {
                outgoing[bit(0, i)] = Some(central);
            }
        }
        for b in 1..z {
            incoming[bit(b, branch_len - 1)] = Some(central);
            for i in (1..branch_len).rev() {
                order.push(bit(b, i));
                outgoing[bit(b, i)] = Some(chain(b, i - 1));
                incoming[bit(b, i - 1)] = Some(chain(b, i - 1));
            }
        }
        let causal = CausalGraph {
            start: bit(0, 0),
            endpoints: (1..z).map(|b| bit(b, 0)).collect(),
            order,
            incoming,
            outgoing,
        };
        Ok(Self {
            kind: ThickeningKind::Star { z, branch_len },
            code,
            causal,
        })
    }

    /// Codewords `g_i` of the classical code with `g_i[endpoint_j] = δ_ij`.
    pub fn endpoint_codewords(&self) -> Vec<BinaryVector> {
        let n = self.code.n();
        self.causal
            .endpoints
            .iter()
            .map(|&e| {
                let mut g = BinaryVector::zeros(n);
                for b in self.causal.path_from_start(e, &self.code) {
                    g.set(b, true);
                }
                g
            })
            .collect()
    }
}
