use hgpprep::codes::{hypergraph_product, repetition_code, sample_regular_ldpc, thicken, ClassicalCode, Thickening};
use hgpprep::gf2::io::{read_alist, write_alist};
use hgpprep::gf2::{BinaryMatrix, BinaryVector, RowSpace, Solver};
use hgpprep::protocol::{collapse, reconstruct_sheet_views, sample_intrinsic_error, ProtocolSetup, TrustOutcomes, Basis};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BinaryMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        proptest::collection::vec(any::<bool>(), r * c).prop_map(move |bits| {
            let entries: Vec<(usize, usize)> = bits
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| (i / c, i % c))
                .collect();
            BinaryMatrix::from_entries(r, c, &entries).unwrap()
        })
    })
}

fn vector(len: usize) -> impl Strategy<Value = BinaryVector> {
    proptest::collection::vec(any::<bool>(), len).prop_map(|b| BinaryVector::from_bools(&b))
}

proptest! {
    #[test]
    fn rank_nullity(m in matrix(12, 16)) {
        let k = m.kernel_basis();
        prop_assert_eq!(m.rank() + k.rows(), m.cols());
        prop_assert!(m.matmul(&k.transpose()).unwrap().is_zero());
        prop_assert_eq!(m.transpose().rank(), m.rank());
    }

    #[test]
    fn solve_round_trip(m in matrix(10, 14), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = BinaryVector::from_bools(&(0..m.cols()).map(|_| rand::Rng::gen::<bool>(&mut rng)).collect::<Vec<_>>());
        let b = m.mul_vec(&x);
        let solver = Solver::new(&m);
        let y = solver.solve(&b).expect("b is in the image");
        prop_assert_eq!(m.mul_vec(&y), b);
    }

    #[test]
    fn transpose_product(a in matrix(8, 8), v in vector(8)) {
        let a = a.submatrix(0, a.rows(), 0, a.cols());
        let v = v.slice(0, a.cols());
        let left = a.mul_vec(&v);
        let right = a.transpose().left_mul_vec(&v);
        prop_assert_eq!(left, right);
    }

    #[test]
    fn alist_round_trip(m in matrix(15, 15)) {
        let text = write_alist(&m);
        prop_assert_eq!(read_alist(&text).unwrap(), m);
    }

    #[test]
    fn rowspace_membership(m in matrix(8, 12), v in vector(12)) {
        let v = v.slice(0, m.cols());
        let space = RowSpace::from_matrix(&m);
        let mut with_v = m.to_bitstrings();
        with_v.push(v.to_bitstring());
        let refs: Vec<&str> = with_v.iter().map(|s| s.as_str()).collect();
        let grown = BinaryMatrix::from_bitstrings(&refs).unwrap();
        prop_assert_eq!(space.contains(&v), grown.rank() == m.rank());
    }

    #[test]
    fn hgp_commutes(a in matrix(5, 6), b in matrix(5, 6)) {
        let hgp = hypergraph_product(&ClassicalCode::new(a), &ClassicalCode::new(b)).unwrap();
        prop_assert!(hgp.code.hx().matmul(&hgp.code.hz().transpose()).unwrap().is_zero());
        prop_assert_eq!(hgp.k(), hgp.k_formula());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn ldpc_products_are_orthogonal(seed in 0u64..1000) {
        let c = sample_regular_ldpc(12, 5, 6, seed).unwrap();
        prop_assert!((0..c.n()).all(|j| c.h().col_weight(j) == 5));
        prop_assert!((0..c.m()).all(|i| c.h().row_weight(i) == 6));
        let hgp = hypergraph_product(&c, &c).unwrap();
        prop_assert!(hgp.code.hx().matmul(&hgp.code.hz().transpose()).unwrap().is_zero());
    }

    #[test]
    fn thickening_is_a_chain(ell in 1usize..5, d in 2usize..4) {
        let r = repetition_code(d).unwrap();
        let hgp = hypergraph_product(&r, &r).unwrap();
        let t = thicken(&hgp.code, &Thickening::repetition(ell).unwrap()).unwrap();
        prop_assert!(t.code.hx().matmul(&t.code.hz().transpose()).unwrap().is_zero());
        prop_assert!(t.mz().matmul(t.code.hz()).unwrap().is_zero());
        prop_assert_eq!(t.code.k(), hgp.k());
    }

    #[test]
    fn collapse_of_stabilizer_is_stabilizer(seed in any::<u64>(), star in any::<bool>()) {
        let r = repetition_code(3).unwrap();
        let th = if star { Thickening::star(3, 2).unwrap() } else { Thickening::repetition(4).unwrap() };
        let s = ProtocolSetup::from_hgp(&hypergraph_product(&r, &r).unwrap(), &th, Basis::Plus).unwrap();
        let l = &s.thick.layout;
        let o = sample_intrinsic_error(&s.thick, &mut ChaCha8Rng::seed_from_u64(seed));
        let view = reconstruct_sheet_views(&s.thick, &o).unwrap();
        let c = collapse(&s.thick, &view, &mut TrustOutcomes { n: l.n, m: l.mx }).unwrap();
        let stab = RowSpace::from_matrix(s.base().hz());
        for (e, z) in &c.endpoints {
            let mut r = l.sheet_part(&o, *e);
            r ^= z;
            prop_assert!(stab.contains(&r));
        }
    }
}
