use hgpprep::codes::{hypergraph_product, repetition_code, sample_full_rank_ldpc, Thickening};
use hgpprep::decoders::DecoderConfig;
use hgpprep::protocol::{
    full_protocol_simulate, repeated_measurement_baseline, run_trial, Basis, Experiment, NoiseModel, ProtocolDecoders,
    ProtocolOptions, ProtocolSetup, RunSpec,
};

fn setup(d: usize, t: Thickening, basis: Basis) -> ProtocolSetup {
    let r = repetition_code(d).unwrap();
    ProtocolSetup::from_hgp(&hypergraph_product(&r, &r).unwrap(), &t, basis).unwrap()
}

#[test]
fn identical_seeds_give_identical_traces() {
    let s = setup(3, Thickening::repetition(3).unwrap(), Basis::Plus);
    let opts = ProtocolOptions::new(Experiment::Full);
    let noise = NoiseModel::uniform(0.04);
    let cfg = DecoderConfig::default();
    let mut a = ProtocolDecoders::new(&s, &noise, &opts, &cfg).unwrap();
    let mut b = a.clone();
    for trial in 0..30 {
        let x = run_trial(&s, &mut a, &noise, &opts, 9, 1, trial, true).unwrap().trace.unwrap();
        let y = run_trial(&s, &mut b, &noise, &opts, 9, 1, trial, true).unwrap().trace.unwrap();
        assert_eq!(x.boundary_x, y.boundary_x);
        assert_eq!(x.boundary_z, y.boundary_z);
        assert_eq!(x.intrinsic, y.intrinsic);
        assert_eq!(x.final_z_correction, y.final_z_correction);
    }
}

#[test]
fn zero_basis_runs_on_the_dual() {
    let plus = setup(3, Thickening::repetition(2).unwrap(), Basis::Plus);
    let zero = setup(3, Thickening::repetition(2).unwrap(), Basis::Zero);
    assert_eq!(zero.base().hx(), plus.base().hz());
    assert_eq!(zero.lx, plus.lz);
    let spec = RunSpec {
        trials: 50,
        master_seed: 3,
        point: 0,
    };
    let r = full_protocol_simulate(
        &zero,
        &NoiseModel::noiseless(),
        &ProtocolOptions::new(Experiment::Full),
        &DecoderConfig::default(),
        &spec,
    )
    .unwrap();
    assert_eq!(r.any.failures, 0);
}

#[test]
fn single_round_baseline_matches_nft_protocol() {
    // With one round there is no history: both reduce to decoding one noisy syndrome.
    let s = setup(3, Thickening::repetition(1).unwrap(), Basis::Plus);
    assert!(s.thick.is_nft());
    let noise = NoiseModel::uniform(0.05);
    let cfg = DecoderConfig::default();
    let spec = RunSpec {
        trials: 2000,
        master_seed: 4,
        point: 0,
    };
    let p = full_protocol_simulate(&s, &noise, &ProtocolOptions::new(Experiment::XSector), &cfg, &spec).unwrap();
    let b = repeated_measurement_baseline(s.base(), 1, &noise, false, &cfg, &spec).unwrap();
    let sigma = (p.x.stderr().powi(2) + b.x.stderr().powi(2)).sqrt();
    assert!((p.x.rate() - b.x.rate()).abs() <= 4.0 * sigma + 1e-9, "{:?} vs {:?}", p.x, b.x);
}

#[test]
fn thickening_suppresses_x_failures_on_ldpc_product() {
    let c = sample_full_rank_ldpc(12, 5, 6, 0).unwrap();
    let hgp = hypergraph_product(&c, &c).unwrap();
    let noise = NoiseModel::uniform(0.01);
    let cfg = DecoderConfig::default();
    let spec = RunSpec {
        trials: 600,
        master_seed: 5,
        point: 0,
    };
    let rate = |ell| {
        let s = ProtocolSetup::from_hgp(&hgp, &Thickening::repetition(ell).unwrap(), Basis::Plus).unwrap();
        full_protocol_simulate(&s, &noise, &ProtocolOptions::new(Experiment::XSector), &cfg, &spec)
            .unwrap()
            .x
    };
    let (one, three) = (rate(1), rate(3));
    let sigma = (one.stderr().powi(2) + three.stderr().powi(2)).sqrt();
    assert!(one.rate() - three.rate() > 2.0 * sigma, "{one:?} vs {three:?}");
}

#[test]
fn star_prepares_every_endpoint() {
    let s = setup(3, Thickening::star(4, 2).unwrap(), Basis::Plus);
    assert_eq!(s.endpoints().len(), 3);
    let opts = ProtocolOptions::new(Experiment::Full);
    let noise = NoiseModel::noiseless();
    let mut dec = ProtocolDecoders::new(&s, &noise, &opts, &DecoderConfig::default()).unwrap();
    for trial in 0..20 {
        let o = run_trial(&s, &mut dec, &noise, &opts, 2, 0, trial, true).unwrap();
        assert!(!o.x_fail && !o.z_fail);
        assert_eq!(o.trace.unwrap().boundary_z.len(), 3);
    }
}
