use mcsh_core::model::Sign;
use mcsh_core::probe::{
    hypotheses, make_random_wave, probe, probe_cubic, scaling_exponent, Ensemble, Lemma, ProbeParams, ProbeSpec,
};
use mcsh_core::spaces::signed_norm;
use mcsh_core::spectral::Grid2D;
use mcsh_core::Error;

fn small(lemma: Lemma, params: ProbeParams) -> ProbeSpec {
    let mut spec = ProbeSpec::new(lemma, params);
    spec.ensemble = Ensemble { count: 3, n: 16, nt: 16, band: (2.0, 5.0), width: 4.0, ..Ensemble::default() };
    spec.dilations = vec![1.0];
    spec
}

#[test]
fn random_waves_are_reproducible() {
    let g = Grid2D::new(16, 2.0 * std::f64::consts::PI).unwrap();
    let mk = |seed| make_random_wave(g, 16, 3.0, (2.0, 5.0), 3.0, Sign::Plus, seed).unwrap();
    assert_eq!(mk(4), mk(4));
    assert_ne!(mk(4), mk(5));
    assert!(make_random_wave(g, 16, 3.0, (20.0, 30.0), 3.0, Sign::Plus, 0).is_err());
}

#[test]
fn narrow_profile_concentrates_on_its_cone_sheet() {
    let g = Grid2D::new(16, 2.0 * std::f64::consts::PI).unwrap();
    let (duration, b, r) = (8.0 * std::f64::consts::PI, 1.0, 1.5);
    for sign in [Sign::Plus, Sign::Minus] {
        let u = make_random_wave(g, 64, duration, (2.0, 5.0), 0.5, sign, 1).unwrap();
        let own = signed_norm(&u, 0.0, b, r, sign).unwrap();
        let other = signed_norm(&u, 0.0, b, r, sign.flip()).unwrap();
        assert!(other > 3.0 * own, "{sign:?}: {own} vs {other}");
    }
}

#[test]
fn probe_is_deterministic() {
    let spec = small(Lemma::L34, ProbeParams::default());
    let a = probe(&spec, true).unwrap();
    let b = probe(&spec, true).unwrap();
    let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(a.ratios.as_ref().unwrap()), bits(b.ratios.as_ref().unwrap()));
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert!(a.heuristic);
    assert_eq!(a.count, 3);
    assert!(a.max_ratio.is_finite() && a.max_ratio > 0.0);
    assert!(a.quantiles[0] <= a.quantiles[1] && a.quantiles[1] <= a.quantiles[2]);
    assert!(probe(&spec, false).unwrap().ratios.is_none());
}

#[test]
fn every_lemma_produces_finite_ratios() {
    for lemma in [Lemma::L31, Lemma::L32, Lemma::L35, Lemma::L36, Lemma::EstA] {
        let mut spec = small(lemma, ProbeParams::default());
        spec.ensemble.count = 1;
        spec.signs = (Sign::Plus, Sign::Minus);
        let rep = probe(&spec, false).unwrap();
        assert!(rep.max_ratio.is_finite() && rep.max_ratio > 0.0, "{lemma:?}: {rep:?}");
    }
    let mut spec = small(Lemma::L31, ProbeParams::default());
    spec.ensemble.count = 1;
    assert_eq!(probe_cubic(&spec, false).unwrap().lemma, Lemma::L37);
}

#[test]
fn hypotheses_track_the_exponents() {
    let p = ProbeParams::default();
    assert!(hypotheses(Lemma::L31, &p).iter().all(|(_, ok)| *ok));
    let low = ProbeParams { alpha1: 0.1, alpha2: 0.1, ..p };
    let failed: Vec<String> = hypotheses(Lemma::L31, &low).into_iter().filter(|(_, ok)| !ok).map(|(d, _)| d).collect();
    assert_eq!(failed, vec!["alpha1 + alpha2 >= 1/r".to_string()]);
    let rep = probe(&small(Lemma::L31, low), false).unwrap();
    assert!(!rep.in_hypothesis);
    assert_eq!(rep.violated, failed);
    // the homogeneous exponent vanishes exactly on the endpoint of the L31 hypotheses
    let edge = ProbeParams { alpha1: 0.25, alpha2: 0.25, b: 0.5, ..p };
    assert_eq!(scaling_exponent(Lemma::L31, &edge), 0.0);
}

#[test]
fn invalid_specs_are_rejected() {
    let base = small(Lemma::L34, ProbeParams::default());
    let mut s = base.clone();
    s.ensemble.count = 0;
    assert!(matches!(probe(&s, false), Err(Error::InvalidParameter { .. })));
    let mut s = base.clone();
    s.params.r = 3.0;
    assert!(probe(&s, false).is_err());
    let mut s = base.clone();
    s.dilations = vec![];
    assert!(probe(&s, false).is_err());
    let mut s = base.clone();
    s.ensemble.width = 0.1;
    assert!(matches!(probe(&s, false), Err(Error::Resolution(_))));
    let mut s = base;
    s.ensemble.nt = 4;
    assert!(matches!(probe(&s, false), Err(Error::TooFewSamples { .. })));
}

#[test]
fn specs_round_trip_through_json() {
    let spec: ProbeSpec = serde_json::from_str(r#"{"lemma": "estA", "params": {"r": 1.5}}"#).unwrap();
    assert_eq!(spec.lemma, Lemma::EstA);
    assert_eq!(spec.params.r, 1.5);
    assert_eq!(spec.params.b, ProbeParams::default().b);
    assert_eq!(spec.dilations, vec![1.0, 2.0, 4.0]);
    assert!(serde_json::from_str::<ProbeSpec>(r#"{"lemma": "L31", "extra": 1}"#).is_err());
    assert!(serde_json::from_str::<ProbeSpec>(r#"{"lemma": "L31", "params": {"beta": 1}}"#).is_err());
    let back: ProbeSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
    assert_eq!(back, spec);
    assert_eq!("l37".parse::<Lemma>().unwrap(), Lemma::L37);
    assert!("l99".parse::<Lemma>().is_err());
}
