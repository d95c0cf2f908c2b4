use std::collections::HashMap;

use proptest::prelude::*;
use tsspec_core::inverse::{recover, roundtrip_check, spectral_data};
use tsspec_core::propagation::d_functions;
use tsspec_core::rational::{int, ratio};
use tsspec_core::spectral::RootSet;
use tsspec_core::{DataKind, Error, Potential, Rational, SpectralInput, TimeScale};

fn scale(points: &[(i64, i64)]) -> TimeScale {
    let pts: Vec<Rational> = points.iter().map(|&(p, q)| ratio(p, q)).collect();
    TimeScale::from_points(&pts).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_kind_recovers_the_potential(
        gaps in prop::collection::vec((1i64..=10, 1i64..=4), 2..6),
        qs in prop::collection::vec((-20i64..=20, 1i64..=20), 6),
    ) {
        let mut x = int(0);
        let mut points = vec![x.clone()];
        for &(p, r) in &gaps {
            x += ratio(p, r);
            points.push(x.clone());
        }
        let ts = TimeScale::from_points(&points).unwrap();
        let values: Vec<Rational> = qs[..points.len() - 2].iter().map(|&(p, r)| ratio(p, r)).collect();
        let q = Potential::discrete(&ts, &values).unwrap();
        for kind in DataKind::ALL {
            let report = roundtrip_check(&ts, &q, kind);
            prop_assert!(report.exact_match, "{:?}: {:?}", kind, report.error);
        }
    }
}

/// On a five-point scale every potential from a small grid yields its own
/// characteristic pair.
#[test]
fn distinct_potentials_give_distinct_pairs() {
    let ts = scale(&[(0, 1), (1, 2), (2, 1), (3, 1), (11, 2)]);
    let grid = [ratio(-1, 1), int(0), ratio(1, 2), int(1), ratio(7, 3)];
    let mut seen = HashMap::new();
    for a in &grid {
        for b in &grid {
            for c in &grid {
                let q = Potential::discrete(&ts, &[a.clone(), b.clone(), c.clone()]).unwrap();
                let (t0, t1) = d_functions(&ts, &q, 1).unwrap();
                let key = (t0.to_strings(), t1.to_strings());
                if let Some(prev) = seen.insert(key, (a.clone(), b.clone(), c.clone())) {
                    panic!("{prev:?} and {:?} share a characteristic pair", (a, b, c));
                }
            }
        }
    }
    assert_eq!(seen.len(), grid.len().pow(3));
}

#[test]
fn perturbed_spectrum_is_rejected() {
    let ts = scale(&[(0, 1), (1, 1), (5, 2), (4, 1), (5, 1)]);
    let q = Potential::discrete(&ts, &[int(2), ratio(-1, 3), int(1)]).unwrap();
    let SpectralInput::TwoSpectra { spectrum0, spectrum1 } = spectral_data(&ts, &q, DataKind::TwoSpectra).unwrap() else {
        unreachable!()
    };
    let p0 = spectrum0.monic_polynomial();
    let shifted = &p0 + &tsspec_core::PolyRat::constant(ratio(1, 1000));
    let input = SpectralInput::TwoSpectra { spectrum0: RootSet::RootsOf(shifted), spectrum1 };
    let err = recover(&ts, &input).unwrap_err();
    assert!(
        matches!(err, Error::InconsistentData(_) | Error::NonLinearQuotient { .. } | Error::DivisionDegenerate(_)),
        "{err:?}"
    );
}

#[test]
fn weyl_function_with_wrong_scale_is_rejected() {
    let ts = scale(&[(0, 1), (1, 1), (2, 1), (3, 1)]);
    let q = Potential::zero(&ts);
    let data = spectral_data(&ts, &q, DataKind::WeylFunction).unwrap();
    // the same data on a stretched scale cannot come from any potential
    let stretched = scale(&[(0, 1), (2, 1), (4, 1), (6, 1)]);
    assert!(matches!(recover(&stretched, &data).unwrap_err(), Error::InconsistentData(_)));
}

#[test]
fn shared_eigenvalue_is_rejected() {
    let ts = scale(&[(0, 1), (1, 1), (2, 1), (3, 1)]);
    let input = SpectralInput::TwoSpectra {
        spectrum0: RootSet::Values(vec![int(1), int(3)]),
        spectrum1: RootSet::Values(vec![int(1), int(4)]),
    };
    assert!(matches!(recover(&ts, &input).unwrap_err(), Error::InconsistentData(_)));
}
