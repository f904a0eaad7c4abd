use cmsoule::analytic::{make_lattice, PrecisionContext};
use cmsoule::characters::{surjectivity_verdict, Verdict, VerdictOptions};
use cmsoule::identities::{run_suite, Suite};
use cmsoule::padic::{purely_local_test, Side};
use cmsoule::quadfield::{split_in, Field, QuadInt, CLASS_NUMBER_ONE};
use cmsoule::Error;

#[test]
fn gaussian_counter_example_below_fifty_thousand() {
    let f = Field::new(1).unwrap();
    let failures: Vec<u64> = cmsoule::ntheory::primes_in(5, 50_000)
        .into_iter()
        .filter_map(|p| split_in(f, p).ok())
        .filter(|sp| !purely_local_test(sp, Side::PBar))
        .map(|sp| sp.p)
        .collect();
    assert_eq!(failures, [29789]);
    let sp = split_in(f, 29789).unwrap();
    assert_eq!(sp.pi.norm(), 29789);
}

#[test]
fn every_field_passes_its_galois_suite() {
    let prec = PrecisionContext::default();
    for d in CLASS_NUMBER_ONE {
        let lat = make_lattice(Field::new(d).unwrap(), prec);
        let reports = run_suite(&lat, Suite::Galois).unwrap();
        assert!(!reports.is_empty());
        assert!(reports.iter().all(|r| r.pass), "d={d}");
    }
}

#[test]
fn verdicts_serialize_with_tagged_evidence() {
    let opts = VerdictOptions::default();
    let v = surjectivity_verdict(3, 7, (7, 1), None, &opts).unwrap();
    assert_eq!(v.verdict, Verdict::Surjective);
    let json = serde_json::to_value(&v).unwrap();
    assert_eq!(json["m"], serde_json::json!([7, 1]));
    assert!(json["evidence"]
        .as_array()
        .unwrap()
        .iter()
        .all(|e| e["kind"].is_string()));
    let f = Field::new(1).unwrap();
    let bad = QuadInt::new(f, 1, 1);
    assert!(matches!(
        surjectivity_verdict(1, 5, (2, 2), Some(&bad), &opts),
        Err(Error::Admissibility(_))
    ));
    assert!(matches!(
        surjectivity_verdict(1, 11, (2, 2), None, &opts),
        Err(Error::InertPrime { .. })
    ));
}
