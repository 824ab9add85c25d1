use steenrod_core::verify::{run_all, VerifyConfig};
use steenrod_core::Prime;

#[test]
fn every_suite_passes_in_two_variables() {
    for p in [2, 3, 5] {
        let cfg = VerifyConfig { degree_bound: 16, samples: 100, ..VerifyConfig::new(Prime::new(p).unwrap(), 2) };
        for (suite, reports) in run_all(&cfg) {
            for r in reports {
                assert!(r.passed, "p = {p}, {}: {} {:?}", suite.name(), r.name, r.failures);
            }
        }
    }
}
