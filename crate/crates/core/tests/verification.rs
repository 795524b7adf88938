use tnormed::unit::Policy;
use tnormed::verify::{check_names, replay, run_suite, Config, Fault, Sizes, Status, Suite};

fn small(seed: u64) -> Config {
    Config { sizes: Sizes::default().scaled(0.02), ..Config::with_seed(seed) }
}

#[test]
fn identical_configs_give_identical_reports() {
    for suite in Suite::EACH {
        let first = run_suite(suite, &small(7)).unwrap();
        let second = run_suite(suite, &small(7)).unwrap();
        assert!(first.same_outcome(&second), "{suite}");
        assert!(first.passed(), "{first}");
    }
}

#[test]
fn seeds_change_the_drawn_instances() {
    let config = |seed| Config { fault: Some(Fault::WrongMergePolicy), ..small(seed) };
    let a = run_suite(Suite::Monad, &config(1)).unwrap();
    let b = run_suite(Suite::Monad, &config(2)).unwrap();
    assert!(!a.same_outcome(&b));
}

#[test]
fn counterexamples_replay_to_the_same_verdict() {
    for suite in Suite::EACH {
        let config = Config { fault: suite.default_fault(), ..small(11) };
        let report = run_suite(suite, &config).unwrap();
        assert_eq!(report.status, Status::Fail, "{suite} missed its fault");
        assert!(!report.counterexamples.is_empty());
        for cx in &report.counterexamples {
            assert!(!replay(&config, &cx.check, cx.instance).unwrap().is_clean(), "{cx}");
        }
        // clean instances stay clean on replay
        let clean = Config { fault: None, ..config.clone() };
        let cx = &report.counterexamples[0];
        assert!(replay(&clean, &cx.check, cx.instance).unwrap().is_clean(), "{cx}");
    }
}

#[test]
fn pass_status_iff_no_counterexamples() {
    for fault in [None, Some(Fault::OffByOne)] {
        let report = run_suite(Suite::Morphism, &Config { fault, ..small(3) }).unwrap();
        assert_eq!(report.status == Status::Pass, report.counterexamples.is_empty());
    }
}

#[test]
fn zero_sizes_skip_random_checks() {
    let config = Config { sizes: Sizes::uniform(0), ..Config::with_seed(42) };
    let report = run_suite(Suite::Monad, &config).unwrap();
    assert_eq!(report.status, Status::Skipped);
    assert!(report.checks.iter().all(|c| c.instances == 0 && c.status == Status::Skipped));
    assert!(report.counterexamples.is_empty());
}

#[test]
fn all_runs_every_suite() {
    let config = small(42);
    let report = run_suite(Suite::All, &config).unwrap();
    assert!(report.passed(), "{report}");
    for suite in Suite::EACH {
        let names = check_names(suite, &config).unwrap();
        assert!(names.iter().all(|n| report.check(n).is_some()), "{suite}");
    }
}

#[test]
fn grid_policy_skips_product() {
    let config = Config { policy: Some(Policy::ExactGrid(4)), ..small(5) };
    let report = run_suite(Suite::Monad, &config).unwrap();
    let product: Vec<_> = report.checks.iter().filter(|c| c.name.starts_with("monad/product")).collect();
    assert!(!product.is_empty());
    assert!(product.iter().all(|c| c.status == Status::Skipped && c.skip_reason.is_some()));
    assert!(report.passed());
}

#[test]
fn unknown_check_is_an_error() {
    assert!(replay(&small(1), "monad/min/nope", 0).is_err());
    assert!("nope".parse::<Suite>().is_err());
    assert!("instances=x".parse::<Sizes>().is_err());
}
