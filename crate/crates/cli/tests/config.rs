use cachenet::{parse_config, ConfigError, Experiment, ExperimentConfig, KEYS};
use proptest::prelude::*;

#[test]
fn single_key_keeps_defaults_elsewhere() {
    let c = parse_config("theta = 1.0").unwrap();
    assert_eq!(c, ExperimentConfig::default());
    let c = parse_config("theta = 2").unwrap();
    assert_eq!(c.network.theta(), 2.0);
    assert_eq!(c.network.alpha(), 4.0);
    assert_eq!(c.economics.price_sc(), 250.0);
}

#[test]
fn rejections_name_key_and_constraint() {
    let e = parse_config("alpha = 2").unwrap_err();
    assert_eq!(e.key(), Some("alpha"));
    assert!(e.to_string().contains("alpha > 2"), "{e}");

    let e = parse_config("beta_bh = 0.4\nbeta_ut = 0.5").unwrap_err();
    assert_eq!(e.key(), Some("beta_bh"));
    assert!(e.to_string().contains("beta_bh > beta_ut"), "{e}");

    let e = parse_config("e_hit = 5\ne_miss = 2").unwrap_err();
    assert_eq!(e.key(), Some("e_miss"));

    let e = parse_config("budget = 1, -2").unwrap_err();
    assert_eq!(e.key(), Some("budget"));

    let e = parse_config("p_hit_stop = 1.5").unwrap_err();
    assert_eq!(e.key(), Some("p_hit_stop"));

    let e = parse_config("quad_tolerance = 0.1").unwrap_err();
    assert_eq!(e.key(), Some("quad_tolerance"));

    let e = parse_config("trials = 0").unwrap_err();
    assert_eq!(e.key(), Some("trials"));

    assert!(matches!(parse_config("alpah = 4"), Err(ConfigError::UnknownKey { .. })));
}

#[test]
fn help_documents_every_key() {
    let help = cachenet::config::keys_help();
    for k in KEYS {
        assert!(help.contains(k.name), "{}", k.name);
        if !k.unit.is_empty() {
            assert!(help.contains(k.unit));
        }
    }
}

#[test]
fn effective_config_round_trips() {
    let text = "experiment = validate\nlambda = 0.003\nbudget = 0.7, 3\nseed = 18446744073709551615\n\
                estimator = conditional\nhop_model = correlated\ntail_compensation = false\n\
                p_hit_scale = log\np_hit_start = 0.01\nquad_tolerance = 1e-11\nout_dir = some/dir\n";
    let c = parse_config(text).unwrap();
    assert_eq!(c.experiment, Some(Experiment::Validate));
    let again = parse_config(&c.to_text()).unwrap();
    assert_eq!(again, c);
    assert_eq!(again.to_text(), c.to_text());
}

proptest! {
    #[test]
    fn round_trip_of_arbitrary_values(
        lambda in 1e-6f64..1.0,
        alpha in 2.0001f64..8.0,
        theta in 0.0f64..100.0,
        beta_ut in 0.01f64..2.0,
        extra in 1e-9f64..3.0,
        budgets in proptest::collection::vec(1e-3f64..1e3, 1..5),
        seed in any::<u64>(),
        trials in 1u64..u64::MAX / 2,
        fraction in 1e-9f64..1e-2,
    ) {
        let list: Vec<String> = budgets.iter().map(|b| b.to_string()).collect();
        let text = format!(
            "lambda = {lambda}\nalpha = {alpha}\ntheta = {theta}\nbeta_ut = {beta_ut}\nbeta_bh = {}\n\
             budget = {}\nseed = {seed}\ntrials = {trials}\ntruncation_fraction = {fraction}\n",
            beta_ut + extra,
            list.join(", "),
        );
        let c = parse_config(&text).unwrap();
        prop_assert_eq!(parse_config(&c.to_text()).unwrap(), c);
    }
}
