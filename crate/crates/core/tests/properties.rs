mod common;

use castlist::analytics::{gender_totals_by_year, role_timeseries, top_roles, PeriodSpec};
use castlist::census::{compare, CensusOccupation};
use castlist::listfile::parse_list_stream;
use castlist::normalize::clean_role;
use castlist::output::format_proportion;
use castlist::professions::MatchMode;
use castlist::store::{AggregateStore, GenderCounts, Proportion};
use castlist::Gender;
use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn store_strategy() -> impl Strategy<Value = AggregateStore> {
    any::<u64>().prop_map(|seed| random_store(&mut ChaCha8Rng::seed_from_u64(seed), 300))
}

fn swapped(store: &AggregateStore) -> AggregateStore {
    let mut text = String::from("role,year,count_f,count_m\n");
    for (k, c) in store.iter() {
        text.push_str(&format!("{},{},{},{}\n", k.role, k.year, c.male, c.female));
    }
    AggregateStore::load_snapshot(text.as_bytes(), "swapped").unwrap()
}

fn lines_strategy() -> impl Strategy<Value = Vec<Vec<u8>>> {
    let line = prop_oneof![
        proptest::collection::vec(any::<u8>().prop_filter("no newline", |b| *b != b'\n'), 0..50),
        "[a-z, ]{0,12}\t{1,3}[A-Za-z ]{0,10} \\((19[0-9]{2}|20[0-2][0-9]|\\?{4})\\)( \\(as [a-z]+\\))?( \\[[A-Za-z/ ]+\\])?"
            .prop_map(String::into_bytes),
        "\t{1,3}\"[a-z ]{1,8}\" \\((19[0-9]{2}|2000)\\) \\{[a-z ]{0,6}(\\((19|20)[0-9]{2}\\))?\\}( \\[[a-z]+\\])?"
            .prop_map(String::into_bytes),
        Just(Vec::new()),
    ];
    proptest::collection::vec(line, 0..40)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn cleaning_is_idempotent(s in any::<String>()) {
        for role in clean_role(&s) {
            prop_assert_eq!(clean_role(role.as_str()), vec![role.clone()]);
        }
    }

    #[test]
    fn cleaned_roles_have_no_forbidden_characters(s in "[ -~\t]{0,40}") {
        for role in clean_role(&s) {
            let r = role.as_str();
            prop_assert!(!r.is_empty() && r.trim() == r && !r.contains("  "));
            prop_assert!(!r.contains(['/', '(', ')']));
            prop_assert_eq!(r.to_lowercase(), r);
        }
    }

    #[test]
    fn cleaning_ignores_ascii_case(s in "[ -~]{0,40}") {
        prop_assert_eq!(clean_role(&s.to_ascii_uppercase()), clean_role(&s.to_ascii_lowercase()));
    }

    #[test]
    fn parser_conserves_title_lines(lines in lines_strategy(), female in any::<bool>()) {
        let mut bytes = LIST_HEADER.as_bytes().to_vec();
        for l in &lines {
            bytes.extend_from_slice(l);
            bytes.push(b'\n');
        }
        bytes.extend_from_slice(LIST_FOOTER.as_bytes());
        let text: String = bytes.iter().map(|&b| b as char).collect();
        let gender = if female { Gender::Female } else { Gender::Male };
        let mut parser = parse_list_stream(bytes.as_slice(), gender, "prop").unwrap();
        let records: Vec<_> = parser.by_ref().collect::<Result<_, _>>().unwrap();
        prop_assert_eq!(parser.report().title_lines(), count_title_lines(&text));
        prop_assert_eq!(parser.report().records_emitted, records.len() as u64);
        for r in &records {
            prop_assert_eq!(r.gender, gender);
            prop_assert!((1900..=2020).contains(&r.year));
        }
    }

    #[test]
    fn parser_never_panics(body in proptest::collection::vec(any::<u8>(), 0..400)) {
        let mut bytes = LIST_HEADER.as_bytes().to_vec();
        bytes.extend_from_slice(&body);
        if let Ok(mut parser) = parse_list_stream(bytes.as_slice(), Gender::Male, "prop") {
            for rec in parser.by_ref() {
                prop_assert!(rec.is_ok());
            }
        }
        let _ = parse_list_stream(body.as_slice(), Gender::Female, "prop").map(|p| p.count());
    }

    #[test]
    fn merge_is_commutative_and_associative(a in store_strategy(), b in store_strategy(), c in store_strategy()) {
        prop_assert_eq!(a.clone().merge(b.clone()), b.clone().merge(a.clone()));
        prop_assert_eq!(
            a.clone().merge(b.clone()).merge(c.clone()),
            a.clone().merge(b.clone().merge(c.clone()))
        );
        let merged = a.clone().merge(b.clone());
        prop_assert_eq!(merged.total_records(), a.total_records() + b.total_records());
    }

    #[test]
    fn snapshot_round_trip(store in store_strategy()) {
        let mut bytes = Vec::new();
        store.save_snapshot(&mut bytes).unwrap();
        let back = AggregateStore::load_snapshot(bytes.as_slice(), "memory").unwrap();
        let mut again = Vec::new();
        back.save_snapshot(&mut again).unwrap();
        prop_assert_eq!(&back, &store);
        prop_assert_eq!(bytes, again);
    }

    #[test]
    fn proportions_are_exact_complements(f in 0u64..1_000_000, m in 0u64..1_000_000) {
        let c = GenderCounts::new(f, m);
        match (c.p_female(), c.p_male()) {
            (Some(pf), Some(pm)) => {
                prop_assert_eq!(pf.numerator + pm.numerator, pf.denominator);
                prop_assert_eq!(pf.complement(), pm);
                prop_assert_eq!(format_proportion(pf), oracle_format(f, f + m));
            }
            (None, None) => prop_assert_eq!(f + m, 0),
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn top_k_is_a_prefix_of_top_k_plus_one(store in store_strategy(), k in 1usize..30, start in 1900u16..2019) {
        let period = PeriodSpec::new(start, 2020).unwrap();
        let short = top_roles(&store, period, k).unwrap();
        let long = top_roles(&store, period, k + 1).unwrap();
        prop_assert!(long.starts_with(&short));
        prop_assert!(short.windows(2).all(|w| w[0].count >= w[1].count));
    }

    #[test]
    fn timeseries_never_exceeds_yearly_totals(store in store_strategy(), q in "[a-z]{1,3}") {
        let totals = gender_totals_by_year(&store);
        for y in role_timeseries(&store, &q).unwrap() {
            let all = totals.iter().find(|t| t.year == y.year).unwrap();
            prop_assert!(y.counts.female <= all.counts.female && y.counts.male <= all.counts.male);
        }
    }

    #[test]
    fn swapping_genders_flips_census_delta(store in store_strategy(), share in 0.0f64..=1.0, q in "[a-z]{1,2}") {
        let occ = vec![CensusOccupation {
            occupation: "x".into(),
            female_share: share,
            query: q,
            query_mode: MatchMode::Substring,
        }];
        let mirrored = vec![CensusOccupation { female_share: 1.0 - share, ..occ[0].clone() }];
        let a = compare(&store, &occ).unwrap();
        let b = compare(&swapped(&store), &mirrored).unwrap();
        match (a[0].delta(), b[0].delta()) {
            (Some(da), Some(db)) => {
                prop_assert!((da + db).abs() < 1e-12, "{} vs {}", da, db);
                if da.abs() > 1e-9 {
                    prop_assert!(da.signum() != db.signum());
                }
            }
            (None, None) => {}
            other => prop_assert!(false, "{:?}", other),
        }
    }
}

#[test]
fn exact_ordering_of_close_proportions() {
    let a = Proportion::new(1_000_000_001, 3_000_000_000).unwrap();
    let b = Proportion::new(1, 3).unwrap();
    assert!(a.cmp_exact(&b).is_gt());
    assert!(b.cmp_exact(&a).is_lt());
    assert!(Proportion::new(2, 6).unwrap().cmp_exact(&b).is_eq());
    assert!(Proportion::new(1, 0).is_none());
}
