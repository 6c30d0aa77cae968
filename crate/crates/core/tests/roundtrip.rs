use nrc_slicer::json::{
    pattern_from_json, pattern_to_json, trace_from_json, trace_to_json, type_from_json, type_to_json,
    value_from_json, value_to_json,
};
use nrc_slicer::oracle::{self, QueryGen};
use nrc_slicer::table::environments;
use nrc_slicer::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn queries_print_and_parse_back(seed in any::<u64>()) {
        let mut rng = oracle::rng(seed);
        let tables = oracle::random_tables(&mut rng, 4);
        let (env, ctx) = environments(&tables).unwrap();
        let q = QueryGen::new(&mut rng).query(&ctx, 5);
        let text = q.to_string();
        prop_assert_eq!(parse_query(&text).unwrap(), q.clone(), "{}", text);
        let ty = typecheck_expr(&ctx, &q).unwrap();
        prop_assert_eq!(parse_type(&ty.to_string()).unwrap(), ty.clone());
        prop_assert_eq!(type_from_json(&type_to_json(&ty)).unwrap(), ty);

        if let Ok((v, t)) = eval(&env, &q) {
            prop_assert_eq!(parse_value(&v.to_string()).unwrap(), v.clone());
            prop_assert_eq!(value_from_json(&value_to_json(&v)).unwrap(), v.clone());
            prop_assert_eq!(trace_from_json(&trace_to_json(&t)).unwrap(), t.clone());
            let p = oracle::pattern_below(&mut rng, &v);
            prop_assert_eq!(parse_pattern(&p.to_string()).unwrap(), p.clone());
            prop_assert_eq!(pattern_from_json(&pattern_to_json(&p)).unwrap(), p.clone());
            let (_, s) = slice(&p, &t).unwrap();
            prop_assert_eq!(trace_from_json(&trace_to_json(&s)).unwrap(), s);
            let (_, e) = query_slice(&p, &t).unwrap();
            prop_assert_eq!(parse_query(&e.to_string()).unwrap(), e);
        }
    }

    #[test]
    fn tables_round_trip(seed in any::<u64>()) {
        let mut rng = oracle::rng(seed);
        for t in oracle::random_tables(&mut rng, 6) {
            prop_assert_eq!(Table::from_json(&t.to_json()).unwrap(), t);
        }
    }
}
