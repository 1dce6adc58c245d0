use std::ffi::{CStr, CString};
use std::ptr;

use ecofjsp::exact::{brute_force_pareto, BruteForceLimits};
use ecofjsp::model::{enrich, parse_instance, SyntheticMarket};
use ecofjsp_ffi::*;

const TINY: &str = "2 2\n2 2 1 1 2 2 1 2 1\n1 1 1 2\n";

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ecofjsp_last_error()) }
        .to_str()
        .unwrap()
        .to_owned()
}

fn load(instance: &str, csv: &str) -> *mut EcofjspProblem {
    let (i, c) = (cstr(instance), cstr(csv));
    let mut p = ptr::null_mut();
    let st = unsafe { ecofjsp_problem_load(i.as_ptr(), c.as_ptr(), 15, 500.0, &mut p) };
    assert_eq!(st, EcofjspStatus::Ok, "{}", last_error());
    p
}

#[test]
fn op_cost_through_the_handle() {
    let csv = "timestamp,price_eur_mwh,emission_g_per_kwh\n2022-01-01T00:00:00Z,100,400\n";
    let p = load("1 1\n1 1 1 2\n", csv);
    let (mut j, mut m, mut o, mut t) = (0, 0, 0, 0);
    unsafe {
        assert_eq!(
            ecofjsp_problem_counts(p, &mut j, &mut m, &mut o, &mut t),
            EcofjspStatus::Ok
        );
        assert_eq!((j, m, o, t), (1, 1, 1, 4));
        let (mut cost, mut em) = (0.0, 0.0);
        assert_eq!(
            ecofjsp_op_cost(p, 0, 0, 0, 0, &mut cost, &mut em),
            EcofjspStatus::Ok
        );
        assert!((cost - 25.0).abs() < 1e-9);
        assert!((em - 100_000.0).abs() < 1e-6);
        assert_eq!(
            ecofjsp_op_cost(p, 0, 0, 0, 3, &mut cost, &mut em),
            EcofjspStatus::InvalidArgument
        );
        assert!(!last_error().is_empty());
        ecofjsp_problem_free(p);
    }
}

#[test]
fn brute_force_front_matches_the_library() {
    let market = SyntheticMarket {
        seed: 4,
        hours: 3,
        ..SyntheticMarket::default()
    };
    let csv = market.generate().unwrap().to_csv();
    let p = load(TINY, &csv);
    let want = brute_force_pareto(
        &enrich(
            parse_instance(TINY).unwrap(),
            market.generate().unwrap().expand(15).unwrap(),
            500.0,
        )
        .unwrap(),
        BruteForceLimits::default(),
    )
    .unwrap();
    unsafe {
        let mut f = ptr::null_mut();
        let d = BruteForceLimits::default();
        assert_eq!(
            ecofjsp_brute_force(p, d.max_ops, d.max_horizon, &mut f),
            EcofjspStatus::Ok
        );
        assert_eq!(ecofjsp_front_len(f), want.len());
        for (i, m) in want.members.iter().enumerate() {
            let (mut ms, mut cost, mut em) = (0, 0.0, 0.0);
            assert_eq!(
                ecofjsp_front_objectives(f, i, &mut ms, &mut cost, &mut em),
                EcofjspStatus::Ok
            );
            assert_eq!(
                (ms, cost, em),
                (
                    m.objectives.makespan,
                    m.objectives.energy_cost,
                    m.objectives.emissions
                )
            );
        }
        let (mut ms, mut cost, mut em) = (0, 0.0, 0.0);
        assert_eq!(
            ecofjsp_front_objectives(f, want.len(), &mut ms, &mut cost, &mut em),
            EcofjspStatus::InvalidArgument
        );

        let mut json = ptr::null_mut();
        assert_eq!(ecofjsp_front_json(f, &mut json), EcofjspStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        ecofjsp_string_free(json);
        assert_eq!(ecofjsp::cli::parse_front(&text).unwrap(), want.objectives());

        assert_eq!(ecofjsp_brute_force(p, 1, 1, &mut f), EcofjspStatus::Limit);
        ecofjsp_front_free(f);
        ecofjsp_problem_free(p);
    }
}

#[test]
fn solve_is_deterministic_and_nonempty() {
    let text = cstr(
        ecofjsp::model::benchmark::load_benchmark("mk01", 0)
            .map(|(i, _)| ecofjsp::model::write_instance(&i))
            .unwrap()
            .as_str(),
    );
    let config = cstr("population_size = 20\n");
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(
            ecofjsp_problem_synthetic(text.as_ptr(), 1, 24, 0, &mut p),
            EcofjspStatus::Ok,
            "{}",
            last_error()
        );
        let run = || {
            let mut f = ptr::null_mut();
            assert_eq!(
                ecofjsp_solve(p, config.as_ptr(), 5, 3, &mut f),
                EcofjspStatus::Ok,
                "{}",
                last_error()
            );
            let mut json = ptr::null_mut();
            assert_eq!(ecofjsp_front_json(f, &mut json), EcofjspStatus::Ok);
            let s = CStr::from_ptr(json).to_str().unwrap().to_owned();
            ecofjsp_string_free(json);
            assert!(ecofjsp_front_len(f) > 0);
            ecofjsp_front_free(f);
            s
        };
        assert_eq!(run(), run());
        let mut f = ptr::null_mut();
        let bad = cstr("population_size = 91\n");
        assert_eq!(
            ecofjsp_solve(p, bad.as_ptr(), 5, 1, &mut f),
            EcofjspStatus::InvalidArgument
        );
        ecofjsp_problem_free(p);
    }
}

#[test]
fn milp_emission_and_its_limit() {
    let csv = "timestamp,price_eur_mwh,emission_g_per_kwh\n2022-01-01T00:00:00Z,10,400\n2022-01-01T01:00:00Z,20,300\n";
    let p = load(TINY, csv);
    unsafe {
        let mut lp = ptr::null_mut();
        assert_eq!(
            ecofjsp_emit_milp(p, EcofjspObjective::Cost, 0, &mut lp),
            EcofjspStatus::Ok
        );
        let text = CStr::from_ptr(lp).to_str().unwrap().to_owned();
        ecofjsp_string_free(lp);
        assert!(text.to_lowercase().contains("minimize"));
        assert_eq!(
            ecofjsp_emit_milp(p, EcofjspObjective::Makespan, 3, &mut lp),
            EcofjspStatus::Limit
        );
        ecofjsp_problem_free(p);
    }
}

#[test]
fn bad_inputs_map_to_status_codes() {
    unsafe {
        let mut p = ptr::null_mut();
        let csv = cstr("timestamp,price_eur_mwh,emission_g_per_kwh\n2022-01-01T00:00:00Z,10,400\n");
        assert_eq!(
            ecofjsp_problem_load(ptr::null(), csv.as_ptr(), 15, 500.0, &mut p),
            EcofjspStatus::NullPointer
        );
        assert!(last_error().contains("instance_text"));
        let bad = cstr("2 1\n1 1 1 2\n");
        assert_eq!(
            ecofjsp_problem_load(bad.as_ptr(), csv.as_ptr(), 15, 500.0, &mut p),
            EcofjspStatus::Parse
        );
        assert!(p.is_null());
        let ok = cstr(TINY);
        assert_eq!(
            ecofjsp_problem_load(ok.as_ptr(), csv.as_ptr(), 15, 500.0, ptr::null_mut()),
            EcofjspStatus::NullPointer
        );
        let (mut a, mut b, mut c, mut d) = (0, 0, 0, 0);
        assert_eq!(
            ecofjsp_problem_counts(ptr::null(), &mut a, &mut b, &mut c, &mut d),
            EcofjspStatus::NullPointer
        );
        assert_eq!(ecofjsp_front_len(ptr::null()), 0);
        ecofjsp_problem_free(ptr::null_mut());
        ecofjsp_front_free(ptr::null_mut());
        ecofjsp_string_free(ptr::null_mut());
        let p = load(
            TINY,
            "timestamp,price_eur_mwh,emission_g_per_kwh\n2022-01-01T00:00:00Z,10,400\n",
        );
        assert_eq!(
            ecofjsp_problem_counts(p, &mut a, &mut b, &mut c, &mut d),
            EcofjspStatus::Ok
        );
        assert!(last_error().is_empty());
        ecofjsp_problem_free(p);
    }
}

#[test]
fn header_declares_every_export() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/ecofjsp.h")).unwrap();
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 14);
    for name in exports {
        assert!(
            header.contains(&format!("{name}(")),
            "{name} missing from header"
        );
    }
}
