use super::*;
use crate::dpi::{brute_force_solve, solve_loop};
use crate::order::antichain_leq;

#[test]
fn full_battery_catalog_has_eight_chemistries() {
    let cats = DroneCatalogs::shipped();
    assert_eq!(cats.batteries.len(), 8);
    let names: Vec<&str> = cats.batteries.entries.iter().map(|e| e.name.as_str()).collect();
    for n in ["LCO", "LFP", "LiPo", "LMO", "NiCad", "NiH2", "NiMH", "SLA"] {
        assert!(names.contains(&n), "{n}");
    }
}

#[test]
fn duplicate_name_rejected_with_line() {
    let text = "# kind: computer\nname,computation_gops,cost_chf,mass_kg,power_w\nA,1,1,1,1\nA,2,2,2,2\n";
    match load_catalog(text) {
        Err(CatalogError::DuplicateName { line, name }) => {
            assert_eq!(name, "A");
            assert_eq!(line, 4);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn missing_column_named() {
    let text = "# kind: computer\nname,computation_gops,cost_chf,mass_kg\nA,1,1,1\n";
    let err = load_catalog(text).unwrap_err();
    assert!(err.to_string().contains("power_w"), "{err}");
}

#[test]
fn bad_value_reports_field() {
    let text = "# kind: computer\nname,computation_gops,cost_chf,mass_kg,power_w\nA,1,x,1,1\n";
    let err = load_catalog(text).unwrap_err();
    assert!(err.to_string().contains("cost_chf"), "{err}");
    assert!(err.to_string().contains("line 3"), "{err}");
}

#[test]
fn one_replacement_when_missions_within_cycle_life() {
    assert_eq!(replacements(100.0, 600.0), 1.0);
    assert_eq!(replacements(0.0, 600.0), 1.0);
    assert_eq!(replacements(601.0, 600.0), 2.0);
    let cats = DroneCatalogs::toy();
    let b = battery_block(&cats.batteries, &[1], &[100.0]).unwrap();
    let lipo = b
        .implementations()
        .iter()
        .find(|i| i.label.starts_with("LiPo"))
        .unwrap();
    // 20 Wh / 2.5 Wh/CHF, one pack, one replacement
    assert!((lipo.req.to_reals().unwrap()[0] - 8.0).abs() < 1e-12);
}

#[test]
fn zero_lift_zero_effort_draws_idle_power() {
    let cats = DroneCatalogs::toy();
    for i in 0..cats.actuators.len() {
        assert_eq!(
            actuator_power(&cats.actuators, i, 0.0, 0.0),
            cats.actuators.value(i, "idle_power_w")
        );
    }
}

#[test]
fn computing_block_front_matches_filter() {
    let cats = DroneCatalogs::toy();
    let d = computing_block(&cats.computers).unwrap();
    for need in [1.0, 13.0, 14.0, 470.0, 471.0] {
        let h = d.h(&Element::reals(&[need])).unwrap();
        let mut expect: Vec<Vec<f64>> = (0..cats.computers.len())
            .filter(|&i| cats.computers.value(i, "computation_gops") >= need)
            .map(|i| {
                vec![
                    cats.computers.value(i, "cost_chf"),
                    cats.computers.value(i, "mass_kg"),
                    cats.computers.value(i, "power_w"),
                ]
            })
            .collect();
        // toy computers are totally ordered in all three resources
        expect.sort_by(|a, b| a[0].total_cmp(&b[0]));
        expect.truncate(1);
        let got: Vec<Vec<f64>> = h.points().iter().map(|p| p.to_reals().unwrap()).collect();
        assert_eq!(got, expect, "need {need}");
    }
}

#[test]
fn drone_diagram_has_three_loops() {
    let d = build_drone_diagram(&DroneCatalogs::toy(), &DroneConfig::toy()).unwrap();
    assert_eq!(d.loop_count(), 3);
    assert_eq!(d.exposed_fun().len(), 3);
    assert_eq!(d.exposed_res().len(), 3);
}

#[test]
fn removing_battery_reports_dangling_port() {
    let b = drone_builder(&DroneCatalogs::toy(), &DroneConfig::toy())
        .unwrap()
        .remove_node("battery");
    let err = b.build().unwrap_err();
    let msg = err.to_string();
    assert!(matches!(err, DpiError::Dangling(..)), "{msg}");
    assert!(
        msg.contains("energy.energy")
            || msg.contains("mission.missions")
            || msg.contains("mass_sum.battery")
            || msg.contains("cost_sum.battery"),
        "{msg}"
    );
}

fn toy() -> CoDesignDiagram {
    build_drone_diagram(&DroneCatalogs::toy(), &DroneConfig::toy()).unwrap()
}

#[test]
fn toy_solve_equals_brute_force() {
    let d = toy();
    for m in [
        MissionSpec::new(0.0, 100.0, 0.01),
        MissionSpec::new(10.0, 100.0, 0.01),
        MissionSpec::new(20.0, 1000.0, 0.01),
    ] {
        let f = m.functionality(&d);
        let s = solve_loop(&d, &f).unwrap();
        let b = brute_force_solve(&d, &f).unwrap();
        assert_eq!(s.front, b.front, "{m:?}");
        for w in &s.witnesses {
            assert!(d.check_assignment(&f, w).unwrap().is_ok());
        }
    }
}

#[test]
fn zero_time_mission_uses_single_pack() {
    let cats = DroneCatalogs::toy();
    let mut cfg = DroneConfig::toy();
    cfg.battery_packs = vec![1, 2];
    let d = build_drone_diagram(&cats, &cfg).unwrap();
    let q = query(&d, &[MissionSpec::new(0.0, 100.0, 0.01)]).unwrap();
    assert!(!q[0].front.is_empty());
    for w in &q[0].witnesses {
        assert!(w.label_of("battery").unwrap().contains(" x1 "), "{w:?}");
    }
}

#[test]
fn impossible_noise_bound_is_infeasible() {
    let d = toy();
    let q = query(&d, &[MissionSpec::new(10.0, 100.0, 1e6)]).unwrap();
    assert!(q[0].front.is_empty());
    assert!(q[0].witnesses.is_empty());
}

#[test]
fn nested_missions_give_nested_fronts() {
    let d = toy();
    let sweep = [
        MissionSpec::new(0.0, 100.0, 0.01),
        MissionSpec::new(10.0, 100.0, 0.01),
        MissionSpec::new(20.0, 1000.0, 0.01),
    ];
    let q = query(&d, &sweep).unwrap();
    for i in 0..q.len() {
        for j in i + 1..q.len() {
            assert!(antichain_leq(&q[i].front, &q[j].front).unwrap(), "{i} {j}");
        }
    }
}

#[test]
fn tracking_bound_filters_front() {
    let d = toy();
    let mut m = MissionSpec::new(10.0, 100.0, 0.01);
    let all = query(&d, &[m]).unwrap().remove(0);
    assert!(!all.front.is_empty());
    let best = all
        .front
        .points()
        .iter()
        .map(|p| p.to_reals().unwrap()[2])
        .fold(f64::INFINITY, f64::min);
    m.max_tracking_error = Some(best);
    let cut = query(&d, &[m]).unwrap().remove(0);
    assert!(!cut.front.is_empty());
    assert!(cut.front.points().iter().all(|p| p.to_reals().unwrap()[2] <= best));
    assert_eq!(cut.front.len(), cut.witnesses.len());
}
