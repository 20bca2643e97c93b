use super::*;
use crate::rational::{parse_decimal, rat, to_f64};
use crate::sidon::CutoffVector;

fn params_k(alphas: &[&str], c: &str) -> BoundParams {
    BoundParams::new(
        parse_decimal("1.1").unwrap(),
        alphas.iter().map(|a| parse_decimal(a).unwrap()).collect(),
        vec![parse_decimal(c).unwrap()],
        1,
    )
    .unwrap()
}

fn interlacing(values: &[usize], k: usize) -> Interlacing {
    Interlacing::new(values.to_vec(), k).unwrap()
}

#[test]
fn enumeration_small_cases() {
    let k0: Vec<Vec<usize>> = enumerate_interlacings(0)
        .iter()
        .map(|s| s.values().to_vec())
        .collect();
    assert_eq!(k0, vec![vec![0, 1], vec![1, 1]]);

    let k1: Vec<Vec<usize>> = enumerate_interlacings(1)
        .iter()
        .map(|s| s.values().to_vec())
        .collect();
    assert_eq!(
        k1,
        vec![
            vec![0, 1, 2],
            vec![0, 2, 2],
            vec![1, 1, 2],
            vec![1, 2, 2],
            vec![2, 2, 2],
        ]
    );

    let k3 = enumerate_interlacings(3);
    assert!(k3.iter().any(|s| s.values() == [0, 2, 2, 4, 4]));
    // Catalan counts: C_{K+2}
    assert_eq!(enumerate_interlacings(2).len(), 14);
    assert_eq!(k3.len(), 42);
    assert_eq!(enumerate_interlacings(6).len(), 1430);
}

#[test]
fn interlacing_validation() {
    assert!(Interlacing::new(vec![0, 1], 0).is_ok());
    assert!(Interlacing::new(vec![1, 0], 0).is_err()); // decreasing
    assert!(Interlacing::new(vec![0, 0], 0).is_err()); // s_1 < 1
    assert!(Interlacing::new(vec![0, 1, 1], 1).is_err()); // last != K+1
}

/// The worked K=3 example: s = (0,2,2,4,4).
#[test]
fn worked_example_k3() {
    let params = params_k(&["0.3", "0.5", "0.7"], "0.2");
    let c = parse_decimal("0.2").unwrap();
    let s = interlacing(&[0, 2, 2, 4, 4], 3);
    let cell = build_cell(&s, &c, &params).unwrap();

    let w = |j: usize| AffineForm::variable(j);
    let wc = |j: usize| AffineForm::constant(c.clone()).with_coeff(j, int(1));
    let expected_p = vec![
        AffineForm::zero(),
        AffineForm::constant(c.clone()),
        w(1),
        w(2),
        wc(1),
        wc(2),
        w(3),
        AffineForm::constant(int(1)),
    ];
    assert_eq!(cell.breakpoints, expected_p);
    assert_eq!(cell.zeta, vec![0, 1, 1, 1, 2, 3, 3]);
    assert_eq!(cell.eta, vec![1, 1, 2, 3, 3, 3, 4]);

    // the constraint list contains the four binding inequalities
    let must_contain = vec![
        &w(1) - &AffineForm::constant(c.clone()),          // w1 >= c
        &wc(1) - &w(2),                                    // w1 + c >= w2
        &(&w(3) - &w(2)) - &AffineForm::constant(c.clone()), // w3 >= w2 + c
        &wc(3) - &AffineForm::constant(int(1)),            // w3 + c >= 1
    ];
    for needed in must_contain {
        assert!(
            cell.constraints.contains(&needed),
            "missing constraint {needed}"
        );
    }
}

/// The worked K=2 example: s = (1,1,3,3).
#[test]
fn worked_example_k2() {
    let params = params_k(&["0.8", "1.2"], "0.9");
    let c = parse_decimal("0.9").unwrap();
    let s = interlacing(&[1, 1, 3, 3], 2);
    let cell = build_cell(&s, &c, &params).unwrap();

    let w = |j: usize| AffineForm::variable(j);
    let expected_p = vec![
        AffineForm::zero(),
        w(1),
        AffineForm::constant(c.clone()),
        AffineForm::constant(c.clone()).with_coeff(1, int(1)),
        w(2),
        AffineForm::constant(int(1)),
    ];
    assert_eq!(cell.breakpoints, expected_p);
    assert_eq!(cell.eta, vec![1, 2, 2, 2, 3]);
    assert_eq!(cell.zeta, vec![0, 0, 1, 2, 2]);
}

/// K=0: a single scaled window with no levels carries no deviation
/// information, so the only nonempty cell has the constant bound
/// c*tau + 1/(c*tau).
#[test]
fn k0_single_cell_constant_function() {
    let params = BoundParams::new(
        parse_decimal("1.1").unwrap(),
        vec![],
        vec![parse_decimal("0.4").unwrap()],
        1,
    )
    .unwrap();
    let c = parse_decimal("0.4").unwrap();

    let cells = nonempty_cells(&params, &c);
    assert_eq!(cells.len(), 1);
    assert_eq!(cells[0].interlacing.values(), &[0, 1]);

    let cell = &cells[0];
    assert_eq!(
        cell.breakpoints,
        vec![
            AffineForm::zero(),
            AffineForm::constant(c.clone()),
            AffineForm::constant(int(1)),
        ]
    );
    let expect = &c * &params.tau + Rational::one() / (&c * &params.tau);
    assert_eq!(cell.function, AffineForm::constant(expect));

    // the other interlacing needs c >= 1
    let other = build_cell(&interlacing(&[1, 1], 0), &c, &params).unwrap();
    assert!(!cell_is_nonempty(&other, 0));
}

#[test]
fn primary_form_two_levels_matches_reference_coefficients() {
    let tau = parse_decimal("1.07950").unwrap();
    let a1 = parse_decimal("0.72720").unwrap();
    let a2 = parse_decimal("1.31609").unwrap();
    let params = BoundParams::new(
        tau.clone(),
        vec![a1.clone(), a2.clone()],
        vec![parse_decimal("0.86838").unwrap()],
        1,
    )
    .unwrap();
    let form = primary_window_form(&params);

    let one = Rational::one();
    let d1 = &a1 - &one;
    let d2 = &a2 - &one;
    let expect_const = &tau + &one / &tau - int(2) * &tau * &d2 * &d2;
    assert_eq!(form.constant_part(), &expect_const);
    assert_eq!(form.coeff(1), -(int(2) * &tau * &d1 * &d1));
    assert_eq!(form.coeff(2), int(2) * &tau * &d2 * &d2);

    // under the doubled scale w -> 2w the printed seven-digit reference
    // coefficients hold to one final-digit unit
    let half = rat(1, 2);
    let checks = [
        (form.constant_part().clone(), "1.7901428"),
        (form.coeff(1) * &half, "-0.0803363"),
        (form.coeff(2) * &half, "0.1078559"),
    ];
    let ulp = rat(1, 10_000_000);
    for (exact, printed) in checks {
        let printed = parse_decimal(printed).unwrap();
        let diff = &exact - &printed;
        assert!(
            diff.abs() <= ulp,
            "coefficient {} vs printed {} off by more than one ulp",
            to_f64(&exact),
            to_f64(&printed)
        );
    }
}

#[test]
fn primary_form_level_at_mean_is_constant() {
    // K = 1 with alpha_1 = 1: both level bands touch the mean
    let params = BoundParams::new(
        rat(7, 5),
        vec![int(1)],
        vec![rat(1, 2)],
        1,
    )
    .unwrap();
    let form = primary_window_form(&params);
    assert_eq!(form, AffineForm::constant(rat(7, 5) + rat(5, 7)));
}

#[test]
fn primary_form_thin_reference_shape() {
    // tau = 1/g, levels (0.8, 1.2): (2/g) - (2/(25 g^3)) (1 + w1 - w2)
    for g in [2u64, 5] {
        let params = BoundParams::new(
            rat(1, g as i64),
            vec![rat(4, 5), rat(6, 5)],
            vec![rat(9, 10)],
            g,
        )
        .unwrap();
        let form = primary_window_form(&params);
        let g3 = int((g * g * g) as i64);
        let coeff = rat(2, 25) / &g3;
        let expect = AffineForm::constant(rat(2, g as i64) - &coeff)
            .with_coeff(1, -coeff.clone())
            .with_coeff(2, coeff.clone());
        assert_eq!(form, expect);
    }
}

#[test]
fn nonempty_cells_k1() {
    let params = params_k(&["0.9"], "0.6");
    let c = parse_decimal("0.6").unwrap();
    let cells = nonempty_cells(&params, &c);
    let found: Vec<Vec<usize>> = cells.iter().map(|c| c.interlacing.values().to_vec()).collect();
    assert_eq!(found, vec![vec![0, 2, 2], vec![1, 1, 2], vec![1, 2, 2]]);
}

#[test]
fn locate_cell_k1() {
    let params = params_k(&["0.9"], "0.6");
    let c = parse_decimal("0.6").unwrap();
    let cells = nonempty_cells(&params, &c);

    let locate = |w1: Rational| {
        let w = CutoffVector::from_values(vec![int(0), w1, int(1)]);
        locate_cell(&cells, &w).unwrap().interlacing.values().to_vec()
    };
    assert_eq!(locate(rat(1, 5)), vec![1, 1, 2]); // w1 <= c, w1 + c <= 1
    assert_eq!(locate(rat(9, 10)), vec![0, 2, 2]); // w1 >= c, w1 + c >= 1
    // boundary w1 = c: shared by several closed cells; first in order wins
    assert_eq!(locate(rat(3, 5)), vec![0, 2, 2]);
}

#[test]
fn difference_screen_agrees_with_lp_feasibility() {
    for (alphas, c_text) in [
        (vec!["0.9"], "0.6"),
        (vec!["0.9"], "0.5"),
        (vec!["0.5", "1.3"], "0.35"),
        (vec!["0.4", "0.8", "1.2"], "0.52"),
    ] {
        let alpha_refs: Vec<&str> = alphas.clone();
        let params = params_k(&alpha_refs, c_text);
        let c = parse_decimal(c_text).unwrap();
        let k = params.k();
        for s in enumerate_interlacings(k) {
            let cell = build_cell(&s, &c, &params).unwrap();
            let lp_feasible = cell_is_nonempty(&cell, k);
            let sys = cell.difference_system().expect("cells are difference systems");
            let fw_feasible = difference_systems_feasible(&[&sys], k);
            assert_eq!(
                lp_feasible,
                fw_feasible,
                "screen mismatch for s = {:?}, c = {c_text}",
                s.values()
            );
        }
    }
}

#[test]
fn cell_function_affinity_matches_direct_evaluation() {
    // at any vertex-ish point of a cell, summing segment contributions
    // directly equals the assembled affine function
    let params = params_k(&["0.5", "1.3"], "0.35");
    let c = parse_decimal("0.35").unwrap();
    let cells = nonempty_cells(&params, &c);
    for cell in &cells {
        // take an interior-ish rational point of the cell by solving the
        // constraints via the exact LP with a fixed objective
        let k = params.k();
        let vars: Vec<usize> = (1..=k).collect();
        let objective = AffineForm::variable(1);
        let lp = LinearProgram::new(
            vars,
            objective,
            Sense::Maximize,
            cell.constraints
                .iter()
                .map(|f| (f.clone(), Relation::GeqZero))
                .collect(),
        );
        let res = lp_solve(&lp).unwrap();
        let point = res.witness.unwrap();

        let g2 = int(1);
        let base = &c * &params.tau + Rational::one() / (&c * &params.tau * &g2);
        let factor = int(2) * &params.tau / (&c * &c * &g2);
        let mut direct = base;
        for seg in 1..cell.breakpoints.len() {
            let lo = params
                .level(cell.eta[seg - 1] as isize - 1)
                .sub(&params.level(cell.zeta[seg - 1] as isize));
            let hi = params
                .level(cell.eta[seg - 1] as isize)
                .sub(&params.level(cell.zeta[seg - 1] as isize - 1));
            let weight = interval_sq_distance(&lo, &hi, &c).unwrap();
            let len = (&cell.breakpoints[seg] - &cell.breakpoints[seg - 1])
                .eval(&point)
                .unwrap();
            direct = direct - &factor * &weight * len;
        }
        assert_eq!(cell.function.eval(&point).unwrap(), direct);
    }
}
