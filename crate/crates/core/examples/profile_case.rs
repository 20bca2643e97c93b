use sidon_cert::cells::{nonempty_cells, primary_window_form, BoundParams};
use sidon_cert::affine::AffineForm;
use sidon_cert::lp::{lp_solve, lp_solve_guided, solve_f64, LinearProgram, Relation, Sense};
use sidon_cert::rational::parse_decimal;
use std::time::Instant;

fn main() {
    let params = BoundParams::new(
        parse_decimal("1.12733").unwrap(),
        ["0.70749", "0.78822", "0.87175", "1.12464", "1.18020", "1.24610"]
            .iter().map(|a| parse_decimal(a).unwrap()).collect(),
        ["0.66461", "0.67780", "0.71884"].iter().map(|c| parse_decimal(c).unwrap()).collect(),
        1,
    ).unwrap();
    let cells: Vec<_> = params.cs.iter().map(|c| nonempty_cells(&params, c)).collect();
    let primary = primary_window_form(&params);

    // build one typical case LP: combo (20, 40, 60), governing 1
    let combo = [20usize, 40, 60];
    let mut set = std::collections::BTreeSet::new();
    for (inst, &ci) in combo.iter().enumerate() {
        for f in &cells[inst][ci].constraints { set.insert(f.clone()); }
    }
    let bounds = [&primary, &cells[0][combo[0]].function, &cells[1][combo[1]].function, &cells[2][combo[2]].function];
    let governing = 1;
    let mut constraints: Vec<(AffineForm, Relation)> = set.iter().map(|f| (f.clone(), Relation::GeqZero)).collect();
    for (t, other) in bounds.iter().enumerate() {
        if t != governing { constraints.push((*other - bounds[governing], Relation::GeqZero)); }
    }
    println!("rows: {}", constraints.len());
    let lp = LinearProgram::new((1..=6).collect(), bounds[governing].clone(), Sense::Maximize, constraints);

    let t = Instant::now();
    for _ in 0..20 { let _ = solve_f64(&lp); }
    println!("float solve: {:?}/iter", t.elapsed() / 20);

    let t = Instant::now();
    for _ in 0..20 { let _ = lp_solve_guided(&lp).unwrap(); }
    println!("guided: {:?}/iter", t.elapsed() / 20);

    let t = Instant::now();
    for _ in 0..3 { let _ = lp_solve(&lp).unwrap(); }
    println!("exact simplex: {:?}/iter", t.elapsed() / 3);
}
