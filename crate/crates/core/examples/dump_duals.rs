use sidon_cert::cells::{nonempty_cells, primary_window_form, BoundParams};
use sidon_cert::affine::AffineForm;
use sidon_cert::lp::{solve_f64, FloatOutcome, LinearProgram, Relation, Sense};
use sidon_cert::rational::parse_decimal;

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
    let lp = LinearProgram::new((1..=6).collect(), bounds[governing].clone(), Sense::Maximize, constraints);
    match solve_f64(&lp) {
        FloatOutcome::Infeasible { duals } => {
            let nonzero: Vec<(usize, f64)> = duals.iter().cloned().enumerate().filter(|(_, d)| d.abs() > 1e-12).collect();
            println!("nonzero duals ({}):", nonzero.len());
            for (i, d) in nonzero { println!("  row {i}: {d:e}"); }
        }
        other => println!("status: {:?}", match other { FloatOutcome::Optimal{..} => "optimal", FloatOutcome::Unbounded => "unbounded", _ => "unknown" }),
    }
}
