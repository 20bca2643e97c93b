use sidon_cert::certify::certify;
use sidon_cert::cells::BoundParams;
use sidon_cert::rational::{parse_decimal, to_f64};

fn main() {
    let params = BoundParams::new(
        parse_decimal("1.12733").unwrap(),
        ["0.70749", "0.78822", "0.87175", "1.12464", "1.18020", "1.24610"]
            .iter().map(|a| parse_decimal(a).unwrap()).collect(),
        ["0.66461", "0.67780", "0.71884"].iter().map(|c| parse_decimal(c).unwrap()).collect(),
        1,
    ).unwrap();
    let start = std::time::Instant::now();
    let cert = certify(&params).unwrap();
    println!("elapsed: {:?}", start.elapsed());
    println!("cells: {:?}", cert.per_instance_cell_counts);
    println!("combos: {}", cert.feasible_combo_count);
    println!("cases: {}", cert.feasible_case_count);
    println!("bound: {} ~ {}", cert.certified_bound, to_f64(&cert.certified_bound));
    println!("printed: {}", cert.printed_bound);
    println!("worst case: combo {} governing {}", cert.worst_case.combo_index, cert.worst_case.governing);
    for (j, w) in cert.worst_case.witness.iter().enumerate() {
        println!("  w{} = {} ~ {}", j + 1, w, to_f64(w));
    }
    for s in &cert.worst_case.interlacings {
        println!("  cell {:?}", s.values());
    }
}
