use sidon_cert::cells::BoundParams;
use sidon_cert::rational::parse_decimal;

fn main() {
    let params = BoundParams::new(
        parse_decimal("1.12733").unwrap(),
        ["0.70749", "0.78822", "0.87175", "1.12464", "1.18020", "1.24610"]
            .iter().map(|a| parse_decimal(a).unwrap()).collect(),
        ["0.66461", "0.67780", "0.71884"].iter().map(|c| parse_decimal(c).unwrap()).collect(),
        1,
    ).unwrap();
    let t0 = std::time::Instant::now();
    let geometry = sidon_cert::certify::bench_geometry(&params);
    println!("geometry: {:?} ({} combos)", t0.elapsed(), geometry.1);
    let t1 = std::time::Instant::now();
    let n = sidon_cert::certify::bench_cases(&params, 300);
    println!("first 300 combos: {:?} ({n} feasible cases)", t1.elapsed());
}
