use sidon_cert::cells::{nonempty_cells, BoundParams};
use sidon_cert::rational::parse_decimal;

fn main() {
    let params = BoundParams::new(
        parse_decimal("1.12733").unwrap(),
        ["0.70749", "0.78822", "0.87175", "1.12464", "1.18020", "1.24610"]
            .iter().map(|a| parse_decimal(a).unwrap()).collect(),
        ["0.66461", "0.67780", "0.71884"].iter().map(|c| parse_decimal(c).unwrap()).collect(),
        1,
    ).unwrap();
    for c in &params.cs {
        let start = std::time::Instant::now();
        let cells = nonempty_cells(&params, c);
        println!("c = {}: {} nonempty cells ({:?})", c, cells.len(), start.elapsed());
    }
}
