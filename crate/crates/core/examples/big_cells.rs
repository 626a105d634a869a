//! Prints the quasi-polynomial piece of the partition function on every big
//! cell of `[e1, e2, e3, e1 + e2 + e3]`.

use vecpart::arrangement::{config_from_i64, delta, Arrangement};
use vecpart::decomp::bigcell_piece;
use vecpart::latfun::{partition_function, Window};

fn main() -> Result<(), vecpart::Error> {
    let cfg = config_from_i64(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]])?;
    println!("delta = {}", delta(&cfg));
    let arr = Arrangement::new(cfg);
    let px = partition_function(arr.config())?;
    let window = Window::radius(3, 4);
    for (c, cell) in arr.big_cells().iter().enumerate() {
        let piece = bigcell_piece(&arr, &px, c, &window)?;
        println!("cell {c} ({} topes): {}", cell.tope_ids.len(), piece.render());
    }
    Ok(())
}
