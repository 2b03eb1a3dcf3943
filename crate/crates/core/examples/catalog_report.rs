//! Verifies every catalog record on the default grid and prints the table.

use rdress::catalog::summary_table;
use rdress::{Catalog, Exec, GridSpec};

fn main() -> rdress::Result<()> {
    let mut cat = Catalog::builtin();
    let rows = cat.verify_all(&GridSpec::default_grid(), Exec::default())?;
    print!("{}", summary_table(&rows));
    Ok(())
}
