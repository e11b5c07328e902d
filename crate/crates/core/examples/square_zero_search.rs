// Exhaustive box search for primitive classes with vanishing square.

use toric_skt::bott::{build_bott, BottSpec};
use toric_skt::cohomology::Cohomology;
use toric_skt::fan::Fan;
use toric_skt::skt::square_zero_search;
use toric_skt::wedge::wedge_atomic;

fn show(name: &str, coh: &Cohomology, bound: i64, restrict: Option<&[usize]>) -> toric_skt::Result<()> {
    let found = square_zero_search(coh, bound, restrict)?;
    println!("{name}, bound {bound}: {} classes", found.len());
    for c in found.iter().take(8) {
        println!("  {}", c.class());
    }
    Ok(())
}

fn main() -> toric_skt::Result<()> {
    let hirzebruch = Cohomology::new(&build_bott(&BottSpec::new(2)?.with(1, 2, 1)?)?)?;
    show("Hirzebruch a=1 on span{w1,w2}", &hirzebruch, 5, Some(&[0, 1]))?;

    // 2*c13 + c12*c23 = 0 opens up a direction with a w3 term
    let m3 = Cohomology::new(&build_bott(&BottSpec::new(3)?.with(1, 2, 2)?.with(1, 3, -1)?.with(2, 3, 1)?)?)?;
    show("M3 with c = (2, -1, 1)", &m3, 4, Some(&[0, 1, 2]))?;

    let line = Fan::new(1, vec![vec![1], vec![-1]], vec![vec![0], vec![1]])?;
    let plane = Cohomology::new(&wedge_atomic(&line, 0)?.0)?;
    show("projective plane", &plane, 10, None)?;
    Ok(())
}
