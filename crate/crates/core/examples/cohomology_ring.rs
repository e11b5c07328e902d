// Degree 2 and 4 cohomology of a Hirzebruch surface.

use toric_skt::bott::{build_bott, BottSpec};
use toric_skt::cohomology::{Cohomology, CohomologyClass};

fn main() -> toric_skt::Result<()> {
    let a = 3;
    let fan = build_bott(&BottSpec::new(2)?.with(1, 2, a)?)?;
    let coh = Cohomology::new(&fan)?;
    let summary = coh.summary();
    println!("H2 rank {} basis {:?}", summary.h2_rank, summary.h2_basis);
    println!("H4 rank {} basis {:?}", summary.h4_rank, summary.h4_basis);

    for (x, y) in [(1, 0), (0, 1), (1, 1), (a, 2)] {
        let u = CohomologyClass::new(vec![x, y, 0, 0]);
        let sq = coh.square(&u)?;
        println!("({u})^2 = {}", coh.describe(&sq));
    }
    // w3 and w1 agree in H2; w4 = w2 + a*w3
    assert!(coh.equal_in_h2(&coh.generator(2), &coh.generator(0))?);
    let w4 = CohomologyClass::new(vec![a, 1, 0, 0]);
    assert!(coh.equal_in_h2(&coh.generator(3), &w4)?);
    Ok(())
}
