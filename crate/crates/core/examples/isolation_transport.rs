// Finds isolation witnesses on a Bott tower and carries one through a
// wedge. Wedging along a ray that the witness uses destroys it, which the
// last part demonstrates.

use toric_skt::bott::{build_bott, BottSpec};
use toric_skt::cohomology::Cohomology;
use toric_skt::skt::{check_isolation_implies_square_zero, isolation_decompose, transport_witness, validate_witness};
use toric_skt::wedge::wedge_atomic;

fn main() -> toric_skt::Result<()> {
    let spec = BottSpec::new(3)?.with(1, 2, 2)?.with(2, 3, -1)?;
    let fan = build_bott(&spec)?;
    let coh = Cohomology::new(&fan)?;

    for p in 0..coh.num_rays() {
        match isolation_decompose(&coh, p)? {
            Some(w) => {
                let decomposition = w.decomposition(coh.num_rays());
                let zero = check_isolation_implies_square_zero(&coh, &w)?;
                println!("w{} = {decomposition}  (square zero: {zero})", p + 1);
            }
            None => println!("w{} has no isolation witness", p + 1),
        }
    }

    let witness = isolation_decompose(&coh, 0)?.expect("w1 is always isolated");

    // wedge along ray 2, which the witness does not use
    let (wedged, trace) = wedge_atomic(&fan, 1)?;
    let carried = transport_witness(&witness, &trace)?;
    let wedged_coh = Cohomology::new(&wedged)?;
    validate_witness(&wedged_coh, &carried)?;
    println!("after wedging along ray 2 the witness still holds");

    // wedge along ray 4, which it does use
    let (wedged, trace) = wedge_atomic(&fan, 3)?;
    let carried = transport_witness(&witness, &trace)?;
    let wedged_coh = Cohomology::new(&wedged)?;
    match validate_witness(&wedged_coh, &carried) {
        Ok(()) => println!("after wedging along ray 4 the witness still holds"),
        Err(e) => println!("after wedging along ray 4: {e}"),
    }
    Ok(())
}
