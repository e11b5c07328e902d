// The J-construction: atomic wedges, general J-vectors, traces, and the
// check that different step orders give lattice-equivalent fans.

use toric_skt::bott::{build_bott, BottSpec};
use toric_skt::fan::{validate_fan, Fan};
use toric_skt::wedge::{equivalence_by_traces, wedge_atomic, wedge_j, wedge_sequence, JVector};

fn main() -> toric_skt::Result<()> {
    let line = Fan::new(1, vec![vec![1], vec![-1]], vec![vec![0], vec![1]])?;
    let (plane, trace) = wedge_atomic(&line, 0)?;
    println!("wedge of the line: rays {:?}", plane.rays());
    println!("  trace {}", trace.to_json());

    let hirzebruch = build_bott(&BottSpec::new(2)?.with(1, 2, 1)?)?;
    let j = JVector::parse("3,2,1,1")?;
    let (fan, trace) = wedge_j(&hirzebruch, &j)?;
    println!("J = {:?}: dimension {}, {} rays", j.entries(), fan.dim(), fan.num_rays());
    for row in fan.characteristic_rows() {
        println!("  {row:?}");
    }
    assert!(validate_fan(&fan).is_valid());
    assert_eq!(trace.replay(&hirzebruch)?, fan);

    let (other, other_trace) = wedge_sequence(&hirzebruch, &[1, 0, 0])?;
    let eq = equivalence_by_traces(&fan, &trace, &other, &other_trace).expect("orders agree");
    println!("step order (2,1,1) matches under relabelling {:?}", eq.permutation);
    Ok(())
}
