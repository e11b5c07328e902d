// Builds a height-3 Bott tower, prints its characteristic matrix, the
// linear relations among divisor classes and the validation report.
//
// Run with `cargo run --example bott_tower`.

use toric_skt::bott::{bott_linear_relations, build_bott, BottSpec};
use toric_skt::fan::validate_fan;

fn main() -> toric_skt::Result<()> {
    let spec = BottSpec::new(3)?.with(1, 2, 2)?.with(1, 3, -1)?.with(2, 3, 3)?;
    let fan = build_bott(&spec)?;

    println!("spec: {}", spec.to_json());
    println!("characteristic matrix ({} x {}):", fan.dim(), fan.num_rays());
    for row in fan.characteristic_rows() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:>3}")).collect();
        println!("  [{}]", cells.join(" "));
    }
    for relation in &bott_linear_relations(&spec).relations {
        println!("  {relation}");
    }

    let report = validate_fan(&fan);
    println!(
        "smooth: {}, facet balanced: {}, primitive rays: {}",
        report.smooth, report.facet_balanced, report.ray_primitivity
    );
    assert!(report.is_valid());
    println!("{} maximal cones; fan json: {}", fan.max_cones().len(), fan.to_json());
    Ok(())
}
