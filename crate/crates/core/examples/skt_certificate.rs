// Certificates for torus bundles whose characteristic classes satisfy
// Σ w_j² = 0: certifying chosen classes, searching for bundles, and
// re-verifying a serialized certificate against the fan alone.

use toric_skt::bott::{build_bott, BottSpec};
use toric_skt::cohomology::{Cohomology, CohomologyClass};
use toric_skt::fan::parse_fan;
use toric_skt::skt::{certify_skt, find_skt_bundle, parse_certificate, verify_certificate};

fn main() -> toric_skt::Result<()> {
    let a = 2;
    let fan = build_bott(&BottSpec::new(2)?.with(1, 2, a)?)?;
    let coh = Cohomology::new(&fan)?;

    let good = certify_skt(&coh, &[CohomologyClass::new(vec![1, 0, 0, 0]), CohomologyClass::new(vec![a, 2, 0, 0])])?;
    println!("[w1, {a}w1 + 2w2]: verified {}", good.verified);
    let bad = certify_skt(&coh, &[CohomologyClass::new(vec![0, 1, 0, 0]), CohomologyClass::new(vec![1, 1, 0, 0])])?;
    println!("[w2, w1 + w2]: verified {}, sum {}", bad.verified, coh.describe(&bad.sum));

    let found = find_skt_bundle(&coh, 4, 2)?;
    println!("{} rank-4 certificates with coefficients in [-2, 2]", found.len());

    let text = good.to_json()?;
    println!("{text}");
    let check = verify_certificate(&parse_fan(&fan.to_json())?, &parse_certificate(&text)?)?;
    assert!(check.verified);

    let forged = text.replacen("[2,2,0,0]", "[2,3,0,0]", 1);
    let check = verify_certificate(&fan, &parse_certificate(&forged)?)?;
    println!("forged copy: verified {}, problems {:?}", check.verified, check.problems);
    Ok(())
}
