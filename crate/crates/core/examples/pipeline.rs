// The end-to-end command line pipeline, run in-process:
//
// ```text
// toric-skt bott --k 4 --random --seed 2024 --out fan.json
// toric-skt wedge --fan fan.json --J 1,2,1,1,1,1,1,2 --out wedged.json --trace trace.json
// toric-skt find-bundle --fan wedged.json --rank 2 --bound 2 --out bundle.json
// toric-skt verify-certificate --fan wedged.json --certificate cert.json
// ```
//
// Every artifact is byte-for-byte reproducible from the seed.

use std::path::Path;

use toric_skt::cli::run;

fn step(args: &[&str]) -> String {
    let r = run(std::iter::once("toric-skt").chain(args.iter().copied()));
    assert_eq!(r.exit_code, 0, "{args:?} failed: {}", r.stderr);
    r.stdout
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

fn main() {
    let dir = std::env::temp_dir().join(format!("toric-skt-pipeline-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (fan, wedged, trace, bundle, cert) = (
        path(&dir, "fan.json"),
        path(&dir, "wedged.json"),
        path(&dir, "trace.json"),
        path(&dir, "bundle.json"),
        path(&dir, "cert.json"),
    );

    step(&["bott", "--k", "4", "--random", "--seed", "2024", "--out", &fan]);
    step(&["wedge", "--fan", &fan, "--J", "1,2,1,1,1,1,1,2", "--out", &wedged, "--trace", &trace]);
    step(&["find-bundle", "--fan", &wedged, "--rank", "2", "--bound", "2", "--out", &bundle]);

    let found: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&bundle).unwrap()).unwrap();
    let certs = found["certificates"].as_array().unwrap();
    println!("{} certificates; first: {}", certs.len(), certs[0]);
    std::fs::write(&cert, certs[0].to_string()).unwrap();
    let check = step(&["verify-certificate", "--fan", &wedged, "--certificate", &cert]);
    println!("independent check: {}", check.trim());
    println!("trace: {}", std::fs::read_to_string(&trace).unwrap().trim());

    std::fs::remove_dir_all(&dir).unwrap();
}
