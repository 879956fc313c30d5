//! Writes the shipped model instances: `cargo run -p flowzeta --example gen_data -- data`.

use std::path::PathBuf;

use flowzeta::algebra::Matrix;
use flowzeta::cover::{search_branched_instance, BranchedSearchParams};
use flowzeta::model::{BackendSpec, Derivative, Edge, ModelFile, SymbolicFlowModel};
use flowzeta::torsion::synth::{cat_map_branched_model, cat_map_model};
use flowzeta::{Exact, Float, Scalar};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn loop_model() -> SymbolicFlowModel<Exact> {
    let q = |n: i64, d: i64| Exact::new(n.into(), d.into());
    SymbolicFlowModel {
        name: Some("loop".into()),
        states: vec!["a".into()],
        edges: vec![Edge {
            id: "e".into(),
            from: 0,
            to: 0,
            r: 1,
            delta: 1,
            epsilon: 1,
            rho: Matrix::identity(1),
            derivative: Some(Derivative { lambda: q(2, 1), mu: q(1, 2) }),
        }],
        gamma_u: vec![],
        gamma_s: vec![],
        dim: 1,
        backend: BackendSpec::exact(),
        flow_complex: None,
    }
}

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "data".into()));
    std::fs::create_dir_all(&dir).expect("output directory");
    let write = |file: &str, description: &str, mut m: ModelFile| {
        m.description = Some(description.into());
        std::fs::write(dir.join(file), m.to_json() + "\n").expect("write model");
    };

    write("loop.json", "single self-loop with trivial holonomy", ModelFile::from_model(&loop_model()));
    let cat = cat_map_model();
    write("catmap.json", "suspension of the cat map [[2,1],[1,1]] on two states, holonomy -1, with flow cell data", ModelFile::from_model(&cat));
    let mut float = cat.map_scalars(Float::from_rational);
    float.name = Some("catmap-float".into());
    float.backend = BackendSpec::float(1e-9);
    write("catmap-float.json", "the cat map model over the complex float backend", ModelFile::from_model(&float));
    write(
        "branched.json",
        "the cat map model with the double cover branched over e5",
        ModelFile::from_model(&cat_map_branched_model()),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut found = search_branched_instance(&mut rng, &BranchedSearchParams::default()).expect("seeded search finds an instance");
    found.name = Some("branched-search".into());
    write("branched-search.json", "branched instance from the seeded search (seed 2)", ModelFile::from_model(&found));
}
