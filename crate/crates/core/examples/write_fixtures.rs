//! Regenerates the JSON fixtures shipped in `fixtures/`.
//!
//! `cargo run -p fanforge-core --example write_fixtures -- fixtures`

use std::fs;
use std::path::PathBuf;

use fanforge::complex::ComplexMap;
use fanforge::fixtures::{self, MapFixture};
use fanforge::io::{document_to_json, ComplexDocument, MapBlock, OmegaBlock};
use fanforge::IntVector;

fn main() -> std::io::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "fixtures".into()));
    fs::create_dir_all(&dir)?;
    let save = |name: &str, doc: ComplexDocument| {
        fs::write(
            dir.join(format!("{name}.json")),
            document_to_json(&doc) + "\n",
        )
    };

    for n in 2..=10 {
        save(
            &format!("an_cone_{n}"),
            ComplexDocument::from_complex(fixtures::an_cone(n)),
        )?;
    }
    for (r, a) in fixtures::quotient_parameters(7) {
        save(
            &format!("quotient_{r}_{a}"),
            ComplexDocument::from_complex(fixtures::quotient_cone(r, a)),
        )?;
    }
    save(
        "abramovich",
        ComplexDocument::from_complex(fixtures::abramovich()),
    )?;
    save(
        "glued",
        ComplexDocument::from_complex(fixtures::glued_complex()),
    )?;
    save(
        "non_saturated",
        ComplexDocument::from_complex(fixtures::non_saturated()),
    )?;
    for (i, k) in fixtures::regular_fans().into_iter().enumerate() {
        save(&format!("regular_{i}"), ComplexDocument::from_complex(k))?;
    }
    let rk = fixtures::obstruction();
    save(
        "obstruction",
        ComplexDocument {
            omega: Some(OmegaBlock {
                cells: rk.omega().clone(),
                order: rk.order().clone(),
            }),
            ..ComplexDocument::from_complex(rk.complex.clone())
        },
    )?;

    let map_doc = |m: MapFixture| ComplexDocument {
        map: Some(MapBlock {
            source: m.source,
            target: m.target,
            map: m.map,
        }),
        ..ComplexDocument::default()
    };
    let a3 = fixtures::an_cone(3);
    save(
        "identity_map",
        map_doc(MapFixture {
            source: a3.clone(),
            target: a3.clone(),
            map: ComplexMap::identity(&a3),
        }),
    )?;
    let conj = fixtures::unimodular_conjugations(1, 11).remove(0);
    save("unimodular_map", map_doc(conj))?;
    let gens = [IntVector::from_i64s(&[1, 0]), IntVector::from_i64s(&[1, 3])];
    save(
        "product_projection",
        map_doc(fixtures::product_projection(&gens)),
    )?;
    Ok(())
}
