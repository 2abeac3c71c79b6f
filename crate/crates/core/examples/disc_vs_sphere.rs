//! Discs store more rotational energy per unit mass at a given radius; this
//! counts how much the viable region grows when the rate target is relaxed.

use gravrotor::atlas::{compare_geometries, SweepSpec};
use gravrotor::physical::{ShapeKind, CODATA_2018};

fn main() -> gravrotor::Result<()> {
    for relax in [1.0, 2.0, 4.0] {
        let s = SweepSpec::standard(ShapeKind::Sphere).with_relax(relax);
        let d = s.with_shape(ShapeKind::Disc);
        let cmp = compare_geometries(&CODATA_2018, &s, &d)?;
        println!(
            "relax {relax}: sphere {:>4} cells, disc {:>4} cells, ratio {:.2}",
            cmp.sphere_cells, cmp.disc_cells, cmp.ratio
        );
    }
    Ok(())
}
