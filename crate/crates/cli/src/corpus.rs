//! The bundled example files, rebuilt from the core catalog.

use dgla_core::catalog;
use dgla_core::linalg::int;
use dgla_core::stability::standard_so3_problem;
use dgla_core::{LieMorphism, Mat, Subspace};

use crate::file::{AlgebraFile, FormKind, Kind};

/// `(file stem, contents)` for every corpus file.
pub fn bundled() -> Vec<(&'static str, AlgebraFile)> {
    let sl2 = catalog::sl2();
    let borel = Subspace::span(
        3,
        &[vec![int(1), int(0), int(0)], vec![int(0), int(1), int(0)]],
    )
    .expect("h, e span");
    let rep = standard_so3_problem().expect("standard representation");
    vec![
        ("so3", AlgebraFile::from_lie(&catalog::so3())),
        ("sl2", AlgebraFile::from_lie(&sl2)),
        ("abelian2", AlgebraFile::from_lie(&catalog::abelian(2))),
        (
            "heisenberg3",
            AlgebraFile::from_lie(&catalog::heisenberg3()),
        ),
        ("m2k", AlgebraFile::from_assoc(&catalog::m2k())),
        (
            "dual_numbers",
            AlgebraFile::from_assoc(&catalog::dual_numbers()),
        ),
        (
            "sl2_borel",
            AlgebraFile::from_lie(&sl2).with_subspace("borel", &borel),
        ),
        (
            "sl2_id_morphism",
            AlgebraFile::from_morphism(Kind::Morphism, &LieMorphism::identity(sl2)),
        ),
        (
            "rep_so_example",
            AlgebraFile::from_morphism(Kind::Pair, rep.morphism()).with_form(
                "so3",
                FormKind::Symmetric,
                &Mat::identity(3),
            ),
        ),
    ]
}
