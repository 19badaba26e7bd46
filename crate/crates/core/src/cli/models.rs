//! Built-in models, shipped as model files in the public grammar so the
//! fixtures and the file format are the same artifact.

use crate::exterior::Polyvector;
use crate::model::LieModel;

use super::grammar::parse_model;

/// The Iwasawa threefold: quotient of the complex Heisenberg group.
pub const IWASAWA3_SRC: &str = "\
model iwasawa3
dim 3
d w2 = - w1^w3
";

/// A six-dimensional complex-parallelisable nilmanifold built from
/// upper-triangular 4x4 unipotent matrices.
pub const NIL6_SRC: &str = "\
model nil6
dim 6
d w2 = - w1^w4
d w3 = - w1^w5 - w2^w6
d w5 = - w4^w6
";

/// Complex torus of dimension `n`: every generator closed.
pub fn torus_src(n: u8) -> String {
    format!("model torus{n}\ndim {n}\n")
}

/// Names accepted by `--model` without a file, in listing order.
pub fn builtin_names() -> Vec<String> {
    let mut names = vec!["iwasawa3".to_string(), "nil6".to_string()];
    for n in 2..=8 {
        names.push(format!("torus{n}"));
    }
    names
}

/// Resolves a built-in model by name.
pub fn builtin(name: &str) -> Option<(LieModel, Option<Polyvector>)> {
    let src: String = match name {
        "iwasawa3" => IWASAWA3_SRC.to_string(),
        "nil6" => NIL6_SRC.to_string(),
        _ => {
            let n: u8 = name.strip_prefix("torus")?.parse().ok()?;
            if !(2..=8).contains(&n) {
                return None;
            }
            torus_src(n)
        }
    };
    Some(parse_model(&src).expect("built-in models parse"))
}

pub fn iwasawa3() -> LieModel {
    builtin("iwasawa3").expect("built-in").0
}

pub fn nil6() -> LieModel {
    builtin("nil6").expect("built-in").0
}

pub fn torus(n: u8) -> LieModel {
    builtin(&format!("torus{n}")).unwrap_or_else(|| panic!("torus{n} is not built in")).0
}
