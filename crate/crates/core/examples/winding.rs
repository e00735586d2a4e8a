//! Winding numbers of mass entries around the origin.

use dil::opcalc::{defect_dirac, OperatorExpression};
use dil::spectral::winding_number;

fn main() {
    let entries = [
        ("D_F lower-left", defect_dirac().entry(1, 0).clone()),
        ("zbar", OperatorExpression::zbar()),
        ("z^2", OperatorExpression::z().compose(&OperatorExpression::z())),
    ];
    for (name, e) in &entries {
        println!("{name:<16} {}", winding_number(e, 1.0, 256).unwrap());
    }
}
