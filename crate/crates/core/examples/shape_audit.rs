//! Runs the equation corpus through the shape checker and checks one
//! expression of your own.

use fraclab::shapecheck::{audit_corpus, golden_diff, infer_shape, parse_expr, Shape, ShapeEnv};

fn main() {
    let entries = audit_corpus();
    for e in &entries {
        println!("{:<28} {}", e.equation_id, e.verdict.message());
    }
    println!("golden table differences: {}", golden_diff(&entries).len());

    let env = ShapeEnv::new()
        .bind("R", Shape::Matrix(9, 9))
        .bind("w", Shape::Vector(9))
        .bind("p", Shape::Vector(9))
        .bind("eta", Shape::Scalar);
    for text in ["w + eta * (p - R * w)", "w + eta * p * w", "w' * R * w"] {
        let expr = parse_expr(text).expect("valid syntax");
        println!(
            "{text:<24} -> {}",
            infer_shape(&expr, &env).expect("bound symbols").message()
        );
    }
}
