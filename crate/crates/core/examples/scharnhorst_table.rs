// Size of the plate-vacuum light-speed shift across plate separations, the
// measurement floor that hides it, and the separation where it would reach order one.

use kkdisp::scharnhorst::{
    delta_c_over_c, delta_v, invariant_length, length_scale_table, measurability_ratio, table_to_csv,
    ScharnhorstScenario, REPORTED_DELTA_C_1FM, REPORTED_DELTA_C_1UM, REPORTED_MEASURABILITY_COEFF,
};
use kkdisp::PhysicalConstants;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let k = PhysicalConstants::default();

    let ls: Vec<f64> = (6..=15).map(|e| 10f64.powi(-e)).collect();
    let rows = length_scale_table(&ls, &k)?;
    print!("{}", table_to_csv(&rows, &k));

    let (um, fm) = (delta_c_over_c(1e-6, &k)?, delta_c_over_c(1e-15, &k)?);
    println!("δc/c at 1 µm {um:.4e} (reported {REPORTED_DELTA_C_1UM:e}), at 1 fm {fm:.4e} (reported {REPORTED_DELTA_C_1FM:e})");
    println!("ratio 1 fm / 1 µm = {:.6e}", fm / um);

    let at_compton = measurability_ratio(&ScharnhorstScenario::new(k.lambda_c, None, k)?)?;
    println!(
        "δv/δc at L = λ_c: {at_compton:.6e} (reported coefficient {REPORTED_MEASURABILITY_COEFF:e}); δv there = {:.4e} m/s",
        delta_v(k.lambda_c, k.lambda_c, &k)?
    );

    for target in [1.0, REPORTED_DELTA_C_1UM] {
        println!("δc/c = {target:e} at L = {:.4e} m", invariant_length(target, &k)?);
    }

    // the shift is a k-linear effect
    let off = PhysicalConstants { k_coeff: 0.0, ..k };
    println!("with k = 0: δc/c(1 fm) = {}", delta_c_over_c(1e-15, &off)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
