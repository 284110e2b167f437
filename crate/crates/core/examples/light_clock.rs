// A light clock between plates, ticked in its rest frame and seen from a moving
// frame. With the plate-vacuum shift switched on, the directly computed moving tick
// no longer equals the time-dilated rest tick.

use kkdisp::scharnhorst::{light_clock_tick, ClockError, LightClockScenario, Orientation};
use kkdisp::PhysicalConstants;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let k = PhysicalConstants::default();
    let no_shift = PhysicalConstants { k_coeff: 0.0, ..k };

    for orientation in [Orientation::MotionPerpendicularToMirrors, Orientation::MotionParallelToMirrors] {
        println!("{orientation:?}");
        for beta in [0.0, 0.1, 0.2, 0.3] {
            let plain = light_clock_tick(&LightClockScenario::new(1e-14, beta, orientation, no_shift)?)?;
            let c = light_clock_tick(&LightClockScenario::new(1e-14, beta, orientation, k)?)?;
            println!(
                "  beta {beta:.1}: tick direct {:.6e} s, dilated {:.6e} s, inconsistency {:.4e} (k = 0: {:.1e})",
                c.tick_moving_direct, c.tick_moving_sr, c.inconsistency, plain.inconsistency
            );
        }
    }

    // at β = 0.6 the shifted leg speed exceeds c/β and the return bounce never happens
    match light_clock_tick(&LightClockScenario::new(1e-14, 0.6, Orientation::MotionPerpendicularToMirrors, k)?) {
        Err(e @ ClockError::BounceOrderDegenerate { .. }) => println!("beta 0.6: {e}"),
        other => return Err(format!("expected a degenerate bounce, got {other:?}").into()),
    }

    // micron plates: the effect is far below f64 resolution
    let c = light_clock_tick(&LightClockScenario::new(1e-6, 0.6, Orientation::MotionPerpendicularToMirrors, k)?)?;
    println!("L = 1 µm, beta 0.6: inconsistency {:e}", c.inconsistency);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
