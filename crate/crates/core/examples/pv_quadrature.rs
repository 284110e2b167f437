// Principal-value integrals with known closed forms, evaluated from samples and from
// closures, plus the semi-infinite identity `P∫₀^∞ dν/(ν² − ω²) = 0`.

use kkdisp::pvquad::{pv_integrate, pv_integrate_to_infinity, PoleIntegrand, QuadError};

/// `P∫_lower^upper f(x)/(x − pole) dx = exact`.
pub struct Fixture {
    pub name: &'static str,
    pub f: fn(f64) -> f64,
    pub lower: f64,
    pub upper: f64,
    pub pole: f64,
    pub exact: f64,
}

/// `Shi(x) = Σ x^(2k+1) / ((2k+1)(2k+1)!)`
fn sinh_integral(x: f64) -> f64 {
    let (mut term, mut sum) = (x, 0.0);
    for k in 0..30 {
        let n = (2 * k + 1) as f64;
        sum += term / n;
        term *= x * x / ((n + 1.0) * (n + 2.0));
    }
    sum
}

/// `Si(x) = Σ (−1)^k x^(2k+1) / ((2k+1)(2k+1)!)`
fn sine_integral(x: f64) -> f64 {
    let (mut term, mut sum) = (x, 0.0);
    for k in 0..30 {
        let n = (2 * k + 1) as f64;
        sum += term / n;
        term *= -x * x / ((n + 1.0) * (n + 2.0));
    }
    sum
}

pub fn fixtures() -> Vec<Fixture> {
    vec![
        Fixture {
            name: "1/x on [-1, 1]",
            f: |_| 1.0,
            lower: -1.0,
            upper: 1.0,
            pole: 0.0,
            exact: 0.0,
        },
        Fixture {
            name: "1/(x-1) on [0, 3]",
            f: |_| 1.0,
            lower: 0.0,
            upper: 3.0,
            pole: 1.0,
            exact: 2f64.ln(),
        },
        Fixture {
            name: "x^2/(x-0.5) on [0, 2]",
            f: |x| x * x,
            lower: 0.0,
            upper: 2.0,
            pole: 0.5,
            exact: 3.0 + 0.25 * 3f64.ln(),
        },
        Fixture {
            name: "e^x/x on [-1, 1]",
            f: f64::exp,
            lower: -1.0,
            upper: 1.0,
            pole: 0.0,
            exact: 2.0 * sinh_integral(1.0),
        },
        Fixture {
            name: "cos(x)/(x-1) on [0, 2]",
            f: f64::cos,
            lower: 0.0,
            upper: 2.0,
            pole: 1.0,
            exact: -2.0 * 1f64.sin() * sine_integral(1.0),
        },
    ]
}

/// `(sampled, closure)` values; the sampled route uses `nodes` uniform samples.
pub fn evaluate(fx: &Fixture, nodes: usize) -> Result<(f64, f64), QuadError> {
    let x: Vec<f64> = (0..nodes)
        .map(|i| fx.lower + (fx.upper - fx.lower) * i as f64 / (nodes - 1) as f64)
        .collect();
    let y: Vec<f64> = x.iter().map(|&v| (fx.f)(v)).collect();
    let sampled = pv_integrate(&PoleIntegrand::sampled(&x, &y, fx.pole)?)?.value;
    let closure = pv_integrate(&PoleIntegrand::function(&fx.f, fx.lower, fx.upper, fx.pole)?)?.value;
    Ok((sampled, closure))
}

/// `P∫₀^∞ dν/(ν² − ω²)` written as `P∫ f(ν)/(ν − ω)` with `f = 1/(ν + ω)`, sampled
/// on `[0] ∪ logspace(1e-3, 1e5)` and closed with a fitted tail.
pub fn semi_infinite_zero(omega: f64) -> Result<f64, QuadError> {
    let mut x = vec![0.0];
    x.extend((0..3000).map(|i| 10f64.powf(-3.0 + 8.0 * i as f64 / 2999.0)));
    let f: Vec<f64> = x.iter().map(|v| 1.0 / (v + omega)).collect();
    Ok(pv_integrate_to_infinity(&x, &f, omega, 0.0)?.value)
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for fx in fixtures() {
        let (s, c) = evaluate(&fx, 2001)?;
        println!(
            "{:<24} exact {:+.12}  sampled {:+.3e}  closure {:+.3e}",
            fx.name,
            fx.exact,
            s - fx.exact,
            c - fx.exact
        );
        if (s - fx.exact).abs() > 1e-6 || (c - fx.exact).abs() > 1e-6 {
            return Err(format!("{} off its closed form", fx.name).into());
        }
    }
    for w in [0.5, 1.0, 7.0] {
        let v = semi_infinite_zero(w)?;
        println!("P∫₀^∞ dν/(ν² − {w}²) = {v:+.3e}");
    }

    // a pole on the boundary has no principal value
    let x = [0.0, 1.0, 2.0, 3.0];
    let y = [1.0; 4];
    match PoleIntegrand::sampled(&x, &y, 0.0).and_then(|p| pv_integrate(&p)) {
        Err(e) => println!("pole at endpoint: {e}"),
        Ok(r) => return Err(format!("endpoint pole accepted: {r:?}").into()),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
