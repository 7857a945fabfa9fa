//! Riemann zeta at integer arguments and Bose-type moment integrals.

/// `ζ(s)` for real `s > 1`, by direct summation plus an Euler–Maclaurin tail.
pub fn zeta(s: f64) -> f64 {
    assert!(s > 1.0, "zeta(s) requires s > 1");
    const N: usize = 64;
    let head: f64 = (1..N).rev().map(|n| (n as f64).powf(-s)).sum();
    let n = N as f64;
    // Tail from N: N^{1-s}/(s-1) + N^{-s}/2 + s N^{-s-1}/12 - s(s+1)(s+2) N^{-s-3}/720
    let tail = n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s) + s * n.powf(-s - 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * n.powf(-s - 3.0) / 720.0;
    head + tail
}

/// `∫₀^∞ u^m / (e^{βu} − 1) du = m! ζ(m+1) / β^{m+1}` for integer `m ≥ 1`.
pub fn bose_moment(m: u32, beta: f64) -> f64 {
    let factorial: f64 = (1..=m).map(f64::from).product();
    factorial * zeta(f64::from(m) + 1.0) / beta.powi(m as i32 + 1)
}
