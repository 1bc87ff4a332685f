use repi::densities::{convolve_with_drift, make_analytic, scale_rv, AnalyticFamily};

#[test]
fn probe_drift() {
    for len in [2048usize, 4096, 8192] {
        let u = make_analytic(&AnalyticFamily::Uniform { a: 0.0, b: 1.0 }, len, 1e-10).unwrap();
        let (_, d) = convolve_with_drift(&u, &u).unwrap();
        let s = scale_rv(&u, 0.5f64.sqrt()).unwrap();
        let ds = convolve_with_drift(&s, &s).map(|(_, d)| d);
        println!("len={len}: plain drift={d:.3e} scaled drift={ds:?}");
    }
}
