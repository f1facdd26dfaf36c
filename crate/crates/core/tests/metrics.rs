use pskh::constellations::{gen_kmc, gen_papsk};
use pskh::energy::{db_to_linear, sigma2_for_ebn0};
use pskh::link::{Link, LinkConfig, Signaling};
use pskh::metrics::{mi_constellation, run_ser, SerConfig};
use pskh::par::with_workers;
use pskh::receivers::TrellisDecodeConfig;
use pskh::{ChannelKind, RngSeed};

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 }).sum();
    (f(a) + f(b) + inner) * h / 3.0
}

fn gauss_q(x: f64) -> f64 {
    simpson(|t| (-t * t / 2.0).exp(), x, x + 14.0, 20_000) / (2.0 * std::f64::consts::PI).sqrt()
}

/// Binary-input AWGN mutual information for levels `+-amp` and noise variance `s2`.
fn biawgn_bits(amp: f64, s2: f64) -> f64 {
    let s = s2.sqrt();
    let pdf = |y: f64| (-(y - amp).powi(2) / (2.0 * s2)).exp() / (s * (2.0 * std::f64::consts::PI).sqrt());
    let loss = simpson(|y| pdf(y) * (-2.0 * y * amp / s2).exp().ln_1p() / std::f64::consts::LN_2, amp - 14.0 * s, amp + 14.0 * s, 40_000);
    1.0 - loss
}

fn qpsk_link() -> Link {
    let a = gen_papsk(1, 4, 1.0).unwrap();
    Link::new(&LinkConfig::new(a, Signaling::IsiFree, ChannelKind::IdentityAwgn, TrellisDecodeConfig::symbolwise())).unwrap()
}

#[test]
fn qpsk_ser_matches_closed_form() {
    let link = qpsk_link();
    let cfg = SerConfig { ebn0_db: vec![2.0, 4.0, 6.0], min_errors: 4000, max_symbols: 50_000_000, batch_frames: 16 };
    let curve = run_ser(&link, &cfg, RngSeed(11)).unwrap();
    for p in &curve.points {
        let q = gauss_q((2.0 * db_to_linear(p.ebn0_db)).sqrt());
        let exact = 2.0 * q - q * q;
        assert!((p.ser() / exact - 1.0).abs() < 0.08, "{} dB: {} vs {}", p.ebn0_db, p.ser(), exact);
    }
    assert!(curve.points.windows(2).all(|w| w[0].ser() > w[1].ser()));
}

#[test]
fn noiseless_point_has_no_errors() {
    let cfg = SerConfig { ebn0_db: vec![f64::INFINITY], min_errors: 1, max_symbols: 64_000, ..SerConfig::default() };
    let p = run_ser(&qpsk_link(), &cfg, RngSeed(3)).unwrap().points[0];
    assert_eq!(p.errors, 0);
    assert!(p.symbols >= 64_000);
}

#[test]
fn ser_independent_of_worker_count() {
    let a = gen_kmc(2, 16, 1.0, 3200, 100, RngSeed(5)).unwrap();
    let link =
        Link::new(&LinkConfig::new(a, Signaling::Sinc2Wmf { q: 8, span: 8 }, ChannelKind::RayleighIid, TrellisDecodeConfig::ddfse(1)))
            .unwrap();
    let cfg = SerConfig { ebn0_db: vec![4.0, 10.0], min_errors: 50, max_symbols: 40_000, batch_frames: 4 };
    let one = with_workers(1, || run_ser(&link, &cfg, RngSeed(9)).unwrap());
    let many = with_workers(3, || run_ser(&link, &cfg, RngSeed(9)).unwrap());
    assert_eq!(one, many);
}

#[test]
fn stopping_rule_checks_whole_batches() {
    let link = qpsk_link();
    let cfg = SerConfig { ebn0_db: vec![0.0], min_errors: 1, max_symbols: 1, batch_frames: 5 };
    let p = run_ser(&link, &cfg, RngSeed(1)).unwrap().points[0];
    assert_eq!(p.symbols, 5 * link.frame_len() as u64);
}

#[test]
fn qpsk_mutual_information_matches_binary_integral() {
    let a = gen_papsk(1, 4, 1.0).unwrap();
    for db in [-2.0, 3.0, 8.0] {
        let s2 = sigma2_for_ebn0(db, 1.0, 2, 1, ChannelKind::IdentityAwgn).unwrap();
        let exact = 2.0 * biawgn_bits(0.5f64.sqrt(), s2 / 2.0);
        let est = with_workers(2, || mi_constellation(&a, s2, 200_000, RngSeed(4)).unwrap());
        assert!((est.bits - exact).abs() < 4.0 * est.std_err + 2e-3, "{db} dB: {} vs {exact}", est.bits);
    }
}
