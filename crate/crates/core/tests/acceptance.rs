//! The acceptance criteria. Each test prints one `[pass]`/`[fail]` line with
//! its runtime against the budget; run with `--nocapture` to see them.

use std::time::{Duration, Instant};

use hodgevir::arith::{int, rat, Rational};
use hodgevir::hodge;
use hodgevir::pairing::PairingData;
use hodgevir::pipeline::{self, q_window};
use hodgevir::report::Report;
use hodgevir::series::{Truncation, UNBOUNDED};
use hodgevir::special;
use hodgevir::virasoro::{self, VirasoroBundle};
use hodgevir::witten::{self, CorrelatorKey};
use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pairings() -> [PairingData; 2] {
    [PairingData::point(), PairingData::hyperbolic2()]
}

fn criterion(n: u32, title: &str, budget: Duration, run: impl FnOnce() -> Vec<Report>) {
    let start = Instant::now();
    let reports = run();
    let elapsed = start.elapsed();
    let checked: usize = reports.iter().map(|r| r.checked).sum();
    let ok = reports.iter().all(Report::passed) && elapsed <= budget;
    println!(
        "[{}] criterion {n}: {title} ({checked} checks, {:.2?} of {:?})",
        if ok { "pass" } else { "fail" },
        elapsed,
        budget
    );
    for r in reports.iter().filter(|r| !r.passed()) {
        println!("{}", r.render_text());
    }
    assert!(reports.iter().all(Report::passed), "criterion {n} has mismatches");
    assert!(elapsed <= budget, "criterion {n} took {elapsed:?}, budget {budget:?}");
}

#[test]
fn criterion_01_constants() {
    criterion(1, "a_1..a_3 with round trip to z^-10, C_0..C_3 with oracle", Duration::from_secs(1), || {
        vec![pipeline::verify_constants(11).unwrap()]
    });
}

#[test]
fn criterion_02_sum_cc() {
    criterion(2, "sum (-1)^(n-i) C_i C_(n-i) = 0 for n = 1..10", Duration::from_secs(1), || {
        let mut r = Report::new("sum-cc", "-", Truncation::unbounded());
        for n in 1..=10 {
            r.compare_values(&format!("n={n}"), &special::sum_cc(n), &Rational::zero());
        }
        vec![r]
    });
}

#[test]
fn criterion_03_brackets() {
    criterion(3, "[L_m, L_n] = (m-n) L_(m+n), 1 <= m,n <= 6, index 12", Duration::from_secs(10), || {
        let t = Truncation::new(UNBOUNDED, 12, 0, 1, 0);
        pairings().iter().map(|p| virasoro::verify_brackets(6, p, t).unwrap()).collect()
    });
}

#[test]
fn criterion_04_hodge_split() {
    criterion(4, "exp(W) = exp(B) exp(hQ^W/2) exp(P), degree 3, index 8, omega 4, hbar 2", Duration::from_secs(120), || {
        let t = Truncation::new(3, 8, 0, 2, 4);
        pairings().iter().map(|p| hodge::verify_hodge_split(p, t).unwrap()).collect()
    });
}

#[test]
fn criterion_05_hat_t() {
    criterion(5, "hat-t closed form and generating identity, n <= 8", Duration::from_secs(5), || {
        let t = Truncation::new(1, 8, 0, 0, 8);
        pairings().iter().map(|p| hodge::verify_hat_t(p, t, 8).unwrap()).collect()
    });
}

#[test]
fn criterion_06_scaling() {
    criterion(6, "Q_u = u^2 Q^B(u^2 x, u^2 y) and u^2i C_i = R_i|u, degree 10", Duration::from_secs(5), || {
        vec![pipeline::verify_scaling(10).unwrap()]
    });
}

#[test]
fn criterion_07_virasoro_zassenhaus() {
    criterion(7, "exp(sum a_m u^m L_m) = exp(X+) exp(hQ+/2), Q+odd = Delta(Q+odd^pt), q-degree 3, u 6", Duration::from_secs(60), || {
        let t = Truncation::new(3, 7, 6, 2, 0);
        pairings()
            .iter()
            .map(|p| virasoro::verify_zassenhaus_virasoro(&VirasoroBundle::build(p, t).unwrap()).unwrap())
            .collect()
    });
}

#[test]
fn criterion_08_e_x_on_q() {
    criterion(8, "exp(X+) q_(2n+1) closed form, n <= 5, u <= 10", Duration::from_secs(10), || {
        let t = Truncation::new(1, 11, 10, 0, 0);
        pairings()
            .iter()
            .map(|p| virasoro::verify_e_x_on_q(&VirasoroBundle::build(p, t).unwrap(), 5).unwrap())
            .collect()
    });
}

#[test]
fn criterion_09_intertwine() {
    criterion(9, "intertwining relation on t_n (n <= 6) and 10 random G of degree <= 2", Duration::from_secs(60), || {
        let t = Truncation::new(2, 6, 6, 0, 0);
        pairings()
            .iter()
            .map(|p| {
                let f = hodge::HodgeFactors::from_u(p, t).unwrap();
                let b = VirasoroBundle::build(p, q_window(t)).unwrap();
                let inputs = pipeline::intertwine_inputs(p.rank(), t, 6, 10, 61);
                pipeline::verify_intertwine(&inputs, &f, &b, p, t).unwrap()
            })
            .collect()
    });
}

#[test]
fn criterion_10_theorem() {
    criterion(10, "main identity: DVV point series and 10 random Z over hyperbolic2", Duration::from_secs(300), || {
        let point = pipeline::verify_theorem_point(2, Truncation::new(4, 8, 6, 1, 0)).unwrap();
        let h = PairingData::hyperbolic2();
        let t = Truncation::new(3, 8, 4, 2, 0);
        let random = pipeline::verify_theorem(&pipeline::random_inputs(2, t, 10, 2024), &h, t).unwrap();
        let ops = pipeline::verify_theorem_operators(&h, &VirasoroBundle::build(&h, q_window(t)).unwrap(), t).unwrap();
        vec![point, random, ops]
    });
}

#[test]
fn criterion_11_witten() {
    criterion(11, "string and dilaton on 50 random keys with g <= 3, <tau_1>_1 = 1/24", Duration::from_secs(5), || {
        let mut r = Report::new("witten", "point", Truncation::unbounded());
        r.compare_values("<tau_1>_1", &witten::correlator(1, &[1]), &rat(1, 24));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut done = 0;
        while done < 50 {
            let g = rng.gen_range(0..=3u32);
            let n = rng.gen_range(1..=4usize);
            let keys = witten::keys(g, n, 3 * g + n as u32);
            if keys.is_empty() {
                continue;
            }
            let key = &keys[rng.gen_range(0..keys.len())];
            done += 1;

            let mut with0 = key.insertions.clone();
            with0.push(0);
            let mut string = Rational::zero();
            for i in 0..key.insertions.len() {
                if key.insertions[i] > 0 {
                    let mut v = key.insertions.clone();
                    v[i] -= 1;
                    string += witten::correlator(g, &v);
                }
            }
            r.compare_values(&format!("string {key:?}"), &witten::correlator(g, &with0), &string);

            let mut with1 = key.insertions.clone();
            with1.push(1);
            let dilaton = int(2 * g as i64 - 2 + n as i64) * witten::intersection(&CorrelatorKey::new(g, key.insertions.clone()));
            r.compare_values(&format!("dilaton {key:?}"), &witten::correlator(g, &with1), &dilaton);
        }
        vec![r]
    });
}
