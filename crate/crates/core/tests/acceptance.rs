//! Exit criteria. Each criterion prints one PASS/FAIL line; the test fails if
//! any criterion fails.
//!
//! Run with `cargo test -p qqm-core --test acceptance -- --nocapture`.

use std::time::{Duration, Instant};

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qqm::chsh::{chsh_value, lhv_optimum, tsirelson_bound, CLASSICAL_BOUND};
use qqm::commcomplex::{verify_exhaustive, verify_sampled, BooleanFunction, VanDam};
use qqm::nlbox::{
    classical_box, complex_quantum_box, ideal_pr_box, noisy_box, quaternionic_box, BitMap,
    ComplexQuantumBox, INPUTS,
};
use qqm::qlinalg::{QMatrix, QVector};
use qqm::qsystem::{self, gates, Register, ScheduledOp, Tick};
use qqm::{BoxBehavior, Quat};

struct Outcome {
    id: &'static str,
    name: &'static str,
    failures: Vec<String>,
}

impl Outcome {
    fn new(id: &'static str, name: &'static str) -> Self {
        Self {
            id,
            name,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn perfect_pr_box() -> Outcome {
    let mut o = Outcome::new("AC1", "perfect PR box from the quaternionic protocol");
    let result = chsh_value::<f64>(&quaternionic_box());
    o.check(
        (result.win_probability - 1.0).abs() <= 1e-10,
        format!("win probability {}", result.win_probability),
    );
    for (a, b) in INPUTS {
        let p = result.cell(a, b);
        o.check(
            (p - 1.0).abs() <= 1e-10,
            format!("cell ({a},{b}) wins with {p}"),
        );
    }
    o
}

fn order_dependence() -> Outcome {
    let mut o = Outcome::new("AC2", "R_i/R_j time order selects orthogonal states");
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let start = Register::new(
        2,
        QVector::new(vec![
            Quat::real(s),
            Quat::default(),
            Quat::default(),
            Quat::real(s),
        ])
        .unwrap(),
    )
    .unwrap();
    let alice_then_bob = [
        ScheduledOp::new(Tick(1), 0, gates::r_i()).unwrap(),
        ScheduledOp::new(Tick(2), 1, gates::r_j()).unwrap(),
    ];
    let bob_then_alice = [
        ScheduledOp::new(Tick(2), 0, gates::r_i()).unwrap(),
        ScheduledOp::new(Tick(1), 1, gates::r_j()).unwrap(),
    ];
    let ij = qsystem::run_schedule(&start, &alice_then_bob).unwrap();
    let ji = qsystem::run_schedule(&start, &bob_then_alice).unwrap();

    let minus_k = [
        Quat::real(s),
        Quat::default(),
        Quat::default(),
        -Quat::k().scale(s),
    ];
    let plus_k = [
        Quat::real(s),
        Quat::default(),
        Quat::default(),
        Quat::k().scale(s),
    ];
    for idx in 0..4 {
        o.check(
            ij.amplitude(idx).approx_eq(minus_k[idx], 1e-12),
            format!("R_i then R_j amplitude {idx} = {}", ij.amplitude(idx)),
        );
        o.check(
            ji.amplitude(idx).approx_eq(plus_k[idx], 1e-12),
            format!("R_j then R_i amplitude {idx} = {}", ji.amplitude(idx)),
        );
    }
    let overlap = ij.inner(&ji).unwrap();
    o.check(overlap.norm() <= 1e-12, format!("inner product {overlap}"));
    o
}

fn classical_bound() -> Outcome {
    let mut o = Outcome::new("AC3", "best of 16 deterministic strategies is exactly 0.75");
    let (best, _) = lhv_optimum::<f64>();
    o.check(
        best.win_probability == CLASSICAL_BOUND,
        format!("optimum {}", best.win_probability),
    );
    let mut count = 0;
    for alice in BitMap::ALL {
        for bob in BitMap::ALL {
            count += 1;
            let v = chsh_value::<f64>(&classical_box(alice, bob)).win_probability;
            o.check(v <= 0.75, format!("{alice:?}/{bob:?} wins with {v}"));
        }
    }
    o.check(count == 16, format!("enumerated {count} strategies"));
    o
}

fn cirelson_point() -> Outcome {
    let mut o = Outcome::new("AC4", "complex quantum strategy reaches cos^2(pi/8)");
    let v = chsh_value::<f64>(&complex_quantum_box()).win_probability;
    o.check(
        (v - 0.8535533906).abs() <= 1e-9,
        format!("win probability {v}"),
    );
    o.check(
        (tsirelson_bound::<f64>() - 0.8535533906).abs() <= 1e-9,
        "cos^2(pi/8) constant",
    );
    o
}

fn trivial_communication() -> Outcome {
    let mut o = Outcome::new(
        "AC5",
        "one-bit protocol correct on all inputs for AND, XOR, IP2, IP4 and 20 random functions",
    );
    let started = Instant::now();
    let qbox: BoxBehavior = quaternionic_box();

    let mut functions: Vec<(String, BooleanFunction)> = ["AND", "XOR", "IP2", "IP4"]
        .iter()
        .map(|n| (n.to_string(), BooleanFunction::by_name(n).unwrap()))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for idx in 0..20 {
        let n_alice = rng.gen_range(1..=4);
        let n_bob = rng.gen_range(1..=(8 - n_alice).min(4));
        functions.push((
            format!("random#{idx} ({n_alice}+{n_bob})"),
            BooleanFunction::random(n_alice, n_bob, &mut rng).unwrap(),
        ));
    }

    for (name, f) in &functions {
        o.check(f.n_alice() + f.n_bob() <= 8, format!("{name} too wide"));
        let exact = verify_exhaustive(f, &qbox).unwrap();
        o.check(
            exact.min_success == 1.0,
            format!("{name}: worst exact success {}", exact.min_success),
        );
        o.check(
            exact.bits_bob_to_alice == 1 && exact.bits_alice_to_bob == 0,
            format!(
                "{name}: {} bits Bob->Alice, {} bits Alice->Bob",
                exact.bits_bob_to_alice, exact.bits_alice_to_bob
            ),
        );
        let protocol = VanDam::new(f);
        o.check(
            exact.boxes_used == protocol.anf().mixed_count(),
            format!("{name}: box count"),
        );

        // every input through the sampled protocol as well
        let mut run_rng = ChaCha8Rng::seed_from_u64(1);
        let boxes = vec![qbox.clone(); protocol.boxes_needed()];
        for x in 0..1u32 << f.n_alice() {
            for y in 0..1u32 << f.n_bob() {
                let run = protocol.run(x, y, &boxes, &mut run_rng).unwrap();
                if run.alice_output != f.eval(x, y)
                    || run.bits_bob_to_alice != 1
                    || run.bits_alice_to_bob != 0
                {
                    o.check(false, format!("{name}: wrong on x={x:b}, y={y:b}"));
                }
            }
        }
        let sampled = verify_sampled(f, &qbox, 4, &mut run_rng).unwrap();
        o.check(
            sampled.failing_inputs == 0,
            format!(
                "{name}: {} failing inputs when sampled",
                sampled.failing_inputs
            ),
        );
    }
    let elapsed = started.elapsed();
    o.check(
        elapsed < Duration::from_secs(5),
        format!("took {elapsed:?}"),
    );
    o
}

fn property_suites() -> Outcome {
    let mut o = Outcome::new(
        "AC6",
        "algebra laws, norm preservation, non-signalling, complex commutation",
    );

    let units = Quat::unit_group();
    let (i, j, k) = (Quat::i(), Quat::j(), Quat::k());
    o.check(
        i * j == k && j * i == -k && j * k == i && k * i == j,
        "unit cycle",
    );
    o.check(
        i * i == -Quat::one() && i * j * k == -Quat::one(),
        "defining relations",
    );
    for p in units {
        for q in units {
            o.check(
                (p * q).conj() == q.conj() * p.conj(),
                format!("(pq)* on {p}, {q}"),
            );
            o.check(
                (p * q).norm() == p.norm() * q.norm(),
                format!("norm on {p}, {q}"),
            );
            for r in units {
                o.check(
                    (p * q) * r == p * (q * r),
                    format!("assoc on {p}, {q}, {r}"),
                );
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let rand_quat = |rng: &mut ChaCha8Rng| {
        Quat::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        )
    };
    let mut worst = [0.0f64; 4];
    for _ in 0..1000 {
        let (p, q, r) = (
            rand_quat(&mut rng),
            rand_quat(&mut rng),
            rand_quat(&mut rng),
        );
        worst[0] = worst[0].max(((p * q) * r).max_abs_diff(p * (q * r)));
        worst[1] = worst[1].max((p * q).conj().max_abs_diff(q.conj() * p.conj()));
        worst[2] = worst[2].max(((p * q).norm() - p.norm() * q.norm()).abs());
        let pp = p * p.conj();
        worst[3] = worst[3].max(pp.im().norm().max((pp.w - p.norm_sqr()).abs()));
    }
    for (law, dev) in ["associativity", "conjugation", "norm", "q q*"]
        .iter()
        .zip(worst)
    {
        o.check(dev <= 1e-12, format!("{law} deviation {dev:e}"));
    }

    let unit = |rng: &mut ChaCha8Rng| loop {
        let q = rand_quat(rng);
        if q.norm() > 1e-3 {
            break q.scale(q.norm().recip());
        }
    };
    let mut worst_norm = 0.0f64;
    for _ in 0..1000 {
        let theta = rng.gen_range(-3.2..3.2);
        let u = QMatrix::diag(&[unit(&mut rng), unit(&mut rng)])
            .matmul(&gates::rotation(theta))
            .unwrap()
            .matmul(&QMatrix::diag(&[unit(&mut rng), unit(&mut rng)]))
            .unwrap();
        o.check(u.is_unitary(1e-10).unwrap(), "random U not unitary");
        let v = QVector::new(vec![rand_quat(&mut rng), rand_quat(&mut rng)]).unwrap();
        worst_norm = worst_norm.max((u.matvec(&v).unwrap().norm() - v.norm()).abs());
    }
    o.check(
        worst_norm <= 1e-10,
        format!("norm preservation {worst_norm:e}"),
    );

    let ideal = ideal_pr_box::<f64>();
    let mut boxes: Vec<(String, BoxBehavior)> = vec![
        ("ideal".into(), ideal.clone()),
        ("quaternionic".into(), quaternionic_box()),
        ("complex".into(), complex_quantum_box()),
    ];
    for alice in BitMap::ALL {
        for bob in BitMap::ALL {
            boxes.push((
                format!("classical {alice:?}/{bob:?}"),
                classical_box(alice, bob),
            ));
        }
    }
    for p in [0.5, 0.6, 0.75, 0.9, 1.0] {
        boxes.push((format!("noisy ideal {p}"), noisy_box(&ideal, p).unwrap()));
        boxes.push((
            format!("noisy quaternionic {p}"),
            noisy_box(&quaternionic_box(), p).unwrap(),
        ));
    }
    for (name, b) in &boxes {
        o.check(
            b.is_non_signalling(1e-10),
            format!("{name} signals by {}", b.signalling_deviation()),
        );
    }

    let phase = |t: f64| Quat::new(t.cos(), t.sin(), 0.0, 0.0);
    let mut worst_commute = 0.0f64;
    for _ in 0..200 {
        let mut angles = [0.0; 10];
        angles
            .iter_mut()
            .for_each(|a| *a = rng.gen_range(-3.2..3.2));
        let complex_gate = |a: &[f64]| {
            QMatrix::diag(&[phase(a[0]), phase(a[1])])
                .matmul(&gates::rotation(a[2]))
                .unwrap()
                .matmul(&QMatrix::diag(&[phase(a[3]), phase(a[4])]))
                .unwrap()
        };
        let (ga, gb) = (complex_gate(&angles[..5]), complex_gate(&angles[5..]));
        let amps: Vec<Quat> = (0..4).map(|_| rand_quat(&mut rng)).collect();
        let v = QVector::new(amps).unwrap();
        let n = v.norm();
        let reg = Register::new(2, v.scale_right(Quat::real(n.recip()))).unwrap();
        let fwd = [
            ScheduledOp::new(Tick(1), 0, ga.clone()).unwrap(),
            ScheduledOp::new(Tick(2), 1, gb.clone()).unwrap(),
        ];
        let rev = [
            ScheduledOp::new(Tick(2), 0, ga).unwrap(),
            ScheduledOp::new(Tick(1), 1, gb).unwrap(),
        ];
        let x = qsystem::run_schedule(&reg, &fwd).unwrap();
        let y = qsystem::run_schedule(&reg, &rev).unwrap();
        worst_commute = worst_commute.max(x.state().max_abs_diff(y.state()));
    }
    o.check(
        worst_commute <= 1e-12,
        format!("complex ordering gap {worst_commute:e}"),
    );

    // the optimal quantum strategy itself is order-free
    let shared = qsystem::bell_phi::<f64>(Quat::one()).unwrap();
    for (a, b) in INPUTS {
        let [ga, gb] = ComplexQuantumBox::basis_changes::<f64>(a, b);
        let fwd = [
            ScheduledOp::new(Tick(1), 0, ga.clone()).unwrap(),
            ScheduledOp::new(Tick(2), 1, gb.clone()).unwrap(),
        ];
        let rev = [
            ScheduledOp::new(Tick(2), 0, ga).unwrap(),
            ScheduledOp::new(Tick(1), 1, gb).unwrap(),
        ];
        let x = qsystem::run_schedule(&shared, &fwd).unwrap();
        let y = qsystem::run_schedule(&shared, &rev).unwrap();
        o.check(x.approx_eq(&y, 1e-12), format!("CHSH rotations ({a},{b})"));
    }
    o
}

fn noise_sanity() -> Outcome {
    let mut o = Outcome::new("AC7", "noisy box value equals p; success monotone in p");
    let ideal = ideal_pr_box::<f64>();
    for p in [0.5, 0.75, 0.9, 1.0] {
        let v = chsh_value(&noisy_box(&ideal, p).unwrap()).win_probability;
        o.check(v == p, format!("p = {p}: value {v}"));
    }
    let grid = [0.5, 0.6, 0.7, 0.8, 0.9, 1.0];
    for name in ["AND", "XOR", "IP2", "IP4"] {
        let f = BooleanFunction::by_name(name).unwrap();
        let rates: Vec<f64> = grid
            .iter()
            .map(|&p| {
                verify_exhaustive(&f, &noisy_box(&ideal, p).unwrap())
                    .unwrap()
                    .success_rate
            })
            .collect();
        o.check(
            rates.windows(2).all(|w| w[0] <= w[1]),
            format!("{name}: rates {rates:?}"),
        );
    }
    o
}

#[test]
fn acceptance_criteria() {
    let outcomes = [
        perfect_pr_box(),
        order_dependence(),
        classical_bound(),
        cirelson_point(),
        trivial_communication(),
        property_suites(),
        noise_sanity(),
    ];
    let mut all = true;
    for o in &outcomes {
        let tag = if o.passed() { "PASS" } else { "FAIL" };
        println!("[{tag}] {} {}", o.id, o.name);
        for f in o.failures.iter().take(10) {
            println!("       - {f}");
        }
        all &= o.passed();
    }
    assert!(all, "acceptance criteria failed");
}
