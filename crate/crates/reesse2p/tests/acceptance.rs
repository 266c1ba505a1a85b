//! Acceptance gate: one test per release criterion, each printing a single
//! PASS line with its measured evidence (run with `--nocapture` to see them).

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use reesse2p::analysis::lattice::{self, Manner};
use reesse2p::analysis::lever;
use reesse2p::analysis::mitm::{mitm_attack, mitm_budget};
use reesse2p::analysis::attack_cost_report;
use reesse2p::codec;
use reesse2p::cost;
use reesse2p::keyforge::{keygen, keygen_default, KeygenConfig, Profile};
use reesse2p::sequence::{self, BitBlock};

#[test]
fn criterion_1_roundtrip() {
    let mut rng = ChaCha20Rng::seed_from_u64(101);
    let mut toy_pairs = 0u32;
    for (n, pairs) in [(8usize, 334u32), (16, 333), (24, 333)] {
        for _ in 0..pairs {
            let (public, private) = keygen_default(n, Profile::Toy, &mut rng).unwrap();
            let block = BitBlock::random_nonzero(n, &mut rng);
            let cipher = codec::encrypt(&public, &block).unwrap();
            let back = codec::decrypt_checked(&private, &public, &cipher).unwrap();
            assert_eq!(back, block, "toy roundtrip failed at n={n}");
            toy_pairs += 1;
        }
    }
    assert_eq!(toy_pairs, 1000);

    let mut worst = Duration::ZERO;
    for _ in 0..10 {
        let (public, private) = keygen_default(120, Profile::Full, &mut rng).unwrap();
        let block = BitBlock::random_nonzero(120, &mut rng);
        let cipher = codec::encrypt(&public, &block).unwrap();
        let start = Instant::now();
        let back = codec::decrypt_checked(&private, &public, &cipher).unwrap();
        let elapsed = start.elapsed();
        worst = worst.max(elapsed);
        assert_eq!(back, block, "full roundtrip failed");
        assert!(elapsed < Duration::from_secs(10), "decrypt took {elapsed:?}");
    }
    println!(
        "criterion 1 PASS: 1000/1000 toy roundtrips (n=8,16,24) and 10/10 full \
         roundtrips at n=120, worst decrypt {worst:?} < 10 s"
    );
}

#[test]
fn criterion_2_sequence_properties() {
    let mut rng = ChaCha20Rng::seed_from_u64(102);
    let n = 12usize;
    for trial in 0..100 {
        let s = sequence::generate(n, &mut rng, true).unwrap();
        let t = s.terms();
        assert!(sequence::validate(t).unwrap(), "inequality failed, trial {trial}");
        assert!(t.iter().all(Integer::is_even), "odd term, trial {trial}");
        // Property 1: (k+1) A_i > sum_{j<i} (k+i-j) A_j for k <= 10
        for k in 1u64..=10 {
            for i in 1..n {
                let lhs = &t[i] * (k + 1);
                let rhs: BigUint = (0..i).map(|j| &t[j] * (k + (i - j) as u64)).sum();
                assert!(lhs > rhs, "property 1 failed, trial {trial}, i={i}, k={k}");
            }
        }
        // Property 2 plus greedy inversion, exhaustive over all 2^12 blocks
        assert!(sequence::all_sums_distinct(&s).unwrap(), "sum collision, trial {trial}");
        let tables = sequence::precompute_tables(&s);
        for mask in 1u64..1 << n {
            let block = BitBlock::from_mask(mask, n);
            let e = sequence::eval_subset_sum(t, &block).unwrap();
            let back = sequence::greedy_decode(&e, &s, &tables);
            assert_eq!(back.as_ref(), Some(&block), "greedy failed, trial {trial}, mask {mask}");
        }
    }
    println!(
        "criterion 2 PASS: 100 sequences at n=12 satisfy the inequality, evenness, \
         property 1 (k<=10), property 2, and exhaustive greedy inversion over 2^12 blocks"
    );
}

#[test]
fn criterion_3_cost_table_regression() {
    let a = cost::reesse2p_costs(120, 192.0, 1.0, 36);
    assert_eq!((a.lpvtk, a.lpubk, a.lciph), (11508, 23040, 192));
    assert_eq!(a.abo_dec, 204_120_000);
    assert_eq!(a.abo_enc, 46_080);
    let b = cost::reesse2p_costs(176, 281.6, 1.6, 68);
    assert_eq!((b.lpvtk, b.lpubk, b.lciph), (24856, 49562, 282));
    assert_eq!(b.abo_dec, 887_319_910);
    assert_eq!(b.abo_enc, 99_123);

    let e1 = cost::ecc_costs(160, 36);
    assert_eq!((e1.abo_enc, e1.abo_dec), (165_121_600, 82_947_200));
    let e2 = cost::ecc_costs(224, 68);
    assert_eq!((e2.abo_enc, e2.abo_dec), (452_088_000, 226_800_000));

    let n1 = cost::ntru_costs(251, 8, 36);
    assert_eq!((n1.abo_enc, n1.abo_dec), (65_789_108, 131_578_216));
    let n2 = cost::ntru_costs(347, 9, 68);
    assert_eq!((n2.abo_enc, n2.abo_dec), (172_574_204, 345_148_408));

    let rendered = cost::render_tables();
    for quoted in ["51,840", "111,514"] {
        assert!(rendered.contains(quoted), "discrepancy note must mention {quoted}");
    }
    println!(
        "criterion 3 PASS: all 14 reference table cells exact (tolerance 0); encrypt \
         cells 46,080 / 99,123 carry the documented discrepancy note"
    );
}

#[test]
fn criterion_4_outer_loop_enumeration() {
    let twelve = cost::ubar_enumerate(3).unwrap();
    let twentyfive = cost::ubar_enumerate(4).unwrap();
    assert_eq!(twelve, rat(12));
    assert_eq!(twentyfive, rat(25));
    let u3 = cost::ubar_expected(3);
    assert_eq!(u3.umin, rat(10));
    assert_eq!(u3.umax, rat(14));
    println!(
        "criterion 4 PASS: exact enumeration gives 12 (n=3) and 25 (n=4); closed \
         forms give Umin=10, Umax=14 at n=3"
    );
}

fn rat(v: i64) -> num_rational::BigRational {
    num_rational::BigRational::from_integer(BigInt::from(v))
}

#[test]
fn criterion_5_lattice_example() {
    let start = Instant::now();
    let weights: Vec<BigUint> = [211u32, 122, 300].iter().map(|&v| BigUint::from(v)).collect();
    let target = BigUint::from(1177u32);
    let scale = BigUint::from(2u32);
    let basis = lattice::build_basis(&weights, &target, &scale, Manner::Plain).unwrap();

    let long: Vec<BigInt> = [3, 2, 1, 0].iter().map(|&v| BigInt::from(v)).collect();
    let short: Vec<BigInt> = [2, -1, -1, 0].iter().map(|&v| BigInt::from(v)).collect();
    assert!(basis.contains(&long).is_some(), "(3,2,1,0) not in the lattice");
    assert!(basis.contains(&short).is_some(), "(2,-1,-1,0) not in the lattice");
    assert_eq!(lattice::l2_norm_sq(&long), BigInt::from(14));
    assert_eq!(lattice::l2_norm_sq(&short), BigInt::from(6));
    assert!(lattice::l2_norm_sq(&long) > lattice::l2_norm_sq(&short));
    assert_eq!(lattice::linf_norm(&long), BigInt::from(3));
    assert_eq!(lattice::linf_norm(&short), BigInt::from(2));

    let res = lattice::lattice_attack(
        &weights,
        &target,
        Manner::ExtendedCoeff,
        &lattice::default_delta(),
        2,
    )
    .unwrap();
    let want: Vec<BigInt> =
        [1, 0, 0, 1, 0, 1].iter().map(|&v| BigInt::from(v)).collect();
    let found = res
        .solutions
        .iter()
        .any(|s| *s == want || s.iter().zip(&want).all(|(a, b)| *a == -b));
    assert!(found, "extended-coeff attack missed (1,0,0,1,0,1): {:?}", res.solutions);
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!(
        "criterion 5 PASS: plain lattice holds (3,2,1,0) and (2,-1,-1,0) with \
         l2 14 > 6 and linf 3 > 2; extended-coeff basis yields (1,0,0,1,0,1); \
         total {elapsed:?} < 1 s"
    );
}

#[test]
fn criterion_6_mitm_and_cost_report() {
    let mut rng = ChaCha20Rng::seed_from_u64(106);
    let n = 16usize;
    for trial in 0..50 {
        let (public, _) = keygen_default(n, Profile::Toy, &mut rng).unwrap();
        let block = BitBlock::random_nonzero(n, &mut rng);
        let cipher = codec::encrypt(&public, &block).unwrap();
        let budget = mitm_budget(n);
        let res = mitm_attack(&public, &cipher, budget).unwrap();
        assert!(res.success, "attack failed on trial {trial}");
        assert!(res.work <= budget);
        let found = res.block.unwrap();
        // any block that re-encrypts to the ciphertext counts as recovery
        assert_eq!(codec::encrypt(&public, &found).unwrap().ebar, cipher.ebar);
    }
    let report = attack_cost_report(120, 192);
    assert_eq!(report.mitm_log2, 80);
    assert_eq!(report.slll_log2, 102);
    println!(
        "criterion 6 PASS: 50/50 toy MITM recoveries at n=16 within the \
         2^(n/2)(n(n+1)/2+1) budget; cost report gives log2 80 (MITM) and 102 (SLLL)"
    );
}

#[test]
fn criterion_7_lever_diagnostics() {
    let mut rng = ChaCha20Rng::seed_from_u64(107);
    for trial in 0..100 {
        let mut cfg = KeygenConfig::new(8, Profile::Toy).with_debug();
        cfg.constant_lever = Some(7);
        let (public, private) = keygen(&cfg, &mut rng).unwrap();
        let report = lever::constant_lever_diagnostic(&public, &private).unwrap();
        assert!(report.identity_holds, "constant-lever identity broke, trial {trial}");
    }
    for trial in 0..100 {
        let cfg = KeygenConfig::new(8, Profile::Toy).with_debug();
        let (public, private) = keygen(&cfg, &mut rng).unwrap();
        let report = lever::constant_lever_diagnostic(&public, &private).unwrap();
        assert!(
            !report.identity_holds,
            "injective lever unexpectedly satisfied the identity, trial {trial}"
        );
        assert!(report.first_violation.is_some());
    }
    let (public, original) = {
        let cfg = KeygenConfig::new(3, Profile::Toy).with_debug();
        keygen(&cfg, &mut rng).unwrap()
    };
    let witness = lever::lever_oracle_search(&public, Some(&original), 2_000_000, &mut rng)
        .unwrap()
        .expect("no alternative witness found on the n=3 micro key");
    println!(
        "criterion 7 PASS: constant-lever identity 100/100, injective violation \
         100/100, micro witness found after {} attempts",
        witness.attempts_used
    );
}

#[test]
fn criterion_8_full_profile_keygen() {
    let mut rng = ChaCha20Rng::seed_from_u64(108);
    let n = 120usize;
    // n^3 * 2^(n/2)
    let h_floor = BigUint::from(n as u64).pow(3) << 60;
    for trial in 0..100 {
        let cfg = KeygenConfig::new(n, Profile::Full).with_debug();
        let (public, private) = keygen(&cfg, &mut rng).unwrap();
        let m = public.m.value();
        let bits = m.bits();
        assert!((191..=240).contains(&bits), "bitlength {bits} out of window, trial {trial}");
        let sigma: BigUint = private
            .a
            .terms()
            .iter()
            .enumerate()
            .map(|(i, a)| a * (n - i) as u64)
            .sum();
        assert!(*m > sigma, "modulus not above the weighted sum, trial {trial}");
        let debug = private.debug.as_ref().unwrap();
        assert!(debug.w.gcd(m).is_one(), "W shares a factor with M, trial {trial}");
        let h = m / debug.z.gcd(m);
        assert!(h >= h_floor, "cofactor too small, trial {trial}");
        assert!(reesse2p::numeric::is_probable_prime(&h, 32, &mut rng));
    }
    println!(
        "criterion 8 PASS: 100/100 full keys at n=120 have bitlength(M) in [191,240], \
         M > weighted sum, gcd(W,M)=1, and prime cofactor M/gcd(M,Z) >= n^3 2^60"
    );
}

#[test]
fn criterion_9_uniqueness_trend() {
    let mut rng = ChaCha20Rng::seed_from_u64(109);
    let n = 12usize;
    let trials = 10_000u64;

    // degenerate cofactor h = 2: collisions in the candidate-k sweep abound
    let mut weak_cfg = KeygenConfig::new(n, Profile::Toy).with_debug();
    weak_cfg.cofactor_override = Some(BigUint::from(2u32));
    let (weak_pub, weak_prv) = keygen(&weak_cfg, &mut rng).unwrap();
    let weak = codec::uniqueness_experiment(&weak_prv, &weak_pub, trials, &mut rng).unwrap();

    let (strong_pub, strong_prv) = keygen_default(n, Profile::Toy, &mut rng).unwrap();
    let strong =
        codec::uniqueness_experiment(&strong_prv, &strong_pub, trials, &mut rng).unwrap();

    assert!(
        weak.fraction() > strong.fraction(),
        "expected the h=2 key to collide more: weak {} vs strong {}",
        weak.fraction(),
        strong.fraction()
    );
    assert!(weak.fraction() > 0.01, "h=2 key barely collides: {}", weak.fraction());
    assert!(strong.fraction() < 0.01, "normal key collides too much: {}", strong.fraction());
    println!(
        "criterion 9 PASS: ambiguity rate over 10^4 trials at n=12 falls from {:.4} \
         (cofactor 2) to {:.4} (normal cofactor); full-scale 2^80 claims are covered \
         by the property suites, not reproduced",
        weak.fraction(),
        strong.fraction()
    );
}
