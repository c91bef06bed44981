use super::*;
use std::str::FromStr;

/// Exact rational from a decimal literal like "35.0035959929".
fn dec(s: &str) -> BigRational {
    match s.split_once('.') {
        None => BigRational::from(BigInt::from_str(s).unwrap()),
        Some((int, frac)) => {
            let scale = BigInt::from(10u32).pow(frac.len() as u32);
            let num = BigInt::from_str(&format!("{int}{frac}")).unwrap();
            BigRational::new(num, scale)
        }
    }
}

fn assert_in(v: &UpperReal, lo: &str, hi: &str) {
    let q = v.to_rational();
    assert!(q > dec(lo) && q < dec(hi), "{} not in ({lo}, {hi})", v);
}

fn p2() -> BigUint {
    BigUint::from(2u32)
}

fn q2() -> LocalField {
    LocalField::qp(2).unwrap()
}

#[test]
fn thm1_example_integers() {
    // desk evaluation at 50 digits: 1, 3, 35.0035959929…, 50195.7271163…,
    // 6471489.8481415…
    let floors = [1u64, 3, 35, 50195, 6471489];
    for (sigma, want) in floors.iter().enumerate() {
        let r = thm1_bound(&p2(), 1, sigma as u32, 96).unwrap();
        assert_eq!(r.floor_u64(), Some(*want), "sigma={sigma}");
    }
    let r = thm1_bound(&p2(), 1, 2, 96).unwrap();
    assert_in(&r.real_value, "35.003595992906080", "35.003595992906081");
    let r = thm1_bound(&p2(), 1, 3, 96).unwrap();
    assert_in(&r.real_value, "50195.727116316723", "50195.727116316724");
    let r = thm1_bound(&p2(), 1, 4, 96).unwrap();
    assert_in(&r.real_value, "6471489.848141537", "6471489.848141538");
}

#[test]
fn thm1_relative_excess_tiny() {
    // doubling the precision moves the upper value by less than 2^-64 relative
    let coarse = thm1_bound(&p2(), 1, 4, 96).unwrap().real_value.to_rational();
    let fine = thm1_bound(&p2(), 1, 4, 192).unwrap().real_value.to_rational();
    assert!(fine <= coarse);
    let rel = (&coarse - &fine) / &fine;
    let eps = BigRational::new(BigInt::one(), BigInt::from(2u32).pow(64));
    assert!(rel < eps);
}

#[test]
fn thm2_values() {
    assert_eq!(thm2_bound(1, 1, 0, 96).unwrap().floor_u64(), Some(1));
    let r = thm2_bound(1, 1, 1, 96).unwrap();
    assert_eq!(r.floor_u64(), Some(37));
    assert_in(&r.real_value, "37.805827756482718", "37.805827756482719");
    let r = thm2_bound(1, 1, 2, 96).unwrap();
    assert_eq!(r.floor_u64(), Some(15704));
    // monotone in sigma
    let r3 = thm2_bound(1, 1, 3, 96).unwrap();
    assert!(r3.real_value.to_rational() > r.real_value.to_rational());
}

#[test]
fn amd_local_values() {
    let r = amd_local_b(&q2(), &[1], &[1], 96).unwrap();
    assert_eq!(r.floor_u64(), Some(0));
    let r = amd_local_b(&q2(), &[2], &[1], 96).unwrap();
    assert_in(&r.real_value, "9.673891168975734", "9.673891168975735");
    assert_eq!(r.floor_u64(), Some(9));
    // desk evaluation of c·2·6·(1+log₂(2/log 2)) — floor 48, consistent with
    // the exact B(Q₂,3,1) = 6 well below it
    let r = amd_local_b(&q2(), &[3], &[1], 96).unwrap();
    assert_in(&r.real_value, "48.005393989359120", "48.005393989359121");
    assert!(r.floor_u64().unwrap() >= 6);
}

#[test]
fn amd_global_values() {
    let spec = GlobalField::new(1, 1).unwrap();
    assert_eq!(amd_global_a(&spec, &[1], &[1], 96).unwrap().floor_u64(), Some(0));
    let r = amd_global_a(&spec, &[2], &[1], 96).unwrap();
    assert_in(&r.real_value, "26.039751020948327", "26.039751020948328");
    // product structure: A([2,2],[1,1]) = A([2],[1])²/2 exactly
    let a1 = amd_global_a_value(&spec, &[2], &[1], 96).unwrap();
    let a2 = amd_global_a_value(&spec, &[2, 2], &[1, 1], 96).unwrap();
    let half_sq = a1.mul(&a1).scale(&BigRational::new(BigInt::one(), BigInt::from(2)));
    assert_eq!(a2, half_sq);
    let r2 = amd_global_a(&spec, &[2, 2], &[1, 1], 96).unwrap();
    assert_in(&r2.real_value, "339.03431661648972", "339.03431661648973");
}

#[test]
fn lenstra_values() {
    assert_eq!(lenstra_local(&q2(), 1, 96).unwrap().floor_u64(), Some(0));
    let r = lenstra_local(&q2(), 3, 96).unwrap();
    assert_in(&r.real_value, "16.001797996453040", "16.001797996453041");
    assert!(r.floor_u64().unwrap() >= 6);
    let g = GlobalField::new(1, 1).unwrap();
    assert_eq!(lenstra_global(&g, 1, 96).unwrap().floor_u64(), Some(0));
    let r = lenstra_global(&g, 2, 96).unwrap();
    assert_in(&r.real_value, "36.805827756482718", "36.805827756482719");
}

#[test]
fn sharpened_q2_bounds() {
    let r = thm1_sharpened(&q2(), 0, B3Source::Auto, 96).unwrap();
    assert_eq!(r.floor_u64(), Some(1));
    let r = thm1_sharpened(&q2(), 1, B3Source::Auto, 96).unwrap();
    assert_eq!(r.floor_u64(), Some(3));
    let r = thm1_sharpened(&q2(), 2, B3Source::Exact(BigRational::from(BigInt::from(6))), 96)
        .unwrap();
    assert_eq!(r.floor_u64(), Some(15));
    assert_eq!(r.real_value.to_rational(), BigRational::from(BigInt::from(15)));
    // auto consults the override table for Q2
    let auto = thm1_sharpened(&q2(), 2, B3Source::Auto, 96).unwrap();
    assert_eq!(auto.floor_u64(), Some(15));
    // forcing the product formula gives the looser value
    let amd = thm1_sharpened(&q2(), 2, B3Source::Amd, 96).unwrap();
    assert!(amd.floor_u64().unwrap() > 15);
}

#[test]
fn roots_of_unity_values() {
    for (p, want) in [(2u32, 2u64), (3, 3), (5, 5)] {
        let spec = LocalField::qp(p).unwrap();
        let r = roots_of_unity_bound(&spec, 96).unwrap();
        assert_eq!(r.floor_u64(), Some(want), "p={p}");
        assert_eq!(r.real_value.to_rational(), BigRational::from(BigInt::from(want)));
    }
    // ramified example: Q2 with e=2: 2·2·1/1 = 4
    let spec = LocalField::new(p2(), 2, 1).unwrap();
    assert_eq!(roots_of_unity_bound(&spec, 96).unwrap().floor_u64(), Some(4));
}

#[test]
fn risler_exact_integers() {
    let expected = [
        "4",
        "20736",
        "274877906944",
        "5497558138880000000000",
        "126315281744229461505151771531542528",
    ];
    for (sigma, want) in expected.iter().enumerate() {
        assert_eq!(risler_real_value(sigma as u32).to_string(), *want);
        let r = risler_real(sigma as u32, 96).unwrap();
        assert_eq!(r.integer_value.to_string(), *want);
    }
}

#[test]
fn abstract_rational_values() {
    assert_eq!(abstract_rational_value(0), dec("15"));
    assert_eq!(abstract_rational_value(1), dec("39.01"));
    // 15 + 4·(2401/100)²·2 = 15 + 46118408/10000
    assert_eq!(abstract_rational_value(2), dec("4626.8408"));
    let r = abstract_rational_bound(2, 96).unwrap();
    assert_eq!(r.floor_u64(), Some(4626));
}

#[test]
fn tau_trivial_and_tower() {
    assert_eq!(tau_trivial_value(3), BigUint::from(8u32));
    let one = BigRational::one();
    assert_eq!(
        borodin_cook_tower(1, &one).unwrap(),
        TowerBound::Exact(BigUint::from(2u32))
    );
    assert_eq!(
        borodin_cook_tower(2, &one).unwrap(),
        TowerBound::Exact(BigUint::from(16u32))
    );
    // σ=3: 2^(2^(2^3)) = 2^256
    match borodin_cook_tower(3, &one).unwrap() {
        TowerBound::Exact(v) => assert_eq!(v, BigUint::from(2u32).pow(256)),
        other => panic!("expected exact, got {other:?}"),
    }
    // σ=4: 2^(2^65536) exceeds the 10^6-digit cap
    match borodin_cook_tower(4, &one).unwrap() {
        TowerBound::Overflow {
            approx_digits,
            remaining_levels,
            symbolic,
        } => {
            assert_eq!(remaining_levels, 0);
            assert_eq!(symbolic, "2^2^2^2^4");
            // ≈ 2^65536·log10(2) ≈ 1.9728e19727 digits
            assert!(approx_digits > BigUint::from(10u32).pow(19000));
        }
        other => panic!("expected overflow, got {other:?}"),
    }
    // fractional K: ⌈3/2·3⌉ = 5 at σ=3 → 2^(2^32)
    let k = BigRational::new(BigInt::from(3), BigInt::from(2));
    match borodin_cook_tower(3, &k).unwrap() {
        TowerBound::Exact(v) => assert_eq!(v, BigUint::from(2u32).pow(1 << 5)),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn thm1_equals_envelope_assembly_exactly() {
    // the closed univariate formula is the n=1, r₁=0 assembly over the
    // envelope B-terms, bit for bit
    for (p, d) in [(2u32, 1u32), (2, 2), (3, 1), (5, 1), (3, 2)] {
        let p = BigUint::from(p);
        let spec = LocalField::new(p.clone(), 1, d).unwrap();
        for sigma in 0..=4 {
            let direct = thm1_value(&p, d, sigma, 96).unwrap();
            let assembled =
                thm3_local_value(1, sigma, &spec, BTerms::Envelope, Thm3Variant::Proof, 96)
                    .unwrap();
            assert_eq!(direct, assembled, "p={p} d={d} sigma={sigma}");
        }
    }
}

#[test]
fn thm2_equals_envelope_assembly_exactly() {
    for (d, delta) in [(1u32, 1u32), (1, 2), (2, 1)] {
        let spec = GlobalField::new(d, delta).unwrap();
        for sigma in 0..=4 {
            let direct = thm2_value(&spec, sigma, 96).unwrap();
            let assembled =
                thm3_global_value(1, sigma, &spec, BTerms::Envelope, Thm3Variant::Proof, 96)
                    .unwrap();
            assert_eq!(direct, assembled, "d={d} delta={delta} sigma={sigma}");
        }
    }
}

#[test]
fn thm3_statement_vs_proof_differ_by_one_at_n1() {
    let spec = q2();
    for sigma in 2..=4 {
        let st = thm3_local_value(1, sigma, &spec, BTerms::Amd, Thm3Variant::Statement, 96)
            .unwrap();
        let pr = thm3_local_value(1, sigma, &spec, BTerms::Amd, Thm3Variant::Proof, 96).unwrap();
        let diff = st.sub(&pr);
        assert_eq!(diff.lo, BigRational::one());
        assert_eq!(diff.hi, BigRational::one());
    }
}

#[test]
fn thm3_n2_sigma2_desk_value() {
    // 1 + B + (1 + B·B₃) with the AMD product terms (overrides off):
    // desk evaluation 476.072848145837…
    let r = thm3_local(2, 2, &q2(), BTerms::AmdNoOverrides, Thm3Variant::Statement, 96).unwrap();
    assert_in(&r.real_value, "476.07284814583774", "476.07284814583775");
}

#[test]
fn thm3_ill_formed_type_vector() {
    let spec = q2();
    match thm3_local(4, 3, &spec, BTerms::Amd, Thm3Variant::Statement, 96) {
        Err(BoundsError::IllFormedTypeVector { ell: 3, n: 4 }) => {}
        other => panic!("expected IllFormedTypeVector, got {other:?}"),
    }
}

#[test]
fn thm3_trivial_cases() {
    for n in [1u32, 2, 3] {
        let r = thm3_local(n, 0, &q2(), BTerms::Amd, Thm3Variant::Statement, 96).unwrap();
        assert_eq!(r.floor_u64(), Some(1), "n={n}");
    }
}

#[test]
fn monotonicity_over_parameter_grid() {
    // every bound nondecreasing in σ, m, d, δ: > 200 adjacent comparisons
    let mut checks = 0usize;
    for p in [2u32, 3, 5] {
        let p = BigUint::from(p);
        for d in 1..=3u32 {
            let mut prev: Option<BigRational> = None;
            for sigma in 0..=5u32 {
                let v = thm1_value(&p, d, sigma, 96).unwrap().hi;
                if let Some(pv) = prev {
                    assert!(v >= pv, "thm1 σ-monotonicity p={p} d={d} σ={sigma}");
                    checks += 1;
                }
                prev = Some(v);
            }
        }
        // d-monotonicity at fixed sigma
        for sigma in 0..=4u32 {
            let mut prev: Option<BigRational> = None;
            for d in 1..=3u32 {
                let v = thm1_value(&p, d, sigma, 96).unwrap().hi;
                if let Some(pv) = prev {
                    assert!(v >= pv, "thm1 d-monotonicity p={p} σ={sigma} d={d}");
                    checks += 1;
                }
                prev = Some(v);
            }
        }
    }
    for d in 1..=2u32 {
        for delta in 1..=2u32 {
            let spec = GlobalField::new(d, delta).unwrap();
            let mut prev: Option<BigRational> = None;
            for sigma in 0..=4u32 {
                let v = thm2_value(&spec, sigma, 96).unwrap().hi;
                if let Some(pv) = prev {
                    assert!(v >= pv, "thm2 σ-monotonicity");
                    checks += 1;
                }
                prev = Some(v);
            }
        }
    }
    // m-monotonicity of the m-term and product bounds
    for p in [2u32, 3, 5] {
        let spec = LocalField::qp(p).unwrap();
        let mut prev: Option<BigRational> = None;
        for m in 1..=8u64 {
            let v = lenstra_local_value(&spec, m, 96).unwrap().hi;
            if let Some(pv) = prev {
                assert!(v >= pv, "lenstra_local m-monotonicity p={p} m={m}");
                checks += 1;
            }
            prev = Some(v);
            let b = amd_local_b_value(&spec, &[m], &[1], 96).unwrap().hi;
            let b2 = amd_local_b_value(&spec, &[m + 1], &[1], 96).unwrap().hi;
            assert!(b2 >= b, "amd m-monotonicity");
            checks += 1;
        }
    }
    for delta in 1..=3u32 {
        let s1 = GlobalField::new(1, delta).unwrap();
        let s2 = GlobalField::new(1, delta + 1).unwrap();
        for m in 2..=6u64 {
            let a = lenstra_global_value(&s1, m, 96).unwrap().hi;
            let b = lenstra_global_value(&s2, m, 96).unwrap().hi;
            assert!(b >= a, "lenstra_global δ-monotonicity");
            checks += 1;
        }
    }
    assert!(checks >= 200, "only {checks} grid comparisons");
}

#[test]
fn truncation_rule() {
    // σ ≤ 2 values are the partial sums; the j ≥ 3 terms strictly increase
    let t2 = thm1_value(&p2(), 1, 2, 96).unwrap().hi;
    let t3 = thm1_value(&p2(), 1, 3, 96).unwrap().hi;
    assert!(t3 > t2);
    let u2 = thm2_value(&GlobalField::new(1, 1).unwrap(), 2, 96).unwrap().hi;
    let u3 = thm2_value(&GlobalField::new(1, 1).unwrap(), 3, 96).unwrap().hi;
    assert!(u3 > u2);
}

#[test]
fn report_json_shape() {
    let r = thm1_bound(&p2(), 1, 4, 96).unwrap();
    let j = r.to_json();
    assert_eq!(j["name"], "thm1");
    assert_eq!(j["floor"].to_string(), "6471489");
    assert!(j["real_upper"].as_str().unwrap().starts_with("6471489.8481"));
    assert!(j["citation"].is_string());
    // huge floors survive exactly
    let r = risler_real(4, 96).unwrap();
    assert_eq!(
        r.to_json()["floor"].to_string(),
        "126315281744229461505151771531542528"
    );
}

#[test]
fn invalid_inputs_rejected() {
    assert!(LocalField::new(BigUint::from(4u32), 1, 1).is_err());
    assert!(LocalField::new(p2(), 0, 1).is_err());
    assert!(GlobalField::new(0, 1).is_err());
    assert!(thm1_bound(&BigUint::from(10u32), 1, 1, 96).is_err());
    assert!(amd_local_b(&q2(), &[2, 3], &[1], 96).is_err());
    assert!(borodin_cook_tower(0, &BigRational::one()).is_err());
}
