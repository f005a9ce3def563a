use num_bigint::BigInt;
use num_traits::{One, Signed};

use kflip::clifford::{
    cl_invert, conjugate, conjugating_element, omega, torus_element, twisted_projection,
    CliffordElement, QMatrix, QuarterTurn, TorusVariant,
};
use kflip::exact_core::{
    bezout_coeffs, binom, gcd_list, two_adic_split, unimodular_completion, QSqrt2,
};
use kflip::intlinalg::{
    hermite_normal_form, kernel_basis, lattice_equal, quotient_presentation, smith_normal_form,
    IntMatrix,
};
use kflip::koszul::{
    build_koszul, grobner_select, homology_h0, homology_h2, standard_kernel_generators,
    verify_relations, verify_solution_tables, wedge_multiply, RowStatus,
};
use kflip::presentation::{cross_check, Status};
use kflip::repring::{
    build_case, change_of_generators, laurent_oracle, pi_prime_by_expansion, pi_prime_in_b,
    res_delta, res_pi_in_rh, BAlgebra, Case,
};
use kflip::Error;

fn bi(x: i64) -> BigInt {
    BigInt::from(x)
}

fn bis(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| bi(x)).collect()
}

#[test]
fn exact_core_examples() {
    assert_eq!(binom(4, 2), bi(6));
    assert_eq!(binom(7, 0), bi(1));
    assert_eq!(gcd_list(&bis(&[128, 640, 3072])).unwrap(), bi(128));
    assert_eq!(gcd_list(&bis(&[1])).unwrap(), bi(1));
    assert_eq!(gcd_list(&bis(&[0, 6, 9])).unwrap(), bi(3));
    assert_eq!(gcd_list(&[]), Err(Error::UndefinedGcd));
    for xs in [vec![6, 10], vec![5], vec![128, 640, 3072]] {
        let xs = bis(&xs);
        let (g, cs) = bezout_coeffs(&xs).unwrap();
        assert_eq!(g, gcd_list(&xs).unwrap());
        assert_eq!(xs.iter().zip(&cs).map(|(x, c)| x * c).sum::<BigInt>(), g);
    }
    assert_eq!(
        unimodular_completion(&bis(&[1, 0, 0])).unwrap(),
        IntMatrix::identity(3)
    );
    for row in [vec![2, 3], vec![6, 10, 15]] {
        let m = unimodular_completion(&bis(&row)).unwrap();
        assert_eq!(m.row(0), bis(&row).as_slice());
        assert!(m.det().abs().is_one());
    }
    assert_eq!(
        unimodular_completion(&bis(&[2, 4])),
        Err(Error::NotPrimitive)
    );
    assert_eq!(two_adic_split(&bi(128)).unwrap(), (7, bi(1)));
    assert_eq!(two_adic_split(&bi(640)).unwrap(), (7, bi(5)));
    assert_eq!(two_adic_split(&bi(3)).unwrap(), (0, bi(3)));
    assert_eq!(two_adic_split(&bi(0)), Err(Error::ZeroValuation));
}

#[test]
fn intlinalg_examples() {
    let (h, u) = hermite_normal_form(&IntMatrix::identity(3));
    assert_eq!((h, u), (IntMatrix::identity(3), IntMatrix::identity(3)));
    let m = IntMatrix::from_i64(&[&[2, 4], &[0, 3]]);
    let (h, u) = hermite_normal_form(&m);
    assert_eq!(h, IntMatrix::from_i64(&[&[2, 1], &[0, 3]]));
    assert_eq!(&u * &m, h);
    assert!(u.det().abs().is_one());
    let (h, u) = hermite_normal_form(&IntMatrix::zeros(2, 2));
    assert_eq!((h, u), (IntMatrix::zeros(2, 2), IntMatrix::identity(2)));

    let (s, _, _) = smith_normal_form(&IntMatrix::from_i64(&[&[6, 0], &[0, 4]]));
    assert_eq!(s, IntMatrix::from_i64(&[&[2, 0], &[0, 12]]));
    assert_eq!(
        smith_normal_form(&IntMatrix::identity(2)).0,
        IntMatrix::identity(2)
    );
    let z = IntMatrix::from_i64(&[&[2, 0], &[0, 0]]);
    assert_eq!(smith_normal_form(&z).0, z);

    assert_eq!(
        kernel_basis(&IntMatrix::from_i64(&[&[1, 1]])).col_vecs(),
        vec![bis(&[1, -1])]
    );
    let k = kernel_basis(&IntMatrix::from_i64(&[&[2, 4]])).col_vecs();
    assert!(k == vec![bis(&[2, -1])] || k == vec![bis(&[-2, 1])]);
    assert_eq!(kernel_basis(&IntMatrix::identity(2)).ncols(), 0);

    let p = quotient_presentation(
        &IntMatrix::identity(2),
        Some(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]])),
    )
    .unwrap();
    assert_eq!(p.invariant_factors, bis(&[6]));
    assert_eq!(p.to_string(), "Z/6");
    let p = quotient_presentation(&IntMatrix::identity(1), None).unwrap();
    assert_eq!((p.free_rank(), p.torsion().len()), (1, 0));
    let gens = IntMatrix::from_i64(&[&[2, 0], &[0, 1]]);
    let p = quotient_presentation(&gens, Some(&IntMatrix::from_i64(&[&[2], &[0]]))).unwrap();
    assert_eq!((p.free_rank(), p.torsion().len()), (1, 0));

    assert!(lattice_equal(
        &IntMatrix::identity(2),
        &IntMatrix::identity(2)
    ));
    assert!(!lattice_equal(
        &IntMatrix::from_i64(&[&[1], &[0]]),
        &IntMatrix::from_i64(&[&[2], &[0]])
    ));
    assert!(lattice_equal(
        &IntMatrix::from_i64(&[&[2, 1], &[1, 1]]),
        &IntMatrix::identity(2)
    ));
}

fn e(m: usize, i: usize) -> CliffordElement {
    CliffordElement::e(m, i)
}

fn scalar(m: usize, x: i64) -> CliffordElement {
    CliffordElement::scalar(m, QSqrt2::from_int(x))
}

#[test]
fn clifford_examples() {
    assert_eq!(e(4, 1).mul(&e(4, 1)).unwrap(), scalar(4, -1));
    assert_eq!(
        e(4, 1).mul(&e(4, 2)).unwrap(),
        e(4, 2).mul(&e(4, 1)).unwrap().neg()
    );
    assert_eq!(
        cl_invert(&CliffordElement::one(4)).unwrap(),
        CliffordElement::one(4)
    );
    assert_eq!(cl_invert(&e(4, 1)).unwrap(), e(4, 1).neg());

    let h = conjugating_element(2, 4).unwrap();
    let printed = CliffordElement::one(4)
        .add(&CliffordElement::blade(4, &[1, 4]))
        .and_then(|x| x.sub(&CliffordElement::blade(4, &[2, 4])))
        .and_then(|x| x.add(&CliffordElement::blade(4, &[3, 4])))
        .unwrap();
    assert_eq!(h, printed);
    assert_eq!(
        h.mul(&cl_invert(&h).unwrap()).unwrap(),
        CliffordElement::one(4)
    );

    let w = omega(2, 4).unwrap();
    let half = QSqrt2::rational(1, 2);
    let expected = e(4, 1)
        .sub(&e(4, 2))
        .unwrap()
        .mul(&e(4, 3).sub(&e(4, 4)).unwrap())
        .unwrap()
        .scale(&half);
    assert_eq!(w, expected);
    assert_eq!(w.mul(&w).unwrap(), scalar(4, -1));
    let w4 = omega(4, 8).unwrap();
    assert_eq!(w4.mul(&w4).unwrap(), scalar(8, 1));

    let c = conjugate(&h, &w).unwrap();
    assert_eq!(c, CliffordElement::blade(4, &[3, 4]).neg());

    assert_eq!(
        twisted_projection(&CliffordElement::one(4)).unwrap(),
        QMatrix::identity(4)
    );
    assert_eq!(twisted_projection(&w).unwrap(), QMatrix::flip_blocks(2, 4));
    let r = QSqrt2::inv_sqrt2();
    let u = CliffordElement::vector(4, &[r.clone(), -r]);
    let refl = QMatrix::from_i64(&[
        vec![0, 1, 0, 0],
        vec![1, 0, 0, 0],
        vec![0, 0, 1, 0],
        vec![0, 0, 0, 1],
    ]);
    assert_eq!(twisted_projection(&u).unwrap(), refl);

    let zero = [QuarterTurn::quarters(0); 3];
    assert_eq!(
        torus_element(&zero, TorusVariant::Standard, 6).unwrap(),
        CliffordElement::one(6)
    );
    let pi = QuarterTurn::from_pi_fraction(1, 1).unwrap();
    assert_eq!(
        torus_element(&[pi], TorusVariant::Standard, 2).unwrap(),
        scalar(2, -1)
    );
    let minus_half_pi = QuarterTurn::from_pi_fraction(-1, 2).unwrap();
    let thetas = [QuarterTurn::quarters(0), minus_half_pi];
    let t = torus_element(&thetas, TorusVariant::Conjugate { s: 2 }, 4).unwrap();
    assert_eq!(t, w);
}

#[test]
fn repring_examples() {
    let p = build_case(13, 4).unwrap();
    assert_eq!(
        (p.n, p.c, p.case, p.b0.clone(), p.alpha),
        (6, 2, Case::OddZero, bi(128), 6)
    );
    let p9 = build_case(9, 2).unwrap();
    assert_eq!(
        (p9.n, p9.c, p9.case, p9.b0.clone(), p9.alpha),
        (4, 2, Case::OddTwo, bi(32), 4)
    );
    assert!(matches!(build_case(12, 3), Err(Error::Unsupported(_))));

    let b = BAlgebra::new(&p);
    let d = b.delta();
    assert_eq!(b.format(&b.mul(&d, &d)), "-40·y + -8·δ_c");
    assert_eq!(b.mul(&b.y(), &b.y()), b.y().scale_i(-2));
    for i in 0..b.rank() {
        assert_eq!(b.mul(&b.one(), &b.basis(i)), b.basis(i));
    }

    assert_eq!(b.format(&res_delta(&p)), "32·y + 16·δ_c + 8·δ_c y");
    assert_eq!(
        BAlgebra::new(&p9).format(&res_delta(&p9)),
        "-8·y + -4·δ_c + -2·δ_c y"
    );
    let p14 = build_case(14, 4).unwrap();
    assert_eq!(
        BAlgebra::new(&p14).format(&res_delta(&p14)),
        "32·y + 8·δ_c + 4·δ_c y"
    );

    assert!(res_pi_in_rh(&p, 1).is_ok());
    assert!(matches!(
        res_pi_in_rh(&p, 0),
        Err(Error::IndexOutOfRange(_))
    ));
    assert!(matches!(
        res_pi_in_rh(&p, 6),
        Err(Error::IndexOutOfRange(_))
    ));

    let first = pi_prime_in_b(&p, p.c + 1).unwrap();
    assert_eq!(first, b.y().scale(&(binom(2 + 2, 3) * BigInt::from(32))));
    for i in p.free_indices() {
        assert_eq!(
            pi_prime_in_b(&p, i).unwrap(),
            pi_prime_by_expansion(&p, i).unwrap()
        );
    }
    assert!(matches!(
        pi_prime_in_b(&p, p.c),
        Err(Error::IndexOutOfRange(_))
    ));

    let cg = change_of_generators(&p).unwrap();
    assert!(cg.verify(&p));
    assert_eq!(cg.e.nrows(), 3);
    assert!(cg.e.det().abs().is_one());
    assert_eq!(cg.e.row(0), p.betas.as_slice());

    assert!(laurent_oracle(&p9).iter().all(|r| r.passed));
}

#[test]
fn koszul_examples() {
    let p = build_case(13, 4).unwrap();
    let kd = build_koszul(&p).unwrap();
    let b = &kd.algebra;
    assert_eq!(b.format(&kd.d1_x1), "128·y");
    assert_eq!(b.format(&kd.d1_x2), "32·y + 16·δ_c + 8·δ_c y");
    let p9 = build_case(9, 2).unwrap();
    let kd9 = build_koszul(&p9).unwrap();
    assert!(kd9.d1_x2.coords.iter().all(|c| !c.is_positive()));

    let h0 = homology_h0(&kd);
    assert_eq!(h0.y_order, Some(bi(64)));
    assert!(h0.one_nonzero);

    let h2 = homology_h2(&kd);
    assert_eq!(b.format(&h2.v), "16 + 8·y + 2·δ_c + 1·δ_c y");
    assert!(h2.equals_zv);
    assert!(h2.kernel.col_vecs().len() == 1);

    let g = standard_kernel_generators(&p);
    assert_eq!(g.names, ["u1", "u2", "u3"]);
    let (u1, u2, u3) = (
        g.get("u1").unwrap(),
        g.get("u2").unwrap(),
        g.get("u3").unwrap(),
    );
    assert!(wedge_multiply(&kd, u1, u1).unwrap().is_zero());
    assert_eq!(wedge_multiply(&kd, u1, u2).unwrap(), h2.v.scale_i(2));
    assert!(wedge_multiply(&kd, u1, u3).unwrap().is_zero());

    let outcomes = verify_relations(&kd);
    for id in ["H0-2", "H1-3", "H1-4", "H1-5"] {
        assert!(outcomes.iter().any(|r| r.id == id && r.passed), "{id}");
    }

    let gb = grobner_select(&kd);
    assert_eq!(gb.selected.leading_terms, ["y x_1", "x_1", "δ_c y x_2"]);
    assert!(gb.candidates.iter().any(|c| c.redundant_by.is_some()));
    let p11 = build_case(11, 4).unwrap();
    assert!(p11.alpha < p11.n);
    assert_eq!(
        grobner_select(&build_koszul(&p11).unwrap())
            .selected
            .leading_terms
            .len(),
        4
    );

    let rows = verify_solution_tables(&kd).unwrap();
    for id in ["1.4", "1.6"] {
        assert_eq!(
            rows.iter().find(|r| r.id == id).unwrap().status,
            RowStatus::Pass,
            "{id}"
        );
    }
    assert!(verify_solution_tables(&build_koszul(&build_case(14, 4).unwrap()).unwrap()).is_err());
}

#[test]
fn presentation_examples() {
    let r = cross_check(&build_case(10, 4).unwrap(), true);
    assert_eq!(r.case.kind, Case::EvenZero);
    assert!(r.gating_passed());
    let r = cross_check(&build_case(14, 4).unwrap(), false);
    let tables = r.record("solution tables").unwrap();
    assert_eq!(tables.status, Status::Skip);
    assert!(!tables.detail.is_empty());
}
