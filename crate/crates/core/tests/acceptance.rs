//! Acceptance suite: one test per criterion, every assertion an exact
//! integer equality. Run with `cargo test --test acceptance` (add
//! `-- --nocapture` to see the per-criterion PASS lines).

use koszul::cli::models::{iwasawa3, nil6, torus};
use koszul::exterior::{Form, Monomial, Polyvector};
use koszul::formulas::{
    blowup_dims, pbundle_dims, point_dims, product_pn_dims, projective_space_diamond,
    trivial_poisson_dims, BlowupSpec,
};
use koszul::homology::{
    check_duality, check_e1_degeneracy, check_unimodular, dolbeault_dims, euler_characteristic,
    euler_from_hodge, hodge_antidiagonal_sum, kb_dims, lp_dims,
};
use koszul::model::{all_monomials, LieModel, PoissonSpec};
use koszul::scalar::GaussianRational;
use koszul::spectral::{page_degree_sum, spectral_pages};

fn spec(model: &LieModel, pi: Polyvector) -> PoissonSpec {
    PoissonSpec::validate(model, pi).expect("poisson bivector")
}

fn pair(n: u8, i: u8, j: u8) -> Polyvector {
    Polyvector::wedge_pair(n, i, j)
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// The standard example corpus: every validated (model, bivector) pair the
/// property criteria quantify over.
fn corpus() -> Vec<(LieModel, Polyvector, &'static str)> {
    let iw_pi = pair(3, 1, 2).add(&pair(3, 2, 3)).unwrap();
    vec![
        (iwasawa3(), Polyvector::zero(3), "iwasawa3 pi=0"),
        (iwasawa3(), iw_pi, "iwasawa3 X1^X2+X2^X3"),
        (nil6(), pair(6, 2, 3), "nil6 pi1"),
        (nil6(), pair(6, 1, 6), "nil6 pi2"),
        (nil6(), pair(6, 1, 3), "nil6 pi3"),
        (torus(3), pair(3, 1, 3), "torus3 X1^X3"),
    ]
}

#[test]
fn criterion_01_iwasawa3_hodge_diamond() {
    let h = dolbeault_dims(&iwasawa3());
    assert_eq!(
        (0..=3).map(|q| h.entry(0, q)).collect::<Vec<_>>(),
        vec![1, 2, 2, 1],
        "h^(0,*)"
    );
    assert_eq!(h.entry(1, 1), 6);
    let expect_pyramid = vec![
        vec![1],
        vec![3, 2],
        vec![3, 6, 2],
        vec![1, 6, 6, 1],
        vec![2, 6, 3],
        vec![2, 3],
        vec![1],
    ];
    assert_eq!(h.pyramid_rows(), expect_pyramid, "all 16 entries");
    println!("PASS criterion 1: iwasawa3 Hodge diamond matches (16 entries)");
}

#[test]
fn criterion_02_nil6_hodge_diamond() {
    let h = dolbeault_dims(&nil6());
    let h0 = [1usize, 3, 5, 6, 5, 3, 1];
    assert_eq!((0..=6).map(|q| h.entry(0, q)).collect::<Vec<_>>(), h0.to_vec());
    for i in 0..=6u8 {
        for j in 0..=6u8 {
            assert_eq!(
                h.entry(i, j),
                binomial(6, i as usize) * h0[j as usize],
                "product law at ({i},{j})"
            );
        }
    }
    assert_eq!(h.entry(5, 0), 6);
    assert_eq!(h.entry(6, 1), 3);
    assert_eq!(h.entry(3, 3), 120);
    println!("PASS criterion 2: nil6 Hodge diamond matches (h^(5,0)=6, h^(6,1)=3, h^(3,3)=120)");
}

#[test]
fn criterion_03_iwasawa3_kb_table() {
    let m = iwasawa3();
    for (c1, c3) in [(1i64, 0i64), (0, 1), (1, 1)] {
        let pi = pair(3, 1, 2)
            .scale(&GaussianRational::from_int(c1))
            .add(&pair(3, 2, 3).scale(&GaussianRational::from_int(c3)))
            .unwrap();
        let kb = kb_dims(&m, &spec(&m, pi));
        assert_eq!(kb.dims(), &[1, 5, 11, 14, 11, 5, 1], "(c1,c3)=({c1},{c3})");
    }
    println!("PASS criterion 3: iwasawa3 KB homology = (1,5,11,14,11,5,1) for all three bivectors");
}

#[test]
fn criterion_04_nil6_pi1() {
    let m = nil6();
    let s = spec(&m, pair(6, 2, 3));
    let kb = kb_dims(&m, &s);
    assert_eq!(&kb.dims()[..7], &[1, 9, 38, 101, 191, 274, 308]);
    assert!(kb.is_palindromic(), "degrees 7..12 by duality");
    assert!(check_e1_degeneracy(&m, &s).degenerate);
    assert!(check_unimodular(&m, &s));
    println!("PASS criterion 4: nil6 pi1 KB = (1,9,38,101,191,274,308,...), degenerate, unimodular");
}

#[test]
fn criterion_05_nil6_pi3() {
    let m = nil6();
    let s = spec(&m, pair(6, 1, 3));
    let kb = kb_dims(&m, &s);
    assert_eq!(&kb.dims()[..7], &[1, 8, 31, 78, 143, 202, 226]);
    let report = check_e1_degeneracy(&m, &s);
    assert!(!report.degenerate);
    assert_eq!(report.defect[1], 1, "first-page sum 9 against homology 8");
    assert!(check_unimodular(&m, &s));
    println!("PASS criterion 5: nil6 pi3 KB = (1,8,31,78,143,202,226,...), non-degenerate, unimodular");
}

#[test]
fn criterion_06_nil6_pi2_degree_one() {
    let m = nil6();
    let s = spec(&m, pair(6, 1, 6));
    let kb = kb_dims(&m, &s);
    assert_eq!(kb.get(0), 1);
    assert_eq!(kb.get(1), 6);

    let h = dolbeault_dims(&m);
    assert_eq!(hodge_antidiagonal_sum(&h, 1), 9, "first-page sum at k=1");
    let report = check_e1_degeneracy(&m, &s);
    assert_eq!(report.defect[1], 3);

    let pages = spectral_pages(&m, &s, 7);
    assert_eq!(page_degree_sum(&pages[0], 1), 9);
    // Differentials meeting total degree 1 either leave (0,1)/(1,0) or
    // leave (0,0) and land in degree 1.
    let mut rank_meeting_degree_one = 0usize;
    for page in &pages {
        rank_meeting_degree_one +=
            page.d_ranks[0][1] + page.d_ranks[1][0] + page.d_ranks[0][0];
    }
    assert!(rank_meeting_degree_one > 0, "some d_r of positive rank meets total degree 1");
    println!(
        "PASS criterion 6: nil6 pi2 KB[0]=1, KB[1]=6, first-page sum 9, defect 3, positive d_r rank at degree 1"
    );
}

#[test]
fn criterion_07_iwasawa3_poisson_classification() {
    let m = iwasawa3();
    for c1 in -1i64..=1 {
        for c2 in -1i64..=1 {
            for c3 in -1i64..=1 {
                let pi = pair(3, 1, 2)
                    .scale(&GaussianRational::from_int(c1))
                    .add(&pair(3, 1, 3).scale(&GaussianRational::from_int(c2)))
                    .unwrap()
                    .add(&pair(3, 2, 3).scale(&GaussianRational::from_int(c3)))
                    .unwrap();
                assert_eq!(
                    m.check_poisson(&pi).is_ok(),
                    c2 == 0,
                    "(c1,c2,c3)=({c1},{c2},{c3})"
                );
            }
        }
    }
    println!("PASS criterion 7: iwasawa3 Poisson classification (27-point scan, Poisson iff c2=0)");
}

#[test]
fn criterion_08_iwasawa3_lp_and_duality() {
    let m = iwasawa3();
    let s = spec(&m, pair(3, 1, 2).add(&pair(3, 2, 3)).unwrap());
    let lp = lp_dims(&m, &s);
    let kb = kb_dims(&m, &s);
    assert_eq!(lp.dims(), &[1, 5, 11, 14, 11, 5, 1]);
    for k in 0..=6i64 {
        assert_eq!(lp.get(6 - k), kb.get(k), "unimodular duality at k={k}");
    }
    println!("PASS criterion 8: iwasawa3 LP = (1,5,11,14,11,5,1) and LP[6-k] = KB[k]");
}

#[test]
fn criterion_09_formula_layer() {
    // Trivial structure on the three-torus.
    let t3 = trivial_poisson_dims(&dolbeault_dims(&torus(3)));
    assert_eq!(t3.dims(), &[1, 6, 15, 20, 15, 6, 1]);

    // Blow-up of the six-dimensional model along the torus center, c = 3.
    let m = nil6();
    let x = kb_dims(&m, &spec(&m, pair(6, 1, 3)));
    let t = torus(3);
    let z = kb_dims(&t, &spec(&t, pair(3, 1, 3)));
    assert_eq!(z.dims(), &[1, 6, 15, 20, 15, 6, 1]);
    let blown = blowup_dims(&BlowupSpec { x, z, codim: 3, z_ddbar: true }).unwrap();
    assert_eq!(&blown.dims()[..7], &[1, 8, 31, 80, 155, 232, 266]);
    assert!(blown.is_palindromic());

    // Iterated del Pezzo blow-ups of the projective plane.
    let mut x = pbundle_dims(&point_dims(), 3).unwrap();
    assert_eq!(x.dims(), &[0, 0, 3, 0, 0]);
    for r in 1..=8usize {
        x = blowup_dims(&BlowupSpec { x, z: point_dims(), codim: 2, z_ddbar: true }).unwrap();
        assert_eq!(x.get(2), r + 3, "H_2(M_{r})");
        assert!(x.dims().iter().enumerate().all(|(k, d)| k == 2 || *d == 0));
    }

    // Projective spaces from the point bundle.
    for n in 1..=6usize {
        let pn = pbundle_dims(&point_dims(), n + 1).unwrap();
        assert_eq!(pn.get(n as i64), n + 1);
        assert_eq!(pn.dims().iter().sum::<usize>(), n + 1);
    }

    // The quadric surface as a product with the line.
    let p1 = trivial_poisson_dims(&projective_space_diamond(1));
    let quadric = product_pn_dims(&p1, 1).unwrap();
    assert_eq!(quadric.get(2), 4);
    assert_eq!(quadric.dims(), &[0, 0, 4, 0, 0]);

    // Degeneracy transfer under the same blow-up: the center is degenerate,
    // so the combined defect is the ambient defect and stays nonzero.
    let m = nil6();
    let x_report = check_e1_degeneracy(&m, &spec(&m, pair(6, 1, 3)));
    let t = torus(3);
    let z_report = check_e1_degeneracy(&t, &spec(&t, pair(3, 1, 3)));
    assert!(z_report.degenerate);
    let combined =
        koszul::formulas::degeneracy_transfer(&x_report.defect, &z_report.defect, 3);
    assert_eq!(combined, x_report.defect);
    assert!(combined.iter().any(|d| *d > 0), "blow-up stays non-degenerate");

    println!("PASS criterion 9: formula layer (trivial torus3, blow-up table, del Pezzo, projective spaces, quadric, degeneracy transfer)");
}

#[test]
fn criterion_10_property_suites() {
    // (a) D^2 = 0 and the anticommutation of delbar with d_pi on every basis
    //     monomial of every validated pair.
    for (model, pi, label) in corpus() {
        let n = model.n();
        for m in all_monomials(n) {
            let f = Form::monomial(n, m);
            let ddpi = model.d_pi(&pi, &model.d_pi(&pi, &f));
            assert!(ddpi.is_zero(), "{label}: d_pi^2 on {}", m.ascii());
            let anti = model
                .delbar(&model.d_pi(&pi, &f))
                .add(&model.d_pi(&pi, &model.delbar(&f)))
                .unwrap();
            assert!(anti.is_zero(), "{label}: anticommutation on {}", m.ascii());
            let d = |g: &Form| model.d_pi(&pi, g).add(&model.delbar(g)).unwrap();
            assert!(d(&d(&f)).is_zero(), "{label}: D^2 on {}", m.ascii());
        }
    }

    // (b) First-page bound on pseudo-random invariant Poisson bivectors.
    let mut rng_state = 0x2545F4914F6CDD1Du64;
    let mut next = move || {
        rng_state ^= rng_state << 13;
        rng_state ^= rng_state >> 7;
        rng_state ^= rng_state << 17;
        rng_state
    };
    let mut checked = 0usize;
    for (model, budget) in [(iwasawa3(), 8usize), (nil6(), 4usize)] {
        let n = model.n();
        let h = dolbeault_dims(&model);
        let mut found = 0usize;
        while found < budget {
            let mut pi = Polyvector::zero(n);
            for _ in 0..2 {
                let i = (next() % n as u64) as u8 + 1;
                let j = (next() % n as u64) as u8 + 1;
                if i == j {
                    continue;
                }
                let c = (next() % 5) as i64 - 2;
                pi = pi.add(&pair(n, i, j).scale(&GaussianRational::from_int(c))).unwrap();
            }
            if model.check_poisson(&pi).is_err() {
                continue;
            }
            found += 1;
            checked += 1;
            let kb = kb_dims(&model, &spec(&model, pi));
            for k in 0..=2 * n as i64 {
                assert!(
                    kb.get(k) <= hodge_antidiagonal_sum(&h, k),
                    "{}: bound violated at k={k}",
                    model.name()
                );
            }
        }
    }
    assert!(checked >= 12);

    // (c, d) Stabilized-page sums, duality regression and Euler invariance
    //        on every corpus run.
    for (model, pi, label) in corpus() {
        let n = model.n();
        let s = spec(&model, pi);
        let kb = kb_dims(&model, &s);
        let h = dolbeault_dims(&model);
        let pages = spectral_pages(&model, &s, n as usize + 1);
        let stabilized = pages.last().unwrap();
        for k in 0..=2 * n as i64 {
            assert_eq!(page_degree_sum(stabilized, k), kb.get(k), "{label} at k={k}");
        }
        assert!(check_duality(&kb), "{label}: palindromic table");
        assert_eq!(euler_characteristic(&kb), euler_from_hodge(&h), "{label}: euler");
        if check_unimodular(&model, &s) {
            let lp = lp_dims(&model, &s);
            for k in 0..=2 * n as i64 {
                assert_eq!(lp.get(2 * n as i64 - k), kb.get(k), "{label}: modular duality");
            }
        }
    }

    // (e) Derivation identity with the form bracket on all generator pairs.
    for (model, pi, label) in corpus() {
        let n = model.n();
        for a in 1..=n {
            for b in 1..=n {
                let alpha = Form::monomial(n, Monomial::hol_from(&[a]));
                let beta = Form::monomial(n, Monomial::hol_from(&[b]));
                let product = koszul::exterior::wedge(&alpha, &beta).unwrap();
                let lhs = model.d_pi(&pi, &product);
                let rhs = koszul::exterior::wedge(&model.d_pi(&pi, &alpha), &beta)
                    .unwrap()
                    .sub(&koszul::exterior::wedge(&alpha, &model.d_pi(&pi, &beta)).unwrap())
                    .unwrap()
                    .sub(&model.form_bracket(&pi, &alpha, &beta).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs, "{label}: pair ({a},{b})");
            }
        }
    }

    println!("PASS criterion 10: property suites (square-zero, anticommutation, first-page bound, convergence, euler, derivation identity)");
}

/// Library-level regression: the spectral-engine entries of the first page
/// agree with the Dolbeault diamond for a non-degenerate run.
#[test]
fn first_page_regression() {
    let m = nil6();
    let s = spec(&m, pair(6, 1, 3));
    let pages = spectral_pages(&m, &s, 1);
    let h = dolbeault_dims(&m);
    for si in 0..=6u8 {
        for t in 0..=6u8 {
            assert_eq!(pages[0].e[si as usize][t as usize], h.entry(6 - si, t));
        }
    }
    // Sum over all spots equals the total Hodge sum.
    let total: usize = pages[0].e.iter().flatten().sum();
    assert_eq!(total, h.total());
}
