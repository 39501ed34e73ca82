use klrvv::engine::Element;
use klrvv::linalg::Field;
use klrvv::morita::{
    certify, hom_catalog, verify_balance, verify_graded_dim_match, verify_hom_relations, verify_surjectivity_up_to,
    HomDescriptor, HomName, HomParams,
};
use klrvv::quiver::{DimVector, OrbitDescriptor, Vertex};
use klrvv::report::Status;

fn a2_params(mults: &[u32]) -> HomParams {
    let o = OrbitDescriptor::a2();
    let q = Vertex::plus(0);
    let entries: Vec<_> = mults.iter().enumerate().map(|(k, &c)| (o.shift(&q, k as i32), c)).collect();
    HomParams::new(DimVector::theta_closed(&entries, &o).unwrap(), o)
}

fn phi_mult_one() -> HomDescriptor {
    hom_catalog(HomName::PhiMultOne, &a2_params(&[1, 1])).unwrap()
}

#[test]
fn catalog_entry_certifies() {
    let r = certify(&phi_mult_one(), 8, 4, Field::Rational).unwrap();
    assert!(r.overall(), "{}", r.to_text());
    assert!(r.checks.iter().any(|c| c.name.starts_with("relation:")));
}

#[test]
fn every_corrupted_image_breaks_a_named_relation() {
    use klrvv::engine::Gen;
    let h = phi_mult_one();
    for (g, _) in &h.images {
        let mut bad = h.clone();
        bad.corrupt(g).unwrap();
        let r = verify_hom_relations(&bad).unwrap();
        let arrow = matches!(g, Gen::Factor(_, inner) if matches!(**inner, Gen::PathU(_)));
        if arrow {
            // the path relations are homogeneous in each arrow, so u ↦ -u is an automorphism
            assert!(r.overall(), "{g:?}: {}", r.to_text());
            continue;
        }
        assert!(!r.overall(), "{g:?} not detected");
        let fails = r.failures();
        assert!(fails.iter().all(|c| c.name.starts_with("relation:") || c.name == "unit ↦ e"), "{}", r.to_text());
        assert!(fails.iter().any(|c| c.detail.contains("residue") || c.name == "unit ↦ e"), "{}", r.to_text());
    }
}

#[test]
fn a_dropped_image_shows_a_rank_deficit() {
    let h = phi_mult_one();
    let pos = h.images.iter().position(|(g, _)| matches!(g, klrvv::engine::Gen::Factor(..) | klrvv::engine::Gen::S(_)));
    let mut bad = h.clone();
    bad.images[pos.expect("a crossing generator")].1 = Element::zero();
    let r = verify_surjectivity_up_to(&bad, 4, Field::Rational).unwrap();
    assert!(!r.overall());
    assert!(r.checks[0].detail.contains("image rank"), "{}", r.to_text());
    assert!(verify_graded_dim_match(&bad, 8).unwrap().overall());
}

#[test]
fn balance_is_only_defined_over_kz() {
    assert!(verify_balance(&phi_mult_one()).is_err());
    let h = hom_catalog(HomName::PhiKzP, &{
        let o = OrbitDescriptor::a3();
        HomParams::new(DimVector::theta_closed(&[(Vertex::p_power(0, 1), 2)], &o).unwrap(), o)
    })
    .unwrap();
    let r = verify_balance(&h).unwrap();
    assert!(r.overall(), "{}", r.to_text());
}

#[test]
fn hypotheses_are_enforced() {
    // mult(q) = 2 and mult(ν) ≠ 1: neither row applies
    assert!(hom_catalog(HomName::PhiMultOne, &a2_params(&[2])).is_err());
    let o = OrbitDescriptor::a1();
    let nu = DimVector::theta_closed(&[(Vertex::plus(0), 1)], &o).unwrap();
    assert!(hom_catalog(HomName::PhiKzQ, &HomParams::new(nu, o)).is_err());
}

#[test]
fn names_round_trip() {
    for n in HomName::ALL {
        assert_eq!(n.as_str().parse::<HomName>().unwrap(), n);
    }
    assert!("phi_nothing".parse::<HomName>().is_err());
    assert_eq!(Status::Skipped("x".into()).label(), "skipped(hypothesis)");
}
