mod common;

use purefull::catalog;

#[test]
fn dense_oracle_matches_sparse_betti_numbers_on_catalog() {
    let entries = common::entries();
    assert_eq!(entries.len(), catalog::list().len() - 1);
    for l in entries {
        let dense = common::dense_betti(l.lie.structure());
        assert_eq!(dense, l.lie.betti_numbers(), "{}", l.manifest.name);
    }
}

#[test]
fn dense_oracle_on_heisenberg() {
    let lie = purefull::lie::LieAlgebra::new(vec![
        purefull::KForm::zero(3, 2),
        purefull::KForm::zero(3, 2),
        purefull::form::e(3, &[1, 2]),
    ])
    .unwrap();
    assert_eq!(common::dense_betti(lie.structure()), vec![1, 2, 2, 1]);
}
