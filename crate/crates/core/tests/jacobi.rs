use skc_core::jacobi::{
    ez_to_plus, hurwitz_h, inverse_shimura, jacobi_cusp_basis, jacobi_cusp_dim, jacobi_eisenstein, plus_to_ez,
    shimura_zeta,
};
use skc_core::qseries::{dim_cusp, newforms};
use skc_core::{QuadElement, Rational};

#[test]
fn dimension_chain() {
    for k in (10..=20).step_by(2) {
        assert_eq!(jacobi_cusp_dim(k), dim_cusp(2 * k - 2), "k = {k}");
        assert_eq!(jacobi_cusp_basis(k, 12).unwrap().len(), jacobi_cusp_dim(k));
    }
}

#[test]
fn shimura_images_are_proportional() {
    for k in [10u32, 12] {
        let phi = jacobi_cusp_basis(k, 300).unwrap().remove(0);
        let g = ez_to_plus(&phi);
        let images: Vec<_> = [-3i64, -4, -7, -8].iter().map(|&d| shimura_zeta(&g, d, 6).unwrap()).collect();
        for img in &images[1..] {
            let ratio = img.coeff(1) * &images[0].coeff(1).inverse().unwrap();
            assert_eq!(*img, images[0].scale(&ratio), "k = {k}");
        }
        let f = &newforms(2 * k - 2, 6).unwrap()[0];
        assert_eq!(images[0].scale(&images[0].coeff(1).inverse().unwrap()), *f.expansion());
    }
}

#[test]
fn normalization_fixtures() {
    let phi10 = jacobi_cusp_basis(10, 30).unwrap().remove(0);
    assert_eq!(phi10.c(3), Some(&QuadElement::one()));
    // phi_{10,1} = (E6 E_{4,1} - E4 E_{6,1})/144 by c(D), D = 0..12.
    let want = [0, 0, 0, 1, -2, 0, 0, -16, 36, 0, 0, 99, -272];
    assert_eq!(phi10.coeffs()[..13], want.map(QuadElement::from_i64));
    let f = &newforms(18, 60).unwrap()[0];
    assert_eq!(inverse_shimura(f, 30).unwrap(), phi10);
    assert_eq!(plus_to_ez(&ez_to_plus(&phi10)).unwrap(), phi10);
}

#[test]
fn eisenstein_and_class_numbers() {
    assert_eq!(hurwitz_h(1, 3), Rational::from((1, 3)));
    assert_eq!(hurwitz_h(1, 4), Rational::from((1, 2)));
    assert_eq!(hurwitz_h(1, 0), Rational::from((-1, 12)));
    let e4 = jacobi_eisenstein(4, 20).unwrap();
    assert_eq!(e4.c(0), Some(&QuadElement::one()));
    let want = [1, 0, 0, 56, 126, 0, 0, 576, 756];
    assert_eq!(e4.coeffs()[..9], want.map(QuadElement::from_i64));
}
