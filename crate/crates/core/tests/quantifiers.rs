use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, FRAC_PI_6, PI};

use biphoton::linalg::{self, kron, partial_trace, ComplexMatrix, ComplexVector, Subsystem};
use biphoton::ququart::{self, QuquartLabel, QuquartState};
use biphoton::{QutritState, C64};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
}

/// Independent `1/Tr(ρ_r²)` from a raw `d×d` column.
fn oracle_k(psi: &[C64], d: usize) -> f64 {
    let mut purity = 0.0;
    for a in 0..d {
        for a2 in 0..d {
            let rho: C64 = (0..d).map(|b| psi[a * d + b] * psi[a2 * d + b].conj()).sum();
            purity += rho.norm_sqr();
        }
    }
    1.0 / purity
}

fn oracle_entropy(lambdas: &[f64]) -> f64 {
    -lambdas.iter().filter(|&&l| l > 0.0).map(|l| l * l.log2()).sum::<f64>()
}

fn amp() -> impl Strategy<Value = C64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| c(re, im))
}

fn qutrit() -> impl Strategy<Value = QutritState> {
    [amp(), amp(), amp()]
        .prop_filter("nonzero", |a| a.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3)
        .prop_map(|[a, b, c]| QutritState::new(a, b, c).unwrap())
}

fn ququart() -> impl Strategy<Value = QuquartState> {
    [amp(), amp(), amp(), amp()]
        .prop_filter("nonzero", |a| a.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3)
        .prop_map(|[a, b, c, d]| QuquartState::new(a, b, c, d).unwrap())
}

#[test]
fn qutrit_point_values() {
    let r = QutritState::hv().quantify();
    close(r.schmidt_k, 2.0, 1e-12);
    close(r.concurrence, 1.0, 1e-12);
    close(r.entropy, 1.0, 1e-12);
    let r = QutritState::hh().quantify();
    close(r.schmidt_k, 1.0, 1e-12);
    close(r.concurrence, 0.0, 1e-12);
    close(r.entropy, 0.0, 1e-12);
    close(QutritState::hh().polarization().degree_p, 1.0, 1e-12);
    close(QutritState::hv().polarization().degree_p, 0.0, 1e-12);
}

#[test]
fn bell_phi_plus_is_maximally_entangled() {
    let q = QutritState::from_reals(1.0, 0.0, 1.0).unwrap();
    close(q.schmidt_k(), 2.0, 1e-12);
    close(q.concurrence(), 1.0, 1e-12);
}

#[test]
fn fig1_curve_values() {
    let k = |x: f64| QutritState::real_from_c_plus(x).unwrap().schmidt_k();
    close(k(FRAC_1_SQRT_2), 1.0, 1e-12);
    close(k(-FRAC_1_SQRT_2), 1.0, 1e-12);
    for x in [0.0, 1.0, -1.0] {
        close(k(x), 2.0, 1e-12);
    }
}

#[test]
fn ququart_extremes() {
    for s in [
        QuquartState::from_reals(1.0, 0.0, 0.0, 1.0).unwrap(),
        QuquartState::from_reals(1.0, 1.0, 1.0, -1.0).unwrap(),
    ] {
        close(s.schmidt_k(), 4.0, 1e-12);
        close(s.i_concurrence(), 1.5f64.sqrt(), 1e-12);
        close(s.quantify().entropy, 2.0, 1e-12);
    }
    for label in QuquartLabel::ALL {
        let s = QuquartState::basis(label);
        close(s.schmidt_k(), 2.0, 1e-12);
        close(s.i_concurrence(), 1.0, 1e-12);
        close(oracle_k(ququart::basis_wavefunction(label).as_slice(), 4), 2.0, 1e-12);
    }
}

#[test]
fn psi_phi_family_curves() {
    for i in 0..=50 {
        let phi = PI * i as f64 / 50.0;
        let (s, k, ent) = ququart::family_psi_phi(phi);
        let (cs, sn) = (phi.cos(), phi.sin());
        let xlogx = |x: f64| if x == 0.0 { 0.0 } else { x * x * x.abs().log2() };
        close(k, 4.0 / (1.0 + (2.0 * phi).cos().powi(2)), 1e-12);
        close(ent, 1.0 - 2.0 * (xlogx(cs) + xlogx(sn)), 1e-12);
        let r = s.quantify();
        close(r.schmidt_k, k, 1e-12);
        close(r.entropy, ent, 1e-12);
    }
    close(ququart::family_psi_phi(FRAC_PI_6).1, 3.2, 1e-12);
}

#[test]
fn psi_phi_prime_asymmetry() {
    close(ququart::family_psi_phi_prime(FRAC_PI_4).schmidt_k(), 2.0, 1e-12);
    close(ququart::family_psi_phi_prime(3.0 * FRAC_PI_4).schmidt_k(), 4.0, 1e-12);
}

#[test]
fn two_qubit_model_of_single_label() {
    let m = QuquartState::basis(QuquartLabel::HH).two_qubit_model();
    close(m.k_2qb, 1.0, 1e-12);
    close(m.c_2qb, 0.0, 1e-12);
    assert!(m.rho_r_2qb.is_density(1e-12));
}

#[test]
fn kron_orders_first_operand_outer() {
    let a = ComplexVector::from_reals(&[1.0, 2.0]);
    let b = ComplexVector::from_reals(&[3.0, 5.0, 7.0]);
    let v = kron(&a, &b);
    let expect = [3.0, 5.0, 7.0, 6.0, 10.0, 14.0];
    for (z, e) in v.iter().zip(expect) {
        assert_eq!(*z, c(e, 0.0));
    }
}

#[test]
fn partial_trace_of_product_recovers_factors() {
    let a = ComplexVector::new(vec![c(0.6, 0.0), c(0.0, 0.8)]);
    let b = ComplexVector::new(vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, -FRAC_1_SQRT_2)]);
    let rho = kron(&a, &b).outer();
    let ra = partial_trace(&rho, 2, Subsystem::Second).unwrap();
    let rb = partial_trace(&rho, 2, Subsystem::First).unwrap();
    assert!(ra.max_abs_diff(&a.outer()) < 1e-15);
    assert!(rb.max_abs_diff(&b.outer()) < 1e-15);
}

#[test]
fn eigensolver_on_known_spectrum() {
    // σ_x + 2·1 has eigenvalues 3 and 1.
    let m = ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]);
    let e = linalg::hermitian_eig(&m).unwrap();
    close(e.values[0], 3.0, 1e-13);
    close(e.values[1], 1.0, 1e-13);
    assert!(e.reconstruct().max_abs_diff(&m) < 1e-13);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn qutrit_k_matches_partial_trace(q in qutrit()) {
        let [c1, c2, c3] = q.amplitudes();
        let col = [c1, c2 * FRAC_1_SQRT_2, c2 * FRAC_1_SQRT_2, c3];
        prop_assert!((q.schmidt_k() - oracle_k(&col, 2)).abs() < 1e-12);
        prop_assert!((q.schmidt_k() - linalg::schmidt_k_by_partial_trace(&q.wavefunction(), 2).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn qutrit_bounds_and_identities(q in qutrit()) {
        let r = q.quantify();
        prop_assert!(r.schmidt_k >= 1.0 - 1e-12 && r.schmidt_k <= 2.0 + 1e-12);
        prop_assert!(r.concurrence >= 0.0 && r.concurrence <= 1.0 + 1e-12);
        prop_assert!((r.lambda_plus + r.lambda_minus - 1.0).abs() < 1e-12);
        prop_assert!((r.entropy - oracle_entropy(&[r.lambda_plus, r.lambda_minus])).abs() < 1e-12);
        let p = q.polarization().degree_p;
        prop_assert!((r.concurrence.powi(2) + p * p - 1.0).abs() < 1e-12);
        prop_assert!((q.spin_flip_concurrence() - r.concurrence).abs() < 1e-12);
        prop_assert!(q.reduced_density().is_density(1e-12));
    }

    #[test]
    fn qutrit_rotation_is_local(q in qutrit(), alpha in -PI..PI) {
        let r = q.rotate_basis(alpha);
        prop_assert!((r.schmidt_k() - q.schmidt_k()).abs() < 1e-12);
        prop_assert!((r.concurrence() - q.concurrence()).abs() < 1e-12);
        let back = r.rotate_basis(-alpha);
        prop_assert!(back.phase_distance(&q) < 1e-12);
    }

    #[test]
    fn qutrit_schmidt_modes_rebuild_state(q in qutrit()) {
        let dec = q.schmidt_decompose();
        prop_assert!(dec.reconstruct().phase_distance(&q.wavefunction()) < 1e-10);
        prop_assert!((dec.schmidt_k() - q.schmidt_k()).abs() < 1e-10);
    }

    #[test]
    fn global_phase_changes_nothing(q in qutrit(), s in ququart(), theta in -PI..PI) {
        let g = C64::from_polar(1.0, theta);
        let [a, b, cc] = q.amplitudes();
        let q2 = QutritState::new(a * g, b * g, cc * g).unwrap();
        prop_assert!((q2.schmidt_k() - q.schmidt_k()).abs() < 1e-12);
        let [a, b, cc, d] = s.amplitudes();
        let s2 = QuquartState::new(a * g, b * g, cc * g, d * g).unwrap();
        prop_assert!((s2.schmidt_k() - s.schmidt_k()).abs() < 1e-12);
    }

    #[test]
    fn ququart_k_matches_partial_trace(s in ququart()) {
        let k = linalg::schmidt_k_by_partial_trace(&s.wavefunction(), 4).unwrap();
        prop_assert!((s.schmidt_k() - k).abs() < 1e-12);
    }

    #[test]
    fn ququart_bounds_and_identities(s in ququart()) {
        let r = s.quantify();
        prop_assert!(r.schmidt_k >= 2.0 - 1e-12 && r.schmidt_k <= 4.0 + 1e-12);
        prop_assert!(r.i_concurrence >= 1.0 - 1e-12 && r.i_concurrence <= 1.5f64.sqrt() + 1e-12);
        prop_assert!((r.i_concurrence - (2.0 * (1.0 - 1.0 / r.schmidt_k)).sqrt()).abs() < 1e-12);
        prop_assert!((r.lambdas.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let eig = linalg::hermitian_eig(&s.reduced_density()).unwrap().values;
        for (a, b) in r.lambdas.iter().zip(&eig) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        prop_assert!((r.entropy - oracle_entropy(&eig)).abs() < 1e-10);
        let m = s.two_qubit_model();
        prop_assert!((r.schmidt_k - 2.0 * m.k_2qb).abs() < 1e-12);
        prop_assert!((m.c_2qb - 2.0 * s.delta().norm()).abs() < 1e-12);
    }

    #[test]
    fn ququart_rotation_keeps_entanglement(s in ququart()) {
        let r = s.rotate_basis_45();
        prop_assert!((r.schmidt_k() - s.schmidt_k()).abs() < 1e-12);
        let total: f64 = r.magnitudes().iter().map(|m| m * m).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn postselected_beam_splitter_doubles_k(q in qutrit()) {
        let (psi, k) = ququart::qutrit_to_ququart_postselect(&q);
        prop_assert!((psi.norm() - 1.0).abs() < 1e-12);
        prop_assert!((oracle_k(psi.as_slice(), 4) - k).abs() < 1e-10);
        prop_assert!((k - 2.0 * q.schmidt_k()).abs() < 1e-10);
    }
}
