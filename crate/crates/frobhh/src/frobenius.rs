//! Frobenius forms, the Nakayama automorphism, and its eigenspace grading.
//!
//! A linear form `phi` is Frobenius when its Gram matrix `G_{ij} =
//! phi(e_i e_j)` is invertible. The Nakayama automorphism is the unique
//! algebra automorphism `rho` with `phi(a x) = phi(rho(x) a)` for all
//! `a, x`; column by column that is `rho = G^{-T} G`. When `rho` has order
//! `m` and `F_p` contains a primitive `m`-th root of unity `w`, the
//! algebra splits into eigenspaces `A_i = ker(rho - w^i I)` and becomes
//! `Z/mZ`-graded. The grading is strongly graded when every `A_i A_j`
//! spans `A_{i+j}`.

use crate::algebra::{AlgebraSpec, Element};
use crate::error::{Error, Result};
use crate::field::{PrimeField, Scalar};
use crate::matrix::DenseMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::ops::Range;

/// Default cap for the Nakayama order search.
pub const DEFAULT_ORDER_CAP: u64 = 1_000_000;

/// A Frobenius form with its (invertible) Gram matrix.
#[derive(Debug, Clone)]
pub struct FrobeniusForm {
    pub phi: Vec<Scalar>,
    pub gram: DenseMatrix,
    pub gram_inv: DenseMatrix,
}

/// `G_{ij} = phi(e_i e_j)`.
pub fn gram_matrix(alg: &AlgebraSpec, phi: &[Scalar]) -> DenseMatrix {
    assert_eq!(phi.len(), alg.dim());
    let f = alg.field();
    DenseMatrix::from_fn(f, alg.dim(), alg.dim(), |i, j| {
        alg.basis_product(i, j)
            .iter()
            .fold(Scalar::ZERO, |acc, &(k, c)| f.mul_add(acc, c, phi[k]))
    })
}

impl FrobeniusForm {
    /// Wraps a covector, failing with [`Error::SingularGram`] when the
    /// associated pairing is degenerate.
    pub fn new(alg: &AlgebraSpec, phi: Vec<Scalar>) -> Result<FrobeniusForm> {
        let gram = gram_matrix(alg, &phi);
        let gram_inv = gram.inverse().map_err(|_| Error::SingularGram)?;
        Ok(FrobeniusForm { phi, gram, gram_inv })
    }
}

/// Seeded random search for a Frobenius form. Each attempt draws a
/// uniform covector and tests Gram invertibility; by Schwartz–Zippel a
/// Frobenius algebra fails a single attempt with probability at most
/// `dim / p`.
pub fn find_frobenius_form(alg: &AlgebraSpec, seed: u64, attempts: u64) -> Result<FrobeniusForm> {
    assert!(attempts >= 1);
    let p = alg.field().modulus();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..attempts {
        let phi: Vec<Scalar> = (0..alg.dim()).map(|_| Scalar(rng.gen_range(0..p))).collect();
        if phi.iter().all(|c| c.is_zero()) {
            continue;
        }
        if let Ok(form) = FrobeniusForm::new(alg, phi) {
            return Ok(form);
        }
    }
    Err(Error::NotFrobeniusWithinAttempts { attempts, seed, p })
}

/// The matrix of the Nakayama automorphism for the given form, verified to
/// be a unital algebra automorphism fixing `phi`.
pub fn nakayama_matrix(alg: &AlgebraSpec, form: &FrobeniusForm) -> Result<DenseMatrix> {
    let f = alg.field();
    let d = alg.dim();
    // phi(e_i e_j) = phi(rho(e_j) e_i) for all i: G^T rho = G.
    let rho = form.gram_inv.transpose().mul(&form.gram);
    // Defining identity, exhaustively.
    for i in 0..d {
        for j in 0..d {
            let lhs = form.gram.get(i, j);
            let mut rhs = Scalar::ZERO;
            for k in 0..d {
                rhs = f.mul_add(rhs, rho.get(k, j), form.gram.get(k, i));
            }
            if lhs != rhs {
                return Err(Error::InconsistentSystem);
            }
        }
    }
    // Automorphism property on all basis pairs, rho(1) = 1, phi . rho = phi.
    if rho.mul_vec(alg.unit_coords()) != alg.unit_coords() {
        return Err(Error::InconsistentSystem);
    }
    for i in 0..d {
        let ri = Element { coords: rho.column(i) };
        for j in 0..d {
            let rj = Element { coords: rho.column(j) };
            let lhs = {
                let prod = alg.multiply(&Element::basis(d, i), &Element::basis(d, j))?;
                rho.mul_vec(&prod.coords)
            };
            let rhs = alg.multiply(&ri, &rj)?.coords;
            if lhs != rhs {
                return Err(Error::InconsistentSystem);
            }
        }
    }
    let phi_rho: Vec<Scalar> = (0..d)
        .map(|j| alg.apply_covector(&form.phi, &Element { coords: rho.column(j) }))
        .collect();
    if phi_rho != form.phi {
        return Err(Error::InconsistentSystem);
    }
    Ok(rho)
}

/// Nakayama automorphism with its order and the root of unity that grades
/// the algebra.
#[derive(Debug, Clone)]
pub struct NakayamaData {
    pub rho: DenseMatrix,
    pub order: u64,
    pub root: Scalar,
}

impl NakayamaData {
    pub fn new(alg: &AlgebraSpec, form: &FrobeniusForm, cap: u64) -> Result<NakayamaData> {
        let rho = nakayama_matrix(alg, form)?;
        let order = rho.order(cap)?;
        let root = alg
            .field()
            .primitive_root_of_unity(order)
            .map_err(|_| Error::HypothesisFailure { m: order, p: alg.field().modulus() })?;
        Ok(NakayamaData { rho, order, root })
    }
}

/// Ordered eigenspace bases `A_0, ..., A_{m-1}` with change-of-basis data.
///
/// The unit is always the first basis vector of `A_0`, and the
/// concatenated bases are the columns of `from_graded`.
#[derive(Debug, Clone)]
pub struct Grading {
    pub components: Vec<Vec<Vec<Scalar>>>,
    pub from_graded: DenseMatrix,
    pub to_graded: DenseMatrix,
    pub class_of: Vec<usize>,
    pub strongly_graded: bool,
    pub m: usize,
    pub root: Scalar,
}

impl Grading {
    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.len()).collect()
    }

    pub fn class_range(&self, i: usize) -> Range<usize> {
        let start: usize = self.components[..i].iter().map(|c| c.len()).sum();
        start..start + self.components[i].len()
    }
}

/// Decomposes the algebra into Nakayama eigenspaces.
pub fn eigen_grading(alg: &AlgebraSpec, nak: &NakayamaData) -> Result<Grading> {
    let f = alg.field();
    let d = alg.dim();
    let m = nak.order as usize;
    let p = f.modulus();
    if (p - 1) % nak.order != 0 {
        return Err(Error::HypothesisFailure { m: nak.order, p });
    }
    if f.pow(nak.root, nak.order) != f.one()
        || (1..nak.order).any(|r| f.pow(nak.root, r) == f.one())
    {
        return Err(Error::BadRoot(nak.root.0, nak.order));
    }

    let mut components: Vec<Vec<Vec<Scalar>>> = Vec::with_capacity(m);
    for i in 0..m {
        let wi = f.pow(nak.root, i as u64);
        let shifted = nak.rho.sub(&DenseMatrix::identity(f, d).scale(wi));
        let mut basis = shifted.kernel_basis();
        if i == 0 {
            // Re-basis A_0 so the unit comes first.
            let mut vectors = vec![alg.unit_coords().to_vec()];
            vectors.extend(basis.iter().cloned());
            basis = greedy_independent(f, d, vectors, basis.len());
        }
        components.push(basis);
    }
    let total: usize = components.iter().map(|c| c.len()).sum();
    if total != d {
        // Cannot happen when m | p - 1: X^m - 1 splits with distinct roots.
        return Err(Error::InconsistentSystem);
    }
    let columns: Vec<Vec<Scalar>> = components.iter().flatten().cloned().collect();
    let from_graded = DenseMatrix::from_columns(f, d, &columns);
    let to_graded = from_graded.inverse().map_err(|_| Error::InconsistentSystem)?;
    let class_of: Vec<usize> = components
        .iter()
        .enumerate()
        .flat_map(|(i, c)| std::iter::repeat(i).take(c.len()))
        .collect();

    // Eigenvector property per basis vector.
    for (i, comp) in components.iter().enumerate() {
        let wi = f.pow(nak.root, i as u64);
        for v in comp {
            let rv = nak.rho.mul_vec(v);
            let scaled: Vec<Scalar> = v.iter().map(|&c| f.mul(c, wi)).collect();
            if rv != scaled {
                return Err(Error::InconsistentSystem);
            }
        }
    }
    let mut grading = Grading {
        components,
        from_graded,
        to_graded,
        class_of,
        strongly_graded: false,
        m,
        root: nak.root,
    };
    // Closure A_i A_j <= A_{i+j} on all homogeneous basis pairs.
    for i in 0..m {
        for j in 0..m {
            let target = (i + j) % m;
            for u in &grading.components[i] {
                for v in &grading.components[j] {
                    let prod = alg.multiply(
                        &Element { coords: u.clone() },
                        &Element { coords: v.clone() },
                    )?;
                    let graded = grading.to_graded.mul_vec(&prod.coords);
                    for (idx, c) in graded.iter().enumerate() {
                        if !c.is_zero() && grading.class_of[idx] != target {
                            return Err(Error::InconsistentSystem);
                        }
                    }
                }
            }
        }
    }
    grading.strongly_graded = is_strongly_graded(alg, &grading);
    Ok(grading)
}

/// Greedily selects `count` independent vectors from the list, in order.
fn greedy_independent(
    f: PrimeField,
    dim: usize,
    vectors: Vec<Vec<Scalar>>,
    count: usize,
) -> Vec<Vec<Scalar>> {
    let mut chosen: Vec<Vec<Scalar>> = Vec::with_capacity(count);
    for v in vectors {
        if chosen.len() == count {
            break;
        }
        let mut candidate = chosen.clone();
        candidate.push(v.clone());
        let m = DenseMatrix::from_columns(f, dim, &candidate);
        if m.rank() == candidate.len() {
            chosen.push(v);
        }
    }
    chosen
}

/// `true` iff `span(A_i A_j) = A_{i+j}` for every pair of classes, by rank
/// comparison of the product span against the component dimension.
pub fn is_strongly_graded(alg: &AlgebraSpec, grading: &Grading) -> bool {
    let f = alg.field();
    let m = grading.m;
    for i in 0..m {
        for j in 0..m {
            let target = (i + j) % m;
            let want = grading.components[target].len();
            let mut prods: Vec<Vec<Scalar>> = Vec::new();
            for u in &grading.components[i] {
                for v in &grading.components[j] {
                    let prod = alg
                        .multiply(&Element { coords: u.clone() }, &Element { coords: v.clone() })
                        .expect("component vectors have the algebra's dimension");
                    prods.push(prod.coords);
                }
            }
            let rank = if prods.is_empty() {
                0
            } else {
                DenseMatrix::from_columns(f, alg.dim(), &prods).rank()
            };
            if rank != want {
                return false;
            }
        }
    }
    true
}

/// The algebra rewritten in its graded basis: classes occupy contiguous
/// index ranges, the unit is basis vector 0, and the Nakayama matrix is
/// diagonal. This is the working coordinate system for every graded
/// computation downstream.
#[derive(Debug, Clone)]
pub struct GradedAlgebra {
    pub alg: AlgebraSpec,
    pub class_of: Vec<usize>,
    pub class_ranges: Vec<Range<usize>>,
    pub m: usize,
    pub root: Scalar,
}

impl GradedAlgebra {
    pub fn new(alg: &AlgebraSpec, grading: &Grading) -> Result<GradedAlgebra> {
        let rewritten = alg.change_basis(&grading.from_graded)?;
        debug_assert_eq!(rewritten.unit_coords(), {
            let mut u = vec![Scalar::ZERO; alg.dim()];
            u[0] = alg.field().one();
            u
        });
        let class_ranges = (0..grading.m).map(|i| grading.class_range(i)).collect();
        Ok(GradedAlgebra {
            alg: rewritten,
            class_of: grading.class_of.clone(),
            class_ranges,
            m: grading.m,
            root: grading.root,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.alg.field()
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn component_dim(&self, i: usize) -> usize {
        self.class_ranges[i].len()
    }

    /// Extracts the degree-zero component as a standalone unital algebra.
    pub fn zero_component_subalgebra(&self) -> Result<AlgebraSpec> {
        let range = self.class_ranges[0].clone();
        let d0 = range.len();
        let f = self.field();
        let mut structure = vec![vec![vec![Scalar::ZERO; d0]; d0]; d0];
        for (i, gi) in range.clone().enumerate() {
            for (j, gj) in range.clone().enumerate() {
                for &(k, c) in self.alg.basis_product(gi, gj) {
                    assert!(range.contains(&k), "class 0 is closed under products");
                    structure[i][j][k - range.start] = c;
                }
            }
        }
        let mut unit = vec![Scalar::ZERO; d0];
        unit[0] = f.one();
        let labels = (0..d0).map(|i| format!("a{i}")).collect();
        AlgebraSpec::from_structure(f, labels, &structure, unit, true)
    }
}

/// Twists a form by an element: `(x phi)(a) = phi(a x)`, i.e. `G x` as a
/// covector. For invertible `x` this is again a Frobenius form.
pub fn twist_form(form: &FrobeniusForm, x: &Element) -> Vec<Scalar> {
    form.gram.mul_vec(&x.coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{cyclic_group_algebra, matrix_algebra, taft, truncated_poly};

    fn f13() -> PrimeField {
        PrimeField::new(13).unwrap()
    }

    fn trace_form(alg: &AlgebraSpec, n: usize) -> FrobeniusForm {
        let f = alg.field();
        let mut phi = vec![Scalar::ZERO; n * n];
        for a in 0..n {
            phi[a * n + a] = f.one();
        }
        FrobeniusForm::new(alg, phi).unwrap()
    }

    #[test]
    fn gram_of_trace_on_matrices() {
        let alg = matrix_algebra(2, f13()).unwrap();
        let form = trace_form(&alg, 2);
        // tr(e_ab e_cd) = [b=c][d=a]: a permutation matrix.
        for i in 0..4 {
            for j in 0..4 {
                let (a, b) = (i / 2, i % 2);
                let (c, d) = (j / 2, j % 2);
                let expect = if b == c && d == a { Scalar(1) } else { Scalar::ZERO };
                assert_eq!(form.gram.get(i, j), expect);
            }
        }
    }

    #[test]
    fn gram_of_dual_socle_form() {
        let alg = truncated_poly(2, f13()).unwrap();
        let phi = vec![Scalar::ZERO, Scalar(1)];
        let g = gram_matrix(&alg, &phi);
        assert_eq!(
            (g.get(0, 0), g.get(0, 1), g.get(1, 0), g.get(1, 1)),
            (Scalar::ZERO, Scalar(1), Scalar(1), Scalar::ZERO)
        );
        assert!(FrobeniusForm::new(&alg, phi).is_ok());
    }

    #[test]
    fn zero_form_is_singular() {
        let alg = matrix_algebra(2, f13()).unwrap();
        assert!(matches!(
            FrobeniusForm::new(&alg, vec![Scalar::ZERO; 4]),
            Err(Error::SingularGram)
        ));
    }

    #[test]
    fn split_product_forms_need_full_support() {
        // F_13 x F_13 with phi supported on one factor is singular; the
        // random search still succeeds.
        let f = f13();
        let mut structure = vec![vec![vec![Scalar::ZERO; 2]; 2]; 2];
        structure[0][0][0] = f.one();
        structure[1][1][1] = f.one();
        let alg = AlgebraSpec::from_structure(
            f,
            vec!["u".into(), "v".into()],
            &structure,
            vec![f.one(), f.one()],
            true,
        )
        .unwrap();
        assert!(FrobeniusForm::new(&alg, vec![Scalar(1), Scalar::ZERO]).is_err());
        assert!(FrobeniusForm::new(&alg, vec![Scalar(1), Scalar(1)]).is_ok());
        assert!(find_frobenius_form(&alg, 1, 16).is_ok());
    }

    #[test]
    fn search_is_deterministic() {
        let alg = matrix_algebra(2, f13()).unwrap();
        let a = find_frobenius_form(&alg, 42, 16).unwrap();
        let b = find_frobenius_form(&alg, 42, 16).unwrap();
        assert_eq!(a.phi, b.phi);
    }

    #[test]
    fn trace_nakayama_is_identity() {
        let alg = matrix_algebra(2, f13()).unwrap();
        let rho = nakayama_matrix(&alg, &trace_form(&alg, 2)).unwrap();
        assert!(rho.is_identity());
        let nak = NakayamaData::new(&alg, &trace_form(&alg, 2), 100).unwrap();
        assert_eq!(nak.order, 1);
        assert_eq!(nak.root, Scalar(1));
    }

    #[test]
    fn commutative_nakayama_is_identity() {
        let alg = truncated_poly(2, f13()).unwrap();
        let form = FrobeniusForm::new(&alg, vec![Scalar::ZERO, Scalar(1)]).unwrap();
        assert!(nakayama_matrix(&alg, &form).unwrap().is_identity());
    }

    // The canonical Taft form is the dual right integral, solved for in
    // `hopf`; it is the dual basis vector of x^{N-1} g, used here directly
    // to exercise the grading machinery.
    fn taft_canonical_form(alg: &AlgebraSpec, n: usize) -> FrobeniusForm {
        let mut phi = vec![Scalar::ZERO; n * n];
        phi[(n - 1) * n + 1] = Scalar(1);
        FrobeniusForm::new(alg, phi).unwrap()
    }

    fn taft2_with_grading() -> (AlgebraSpec, NakayamaData, Grading) {
        let f = f13();
        let alg = taft(2, f, Scalar(12)).unwrap();
        let form = taft_canonical_form(&alg, 2);
        let nak = NakayamaData::new(&alg, &form, 100).unwrap();
        let grading = eigen_grading(&alg, &nak).unwrap();
        (alg, nak, grading)
    }

    #[test]
    fn taft2_grading_dims_and_membership() {
        let (_, nak, grading) = taft2_with_grading();
        assert_eq!(nak.order, 2);
        assert_eq!(nak.root, Scalar(12));
        assert_eq!(grading.dims(), vec![2, 2]);
        // A_0 = span{1, xg}: first vector is the unit.
        assert_eq!(
            grading.components[0][0],
            vec![Scalar(1), Scalar::ZERO, Scalar::ZERO, Scalar::ZERO]
        );
        for v in &grading.components[0] {
            assert!(v[1].is_zero() && v[2].is_zero());
        }
        // A_1 = span{g, x}.
        for v in &grading.components[1] {
            assert!(v[0].is_zero() && v[3].is_zero());
        }
        assert!(grading.strongly_graded);
    }

    #[test]
    fn taft3_grading_dims() {
        let f = f13();
        let alg = taft(3, f, Scalar(3)).unwrap();
        let form = taft_canonical_form(&alg, 3);
        let nak = NakayamaData::new(&alg, &form, 100).unwrap();
        assert_eq!(nak.order, 3);
        let grading = eigen_grading(&alg, &nak).unwrap();
        assert_eq!(grading.dims(), vec![3, 3, 3]);
        assert!(grading.strongly_graded);
    }

    #[test]
    fn single_class_grading_for_matrices() {
        let alg = matrix_algebra(2, f13()).unwrap();
        let nak = NakayamaData::new(&alg, &trace_form(&alg, 2), 100).unwrap();
        let grading = eigen_grading(&alg, &nak).unwrap();
        assert_eq!(grading.dims(), vec![4]);
        assert!(grading.strongly_graded);
    }

    #[test]
    fn synthetic_grading_on_dual_numbers_is_not_strong() {
        // k[x]/(x^2) graded manually by A_0 = k, A_1 = kx: A_1 A_1 = 0.
        let f = f13();
        let alg = truncated_poly(2, f).unwrap();
        let grading = Grading {
            components: vec![
                vec![vec![Scalar(1), Scalar::ZERO]],
                vec![vec![Scalar::ZERO, Scalar(1)]],
            ],
            from_graded: DenseMatrix::identity(f, 2),
            to_graded: DenseMatrix::identity(f, 2),
            class_of: vec![0, 1],
            strongly_graded: false,
            m: 2,
            root: Scalar(12),
        };
        assert!(!is_strongly_graded(&alg, &grading));
    }

    #[test]
    fn group_algebra_is_symmetric() {
        let alg = cyclic_group_algebra(3, f13()).unwrap();
        let mut phi = vec![Scalar::ZERO; 3];
        phi[0] = Scalar(1);
        let form = FrobeniusForm::new(&alg, phi).unwrap();
        assert!(nakayama_matrix(&alg, &form).unwrap().is_identity());
    }

    #[test]
    fn twisted_forms_conjugate_the_nakayama_map() {
        use rand::{Rng, SeedableRng};
        let f = f13();
        let alg = taft(2, f, Scalar(12)).unwrap();
        let mut phi = vec![Scalar::ZERO; 4];
        phi[2] = f.one();
        let form = FrobeniusForm::new(&alg, phi).unwrap();
        let rho = nakayama_matrix(&alg, &form).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let mut tested = 0;
        while tested < 5 {
            let x = Element { coords: (0..4).map(|_| Scalar(rng.gen_range(0..13))).collect() };
            let lx = alg.left_mul_matrix(&x).unwrap();
            if lx.rank() < 4 {
                continue; // not invertible
            }
            tested += 1;
            let form2 = FrobeniusForm::new(&alg, twist_form(&form, &x)).unwrap();
            let rho2 = nakayama_matrix(&alg, &form2).unwrap();
            // Expect a -> rho(x)^{-1} rho(a) rho(x).
            let rx = Element { coords: rho.mul_vec(&x.coords) };
            let l_rx = alg.left_mul_matrix(&rx).unwrap();
            let rx_inv = Element { coords: l_rx.solve(alg.unit_coords()).unwrap() };
            let expected = alg
                .left_mul_matrix(&rx_inv)
                .unwrap()
                .mul(&alg.right_mul_matrix(&rx).unwrap())
                .mul(&rho);
            assert_eq!(rho2, expected);
        }
    }

    #[test]
    fn graded_algebra_rewrite() {
        let (alg, _, grading) = taft2_with_grading();
        let g = GradedAlgebra::new(&alg, &grading).unwrap();
        assert_eq!(g.class_of, vec![0, 0, 1, 1]);
        assert_eq!(g.component_dim(0), 2);
        // Products respect classes in the rewritten basis.
        for i in 0..4 {
            for j in 0..4 {
                let target = (g.class_of[i] + g.class_of[j]) % 2;
                for &(k, _) in g.alg.basis_product(i, j) {
                    assert_eq!(g.class_of[k], target);
                }
            }
        }
        let a0 = g.zero_component_subalgebra().unwrap();
        assert_eq!(a0.dim(), 2);
        // A_0 of taft(2) is spanned by 1 and xg with (xg)^2 = 0.
        assert!(a0.basis_product(1, 1).is_empty());
    }
}
