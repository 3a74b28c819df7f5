use serde::Serialize;

use crate::algebra::{LeibnizAlgebra, TableBuilder};
use crate::rational::Rational;

use super::{CharSeqSpec, ConstructionError};

/// Parameters of the normalized family: `alphas[b]` is the coefficient of
/// `h` in the square of the first element of block `b`, and `betas[b]` the
/// `h` part of `[e1, first element of block b]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LFamilyParams {
    pub spec: CharSeqSpec,
    pub alphas: Vec<Rational>,
    pub betas: Vec<Rational>,
}

impl LFamilyParams {
    pub fn new(spec: CharSeqSpec, alphas: Vec<Rational>, betas: Vec<Rational>) -> Result<Self, ConstructionError> {
        let k = spec.k();
        check_len("alphas", k, alphas.len())?;
        check_len("betas", k, betas.len())?;
        Ok(LFamilyParams { spec, alphas, betas })
    }

    /// All parameters zero.
    pub fn zero(spec: CharSeqSpec) -> Self {
        let k = spec.k();
        LFamilyParams { spec, alphas: vec![Rational::zero(); k], betas: vec![Rational::zero(); k] }
    }
}

fn check_len(what: &'static str, expected: usize, found: usize) -> Result<(), ConstructionError> {
    if expected != found {
        return Err(ConstructionError::ParamCount { what, expected, found });
    }
    Ok(())
}

fn e_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("e{i}")).collect()
}

fn x_labels(k: usize) -> impl Iterator<Item = String> {
    (1..=k + 1).map(|i| format!("x{i}"))
}

/// `[g, e1] = -[e1, g] = next` along every block.
fn add_chains(t: &mut TableBuilder, spec: &CharSeqSpec) {
    for block in spec.block_ranges() {
        for i in block.start..block.end - 1 {
            t.add_antisymmetric(i, 0, i + 1, 1);
        }
    }
}

/// The nilpotent Lie algebra of the characteristic sequence.
pub fn build_n_c(spec: &CharSeqSpec) -> Result<LeibnizAlgebra, ConstructionError> {
    let mut t = TableBuilder::new(e_labels(spec.chain_dim()));
    add_chains(&mut t, spec);
    Ok(t.build()?)
}

/// Toral actions shared by the solvable Lie and Leibniz families: `x1`
/// scales `e1` by 1 and a block element at position `p` by `p`; `x_{b+2}`
/// is the identity on block `b`.
fn add_torus(t: &mut TableBuilder, spec: &CharSeqSpec, x0: usize) {
    t.add_antisymmetric(0, x0, 0, 1);
    for (b, block) in spec.block_ranges().into_iter().enumerate() {
        for (p, i) in block.enumerate() {
            if p > 0 {
                t.add_antisymmetric(i, x0, i, p as i64);
            }
            t.add_antisymmetric(i, x0 + 1 + b, i, 1);
        }
    }
}

/// The solvable Lie algebra with nilradical `n_c` and a `k+1` dimensional torus.
pub fn build_r_c(spec: &CharSeqSpec) -> Result<LeibnizAlgebra, ConstructionError> {
    let n = spec.chain_dim();
    let mut t = TableBuilder::new(e_labels(n).into_iter().chain(x_labels(spec.k())));
    add_chains(&mut t, spec);
    add_torus(&mut t, spec, n);
    Ok(t.build()?)
}

/// The Leibniz chain part shared by both forms of the nilpotent family.
/// `square_e1` is the `h` coefficient of `[e1, e1]`.
fn l_table(
    spec: &CharSeqSpec,
    square_e1: &Rational,
    alphas: &[Rational],
    betas: &[Rational],
) -> TableBuilder {
    let n = spec.chain_dim();
    let h = n;
    let mut t = TableBuilder::new(e_labels(n).into_iter().chain(["h".to_string()]));
    for (b, block) in spec.block_ranges().into_iter().enumerate() {
        let first = block.start;
        for i in block.start..block.end - 1 {
            t.add(i, 0, i + 1, 1);
            t.add(0, i, i + 1, -1);
        }
        t.add(first, first, h, alphas[b].clone());
        t.add(0, first, h, betas[b].clone());
    }
    t.add(0, 0, h, square_e1.clone());
    t
}

/// The normalized nilpotent family with `[e1, e1] = h`.
pub fn build_l_general(params: &LFamilyParams) -> Result<LeibnizAlgebra, ConstructionError> {
    params.spec.require_long_first_block()?;
    Ok(l_table(&params.spec, &Rational::one(), &params.alphas, &params.betas).build()?)
}

/// The family before normalization: `alphas` has `k+1` entries, the first
/// being the `h` coefficient of `[e1, e1]`; `betas` has `k`.
pub fn build_l_prenormalized(
    spec: &CharSeqSpec,
    alphas: &[Rational],
    betas: &[Rational],
) -> Result<LeibnizAlgebra, ConstructionError> {
    spec.require_long_first_block()?;
    check_len("alphas", spec.k() + 1, alphas.len())?;
    check_len("betas", spec.k(), betas.len())?;
    Ok(l_table(spec, &alphas[0], &alphas[1..], betas).build()?)
}

fn check_particular(n1: usize, n2: usize) -> Result<(), ConstructionError> {
    if n1 < 2 || n2 < 1 || n2 > n1 {
        return Err(ConstructionError::InvalidSpec(format!("need n1 >= n2 >= 1 and n1 >= 2, got ({n1},{n2})")));
    }
    Ok(())
}

struct Particular {
    n1: usize,
    n2: usize,
}

impl Particular {
    fn e(&self, i: usize) -> usize {
        i - 1
    }
    fn f(&self, i: usize) -> usize {
        self.n1 + i
    }
    fn h(&self) -> usize {
        self.n1 + self.n2 + 1
    }
    fn x(&self, i: usize) -> usize {
        self.h() + i
    }
    fn labels(&self, with_torus: bool) -> Vec<String> {
        let mut l: Vec<String> = (1..=self.n1 + 1).map(|i| format!("e{i}")).collect();
        l.extend((1..=self.n2).map(|i| format!("f{i}")));
        l.push("h".into());
        if with_torus {
            l.extend(["x1", "x2", "x3"].map(String::from));
        }
        l
    }
}

/// Two-block nilpotent family on `e1..e_{n1+1}, f1..f_{n2}, h`.
pub fn build_l_particular(
    n1: usize,
    n2: usize,
    a2: impl Into<Rational>,
    a3: impl Into<Rational>,
    b1: impl Into<Rational>,
    b2: impl Into<Rational>,
) -> Result<LeibnizAlgebra, ConstructionError> {
    check_particular(n1, n2)?;
    let p = Particular { n1, n2 };
    let mut t = TableBuilder::new(p.labels(false));
    let (e1, h) = (p.e(1), p.h());
    for i in 2..=n1 {
        t.add(p.e(i), e1, p.e(i + 1), 1);
    }
    for i in 3..=n1 {
        t.add(e1, p.e(i), p.e(i + 1), -1);
    }
    for i in 1..n2 {
        t.add(p.f(i), e1, p.f(i + 1), 1);
    }
    for i in 2..n2 {
        t.add(e1, p.f(i), p.f(i + 1), -1);
    }
    t.add(e1, e1, h, 1);
    t.add(p.e(2), p.e(2), h, a2);
    t.add(p.f(1), p.f(1), h, a3);
    t.add(e1, p.e(2), p.e(3), -1);
    t.add(e1, p.e(2), h, b1);
    if n2 >= 2 {
        t.add(e1, p.f(1), p.f(2), -1);
    }
    t.add(e1, p.f(1), h, b2);
    Ok(t.build()?)
}

/// Solvable Leibniz algebra with nilradical the two-block family and a
/// three-dimensional torus.
pub fn build_r_particular(n1: usize, n2: usize) -> Result<LeibnizAlgebra, ConstructionError> {
    check_particular(n1, n2)?;
    let p = Particular { n1, n2 };
    let mut t = TableBuilder::new(p.labels(true));
    let (e1, h) = (p.e(1), p.h());
    let (x1, x2, x3) = (p.x(1), p.x(2), p.x(3));
    t.add(e1, e1, h, 1);
    t.add(h, x1, h, 2);
    for i in 2..=n1 {
        t.add_antisymmetric(p.e(i), e1, p.e(i + 1), 1);
    }
    for i in 1..n2 {
        t.add_antisymmetric(p.f(i), e1, p.f(i + 1), 1);
    }
    t.add_antisymmetric(e1, x1, e1, 1);
    for i in 3..=n1 + 1 {
        t.add_antisymmetric(p.e(i), x1, p.e(i), i as i64 - 2);
    }
    for i in 2..=n2 {
        t.add_antisymmetric(p.f(i), x1, p.f(i), i as i64 - 1);
    }
    for i in 2..=n1 + 1 {
        t.add_antisymmetric(p.e(i), x2, p.e(i), 1);
    }
    for i in 1..=n2 {
        t.add_antisymmetric(p.f(i), x3, p.f(i), 1);
    }
    Ok(t.build()?)
}

/// Solvable Leibniz algebra with nilradical the normalized family at zero
/// parameters and a `k+1` dimensional torus.
pub fn build_r_general(spec: &CharSeqSpec) -> Result<LeibnizAlgebra, ConstructionError> {
    spec.require_long_first_block()?;
    let n = spec.chain_dim();
    let h = n;
    let mut t = TableBuilder::new(e_labels(n).into_iter().chain(["h".to_string()]).chain(x_labels(spec.k())));
    t.add(0, 0, h, 1);
    t.add(h, h + 1, h, 2);
    add_chains(&mut t, spec);
    add_torus(&mut t, spec, h + 1);
    Ok(t.build()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::SubspaceBasis;
    use crate::rational::q;

    fn spec(p: &[usize]) -> CharSeqSpec {
        CharSeqSpec::new(p.to_vec()).unwrap()
    }

    fn products(a: &LeibnizAlgebra) -> Vec<(String, String, Vec<(String, Rational)>)> {
        a.products()
            .map(|((i, j), p)| {
                let l = a.labels();
                (l[i].clone(), l[j].clone(), p.iter().map(|(k, c)| (l[*k].clone(), c.clone())).collect())
            })
            .collect()
    }

    #[test]
    fn n_c_small_cases() {
        let a = build_n_c(&spec(&[2, 1])).unwrap();
        assert_eq!(a.dim(), 4);
        let p = products(&a);
        assert_eq!(
            p,
            vec![
                ("e1".into(), "e2".into(), vec![("e3".into(), q(-1, 1))]),
                ("e2".into(), "e1".into(), vec![("e3".into(), q(1, 1))]),
            ]
        );
        assert!(a.is_lie());
        let b = build_n_c(&spec(&[2, 2])).unwrap();
        assert_eq!(b.dim(), 5);
        assert_eq!(b.nonzero_products(), 4);
        assert_eq!(b.product(3, 0), &[(4, q(1, 1))]);
        assert_eq!(build_n_c(&spec(&[2])).unwrap().dim(), 3);
    }

    #[test]
    fn r_c_weights() {
        let a = build_r_c(&spec(&[4, 3])).unwrap();
        assert_eq!(a.dim(), 1 + 7 + 3);
        assert!(a.is_lie());
        let x1 = a.label_index("x1").unwrap();
        assert_eq!(a.product(0, x1), &[(0, q(1, 1))]);
        let r = a.right_mult_basis(x1);
        // e3..e5 carry weights 1..3
        for i in 3..=5 {
            assert_eq!(r.get(i - 1, i - 1), q(i as i64 - 2, 1));
        }
        // second block e6, e7, e8 carries weights 0, 1, 2
        assert_eq!((5..8).map(|i| r.get(i, i)).collect::<Vec<_>>(), vec![q(0, 1), q(1, 1), q(2, 1)]);
        assert_eq!(build_r_c(&spec(&[2, 1])).unwrap().dim(), 7);
    }

    #[test]
    fn l_particular_counts() {
        let a = build_l_particular(2, 1, 0, 0, 0, 0).unwrap();
        assert_eq!(a.dim(), 5);
        // [e2,e1] = e3, [e1,e1] = h, [e1,e2] = -e3
        assert_eq!(a.nonzero_products(), 3);
        assert_eq!(a.product(0, 0), &[(4, q(1, 1))]);
        let b = build_l_particular(3, 2, 1, 1, 0, 0).unwrap();
        assert!(b.check_identity().passed());
        assert!(b.is_nilpotent());
        assert!(build_l_particular(1, 1, 0, 0, 0, 0).is_err());
        assert!(build_l_particular(2, 3, 0, 0, 0, 0).is_err());
    }

    #[test]
    fn l_general_matches_particular() {
        for (n1, n2) in [(2, 1), (2, 2), (3, 1), (4, 3)] {
            let params = LFamilyParams::new(spec(&[n1, n2]), vec![q(1, 1), q(2, 1)], vec![q(3, 1), q(5, 1)]).unwrap();
            let g = build_l_general(&params).unwrap();
            let p = build_l_particular(n1, n2, 1, 2, 3, 5).unwrap();
            assert!(g.same_table(&p), "({n1},{n2})");
        }
    }

    #[test]
    fn l_general_generic_parameters() {
        for parts in [&[2, 1][..], &[3, 3, 1], &[2], &[4, 2, 2, 1]] {
            let s = spec(parts);
            let k = s.k();
            let alphas = (0..k).map(|i| q(i as i64 + 1, 3)).collect();
            let betas = (0..k).map(|i| q(2 - i as i64, 7)).collect();
            let a = build_l_general(&LFamilyParams::new(s, alphas, betas).unwrap()).unwrap();
            assert!(a.is_nilpotent());
            let h = a.label_index("h").unwrap();
            let ann = a.right_annihilator();
            assert!(ann.contains(a.basis_element(h).coords()));
        }
    }

    #[test]
    fn r_general_matches_particular_and_quotient() {
        for (n1, n2) in [(2, 1), (3, 2), (3, 3)] {
            let g = build_r_general(&spec(&[n1, n2])).unwrap();
            let p = build_r_particular(n1, n2).unwrap();
            assert!(g.same_table(&p));
            assert_eq!(p.dim(), n1 + n2 + 5);
        }
        let s = spec(&[3, 2, 1]);
        let r = build_r_general(&s).unwrap();
        assert!(r.is_solvable() && !r.is_nilpotent());
        let h = r.label_index("h").unwrap();
        let ideal = SubspaceBasis::from_vectors(r.dim(), &[r.basis_element(h).coords().to_vec()]).unwrap();
        let quo = r.quotient_by_ideal(&ideal).unwrap();
        assert!(quo.algebra.same_table(&build_r_c(&s).unwrap()));
    }

    #[test]
    fn r_particular_structure() {
        let r = build_r_particular(2, 1).unwrap();
        assert_eq!(r.dim(), 8);
        let (h, x1) = (r.label_index("h").unwrap(), r.label_index("x1").unwrap());
        assert_eq!(r.product(h, x1), &[(h, q(2, 1))]);
        assert!(r.product(x1, h).is_empty());
    }
}
