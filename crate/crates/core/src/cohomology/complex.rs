use serde::Serialize;

use crate::algebra::LeibnizAlgebra;
use crate::linalg::{kernel_basis, rank, solve, RatMatrix, SubspaceBasis};
use crate::rational::Rational;

use super::{Cochain, CohomologyConfig, CohomologyError, LeibnizModule};

fn sign(even: bool) -> Rational {
    if even {
        Rational::one()
    } else {
        -Rational::one()
    }
}

fn add_scaled(out: &mut [Rational], action: &RatMatrix, v: &[Rational], factor: &Rational) {
    for (s, u, c) in action.entries() {
        if !v[u].is_zero() {
            out[s] += &(factor * &(c * &v[u]));
        }
    }
}

/// `d^n phi` by evaluating, on every basis tuple,
///
/// ```text
/// [x1, phi(x2..)] + sum_i (-1)^i [phi(..^x_i..), x_i]
///     + sum_{i<j} (-1)^{j+1} phi(x1..x_{i-1}, [x_i,x_j], x_{i+1}..^x_j..)
/// ```
pub fn coboundary(module: &LeibnizModule, phi: &Cochain, cfg: &CohomologyConfig) -> Result<Cochain, CohomologyError> {
    phi.check_module(module)?;
    let l = module.algebra();
    let (a, m, n) = (l.dim(), module.dim(), phi.degree());
    cfg.admit(a, m, n)?;
    let mut out = Cochain::zero(module, n + 1);
    let tuples = super::cochain_len(a, 1, n + 1) as usize;
    let mut args = vec![0; n + 1];
    for flat in 0..tuples {
        let mut rest = flat;
        for slot in args.iter_mut().rev() {
            *slot = rest % a;
            rest /= a;
        }
        let mut acc = vec![Rational::zero(); m];
        add_scaled(&mut acc, module.left_action(args[0]), &phi.value(&args[1..])?, &Rational::one());
        for p in 1..=n {
            let mut omitted = args.clone();
            let x = omitted.remove(p);
            add_scaled(&mut acc, module.right_action(x), &phi.value(&omitted)?, &sign(p % 2 == 1));
        }
        for q in 1..=n {
            for p in 0..q {
                for (k, c) in l.product(args[p], args[q]) {
                    let mut inner = args.clone();
                    inner.remove(q);
                    inner[p] = *k;
                    let f = &sign(q % 2 == 0) * c;
                    for (o, v) in acc.iter_mut().zip(phi.value(&inner)?) {
                        *o += &(&f * &v);
                    }
                }
            }
        }
        for (t, v) in acc.iter().enumerate() {
            if !v.is_zero() {
                out.add_entry(&args, t, v)?;
            }
        }
    }
    Ok(out)
}

/// Matrix of `d^n : CL^n -> CL^{n+1}` in the flattened bases, assembled from
/// the nonzero action entries and structure constants only.
pub fn coboundary_matrix(module: &LeibnizModule, n: usize, cfg: &CohomologyConfig) -> Result<RatMatrix, CohomologyError> {
    let l = module.algebra();
    let (a, m) = (l.dim(), module.dim());
    cfg.admit(a, m, n)?;
    let pw = |e: usize| a.pow(e as u32);
    let rows = pw(n + 1) * m;
    let cols = pw(n) * m;
    let mut triplets = Vec::new();

    // [x1, phi(x2..x_{n+1})]
    for x in 0..a {
        for (s, u, c) in module.left_action(x).entries() {
            for rest in 0..pw(n) {
                triplets.push(((x * pw(n) + rest) * m + s, rest * m + u, c.clone()));
            }
        }
    }
    // (-1)^{p+1} [phi(..^x_p..), x_p] for 0-based position p >= 1
    for p in 1..=n {
        let f = sign(p % 2 == 1);
        let after = pw(n - p);
        for x in 0..a {
            for (s, u, c) in module.right_action(x).entries() {
                let v = &f * c;
                for o in 0..pw(n) {
                    let (before, tail) = (o / after, o % after);
                    let row = ((before * a + x) * after + tail) * m + s;
                    triplets.push((row, o * m + u, v.clone()));
                }
            }
        }
    }
    // (-1)^q phi(.., [x_p, x_q] at p, .., ^x_q, ..) for 0-based p < q
    for q in 1..=n {
        for p in 0..q {
            let f = sign(q % 2 == 0);
            let (nb, nc) = (q - p - 1, n - q);
            for ((x, y), prod) in l.products() {
                for (k, c) in prod {
                    let v = &f * c;
                    for o in 0..pw(n - 1) {
                        let head = o / pw(nb + nc);
                        let mid = (o / pw(nc)) % pw(nb);
                        let tail = o % pw(nc);
                        let row_tuple = (((head * a + x) * pw(nb) + mid) * a + y) * pw(nc) + tail;
                        let col_tuple = ((head * a + k) * pw(nb) + mid) * pw(nc) + tail;
                        for t in 0..m {
                            triplets.push((row_tuple * m + t, col_tuple * m + t, v.clone()));
                        }
                    }
                }
            }
        }
    }
    Ok(RatMatrix::from_triplets(rows, cols, triplets)?)
}

/// Dimensions of cochains, cocycles, coboundaries and cohomology in one
/// degree, with optional bases of `ZL^n` and `BL^n` as flattened cochains.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyReport {
    pub degree: usize,
    pub dim_cl: usize,
    pub dim_zl: usize,
    pub dim_bl: usize,
    pub dim_hl: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cocycle_basis: Option<Vec<Vec<Rational>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coboundary_basis: Option<Vec<Vec<Rational>>>,
}

pub fn cohomology_report(
    module: &LeibnizModule,
    n: usize,
    with_bases: bool,
    cfg: &CohomologyConfig,
) -> Result<CohomologyReport, CohomologyError> {
    let (a, m) = (module.algebra().dim(), module.dim());
    cfg.admit(a, m, n)?;
    let dim_cl = super::cochain_len(a, m, n) as usize;
    let dn = coboundary_matrix(module, n, cfg)?;
    let prev = if n == 0 { None } else { Some(coboundary_matrix(module, n - 1, cfg)?) };
    let (dim_zl, dim_bl, cocycle_basis, coboundary_basis) = if with_bases {
        let z = kernel_basis(&dn);
        let b = prev.as_ref().map_or(SubspaceBasis::zero(dim_cl), SubspaceBasis::column_space);
        (z.dim(), b.dim(), Some(z.vectors()), Some(b.vectors()))
    } else {
        (dim_cl - rank(&dn), prev.as_ref().map_or(0, rank), None, None)
    };
    debug_assert!(dim_bl <= dim_zl, "d o d must vanish");
    Ok(CohomologyReport {
        degree: n,
        dim_cl,
        dim_zl,
        dim_bl,
        dim_hl: dim_zl.saturating_sub(dim_bl),
        cocycle_basis,
        coboundary_basis,
    })
}

/// A preimage of `phi` under `d^{n-1}`, or `None` when `phi` is not a
/// coboundary.
pub fn coboundary_witness(
    module: &LeibnizModule,
    phi: &Cochain,
    cfg: &CohomologyConfig,
) -> Result<Option<Cochain>, CohomologyError> {
    phi.check_module(module)?;
    let n = phi.degree();
    if n == 0 {
        return Err(CohomologyError::DegreeZeroWitness);
    }
    let d = coboundary_matrix(module, n - 1, cfg)?;
    match solve(&d, &phi.to_flat())? {
        Some(x) => Ok(Some(Cochain::from_flat(module, n - 1, &x)?)),
        None => Ok(None),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompletenessReport {
    pub center_dim: usize,
    pub hl1: CohomologyReport,
    pub complete: bool,
}

/// Centerless with `HL^1(L, L) = 0`.
pub fn is_complete(l: &LeibnizAlgebra, cfg: &CohomologyConfig) -> Result<CompletenessReport, CohomologyError> {
    let center_dim = l.center().dim();
    let hl1 = cohomology_report(&LeibnizModule::adjoint(l), 1, false, cfg)?;
    let complete = center_dim == 0 && hl1.dim_hl == 0;
    Ok(CompletenessReport { center_dim, hl1, complete })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RigidityReport {
    pub hl2: CohomologyReport,
    pub rigid: bool,
}

/// `HL^2(L, L) = 0`.
pub fn is_cohomologically_rigid(l: &LeibnizAlgebra, cfg: &CohomologyConfig) -> Result<RigidityReport, CohomologyError> {
    let hl2 = cohomology_report(&LeibnizModule::adjoint(l), 2, false, cfg)?;
    let rigid = hl2.dim_hl == 0;
    Ok(RigidityReport { hl2, rigid })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::unit;
    use crate::constructions::{build_n_c, build_r_particular, CharSeqSpec};
    use crate::derivations::{derivation_space, flatten_operator, inner_derivations};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg() -> CohomologyConfig {
        CohomologyConfig::default()
    }

    fn nc21() -> LeibnizAlgebra {
        build_n_c(&CharSeqSpec::new(vec![2, 1]).unwrap()).unwrap()
    }

    /// A small non-Lie Leibniz algebra: `[e1,e1] = e3`, `[e2,e1] = e3`.
    fn non_lie() -> LeibnizAlgebra {
        let mut t = crate::algebra::TableBuilder::new(["e1", "e2", "e3"]);
        t.add(0, 0, 2, 1);
        t.add(1, 0, 2, 1);
        t.build().unwrap()
    }

    /// Eq. (5) written out for a 2-cochain.
    fn degree_two_law(module: &LeibnizModule, phi: &Cochain, x: usize, y: usize, z: usize) -> Vec<Rational> {
        let l = module.algebra();
        let a = l.dim();
        let ph = |u: &[Rational], v: &[Rational]| -> Vec<Rational> {
            let mut out = vec![Rational::zero(); module.dim()];
            for i in 0..a {
                for j in 0..a {
                    let c = &u[i] * &v[j];
                    if !c.is_zero() {
                        for (o, w) in out.iter_mut().zip(phi.value(&[i, j]).unwrap()) {
                            *o += &(&c * &w);
                        }
                    }
                }
            }
            out
        };
        let (ex, ey, ez) = (unit(a, x), unit(a, y), unit(a, z));
        let bracket = |p: &[Rational], q: &[Rational]| l.bracket(p, q);
        let terms = [
            (1, bracket(&ex, &ph(&ey, &ez))),
            (-1, bracket(&ph(&ex, &ey), &ez)),
            (1, bracket(&ph(&ex, &ez), &ey)),
            (1, ph(&ex, &bracket(&ey, &ez))),
            (-1, ph(&bracket(&ex, &ey), &ez)),
            (1, ph(&bracket(&ex, &ez), &ey)),
        ];
        let mut out = vec![Rational::zero(); a];
        for (s, v) in terms {
            for (o, w) in out.iter_mut().zip(v) {
                *o += &(&Rational::from(s) * &w);
            }
        }
        out
    }

    #[test]
    fn direct_matches_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for l in [nc21(), non_lie(), build_r_particular(2, 1).unwrap()] {
            let module = LeibnizModule::adjoint(&l);
            for n in 0..=2 {
                if n == 2 && l.dim() > 4 {
                    continue;
                }
                let d = coboundary_matrix(&module, n, &cfg()).unwrap();
                let phi = Cochain::random(&module, n, &mut rng);
                let direct = coboundary(&module, &phi, &cfg()).unwrap();
                assert_eq!(d.mul_vec(&phi.to_flat()).unwrap(), direct.to_flat(), "n = {n}");
            }
        }
    }

    #[test]
    fn low_degrees_match_the_written_formulas() {
        let l = non_lie();
        let module = LeibnizModule::adjoint(&l);
        // d^0 m (x) = [x, m]
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m0 = Cochain::random(&module, 0, &mut rng);
        let d0 = coboundary(&module, &m0, &cfg()).unwrap();
        for x in 0..3 {
            assert_eq!(d0.value(&[x]).unwrap(), l.bracket(&unit(3, x), &m0.value(&[]).unwrap()));
        }
        for _ in 0..5 {
            let phi = Cochain::random(&module, 2, &mut rng);
            let d2 = coboundary(&module, &phi, &cfg()).unwrap();
            for (x, y, z) in (0..27).map(|i| (i / 9, (i / 3) % 3, i % 3)) {
                assert_eq!(d2.value(&[x, y, z]).unwrap(), degree_two_law(&module, &phi, x, y, z));
            }
        }
    }

    #[test]
    fn d_squared_vanishes() {
        for l in [nc21(), non_lie(), build_r_particular(2, 1).unwrap()] {
            let module = LeibnizModule::adjoint(&l);
            for n in 0..=1 {
                let d0 = coboundary_matrix(&module, n, &cfg()).unwrap();
                let d1 = coboundary_matrix(&module, n + 1, &cfg()).unwrap();
                assert!(d1.mul(&d0).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn degree_one_is_derivations() {
        for l in [nc21(), non_lie(), build_r_particular(2, 1).unwrap()] {
            let module = LeibnizModule::adjoint(&l);
            let report = cohomology_report(&module, 1, true, &cfg()).unwrap();
            let z = SubspaceBasis::from_vectors(report.dim_cl, report.cocycle_basis.as_ref().unwrap()).unwrap();
            let b = SubspaceBasis::from_vectors(report.dim_cl, report.coboundary_basis.as_ref().unwrap()).unwrap();
            assert_eq!(&z, derivation_space(&l).subspace());
            assert_eq!(b, inner_derivations(&l));
        }
    }

    #[test]
    fn small_reports() {
        let a1 = LeibnizModule::adjoint(&LeibnizAlgebra::abelian(1));
        let r = cohomology_report(&a1, 1, false, &cfg()).unwrap();
        assert_eq!((r.dim_cl, r.dim_zl, r.dim_bl, r.dim_hl), (1, 1, 0, 1));
        let r0 = cohomology_report(&a1, 0, false, &cfg()).unwrap();
        assert_eq!((r0.dim_zl, r0.dim_bl), (1, 0));
        let a2 = LeibnizAlgebra::abelian(2);
        let rig = is_cohomologically_rigid(&a2, &cfg()).unwrap();
        assert_eq!(rig.hl2.dim_hl, 8);
        assert!(!rig.rigid);
        assert!(!is_complete(&LeibnizAlgebra::abelian(1), &cfg()).unwrap().complete);
    }

    #[test]
    fn trivial_coefficients() {
        // HL^1(L, Q) = (L / L^2)^*
        let l = nc21();
        let r = cohomology_report(&LeibnizModule::trivial(&l, 1), 1, false, &cfg()).unwrap();
        assert_eq!(r.dim_hl, l.dim() - l.derived_algebra().dim());
    }

    #[test]
    fn witnesses() {
        let l = build_r_particular(2, 1).unwrap();
        let module = LeibnizModule::adjoint(&l);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let d = Cochain::random(&module, 1, &mut rng);
        let phi = coboundary(&module, &d, &cfg()).unwrap();
        let w = coboundary_witness(&module, &phi, &cfg()).unwrap().unwrap();
        assert_eq!(coboundary(&module, &w, &cfg()).unwrap(), phi);

        // R_x is a 1-cocycle
        let rx = Cochain::from_flat(&module, 1, &flatten_operator(&l.right_mult_basis(0))).unwrap();
        assert!(coboundary(&module, &rx, &cfg()).unwrap().is_zero());

        // phi(e1,e1) = h is a coboundary; a lone phi(h,h) = h is not a cocycle
        let (e1, h) = (l.label_index("e1").unwrap(), l.label_index("h").unwrap());
        let phi1 = Cochain::from_entries(&module, 2, [(vec![e1, e1], h, Rational::one())]).unwrap();
        assert!(coboundary(&module, &phi1, &cfg()).unwrap().is_zero());
        assert!(coboundary_witness(&module, &phi1, &cfg()).unwrap().is_some());
        let bad = Cochain::from_entries(&module, 2, [(vec![h, h], h, Rational::one())]).unwrap();
        assert!(!coboundary(&module, &bad, &cfg()).unwrap().is_zero());
        assert!(coboundary_witness(&module, &bad, &cfg()).unwrap().is_none());
        assert!(matches!(
            coboundary_witness(&module, &Cochain::zero(&module, 0), &cfg()),
            Err(CohomologyError::DegreeZeroWitness)
        ));
    }

    #[test]
    fn h_is_never_a_right_argument() {
        let l = build_r_particular(2, 1).unwrap();
        let module = LeibnizModule::adjoint(&l);
        let h = l.label_index("h").unwrap();
        let m = Cochain::from_entries(&module, 0, [(vec![], h, Rational::one())]).unwrap();
        assert!(coboundary(&module, &m, &cfg()).unwrap().is_zero());
    }

    #[test]
    fn guard_is_enforced() {
        let module = LeibnizModule::adjoint(&build_r_particular(2, 1).unwrap());
        let tight = CohomologyConfig { max_degree: 3, max_cells: 10_000 };
        assert!(matches!(coboundary_matrix(&module, 2, &tight), Err(CohomologyError::TooLarge { .. })));
        let d2 = coboundary_matrix(&module, 2, &cfg()).unwrap();
        assert_eq!((d2.rows(), d2.cols()), (4096, 512));
    }
}
