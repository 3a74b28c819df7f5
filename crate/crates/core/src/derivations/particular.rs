//! Coordinates of derivations of the two-block nilpotent family
//! `e1..e_{n1+1}, f1..f_{n2}, h` with `[e2,e2] = a2 h`, `[f1,f1] = a3 h`,
//! `[e1,e2] = -e3 + b1 h`, `[e1,f1] = -f2 + b2 h`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::LeibnizAlgebra;
use crate::constructions::{build_l_particular, ConstructionError};
use crate::linalg::{is_nilpotent_matrix, kernel_basis, RatMatrix, SubspaceBasis};
use crate::rational::Rational;

use super::{check_nil_independent, unflatten_operator, DerivationSpace, NilConfig, NilVerdict};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoBlock {
    pub n1: usize,
    pub n2: usize,
    pub a2: Rational,
    pub a3: Rational,
    pub b1: Rational,
    pub b2: Rational,
}

/// Named entries of a derivation matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DerivationRoles {
    /// `e1` in `d(e1)`
    pub e1_scale: Rational,
    /// `e2` in `d(e1)`
    pub e1_to_e2: Rational,
    /// `f1` in `d(e1)`
    pub e1_to_f1: Rational,
    /// `e2` in `d(e2)`
    pub e2_scale: Rational,
    /// `f1` in `d(f1)`
    pub f1_scale: Rational,
    /// `f1` in `d(e2)`
    pub e2_to_f1: Rational,
    /// `e2` in `d(f1)`
    pub f1_to_e2: Rational,
    /// `h` in `d(h)`
    pub h_scale: Rational,
}

/// Parameter regimes that decide the `h` coefficient of `d(h)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `a3 != 0`
    F1Square,
    /// `a3 = 0`, `a2 != 0`
    E2Square,
    /// squares zero, `b1 = 0`, `b2 != 0`
    F1Mixed,
    /// squares zero, `b1 != 0`, `b2 = 0`
    E2Mixed,
    /// squares zero, `b1 != 0`, `b2 != 0`
    BothMixed,
    AllZero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    E1Scale,
    E2Scale,
    F1Scale,
    E2ToF1,
    F1ToE2,
}

/// A derivation with the named role nonzero and the others as prescribed,
/// or `None` when no such derivation exists.
#[derive(Clone, Debug)]
pub struct Direction {
    pub name: &'static str,
    pub matrix: Option<RatMatrix>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IfDirectionCheck {
    pub sampled: usize,
    pub non_nilpotent: usize,
}

impl TwoBlock {
    pub fn new(
        n1: usize,
        n2: usize,
        a2: impl Into<Rational>,
        a3: impl Into<Rational>,
        b1: impl Into<Rational>,
        b2: impl Into<Rational>,
    ) -> Self {
        TwoBlock { n1, n2, a2: a2.into(), a3: a3.into(), b1: b1.into(), b2: b2.into() }
    }

    pub fn build(&self) -> Result<LeibnizAlgebra, ConstructionError> {
        build_l_particular(self.n1, self.n2, self.a2.clone(), self.a3.clone(), self.b1.clone(), self.b2.clone())
    }

    pub fn dim(&self) -> usize {
        self.n1 + self.n2 + 2
    }

    pub fn e(&self, i: usize) -> usize {
        i - 1
    }

    pub fn f(&self, i: usize) -> usize {
        self.n1 + i
    }

    pub fn h(&self) -> usize {
        self.n1 + self.n2 + 1
    }

    /// Flat index of "coefficient of `target` in `d(source)`".
    fn slot(&self, source: usize, target: usize) -> usize {
        source * self.dim() + target
    }

    fn role_slot(&self, role: Role) -> usize {
        let (e1, e2, f1) = (self.e(1), self.e(2), self.f(1));
        match role {
            Role::E1Scale => self.slot(e1, e1),
            Role::E2Scale => self.slot(e2, e2),
            Role::F1Scale => self.slot(f1, f1),
            Role::E2ToF1 => self.slot(e2, f1),
            Role::F1ToE2 => self.slot(f1, e2),
        }
    }

    pub fn roles(&self, m: &RatMatrix) -> DerivationRoles {
        let (e1, e2, f1, h) = (self.e(1), self.e(2), self.f(1), self.h());
        DerivationRoles {
            e1_scale: m.get(e1, e1),
            e1_to_e2: m.get(e2, e1),
            e1_to_f1: m.get(f1, e1),
            e2_scale: m.get(e2, e2),
            f1_scale: m.get(f1, f1),
            e2_to_f1: m.get(f1, e2),
            f1_to_e2: m.get(e2, f1),
            h_scale: m.get(h, h),
        }
    }

    /// `2 l1 + l2 b1 + m1 b2`, the predicted `h` coefficient of `d(h)`.
    pub fn h_scale_formula(&self, r: &DerivationRoles) -> Rational {
        Rational::from(2) * &r.e1_scale + &r.e1_to_e2 * &self.b1 + &r.e1_to_f1 * &self.b2
    }

    /// The five polynomial restrictions on a derivation; all vanish on Der.
    pub fn restriction_residuals(&self, r: &DerivationRoles) -> [Rational; 5] {
        let two = Rational::from(2);
        let (a1, a2, b1, b2) = (&self.a2, &self.a3, &self.b1, &self.b2);
        let (l1, l2, m1) = (&r.e1_scale, &r.e1_to_e2, &r.e1_to_f1);
        let (g2, n1, d1, t2) = (&r.e2_scale, &r.f1_scale, &r.e2_to_f1, &r.f1_to_e2);
        let trace_like = &(&(&two * l1) + &(l2 * b1)) + &(m1 * b2);
        [
            &(a1 * t2) + &(a2 * d1),
            -(&two * &(l2 * a1)) + l1 * b1 + l2 * &(b1 * b1) + m1 * &(b1 * b2) - g2 * b1 - d1 * b2,
            -(&two * &(m1 * a2)) + l1 * b2 + l2 * &(b1 * b2) + m1 * &(b2 * b2) - t2 * b1 - n1 * b2,
            a1 * &(&trace_like - &(&two * g2)),
            a2 * &(&trace_like - &(&two * n1)),
        ]
    }

    /// Entries `e_j` in `d(f1)` for `2 <= j <= n1 - n2 + 1`, which must vanish
    /// when `n1 > n2`; returns the nonzero ones.
    pub fn forced_zero_violations(&self, m: &RatMatrix) -> Vec<(usize, Rational)> {
        if self.n1 <= self.n2 {
            return Vec::new();
        }
        (2..=self.n1 - self.n2 + 1)
            .map(|j| (j, m.get(self.e(j), self.f(1))))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    pub fn regime(&self) -> Regime {
        if !self.a3.is_zero() {
            Regime::F1Square
        } else if !self.a2.is_zero() {
            Regime::E2Square
        } else {
            match (self.b1.is_zero(), self.b2.is_zero()) {
                (true, true) => Regime::AllZero,
                (true, false) => Regime::F1Mixed,
                (false, true) => Regime::E2Mixed,
                (false, false) => Regime::BothMixed,
            }
        }
    }

    /// The `h` coefficient of `d(h)` as a sum of two diagonal roles, in the
    /// regimes where that holds in the given basis.
    pub fn h_scale_by_regime(&self, r: &DerivationRoles) -> Option<Rational> {
        let two = Rational::from(2);
        match self.regime() {
            Regime::F1Square => Some(&two * &r.f1_scale),
            Regime::E2Square => Some(&two * &r.e2_scale),
            Regime::F1Mixed => Some(&r.e1_scale + &r.f1_scale),
            Regime::E2Mixed => Some(&r.e1_scale + &r.e2_scale),
            Regime::AllZero => Some(&two * &r.e1_scale),
            Regime::BothMixed => None,
        }
    }

    /// Derivations whose listed roles vanish, as a subspace of Der.
    fn subspace_where_zero(&self, der: &DerivationSpace, zero: &[Role]) -> Vec<Vec<Rational>> {
        let basis = der.subspace().vectors();
        if basis.is_empty() {
            return Vec::new();
        }
        let slots: Vec<usize> = zero.iter().map(|r| self.role_slot(*r)).collect();
        let constraint = RatMatrix::from_dense(
            &slots.iter().map(|&s| basis.iter().map(|b| b[s].clone()).collect()).collect::<Vec<_>>(),
        );
        let combos = match constraint {
            Ok(c) if !slots.is_empty() => kernel_basis(&c).vectors(),
            _ => (0..basis.len()).map(|i| crate::algebra::unit(basis.len(), i)).collect(),
        };
        combos
            .iter()
            .map(|coeffs| {
                let mut v = vec![Rational::zero(); basis[0].len()];
                for (c, b) in coeffs.iter().zip(&basis) {
                    if !c.is_zero() {
                        for (x, y) in v.iter_mut().zip(b) {
                            *x += c * y;
                        }
                    }
                }
                v
            })
            .collect()
    }

    fn scale_direction(&self, mut v: Vec<Rational>, role: Role) -> RatMatrix {
        let s = v[self.role_slot(role)].recip().expect("role is nonzero");
        for x in &mut v {
            *x = &*x * &s;
        }
        unflatten_operator(self.dim(), &v)
    }

    /// The four directions: one diagonal role nonzero with the other two
    /// diagonal roles and the product `E2ToF1 * F1ToE2` zero, then the
    /// product nonzero with all three diagonal roles zero.
    pub fn designated_directions(&self, der: &DerivationSpace) -> Vec<Direction> {
        let diag = [Role::E1Scale, Role::E2Scale, Role::F1Scale];
        let names = ["e1-scale", "e2-scale", "f1-scale"];
        let mut out = Vec::new();
        for (idx, role) in diag.iter().enumerate() {
            let others: Vec<Role> = diag.iter().copied().filter(|r| r != role).collect();
            let mut found = None;
            for off in [&[Role::E2ToF1, Role::F1ToE2][..], &[Role::E2ToF1], &[Role::F1ToE2]] {
                let zero: Vec<Role> = others.iter().chain(off).copied().collect();
                let slot = self.role_slot(*role);
                if let Some(v) = self.subspace_where_zero(der, &zero).into_iter().find(|v| !v[slot].is_zero()) {
                    found = Some(self.scale_direction(v, *role));
                    break;
                }
            }
            out.push(Direction { name: names[idx], matrix: found });
        }

        let w = self.subspace_where_zero(der, &diag);
        let (sd, st) = (self.role_slot(Role::E2ToF1), self.role_slot(Role::F1ToE2));
        let product = |v: &Vec<Rational>| &v[sd] * &v[st];
        let mixed = match (w.iter().find(|v| !v[sd].is_zero()), w.iter().find(|v| !v[st].is_zero())) {
            (Some(a), Some(b)) => (0..=3i64).find_map(|t| {
                let t = Rational::from(t);
                let v: Vec<Rational> = a.iter().zip(b).map(|(x, y)| x + &(&t * y)).collect();
                (!product(&v).is_zero()).then_some(v)
            }),
            _ => None,
        };
        out.push(Direction { name: "mixed", matrix: mixed.map(|v| unflatten_operator(self.dim(), &v)) });
        out
    }

    /// Nil-independence verdict for the directions that exist, or `None`
    /// if some direction is missing.
    pub fn directions_verdict(&self, dirs: &[Direction], cfg: &NilConfig) -> Option<NilVerdict> {
        let set: Option<Vec<RatMatrix>> = dirs.iter().map(|d| d.matrix.clone()).collect();
        set.map(|s| check_nil_independent(&s, cfg).expect("nonempty square set"))
    }

    /// Samples derivations with the three diagonal roles zero and one of the
    /// two mixed roles zero; all of them should be nilpotent.
    pub fn check_if_direction(&self, der: &DerivationSpace, samples: usize, seed: u64) -> IfDirectionCheck {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut sampled = 0;
        let mut non_nilpotent = 0;
        let diag = [Role::E1Scale, Role::E2Scale, Role::F1Scale];
        for extra in [Role::E2ToF1, Role::F1ToE2] {
            let zero: Vec<Role> = diag.iter().copied().chain([extra]).collect();
            let w = self.subspace_where_zero(der, &zero);
            if w.is_empty() {
                continue;
            }
            let mut candidates: Vec<Vec<Rational>> = w.clone();
            for _ in 0..samples {
                let coeffs: Vec<i64> = (0..w.len()).map(|_| rng.gen_range(-3..=3)).collect();
                let v = (0..w[0].len())
                    .map(|i| w.iter().zip(&coeffs).map(|(b, &c)| &b[i] * &Rational::from(c)).sum())
                    .collect();
                candidates.push(v);
            }
            for v in candidates {
                sampled += 1;
                let m = unflatten_operator(self.dim(), &v);
                if !is_nilpotent_matrix(&m).expect("square") {
                    non_nilpotent += 1;
                }
            }
        }
        IfDirectionCheck { sampled, non_nilpotent }
    }
}

/// Whether a subspace of Der contains an element with the role nonzero.
pub fn role_is_free(tb: &TwoBlock, space: &SubspaceBasis, role: Role) -> bool {
    let s = tb.role_slot(role);
    space.vectors().iter().any(|v| !v[s].is_zero())
}
