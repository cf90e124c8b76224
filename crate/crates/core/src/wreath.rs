//! Truncated elements of Hom(U(L), M), their convolution Lie bracket, the
//! right L-action, and the wreath product M Wr L built from both.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::lie::{LieAlgebra, Vector};
use crate::pbw::{monomials_up_to, Envelope, StdMonomial};
use crate::scalar::Scalar;

/// Raised when an operation would need hom values beyond the stored degree.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("degree budget exceeded: operation needs valid degree >= {needed}, have {available}")]
pub struct DegreeBudgetExceeded {
    pub needed: usize,
    pub available: usize,
}

/// A linear map U(L) -> M stored on every standard monomial of degree at
/// most `valid_degree`. Zero values are stored implicitly: any in-budget
/// monomial absent from the table evaluates to zero.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedHom {
    valid_degree: usize,
    dim_m: usize,
    values: BTreeMap<StdMonomial, Vector>,
}

impl TruncatedHom {
    pub fn zero(valid_degree: usize, dim_m: usize) -> Self {
        TruncatedHom { valid_degree, dim_m, values: BTreeMap::new() }
    }

    pub fn valid_degree(&self) -> usize {
        self.valid_degree
    }

    pub fn dim_m(&self) -> usize {
        self.dim_m
    }

    /// Sets the value at a monomial. Panics beyond the validity degree.
    pub fn set(&mut self, e: StdMonomial, v: Vector) {
        assert!(e.degree() <= self.valid_degree, "entry beyond validity degree");
        assert_eq!(v.dim(), self.dim_m, "value dimension mismatch");
        if v.is_zero() {
            self.values.remove(&e);
        } else {
            self.values.insert(e, v);
        }
    }

    pub fn add(&mut self, e: &StdMonomial, v: &Vector) {
        assert!(e.degree() <= self.valid_degree, "entry beyond validity degree");
        let mut cur = self.at(e);
        cur = cur.add(v);
        self.set(e.clone(), cur);
    }

    /// Value at a monomial; zero for in-budget monomials without entries.
    /// Panics when queried beyond the validity degree.
    pub fn at(&self, e: &StdMonomial) -> Vector {
        assert!(
            e.degree() <= self.valid_degree,
            "hom queried at degree {} beyond validity degree {}",
            e.degree(),
            self.valid_degree
        );
        self.values.get(e).cloned().unwrap_or_else(|| Vector::zero(self.dim_m))
    }

    /// Nonzero entries in monomial order.
    pub fn entries(&self) -> impl Iterator<Item = (&StdMonomial, &Vector)> {
        self.values.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Linear evaluation on an element of U(L); every monomial of the
    /// argument must be within budget.
    pub fn eval(&self, u: &crate::pbw::UElement) -> Vector {
        let mut out = Vector::zero(self.dim_m);
        for (m, c) in u.iter() {
            out.add_scaled(&self.at(m), c);
        }
        out
    }

    pub fn add_scaled(&mut self, other: &TruncatedHom, c: &Scalar) {
        assert!(other.valid_degree >= self.valid_degree, "source budget too small");
        for (e, v) in other.entries() {
            if e.degree() <= self.valid_degree {
                self.add(e, &v.scale(c));
            }
        }
    }

    /// Copy with entries above `degree` dropped.
    pub fn truncated(&self, degree: usize) -> TruncatedHom {
        let mut out = TruncatedHom::zero(degree, self.dim_m);
        for (e, v) in self.entries() {
            if e.degree() <= degree {
                out.set(e.clone(), v.clone());
            }
        }
        out
    }

    pub fn neg(&self) -> TruncatedHom {
        TruncatedHom {
            valid_degree: self.valid_degree,
            dim_m: self.dim_m,
            values: self.values.iter().map(|(e, v)| (e.clone(), v.neg())).collect(),
        }
    }

    pub fn sum(&self, other: &TruncatedHom) -> TruncatedHom {
        let degree = self.valid_degree.min(other.valid_degree);
        let mut out = self.truncated(degree);
        for (e, v) in other.entries() {
            if e.degree() <= degree {
                out.add(e, v);
            }
        }
        out
    }

    pub fn difference(&self, other: &TruncatedHom) -> TruncatedHom {
        self.sum(&other.neg())
    }
}

impl fmt::Debug for TruncatedHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedHom(deg<={})[", self.valid_degree)?;
        for (i, (e, v)) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e:?} -> {v:?}")?;
        }
        write!(f, "]")
    }
}

/// JSON form of a truncated hom: monomial strings to sparse vectors.
#[derive(Serialize)]
pub struct TruncatedHomJson {
    pub valid_degree: usize,
    pub values: Vec<MonomialValueJson>,
}

#[derive(Serialize)]
pub struct MonomialValueJson {
    pub monomial: String,
    pub value: BTreeMap<String, String>,
}

impl TruncatedHom {
    pub fn to_json(&self, l_names: &[String], m_names: &[String]) -> TruncatedHomJson {
        TruncatedHomJson {
            valid_degree: self.valid_degree,
            values: self
                .entries()
                .map(|(e, v)| MonomialValueJson {
                    monomial: e.format_with(l_names),
                    value: crate::report::residual_map(v, m_names),
                })
                .collect(),
        }
    }
}

/// An element of M Wr L: a truncated hom plus its L component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WreathElement {
    pub hom: TruncatedHom,
    pub leg: Vector,
}

/// The wreath product M Wr L: owns M and a straightening context for U(L).
pub struct WreathProduct {
    m: LieAlgebra,
    env: Envelope,
}

impl WreathProduct {
    pub fn new(m: LieAlgebra, l: LieAlgebra) -> Self {
        WreathProduct { m, env: Envelope::new(l) }
    }

    pub fn m(&self) -> &LieAlgebra {
        &self.m
    }

    pub fn l(&self) -> &LieAlgebra {
        self.env.algebra()
    }

    pub fn envelope(&self) -> &Envelope {
        &self.env
    }

    /// Convolution bracket `[f,h](E) = sum over I*J=E of [f(I), h(J)]`, each
    /// ordered splitting weighted by its coproduct multiplicity.
    ///
    /// The result is valid to the smaller of the two budgets.
    pub fn hom_bracket(&self, f: &TruncatedHom, h: &TruncatedHom) -> TruncatedHom {
        let degree = f.valid_degree().min(h.valid_degree());
        let field = self.m.field();
        let mut out = TruncatedHom::zero(degree, self.m.dim());
        for (ef, xf) in f.entries() {
            for (eh, xh) in h.entries() {
                if ef.degree() + eh.degree() > degree {
                    continue;
                }
                let weight = field.integer(crate::pbw::splitting_weight(ef, eh) as i64);
                let v = self.m.bracket(xf, xh).scale(&weight);
                if !v.is_zero() {
                    out.add(&ef.product(eh), &v);
                }
            }
        }
        out
    }

    /// Right action `(f u)(E) = f(uE)`, consuming one unit of degree budget.
    pub fn hom_action(
        &self,
        f: &TruncatedHom,
        u: &Vector,
    ) -> Result<TruncatedHom, DegreeBudgetExceeded> {
        if f.valid_degree() == 0 {
            return Err(DegreeBudgetExceeded { needed: 1, available: 0 });
        }
        let degree = f.valid_degree() - 1;
        let mut out = TruncatedHom::zero(degree, self.m.dim());
        for e in monomials_up_to(self.l().dim(), degree) {
            let v = f.eval(&self.env.left_mul(u, &e));
            if !v.is_zero() {
                out.set(e, v);
            }
        }
        Ok(out)
    }

    /// Semidirect-product bracket on M Wr L. The hom component is
    /// `[f,h] + f.v - h.u`, valid one degree below the operands.
    pub fn bracket(
        &self,
        a: &WreathElement,
        b: &WreathElement,
    ) -> Result<WreathElement, DegreeBudgetExceeded> {
        let degree = a.hom.valid_degree().min(b.hom.valid_degree());
        if degree == 0 {
            return Err(DegreeBudgetExceeded { needed: 1, available: 0 });
        }
        let mut hom = self.hom_bracket(&a.hom, &b.hom).truncated(degree - 1);
        hom = hom.sum(&self.hom_action(&a.hom, &b.leg)?);
        hom = hom.difference(&self.hom_action(&b.hom, &a.leg)?);
        let leg = self.l().bracket(&a.leg, &b.leg);
        Ok(WreathElement { hom, leg })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::FieldSpec;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn mono(factors: &[u16]) -> StdMonomial {
        StdMonomial::from_sorted(factors.iter().copied())
    }

    fn random_hom(
        rng: &mut StdRng,
        dim_l: usize,
        dim_m: usize,
        degree: usize,
        field: FieldSpec,
    ) -> TruncatedHom {
        let mut f = TruncatedHom::zero(degree, dim_m);
        for e in monomials_up_to(dim_l, degree) {
            let v = Vector::from_entries(
                dim_m,
                (0..dim_m).map(|i| (i, field.integer(rng.gen_range(-3i64..=3)))),
            );
            f.set(e, v);
        }
        f
    }

    #[test]
    fn bracket_worked_example() {
        // M 2-dim nonabelian [z1,z2]=z1; f(1)=0, f(e1)=z2; h(1)=z1, h(e1)=0.
        let m = fixtures::nonabelian2_algebra(q());
        let l = fixtures::abelian(q(), &["e1"]);
        let w = WreathProduct::new(m.clone(), l);
        let mut f = TruncatedHom::zero(1, 2);
        f.set(mono(&[0]), m.basis_vector(1));
        let mut h = TruncatedHom::zero(1, 2);
        h.set(StdMonomial::one(), m.basis_vector(0));
        let fh = w.hom_bracket(&f, &h);
        // [f,h](e1) = [f(e1), h(1)] = [z2, z1] = -z1.
        assert_eq!(fh.at(&mono(&[0])), m.basis_vector(0).neg());
        assert_eq!(fh.at(&StdMonomial::one()), Vector::zero(2));
    }

    #[test]
    fn repeated_letter_splittings_carry_their_weight() {
        // f(e1) = z2, h(e1) = z1: [f,h](e1^2) = 2[z2,z1] = -2 z1.
        let m = fixtures::nonabelian2_algebra(q());
        let l = fixtures::abelian(q(), &["e1"]);
        let w = WreathProduct::new(m.clone(), l);
        let mut f = TruncatedHom::zero(2, 2);
        f.set(mono(&[0]), m.basis_vector(1));
        let mut h = TruncatedHom::zero(2, 2);
        h.set(mono(&[0]), m.basis_vector(0));
        let fh = w.hom_bracket(&f, &h);
        assert_eq!(fh.at(&mono(&[0, 0])), m.basis_vector(0).scale(&q().integer(-2)));
    }

    #[test]
    fn self_bracket_vanishes() {
        let m = fixtures::heisenberg3(q());
        let l = fixtures::sl2(q());
        let w = WreathProduct::new(m, l);
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..10 {
            let f = random_hom(&mut rng, 3, 3, 3, q());
            assert!(w.hom_bracket(&f, &f).is_zero());
        }
    }

    #[test]
    fn vanishing_at_one_kills_degree_one_brackets() {
        // f(1) = h(1) = 0 forces [f,h](e_i) = 0: both splittings of e_i
        // evaluate one factor at 1.
        let m = fixtures::heisenberg3(q());
        let l = fixtures::sl2(q());
        let w = WreathProduct::new(m, l);
        let mut rng = StdRng::seed_from_u64(4);
        for _ in 0..10 {
            let mut f = random_hom(&mut rng, 3, 3, 2, q());
            let mut h = random_hom(&mut rng, 3, 3, 2, q());
            f.set(StdMonomial::one(), Vector::zero(3));
            h.set(StdMonomial::one(), Vector::zero(3));
            let fh = w.hom_bracket(&f, &h);
            for i in 0..3 {
                assert!(fh.at(&mono(&[i])).is_zero());
            }
        }
    }

    #[test]
    fn action_examples() {
        // L2 with [e2,e1] = e1: f(e1) = z and f zero elsewhere gives
        // (f.e2)(e1) = f(e1 e2 + e1) = z.
        let m = fixtures::abelian(q(), &["z"]);
        let l = fixtures::nonabelian2_algebra_l(q());
        let w = WreathProduct::new(m.clone(), l);
        let mut f = TruncatedHom::zero(2, 1);
        f.set(mono(&[0]), m.basis_vector(0));
        let e2 = w.l().basis_vector(1);
        let fe2 = w.hom_action(&f, &e2).unwrap();
        assert_eq!(fe2.valid_degree(), 1);
        assert_eq!(fe2.at(&mono(&[0])), m.basis_vector(0));

        // (f.u)(1) = f(u).
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..10 {
            let g = random_hom(&mut rng, 2, 1, 2, q());
            let u = Vector::from_entries(
                2,
                (0..2).map(|i| (i, q().integer(rng.gen_range(-3i64..=3)))),
            );
            let gu = w.hom_action(&g, &u).unwrap();
            let mut expected = Vector::zero(1);
            for (i, c) in u.iter() {
                expected.add_scaled(&g.at(&mono(&[i as u16])), c);
            }
            assert_eq!(gu.at(&StdMonomial::one()), expected);
        }

        // Abelian L: (f.e1)(e2) = f(e1 e2), no straightening terms.
        let l_ab = fixtures::abelian(q(), &["e1", "e2"]);
        let w = WreathProduct::new(m.clone(), l_ab);
        let mut f = TruncatedHom::zero(2, 1);
        f.set(mono(&[0, 1]), m.basis_vector(0));
        let e1 = w.l().basis_vector(0);
        let fe1 = w.hom_action(&f, &e1).unwrap();
        assert_eq!(fe1.at(&mono(&[1])), m.basis_vector(0));

        // Budget exhaustion errors loudly.
        let empty = TruncatedHom::zero(0, 1);
        assert_eq!(
            w.hom_action(&empty, &e1),
            Err(DegreeBudgetExceeded { needed: 1, available: 0 })
        );
    }

    #[test]
    fn hom_json_form() {
        let m = fixtures::abelian(q(), &["z"]);
        let mut f = TruncatedHom::zero(3, 1);
        f.set(mono(&[0, 0, 1]), m.basis_vector(0).scale(&q().half()));
        let l_names = vec!["e1".to_string(), "e2".to_string()];
        let json = serde_json::to_value(f.to_json(&l_names, &["z".to_string()])).unwrap();
        assert_eq!(
            json,
            serde_json::json!({
                "valid_degree": 3,
                "values": [{"monomial": "e1^2*e2", "value": {"z": "1/2"}}],
            })
        );
    }

    #[test]
    fn wreath_bracket_reduces_to_hom_bracket_for_zero_legs() {
        let m = fixtures::heisenberg3(q());
        let l = fixtures::sl2(q());
        let w = WreathProduct::new(m, l);
        let mut rng = StdRng::seed_from_u64(6);
        let f = random_hom(&mut rng, 3, 3, 3, q());
        let h = random_hom(&mut rng, 3, 3, 3, q());
        let a = WreathElement { hom: f.clone(), leg: Vector::zero(3) };
        let b = WreathElement { hom: h.clone(), leg: Vector::zero(3) };
        let out = w.bracket(&a, &b).unwrap();
        assert_eq!(out.hom, w.hom_bracket(&f, &h).truncated(2));
        assert!(out.leg.is_zero());
    }

    #[test]
    fn wreath_bracket_heisenberg_rows() {
        // Heisenberg data: M = <z>, L abelian 2-dim, g(e1,e2) = z. The
        // degree-1 rows have f_{(0,e1)}(e2) = z/2 and f_{(0,e2)}(e1) = -z/2;
        // the wreath bracket of the two generators recovers phi((z,0)).
        let m = fixtures::abelian(q(), &["z"]);
        let l = fixtures::abelian(q(), &["e1", "e2"]);
        let w = WreathProduct::new(m.clone(), l);
        let half = q().half();
        let z = m.basis_vector(0);

        let mut f1 = TruncatedHom::zero(1, 1);
        f1.set(mono(&[1]), z.scale(&half));
        let mut f2 = TruncatedHom::zero(1, 1);
        f2.set(mono(&[0]), z.scale(&-&half));

        let a = WreathElement { hom: f1, leg: w.l().basis_vector(0) };
        let b = WreathElement { hom: f2, leg: w.l().basis_vector(1) };
        let out = w.bracket(&a, &b).unwrap();
        assert_eq!(out.hom.at(&StdMonomial::one()), z);
        assert!(out.leg.is_zero());

        let aa = w.bracket(&a, &a).unwrap();
        assert!(aa.hom.is_zero());
        assert!(aa.leg.is_zero());
    }

    #[test]
    fn hom_bracket_axioms_randomized() {
        let m = fixtures::heisenberg3(q());
        let l = fixtures::nonabelian2_algebra_l(q());
        let w = WreathProduct::new(m, l);
        let mut rng = StdRng::seed_from_u64(8);
        for _ in 0..25 {
            let f = random_hom(&mut rng, 2, 3, 4, q());
            let g = random_hom(&mut rng, 2, 3, 4, q());
            let h = random_hom(&mut rng, 2, 3, 4, q());

            // Antisymmetry.
            assert_eq!(w.hom_bracket(&f, &g), w.hom_bracket(&g, &f).neg());

            // Bilinearity in the first slot.
            let fg = f.sum(&g);
            assert_eq!(
                w.hom_bracket(&fg, &h),
                w.hom_bracket(&f, &h).sum(&w.hom_bracket(&g, &h))
            );

            // Jacobi.
            let mut jac = w.hom_bracket(&w.hom_bracket(&f, &g), &h);
            jac = jac.sum(&w.hom_bracket(&w.hom_bracket(&g, &h), &f));
            jac = jac.sum(&w.hom_bracket(&w.hom_bracket(&h, &f), &g));
            assert!(jac.is_zero());
        }
    }

    #[test]
    fn action_is_by_derivations_and_a_right_action() {
        let m = fixtures::heisenberg3(q());
        let l = fixtures::nonabelian2_algebra_l(q());
        let w = WreathProduct::new(m, l);
        let mut rng = StdRng::seed_from_u64(9);
        for _ in 0..15 {
            let f = random_hom(&mut rng, 2, 3, 4, q());
            let h = random_hom(&mut rng, 2, 3, 4, q());
            let u = Vector::from_entries(
                2,
                (0..2).map(|i| (i, q().integer(rng.gen_range(-3i64..=3)))),
            );
            let v = Vector::from_entries(
                2,
                (0..2).map(|i| (i, q().integer(rng.gen_range(-3i64..=3)))),
            );

            // Derivation: [f,h]u = [fu,h] + [f,hu] at degrees <= 3.
            let lhs = w.hom_action(&w.hom_bracket(&f, &h), &u).unwrap();
            let rhs = w
                .hom_bracket(&w.hom_action(&f, &u).unwrap(), &h)
                .sum(&w.hom_bracket(&f, &w.hom_action(&h, &u).unwrap()));
            assert_eq!(lhs, rhs.truncated(3));

            // Right action: f[u,v] = (fu)v - (fv)u at degrees <= 2.
            let uv = w.l().bracket(&u, &v);
            let lhs = w.hom_action(&f, &uv).unwrap().truncated(2);
            let rhs = w
                .hom_action(&w.hom_action(&f, &u).unwrap(), &v)
                .unwrap()
                .difference(&w.hom_action(&w.hom_action(&f, &v).unwrap(), &u).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn wreath_bracket_axioms_within_budget() {
        let m = fixtures::nonabelian2_algebra(q());
        let l = fixtures::nonabelian2_algebra_l(q());
        let w = WreathProduct::new(m, l);
        let mut rng = StdRng::seed_from_u64(10);
        for _ in 0..10 {
            let mk = |rng: &mut StdRng| WreathElement {
                hom: random_hom(rng, 2, 2, 4, q()),
                leg: Vector::from_entries(
                    2,
                    (0..2).map(|i| (i, q().integer(rng.gen_range(-3i64..=3)))),
                ),
            };
            let a = mk(&mut rng);
            let b = mk(&mut rng);
            let c = mk(&mut rng);

            let ab = w.bracket(&a, &b).unwrap();
            let ba = w.bracket(&b, &a).unwrap();
            assert_eq!(ab.hom, ba.hom.neg());
            assert_eq!(ab.leg, ba.leg.neg());

            // Jacobi compared at degrees <= 2 (two brackets consume two units).
            let mut jac_hom = w.bracket(&ab, &c).unwrap().hom;
            let bc = w.bracket(&b, &c).unwrap();
            let ca = w.bracket(&c, &a).unwrap();
            jac_hom = jac_hom.sum(&w.bracket(&bc, &a).unwrap().hom);
            jac_hom = jac_hom.sum(&w.bracket(&ca, &b).unwrap().hom);
            assert!(jac_hom.is_zero());
        }
    }
}
