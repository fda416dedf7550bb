use std::sync::Arc;

use crate::boolean::GeneralizedBooleanAlgebra;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::{PointedBooleanSpace, SiteSet};

use super::{normal_form, NormalForm, SimpleElement};

/// Most atoms a trunc may have when its component algebra is enumerated.
const MAX_ENUMERATED_ATOMS: usize = 16;

/// The simple trunc spanned by the characteristic functions of a family of
/// site sets closed under `∪`, `∩`, `∖`.
///
/// A finite closed family is exactly the set of unions of its atoms, so the
/// family is stored as its atom partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleTrunc {
    space: Arc<PointedBooleanSpace>,
    atoms: Vec<SiteSet>,
}

impl SimpleTrunc {
    /// Validate closure of `components` and build the trunc.
    pub fn from_components(space: Arc<PointedBooleanSpace>, components: &[SiteSet]) -> Result<Self> {
        let all = space.all_sites();
        if let Some(bad) = components.iter().find(|c| !c.is_subset(all)) {
            return Err(Error::Structure(format!("component {bad} mentions unknown sites")));
        }
        // validates closure and reports the first missing set
        GeneralizedBooleanAlgebra::from_set_family(components, |s| space.format_set(s))?;
        let mut atoms: Vec<SiteSet> = components
            .iter()
            .copied()
            .filter(|c| !c.is_empty())
            .filter(|c| components.iter().all(|d| d.is_empty() || d == c || !d.is_subset(*c)))
            .collect();
        atoms.sort();
        Ok(SimpleTrunc { space, atoms })
    }

    /// Every subset of the sites is a component.
    pub fn full(space: Arc<PointedBooleanSpace>) -> Self {
        let atoms = (0..space.n_sites()).map(SiteSet::singleton).collect();
        SimpleTrunc { space, atoms }
    }

    pub fn space(&self) -> &Arc<PointedBooleanSpace> {
        &self.space
    }

    /// The minimal nonempty components; pairwise disjoint.
    pub fn atoms(&self) -> &[SiteSet] {
        &self.atoms
    }

    /// Linear dimension: the number of atoms.
    pub fn dimension(&self) -> usize {
        self.atoms.len()
    }

    /// Union of all components.
    pub fn carrier_sites(&self) -> SiteSet {
        self.atoms.iter().fold(SiteSet::EMPTY, |acc, &a| acc.union(a))
    }

    pub fn contains_set(&self, set: SiteSet) -> bool {
        let covered = self
            .atoms
            .iter()
            .filter(|a| a.is_subset(set))
            .fold(SiteSet::EMPTY, |acc, &a| acc.union(a));
        covered == set
    }

    /// All components, in increasing bitmask order. Fails beyond 16 atoms.
    pub fn components(&self) -> Result<Vec<SiteSet>> {
        let k = self.atoms.len();
        if k > MAX_ENUMERATED_ATOMS {
            return Err(Error::Budget(format!(
                "{k} atoms exceed the enumeration bound {MAX_ENUMERATED_ATOMS}"
            )));
        }
        let mut sets: Vec<SiteSet> = (0..1u64 << k)
            .map(|mask| {
                self.atoms
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .fold(SiteSet::EMPTY, |acc, (_, &a)| acc.union(a))
            })
            .collect();
        sets.sort();
        Ok(sets)
    }

    /// The element `Σ coeffs[i]·χ(atoms[i])`.
    pub fn combination<S: Scalar>(&self, coeffs: &[S]) -> SimpleElement<S> {
        let mut values = vec![S::zero(); self.space.n_sites()];
        for (atom, c) in self.atoms.iter().zip(coeffs) {
            for s in atom.iter() {
                values[s] = c.clone();
            }
        }
        SimpleElement::new(self.space.clone(), values).expect("values sized to the space")
    }
}

/// Result of a membership test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership<S> {
    /// Member; the normal form expresses it through components of the trunc.
    Member(NormalForm<S>),
    /// Not a member; this nonzero level set is not a component.
    Offending { value: S, level_set: SiteSet },
}

impl<S> Membership<S> {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }
}

/// `g ∈ G` iff every nonzero level set of `g` is a component of `G`.
pub fn member<S: Scalar>(trunc: &SimpleTrunc, g: &SimpleElement<S>) -> Result<Membership<S>> {
    super::same_space(trunc.space(), g.space())?;
    let nf = normal_form(g);
    for (value, level_set) in &nf.terms {
        if !trunc.contains_set(*level_set) {
            return Ok(Membership::Offending {
                value: value.clone(),
                level_set: *level_set,
            });
        }
    }
    Ok(Membership::Member(nf))
}

/// The unital components of a simple trunc, as a generalized Boolean algebra
/// of site sets labelled by their points.
pub fn uc(trunc: &SimpleTrunc) -> GeneralizedBooleanAlgebra {
    let sets = trunc.components().expect("component enumeration within bound");
    GeneralizedBooleanAlgebra::from_set_family(&sets, |s| trunc.space().format_set(s))
        .expect("components of a simple trunc are closed")
}

/// The locally constant functions vanishing at the star, measurable for the
/// family `components` (default: all subsets of the sites).
pub fn lc(space: &PointedBooleanSpace, components: Option<&[SiteSet]>) -> Result<SimpleTrunc> {
    let space = Arc::new(space.clone());
    match components {
        None => Ok(SimpleTrunc::full(space)),
        Some(family) => SimpleTrunc::from_components(space, family),
    }
}

#[cfg(test)]
mod tests {
    use super::super::test_support::*;
    use super::*;
    use crate::boolean::gba_validate;
    use crate::trunc::is_unital_component;

    fn family() -> Vec<SiteSet> {
        vec![
            SiteSet::EMPTY,
            SiteSet::from_sites([0, 1]),
            SiteSet::singleton(2),
            SiteSet::from_sites([0, 1, 2]),
        ]
    }

    #[test]
    fn membership_by_level_sets() {
        let full = lc(&x3(), None).unwrap();
        assert!(member(&full, &el([(7, 2), (-1, 1), (0, 1)])).unwrap().is_member());

        let g = SimpleTrunc::from_components(x3(), &family()).unwrap();
        let m = member(&g, &el([(3, 1), (3, 1), (1, 2)])).unwrap();
        let Membership::Member(nf) = m else {
            panic!("expected member")
        };
        assert_eq!(
            nf.terms,
            vec![(q(3, 1), SiteSet::from_sites([0, 1])), (q(1, 2), SiteSet::singleton(2))]
        );

        assert_eq!(
            member(&g, &el([(1, 1), (0, 1), (0, 1)])).unwrap(),
            Membership::Offending {
                value: q(1, 1),
                level_set: SiteSet::singleton(0)
            }
        );
    }

    #[test]
    fn uc_of_models() {
        let full = lc(&x3(), None).unwrap();
        let a = uc(&full);
        assert_eq!(a.len(), 8);
        assert!(gba_validate(&a).is_valid());

        let trivial = lc(&PointedBooleanSpace::standard(0), None).unwrap();
        assert_eq!(uc(&trivial).len(), 1);

        let g = SimpleTrunc::from_components(x3(), &family()).unwrap();
        let a = uc(&g);
        assert_eq!(a.len(), 4);
        assert!(gba_validate(&a).is_valid());
        // the characteristic elements of uc(G) are exactly the member unital components
        for set in (0..8).map(SiteSet) {
            let chi = SimpleElement::<crate::Rational>::characteristic(x3(), set);
            let in_uc = a.index_of(&x3().format_set(set)).is_some();
            let component = is_unital_component(&chi).unwrap() && member(&g, &chi).unwrap().is_member();
            assert_eq!(in_uc, component, "{set}");
        }
    }

    #[test]
    fn lc_dimensions() {
        assert_eq!(lc(&x3(), None).unwrap().dimension(), 3);
        assert_eq!(lc(&PointedBooleanSpace::standard(0), None).unwrap().dimension(), 0);
        assert_eq!(lc(&x3(), Some(&family())).unwrap().dimension(), 2);
    }

    #[test]
    fn lc_rejects_non_closed_family() {
        let bad = [SiteSet::EMPTY, SiteSet::from_sites([0, 1]), SiteSet::from_sites([1, 2])];
        let err = lc(&x3(), Some(&bad)).unwrap_err();
        assert!(err.to_string().contains("is missing"), "{err}");
    }
}
