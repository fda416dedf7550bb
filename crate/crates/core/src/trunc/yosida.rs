use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::PointedBooleanSpace;

use super::SimpleElement;

/// The quotient of a space by "no generator separates these points".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YosidaQuotient<S: Scalar> {
    pub space: Arc<PointedBooleanSpace>,
    /// Generators transported to the quotient.
    pub generators: Vec<SimpleElement<S>>,
    /// Point index of `X` ↦ point index of the quotient.
    pub map: Vec<usize>,
}

/// Identify `x ~ y` iff every generator agrees at `x` and `y`. The star has
/// all values zero, so a site where every generator vanishes merges into the
/// star. The result is checked to be pointed and separated by the mapped
/// generators.
pub fn yosida_quotient<S: Scalar>(
    space: &Arc<PointedBooleanSpace>,
    gens: &[SimpleElement<S>],
) -> Result<YosidaQuotient<S>> {
    for g in gens {
        super::same_space(space, g.space())?;
    }
    let signature = |point: usize| -> Vec<S> {
        if point == space.star() {
            vec![S::zero(); gens.len()]
        } else {
            let site = space.site_of_point(point).expect("non-star point is a site");
            gens.iter().map(|g| g.value(site).clone()).collect()
        }
    };
    let n = space.points().len();
    // classes in order of first appearance, the star's class first
    let mut order = vec![space.star()];
    order.extend((0..n).filter(|&p| p != space.star()));
    let mut keys: Vec<Vec<S>> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut map = vec![0; n];
    for p in order {
        let key = signature(p);
        let class = match keys.iter().position(|k| *k == key) {
            Some(c) => c,
            None => {
                keys.push(key);
                members.push(Vec::new());
                keys.len() - 1
            }
        };
        members[class].push(p);
        map[p] = class;
    }
    let labels: Vec<String> = members
        .iter()
        .enumerate()
        .map(|(c, ps)| {
            if c == 0 {
                space.star_label().to_string()
            } else if ps.len() == 1 {
                space.points()[ps[0]].clone()
            } else {
                let names: Vec<&str> = ps.iter().map(|&p| space.points()[p].as_str()).collect();
                format!("{{{}}}", names.join(","))
            }
        })
        .collect();
    let quotient = Arc::new(PointedBooleanSpace::new(labels, space.star_label())?);
    // class c > 0 is site c - 1 of the quotient
    let generators = (0..gens.len())
        .map(|i| SimpleElement::new(quotient.clone(), keys[1..].iter().map(|k| k[i].clone()).collect()))
        .collect::<Result<Vec<_>>>()?;

    if map[space.star()] != quotient.star() {
        return Err(Error::Invariant("quotient map is not pointed".into()));
    }
    for a in 0..keys.len() {
        for b in a + 1..keys.len() {
            if keys[a] == keys[b] {
                return Err(Error::Invariant("mapped generators do not separate points".into()));
            }
        }
    }
    Ok(YosidaQuotient {
        space: quotient,
        generators,
        map,
    })
}

#[cfg(test)]
mod tests {
    use super::super::test_support::*;
    use super::*;
    use crate::Rational;

    #[test]
    fn merges_agreeing_points_and_zero_points_into_star() {
        let x = x3();
        let quotient = yosida_quotient(&x, &[el([(1, 1), (1, 1), (0, 1)])]).unwrap();
        assert_eq!(quotient.space.points(), &["*".to_string(), "{1,2}".to_string()]);
        assert_eq!(quotient.generators[0].values(), &[q(1, 1)]);
        assert_eq!(quotient.map, vec![0, 1, 1, 0]);
    }

    #[test]
    fn separating_generators_change_nothing() {
        let x = x3();
        let quotient = yosida_quotient(&x, &[el([(1, 1), (2, 1), (3, 1)])]).unwrap();
        assert_eq!(*quotient.space, *x);
        assert_eq!(quotient.map, vec![0, 1, 2, 3]);
    }

    #[test]
    fn no_generators_collapse_everything() {
        let quotient = yosida_quotient::<Rational>(&x3(), &[]).unwrap();
        assert_eq!(quotient.space.points().len(), 1);
        assert_eq!(quotient.map, vec![0; 4]);
    }
}
