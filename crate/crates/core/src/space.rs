//! Finite pointed Boolean spaces and subsets of their non-designated points.

use std::fmt;

use crate::error::{Error, Result};

/// Largest number of non-designated points a space may carry. Subsets of the
/// non-designated points are stored as bitmasks.
pub const MAX_SITES: usize = 63;

/// A finite discrete space with a designated point.
///
/// The non-designated points are called *sites* and are numbered `0..n_sites()`
/// in the order they appear in `points`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointedBooleanSpace {
    points: Vec<String>,
    star: usize,
    sites: Vec<usize>,
}

impl PointedBooleanSpace {
    pub fn new<I, L>(points: I, star: &str) -> Result<Self>
    where
        I: IntoIterator<Item = L>,
        L: Into<String>,
    {
        let points: Vec<String> = points.into_iter().map(Into::into).collect();
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::Invariant(format!("duplicate point label `{p}`")));
            }
        }
        let star = points
            .iter()
            .position(|p| p == star)
            .ok_or_else(|| Error::Invariant("star not in points".into()))?;
        if points.len() - 1 > MAX_SITES {
            return Err(Error::Budget(format!(
                "at most {MAX_SITES} non-designated points are supported"
            )));
        }
        let sites = (0..points.len()).filter(|&i| i != star).collect();
        Ok(PointedBooleanSpace { points, star, sites })
    }

    /// `{*, 1, 2, …, n}` with designated point `*`.
    pub fn standard(n: usize) -> Self {
        let points = std::iter::once("*".to_string()).chain((1..=n).map(|i| i.to_string()));
        PointedBooleanSpace::new(points, "*").expect("standard space is well formed")
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn star(&self) -> usize {
        self.star
    }

    pub fn star_label(&self) -> &str {
        &self.points[self.star]
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    /// Point index of a site.
    pub fn site_point(&self, site: usize) -> usize {
        self.sites[site]
    }

    pub fn site_label(&self, site: usize) -> &str {
        &self.points[self.sites[site]]
    }

    /// Site number of a point index; `None` for the star.
    pub fn site_of_point(&self, point: usize) -> Option<usize> {
        self.sites.iter().position(|&p| p == point)
    }

    pub fn site_of_label(&self, label: &str) -> Option<usize> {
        self.sites.iter().position(|&p| self.points[p] == label)
    }

    pub fn all_sites(&self) -> SiteSet {
        SiteSet::full(self.n_sites())
    }

    pub fn format_set(&self, set: SiteSet) -> String {
        let labels: Vec<&str> = set.iter().map(|s| self.site_label(s)).collect();
        format!("{{{}}}", labels.join(","))
    }

    /// The subspace keeping the star and the given sites, plus the map from
    /// old sites to new sites.
    pub fn restrict(&self, keep: SiteSet) -> (PointedBooleanSpace, Vec<Option<usize>>) {
        let mut points = vec![self.star_label().to_string()];
        let mut map = vec![None; self.n_sites()];
        for s in keep.iter() {
            map[s] = Some(points.len() - 1);
            points.push(self.site_label(s).to_string());
        }
        let star = self.star_label().to_string();
        let space = PointedBooleanSpace::new(points, &star).expect("subspace is well formed");
        (space, map)
    }
}

/// A subset of the sites of a pointed space, as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SiteSet(pub u64);

impl SiteSet {
    pub const EMPTY: SiteSet = SiteSet(0);

    pub fn full(n: usize) -> Self {
        if n == 0 {
            SiteSet(0)
        } else {
            SiteSet(u64::MAX >> (64 - n))
        }
    }

    pub fn singleton(site: usize) -> Self {
        SiteSet(1 << site)
    }

    pub fn from_sites<I: IntoIterator<Item = usize>>(sites: I) -> Self {
        SiteSet(sites.into_iter().fold(0, |m, s| m | (1 << s)))
    }

    pub fn contains(self, site: usize) -> bool {
        self.0 >> site & 1 == 1
    }

    pub fn insert(&mut self, site: usize) {
        self.0 |= 1 << site;
    }

    pub fn union(self, other: SiteSet) -> SiteSet {
        SiteSet(self.0 | other.0)
    }

    pub fn intersection(self, other: SiteSet) -> SiteSet {
        SiteSet(self.0 & other.0)
    }

    pub fn difference(self, other: SiteSet) -> SiteSet {
        SiteSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: SiteSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..64).filter(move |i| bits >> i & 1 == 1)
    }
}

impl fmt::Display for SiteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(|s| s.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}
