//! Covers: antichains of facets of a simplicial complex over measurements.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::ids::InfoSetId;

pub type Facet = BTreeSet<InfoSetId>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("cover contains an empty facet")]
    EmptyFacet,
    #[error("facet {smaller} is contained in facet {larger}; covers must be antichains")]
    NotAntichain { smaller: String, larger: String },
}

/// The facets of a simplicial complex. No facet is empty and no facet
/// contains another.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Cover {
    facets: BTreeSet<Facet>,
}

impl Cover {
    /// Builds a cover from declared facets, rejecting non-maximal ones.
    pub fn new<I>(facets: I) -> Result<Self, CoverError>
    where
        I: IntoIterator<Item = Facet>,
    {
        let facets: BTreeSet<Facet> = facets.into_iter().collect();
        if facets.iter().any(BTreeSet::is_empty) {
            return Err(CoverError::EmptyFacet);
        }
        for a in &facets {
            for b in &facets {
                if a != b && a.is_subset(b) {
                    return Err(CoverError::NotAntichain {
                        smaller: render_facet(a),
                        larger: render_facet(b),
                    });
                }
            }
        }
        Ok(Self { facets })
    }

    /// The facets of the downward closure of `sets`: duplicates, empty sets
    /// and non-maximal sets are dropped.
    pub fn facets_of<I>(sets: I) -> Self
    where
        I: IntoIterator<Item = Facet>,
    {
        let sets: BTreeSet<Facet> = sets.into_iter().filter(|s| !s.is_empty()).collect();
        let facets = sets
            .iter()
            .filter(|s| !sets.iter().any(|t| t != *s && s.is_subset(t)))
            .cloned()
            .collect();
        Self { facets }
    }

    pub fn facets(&self) -> impl Iterator<Item = &Facet> {
        self.facets.iter()
    }

    pub fn len(&self) -> usize {
        self.facets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn contains_facet(&self, facet: &Facet) -> bool {
        self.facets.contains(facet)
    }

    /// All vertices mentioned by some facet.
    pub fn vertices(&self) -> BTreeSet<InfoSetId> {
        self.facets.iter().flatten().cloned().collect()
    }

    /// True if `face` is contained in some facet.
    pub fn contains_face(&self, face: &Facet) -> bool {
        self.facets.iter().any(|f| face.is_subset(f))
    }

    /// Facets of the complex restricted to `vertices`.
    pub fn restrict(&self, vertices: &BTreeSet<InfoSetId>) -> Self {
        Self::facets_of(
            self.facets
                .iter()
                .map(|f| f.intersection(vertices).cloned().collect()),
        )
    }

    /// Renders facets with members ordered by `rank` (then by id), facets
    /// ordered lexicographically under the same ranking.
    pub fn render_ordered<F>(&self, rank: F) -> String
    where
        F: Fn(&InfoSetId) -> usize,
    {
        let mut rows: Vec<Vec<(usize, &InfoSetId)>> = self
            .facets
            .iter()
            .map(|f| {
                let mut v: Vec<_> = f.iter().map(|x| (rank(x), x)).collect();
                v.sort();
                v
            })
            .collect();
        rows.sort();
        rows.iter()
            .map(|row| {
                let names: Vec<&str> = row.iter().map(|(_, x)| x.as_str()).collect();
                format!("{{{}}}", names.join(","))
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl FromIterator<Facet> for Cover {
    fn from_iter<T: IntoIterator<Item = Facet>>(iter: T) -> Self {
        Self::facets_of(iter)
    }
}

pub(crate) fn render_facet(f: &Facet) -> String {
    let names: Vec<&str> = f.iter().map(InfoSetId::as_str).collect();
    format!("{{{}}}", names.join(","))
}

impl fmt::Display for Cover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.facets.iter().map(render_facet).collect();
        f.write_str(&parts.join(" "))
    }
}

impl serde::Serialize for Cover {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_seq(self.facets.iter())
    }
}

impl fmt::Debug for Cover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cover({self})")
    }
}

/// Convenience constructor used by fixtures and tests.
pub fn facet<I, S>(members: I) -> Facet
where
    I: IntoIterator<Item = S>,
    S: Into<InfoSetId>,
{
    members.into_iter().map(Into::into).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn facets_of_drops_non_maximal() {
        let c = Cover::facets_of([facet(["X"]), facet(["Y"]), facet(["Y", "W"]), facet(["Y", "Z"])]);
        assert_eq!(c.len(), 3);
        assert!(c.contains_facet(&facet(["X"])));
        assert!(!c.contains_facet(&facet(["Y"])));
    }

    #[test]
    fn new_rejects_nested_facets() {
        let err = Cover::new([facet(["X"]), facet(["X", "W"])]).unwrap_err();
        assert!(matches!(err, CoverError::NotAntichain { .. }));
        assert_eq!(Cover::new([Facet::new()]).unwrap_err(), CoverError::EmptyFacet);
    }

    #[test]
    fn restriction_is_facets_of_intersections() {
        let c = Cover::new([facet(["X", "W"]), facet(["X", "Z"]), facet(["Y", "W"])]).unwrap();
        let r = c.restrict(&facet(["X", "Y"]));
        assert_eq!(r, Cover::new([facet(["X"]), facet(["Y"])]).unwrap());
    }
}
