use hivepoly::census::balanced_triples;
use hivepoly::hive::{count_measures, DensityBound};
use hivepoly::{BoundaryData, Chirality};

/// Densities never need to exceed twice the weight: the bounded and the
/// unbounded searches count the same measures.
#[test]
fn weight_bounds_do_not_lose_measures() {
    for n in 1..=5 {
        for s in balanced_triples(n) {
            let b = BoundaryData::from_sets(&s, Chirality::Plus);
            let unbounded = count_measures(&b, DensityBound::Unbounded);
            assert_eq!(count_measures(&b, DensityBound::Multiple(2)), unbounded, "{s}");
            assert_eq!(count_measures(&b, DensityBound::Weight), unbounded, "{s}");
        }
    }
}

#[test]
fn star_counts_match_plus_counts() {
    for s in balanced_triples(5) {
        let plus = count_measures(&BoundaryData::from_sets(&s, Chirality::Plus), DensityBound::Weight);
        let star = count_measures(&BoundaryData::from_sets(&s, Chirality::Star), DensityBound::Weight);
        assert_eq!(plus, star, "{s}");
    }
}
