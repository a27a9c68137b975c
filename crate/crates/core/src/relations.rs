//! Relations between concepts: subsethood, implication, similarity and
//! betweenness.
//!
//! Relations only look at the domains two (or three) concepts have in
//! common. Where parameters matter, those of the second concept are used.

use crate::concepts::Concept;
use crate::error::{Error, Result};
use crate::geometry::{self, DomainSet, BETWEEN_TOLERANCE};
use crate::measure::{core_measure, MeasureContext};

fn shared(a: &Concept, b: &Concept) -> Result<DomainSet> {
    if a.structure() != b.structure() {
        return Err(Error::SpaceMismatch);
    }
    let domains: DomainSet = a.domains().intersection(b.domains()).cloned().collect();
    if domains.is_empty() {
        return Err(Error::DomainMismatch(
            "concepts share no domains".to_string(),
        ));
    }
    Ok(domains)
}

/// Degree to which `a` is contained in `b`: the size of their
/// intersection relative to the size of `a`, both measured with `b`'s
/// sensitivity and weights on the shared domains.
pub fn subsethood(a: &Concept, b: &Concept) -> Result<f64> {
    let domains = shared(a, b)?;
    let a = a.project(&domains)?;
    let b = b.project(&domains)?;
    let both = a.intersect(&b)?;
    let weights = b.weights().clone();
    let structure = b.structure().clone();
    let numerator = core_measure(
        &MeasureContext::new(structure.clone(), weights.clone(), b.c(), both.mu0())?,
        both.core(),
    )?;
    let denominator = core_measure(
        &MeasureContext::new(structure, weights, b.c(), a.mu0())?,
        a.core(),
    )?;
    if denominator <= 0.0 {
        return Err(Error::Underflow);
    }
    Ok((numerator / denominator).clamp(0.0, 1.0))
}

/// Degree to which `a` implies `b`; the same as [`subsethood`].
pub fn implication(a: &Concept, b: &Concept) -> Result<f64> {
    subsethood(a, b)
}

/// Similarity of the central-region midpoints on the shared domains, under
/// `b`'s sensitivity and weights.
pub fn concept_similarity(a: &Concept, b: &Concept) -> Result<f64> {
    let domains = shared(a, b)?;
    let weights = b.weights().restricted(&domains)?;
    let pa = a.core().midpoint();
    let pb = b.core().midpoint();
    geometry::similarity(&pa, &pb, b.c(), &domains, &weights)
}

/// Is `b` between `a` and `c`? Checked on the midpoints of the central
/// regions, over the domains all three concepts share.
pub fn concept_between(a: &Concept, b: &Concept, c: &Concept) -> Result<bool> {
    let bc = shared(b, c)?;
    let domains: DomainSet = shared(a, b)?.intersection(&bc).cloned().collect();
    if domains.is_empty() {
        return Err(Error::DomainMismatch(
            "concepts share no domains".to_string(),
        ));
    }
    geometry::between(
        &a.core().midpoint(),
        &b.core().midpoint(),
        &c.core().midpoint(),
        a.structure(),
        &domains,
        BETWEEN_TOLERANCE,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{domain_set, DomainStructure, Weights};
    use crate::regions::{Core, Cuboid};
    use crate::space_io::fruit_space;

    fn line_concept(s: &DomainStructure, lo: f64, hi: f64) -> Concept {
        let all = s.all_domains();
        let n = s.n();
        let cuboid = Cuboid::new(vec![lo; n], vec![hi; n], all.clone(), s).unwrap();
        Concept::new(Core::new(vec![cuboid]).unwrap(), 1.0, 2.0, Weights::uniform(s, &all).unwrap()).unwrap()
    }

    #[test]
    fn fruit_session() {
        let space = fruit_space();
        let get = |n| space.concept(n).unwrap();
        assert_eq!(subsethood(get("granny_smith"), get("apple")).unwrap(), 1.0);
        let impl_red = implication(get("apple"), get("red")).unwrap();
        assert!((impl_red - 0.3333333333333332).abs() < 1e-9, "{impl_red}");
        let s = concept_similarity(get("pear"), get("apple")).unwrap();
        assert!((s / 0.007635094218859955 - 1.0).abs() < 1e-12, "{s}");
        let s = concept_similarity(get("pear"), get("lemon")).unwrap();
        assert!((s / 1.8553913626159717e-07 - 1.0).abs() < 1e-12, "{s}");
    }

    #[test]
    fn self_relations() {
        let space = fruit_space();
        for (_, c) in space.concepts() {
            assert!((subsethood(c, c).unwrap() - 1.0).abs() < 1e-12);
            assert_eq!(concept_similarity(c, c).unwrap(), 1.0);
            assert!(concept_between(c, c, c).unwrap());
        }
    }

    #[test]
    fn banana_implies_red_less_than_apple() {
        let space = fruit_space();
        let red = space.concept("red").unwrap();
        let banana = implication(space.concept("banana").unwrap(), red).unwrap();
        let apple = implication(space.concept("apple").unwrap(), red).unwrap();
        assert!((0.0..=1.0).contains(&banana));
        assert!(banana < apple);
    }

    #[test]
    fn similarity_is_asymmetric() {
        let space = fruit_space();
        let (pear, apple) = (space.concept("pear").unwrap(), space.concept("apple").unwrap());
        assert_ne!(
            concept_similarity(pear, apple).unwrap(),
            concept_similarity(apple, pear).unwrap()
        );
    }

    #[test]
    fn betweenness_on_midpoints() {
        let s = DomainStructure::new([("d", vec![0])], vec!["x".into()]).unwrap();
        let a = line_concept(&s, -0.1, 0.1);
        let b = line_concept(&s, 0.4, 0.6);
        let c = line_concept(&s, 0.9, 1.1);
        assert!(concept_between(&a, &b, &c).unwrap());
        assert!(concept_between(&a, &a, &c).unwrap());
        assert!(!concept_between(&a, &c, &b).unwrap());

        let fused = DomainStructure::new([("d", vec![0, 1])], vec!["x".into(), "y".into()]).unwrap();
        let at = |x: f64, y: f64| {
            let all = fused.all_domains();
            let cuboid = Cuboid::new(vec![x, y], vec![x, y], all.clone(), &fused).unwrap();
            Concept::new(Core::new(vec![cuboid]).unwrap(), 1.0, 1.0, Weights::uniform(&fused, &all).unwrap())
                .unwrap()
        };
        assert!(!concept_between(&at(0.0, 0.0), &at(1.0, 3.0), &at(2.0, 4.0)).unwrap());
    }

    #[test]
    fn disjoint_domains_are_rejected() {
        let s = DomainStructure::new([("a", vec![0]), ("b", vec![1])], vec!["x".into(), "y".into()]).unwrap();
        let on = |name: &str| {
            let doms = domain_set([name]);
            let cuboid = Cuboid::on_domains(&[0.0, 0.0], &[1.0, 1.0], doms.clone(), &s).unwrap();
            Concept::new(Core::new(vec![cuboid]).unwrap(), 1.0, 1.0, Weights::uniform(&s, &doms).unwrap()).unwrap()
        };
        let (a, b) = (on("a"), on("b"));
        assert!(subsethood(&a, &b).is_err());
        assert!(concept_similarity(&a, &b).is_err());
        assert!(concept_between(&a, &a, &b).is_err());
    }
}
