//! Availability and normal scoring models.
//!
//! Availability score: sum of the weights of the fields a record has.
//! Normal score: sum over all fields of weight times the field's rating,
//! where a length-valued field rates `1 / ceil(|x - mean| / scale)` and a
//! presence field rates 1 when filled. Absent fields rate 0 in both.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::model::{Field, FieldProfile, OerRecord, RatingFn, ScoreReport};
use crate::profiler::ProfileSet;

/// Rating of a length `x` against a fitted normal.
///
/// Exactly 1 when `x` equals the mean (the ceil would otherwise be 0).
/// A zero-scale fit rates the mean 1 and everything else 0.
pub fn rate_length(x: f64, mean: f64, scale: f64) -> f64 {
    if x == mean {
        return 1.0;
    }
    if scale <= 0.0 {
        return 0.0;
    }
    1.0 / ((x - mean).abs() / scale).ceil()
}

/// Rating of one field of `record` in [0, 1].
pub fn rate_field(record: &OerRecord, profile: &FieldProfile) -> f64 {
    if !record.is_available(profile.field) {
        return 0.0;
    }
    match profile.rating_fn {
        RatingFn::Boolean => 1.0,
        RatingFn::NormalFit { mean, scale, .. } => match record.field_length(profile.field) {
            Some(len) => rate_length(len as f64, mean, scale),
            // A length-valued profile attached to a presence-only field.
            None => 1.0,
        },
    }
}

pub fn availability_score(record: &OerRecord, profiles: &ProfileSet) -> f64 {
    profiles
        .profiles
        .iter()
        .filter(|p| record.is_available(p.field))
        .map(|p| p.normalized_importance_rate)
        .sum()
}

pub fn normal_score(record: &OerRecord, profiles: &ProfileSet) -> f64 {
    profiles
        .profiles
        .iter()
        .map(|p| p.normalized_importance_rate * rate_field(record, p))
        .sum()
}

pub fn score_record(record: &OerRecord, profiles: &ProfileSet) -> ScoreReport {
    let mut per_field_rating = BTreeMap::new();
    let mut per_field_available = BTreeMap::new();
    for field in Field::ALL {
        let profile = profiles.get(field);
        per_field_rating.insert(field, rate_field(record, profile));
        per_field_available.insert(field, record.is_available(field));
    }
    ScoreReport {
        url: record.url.clone(),
        avail_score: availability_score(record, profiles),
        norm_score: normal_score(record, profiles),
        per_field_rating,
        per_field_available,
    }
}

/// One report per record, in input order.
pub fn score_corpus(records: &[OerRecord], profiles: &ProfileSet) -> Vec<ScoreReport> {
    records
        .par_iter()
        .map(|r| score_record(r, profiles))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::QualityControl;
    use proptest::prelude::*;

    fn words(n: usize) -> String {
        vec!["w"; n].join(" ")
    }

    #[test]
    fn rate_length_examples() {
        // |11 - 5.5| / 2.5 = 2.2 -> ceil 3
        assert!((rate_length(11.0, 5.5, 2.5) - 1.0 / 3.0).abs() < 1e-15);
        // |4 - 4.5| / 3.5 ~ 0.143 -> ceil 1
        assert_eq!(rate_length(4.0, 4.5, 3.5), 1.0);
        assert_eq!(rate_length(5.0, 5.0, 2.0), 1.0);
        assert_eq!(rate_length(3.0, 3.0, 0.0), 1.0);
        assert_eq!(rate_length(4.0, 3.0, 0.0), 0.0);
        // boundary: exactly one scale away still rates 1
        assert_eq!(rate_length(8.0, 5.5, 2.5), 1.0);
        assert_eq!(rate_length(8.5, 5.5, 2.5), 0.5);
    }

    #[test]
    fn rate_field_examples() {
        let canned = ProfileSet::canned();
        let mut rec = OerRecord::new("u");
        rec.title = Some(words(11));
        let r = rate_field(&rec, canned.get(Field::Title));
        assert!((r - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(rate_field(&rec, canned.get(Field::Description)), 0.0);
        rec.subjects = vec!["a".into(), "b".into(), "c".into(), "d".into()];
        assert_eq!(rate_field(&rec, canned.get(Field::Subjects)), 1.0);
        assert_eq!(rate_field(&rec, canned.get(Field::Level)), 0.0);
        rec.level = Some("x".into());
        assert_eq!(rate_field(&rec, canned.get(Field::Level)), 1.0);

        let at_mean = FieldProfile {
            field: Field::Title,
            importance_rate: 1.0,
            normalized_importance_rate: 1.0,
            rating_fn: RatingFn::NormalFit {
                mean: 5.0,
                scale: 1.0,
                degenerate: false,
            },
        };
        rec.title = Some(words(5));
        assert_eq!(rate_field(&rec, &at_mean), 1.0);
    }

    fn all_fields(title: usize, desc: usize, subjects: usize) -> OerRecord {
        OerRecord {
            url: "u".into(),
            title: Some(words(title)),
            description: Some(words(desc)),
            subjects: (0..subjects).map(|i| format!("s{i}")).collect(),
            level: Some("beginner".into()),
            languages: vec!["en".into()],
            time_required: Some("PT1H".into()),
            accessibilities: vec!["captions".into()],
            quality_control: QualityControl::WithControl,
            ..Default::default()
        }
    }

    #[test]
    fn availability_examples() {
        let canned = ProfileSet::canned();
        let rec = all_fields(5, 50, 4);
        // 0.17 + 0.17 + 0.145 + 0.165 + 0.155 + 0.098 + 0.099
        assert!((availability_score(&rec, &canned) - 1.002).abs() < 1e-12);
        assert_eq!(availability_score(&OerRecord::new("u"), &canned), 0.0);
        let mut partial = OerRecord::new("u");
        partial.title = Some("t".into());
        partial.description = Some("d".into());
        partial.level = Some("l".into());
        assert!((availability_score(&partial, &canned) - 0.505).abs() < 1e-12);
    }

    #[test]
    fn normal_score_examples() {
        let canned = ProfileSet::canned();
        assert_eq!(normal_score(&OerRecord::new("u"), &canned), 0.0);
        let mut rec = OerRecord::new("u");
        rec.title = Some(words(11));
        assert!((normal_score(&rec, &canned) - 0.17 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn everything_at_the_mean_scores_like_availability() {
        let mut set = ProfileSet::canned();
        for p in &mut set.profiles {
            if let RatingFn::NormalFit { mean, .. } = &mut p.rating_fn {
                *mean = mean.round();
            }
        }
        let rec = all_fields(6, 55, 5);
        assert_eq!(normal_score(&rec, &set), availability_score(&rec, &set));
    }

    #[test]
    fn score_corpus_keeps_order() {
        let canned = ProfileSet::canned();
        assert!(score_corpus(&[], &canned).is_empty());
        let recs = [
            all_fields(3, 10, 1),
            OerRecord::new("empty"),
            OerRecord {
                url: "t".into(),
                title: Some("a b".into()),
                ..Default::default()
            },
        ];
        let reports = score_corpus(&recs, &canned);
        assert_eq!(reports.len(), 3);
        assert_eq!(reports[1].url, "empty");
        assert_eq!(reports[1].avail_score, 0.0);
        for r in &reports {
            assert_eq!(r.per_field_rating.len(), 7);
            assert_eq!(r.per_field_available.len(), 7);
            assert!(r.norm_score <= r.avail_score);
        }
        assert!(reports[2].per_field_available[&Field::Title]);
        assert_eq!(reports[2].per_field_rating[&Field::Title], 0.5);
    }

    proptest! {
        #[test]
        fn rating_is_one_within_one_scale(x in 0u32..400, mean in 0.0f64..100.0, scale in 0.01f64..50.0) {
            let x = x as f64;
            let r = rate_length(x, mean, scale);
            prop_assert!(r > 0.0 && r <= 1.0);
            prop_assert_eq!(r == 1.0, (x - mean).abs() <= scale);
        }

        #[test]
        fn rating_non_increasing_in_distance(a in 0.0f64..200.0, b in 0.0f64..200.0, scale in 0.01f64..50.0) {
            let (near, far) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(rate_length(10.0 + near, 10.0, scale) >= rate_length(10.0 + far, 10.0, scale));
        }
    }
}
